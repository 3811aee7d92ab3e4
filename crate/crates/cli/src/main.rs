//! `sqdiscord`: correlation reports, Werner and Bloch sweeps, and the
//! verification harness for two-qubit states.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sqdiscord::corr::{self, CorrelationReport, Entropies, OptimizationSettings};
use sqdiscord::measure::{self, Strength};
use sqdiscord::states::{self, WernerParams};
use sqdiscord::verify;

use input::StateSpec;

const MONOTONE_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "sqdiscord", version, about = "Super quantum discord of two-qubit states under weak measurements")]
struct Cli {
    /// Basis-search grid as NTxNP (θ points × φ points)
    #[arg(long, global = true, default_value = "64x128", value_parser = input::parse_grid)]
    grid: (usize, usize),

    /// Refinement stopping tolerance in bits
    #[arg(long, global = true, default_value_t = 1e-10)]
    refine_tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every correlation measure for one state
    Compute(ComputeArgs),
    /// Sweep the Werner parameter z and write CSV
    SweepWerner(SweepWernerArgs),
    /// Fixed-basis weak discord surface over θ and x for a Bloch-form state
    SweepBloch(SweepBlochArgs),
    /// Run the theorem and identity checks on seeded random states
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct ComputeArgs {
    /// pure:λ0, werner:z, bloch:a1,a2,a3,b1,b2,b3,c1,c2,c3, maximally-entangled, or a JSON file
    #[arg(long)]
    state: String,

    /// Measurement strength, a non-negative number or `inf`
    #[arg(long = "x", default_value = "0")]
    x: Strength,

    /// Fixed measurement basis θ,φ in radians
    #[arg(long, value_parser = input::parse_basis, requires = "no_optimize", allow_hyphen_values = true)]
    basis: Option<(f64, f64)>,

    /// Evaluate at --basis instead of minimizing
    #[arg(long, requires = "basis")]
    no_optimize: bool,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct SweepWernerArgs {
    #[arg(long = "x", default_value = "0.2")]
    x: Strength,

    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    z_min: f64,

    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    z_max: f64,

    /// Number of z values, endpoints included
    #[arg(long, default_value_t = 101)]
    steps: usize,

    /// Output CSV path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepBlochArgs {
    /// bloch:a1,a2,a3,b1,b2,b3,c1,c2,c3
    #[arg(long)]
    state: String,

    /// Fixed azimuthal angle of the basis
    #[arg(long, default_value_t = 1.57, allow_hyphen_values = true)]
    phi: f64,

    /// Number of θ values over [0, π]
    #[arg(long, default_value_t = 33)]
    theta_steps: usize,

    #[arg(long, default_value_t = 5.0)]
    x_max: f64,

    /// Number of x values over [0, x_max]
    #[arg(long, default_value_t = 51)]
    x_steps: usize,

    /// Output CSV path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Full-rank ensemble size; the other families scale from it
    #[arg(long, default_value_t = 200)]
    trials: usize,

    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Write failures as CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

/// An error carrying its process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input_error(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

fn consistency_error(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 3, error: error.into() }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = input::settings(cli.grid, cli.refine_tol)
        .map_err(input_error)
        .and_then(|settings| match cli.command {
            Command::Compute(args) => compute(args, &settings),
            Command::SweepWerner(args) => sweep_werner(args, &settings),
            Command::SweepBloch(args) => sweep_bloch(args, &settings),
            Command::Verify(args) => run_verify(args, &settings),
        });
    match outcome {
        Ok(code) => code,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}

fn compute(args: ComputeArgs, settings: &OptimizationSettings) -> CmdResult {
    let rho = StateSpec::parse(&args.state)
        .and_then(|s| s.load())
        .map_err(input_error)?;
    let report = match args.basis {
        Some((theta, phi)) => {
            let basis = measure::qubit_basis(theta, phi).map_err(input_error)?;
            corr::fixed_basis_report(&rho, args.x, &basis)
        }
        None => corr::correlation_report(&rho, args.x, settings),
    }
    .map_err(consistency_error)?;

    match args.format {
        Format::Text => print_text(&args.state, &report),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(consistency_error)?
        ),
    }
    report.check_invariants().map_err(consistency_error)?;
    Ok(ExitCode::SUCCESS)
}

fn print_text(state: &str, r: &CorrelationReport) {
    let basis = |(t, p): (f64, f64)| format!("theta={} phi={}", output::sig(t), output::sig(p));
    let rows = [
        ("state", state.to_owned()),
        ("x", output::strength(r.strength_x)),
        ("entropy_a", output::sig(r.entropy_a)),
        ("entropy_b", output::sig(r.entropy_b)),
        ("entropy_ab", output::sig(r.entropy_ab)),
        ("conditional_entropy", output::sig(r.conditional_entropy)),
        ("mutual_information", output::sig(r.mutual_information)),
        ("classical_correlation", output::sig(r.classical_correlation)),
        ("discord", output::sig(r.discord)),
        ("super_discord", output::sig(r.super_discord)),
        ("strong_conditional_entropy", output::sig(r.strong_conditional_entropy)),
        ("weak_conditional_entropy", output::sig(r.weak_conditional_entropy)),
        ("optimal_basis_strong", basis(r.optimal_basis_strong)),
        ("optimal_basis_weak", basis(r.optimal_basis_weak)),
        ("optimized", r.optimized.to_string()),
    ];
    for (k, v) in rows {
        println!("{k:<28}{v}");
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
}

fn sweep_werner(args: SweepWernerArgs, settings: &OptimizationSettings) -> CmdResult {
    let domain = (WernerParams::MIN_Z - 1e-12)..=(WernerParams::MAX_Z + 1e-12);
    if !(domain.contains(&args.z_min) && domain.contains(&args.z_max) && args.z_min <= args.z_max) {
        return Err(input_error(anyhow!(
            "z range [{}, {}] must lie within [-1/3, 1]",
            args.z_min,
            args.z_max
        )));
    }
    if args.steps < 2 {
        return Err(input_error(anyhow!("--steps must be at least 2")));
    }
    let mut out = output::csv_writer(output::sink(args.out.as_deref()).map_err(input_error)?);
    let write_err = |e: csv::Error| input_error(anyhow::Error::from(e).context("writing CSV"));
    out.write_record([
        "z",
        "x",
        "mutual_information",
        "classical_correlation",
        "discord",
        "super_discord",
    ])
    .map_err(write_err)?;
    for z in linspace(args.z_min, args.z_max, args.steps) {
        let report = WernerParams::new(z)
            .and_then(states::werner)
            .and_then(|rho| corr::correlation_report(&rho, args.x, settings))
            .and_then(|r| r.check_invariants().map(|()| r))
            .with_context(|| format!("at z = {z}"))
            .map_err(consistency_error)?;
        out.write_record([
            output::sig(z),
            output::strength(args.x),
            output::sig(report.mutual_information),
            output::sig(report.classical_correlation),
            output::sig(report.discord),
            output::sig(report.super_discord),
        ])
        .map_err(write_err)?;
    }
    out.flush().map_err(input_error)?;
    Ok(ExitCode::SUCCESS)
}

fn sweep_bloch(args: SweepBlochArgs, settings: &OptimizationSettings) -> CmdResult {
    let spec = StateSpec::parse(&args.state).map_err(input_error)?;
    spec.bloch_params().map_err(input_error)?;
    let rho = spec.load().map_err(input_error)?;
    if args.theta_steps < 2 || args.x_steps < 2 {
        return Err(input_error(anyhow!("--theta-steps and --x-steps must be at least 2")));
    }
    let x_max = Strength::new(args.x_max)
        .ok()
        .filter(|x| matches!(x, Strength::Finite(v) if *v > 0.0))
        .ok_or_else(|| input_error(anyhow!("--x-max must be a positive finite number")))?;
    if !args.phi.is_finite() {
        return Err(input_error(anyhow!("--phi must be finite")));
    }

    let conditional = Entropies::of(&rho).map_err(consistency_error)?.conditional();
    let mut out = output::csv_writer(output::sink(args.out.as_deref()).map_err(input_error)?);
    let write_err = |e: csv::Error| input_error(anyhow::Error::from(e).context("writing CSV"));
    out.write_record(["theta", "x", "weak_conditional_entropy", "weak_discord_fixed_basis"])
        .map_err(write_err)?;
    let mut violation = None;
    for theta in linspace(0.0, std::f64::consts::PI, args.theta_steps) {
        let basis = measure::qubit_basis(theta, args.phi).map_err(consistency_error)?;
        let mut previous: Option<f64> = None;
        for x in linspace(0.0, x_max.value(), args.x_steps) {
            let s_w = corr::conditional_entropy_weak(&rho, &basis, Strength::Finite(x)).map_err(consistency_error)?;
            let discord = s_w - conditional;
            if let Some(prev) = previous.filter(|&p| discord > p + MONOTONE_TOL) {
                violation.get_or_insert(format!(
                    "fixed-basis weak discord increases at theta = {theta}, x = {x}: {prev} -> {discord}"
                ));
            }
            previous = Some(discord);
            out.write_record([output::sig(theta), output::sig(x), output::sig(s_w), output::sig(discord)])
                .map_err(write_err)?;
        }
    }
    out.flush().map_err(input_error)?;
    if let Some(msg) = violation {
        return Err(consistency_error(anyhow!(msg)));
    }

    let minimized = corr::super_quantum_discord(&rho, x_max, settings).map_err(consistency_error)?;
    eprintln!("super discord minimized over bases at x = {x_max}: {}", output::sig(minimized));
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: VerifyArgs, settings: &OptimizationSettings) -> CmdResult {
    if args.trials == 0 {
        return Err(input_error(anyhow!("--trials must be at least 1")));
    }
    let mut out = args
        .out
        .as_deref()
        .map(|p| output::sink(Some(p)).map(output::csv_writer))
        .transpose()
        .map_err(input_error)?;
    let families = verify::run_all(args.trials, args.seed, settings).map_err(consistency_error)?;

    let mut total = verify::VerificationReport::new();
    for family in families {
        println!("{}: {}", family.name, family.report);
        total.merge(family.report);
    }
    println!("total: {total}");
    println!("{}", if total.passed() { "PASS" } else { "FAIL" });

    if let Some(out) = out.as_mut() {
        let write_err = |e: csv::Error| input_error(anyhow::Error::from(e).context("writing report"));
        out.write_record(["check", "state_seed", "parameters", "observed", "bound"])
            .map_err(write_err)?;
        for f in &total.failures {
            out.write_record([
                f.check.clone(),
                f.state_seed.map(|s| s.to_string()).unwrap_or_default(),
                f.parameters.clone(),
                output::sig(f.observed),
                output::sig(f.bound),
            ])
            .map_err(write_err)?;
        }
        out.flush().map_err(input_error)?;
    }
    Ok(if total.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
