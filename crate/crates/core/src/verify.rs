//! Verification harness: the discord ordering `D_w ≥ D`, monotonicity of
//! `D_w` in the measurement strength, the derivative identity behind it, and
//! the algebra of the weak measurement operators.
//!
//! Every check is phrased as `observed ≤ bound`; a report keeps the largest
//! `observed − bound` seen and one [`Failure`] per violated check.

use std::f64::consts::{LN_2, TAU};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corr::{self, Entropies, OptimizationSettings};
use crate::error::{Error, Result};
use crate::measure::{self, ProjectiveBasis, Strength};
use crate::qmat::{self, ComplexMatrix};
use crate::states::{self, DensityMatrix, RandomKind};

pub const THEOREM1_TOL: f64 = 1e-7;
pub const ZERO_STRENGTH_TOL: f64 = 1e-8;
pub const STRONG_LIMIT_TOL: f64 = 1e-7;
pub const FIXED_BASIS_MONOTONE_TOL: f64 = 1e-9;
pub const MINIMIZED_MONOTONE_TOL: f64 = 1e-6;
pub const R_AGREEMENT_TOL: f64 = 1e-9;
pub const R_POSITIVITY_TOL: f64 = 1e-9;
pub const DERIVATIVE_TOL: f64 = 1e-4;
pub const DERIVATIVE_STEP: f64 = 1e-5;
pub const ALGEBRA_TOL: f64 = 1e-12;

/// One violated check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    pub state_seed: Option<u64>,
    pub parameters: String,
    pub observed: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks_run: usize,
    pub failures: Vec<Failure>,
    /// Largest `observed − bound`; `-inf` before any check runs.
    pub max_violation: f64,
}

impl Default for VerificationReport {
    fn default() -> Self {
        Self {
            checks_run: 0,
            failures: Vec::new(),
            max_violation: f64::NEG_INFINITY,
        }
    }
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records the check `observed ≤ bound`. NaN observations fail.
    pub fn record(
        &mut self,
        check: &str,
        state_seed: Option<u64>,
        parameters: impl Into<String>,
        observed: f64,
        bound: f64,
    ) {
        self.checks_run += 1;
        let violation = if observed.is_nan() {
            f64::INFINITY
        } else {
            observed - bound
        };
        self.max_violation = self.max_violation.max(violation);
        if violation > 0.0 {
            self.failures.push(Failure {
                check: check.to_owned(),
                state_seed,
                parameters: parameters.into(),
                observed,
                bound,
            });
        }
    }

    /// Records a check that could not be evaluated.
    pub fn record_error(&mut self, check: &str, state_seed: Option<u64>, err: &Error) {
        self.record(check, state_seed, err.to_string(), f64::NAN, 0.0);
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks_run += other.checks_run;
        self.failures.extend(other.failures);
        self.max_violation = self.max_violation.max(other.max_violation);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} checks, {} failures, max violation {:e}",
            self.checks_run,
            self.failures.len(),
            self.max_violation
        )
    }
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

/// Uniformly random basis on the Bloch sphere.
fn random_basis<R: Rng>(rng: &mut R) -> Result<ProjectiveBasis> {
    let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let phi = TAU * rng.gen::<f64>();
    measure::qubit_basis(theta, phi)
}

/// `D_w ≥ D` (and, for pure states at `x ≤ 1`, `D_w ≥` entanglement
/// entropy) over `trials` seeded random states.
pub fn check_theorem1(
    trials: usize,
    seed: u64,
    xs: &[Strength],
    kind: RandomKind,
    settings: &OptimizationSettings,
) -> VerificationReport {
    let mut report = VerificationReport::new();
    for trial in 0..trials {
        let state_seed = trial_seed(seed, trial);
        let rho = states::random_density_seeded(state_seed, kind);
        if let Err(err) = theorem1_state(&rho, Some(state_seed), xs, kind, settings, &mut report) {
            report.record_error("ordering", Some(state_seed), &err);
        }
    }
    report
}

fn theorem1_state(
    rho: &DensityMatrix,
    state_seed: Option<u64>,
    xs: &[Strength],
    kind: RandomKind,
    settings: &OptimizationSettings,
    report: &mut VerificationReport,
) -> Result<()> {
    let discord = corr::quantum_discord(rho, settings)?;
    let entanglement = match kind {
        RandomKind::Pure => Some(corr::entanglement_entropy_pure(rho)?),
        RandomKind::FullRank => None,
    };
    for &x in xs {
        let super_discord = corr::super_quantum_discord(rho, x, settings)?;
        report.record(
            "ordering: D_w >= D",
            state_seed,
            format!("x={x} D={discord} D_w={super_discord}"),
            discord - super_discord,
            THEOREM1_TOL,
        );
        if let Some(e) = entanglement.filter(|_| x.value() <= 1.0) {
            report.record(
                "ordering: D_w >= entanglement entropy (pure)",
                state_seed,
                format!("x={x} E={e} D_w={super_discord}"),
                e - super_discord,
                THEOREM1_TOL,
            );
        }
    }
    Ok(())
}

/// `D_w(0) = I` and `D_w(∞) = D` over `trials` seeded random states.
pub fn check_endpoints(
    trials: usize,
    seed: u64,
    kind: RandomKind,
    settings: &OptimizationSettings,
) -> VerificationReport {
    let mut report = VerificationReport::new();
    for trial in 0..trials {
        let state_seed = trial_seed(seed, trial);
        let rho = states::random_density_seeded(state_seed, kind);
        if let Err(err) = endpoints_state(&rho, Some(state_seed), settings, &mut report) {
            report.record_error("endpoints", Some(state_seed), &err);
        }
    }
    report
}

pub fn endpoints_state(
    rho: &DensityMatrix,
    state_seed: Option<u64>,
    settings: &OptimizationSettings,
    report: &mut VerificationReport,
) -> Result<()> {
    let mutual = corr::mutual_information(rho)?;
    let discord = corr::quantum_discord(rho, settings)?;
    let at_zero = corr::super_quantum_discord(rho, Strength::zero(), settings)?;
    let at_inf = corr::super_quantum_discord(rho, Strength::Strong, settings)?;
    report.record(
        "endpoint: D_w(0) = I",
        state_seed,
        format!("I={mutual} D_w(0)={at_zero}"),
        (at_zero - mutual).abs(),
        ZERO_STRENGTH_TOL,
    );
    report.record(
        "endpoint: D_w(inf) = D",
        state_seed,
        format!("D={discord} D_w(inf)={at_inf}"),
        (at_inf - discord).abs(),
        STRONG_LIMIT_TOL,
    );
    Ok(())
}

fn validate_grid(x_grid: &[f64]) -> Result<()> {
    if x_grid.first() != Some(&0.0) {
        return Err(Error::OutOfRange {
            name: "x_grid[0]",
            value: x_grid.first().copied().unwrap_or(f64::NAN),
            range: "{0}",
        });
    }
    if let Some(w) = x_grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::OutOfRange {
            name: "x_grid step",
            value: w[1],
            range: "strictly increasing values",
        });
    }
    Ok(())
}

/// Monotonicity of `D_w` along `x_grid` over `trials` seeded full-rank
/// states.
pub fn check_theorem2(
    trials: usize,
    seed: u64,
    x_grid: &[f64],
    settings: &OptimizationSettings,
) -> Result<VerificationReport> {
    validate_grid(x_grid)?;
    let mut report = VerificationReport::new();
    for trial in 0..trials {
        let state_seed = trial_seed(seed, trial);
        let rho = states::random_density_seeded(state_seed, RandomKind::FullRank);
        if let Err(err) = theorem2_state(&rho, Some(state_seed), x_grid, settings, &mut report) {
            report.record_error("monotone", Some(state_seed), &err);
        }
    }
    Ok(report)
}

/// Monotonicity checks for one state:
/// (a) at a fixed basis, the one minimizing the strong conditional entropy,
/// `S_w(x) − S(A|B)` must not increase by more than 1e-9 between grid points;
/// (b) the minimized `D_w` must not increase by more than 1e-6.
pub fn theorem2_state(
    rho: &DensityMatrix,
    state_seed: Option<u64>,
    x_grid: &[f64],
    settings: &OptimizationSettings,
    report: &mut VerificationReport,
) -> Result<()> {
    validate_grid(x_grid)?;
    let conditional = Entropies::of(rho)?.conditional();
    let best = corr::minimize_over_bases(rho, corr::Objective::Strong, settings)?;
    let basis = measure::qubit_basis(best.theta, best.phi)?;

    let mut fixed = Vec::with_capacity(x_grid.len());
    let mut minimized = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let x = Strength::new(x)?;
        fixed.push(corr::conditional_entropy_weak(rho, &basis, x)? - conditional);
        minimized.push(corr::super_quantum_discord(rho, x, settings)?);
    }
    for k in 1..x_grid.len() {
        report.record(
            "monotone: fixed-basis D_w non-increasing",
            state_seed,
            format!("x {} -> {}", x_grid[k - 1], x_grid[k]),
            fixed[k] - fixed[k - 1],
            FIXED_BASIS_MONOTONE_TOL,
        );
        report.record(
            "monotone: minimized D_w non-increasing",
            state_seed,
            format!("x {} -> {}", x_grid[k - 1], x_grid[k]),
            minimized[k] - minimized[k - 1],
            MINIMIZED_MONOTONE_TOL,
        );
    }
    Ok(())
}

/// Quantities from the monotonicity argument at one fixed basis and
/// strength. All logarithms are natural.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremTwoWitness {
    /// Strong-branch probabilities `p_ψ`, `p_ψ̄`.
    pub p_psi: f64,
    pub p_psi_bar: f64,
    /// Weak-branch probabilities `p(x)`, `p(−x)`.
    pub p_plus: f64,
    pub p_minus: f64,
    /// `q(±x) = a²(±x) p_ψ / p(±x)`.
    pub q_plus: f64,
    pub q_minus: f64,
    /// `u = q(−x) − q(x)`.
    pub u: f64,
    pub k: f64,
    pub l: f64,
    pub r: f64,
    pub s: f64,
    /// `R` from the trace expression with matrix logarithms.
    pub r_trace: f64,
    /// `R` from the weighted relative entropies.
    pub r_relative: f64,
}

impl TheoremTwoWitness {
    /// `dD_w/dx = −R / (2 cosh² x)` at this strength, in nats.
    pub fn predicted_derivative(&self, x: f64) -> f64 {
        -self.r_trace / (2.0 * x.cosh().powi(2))
    }

    /// `p_ψ p_ψ̄ tanh x / (p(x) p(−x))`, the closed form of `u`.
    pub fn u_closed_form(&self, x: f64) -> f64 {
        self.p_psi * self.p_psi_bar * x.tanh() / (self.p_plus * self.p_minus)
    }
}

fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(a.matmul(b)?.trace().re)
}

/// `S(ρ‖σ) = Tr ρ (ln ρ − ln σ)` given both logarithms.
fn relative_entropy(rho: &ComplexMatrix, ln_rho: &ComplexMatrix, ln_sigma: &ComplexMatrix) -> Result<f64> {
    trace_product(rho, &ln_rho.sub(ln_sigma)?)
}

/// Computes `R(x)` at a fixed basis two ways, directly from
/// `Tr{p_ψ ρ_{A|ψ}[ln ρ₋ − ln ρ₊] + p_ψ̄ ρ_{A|ψ̄}[ln ρ₊ − ln ρ₋]}` and from
/// `[p_ψ k + p_ψ̄ r] S(ρ₊‖ρ₋) + [p_ψ l + p_ψ̄ s] S(ρ₋‖ρ₊)`, where `ρ±` are
/// the conditional states of `A` after `P(±x)`.
pub fn compute_r(rho: &DensityMatrix, basis: &ProjectiveBasis, x: f64) -> Result<TheoremTwoWitness> {
    if !(x > 0.0 && x < measure::STRONG_THRESHOLD) {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
            range: "(0, 20)",
        });
    }
    let [strong_psi, strong_bar] = measure::projective_branches(rho, basis)?;
    let (p_psi, p_psi_bar) = (strong_psi.probability, strong_bar.probability);
    for p in [p_psi, p_psi_bar] {
        if p <= 1e-10 {
            return Err(Error::DegenerateBranch { probability: p });
        }
    }
    let (rho_psi, rho_bar) = match (strong_psi.conditional_state, strong_bar.conditional_state) {
        (Some(a), Some(b)) => (*a.matrix(), *b.matrix()),
        _ => unreachable!("non-degenerate branches carry states"),
    };

    let pair = measure::weak_operators(basis, Strength::new(x)?);
    let [plus, minus] = measure::weak_branches(rho, &pair)?;
    let (rho_plus, rho_minus) = match (plus.conditional_state, minus.conditional_state) {
        (Some(a), Some(b)) => (*a.matrix(), *b.matrix()),
        (None, _) => return Err(Error::DegenerateBranch { probability: plus.probability }),
        (_, None) => return Err(Error::DegenerateBranch { probability: minus.probability }),
    };
    let ln_plus = qmat::hermitian_log_2x2(&rho_plus)?;
    let ln_minus = qmat::hermitian_log_2x2(&rho_minus)?;

    let weighted = rho_psi.scale_real(p_psi).sub(&rho_bar.scale_real(p_psi_bar))?;
    let r_trace = trace_product(&weighted, &ln_minus.sub(&ln_plus)?)?;

    let q_plus = measure::weak_coefficient_sq(x) * p_psi / plus.probability;
    let q_minus = measure::weak_coefficient_sq(-x) * p_psi / minus.probability;
    let u = q_minus - q_plus;
    let (k, l, r, s) = ((1.0 - q_minus) / u, (1.0 - q_plus) / u, q_minus / u, q_plus / u);
    let rel_plus_minus = relative_entropy(&rho_plus, &ln_plus, &ln_minus)?;
    let rel_minus_plus = relative_entropy(&rho_minus, &ln_minus, &ln_plus)?;
    let r_relative = (p_psi * k + p_psi_bar * r) * rel_plus_minus + (p_psi * l + p_psi_bar * s) * rel_minus_plus;

    Ok(TheoremTwoWitness {
        p_psi,
        p_psi_bar,
        p_plus: plus.probability,
        p_minus: minus.probability,
        q_plus,
        q_minus,
        u,
        k,
        l,
        r,
        s,
        r_trace,
        r_relative,
    })
}

/// Fixed-basis super discord `S_w(x) − S(A|B)` in nats.
pub fn fixed_basis_weak_discord_nats(rho: &DensityMatrix, basis: &ProjectiveBasis, x: f64) -> Result<f64> {
    let conditional = Entropies::of(rho)?.conditional();
    Ok((corr::conditional_entropy_weak(rho, basis, Strength::new(x)?)? - conditional) * LN_2)
}

/// Central finite difference of the fixed-basis super discord (nats).
pub fn finite_difference_derivative(rho: &DensityMatrix, basis: &ProjectiveBasis, x: f64, step: f64) -> Result<f64> {
    let hi = fixed_basis_weak_discord_nats(rho, basis, x + step)?;
    let lo = fixed_basis_weak_discord_nats(rho, basis, x - step)?;
    Ok((hi - lo) / (2.0 * step))
}

/// Records every derivative-identity check for one (state, basis, x).
pub fn derivative_identity_state(
    rho: &DensityMatrix,
    basis: &ProjectiveBasis,
    x: f64,
    state_seed: Option<u64>,
    report: &mut VerificationReport,
) -> Result<()> {
    let params = format!("theta={} phi={} x={x}", basis.theta(), basis.phi());
    let w = compute_r(rho, basis, x)?;
    report.record(
        "R: trace form = relative-entropy form",
        state_seed,
        params.clone(),
        (w.r_trace - w.r_relative).abs(),
        R_AGREEMENT_TOL,
    );
    report.record("R >= 0", state_seed, params.clone(), -w.r_trace, R_POSITIVITY_TOL);
    report.record("u >= 0", state_seed, params.clone(), -w.u, 0.0);
    for (name, v) in [("k >= 0", w.k), ("l >= 0", w.l), ("r >= 0", w.r), ("s >= 0", w.s)] {
        report.record(name, state_seed, params.clone(), -v, 0.0);
    }
    report.record(
        "u closed form",
        state_seed,
        params.clone(),
        (w.u - w.u_closed_form(x)).abs() / w.u.abs().max(1.0),
        R_AGREEMENT_TOL,
    );
    let fd = finite_difference_derivative(rho, basis, x, DERIVATIVE_STEP)?;
    report.record(
        "dD_w/dx = -R/(2cosh^2 x)",
        state_seed,
        format!("{params} fd={fd} predicted={}", w.predicted_derivative(x)),
        (fd - w.predicted_derivative(x)).abs(),
        DERIVATIVE_TOL,
    );
    Ok(())
}

/// Derivative identity and `R` checks on `trials` random (state, basis, x)
/// triples with `x` uniform in `[0.05, 3]`.
pub fn check_derivative_identity(trials: usize, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new();
    for trial in 0..trials {
        let state_seed = trial_seed(seed, trial);
        let mut rng = ChaCha8Rng::seed_from_u64(state_seed);
        let rho = states::random_density(&mut rng, RandomKind::FullRank);
        let outcome = random_basis(&mut rng).and_then(|basis| {
            let x = 0.05 + 2.95 * rng.gen::<f64>();
            derivative_identity_state(&rho, &basis, x, Some(state_seed), &mut report)?;
            // Evenness in x makes the slope vanish at the origin.
            let near_zero = 1e-6;
            let fd = finite_difference_derivative(&rho, &basis, near_zero, near_zero / 2.0)?;
            report.record(
                "dD_w/dx ~ 0 near x = 0",
                Some(state_seed),
                format!("theta={} phi={} x={near_zero}", basis.theta(), basis.phi()),
                fd.abs(),
                1e-3,
            );
            Ok(())
        });
        if let Err(err) = outcome {
            report.record_error("derivative identity", Some(state_seed), &err);
        }
    }
    report
}

/// The four weak-operator properties for one basis and pair of strengths:
/// `P(0) = I/√2`, completeness, `[P(x), P(−x)] = 0`, and
/// `P(x)P(y) = c·P(x+y)` with `c` recovered from the `Π_ψ` coefficient.
/// On the projector path the operators must equal `Π_ψ̄`, `Π_ψ` exactly and
/// the proportionality check is skipped.
pub fn weak_operator_algebra_check(basis: &ProjectiveBasis, x: Strength, y: Strength) -> VerificationReport {
    let mut report = VerificationReport::new();
    let params = format!("theta={} phi={} x={x} y={y}", basis.theta(), basis.phi());
    let id = ComplexMatrix::identity(2).expect("2x2");
    let zero = ComplexMatrix::zeros(2).expect("2x2");

    let p0 = measure::weak_operators(basis, Strength::zero());
    let scaled = id.scale_real(std::f64::consts::FRAC_1_SQRT_2);
    report.record(
        "P(0) = I/sqrt2",
        None,
        params.clone(),
        p0.plus().max_abs_diff(&scaled).max(p0.minus().max_abs_diff(&scaled)),
        ALGEBRA_TOL,
    );

    for s in [x, y] {
        let pair = measure::weak_operators(basis, s);
        let (p, m) = (pair.plus(), pair.minus());
        let completeness = p
            .adjoint()
            .matmul(p)
            .and_then(|a| a.add(&m.adjoint().matmul(m)?))
            .map(|sum| sum.max_abs_diff(&id))
            .unwrap_or(f64::NAN);
        report.record("completeness", None, params.clone(), completeness, ALGEBRA_TOL);
        let commutator = p
            .matmul(m)
            .and_then(|a| a.sub(&m.matmul(p)?))
            .map(|c| c.max_abs_diff(&zero))
            .unwrap_or(f64::NAN);
        report.record("[P(x), P(-x)] = 0", None, params.clone(), commutator, ALGEBRA_TOL);
        if s.is_projective() {
            let exact = p.max_abs_diff(basis.pi1()).max(m.max_abs_diff(basis.pi0()));
            report.record("strong limit: projectors", None, params.clone(), exact, 0.0);
        }
    }

    let sum = Strength::new(x.value() + y.value()).expect("sum of non-negative strengths");
    if !sum.is_projective() && !x.is_projective() && !y.is_projective() {
        let px = measure::weak_operators(basis, x);
        let py = measure::weak_operators(basis, y);
        let pxy = measure::weak_operators(basis, sum);
        let defect = px
            .plus()
            .matmul(py.plus())
            .and_then(|prod| {
                let c = prod.matmul(basis.pi0())?.trace() / pxy.plus().matmul(basis.pi0())?.trace();
                Ok(prod.max_abs_diff(&pxy.plus().scale(c)))
            })
            .unwrap_or(f64::NAN);
        report.record("P(x)P(y) ∝ P(x+y)", None, params, defect, ALGEBRA_TOL);
    }
    report
}

/// [`weak_operator_algebra_check`] on `trials` random bases with `x, y`
/// uniform in `[0, 3]`.
pub fn check_operator_algebra(trials: usize, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, trial));
        let x = Strength::new(3.0 * rng.gen::<f64>()).expect("non-negative");
        let y = Strength::new(3.0 * rng.gen::<f64>()).expect("non-negative");
        match random_basis(&mut rng) {
            Ok(basis) => report.merge(weak_operator_algebra_check(&basis, x, y)),
            Err(err) => report.record_error("operator algebra", None, &err),
        }
    }
    report
}

/// Sizes of the sub-ensembles run by [`run_all`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSizes {
    pub full_rank: usize,
    pub pure: usize,
    pub monotonicity: usize,
    pub derivative: usize,
    pub algebra: usize,
}

impl EnsembleSizes {
    /// `trials` full-rank states for the ordering and endpoint checks, a
    /// quarter as many pure states, monotonicity states and operator triples,
    /// and half as many derivative triples.
    pub fn from_trials(trials: usize) -> Self {
        let quarter = trials.div_ceil(4);
        Self {
            full_rank: trials,
            pure: quarter,
            monotonicity: quarter,
            derivative: trials.div_ceil(2),
            algebra: quarter,
        }
    }
}

/// Strengths used by the ordering checks.
pub fn default_strengths() -> Vec<Strength> {
    [0.1, 0.5, 1.0, 2.0].iter().map(|&x| Strength::Finite(x)).collect()
}

/// `0, 0.25, …, 5`.
pub fn default_x_grid() -> Vec<f64> {
    (0..=20).map(|i| 0.25 * i as f64).collect()
}

/// One named family of checks.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub name: String,
    pub report: VerificationReport,
}

/// Runs every check family with a common seed, in a fixed order.
pub fn run_all(trials: usize, seed: u64, settings: &OptimizationSettings) -> Result<Vec<FamilyReport>> {
    let sizes = EnsembleSizes::from_trials(trials);
    let xs = default_strengths();
    let family = |name: String, report| FamilyReport { name, report };
    Ok(vec![
        family(
            format!("ordering D_w >= D, {} full-rank states", sizes.full_rank),
            check_theorem1(sizes.full_rank, seed, &xs, RandomKind::FullRank, settings),
        ),
        family(
            format!("ordering D_w >= D, {} pure states", sizes.pure),
            check_theorem1(sizes.pure, seed, &xs, RandomKind::Pure, settings),
        ),
        family(
            format!("endpoints, {} full-rank states", sizes.full_rank),
            check_endpoints(sizes.full_rank, seed, RandomKind::FullRank, settings),
        ),
        family(
            format!("endpoints, {} pure states", sizes.pure),
            check_endpoints(sizes.pure, seed, RandomKind::Pure, settings),
        ),
        family(
            format!("monotone in x, {} states", sizes.monotonicity),
            check_theorem2(sizes.monotonicity, seed, &default_x_grid(), settings)?,
        ),
        family(
            format!("derivative identity, {} triples", sizes.derivative),
            check_derivative_identity(sizes.derivative, seed),
        ),
        family(
            format!("operator algebra, {} triples", sizes.algebra),
            check_operator_algebra(sizes.algebra, seed),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{werner, WernerParams};

    fn coarse() -> OptimizationSettings {
        OptimizationSettings {
            n_theta: 12,
            n_phi: 24,
            ..Default::default()
        }
    }

    #[test]
    fn report_bookkeeping() {
        let mut r = VerificationReport::new();
        assert!(r.passed());
        r.record("a", None, "", 0.5, 1.0);
        assert!(r.passed());
        assert_eq!(r.max_violation, -0.5);
        r.record("b", Some(3), "p", 2.0, 1.0);
        assert!(!r.passed());
        assert_eq!(r.failures[0].state_seed, Some(3));
        assert_eq!(r.max_violation, 1.0);
        r.record("c", None, "", f64::NAN, 0.0);
        assert_eq!(r.failures.len(), 2);
        assert_eq!(r.checks_run, 3);
    }

    #[test]
    fn r_vanishes_for_product_state() {
        let rho_a = ComplexMatrix::from_real(2, &[0.7, 0.2, 0.2, 0.3]).unwrap();
        let rho_b = ComplexMatrix::from_real(2, &[0.4, -0.1, -0.1, 0.6]).unwrap();
        let rho = states::validate_density(&qmat::tensor_product(&rho_a, &rho_b).unwrap()).unwrap();
        let basis = measure::qubit_basis(0.9, 1.7).unwrap();
        for x in [0.1, 1.0, 4.0] {
            let w = compute_r(&rho, &basis, x).unwrap();
            assert!(w.r_trace.abs() < 1e-12 && w.r_relative.abs() < 1e-12);
        }
    }

    #[test]
    fn r_tends_to_zero_at_small_strength() {
        let rho = states::random_density_seeded(17, RandomKind::FullRank);
        let basis = measure::qubit_basis(1.2, 0.4).unwrap();
        let small = compute_r(&rho, &basis, 1e-4).unwrap();
        let larger = compute_r(&rho, &basis, 1e-2).unwrap();
        assert!(small.r_trace.abs() < 1e-3);
        assert!(small.r_trace.abs() < larger.r_trace.abs());
    }

    #[test]
    fn werner_derivative_identity() {
        let rho = werner(WernerParams::new(0.5).unwrap()).unwrap();
        let basis = ProjectiveBasis::computational();
        let w = compute_r(&rho, &basis, 0.5).unwrap();
        assert!(w.r_trace > 0.0);
        assert!((w.r_trace - w.r_relative).abs() < 1e-9);
        let fd = finite_difference_derivative(&rho, &basis, 0.5, DERIVATIVE_STEP).unwrap();
        assert!((fd - w.predicted_derivative(0.5)).abs() < 1e-4);

        // d/dx h((1 + z tanh x)/2) = -(z sech^2 x / 2) ln((1 + z t)/(1 - z t)) in nats.
        let (z, x) = (0.5_f64, 0.5_f64);
        let t = x.tanh();
        let exact = -(z / (2.0 * x.cosh().powi(2))) * ((1.0 + z * t) / (1.0 - z * t)).ln();
        assert!((fd - exact).abs() < 1e-8, "{fd} vs {exact}");
    }

    #[test]
    fn compute_r_rejects_bad_inputs() {
        let rho = states::random_density_seeded(2, RandomKind::FullRank);
        let basis = ProjectiveBasis::computational();
        assert!(compute_r(&rho, &basis, 0.0).is_err());
        assert!(compute_r(&rho, &basis, 25.0).is_err());
        let product_pure = states::pure_schmidt(states::SchmidtParams::new(1.0).unwrap()).unwrap();
        assert!(matches!(
            compute_r(&product_pure, &basis, 0.5),
            Err(Error::DegenerateBranch { .. })
        ));
    }

    #[test]
    fn algebra_examples() {
        let basis = ProjectiveBasis::computational();
        let r = weak_operator_algebra_check(&basis, Strength::zero(), Strength::zero());
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.max_violation <= -ALGEBRA_TOL + 1e-15);

        let basis = measure::qubit_basis(0.83, 2.6).unwrap();
        let r = weak_operator_algebra_check(&basis, Strength::Finite(0.3), Strength::Finite(1.1));
        assert!(r.passed(), "{:?}", r.failures);

        let r = weak_operator_algebra_check(&basis, Strength::Finite(20.0), Strength::Finite(0.5));
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.checks_run >= 6);
    }

    #[test]
    fn theorem1_is_deterministic() {
        let xs = [Strength::Finite(0.5)];
        let a = check_theorem1(1, 7, &xs, RandomKind::FullRank, &coarse());
        let b = check_theorem1(1, 7, &xs, RandomKind::FullRank, &coarse());
        assert_eq!(a, b);
        assert!(a.passed());
    }

    #[test]
    fn theorem2_werner_and_endpoints() {
        let rho = werner(WernerParams::new(0.7).unwrap()).unwrap();
        let mut report = VerificationReport::new();
        theorem2_state(&rho, None, &default_x_grid(), &coarse(), &mut report).unwrap();
        assert!(report.passed(), "{:?}", report.failures);

        let rho = states::random_density_seeded(12, RandomKind::FullRank);
        let mut report = VerificationReport::new();
        theorem2_state(&rho, None, &[0.0, 20.0], &coarse(), &mut report).unwrap();
        assert!(report.passed());
        let d0 = corr::super_quantum_discord(&rho, Strength::zero(), &coarse()).unwrap();
        let d20 = corr::super_quantum_discord(&rho, Strength::Finite(20.0), &coarse()).unwrap();
        assert!((d0 - corr::mutual_information(&rho).unwrap()).abs() < 1e-8);
        assert!((d20 - corr::quantum_discord(&rho, &coarse()).unwrap()).abs() < 1e-7);
        assert!(d0 >= d20);
    }

    #[test]
    fn theorem2_product_state_is_flat() {
        let rho_a = ComplexMatrix::from_real(2, &[0.6, 0.1, 0.1, 0.4]).unwrap();
        let rho_b = ComplexMatrix::from_real(2, &[0.5, 0.2, 0.2, 0.5]).unwrap();
        let rho = states::validate_density(&qmat::tensor_product(&rho_a, &rho_b).unwrap()).unwrap();
        for x in default_x_grid() {
            let d = corr::super_quantum_discord(&rho, Strength::Finite(x), &coarse()).unwrap();
            assert!(d.abs() < 1e-10);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(check_theorem2(1, 0, &[0.1, 0.2], &coarse()).is_err());
        assert!(check_theorem2(1, 0, &[0.0, 0.2, 0.2], &coarse()).is_err());
    }
}
