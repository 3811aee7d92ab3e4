//! Entropies and correlation measures: mutual information, classical
//! correlation, quantum discord and super quantum discord, plus the
//! minimization over measurement bases on `B` that the last three need.
//!
//! All reported quantities are in bits.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{self, MeasurementBranch, ProjectiveBasis, Strength};
use crate::qmat::Subsystem;
use crate::states::DensityMatrix;

/// Discord values in `[-DISCORD_CLAMP, 0)` are reported as 0.
pub const DISCORD_CLAMP: f64 = 1e-7;

/// Angular resolution of the golden-section line searches.
const LINE_SEARCH_TOL: f64 = 1e-9;

/// Shannon entropy in bits of a probability vector, with `0·log 0 = 0`.
/// Never returns `-0.0`.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    let sum: f64 = probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum();
    0.0 - sum
}

/// Binary entropy `h₂(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_bits(&[p, 1.0 - p])
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    shannon_bits(&rho.clipped_eigenvalues())
}

/// Von Neumann entropy in nats.
pub fn entropy_nats(rho: &DensityMatrix) -> f64 {
    entropy(rho) * std::f64::consts::LN_2
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            op: "two-qubit measure",
            left: rho.dim(),
            right: 4,
        });
    }
    Ok(())
}

/// Marginal and joint entropies of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entropies {
    pub a: f64,
    pub b: f64,
    pub ab: f64,
}

impl Entropies {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        require_two_qubit(rho)?;
        Ok(Self {
            a: entropy(&rho.reduced(Subsystem::A)?),
            b: entropy(&rho.reduced(Subsystem::B)?),
            ab: entropy(rho),
        })
    }

    /// `S(A|B) = S(ρ_AB) − S(ρ_B)`.
    pub fn conditional(&self) -> f64 {
        self.ab - self.b
    }

    pub fn mutual_information(&self) -> f64 {
        self.a + self.b - self.ab
    }
}

pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    Ok(Entropies::of(rho)?.mutual_information())
}

fn branch_entropy_sum(branches: &[MeasurementBranch]) -> f64 {
    branches
        .iter()
        .filter_map(|b| b.conditional_state.map(|s| b.probability * entropy(&s)))
        .sum()
}

/// `Σᵢ pᵢ S(ρ_{A|i})` for the projective measurement `{Π_ψ, Π_ψ̄}` on `B`.
pub fn conditional_entropy_strong(rho: &DensityMatrix, basis: &ProjectiveBasis) -> Result<f64> {
    Ok(branch_entropy_sum(&measure::projective_branches(rho, basis)?))
}

/// `p(x) S(ρ_{A|P(x)}) + p(−x) S(ρ_{A|P(−x)})` for the weak pair on `B`.
pub fn conditional_entropy_weak(rho: &DensityMatrix, basis: &ProjectiveBasis, x: Strength) -> Result<f64> {
    let pair = measure::weak_operators(basis, x);
    Ok(branch_entropy_sum(&measure::weak_branches(rho, &pair)?))
}

/// Which conditional entropy to minimize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    Strong,
    Weak(Strength),
}

impl Objective {
    pub fn evaluate(&self, rho: &DensityMatrix, theta: f64, phi: f64) -> Result<f64> {
        let basis = measure::qubit_basis(theta, phi)?;
        match *self {
            Objective::Strong => conditional_entropy_strong(rho, &basis),
            Objective::Weak(x) => conditional_entropy_weak(rho, &basis, x),
        }
    }
}

/// Coarse grid plus coordinate-descent refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizationSettings {
    /// Grid points over `θ ∈ [0, π]`, endpoints included.
    pub n_theta: usize,
    /// Grid points over `φ ∈ [0, 2π)`.
    pub n_phi: usize,
    /// Refinement stops when one round improves by less than this (bits).
    pub refine_tolerance: f64,
    pub max_refine_iterations: usize,
}

impl Default for OptimizationSettings {
    fn default() -> Self {
        Self {
            n_theta: 64,
            n_phi: 128,
            refine_tolerance: 1e-10,
            max_refine_iterations: 200,
        }
    }
}

impl OptimizationSettings {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 2 {
            return Err(Error::InvalidSettings(format!("n_theta = {} < 2", self.n_theta)));
        }
        if self.n_phi < 1 {
            return Err(Error::InvalidSettings("n_phi must be at least 1".into()));
        }
        if !(self.refine_tolerance > 0.0) {
            return Err(Error::InvalidSettings(format!(
                "refine_tolerance = {} must be positive",
                self.refine_tolerance
            )));
        }
        Ok(())
    }
}

/// Minimizing basis angles and the minimum value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisMinimum {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
}

/// Golden-section search on `[lo, hi]`; returns the best point evaluated.
pub(crate) fn golden_section<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut best = if f2 < f1 { (x2, f2) } else { (x1, f1) };
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    Ok(best)
}

/// Minimizes the chosen conditional entropy over bases `(θ, φ)` on `B`.
///
/// The coarse grid is scanned in index order (θ outer, φ inner) and the
/// first strict minimum seeds the refinement, so results do not depend on
/// evaluation order. Refinement alternates golden-section searches over one
/// grid cell in θ and in φ and only ever accepts improvements, so the
/// returned value never exceeds any grid sample.
pub fn minimize_over_bases(
    rho: &DensityMatrix,
    objective: Objective,
    settings: &OptimizationSettings,
) -> Result<BasisMinimum> {
    require_two_qubit(rho)?;
    minimize_angles(|theta, phi| objective.evaluate(rho, theta, phi), settings)
}

/// Grid-then-refine minimization of any function of basis angles; see
/// [`minimize_over_bases`].
pub fn minimize_angles<F>(f: F, settings: &OptimizationSettings) -> Result<BasisMinimum>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    settings.validate()?;
    let theta_step = PI / (settings.n_theta - 1) as f64;
    let phi_step = TAU / settings.n_phi as f64;

    let mut best = BasisMinimum {
        theta: 0.0,
        phi: 0.0,
        value: f64::INFINITY,
    };
    for i in 0..settings.n_theta {
        let theta = theta_step * i as f64;
        for j in 0..settings.n_phi {
            let phi = phi_step * j as f64;
            let value = f(theta, phi)?;
            if value < best.value {
                best = BasisMinimum { theta, phi, value };
            }
        }
    }

    for _ in 0..settings.max_refine_iterations {
        let before = best.value;
        let phi = best.phi;
        let (theta, value) = golden_section(
            |t| f(t, phi),
            best.theta - theta_step,
            best.theta + theta_step,
            LINE_SEARCH_TOL,
        )?;
        if value < best.value {
            best.theta = theta;
            best.value = value;
        }
        let theta = best.theta;
        let (phi, value) = golden_section(
            |p| f(theta, p),
            best.phi - phi_step,
            best.phi + phi_step,
            LINE_SEARCH_TOL,
        )?;
        if value < best.value {
            best.phi = phi;
            best.value = value;
        }
        if before - best.value < settings.refine_tolerance {
            break;
        }
    }

    let basis = measure::qubit_basis(best.theta, best.phi)?;
    best.theta = basis.theta();
    best.phi = basis.phi();
    Ok(best)
}

/// Maps roundoff-level negative discord to zero and rejects anything worse.
pub fn clamp_discord(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -DISCORD_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::InternalConsistency(format!("{what} = {value:e} is negative")))
    }
}

pub fn quantum_discord(rho: &DensityMatrix, settings: &OptimizationSettings) -> Result<f64> {
    let min = minimize_over_bases(rho, Objective::Strong, settings)?;
    clamp_discord(min.value - Entropies::of(rho)?.conditional(), "discord")
}

pub fn super_quantum_discord(rho: &DensityMatrix, x: Strength, settings: &OptimizationSettings) -> Result<f64> {
    let min = minimize_over_bases(rho, Objective::Weak(x), settings)?;
    clamp_discord(min.value - Entropies::of(rho)?.conditional(), "super discord")
}

pub fn classical_correlation(rho: &DensityMatrix, settings: &OptimizationSettings) -> Result<f64> {
    let min = minimize_over_bases(rho, Objective::Strong, settings)?;
    Ok(Entropies::of(rho)?.a - min.value)
}

/// Entropy of `Tr_B ρ` for a pure two-qubit state.
pub fn entanglement_entropy_pure(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let largest_eigenvalue = rho.largest_eigenvalue();
    if largest_eigenvalue < 1.0 - 1e-8 {
        return Err(Error::NotPure { largest_eigenvalue });
    }
    Ok(entropy(&rho.reduced(Subsystem::B)?))
}

/// Every scalar measure for one state and one measurement strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub entropy_a: f64,
    pub entropy_b: f64,
    pub entropy_ab: f64,
    /// `S(A|B) = S(ρ_AB) − S(ρ_B)`.
    pub conditional_entropy: f64,
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    pub super_discord: f64,
    pub strength_x: Strength,
    /// Strong conditional entropy at `optimal_basis_strong`.
    pub strong_conditional_entropy: f64,
    /// Weak conditional entropy at `optimal_basis_weak`.
    pub weak_conditional_entropy: f64,
    pub optimal_basis_strong: (f64, f64),
    pub optimal_basis_weak: (f64, f64),
    /// False when both bases were fixed by the caller.
    pub optimized: bool,
}

impl CorrelationReport {
    fn assemble(
        entropies: Entropies,
        x: Strength,
        strong: BasisMinimum,
        weak: BasisMinimum,
        optimized: bool,
    ) -> Result<Self> {
        let conditional = entropies.conditional();
        Ok(Self {
            entropy_a: entropies.a,
            entropy_b: entropies.b,
            entropy_ab: entropies.ab,
            conditional_entropy: conditional,
            mutual_information: entropies.mutual_information(),
            classical_correlation: entropies.a - strong.value,
            discord: clamp_discord(strong.value - conditional, "discord")?,
            super_discord: clamp_discord(weak.value - conditional, "super discord")?,
            strength_x: x,
            strong_conditional_entropy: strong.value,
            weak_conditional_entropy: weak.value,
            optimal_basis_strong: (strong.theta, strong.phi),
            optimal_basis_weak: (weak.theta, weak.phi),
            optimized,
        })
    }

    /// Checks `D_w ≥ D` and `J + D = I`.
    pub fn check_invariants(&self) -> Result<()> {
        if self.super_discord < self.discord - DISCORD_CLAMP {
            return Err(Error::InternalConsistency(format!(
                "super discord {} is below discord {}",
                self.super_discord, self.discord
            )));
        }
        let gap = (self.classical_correlation + self.discord - self.mutual_information).abs();
        if gap > 1e-8 {
            return Err(Error::InternalConsistency(format!(
                "J + D differs from I by {gap:e}"
            )));
        }
        Ok(())
    }
}

/// Full report with both conditional entropies minimized over bases.
pub fn correlation_report(
    rho: &DensityMatrix,
    x: Strength,
    settings: &OptimizationSettings,
) -> Result<CorrelationReport> {
    let entropies = Entropies::of(rho)?;
    let strong = minimize_over_bases(rho, Objective::Strong, settings)?;
    let weak = minimize_over_bases(rho, Objective::Weak(x), settings)?;
    CorrelationReport::assemble(entropies, x, strong, weak, true)
}

/// Report at one caller-chosen basis, with no minimization.
pub fn fixed_basis_report(rho: &DensityMatrix, x: Strength, basis: &ProjectiveBasis) -> Result<CorrelationReport> {
    let entropies = Entropies::of(rho)?;
    let at = |value| BasisMinimum {
        theta: basis.theta(),
        phi: basis.phi(),
        value,
    };
    let strong = at(conditional_entropy_strong(rho, basis)?);
    let weak = at(conditional_entropy_weak(rho, basis, x)?);
    CorrelationReport::assemble(entropies, x, strong, weak, false)
}
