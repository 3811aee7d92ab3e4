//! Closed-form weak conditional entropies and super discord for the
//! Schmidt-form pure state, the Werner state and the Bloch normal form.
//!
//! These are written directly from the eigenvalue formulas and never call
//! the measurement pipeline, so they serve as an independent check on it.

use std::f64::consts::PI;

use crate::corr::{self, binary_entropy, BasisMinimum, OptimizationSettings};
use crate::error::{Error, Result};
use crate::measure::{Strength, DEGENERATE_PROBABILITY};
use crate::states::{BlochNormalForm, SchmidtParams, WernerParams};

const SQRT_ARG_SLACK: f64 = 1e-12;
const THETA_SCAN_POINTS: usize = 181;

/// `x log₂ x` with `0 log 0 = 0`.
fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Clamps a square-root argument that roundoff pushed just below zero.
fn checked_sqrt(arg: f64, what: &str) -> Result<f64> {
    if arg < -SQRT_ARG_SLACK {
        return Err(Error::InternalConsistency(format!(
            "square-root argument {arg:e} in {what} is negative"
        )));
    }
    Ok(arg.clamp(0.0, 1.0).sqrt())
}

/// Eigenvalues `k±(y)` of the conditional state of `A` after the weak
/// outcome `y` on a Schmidt-form pure state, and that outcome's probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureBranchSpectrum {
    pub k_plus: f64,
    pub k_minus: f64,
    pub branch_probability: f64,
}

/// Outcome sign: `Plus` is `P(x)`, `Minus` is `P(−x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

pub fn pure_branch_spectrum(
    p: SchmidtParams,
    x: Strength,
    outcome: Outcome,
    theta: f64,
) -> Result<PureBranchSpectrum> {
    let (l0, l1) = (p.lambda0(), p.lambda1());
    let tanh_y = outcome.sign() * x.tanh();
    let prob = 0.5 * (1.0 - (l0 - l1) * tanh_y * theta.cos());
    if prob < DEGENERATE_PROBABILITY {
        return Ok(PureBranchSpectrum {
            k_plus: 1.0,
            k_minus: 0.0,
            branch_probability: prob.max(0.0),
        });
    }
    // 1/cosh² is even in y.
    let root = checked_sqrt(1.0 - l0 * l1 * x.sech_sq() / (prob * prob), "k±")?;
    Ok(PureBranchSpectrum {
        k_plus: 0.5 * (1.0 + root),
        k_minus: 0.5 * (1.0 - root),
        branch_probability: prob,
    })
}

/// Weak conditional entropy of the Schmidt-form state at polar angle `θ`.
pub fn pure_weak_cond_entropy(p: SchmidtParams, x: Strength, theta: f64) -> Result<f64> {
    let mut total = 0.0;
    for outcome in [Outcome::Plus, Outcome::Minus] {
        let s = pure_branch_spectrum(p, x, outcome, theta)?;
        total -= s.branch_probability * (xlog2x(s.k_plus) + xlog2x(s.k_minus));
    }
    Ok(total)
}

/// Super discord of the Schmidt-form state at a fixed `θ`:
/// `h₂(λ₀) + S_w(θ)`.
pub fn pure_sqd_at_theta(p: SchmidtParams, x: Strength, theta: f64) -> Result<f64> {
    let entanglement = -xlog2x(p.lambda0()) - xlog2x(p.lambda1());
    Ok(entanglement + pure_weak_cond_entropy(p, x, theta)?)
}

/// Super discord of the Schmidt-form state minimized over `θ` (the branch
/// spectra do not depend on `φ`). Returns the minimizing `θ` and the value.
pub fn pure_sqd_closed_form(p: SchmidtParams, x: Strength) -> Result<(f64, f64)> {
    let step = PI / (THETA_SCAN_POINTS - 1) as f64;
    let mut best = (0.0, f64::INFINITY);
    for i in 0..THETA_SCAN_POINTS {
        let theta = step * i as f64;
        let v = pure_sqd_at_theta(p, x, theta)?;
        if v < best.1 {
            best = (theta, v);
        }
    }
    let refined = corr::golden_section(
        |t| pure_sqd_at_theta(p, x, t),
        best.0 - step,
        best.0 + step,
        1e-10,
    )?;
    if refined.1 < best.1 {
        best = refined;
    }
    // cos θ is even and 2π-periodic; fold back into [0, π].
    let theta = best.0.rem_euclid(2.0 * PI);
    let theta = if theta > PI { 2.0 * PI - theta } else { theta };
    Ok((theta, best.1))
}

/// Closed-form entropies of the Werner state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerEntropies {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    /// Strong conditional entropy, the same for every basis.
    pub strong_conditional: f64,
}

pub fn werner_entropies(p: WernerParams) -> WernerEntropies {
    let z = p.z();
    WernerEntropies {
        s_a: 1.0,
        s_b: 1.0,
        s_ab: -3.0 * xlog2x((1.0 - z) / 4.0) - xlog2x((1.0 + 3.0 * z) / 4.0),
        strong_conditional: -xlog2x((1.0 - z) / 2.0) - xlog2x((1.0 + z) / 2.0),
    }
}

pub fn werner_discord(p: WernerParams) -> f64 {
    let e = werner_entropies(p);
    e.strong_conditional - (e.s_ab - e.s_b)
}

pub fn werner_mutual_information(p: WernerParams) -> f64 {
    let e = werner_entropies(p);
    e.s_a + e.s_b - e.s_ab
}

/// Weak conditional entropy of the Werner state, `h₂((1 + z tanh x)/2)`,
/// the same for every basis.
pub fn werner_weak_cond_entropy(p: WernerParams, x: Strength) -> f64 {
    binary_entropy((1.0 + p.z() * x.tanh()) / 2.0)
}

/// Super discord of the Werner state:
/// `3(1−z)/4 log((1−z)/4) + (1+3z)/4 log((1+3z)/4) + 1 − Σ_{y=±x} (1−z tanh y)/2 log((1−z tanh y)/2)`.
pub fn werner_sqd_closed_form(p: WernerParams, x: Strength) -> f64 {
    let z = p.z();
    let t = x.tanh();
    let joint = 3.0 * xlog2x((1.0 - z) / 4.0) + xlog2x((1.0 + 3.0 * z) / 4.0);
    let branches: f64 = [t, -t].iter().map(|ty| xlog2x((1.0 - z * ty) / 2.0)).sum();
    joint + 1.0 - branches
}

/// Weak conditional entropy of a Bloch normal form state measured along
/// `n = (sinθ cosφ, sinθ sinφ, cosθ)`, from the outcome probabilities
/// `p(±x) = [1 ∓ (b·n) tanh x]/2` and the conditional eigenvalues
/// `λ±(y) = [(1 − (b·n) tanh y) ± |a − c∘n tanh y|] / (2[1 − (b·n) tanh y])`.
pub fn bloch_weak_cond_entropy(p: &BlochNormalForm, theta: f64, phi: f64, x: Strength) -> Result<f64> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let b_dot_n: f64 = p.b.iter().zip(n).map(|(b, n)| b * n).sum();
    let mut total = 0.0;
    for tanh_y in [x.tanh(), -x.tanh()] {
        let weight = 1.0 - b_dot_n * tanh_y;
        let prob = 0.5 * weight;
        if prob < DEGENERATE_PROBABILITY {
            continue;
        }
        let radius = (0..3)
            .map(|i| (p.a[i] - p.c[i] * n[i] * tanh_y).powi(2))
            .sum::<f64>()
            .sqrt();
        let lambda_plus = (weight + radius) / (2.0 * weight);
        let lambda_minus = (weight - radius) / (2.0 * weight);
        if lambda_minus < -SQRT_ARG_SLACK {
            return Err(Error::InternalConsistency(format!(
                "conditional eigenvalue {lambda_minus:e} is negative"
            )));
        }
        total -= prob * (xlog2x(lambda_plus) + xlog2x(lambda_minus.max(0.0)));
    }
    Ok(total)
}

/// [`bloch_weak_cond_entropy`] minimized over both basis angles.
pub fn bloch_weak_cond_entropy_minimized(
    p: &BlochNormalForm,
    x: Strength,
    settings: &OptimizationSettings,
) -> Result<BasisMinimum> {
    corr::minimize_angles(|t, f| bloch_weak_cond_entropy(p, t, f, x), settings)
}
