//! Projective bases and weak measurement operators on qubit `B`, and the
//! outcome probability / conditional state of subsystem `A` for one outcome.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qmat::{self, ComplexMatrix, Subsystem};
use crate::states::{self, DensityMatrix};

/// Strengths at or above this value use the exact projector path.
pub const STRONG_THRESHOLD: f64 = 20.0;

/// Branches with probability below this are degenerate.
pub const DEGENERATE_PROBABILITY: f64 = 1e-12;

/// Orthogonal qubit basis `{|ψ(θ,φ)⟩, |ψ̄(θ,φ)⟩}` with
/// `|ψ⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveBasis {
    theta: f64,
    phi: f64,
    pi0: ComplexMatrix,
    pi1: ComplexMatrix,
}

impl ProjectiveBasis {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `Π_ψ`, the projector the weak operator `P(−x)` tends to.
    pub fn pi0(&self) -> &ComplexMatrix {
        &self.pi0
    }

    /// `Π_ψ̄`, the projector the weak operator `P(x)` tends to.
    pub fn pi1(&self) -> &ComplexMatrix {
        &self.pi1
    }

    /// Bloch vector `n = (sinθ cosφ, sinθ sinφ, cosθ)` of `|ψ⟩`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn computational() -> Self {
        qubit_basis(0.0, 0.0).expect("finite angles")
    }
}

/// Canonicalizes `(θ, φ)` into `θ ∈ [0, π]`, `φ ∈ [0, 2π)` and builds the basis.
pub fn qubit_basis(theta: f64, phi: f64) -> Result<ProjectiveBasis> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut theta = theta.rem_euclid(TAU);
    let mut phi = phi;
    if theta > PI {
        // |ψ(2π−θ, φ+π)⟩ = −|ψ(θ, φ)⟩
        theta = TAU - theta;
        phi += PI;
    }
    let phi = phi.rem_euclid(TAU);
    let phi = if phi >= TAU { 0.0 } else { phi };

    let (s, c) = (theta / 2.0).sin_cos();
    let phase = Complex64::from_polar(1.0, phi);
    let psi = [Complex64::new(c, 0.0), phase * s];
    let psi_bar = [Complex64::new(s, 0.0), -phase * c];
    Ok(ProjectiveBasis {
        theta,
        phi,
        pi0: ComplexMatrix::outer(&psi)?,
        pi1: ComplexMatrix::outer(&psi_bar)?,
    })
}

/// Measurement strength: a finite `x ≥ 0` or the strong (projective) limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strength {
    Finite(f64),
    Strong,
}

impl Strength {
    /// Accepts `x ≥ 0`; `+∞` maps to [`Strength::Strong`].
    pub fn new(x: f64) -> Result<Self> {
        if x == f64::INFINITY {
            return Ok(Strength::Strong);
        }
        if !x.is_finite() {
            return Err(Error::NonFinite);
        }
        if x < 0.0 {
            return Err(Error::OutOfRange {
                name: "x",
                value: x,
                range: "[0, inf] (swap the basis for negative strengths)",
            });
        }
        Ok(Strength::Finite(x))
    }

    pub fn zero() -> Self {
        Strength::Finite(0.0)
    }

    /// `x`, or `+∞` for the strong limit.
    pub fn value(&self) -> f64 {
        match *self {
            Strength::Finite(x) => x,
            Strength::Strong => f64::INFINITY,
        }
    }

    /// True when the exact projector path applies.
    pub fn is_projective(&self) -> bool {
        match *self {
            Strength::Finite(x) => x >= STRONG_THRESHOLD,
            Strength::Strong => true,
        }
    }

    /// `tanh x`, exactly 1 on the projector path.
    pub fn tanh(&self) -> f64 {
        if self.is_projective() {
            1.0
        } else {
            self.value().tanh()
        }
    }

    /// `1/cosh² x`, exactly 0 on the projector path.
    pub fn sech_sq(&self) -> f64 {
        if self.is_projective() {
            0.0
        } else {
            let c = self.value().cosh();
            1.0 / (c * c)
        }
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strength::Finite(x) => write!(f, "{x}"),
            Strength::Strong => f.write_str("inf"),
        }
    }
}

/// Serializes as a number, or the string `"inf"` for the strong limit.
impl Serialize for Strength {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Strength::Finite(x) => serializer.serialize_f64(x),
            Strength::Strong => serializer.serialize_str("inf"),
        }
    }
}

impl FromStr for Strength {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Strength::Strong);
        }
        let x: f64 = s.parse().map_err(|_| Error::OutOfRange {
            name: "x",
            value: f64::NAN,
            range: "a non-negative number or `inf`",
        })?;
        Strength::new(x)
    }
}

/// `a²(y) = (1 − tanh y)/2`, written as `1/(1 + e^{2y})` to avoid cancellation.
pub fn weak_coefficient_sq(y: f64) -> f64 {
    1.0 / (1.0 + (2.0 * y).exp())
}

/// The pair `P(x) = a(x)Π_ψ + a(−x)Π_ψ̄`, `P(−x) = a(−x)Π_ψ + a(x)Π_ψ̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakOperatorPair {
    basis: ProjectiveBasis,
    strength: Strength,
    plus: ComplexMatrix,
    minus: ComplexMatrix,
}

impl WeakOperatorPair {
    pub fn basis(&self) -> &ProjectiveBasis {
        &self.basis
    }

    pub fn strength(&self) -> Strength {
        self.strength
    }

    /// `P(x)`.
    pub fn plus(&self) -> &ComplexMatrix {
        &self.plus
    }

    /// `P(−x)`.
    pub fn minus(&self) -> &ComplexMatrix {
        &self.minus
    }
}

pub fn weak_operators(basis: &ProjectiveBasis, strength: Strength) -> WeakOperatorPair {
    let (plus, minus) = if strength.is_projective() {
        (basis.pi1, basis.pi0)
    } else {
        let x = strength.value();
        let small = weak_coefficient_sq(x).sqrt();
        let large = weak_coefficient_sq(-x).sqrt();
        let combine = |c0: f64, c1: f64| {
            basis
                .pi0
                .scale_real(c0)
                .add(&basis.pi1.scale_real(c1))
                .expect("2x2 projectors")
        };
        (combine(small, large), combine(large, small))
    };
    WeakOperatorPair {
        basis: *basis,
        strength,
        plus,
        minus,
    }
}

/// Probability of one outcome on `B` and the resulting state of `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBranch {
    pub probability: f64,
    /// `None` when the branch is degenerate (probability below 1e-12).
    pub conditional_state: Option<DensityMatrix>,
}

impl MeasurementBranch {
    pub fn is_degenerate(&self) -> bool {
        self.conditional_state.is_none()
    }
}

/// Applies `I ⊗ op` to a two-qubit state and reduces onto `A`.
pub fn measurement_branch(rho: &DensityMatrix, op: &ComplexMatrix) -> Result<MeasurementBranch> {
    if rho.dim() != 4 || op.dim() != 2 {
        return Err(Error::DimensionMismatch {
            op: "measurement_branch",
            left: rho.dim(),
            right: op.dim(),
        });
    }
    let lifted = qmat::tensor_product(&ComplexMatrix::identity(2)?, op)?;
    let unnormalized = qmat::sandwich(&lifted, rho.matrix())?;
    let probability = unnormalized.trace().re.max(0.0);
    if probability < DEGENERATE_PROBABILITY {
        return Ok(MeasurementBranch {
            probability,
            conditional_state: None,
        });
    }
    let reduced = qmat::partial_trace(&unnormalized, Subsystem::A)?;
    Ok(MeasurementBranch {
        probability,
        conditional_state: Some(states::from_noisy(&reduced)?),
    })
}

/// Branches for `P(x)` and `P(−x)`, in that order.
pub fn weak_branches(rho: &DensityMatrix, pair: &WeakOperatorPair) -> Result<[MeasurementBranch; 2]> {
    Ok([
        measurement_branch(rho, pair.plus())?,
        measurement_branch(rho, pair.minus())?,
    ])
}

/// Branches for `Π_ψ` and `Π_ψ̄`, in that order.
pub fn projective_branches(rho: &DensityMatrix, basis: &ProjectiveBasis) -> Result<[MeasurementBranch; 2]> {
    Ok([
        measurement_branch(rho, basis.pi0())?,
        measurement_branch(rho, basis.pi1())?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{pure_schmidt, random_density_seeded, RandomKind, SchmidtParams};
    use proptest::prelude::*;

    fn id2() -> ComplexMatrix {
        ComplexMatrix::identity(2).unwrap()
    }

    fn completeness_defect(pair: &WeakOperatorPair) -> f64 {
        let p = pair.plus();
        let m = pair.minus();
        let sum = p
            .adjoint()
            .matmul(p)
            .unwrap()
            .add(&m.adjoint().matmul(m).unwrap())
            .unwrap();
        sum.max_abs_diff(&id2())
    }

    #[test]
    fn basis_examples() {
        let b = qubit_basis(0.0, 0.0).unwrap();
        assert!(b.pi0().max_abs_diff(&ComplexMatrix::diagonal(&[1.0, 0.0]).unwrap()) < 1e-15);
        assert!(b.pi1().max_abs_diff(&ComplexMatrix::diagonal(&[0.0, 1.0]).unwrap()) < 1e-15);

        let b = qubit_basis(PI / 2.0, 0.0).unwrap();
        let plus = ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let minus = ComplexMatrix::from_real(2, &[0.5, -0.5, -0.5, 0.5]).unwrap();
        assert!(b.pi0().max_abs_diff(&plus) < 1e-15);
        assert!(b.pi1().max_abs_diff(&minus) < 1e-15);

        assert!(qubit_basis(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn basis_canonicalization_keeps_projectors() {
        let raw = qubit_basis(4.0, 1.0).unwrap();
        assert!((0.0..=PI).contains(&raw.theta()));
        assert!((0.0..TAU).contains(&raw.phi()));
        let direct = qubit_basis(TAU - 4.0, 1.0 + PI).unwrap();
        assert!(raw.pi0().max_abs_diff(direct.pi0()) < 1e-14);
        let neg = qubit_basis(-0.3, 0.2).unwrap();
        let pos = qubit_basis(0.3, 0.2 + PI).unwrap();
        assert!(neg.pi0().max_abs_diff(pos.pi0()) < 1e-14);
    }

    #[test]
    fn weak_operator_examples() {
        let basis = qubit_basis(0.7, 2.1).unwrap();
        let pair = weak_operators(&basis, Strength::zero());
        let scaled = id2().scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!(pair.plus().max_abs_diff(&scaled) < 1e-15);
        assert!(pair.minus().max_abs_diff(&scaled) < 1e-15);

        let pair = weak_operators(&basis, Strength::Strong);
        assert_eq!(pair.minus(), basis.pi0());
        assert_eq!(pair.plus(), basis.pi1());

        let pair = weak_operators(&basis, Strength::new(25.0).unwrap());
        assert_eq!(pair.plus(), basis.pi1());

        assert!(Strength::new(-0.1).is_err());
        assert_eq!(Strength::new(f64::INFINITY).unwrap(), Strength::Strong);
        assert_eq!("inf".parse::<Strength>().unwrap(), Strength::Strong);
        assert_eq!("0.2".parse::<Strength>().unwrap(), Strength::Finite(0.2));
        assert!("-1".parse::<Strength>().is_err());
    }

    #[test]
    fn coefficient_matches_tanh_form() {
        for y in [-3.0, -0.4, 0.0, 0.1, 1.0, 7.5] {
            let direct = (1.0 - f64::tanh(y)) / 2.0;
            assert!((weak_coefficient_sq(y) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn product_state_branch_is_rho_a() {
        let rho_a = ComplexMatrix::from_row_major(
            2,
            &[
                Complex64::new(0.7, 0.0),
                Complex64::new(0.1, -0.2),
                Complex64::new(0.1, 0.2),
                Complex64::new(0.3, 0.0),
            ],
        )
        .unwrap();
        let rho_b = ComplexMatrix::from_real(2, &[0.4, 0.1, 0.1, 0.6]).unwrap();
        let rho = states::validate_density(&qmat::tensor_product(&rho_a, &rho_b).unwrap()).unwrap();
        let basis = qubit_basis(1.1, 0.4).unwrap();
        let pair = weak_operators(&basis, Strength::new(0.8).unwrap());
        for br in weak_branches(&rho, &pair).unwrap() {
            assert!(br.conditional_state.unwrap().matrix().max_abs_diff(&rho_a) < 1e-12);
        }
    }

    #[test]
    fn schmidt_branch_probabilities() {
        let rho = pure_schmidt(SchmidtParams::new(0.5).unwrap()).unwrap();
        for (theta, phi, x) in [(0.0, 0.0, 0.3), (1.2, 2.0, 1.5), (2.9, 5.0, 4.0)] {
            let pair = weak_operators(&qubit_basis(theta, phi).unwrap(), Strength::new(x).unwrap());
            let [p, m] = weak_branches(&rho, &pair).unwrap();
            assert!((p.probability - 0.5).abs() < 1e-12);
            assert!((m.probability - 0.5).abs() < 1e-12);
        }

        let rho = pure_schmidt(SchmidtParams::new(0.7).unwrap()).unwrap();
        for x in [0.1, 0.5, 1.0, 3.0] {
            let pair = weak_operators(&ProjectiveBasis::computational(), Strength::new(x).unwrap());
            let [p, _] = weak_branches(&rho, &pair).unwrap();
            let want = 0.5 * (1.0 - 0.4 * f64::tanh(x));
            assert!((p.probability - want).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_branch_is_flagged() {
        let rho = pure_schmidt(SchmidtParams::new(1.0).unwrap()).unwrap();
        let [_, pi1] = projective_branches(&rho, &ProjectiveBasis::computational()).unwrap();
        assert!(pi1.is_degenerate());
        assert_eq!(pi1.probability, 0.0);
    }

    #[test]
    fn zero_strength_branches_equal_rho_a() {
        let rho = random_density_seeded(5, RandomKind::FullRank);
        let rho_a = rho.reduced(Subsystem::A).unwrap();
        let pair = weak_operators(&qubit_basis(0.9, 4.0).unwrap(), Strength::zero());
        let [p, m] = weak_branches(&rho, &pair).unwrap();
        assert!((p.probability - 0.5).abs() < 1e-12);
        for br in [p, m] {
            assert!(br.conditional_state.unwrap().matrix().max_abs_diff(rho_a.matrix()) < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn basis_is_complete(theta in -10.0..10.0f64, phi in -10.0..10.0f64) {
            let b = qubit_basis(theta, phi).unwrap();
            prop_assert!(b.pi0().add(b.pi1()).unwrap().max_abs_diff(&id2()) < 1e-12);
            prop_assert!(b.pi0().matmul(b.pi0()).unwrap().max_abs_diff(b.pi0()) < 1e-12);
            prop_assert!(b.pi1().matmul(b.pi1()).unwrap().max_abs_diff(b.pi1()) < 1e-12);
        }

        #[test]
        fn weak_pair_is_complete(theta in 0.0..PI, phi in 0.0..TAU, x in 0.0..25.0f64) {
            let pair = weak_operators(&qubit_basis(theta, phi).unwrap(), Strength::new(x).unwrap());
            prop_assert!(completeness_defect(&pair) < 1e-12);
            let comm = pair.plus().matmul(pair.minus()).unwrap()
                .sub(&pair.minus().matmul(pair.plus()).unwrap()).unwrap();
            prop_assert!(comm.max_abs_diff(&ComplexMatrix::zeros(2).unwrap()) < 1e-12);
        }

        #[test]
        fn branches_are_valid(seed in any::<u64>(), theta in 0.0..PI, phi in 0.0..TAU, x in 0.0..6.0f64) {
            let rho = random_density_seeded(seed, RandomKind::FullRank);
            let pair = weak_operators(&qubit_basis(theta, phi).unwrap(), Strength::new(x).unwrap());
            let [p, m] = weak_branches(&rho, &pair).unwrap();
            prop_assert!((p.probability + m.probability - 1.0).abs() < 1e-10);
            for br in [p, m] {
                let cond = br.conditional_state.unwrap();
                prop_assert!(states::validate_density(cond.matrix()).is_ok());
            }
        }
    }
}
