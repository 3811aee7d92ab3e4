//! Validated density matrices and the state families used throughout the
//! crate: Schmidt-form pure states, Werner states, Bloch normal form states,
//! and seeded random states.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{self, ComplexMatrix, Subsystem, TOLERANCE};

/// Eigenvalues down to this value are treated as roundoff and clipped to zero.
pub const PSD_TOLERANCE: f64 = 1e-8;

/// A self-adjoint, unit-trace, positive-semidefinite 2×2 or 4×4 matrix.
///
/// The spectrum is computed once during validation and cached.
#[derive(Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    spectrum: [f64; 4],
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Eigenvalues in descending order, as computed (not clipped).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum[..self.dim()]
    }

    /// Eigenvalues with roundoff negatives clipped to zero and renormalized
    /// to unit sum.
    pub fn clipped_eigenvalues(&self) -> Vec<f64> {
        let clipped: Vec<f64> = self.eigenvalues().iter().map(|&e| e.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        clipped.into_iter().map(|e| e / total).collect()
    }

    /// Reduced state of a two-qubit density matrix.
    pub fn reduced(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let m = qmat::partial_trace(&self.mat, keep)?;
        from_noisy(&m)
    }

    /// Largest eigenvalue; 1 for pure states.
    pub fn largest_eigenvalue(&self) -> f64 {
        self.spectrum[0]
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityMatrix")
            .field("mat", &self.mat)
            .field("eigenvalues", &self.eigenvalues())
            .finish()
    }
}

/// Checks the density-matrix invariants and reports the first one that fails.
pub fn validate_density(m: &ComplexMatrix) -> Result<DensityMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let asymmetry = m.max_asymmetry();
    if asymmetry > TOLERANCE {
        return Err(Error::NotSelfAdjoint { asymmetry });
    }
    let trace = m.trace();
    if (trace.re - 1.0).abs() > TOLERANCE || trace.im.abs() > TOLERANCE {
        return Err(Error::TraceNotUnity { trace: trace.re });
    }
    let eigs = qmat::hermitian_eigenvalues(m)?;
    let min_eigenvalue = *eigs.last().expect("non-empty spectrum");
    if min_eigenvalue < -PSD_TOLERANCE {
        return Err(Error::NegativeEigenvalue { min_eigenvalue });
    }
    let mut spectrum = [0.0; 4];
    spectrum[..eigs.len()].copy_from_slice(&eigs);
    Ok(DensityMatrix {
        mat: m.hermitian_part(),
        spectrum,
    })
}

/// Symmetrizes and renormalizes a computed matrix before validating it.
/// Used for states derived from valid states (reductions, measurement
/// branches) where only roundoff separates them from the invariants.
pub(crate) fn from_noisy(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let h = m.hermitian_part();
    let trace = h.trace().re;
    if !(trace > 0.0) {
        return Err(Error::TraceNotUnity { trace });
    }
    validate_density(&h.scale_real(1.0 / trace))
}

/// Squared Schmidt coefficient `λ₀` of `√λ₀|00⟩ + √λ₁|11⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchmidtParams {
    lambda0: f64,
}

impl SchmidtParams {
    pub fn new(lambda0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda0) {
            return Err(Error::OutOfRange {
                name: "lambda0",
                value: lambda0,
                range: "[0, 1]",
            });
        }
        Ok(Self { lambda0 })
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn lambda1(&self) -> f64 {
        1.0 - self.lambda0
    }
}

/// Singlet weight `z` of a Werner state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WernerParams {
    z: f64,
}

impl WernerParams {
    pub const MIN_Z: f64 = -1.0 / 3.0;
    pub const MAX_Z: f64 = 1.0;

    pub fn new(z: f64) -> Result<Self> {
        if !(Self::MIN_Z - 1e-12..=Self::MAX_Z + 1e-12).contains(&z) {
            return Err(Error::OutOfRange {
                name: "z",
                value: z,
                range: "[-1/3, 1]",
            });
        }
        Ok(Self {
            z: z.clamp(Self::MIN_Z, Self::MAX_Z),
        })
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

/// Pauli-expansion coefficients of
/// `¼[I + a·σ⊗I + I⊗b·σ + Σ cᵢ σᵢ⊗σᵢ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochNormalForm {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
}

impl BlochNormalForm {
    /// Parses nine comma-separated reals `a1,a2,a3,b1,b2,b3,c1,c2,c3`.
    pub fn from_slice(values: &[f64]) -> Result<Self> {
        if values.len() != 9 {
            return Err(Error::EntryCount {
                expected: 9,
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            a: [values[0], values[1], values[2]],
            b: [values[3], values[4], values[5]],
            c: [values[6], values[7], values[8]],
        })
    }
}

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn pure_schmidt(p: SchmidtParams) -> Result<DensityMatrix> {
    let zero = c64(0.0);
    let amps = [c64(p.lambda0().sqrt()), zero, zero, c64(p.lambda1().sqrt())];
    validate_density(&ComplexMatrix::outer(&amps)?)
}

/// `|Ψ⁻⟩⟨Ψ⁻|` with `|Ψ⁻⟩ = (|01⟩ − |10⟩)/√2`.
pub fn singlet_projector() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zero = c64(0.0);
    ComplexMatrix::outer(&[zero, c64(s), c64(-s), zero]).expect("4-vector")
}

pub fn werner(p: WernerParams) -> Result<DensityMatrix> {
    let z = p.z();
    let noise = ComplexMatrix::identity(4)?.scale_real((1.0 - z) / 4.0);
    validate_density(&singlet_projector().scale_real(z).add(&noise)?)
}

pub fn bloch_normal_form(p: &BlochNormalForm) -> Result<DensityMatrix> {
    let id = ComplexMatrix::identity(2)?;
    let paulis = ComplexMatrix::paulis();
    let mut m = ComplexMatrix::identity(4)?;
    for (k, sigma) in paulis.iter().enumerate() {
        m = m
            .add(&qmat::tensor_product(&sigma.scale_real(p.a[k]), &id)?)?
            .add(&qmat::tensor_product(&id, &sigma.scale_real(p.b[k]))?)?
            .add(&qmat::tensor_product(sigma, sigma)?.scale_real(p.c[k]))?;
    }
    validate_density(&m.scale_real(0.25))
}

/// Sampling scheme for [`random_density`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    /// Normalized complex-Gaussian 4-vector.
    Pure,
    /// `G·G† / Tr(G·G†)` for a complex-Gaussian 4×4 `G`.
    FullRank,
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Draws a random two-qubit state from a caller-owned generator.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, kind: RandomKind) -> DensityMatrix {
    let mat = match kind {
        RandomKind::Pure => {
            let v: Vec<Complex64> = (0..4).map(|_| complex_normal(rng)).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let v: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
            ComplexMatrix::outer(&v).expect("4-vector")
        }
        RandomKind::FullRank => {
            let g: Vec<Complex64> = (0..16).map(|_| complex_normal(rng)).collect();
            let g = ComplexMatrix::from_row_major(4, &g).expect("16 entries");
            let gg = g.matmul(&g.adjoint()).expect("same shape");
            gg.scale_real(1.0 / gg.trace().re)
        }
    };
    from_noisy(&mat).expect("random construction is a valid state")
}

/// [`random_density`] driven by a ChaCha8 generator seeded with `seed`.
pub fn random_density_seeded(seed: u64, kind: RandomKind) -> DensityMatrix {
    random_density(&mut ChaCha8Rng::seed_from_u64(seed), kind)
}

/// Errors from reading a JSON state file.
#[derive(Debug, thiserror::Error)]
pub enum StateFileError {
    /// Malformed JSON or wrong shape; the message carries line and column.
    #[error("{0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid density matrix: {0}")]
    Invalid(#[from] Error),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dim: Dims,
    matrix: Rows,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
struct Dims;

impl TryFrom<Vec<usize>> for Dims {
    type Error = String;

    fn try_from(dims: Vec<usize>) -> std::result::Result<Self, String> {
        if dims == [2, 2] {
            Ok(Dims)
        } else {
            Err(format!("\"dim\" must be [2, 2], got {dims:?}"))
        }
    }
}

impl From<Dims> for Vec<usize> {
    fn from(_: Dims) -> Self {
        vec![2, 2]
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<[f64; 2]>>")]
struct Rows(Vec<Vec<[f64; 2]>>);

impl TryFrom<Vec<Vec<[f64; 2]>>> for Rows {
    type Error = String;

    fn try_from(rows: Vec<Vec<[f64; 2]>>) -> std::result::Result<Self, String> {
        if rows.len() != 4 {
            return Err(format!("\"matrix\" must have 4 rows, got {}", rows.len()));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != 4) {
            return Err(format!(
                "\"matrix\" row {i} has {} entries, expected 4",
                row.len()
            ));
        }
        Ok(Rows(rows))
    }
}

/// Parses the JSON state format: `{"dim": [2,2], "matrix": [[[re, im], ...], ...]}`.
pub fn parse_state_json(text: &str) -> std::result::Result<DensityMatrix, StateFileError> {
    let file: StateFile = serde_json::from_str(text)?;
    let entries: Vec<Complex64> = file
        .matrix
        .0
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    let m = ComplexMatrix::from_row_major(4, &entries)?;
    Ok(validate_density(&m)?)
}

/// Serializes a two-qubit state in the JSON state format.
pub fn state_to_json(rho: &DensityMatrix) -> Result<String> {
    if rho.dim() != 4 {
        return Err(Error::UnsupportedDimension(rho.dim()));
    }
    let m = rho.matrix();
    let rows = (0..4)
        .map(|i| (0..4).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect();
    let file = StateFile {
        dim: Dims,
        matrix: Rows(rows),
    };
    Ok(serde_json::to_string_pretty(&file).expect("plain data serializes"))
}
