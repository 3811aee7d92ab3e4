//! Dense complex matrix kernel for one- and two-qubit operators.
//!
//! Everything here is fixed-size: a [`ComplexMatrix`] is either 2×2 or 4×4,
//! stored row-major in an inline array so values are `Copy` and never
//! allocate. Two-qubit matrices use the `A ⊗ B` ordering with `A` as the
//! first tensor factor, so the computational basis runs `|00⟩, |01⟩, |10⟩, |11⟩`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute tolerance for matrix comparisons.
pub const TOLERANCE: f64 = 1e-10;

const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which factor of `A ⊗ B` to keep when tracing out the other one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A 2×2 or 4×4 complex matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; 16],
}

impl ComplexMatrix {
    fn blank(dim: usize) -> Self {
        debug_assert!(dim == 2 || dim == 4);
        Self {
            dim,
            data: [ZERO; 16],
        }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::blank(dim))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from `dim²` row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut m = Self::blank(dim);
        m.data[..dim * dim].copy_from_slice(entries);
        Ok(m)
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let entries: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_row_major(dim, &entries)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            m.data[i * m.dim + i] = Complex64::new(v, 0.0);
        }
        Ok(m)
    }

    /// `|v⟩⟨v|` for a 2- or 4-component vector.
    pub fn outer(v: &[Complex64]) -> Result<Self> {
        let dim = v.len();
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = v[i] * v[j].conj();
            }
        }
        Ok(m)
    }

    pub fn pauli_x() -> Self {
        let mut m = Self::blank(2);
        m.data[1] = ONE;
        m.data[2] = ONE;
        m
    }

    pub fn pauli_y() -> Self {
        let mut m = Self::blank(2);
        m.data[1] = Complex64::new(0.0, -1.0);
        m.data[2] = Complex64::new(0.0, 1.0);
        m
    }

    pub fn pauli_z() -> Self {
        let mut m = Self::blank(2);
        m.data[0] = ONE;
        m.data[3] = -ONE;
        m
    }

    /// The three Pauli matrices in `x, y, z` order.
    pub fn paulis() -> [Self; 3] {
        [Self::pauli_x(), Self::pauli_y(), Self::pauli_z()]
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        assert!(row < self.dim && col < self.dim, "index out of bounds");
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(row < self.dim && col < self.dim, "index out of bounds");
        self.data[row * self.dim + col] = value;
    }

    /// Row-major view of the `dim²` entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::blank(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= factor);
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= factor);
        out
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs, "add")?;
        let mut out = *self;
        out.data.iter_mut().zip(rhs.data.iter()).for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs, "sub")?;
        let mut out = *self;
        out.data.iter_mut().zip(rhs.data.iter()).for_each(|(a, b)| *a -= b);
        Ok(out)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs, "matmul")?;
        let n = self.dim;
        let mut out = Self::blank(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Largest entrywise modulus of `m - m†`.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `(m + m†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = *self;
        for i in 0..n {
            out.data[i * n + i] = Complex64::new(self.data[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let avg = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                out.data[i * n + j] = avg;
                out.data[j * n + i] = avg.conj();
            }
        }
        out
    }

    fn check_same(&self, rhs: &Self, op: &'static str) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                op,
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.data[i * self.dim + j];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// Kronecker product `a ⊗ b` of two 2×2 matrices.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(Error::DimensionMismatch {
            op: "tensor_product",
            left: a.dim,
            right: b.dim,
        });
    }
    let mut out = ComplexMatrix::blank(4);
    for i in 0..2 {
        for j in 0..2 {
            let aij = a.data[i * 2 + j];
            for k in 0..2 {
                for l in 0..2 {
                    out.data[(2 * i + k) * 4 + (2 * j + l)] = aij * b.data[k * 2 + l];
                }
            }
        }
    }
    Ok(out)
}

/// Reduces a 4×4 two-qubit operator to the factor named by `keep`.
pub fn partial_trace(m: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if m.dim != 4 {
        return Err(Error::DimensionMismatch {
            op: "partial_trace",
            left: m.dim,
            right: 4,
        });
    }
    let mut out = ComplexMatrix::blank(2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = ZERO;
            for s in 0..2 {
                let (row, col) = match keep {
                    Subsystem::A => (2 * i + s, 2 * j + s),
                    Subsystem::B => (2 * s + i, 2 * s + j),
                };
                acc += m.data[row * 4 + col];
            }
            out.data[i * 2 + j] = acc;
        }
    }
    Ok(out)
}

/// `k · rho · k†`, unnormalized.
pub fn sandwich(k: &ComplexMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    k.matmul(rho)?.matmul(&k.adjoint())
}

/// Eigenvalues of a self-adjoint matrix in descending order, by cyclic
/// complex Jacobi rotations.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let asymmetry = m.max_asymmetry();
    if asymmetry > TOLERANCE {
        return Err(Error::NotSelfAdjoint { asymmetry });
    }
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_OFF_DIAGONAL_TOL {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= JACOBI_OFF_DIAGONAL_TOL {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a.data[i * n + i].re).collect();
    eigs.sort_by(|x, y| y.total_cmp(x));
    Ok(eigs)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.data[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Applies `G† A G` with `G` chosen to annihilate entry `(p, q)`.
///
/// `G` first removes the phase of `a_pq` and then performs the real
/// symmetric Jacobi rotation on the resulting block.
fn jacobi_rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim;
    let apq = a.data[p * n + q];
    let magnitude = apq.norm();
    if magnitude < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / magnitude;
    let app = a.data[p * n + p].re;
    let aqq = a.data[q * n + q].re;
    let tau = (aqq - app) / (2.0 * magnitude);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // Columns p and q of G; every other column is a unit vector.
    let g_pp = Complex64::new(c, 0.0);
    let g_qp = -phase.conj() * s;
    let g_pq = Complex64::new(s, 0.0);
    let g_qq = phase.conj() * c;

    // A <- A G (columns p, q).
    for k in 0..n {
        let akp = a.data[k * n + p];
        let akq = a.data[k * n + q];
        a.data[k * n + p] = akp * g_pp + akq * g_qp;
        a.data[k * n + q] = akp * g_pq + akq * g_qq;
    }
    // A <- G† A (rows p, q).
    for k in 0..n {
        let apk = a.data[p * n + k];
        let aqk = a.data[q * n + k];
        a.data[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a.data[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a.data[p * n + q] = ZERO;
    a.data[q * n + p] = ZERO;
    a.data[p * n + p].im = 0.0;
    a.data[q * n + q].im = 0.0;
}

/// Real Pauli coordinates `(α, v)` of a self-adjoint 2×2 matrix `α I + v·σ`.
pub fn pauli_coordinates(m: &ComplexMatrix) -> Result<(f64, [f64; 3])> {
    if m.dim != 2 {
        return Err(Error::DimensionMismatch {
            op: "pauli_coordinates",
            left: m.dim,
            right: 2,
        });
    }
    let d = &m.data;
    let alpha = 0.5 * (d[0].re + d[3].re);
    let vx = 0.5 * (d[1].re + d[2].re);
    let vy = 0.5 * (d[2].im - d[1].im);
    let vz = 0.5 * (d[0].re - d[3].re);
    Ok((alpha, [vx, vy, vz]))
}

/// Natural logarithm of a positive-definite self-adjoint 2×2 matrix.
pub fn hermitian_log_2x2(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let asymmetry = m.max_asymmetry();
    if asymmetry > TOLERANCE {
        return Err(Error::NotSelfAdjoint { asymmetry });
    }
    let (alpha, v) = pauli_coordinates(m)?;
    let radius = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let (hi, lo) = (alpha + radius, alpha - radius);
    if lo <= 0.0 {
        return Err(Error::Singular { eigenvalue: lo });
    }
    let mean_log = 0.5 * (hi.ln() + lo.ln());
    let mut out = ComplexMatrix::identity(2)?.scale_real(mean_log);
    if radius > 0.0 {
        let half_gap = 0.5 * (hi.ln() - lo.ln()) / radius;
        for (sigma, component) in ComplexMatrix::paulis().iter().zip(v) {
            out = out.add(&sigma.scale_real(half_gap * component))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_2x2(vals: &[f64]) -> ComplexMatrix {
        let entries: Vec<Complex64> = vals.chunks(2).map(|p| c(p[0], p[1])).collect();
        ComplexMatrix::from_row_major(2, &entries).unwrap()
    }

    fn hermitian_from(vals: &[f64], dim: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim).unwrap();
        let mut it = vals.iter().copied();
        for i in 0..dim {
            m.set(i, i, c(it.next().unwrap(), 0.0));
            for j in (i + 1)..dim {
                let z = c(it.next().unwrap(), it.next().unwrap());
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        m
    }

    #[test]
    fn tensor_examples() {
        let ket0 = ComplexMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let half = ComplexMatrix::identity(2).unwrap().scale_real(0.5);
        let t = tensor_product(&ket0, &half).unwrap();
        let expected = ComplexMatrix::diagonal(&[0.5, 0.5, 0.0, 0.0]).unwrap();
        assert!(t.max_abs_diff(&expected) < 1e-15);

        let id = ComplexMatrix::identity(2).unwrap();
        let t = tensor_product(&id, &id).unwrap();
        assert!(t.max_abs_diff(&ComplexMatrix::identity(4).unwrap()) < 1e-15);

        let x = ComplexMatrix::pauli_x();
        let t = tensor_product(&x, &x).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(t.get(i, j), c(want, 0.0));
            }
        }
    }

    #[test]
    fn tensor_rejects_4x4() {
        let id4 = ComplexMatrix::identity(4).unwrap();
        let id2 = ComplexMatrix::identity(2).unwrap();
        assert!(matches!(
            tensor_product(&id4, &id2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_examples() {
        let rho_a = ComplexMatrix::from_row_major(2, &[c(0.7, 0.0), c(0.1, -0.2), c(0.1, 0.2), c(0.3, 0.0)])
            .unwrap();
        let rho_b = ComplexMatrix::diagonal(&[0.4, 0.6]).unwrap();
        let prod = tensor_product(&rho_a, &rho_b).unwrap();
        assert!(partial_trace(&prod, Subsystem::A).unwrap().max_abs_diff(&rho_a) < 1e-15);
        assert!(partial_trace(&prod, Subsystem::B).unwrap().max_abs_diff(&rho_b) < 1e-15);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi_plus = ComplexMatrix::outer(&[c(s, 0.0), ZERO, ZERO, c(s, 0.0)]).unwrap();
        let half = ComplexMatrix::identity(2).unwrap().scale_real(0.5);
        assert!(partial_trace(&phi_plus, Subsystem::A).unwrap().max_abs_diff(&half) < 1e-15);

        assert!(partial_trace(&half, Subsystem::A).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let half = ComplexMatrix::identity(2).unwrap().scale_real(0.5);
        let e = hermitian_eigenvalues(&half).unwrap();
        assert_eq!(e, vec![0.5, 0.5]);

        // Singlet mixture: (1+3z)/4 once and (1-z)/4 three times.
        let z = 0.37;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = ComplexMatrix::outer(&[ZERO, c(s, 0.0), c(-s, 0.0), ZERO]).unwrap();
        let w = singlet
            .scale_real(z)
            .add(&ComplexMatrix::identity(4).unwrap().scale_real((1.0 - z) / 4.0))
            .unwrap();
        let e = hermitian_eigenvalues(&w).unwrap();
        assert!((e[0] - (1.0 + 3.0 * z) / 4.0).abs() < 1e-12);
        for v in &e[1..] {
            assert!((v - (1.0 - z) / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let mut m = ComplexMatrix::identity(4).unwrap().scale_real(0.25);
        m.set(0, 1, c(1e-3, 0.0));
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn sandwich_examples() {
        let rho = ComplexMatrix::from_row_major(2, &[c(0.7, 0.0), c(0.1, -0.2), c(0.1, 0.2), c(0.3, 0.0)])
            .unwrap();
        let k = ComplexMatrix::identity(2).unwrap().scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!(sandwich(&k, &rho).unwrap().max_abs_diff(&rho.scale_real(0.5)) < 1e-15);

        let pi0 = ComplexMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let ket1 = ComplexMatrix::diagonal(&[0.0, 1.0]).unwrap();
        assert!(sandwich(&pi0, &ket1).unwrap().max_abs_diff(&ComplexMatrix::zeros(2).unwrap()) < 1e-15);

        let h = ComplexMatrix::from_real(2, &[1.0, 1.0, 1.0, -1.0]).unwrap().scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!((sandwich(&h, &rho).unwrap().trace() - ONE).norm() < 1e-15);

        let id4 = ComplexMatrix::identity(4).unwrap();
        assert!(sandwich(&h, &id4).is_err());
    }

    #[test]
    fn log_of_diagonal_and_rotated() {
        let d = ComplexMatrix::diagonal(&[0.8, 0.2]).unwrap();
        let l = hermitian_log_2x2(&d).unwrap();
        let want = ComplexMatrix::diagonal(&[0.8_f64.ln(), 0.2_f64.ln()]).unwrap();
        assert!(l.max_abs_diff(&want) < 1e-14);

        let singular = ComplexMatrix::diagonal(&[1.0, 0.0]).unwrap();
        assert!(matches!(hermitian_log_2x2(&singular), Err(Error::Singular { .. })));
    }

    proptest! {
        #[test]
        fn tensor_is_bilinear(a in prop::collection::vec(-1.0..1.0f64, 8),
                              b in prop::collection::vec(-1.0..1.0f64, 8),
                              re in -2.0..2.0f64, im in -2.0..2.0f64) {
            let (a, b) = (random_2x2(&a), random_2x2(&b));
            let alpha = c(re, im);
            let lhs = tensor_product(&a.scale(alpha), &b).unwrap();
            let rhs = tensor_product(&a, &b).unwrap().scale(alpha);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn partial_trace_of_product(a in prop::collection::vec(-1.0..1.0f64, 8),
                                    b in prop::collection::vec(-1.0..1.0f64, 8)) {
            let (a, b) = (random_2x2(&a), random_2x2(&b));
            let reduced = partial_trace(&tensor_product(&a, &b).unwrap(), Subsystem::A).unwrap();
            prop_assert!(reduced.max_abs_diff(&a.scale(b.trace())) < 1e-12);
        }

        #[test]
        fn eigenvalues_sum_to_trace(vals in prop::collection::vec(-1.0..1.0f64, 16)) {
            let m = hermitian_from(&vals, 4);
            let e = hermitian_eigenvalues(&m).unwrap();
            prop_assert!((e.iter().sum::<f64>() - m.trace().re).abs() < 1e-10);
            prop_assert!(e.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn projector_eigenvalues_are_binary(vals in prop::collection::vec(-1.0..1.0f64, 8)) {
            let v: Vec<Complex64> = vals.chunks(2).map(|p| c(p[0], p[1])).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-3);
            let v: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
            let p = ComplexMatrix::outer(&v).unwrap();
            for e in hermitian_eigenvalues(&p).unwrap() {
                prop_assert!(e.abs() < 1e-10 || (e - 1.0).abs() < 1e-10);
            }
        }

        #[test]
        fn sandwich_keeps_self_adjointness(k in prop::collection::vec(-1.0..1.0f64, 32),
                                           h in prop::collection::vec(-1.0..1.0f64, 16)) {
            let entries: Vec<Complex64> = k.chunks(2).map(|p| c(p[0], p[1])).collect();
            let k = ComplexMatrix::from_row_major(4, &entries).unwrap();
            let rho = hermitian_from(&h, 4);
            prop_assert!(sandwich(&k, &rho).unwrap().max_asymmetry() < 1e-12);
        }

        #[test]
        fn log_exponentiates_back(vals in prop::collection::vec(-1.0..1.0f64, 3), shift in 1.8..3.0f64) {
            let m = hermitian_from(&[shift + vals[0], vals[1], vals[2], shift - vals[0]], 2);
            let l = hermitian_log_2x2(&m).unwrap();
            // Eigenvalues of log m are the logs of the eigenvalues of m.
            let em = hermitian_eigenvalues(&m).unwrap();
            let el = hermitian_eigenvalues(&l).unwrap();
            prop_assert!((el[0] - em[0].ln()).abs() < 1e-12);
            prop_assert!((el[1] - em[1].ln()).abs() < 1e-12);
        }
    }
}
