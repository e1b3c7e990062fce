//! Dense complex Hermitian linear algebra.
//!
//! Everything here is sized for the small matrices that show up in this
//! crate (a Hessian in `C^n` and its additive compounds, so at most a few
//! dozen rows). The eigensolver is a cyclic complex Jacobi iteration and the
//! determinant goes through an independent LU factorization, so the two can
//! be used to cross-check each other.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative asymmetry accepted (and then symmetrized away) at construction.
pub const HERMITIAN_TOLERANCE: f64 = 1e-9;
/// Off-diagonal stopping threshold of the Jacobi sweeps, relative to `‖A‖_F`.
pub const JACOBI_TOLERANCE: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 64;

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_row_major(n: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Determinant by LU factorization with partial pivoting.
    pub fn det(&self) -> C64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = C64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
                .unwrap_or(col);
            let p = a[pivot * n + col];
            if p.norm() == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= factor * v;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// An `n × n` complex Hermitian matrix.
///
/// Construction symmetrizes the input exactly, so `a[(j, i)] == a[(i, j)].conj()`
/// holds bit-for-bit and the diagonal is real.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Accepts `m` if `‖m - m*‖_F ≤ 1e-9 · max(1, ‖m‖_F)` and returns `(m + m*)/2`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.n == 0 {
            return Err(Error::Input("matrix dimension must be positive".into()));
        }
        if m.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        let adj = m.adjoint();
        let residual = m.distance(&adj);
        if residual > HERMITIAN_TOLERANCE * m.frobenius_norm().max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self::symmetrized(m))
    }

    fn symmetrized(m: ComplexMatrix) -> Self {
        let n = m.n;
        let mut out = m;
        for i in 0..n {
            out[(i, i)] = C64::new(out[(i, i)].re, 0.0);
            for j in i + 1..n {
                let avg = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        Self(out)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(ComplexMatrix::from_fn(n, f))
    }

    /// Builds from separate real and imaginary parts (row-major).
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: im.len(),
            });
        }
        for row in re.iter().chain(im) {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
        }
        Self::from_fn(n, |i, j| C64::new(re[i][j], im[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = ComplexMatrix::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Self(m)
    }

    /// `U diag(values) U*` for a (unitary) `U`.
    pub fn from_eigen(vectors: &ComplexMatrix, values: &[f64]) -> Result<Self> {
        let n = vectors.dim();
        if values.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: values.len(),
            });
        }
        let m = ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| vectors[(i, k)] * values[k] * vectors[(j, k)].conj())
                .sum()
        });
        Ok(Self::symmetrized(m))
    }

    pub fn dim(&self) -> usize {
        self.0.n
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.0[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    /// `⟨A, B⟩ = Trace(AB)`, which is real for Hermitian arguments.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.same_dim(other)?;
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.0[(i, j)] * other.0[(j, i)]).re;
            }
        }
        Ok(acc)
    }

    /// Entrywise conjugate (equivalently the transpose).
    pub fn conj(&self) -> Self {
        Self(ComplexMatrix::from_fn(self.dim(), |i, j| self.0[(i, j)].conj()))
    }

    pub fn real_part(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.0[(i, j)].re).collect()).collect()
    }

    pub fn imag_part(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.0[(i, j)].im).collect()).collect()
    }

    /// `t·self + (1-t)·other`.
    pub fn lerp(&self, other: &Self, t: f64) -> Result<Self> {
        self.same_dim(other)?;
        Ok(self * t + &(other * (1.0 - t)))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.0.distance(&other.0)
    }

    pub fn det(&self) -> f64 {
        self.0.det().re
    }

    pub fn eigh(&self) -> Result<Eigen> {
        let (values, vectors) = jacobi(self, true)?;
        Ok(Eigen {
            values,
            vectors: vectors.expect("vectors requested"),
        })
    }

    /// Eigenvalues only; skips accumulating the rotations.
    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(jacobi(self, false)?.0)
    }

    pub fn in_cone(&self, cone: MatrixCone) -> Result<bool> {
        match cone {
            MatrixCone::PositiveDefinite => Ok(self.spectrum()?.min() > 0.0),
            MatrixCone::PositiveTrace => Ok(self.trace() > 0.0),
        }
    }

    pub(crate) fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            n: self.dim(),
            re: self.real_part(),
            im: self.imag_part(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text)?;
        file.into_hermitian()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("matrix serialization")
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl fmt::Display for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let z = self.0[(i, j)];
                    format!("{:>10.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in addition");
        let data = self.0.data.iter().zip(&rhs.0.data).map(|(a, b)| a + b).collect();
        HermitianMatrix(ComplexMatrix { n: self.dim(), data })
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in subtraction");
        let data = self.0.data.iter().zip(&rhs.0.data).map(|(a, b)| a - b).collect();
        HermitianMatrix(ComplexMatrix { n: self.dim(), data })
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, t: f64) -> HermitianMatrix {
        let data = self.0.data.iter().map(|a| a * t).collect();
        HermitianMatrix(ComplexMatrix { n: self.dim(), data })
    }
}

impl Mul<f64> for HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, t: f64) -> HermitianMatrix {
        &self * t
    }
}

impl Add<&HermitianMatrix> for HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        &self + rhs
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        self * -1.0
    }
}

/// Eigenvalues sorted in ascending order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.0.last().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn product(&self) -> f64 {
        self.0.iter().product()
    }

    /// Largest entrywise gap between two sorted spectra of equal length,
    /// i.e. the matching distance, which bounds the Hausdorff distance.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `A = U diag(values) U*` with eigenvectors stored as columns of `vectors`.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Spectrum,
    pub vectors: ComplexMatrix,
}

impl Eigen {
    pub fn reconstruct(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::from_eigen(&self.vectors, self.values.values())
    }
}

/// The two reference matrix cones: positive-definite matrices `C_n` and
/// the half-space of positive trace `C_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixCone {
    PositiveDefinite,
    PositiveTrace,
}

/// JSON layout used for matrix input and output.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn into_hermitian(self) -> Result<HermitianMatrix> {
        if self.re.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: self.re.len(),
            });
        }
        HermitianMatrix::from_parts(&self.re, &self.im)
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.n;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi(a: &HermitianMatrix, want_vectors: bool) -> Result<(Spectrum, Option<ComplexMatrix>)> {
    let n = a.dim();
    let mut m = a.0.clone();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let threshold = JACOBI_TOLERANCE * m.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off <= threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, v.as_mut(), p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = Spectrum(order.iter().map(|&i| m[(i, i)].re).collect());
    let vectors = v.map(|v| ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]));
    Ok((values, vectors))
}

/// Annihilates `m[(p, q)]` with `G = diag(1, e^{-iφ}) · R(θ)` acting on
/// coordinates `p, q`, where `φ = arg m[(p, q)]`; then `m ← G* m G`, `v ← v G`.
fn rotate(m: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let g = m[(p, q)];
    let abs_g = g.norm();
    if abs_g == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * abs_g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta < 0.0 { -1.0 } else { 1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = (g / abs_g).conj();

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    let n = m.n;
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * g_pp + mkq * g_qp;
        m[(k, q)] = mkp * g_pq + mkq * g_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * mpk + g_qp.conj() * mqk;
        m[(q, k)] = g_pq.conj() * mpk + g_qq.conj() * mqk;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    let Some(v) = v else { return };
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_hermitian, seeded_rng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_spectrum() {
        let s = HermitianMatrix::identity(3).spectrum().unwrap();
        assert_eq!(s.values(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let s = HermitianMatrix::from_real_diagonal(&[3.0, 1.0, 2.0])
            .spectrum()
            .unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_with_imaginary_coupling() {
        // (2 - λ)^2 - |i|^2 = 0  →  λ = 1, 3
        let a = HermitianMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(0.0, 1.0),
            (1, 0) => c(0.0, -1.0),
            _ => c(2.0, 0.0),
        })
        .unwrap();
        let s = a.spectrum().unwrap();
        assert!((s.values()[0] - 1.0).abs() < 1e-14);
        assert!((s.values()[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_fn(2, |i, j| if i < j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn small_asymmetry_is_symmetrized() {
        let m = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(1.0, 1e-12),
            (1, 0) => c(1.0, 0.0),
            (0, 0) => c(2.0, 1e-13),
            _ => c(2.0, 0.0),
        });
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h[(0, 1)], h[(1, 0)].conj());
        assert_eq!(h[(0, 0)].im, 0.0);
    }

    #[test]
    fn rejects_non_finite() {
        let m = ComplexMatrix::from_fn(1, |_, _| c(f64::NAN, 0.0));
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NonFinite(_))));
    }

    #[test]
    fn frobenius_inner_basics() {
        let id = HermitianMatrix::identity(4);
        assert_eq!(id.inner(&id).unwrap(), 4.0);
        let mut rng = seeded_rng(7);
        for _ in 0..20 {
            let a = random_hermitian(&mut rng, 4, 1.0);
            let b = random_hermitian(&mut rng, 4, 1.0);
            assert!((a.inner(&id).unwrap() - a.trace()).abs() < 1e-12);
            // direct double sum Σ a_ij conj(b_ij)
            let mut direct = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    direct += (a[(i, j)] * b[(i, j)].conj()).re;
                }
            }
            let ab = a.inner(&b).unwrap();
            assert!((ab - direct).abs() < 1e-12);
            assert!((ab - b.inner(&a).unwrap()).abs() < 1e-12);
        }
        assert!(matches!(
            id.inner(&HermitianMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cone_membership() {
        let id = HermitianMatrix::identity(2);
        assert!(id.in_cone(MatrixCone::PositiveDefinite).unwrap());
        assert!(id.in_cone(MatrixCone::PositiveTrace).unwrap());
        let d = HermitianMatrix::from_real_diagonal(&[-1.0, 3.0]);
        assert!(!d.in_cone(MatrixCone::PositiveDefinite).unwrap());
        assert!(d.in_cone(MatrixCone::PositiveTrace).unwrap());

        let mut rng = seeded_rng(11);
        for _ in 0..50 {
            let a = random_hermitian(&mut rng, 5, 1.0);
            let shift = a.spectrum().unwrap().min().abs() + 0.1;
            let b = &a + &(&HermitianMatrix::identity(5) * shift);
            assert!(b.in_cone(MatrixCone::PositiveDefinite).unwrap());
        }
    }

    #[test]
    fn reconstruction_and_unitarity() {
        let mut rng = seeded_rng(3);
        for n in 1..=8 {
            for _ in 0..10 {
                let a = random_hermitian(&mut rng, n, 2.0);
                let eig = a.eigh().unwrap();
                let back = eig.reconstruct().unwrap();
                assert!(back.distance(&a) <= 1e-10 * (1.0 + a.frobenius_norm()));
                let uu = eig.vectors.adjoint().matmul(&eig.vectors).unwrap();
                assert!(uu.distance(&ComplexMatrix::identity(n)) <= 1e-10);
                let s = eig.values;
                assert!(s.values().windows(2).all(|w| w[0] <= w[1]));
                assert!((s.sum() - a.trace()).abs() <= 1e-9 * (1.0 + a.trace().abs()));
                let det = a.det();
                assert!((s.product() - det).abs() <= 1e-9 * (1.0 + det.abs()));
            }
        }
    }

    #[test]
    fn json_round_trip_symmetrizes() {
        let text = r#"{"n":2,"re":[[1.0,0.5],[0.5,2.0]],"im":[[0.0,0.25],[-0.25,0.0]]}"#;
        let a = HermitianMatrix::from_json(text).unwrap();
        assert_eq!(a[(0, 1)], c(0.5, 0.25));
        let again = HermitianMatrix::from_json(&a.to_json()).unwrap();
        assert_eq!(a, again);
        assert!(HermitianMatrix::from_json(r#"{"n":2,"re":[[1.0]],"im":[[0.0]]}"#).is_err());
    }

    #[test]
    fn lu_determinant_matches_closed_form() {
        let a = HermitianMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(1.0, 2.0),
            (1, 0) => c(1.0, -2.0),
            (0, 0) => c(4.0, 0.0),
            _ => c(3.0, 0.0),
        })
        .unwrap();
        assert!((a.det() - (12.0 - 5.0)).abs() < 1e-12);
    }
}
