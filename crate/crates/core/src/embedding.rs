//! Realification of Hermitian matrices: `ι: H^n → S^{2n}`, the complex
//! structure `J`, the projection `π` onto `J`-invariant symmetric matrices,
//! and the relation between real and complex Hessians.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{fd_hessian, fd_real_hessian, BuiltinField, ScalarField};
use crate::linalg::{ComplexMatrix, HermitianMatrix, Spectrum, C64};
use crate::sampling::{random_hermitian, seeded_rng};

/// Real symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricRealMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricRealMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// Symmetrizes `f` as `(f(i,j) + f(j,i)) / 2`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut raw = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                raw[i * dim + j] = f(i, j);
            }
        }
        let mut s = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                s.data[i * dim + j] = 0.5 * (raw[i * dim + j] + raw[j * dim + i]);
            }
        }
        s
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn inner(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * t).collect(),
        }
    }

    fn matmul(&self, other: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other[k * n + j];
                }
            }
        }
        out
    }

    /// Spectrum through the complex eigensolver (a real symmetric matrix is Hermitian).
    pub fn spectrum(&self) -> Result<Spectrum> {
        self.as_hermitian().spectrum()
    }

    pub fn det(&self) -> f64 {
        self.as_hermitian().det()
    }

    fn as_hermitian(&self) -> HermitianMatrix {
        HermitianMatrix::from_fn(self.dim, |i, j| C64::new(self.get(i, j), 0.0))
            .expect("symmetric by construction")
    }

    /// `‖S J - J S‖_F`.
    pub fn j_commutator_norm(&self) -> Result<f64> {
        let n = self.even_half()?;
        let j = complex_structure(n);
        let sj = self.matmul(&j);
        let js = dense_mul(&j, &self.data, 2 * n);
        Ok(sj.iter().zip(&js).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
    }

    fn even_half(&self) -> Result<usize> {
        if !self.dim.is_multiple_of(2) {
            return Err(Error::Input(format!(
                "projection needs an even dimension, got {}",
                self.dim
            )));
        }
        Ok(self.dim / 2)
    }
}

fn dense_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

/// `J = [[0, -I], [I, 0]]`, row-major `2n × 2n`.
pub fn complex_structure(n: usize) -> Vec<f64> {
    let d = 2 * n;
    let mut j = vec![0.0; d * d];
    for i in 0..n {
        j[i * d + (n + i)] = -1.0;
        j[(n + i) * d + i] = 1.0;
    }
    j
}

/// `ι(A + iB) = [[A, -B], [B, A]]`.
pub fn iota(h: &HermitianMatrix) -> SymmetricRealMatrix {
    let n = h.dim();
    let mut s = SymmetricRealMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            s.set(i, j, z.re);
            s.set(n + i, n + j, z.re);
            s.set(i, n + j, -z.im);
            s.set(n + i, j, z.im);
        }
    }
    s
}

/// Inverse of [`iota`] on `J`-invariant matrices, reading the `A` and `B` blocks.
pub fn iota_inverse(s: &SymmetricRealMatrix) -> Result<HermitianMatrix> {
    let n = s.even_half()?;
    HermitianMatrix::new(ComplexMatrix::from_fn(n, |i, j| {
        C64::new(s.get(i, j), s.get(n + i, j))
    }))
}

/// `π(S) = (S + JᵀSJ) / 2`.
pub fn pi_projection(s: &SymmetricRealMatrix) -> Result<SymmetricRealMatrix> {
    let n = s.even_half()?;
    let d = 2 * n;
    let j = complex_structure(n);
    let jt: Vec<f64> = (0..d * d).map(|idx| j[(idx % d) * d + idx / d]).collect();
    let jtsj = dense_mul(&dense_mul(&jt, &s.data, d), &j, d);
    Ok(SymmetricRealMatrix::from_fn(d, |a, b| {
        0.5 * (s.get(a, b) + jtsj[a * d + b])
    }))
}

/// `‖ι(2·conj(D²_C u)) - π(D²_R u)‖_F`. The real Hessian comes from central
/// differences; the complex one is the field's closed form when it has one
/// and central differences otherwise.
///
/// With `D²_C u = (u_{i j̄})` and real coordinates ordered `(x, y)`, the real
/// Hessian's `x`-`y` block is `2·Im(u_{i j̄})`, which is the `-B` slot of `ι`
/// evaluated at the entrywise conjugate. Quadratic test fields with a
/// non-real Hessian (such as `x_1 y_2`) fix this orientation.
pub fn hessian_identity_residual<F: ScalarField + ?Sized>(field: &F, z: &[C64], h: f64) -> Result<f64> {
    let complex = field.complex_hessian(z).unwrap_or_else(|| fd_hessian(field, z, h));
    let real = fd_real_hessian(field, z, h);
    let lhs = iota(&(&complex.conj() * 2.0));
    Ok(lhs.distance(&pi_projection(&real)?))
}

/// One row of [`embed_check`].
#[derive(Clone, Debug, Serialize)]
pub struct EmbedRow {
    pub field: String,
    pub point: Vec<[f64; 2]>,
    pub residual: f64,
}

/// Structural residuals of `ι` and `π` on random matrices, plus the
/// Hessian identity across the field catalog.
#[derive(Clone, Debug, Serialize)]
pub struct EmbedReport {
    pub rows: Vec<EmbedRow>,
    pub worst_hessian_residual: f64,
    /// `‖π(π(S)) - π(S)‖_F`
    pub idempotence: f64,
    /// `‖π(S) J - J π(S)‖_F`
    pub commutation: f64,
    /// Distance between `spec ι(A)` and `spec A` with every value doubled.
    pub spectrum_doubling: f64,
}

/// Runs the identity at `points_per_field` regular points of each catalog
/// field and the structural checks on `structural` random matrices.
pub fn embed_check(h: f64, points_per_field: usize, structural: usize, seed: u64) -> Result<EmbedReport> {
    let mut rng = seeded_rng(seed);
    let mut rows = Vec::new();
    for field in BuiltinField::catalog() {
        let n = field.dim();
        let mut found = 0;
        while found < points_per_field {
            let z: Vec<C64> = (0..n)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            if !field.is_regular_point(&z) {
                continue;
            }
            found += 1;
            rows.push(EmbedRow {
                field: field.name(),
                point: z.iter().map(|w| [w.re, w.im]).collect(),
                residual: hessian_identity_residual(&field, &z, h)?,
            });
        }
    }
    let mut rep = EmbedReport {
        worst_hessian_residual: rows.iter().map(|r| r.residual).fold(0.0, f64::max),
        rows,
        idempotence: 0.0,
        commutation: 0.0,
        spectrum_doubling: 0.0,
    };
    for i in 0..structural {
        let n = 1 + i % 4;
        let s = SymmetricRealMatrix::from_fn(2 * n, |_, _| rng.random_range(-1.0..1.0));
        let p = pi_projection(&s)?;
        rep.idempotence = rep.idempotence.max(pi_projection(&p)?.distance(&p));
        rep.commutation = rep.commutation.max(p.j_commutator_norm()?);
        let a = random_hermitian(&mut rng, n, 1.0);
        let doubled: Vec<f64> = a.spectrum()?.values().iter().flat_map(|&x| [x, x]).collect();
        let dist = iota(&a).spectrum()?.distance(&Spectrum::from_unsorted(doubled));
        rep.spectrum_doubling = rep.spectrum_doubling.max(dist);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{BuiltinField, FieldClass, FnField};
    use crate::sampling::{random_hermitian, seeded_rng};
    use rand::Rng;

    #[test]
    fn identity_embeds_to_identity() {
        assert_eq!(iota(&HermitianMatrix::identity(3)), SymmetricRealMatrix::identity(6));
    }

    #[test]
    fn block_layout() {
        let a = HermitianMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, 1.0),
            (1, 0) => C64::new(0.0, -1.0),
            _ => C64::new(0.0, 0.0),
        })
        .unwrap();
        let s = iota(&a);
        // B = [[0, 1], [-1, 0]]; upper-right block is -B, lower-left is B
        assert_eq!(s.get(0, 3), -1.0);
        assert_eq!(s.get(1, 2), 1.0);
        assert_eq!(s.get(2, 1), 1.0);
        assert_eq!(s.get(3, 0), -1.0);
        assert_eq!(s.get(0, 0), 0.0);
        assert_eq!(iota_inverse(&s).unwrap(), a);
    }

    #[test]
    fn j_is_a_complex_structure() {
        for n in 1..=4 {
            let d = 2 * n;
            let j = complex_structure(n);
            let jj = dense_mul(&j, &j, d);
            for a in 0..d {
                for b in 0..d {
                    let expected = if a == b { -1.0 } else { 0.0 };
                    assert_eq!(jj[a * d + b], expected);
                    assert_eq!(j[a * d + b], -j[b * d + a]);
                }
            }
        }
    }

    #[test]
    fn projection_properties() {
        let mut rng = seeded_rng(31);
        for n in 1..=4 {
            let a = random_hermitian(&mut rng, n, 1.0);
            let ia = iota(&a);
            assert!(pi_projection(&ia).unwrap().distance(&ia) <= 1e-12);
            assert!(ia.j_commutator_norm().unwrap() <= 1e-12);

            let s = SymmetricRealMatrix::from_fn(2 * n, |_, _| rng.random_range(-1.0..1.0));
            let p = pi_projection(&s).unwrap();
            assert!(pi_projection(&p).unwrap().distance(&p) <= 1e-12);
            assert!(p.j_commutator_norm().unwrap() <= 1e-12);

            // J-anticommuting: [[C, D], [D, -C]] with C, D symmetric
            let c = SymmetricRealMatrix::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let dd = SymmetricRealMatrix::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let anti = SymmetricRealMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
                (true, true) => c.get(i, j),
                (false, false) => -c.get(i - n, j - n),
                (true, false) => dd.get(i, j - n),
                (false, true) => dd.get(i - n, j),
            });
            assert!(pi_projection(&anti).unwrap().frobenius_norm() <= 1e-12);
        }
        assert!(pi_projection(&SymmetricRealMatrix::zeros(3)).is_err());
    }

    #[test]
    fn isometry_and_determinant() {
        let mut rng = seeded_rng(32);
        for n in 1..=4 {
            let a = random_hermitian(&mut rng, n, 1.0);
            let b = random_hermitian(&mut rng, n, 1.0);
            let lhs = iota(&a).inner(&iota(&b));
            assert!((lhs - 2.0 * a.inner(&b).unwrap()).abs() <= 1e-12);
            let det = a.det();
            assert!((iota(&a).det() - det * det).abs() <= 1e-10 * (1.0 + det * det));
        }
    }

    #[test]
    fn spectrum_doubles() {
        let mut rng = seeded_rng(33);
        for n in 1..=5 {
            let a = random_hermitian(&mut rng, n, 1.0);
            let doubled: Vec<f64> = a.spectrum().unwrap().values().iter().flat_map(|&x| [x, x]).collect();
            let s = iota(&a).spectrum().unwrap();
            assert!(s.distance(&Spectrum::from_unsorted(doubled)) <= 1e-12);
        }
    }

    #[test]
    fn identity_examples() {
        let z = vec![C64::new(0.2, -0.3), C64::new(0.7, 0.1)];
        let sq = BuiltinField::SquaredNorm { n: 2 };
        assert!(hessian_identity_residual(&sq, &z, 1e-4).unwrap() < 1e-6);
        let ph = BuiltinField::PluriharmonicQuadratic { n: 1 };
        assert!(hessian_identity_residual(&ph, &z[..1], 1e-4).unwrap() < 1e-6);
    }

    #[test]
    fn orientation_with_imaginary_hessian() {
        // u = x1·y2 + y1·x2 ... plus an antisymmetric coupling x1·y2 - y1·x2 = Im(z̄1 z2)
        let f = FnField {
            name: "Im(conj(z1) z2)".into(),
            dim: 2,
            class: FieldClass::Quadratic,
            f: |z: &[C64]| (z[0].conj() * z[1]).im,
        };
        let z = vec![C64::new(0.1, 0.2), C64::new(-0.3, 0.4)];
        assert!(hessian_identity_residual(&f, &z, 1e-3).unwrap() < 1e-8);
        let complex = fd_hessian(&f, &z, 1e-3);
        assert!(complex[(0, 1)].im.abs() > 0.1);
    }

    #[test]
    fn catalog_check() {
        let rep = embed_check(1e-4, 3, 20, 5).unwrap();
        assert_eq!(rep.rows.len(), 3 * BuiltinField::catalog().len());
        assert!(rep.worst_hessian_residual <= 1e-4, "{rep:?}");
        assert!(rep.idempotence <= 1e-12 && rep.commutation <= 1e-12);
        assert!(rep.spectrum_doubling <= 1e-10);
    }
}
