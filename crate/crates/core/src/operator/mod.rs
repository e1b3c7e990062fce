//! Hessian operators `F(A) = F̂(λ(A))` on Hermitian matrices, their
//! normalizations `G = F^{1/d}`, and spectral gradients.
//!
//! An operator is described at the eigenvalue level by [`HessianOperator`].
//! Matrix-level evaluation goes through the Hermitian eigensolver.

mod ellipticity;
mod hyperbolic;
mod probes;

pub use ellipticity::{c_r_slack, in_c_r, sample_gamma_r, uniform_ellipticity_estimate, EllipticityReport};
pub use hyperbolic::{hyperbolicity_check, HyperbolicityReport, CONDITIONING_DEGREE};
pub use probes::{
    concavity_probe, garding_comparison_margin, jensen_gap, majorizes, monotonicity_gap,
    schur_concavity_probe, sharpened_comparison_margin, t_transform,
};

use std::fmt;

use rand::Rng;

use crate::error::{check_order, Error, Result};
use crate::linalg::{HermitianMatrix, C64};
use crate::sampling::{random_with_spectrum, sample_cone_point};
use crate::symmetric::{binomial, elementary_symmetric_all, index_sets, ksum_multiset, ln_ma_k, sigma_gradient};

/// Slack required on every defining inequality for a point to count as
/// inside a cone.
pub const CONE_SLACK: f64 = 1e-12;

/// Sampled inequalities are accepted down to this margin.
pub const MARGIN_TOLERANCE: f64 = 1e-10;

/// Eigenvalue-level description of a Hessian operator.
pub trait HessianOperator: Sync {
    fn name(&self) -> String;
    /// Number of eigenvalues `n`.
    fn dim(&self) -> usize;
    /// Homogeneity degree `d`.
    fn degree(&self) -> f64;
    /// `F̂(λ)`; symmetric in `λ`.
    fn eval_hat(&self, lambda: &[f64]) -> f64;
    /// Strict membership in `Γ` with [`CONE_SLACK`].
    fn in_cone_hat(&self, lambda: &[f64]) -> bool;

    /// `∇F̂(λ)`, when available.
    fn gradient_hat(&self, _lambda: &[f64]) -> Option<Vec<f64>> {
        None
    }

    /// `ln F̂(λ)`, or `None` when `F̂(λ) ≤ 0`.
    fn ln_eval_hat(&self, lambda: &[f64]) -> Option<f64> {
        let v = self.eval_hat(lambda);
        (v > 0.0).then(|| v.ln())
    }

    /// `∇ ln F̂(λ)` inside the cone.
    fn ln_gradient_hat(&self, lambda: &[f64]) -> Option<Vec<f64>> {
        let f = self.eval_hat(lambda);
        let g = self.gradient_hat(lambda)?;
        Some(g.into_iter().map(|x| x / f).collect())
    }

    /// Constant `C` with `F(P)^{1/d} ≥ C det(P)^{1/n}` on positive matrices.
    fn garding_constant(&self) -> Option<f64> {
        None
    }

    /// Lower bound on `p` for the `W^{2,p}` regularity statement.
    fn p_threshold(&self) -> f64 {
        p_threshold(self.degree(), self.dim())
    }

    /// Half-width of a coordinate box containing `{λ ∈ Γ : Σλ < R}`, or
    /// `None` when that set is unbounded.
    fn coordinate_bound(&self, _r: f64) -> Option<f64> {
        None
    }
}

/// `Ĝ(λ) = F̂(λ)^{1/d}` inside the cone.
pub fn g_hat<O: HessianOperator + ?Sized>(op: &O, lambda: &[f64]) -> Result<f64> {
    if !op.in_cone_hat(lambda) {
        return Err(Error::OutsideCone(format!("{lambda:?} for {}", op.name())));
    }
    match op.ln_eval_hat(lambda) {
        Some(ln) => Ok((ln / op.degree()).exp()),
        None => Err(Error::OutsideCone(format!("F ≤ 0 at {lambda:?} for {}", op.name()))),
    }
}

/// `∇Ĝ(λ) = Ĝ/d · ∇ln F̂`.
pub fn g_hat_gradient<O: HessianOperator + ?Sized>(op: &O, lambda: &[f64]) -> Result<Vec<f64>> {
    let g = g_hat(op, lambda)?;
    let lg = op
        .ln_gradient_hat(lambda)
        .ok_or_else(|| Error::Precondition(format!("{} has no gradient", op.name())))?;
    let d = op.degree();
    Ok(lg.into_iter().map(|x| g / d * x).collect())
}

/// `Ĝ` extended to the whole space: `0` on the boundary of the cone and
/// `-∞` beyond it. The boundary is detected by nudging along `(1,…,1)`.
pub fn g_hat_extended<O: HessianOperator + ?Sized>(op: &O, lambda: &[f64]) -> f64 {
    if let Ok(g) = g_hat(op, lambda) {
        return g;
    }
    let nudged: Vec<f64> = lambda.iter().map(|x| x + 1e-9).collect();
    if op.in_cone_hat(&nudged) {
        0.0
    } else {
        f64::NEG_INFINITY
    }
}

fn check_matrix<O: HessianOperator + ?Sized>(op: &O, a: &HermitianMatrix) -> Result<()> {
    if a.dim() != op.dim() {
        return Err(Error::DimensionMismatch {
            left: op.dim(),
            right: a.dim(),
        });
    }
    Ok(())
}

/// Whether `λ(A)` lies in the operator's cone.
pub fn matrix_in_cone<O: HessianOperator + ?Sized>(op: &O, a: &HermitianMatrix) -> Result<bool> {
    check_matrix(op, a)?;
    Ok(op.in_cone_hat(a.spectrum()?.values()))
}

/// Cone check applied by [`eval_f`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeCheck {
    /// Error outside the cone.
    Strict,
    /// Evaluate anyway.
    Lenient,
}

/// `F(A) = F̂(λ(A))`.
pub fn eval_f<O: HessianOperator + ?Sized>(op: &O, a: &HermitianMatrix, check: ConeCheck) -> Result<f64> {
    check_matrix(op, a)?;
    let lambda = a.spectrum()?;
    if check == ConeCheck::Strict && !op.in_cone_hat(lambda.values()) {
        return Err(Error::OutsideCone(format!("λ(A) = {:?} for {}", lambda.values(), op.name())));
    }
    Ok(op.eval_hat(lambda.values()))
}

/// `G(A) = F(A)^{1/d}` for `λ(A)` inside the cone.
pub fn eval_g<O: HessianOperator + ?Sized>(op: &O, a: &HermitianMatrix) -> Result<f64> {
    check_matrix(op, a)?;
    g_hat(op, a.spectrum()?.values())
}

/// `DG(A) = U diag(∇Ĝ(λ)) U*`, so that `dG(A)[H] = Trace(DG(A)·H)`.
///
/// Built-in `F̂` are symmetric and smooth, so the partials agree on repeated
/// eigenvalues and the result does not depend on the eigenbasis chosen.
pub fn grad_g<O: HessianOperator + ?Sized>(op: &O, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_matrix(op, a)?;
    let eig = a.eigh()?;
    let partials = g_hat_gradient(op, eig.values.values())?;
    HermitianMatrix::from_eigen(&eig.vectors, &partials)
}

/// Central-difference oracle for [`grad_g`] along the Hermitian basis
/// `E_ii`, `E_ij + E_ji`, `i(E_ij - E_ji)`.
pub fn fd_grad_g<O: HessianOperator + ?Sized>(op: &O, a: &HermitianMatrix, h: f64) -> Result<HermitianMatrix> {
    check_matrix(op, a)?;
    let n = a.dim();
    let directional = |dir: &HermitianMatrix| -> Result<f64> {
        let plus = eval_g(op, &(a + &(dir * h)))?;
        let minus = eval_g(op, &(a - &(dir * h)))?;
        Ok((plus - minus) / (2.0 * h))
    };
    let zero = C64::new(0.0, 0.0);
    let mut entries = vec![zero; n * n];
    for i in 0..n {
        let e = HermitianMatrix::from_fn(n, |r, c| if r == i && c == i { C64::new(1.0, 0.0) } else { zero })?;
        entries[i * n + i] = C64::new(directional(&e)?, 0.0);
        for j in i + 1..n {
            let sym = HermitianMatrix::from_fn(n, |r, c| {
                if (r, c) == (i, j) || (r, c) == (j, i) { C64::new(1.0, 0.0) } else { zero }
            })?;
            let skew = HermitianMatrix::from_fn(n, |r, c| match (r, c) {
                (r, c) if (r, c) == (i, j) => C64::new(0.0, 1.0),
                (r, c) if (r, c) == (j, i) => C64::new(0.0, -1.0),
                _ => zero,
            })?;
            let g = C64::new(directional(&sym)?, directional(&skew)?) * 0.5;
            entries[i * n + j] = g;
            entries[j * n + i] = g.conj();
        }
    }
    HermitianMatrix::from_fn(n, |r, c| entries[r * n + c])
}

/// `n·max(d-1, 1)`.
pub fn p_threshold(d: f64, n: usize) -> f64 {
    n as f64 * (d - 1.0).max(1.0)
}

/// A random eigenvalue vector inside the cone, drawn by rejection from
/// the sampling box.
pub fn sample_lambda<O: HessianOperator + ?Sized, R: Rng>(op: &O, rng: &mut R) -> Option<Vec<f64>> {
    sample_cone_point(rng, op.dim(), |l| op.in_cone_hat(l), 100_000)
}

/// A random Hermitian matrix whose spectrum lies in the cone.
pub fn sample_matrix<O: HessianOperator + ?Sized, R: Rng>(op: &O, rng: &mut R) -> Result<HermitianMatrix> {
    let lambda = sample_lambda(op, rng)
        .ok_or_else(|| Error::Precondition(format!("could not sample the cone of {}", op.name())))?;
    Ok(random_with_spectrum(rng, &lambda))
}

/// The operators shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Builtin {
    /// `Πλ_i` on `Γ_n`, degree `n`.
    Determinant { n: usize },
    /// `σ_k` on `Γ_k`, degree `k`.
    SigmaK { n: usize, k: usize },
    /// `MA_k` on `Γ'_k`, degree `C_n^k`.
    MaK { n: usize, k: usize },
    /// `(λ_1 + sλ_2)(sλ_1 + λ_2)` on `Γ_{2-s}`, `n = 2`, degree 2.
    Interpolated2d { s: f64 },
}

impl Builtin {
    pub fn determinant(n: usize) -> Result<Self> {
        check_order(n, 1)?;
        Ok(Self::Determinant { n })
    }

    pub fn sigma_k(n: usize, k: usize) -> Result<Self> {
        check_order(n, k)?;
        Ok(Self::SigmaK { n, k })
    }

    pub fn ma_k(n: usize, k: usize) -> Result<Self> {
        check_order(n, k)?;
        Ok(Self::MaK { n, k })
    }

    pub fn interpolated_2d(s: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&s) {
            return Err(Error::Input(format!("interpolation parameter s={s} outside [0, 1)")));
        }
        Ok(Self::Interpolated2d { s })
    }

    /// Every built-in with `n ≤ max_n`, plus the interpolated family at
    /// the given parameters.
    pub fn catalog(max_n: usize, s_values: &[f64]) -> Vec<Self> {
        let mut out = Vec::new();
        for n in 1..=max_n {
            out.push(Self::Determinant { n });
            for k in 1..=n {
                out.push(Self::SigmaK { n, k });
                out.push(Self::MaK { n, k });
            }
        }
        out.extend(s_values.iter().map(|&s| Self::Interpolated2d { s }));
        out
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Determinant { n } => write!(f, "det (n={n})"),
            Self::SigmaK { n, k } => write!(f, "sigma_{k} (n={n})"),
            Self::MaK { n, k } => write!(f, "MA_{k} (n={n})"),
            Self::Interpolated2d { s } => write!(f, "interp2d (s={s})"),
        }
    }
}

impl HessianOperator for Builtin {
    fn name(&self) -> String {
        self.to_string()
    }

    fn dim(&self) -> usize {
        match *self {
            Self::Determinant { n } | Self::SigmaK { n, .. } | Self::MaK { n, .. } => n,
            Self::Interpolated2d { .. } => 2,
        }
    }

    fn degree(&self) -> f64 {
        match *self {
            Self::Determinant { n } => n as f64,
            Self::SigmaK { k, .. } => k as f64,
            Self::MaK { n, k } => binomial(n, k) as f64,
            Self::Interpolated2d { .. } => 2.0,
        }
    }

    fn eval_hat(&self, l: &[f64]) -> f64 {
        match *self {
            Self::Determinant { .. } => l.iter().product(),
            Self::SigmaK { k, .. } => elementary_symmetric_all(l)[k],
            Self::MaK { k, .. } => ksum_multiset(l, k).map(|s| s.iter().product()).unwrap_or(f64::NAN),
            Self::Interpolated2d { s } => (l[0] + s * l[1]) * (s * l[0] + l[1]),
        }
    }

    fn in_cone_hat(&self, l: &[f64]) -> bool {
        if l.len() != self.dim() {
            return false;
        }
        match *self {
            Self::Determinant { .. } => l.iter().all(|&x| x > CONE_SLACK),
            // σ_j has degree j, so its slack is measured on σ_j^{1/j}.
            Self::SigmaK { k, .. } => elementary_symmetric_all(l)[1..=k]
                .iter()
                .zip(1..)
                .all(|(&x, j)| x > CONE_SLACK.powi(j)),
            Self::MaK { k, .. } => ksum_multiset(l, k).is_ok_and(|s| s.iter().all(|&x| x > CONE_SLACK)),
            Self::Interpolated2d { s } => l[0] + s * l[1] > CONE_SLACK && s * l[0] + l[1] > CONE_SLACK,
        }
    }

    fn gradient_hat(&self, l: &[f64]) -> Option<Vec<f64>> {
        match *self {
            Self::Determinant { .. } => Some(
                (0..l.len())
                    .map(|i| l.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x).product())
                    .collect(),
            ),
            Self::SigmaK { k, .. } => sigma_gradient(l, k).ok(),
            Self::MaK { k, .. } => {
                // ∂/∂λ_i Π s_I = Σ_{I ∋ i} Π_{J ≠ I} s_J
                let sets = index_sets(l.len(), k).ok()?;
                let sums: Vec<f64> = sets.iter().map(|s| s.sum_over(l)).collect();
                let mut grad = vec![0.0; l.len()];
                for (a, set) in sets.iter().enumerate() {
                    let rest: f64 = sums.iter().enumerate().filter(|&(b, _)| b != a).map(|(_, x)| x).product();
                    for &i in set.indices() {
                        grad[i] += rest;
                    }
                }
                Some(grad)
            }
            Self::Interpolated2d { s } => {
                let (p, q) = (l[0] + s * l[1], s * l[0] + l[1]);
                Some(vec![q + s * p, s * q + p])
            }
        }
    }

    fn ln_eval_hat(&self, l: &[f64]) -> Option<f64> {
        match *self {
            Self::MaK { k, .. } => ln_ma_k(l, k).ok().flatten(),
            _ => {
                let v = self.eval_hat(l);
                (v > 0.0).then(|| v.ln())
            }
        }
    }

    fn ln_gradient_hat(&self, l: &[f64]) -> Option<Vec<f64>> {
        match *self {
            Self::MaK { k, .. } => {
                let mut grad = vec![0.0; l.len()];
                for set in index_sets(l.len(), k).ok()? {
                    let inv = 1.0 / set.sum_over(l);
                    for &i in set.indices() {
                        grad[i] += inv;
                    }
                }
                Some(grad)
            }
            _ => {
                let f = self.eval_hat(l);
                Some(self.gradient_hat(l)?.into_iter().map(|x| x / f).collect())
            }
        }
    }

    fn garding_constant(&self) -> Option<f64> {
        Some(match *self {
            Self::Determinant { .. } => 1.0,
            Self::SigmaK { n, k } => (binomial(n, k) as f64).powf(1.0 / k as f64),
            Self::MaK { k, .. } => k as f64,
            // (λ1+sλ2)(sλ1+λ2) ≥ (1+s)² λ1λ2 by AM-GM on each factor pair
            Self::Interpolated2d { s } => 1.0 + s,
        })
    }

    fn p_threshold(&self) -> f64 {
        match *self {
            Self::MaK { n, k } => n as f64 * (binomial(n, k) as f64 - 1.0),
            _ => p_threshold(self.degree(), self.dim()),
        }
    }

    fn coordinate_bound(&self, r: f64) -> Option<f64> {
        match *self {
            Self::Determinant { n } if n > 1 => Some(r),
            // Γ_2 ∋ λ gives Σλ_i² < (Σλ_i)² < R².
            Self::SigmaK { k, .. } if k >= 2 => Some(r),
            // k-sums positive: λ_i < R, and λ_i > -(k-1) max_j λ_j.
            Self::MaK { n, k } if k < n => Some((k as f64 - 1.0).max(1.0) * r),
            Self::Interpolated2d { s } => Some(r / (1.0 - s)),
            _ => None,
        }
    }
}

type EvalFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type ConeFn = Box<dyn Fn(&[f64]) -> bool + Send + Sync>;
type GradFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A user-supplied operator built from closures.
pub struct CustomOperator {
    name: String,
    dim: usize,
    degree: f64,
    eval: EvalFn,
    cone: ConeFn,
    gradient: Option<GradFn>,
    garding: Option<f64>,
}

impl CustomOperator {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        degree: f64,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        cone: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 || degree.is_nan() || degree <= 0.0 {
            return Err(Error::Input(format!("need n ≥ 1 and d > 0, got n={dim}, d={degree}")));
        }
        Ok(Self {
            name: name.into(),
            dim,
            degree,
            eval: Box::new(eval),
            cone: Box::new(cone),
            gradient: None,
            garding: None,
        })
    }

    pub fn with_gradient(mut self, g: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.gradient = Some(Box::new(g));
        self
    }

    pub fn with_garding_constant(mut self, c: f64) -> Self {
        self.garding = Some(c);
        self
    }
}

impl HessianOperator for CustomOperator {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn degree(&self) -> f64 {
        self.degree
    }
    fn eval_hat(&self, lambda: &[f64]) -> f64 {
        (self.eval)(lambda)
    }
    fn in_cone_hat(&self, lambda: &[f64]) -> bool {
        lambda.len() == self.dim && (self.cone)(lambda)
    }
    fn gradient_hat(&self, lambda: &[f64]) -> Option<Vec<f64>> {
        self.gradient.as_ref().map(|g| g(lambda))
    }
    fn garding_constant(&self) -> Option<f64> {
        self.garding
    }
}

/// Worst violations found by [`spot_check`].
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct SpotReport {
    pub samples: usize,
    pub symmetry: f64,
    pub homogeneity: f64,
    /// Smallest `F̂` seen inside the cone.
    pub min_in_cone: f64,
}

impl SpotReport {
    pub fn passed(&self, rel_tol: f64) -> bool {
        self.symmetry <= rel_tol && self.homogeneity <= rel_tol && self.min_in_cone > 0.0
    }
}

/// Spot tests of symmetry, homogeneity of degree `d`, and positivity of
/// `F̂` on the cone, as relative residuals.
pub fn spot_check<O: HessianOperator + ?Sized, R: Rng>(op: &O, rng: &mut R, samples: usize) -> Result<SpotReport> {
    let mut rep = SpotReport {
        samples,
        min_in_cone: f64::INFINITY,
        ..Default::default()
    };
    for _ in 0..samples {
        let l = sample_lambda(op, rng)
            .ok_or_else(|| Error::Precondition(format!("could not sample the cone of {}", op.name())))?;
        let f = op.eval_hat(&l);
        let scale = f.abs().max(1e-300);
        let mut p = l.clone();
        for i in (1..p.len()).rev() {
            p.swap(i, rng.random_range(0..=i));
        }
        rep.symmetry = rep.symmetry.max((op.eval_hat(&p) - f).abs() / scale);
        let t: f64 = rng.random_range(0.1..5.0);
        let scaled: Vec<f64> = l.iter().map(|x| t * x).collect();
        let expected = t.powf(op.degree()) * f;
        rep.homogeneity = rep.homogeneity.max((op.eval_hat(&scaled) - expected).abs() / expected.abs().max(1e-300));
        rep.min_in_cone = rep.min_in_cone.min(f);
    }
    Ok(rep)
}
