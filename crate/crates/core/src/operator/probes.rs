//! Sampled inequalities: Gårding comparison, concavity, Schur-concavity,
//! Jensen, monotonicity. Each returns a margin that should be `≥ 0`.

use super::{check_matrix, eval_f, eval_g, g_hat, g_hat_extended, matrix_in_cone, ConeCheck, HessianOperator};
use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, MatrixCone};

fn require_in_cone<O: HessianOperator + ?Sized>(op: &O, a: &HermitianMatrix, what: &str) -> Result<()> {
    if !matrix_in_cone(op, a)? {
        return Err(Error::OutsideCone(format!("{what} for {}", op.name())));
    }
    Ok(())
}

/// `G(A)`, reporting `what` when `λ(A)` is outside the cone. One
/// eigendecomposition serves both the check and the value.
fn g_named<O: HessianOperator + ?Sized>(op: &O, a: &HermitianMatrix, what: &str) -> Result<f64> {
    check_matrix(op, a)?;
    let lambda = a.spectrum()?;
    if !op.in_cone_hat(lambda.values()) {
        return Err(Error::OutsideCone(format!("{what} for {}", op.name())));
    }
    g_hat(op, lambda.values())
}

fn require_positive(p: &HermitianMatrix) -> Result<()> {
    if !p.in_cone(MatrixCone::PositiveDefinite)? {
        return Err(Error::Precondition("P must be positive-definite".into()));
    }
    Ok(())
}

/// `det(P)^{1/n}` from the spectrum, which is positive here.
fn det_root(p: &HermitianMatrix) -> Result<f64> {
    let l = p.spectrum()?;
    Ok((l.values().iter().map(|x| x.ln()).sum::<f64>() / l.len() as f64).exp())
}

/// `F(P)^{1/d} - C·det(P)^{1/n}` for positive-definite `P`.
pub fn garding_comparison_margin<O: HessianOperator + ?Sized>(op: &O, p: &HermitianMatrix, c: f64) -> Result<f64> {
    check_matrix(op, p)?;
    require_positive(p)?;
    Ok(eval_g(op, p)? - c * det_root(p)?)
}

/// `G(A + P) - G(A) - C·det(P)^{1/n}` for `A` in the cone and positive `P`.
pub fn sharpened_comparison_margin<O: HessianOperator + ?Sized>(
    op: &O,
    a: &HermitianMatrix,
    p: &HermitianMatrix,
    c: f64,
) -> Result<f64> {
    check_matrix(op, p)?;
    let ga = g_named(op, a, "A")?;
    require_positive(p)?;
    Ok(eval_g(op, &(a + p))? - ga - c * det_root(p)?)
}

/// `F(A + Q) - F(A)` for `A` in the cone and positive-semidefinite `Q`.
pub fn monotonicity_gap<O: HessianOperator + ?Sized>(op: &O, a: &HermitianMatrix, q: &HermitianMatrix) -> Result<f64> {
    require_in_cone(op, a, "A")?;
    check_matrix(op, q)?;
    if q.spectrum()?.min() < -1e-12 {
        return Err(Error::Precondition("Q must be positive-semidefinite".into()));
    }
    Ok(eval_f(op, &(a + q), ConeCheck::Strict)? - eval_f(op, a, ConeCheck::Strict)?)
}

/// `G(tA + (1-t)B) - tG(A) - (1-t)G(B)`. The mixture is required to stay
/// in the cone; leaving it is reported as an error.
pub fn concavity_probe<O: HessianOperator + ?Sized>(
    op: &O,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    t: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Input(format!("t={t} outside [0, 1]")));
    }
    let ga = g_named(op, a, "A")?;
    let gb = g_named(op, b, "B")?;
    let mix = g_named(op, &a.lerp(b, t)?, &format!("convex combination at t={t}"))?;
    Ok(mix - t * ga - (1.0 - t) * gb)
}

/// Whether `mu` majorizes `lambda`: equal totals and every prefix sum of
/// the ascending sort of `lambda` at least that of `mu`.
pub fn majorizes(mu: &[f64], lambda: &[f64], tol: f64) -> bool {
    if mu.len() != lambda.len() {
        return false;
    }
    let sorted = |v: &[f64]| {
        let mut s = v.to_vec();
        s.sort_by(f64::total_cmp);
        s
    };
    let (m, l) = (sorted(mu), sorted(lambda));
    let scale = 1.0 + m.iter().chain(&l).map(|x| x.abs()).fold(0.0, f64::max);
    let (mut pm, mut pl) = (0.0, 0.0);
    for (x, y) in m.iter().zip(&l) {
        pm += x;
        pl += y;
        if pl < pm - tol * scale {
            return false;
        }
    }
    (pl - pm).abs() <= tol * scale
}

/// `t·μ + (1-t)·μ∘(i j)`, a T-transform of `μ`; the result is majorized by `μ`.
pub fn t_transform(mu: &[f64], i: usize, j: usize, t: f64) -> Vec<f64> {
    let mut out = mu.to_vec();
    out[i] = t * mu[i] + (1.0 - t) * mu[j];
    out[j] = t * mu[j] + (1.0 - t) * mu[i];
    out
}

/// `Ĝ(λ) - Ĝ(μ)` when `μ` majorizes `λ`. `λ` must lie in the cone; `Ĝ(μ)`
/// is taken as 0 on the boundary and `-∞` beyond it.
pub fn schur_concavity_probe<O: HessianOperator + ?Sized>(op: &O, lambda: &[f64], mu: &[f64]) -> Result<f64> {
    if !majorizes(mu, lambda, 1e-12) {
        return Err(Error::Precondition(format!("{mu:?} does not majorize {lambda:?}")));
    }
    Ok(g_hat(op, lambda)? - g_hat_extended(op, mu))
}

/// `G(mean H_i) - mean G(H_i)` over in-cone matrices.
pub fn jensen_gap<O: HessianOperator + ?Sized>(op: &O, batch: &[HermitianMatrix]) -> Result<f64> {
    let first = batch.first().ok_or_else(|| Error::Input("empty batch".into()))?;
    let mut sum = HermitianMatrix::zeros(first.dim());
    let mut mean_g = 0.0;
    for (i, h) in batch.iter().enumerate() {
        mean_g += g_named(op, h, &format!("H_{}", i + 1))?;
        sum = sum + h;
    }
    let count = batch.len() as f64;
    Ok(g_named(op, &(sum * (1.0 / count)), "batch mean")? - mean_g / count)
}
