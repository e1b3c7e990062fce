//! The sets `C_R = {Trace(A) < R, F(A) > 1/R}` and sampled bounds on
//! `∂F̂/∂λ_i` over their eigenvalue images `Γ̂_R`.

use rand::Rng;
use serde::Serialize;

use super::{check_matrix, HessianOperator};
use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::sampling::seeded_rng;
use rand_distr::{Distribution, StandardNormal};

fn in_gamma_r<O: HessianOperator + ?Sized>(op: &O, l: &[f64], r: f64) -> bool {
    op.in_cone_hat(l) && l.iter().sum::<f64>() < r && op.eval_hat(l) > 1.0 / r
}

/// `A ∈ C_R`: `λ(A)` in the cone, `Trace(A) < R` and `F(A) > 1/R`.
pub fn in_c_r<O: HessianOperator + ?Sized>(op: &O, a: &HermitianMatrix, r: f64) -> Result<bool> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::Input(format!("R={r} must be positive")));
    }
    check_matrix(op, a)?;
    Ok(in_gamma_r(op, a.spectrum()?.values(), r))
}

/// `min(R - Trace(A), G(A) - R^{-1/d})`, positive exactly on `C_R`;
/// `-∞` outside the cone.
pub fn c_r_slack<O: HessianOperator + ?Sized>(op: &O, a: &HermitianMatrix, r: f64) -> Result<f64> {
    check_matrix(op, a)?;
    let l = a.spectrum()?;
    match super::g_hat(op, l.values()) {
        Ok(g) => Ok((r - l.sum()).min(g - r.powf(-1.0 / op.degree()))),
        Err(_) => Ok(f64::NEG_INFINITY),
    }
}

/// A point of `Γ̂_R`: a Gaussian direction accepted when it lies in the
/// cone, rescaled so that its trace is uniform in `(0, R)`, and kept when
/// `F̂ > 1/R`. Every cone here sits inside `{Σλ > 0}`, so the rescaling
/// is well defined.
pub fn sample_gamma_r<O: HessianOperator + ?Sized, R: Rng>(
    op: &O,
    r: f64,
    rng: &mut R,
    max_tries: usize,
) -> Option<Vec<f64>> {
    let n = op.dim();
    for _ in 0..max_tries {
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let trace: f64 = g.iter().sum();
        if trace <= 0.0 || !op.in_cone_hat(&g) {
            continue;
        }
        let scale = r * rng.random::<f64>() / trace;
        let l: Vec<f64> = g.iter().map(|x| x * scale).collect();
        if in_gamma_r(op, &l, r) {
            return Some(l);
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipticityReport {
    pub r: f64,
    /// Smallest sampled partial `∂F̂/∂λ_i`.
    pub m: f64,
    /// Largest sampled partial.
    pub big_m: f64,
    pub accepted: usize,
    pub budget: usize,
    /// Whether `Γ̂_R` is known to be bounded. When it is not (trace-like
    /// operators) the sampled range only covers the rescaled directions.
    pub bounded: bool,
    /// Smallest `(F̂(μ) - F̂(λ)) / Σ(μ_i - λ_i)` over ordered pairs `μ ≥ λ`.
    pub increment_ratio: f64,
    pub pairs: usize,
}

impl EllipticityReport {
    /// `0 < m ≤ M` and the increment ratio is positive and at most `M`.
    pub fn passed(&self) -> bool {
        self.accepted > 0
            && self.m > 0.0
            && self.m <= self.big_m
            && self.increment_ratio > 0.0
            && self.increment_ratio <= self.big_m * (1.0 + 1e-9)
    }
}

/// Samples `Γ̂_R` with [`sample_gamma_r`] (`budget` draws) and records the
/// range of the partials of `F̂`, then checks increments along ordered
/// pairs `μ ≥ λ` inside `Γ̂_R`.
pub fn uniform_ellipticity_estimate<O: HessianOperator + ?Sized>(
    op: &O,
    r: f64,
    budget: usize,
    seed: u64,
) -> Result<EllipticityReport> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::Input(format!("R={r} must be positive")));
    }
    let n = op.dim();
    let mut rng = seeded_rng(seed);
    let mut rep = EllipticityReport {
        r,
        m: f64::INFINITY,
        big_m: f64::NEG_INFINITY,
        accepted: 0,
        budget,
        bounded: op.coordinate_bound(r).is_some(),
        increment_ratio: f64::INFINITY,
        pairs: 0,
    };
    let mut accepted_points: Vec<Vec<f64>> = Vec::new();
    for _ in 0..budget {
        let Some(l) = sample_gamma_r(op, r, &mut rng, 1) else {
            continue;
        };
        let g = op
            .gradient_hat(&l)
            .ok_or_else(|| Error::Precondition(format!("{} has no gradient", op.name())))?;
        for &x in &g {
            rep.m = rep.m.min(x);
            rep.big_m = rep.big_m.max(x);
        }
        rep.accepted += 1;
        accepted_points.push(l);
    }
    if rep.accepted == 0 {
        return Err(Error::Precondition(format!(
            "no samples of Γ̂_R for {} at R={r}; R may be too small",
            op.name()
        )));
    }
    for l in &accepted_points {
        let room = r - l.iter().sum::<f64>();
        let step: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * room / n as f64).collect();
        let mu: Vec<f64> = l.iter().zip(&step).map(|(a, b)| a + b).collect();
        let total: f64 = step.iter().sum();
        if total <= 1e-9 || !in_gamma_r(op, &mu, r) {
            continue;
        }
        let ratio = (op.eval_hat(&mu) - op.eval_hat(l)) / total;
        rep.increment_ratio = rep.increment_ratio.min(ratio);
        rep.pairs += 1;
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Builtin;

    #[test]
    fn membership() {
        let det = Builtin::Determinant { n: 3 };
        assert!(in_c_r(&det, &HermitianMatrix::identity(3), 3.5).unwrap());
        assert!(!in_c_r(&det, &HermitianMatrix::identity(3), 3.0).unwrap());
        assert!(in_c_r(&det, &HermitianMatrix::identity(3), 0.0).is_err());
        let det2 = Builtin::Determinant { n: 2 };
        let r = 5.0;
        for i in 0..200 {
            let t = 0.01 * i as f64;
            let want = 2.0 * t < r && t * t > 1.0 / r;
            let a = &HermitianMatrix::identity(2) * t;
            assert_eq!(in_c_r(&det2, &a, r).unwrap(), want, "t={t}");
        }
    }

    #[test]
    fn trace_is_uniformly_elliptic_but_unbounded() {
        let s1 = Builtin::SigmaK { n: 3, k: 1 };
        let rep = uniform_ellipticity_estimate(&s1, 4.0, 2_000, 1).unwrap();
        assert_eq!((rep.m, rep.big_m), (1.0, 1.0));
        assert!(!rep.bounded && rep.passed());
        assert!((rep.increment_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn estimates_for_builtins() {
        for op in [Builtin::Determinant { n: 2 }, Builtin::MaK { n: 3, k: 2 }, Builtin::SigmaK { n: 3, k: 2 }] {
            let rep = uniform_ellipticity_estimate(&op, 10.0, 20_000, 2).unwrap();
            assert!(rep.accepted > 1_000, "{op}: {rep:?}");
            assert!(rep.passed() && rep.bounded, "{op}: {rep:?}");
            assert!(rep.big_m.is_finite());
        }
        let det = Builtin::Determinant { n: 3 };
        assert!(uniform_ellipticity_estimate(&det, 0.5, 1_000, 3).is_err());
    }
}
