//! Pogorelov-type example `u(z', z'') = (1 + |z'|²)|z''|^{2β}` on
//! `C^m × C^{n-m}`: closed-form complex Hessian, spectrum, determinant and
//! `MA_k` exponent, plus the integrability thresholds it yields.
//!
//! All closed forms hold off the singular set `N = {z'' = 0}`.

use rand::Rng;
use serde::Serialize;

use crate::error::{check_order, Error, Result};
use crate::field::{fd_hessian, BuiltinField};
use crate::linalg::{HermitianMatrix, Spectrum, C64};
use crate::symmetric::{binomial, ln_ma_k};

/// Points with `|z''|` below this are treated as lying on `N`.
pub const SINGULAR_RADIUS: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PogorelovParams {
    m: usize,
    n: usize,
    beta: f64,
}

impl PogorelovParams {
    pub fn new(m: usize, n: usize, beta: f64) -> Result<Self> {
        if m == 0 || m >= n {
            return Err(Error::Input(format!("need 1 ≤ m < n, got m={m}, n={n}")));
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Input(format!("need β > 0, got {beta}")));
        }
        Ok(Self { m, n, beta })
    }

    /// Parameters at the exponent-cancelling `β = 1 - C_m^k / C_n^k`.
    pub fn critical(m: usize, n: usize, k: usize) -> Result<Self> {
        Self::new(m, n, critical_beta(m, n, k)?)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn u_value(&self, z: &SplitPoint) -> f64 {
        (1.0 + z.prime_norm_sqr()) * z.second_norm_sqr().powf(self.beta)
    }
}

/// A point `(z', z'') ∈ C^m × C^{n-m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitPoint {
    pub zprime: Vec<C64>,
    pub zsecond: Vec<C64>,
}

impl SplitPoint {
    pub fn split(z: &[C64], m: usize) -> Self {
        Self {
            zprime: z[..m].to_vec(),
            zsecond: z[m..].to_vec(),
        }
    }

    pub fn full(&self) -> Vec<C64> {
        self.zprime.iter().chain(&self.zsecond).copied().collect()
    }

    pub fn prime_norm_sqr(&self) -> f64 {
        self.zprime.iter().map(|w| w.norm_sqr()).sum()
    }

    pub fn second_norm_sqr(&self) -> f64 {
        self.zsecond.iter().map(|w| w.norm_sqr()).sum()
    }

    fn checked(&self, params: &PogorelovParams) -> Result<(f64, f64)> {
        if self.zprime.len() != params.m || self.zsecond.len() != params.n - params.m {
            return Err(Error::DimensionMismatch {
                left: params.n,
                right: self.zprime.len() + self.zsecond.len(),
            });
        }
        let r2 = self.second_norm_sqr();
        if r2.sqrt() < SINGULAR_RADIUS {
            return Err(Error::SingularSet { norm: r2.sqrt() });
        }
        Ok((self.prime_norm_sqr(), r2))
    }
}

/// Block form of `D²_C u`, indices `i, j` running over the full `z`:
///
/// ```text
/// i, j ≤ m:           δ_ij |z''|^{2β}
/// mixed blocks:       β z̄_i z_j |z''|^{2β-2}
/// i, j > m:           β(1+|z'|²)((β-1) z̄_i z_j |z''|^{2β-4} + δ_ij |z''|^{2β-2})
/// ```
pub fn analytic_hessian(params: &PogorelovParams, z: &SplitPoint) -> Result<HermitianMatrix> {
    let (p2, r2) = z.checked(params)?;
    let (m, b) = (params.m, params.beta);
    let w = z.full();
    let r_2b = r2.powf(b);
    let r_2b2 = r2.powf(b - 1.0);
    let r_2b4 = r2.powf(b - 2.0);
    HermitianMatrix::from_fn(params.n, |i, j| {
        let zz = w[i].conj() * w[j];
        let delta = if i == j { 1.0 } else { 0.0 };
        match (i < m, j < m) {
            (true, true) => C64::new(delta * r_2b, 0.0),
            (false, false) => (zz * ((b - 1.0) * r_2b4) + delta * r_2b2) * (b * (1.0 + p2)),
            _ => zz * (b * r_2b2),
        }
    })
}

/// `φ(z) = (|z''|² + β²(1+|z'|²) + √((|z''|² + β²(1+|z'|²))² - 4β²|z''|²)) / 2`.
pub fn phi(params: &PogorelovParams, z: &SplitPoint) -> Result<f64> {
    let (p2, r2) = z.checked(params)?;
    let b2 = params.beta * params.beta;
    let s = r2 + b2 * (1.0 + p2);
    let disc = (s * s - 4.0 * b2 * r2).max(0.0);
    Ok(0.5 * (s + disc.sqrt()))
}

/// Eigenvalues of `D²_C u` in closed form:
/// `|z''|^{2β}` (m-1 times), `β(1+|z'|²)|z''|^{2β-2}` (n-m-1 times),
/// `φ|z''|^{2β-2}` and `(β²/φ)|z''|^{2β}`.
pub fn closed_form_spectrum(params: &PogorelovParams, z: &SplitPoint) -> Result<Spectrum> {
    let (p2, r2) = z.checked(params)?;
    let b = params.beta;
    let ph = phi(params, z)?;
    let r_2b = r2.powf(b);
    let r_2b2 = r2.powf(b - 1.0);
    let mut values = Vec::with_capacity(params.n);
    values.extend(std::iter::repeat_n(r_2b, params.m - 1));
    values.extend(std::iter::repeat_n(b * (1.0 + p2) * r_2b2, params.n - params.m - 1));
    values.push(ph * r_2b2);
    values.push(b * b / ph * r_2b);
    Ok(Spectrum::from_unsorted(values))
}

/// Sum `S` and product `P` of the two non-trivial eigenvalues.
pub fn remaining_pair_sum_product(params: &PogorelovParams, z: &SplitPoint) -> Result<(f64, f64)> {
    let (p2, r2) = z.checked(params)?;
    let b = params.beta;
    let s = r2.powf(b) + b * b * (1.0 + p2) * r2.powf(b - 1.0);
    let p = b * b * r2.powf(2.0 * b - 1.0);
    Ok((s, p))
}

/// `det D²_C u = β^{n-m+1}(1+|z'|²)^{n-m-1}|z''|^{2βn-2(n-m)}`.
pub fn det_closed_form(params: &PogorelovParams, z: &SplitPoint) -> Result<f64> {
    let (p2, r2) = z.checked(params)?;
    let (m, n, b) = (params.m as i32, params.n as i32, params.beta);
    let r = r2.sqrt();
    Ok(b.powi(n - m + 1) * (1.0 + p2).powi(n - m - 1) * r.powf(2.0 * b * n as f64 - 2.0 * (n - m) as f64))
}

/// `Trace D²_C u = m|z''|^{2β} + β(1+|z'|²)(n-m+β-1)|z''|^{2β-2}`.
pub fn trace_closed_form(params: &PogorelovParams, z: &SplitPoint) -> Result<f64> {
    let (p2, r2) = z.checked(params)?;
    let (m, n, b) = (params.m as f64, params.n as f64, params.beta);
    Ok(m * r2.powf(b) + b * (1.0 + p2) * (n - m + b - 1.0) * r2.powf(b - 1.0))
}

/// Power of `|z''|` in `MA_k(λ(D²_C u))`: `C_m^k·2β + (C_n^k - C_m^k)(2β - 2)`,
/// with `C_m^k = 0` for `m < k`.
pub fn mak_closed_form_exponent(m: usize, n: usize, k: usize, beta: f64) -> Result<f64> {
    check_order(n, k)?;
    let cm = binomial(m, k) as f64;
    let cn = binomial(n, k) as f64;
    Ok(cm * 2.0 * beta + (cn - cm) * (2.0 * beta - 2.0))
}

/// `β = 1 - C_m^k / C_n^k`, the unique zero of [`mak_closed_form_exponent`].
pub fn critical_beta(m: usize, n: usize, k: usize) -> Result<f64> {
    check_order(n, k)?;
    Ok(1.0 - binomial(m, k) as f64 / binomial(n, k) as f64)
}

/// `u ∈ C^{1,α}_loc` exactly when `α ≤ 2β - 1`.
pub fn holder_admissible(alpha: f64, beta: f64) -> bool {
    alpha <= 2.0 * beta - 1.0
}

/// `u ∈ W^{2,p}_loc` exactly when `β ≥ 1` or `p < (n-m)/(1-β)`.
pub fn w2p_admissible(p: f64, m: usize, n: usize, beta: f64) -> bool {
    beta >= 1.0 || p < (n - m) as f64 / (1.0 - beta)
}

/// Power of `r` in the radial integral of the worst second derivative:
/// `2(n-m) - 1 + 2p + (2β-4)p`. Integrable near 0 iff it exceeds -1.
pub fn radial_exponent(p: f64, m: usize, n: usize, beta: f64) -> f64 {
    2.0 * (n - m) as f64 - 1.0 + 2.0 * p + (2.0 * beta - 4.0) * p
}

/// `p* = (n-k)·C_n^k`.
pub fn p_star(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::OrderOutOfRange { k, n });
    }
    Ok(((n - k) * binomial(n, k)) as f64)
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessReport {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub fitted_exponent: f64,
    pub predicted_exponent: f64,
    pub min_value: f64,
    pub max_value: f64,
}

/// Evaluates `MA_k(λ(D²_C u))` from the numerical spectrum of the analytic
/// Hessian at `(z', r·direction)` for each radius and fits the power of `r`
/// by least squares on `log MA_k` against `log r`.
pub fn mak_smoothness_probe(
    params: &PogorelovParams,
    k: usize,
    radii: &[f64],
    zprime: &[C64],
    direction: &[C64],
) -> Result<SmoothnessReport> {
    check_order(params.n, k)?;
    if radii.len() < 2 {
        return Err(Error::Input("need at least two radii".into()));
    }
    let dir_norm = direction.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    if dir_norm == 0.0 {
        return Err(Error::Input("direction must be non-zero".into()));
    }
    let mut logs = Vec::with_capacity(radii.len());
    let mut values = Vec::with_capacity(radii.len());
    for &r in radii {
        let point = SplitPoint {
            zprime: zprime.to_vec(),
            zsecond: direction.iter().map(|w| w * (r / dir_norm)).collect(),
        };
        let spectrum = analytic_hessian(params, &point)?.spectrum()?;
        let ln = ln_ma_k(spectrum.values(), k)?
            .ok_or_else(|| Error::OutsideCone(format!("MA_{k} not positive at r={r}")))?;
        logs.push(ln);
        values.push(ln.exp());
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let (slope, _) = crate::regression::fit_line(&xs, &logs);
    Ok(SmoothnessReport {
        radii: radii.to_vec(),
        min_value: values.iter().copied().fold(f64::INFINITY, f64::min),
        max_value: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        values,
        fitted_exponent: slope,
        predicted_exponent: mak_closed_form_exponent(params.m, params.n, k, params.beta)?,
    })
}

/// A random point with coordinates uniform in the unit square of each
/// factor of `C`, redrawn until `|z''| ≥ min_r`.
pub fn random_split_point<R: Rng>(rng: &mut R, params: &PogorelovParams, min_r: f64) -> SplitPoint {
    loop {
        let mut c = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let pt = SplitPoint {
            zprime: (0..params.m).map(|_| c()).collect(),
            zsecond: (0..params.n - params.m).map(|_| c()).collect(),
        };
        if pt.second_norm_sqr().sqrt() >= min_r {
            return pt;
        }
    }
}

/// Worst relative disagreements over a batch of random points.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CrossCheck {
    pub points: usize,
    /// Closed-form determinant against the closed-form spectrum product
    /// and the LU determinant of the analytic Hessian.
    pub determinant: f64,
    /// Closed-form spectrum against the eigensolver.
    pub spectrum: f64,
    pub trace: f64,
    /// Analytic Hessian against central differences with `h = 1e-4`, at
    /// points with `|z''| ≥ 0.1`.
    pub finite_difference: f64,
    /// Smallest eigenvalue seen; positive off `N`.
    pub min_eigenvalue: f64,
}

/// Compares every closed form with its numerical counterpart on `points`
/// random points with `|z''| ≥ 0.1`.
pub fn cross_check<R: Rng>(params: &PogorelovParams, points: usize, rng: &mut R) -> Result<CrossCheck> {
    let field = BuiltinField::Pogorelov(*params);
    let mut out = CrossCheck {
        points,
        min_eigenvalue: f64::INFINITY,
        ..Default::default()
    };
    for _ in 0..points {
        let z = random_split_point(rng, params, 0.1);
        let h = analytic_hessian(params, &z)?;
        let numeric = h.spectrum()?;
        let closed = closed_form_spectrum(params, &z)?;
        let det = det_closed_form(params, &z)?;
        let tr = trace_closed_form(params, &z)?;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        out.determinant = out.determinant.max(rel(closed.product(), det)).max(rel(h.det(), det));
        out.spectrum = out.spectrum.max(numeric.distance(&closed) / numeric.max().abs());
        out.trace = out.trace.max(rel(h.trace(), tr));
        let fd = fd_hessian(&field, &z.full(), 1e-4);
        out.finite_difference = out.finite_difference.max(fd.distance(&h) / h.frobenius_norm());
        out.min_eigenvalue = out.min_eigenvalue.min(numeric.min());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::seeded_rng;

    fn point(zp: &[(f64, f64)], zs: &[(f64, f64)]) -> SplitPoint {
        SplitPoint {
            zprime: zp.iter().map(|&(a, b)| C64::new(a, b)).collect(),
            zsecond: zs.iter().map(|&(a, b)| C64::new(a, b)).collect(),
        }
    }

    fn random_point<R: Rng>(rng: &mut R, p: &PogorelovParams, min_r: f64) -> SplitPoint {
        random_split_point(rng, p, min_r)
    }

    #[test]
    fn parameter_validation() {
        assert!(PogorelovParams::new(0, 2, 1.0).is_err());
        assert!(PogorelovParams::new(2, 2, 1.0).is_err());
        assert!(PogorelovParams::new(1, 2, 0.0).is_err());
        assert!(PogorelovParams::new(1, 2, f64::NAN).is_err());
    }

    #[test]
    fn values() {
        let p = PogorelovParams::new(1, 2, 1.0).unwrap();
        assert_eq!(p.u_value(&point(&[(0.0, 0.0)], &[(1.0, 0.0)])), 1.0);
        assert_eq!(p.u_value(&point(&[(0.3, 0.0)], &[(0.0, 0.0)])), 0.0);
        assert_eq!(p.u_value(&point(&[(1.0, 0.0)], &[(2.0, 0.0)])), 8.0);
    }

    #[test]
    fn beta_one_blocks() {
        let p = PogorelovParams::new(2, 4, 1.0).unwrap();
        let z = point(&[(0.3, 0.1), (-0.2, 0.5)], &[(0.7, -0.4), (0.1, 0.2)]);
        let h = analytic_hessian(&p, &z).unwrap();
        let r2 = z.second_norm_sqr();
        let p2 = z.prime_norm_sqr();
        let w = z.full();
        for i in 0..4 {
            for j in 0..4 {
                let expected = match (i < 2, j < 2) {
                    (true, true) => C64::new(if i == j { r2 } else { 0.0 }, 0.0),
                    (false, false) => C64::new(if i == j { 1.0 + p2 } else { 0.0 }, 0.0),
                    _ => w[i].conj() * w[j],
                };
                assert!((h[(i, j)] - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_set_rejected() {
        let p = PogorelovParams::new(1, 2, 0.5).unwrap();
        let z = point(&[(0.3, 0.0)], &[(0.0, 0.0)]);
        assert!(matches!(analytic_hessian(&p, &z), Err(Error::SingularSet { .. })));
        assert!(matches!(closed_form_spectrum(&p, &z), Err(Error::SingularSet { .. })));
        assert!(matches!(det_closed_form(&p, &z), Err(Error::SingularSet { .. })));
    }

    #[test]
    fn closed_forms_agree_with_numerics() {
        let mut rng = seeded_rng(41);
        for n in 2..=5 {
            for m in 1..n {
                for _ in 0..10 {
                    let beta = rng.random_range(0.2..2.0);
                    let p = PogorelovParams::new(m, n, beta).unwrap();
                    let z = random_point(&mut rng, &p, 0.1);
                    let h = analytic_hessian(&p, &z).unwrap();
                    let numeric = h.spectrum().unwrap();
                    let closed = closed_form_spectrum(&p, &z).unwrap();
                    let scale = numeric.max().abs();
                    assert!(numeric.distance(&closed) <= 1e-8 * scale, "n={n} m={m}");
                    assert!(closed.min() > 0.0);

                    let det = det_closed_form(&p, &z).unwrap();
                    assert!((closed.product() - det).abs() <= 1e-8 * det);
                    assert!((h.det() - det).abs() <= 1e-8 * det);

                    let tr = trace_closed_form(&p, &z).unwrap();
                    assert!((h.trace() - tr).abs() <= 1e-10 * tr.abs());

                    let (s, prod) = remaining_pair_sum_product(&p, &z).unwrap();
                    let ph = phi(&p, &z).unwrap();
                    let r2 = z.second_norm_sqr();
                    let pair = (ph * r2.powf(beta - 1.0), beta * beta / ph * r2.powf(beta));
                    assert!((pair.0 * pair.1 - prod).abs() <= 1e-10 * prod);
                    assert!((pair.0 + pair.1 - s).abs() <= 1e-10 * s);
                }
            }
        }
    }

    #[test]
    fn analytic_matches_finite_differences() {
        let mut rng = seeded_rng(42);
        for n in 2..=4 {
            for m in 1..n {
                let p = PogorelovParams::new(m, n, rng.random_range(0.3..1.8)).unwrap();
                let field = BuiltinField::Pogorelov(p);
                for _ in 0..5 {
                    let z = random_point(&mut rng, &p, 0.1);
                    let exact = analytic_hessian(&p, &z).unwrap();
                    let fd = fd_hessian(&field, &z.full(), 1e-4);
                    assert!(fd.distance(&exact) <= 1e-5 * exact.frobenius_norm());
                }
            }
        }
    }

    #[test]
    fn det_quarter_in_two_dimensions() {
        let p = PogorelovParams::new(1, 2, 0.5).unwrap();
        let mut rng = seeded_rng(43);
        for _ in 0..50 {
            let z = random_point(&mut rng, &p, 1e-3);
            assert!((det_closed_form(&p, &z).unwrap() - 0.25).abs() < 1e-12);
            let numeric = analytic_hessian(&p, &z).unwrap().det();
            assert!((numeric - 0.25).abs() < 1e-10);
        }
    }

    #[test]
    fn exponents_and_thresholds() {
        assert!((critical_beta(2, 3, 2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((critical_beta(1, 2, 1).unwrap() - 0.5).abs() < 1e-15);
        for n in 2..=6 {
            for m in 1..n {
                for k in 1..=n {
                    let b = critical_beta(m, n, k).unwrap();
                    assert!(mak_closed_form_exponent(m, n, k, b).unwrap().abs() < 1e-12);
                }
            }
        }
        assert_eq!(p_star(3, 2).unwrap(), 3.0);
        assert_eq!(p_star(4, 2).unwrap(), 12.0);
        for n in 2..=7 {
            assert_eq!(p_star(n, 1).unwrap(), (n * (n - 1)) as f64);
        }
        assert!(p_star(3, 3).is_err());

        assert!(w2p_admissible(1e6, 1, 3, 1.0));
        assert!(w2p_admissible(1.99, 1, 2, 0.5));
        assert!(!w2p_admissible(2.0, 1, 2, 0.5));
        assert!((radial_exponent(2.0, 1, 2, 0.5) + 1.0).abs() < 1e-15);

        assert!(holder_admissible(0.0, 0.5));
        assert!(!holder_admissible(0.5, 0.7));
    }

    #[test]
    fn critical_summary_matches_p_star() {
        for n in 2..=6 {
            for k in 1..n {
                let beta = 1.0 - 1.0 / binomial(n, k) as f64;
                let ps = p_star(n, k).unwrap();
                assert!(w2p_admissible(ps * (1.0 - 1e-9), k, n, beta));
                assert!(!w2p_admissible(ps * (1.0 + 1e-9), k, n, beta));
            }
        }
    }

    #[test]
    fn smoothness_probe() {
        let p = PogorelovParams::critical(1, 2, 1).unwrap();
        let radii = [1e-1, 1e-2, 1e-3, 1e-4];
        let rep = mak_smoothness_probe(&p, 1, &radii, &[C64::new(0.4, 0.2)], &[C64::new(1.0, 0.0)]).unwrap();
        for v in &rep.values {
            assert!((v - 0.25).abs() < 1e-10);
        }

        let p = PogorelovParams::critical(2, 3, 2).unwrap();
        let rep = mak_smoothness_probe(&p, 2, &radii, &[C64::new(0.0, 0.0); 2], &[C64::new(0.6, 0.8)]).unwrap();
        assert!(rep.fitted_exponent.abs() < 1e-2);
        assert!(rep.min_value > 0.0 && rep.max_value < 10.0);

        let p = PogorelovParams::new(1, 3, 0.8).unwrap();
        let radii = [1e-3, 5e-4, 2.5e-4, 1.25e-4];
        let rep = mak_smoothness_probe(&p, 2, &radii, &[C64::new(0.3, 0.0)], &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)])
            .unwrap();
        let rel = (rep.fitted_exponent - rep.predicted_exponent).abs() / rep.predicted_exponent.abs();
        assert!(rel < 0.01, "{rep:?}");
    }

    #[test]
    fn batch_cross_check() {
        let mut rng = seeded_rng(44);
        let p = PogorelovParams::new(2, 5, 0.7).unwrap();
        let c = cross_check(&p, 50, &mut rng).unwrap();
        assert!(c.determinant < 1e-8 && c.spectrum < 1e-8 && c.trace < 1e-10, "{c:?}");
        assert!(c.finite_difference < 1e-5 && c.min_eigenvalue > 0.0, "{c:?}");
    }
}
