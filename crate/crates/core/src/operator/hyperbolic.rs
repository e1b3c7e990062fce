//! Real-rootedness of `t ↦ F̂(λ - t·e)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Above this degree the monomial interpolation is flagged as
/// ill-conditioned.
pub const CONDITIONING_DEGREE: usize = 30;

#[derive(Clone, Debug, Serialize)]
pub struct HyperbolicityReport {
    /// Roots in `t`, sorted by real part.
    #[serde(serialize_with = "serialize_roots")]
    pub roots: Vec<C64>,
    /// `max |Im t| / (1 + |Re t|)` over the roots.
    pub worst_imaginary: f64,
    pub hyperbolic: bool,
    /// Roots were confirmed real by bracketing sign changes of `F̂`.
    pub bracketed: bool,
    pub ill_conditioned: bool,
}

fn serialize_roots<S: serde::Serializer>(roots: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(roots.len()))?;
    for r in roots {
        seq.serialize_element(&[r.re, r.im])?;
    }
    seq.end()
}

/// Interpolates the degree-`d` polynomial `p(t) = f(λ - t·e)` at `d + 1`
/// Chebyshev nodes and finds its roots as companion-matrix eigenvalues.
/// Hyperbolic when every root has `|Im| ≤ tol·(1 + |Re|)`.
pub fn hyperbolicity_check(
    f: impl Fn(&[f64]) -> f64,
    degree: usize,
    e: &[f64],
    lambda: &[f64],
    tol: f64,
) -> Result<HyperbolicityReport> {
    if degree == 0 {
        return Err(Error::Input("degree must be positive".into()));
    }
    if e.len() != lambda.len() {
        return Err(Error::DimensionMismatch {
            left: e.len(),
            right: lambda.len(),
        });
    }
    let fe = f(e);
    if fe == 0.0 || !fe.is_finite() {
        return Err(Error::Precondition(format!("F̂(e) = {fe} must be nonzero")));
    }
    // t = t0 + c·x with x in [-1, 1]. Centering on the projection of λ
    // onto e keeps clustered roots away from the ill-conditioned edge of
    // the monomial basis.
    let e_sq: f64 = e.iter().map(|x| x * x).sum();
    let t0 = lambda.iter().zip(e).map(|(l, x)| l * x).sum::<f64>() / e_sq;
    let e_norm = e.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let spread = lambda.iter().zip(e).fold(0.0_f64, |m, (l, x)| m.max((l - t0 * x).abs()));
    let c = (spread + 1e-3 * (1.0 + t0.abs())) / e_norm;
    let d = degree;
    let nodes: Vec<f64> = (0..=d)
        .map(|j| (std::f64::consts::PI * (j as f64 + 0.5) / (d as f64 + 1.0)).cos())
        .collect();
    let values: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let t = t0 + c * x;
            let p: Vec<f64> = lambda.iter().zip(e).map(|(l, ei)| l - t * ei).collect();
            f(&p)
        })
        .collect();
    let vandermonde = DMatrix::from_fn(d + 1, d + 1, |r, k| nodes[r].powi(k as i32));
    let coeffs = vandermonde
        .lu()
        .solve(&DVector::from_vec(values))
        .ok_or_else(|| Error::Precondition("interpolation system is singular".into()))?;
    let lead = coeffs[d];
    let scale = coeffs.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if lead.abs() <= 1e-13 * scale {
        return Err(Error::Precondition(format!("leading coefficient vanishes; degree {d} is too high")));
    }
    // Companion matrix of the monic polynomial in x.
    let companion = DMatrix::from_fn(d, d, |r, k| {
        if r == 0 {
            -coeffs[d - 1 - k] / lead
        } else if r == k + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<C64> = companion.complex_eigenvalues().iter().map(|z| C64::new(t0 + z.re * c, z.im * c)).collect();
    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    let worst = |roots: &[C64]| roots.iter().map(|r| r.im.abs() / (1.0 + r.re.abs())).fold(0.0, f64::max);
    let mut worst_imaginary = worst(&roots);
    let mut bracketed = false;
    if worst_imaginary > tol {
        let p = |t: f64| {
            let point: Vec<f64> = lambda.iter().zip(e).map(|(l, ei)| l - t * ei).collect();
            f(&point)
        };
        if let Some(real) = bracket_real_roots(p, &roots) {
            roots = real.into_iter().map(|r| C64::new(r, 0.0)).collect();
            worst_imaginary = 0.0;
            bracketed = true;
        }
    }
    Ok(HyperbolicityReport {
        hyperbolic: worst_imaginary <= tol,
        worst_imaginary,
        roots,
        bracketed,
        ill_conditioned: d > CONDITIONING_DEGREE,
    })
}

const MAX_REFINEMENTS: usize = 40;
const MAX_GRID: usize = 200_000;

/// Looks for `approx.len()` sign changes of `p` on a grid refined around
/// each approximate root, then bisects each bracket. Tightly clustered real
/// roots come out of the companion matrix as complex pairs because the
/// monomial coefficients lose the pointwise accuracy of `p`; the sign of
/// `p` itself stays reliable. Even-multiplicity roots give no sign change,
/// so they are not confirmed here.
fn bracket_real_roots(p: impl Fn(f64) -> f64, approx: &[C64]) -> Option<Vec<f64>> {
    let d = approx.len();
    let mut grid: Vec<f64> = Vec::with_capacity(d * 40 + 8 * d + 2);
    let lo = approx.iter().map(|r| r.re - 4.0 * r.im.abs()).fold(f64::INFINITY, f64::min) - 1.0;
    let hi = approx.iter().map(|r| r.re + 4.0 * r.im.abs()).fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let coarse = 8 * d;
    grid.extend((0..=coarse).map(|j| lo + (hi - lo) * j as f64 / coarse as f64));
    let mut windows = Vec::new();
    for (i, r) in approx.iter().enumerate() {
        let gap = approx
            .iter()
            .enumerate()
            .filter(|&(j, q)| j != i && q.re != r.re)
            .map(|(_, q)| (q.re - r.re).abs())
            .fold(f64::INFINITY, f64::min);
        let gap = if gap.is_finite() { 0.5 * gap } else { 0.0 };
        let w = (4.0 * r.im.abs()).max(gap).max(1e-9 * (1.0 + r.re.abs()));
        grid.extend((-16..=16).map(|j| r.re + w * j as f64 / 16.0));
        if r.im != 0.0 {
            // Span the neighbouring estimates too: the real roots a complex
            // pair stands for may sit next to those.
            let below = approx.iter().map(|q| q.re).filter(|&x| x < r.re).fold(f64::NEG_INFINITY, f64::max);
            let above = approx.iter().map(|q| q.re).filter(|&x| x > r.re).fold(f64::INFINITY, f64::min);
            let wl = if below.is_finite() { below.min(r.re - w) } else { r.re - w };
            let wh = if above.is_finite() { above.max(r.re + w) } else { r.re + w };
            windows.push((wl, wh));
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut pts: Vec<(f64, f64)> = grid.iter().map(|&t| (t, p(t))).collect();
    // Two roots closer than the grid spacing leave no sign change, only a
    // dip in |p|. Subdivide around such dips until every root is seen.
    for _ in 0..MAX_REFINEMENTS {
        let changes = pts.windows(2).filter(|w| w[0].1 == 0.0 || w[0].1 * w[1].1 < 0.0).count();
        if changes >= d {
            break;
        }
        let mut extra = Vec::new();
        for w in pts.windows(3) {
            let [(a, fa), (_, fm), (b, fb)] = [w[0], w[1], w[2]];
            if fa * fm > 0.0 && fm * fb > 0.0 && fm.abs() < fa.abs() && fm.abs() < fb.abs() {
                extra.extend((1..16).map(|j| a + (b - a) * j as f64 / 16.0));
            }
        }
        // Inside the window of a complex estimate the pair may stand for
        // real roots the grid has not split yet. A cell can hide two roots
        // or three behind a single sign change, so every cell is quartered.
        for w in pts.windows(2) {
            let (a, b) = (w[0].0, w[1].0);
            let mid = 0.5 * (a + b);
            if b - a > 1e-12 * (1.0 + mid.abs()) && windows.iter().any(|&(l, h)| l <= mid && mid <= h) {
                extra.extend((1..4).map(|j| a + (b - a) * j as f64 / 4.0));
            }
        }
        if extra.is_empty() || pts.len() + extra.len() > MAX_GRID {
            break;
        }
        pts.extend(extra.into_iter().map(|t| (t, p(t))));
        pts.sort_by(|x, y| x.0.total_cmp(&y.0));
        pts.dedup_by(|x, y| x.0 == y.0);
    }
    let mut roots = Vec::with_capacity(d);
    for w in pts.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            roots.push(bisect(&p, a, b, fa));
        }
    }
    (roots.len() == d).then_some(roots)
}

fn bisect(p: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = p(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{Builtin, HessianOperator};
    use crate::sampling::{seeded_rng, uniform_box};

    #[test]
    fn mak_roots_are_scaled_ksums() {
        let op = Builtin::MaK { n: 3, k: 2 };
        let rep = hyperbolicity_check(|l| op.eval_hat(l), 3, &[1.0; 3], &[1.0, 2.0, 3.0], 1e-8).unwrap();
        assert!(rep.hyperbolic);
        for (r, want) in rep.roots.iter().zip([1.5, 2.0, 2.5]) {
            assert!((r.re - want).abs() < 1e-10 && r.im.abs() < 1e-10);
        }
    }

    #[test]
    fn determinant_roots_are_entries() {
        let mut rng = seeded_rng(61);
        for n in 1..=5 {
            let op = Builtin::Determinant { n };
            let mut l = uniform_box(&mut rng, n, -2.0, 2.0);
            let rep = hyperbolicity_check(|x| op.eval_hat(x), n, &vec![1.0; n], &l, 1e-8).unwrap();
            l.sort_by(f64::total_cmp);
            assert!(rep.hyperbolic);
            for (r, want) in rep.roots.iter().zip(&l) {
                assert!((r.re - want).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn rejects_non_hyperbolic() {
        let rep = hyperbolicity_check(|l| l[0] * l[0] + l[1] * l[1], 2, &[1.0, 1.0], &[1.0, 0.0], 1e-8).unwrap();
        assert!(!rep.hyperbolic);
        assert!(rep.worst_imaginary > 0.1);
    }

    #[test]
    fn sigma_k_is_hyperbolic() {
        let mut rng = seeded_rng(62);
        for n in 2..=5 {
            for k in 1..=n {
                let op = Builtin::SigmaK { n, k };
                let l = uniform_box(&mut rng, n, -2.0, 2.0);
                let rep = hyperbolicity_check(|x| op.eval_hat(x), k, &vec![1.0; n], &l, 1e-6).unwrap();
                assert!(rep.hyperbolic, "{op} {l:?} {rep:?}");
            }
        }
    }

    #[test]
    fn input_errors() {
        assert!(hyperbolicity_check(|_| 0.0, 2, &[1.0, 1.0], &[1.0, 2.0], 1e-8).is_err());
        assert!(hyperbolicity_check(|l| l[0], 1, &[1.0], &[1.0, 2.0], 1e-8).is_err());
        assert!(hyperbolicity_check(|l| l[0], 0, &[1.0], &[1.0], 1e-8).is_err());
    }

    #[test]
    fn clustered_roots_are_confirmed() {
        // Ten pair sums packed into [1.25, 1.54].
        let l = [1.2574228725621417, 1.5657303205806983, 1.4076119349371998, 1.5111621524385956, 1.2419590841833683];
        let op = Builtin::MaK { n: 5, k: 2 };
        let rep = hyperbolicity_check(|x| op.eval_hat(x), 10, &[1.0; 5], &l, 1e-8).unwrap();
        assert!(rep.hyperbolic);
        let mut want = crate::symmetric::ksum_multiset(&l, 2).unwrap();
        want.iter_mut().for_each(|x| *x /= 2.0);
        want.sort_by(f64::total_cmp);
        for (r, w) in rep.roots.iter().zip(&want) {
            assert!((r.re - w).abs() < 1e-12);
        }
    }
}
