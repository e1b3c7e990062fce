//! Seeded sampled certification of operator properties, with the worst
//! margin and the input that produced it.
//!
//! Sample `i` draws from its own generator seeded with `sub_seed(seed, i)`,
//! so the result does not depend on how samples are spread over threads.

use std::fmt;
use std::str::FromStr;
use std::thread;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::operator::{
    c_r_slack, concavity_probe, eval_f, eval_g, fd_grad_g, garding_comparison_margin, grad_g, hyperbolicity_check,
    jensen_gap, monotonicity_gap, sample_gamma_r, sample_lambda, sample_matrix, schur_concavity_probe,
    sharpened_comparison_margin, t_transform, uniform_ellipticity_estimate, Builtin, ConeCheck, HessianOperator,
    MARGIN_TOLERANCE,
};
use crate::sampling::{random_with_spectrum, random_with_spectrum_in, sample_cone_point, seeded_rng, sub_seed, SeededRng};
use crate::symmetric::{in_gamma_k, in_gamma_k_prime, maclaurin_gap, mak_comparison_gap};

/// Radius used for the `C_R` properties.
pub const DEFAULT_R: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Maclaurin,
    Garding,
    Comparison,
    Jensen,
    Concavity,
    Schur,
    Monotonicity,
    Sharpened,
    Gradient,
    Homogeneity,
    Hyperbolicity,
    Ellipticity,
    CrConvexity,
}

impl Property {
    pub const ALL: [Property; 13] = [
        Self::Maclaurin,
        Self::Garding,
        Self::Comparison,
        Self::Jensen,
        Self::Concavity,
        Self::Schur,
        Self::Monotonicity,
        Self::Sharpened,
        Self::Gradient,
        Self::Homogeneity,
        Self::Hyperbolicity,
        Self::Ellipticity,
        Self::CrConvexity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Maclaurin => "maclaurin",
            Self::Garding => "garding",
            Self::Comparison => "comparison",
            Self::Jensen => "jensen",
            Self::Concavity => "concavity",
            Self::Schur => "schur",
            Self::Monotonicity => "monotonicity",
            Self::Sharpened => "sharpened",
            Self::Gradient => "gradient",
            Self::Homogeneity => "homogeneity",
            Self::Hyperbolicity => "hyperbolicity",
            Self::Ellipticity => "ellipticity",
            Self::CrConvexity => "cr-convexity",
        }
    }

    /// Margins are accepted down to `-tolerance`.
    pub fn tolerance(self) -> f64 {
        match self {
            Self::Gradient => 1e-5,
            Self::Homogeneity => 1e-9,
            Self::Hyperbolicity => 1e-8,
            Self::Ellipticity | Self::CrConvexity => 0.0,
            _ => MARGIN_TOLERANCE,
        }
    }

    /// Whether the property is defined for `op`.
    pub fn applies_to(self, op: &Builtin) -> bool {
        match (self, op) {
            (Self::Maclaurin, Builtin::SigmaK { k, .. }) => *k >= 2,
            (Self::Maclaurin, _) => false,
            (Self::Comparison, Builtin::MaK { k, .. }) => *k >= 2,
            (Self::Comparison, _) => false,
            _ => true,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Input(format!("unknown property '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certification {
    pub property: Property,
    pub operator: String,
    pub samples: usize,
    pub worst_margin: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub witness: Value,
}

struct Sample {
    margin: f64,
    witness: Value,
}

fn matrix_json(a: &HermitianMatrix) -> Value {
    serde_json::to_value(a.to_file()).unwrap_or(Value::Null)
}

fn no_sample(op: &Builtin) -> Error {
    Error::Precondition(format!("could not sample the cone of {op}"))
}

/// Positive-definite matrix with spectrum in `[0.05, 3)`.
fn positive(rng: &mut SeededRng, n: usize) -> HermitianMatrix {
    random_with_spectrum_in(rng, n, 0.05, 3.0)
}

/// In-cone matrix at distance at least `0.05` from the boundary along
/// `(1,…,1)`, which keeps finite differences well inside the cone.
fn interior_matrix(op: &Builtin, rng: &mut SeededRng) -> Result<HermitianMatrix> {
    let l = sample_cone_point(
        rng,
        op.dim(),
        |l| {
            let shrunk: Vec<f64> = l.iter().map(|x| x - 0.05).collect();
            op.in_cone_hat(&shrunk)
        },
        100_000,
    )
    .ok_or_else(|| no_sample(op))?;
    Ok(random_with_spectrum(rng, &l))
}

fn one_sample(op: &Builtin, prop: Property, rng: &mut SeededRng) -> Result<Sample> {
    let n = op.dim();
    Ok(match prop {
        Property::Maclaurin => {
            let Builtin::SigmaK { k, .. } = *op else { unreachable!() };
            let l = sample_cone_point(rng, n, |l| in_gamma_k(l, k - 1), 100_000).ok_or_else(|| no_sample(op))?;
            Sample {
                margin: maclaurin_gap(&l, k)?,
                witness: json!({ "lambda": l }),
            }
        }
        Property::Comparison => {
            let Builtin::MaK { k, .. } = *op else { unreachable!() };
            let l = sample_cone_point(rng, n, |l| in_gamma_k_prime(l, k - 1), 100_000).ok_or_else(|| no_sample(op))?;
            Sample {
                margin: mak_comparison_gap(&l, k)?,
                witness: json!({ "lambda": l }),
            }
        }
        Property::Garding => {
            let c = op.garding_constant().expect("built-ins carry a constant");
            let p = positive(rng, n);
            Sample {
                margin: garding_comparison_margin(op, &p, c)?,
                witness: json!({ "P": matrix_json(&p), "C": c }),
            }
        }
        Property::Sharpened => {
            let c = op.garding_constant().expect("built-ins carry a constant");
            let a = sample_matrix(op, rng)?;
            let p = positive(rng, n);
            Sample {
                margin: sharpened_comparison_margin(op, &a, &p, c)?,
                witness: json!({ "A": matrix_json(&a), "P": matrix_json(&p), "C": c }),
            }
        }
        Property::Jensen => {
            let count = rng.random_range(2..=5);
            let batch = (0..count).map(|_| sample_matrix(op, rng)).collect::<Result<Vec<_>>>()?;
            Sample {
                margin: jensen_gap(op, &batch)?,
                witness: json!({ "batch": batch.iter().map(matrix_json).collect::<Vec<_>>() }),
            }
        }
        Property::Concavity => {
            let a = sample_matrix(op, rng)?;
            let b = sample_matrix(op, rng)?;
            let t: f64 = rng.random();
            Sample {
                margin: concavity_probe(op, &a, &b, t)?,
                witness: json!({ "A": matrix_json(&a), "B": matrix_json(&b), "t": t }),
            }
        }
        Property::Schur => {
            let mu = sample_lambda(op, rng).ok_or_else(|| no_sample(op))?;
            let mut l = mu.clone();
            for _ in 0..rng.random_range(1..=4) {
                let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
                l = t_transform(&l, i, j, rng.random());
            }
            Sample {
                margin: schur_concavity_probe(op, &l, &mu)?,
                witness: json!({ "lambda": l, "mu": mu }),
            }
        }
        Property::Monotonicity => {
            let a = sample_matrix(op, rng)?;
            let q = random_with_spectrum_in(rng, n, 0.0, 1.0);
            let scale = eval_f(op, &a, ConeCheck::Strict)?.abs().max(1.0);
            Sample {
                margin: monotonicity_gap(op, &a, &q)? / scale,
                witness: json!({ "A": matrix_json(&a), "Q": matrix_json(&q) }),
            }
        }
        Property::Gradient => {
            let a = interior_matrix(op, rng)?;
            let g = grad_g(op, &a)?;
            let fd = fd_grad_g(op, &a, 1e-5)?;
            Sample {
                margin: -g.distance(&fd) / g.frobenius_norm().max(1e-300),
                witness: json!({ "A": matrix_json(&a) }),
            }
        }
        Property::Homogeneity => {
            let a = sample_matrix(op, rng)?;
            let t: f64 = 10f64.powf(rng.random_range(-2.0..2.0));
            let g = grad_g(op, &a)?;
            let gt = grad_g(op, &(&a * t))?;
            Sample {
                margin: -gt.distance(&g) / g.frobenius_norm().max(1e-300),
                witness: json!({ "A": matrix_json(&a), "t": t }),
            }
        }
        Property::Hyperbolicity => {
            let l: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let degree = op.degree().round() as usize;
            let rep = hyperbolicity_check(|x| op.eval_hat(x), degree, &vec![1.0; n], &l, prop.tolerance())?;
            Sample {
                margin: -rep.worst_imaginary,
                witness: json!({ "lambda": l, "roots": rep.roots.iter().map(|r| [r.re, r.im]).collect::<Vec<_>>() }),
            }
        }
        Property::CrConvexity => {
            let draw = |rng: &mut SeededRng| -> Result<HermitianMatrix> {
                let l = sample_gamma_r(op, DEFAULT_R, rng, 100_000).ok_or_else(|| no_sample(op))?;
                Ok(random_with_spectrum(rng, &l))
            };
            let a = draw(rng)?;
            let b = draw(rng)?;
            let mid = a.lerp(&b, 0.5)?;
            Sample {
                margin: c_r_slack(op, &mid, DEFAULT_R)?,
                witness: json!({ "A": matrix_json(&a), "B": matrix_json(&b), "R": DEFAULT_R }),
            }
        }
        Property::Ellipticity => unreachable!("handled as a single estimate"),
    })
}

fn worker_count(samples: usize) -> usize {
    let cores = thread::available_parallelism().map_or(1, |c| c.get());
    cores.min(samples.div_ceil(256)).max(1)
}

/// Runs `samples` draws of `prop` for `op`.
pub fn certify(op: &Builtin, prop: Property, samples: usize, seed: u64) -> Result<Certification> {
    if !prop.applies_to(op) {
        return Err(Error::Input(format!("property '{prop}' does not apply to {op}")));
    }
    if samples == 0 {
        return Err(Error::Input("sample count must be at least 1".into()));
    }
    if prop == Property::Ellipticity {
        let rep = uniform_ellipticity_estimate(op, DEFAULT_R, samples, seed)?;
        let margin = if rep.passed() { rep.m.min(rep.increment_ratio) } else { -rep.m.abs().max(1.0) };
        return Ok(Certification {
            property: prop,
            operator: op.to_string(),
            samples,
            worst_margin: margin,
            tolerance: 0.0,
            passed: rep.passed(),
            witness: serde_json::to_value(&rep)?,
        });
    }

    let workers = worker_count(samples);
    let chunk = samples.div_ceil(workers);
    let results: Vec<Result<Option<(usize, Sample)>>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || -> Result<Option<(usize, Sample)>> {
                    let mut worst: Option<(usize, Sample)> = None;
                    for i in (w * chunk)..((w + 1) * chunk).min(samples) {
                        let mut rng = seeded_rng(sub_seed(seed, i as u64));
                        let s = one_sample(op, prop, &mut rng)?;
                        // NaN margins count as the worst possible outcome.
                        let m = if s.margin.is_nan() { f64::NEG_INFINITY } else { s.margin };
                        let better = worst.as_ref().is_none_or(|(_, cur)| {
                            let c = if cur.margin.is_nan() { f64::NEG_INFINITY } else { cur.margin };
                            m < c
                        });
                        if better {
                            worst = Some((i, s));
                        }
                    }
                    Ok(worst)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut worst: Option<(usize, Sample)> = None;
    for r in results {
        if let Some((i, s)) = r? {
            let replace = worst.as_ref().is_none_or(|(j, cur)| {
                let (a, b) = (nan_low(s.margin), nan_low(cur.margin));
                a < b || (a == b && i < *j)
            });
            if replace {
                worst = Some((i, s));
            }
        }
    }
    let (index, s) = worst.expect("at least one sample");
    let tolerance = prop.tolerance();
    Ok(Certification {
        property: prop,
        operator: op.to_string(),
        samples,
        worst_margin: s.margin,
        tolerance,
        passed: s.margin >= -tolerance,
        witness: json!({ "sample": index, "input": s.witness }),
    })
}

fn nan_low(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x
    }
}

/// Every applicable property of `op`.
pub fn certify_all(op: &Builtin, samples: usize, seed: u64) -> Result<Vec<Certification>> {
    Property::ALL
        .into_iter()
        .filter(|p| p.applies_to(op))
        .map(|p| certify(op, p, samples, sub_seed(seed, p as u64 + 1_000_000)))
        .collect()
}

/// `G` at the identity, used in reports as a sanity value.
pub fn g_at_identity(op: &Builtin) -> Result<f64> {
    eval_g(op, &HermitianMatrix::identity(op.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.as_str().parse::<Property>().unwrap(), p);
        }
        assert!("nope".parse::<Property>().is_err());
    }

    #[test]
    fn applicability() {
        assert!(Property::Maclaurin.applies_to(&Builtin::SigmaK { n: 3, k: 2 }));
        assert!(!Property::Maclaurin.applies_to(&Builtin::SigmaK { n: 3, k: 1 }));
        assert!(!Property::Maclaurin.applies_to(&Builtin::Determinant { n: 3 }));
        assert!(Property::Comparison.applies_to(&Builtin::MaK { n: 3, k: 2 }));
        let err = certify(&Builtin::Determinant { n: 2 }, Property::Comparison, 10, 1);
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn deterministic_and_passing() {
        let op = Builtin::MaK { n: 3, k: 2 };
        let a = certify_all(&op, 300, 7).unwrap();
        let b = certify_all(&op, 300, 7).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        for c in &a {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn catalog_passes_small_budget() {
        for op in Builtin::catalog(4, &[0.0, 0.5]) {
            for c in certify_all(&op, 60, 11).unwrap() {
                assert!(c.passed, "{op}: {c:?}");
            }
        }
    }

    #[test]
    fn garding_is_tight_for_det() {
        let c = certify(&Builtin::Determinant { n: 3 }, Property::Garding, 100, 3).unwrap();
        assert!(c.worst_margin.abs() < 1e-12 && c.passed);
    }
}
