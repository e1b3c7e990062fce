//! Ball averages and the averaged difference operator
//! `T_ε u(z) = (n+1)/ε² · (u_ε(z) - u(z))`, where `u_ε` is the mean of `u`
//! over the Euclidean ball of radius `ε` in `C^n = R^{2n}`.
//!
//! Averages are Monte Carlo estimates over antithetic pairs `z ± εw`, with
//! `w` uniform in the unit ball. Pairing keeps the estimator unbiased and
//! removes the odd part of `u` around `z` exactly.

use rand_distr::{Distribution, StandardNormal};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{fd_hessian_richardson, FieldClass, ScalarField};
use crate::linalg::C64;
use crate::regression::fit_line;
use crate::sampling::seeded_rng;

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// A fixed set of unit-ball samples in `R^{2n}`, reusable across fields,
/// centers and radii so that linear combinations are evaluated exactly.
#[derive(Clone, Debug)]
pub struct BallSampler {
    n: usize,
    points: Vec<Vec<f64>>,
}

impl BallSampler {
    /// `count` uniform points of the unit ball in `R^{2n}`: a normalized
    /// Gaussian direction scaled by `U^{1/(2n)}`.
    pub fn new(n: usize, count: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("dimension must be positive".into()));
        }
        if count == 0 {
            return Err(Error::Input("sample count must be at least 1".into()));
        }
        let mut rng = seeded_rng(seed);
        let d = 2 * n;
        let points = (0..count)
            .map(|_| {
                let mut g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                let u: f64 = rng.random();
                let radius = u.powf(1.0 / d as f64);
                g.iter_mut().for_each(|x| *x *= radius / norm);
                g
            })
            .collect();
        Ok(Self { n, points })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn check<F: ScalarField + ?Sized>(&self, field: &F, z: &[C64], eps: f64) -> Result<()> {
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::Input(format!("radius must be positive, got {eps}")));
        }
        if field.dim() != self.n || z.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: z.len().max(field.dim()),
            });
        }
        Ok(())
    }

    /// Per-pair means `(u(z+εw) + u(z-εw)) / 2`.
    fn pair_means<F: ScalarField + ?Sized>(&self, field: &F, z: &[C64], eps: f64) -> Vec<f64> {
        let n = self.n;
        let mut plus = z.to_vec();
        let mut minus = z.to_vec();
        self.points
            .iter()
            .map(|w| {
                for j in 0..n {
                    let dz = C64::new(w[j], w[n + j]) * eps;
                    plus[j] = z[j] + dz;
                    minus[j] = z[j] - dz;
                }
                0.5 * (field.value(&plus) + field.value(&minus))
            })
            .collect()
    }

    pub fn ball_average<F: ScalarField + ?Sized>(&self, field: &F, z: &[C64], eps: f64) -> Result<Estimate> {
        self.check(field, z, eps)?;
        Ok(summarize(&self.pair_means(field, z, eps)))
    }

    pub fn t_eps<F: ScalarField + ?Sized>(&self, field: &F, z: &[C64], eps: f64) -> Result<Estimate> {
        let avg = self.ball_average(field, z, eps)?;
        let scale = (self.n + 1) as f64 / (eps * eps);
        Ok(Estimate {
            value: scale * (avg.value - field.value(z)),
            stderr: scale * avg.stderr,
            samples: avg.samples,
        })
    }
}

fn summarize(values: &[f64]) -> Estimate {
    let count = values.len();
    let mean = values.iter().sum::<f64>() / count as f64;
    let stderr = if count > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
        (var / count as f64).sqrt()
    } else {
        0.0
    };
    Estimate {
        value: mean,
        stderr,
        samples: count,
    }
}

/// `u_ε(z)` from `samples` antithetic pairs.
pub fn ball_average<F: ScalarField + ?Sized>(
    field: &F,
    z: &[C64],
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    BallSampler::new(z.len(), samples, seed)?.ball_average(field, z, eps)
}

/// `T_ε u(z)` from `samples` antithetic pairs.
pub fn t_eps<F: ScalarField + ?Sized>(field: &F, z: &[C64], eps: f64, samples: usize, seed: u64) -> Result<Estimate> {
    BallSampler::new(z.len(), samples, seed)?.t_eps(field, z, eps)
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub values: Vec<Estimate>,
    pub worst_index: usize,
    pub worst: Estimate,
    /// `worst.value ≥ -3·worst.stderr`
    pub passed: bool,
}

/// Smallest `T_ε u` over `grid` for a subharmonic field.
pub fn positivity_probe<F: ScalarField + ?Sized>(
    field: &F,
    grid: &[Vec<C64>],
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<PositivityReport> {
    if !field.is_subharmonic() {
        return Err(Error::Precondition(format!("{} is not declared subharmonic", field.name())));
    }
    if grid.is_empty() {
        return Err(Error::Input("empty grid".into()));
    }
    let sampler = BallSampler::new(field.dim(), samples, seed)?;
    let values = grid
        .iter()
        .map(|z| sampler.t_eps(field, z, eps))
        .collect::<Result<Vec<_>>>()?;
    let (worst_index, worst) = values
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value))
        .expect("non-empty grid");
    Ok(PositivityReport {
        passed: worst.value >= -3.0 * worst.stderr,
        values,
        worst_index,
        worst,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub eps: Vec<f64>,
    pub values: Vec<Estimate>,
    /// Complex Laplacian `Trace(D²_C u)(z)` by finite differences.
    pub limit: f64,
    pub biases: Vec<f64>,
    /// Slope of `log|T_ε u - Δu|` against `log ε`; `None` when some bias
    /// is within three standard errors of zero.
    pub fitted_order: Option<f64>,
}

/// `T_ε u(z)` along a sequence of radii sharing one sample set.
pub fn convergence_probe<F: ScalarField + ?Sized>(
    field: &F,
    z: &[C64],
    eps_list: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    if field.class() == FieldClass::Piecewise {
        return Err(Error::Precondition(format!("{} is not smooth", field.name())));
    }
    if eps_list.is_empty() {
        return Err(Error::Input("empty radius list".into()));
    }
    let sampler = BallSampler::new(z.len(), samples, seed)?;
    let values = eps_list
        .iter()
        .map(|&e| sampler.t_eps(field, z, e))
        .collect::<Result<Vec<_>>>()?;
    let limit = fd_hessian_richardson(field, z, 1e-3).trace();
    let biases: Vec<f64> = values.iter().map(|v| v.value - limit).collect();
    let resolved = eps_list.len() >= 2
        && values.iter().zip(&biases).all(|(v, b)| b.abs() > 3.0 * v.stderr);
    let fitted_order = resolved.then(|| {
        let xs: Vec<f64> = eps_list.iter().map(|e| e.ln()).collect();
        let ys: Vec<f64> = biases.iter().map(|b| b.abs().ln()).collect();
        fit_line(&xs, &ys).0
    });
    Ok(ConvergenceReport {
        eps: eps_list.to_vec(),
        values,
        limit,
        biases,
        fitted_order,
    })
}
