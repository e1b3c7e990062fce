//! Real-valued fields on `C^n` and finite-difference Hessians.
//!
//! Points are `&[C64]`. Real coordinates are laid out as
//! `(x_1, …, x_n, y_1, …, y_n)` with `z_j = x_j + i y_j`.

use crate::embedding::SymmetricRealMatrix;
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};
use crate::pogorelov::{analytic_hessian, PogorelovParams, SplitPoint};

/// Regularity tag used to decide which probes a field may enter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldClass {
    /// Quadratic polynomial; ball averages have no bias.
    Quadratic,
    /// At least C^4 on the region it is evaluated in.
    Smooth,
    /// Continuous but only piecewise smooth.
    Piecewise,
}

pub trait ScalarField: Sync {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn value(&self, z: &[C64]) -> f64;
    fn class(&self) -> FieldClass;

    /// Whether the field is subharmonic where it is meant to be evaluated.
    fn is_subharmonic(&self) -> bool {
        false
    }

    /// Exact complex Hessian `(u_{i j̄})`, when known in closed form.
    fn complex_hessian(&self, _z: &[C64]) -> Option<HermitianMatrix> {
        None
    }
}

/// A field given by a closure.
pub struct FnField<F> {
    pub name: String,
    pub dim: usize,
    pub class: FieldClass,
    pub f: F,
}

impl<F: Fn(&[C64]) -> f64 + Sync> ScalarField for FnField<F> {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, z: &[C64]) -> f64 {
        (self.f)(z)
    }
    fn class(&self) -> FieldClass {
        self.class
    }
}

/// The fields used by the mollifier and embedding checks.
#[derive(Clone, Debug, PartialEq)]
pub enum BuiltinField {
    /// `|z|²`
    SquaredNorm { n: usize },
    /// `|z|⁴`
    QuarticNorm { n: usize },
    /// `Re(z_1²)`, pluriharmonic.
    PluriharmonicQuadratic { n: usize },
    /// `Re(z_1³) + |z|²`
    CubicPlusSquare { n: usize },
    /// `log|z - pole|` on `C`, harmonic off the pole.
    LogDistance { pole: C64 },
    /// `max(Re z_1, Im z_1, Re(z_1²))`, a maximum of pluriharmonic functions.
    MaxPluriharmonic { n: usize },
    /// `(1 + |z'|²)|z''|^{2β}`
    Pogorelov(PogorelovParams),
}

impl BuiltinField {
    /// One instance of every built-in field, in low dimension.
    pub fn catalog() -> Vec<Self> {
        vec![
            Self::SquaredNorm { n: 2 },
            Self::QuarticNorm { n: 2 },
            Self::PluriharmonicQuadratic { n: 2 },
            Self::CubicPlusSquare { n: 2 },
            Self::LogDistance { pole: C64::new(0.5, 0.5) },
            Self::MaxPluriharmonic { n: 1 },
            Self::Pogorelov(PogorelovParams::new(1, 3, 0.7).expect("valid parameters")),
        ]
    }

    /// Whether `z` is far enough from poles, kinks and the singular set for
    /// central differences with steps up to `1e-2` to see a smooth function.
    pub fn is_regular_point(&self, z: &[C64]) -> bool {
        match self {
            Self::LogDistance { pole } => (z[0] - pole).norm() >= 0.3,
            Self::MaxPluriharmonic { .. } => {
                let v = [z[0].re, z[0].im, (z[0] * z[0]).re];
                let mut s = v;
                s.sort_by(f64::total_cmp);
                s[2] - s[1] >= 0.1
            }
            Self::Pogorelov(p) => SplitPoint::split(z, p.m()).second_norm_sqr().sqrt() >= 0.3,
            _ => true,
        }
    }
}

fn norm_sqr(z: &[C64]) -> f64 {
    z.iter().map(|w| w.norm_sqr()).sum()
}

impl ScalarField for BuiltinField {
    fn name(&self) -> String {
        match self {
            Self::SquaredNorm { n } => format!("|z|^2 (n={n})"),
            Self::QuarticNorm { n } => format!("|z|^4 (n={n})"),
            Self::PluriharmonicQuadratic { n } => format!("Re(z1^2) (n={n})"),
            Self::CubicPlusSquare { n } => format!("Re(z1^3)+|z|^2 (n={n})"),
            Self::LogDistance { pole } => format!("log|z-({}{:+}i)|", pole.re, pole.im),
            Self::MaxPluriharmonic { n } => format!("max(Re z1, Im z1, Re z1^2) (n={n})"),
            Self::Pogorelov(p) => format!("pogorelov (m={}, n={}, beta={})", p.m(), p.n(), p.beta()),
        }
    }

    fn dim(&self) -> usize {
        match self {
            Self::SquaredNorm { n }
            | Self::QuarticNorm { n }
            | Self::PluriharmonicQuadratic { n }
            | Self::CubicPlusSquare { n }
            | Self::MaxPluriharmonic { n } => *n,
            Self::LogDistance { .. } => 1,
            Self::Pogorelov(p) => p.n(),
        }
    }

    fn value(&self, z: &[C64]) -> f64 {
        match self {
            Self::SquaredNorm { .. } => norm_sqr(z),
            Self::QuarticNorm { .. } => norm_sqr(z).powi(2),
            Self::PluriharmonicQuadratic { .. } => (z[0] * z[0]).re,
            Self::CubicPlusSquare { .. } => (z[0] * z[0] * z[0]).re + norm_sqr(z),
            Self::LogDistance { pole } => (z[0] - pole).norm().ln(),
            Self::MaxPluriharmonic { .. } => z[0].re.max(z[0].im).max((z[0] * z[0]).re),
            Self::Pogorelov(p) => p.u_value(&SplitPoint::split(z, p.m())),
        }
    }

    fn class(&self) -> FieldClass {
        match self {
            Self::SquaredNorm { .. } | Self::PluriharmonicQuadratic { .. } => FieldClass::Quadratic,
            Self::MaxPluriharmonic { .. } => FieldClass::Piecewise,
            _ => FieldClass::Smooth,
        }
    }

    fn is_subharmonic(&self) -> bool {
        // Pogorelov's u is plurisubharmonic off N and continuous across it.
        true
    }

    fn complex_hessian(&self, z: &[C64]) -> Option<HermitianMatrix> {
        let n = self.dim();
        match self {
            Self::SquaredNorm { .. } => Some(HermitianMatrix::identity(n)),
            Self::QuarticNorm { .. } => {
                let s = norm_sqr(z);
                HermitianMatrix::from_fn(n, |i, j| {
                    let delta = if i == j { s } else { 0.0 };
                    (z[i].conj() * z[j] + delta) * 2.0
                })
                .ok()
            }
            Self::PluriharmonicQuadratic { .. } => Some(HermitianMatrix::zeros(n)),
            Self::CubicPlusSquare { .. } => Some(HermitianMatrix::identity(n)),
            Self::LogDistance { pole } => (z[0] != *pole).then(|| HermitianMatrix::zeros(1)),
            Self::MaxPluriharmonic { .. } => None,
            Self::Pogorelov(p) => analytic_hessian(p, &SplitPoint::split(z, p.m())).ok(),
        }
    }
}

/// Second derivatives of a field in the real coordinates by central
/// differences. `a`, `b` index `(x_1..x_n, y_1..y_n)`.
struct RealStencil<'a, F: ScalarField + ?Sized> {
    field: &'a F,
    base: Vec<f64>,
    h: f64,
    center: f64,
}

impl<'a, F: ScalarField + ?Sized> RealStencil<'a, F> {
    fn new(field: &'a F, z: &[C64], h: f64) -> Self {
        let n = z.len();
        let mut base = vec![0.0; 2 * n];
        for (j, w) in z.iter().enumerate() {
            base[j] = w.re;
            base[n + j] = w.im;
        }
        let center = field.value(z);
        Self { field, base, h, center }
    }

    fn eval(&self, shifts: &[(usize, f64)]) -> f64 {
        let mut p = self.base.clone();
        for &(a, d) in shifts {
            p[a] += d;
        }
        let n = p.len() / 2;
        let z: Vec<C64> = (0..n).map(|j| C64::new(p[j], p[n + j])).collect();
        self.field.value(&z)
    }

    fn second(&self, a: usize, b: usize) -> f64 {
        let h = self.h;
        if a == b {
            (self.eval(&[(a, h)]) - 2.0 * self.center + self.eval(&[(a, -h)])) / (h * h)
        } else {
            (self.eval(&[(a, h), (b, h)]) - self.eval(&[(a, h), (b, -h)])
                - self.eval(&[(a, -h), (b, h)])
                + self.eval(&[(a, -h), (b, -h)]))
                / (4.0 * h * h)
        }
    }
}

/// Real Hessian `D²_R u` in the `(x, y)` block order.
pub fn fd_real_hessian<F: ScalarField + ?Sized>(field: &F, z: &[C64], h: f64) -> SymmetricRealMatrix {
    let st = RealStencil::new(field, z, h);
    let dim = 2 * z.len();
    let mut s = SymmetricRealMatrix::zeros(dim);
    for a in 0..dim {
        for b in a..dim {
            let v = st.second(a, b);
            s.set(a, b, v);
            s.set(b, a, v);
        }
    }
    s
}

/// Complex Hessian `u_{i j̄} = ¼[(u_{x_i x_j} + u_{y_i y_j}) + i(u_{x_i y_j} - u_{y_i x_j})]`
/// by central differences with step `h`.
pub fn fd_hessian<F: ScalarField + ?Sized>(field: &F, z: &[C64], h: f64) -> HermitianMatrix {
    let n = z.len();
    let st = RealStencil::new(field, z, h);
    let m = ComplexMatrix::from_fn(n, |i, j| {
        let re = st.second(i, j) + st.second(n + i, n + j);
        let im = if i == j {
            0.0
        } else {
            st.second(i, n + j) - st.second(n + i, j)
        };
        C64::new(re, im) * 0.25
    });
    HermitianMatrix::new(m).expect("finite-difference Hessian of a finite field")
}

/// One Richardson step on [`fd_hessian`]: `(4·H(h/2) - H(h)) / 3`.
pub fn fd_hessian_richardson<F: ScalarField + ?Sized>(field: &F, z: &[C64], h: f64) -> HermitianMatrix {
    let coarse = fd_hessian(field, z, h);
    let fine = fd_hessian(field, z, h / 2.0);
    &(&fine * (4.0 / 3.0)) - &(&coarse * (1.0 / 3.0))
}
