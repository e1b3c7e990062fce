//! Seeded random sources for the property probes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Box from which cone points are rejection-sampled.
pub const CONE_BOX: (f64, f64) = (-1.0, 3.0);

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic child seed, independent of how many draws the parent made.
pub fn sub_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hermitian matrix with independent Gaussian entries of standard deviation `scale`.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        m[(i, i)] = C64::new(scale * d, 0.0);
        for j in i + 1..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = C64::new(re, im) * (scale / std::f64::consts::SQRT_2);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::new(m).expect("constructed Hermitian")
}

/// Haar-distributed unitary: modified Gram-Schmidt on the columns of a
/// complex Gaussian matrix. The columns come out with the phases of the
/// QR factor already normalized, which is what makes the law Haar.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    for j in 0..n {
        for i in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let proj: C64 = done[i].iter().zip(&rest[0]).map(|(q, x)| q.conj() * x).sum();
            for (x, q) in rest[0].iter_mut().zip(&done[i]) {
                *x -= q * proj;
            }
        }
        let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut cols[j] {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

/// `U diag(lambda) U*` with a random unitary `U`.
pub fn random_with_spectrum<R: Rng>(rng: &mut R, lambda: &[f64]) -> HermitianMatrix {
    let u = random_unitary(rng, lambda.len());
    HermitianMatrix::from_eigen(&u, lambda).expect("matching dimensions")
}

/// Hermitian matrix with a random eigenbasis and eigenvalues uniform in `[lo, hi)`.
pub fn random_with_spectrum_in<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> HermitianMatrix {
    let lambda = uniform_box(rng, n, lo, hi);
    random_with_spectrum(rng, &lambda)
}

pub fn uniform_box<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Rejection sampling from `CONE_BOX^n`; `None` after `max_tries` misses.
pub fn sample_cone_point<R: Rng>(
    rng: &mut R,
    n: usize,
    accept: impl Fn(&[f64]) -> bool,
    max_tries: usize,
) -> Option<Vec<f64>> {
    let (lo, hi) = CONE_BOX;
    (0..max_tries)
        .map(|_| uniform_box(rng, n, lo, hi))
        .find(|l| accept(l))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<f64> = uniform_box(&mut seeded_rng(5), 6, 0.0, 1.0);
        let b: Vec<f64> = uniform_box(&mut seeded_rng(5), 6, 0.0, 1.0);
        assert_eq!(a, b);
        assert_ne!(sub_seed(5, 0), sub_seed(5, 1));
    }

    #[test]
    fn rejection_respects_predicate() {
        let mut rng = seeded_rng(1);
        for _ in 0..100 {
            let p = sample_cone_point(&mut rng, 3, |l| l.iter().all(|&x| x > 0.0), 1000).unwrap();
            assert!(p.iter().all(|&x| x > 0.0 && x < 3.0));
        }
        assert!(sample_cone_point(&mut rng, 3, |_| false, 10).is_none());
    }
}
