//! The derivation action `D_A` of a matrix on `Λ^k C^n` (the additive
//! compound), written in the lexicographic basis `e_{i_1} ∧ … ∧ e_{i_k}`.
//!
//! Its spectrum is the multiset of k-fold eigenvalue sums of `A`, so
//! `det D_A = MA_k(λ(A))` and `D_A > 0` characterizes `Γ'_k`.

use std::collections::HashMap;

use crate::error::{check_order, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, Spectrum, C64};
use crate::symmetric::{index_sets, ksum_multiset, IndexSet};

#[derive(Clone, Debug)]
pub struct CompoundMatrix {
    pub n: usize,
    pub k: usize,
    pub basis: Vec<IndexSet>,
    pub body: HermitianMatrix,
}

/// Matrix of `D_A` for an arbitrary square complex `A`.
///
/// Entry `(I, J)`:
/// * `Σ_{i∈I} a_ii` when `I = J`;
/// * `(-1)^{pos_I(i) + pos_J(j)} a_ij` when `I \ J = {i}` and `J \ I = {j}`;
/// * zero otherwise.
///
/// `pos` is the zero-based position inside the sorted tuple. The sign comes
/// from moving `e_i` to the slot `e_j` occupied in the wedge `e_J`.
pub fn derivation_matrix(a: &ComplexMatrix, k: usize) -> Result<(Vec<IndexSet>, ComplexMatrix)> {
    let n = a.dim();
    check_order(n, k)?;
    let basis = index_sets(n, k)?;
    let rank: HashMap<&[usize], usize> = basis
        .iter()
        .enumerate()
        .map(|(r, set)| (set.indices(), r))
        .collect();
    let dim = basis.len();
    let mut out = ComplexMatrix::zeros(dim);

    for (col, set_j) in basis.iter().enumerate() {
        let idx_j = set_j.indices();
        out[(col, col)] = idx_j.iter().map(|&i| a[(i, i)]).sum();
        // Replace the entry j at position pj by some i ∉ J.
        for (pj, &j) in idx_j.iter().enumerate() {
            for i in (0..n).filter(|&i| !set_j.contains(i)) {
                let mut target: Vec<usize> = idx_j.iter().copied().filter(|&x| x != j).collect();
                let pi = target.partition_point(|&x| x < i);
                target.insert(pi, i);
                let row = rank[target.as_slice()];
                let sign = if (pi + pj) % 2 == 0 { 1.0 } else { -1.0 };
                out[(row, col)] += a[(i, j)] * sign;
            }
        }
    }
    Ok((basis, out))
}

/// `D_A` for Hermitian `A`; the result is Hermitian again.
pub fn build_compound(a: &HermitianMatrix, k: usize) -> Result<CompoundMatrix> {
    let (basis, body) = derivation_matrix(a.as_matrix(), k)?;
    Ok(CompoundMatrix {
        n: a.dim(),
        k,
        basis,
        body: HermitianMatrix::new(body)?,
    })
}

/// Distance between the sorted spectrum of `D_A` and the sorted k-sums of
/// `λ(A)`, each computed by its own eigendecomposition.
pub fn compound_spectrum_residual(a: &HermitianMatrix, k: usize) -> Result<f64> {
    let compound = build_compound(a, k)?;
    let direct = compound.body.spectrum()?;
    let lambda = a.spectrum()?;
    let sums = Spectrum::from_unsorted(ksum_multiset(lambda.values(), k)?);
    Ok(direct.distance(&sums))
}

/// `det(D_A)` by LU factorization.
pub fn mak_via_determinant(a: &HermitianMatrix, k: usize) -> Result<f64> {
    Ok(build_compound(a, k)?.body.det())
}

/// `A ∈ C'_k`, i.e. `D_A` positive-definite.
pub fn in_c_k_prime(a: &HermitianMatrix, k: usize) -> Result<bool> {
    Ok(build_compound(a, k)?.body.spectrum()?.min() > 0.0)
}

/// Looks for a permutation `p` with `a[(p[i], p[j])] ≈ b[(i, j)]` entrywise
/// within `tol`; returns the first one found. Exhaustive, so only meant for
/// dimensions up to about 8.
pub fn find_permutation_similarity(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
) -> Option<Vec<usize>> {
    if a.dim() != b.dim() {
        return None;
    }
    let n = a.dim();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(a, b, tol, &mut perm, &mut used).then_some(perm)
}

fn search(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
    perm: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let n = a.dim();
    let i = perm.len();
    if i == n {
        return true;
    }
    for cand in 0..n {
        if used[cand] {
            continue;
        }
        perm.push(cand);
        let consistent = (0..=i).all(|j| {
            close(a[(perm[i], perm[j])], b[(i, j)], tol) && close(a[(perm[j], perm[i])], b[(j, i)], tol)
        });
        if consistent {
            used[cand] = true;
            if search(a, b, tol, perm, used) {
                return true;
            }
            used[cand] = false;
        }
        perm.pop();
    }
    false
}

fn close(x: C64, y: C64, tol: f64) -> bool {
    (x - y).norm() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_hermitian, seeded_rng, uniform_box};
    use crate::symmetric::{binomial, in_gamma_k_prime, ma_k};

    #[test]
    fn extreme_orders() {
        let mut rng = seeded_rng(1);
        let a = random_hermitian(&mut rng, 4, 1.0);
        let one = build_compound(&a, 1).unwrap();
        assert_eq!(one.body, a);
        let top = build_compound(&a, 4).unwrap();
        assert_eq!(top.body.dim(), 1);
        assert!((top.body[(0, 0)].re - a.trace()).abs() < 1e-14);
        assert!(build_compound(&a, 5).is_err());
        assert!(build_compound(&a, 0).is_err());
    }

    #[test]
    fn identity_maps_to_scaled_identity() {
        for n in 1..=5 {
            for k in 1..=n {
                let d = build_compound(&HermitianMatrix::identity(n), k).unwrap();
                let expected = &HermitianMatrix::identity(binomial(n, k)) * k as f64;
                assert_eq!(d.body, expected);
            }
        }
    }

    #[test]
    fn diagonal_maps_to_ksums() {
        let l = [0.5, -1.0, 2.0, 3.5];
        let a = HermitianMatrix::from_real_diagonal(&l);
        let d = build_compound(&a, 2).unwrap();
        let expected = HermitianMatrix::from_real_diagonal(&ksum_multiset(&l, 2).unwrap());
        assert_eq!(d.body, expected);
        assert_eq!(compound_spectrum_residual(&a, 2).unwrap(), 0.0);
    }

    #[test]
    fn zero_pattern() {
        let mut rng = seeded_rng(2);
        let a = random_hermitian(&mut rng, 5, 1.0);
        for k in 1..=5 {
            let d = build_compound(&a, k).unwrap();
            for (r, ri) in d.basis.iter().enumerate() {
                for (c, cj) in d.basis.iter().enumerate() {
                    let common = ri.indices().iter().filter(|&&i| cj.contains(i)).count();
                    if common + 1 < k {
                        assert_eq!(d.body[(r, c)], C64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn determinant_and_spectrum() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        assert!((mak_via_determinant(&a, 2).unwrap() - 60.0).abs() < 1e-12);
        for n in 1..=4 {
            for k in 1..=n {
                let det = mak_via_determinant(&HermitianMatrix::identity(n), k).unwrap();
                let expected = (k as f64).powi(binomial(n, k) as i32);
                assert!((det - expected).abs() <= 1e-12 * expected);
            }
        }
        let mut rng = seeded_rng(5);
        for _ in 0..20 {
            let a = random_hermitian(&mut rng, 4, 1.0);
            let r = compound_spectrum_residual(&a, 2).unwrap();
            assert!(r <= 1e-8 * (1.0 + a.frobenius_norm()));
            let lambda = a.spectrum().unwrap();
            let route_a = ma_k(lambda.values(), 2).unwrap();
            let route_b = mak_via_determinant(&a, 2).unwrap();
            assert!((route_a - route_b).abs() <= 1e-8 * route_a.abs().max(1e-300));
        }
    }

    #[test]
    fn c_k_prime_examples() {
        assert!(in_c_k_prime(&HermitianMatrix::identity(3), 2).unwrap());
        let d = HermitianMatrix::from_real_diagonal(&[-1.0, 2.0, 3.0]);
        assert!(in_c_k_prime(&d, 2).unwrap());
        assert!(!in_c_k_prime(&d, 1).unwrap());
        let mut rng = seeded_rng(8);
        for _ in 0..200 {
            let l = uniform_box(&mut rng, 4, -1.0, 3.0);
            let a = crate::sampling::random_with_spectrum(&mut rng, &l);
            for k in 1..=4 {
                assert_eq!(in_c_k_prime(&a, k).unwrap(), in_gamma_k_prime(&l, k));
            }
        }
    }

    #[test]
    fn linearity() {
        let mut rng = seeded_rng(6);
        let a = random_hermitian(&mut rng, 4, 1.0);
        let b = random_hermitian(&mut rng, 4, 1.0);
        for k in 1..=4 {
            let da = build_compound(&a, k).unwrap().body;
            let db = build_compound(&b, k).unwrap().body;
            let dsum = build_compound(&(&a + &b), k).unwrap().body;
            assert!(dsum.distance(&(&da + &db)) <= 1e-14);
            let dscaled = build_compound(&(&a * 2.5), k).unwrap().body;
            assert!(dscaled.distance(&(&da * 2.5)) <= 1e-14);
        }
    }

    #[test]
    fn permutation_search() {
        let mut rng = seeded_rng(12);
        let a = random_hermitian(&mut rng, 5, 1.0);
        let p = [3usize, 0, 4, 1, 2];
        let b = ComplexMatrix::from_fn(5, |i, j| a[(p[i], p[j])]);
        assert_eq!(find_permutation_similarity(a.as_matrix(), &b, 1e-12), Some(p.to_vec()));
        let c = random_hermitian(&mut rng, 5, 1.0);
        assert_eq!(find_permutation_similarity(a.as_matrix(), c.as_matrix(), 1e-12), None);
    }
}
