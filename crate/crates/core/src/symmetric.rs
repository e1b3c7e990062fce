//! Symmetric functions of eigenvalue vectors: elementary symmetric
//! polynomials, the k-Monge-Ampère product of k-fold sums, the cones
//! `Γ_k` and `Γ'_k`, and the comparison inequalities between consecutive
//! orders.
//!
//! Eigenvalue vectors are plain `&[f64]` slices; none of the functions here
//! require them to be sorted.

use std::fmt;

use crate::error::{check_order, Error, Result};

/// A strictly increasing k-tuple of zero-based indices into `0..n`.
///
/// Displayed one-based, `(1,2,3)`, matching the usual notation for `E_n^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!(
                "index set must be non-empty and strictly increasing, got {indices:?}"
            )));
        }
        Ok(Self(indices))
    }

    /// From one-based indices.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::Input("one-based indices start at 1".into()));
        }
        Self::new(indices.iter().map(|i| i - 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Zero-based position of `i` inside the tuple.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.0.binary_search(&i).ok()
    }

    pub fn sum_over(&self, lambda: &[f64]) -> f64 {
        self.0.iter().map(|&i| lambda[i]).sum()
    }

    /// The k sub-tuples obtained by dropping one entry, in lexicographic order.
    pub fn drop_one(&self) -> Vec<IndexSet> {
        let k = self.0.len();
        (0..k)
            .rev()
            .map(|skip| {
                IndexSet(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != skip)
                        .map(|(_, &i)| i)
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `C_n^k`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).expect("binomial coefficient fits in usize")
}

/// All of `E_n^k` in lexicographic order.
pub fn index_sets(n: usize, k: usize) -> Result<Vec<IndexSet>> {
    check_order(n, k)?;
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(IndexSet(current.clone()));
        // rightmost entry that can still move
        let Some(pos) = (0..k).rev().find(|&p| current[p] < n - k + p) else {
            break;
        };
        current[pos] += 1;
        for q in pos + 1..k {
            current[q] = current[q - 1] + 1;
        }
    }
    Ok(out)
}

/// `[σ_0, σ_1, …, σ_n]` by the prefix-polynomial recurrence.
pub fn elementary_symmetric_all(lambda: &[f64]) -> Vec<f64> {
    let n = lambda.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (count, &x) in lambda.iter().enumerate() {
        for j in (1..=count + 1).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// `σ_k(λ)`, the k-th elementary symmetric polynomial.
pub fn sigma(lambda: &[f64], k: usize) -> Result<f64> {
    check_order(lambda.len(), k)?;
    Ok(elementary_symmetric_all(lambda)[k])
}

/// `σ_k` by summing the products over every index set; kept as a reference
/// for the recurrence.
pub fn sigma_enumerated(lambda: &[f64], k: usize) -> Result<f64> {
    Ok(index_sets(lambda.len(), k)?
        .iter()
        .map(|set| set.indices().iter().map(|&i| lambda[i]).product::<f64>())
        .sum())
}

/// `∂σ_k/∂λ_i = σ_{k-1}(λ with entry i removed)`.
pub fn sigma_gradient(lambda: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = lambda.len();
    check_order(n, k)?;
    let mut reduced = Vec::with_capacity(n.saturating_sub(1));
    Ok((0..n)
        .map(|i| {
            reduced.clear();
            reduced.extend(
                lambda
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &x)| x),
            );
            elementary_symmetric_all(&reduced)[k - 1]
        })
        .collect())
}

/// `λ ∈ Γ_k`: `σ_1, …, σ_k` all strictly positive.
pub fn in_gamma_k(lambda: &[f64], k: usize) -> bool {
    if k == 0 || k > lambda.len() {
        return false;
    }
    elementary_symmetric_all(lambda)[1..=k].iter().all(|&s| s > 0.0)
}

/// Every `λ_{i_1} + … + λ_{i_k}` over `E_n^k`, in lexicographic order.
pub fn ksum_multiset(lambda: &[f64], k: usize) -> Result<Vec<f64>> {
    Ok(index_sets(lambda.len(), k)?
        .iter()
        .map(|set| set.sum_over(lambda))
        .collect())
}

/// `MA_k(λ)`: product of all k-fold sums. Reduces to `Πλ_i` at `k = 1`
/// and `Σλ_i` at `k = n`.
pub fn ma_k(lambda: &[f64], k: usize) -> Result<f64> {
    Ok(ksum_multiset(lambda, k)?.iter().product())
}

/// `ln MA_k(λ)`, or `None` when some k-sum is not positive. Stays finite
/// where the product itself would overflow (`C_n^k` factors).
pub fn ln_ma_k(lambda: &[f64], k: usize) -> Result<Option<f64>> {
    let sums = ksum_multiset(lambda, k)?;
    if sums.iter().any(|&s| s <= 0.0) {
        return Ok(None);
    }
    Ok(Some(sums.iter().map(|s| s.ln()).sum()))
}

/// `λ ∈ Γ'_k`: every k-fold sum strictly positive.
pub fn in_gamma_k_prime(lambda: &[f64], k: usize) -> bool {
    match ksum_multiset(lambda, k) {
        Ok(sums) => sums.iter().all(|&s| s > 0.0),
        Err(_) => false,
    }
}

/// `(σ_{k-1}/C_n^{k-1})^{1/(k-1)} - (σ_k/C_n^k)^{1/k}` for `λ ∈ Γ_{k-1}`.
///
/// When `σ_k ≤ 0` the second term is taken to be zero.
pub fn maclaurin_gap(lambda: &[f64], k: usize) -> Result<f64> {
    let n = lambda.len();
    check_order(n, k)?;
    if k < 2 {
        return Err(Error::Precondition("Maclaurin gap needs k ≥ 2".into()));
    }
    if !in_gamma_k(lambda, k - 1) {
        return Err(Error::Precondition(format!("λ ∉ Γ_{}", k - 1)));
    }
    let e = elementary_symmetric_all(lambda);
    let lower = (e[k - 1] / binomial(n, k - 1) as f64).powf(1.0 / (k - 1) as f64);
    let upper = if e[k] > 0.0 {
        (e[k] / binomial(n, k) as f64).powf(1.0 / k as f64)
    } else {
        0.0
    };
    Ok(lower - upper)
}

/// `|Σ_{J ⊂ I, |J| = k-1} s_J - (k-1) s_I|` where `s` is the index sum.
/// Every entry of `I` appears in exactly `k - 1` of the sub-tuples, so this
/// is zero up to rounding.
pub fn distribution_identity_residual(lambda: &[f64], set: &IndexSet) -> Result<f64> {
    let k = set.len();
    if k < 2 {
        return Err(Error::Precondition("index set must have at least 2 entries".into()));
    }
    if set.indices().iter().any(|&i| i >= lambda.len()) {
        return Err(Error::Input(format!("{set} out of range for n={}", lambda.len())));
    }
    let lhs: f64 = set.drop_one().iter().map(|sub| sub.sum_over(lambda)).sum();
    Ok((lhs - (k - 1) as f64 * set.sum_over(lambda)).abs())
}

/// Geometric mean of the k-fold sums, `MA_k^{1/C_n^k}`, evaluated in log space.
fn ma_k_geometric_mean(lambda: &[f64], k: usize) -> Result<f64> {
    let count = binomial(lambda.len(), k) as f64;
    match ln_ma_k(lambda, k)? {
        Some(ln) => Ok((ln / count).exp()),
        None => Err(Error::Precondition(format!("λ ∉ Γ'_{k}"))),
    }
}

/// `(1/k)·MA_k^{1/C_n^k} - (1/(k-1))·MA_{k-1}^{1/C_n^{k-1}}` for `λ ∈ Γ'_{k-1}`.
pub fn mak_comparison_gap(lambda: &[f64], k: usize) -> Result<f64> {
    let n = lambda.len();
    check_order(n, k)?;
    if k < 2 {
        return Err(Error::Precondition("comparison needs k ≥ 2".into()));
    }
    if !in_gamma_k_prime(lambda, k - 1) {
        return Err(Error::Precondition(format!("λ ∉ Γ'_{}", k - 1)));
    }
    let upper = ma_k_geometric_mean(lambda, k)? / k as f64;
    let lower = ma_k_geometric_mean(lambda, k - 1)? / (k - 1) as f64;
    Ok(upper - lower)
}
