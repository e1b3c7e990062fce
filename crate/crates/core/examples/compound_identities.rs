//! Builds the derivation matrix `D_A` on 2-vectors of a random 4×4 Hermitian
//! matrix and checks its spectrum and determinant against the k-sums.

use hcl::compound::{build_compound, compound_spectrum_residual, in_c_k_prime, mak_via_determinant};
use hcl::linalg::HermitianMatrix;
use hcl::sampling::{random_hermitian, seeded_rng};
use hcl::symmetric::{ksum_multiset, ma_k};

fn main() -> hcl::Result<()> {
    let mut rng = seeded_rng(7);
    let a = random_hermitian(&mut rng, 4, 1.0);
    let (n, k) = (4, 2);
    let d = build_compound(&a, k)?;

    println!("A =\n{a}");
    let basis: Vec<String> = d.basis.iter().map(|s| s.to_string()).collect();
    println!("basis of Λ^{k}: {}", basis.join(" "));
    println!("D_A =\n{}", d.body);

    let lambda = a.spectrum()?;
    println!("λ(A)         = {:.6?}", lambda.values());
    println!("spec(D_A)    = {:.6?}", d.body.spectrum()?.values());
    let mut sums = ksum_multiset(lambda.values(), k)?;
    sums.sort_by(f64::total_cmp);
    println!("k-sums of λ  = {sums:.6?}");
    println!("residual     = {:.2e}", compound_spectrum_residual(&a, k)?);

    let det = mak_via_determinant(&a, k)?;
    let product = ma_k(lambda.values(), k)?;
    println!("det D_A = {det:.10}, MA_{k}(λ) = {product:.10}");

    // diag(-1, 2, 3, 4) has a negative eigenvalue but every pair sum is positive.
    let shifted = HermitianMatrix::from_real_diagonal(&[-1.0, 2.0, 3.0, 4.0]);
    println!(
        "diag(-1,2,3,4): in C'_1 = {}, in C'_2 = {} (n={n})",
        in_c_k_prime(&shifted, 1)?,
        in_c_k_prime(&shifted, 2)?
    );
    Ok(())
}
