//! Roots of `t ↦ F̂(λ - t·e)` for MA_k, which are the k-sums divided by k,
//! and for a polynomial that is not hyperbolic.

use hcl::operator::{hyperbolicity_check, Builtin, HessianOperator};
use hcl::symmetric::ksum_multiset;

fn main() -> hcl::Result<()> {
    let op = Builtin::ma_k(4, 2)?;
    let lambda = [0.3, -1.2, 2.0, 0.9];
    let e = [1.0; 4];
    let rep = hyperbolicity_check(|l| op.eval_hat(l), 6, &e, &lambda, 1e-8)?;
    let roots: Vec<f64> = rep.roots.iter().map(|z| z.re).collect();
    let mut expected: Vec<f64> = ksum_multiset(&lambda, 2)?.iter().map(|s| s / 2.0).collect();
    expected.sort_by(f64::total_cmp);
    println!("MA_2 on C^4, λ = {lambda:?}");
    println!("  roots    {roots:.6?}");
    println!("  k-sums/k {expected:.6?}");
    println!("  hyperbolic={} worst |Im|={:.1e}", rep.hyperbolic, rep.worst_imaginary);

    let rep = hyperbolicity_check(|l| l[0] * l[0] + l[1] * l[1], 2, &[1.0, 1.0], &[1.0, 0.0], 1e-8)?;
    println!("λ1² + λ2² along (1,1) from (1,0): hyperbolic={} roots={:?}", rep.hyperbolic, rep.roots);
    Ok(())
}
