//! Plugs a user-defined operator into the generic machinery: the product
//! `λ1·(λ1 + λ2)` on `{λ1 > 0, λ1 + λ2 > 0}` in dimension 2 is not symmetric,
//! and the spot check says so, while `σ_2` written by hand passes.

use hcl::operator::{grad_g, fd_grad_g, sample_matrix, spot_check, CustomOperator};
use hcl::sampling::seeded_rng;

fn main() -> hcl::Result<()> {
    let mut rng = seeded_rng(3);

    let sigma2 = CustomOperator::new(
        "sigma_2 by hand",
        3,
        2.0,
        |l| l[0] * l[1] + l[0] * l[2] + l[1] * l[2],
        |l| l.iter().sum::<f64>() > 0.0 && l[0] * l[1] + l[0] * l[2] + l[1] * l[2] > 0.0,
    )?
    .with_gradient(|l| vec![l[1] + l[2], l[0] + l[2], l[0] + l[1]])
    .with_garding_constant(3f64.sqrt());
    let rep = spot_check(&sigma2, &mut rng, 200)?;
    println!("{:<18} passed={} {rep:?}", "sigma_2 by hand", rep.passed(1e-10));

    let a = sample_matrix(&sigma2, &mut rng)?;
    let exact = grad_g(&sigma2, &a)?;
    let fd = fd_grad_g(&sigma2, &a, 1e-5)?;
    println!("grad G vs finite differences: {:.2e}", exact.distance(&fd) / exact.frobenius_norm());

    let lopsided = CustomOperator::new("lopsided", 2, 2.0, |l| l[0] * (l[0] + l[1]), |l| l[0] > 0.0 && l[0] + l[1] > 0.0)?;
    let rep = spot_check(&lopsided, &mut rng, 200)?;
    println!("{:<18} passed={} symmetry residual {:.3}", "lopsided", rep.passed(1e-10), rep.symmetry);
    Ok(())
}
