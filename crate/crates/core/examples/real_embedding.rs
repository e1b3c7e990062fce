//! The embedding ι of Hermitian n×n matrices into real symmetric 2n×2n
//! matrices, the projection π onto J-invariant ones, and the Hessian
//! identity relating the real and complex Hessians of a field.

use hcl::embedding::{embed_check, hessian_identity_residual, iota, pi_projection};
use hcl::field::BuiltinField;
use hcl::linalg::C64;
use hcl::sampling::{random_hermitian, seeded_rng};

fn main() -> hcl::Result<()> {
    let mut rng = seeded_rng(4);
    let a = random_hermitian(&mut rng, 2, 1.0);
    let s = iota(&a);
    println!("spec A     = {:.6?}", a.spectrum()?.values());
    println!("spec ι(A)  = {:.6?}", s.spectrum()?.values());
    let p = pi_projection(&s)?;
    println!("‖π(ι(A)) - ι(A)‖ = {:.1e}", p.distance(&s));

    let field = BuiltinField::CubicPlusSquare { n: 2 };
    let z = [C64::new(0.4, -0.2), C64::new(0.1, 0.7)];
    println!("Hessian identity residual at h=1e-4: {:.2e}", hessian_identity_residual(&field, &z, 1e-4)?);

    let rep = embed_check(1e-4, 3, 50, 8)?;
    for row in &rep.rows {
        println!("  {:<40} {:.2e}", row.field, row.residual);
    }
    println!(
        "worst {:.2e}, idempotence {:.1e}, commutation {:.1e}, doubling {:.1e}",
        rep.worst_hessian_residual, rep.idempotence, rep.commutation, rep.spectrum_doubling
    );
    Ok(())
}
