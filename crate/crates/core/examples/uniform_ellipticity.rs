//! Bounds on the partials of F̂ over the truncated cone Γ̂_R, which is where
//! the operators become uniformly elliptic.

use hcl::operator::{uniform_ellipticity_estimate, Builtin};

fn main() -> hcl::Result<()> {
    let r = 10.0;
    for op in [Builtin::determinant(3)?, Builtin::sigma_k(3, 2)?, Builtin::ma_k(4, 2)?, Builtin::interpolated_2d(0.5)?] {
        let rep = uniform_ellipticity_estimate(&op, r, 4000, 5)?;
        println!(
            "{:<16} accepted {:>4}/{}  m={:.3e}  M={:.3e}  increment ratio {:.3e}  bounded={} passed={}",
            op.to_string(),
            rep.accepted,
            rep.budget,
            rep.m,
            rep.big_m,
            rep.increment_ratio,
            rep.bounded,
            rep.passed()
        );
    }
    Ok(())
}
