//! The function `(1 + |z'|²)|z''|^{2β}` near its degenerate set: closed
//! forms against numerics, the blow-up rate of MA_k, and the Sobolev
//! thresholds.

use hcl::linalg::C64;
use hcl::pogorelov::{
    analytic_hessian, critical_beta, cross_check, det_closed_form, mak_smoothness_probe, p_star, w2p_admissible,
    PogorelovParams, SplitPoint,
};
use hcl::sampling::seeded_rng;

fn main() -> hcl::Result<()> {
    let (m, n, k) = (1, 3, 1);
    let beta = critical_beta(m, n, k)?;
    let params = PogorelovParams::new(m, n, beta)?;
    println!("m={m} n={n} k={k}: critical β = {beta:.6}, p* = {}", p_star(n, k)?);

    let z = SplitPoint::split(&[C64::new(0.2, -0.4), C64::new(0.3, 0.1), C64::new(-0.5, 0.2)], m);
    let h = analytic_hessian(&params, &z)?;
    println!("D²_C u at {:?}:\n{h}", z.full());
    println!("det: closed form {:.12}, LU {:.12}", det_closed_form(&params, &z)?, h.det());

    let mut rng = seeded_rng(9);
    let check = cross_check(&params, 200, &mut rng)?;
    println!("{check:?}");

    let radii = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let rep = mak_smoothness_probe(&params, k, &radii, &[C64::new(0.3, 0.0)], &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)])?;
    println!("MA_{k} ~ r^{:.4} (predicted {:.4}) at the critical β", rep.fitted_exponent, rep.predicted_exponent);

    for p in [2.0, 5.9, 6.1] {
        println!("W^(2,{p}) admissible: {}", w2p_admissible(p, m, n, beta));
    }
    Ok(())
}
