//! Runs the sampled inequalities (concavity, Gårding comparison, Jensen,
//! Schur) for a few built-in operators and prints the worst margins.

use hcl::operator::{
    concavity_probe, garding_comparison_margin, jensen_gap, sample_lambda, sample_matrix, schur_concavity_probe,
    t_transform, Builtin, HessianOperator,
};
use hcl::sampling::{random_with_spectrum_in, seeded_rng};
use rand::Rng;

fn main() -> hcl::Result<()> {
    let mut rng = seeded_rng(11);
    let ops = [Builtin::determinant(3)?, Builtin::sigma_k(4, 2)?, Builtin::ma_k(4, 2)?, Builtin::interpolated_2d(0.3)?];
    println!("{:<18} {:>6} {:>10} {:>11} {:>11} {:>11} {:>11}", "operator", "d", "C", "concavity", "garding", "jensen", "schur");
    for op in &ops {
        let c = op.garding_constant().unwrap();
        let mut worst = [f64::INFINITY; 4];
        for _ in 0..500 {
            let a = sample_matrix(op, &mut rng)?;
            let b = sample_matrix(op, &mut rng)?;
            let p = random_with_spectrum_in(&mut rng, op.dim(), 0.05, 3.0);
            worst[0] = worst[0].min(concavity_probe(op, &a, &b, rng.random())?);
            worst[1] = worst[1].min(garding_comparison_margin(op, &p, c)?);
            worst[2] = worst[2].min(jensen_gap(op, &[a, b])?);

            let mu = sample_lambda(op, &mut rng).expect("cone sample");
            let n = mu.len();
            let lambda = t_transform(&mu, rng.random_range(0..n), rng.random_range(0..n), rng.random());
            worst[3] = worst[3].min(schur_concavity_probe(op, &lambda, &mu)?);
        }
        println!(
            "{:<18} {:>6} {:>10.4} {:>11.2e} {:>11.2e} {:>11.2e} {:>11.2e}",
            op.to_string(),
            op.degree(),
            c,
            worst[0],
            worst[1],
            worst[2],
            worst[3]
        );
    }
    println!("all margins should be >= -1e-10");
    Ok(())
}
