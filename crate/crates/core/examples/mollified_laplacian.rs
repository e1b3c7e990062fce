//! Monte Carlo ball averages: `T_ε u = (n+1)/ε²·(u_ε - u)` for a few
//! fields, and its convergence to the complex Laplacian.

use hcl::field::BuiltinField;
use hcl::linalg::C64;
use hcl::mollifier::{convergence_probe, positivity_probe, t_eps};

fn main() -> hcl::Result<()> {
    let z = [C64::new(0.5, 0.25), C64::new(-0.1, 0.3)];
    for field in [
        BuiltinField::SquaredNorm { n: 2 },
        BuiltinField::PluriharmonicQuadratic { n: 2 },
        BuiltinField::CubicPlusSquare { n: 2 },
    ] {
        let est = t_eps(&field, &z, 0.2, 100_000, 1)?;
        println!("{field:?}: T_0.2 = {:.5} ± {:.5}", est.value, est.stderr);
    }

    let quartic = BuiltinField::QuarticNorm { n: 2 };
    let rep = convergence_probe(&quartic, &z, &[0.5, 1.0, 2.0], 200_000, 2)?;
    println!("|z|^4: limit {:.5}", rep.limit);
    for (eps, (v, b)) in rep.eps.iter().zip(rep.values.iter().zip(&rep.biases)) {
        println!("  eps={eps:<4} T={:.5} ± {:.5} bias={b:.5}", v.value, v.stderr);
    }
    println!("  fitted order {:?}", rep.fitted_order);

    let grid: Vec<Vec<C64>> = (0..4).map(|i| vec![C64::new(0.5 * i as f64, 0.0)]).collect();
    let maxf = BuiltinField::MaxPluriharmonic { n: 1 };
    let rep = positivity_probe(&maxf, &grid, 0.3, 50_000, 3)?;
    println!("max of pluriharmonic functions: worst T = {:.5} ± {:.5}, passed={}", rep.worst.value, rep.worst.stderr, rep.passed);
    Ok(())
}
