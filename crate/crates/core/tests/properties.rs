use hcl::compound::{build_compound, compound_spectrum_residual, in_c_k_prime, mak_via_determinant};
use hcl::embedding::{iota, iota_inverse, pi_projection};
use hcl::linalg::{HermitianMatrix, Spectrum};
use hcl::operator::{eval_g, majorizes, t_transform, Builtin, HessianOperator};
use hcl::sampling::{random_hermitian, random_with_spectrum, seeded_rng};
use hcl::symmetric::{in_gamma_k_prime, ksum_multiset, ma_k, sigma, sigma_enumerated};
use proptest::prelude::*;

fn dim_and_k() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=5).prop_flat_map(|n| (Just(n), 1..=n))
}

fn matrix(n: usize, seed: u64) -> HermitianMatrix {
    random_hermitian(&mut seeded_rng(seed), n, 1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compound_is_linear((n, k) in dim_and_k(), s1: u64, s2: u64, t in -2.0f64..2.0) {
        let (a, b) = (matrix(n, s1), matrix(n, s2));
        let lhs = build_compound(&a.lerp(&b, t).unwrap(), k).unwrap().body;
        let rhs = build_compound(&a, k).unwrap().body.lerp(&build_compound(&b, k).unwrap().body, t).unwrap();
        prop_assert!(lhs.distance(&rhs) < 1e-12 * (1.0 + rhs.frobenius_norm()));
    }

    #[test]
    fn compound_spectrum_is_the_k_sums((n, k) in dim_and_k(), seed: u64) {
        let a = matrix(n, seed);
        let d = build_compound(&a, k).unwrap();
        prop_assert_eq!(d.body.dim(), d.basis.len());
        prop_assert!(compound_spectrum_residual(&a, k).unwrap() < 1e-10);

        let lambda = a.spectrum().unwrap();
        let expect = ma_k(lambda.values(), k).unwrap();
        let got = mak_via_determinant(&a, k).unwrap();
        prop_assert!((got - expect).abs() <= 1e-9 * (1.0 + expect.abs()), "{} vs {}", got, expect);
    }

    #[test]
    fn c_k_prime_matches_gamma_k_prime((n, k) in dim_and_k(), seed: u64, shift in -1.0f64..3.0) {
        let lambda: Vec<f64> = matrix(n, seed).spectrum().unwrap().values().iter().map(|x| x + shift).collect();
        let sums = ksum_multiset(&lambda, k).unwrap();
        // Ties with zero are decided by rounding; keep away from them.
        prop_assume!(sums.iter().all(|s| s.abs() > 1e-8));
        let a = random_with_spectrum(&mut seeded_rng(seed ^ 1), &lambda);
        prop_assert_eq!(in_c_k_prime(&a, k).unwrap(), in_gamma_k_prime(&lambda, k));
    }

    #[test]
    fn sigma_recurrence_matches_enumeration(lambda in prop::collection::vec(-3.0f64..3.0, 1..=8), k in 1usize..=8) {
        prop_assume!(k <= lambda.len());
        let fast = sigma(&lambda, k).unwrap();
        let slow = sigma_enumerated(&lambda, k).unwrap();
        let scale: f64 = 1.0 + lambda.iter().map(|x| x.abs()).sum::<f64>().powi(k as i32);
        prop_assert!((fast - slow).abs() <= 1e-12 * scale, "{} vs {}", fast, slow);
    }

    #[test]
    fn t_transforms_are_majorized(mu in prop::collection::vec(-5.0f64..5.0, 2..=6), t in 0.0f64..=1.0, i: prop::sample::Index, j: prop::sample::Index) {
        let (i, j) = (i.index(mu.len()), j.index(mu.len()));
        let lambda = t_transform(&mu, i, j, t);
        prop_assert!(majorizes(&mu, &lambda, 1e-12));
        prop_assert!(majorizes(&mu, &mu, 1e-12));
    }

    #[test]
    fn g_is_one_homogeneous(n in 2usize..=4, seed: u64, t in 0.05f64..20.0) {
        for op in Builtin::catalog(n, &[0.5]) {
            if op.dim() != n {
                continue;
            }
            // Positive matrices lie in every cone of the catalog.
            let lambda: Vec<f64> = matrix(n, seed).spectrum().unwrap().values().iter().map(|x| x.abs() + 0.1).collect();
            let a = random_with_spectrum(&mut seeded_rng(seed), &lambda);
            let ta = a.lerp(&HermitianMatrix::zeros(n), t).unwrap();
            let (g, gt) = (eval_g(&op, &a).unwrap(), eval_g(&op, &ta).unwrap());
            prop_assert!((gt - t * g).abs() <= 1e-10 * t * g, "{}: {} vs {}", op, gt, t * g);
        }
    }

    #[test]
    fn embedding_round_trip(n in 1usize..=5, seed: u64) {
        let a = matrix(n, seed);
        let s = iota(&a);
        let back = iota_inverse(&s).unwrap();
        prop_assert!(back.distance(&a) < 1e-14);
        prop_assert!(pi_projection(&s).unwrap().distance(&s) < 1e-14);

        // Each eigenvalue of A shows up twice in ι(A).
        let doubled: Vec<f64> = a.spectrum().unwrap().values().iter().flat_map(|&x| [x, x]).collect();
        let real = s.spectrum().unwrap();
        prop_assert!(real.distance(&Spectrum::from_unsorted(doubled)) < 1e-10);
    }
}
