//! Randomized invariants driven by proptest seeds.

mod common;

use biherm::{
    build_decomposition, check_prop2, connecting_operator, is_generic_def1, is_generic_def2,
    sample_biunitary, spectral_resolution, C64,
};
use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn connecting_operator_of_swapped_pair_is_inverse(seed in any::<u64>(), n in 1usize..12) {
        let tol = tol();
        let mut rng = rng(seed);
        let h1 = random_form(n, 30.0, &mut rng);
        let h2 = random_form(n, 30.0, &mut rng);
        let g = connecting_operator(&h1, &h2, &tol).unwrap();
        let back = connecting_operator(&h2, &h1, &tol).unwrap();
        let id = DMatrix::<C64>::identity(n, n);
        prop_assert!((g.mat() * back.mat() - &id).norm() <= 1e-9 * (n as f64).sqrt());
    }

    #[test]
    fn sampled_biunitaries_preserve_both_forms(seed in any::<u64>(), draw in any::<u64>()) {
        let tol = tol();
        let mut rng = rng(seed);
        let inst = random_instance(10, &mut rng);
        let g = connecting_operator(&inst.h1, &inst.h2, &tol).unwrap();
        let dec = build_decomposition(&g, &tol).unwrap();
        let u = sample_biunitary(&dec, draw);
        prop_assert!(g.verify(&u, &tol).unwrap().passed);
        prop_assert_eq!(sample_biunitary(&dec, draw), u);
    }

    #[test]
    fn genericity_tests_agree_with_planted_multiplicities(seed in any::<u64>()) {
        let tol = tol();
        let mut rng = rng(seed);
        let inst = random_instance(12, &mut rng);
        let g = connecting_operator(&inst.h1, &inst.h2, &tol).unwrap();
        let res = spectral_resolution(&g, &tol).unwrap();
        let dec = build_decomposition(&g, &tol).unwrap();
        prop_assert_eq!(is_generic_def1(&res), inst.is_generic());
        prop_assert_eq!(is_generic_def2(&g, &tol).unwrap(), inst.is_generic());
        prop_assert_eq!(check_prop2(&dec, &g, &tol).unwrap(), inst.is_generic());
    }

    #[test]
    fn scaling_the_second_form_scales_the_spectrum(seed in any::<u64>(), c in 0.01f64..100.0) {
        let tol = tol();
        let mut rng = rng(seed);
        let inst = random_instance(8, &mut rng);
        let g = connecting_operator(&inst.h1, &inst.h2, &tol).unwrap();
        let gc = connecting_operator(&inst.h1, &inst.h2.scaled(c), &tol).unwrap();
        for (a, b) in g.spectrum().iter().zip(gc.spectrum()) {
            prop_assert!((a * c - b).abs() <= 1e-10 * b.abs());
        }
    }
}
