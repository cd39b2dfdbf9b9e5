//! Library results against brute-force oracles built directly from the
//! definitions.

mod common;

use biherm::{
    bicommutant_dimension, commutant_dimension, connecting_operator, generalized_eig, krylov_rank,
    spectral_resolution, sqrt_positive, C64,
};
use common::*;
use nalgebra::DMatrix;

#[test]
fn krylov_rank_matches_explicit_krylov_matrix() {
    let tol = tol();
    let mut rng = rng(21);
    for i in 0..150 {
        let inst = random_instance(2 + i % 7, &mut rng);
        let g = connecting_operator(&inst.h1, &inst.h2, &tol).unwrap();
        let x = if i % 3 == 0 {
            // A vector inside one spectral subspace has Krylov rank 1.
            let res = spectral_resolution(&g, &tol).unwrap();
            res.basis(0).column(0).into_owned()
        } else {
            random_complex_vector(g.dim(), &mut rng)
        };
        let fast = krylov_rank(g.mat(), &x, &tol).unwrap();
        let slow = explicit_krylov_rank(g.mat(), &x, 1e-9);
        assert_eq!(fast, slow, "instance {i}, multiplicities {:?}", inst.multiplicities);
        if i % 3 != 0 {
            assert_eq!(fast, inst.multiplicities.len());
        } else {
            assert_eq!(fast, 1);
        }
    }
}

#[test]
fn commutant_dimensions_match_kronecker_null_spaces() {
    let tol = tol();
    for inst in corpus(80, 7, 22) {
        let g = connecting_operator(&inst.h1, &inst.h2, &tol).unwrap();
        let res = spectral_resolution(&g, &tol).unwrap();
        let (comm, bicomm) = double_commutant(g.mat(), 1e-10);
        assert_eq!(comm.len(), commutant_dimension(&g, &tol));
        assert_eq!(bicomm.len(), bicommutant_dimension(&res));
        for c in &comm {
            assert!((g.mat() * c - c * g.mat()).norm() <= 1e-9 * g.mat().norm());
        }
    }
}

#[test]
fn generalized_eigenvalues_match_planted_spectrum() {
    let tol = tol();
    let mut rng = rng(23);
    for _ in 0..60 {
        let n = 2 + rng_usize(&mut rng, 10);
        let inst = instance_with(&vec![1; n], 100.0, &mut rng);
        let g = connecting_operator(&inst.h1, &inst.h2, &tol).unwrap();
        let eig = generalized_eig(g.mat(), inst.h1.gram(), &tol).unwrap();
        for (got, want) in eig.eigenvalues.iter().zip(&inst.eigenvalues) {
            assert!((got - want).abs() <= 1e-9 * want, "{got} vs {want}");
        }
        let v = &eig.eigenvectors;
        let gram = v.adjoint() * inst.h1.gram() * v;
        assert!((gram - DMatrix::<C64>::identity(n, n)).norm() <= 1e-10 * n as f64);
    }
}

#[test]
fn square_root_squares_back() {
    let tol = tol();
    let mut rng = rng(24);
    for _ in 0..60 {
        let inst = random_instance(9, &mut rng);
        let g = connecting_operator(&inst.h1, &inst.h2, &tol).unwrap();
        let r = sqrt_positive(g.mat(), inst.h1.gram(), &tol).unwrap();
        assert!((&r * &r - g.mat()).norm() <= 1e-10 * g.mat().norm());
    }
}

fn rng_usize<R: rand::Rng>(rng: &mut R, below: usize) -> usize {
    rng.random_range(0..below)
}
