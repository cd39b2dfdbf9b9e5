//! Alternative Hermitian structures on finite-dimensional spaces.
//!
//! The crate builds admissible triples `(g, J, ω)` on a real space, turns them
//! into Hermitian forms on the complexified space, and analyses a pair of such
//! forms through their connecting operator `G` (defined by
//! `h2(x, y) = h1(Gx, y)`): its spectral resolution, the bi-unitary group
//! `U(n1) × … × U(nk)`, genericity and cyclicity tests, and a discrete fibered
//! decomposition of the space in which both forms are proportional.
//!
//! Matrix conventions used throughout:
//!
//! * a real bilinear form with Gram matrix `A` evaluates as `a(x, y) = xᵀ A y`;
//! * a Hermitian form with Gram matrix `H` evaluates as `h(x, y) = x† H y`
//!   (antilinear in the first slot, linear in the second);
//! * operators act on column vectors.

pub mod admissible;
pub mod cli;
pub mod connecting;
pub mod error;
pub mod fibers;
pub mod forms;
mod linalg;
pub mod spectral;
pub mod tolerances;

pub use admissible::{
    build_complexification, hermitian_from_triple, omega_from_g_j, symmetrize_metric,
    triple_from_g_j, triple_from_g_omega, AdmissibleTriple, Complexification, TripleResiduals,
};
pub use connecting::{
    connecting_operator, verify_biunitary, BiUnitaryReport, ConnectingOperator, ConnectingResiduals,
};
pub use error::{Error, Result};
pub use fibers::{
    build_decomposition, check_bicommutant_scalar, check_prop2, check_proportionality,
    haar_unitary, phase_biunitary, project_to_commutant_blocks, sample_biunitary, BicommutantReport,
    DecomposableOperator, DirectIntegral, Fiber, ProportionalityReport,
};
pub use forms::{
    generalized_eig, krylov_rank, orthonormalize, orthonormalize_with_metric, sqrt_positive, validate_positive,
    ComplexStructure, GeneralizedEigen, HermitianForm, RealForm, Scalar, Symmetry,
    ValidationReport,
};
pub use spectral::{
    bicommutant_dimension, commutant_dimension, cyclic_vector, group_signature, is_cyclic,
    is_generic_def1, is_generic_def2, spectral_resolution, GroupSignature, SpectralResolution,
};
pub use tolerances::Tolerances;

/// Complex scalar used for every Hermitian quantity.
pub type C64 = num_complex::Complex64;
