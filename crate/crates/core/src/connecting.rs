//! The operator connecting two Hermitian structures, `h2(x, y) = h1(Gx, y)`,
//! and the bi-unitarity check built on it.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{pencil_eig, HermitianForm};
use crate::linalg::{cholesky, congruence_inverse, ensure_dim, ensure_finite, ensure_square, relative};
use crate::tolerances::Tolerances;
use crate::C64;

/// Relative residuals of the identities a connecting operator must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectingResiduals {
    /// `‖H2 − H1 G‖ / ‖H2‖`.
    pub defining: f64,
    /// `‖H1 G − G† H1‖ / ‖H1 G‖`.
    pub h1_self_adjoint: f64,
    /// `‖H2 G − G† H2‖ / ‖H2 G‖`.
    pub h2_self_adjoint: f64,
    pub min_eigenvalue: f64,
}

/// `G = H1⁻¹ H2`, self-adjoint and positive for both forms.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectingOperator {
    mat: DMatrix<C64>,
    h1: HermitianForm,
    h2: HermitianForm,
    spectrum: Vec<f64>,
    residuals: ConnectingResiduals,
    condition_number: f64,
    ill_conditioned: bool,
}

/// Solves `H1 G = H2` by Cholesky and verifies the defining identity, double
/// self-adjointness and positivity.
///
/// When `cond(H1) > 1/tol_eig` the result is returned with
/// [`ConnectingOperator::ill_conditioned`] set and the residual checks are
/// reported rather than enforced.
pub fn connecting_operator(
    h1: &HermitianForm,
    h2: &HermitianForm,
    tol: &Tolerances,
) -> Result<ConnectingOperator> {
    ensure_dim(h1.dim(), h2.dim())?;
    let a = h1.gram();
    let b = h2.gram();
    let chol = cholesky(a)?;
    let g = chol.solve(b);

    let h1_eigs = SymmetricEigen::new(a.clone()).eigenvalues;
    let condition_number = relative(h1_eigs.max(), h1_eigs.min());
    let ill_conditioned = condition_number > 1.0 / tol.tol_eig;

    let spectrum = pencil_eig(b, a, tol)?.eigenvalues;
    let h1g = a * &g;
    let h2g = b * &g;
    let residuals = ConnectingResiduals {
        defining: relative((b - &h1g).norm(), b.norm()),
        h1_self_adjoint: relative((&h1g - h1g.adjoint()).norm(), h1g.norm()),
        h2_self_adjoint: relative((&h2g - h2g.adjoint()).norm(), h2g.norm()),
        min_eigenvalue: spectrum.first().copied().unwrap_or(f64::INFINITY),
    };

    if residuals.min_eigenvalue <= 0.0 {
        return Err(Error::InvariantViolation(format!(
            "G is not positive (smallest eigenvalue {:.6e})",
            residuals.min_eigenvalue
        )));
    }
    if !ill_conditioned {
        for (name, value) in [
            ("H2 = H1 G", residuals.defining),
            ("G is not h1-self-adjoint", residuals.h1_self_adjoint),
            ("G is not h2-self-adjoint", residuals.h2_self_adjoint),
        ] {
            if value > tol.tol_resid {
                return Err(Error::InvariantViolation(format!(
                    "{name} (relative residual {value:.3e})"
                )));
            }
        }
    }

    Ok(ConnectingOperator {
        mat: g,
        h1: h1.clone(),
        h2: h2.clone(),
        spectrum,
        residuals,
        condition_number,
        ill_conditioned,
    })
}

impl ConnectingOperator {
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn h1(&self) -> &HermitianForm {
        &self.h1
    }

    pub fn h2(&self) -> &HermitianForm {
        &self.h2
    }

    /// Eigenvalues of `G`, ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn spectral_radius(&self) -> f64 {
        self.spectrum.last().copied().unwrap_or(0.0)
    }

    pub fn residuals(&self) -> &ConnectingResiduals {
        &self.residuals
    }

    /// Condition number of the Gram matrix of `h1`.
    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }

    pub fn ill_conditioned(&self) -> bool {
        self.ill_conditioned
    }

    /// `L⁻¹ H2 L⁻†` for `H1 = L L†`: a Hermitian matrix similar to `G`
    /// (`G = L⁻† Ĝ L†`), i.e. `G` written in an `h1`-orthonormal frame.
    pub fn hermitian_frame(&self) -> DMatrix<C64> {
        let l = cholesky(self.h1.gram())
            .expect("h1 was validated as positive-definite")
            .l();
        congruence_inverse(&l, self.h2.gram())
    }

    /// Checks `U` against the pair of forms this operator connects.
    pub fn verify(&self, u: &DMatrix<C64>, tol: &Tolerances) -> Result<BiUnitaryReport> {
        let n = ensure_square(u)?;
        ensure_dim(self.dim(), n)?;
        ensure_finite(u)?;
        let h1 = self.h1.gram();
        let h2 = self.h2.gram();
        let g = &self.mat;
        let h1_residual = relative((u.adjoint() * h1 * u - h1).norm(), h1.norm());
        let h2_residual = relative((u.adjoint() * h2 * u - h2).norm(), h2.norm());
        let commutator_residual = relative((g * u - u * g).norm(), g.norm() * u.norm());
        let preserves_h1 = h1_residual <= tol.tol_resid;
        let preserves_h2 = h2_residual <= tol.tol_resid;
        let commutes = commutator_residual <= tol.tol_resid;
        Ok(BiUnitaryReport {
            h1_residual,
            h2_residual,
            commutator_residual,
            preserves_h1,
            preserves_h2,
            commutes,
            implication_holds: !(preserves_h1 && preserves_h2)
                || commutator_residual <= 10.0 * tol.tol_resid,
            passed: preserves_h1 && preserves_h2 && commutes,
        })
    }
}

/// Residuals of `U† H1 U = H1`, `U† H2 U = H2` and `[G, U] = 0`, each
/// relative to the norm of the quantity it is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiUnitaryReport {
    pub h1_residual: f64,
    pub h2_residual: f64,
    pub commutator_residual: f64,
    pub preserves_h1: bool,
    pub preserves_h2: bool,
    pub commutes: bool,
    /// Preserving both forms forces commutation with `G`; false only if
    /// that implication is numerically violated.
    pub implication_holds: bool,
    pub passed: bool,
}

pub fn verify_biunitary(
    u: &DMatrix<C64>,
    h1: &HermitianForm,
    h2: &HermitianForm,
    tol: &Tolerances,
) -> Result<BiUnitaryReport> {
    connecting_operator(h1, h2, tol)?.verify(u, tol)
}
