//! Admissible triples `(g, J, ω)` and the Hermitian structure they induce on
//! the complexified space.
//!
//! Matrix conventions: `g(x, y) = xᵀ G y`, `ω(x, y) = xᵀ Ω y`, and the
//! triple is tied together by `ω(x, y) = g(Jx, y)`, i.e. `Ω = Jᵀ G`.
//! The operator `B` of `ω(x, y) = g(Bx, y)` is therefore `B = G⁻¹ Ωᵀ`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::forms::{sqrt_positive, ComplexStructure, HermitianForm, RealForm, Symmetry};
use crate::linalg::{ensure_dim, hermitian_part, relative};
use crate::tolerances::Tolerances;
use crate::C64;

/// Metric, complex structure and symplectic form satisfying
/// `Jᵀ G + G J = 0`, `J² = −1` and `Ω = Jᵀ G`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleTriple {
    g: RealForm,
    j: ComplexStructure,
    omega: RealForm,
}

/// Relative residuals of the three admissibility identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleResiduals {
    /// `‖J² + 1‖∞ / ‖J‖∞²`.
    pub j_square: f64,
    /// `‖Jᵀ G + G J‖ / (‖G‖ ‖J‖)`.
    pub anti_hermitian: f64,
    /// `‖Ω − Jᵀ G‖ / (‖G‖ ‖J‖)`.
    pub omega: f64,
}

impl AdmissibleTriple {
    pub fn new(g: RealForm, j: ComplexStructure, omega: RealForm, tol: &Tolerances) -> Result<Self> {
        ensure_dim(g.dim(), j.dim())?;
        ensure_dim(g.dim(), omega.dim())?;
        g.require_metric(tol)?;
        if omega.symmetry() != Symmetry::Antisymmetric {
            return Err(Error::NotAdmissible("ω must be tagged antisymmetric".into()));
        }
        let triple = Self { g, j, omega };
        let r = triple.residuals();
        if r.j_square > tol.tol_j {
            return Err(Error::NotComplexStructure {
                residual: r.j_square,
            });
        }
        if r.anti_hermitian > tol.tol_resid {
            return Err(Error::NotAdmissible(format!(
                "J is not g-anti-Hermitian (relative residual {:.3e})",
                r.anti_hermitian
            )));
        }
        if r.omega > tol.tol_resid {
            return Err(Error::NotAdmissible(format!(
                "ω(x, y) != g(Jx, y) (relative residual {:.3e})",
                r.omega
            )));
        }
        Ok(triple)
    }

    pub fn residuals(&self) -> TripleResiduals {
        let g = self.g.gram();
        let j = self.j.mat();
        let scale = g.norm() * j.norm();
        TripleResiduals {
            j_square: self.j.residual(),
            anti_hermitian: relative((j.transpose() * g + g * j).norm(), scale),
            omega: relative((self.omega.gram() - j.transpose() * g).norm(), scale),
        }
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn g(&self) -> &RealForm {
        &self.g
    }

    pub fn j(&self) -> &ComplexStructure {
        &self.j
    }

    pub fn omega(&self) -> &RealForm {
        &self.omega
    }
}

/// `g_s(x, y) = ½ (g(Jx, Jy) + g(x, y))`, the metric for which `J` becomes
/// anti-Hermitian. Idempotent once `J` is already `g`-anti-Hermitian.
pub fn symmetrize_metric(g: &RealForm, j: &ComplexStructure, tol: &Tolerances) -> Result<RealForm> {
    ensure_dim(g.dim(), j.dim())?;
    g.require_metric(tol)?;
    let jm = j.mat();
    let gs = (jm.transpose() * g.gram() * jm + g.gram()) * 0.5;
    let gs = RealForm::symmetric(hermitian_part(&gs), tol)?;
    gs.require_metric(tol)?;
    Ok(gs)
}

/// `ω(x, y) = g(Jx, y)`, i.e. `Ω = Jᵀ G`. Requires `J` to be
/// `g`-anti-Hermitian; run [`symmetrize_metric`] first otherwise.
pub fn omega_from_g_j(g: &RealForm, j: &ComplexStructure, tol: &Tolerances) -> Result<RealForm> {
    ensure_dim(g.dim(), j.dim())?;
    g.require_metric(tol)?;
    let gm = g.gram();
    let jm = j.mat();
    let residual = relative((jm.transpose() * gm + gm * jm).norm(), gm.norm() * jm.norm());
    if residual > tol.tol_resid {
        return Err(Error::NotAdmissible(format!(
            "J is not g-anti-Hermitian (relative residual {residual:.3e})"
        )));
    }
    let omega = jm.transpose() * gm;
    RealForm::antisymmetric((&omega - omega.transpose()) * 0.5, tol)
}

/// Completes `(g, J)` to an admissible triple: symmetrizes `g` against `J`
/// and sets `ω = g(J·, ·)`.
pub fn triple_from_g_j(g: &RealForm, j: &ComplexStructure, tol: &Tolerances) -> Result<AdmissibleTriple> {
    let gs = symmetrize_metric(g, j, tol)?;
    let omega = omega_from_g_j(&gs, j, tol)?;
    AdmissibleTriple::new(gs, j.clone(), omega, tol)
}

/// Builds `(g_ω, J, ω)` from a metric and a symplectic form.
///
/// With `ω(x, y) = g(Bx, y)`, `B` is `g`-skew and `−B²` is `g`-positive. Its
/// positive square root `R` gives the polar factorization `B = J R`, so
/// `J = B R⁻¹` is a complex structure and `g_ω(x, y) = g(Rx, y)` is a metric
/// with `ω(x, y) = g_ω(Jx, y)`.
pub fn triple_from_g_omega(g: &RealForm, omega: &RealForm, tol: &Tolerances) -> Result<AdmissibleTriple> {
    let m = g.dim();
    ensure_dim(m, omega.dim())?;
    g.require_metric(tol)?;
    let om = omega.gram();
    let anti = relative((om + om.transpose()).norm(), om.norm());
    if anti > tol.tol_sym {
        return Err(Error::NotAntisymmetric { residual: anti });
    }
    let om = (om - om.transpose()) * 0.5;
    if !m.is_multiple_of(2) {
        return Err(Error::DegenerateSymplectic { ratio: 0.0 });
    }

    let gm = g.gram();
    let chol = gm.clone().cholesky().ok_or(Error::SingularMetric)?;
    let b = chol.solve(&om.transpose());

    let sv = b.clone().singular_values();
    let ratio = relative(sv.min(), sv.max());
    if sv.max() == 0.0 || ratio <= tol.tol_eig {
        return Err(Error::DegenerateSymplectic { ratio });
    }
    let skew = relative((gm * &b + b.transpose() * gm).norm(), gm.norm() * b.norm());
    if skew > tol.tol_resid {
        return Err(Error::NotSkew { residual: skew });
    }

    let neg_b2 = -(&b * &b);
    let r = sqrt_positive(&neg_b2, gm, tol)?;
    let j_t = r
        .transpose()
        .lu()
        .solve(&b.transpose())
        .ok_or_else(|| Error::Numerical("square root of −B² is singular".into()))?;
    let j = ComplexStructure::new(j_t.transpose(), tol)?;
    let g_omega = RealForm::symmetric(hermitian_part(&(gm * &r)), tol)?;
    let omega = RealForm::antisymmetric(om, tol)?;
    AdmissibleTriple::new(g_omega, j, omega, tol)
}

/// Identification of `R^{2n}` with `C^n` through a complex structure:
/// `(α + iβ)·x = αx + βJx`.
///
/// The real basis `(u₁, …, u_n, Ju₁, …, Ju_n)` is chosen greedily from the
/// standard basis and is orthonormal for the reference metric
/// `½(JᵀJ + 1)`, which depends on `J` alone. Two triples sharing the same
/// `J` therefore share the same complex coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Complexification {
    j: DMatrix<f64>,
    basis: DMatrix<f64>,
    reference: DMatrix<f64>,
    coords: DMatrix<f64>,
}

impl Complexification {
    pub fn from_structure(j: &ComplexStructure, tol: &Tolerances) -> Result<Self> {
        let m = j.dim();
        let n = m / 2;
        let jm = j.mat();
        let reference = hermitian_part(&((jm.transpose() * jm + DMatrix::identity(m, m)) * 0.5));
        let inner = |x: &DVector<f64>, y: &DVector<f64>| x.dot(&(&reference * y));

        let mut first: Vec<DVector<f64>> = Vec::with_capacity(n);
        let mut span: Vec<DVector<f64>> = Vec::with_capacity(m);
        for i in 0..m {
            if first.len() == n {
                break;
            }
            let e = DVector::from_fn(m, |r, _| if r == i { 1.0 } else { 0.0 });
            let scale = inner(&e, &e).sqrt();
            let mut w = e;
            for _ in 0..2 {
                for b in &span {
                    let coeff = inner(b, &w);
                    w -= b * coeff;
                }
            }
            let len = inner(&w, &w).max(0.0).sqrt();
            if len <= tol.tol_eig * scale {
                continue;
            }
            let u = w / len;
            let ju = jm * &u;
            span.push(u.clone());
            span.push(ju);
            first.push(u);
        }
        if first.len() != n {
            return Err(Error::NotAdmissible(
                "could not build a J-adapted basis".into(),
            ));
        }
        let mut basis = DMatrix::zeros(m, m);
        for (k, u) in first.iter().enumerate() {
            basis.set_column(k, u);
            basis.set_column(n + k, &(jm * u));
        }
        let orth = relative(
            (basis.transpose() * &reference * &basis - DMatrix::identity(m, m)).norm(),
            (m as f64).sqrt(),
        );
        if orth > 10.0 * tol.tol_resid * jm.norm().max(1.0) {
            return Err(Error::Numerical(format!(
                "J-adapted basis lost orthogonality ({orth:.3e})"
            )));
        }
        let coords = basis.transpose() * &reference;
        Ok(Self {
            j: jm.clone(),
            basis,
            reference,
            coords,
        })
    }

    pub fn real_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn complex_dim(&self) -> usize {
        self.basis.nrows() / 2
    }

    /// Columns `(u₁, …, u_n, Ju₁, …, Ju_n)`.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Metric `½(JᵀJ + 1)` for which [`Self::basis`] is orthonormal.
    pub fn reference_metric(&self) -> &DMatrix<f64> {
        &self.reference
    }

    pub fn structure(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn to_complex(&self, x: &DVector<f64>) -> DVector<C64> {
        let n = self.complex_dim();
        let c = &self.coords * x;
        DVector::from_fn(n, |k, _| C64::new(c[k], c[n + k]))
    }

    pub fn to_real(&self, z: &DVector<C64>) -> DVector<f64> {
        let n = self.complex_dim();
        let coeffs = DVector::from_fn(2 * n, |k, _| if k < n { z[k].re } else { z[k - n].im });
        &self.basis * coeffs
    }
}

pub fn build_complexification(triple: &AdmissibleTriple, tol: &Tolerances) -> Result<Complexification> {
    Complexification::from_structure(triple.j(), tol)
}

/// Gram matrix of `h(x, y) = g(x, y) + i g(Jx, y)` in the complex coordinates
/// of `cmap`: `H_kl = h(u_k, u_l)`.
pub fn hermitian_from_triple(
    triple: &AdmissibleTriple,
    cmap: &Complexification,
    tol: &Tolerances,
) -> Result<HermitianForm> {
    ensure_dim(triple.dim(), cmap.real_dim())?;
    let jm = triple.j().mat();
    let mismatch = relative((jm - cmap.structure()).norm(), jm.norm());
    if mismatch > tol.tol_j {
        return Err(Error::NotAdmissible(
            "complexification was built from a different J".into(),
        ));
    }
    let n = cmap.complex_dim();
    let g = triple.g().gram();
    let u = cmap.basis().columns(0, n);
    let ju = cmap.basis().columns(n, n);
    let re = u.transpose() * g * u;
    let im = ju.transpose() * g * u;
    let gram = DMatrix::from_fn(n, n, |r, c| C64::new(re[(r, c)], im[(r, c)]));
    HermitianForm::new(gram, tol)
}
