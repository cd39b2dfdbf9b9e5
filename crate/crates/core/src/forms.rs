//! Validated matrix-backed forms and the dense kernels every other module
//! builds on: positivity checks, the Hermitian generalized eigenproblem, the
//! positive square root, form-orthonormalization and Krylov rank.

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    cholesky, congruence_inverse, ensure_dim, ensure_finite, ensure_square, hermitian_part,
    inf_norm, relative, spectral_norm,
};
use crate::tolerances::Tolerances;
use crate::C64;

/// Field of matrix entries: `f64` for real forms, [`C64`] for Hermitian ones.
pub trait Scalar: ComplexField<RealField = f64> + Copy {}

impl Scalar for f64 {}
impl Scalar for C64 {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    General,
}

/// Real bilinear form `a(x, y) = xᵀ A y` on `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealForm {
    gram: DMatrix<f64>,
    symmetry: Symmetry,
}

impl RealForm {
    pub fn new(gram: DMatrix<f64>, symmetry: Symmetry, tol: &Tolerances) -> Result<Self> {
        ensure_square(&gram)?;
        ensure_finite(&gram)?;
        let scale = inf_norm(&gram);
        match symmetry {
            Symmetry::Symmetric => {
                let residual = relative(inf_norm(&(&gram - gram.transpose())), scale);
                if residual > tol.tol_sym {
                    return Err(Error::NotSymmetric { residual });
                }
            }
            Symmetry::Antisymmetric => {
                let residual = relative(inf_norm(&(&gram + gram.transpose())), scale);
                if residual > tol.tol_sym {
                    return Err(Error::NotAntisymmetric { residual });
                }
            }
            Symmetry::General => {}
        }
        Ok(Self { gram, symmetry })
    }

    pub fn symmetric(gram: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        Self::new(gram, Symmetry::Symmetric, tol)
    }

    pub fn antisymmetric(gram: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        Self::new(gram, Symmetry::Antisymmetric, tol)
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.gram * y))
    }

    pub fn validate_positive(&self, tol: &Tolerances) -> Result<ValidationReport> {
        validate_positive(&self.gram, tol)
    }

    /// Fails unless the form is symmetric and positive-definite.
    pub(crate) fn require_metric(&self, tol: &Tolerances) -> Result<()> {
        let report = self.validate_positive(tol)?;
        if !report.symmetric {
            return Err(Error::NotSymmetric {
                residual: report.symmetry_residual,
            });
        }
        if !report.positive {
            return Err(Error::NotPositive {
                min_eigenvalue: report.min_eigenvalue,
            });
        }
        Ok(())
    }
}

/// Real operator `J` with `J² = −1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    mat: DMatrix<f64>,
}

impl ComplexStructure {
    /// The residual `‖J² + 1‖∞` is measured relative to `‖J‖∞²`, which is at
    /// least one for any complex structure.
    pub fn new(mat: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        let dim = ensure_square(&mat)?;
        ensure_finite(&mat)?;
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::OddDimension { dim });
        }
        let residual = Self::residual_of(&mat);
        if residual > tol.tol_j {
            return Err(Error::NotComplexStructure { residual });
        }
        Ok(Self { mat })
    }

    /// `[[0, −1], [1, 0]]` blown up to `R^{2n}`: `J e_k = e_{n+k}`.
    pub fn standard(n: usize) -> Self {
        let mut mat = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            mat[(n + k, k)] = 1.0;
            mat[(k, n + k)] = -1.0;
        }
        Self { mat }
    }

    fn residual_of(mat: &DMatrix<f64>) -> f64 {
        let n = mat.nrows();
        let square = mat * mat + DMatrix::identity(n, n);
        relative(inf_norm(&square), inf_norm(mat).powi(2).max(1.0))
    }

    pub fn residual(&self) -> f64 {
        Self::residual_of(&self.mat)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.mat
    }
}

/// Positive-definite Hermitian form `h(x, y) = x† H y`, linear in `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianForm {
    gram: DMatrix<C64>,
}

impl HermitianForm {
    /// Validates Hermiticity (relative `tol_sym`) and positivity. The stored
    /// Gram matrix is the exact Hermitian part of the input.
    pub fn new(gram: DMatrix<C64>, tol: &Tolerances) -> Result<Self> {
        let report = validate_positive(&gram, tol)?;
        if !report.symmetric {
            return Err(Error::NotSymmetric {
                residual: report.symmetry_residual,
            });
        }
        if !report.positive {
            return Err(Error::NotPositive {
                min_eigenvalue: report.min_eigenvalue,
            });
        }
        Ok(Self {
            gram: hermitian_part(&gram),
        })
    }

    pub fn from_real(gram: &DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        Self::new(crate::linalg::complexify(gram), tol)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            gram: DMatrix::identity(n, n),
        }
    }

    /// Diagonal form; panics if an entry is not strictly positive.
    pub fn diagonal(entries: &[f64]) -> Self {
        assert!(
            entries.iter().all(|&d| d.is_finite() && d > 0.0),
            "diagonal form needs positive entries"
        );
        let diag = DVector::from_iterator(entries.len(), entries.iter().map(|&d| C64::new(d, 0.0)));
        Self {
            gram: DMatrix::from_diagonal(&diag),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &DMatrix<C64> {
        &self.gram
    }

    pub fn eval(&self, x: &DVector<C64>, y: &DVector<C64>) -> C64 {
        x.dotc(&(&self.gram * y))
    }

    /// The same form multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        assert!(c.is_finite() && c > 0.0, "scale must be positive");
        Self {
            gram: &self.gram * C64::new(c, 0.0),
        }
    }

    pub fn validate_positive(&self, tol: &Tolerances) -> Result<ValidationReport> {
        validate_positive(&self.gram, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    /// `‖A − A†‖∞ / ‖A‖∞`.
    pub symmetry_residual: f64,
    pub symmetric: bool,
    pub positive: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.symmetric && self.positive
    }
}

/// Checks that a Gram matrix is symmetric (Hermitian) and positive-definite.
pub fn validate_positive<T: Scalar>(gram: &DMatrix<T>, tol: &Tolerances) -> Result<ValidationReport> {
    ensure_square(gram)?;
    ensure_finite(gram)?;
    let symmetry_residual = relative(inf_norm(&(gram - gram.adjoint())), inf_norm(gram));
    let min_eigenvalue = if gram.is_empty() {
        f64::INFINITY
    } else {
        SymmetricEigen::new(hermitian_part(gram))
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    };
    Ok(ValidationReport {
        min_eigenvalue,
        symmetry_residual,
        symmetric: symmetry_residual <= tol.tol_sym,
        positive: min_eigenvalue > 0.0,
    })
}

/// Eigenpairs of a metric-self-adjoint operator.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedEigen<T: Scalar> {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors, orthonormal for the metric: `V† M V = 1`.
    pub eigenvectors: DMatrix<T>,
}

/// Solves `A v = λ v` for an operator `A` that is self-adjoint with respect
/// to the positive-definite metric `M` (`M A = A† M`).
///
/// The pencil `(M A, M)` is reduced by Cholesky congruence `M = L L†` to the
/// standard Hermitian problem for `L⁻¹ (M A) L⁻†`, so the eigenvectors come
/// out `M`-orthonormal.
pub fn generalized_eig<T: Scalar>(
    a: &DMatrix<T>,
    metric: &DMatrix<T>,
    tol: &Tolerances,
) -> Result<GeneralizedEigen<T>> {
    let n = ensure_square(a)?;
    ensure_dim(n, ensure_square(metric)?)?;
    ensure_finite(a)?;
    ensure_finite(metric)?;
    let k = metric * a;
    let residual = relative((&k - k.adjoint()).norm(), k.norm());
    if residual > tol.tol_resid {
        return Err(Error::NotSelfAdjoint { residual });
    }
    pencil_eig(&hermitian_part(&k), metric, tol)
}

/// Eigenpairs of the Hermitian pencil `K v = λ M v`.
pub(crate) fn pencil_eig<T: Scalar>(
    k: &DMatrix<T>,
    metric: &DMatrix<T>,
    tol: &Tolerances,
) -> Result<GeneralizedEigen<T>> {
    let n = k.nrows();
    let report = validate_positive(metric, tol)?;
    if !report.passed() {
        return Err(Error::SingularMetric);
    }
    let l = cholesky(metric)?.l();
    let reduced = congruence_inverse(&l, k);
    let eig = SymmetricEigen::new(reduced);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let w = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    let eigenvectors = l
        .adjoint()
        .solve_upper_triangular(&w)
        .ok_or_else(|| Error::Numerical("back-substitution with Cholesky factor".into()))?;
    Ok(GeneralizedEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Non-negative square root of a metric-self-adjoint operator with
/// non-negative spectrum, via its spectral decomposition.
///
/// The result is the unique `R` with `R² = A`, `R` metric-self-adjoint and
/// `σ(R) ≥ 0`. Eigenvalues in `[−tol_eig·ρ, 0)` are rounding noise and
/// are clamped to zero.
pub fn sqrt_positive<T: Scalar>(
    a: &DMatrix<T>,
    metric: &DMatrix<T>,
    tol: &Tolerances,
) -> Result<DMatrix<T>> {
    let eig = generalized_eig(a, metric, tol)?;
    let radius = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &x| acc.max(x.abs()));
    if let Some(&lowest) = eig.eigenvalues.first() {
        if lowest < -tol.tol_eig * radius {
            return Err(Error::NegativeSpectrum { eigenvalue: lowest });
        }
    }
    let roots = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&x| T::from_real(x.max(0.0).sqrt())),
    );
    let v = &eig.eigenvectors;
    // V⁻¹ = V† M for M-orthonormal V.
    Ok(v * DMatrix::from_diagonal(&roots) * v.adjoint() * metric)
}

/// Gram–Schmidt in input order with respect to the metric `M`
/// (`⟨x, y⟩ = x† M y`). Vectors whose remaining norm after projection is at
/// most `tol_eig` times the largest input norm are dropped.
pub fn orthonormalize_with_metric<T: Scalar>(
    vectors: &[DVector<T>],
    metric: &DMatrix<T>,
    tol: &Tolerances,
) -> Vec<DVector<T>> {
    let inner = |x: &DVector<T>, y: &DVector<T>| x.dotc(&(metric * y));
    let norm = |x: &DVector<T>| inner(x, x).real().max(0.0).sqrt();
    let largest = vectors.iter().map(norm).fold(0.0, f64::max);
    let mut basis: Vec<DVector<T>> = Vec::new();
    if largest == 0.0 {
        return basis;
    }
    for v in vectors {
        let mut w = v.clone();
        // Two passes keep the basis orthogonal to working precision.
        for _ in 0..2 {
            for b in &basis {
                let coeff = inner(b, &w);
                w -= b * coeff;
            }
        }
        let len = norm(&w);
        if len > tol.tol_eig * largest {
            basis.push(w / T::from_real(len));
        }
    }
    basis
}

/// `h`-orthonormal basis of the span of `vectors`.
pub fn orthonormalize(
    vectors: &[DVector<C64>],
    form: &HermitianForm,
    tol: &Tolerances,
) -> Result<Vec<DVector<C64>>> {
    for v in vectors {
        ensure_dim(form.dim(), v.len())?;
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    Ok(orthonormalize_with_metric(vectors, form.gram(), tol))
}

/// Dimension of the Krylov space `span{x₀, Gx₀, …, G^{n−1}x₀}`.
///
/// The Krylov matrix is factored implicitly by Arnoldi with full
/// re-orthogonalization: each step orthogonalizes `G q_k` against the basis
/// built so far and stops once the new direction is at most
/// `tol_eig·‖G‖₂` long. Forming the power columns explicitly would make the
/// matrix exponentially ill-conditioned in `n`.
pub fn krylov_rank<T: Scalar>(g: &DMatrix<T>, x0: &DVector<T>, tol: &Tolerances) -> Result<usize> {
    let n = ensure_square(g)?;
    ensure_dim(n, x0.len())?;
    ensure_finite(g)?;
    if !x0.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let start = x0.norm();
    if start == 0.0 {
        return Err(Error::ZeroVector);
    }
    let threshold = tol.tol_eig * spectral_norm(g);
    let mut basis = vec![x0 / T::from_real(start)];
    while basis.len() < n {
        let mut w = g * basis.last().expect("basis is non-empty");
        for _ in 0..2 {
            for q in &basis {
                let coeff = q.dotc(&w);
                w -= q * coeff;
            }
        }
        let len = w.norm();
        if len <= threshold {
            break;
        }
        basis.push(w / T::from_real(len));
    }
    Ok(basis.len())
}
