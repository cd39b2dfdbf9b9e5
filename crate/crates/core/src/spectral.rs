//! Spectral resolution of the connecting operator, the bi-unitary group
//! signature, and the genericity and cyclicity tests.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::connecting::ConnectingOperator;
use crate::error::{Error, Result};
use crate::forms::{krylov_rank, orthonormalize_with_metric, pencil_eig};
use crate::linalg::relative;
use crate::tolerances::Tolerances;
use crate::C64;

/// Above this size the commutant is counted from the eigenvalues of the
/// Hermitian frame instead of the explicit `n² × n²` commutation map.
pub const DENSE_COMMUTANT_LIMIT: usize = 32;

/// `G = Σ λ_k P_k` with clustered eigenvalues and `h1`-orthonormal
/// eigenspace bases.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResolution {
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
    bases: Vec<DMatrix<C64>>,
    raw_eigenvalues: Vec<f64>,
    cluster_gap: f64,
    metric: DMatrix<C64>,
}

/// Eigenvalues are merged into one cluster whenever the gap to the previous
/// one is at most `tol_eig` times the spectral radius. Ties merge, so
/// borderline cases report more degeneracy, never less.
pub fn spectral_resolution(g: &ConnectingOperator, tol: &Tolerances) -> Result<SpectralResolution> {
    let h1 = g.h1().gram();
    let eig = pencil_eig(g.h2().gram(), h1, tol)?;
    let radius = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &x| acc.max(x.abs()));
    let cluster_gap = tol.tol_eig * radius;

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        match groups.last_mut() {
            Some(group) if lambda - eig.eigenvalues[*group.last().unwrap()] <= cluster_gap => {
                group.push(i)
            }
            _ => groups.push(vec![i]),
        }
    }

    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut multiplicities = Vec::with_capacity(groups.len());
    let mut bases = Vec::with_capacity(groups.len());
    for group in &groups {
        let mean = group.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / group.len() as f64;
        let columns: Vec<DVector<C64>> = group
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect();
        let basis = orthonormalize_with_metric(&columns, h1, tol);
        if basis.len() != group.len() {
            return Err(Error::Numerical(format!(
                "eigenspace basis collapsed from {} to {} vectors",
                group.len(),
                basis.len()
            )));
        }
        eigenvalues.push(mean);
        multiplicities.push(group.len());
        bases.push(DMatrix::from_columns(&basis));
    }

    Ok(SpectralResolution {
        eigenvalues,
        multiplicities,
        bases,
        raw_eigenvalues: eig.eigenvalues,
        cluster_gap,
        metric: h1.clone(),
    })
}

impl SpectralResolution {
    pub fn dim(&self) -> usize {
        self.metric.nrows()
    }

    /// Cluster representatives (mean of the merged eigenvalues), ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// `n × n_k` matrix whose columns are an `h1`-orthonormal basis of
    /// cluster `k`.
    pub fn basis(&self, cluster: usize) -> &DMatrix<C64> {
        &self.bases[cluster]
    }

    pub fn bases(&self) -> &[DMatrix<C64>] {
        &self.bases
    }

    /// Unclustered eigenvalues, ascending.
    pub fn raw_eigenvalues(&self) -> &[f64] {
        &self.raw_eigenvalues
    }

    /// Absolute merge threshold that was applied.
    pub fn cluster_gap(&self) -> f64 {
        self.cluster_gap
    }

    pub fn cluster_count(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn metric(&self) -> &DMatrix<C64> {
        &self.metric
    }

    /// `h1`-orthogonal projector `B_k B_k† H1` onto cluster `k`.
    pub fn projector(&self, cluster: usize) -> DMatrix<C64> {
        let b = &self.bases[cluster];
        b * b.adjoint() * &self.metric
    }

    /// `Σ_k f(λ_k) P_k`.
    pub fn apply_function(&self, f: impl Fn(f64) -> C64) -> DMatrix<C64> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            out += self.projector(k) * f(lambda);
        }
        out
    }

    /// `‖G − Σ λ_k P_k‖ / ‖G‖`.
    pub fn reconstruction_residual(&self, g: &ConnectingOperator) -> f64 {
        let rebuilt = self.apply_function(|lambda| C64::new(lambda, 0.0));
        relative((g.mat() - rebuilt).norm(), g.mat().norm())
    }

    /// Largest `|B_i† H1 B_j|` entry over pairs of distinct clusters.
    pub fn cross_orthogonality(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.bases.len() {
            for j in (i + 1)..self.bases.len() {
                let overlap = self.bases[i].adjoint() * &self.metric * &self.bases[j];
                worst = worst.max(overlap.iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }
}

/// Multiplicities `(n₁, …, n_k)` of the group `U(n₁) × … × U(n_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSignature(pub Vec<usize>);

impl GroupSignature {
    pub fn multiplicities(&self) -> &[usize] {
        &self.0
    }

    /// Real dimension of the group: `Σ n_l²`.
    pub fn group_dimension(&self) -> usize {
        self.0.iter().map(|n| n * n).sum()
    }
}

impl fmt::Display for GroupSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("×")?;
            }
            write!(f, "U({n})")?;
        }
        Ok(())
    }
}

pub fn group_signature(res: &SpectralResolution) -> GroupSignature {
    GroupSignature(res.multiplicities.clone())
}

/// All eigenvalues simple.
pub fn is_generic_def1(res: &SpectralResolution) -> bool {
    res.multiplicities.iter().all(|&m| m == 1)
}

/// `x₀ = Σ μ_k e_k` over the eigenbasis; cyclic because its Krylov matrix
/// factors as `diag(μ)` times a Vandermonde matrix in the distinct
/// eigenvalues.
pub fn cyclic_vector(res: &SpectralResolution, mu: &[C64]) -> Result<DVector<C64>> {
    if mu.len() != res.cluster_count() {
        return Err(Error::DimensionMismatch {
            expected: res.cluster_count(),
            found: mu.len(),
        });
    }
    if let Some((cluster, &multiplicity)) = res
        .multiplicities
        .iter()
        .enumerate()
        .find(|(_, &m)| m > 1)
    {
        return Err(Error::Degenerate {
            cluster,
            multiplicity,
        });
    }
    if let Some(index) = mu.iter().position(|z| *z == C64::new(0.0, 0.0)) {
        return Err(Error::ZeroCoefficient { index });
    }
    let mut x0 = DVector::zeros(res.dim());
    for (basis, &coeff) in res.bases.iter().zip(mu) {
        x0 += basis.column(0) * coeff;
    }
    Ok(x0)
}

/// Samples up to `trials` (at least one) seeded, unit-norm complex Gaussian
/// vectors and reports whether any of them has full Krylov rank.
pub fn is_cyclic(g: &ConnectingOperator, trials: usize, seed: u64, tol: &Tolerances) -> Result<bool> {
    let n = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials.max(1) {
        let x = DVector::from_fn(n, |_, _| {
            C64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            )
        });
        let x = x.normalize();
        if krylov_rank(g.mat(), &x, tol)? == n {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Complex dimension of `{X : GX = XG}`.
///
/// Computed as the nullity of `X ↦ ĜX − XĜ` for the Hermitian matrix `Ĝ`
/// similar to `G` (its commutant is conjugate to that of `G`). The map
/// `1 ⊗ Ĝ − Ĝᵀ ⊗ 1` is itself Hermitian; its eigenvalues of modulus at most
/// `tol_eig·ρ(G)` count as zero. For `n > DENSE_COMMUTANT_LIMIT` those
/// eigenvalues are taken directly as the pairwise differences `λ_i − λ_j`.
pub fn commutant_dimension(g: &ConnectingOperator, tol: &Tolerances) -> usize {
    let n = g.dim();
    let frame = g.hermitian_frame();
    let threshold = tol.tol_eig * g.spectral_radius();
    if n > DENSE_COMMUTANT_LIMIT {
        let lambdas = SymmetricEigen::new(frame).eigenvalues;
        let mut count = 0;
        for a in lambdas.iter() {
            for b in lambdas.iter() {
                if (a - b).abs() <= threshold {
                    count += 1;
                }
            }
        }
        return count;
    }
    let map = commutation_map(&frame);
    SymmetricEigen::new(map)
        .eigenvalues
        .iter()
        .filter(|x| x.abs() <= threshold)
        .count()
}

/// Matrix of `X ↦ AX − XA` acting on column-stacked `vec(X)`.
pub(crate) fn commutation_map(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let mut map = DMatrix::zeros(n * n, n * n);
    // vec(AX) = (1 ⊗ A) vec X, vec(XA) = (Aᵀ ⊗ 1) vec X.
    for col in 0..n {
        for i in 0..n {
            for k in 0..n {
                map[(col * n + i, col * n + k)] += a[(i, k)];
                map[(col * n + i, k * n + i)] -= a[(k, col)];
            }
        }
    }
    map
}

/// Dimension of the bicommutant: for a diagonalizable operator it is spanned
/// by the spectral projectors, one per eigenvalue cluster.
pub fn bicommutant_dimension(res: &SpectralResolution) -> usize {
    res.cluster_count()
}

/// Generic position in the sense `G′′ = G′`, decided by comparing the
/// dimensions of commutant and bicommutant (`G′′ ⊆ G′` always).
pub fn is_generic_def2(g: &ConnectingOperator, tol: &Tolerances) -> Result<bool> {
    let res = spectral_resolution(g, tol)?;
    Ok(commutant_dimension(g, tol) == bicommutant_dimension(&res))
}
