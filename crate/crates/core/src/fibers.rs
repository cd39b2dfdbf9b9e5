//! Fibered decomposition of the space over the spectrum of the connecting
//! operator: one fiber `H_λ` per eigenvalue cluster, carrying a weight of a
//! normalized discrete measure.
//!
//! In this picture the commutant of `G` is the set of block-diagonal
//! operators (one block per fiber), the bicommutant is the set of
//! fiber-wise scalars, both forms are proportional on each fiber
//! (`h2 = λ h1`), and a bi-unitary transformation is a family of unitaries,
//! one per fiber.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::connecting::ConnectingOperator;
use crate::error::{Error, Result};
use crate::forms::HermitianForm;
use crate::linalg::{ensure_dim, ensure_finite, ensure_square, relative};
use crate::spectral::{is_generic_def2, spectral_resolution};
use crate::tolerances::Tolerances;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct Fiber {
    pub lambda: f64,
    /// Weight of the fiber in the discrete measure, `dim / n`.
    pub sigma: f64,
    pub dim: usize,
    /// `n × dim`, columns `h1`-orthonormal.
    pub basis: DMatrix<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectIntegral {
    fibers: Vec<Fiber>,
    segments: BTreeMap<usize, Vec<usize>>,
    metric: DMatrix<C64>,
    operator: DMatrix<C64>,
    frame: DMatrix<C64>,
}

pub fn build_decomposition(g: &ConnectingOperator, tol: &Tolerances) -> Result<DirectIntegral> {
    let res = spectral_resolution(g, tol)?;
    let n = g.dim();
    let fibers: Vec<Fiber> = res
        .eigenvalues()
        .iter()
        .zip(res.multiplicities())
        .zip(res.bases())
        .map(|((&lambda, &dim), basis)| Fiber {
            lambda,
            sigma: dim as f64 / n as f64,
            dim,
            basis: basis.clone(),
        })
        .collect();
    let mut segments: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (j, fiber) in fibers.iter().enumerate() {
        segments.entry(fiber.dim).or_default().push(j);
    }
    let columns: Vec<_> = fibers
        .iter()
        .flat_map(|f| f.basis.column_iter().map(|c| c.into_owned()))
        .collect();
    let frame = DMatrix::from_columns(&columns);
    Ok(DirectIntegral {
        fibers,
        segments,
        metric: res.metric().clone(),
        operator: g.mat().clone(),
        frame,
    })
}

impl DirectIntegral {
    pub fn dim(&self) -> usize {
        self.metric.nrows()
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    /// Fiber indices grouped by fiber dimension.
    pub fn segments(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.segments
    }

    pub fn is_unidimensional(&self) -> bool {
        self.fibers.iter().all(|f| f.dim == 1)
    }

    /// All fiber bases side by side; `h1`-unitary, so its inverse is
    /// `frame† H1`.
    pub fn frame(&self) -> &DMatrix<C64> {
        &self.frame
    }

    pub fn operator(&self) -> &DMatrix<C64> {
        &self.operator
    }

    /// `frame⁻¹ A frame`.
    pub fn to_fiber_coordinates(&self, a: &DMatrix<C64>) -> DMatrix<C64> {
        self.frame.adjoint() * &self.metric * a * &self.frame
    }

    pub fn from_fiber_coordinates(&self, c: &DMatrix<C64>) -> DMatrix<C64> {
        &self.frame * c * self.frame.adjoint() * &self.metric
    }

    pub fn projector(&self, fiber: usize) -> DMatrix<C64> {
        let b = &self.fibers[fiber].basis;
        b * b.adjoint() * &self.metric
    }

    fn offsets(&self) -> Vec<usize> {
        self.fibers
            .iter()
            .scan(0, |acc, f| {
                let start = *acc;
                *acc += f.dim;
                Some(start)
            })
            .collect()
    }

    /// Splits fiber coordinates into diagonal blocks and the largest
    /// off-diagonal (cross-fiber) entry.
    fn split_blocks(&self, coords: &DMatrix<C64>) -> (Vec<DMatrix<C64>>, f64) {
        let offsets = self.offsets();
        let blocks = self
            .fibers
            .iter()
            .zip(&offsets)
            .map(|(f, &o)| coords.view((o, o), (f.dim, f.dim)).into_owned())
            .collect();
        let owner: Vec<usize> = self
            .fibers
            .iter()
            .enumerate()
            .flat_map(|(j, f)| std::iter::repeat_n(j, f.dim))
            .collect();
        let mut off = 0.0_f64;
        for r in 0..coords.nrows() {
            for c in 0..coords.ncols() {
                if owner[r] != owner[c] {
                    off = off.max(coords[(r, c)].norm());
                }
            }
        }
        (blocks, off)
    }

    fn commutator_residual(&self, a: &DMatrix<C64>) -> f64 {
        let g = &self.operator;
        relative((g * a - a * g).norm(), g.norm() * a.norm())
    }

    fn check_operand(&self, a: &DMatrix<C64>) -> Result<()> {
        ensure_dim(self.dim(), ensure_square(a)?)?;
        ensure_finite(a)
    }

    /// Ratio of the spectral radius to the smallest gap between fibers; a
    /// commutator residual `ε` bounds cross-fiber entries by roughly
    /// `ε` times this factor.
    fn gap_factor(&self) -> f64 {
        let radius = self.fibers.last().map_or(0.0, |f| f.lambda.abs());
        let min_gap = self
            .fibers
            .windows(2)
            .map(|w| w[1].lambda - w[0].lambda)
            .fold(f64::INFINITY, f64::min);
        if min_gap.is_finite() && min_gap > 0.0 {
            (radius / min_gap).max(1.0)
        } else {
            1.0
        }
    }
}

/// Per-fiber blocks `A(λ_j)` of an operator in the commutant.
#[derive(Debug, Clone, PartialEq)]
pub struct DecomposableOperator {
    pub blocks: Vec<DMatrix<C64>>,
    /// `‖GA − AG‖ / (‖G‖ ‖A‖)`.
    pub commutator_residual: f64,
    /// Largest cross-fiber entry relative to `‖A‖` (Frobenius, in fiber
    /// coordinates).
    pub off_diagonal_residual: f64,
}

impl DecomposableOperator {
    /// Reassembles `Σ_j ⊕ A(λ_j)` in ambient coordinates.
    pub fn to_ambient(&self, dec: &DirectIntegral) -> DMatrix<C64> {
        let n = dec.dim();
        let mut coords = DMatrix::zeros(n, n);
        for (block, o) in self.blocks.iter().zip(dec.offsets()) {
            coords.view_mut((o, o), block.shape()).copy_from(block);
        }
        dec.from_fiber_coordinates(&coords)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProportionalityReport {
    /// `max |h2(x, y) − λ_j h1(x, y)| / ‖H2‖` over basis pairs of each fiber.
    pub per_fiber: Vec<f64>,
    pub max_violation: f64,
    pub passed: bool,
}

/// On each fiber `h2 = λ_j h1`, checked on all pairs of basis vectors.
pub fn check_proportionality(
    dec: &DirectIntegral,
    h1: &HermitianForm,
    h2: &HermitianForm,
    tol: &Tolerances,
) -> Result<ProportionalityReport> {
    ensure_dim(dec.dim(), h1.dim())?;
    ensure_dim(dec.dim(), h2.dim())?;
    let scale = h2.gram().norm();
    let per_fiber: Vec<f64> = dec
        .fibers
        .iter()
        .map(|f| {
            let b = &f.basis;
            let lhs = b.adjoint() * h2.gram() * b;
            let rhs = b.adjoint() * h1.gram() * b * C64::new(f.lambda, 0.0);
            let worst = (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
            relative(worst, scale)
        })
        .collect();
    let max_violation = per_fiber.iter().copied().fold(0.0, f64::max);
    Ok(ProportionalityReport {
        passed: max_violation <= tol.tol_resid,
        per_fiber,
        max_violation,
    })
}

/// Blocks of an operator commuting with `G`; fails with
/// [`Error::NotInCommutant`] otherwise.
pub fn project_to_commutant_blocks(
    a: &DMatrix<C64>,
    dec: &DirectIntegral,
    tol: &Tolerances,
) -> Result<DecomposableOperator> {
    dec.check_operand(a)?;
    let commutator_residual = dec.commutator_residual(a);
    if commutator_residual > tol.tol_resid {
        return Err(Error::NotInCommutant {
            residual: commutator_residual,
        });
    }
    let coords = dec.to_fiber_coordinates(a);
    let (blocks, off) = dec.split_blocks(&coords);
    let off_diagonal_residual = relative(off, coords.norm());
    if off_diagonal_residual > 10.0 * tol.tol_resid * dec.gap_factor() {
        return Err(Error::NotInCommutant {
            residual: off_diagonal_residual,
        });
    }
    Ok(DecomposableOperator {
        blocks,
        commutator_residual,
        off_diagonal_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BicommutantReport {
    pub commutator_residual: f64,
    pub in_commutant: bool,
    /// `b_j = tr A(λ_j) / k_j`.
    pub scalars: Vec<C64>,
    /// `‖A(λ_j) − b_j 1‖ / ‖A‖` in fiber coordinates.
    pub deviations: Vec<f64>,
    pub off_diagonal_residual: f64,
    pub passed: bool,
}

/// Tests whether `B` acts on every fiber as multiplication by a number.
pub fn check_bicommutant_scalar(
    b: &DMatrix<C64>,
    dec: &DirectIntegral,
    tol: &Tolerances,
) -> Result<BicommutantReport> {
    dec.check_operand(b)?;
    let commutator_residual = dec.commutator_residual(b);
    let in_commutant = commutator_residual <= tol.tol_resid;
    let coords = dec.to_fiber_coordinates(b);
    let scale = coords.norm();
    let (blocks, off) = dec.split_blocks(&coords);
    let off_diagonal_residual = relative(off, scale);
    let mut scalars = Vec::with_capacity(blocks.len());
    let mut deviations = Vec::with_capacity(blocks.len());
    for block in &blocks {
        let k = block.nrows();
        let scalar = block.trace() / C64::new(k as f64, 0.0);
        let deviation = block - DMatrix::<C64>::identity(k, k) * scalar;
        scalars.push(scalar);
        deviations.push(relative(deviation.norm(), scale));
    }
    let passed = in_commutant
        && off_diagonal_residual <= 10.0 * tol.tol_resid * dec.gap_factor()
        && deviations.iter().all(|&d| d <= tol.tol_resid);
    Ok(BicommutantReport {
        commutator_residual,
        in_commutant,
        scalars,
        deviations,
        off_diagonal_residual,
        passed,
    })
}

/// All fibers one-dimensional, cross-checked against `G′′ = G′`. A
/// disagreement means the two computations are inconsistent with each other
/// and is reported as an error, not a verdict.
pub fn check_prop2(dec: &DirectIntegral, g: &ConnectingOperator, tol: &Tolerances) -> Result<bool> {
    ensure_dim(dec.dim(), g.dim())?;
    let unidimensional = dec.is_unidimensional();
    let generic = is_generic_def2(g, tol)?;
    if unidimensional != generic {
        return Err(Error::InternalInconsistency(format!(
            "fibers unidimensional = {unidimensional} but commutant = bicommutant is {generic}"
        )));
    }
    Ok(unidimensional)
}

/// Haar-distributed `k × k` unitary: QR of a complex Gaussian matrix with
/// the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(k: usize, rng: &mut R) -> DMatrix<C64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(k, k, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for (i, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(i, i)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        col *= phase;
    }
    q
}

/// One independent Haar unitary per fiber, assembled in ambient
/// coordinates. Fiber `j` draws from stream `j` of a ChaCha generator seeded
/// with `seed`, so the result does not depend on evaluation order.
pub fn sample_biunitary(dec: &DirectIntegral, seed: u64) -> DMatrix<C64> {
    let blocks = dec
        .fibers
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            haar_unitary(f.dim, &mut rng)
        })
        .collect();
    DecomposableOperator {
        blocks,
        commutator_residual: 0.0,
        off_diagonal_residual: 0.0,
    }
    .to_ambient(dec)
}

/// `U = Σ_j e^{iφ_j} P_j`; only defined when every fiber is
/// one-dimensional.
pub fn phase_biunitary(dec: &DirectIntegral, phi: &[f64]) -> Result<DMatrix<C64>> {
    if let Some((fiber, f)) = dec.fibers.iter().enumerate().find(|(_, f)| f.dim > 1) {
        return Err(Error::NotGeneric { fiber, dim: f.dim });
    }
    ensure_dim(dec.fibers.len(), phi.len())?;
    let phases = DVector::from_iterator(phi.len(), phi.iter().map(|&p| C64::from_polar(1.0, p)));
    Ok(dec.from_fiber_coordinates(&DMatrix::from_diagonal(&phases)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connecting::connecting_operator;
    use nalgebra::dmatrix;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn diag(values: &[f64]) -> DMatrix<C64> {
        DMatrix::from_diagonal(&DVector::from_iterator(values.len(), values.iter().map(|&x| c(x))))
    }

    fn setup(values: &[f64]) -> (ConnectingOperator, DirectIntegral) {
        let g = connecting_operator(
            &HermitianForm::identity(values.len()),
            &HermitianForm::diagonal(values),
            &tol(),
        )
        .unwrap();
        let dec = build_decomposition(&g, &tol()).unwrap();
        (g, dec)
    }

    #[test]
    fn generic_decomposition() {
        let (_, dec) = setup(&[1.0, 2.0, 3.0]);
        assert_eq!(dec.fibers().len(), 3);
        assert!(dec.fibers().iter().all(|f| f.dim == 1));
        assert_eq!(dec.segments().len(), 1);
        assert_eq!(dec.segments()[&1], vec![0, 1, 2]);
        let total: f64 = dec.fibers().iter().map(|f| f.sigma).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_decomposition() {
        let (_, dec) = setup(&[1.0, 1.0, 2.0]);
        let dims: Vec<_> = dec.fibers().iter().map(|f| (f.lambda, f.dim)).collect();
        assert_eq!(dims, vec![(1.0, 2), (2.0, 1)]);
        assert_eq!(dec.segments()[&2], vec![0]);
        assert_eq!(dec.segments()[&1], vec![1]);
    }

    #[test]
    fn scalar_operator_has_one_fiber() {
        let (_, dec) = setup(&[4.0; 4]);
        assert_eq!(dec.fibers().len(), 1);
        assert_eq!(dec.fibers()[0].dim, 4);
        assert_eq!(dec.fibers()[0].sigma, 1.0);
    }

    #[test]
    fn proportionality_on_diagonal_pair() {
        let (_, dec) = setup(&[1.0, 2.0]);
        let r = check_proportionality(
            &dec,
            &HermitianForm::identity(2),
            &HermitianForm::diagonal(&[1.0, 2.0]),
            &tol(),
        )
        .unwrap();
        assert!(r.passed);
        assert_eq!(r.max_violation, 0.0);

        let (_, dec) = setup(&[1.0, 1.0]);
        let h = HermitianForm::identity(2);
        let r = check_proportionality(&dec, &h, &h, &tol()).unwrap();
        assert_eq!(dec.fibers().len(), 1);
        assert!(r.passed);
    }

    #[test]
    fn commutant_blocks() {
        let t = tol();
        let (g, dec) = setup(&[1.0, 1.0, 2.0]);
        let blocks = project_to_commutant_blocks(g.mat(), &dec, &t).unwrap();
        assert!((&blocks.blocks[0] - DMatrix::<C64>::identity(2, 2)).norm() < 1e-15);
        assert!((&blocks.blocks[1] - diag(&[2.0])).norm() < 1e-15);

        let a = dmatrix![c(0.0), c(1.0), c(0.0); c(1.0), c(0.0), c(0.0); c(0.0), c(0.0), c(5.0)];
        let blocks = project_to_commutant_blocks(&a, &dec, &t).unwrap();
        assert!((&blocks.blocks[0] - dmatrix![c(0.0), c(1.0); c(1.0), c(0.0)]).norm() < 1e-15);
        assert!((&blocks.blocks[1] - diag(&[5.0])).norm() < 1e-15);
        assert!((blocks.to_ambient(&dec) - &a).norm() < 1e-15);
    }

    #[test]
    fn non_commuting_operator_is_rejected() {
        let (_, dec) = setup(&[1.0, 2.0]);
        let a = dmatrix![c(0.0), c(1.0); c(1.0), c(0.0)];
        assert!(matches!(
            project_to_commutant_blocks(&a, &dec, &tol()),
            Err(Error::NotInCommutant { .. })
        ));
    }

    #[test]
    fn bicommutant_scalars() {
        let t = tol();
        let (g, dec) = setup(&[1.0, 1.0, 2.0]);
        // p(G) = G² − 3G + 1 acts as p(λ) on each fiber.
        let gm = g.mat();
        let p = gm * gm - gm * c(3.0) + DMatrix::<C64>::identity(3, 3);
        let r = check_bicommutant_scalar(&p, &dec, &t).unwrap();
        assert!(r.passed);
        assert!((r.scalars[0] - c(-1.0)).norm() < 1e-14);
        assert!((r.scalars[1] - c(-1.0)).norm() < 1e-14);

        let r = check_bicommutant_scalar(&diag(&[1.0, 2.0, 3.0]), &dec, &t).unwrap();
        assert!(r.in_commutant);
        assert!(!r.passed);

        let r = check_bicommutant_scalar(&DMatrix::identity(3, 3), &dec, &t).unwrap();
        assert!(r.passed);
        assert!(r.scalars.iter().all(|z| (z - c(1.0)).norm() < 1e-15));
    }

    #[test]
    fn proposition_two() {
        let t = tol();
        let (g, dec) = setup(&[1.0, 2.0, 3.0]);
        assert!(check_prop2(&dec, &g, &t).unwrap());
        let (g, dec) = setup(&[1.0, 1.0, 2.0]);
        assert!(!check_prop2(&dec, &g, &t).unwrap());
    }

    #[test]
    fn sampled_unitary_in_generic_case_is_diagonal_phase() {
        let (g, dec) = setup(&[1.0, 2.0, 3.0]);
        let u = sample_biunitary(&dec, 7);
        for r in 0..3 {
            for col in 0..3 {
                if r == col {
                    assert!((u[(r, col)].norm() - 1.0).abs() < 1e-14);
                } else {
                    assert_eq!(u[(r, col)], c(0.0));
                }
            }
        }
        assert!(g.verify(&u, &tol()).unwrap().passed);
    }

    #[test]
    fn sampled_unitary_respects_degenerate_blocks() {
        let (g, dec) = setup(&[1.0, 1.0, 2.0]);
        let u = sample_biunitary(&dec, 11);
        assert_eq!(u[(0, 2)], c(0.0));
        assert_eq!(u[(2, 0)], c(0.0));
        let block = u.view((0, 0), (2, 2)).into_owned();
        assert!((block.adjoint() * &block - DMatrix::<C64>::identity(2, 2)).norm() < 1e-14);
        assert!(g.verify(&u, &tol()).unwrap().passed);
    }

    #[test]
    fn sampling_is_deterministic() {
        let (_, dec) = setup(&[1.0, 1.0, 2.0, 3.0, 3.0]);
        assert_eq!(sample_biunitary(&dec, 42), sample_biunitary(&dec, 42));
        assert_ne!(sample_biunitary(&dec, 42), sample_biunitary(&dec, 43));
    }

    #[test]
    fn phase_unitaries() {
        let (_, dec) = setup(&[1.0, 2.0]);
        let u = phase_biunitary(&dec, &[0.0, 0.0]).unwrap();
        assert!((u - DMatrix::<C64>::identity(2, 2)).norm() < 1e-15);
        let u = phase_biunitary(&dec, &[std::f64::consts::PI, 0.0]).unwrap();
        assert!((u - diag(&[-1.0, 1.0])).norm() < 1e-15);

        let (_, dec) = setup(&[1.0, 1.0, 2.0]);
        assert!(matches!(
            phase_biunitary(&dec, &[0.0, 0.0]),
            Err(Error::NotGeneric { fiber: 0, dim: 2 })
        ));
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 1..6 {
            let q = haar_unitary(k, &mut rng);
            assert!((q.adjoint() * &q - DMatrix::<C64>::identity(k, k)).norm() < 1e-13);
        }
    }
}
