//! Random instance generators and independent oracles shared by the
//! integration tests.
#![allow(dead_code)]

pub mod cli_cases;

use biherm::{HermitianForm, Tolerances, C64};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

pub fn random_complex_matrix<R: Rng>(n: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

pub fn random_complex_vector<R: Rng>(n: usize, rng: &mut R) -> DVector<C64> {
    DVector::from_fn(n, |_, _| complex_gaussian(rng))
}

pub fn random_real_vector<R: Rng>(n: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(n, |_, _| gaussian(rng))
}

/// Unitary `Q` factor of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> DMatrix<C64> {
    random_complex_matrix(n, rng).qr().q()
}

pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| gaussian(rng)).qr().q()
}

/// Eigenvalues log-uniform in `[1, cond]`.
fn log_uniform<R: Rng>(n: usize, cond: f64, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| cond.powf(rng.random::<f64>())).collect()
}

/// Hermitian positive-definite with condition number at most `cond`.
pub fn random_pd_hermitian<R: Rng>(n: usize, cond: f64, rng: &mut R) -> DMatrix<C64> {
    let q = random_unitary(n, rng);
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        log_uniform(n, cond, rng).into_iter().map(|x| C64::new(x, 0.0)),
    ));
    let h = &q * d * q.adjoint();
    (&h + h.adjoint()) * C64::new(0.5, 0.0)
}

pub fn random_spd<R: Rng>(m: usize, cond: f64, rng: &mut R) -> DMatrix<f64> {
    let q = random_orthogonal(m, rng);
    let d = DMatrix::from_diagonal(&DVector::from_vec(log_uniform(m, cond, rng)));
    let s = &q * d * q.transpose();
    (&s + s.transpose()) * 0.5
}

pub fn random_form<R: Rng>(n: usize, cond: f64, rng: &mut R) -> HermitianForm {
    HermitianForm::new(random_pd_hermitian(n, cond, rng), &tol()).unwrap()
}

/// `J = S J₀ S⁻¹` with `J₀` the standard structure and `S = 1 + εX`,
/// `‖εX‖₂ < 1/2`, so `cond(S) < 3`.
pub fn random_complex_structure<R: Rng>(m: usize, rng: &mut R) -> DMatrix<f64> {
    let n = m / 2;
    let mut j0 = DMatrix::zeros(m, m);
    for k in 0..n {
        j0[(n + k, k)] = 1.0;
        j0[(k, n + k)] = -1.0;
    }
    let x = DMatrix::from_fn(m, m, |_, _| gaussian(rng));
    let scale = 0.45 / x.clone().svd(false, false).singular_values.max();
    let s = DMatrix::identity(m, m) + x * scale;
    let s_inv = s.clone().try_inverse().unwrap();
    s * j0 * s_inv
}

/// Random composition of `n` into positive parts; roughly half the draws
/// are all ones.
pub fn random_multiplicities<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    if rng.random_bool(0.5) {
        return vec![1; n];
    }
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let k = rng.random_range(1..=left.min(4));
        parts.push(k);
        left -= k;
    }
    if parts.iter().all(|&p| p == 1) && n > 1 {
        parts = vec![2];
        parts.extend(std::iter::repeat_n(1, n - 2));
    }
    parts
}

/// A pair `(h1, h2)` whose connecting operator has the prescribed cluster
/// multiplicities and well-separated eigenvalues, plus those eigenvalues
/// (ascending, one per cluster).
pub struct Instance {
    pub h1: HermitianForm,
    pub h2: HermitianForm,
    pub multiplicities: Vec<usize>,
    pub eigenvalues: Vec<f64>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.h1.dim()
    }

    pub fn is_generic(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }
}

/// Ascending, with consecutive gaps between 0.1 and 1.1 starting near 1.
pub fn spaced_eigenvalues<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let mut lambda = 0.5 + rng.random::<f64>();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(lambda);
        lambda += 0.1 + rng.random::<f64>();
    }
    out
}

/// `h2 = h1 V Λ V† h1` with `V† h1 V = 1`, so `G = V Λ V⁻¹` has exactly the
/// spectrum `Λ`; cluster sizes are assigned to eigenvalues in random order.
pub fn instance_with<R: Rng>(multiplicities: &[usize], cond: f64, rng: &mut R) -> Instance {
    let n: usize = multiplicities.iter().sum();
    let h1 = random_pd_hermitian(n, cond, rng);
    let eigenvalues = spaced_eigenvalues(multiplicities.len(), rng);
    let mut mults = multiplicities.to_vec();
    for i in (1..mults.len()).rev() {
        mults.swap(i, rng.random_range(0..=i));
    }

    let diag: Vec<C64> = mults
        .iter()
        .zip(&eigenvalues)
        .flat_map(|(&m, &l)| std::iter::repeat_n(C64::new(l, 0.0), m))
        .collect();
    let lam = DMatrix::from_diagonal(&DVector::from_vec(diag));
    let l = h1.clone().cholesky().unwrap().l();
    let q = random_unitary(n, rng);
    let v = l.adjoint().solve_upper_triangular(&q).unwrap();
    let h2 = &h1 * &v * lam * v.adjoint() * &h1;
    let h2 = (&h2 + h2.adjoint()) * C64::new(0.5, 0.0);
    Instance {
        h1: HermitianForm::new(h1, &tol()).unwrap(),
        h2: HermitianForm::new(h2, &tol()).unwrap(),
        multiplicities: mults,
        eigenvalues,
    }
}

pub fn random_instance<R: Rng>(max_n: usize, rng: &mut R) -> Instance {
    let n = rng.random_range(2..=max_n);
    let mults = random_multiplicities(n, rng);
    instance_with(&mults, 50.0, rng)
}

/// The corpus used by the genericity and decomposition suites.
pub fn corpus(size: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let mut rng = rng(seed);
    (0..size).map(|_| random_instance(max_n, &mut rng)).collect()
}

/// Orthonormal basis of the numerical null space of a tall or square `a`:
/// right singular vectors whose singular value is at most `threshold`.
pub fn null_space(a: &DMatrix<C64>, threshold: f64) -> Vec<DVector<C64>> {
    assert!(a.nrows() >= a.ncols(), "null_space expects a tall matrix");
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.unwrap();
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &x)| x <= threshold)
        .map(|(r, _)| v_t.row(r).adjoint())
        .collect()
}

/// `vec⁻¹`, column-stacked.
pub fn unvec(v: &DVector<C64>, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |r, c| v[c * n + r])
}

/// Matrix of `X ↦ AX − XA` on column-stacked `vec X`.
pub fn commutator_map(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let id = DMatrix::<C64>::identity(n, n);
    id.kronecker(a) - a.transpose().kronecker(&id)
}

/// Brute-force commutant and bicommutant bases of `g` (n ≤ 8). Singular
/// values below `rel_tol · ‖g‖_F` count as zero; the commutant basis is
/// Frobenius-orthonormal, so the second stage uses `rel_tol` directly.
pub fn double_commutant(g: &DMatrix<C64>, rel_tol: f64) -> (Vec<DMatrix<C64>>, Vec<DMatrix<C64>>) {
    let n = g.nrows();
    let commutant: Vec<DMatrix<C64>> = null_space(&commutator_map(g), rel_tol * g.norm())
        .iter()
        .map(|v| unvec(v, n))
        .collect();
    let blocks: Vec<DMatrix<C64>> = commutant.iter().map(commutator_map).collect();
    let rows = blocks.len() * n * n;
    let mut stacked = DMatrix::<C64>::zeros(rows, n * n);
    for (i, b) in blocks.iter().enumerate() {
        stacked.view_mut((i * n * n, 0), (n * n, n * n)).copy_from(b);
    }
    let bicommutant = null_space(&stacked, rel_tol)
        .iter()
        .map(|v| unvec(v, n))
        .collect();
    (commutant, bicommutant)
}

/// Rank of the explicit Krylov matrix `[x, Gx, …, G^{n−1}x]` with columns
/// normalized, by SVD.
pub fn explicit_krylov_rank(g: &DMatrix<C64>, x: &DVector<C64>, rel_tol: f64) -> usize {
    let n = g.nrows();
    let mut cols = Vec::with_capacity(n);
    let mut v = x.clone();
    for _ in 0..n {
        let norm = v.norm();
        cols.push(&v / C64::new(norm, 0.0));
        v = g * &cols[cols.len() - 1];
    }
    let k = DMatrix::from_columns(&cols);
    let s = k.svd(false, false).singular_values;
    let smax = s.max();
    s.iter().filter(|&&x| x > rel_tol * smax).count()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a
    } else {
        a / b
    }
}
