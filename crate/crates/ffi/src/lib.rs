//! C interface to `biherm`.
//!
//! All functions return a [`BihermStatus`]; on failure a description is
//! available from [`biherm_last_error_message`] on the same thread.
//!
//! Matrices cross the boundary as row-major `double` arrays. Complex matrices
//! interleave real and imaginary parts, so an `n × n` complex matrix occupies
//! `2·n²` doubles. Handles are opaque, created by `*_new` and released with
//! the matching `*_free` (which accepts `NULL`).
//!
//! Every `const BihermTolerances *` parameter may be `NULL` to use the
//! library defaults.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use biherm::{
    bicommutant_dimension, build_complexification, build_decomposition, commutant_dimension,
    connecting_operator, group_signature, hermitian_from_triple, is_cyclic, is_generic_def1,
    is_generic_def2, sample_biunitary, spectral_resolution, triple_from_g_j, triple_from_g_omega,
    ComplexStructure, ConnectingOperator, DirectIntegral, Error, HermitianForm, RealForm,
    Tolerances, C64,
};
use nalgebra::DMatrix;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BihermStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    BufferTooSmall = 4,
    NotSymmetric = 5,
    NotPositive = 6,
    NotAdmissible = 7,
    NotGeneric = 8,
    InvariantViolation = 9,
    Numerical = 10,
    Panic = 11,
}

/// Numerical thresholds; see the library documentation for their meaning.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BihermTolerances {
    pub tol_sym: f64,
    pub tol_j: f64,
    pub tol_eig: f64,
    pub tol_resid: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BihermConnectingResiduals {
    pub defining: f64,
    pub h1_self_adjoint: f64,
    pub h2_self_adjoint: f64,
    pub min_eigenvalue: f64,
    pub condition_number: f64,
    pub ill_conditioned: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BihermGenericity {
    /// All eigenvalues of `G` simple.
    pub simple_spectrum: bool,
    /// Commutant equals bicommutant.
    pub commutant_equals_bicommutant: bool,
    pub cyclic: bool,
    pub commutant_dimension: usize,
    pub bicommutant_dimension: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BihermFiberInfo {
    pub lambda: f64,
    pub sigma: f64,
    pub dim: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BihermBiUnitaryReport {
    pub h1_residual: f64,
    pub h2_residual: f64,
    pub commutator_residual: f64,
    pub preserves_h1: bool,
    pub preserves_h2: bool,
    pub commutes: bool,
    pub passed: bool,
}

/// Positive-definite Hermitian form.
pub struct BihermForm {
    inner: HermitianForm,
}

/// Connecting operator of a pair of forms.
pub struct BihermConnecting {
    inner: ConnectingOperator,
}

/// Fibered decomposition over the spectrum of a connecting operator.
pub struct BihermDecomposition {
    inner: DirectIntegral,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    let c = CString::new(sanitized).expect("interior NULs were removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

struct Failure {
    status: BihermStatus,
    message: String,
}

impl Failure {
    fn new(status: BihermStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    fn null(name: &str) -> Self {
        Self::new(BihermStatus::NullPointer, format!("`{name}` is NULL"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        use BihermStatus as S;
        let status = match &e {
            Error::NonFinite
            | Error::NotSquare { .. }
            | Error::InvalidTolerance { .. }
            | Error::ZeroVector
            | Error::ZeroCoefficient { .. } => S::InvalidArgument,
            Error::DimensionMismatch { .. } => S::DimensionMismatch,
            Error::NotSymmetric { .. } | Error::NotAntisymmetric { .. } | Error::NotSelfAdjoint { .. } => {
                S::NotSymmetric
            }
            Error::NotPositive { .. } | Error::SingularMetric | Error::NegativeSpectrum { .. } => {
                S::NotPositive
            }
            Error::NotComplexStructure { .. }
            | Error::OddDimension { .. }
            | Error::NotAdmissible(_)
            | Error::DegenerateSymplectic { .. }
            | Error::NotSkew { .. } => S::NotAdmissible,
            Error::Degenerate { .. } | Error::NotGeneric { .. } | Error::NotInCommutant { .. } => {
                S::NotGeneric
            }
            Error::InvariantViolation(_) | Error::InternalInconsistency(_) => S::InvariantViolation,
            Error::Numerical(_) => S::Numerical,
        };
        Self::new(status, e.to_string())
    }
}

type FfiResult<T = ()> = Result<T, Failure>;

fn guard(f: impl FnOnce() -> FfiResult) -> BihermStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BihermStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(payload) => {
            let detail = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("internal panic: {detail}"));
            BihermStatus::Panic
        }
    }
}

unsafe fn tolerances(tol: *const BihermTolerances) -> FfiResult<Tolerances> {
    match tol.as_ref() {
        None => Ok(Tolerances::default()),
        Some(t) => Ok(Tolerances::new(t.tol_sym, t.tol_j, t.tol_eig, t.tol_resid)?),
    }
}

unsafe fn handle<'a, T>(ptr: *const T, name: &str) -> FfiResult<&'a T> {
    ptr.as_ref().ok_or_else(|| Failure::null(name))
}

fn square_len(n: usize, factor: usize) -> FfiResult<usize> {
    if n == 0 {
        return Err(Failure::new(BihermStatus::InvalidArgument, "dimension must be positive"));
    }
    n.checked_mul(n)
        .and_then(|x| x.checked_mul(factor))
        .ok_or_else(|| Failure::new(BihermStatus::InvalidArgument, "dimension overflows"))
}

unsafe fn input<'a>(ptr: *const f64, len: usize, name: &str) -> FfiResult<&'a [f64]> {
    if ptr.is_null() {
        return Err(Failure::null(name));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn output<'a>(ptr: *mut f64, len: usize, needed: usize, name: &str) -> FfiResult<&'a mut [f64]> {
    if ptr.is_null() {
        return Err(Failure::null(name));
    }
    if len < needed {
        return Err(Failure::new(
            BihermStatus::BufferTooSmall,
            format!("`{name}` holds {len} values, {needed} needed"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, needed))
}

unsafe fn write_out<T>(ptr: *mut T, value: T, name: &str) -> FfiResult {
    let slot = ptr.as_mut().ok_or_else(|| Failure::null(name))?;
    *slot = value;
    Ok(())
}

fn real_matrix(n: usize, data: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, data)
}

fn complex_matrix(n: usize, data: &[f64]) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |r, c| {
        let k = 2 * (r * n + c);
        C64::new(data[k], data[k + 1])
    })
}

fn write_real(m: &DMatrix<f64>, out: &mut [f64]) {
    let n = m.ncols();
    for r in 0..m.nrows() {
        for c in 0..n {
            out[r * n + c] = m[(r, c)];
        }
    }
}

fn write_complex(m: &DMatrix<C64>, out: &mut [f64]) {
    let n = m.ncols();
    for r in 0..m.nrows() {
        for c in 0..n {
            let k = 2 * (r * n + c);
            out[k] = m[(r, c)].re;
            out[k + 1] = m[(r, c)].im;
        }
    }
}

/// Message describing the last failure on this thread, or `NULL`. The
/// pointer stays valid until the next `biherm_*` call on the same thread.
#[no_mangle]
pub extern "C" fn biherm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn biherm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn biherm_tolerances_default() -> BihermTolerances {
    let t = Tolerances::default();
    BihermTolerances {
        tol_sym: t.tol_sym,
        tol_j: t.tol_j,
        tol_eig: t.tol_eig,
        tol_resid: t.tol_resid,
    }
}

/// Creates a Hermitian form from an `n × n` complex Gram matrix
/// (`2·n²` doubles, interleaved).
#[no_mangle]
pub unsafe extern "C" fn biherm_form_new(
    n: usize,
    gram: *const f64,
    tol: *const BihermTolerances,
    out: *mut *mut BihermForm,
) -> BihermStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let tol = tolerances(tol)?;
        let data = input(gram, square_len(n, 2)?, "gram")?;
        let inner = HermitianForm::new(complex_matrix(n, data), &tol)?;
        *out = Box::into_raw(Box::new(BihermForm { inner }));
        Ok(())
    })
}

/// Creates a Hermitian form from a real symmetric `n × n` Gram matrix.
#[no_mangle]
pub unsafe extern "C" fn biherm_form_new_real(
    n: usize,
    gram: *const f64,
    tol: *const BihermTolerances,
    out: *mut *mut BihermForm,
) -> BihermStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let tol = tolerances(tol)?;
        let data = input(gram, square_len(n, 1)?, "gram")?;
        let inner = HermitianForm::from_real(&real_matrix(n, data), &tol)?;
        *out = Box::into_raw(Box::new(BihermForm { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn biherm_form_free(form: *mut BihermForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Dimension of the form, or 0 for `NULL`.
#[no_mangle]
pub unsafe extern "C" fn biherm_form_dim(form: *const BihermForm) -> usize {
    form.as_ref().map_or(0, |f| f.inner.dim())
}

/// Computes `G` with `h2(x, y) = h1(Gx, y)`.
#[no_mangle]
pub unsafe extern "C" fn biherm_connecting_new(
    h1: *const BihermForm,
    h2: *const BihermForm,
    tol: *const BihermTolerances,
    out: *mut *mut BihermConnecting,
) -> BihermStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let tol = tolerances(tol)?;
        let h1 = handle(h1, "h1")?;
        let h2 = handle(h2, "h2")?;
        let inner = connecting_operator(&h1.inner, &h2.inner, &tol)?;
        *out = Box::into_raw(Box::new(BihermConnecting { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn biherm_connecting_free(g: *mut BihermConnecting) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

#[no_mangle]
pub unsafe extern "C" fn biherm_connecting_dim(g: *const BihermConnecting) -> usize {
    g.as_ref().map_or(0, |g| g.inner.dim())
}

/// Writes `G` (`2·n²` doubles) into `out`, which holds `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn biherm_connecting_matrix(
    g: *const BihermConnecting,
    out: *mut f64,
    len: usize,
) -> BihermStatus {
    guard(|| {
        let g = handle(g, "g")?;
        let buf = output(out, len, square_len(g.inner.dim(), 2)?, "out")?;
        write_complex(g.inner.mat(), buf);
        Ok(())
    })
}

/// Writes the `n` eigenvalues of `G`, ascending.
#[no_mangle]
pub unsafe extern "C" fn biherm_connecting_spectrum(
    g: *const BihermConnecting,
    out: *mut f64,
    len: usize,
) -> BihermStatus {
    guard(|| {
        let g = handle(g, "g")?;
        let spectrum = g.inner.spectrum();
        output(out, len, spectrum.len(), "out")?.copy_from_slice(spectrum);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn biherm_connecting_residuals(
    g: *const BihermConnecting,
    out: *mut BihermConnectingResiduals,
) -> BihermStatus {
    guard(|| {
        let g = handle(g, "g")?;
        let r = g.inner.residuals();
        let value = BihermConnectingResiduals {
            defining: r.defining,
            h1_self_adjoint: r.h1_self_adjoint,
            h2_self_adjoint: r.h2_self_adjoint,
            min_eigenvalue: r.min_eigenvalue,
            condition_number: g.inner.condition_number(),
            ill_conditioned: g.inner.ill_conditioned(),
        };
        write_out(out, value, "out")
    })
}

/// Genericity verdicts, commutant dimensions and a seeded cyclicity test
/// with `trials` random vectors.
#[no_mangle]
pub unsafe extern "C" fn biherm_genericity(
    g: *const BihermConnecting,
    tol: *const BihermTolerances,
    trials: usize,
    seed: u64,
    out: *mut BihermGenericity,
) -> BihermStatus {
    guard(|| {
        let tol = tolerances(tol)?;
        let g = handle(g, "g")?;
        let res = spectral_resolution(&g.inner, &tol)?;
        let value = BihermGenericity {
            simple_spectrum: is_generic_def1(&res),
            commutant_equals_bicommutant: is_generic_def2(&g.inner, &tol)?,
            cyclic: is_cyclic(&g.inner, trials, seed, &tol)?,
            commutant_dimension: commutant_dimension(&g.inner, &tol),
            bicommutant_dimension: bicommutant_dimension(&res),
        };
        write_out(out, value, "out")
    })
}

/// Multiplicities `(n₁, …, n_k)` of the bi-unitary group
/// `U(n₁) × … × U(n_k)`. `count` always receives `k`; the call fails with
/// `BUFFER_TOO_SMALL` if `len < k`. `out` may be `NULL` when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn biherm_signature(
    g: *const BihermConnecting,
    tol: *const BihermTolerances,
    out: *mut usize,
    len: usize,
    count: *mut usize,
) -> BihermStatus {
    guard(|| {
        let tol = tolerances(tol)?;
        let g = handle(g, "g")?;
        let signature = group_signature(&spectral_resolution(&g.inner, &tol)?);
        let m = signature.multiplicities();
        write_out(count, m.len(), "count")?;
        if len < m.len() {
            return Err(Failure::new(
                BihermStatus::BufferTooSmall,
                format!("`out` holds {len} values, {} needed", m.len()),
            ));
        }
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        std::slice::from_raw_parts_mut(out, m.len()).copy_from_slice(m);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn biherm_decomposition_new(
    g: *const BihermConnecting,
    tol: *const BihermTolerances,
    out: *mut *mut BihermDecomposition,
) -> BihermStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let tol = tolerances(tol)?;
        let g = handle(g, "g")?;
        let inner = build_decomposition(&g.inner, &tol)?;
        *out = Box::into_raw(Box::new(BihermDecomposition { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn biherm_decomposition_free(dec: *mut BihermDecomposition) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

#[no_mangle]
pub unsafe extern "C" fn biherm_decomposition_fiber_count(dec: *const BihermDecomposition) -> usize {
    dec.as_ref().map_or(0, |d| d.inner.fibers().len())
}

#[no_mangle]
pub unsafe extern "C" fn biherm_decomposition_fiber(
    dec: *const BihermDecomposition,
    index: usize,
    out: *mut BihermFiberInfo,
) -> BihermStatus {
    guard(|| {
        let dec = handle(dec, "dec")?;
        let fiber = dec.inner.fibers().get(index).ok_or_else(|| {
            Failure::new(
                BihermStatus::InvalidArgument,
                format!("fiber index {index} out of range"),
            )
        })?;
        let value = BihermFiberInfo {
            lambda: fiber.lambda,
            sigma: fiber.sigma,
            dim: fiber.dim,
        };
        write_out(out, value, "out")
    })
}

/// Writes a random bi-unitary transformation (`2·n²` doubles). The same
/// seed always gives the same matrix.
#[no_mangle]
pub unsafe extern "C" fn biherm_sample_biunitary(
    dec: *const BihermDecomposition,
    seed: u64,
    out: *mut f64,
    len: usize,
) -> BihermStatus {
    guard(|| {
        let dec = handle(dec, "dec")?;
        let buf = output(out, len, square_len(dec.inner.dim(), 2)?, "out")?;
        write_complex(&sample_biunitary(&dec.inner, seed), buf);
        Ok(())
    })
}

/// Checks a complex `n × n` matrix `u` (`2·n²` doubles) against the forms
/// connected by `g`.
#[no_mangle]
pub unsafe extern "C" fn biherm_verify_biunitary(
    g: *const BihermConnecting,
    u: *const f64,
    n: usize,
    tol: *const BihermTolerances,
    out: *mut BihermBiUnitaryReport,
) -> BihermStatus {
    guard(|| {
        let tol = tolerances(tol)?;
        let g = handle(g, "g")?;
        let data = input(u, square_len(n, 2)?, "u")?;
        let r = g.inner.verify(&complex_matrix(n, data), &tol)?;
        let value = BihermBiUnitaryReport {
            h1_residual: r.h1_residual,
            h2_residual: r.h2_residual,
            commutator_residual: r.commutator_residual,
            preserves_h1: r.preserves_h1,
            preserves_h2: r.preserves_h2,
            commutes: r.commutes,
            passed: r.passed,
        };
        write_out(out, value, "out")
    })
}

/// Recovers the complex structure `J` (and the compatible metric) from a
/// metric `g` and a symplectic form `omega`, both real `m × m`. `g_out` may
/// be `NULL`.
#[no_mangle]
pub unsafe extern "C" fn biherm_triple_from_g_omega(
    m: usize,
    g: *const f64,
    omega: *const f64,
    tol: *const BihermTolerances,
    j_out: *mut f64,
    g_out: *mut f64,
) -> BihermStatus {
    guard(|| {
        let tol = tolerances(tol)?;
        let len = square_len(m, 1)?;
        let g = RealForm::symmetric(real_matrix(m, input(g, len, "g")?), &tol)?;
        let omega = RealForm::antisymmetric(real_matrix(m, input(omega, len, "omega")?), &tol)?;
        let triple = triple_from_g_omega(&g, &omega, &tol)?;
        write_real(triple.j().mat(), output(j_out, len, len, "j_out")?);
        if !g_out.is_null() {
            write_real(triple.g().gram(), std::slice::from_raw_parts_mut(g_out, len));
        }
        Ok(())
    })
}

/// Hermitian form `h = g + i ω` of the triple generated by a metric `g` and
/// complex structure `j` (real `m × m`). Writes the `(m/2) × (m/2)` complex
/// Gram matrix (`m²/2` doubles) into `h_out`.
#[no_mangle]
pub unsafe extern "C" fn biherm_hermitian_from_g_j(
    m: usize,
    g: *const f64,
    j: *const f64,
    tol: *const BihermTolerances,
    h_out: *mut f64,
    len: usize,
) -> BihermStatus {
    guard(|| {
        let tol = tolerances(tol)?;
        let n2 = square_len(m, 1)?;
        let g = RealForm::symmetric(real_matrix(m, input(g, n2, "g")?), &tol)?;
        let j = ComplexStructure::new(real_matrix(m, input(j, n2, "j")?), &tol)?;
        let triple = triple_from_g_j(&g, &j, &tol)?;
        let cmap = build_complexification(&triple, &tol)?;
        let h = hermitian_from_triple(&triple, &cmap, &tol)?;
        let buf = output(h_out, len, square_len(h.dim(), 2)?, "h_out")?;
        write_complex(h.gram(), buf);
        Ok(())
    })
}
