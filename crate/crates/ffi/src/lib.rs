//! C ABI over `commbound`.
//!
//! Every entry point returns a [`CbStatus`] and writes results through out-pointers,
//! which are left untouched on failure. After a non-OK status,
//! [`cb_last_error_message`] describes the failure on the calling thread. Panics
//! never cross the boundary; they surface as [`CbStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use commbound::circle::{eta_lower, truncation_envelope, DEFAULT_LOWER_GRID};
use commbound::lab::{sample_sweep, DenseMatrix, SpectrumMode, SweepSpec, Target};
use commbound::periodic::{builtin_bump, builtin_triangle};
use commbound::positive::{gamma0, pedersen_curve, sqrt_series, UnitFunction};
use commbound::{BoundCurve, Error, PeriodicFunction};
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CbStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    Numerical = 3,
    /// A validation run found a sample above its bound.
    Violation = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CbFunction {
    Triangle = 0,
    Bump = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CbComplex {
    pub re: f64,
    pub im: f64,
}

/// One piece of a curve's lower envelope: `slope·δ + intercept` on `[delta_start, delta_end]`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CbSegment {
    pub delta_start: f64,
    pub delta_end: f64,
    pub slope: f64,
    pub intercept: f64,
}

/// Opaque bound curve. Create with a `cb_curve_*` constructor, release with [`cb_curve_free`].
pub struct CbCurve {
    inner: BoundCurve,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CbStatus {
    match e {
        Error::InvalidArgument(_) | Error::DimensionMismatch(..) | Error::DimensionOutOfRange(_) => {
            CbStatus::InvalidArgument
        }
        Error::Violation { .. } => CbStatus::Violation,
        _ => CbStatus::Numerical,
    }
}

fn guard(body: impl FnOnce() -> Result<(), (CbStatus, String)>) -> CbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CbStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            CbStatus::Panic
        }
    }
}

fn lift<T>(r: commbound::Result<T>) -> Result<T, (CbStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), (CbStatus, String)> {
    if p.is_null() {
        Err((CbStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

fn builtin(f: CbFunction) -> PeriodicFunction {
    match f {
        CbFunction::Triangle => builtin_triangle(),
        CbFunction::Bump => builtin_bump(),
    }
}

fn emit_curve(curve: commbound::Result<BoundCurve>, out: *mut *mut CbCurve) -> Result<(), (CbStatus, String)> {
    non_null(out, "out")?;
    let inner = lift(curve)?;
    // SAFETY: `out` is non-null and the caller promises it is writable.
    unsafe { *out = Box::into_raw(Box::new(CbCurve { inner })) };
    Ok(())
}

/// Reads a row-major `dim × dim` matrix.
///
/// # Safety
/// `entries` must point to `dim * dim` readable values.
unsafe fn read_matrix(dim: usize, entries: *const CbComplex, name: &str) -> Result<DenseMatrix, (CbStatus, String)> {
    non_null(entries, name)?;
    let len = dim
        .checked_mul(dim)
        .ok_or_else(|| (CbStatus::InvalidArgument, format!("dimension {dim} overflows")))?;
    let data = std::slice::from_raw_parts(entries, len)
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();
    lift(DenseMatrix::from_vec(dim, data))
}

/// Message for the last failed call on this thread, or NULL after a successful one.
/// The pointer stays valid until the next `cb_*` call on the same thread.
#[no_mangle]
pub extern "C" fn cb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// The √-bound γ₀ built from Pedersen lines `1..=n_max` and `a_grid` tangent points.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cb_curve_gamma0(n_max: usize, a_grid: usize, out: *mut *mut CbCurve) -> CbStatus {
    guard(|| emit_curve(gamma0(n_max, a_grid), out))
}

/// Envelope of the Pedersen lines `1..=n_max` alone.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cb_curve_pedersen(n_max: usize, out: *mut *mut CbCurve) -> CbStatus {
    guard(|| emit_curve(pedersen_curve(n_max), out))
}

/// Truncation envelope for a builtin function on the circle, degrees `1..=n_max`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cb_curve_truncation(function: CbFunction, n_max: usize, out: *mut *mut CbCurve) -> CbStatus {
    guard(|| emit_curve(truncation_envelope(&builtin(function), n_max), out))
}

/// Releases a curve. NULL is ignored.
///
/// # Safety
/// `curve` must come from a `cb_curve_*` constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cb_curve_free(curve: *mut CbCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Curve value at `delta`; queries above the curve's range are clamped to it.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cb_curve_eval(curve: *const CbCurve, delta: f64, out: *mut f64) -> CbStatus {
    guard(|| {
        non_null(curve, "curve")?;
        non_null(out, "out")?;
        if !(delta >= 0.0) {
            return Err((CbStatus::InvalidArgument, format!("delta must be >= 0, got {delta}")));
        }
        *out = (*curve).inner.evaluate(delta);
        Ok(())
    })
}

/// Largest δ the curve covers.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cb_curve_delta_max(curve: *const CbCurve, out: *mut f64) -> CbStatus {
    guard(|| {
        non_null(curve, "curve")?;
        non_null(out, "out")?;
        *out = (*curve).inner.delta_max();
        Ok(())
    })
}

/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cb_curve_segment_count(curve: *const CbCurve, out: *mut usize) -> CbStatus {
    guard(|| {
        non_null(curve, "curve")?;
        non_null(out, "out")?;
        *out = (*curve).inner.segments().len();
        Ok(())
    })
}

/// Segment `index` of the stored envelope, in increasing δ.
///
/// # Safety
/// `curve` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cb_curve_segment(curve: *const CbCurve, index: usize, out: *mut CbSegment) -> CbStatus {
    guard(|| {
        non_null(curve, "curve")?;
        non_null(out, "out")?;
        let segments = (*curve).inner.segments();
        let s = segments.get(index).ok_or_else(|| {
            (
                CbStatus::InvalidArgument,
                format!("segment {index} out of range 0..{}", segments.len()),
            )
        })?;
        *out = CbSegment {
            delta_start: s.delta_start,
            delta_end: s.delta_end,
            slope: s.slope,
            intercept: s.intercept,
        };
        Ok(())
    })
}

/// Constructive lower bound for a builtin at `delta`; `grid_size` 0 selects the default.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_eta_lower(function: CbFunction, delta: f64, grid_size: usize, out: *mut f64) -> CbStatus {
    guard(|| {
        non_null(out, "out")?;
        let grid = if grid_size == 0 { DEFAULT_LOWER_GRID } else { grid_size };
        *out = lift(eta_lower(&builtin(function), delta, grid))?;
        Ok(())
    })
}

/// Taylor coefficient `c_n` of `1 − √(1 − x)`, `n >= 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_sqrt_coefficient(n: usize, out: *mut f64) -> CbStatus {
    guard(|| {
        non_null(out, "out")?;
        if n == 0 {
            return Err((CbStatus::InvalidArgument, "n must be >= 1".into()));
        }
        *out = lift(sqrt_series(n))?.coefficient(n);
        Ok(())
    })
}

/// Operator norm of a row-major `dim × dim` complex matrix.
///
/// # Safety
/// `entries` must hold `dim * dim` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_op_norm(dim: usize, entries: *const CbComplex, out: *mut f64) -> CbStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = read_matrix(dim, entries, "entries")?.op_norm();
        Ok(())
    })
}

/// `‖AB − BA‖` for row-major `dim × dim` matrices.
///
/// # Safety
/// `a` and `b` must each hold `dim * dim` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_commutator_norm(
    dim: usize,
    a: *const CbComplex,
    b: *const CbComplex,
    out: *mut f64,
) -> CbStatus {
    guard(|| {
        non_null(out, "out")?;
        let (a, b) = (read_matrix(dim, a, "a")?, read_matrix(dim, b, "b")?);
        *out = lift(commbound::lab::commutator_norm(&a, &b))?;
        Ok(())
    })
}

/// Checks `samples` random (H, A) pairs against the default γ₀, alternating uniform
/// and atomic spectra. Writes the smallest margin `bound − measured`; on a
/// violation returns [`CbStatus::Violation`] and writes the offending margin.
///
/// # Safety
/// `min_margin` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_validate_sqrt(
    samples: u64,
    dim_min: usize,
    dim_max: usize,
    seed: u64,
    min_margin: *mut f64,
) -> CbStatus {
    guard(|| {
        non_null(min_margin, "min_margin")?;
        let spec = lift(SweepSpec::new(samples, dim_min, dim_max, seed))?
            .with_spectrum_modes(vec![SpectrumMode::Uniform, SpectrumMode::Atoms]);
        let curve = lift(gamma0(
            commbound::positive::DEFAULT_PEDERSEN_DEGREE,
            commbound::positive::DEFAULT_TANGENT_GRID,
        ))?;
        match sample_sweep(&spec, &Target::Unit(UnitFunction::sqrt()), &curve) {
            Ok(o) => {
                *min_margin = o.min_margin;
                Ok(())
            }
            Err(e) => {
                if let Error::Violation { margin, .. } = &e {
                    *min_margin = *margin;
                }
                Err((status_of(&e), e.to_string()))
            }
        }
    })
}
