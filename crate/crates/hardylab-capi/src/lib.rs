//! C ABI for the hardylab library: opaque handles, integer status codes, a
//! thread-local last-error message. The header `include/hardylab.h` is
//! generated by cbindgen at build time.
//!
//! Conventions:
//! - Every constructor writes through an out-pointer and returns
//!   [`HlStatus`]; on failure the out-pointer is nulled and the message is
//!   retrievable via [`hl_last_error`].
//! - Typed mathematical outcomes (a subordination lift that fails to be a
//!   self-map, an undetermined membership verdict) are *success* at the ABI
//!   level and are reported through result codes, mirroring the CLI's
//!   stance that refusals are findings, not crashes.
//! - Handles are freed with their `_free` function; passing NULL to a free
//!   is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hardylab::operators::{toeplitz_matrix, weighted_composition_matrix, OperatorMatrix};
use hardylab::series::PowerSeries;
use hardylab::spectra::{
    ee_membership, subordination_solve, EeOptions, EeStatus, SubordinationFailure,
    SubordinationOutcome,
};
use hardylab::symbol::SymbolSpec;
use hardylab::Complex64;

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum HlStatus {
    /// Success.
    Ok = 0,
    /// Malformed input (bad spec text, bad parameters).
    Usage = 1,
    /// A precondition of the operation was rejected (not a self-map, not
    /// inner, empty valid block, …).
    Math = 2,
    /// A required pointer was NULL.
    NullPointer = 3,
    /// Internal panic captured at the boundary.
    Panic = 4,
}

/// Opaque symbol specification φ, ψ, ω, h.
pub struct HlSymbol {
    inner: SymbolSpec,
}

/// Opaque truncated power series.
pub struct HlSeries {
    inner: PowerSeries,
}

/// Opaque operator matrix on truncated H².
pub struct HlOperator {
    inner: OperatorMatrix,
}

/// Extended-eigenvalue verdicts.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum HlEeStatus {
    In = 0,
    Out = 1,
    Undetermined = 2,
}

/// Typed subordination outcomes (`Found` means a lift was produced).
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum HlLiftOutcome {
    Found = 0,
    NoRoot = 1,
    CriticalPoint = 2,
    BranchCutHit = 3,
    NotSelfMap = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg.into());
}

fn status_of(e: &hardylab::Error) -> HlStatus {
    use hardylab::Error::*;
    match e {
        Json(_) | Io(_) => HlStatus::Usage,
        Invalid(_) => HlStatus::Usage,
        _ => HlStatus::Math,
    }
}

fn guard<T>(out: *mut T, f: impl FnOnce() -> Result<T, HlStatus>) -> HlStatus {
    if out.is_null() {
        set_error("output pointer is NULL");
        return HlStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(value)) => {
            unsafe { out.write(value) };
            HlStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            HlStatus::Panic
        }
    }
}

unsafe fn parse_cstr<'a>(ptr: *const c_char) -> Result<&'a str, HlStatus> {
    if ptr.is_null() {
        set_error("input string is NULL");
        return Err(HlStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("input string is not UTF-8");
        HlStatus::Usage
    })
}

/// Copy the thread-local message for the most recent failure into `buf`
/// (NUL-terminated, truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must point to at least `len` writable bytes, or be NULL (then only
/// the length is returned).
#[no_mangle]
pub unsafe extern "C" fn hl_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Parse a symbol from shorthand (`z`, `z2z`, `unit_singular`, `z+1`, …) or
/// the JSON schema `{"tag": …}` with complex numbers as `[re, im]`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_symbol_parse(
    text: *const c_char,
    out: *mut *mut HlSymbol,
) -> HlStatus {
    guard(out, || {
        let text = parse_cstr(text)?;
        match SymbolSpec::parse_arg(text) {
            Ok(inner) => Ok(Box::into_raw(Box::new(HlSymbol { inner }))),
            Err(e) => {
                set_error(e.to_string());
                Err(HlStatus::Usage)
            }
        }
    })
}

/// # Safety
/// `sym` must come from `hl_symbol_parse` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hl_symbol_free(sym: *mut HlSymbol) {
    if !sym.is_null() {
        drop(Box::from_raw(sym));
    }
}

/// Closed-form evaluation at a point of the open disc.
///
/// # Safety
/// `sym` must be a live handle; `out_re`/`out_im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hl_symbol_eval(
    sym: *const HlSymbol,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HlStatus {
    if sym.is_null() || out_re.is_null() || out_im.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    match (*sym).inner.evaluate(Complex64::new(re, im)) {
        Ok(v) => {
            *out_re = v.re;
            *out_im = v.im;
            HlStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Sampled sup-norm estimate (a lower bound for ‖f‖_∞).
///
/// # Safety
/// `sym` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_symbol_sup_norm(
    sym: *const HlSymbol,
    mesh: usize,
    out: *mut f64,
) -> HlStatus {
    if sym.is_null() {
        set_error("NULL symbol");
        return HlStatus::NullPointer;
    }
    guard(out, || Ok((*sym).inner.sup_norm_estimate(mesh.max(8), 1e-6).value))
}

/// First N Taylor coefficients of the symbol.
///
/// # Safety
/// `sym` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_symbol_to_series(
    sym: *const HlSymbol,
    n: usize,
    out: *mut *mut HlSeries,
) -> HlStatus {
    if sym.is_null() {
        set_error("NULL symbol");
        return HlStatus::NullPointer;
    }
    guard(out, || match (*sym).inner.to_series(n) {
        Ok(inner) => Ok(Box::into_raw(Box::new(HlSeries { inner }))),
        Err(e) => {
            set_error(e.to_string());
            Err(status_of(&e))
        }
    })
}

/// # Safety
/// `series` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hl_series_free(series: *mut HlSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Window length (truncation N).
///
/// # Safety
/// `series` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_series_len(series: *const HlSeries) -> usize {
    if series.is_null() {
        return 0;
    }
    (*series).inner.truncation()
}

/// Coefficient k of the series (zero past the window).
///
/// # Safety
/// `series` must be a live handle; `out_re`/`out_im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_series_coeff(
    series: *const HlSeries,
    k: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HlStatus {
    if series.is_null() || out_re.is_null() || out_im.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    let c = (*series).inner.coeff(k);
    *out_re = c.re;
    *out_im = c.im;
    HlStatus::Ok
}

/// Lower-triangular Toeplitz matrix T_φ at truncation N.
///
/// # Safety
/// `sym` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_toeplitz_new(
    sym: *const HlSymbol,
    n: usize,
    out: *mut *mut HlOperator,
) -> HlStatus {
    if sym.is_null() {
        set_error("NULL symbol");
        return HlStatus::NullPointer;
    }
    guard(out, || {
        let series = (*sym).inner.to_series(n).map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })?;
        match toeplitz_matrix(&series, n) {
            Ok(inner) => Ok(Box::into_raw(Box::new(HlOperator { inner }))),
            Err(e) => {
                set_error(e.to_string());
                Err(status_of(&e))
            }
        }
    })
}

/// Weighted composition matrix C_{ω,h} at truncation N (ω must certify as a
/// self-map unless ω(0) = 0; h must not vanish identically).
///
/// # Safety
/// `omega` and `weight` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_weighted_comp_new(
    omega: *const HlSymbol,
    weight: *const HlSymbol,
    n: usize,
    out: *mut *mut HlOperator,
) -> HlStatus {
    if omega.is_null() || weight.is_null() {
        set_error("NULL symbol");
        return HlStatus::NullPointer;
    }
    guard(out, || {
        let build = || -> hardylab::Result<OperatorMatrix> {
            let om = (*omega).inner.to_series(n)?;
            let wt = (*weight).inner.to_series(n)?;
            weighted_composition_matrix(&om, &wt, n)
        };
        match build() {
            Ok(inner) => Ok(Box::into_raw(Box::new(HlOperator { inner }))),
            Err(e) => {
                set_error(e.to_string());
                Err(status_of(&e))
            }
        }
    })
}

/// # Safety
/// `op` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hl_operator_free(op: *mut HlOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Leading column count that truncation provably did not disturb.
///
/// # Safety
/// `op` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_operator_valid_block(op: *const HlOperator) -> usize {
    if op.is_null() {
        return 0;
    }
    (*op).inner.valid_block
}

/// Largest singular value by power iteration; `converged` reports whether
/// the tolerance was met before the iteration cap (the value is a lower
/// bound either way).
///
/// # Safety
/// `op` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_operator_norm(
    op: *const HlOperator,
    out_value: *mut f64,
    out_converged: *mut i32,
) -> HlStatus {
    if op.is_null() || out_value.is_null() || out_converged.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    let est = (*op).inner.operator_norm();
    *out_value = est.value;
    *out_converged = est.converged as i32;
    HlStatus::Ok
}

/// Residual of XT_φ − T_ψX on the valid block, with the relative form
/// residual / (‖X‖·max(‖T_φ‖, ‖T_ψ‖)).
///
/// # Safety
/// All handles must be live; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_intertwine_residual(
    x: *const HlOperator,
    phi: *const HlSymbol,
    psi: *const HlSymbol,
    out_residual: *mut f64,
    out_relative: *mut f64,
) -> HlStatus {
    if x.is_null() || phi.is_null() || psi.is_null() || out_residual.is_null() || out_relative.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    let n = (*x).inner.truncation;
    let run = || -> hardylab::Result<(f64, f64)> {
        let phi_series = (*phi).inner.to_series(n)?;
        let psi_series = (*psi).inner.to_series(n)?;
        let rep = hardylab::intertwine::intertwine_residual(&(*x).inner, &phi_series, &psi_series)?;
        Ok((rep.residual, rep.relative_residual))
    };
    match catch_unwind(AssertUnwindSafe(run)) {
        Ok(Ok((r, rel))) => {
            *out_residual = r;
            *out_relative = rel;
            HlStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            HlStatus::Panic
        }
    }
}

/// Extended-eigenvalue membership verdict for λ against T_φ.
///
/// # Safety
/// `phi` must be a live handle; `out_status` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_ee_membership(
    phi: *const HlSymbol,
    lambda_re: f64,
    lambda_im: f64,
    out_status: *mut HlEeStatus,
) -> HlStatus {
    if phi.is_null() {
        set_error("NULL symbol");
        return HlStatus::NullPointer;
    }
    guard(out_status, || {
        match ee_membership(
            &(*phi).inner,
            Complex64::new(lambda_re, lambda_im),
            EeOptions::default(),
        ) {
            Ok(verdict) => Ok(match verdict.status {
                EeStatus::In => HlEeStatus::In,
                EeStatus::Out => HlEeStatus::Out,
                EeStatus::Undetermined => HlEeStatus::Undetermined,
            }),
            Err(e) => {
                set_error(e.to_string());
                Err(status_of(&e))
            }
        }
    })
}

/// Solve φ∘ω = ψ for a holomorphic self-map ω at truncation N.
///
/// On success `*out_outcome` is `FOUND` and `*out_omega` holds the lift
/// series; on a typed refusal the outcome code says why and `*out_omega` is
/// NULL — both are `HL_STATUS_OK` at the ABI level.
///
/// # Safety
/// `phi` and `psi` must be live handles; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_subordination_solve(
    phi: *const HlSymbol,
    psi: *const HlSymbol,
    n: usize,
    out_omega: *mut *mut HlSeries,
    out_outcome: *mut HlLiftOutcome,
) -> HlStatus {
    if phi.is_null() || psi.is_null() || out_omega.is_null() || out_outcome.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    let run = || subordination_solve(&(*phi).inner, &(*psi).inner, n);
    match catch_unwind(AssertUnwindSafe(run)) {
        Ok(Ok(SubordinationOutcome::Found(result))) => {
            *out_omega = Box::into_raw(Box::new(HlSeries { inner: result.omega_series() }));
            *out_outcome = HlLiftOutcome::Found;
            HlStatus::Ok
        }
        Ok(Ok(SubordinationOutcome::Failed(f))) => {
            *out_omega = std::ptr::null_mut();
            *out_outcome = match f {
                SubordinationFailure::NoRoot => HlLiftOutcome::NoRoot,
                SubordinationFailure::CriticalPoint => HlLiftOutcome::CriticalPoint,
                SubordinationFailure::BranchCutHit => HlLiftOutcome::BranchCutHit,
                SubordinationFailure::NotSelfMap { .. } => HlLiftOutcome::NotSelfMap,
            };
            HlStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            HlStatus::Panic
        }
    }
}

/// Winding-number valence of w against φ(r𝕌): `out_valence` is the preimage
/// count, `out_resolved` is 0 when the point sits in the mesh's unresolved
/// band.
///
/// # Safety
/// `phi` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_valence(
    phi: *const HlSymbol,
    w_re: f64,
    w_im: f64,
    mesh: usize,
    out_valence: *mut u32,
    out_resolved: *mut i32,
    out_margin: *mut f64,
) -> HlStatus {
    if phi.is_null() || out_valence.is_null() || out_resolved.is_null() || out_margin.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    let run = || hardylab::geometry::valence(&(*phi).inner, Complex64::new(w_re, w_im), mesh);
    match catch_unwind(AssertUnwindSafe(run)) {
        Ok(Ok(verdict)) => {
            *out_valence = verdict.valence;
            *out_resolved =
                (verdict.status != hardylab::geometry::PointStatus::BoundaryUnresolved) as i32;
            *out_margin = verdict.margin;
            HlStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            HlStatus::Panic
        }
    }
}

/// Membership in the open cardioid image of z² + z (polar form
/// r < 2cos(θ/3)). Returns 1 for inside.
#[no_mangle]
pub extern "C" fn hl_cardioid_membership(re: f64, im: f64) -> i32 {
    hardylab::geometry::cardioid_membership(Complex64::new(re, im)) as i32
}
