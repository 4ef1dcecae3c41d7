//! C ABI over `htdt-core`.
//!
//! Every fallible function returns an [`HtdtStatus`] and writes its result
//! through an out-pointer. On failure a message is available from
//! [`htdt_last_error_message`] on the same thread. States are opaque
//! handles released with [`htdt_state_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use htdt_core::fidelity::{avg_fidelity, fidelity_an, CodebookSpec};
use htdt_core::gaussian::{
    apply_map, log_negativity, resource_to_state, ChannelSpec, GaussianState, ResourceTriplet,
};
use htdt_core::protocol::{self, added_noise, noise_qt, optimize_d};
use htdt_core::Error;
use nalgebra::{DMatrix, DVector};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HtdtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Unphysical = 4,
    NotCompletelyPositive = 5,
    Numerical = 6,
    Panic = 7,
}

impl From<&Error> for HtdtStatus {
    fn from(err: &Error) -> Self {
        match err {
            Error::DimensionMismatch { .. }
            | Error::ModeCount { .. }
            | Error::InvalidMode { .. }
            | Error::EmptySelection => HtdtStatus::DimensionMismatch,
            Error::NotSymmetric { .. } | Error::UnphysicalResource(_) => HtdtStatus::Unphysical,
            Error::NotCompletelyPositive(_) => HtdtStatus::NotCompletelyPositive,
            Error::InvalidParameter(_) => HtdtStatus::InvalidArgument,
            Error::Eigen => HtdtStatus::Numerical,
        }
    }
}

/// Opaque Gaussian state.
pub struct HtdtState {
    inner: GaussianState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), (HtdtStatus, String)>) -> HtdtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HtdtStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HtdtStatus::Panic
        }
    }
}

fn lift<T>(r: htdt_core::Result<T>) -> Result<T, (HtdtStatus, String)> {
    r.map_err(|e| (HtdtStatus::from(&e), e.to_string()))
}

fn null(name: &str) -> (HtdtStatus, String) {
    (HtdtStatus::NullPointer, format!("{name} is null"))
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn htdt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

fn boxed(state: GaussianState, out: *mut *mut HtdtState) {
    // SAFETY: callers check `out` for null first.
    unsafe { *out = Box::into_raw(Box::new(HtdtState { inner: state })) };
}

/// Vacuum state on `modes` modes.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn htdt_state_vacuum(modes: usize, out: *mut *mut HtdtState) -> HtdtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if modes == 0 {
            return Err((HtdtStatus::InvalidArgument, "modes must be >= 1".into()));
        }
        boxed(GaussianState::vacuum(modes), out);
        Ok(())
    })
}

/// State from `2 modes` first moments and a row-major `2 modes × 2 modes`
/// covariance matrix.
///
/// # Safety
/// `mean` must point to `2 * modes` doubles, `cov` to `4 * modes * modes`
/// doubles, and `out` to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn htdt_state_new(
    modes: usize,
    mean: *const f64,
    cov: *const f64,
    out: *mut *mut HtdtState,
) -> HtdtStatus {
    guard(|| {
        if mean.is_null() || cov.is_null() || out.is_null() {
            return Err(null("mean, cov or out"));
        }
        if modes == 0 {
            return Err((HtdtStatus::InvalidArgument, "modes must be >= 1".into()));
        }
        let n = 2 * modes;
        let mean = std::slice::from_raw_parts(mean, n);
        let cov = std::slice::from_raw_parts(cov, n * n);
        let state = lift(GaussianState::new(
            DVector::from_column_slice(mean),
            DMatrix::from_row_slice(n, n, cov),
        ))?;
        boxed(state, out);
        Ok(())
    })
}

/// Two-mode resource state with covariance `[[a I, c σz], [c σz, b I]]`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn htdt_state_resource(
    a: f64,
    b: f64,
    c: f64,
    out: *mut *mut HtdtState,
) -> HtdtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let state = lift(ResourceTriplet::new(a, b, c).and_then(|t| resource_to_state(&t)))?;
        boxed(state, out);
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `state` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn htdt_state_free(state: *mut HtdtState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of modes, or 0 for NULL.
///
/// # Safety
/// `state` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn htdt_state_modes(state: *const HtdtState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.modes())
}

/// Copies the first moments into `out` (`2 modes` doubles).
///
/// # Safety
/// `state` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn htdt_state_first_moments(
    state: *const HtdtState,
    out: *mut f64,
    len: usize,
) -> HtdtStatus {
    guard(|| {
        let state = state.as_ref().ok_or_else(|| null("state"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = state.inner.first_moments();
        if len != v.len() {
            return Err((
                HtdtStatus::DimensionMismatch,
                format!("expected {} values, got {len}", v.len()),
            ));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(v.as_slice());
        Ok(())
    })
}

/// Copies the covariance matrix row-major into `out` (`4 modes²` doubles).
///
/// # Safety
/// `state` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn htdt_state_covariance(
    state: *const HtdtState,
    out: *mut f64,
    len: usize,
) -> HtdtStatus {
    guard(|| {
        let state = state.as_ref().ok_or_else(|| null("state"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cov = state.inner.covariance();
        let n = cov.nrows();
        if len != n * n {
            return Err((
                HtdtStatus::DimensionMismatch,
                format!("expected {} values, got {len}", n * n),
            ));
        }
        let out = std::slice::from_raw_parts_mut(out, len);
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = cov[(i, j)];
            }
        }
        Ok(())
    })
}

/// Applies the phase-insensitive channel `(x, y)` to mode `mode` and returns
/// the result as a new handle.
///
/// # Safety
/// `state` must be a live handle and `out` writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn htdt_state_apply_channel(
    state: *const HtdtState,
    mode: usize,
    x: f64,
    y: f64,
    out: *mut *mut HtdtState,
) -> HtdtStatus {
    guard(|| {
        let state = state.as_ref().ok_or_else(|| null("state"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let channel = lift(ChannelSpec::new(x, y))?;
        let map = lift(channel.to_map().embed(&[mode], state.inner.modes()))?;
        boxed(lift(apply_map(&map, &state.inner))?, out);
        Ok(())
    })
}

/// Logarithmic negativity of a two-mode state.
///
/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htdt_state_log_negativity(
    state: *const HtdtState,
    out: *mut f64,
) -> HtdtStatus {
    guard(|| {
        let state = state.as_ref().ok_or_else(|| null("state"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lift(log_negativity(&state.inner))?;
        Ok(())
    })
}

fn inputs(
    a: f64,
    b: f64,
    c: f64,
    x: f64,
    y: f64,
) -> Result<(ResourceTriplet, ChannelSpec), (HtdtStatus, String)> {
    Ok((
        lift(ResourceTriplet::new(a, b, c))?,
        lift(ChannelSpec::new(x, y))?,
    ))
}

/// Added noise of the analog protocol.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn htdt_added_noise(
    a: f64,
    b: f64,
    c: f64,
    x: f64,
    y: f64,
    g: f64,
    d: f64,
    out: *mut f64,
) -> HtdtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (t, ch) = inputs(a, b, c, x, y)?;
        *out = lift(added_noise(&t, &ch, g, d))?;
        Ok(())
    })
}

/// Teleportation noise `g a + b - 2 √g c`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htdt_noise_qt(
    a: f64,
    b: f64,
    c: f64,
    g: f64,
    out: *mut f64,
) -> HtdtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if !(g > 0.0 && g.is_finite()) {
            return Err((
                HtdtStatus::InvalidArgument,
                format!("gain g = {g} must be > 0"),
            ));
        }
        *out = noise_qt(&lift(ResourceTriplet::new(a, b, c))?, g);
        Ok(())
    })
}

/// Minimizes the added noise over `d ∈ [max{g/x, 1}, d_max]`.
///
/// # Safety
/// `out_d` and `out_noise` must be valid pointers.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn htdt_optimize_d(
    a: f64,
    b: f64,
    c: f64,
    x: f64,
    y: f64,
    g: f64,
    d_max: f64,
    out_d: *mut f64,
    out_noise: *mut f64,
) -> HtdtStatus {
    guard(|| {
        if out_d.is_null() || out_noise.is_null() {
            return Err(null("out_d or out_noise"));
        }
        let (t, ch) = inputs(a, b, c, x, y)?;
        let opt = lift(optimize_d(&t, &ch, g, d_max))?;
        *out_d = opt.d;
        *out_noise = opt.noise;
        Ok(())
    })
}

/// Codebook-averaged fidelity of the channel `(g, noise)`; `lambda = 0` is
/// the uniform codebook.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htdt_avg_fidelity(
    g: f64,
    noise: f64,
    lambda: f64,
    out: *mut f64,
) -> HtdtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lift(CodebookSpec::new(lambda).and_then(|cb| avg_fidelity(g, noise, cb)))?;
        Ok(())
    })
}

/// Optimized analog fidelity over the attenuator of transmissivity `x`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htdt_fidelity_an(r: f64, x: f64, out: *mut f64) -> HtdtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lift(fidelity_an(r, x))?;
        Ok(())
    })
}

/// Whether a finite encoding gain beats teleportation at log-negativity
/// `2r` over the channel `(x, y)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn htdt_beats_teleportation(
    r: f64,
    x: f64,
    y: f64,
    out: *mut bool,
) -> HtdtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err((HtdtStatus::InvalidArgument, format!("r = {r} must be >= 0")));
        }
        *out = protocol::htdt_beats_teleportation(r, &lift(ChannelSpec::new(x, y))?);
        Ok(())
    })
}
