//! C ABI for `gausspm`.
//!
//! States are opaque heap handles created by `gpm_*_new` and released by `gpm_*_free`.
//! Every fallible call returns a `GpmStatus`; on failure a message is available from
//! `gpm_last_error_message` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use gausspm::classify::{classify, Verdict};
use gausspm::negativity::{negative_volume_single_mode, negative_volume_two_mode, McConfig};
use gausspm::qcs::{qcs_gaussian, qcs_photon_tuned};
use gausspm::states::make_sqth_product;
use gausspm::{Error, GaussianState, ModeVector, PhotonTunedState, Sign};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidState = 2,
    InvalidModeVector = 3,
    AnnihilatingSubtraction = 4,
    Domain = 5,
    NotPositiveDefinite = 6,
    DegreeOverflow = 7,
    StepUnderflow = 8,
    NonConvergence = 9,
    Panic = 10,
}

impl From<&Error> for GpmStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidState(_) => GpmStatus::InvalidState,
            Error::InvalidModeVector(_) => GpmStatus::InvalidModeVector,
            Error::AnnihilatingSubtraction { .. } => GpmStatus::AnnihilatingSubtraction,
            Error::Domain(_) => GpmStatus::Domain,
            Error::NotPositiveDefinite => GpmStatus::NotPositiveDefinite,
            Error::DegreeOverflow { .. } => GpmStatus::DegreeOverflow,
            Error::StepUnderflow { .. } => GpmStatus::StepUnderflow,
            Error::NonConvergence { .. } => GpmStatus::NonConvergence,
        }
    }
}

/// Photon operation applied to the mother state.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpmSign {
    Add = 1,
    Subtract = -1,
}

/// Opaque Gaussian state handle.
pub struct GpmGaussianState(GaussianState);

/// Opaque photon-added or photon-subtracted state handle.
pub struct GpmPhotonState(PhotonTunedState);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: GpmStatus, msg: impl Into<String>) -> GpmStatus {
    let c = CString::new(msg.into().replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
    status
}

fn lib_err(e: Error) -> GpmStatus {
    fail(GpmStatus::from(&e), e.to_string())
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), GpmStatus>>(f: F) -> GpmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GpmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(GpmStatus::Panic, "internal panic"),
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), GpmStatus> {
    if p.is_null() {
        Err(fail(GpmStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

/// Message for the most recent failure on this thread, or null if the last call succeeded.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn gpm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn gpm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates an `n`-mode Gaussian state from a row-major `2n×2n` covariance `v` and a
/// length-`2n` displacement `d`, ordered `(x1, p1, x2, p2, ...)`, with vacuum `V = I`.
///
/// # Safety
/// `v` must point to `4n²` doubles, `d` to `2n` doubles, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpm_gaussian_new(
    n: usize,
    v: *const f64,
    d: *const f64,
    out: *mut *mut GpmGaussianState,
) -> GpmStatus {
    guard(|| {
        non_null(v, "v")?;
        non_null(d, "d")?;
        non_null(out, "out")?;
        if n == 0 {
            return Err(fail(GpmStatus::InvalidState, "n must be positive"));
        }
        let dim = 2 * n;
        let vm = DMatrix::from_row_slice(dim, dim, slice::from_raw_parts(v, dim * dim));
        let dv = DVector::from_column_slice(slice::from_raw_parts(d, dim));
        let state = GaussianState::new(vm, dv).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(GpmGaussianState(state)));
        Ok(())
    })
}

/// Creates `n` identical squeezed thermal modes with thermal parameter `q` and squeezing `r`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpm_gaussian_sqth(
    q: f64,
    r: f64,
    n: usize,
    out: *mut *mut GpmGaussianState,
) -> GpmStatus {
    guard(|| {
        non_null(out, "out")?;
        if n == 0 {
            return Err(fail(GpmStatus::InvalidState, "n must be positive"));
        }
        let state = make_sqth_product(q, r, n).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(GpmGaussianState(state)));
        Ok(())
    })
}

/// Releases a Gaussian state. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle from `gpm_gaussian_new`/`gpm_gaussian_sqth` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gpm_gaussian_free(state: *mut GpmGaussianState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of modes of a Gaussian state, or 0 for null.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gpm_gaussian_modes(state: *const GpmGaussianState) -> usize {
    state.as_ref().map_or(0, |s| s.0.n())
}

/// Quadrature coherence scale `C²` of a Gaussian state.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gpm_gaussian_qcs(state: *const GpmGaussianState, out: *mut f64) -> GpmStatus {
    guard(|| {
        non_null(state, "state")?;
        non_null(out, "out")?;
        *out = qcs_gaussian(&(*state).0).qcs_squared;
        Ok(())
    })
}

/// Applies `a†(c)` (`sign = GPM_SIGN_ADD`) or `a(c)` (`sign = GPM_SIGN_SUBTRACT`) to a copy
/// of `mother`.
/// `c_re`/`c_im` hold the `n` components of the mode vector, which is normalized here.
///
/// # Safety
/// `mother` must be a live handle, `c_re`/`c_im` must point to `n` doubles where `n` is the
/// number of modes, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpm_photon_new(
    mother: *const GpmGaussianState,
    sign: i32,
    c_re: *const f64,
    c_im: *const f64,
    out: *mut *mut GpmPhotonState,
) -> GpmStatus {
    guard(|| {
        non_null(mother, "mother")?;
        non_null(c_re, "c_re")?;
        non_null(c_im, "c_im")?;
        non_null(out, "out")?;
        let g = &(*mother).0;
        let n = g.n();
        let re = slice::from_raw_parts(c_re, n);
        let im = slice::from_raw_parts(c_im, n);
        let c: Vec<Complex64> = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let mv = ModeVector::normalized(c).map_err(lib_err)?;
        let sign = match sign {
            s if s == GpmSign::Add as i32 => Sign::Add,
            s if s == GpmSign::Subtract as i32 => Sign::Subtract,
            s => return Err(fail(GpmStatus::Domain, format!("sign must be 1 or -1, got {s}"))),
        };
        let ps = PhotonTunedState::new(g.clone(), sign, mv).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(GpmPhotonState(ps)));
        Ok(())
    })
}

/// Releases a photon-tuned state. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle from `gpm_photon_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gpm_photon_free(state: *mut GpmPhotonState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Characteristic function `χ(z)` at the `n` complex amplitudes `(z_re[k], z_im[k])`.
///
/// # Safety
/// `state` must be a live handle, `z_re`/`z_im` must point to `n` doubles, and
/// `out_re`/`out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpm_photon_char(
    state: *const GpmPhotonState,
    z_re: *const f64,
    z_im: *const f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> GpmStatus {
    guard(|| {
        non_null(state, "state")?;
        non_null(z_re, "z_re")?;
        non_null(z_im, "z_im")?;
        non_null(out_re, "out_re")?;
        non_null(out_im, "out_im")?;
        let ps = &(*state).0;
        let n = ps.n();
        let z: Vec<Complex64> = slice::from_raw_parts(z_re, n)
            .iter()
            .zip(slice::from_raw_parts(z_im, n))
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        let v = ps.char_pm(&z);
        *out_re = v.re;
        *out_im = v.im;
        Ok(())
    })
}

/// Wigner function at the phase-space point `r = (x1, p1, ...)` of length `2n`.
///
/// # Safety
/// `state` must be a live handle, `r` must point to `2n` doubles, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpm_photon_wigner(
    state: *const GpmPhotonState,
    r: *const f64,
    out: *mut f64,
) -> GpmStatus {
    guard(|| {
        non_null(state, "state")?;
        non_null(r, "r")?;
        non_null(out, "out")?;
        let ps = &(*state).0;
        let rv = DVector::from_column_slice(slice::from_raw_parts(r, 2 * ps.n()));
        *out = ps.wigner(&rv);
        Ok(())
    })
}

/// Quadrature coherence scale `C²` of a photon-tuned state.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gpm_photon_qcs(state: *const GpmPhotonState, out: *mut f64) -> GpmStatus {
    guard(|| {
        non_null(state, "state")?;
        non_null(out, "out")?;
        *out = qcs_photon_tuned(&(*state).0).map_err(lib_err)?.qcs_squared;
        Ok(())
    })
}

/// Wigner negative volume. One mode uses deterministic quadrature; two modes use seeded
/// quasi Monte Carlo. `out_error` receives the error estimate and may be null.
///
/// # Safety
/// `state` must be a live handle, `out_volume` writable and `out_error` null or writable.
#[no_mangle]
pub unsafe extern "C" fn gpm_photon_negative_volume(
    state: *const GpmPhotonState,
    seed: u64,
    out_volume: *mut f64,
    out_error: *mut f64,
) -> GpmStatus {
    guard(|| {
        non_null(state, "state")?;
        non_null(out_volume, "out_volume")?;
        let ps = &(*state).0;
        let rep = match ps.n() {
            1 => negative_volume_single_mode(ps),
            2 => negative_volume_two_mode(
                ps,
                &McConfig {
                    seed,
                    ..McConfig::default()
                },
            ),
            n => Err(Error::Domain(format!("negative volume supports 1 or 2 modes, got {n}"))),
        }
        .map_err(lib_err)?;
        *out_volume = rep.volume;
        if !out_error.is_null() {
            *out_error = rep.error_estimate;
        }
        Ok(())
    })
}

/// Wigner-negativity verdict: 1 negative, 0 nonnegative, -1 undecided within tolerance.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gpm_photon_wigner_negative(
    state: *const GpmPhotonState,
    out: *mut i32,
) -> GpmStatus {
    guard(|| {
        non_null(state, "state")?;
        non_null(out, "out")?;
        let rep = classify(&(*state).0).map_err(lib_err)?;
        *out = match rep.wigner_negative {
            Verdict::Negative => 1,
            Verdict::Positive => 0,
            Verdict::Unknown => -1,
        };
        Ok(())
    })
}
