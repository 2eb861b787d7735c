//! C ABI over `tjcm`.
//!
//! Every fallible call returns a [`TjcmStatus`]; on failure a human-readable
//! message is kept per thread and can be read with [`tjcm_last_error`].
//! Models are opaque heap handles created by [`tjcm_model_new`] and released
//! with [`tjcm_model_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tjcm::observables::bloch;
use tjcm::scan::uniform_grid;
use tjcm::{run_verify, AtomId, Dynamics, Error, ModelParams, ReducedAtomState, ScanConfig, SqueezeReport, VerifyOptions};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TjcmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    BufferTooSmall = 4,
    ResourceLimit = 5,
    Io = 6,
    Panic = 7,
}

/// Opaque model handle.
pub struct TjcmModel {
    dynamics: Dynamics,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TjcmReducedState {
    pub p_plus: f64,
    pub p_minus: f64,
    pub coh_re: f64,
    pub coh_im: f64,
}

/// Single-atom diagnostics at one time.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TjcmObservables {
    pub time: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub e_x: f64,
    pub e_y: f64,
    pub f_x: f64,
    pub f_y: f64,
    pub gamma: f64,
    pub eur_residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TjcmVerifyReport {
    pub samples: usize,
    pub oracle_dim: usize,
    pub max_deviation: f64,
    pub max_eur_violation: f64,
    pub max_norm_drift: f64,
    pub passed: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

fn status_of(err: &Error) -> TjcmStatus {
    match err {
        Error::InvalidParameter(_)
        | Error::InvalidMean(_)
        | Error::NotApplicable(_)
        | Error::PhotonCutoffTooSmall { .. }
        | Error::UnknownChannel { .. }
        | Error::Parse(_) => TjcmStatus::InvalidArgument,
        Error::NotSymmetric { .. }
        | Error::Inconsistent(_)
        | Error::TruncationTooCoarse { .. }
        | Error::StepSizeTooLarge { .. } => TjcmStatus::Numerical,
        Error::ResourceLimit { .. } => TjcmStatus::ResourceLimit,
        Error::Csv(_) | Error::Io(_) => TjcmStatus::Io,
    }
}

/// Runs `body`, turning errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), TjcmStatus>) -> TjcmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            TjcmStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("internal panic");
            TjcmStatus::Panic
        }
    }
}

fn fail(err: Error) -> TjcmStatus {
    set_last_error(err.to_string());
    status_of(&err)
}

fn null(what: &str) -> TjcmStatus {
    set_last_error(format!("`{what}` is null"));
    TjcmStatus::NullPointer
}

fn atom_of(atom: u32) -> Result<AtomId, TjcmStatus> {
    match atom {
        0 => Ok(AtomId::First),
        1 => Ok(AtomId::Second),
        _ => {
            set_last_error(format!("atom index must be 0 or 1, got {atom}"));
            Err(TjcmStatus::InvalidArgument)
        }
    }
}

fn observables(state: &ReducedAtomState, time: f64) -> TjcmObservables {
    let b = bloch(state);
    let r = SqueezeReport::new(state);
    TjcmObservables {
        time,
        sx: b.sx,
        sy: b.sy,
        sz: b.sz,
        e_x: r.e_x,
        e_y: r.e_y,
        f_x: r.f_x,
        f_y: r.f_y,
        gamma: r.gamma,
        eur_residual: r.h_x + r.h_y + r.h_z - 4f64.ln(),
    }
}

/// Creates a model for initial field amplitude `alpha`, coupling ratio `g`,
/// `l`-photon transitions and Fock tail mass `cutoff_eps`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn tjcm_model_new(
    alpha: f64,
    g: f64,
    l: u32,
    cutoff_eps: f64,
    out: *mut *mut TjcmModel,
) -> TjcmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let params = ModelParams::with_cutoff(alpha, g, l, cutoff_eps).map_err(fail)?;
        let dynamics = Dynamics::new(params).map_err(fail)?;
        *out = Box::into_raw(Box::new(TjcmModel { dynamics }));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from [`tjcm_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tjcm_model_free(model: *mut TjcmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Largest photon number kept by the truncation.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tjcm_model_n_max(model: *const TjcmModel, out: *mut usize) -> TjcmStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = model.dynamics.params().n_max;
        Ok(())
    })
}

/// Reduced density matrix of `atom` (0 or 1) at scaled time `time`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tjcm_model_reduced_state(
    model: *const TjcmModel,
    time: f64,
    atom: u32,
    out: *mut TjcmReducedState,
) -> TjcmStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = model.dynamics.reduced_state(time, atom_of(atom)?).map_err(fail)?;
        *out = TjcmReducedState {
            p_plus: s.p_plus,
            p_minus: s.p_minus,
            coh_re: s.coh.re,
            coh_im: s.coh.im,
        };
        Ok(())
    })
}

/// Diagnostics of `atom` at each of `len` caller-supplied times.
///
/// # Safety
/// `model` must be a live handle; `times` must be readable and `out`
/// writable for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn tjcm_model_observables(
    model: *const TjcmModel,
    times: *const f64,
    len: usize,
    atom: u32,
    out: *mut TjcmObservables,
) -> TjcmStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        if len == 0 {
            return Ok(());
        }
        if times.is_null() {
            return Err(null("times"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let atom = atom_of(atom)?;
        let times = std::slice::from_raw_parts(times, len);
        let out = std::slice::from_raw_parts_mut(out, len);
        for (slot, &t) in out.iter_mut().zip(times) {
            let s = model.dynamics.reduced_state(t, atom).map_err(fail)?;
            *slot = observables(&s, t);
        }
        Ok(())
    })
}

/// Diagnostics of `atom` on the uniform grid of `steps` points over
/// `[0, t_max]`. `capacity` is the length of `out`; on
/// [`TjcmStatus::BufferTooSmall`] nothing is written.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable for `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn tjcm_model_scan(
    model: *const TjcmModel,
    t_max: f64,
    steps: usize,
    atom: u32,
    out: *mut TjcmObservables,
    capacity: usize,
) -> TjcmStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        let cfg = ScanConfig::new(*model.dynamics.params(), t_max, steps, Vec::new()).map_err(fail)?;
        if capacity < cfg.steps {
            set_last_error(format!("buffer holds {capacity} entries, {} needed", cfg.steps));
            return Err(TjcmStatus::BufferTooSmall);
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let atom = atom_of(atom)?;
        let grid = uniform_grid(t_max, steps);
        let out = std::slice::from_raw_parts_mut(out, grid.len());
        for (slot, &t) in out.iter_mut().zip(&grid) {
            let s = model.dynamics.reduced_state(t, atom).map_err(fail)?;
            *slot = observables(&s, t);
        }
        Ok(())
    })
}

/// Cross-checks the model against the brute-force integrator at `samples`
/// random points of the `steps`-point grid over `[0, t_max]`. A failed
/// comparison still returns [`TjcmStatus::Ok`] with `passed = false`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tjcm_model_verify(
    model: *const TjcmModel,
    t_max: f64,
    steps: usize,
    samples: usize,
    max_dim: usize,
    seed: u64,
    out: *mut TjcmVerifyReport,
) -> TjcmStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let cfg = ScanConfig::new(*model.dynamics.params(), t_max, steps, Vec::new()).map_err(fail)?;
        let opts = VerifyOptions {
            max_dim,
            seed,
            inject_fault: false,
        };
        let r = run_verify(&cfg, samples, &opts).map_err(fail)?;
        *out = TjcmVerifyReport {
            samples: r.samples,
            oracle_dim: r.oracle_dim,
            max_deviation: r.max_deviation,
            max_eur_violation: r.max_eur_violation,
            max_norm_drift: r.max_norm_drift,
            passed: r.passed(),
        };
        Ok(())
    })
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tjcm_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn tjcm_status_str(status: i32) -> *const c_char {
    let s: &'static std::ffi::CStr = match status {
        0 => c"ok",
        1 => c"null pointer argument",
        2 => c"invalid argument",
        3 => c"numerical consistency check failed",
        4 => c"output buffer too small",
        5 => c"resource limit exceeded",
        6 => c"i/o error",
        7 => c"internal panic",
        _ => c"unknown status",
    };
    s.as_ptr()
}
