use std::ffi::CStr;
use std::ptr;

use tjcm::{AtomId, Dynamics, ModelParams, SqueezeReport};
use tjcm_ffi::*;

struct Handle(*mut TjcmModel);

impl Handle {
    fn new(alpha: f64, g: f64, l: u32) -> Self {
        let mut raw = ptr::null_mut();
        let status = unsafe { tjcm_model_new(alpha, g, l, 1e-12, &mut raw) };
        assert_eq!(status, TjcmStatus::Ok);
        assert!(!raw.is_null());
        Handle(raw)
    }
}

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { tjcm_model_free(self.0) }
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(tjcm_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn model_lifecycle() {
    let m = Handle::new(5.0, 0.5, 1);
    let mut n_max = 0usize;
    assert_eq!(unsafe { tjcm_model_n_max(m.0, &mut n_max) }, TjcmStatus::Ok);
    assert_eq!(n_max, 95);
    unsafe { tjcm_model_free(ptr::null_mut()) };
}

#[test]
fn invalid_parameters() {
    let mut raw = ptr::null_mut();
    let status = unsafe { tjcm_model_new(-1.0, 0.5, 1, 1e-12, &mut raw) };
    assert_eq!(status, TjcmStatus::InvalidArgument);
    assert!(raw.is_null());
    assert!(!last_error().is_empty());
    let status = unsafe { tjcm_model_new(1.0, 0.5, 1, 1e-12, ptr::null_mut()) };
    assert_eq!(status, TjcmStatus::NullPointer);
}

#[test]
fn reduced_state_matches_library() {
    let m = Handle::new(5.0, 0.5, 2);
    let dynamics = Dynamics::new(ModelParams::new(5.0, 0.5, 2).unwrap()).unwrap();
    for (atom, id) in [(0, AtomId::First), (1, AtomId::Second)] {
        let mut out = TjcmReducedState::default();
        assert_eq!(unsafe { tjcm_model_reduced_state(m.0, 1.7, atom, &mut out) }, TjcmStatus::Ok);
        let s = dynamics.reduced_state(1.7, id).unwrap();
        assert_eq!((out.p_plus, out.p_minus, out.coh_re, out.coh_im), (s.p_plus, s.p_minus, s.coh.re, s.coh.im));
    }
    let mut out = TjcmReducedState::default();
    assert_eq!(unsafe { tjcm_model_reduced_state(m.0, 1.0, 2, &mut out) }, TjcmStatus::InvalidArgument);
    assert!(last_error().contains("atom"));
    assert_eq!(
        unsafe { tjcm_model_reduced_state(ptr::null(), 1.0, 0, &mut out) },
        TjcmStatus::NullPointer
    );
}

#[test]
fn observables_at_times() {
    let m = Handle::new(5.0, 1.0, 1);
    let times = [0.0, 0.5, 8.0];
    let mut out = [TjcmObservables::default(); 3];
    let status = unsafe { tjcm_model_observables(m.0, times.as_ptr(), 3, 0, out.as_mut_ptr()) };
    assert_eq!(status, TjcmStatus::Ok);
    assert!((out[0].sz - 1.0).abs() < 1e-12 && out[0].e_y.abs() < 1e-9);
    let dynamics = Dynamics::new(ModelParams::new(5.0, 1.0, 1).unwrap()).unwrap();
    let r = SqueezeReport::new(&dynamics.reduced_state(8.0, AtomId::First).unwrap());
    assert_eq!(out[2].time, 8.0);
    assert_eq!(out[2].e_y, r.e_y);
    assert_eq!(out[2].gamma, r.gamma);
    assert!(out.iter().all(|o| o.eur_residual >= -1e-10 && o.e_x >= -1e-12));
}

#[test]
fn scan_into_caller_buffer() {
    let m = Handle::new(5.0, 0.5, 1);
    let mut small = vec![TjcmObservables::default(); 10];
    let status = unsafe { tjcm_model_scan(m.0, 5.0, 11, 1, small.as_mut_ptr(), small.len()) };
    assert_eq!(status, TjcmStatus::BufferTooSmall);
    assert!(small.iter().all(|o| *o == TjcmObservables::default()));

    let mut buf = vec![TjcmObservables::default(); 11];
    let status = unsafe { tjcm_model_scan(m.0, 5.0, 11, 1, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(status, TjcmStatus::Ok);
    assert_eq!(last_error(), "");
    assert_eq!(buf[0].time, 0.0);
    assert_eq!(buf[10].time, 5.0);
    assert!((buf[5].time - 2.5).abs() < 1e-15);

    let status = unsafe { tjcm_model_scan(m.0, 5.0, 1, 1, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(status, TjcmStatus::InvalidArgument);
}

#[test]
fn verify_through_c_api() {
    let m = Handle::new(2.0, 0.5, 1);
    let mut report = TjcmVerifyReport::default();
    let status = unsafe { tjcm_model_verify(m.0, 5.0, 500, 12, 20_000, 7, &mut report) };
    assert_eq!(status, TjcmStatus::Ok);
    assert!(report.passed, "{report:?}");
    assert_eq!(report.samples, 12);
    assert!(report.max_deviation < 1e-8);

    let status = unsafe { tjcm_model_verify(m.0, 5.0, 500, 12, 10, 7, &mut report) };
    assert_eq!(status, TjcmStatus::ResourceLimit);
}

#[test]
fn status_strings() {
    let s = |c: i32| unsafe { CStr::from_ptr(tjcm_status_str(c)) }.to_str().unwrap();
    assert_eq!(s(TjcmStatus::Ok as i32), "ok");
    assert_eq!(s(TjcmStatus::BufferTooSmall as i32), "output buffer too small");
    assert_eq!(s(99), "unknown status");
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tjcm.h")).unwrap();
    for symbol in [
        "typedef struct TjcmModel TjcmModel;",
        "TJCM_STATUS_OK = 0",
        "TJCM_STATUS_PANIC = 7",
        "tjcm_model_new(",
        "tjcm_model_free(",
        "tjcm_model_n_max(",
        "tjcm_model_reduced_state(",
        "tjcm_model_observables(",
        "tjcm_model_scan(",
        "tjcm_model_verify(",
        "tjcm_last_error(",
        "tjcm_status_str(",
    ] {
        assert!(header.contains(symbol), "missing {symbol}");
    }
}
