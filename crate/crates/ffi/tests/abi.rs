use std::ffi::{CStr, CString};
use std::ptr;

use halfwave_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(hw_last_error()) }.to_string_lossy().into_owned()
}

fn grid(dim: usize, n: usize, l: f64) -> *mut HwGrid {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { hw_grid_new(dim, n, l, &mut g) }, HwStatus::Ok);
    g
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(hw_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn invalid_grid_sets_error() {
    let mut g = ptr::null_mut();
    let status = unsafe { hw_grid_new(1, 100, 1.0, &mut g) };
    assert_eq!(status, HwStatus::InvalidArgument);
    assert!(g.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { hw_grid_new(1, 64, 1.0, ptr::null_mut()) }, HwStatus::NullPointer);
}

#[test]
fn field_round_trip_through_buffers_and_files() {
    let g = grid(1, 16, 2.0);
    let len = unsafe { hw_grid_len(g) };
    assert_eq!(len, 16);
    let values: Vec<f64> = (0..2 * len).map(|i| i as f64 * 0.25).collect();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { hw_field_new(g, values.as_ptr(), len, &mut f) }, HwStatus::Ok);
    assert_eq!(unsafe { hw_field_len(f) }, len);

    let mut back = vec![0.0; 2 * len];
    assert_eq!(unsafe { hw_field_values(f, back.as_mut_ptr(), len) }, HwStatus::Ok);
    assert_eq!(back, values);
    assert_eq!(unsafe { hw_field_values(f, back.as_mut_ptr(), len - 1) }, HwStatus::InvalidArgument);

    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("f.hwf").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { hw_field_write(f, path.as_ptr()) }, HwStatus::Ok);
    let mut read = ptr::null_mut();
    assert_eq!(unsafe { hw_field_read(path.as_ptr(), &mut read) }, HwStatus::Ok);
    let mut again = vec![0.0; 2 * len];
    assert_eq!(unsafe { hw_field_values(read, again.as_mut_ptr(), len) }, HwStatus::Ok);
    assert_eq!(again, values);

    let missing = CString::new(dir.path().join("nope.hwf").to_str().unwrap()).unwrap();
    let mut none = ptr::null_mut();
    assert_eq!(unsafe { hw_field_read(missing.as_ptr(), &mut none) }, HwStatus::Io);

    unsafe {
        hw_field_free(read);
        hw_field_free(f);
        hw_grid_free(g);
        // null handles are ignored
        hw_field_free(ptr::null_mut());
        hw_grid_free(ptr::null_mut());
        hw_profile_free(ptr::null_mut());
    }
}

#[test]
fn explicit_profile_through_the_abi() {
    let g = grid(1, 4096, 200.0 * std::f64::consts::PI);
    let v = [0.0];
    let mut profile = ptr::null_mut();
    let opts = hw_solver_options_default();
    assert_eq!(unsafe { hw_solve_profile(g, 2.0, v.as_ptr(), 1, &opts, &mut profile) }, HwStatus::Ok);
    let mut d = HwProfileDiagnostics::default();
    assert_eq!(unsafe { hw_profile_diagnostics(profile, &mut d) }, HwStatus::Ok);
    assert!(d.converged);
    assert!(!d.critical);
    assert!(d.el_residual <= 1e-10);
    assert!((d.mass / (2.0 * std::f64::consts::PI) - 1.0).abs() < 1e-3);
    assert!((d.weinstein_value - 1.5 / std::f64::consts::PI.sqrt()).abs() < 1e-3);

    let mut field = ptr::null_mut();
    assert_eq!(unsafe { hw_profile_field(profile, &mut field) }, HwStatus::Ok);
    let mut t = 0.0;
    assert_eq!(unsafe { hw_quadratic_form_t(field, v.as_ptr(), 1, &mut t) }, HwStatus::Ok);
    assert!((t - d.t_v).abs() < 1e-12);
    let mut w = 0.0;
    assert_eq!(unsafe { hw_weinstein(field, v.as_ptr(), 1, 2.0, &mut w) }, HwStatus::Ok);
    assert!((w - d.weinstein_value).abs() < 1e-12);

    let mut report = HwIdentityReport::default();
    assert_eq!(unsafe { hw_identity_report(field, 2.0, v.as_ptr(), 1, 0.0, &mut report) }, HwStatus::Ok);
    assert_eq!(report.dim, 1);
    assert!(report.virial_residuals[0] < 1e-12);
    assert_eq!(report.virial_residuals[1], 0.0);

    // a converged profile is a fixed point of the resolvent map
    let mut resolved = ptr::null_mut();
    assert_eq!(unsafe { hw_resolvent_apply(field, v.as_ptr(), 1, &mut resolved) }, HwStatus::Ok);

    let mut evolved = ptr::null_mut();
    let (mut md, mut ed) = (0.0, 0.0);
    assert_eq!(unsafe { hw_evolve(field, 2.0, 0.01, 0.5, &mut evolved, &mut md, &mut ed) }, HwStatus::Ok);
    assert!(md < 1e-10);

    unsafe {
        hw_field_free(evolved);
        hw_field_free(resolved);
        hw_field_free(field);
        hw_profile_free(profile);
        hw_grid_free(g);
    }
}

#[test]
fn supersonic_solve_is_rejected() {
    let g = grid(1, 64, 10.0);
    let v = [1.5];
    let mut profile = ptr::null_mut();
    let status = unsafe { hw_solve_profile(g, 3.0, v.as_ptr(), 1, ptr::null(), &mut profile) };
    assert_eq!(status, HwStatus::Supersonic);
    assert!(profile.is_null());
    assert!(last_error().contains("1.5"));
    unsafe { hw_grid_free(g) };
}

#[test]
fn kernel_at_rest_is_real() {
    let (x, v) = ([3.0], [0.0]);
    let (mut re, mut im, mut err) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { hw_kernel_eval(x.as_ptr(), v.as_ptr(), 1, &mut re, &mut im, &mut err) }, HwStatus::Ok);
    assert!(re > 0.0);
    assert!(im.abs() < 1e-12);
    let origin = [0.0];
    let status = unsafe { hw_kernel_eval(origin.as_ptr(), v.as_ptr(), 1, &mut re, &mut im, ptr::null_mut()) };
    assert_eq!(status, HwStatus::InvalidArgument);
}
