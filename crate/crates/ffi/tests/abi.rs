use std::ffi::CStr;
use std::f64::consts::FRAC_PI_2;
use std::ptr;

use spinwork::bath_kernels::{KernelSet, Preparation, SpectralDensity};
use spinwork::pulse_algebra::{coefficients, rotation_pulse, Axis, PulseUnitary};
use spinwork::work_engine::{work_two_pulse, SystemConfig};
use spinwork_ffi::*;

fn ohmic(gamma: f64, cutoff: f64, temp: f64) -> *mut SbKernelSet {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { sb_kernels_new_ohmic(gamma, cutoff, temp, &mut h) }, SbStatus::Ok);
    assert!(!h.is_null());
    h
}

fn rotation(angle: f64, axis: SbAxis) -> *mut SbPulse {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { sb_pulse_new_rotation(angle, axis, &mut h) }, SbStatus::Ok);
    h
}

fn last_error() -> String {
    let p = sb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn two_pulse_matches_the_library() {
    let k = ohmic(0.2, 1.0, 0.5);
    let (p1, p2) = (rotation(FRAC_PI_2, SbAxis::X), rotation(-FRAC_PI_2, SbAxis::Y));
    let mut w = SbWork::default();
    let status = unsafe { sb_work_two_pulse(k, 1.5, -0.6, p1, p2, 0.8, f64::INFINITY, &mut w) };
    assert_eq!(status, SbStatus::Ok);

    let sys = SystemConfig::new(KernelSet::new(SpectralDensity::ohmic(0.2, 1.0).unwrap(), 0.5).unwrap(), 1.5, -0.6).unwrap();
    let c1 = coefficients(&rotation_pulse(FRAC_PI_2, Axis::X)).unwrap();
    let c2 = coefficients(&rotation_pulse(-FRAC_PI_2, Axis::Y)).unwrap();
    let b = work_two_pulse(&sys, &c1, &c2, 0.8, Preparation::Ergodic).unwrap();
    assert_eq!(w.n_pulses, 2);
    assert_eq!(&w.per_pulse[..2], &b.per_pulse[..]);
    assert_eq!(w.total, b.total);
    assert_eq!(w.spin_part, b.spin_part);
    assert_eq!(w.w, b.w.unwrap());

    let mut finite = SbWork::default();
    assert_eq!(unsafe { sb_work_two_pulse(k, 1.5, -0.6, p1, p2, 0.8, 3.0, &mut finite) }, SbStatus::Ok);
    assert_ne!(finite.total, w.total);

    unsafe {
        sb_pulse_free(p1);
        sb_pulse_free(p2);
        sb_kernels_free(k);
    }
}

#[test]
fn kernel_values_and_discrete_bath() {
    let k = ohmic(0.3, 2.0, 1.0);
    let mut v = SbKernelValues::default();
    assert_eq!(unsafe { sb_kernels_eval(k, 0.0, &mut v) }, SbStatus::Ok);
    assert_eq!((v.xi, v.xi_dot, v.g, v.f), (0.0, 0.0, 0.0, 0.0));
    assert!(v.k > 0.0);
    let mut g_inf = 0.0;
    assert_eq!(unsafe { sb_kernels_g_inf(k, &mut g_inf) }, SbStatus::Ok);
    // G∞ = γΓ for the ohmic density.
    assert!((g_inf - 0.3 * 2.0).abs() < 1e-15);

    assert_eq!(unsafe { sb_kernels_eval(k, -1.0, &mut v) }, SbStatus::Domain);
    assert!(last_error().contains("t must be"));
    unsafe { sb_kernels_free(k) };

    let (g, om) = ([0.4, 0.2], [1.0, 2.5]);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { sb_kernels_new_discrete(g.as_ptr(), om.as_ptr(), 2, 0.7, &mut d) }, SbStatus::Ok);
    assert_eq!(unsafe { sb_kernels_eval(d, 1.3, &mut v) }, SbStatus::Ok);
    assert!(v.xi > 0.0);
    unsafe { sb_kernels_free(d) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { sb_kernels_new_ohmic(-1.0, 1.0, 1.0, &mut k) }, SbStatus::InvalidParameter);
    assert!(k.is_null());
    assert_eq!(unsafe { sb_kernels_new_ohmic(1.0, 1.0, 1.0, ptr::null_mut()) }, SbStatus::NullPointer);
    assert!(last_error().contains("out_handle"));
    assert_eq!(unsafe { sb_kernels_new_discrete(ptr::null(), ptr::null(), 3, 1.0, &mut k) }, SbStatus::NullPointer);

    let k = ohmic(0.1, 1.0, 1.0);
    let p = rotation(1.0, SbAxis::X);
    let mut w = SbWork::default();
    assert_eq!(unsafe { sb_work_two_pulse(k, 1.0, -0.5, p, p, -0.1, f64::INFINITY, &mut w) }, SbStatus::Domain);
    assert_eq!(unsafe { sb_work_two_pulse(k, 1.0, -0.5, p, ptr::null(), 0.1, f64::INFINITY, &mut w) }, SbStatus::NullPointer);
    assert_eq!(unsafe { sb_work_two_pulse(k, 1.0, -0.5, p, p, 0.1, -2.0, &mut w) }, SbStatus::Domain);

    let mut s = 0.0;
    assert_eq!(unsafe { sb_kernels_new_discrete(ptr::null(), ptr::null(), 0, 1.0, &mut ptr::null_mut()) }, SbStatus::InvalidParameter);
    let (mut e, mut m) = (0.0, 0.0);
    assert_eq!(unsafe { sb_disorder_echo_inputs(1.0, -1.0, 1.0, &mut e, &mut m) }, SbStatus::InvalidParameter);
    assert_eq!(unsafe { sb_pulse_new_euler(f64::NAN, 0.0, 0.0, &mut ptr::null_mut()) }, SbStatus::InvalidParameter);
    assert_eq!(unsafe { sb_pulse_zz(ptr::null(), &mut s) }, SbStatus::NullPointer);
    unsafe {
        sb_pulse_free(p);
        sb_kernels_free(k);
        // NULL is accepted by the destructors.
        sb_pulse_free(ptr::null_mut());
        sb_kernels_free(ptr::null_mut());
    }
}

#[test]
fn echo_through_the_disorder_inputs() {
    let k = ohmic(0.1, 1.0, 2.0);
    let (p1, p2) = (rotation(FRAC_PI_2, SbAxis::X), rotation(-FRAC_PI_2, SbAxis::Y));
    let (mut e, mut m) = (0.0, 0.0);
    assert_eq!(unsafe { sb_disorder_echo_inputs(8.0, 4.0, 1.0, &mut e, &mut m) }, SbStatus::Ok);
    assert!(e < 0.0 && m < 0.0 && m > -1.0);
    let mut w = SbWork::default();
    assert_eq!(unsafe { sb_work_echo(k, e, m, 8.0, p1, p2, 0.5, f64::INFINITY, &mut w) }, SbStatus::Ok);
    assert_eq!(w.n_pulses, 3);
    assert!((w.per_pulse.iter().sum::<f64>() - w.total).abs() < 1e-14);
    let mut finite = SbWork::default();
    assert_eq!(unsafe { sb_work_echo(k, e, m, 8.0, p1, p2, 0.5, 1e8, &mut finite) }, SbStatus::Ok);
    assert!((finite.total - w.total).abs() < 1e-6);
    unsafe {
        sb_pulse_free(p1);
        sb_pulse_free(p2);
        sb_kernels_free(k);
    }
}

#[test]
fn pulses_compose() {
    let mut pi = ptr::null_mut();
    assert_eq!(unsafe { sb_pulse_new_pi(&mut pi) }, SbStatus::Ok);
    let mut both = ptr::null_mut();
    assert_eq!(unsafe { sb_pulse_compose(pi, pi, &mut both) }, SbStatus::Ok);
    let (mut a, mut b) = (0.0, 0.0);
    unsafe {
        assert_eq!(sb_pulse_zz(pi, &mut a), SbStatus::Ok);
        assert_eq!(sb_pulse_zz(both, &mut b), SbStatus::Ok);
    }
    assert_eq!(a, -1.0);
    assert!((b - 1.0).abs() < 1e-15);

    let mut e = ptr::null_mut();
    assert_eq!(unsafe { sb_pulse_new_euler(0.3, 1.1, 0.7, &mut e) }, SbStatus::Ok);
    let mut zz = 0.0;
    assert_eq!(unsafe { sb_pulse_zz(e, &mut zz) }, SbStatus::Ok);
    assert_eq!(zz, coefficients(&PulseUnitary::from_euler(0.3, 1.1, 0.7)).unwrap().zz());
    unsafe {
        sb_pulse_free(pi);
        sb_pulse_free(both);
        sb_pulse_free(e);
    }
}

#[test]
fn efficiency_and_restrictions() {
    // Hot spin, cold bath, echo-free two-pulse run.
    let k = ohmic(0.1, 1.0, 0.2);
    let (p1, p2) = (rotation(FRAC_PI_2, SbAxis::X), rotation(-FRAC_PI_2, SbAxis::Y));
    let sz0 = -(1.0f64 / (2.0 * 5.0)).tanh();
    let mut w = SbWork::default();
    assert_eq!(unsafe { sb_work_two_pulse(k, 1.0, sz0, p1, p2, 1.0, f64::INFINITY, &mut w) }, SbStatus::Ok);
    let mut r = SbEfficiency::default();
    assert_eq!(unsafe { sb_efficiency(&w, 0.2, 5.0, true, &mut r) }, SbStatus::Ok);
    assert_eq!(r.regime, 1);
    assert!((r.carnot - (1.0 - 0.2 / 5.0)).abs() < 1e-15);
    assert!(r.eta <= r.carnot);

    // A fabricated breakdown that extracts at equal temperatures is rejected.
    let fake = SbWork { per_pulse: [-1.0, 0.0, 0.0], n_pulses: 1, spin_part: -1.0, bath_int_part: 0.0, total: -1.0, w: f64::NAN };
    assert_eq!(unsafe { sb_efficiency(&fake, 1.0, 1.0, true, &mut r) }, SbStatus::DegenerateTemperatures);
    assert_eq!(unsafe { sb_efficiency(&fake, 1.0, 1.0, false, &mut r) }, SbStatus::Ok);
    assert_eq!(r.regime, 0);
    let bad = SbWork { n_pulses: 7, ..fake };
    assert_eq!(unsafe { sb_efficiency(&bad, 1.0, 2.0, false, &mut r) }, SbStatus::InvalidParameter);
    unsafe {
        sb_pulse_free(p1);
        sb_pulse_free(p2);
        sb_kernels_free(k);
    }
}

#[test]
fn last_error_is_per_thread() {
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { sb_kernels_new_ohmic(1.0, -1.0, 1.0, &mut k) }, SbStatus::InvalidParameter);
    let here = last_error();
    std::thread::spawn(|| assert!(sb_last_error_message().is_null())).join().unwrap();
    assert_eq!(last_error(), here);
}
