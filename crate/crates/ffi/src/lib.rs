//! C interface to the `spinwork` engine.
//!
//! Every function returns an [`SbStatus`]. Results are written through out-pointers
//! only on [`SbStatus::Ok`]. After a failure, [`sb_last_error_message`] describes it.
//! Handles are opaque and owned by the caller, who releases them with the matching
//! `_free` function.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spinwork::bath_kernels::{KernelSet, Mode, Preparation, SpectralDensity};
use spinwork::disorder_ensemble::DisorderModel;
use spinwork::pulse_algebra::{coefficients, compose, pi_pulse, rotation_pulse, Axis, PulseUnitary};
use spinwork::thermodynamics::{checked_efficiency, report, TemperatureRegime};
use spinwork::work_engine::{
    work_echo, work_echo_finite_t, work_first_pulse, work_two_pulse, EchoInputs, SystemConfig, WorkBreakdown,
};
use spinwork::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbStatus {
    Ok = 0,
    NullPointer = 1,
    Pole = 2,
    Domain = 3,
    InvalidParameter = 4,
    UnsupportedSpectrum = 5,
    NotUnitary = 6,
    QuadratureNotConverged = 7,
    DegenerateTemperatures = 8,
    InfiniteForZeroDisorder = 9,
    CutoffTooSmall = 10,
    DimensionMismatch = 11,
    RestrictionViolated = 12,
    Config = 13,
    /// A Rust panic was caught at the boundary. Treat as a bug.
    Panic = 99,
}

impl From<&Error> for SbStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Pole { .. } => SbStatus::Pole,
            Error::Domain(_) => SbStatus::Domain,
            Error::InvalidParameter(_) => SbStatus::InvalidParameter,
            Error::UnsupportedSpectrum(_) => SbStatus::UnsupportedSpectrum,
            Error::NotUnitary { .. } => SbStatus::NotUnitary,
            Error::QuadratureNotConverged(_) => SbStatus::QuadratureNotConverged,
            Error::DegenerateTemperatures { .. } => SbStatus::DegenerateTemperatures,
            Error::InfiniteForZeroDisorder => SbStatus::InfiniteForZeroDisorder,
            Error::CutoffTooSmall(_) => SbStatus::CutoffTooSmall,
            Error::DimensionMismatch(_) => SbStatus::DimensionMismatch,
            Error::RestrictionViolated(_) => SbStatus::RestrictionViolated,
            Error::Config(_) => SbStatus::Config,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbAxis {
    X = 0,
    Y = 1,
}

/// Bath correlation kernels for one spectral density and bath temperature.
pub struct SbKernelSet {
    inner: KernelSet,
}

/// An ideal instantaneous pulse.
pub struct SbPulse {
    inner: PulseUnitary,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SbKernelValues {
    pub k: f64,
    pub xi: f64,
    pub xi_dot: f64,
    pub g: f64,
    pub f: f64,
}

/// Work of a pulse sequence. Only the first `n_pulses` entries of `per_pulse` are set.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SbWork {
    pub per_pulse: [f64; 3],
    pub n_pulses: usize,
    pub spin_part: f64,
    pub bath_int_part: f64,
    pub total: f64,
    /// 2W/G∞, NaN for a decoupled bath.
    pub w: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SbEfficiency {
    pub eta: f64,
    pub carnot: f64,
    /// +1 spin hotter, −1 bath hotter, 0 equal.
    pub regime: i32,
    pub slack1: f64,
    pub slack2: f64,
    pub extraction: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    // Interior NULs cannot occur in our messages, but never fail here.
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type FfiResult<T> = std::result::Result<T, Failure>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> SbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SbStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer passed for {what}"));
            SbStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            SbStatus::from(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            SbStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> FfiResult<&'a T> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or(Failure::Null(what))
}

/// INFINITY selects the ergodic (t → ∞) preparation.
fn preparation(t: f64) -> Preparation {
    if t == f64::INFINITY {
        Preparation::Ergodic
    } else {
        Preparation::Finite(t)
    }
}

fn to_c(b: &WorkBreakdown) -> SbWork {
    let mut per_pulse = [0.0; 3];
    let n = b.per_pulse.len().min(3);
    per_pulse[..n].copy_from_slice(&b.per_pulse[..n]);
    SbWork {
        per_pulse,
        n_pulses: n,
        spin_part: b.spin_part,
        bath_int_part: b.bath_int_part,
        total: b.total,
        w: b.w.unwrap_or(f64::NAN),
    }
}

fn from_c(w: &SbWork) -> FfiResult<WorkBreakdown> {
    if w.n_pulses > 3 {
        return Err(Error::InvalidParameter(format!("n_pulses must be at most 3, got {}", w.n_pulses)).into());
    }
    Ok(WorkBreakdown {
        per_pulse: w.per_pulse[..w.n_pulses].to_vec(),
        spin_part: w.spin_part,
        bath_int_part: w.bath_int_part,
        total: w.total,
        w: (!w.w.is_nan()).then_some(w.w),
    })
}

/// Message for the last failure on this thread, or NULL if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Kernels of the ohmic density J(ω) = γω e^{−ω/Γ} at bath temperature T ≥ 0.
///
/// # Safety
/// The out-pointer must be NULL or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn sb_kernels_new_ohmic(
    gamma: f64,
    cutoff: f64,
    temperature: f64,
    out_handle: *mut *mut SbKernelSet,
) -> SbStatus {
    guard(|| {
        let slot = out(out_handle, "out_handle")?;
        let inner = KernelSet::new(SpectralDensity::ohmic(gamma, cutoff)?, temperature)?;
        *slot = Box::into_raw(Box::new(SbKernelSet { inner }));
        Ok(())
    })
}

/// Kernels of a discrete bath of `n` modes with couplings `g[i]` and frequencies `omega[i]`.
///
/// # Safety
/// `g` and `omega` must each point to `n` readable doubles; the out-pointer as above.
#[no_mangle]
pub unsafe extern "C" fn sb_kernels_new_discrete(
    g: *const f64,
    omega: *const f64,
    n: usize,
    temperature: f64,
    out_handle: *mut *mut SbKernelSet,
) -> SbStatus {
    guard(|| {
        let slot = out(out_handle, "out_handle")?;
        if n > 0 && (g.is_null() || omega.is_null()) {
            return Err(Failure::Null("mode arrays"));
        }
        let modes = if n == 0 {
            Vec::new()
        } else {
            let (g, omega) = (std::slice::from_raw_parts(g, n), std::slice::from_raw_parts(omega, n));
            g.iter().zip(omega).map(|(&g, &omega)| Mode { g, omega }).collect()
        };
        let inner = KernelSet::new(SpectralDensity::discrete(modes)?, temperature)?;
        *slot = Box::into_raw(Box::new(SbKernelSet { inner }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be NULL or come from an `sb_kernels_new_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sb_kernels_free(handle: *mut SbKernelSet) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// K, ξ, ξ̇, G and F at time t ≥ 0.
///
/// # Safety
/// `kernels` must be a live handle; the out-pointer valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sb_kernels_eval(kernels: *const SbKernelSet, t: f64, out_values: *mut SbKernelValues) -> SbStatus {
    guard(|| {
        let k = &deref(kernels, "kernels")?.inner;
        let slot = out(out_values, "out_values")?;
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("t must be finite and >= 0, got {t}")).into());
        }
        *slot = SbKernelValues {
            k: k.noise_kernel(t),
            xi: k.xi(t)?,
            xi_dot: k.xi_dot(t)?,
            g: k.backreaction_g(t)?,
            f: k.backreaction_f(t)?,
        };
        Ok(())
    })
}

/// G∞, the long-time limit of the backreaction kernel.
///
/// # Safety
/// `kernels` must be a live handle; the out-pointer valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sb_kernels_g_inf(kernels: *const SbKernelSet, out_value: *mut f64) -> SbStatus {
    guard(|| {
        let k = &deref(kernels, "kernels")?.inner;
        *out(out_value, "out_value")? = k.g_inf();
        Ok(())
    })
}

unsafe fn new_pulse(out_handle: *mut *mut SbPulse, make: impl FnOnce() -> FfiResult<PulseUnitary>) -> SbStatus {
    guard(|| {
        let slot = out(out_handle, "out_handle")?;
        let inner = make()?;
        *slot = Box::into_raw(Box::new(SbPulse { inner }));
        Ok(())
    })
}

/// Pulse from Euler angles.
///
/// # Safety
/// The out-pointer must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn sb_pulse_new_euler(phi: f64, psi: f64, theta: f64, out_handle: *mut *mut SbPulse) -> SbStatus {
    new_pulse(out_handle, || {
        if ![phi, psi, theta].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter("Euler angles must be finite".into()).into());
        }
        Ok(PulseUnitary::from_euler(phi, psi, theta))
    })
}

/// Rotation by `angle` about an in-plane axis.
///
/// # Safety
/// The out-pointer must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn sb_pulse_new_rotation(angle: f64, axis: SbAxis, out_handle: *mut *mut SbPulse) -> SbStatus {
    new_pulse(out_handle, || {
        if !angle.is_finite() {
            return Err(Error::InvalidParameter("rotation angle must be finite".into()).into());
        }
        let axis = match axis {
            SbAxis::X => Axis::X,
            SbAxis::Y => Axis::Y,
        };
        Ok(rotation_pulse(angle, axis))
    })
}

/// The π pulse used as the echo refocusing pulse.
///
/// # Safety
/// The out-pointer must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn sb_pulse_new_pi(out_handle: *mut *mut SbPulse) -> SbStatus {
    new_pulse(out_handle, || Ok(pi_pulse()))
}

/// `first` applied, then `second`.
///
/// # Safety
/// Both pulses must be live handles; the out-pointer valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn sb_pulse_compose(
    first: *const SbPulse,
    second: *const SbPulse,
    out_handle: *mut *mut SbPulse,
) -> SbStatus {
    new_pulse(out_handle, || Ok(compose(&deref(first, "first")?.inner, &deref(second, "second")?.inner)))
}

/// c_zz: the z component of the image of σ_z.
///
/// # Safety
/// `pulse` must be a live handle; the out-pointer valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sb_pulse_zz(pulse: *const SbPulse, out_value: *mut f64) -> SbStatus {
    guard(|| {
        let c = coefficients(&deref(pulse, "pulse")?.inner)?;
        *out(out_value, "out_value")? = c.zz();
        Ok(())
    })
}

/// # Safety
/// `handle` must be NULL or come from an `sb_pulse_new_*` or `sb_pulse_compose` call.
#[no_mangle]
pub unsafe extern "C" fn sb_pulse_free(handle: *mut SbPulse) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Work of a single pulse on a spin with gap ε and initial ⟨σ_z⟩ = sz0.
/// `prep_time` = INFINITY selects the ergodic preparation.
///
/// # Safety
/// Handles must be live; the out-pointer valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sb_work_first_pulse(
    kernels: *const SbKernelSet,
    spin_gap: f64,
    sz0: f64,
    p1: *const SbPulse,
    prep_time: f64,
    out_work: *mut f64,
) -> SbStatus {
    guard(|| {
        let sys = SystemConfig::new(deref(kernels, "kernels")?.inner.clone(), spin_gap, sz0)?;
        let c1 = coefficients(&deref(p1, "p1")?.inner)?;
        let slot = out(out_work, "out_work")?;
        *slot = work_first_pulse(&sys, &c1, preparation(prep_time))?;
        Ok(())
    })
}

/// Two pulses separated by τ.
///
/// # Safety
/// Handles must be live; the out-pointer valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sb_work_two_pulse(
    kernels: *const SbKernelSet,
    spin_gap: f64,
    sz0: f64,
    p1: *const SbPulse,
    p2: *const SbPulse,
    tau: f64,
    prep_time: f64,
    out_work: *mut SbWork,
) -> SbStatus {
    guard(|| {
        let sys = SystemConfig::new(deref(kernels, "kernels")?.inner.clone(), spin_gap, sz0)?;
        let c1 = coefficients(&deref(p1, "p1")?.inner)?;
        let c2 = coefficients(&deref(p2, "p2")?.inner)?;
        let slot = out(out_work, "out_work")?;
        *slot = to_c(&work_two_pulse(&sys, &c1, &c2, tau, preparation(prep_time))?);
        Ok(())
    })
}

/// Echo sequence P1, τ, π, τ, P2 for spins described by the ensemble inputs.
///
/// # Safety
/// Handles must be live; the out-pointer valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sb_work_echo(
    kernels: *const SbKernelSet,
    energy: f64,
    magnetization: f64,
    omega0: f64,
    p1: *const SbPulse,
    p2: *const SbPulse,
    tau: f64,
    prep_time: f64,
    out_work: *mut SbWork,
) -> SbStatus {
    guard(|| {
        let k = &deref(kernels, "kernels")?.inner;
        let c1 = coefficients(&deref(p1, "p1")?.inner)?;
        let c2 = coefficients(&deref(p2, "p2")?.inner)?;
        let slot = out(out_work, "out_work")?;
        for (name, x) in [("energy", energy), ("magnetization", magnetization), ("omega0", omega0)] {
            if !x.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")).into());
            }
        }
        let inputs = EchoInputs { energy, magnetization, omega0 };
        let b = match preparation(prep_time) {
            Preparation::Ergodic => work_echo(k, &inputs, &c1, &c2, tau)?,
            Preparation::Finite(t) => work_echo_finite_t(k, &inputs, &c1, &c2, tau, t)?,
        };
        *slot = to_c(&b);
        Ok(())
    })
}

/// Echo inputs (E, m) of a Gaussian ensemble of spin frequencies with mean Ω₀ and
/// variance d, each spin thermal at T_S.
///
/// # Safety
/// Both out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_disorder_echo_inputs(
    omega0: f64,
    variance: f64,
    spin_temperature: f64,
    out_energy: *mut f64,
    out_magnetization: *mut f64,
) -> SbStatus {
    guard(|| {
        let e = out(out_energy, "out_energy")?;
        let m = out(out_magnetization, "out_magnetization")?;
        let inputs = DisorderModel::new(omega0, variance, spin_temperature)?.echo_inputs()?;
        *e = inputs.energy;
        *m = inputs.magnetization;
        Ok(())
    })
}

/// Efficiency of a work result. With `enforce` set, the two-temperature restrictions
/// and the Carnot bound are checked and a violation is an error.
///
/// # Safety
/// `work` must point to a readable `SbWork`; the out-pointer valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sb_efficiency(
    work: *const SbWork,
    bath_temperature: f64,
    spin_temperature: f64,
    enforce: bool,
    out_report: *mut SbEfficiency,
) -> SbStatus {
    guard(|| {
        let b = from_c(deref(work, "work")?)?;
        let slot = out(out_report, "out_report")?;
        let r = if enforce {
            checked_efficiency(&b, bath_temperature, spin_temperature)?
        } else {
            report(&b, bath_temperature, spin_temperature)
        };
        *slot = SbEfficiency {
            eta: r.eta,
            carnot: r.carnot,
            regime: match r.regime {
                TemperatureRegime::SpinHotter => 1,
                TemperatureRegime::BathHotter => -1,
                TemperatureRegime::Equal => 0,
            },
            slack1: r.slack1,
            slack2: r.slack2,
            extraction: r.extraction,
        };
        Ok(())
    })
}
