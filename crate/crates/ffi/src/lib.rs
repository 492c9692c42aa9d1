//! C interface to `vortex-core`.
//!
//! Measures live behind opaque `VortexField` handles created from spec
//! strings (`powerlaw:c=1,alpha=0.5`, `kaden:mu=0.75,t=1`, ...). Every
//! function returns a [`VortexStatus`]; on failure a message is kept per
//! thread and read with [`vortex_last_error`]. Results go through out
//! pointers, which are left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use vortex_core::cli::MeasureSpec;
use vortex_core::energy::{
    kinetic_energy_with, power_law_bounds, spherical_average, EnergyOptions,
};
use vortex_core::moments::{inner_moment, outer_moment, SpectrumOptions};
use vortex_core::velocity::velocity_at;
use vortex_core::{SignedVorticity, VortexError, Vorticity, VorticityMeasure};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VortexStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    ParseError = 3,
    NonConvergence = 4,
    Singular = 5,
    IoError = 6,
    Failure = 7,
    Panic = 8,
}

/// Opaque measure or difference of two measures.
pub struct VortexField {
    plus: VorticityMeasure,
    minus: Option<VorticityMeasure>,
}

impl VortexField {
    fn with<R>(&self, f: impl FnOnce(&dyn Vorticity) -> R) -> R {
        match &self.minus {
            None => f(&self.plus),
            Some(m) => f(&SignedVorticity::new(self.plus.clone(), m.clone())),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &VortexError) -> VortexStatus {
    match e {
        VortexError::InvalidParameter { .. }
        | VortexError::Divergent(_)
        | VortexError::InsufficientSamples { .. } => VortexStatus::InvalidParameter,
        VortexError::Parse { .. } => VortexStatus::ParseError,
        VortexError::NonConvergence { .. } => VortexStatus::NonConvergence,
        VortexError::Proximity { .. }
        | VortexError::SingularRadius { .. }
        | VortexError::SingularConfiguration(_) => VortexStatus::Singular,
        VortexError::Io(_) => VortexStatus::IoError,
        VortexError::Unsupported(_) => VortexStatus::Failure,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), VortexStatusError>) -> VortexStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            VortexStatus::Ok
        }
        Ok(Err(VortexStatusError(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            VortexStatus::Panic
        }
    }
}

struct VortexStatusError(VortexStatus, String);

impl From<VortexError> for VortexStatusError {
    fn from(e: VortexError) -> Self {
        Self(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> VortexStatusError {
    VortexStatusError(VortexStatus::NullPointer, format!("{what} is null"))
}

unsafe fn field_ref<'a>(h: *const VortexField) -> Result<&'a VortexField, VortexStatusError> {
    h.as_ref().ok_or_else(|| null("field handle"))
}

unsafe fn parse_spec(spec: *const c_char) -> Result<VorticityMeasure, VortexStatusError> {
    if spec.is_null() {
        return Err(null("spec"));
    }
    let text = CStr::from_ptr(spec).to_str().map_err(|_| {
        VortexStatusError(VortexStatus::ParseError, "spec is not valid UTF-8".into())
    })?;
    Ok(text.parse::<MeasureSpec>()?.build()?)
}

fn check_out<T>(p: *mut T, what: &str) -> Result<(), VortexStatusError> {
    if p.is_null() {
        Err(null(what))
    } else {
        Ok(())
    }
}

/// Parses a measure spec into a new handle, released with [`vortex_field_free`].
///
/// # Safety
/// `spec` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vortex_field_new(
    spec: *const c_char,
    out: *mut *mut VortexField,
) -> VortexStatus {
    guard(|| {
        check_out(out, "out")?;
        let plus = parse_spec(spec)?;
        *out = Box::into_raw(Box::new(VortexField { plus, minus: None }));
        Ok(())
    })
}

/// Handle for the difference `plus − minus` of two specs.
///
/// # Safety
/// As [`vortex_field_new`].
#[no_mangle]
pub unsafe extern "C" fn vortex_field_difference(
    plus: *const c_char,
    minus: *const c_char,
    out: *mut *mut VortexField,
) -> VortexStatus {
    guard(|| {
        check_out(out, "out")?;
        let field = VortexField {
            plus: parse_spec(plus)?,
            minus: Some(parse_spec(minus)?),
        };
        *out = Box::into_raw(Box::new(field));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `h` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vortex_field_free(h: *mut VortexField) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// `ω(B(0, r))`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vortex_ball_mass(
    h: *const VortexField,
    r: f64,
    out: *mut f64,
) -> VortexStatus {
    guard(|| {
        let f = field_ref(h)?;
        check_out(out, "out")?;
        let minus = f.minus.as_ref().map_or(0.0, |m| m.ball_mass(r));
        *out = f.plus.ball_mass(r) - minus;
        Ok(())
    })
}

/// Inner moment `m_{r,n}` (`outer == 0`) or outer moment `M_{r,n}` (`outer != 0`, `n ≥ 1`).
///
/// # Safety
/// `h` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vortex_moment(
    h: *const VortexField,
    r: f64,
    n: u32,
    outer: i32,
    re: *mut f64,
    im: *mut f64,
) -> VortexStatus {
    guard(|| {
        let f = field_ref(h)?;
        check_out(re, "re")?;
        check_out(im, "im")?;
        let m = f.with(|v| {
            if outer != 0 {
                outer_moment(v, r, n as usize)
            } else {
                inner_moment(v, r, n as usize)
            }
        })?;
        *re = m.re;
        *im = m.im;
        Ok(())
    })
}

/// Circle average `A_r` of `|v|²` from the moment series.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vortex_spherical_average(
    h: *const VortexField,
    r: f64,
    out: *mut f64,
) -> VortexStatus {
    guard(|| {
        let f = field_ref(h)?;
        check_out(out, "out")?;
        *out = f
            .with(|v| spherical_average(v, r, SpectrumOptions::default()))?
            .value;
        Ok(())
    })
}

/// Local kinetic energy `E_r`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vortex_kinetic_energy(
    h: *const VortexField,
    r: f64,
    out: *mut f64,
) -> VortexStatus {
    guard(|| {
        let f = field_ref(h)?;
        check_out(out, "out")?;
        let opts = EnergyOptions::default();
        *out = match &f.minus {
            None => kinetic_energy_with(&f.plus, r, opts)?,
            Some(m) => {
                let scale =
                    kinetic_energy_with(&f.plus, r, opts)? + kinetic_energy_with(m, r, opts)?;
                let diff = SignedVorticity::new(f.plus.clone(), m.clone());
                kinetic_energy_with(&diff, r, opts.with_abs_floor(scale))?
            }
        };
        Ok(())
    })
}

/// Velocity at `x + iy`.
///
/// # Safety
/// `h` must be a live handle; `vx` and `vy` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vortex_velocity(
    h: *const VortexField,
    x: f64,
    y: f64,
    vx: *mut f64,
    vy: *mut f64,
) -> VortexStatus {
    guard(|| {
        let f = field_ref(h)?;
        check_out(vx, "vx")?;
        check_out(vy, "vy")?;
        let v = f.with(|m| velocity_at(m, Complex64::new(x, y)))?;
        *vx = v.re;
        *vy = v.im;
        Ok(())
    })
}

/// Energy bounds for ball mass `c·r^α`.
///
/// # Safety
/// `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vortex_energy_bounds(
    c: f64,
    alpha: f64,
    r: f64,
    lower: *mut f64,
    upper: *mut f64,
) -> VortexStatus {
    guard(|| {
        check_out(lower, "lower")?;
        check_out(upper, "upper")?;
        let b = power_law_bounds(c, alpha, r)?;
        *lower = b.lower;
        *upper = b.upper;
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn vortex_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn vortex_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
