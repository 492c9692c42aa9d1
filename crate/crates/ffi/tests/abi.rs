use std::f64::consts::PI;
use std::ffi::{CStr, CString};
use std::ptr;

use vortex_ffi::*;

fn field(spec: &str) -> *mut VortexField {
    let spec = CString::new(spec).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { vortex_field_new(spec.as_ptr(), &mut h) },
        VortexStatus::Ok
    );
    assert!(!h.is_null());
    h
}

fn last_error() -> String {
    let p = vortex_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn energy_and_bounds_match_reference_values() {
    let h = field("powerlaw:c=1,alpha=0.5");
    let mut e = 0.0;
    assert_eq!(
        unsafe { vortex_kinetic_energy(h, 1.0, &mut e) },
        VortexStatus::Ok
    );
    assert!((e - 1.0 / (2.0 * PI)).abs() < 1e-12);
    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(
        unsafe { vortex_energy_bounds(1.0, 0.5, 1.0, &mut lo, &mut hi) },
        VortexStatus::Ok
    );
    assert!((lo - e).abs() < 1e-12);
    assert!((hi - PI / 8.0).abs() < 1e-12);
    unsafe { vortex_field_free(h) };
}

#[test]
fn point_vortex_average_and_velocity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    std::fs::write(&path, "re,im,mass\n1,0,1\n").unwrap();
    let h = field(&format!("atoms:{}", path.display()));
    let mut a = 0.0;
    assert_eq!(
        unsafe { vortex_spherical_average(h, 0.5, &mut a) },
        VortexStatus::Ok
    );
    assert!((a - 1.0 / (3.0 * PI * PI)).abs() < 1e-12);
    // v = i/(2π conj(z − 1)) at z = 0.
    let (mut vx, mut vy) = (0.0, 0.0);
    assert_eq!(
        unsafe { vortex_velocity(h, 0.0, 0.0, &mut vx, &mut vy) },
        VortexStatus::Ok
    );
    assert!(vx.abs() < 1e-14 && (vy + 1.0 / (2.0 * PI)).abs() < 1e-14);
    let mut mass = 0.0;
    assert_eq!(
        unsafe { vortex_ball_mass(h, 2.0, &mut mass) },
        VortexStatus::Ok
    );
    assert_eq!(mass, 1.0);
    assert_eq!(
        unsafe { vortex_spherical_average(h, 1.0, &mut a) },
        VortexStatus::Singular
    );
    assert!(last_error().contains("singular"));
    unsafe { vortex_field_free(h) };
}

#[test]
fn moments_of_a_difference_cancel() {
    let plus = CString::new("kaden:mu=0.75,t=1").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { vortex_field_difference(plus.as_ptr(), plus.as_ptr(), &mut h) },
        VortexStatus::Ok
    );
    for (n, outer) in [(0, 0), (3, 0), (1, 1), (2, 1)] {
        let (mut re, mut im) = (f64::NAN, f64::NAN);
        assert_eq!(
            unsafe { vortex_moment(h, 1.0, n, outer, &mut re, &mut im) },
            VortexStatus::Ok
        );
        assert!(re.abs() < 1e-14 && im.abs() < 1e-14);
    }
    let mut mass = f64::NAN;
    assert_eq!(
        unsafe { vortex_ball_mass(h, 0.5, &mut mass) },
        VortexStatus::Ok
    );
    assert_eq!(mass, 0.0);
    unsafe { vortex_field_free(h) };
}

#[test]
fn errors_set_status_and_message() {
    let bad = CString::new("powerlaw:c=1,alpa=0.5").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { vortex_field_new(bad.as_ptr(), &mut h) },
        VortexStatus::ParseError
    );
    assert!(h.is_null());
    let msg = last_error();
    assert!(msg.contains("alpa") && msg.contains("13"), "{msg}");

    let out_of_range = CString::new("powerlaw:c=1,alpha=1.5").unwrap();
    assert_eq!(
        unsafe { vortex_field_new(out_of_range.as_ptr(), &mut h) },
        VortexStatus::InvalidParameter
    );
    assert_eq!(
        unsafe { vortex_field_new(ptr::null(), &mut h) },
        VortexStatus::NullPointer
    );
    assert_eq!(
        unsafe { vortex_kinetic_energy(ptr::null(), 1.0, ptr::null_mut()) },
        VortexStatus::NullPointer
    );

    let h = field("halfline:c=1,alpha=0.5");
    let mut x = 0.0;
    assert_eq!(
        unsafe { vortex_ball_mass(h, 1.0, &mut x) },
        VortexStatus::Ok
    );
    assert!(vortex_last_error().is_null());
    unsafe { vortex_field_free(h) };
    unsafe { vortex_field_free(ptr::null_mut()) };
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(vortex_version()) }
        .to_str()
        .unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_interface() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/vortex.h")).unwrap();
    for name in [
        "VORTEX_H",
        "typedef struct VortexField VortexField",
        "VORTEX_STATUS_OK = 0",
        "VORTEX_STATUS_PANIC = 8",
        "vortex_field_new(const char *spec, struct VortexField **out)",
        "vortex_field_difference",
        "vortex_field_free",
        "vortex_ball_mass",
        "vortex_moment",
        "vortex_spherical_average",
        "vortex_kinetic_energy",
        "vortex_velocity",
        "vortex_energy_bounds",
        "const char *vortex_last_error(void)",
        "vortex_version",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
