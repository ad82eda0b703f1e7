use std::ffi::CStr;
use std::ptr;

use ree_ffi::*;

fn last_error() -> String {
    let p = ree_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn state_roundtrip_and_measures() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ree_state_family(ReeFamily::Pure, 0.5, &mut s), ReeStatus::Ok);
        let (mut a, mut b) = (0, 0);
        assert_eq!(ree_state_dims(s, &mut a, &mut b), ReeStatus::Ok);
        assert_eq!((a, b), (2, 2));

        let mut re = [0.0; 16];
        let mut im = [0.0; 16];
        assert_eq!(ree_state_matrix(s, re.as_mut_ptr(), im.as_mut_ptr(), 16), ReeStatus::Ok);
        assert!((re[0] - 0.5).abs() < 1e-15 && (re[3] - 0.5).abs() < 1e-15);

        let mut copy = ptr::null_mut();
        assert_eq!(ree_state_new(2, 2, re.as_ptr(), im.as_ptr(), &mut copy), ReeStatus::Ok);
        let mut c = 0.0;
        assert_eq!(ree_concurrence(copy, &mut c), ReeStatus::Ok);
        assert!((c - 1.0).abs() < 1e-10);
        let mut m = 0.0;
        assert_eq!(ree_ppt_min_eigenvalue(copy, &mut m), ReeStatus::Ok);
        assert!((m + 0.5).abs() < 1e-10);

        let mut closest = ptr::null_mut();
        assert_eq!(ree_state_family(ReeFamily::PureClosest, 0.5, &mut closest), ReeStatus::Ok);
        let mut nats = 0.0;
        assert_eq!(ree_relative_entropy(s, closest, &mut nats), ReeStatus::Ok);
        assert!((nats - std::f64::consts::LN_2).abs() < 1e-10);

        ree_state_free(closest);
        ree_state_free(copy);
        ree_state_free(s);
    }
}

#[test]
fn bound_on_bell_state_is_one_bit() {
    unsafe {
        let mut s = ptr::null_mut();
        let w = [1.0, 0.0, 0.0, 0.0];
        assert_eq!(ree_state_bell_diagonal(w.as_ptr(), &mut s), ReeStatus::Ok);
        let mut b = ptr::null_mut();
        assert_eq!(ree_bound(s, &mut b), ReeStatus::Ok);
        let (mut nats, mut bits) = (0.0, 0.0);
        assert_eq!(ree_bound_value(b, &mut nats, &mut bits), ReeStatus::Ok);
        assert!((bits - 1.0).abs() < 1e-6, "bits {bits}");
        let mut tau = [0.0; 3];
        assert_eq!(ree_bound_tau(b, tau.as_mut_ptr()), ReeStatus::Ok);
        let mut sigma = ptr::null_mut();
        assert_eq!(ree_bound_sigma(b, &mut sigma), ReeStatus::Ok);
        let mut m = 0.0;
        assert_eq!(ree_ppt_min_eigenvalue(sigma, &mut m), ReeStatus::Ok);
        assert!(m > -1e-9);
        let mut cond = ReeConditionSummary::default();
        assert_eq!(ree_conditions(s, sigma, ReeParty::A, &mut cond), ReeStatus::Ok);
        assert!(cond.filter_residual < 1e-6 && cond.unitary_residual < 1e-6);
        ree_state_free(sigma);
        ree_bound_free(b);
        ree_state_free(s);
    }
}

#[test]
fn category_of_pure_state_pair() {
    unsafe {
        let (mut r, mut s) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(ree_state_family(ReeFamily::Pure, 0.9, &mut r), ReeStatus::Ok);
        assert_eq!(ree_state_family(ReeFamily::PureClosest, 0.9, &mut s), ReeStatus::Ok);
        let mut c = ReeCategory::None;
        assert_eq!(ree_category(r, s, &mut c), ReeStatus::Ok);
        assert_eq!(c, ReeCategory::CategoryIi);
        ree_state_free(s);
        ree_state_free(r);
    }
}

#[test]
fn oracle_is_seed_deterministic() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ree_state_family(ReeFamily::Werner, 0.8, &mut s), ReeStatus::Ok);
        let mut vals = [0.0; 2];
        for v in &mut vals {
            let mut o = ptr::null_mut();
            assert_eq!(ree_oracle(s, 4, 7, &mut o), ReeStatus::Ok);
            let mut bits = 0.0;
            assert_eq!(ree_oracle_value(o, v, &mut bits), ReeStatus::Ok);
            let mut sigma = ptr::null_mut();
            assert_eq!(ree_oracle_sigma(o, &mut sigma), ReeStatus::Ok);
            ree_state_free(sigma);
            ree_oracle_free(o);
        }
        assert_eq!(vals[0].to_bits(), vals[1].to_bits());
        ree_state_free(s);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut s = ptr::null_mut();
        let re = [0.5, 0.0, 0.0, 0.48];
        assert_eq!(ree_state_new(2, 1, re.as_ptr(), ptr::null(), &mut s), ReeStatus::NotAState);
        assert!(s.is_null());
        assert!(last_error().contains("trace"), "{}", last_error());

        assert_eq!(ree_state_new(2, 1, ptr::null(), ptr::null(), &mut s), ReeStatus::NullPointer);
        assert_eq!(ree_state_new(0, 2, re.as_ptr(), ptr::null(), &mut s), ReeStatus::Dimension);
        assert_eq!(ree_state_family(ReeFamily::Pure, 1.5, &mut s), ReeStatus::InvalidInput);

        let mut c = 0.0;
        assert_eq!(ree_concurrence(ptr::null(), &mut c), ReeStatus::NullPointer);
        ree_state_free(ptr::null_mut());
        ree_bound_free(ptr::null_mut());
        ree_oracle_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_package() {
    let v = unsafe { CStr::from_ptr(ree_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ree.h")).unwrap();
    for name in [
        "ree_last_error_message",
        "ree_version",
        "ree_state_new",
        "ree_state_family",
        "ree_state_bell_diagonal",
        "ree_state_isotropic",
        "ree_state_free",
        "ree_state_dims",
        "ree_state_matrix",
        "ree_relative_entropy",
        "ree_concurrence",
        "ree_ppt_min_eigenvalue",
        "ree_bound",
        "ree_bound_value",
        "ree_bound_tau",
        "ree_bound_sigma",
        "ree_bound_free",
        "ree_oracle",
        "ree_oracle_value",
        "ree_oracle_sigma",
        "ree_oracle_free",
        "ree_conditions",
        "ree_category",
    ] {
        assert!(header.contains(&format!("{name}(")), "missing {name}");
    }
    assert!(header.contains("REE_STATUS_NOT_A_STATE"));
}
