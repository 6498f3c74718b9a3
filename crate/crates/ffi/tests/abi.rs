use std::ffi::CStr;
use std::ptr;

use gausspm_ffi::*;

unsafe fn last_error() -> String {
    let p = gpm_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn fock_state_round_trip() {
    unsafe {
        let mut vac = ptr::null_mut();
        let v = [1.0, 0.0, 0.0, 1.0];
        let d = [0.0, 0.0];
        assert_eq!(gpm_gaussian_new(1, v.as_ptr(), d.as_ptr(), &mut vac), GpmStatus::Ok);
        assert!(gpm_last_error_message().is_null());
        assert_eq!(gpm_gaussian_modes(vac), 1);

        let mut fock = ptr::null_mut();
        let (re, im) = ([1.0], [0.0]);
        assert_eq!(
            gpm_photon_new(vac, GpmSign::Add as i32, re.as_ptr(), im.as_ptr(), &mut fock),
            GpmStatus::Ok
        );
        let mut c2 = 0.0;
        assert_eq!(gpm_photon_qcs(fock, &mut c2), GpmStatus::Ok);
        assert!((c2 - 3.0).abs() < 1e-14);

        let (mut vol, mut err) = (0.0, -1.0);
        assert_eq!(gpm_photon_negative_volume(fock, 1, &mut vol, &mut err), GpmStatus::Ok);
        assert!((vol - (2.0 * (-0.5f64).exp() - 1.0)).abs() < 1e-8);
        assert!(err >= 0.0);

        // W_|1>(0) = -1/π
        let mut w = 0.0;
        assert_eq!(gpm_photon_wigner(fock, [0.0, 0.0].as_ptr(), &mut w), GpmStatus::Ok);
        assert!((w + 1.0 / std::f64::consts::PI).abs() < 1e-14);

        // χ_|1>(z) = (1 - |z|²) e^{-|z|²/2}
        let (mut cr, mut ci) = (0.0, 0.0);
        assert_eq!(gpm_photon_char(fock, [0.6].as_ptr(), [0.8].as_ptr(), &mut cr, &mut ci), GpmStatus::Ok);
        assert!(cr.abs() < 1e-14 && ci.abs() < 1e-14);

        let mut neg = 0;
        assert_eq!(gpm_photon_wigner_negative(fock, &mut neg), GpmStatus::Ok);
        assert_eq!(neg, 1);

        gpm_photon_free(fock);
        gpm_gaussian_free(vac);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut vac = ptr::null_mut();
        assert_eq!(gpm_gaussian_sqth(0.0, 0.0, 1, &mut vac), GpmStatus::Ok);
        let mut ps = ptr::null_mut();
        let (re, im) = ([1.0], [0.0]);
        let s = gpm_photon_new(vac, GpmSign::Subtract as i32, re.as_ptr(), im.as_ptr(), &mut ps);
        assert_eq!(s, GpmStatus::AnnihilatingSubtraction);
        assert!(ps.is_null());
        assert!(last_error().contains("annihilating"));

        let s = gpm_photon_new(vac, 7, re.as_ptr(), im.as_ptr(), &mut ps);
        assert_eq!(s, GpmStatus::Domain);

        let zero = [0.0];
        let s = gpm_photon_new(vac, 1, zero.as_ptr(), zero.as_ptr(), &mut ps);
        assert_eq!(s, GpmStatus::InvalidModeVector);
        gpm_gaussian_free(vac);

        let mut g = ptr::null_mut();
        assert_eq!(gpm_gaussian_sqth(1.5, 0.0, 1, &mut g), GpmStatus::Domain);
        let bad = [0.5, 0.0, 0.0, 0.5];
        let s = gpm_gaussian_new(1, bad.as_ptr(), [0.0, 0.0].as_ptr(), &mut g);
        assert_eq!(s, GpmStatus::InvalidState);
        assert_eq!(gpm_gaussian_new(1, ptr::null(), ptr::null(), &mut g), GpmStatus::NullPointer);
        assert_eq!(gpm_gaussian_qcs(ptr::null(), ptr::null_mut()), GpmStatus::NullPointer);
        assert_eq!(gpm_gaussian_modes(ptr::null()), 0);
        gpm_gaussian_free(ptr::null_mut());
        gpm_photon_free(ptr::null_mut());
    }
}

#[test]
fn two_mode_volume_is_seeded() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(gpm_gaussian_sqth(0.2, 0.5, 2, &mut g), GpmStatus::Ok);
        let mut c = 0.0;
        assert_eq!(gpm_gaussian_qcs(g, &mut c), GpmStatus::Ok);
        assert!((c - (0.8f64 / 1.2) * 1.0f64.cosh()).abs() < 1e-12);
        let mut ps = ptr::null_mut();
        let (re, im) = ([1.0, 1.0], [0.0, 0.0]);
        assert_eq!(gpm_photon_new(g, 1, re.as_ptr(), im.as_ptr(), &mut ps), GpmStatus::Ok);
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(gpm_photon_negative_volume(ps, 9, &mut a, ptr::null_mut()), GpmStatus::Ok);
        assert_eq!(gpm_photon_negative_volume(ps, 9, &mut b, ptr::null_mut()), GpmStatus::Ok);
        assert_eq!(a.to_bits(), b.to_bits());
        assert!((a - 0.104).abs() < 0.003);
        gpm_photon_free(ps);
        gpm_gaussian_free(g);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(gpm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
