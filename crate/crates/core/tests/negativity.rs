use std::f64::consts::PI;

use gausspm::negativity::*;
use gausspm::phase_space::{GaussianState, ModeVector};
use gausspm::photon_ops::{PhotonTunedState, Sign};
use gausspm::states::{make_sqth, Parity, TwoModeCoherentPlus};
use gausspm::Error;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn tuned(q: f64, r: f64, sign: Sign) -> PhotonTunedState {
    PhotonTunedState::new(make_sqth(q, r).unwrap(), sign, ModeVector::basis(1, 0)).unwrap()
}

#[test]
fn fock_volume_matches_closed_form() {
    let ps = tuned(0.0, 0.0, Sign::Add);
    let rep = negative_volume_single_mode(&ps).unwrap();
    assert!((rep.volume - fock_one_negative_volume()).abs() < 1e-10);
    assert_eq!(rep.method, NegativityMethod::EllipseQuadrature);
    assert!((fock_one_negative_volume() - 0.213_061_319_425_267).abs() < 1e-14);
}

#[test]
fn region_volume_agrees_with_full_plane_quadrature() {
    for &(q, r, sign) in &[
        (0.1, 0.5, Sign::Add),
        (0.1, 0.5, Sign::Subtract),
        (0.4, 1.2, Sign::Add),
        (0.05, 1.0, Sign::Subtract),
    ] {
        let ps = tuned(q, r, sign);
        let a = negative_volume_single_mode(&ps).unwrap().volume;
        let b = negative_volume_full_plane(&ps).unwrap();
        let c = negative_volume_abs_identity(&ps).unwrap();
        assert!((a - b).abs() < 1e-7, "{q} {r} {sign:?}: {a} vs {b}");
        assert!((a - c).abs() < 1e-7, "{q} {r} {sign:?}: {a} vs {c}");
    }
}

#[test]
fn spot_values_at_q01_r05() {
    let plus = negative_volume_single_mode(&tuned(0.1, 0.5, Sign::Add)).unwrap().volume;
    let minus = negative_volume_single_mode(&tuned(0.1, 0.5, Sign::Subtract)).unwrap().volume;
    assert!((plus - 0.15004).abs() < 1e-4, "{plus}");
    assert!((minus - 0.034013).abs() < 1e-5, "{minus}");
}

#[test]
fn classical_subtracted_states_have_no_volume() {
    for &(q, r) in &[(0.3f64, 0.0f64), (0.5, 0.3), (0.2, 0.2)] {
        assert!(q >= r.tanh().powi(2));
        let v = negative_volume_single_mode(&tuned(q, r, Sign::Subtract)).unwrap();
        assert_eq!(v.volume, 0.0);
    }
}

#[test]
fn displaced_mother_uses_generic_path() {
    let v = nalgebra::DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.1, 2.5]);
    let d = nalgebra::DVector::from_vec(vec![0.4, -0.7]);
    let ps = PhotonTunedState::new(GaussianState::new(v, d).unwrap(), Sign::Subtract, ModeVector::basis(1, 0))
        .unwrap();
    let a = negative_volume_single_mode(&ps).unwrap().volume;
    let b = negative_volume_full_plane(&ps).unwrap();
    assert!((a - b).abs() < 1e-7, "{a} vs {b}");
}

#[test]
fn large_squeezing_approaches_asymptote() {
    for q in [0.0, 0.1, 0.3] {
        let lim = negative_volume_asymptotic(q).unwrap();
        let v = negative_volume_single_mode(&tuned(q, 6.0, Sign::Add)).unwrap().volume;
        assert!((v - lim).abs() < 1e-4, "q={q}: {v} vs {lim}");
    }
    assert!((negative_volume_asymptotic(0.0).unwrap() - fock_one_negative_volume()).abs() < 1e-12);
    assert!((negative_volume_asymptotic(0.1).unwrap() - 0.119741).abs() < 1e-6);
    assert!((negative_volume_asymptotic(0.3).unwrap() - 0.035195).abs() < 1e-6);
    // the cubic approximation is close only for small q
    let q = 0.02;
    let rel = (negative_volume_asymptotic_approx(q) - negative_volume_asymptotic(q).unwrap()).abs()
        / negative_volume_asymptotic(q).unwrap();
    assert!(rel < 0.01);
}

#[test]
fn odd_state_volume_is_flat_and_matches_monte_carlo() {
    let cfg = McConfig::default();
    for a in [0.0, 0.8] {
        let closed = negative_volume_even_odd(a, Parity::Odd).unwrap().volume;
        let ps = TwoModeCoherentPlus::new(C64::new(a, 0.0), Parity::Odd).photon_tuned().unwrap();
        let mc = negative_volume_two_mode(&ps, &cfg).unwrap();
        assert!((closed - mc.volume).abs() < 5.0 * mc.error_estimate.max(2e-4), "{closed} vs {mc:?}");
    }
}

#[test]
fn even_state_bessel_volume_matches_monte_carlo() {
    let cfg = McConfig::default();
    for a in [0.0, 0.5, 1.0] {
        let closed = negative_volume_even_odd(a, Parity::Even).unwrap().volume;
        let ps = TwoModeCoherentPlus::new(C64::new(a, 0.0), Parity::Even).photon_tuned().unwrap();
        let mc = negative_volume_two_mode(&ps, &cfg).unwrap();
        assert!((closed - mc.volume).abs() < 5.0 * mc.error_estimate.max(2e-4), "a={a}: {closed} vs {mc:?}");
    }
    let e0 = negative_volume_even_odd(0.0, Parity::Even).unwrap().volume;
    assert!((e0 - fock_one_negative_volume()).abs() < 1e-12);
}

#[test]
fn even_state_volume_decreases_with_amplitude() {
    let mut prev = f64::INFINITY;
    for k in 0..=40 {
        let v = negative_volume_even_odd(0.1 * k as f64, Parity::Even).unwrap().volume;
        assert!(v <= prev + 1e-15 && v >= 0.0);
        prev = v;
    }
    assert!(negative_volume_even_odd(-1.0, Parity::Even).is_err());
}

#[test]
fn two_mode_monte_carlo_is_deterministic_per_seed() {
    let c = ModeVector::from_real(&[1.0, 0.0]).unwrap();
    let cfg = McConfig { seed: 5, ..McConfig::default() };
    let a = negative_volume_two_mode_sqthp(0.2, 0.5, &c, &cfg).unwrap();
    let b = negative_volume_two_mode_sqthp(0.2, 0.5, &c, &cfg).unwrap();
    assert_eq!(a.volume.to_bits(), b.volume.to_bits());
    assert_eq!(a.method, NegativityMethod::MonteCarlo);
    assert!(a.error_estimate <= cfg.tol);
    // c = e1 factorizes into a one-photon-added mode times a Gaussian mode
    let single = negative_volume_single_mode(&tuned(0.2, 0.5, Sign::Add)).unwrap().volume;
    assert!((a.volume - single).abs() < 5.0 * a.error_estimate.max(1e-4));
}

#[test]
fn monte_carlo_reports_nonconvergence() {
    let c = ModeVector::from_real(&[1.0, 1.0]).unwrap();
    let cfg = McConfig { tol: 1e-9, max_points: 1 << 13, ..McConfig::default() };
    match negative_volume_two_mode_sqthp(0.2, 0.5, &c, &cfg) {
        Err(Error::NonConvergence { estimate, .. }) => assert!((estimate - 0.104).abs() < 0.01),
        other => panic!("expected NonConvergence, got {other:?}"),
    }
}

#[test]
fn witness_on_fock_and_thermal_subtracted() {
    let fock = qng_witness(&tuned(0.0, 0.0, Sign::Add)).unwrap();
    assert!(fock.certified);
    assert!((fock.wigner_origin + 1.0 / PI).abs() < 1e-14);
    assert!((fock.mean_photon_number - 1.0).abs() < 1e-12);
    // photon-subtracted thermal light is a classical mixture with positive W(0)
    let th = qng_witness(&tuned(0.3, 0.0, Sign::Subtract)).unwrap();
    assert!(!th.certified);
}

#[test]
fn witness_saturation_sits_between_boundary_lines() {
    for q in [0.05, 0.1, 0.2] {
        let lines = gausspm::classify::boundary_lines(q).unwrap();
        let r = qng_saturation_sqth_minus(q).unwrap();
        assert!(lines.r_classical < r && r < lines.r_qcs_one, "q={q}: {r}");
        assert!(qng_margin_sqth_minus(q, r + 1e-6).unwrap() <= 0.0);
        assert!(qng_margin_sqth_minus(q, r - 1e-3).unwrap() > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wigner_is_normalized(q in 0.0f64..0.8, r in 0.0f64..1.5, add in any::<bool>()) {
        prop_assume!(add || q > 0.0 || r > 0.05);
        let sign = if add { Sign::Add } else { Sign::Subtract };
        let total = wigner_total(&tuned(q, r, sign)).unwrap();
        prop_assert!((total - 1.0).abs() < 1e-8, "{}", total);
    }

    #[test]
    fn added_volume_is_bounded_by_fock(q in 0.0f64..0.9, r in 0.0f64..2.5) {
        let v = negative_volume_single_mode(&tuned(q, r, Sign::Add)).unwrap().volume;
        prop_assert!(v > 0.0 && v <= fock_one_negative_volume() + 1e-9);
    }

    #[test]
    fn added_volume_decreases_with_temperature(q in 0.0f64..0.8, dq in 0.01f64..0.1, r in 0.0f64..2.0) {
        let a = negative_volume_single_mode(&tuned(q, r, Sign::Add)).unwrap().volume;
        let b = negative_volume_single_mode(&tuned(q + dq, r, Sign::Add)).unwrap().volume;
        prop_assert!(b < a);
    }

    #[test]
    fn nbar_closed_form_matches_engine(q in 0.0f64..0.9, r in 0.05f64..2.0) {
        let closed = mean_photon_number_sqth_minus(q, r).unwrap();
        let engine = tuned(q, r, Sign::Subtract).mean_photon_number().unwrap();
        prop_assert!((closed - engine).abs() < 1e-9 * closed.max(1.0));
    }
}

fn sqthp_volume(q: f64, r: f64) -> f64 {
    let ps = PhotonTunedState::new(make_sqth(q, r).unwrap(), Sign::Add, ModeVector::basis(1, 0)).unwrap();
    negative_volume_single_mode(&ps).unwrap().volume
}

// noise at which the added-state volume drops to half the Fock value, over r ∈ [0, 3]
#[test]
fn half_fock_noise_level_range() {
    let half = 0.5 * fock_one_negative_volume();
    let mut qs = Vec::new();
    for i in 0..=12 {
        let r = 0.25 * i as f64;
        let (mut lo, mut hi) = (0.0, 0.9);
        assert!(sqthp_volume(lo, r) > half && sqthp_volume(hi, r) < half);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if sqthp_volume(mid, r) > half {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        qs.push(0.5 * (lo + hi));
    }
    let min = qs.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = qs.iter().cloned().fold(0.0, f64::max);
    println!("half-Fock noise level over r in [0,3]: {min:.4} ..= {max:.4} ({qs:.4?})");
    assert!(min > 0.1 && max < 0.25);
}
