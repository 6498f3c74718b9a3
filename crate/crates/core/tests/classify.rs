use gausspm::acceptance::{random_single_mode_mother, sign_scan_min_ratio};
use gausspm::classify::*;
use gausspm::phase_space::{GaussianState, ModeVector};
use gausspm::photon_ops::{PhotonTunedState, Sign};
use gausspm::qcs::qcs_closed_form_sqth;
use gausspm::states::{make_sqth, make_sqth_product, random_gaussian};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn minus(q: f64, r: f64) -> PhotonTunedState {
    PhotonTunedState::new(make_sqth(q, r).unwrap(), Sign::Subtract, ModeVector::basis(1, 0)).unwrap()
}

#[test]
fn boundary_lines_match_their_definitions() {
    for k in 1..10 {
        let q = k as f64 / 10.0;
        let b = boundary_lines(q).unwrap();
        let (e, _) = make_sqth(q, b.r_classical).unwrap().min_eig_v_minus_i();
        assert!(e.abs() < 1e-12);
        let c2 = qcs_closed_form_sqth(q, b.r_qcs_one, Sign::Subtract).unwrap();
        assert!((c2 - 1.0).abs() < 1e-12);
        assert!(b.r_classical < b.r_qcs_one);
    }
    assert!(boundary_lines(1.0).is_err());
}

#[test]
fn squeezed_thermal_regions() {
    let q = 0.2;
    let b = boundary_lines(q).unwrap();
    // below the classicality line: classical mother, positive W₋
    let rep = classify_subtracted(&minus(q, 0.5 * b.r_classical)).unwrap();
    assert!(rep.classical && rep.wigner_negative == Verdict::Positive);
    // between the lines: nonclassical but neither negative nor strong
    let mid = 0.5 * (b.r_classical + b.r_qcs_one);
    let rep = classify_subtracted(&minus(q, mid)).unwrap();
    assert!(!rep.classical && rep.wigner_negative == Verdict::Positive && !rep.strongly_nonclassical);
    // above r_qcs_one: negative and strongly nonclassical
    let rep = classify_subtracted(&minus(q, b.r_qcs_one + 0.1)).unwrap();
    assert!(rep.wigner_negative.is_negative() && rep.strongly_nonclassical);
    assert!(rep.witness_values.mvm.unwrap() > 1.0);
}

#[test]
fn added_states_are_always_negative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=2 {
        for _ in 0..10 {
            let g = random_gaussian(n, &mut rng);
            let ps = PhotonTunedState::new(g, Sign::Add, ModeVector::basis(n, 0)).unwrap();
            let rep = classify(&ps).unwrap();
            assert_eq!(rep.wigner_negative, Verdict::Negative);
            assert!(!rep.classical);
            assert!(classify_subtracted(&ps).is_err());
        }
    }
}

#[test]
fn gaussian_classification() {
    let rep = classify_gaussian(&make_sqth(0.0, 0.3).unwrap());
    assert!(!rep.classical && rep.strongly_nonclassical);
    assert_eq!(rep.wigner_negative, Verdict::Positive);
}

/// Exact minimum of the Wigner prefactor `M + |wᵀr - e|²` by compass search in four dimensions.
fn prefactor_min(ps: &PhotonTunedState) -> f64 {
    let pref = ps.wigner_prefactor();
    let f = |x: &DVector<f64>| pref.eval(x).re;
    let mut x = ps.mother().displacement().clone();
    let mut fx = f(&x);
    let mut step = 1.0;
    while step > 1e-12 {
        let mut moved = false;
        for i in 0..x.len() {
            for s in [-1.0, 1.0] {
                let mut y = x.clone();
                y[i] += s * step;
                let fy = f(&y);
                if fy < fx {
                    x = y;
                    fx = fy;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    fx
}

#[test]
fn two_mode_displaced_with_unit_eigenvalue() {
    // V has eigenvalue 1 on the first mode and the displacement is nonzero, so neither
    // shortcut applies and the exact least-squares margin decides
    for (d0, q) in [(0.3, 0.3), (1.5, 0.3), (0.0, 0.5), (0.8, 0.05)] {
        let nu = (1.0 + q) / (1.0 - q);
        let v = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, nu * 0.3, nu / 0.3]));
        let d = DVector::from_vec(vec![d0, -0.2, 0.4, 0.0]);
        let g = GaussianState::new(v, d).unwrap();
        let c = ModeVector::normalized(vec![C64::new(1.0, 0.0), C64::new(0.5, 0.5)]).unwrap();
        let ps = PhotonTunedState::new(g, Sign::Subtract, c).unwrap();
        let rep = classify_subtracted(&ps).unwrap();
        let negative = prefactor_min(&ps) < -1e-9;
        assert_eq!(rep.wigner_negative.is_negative(), negative, "d0={d0} q={q}");
        assert!((negativity_margin(&ps) * ps.norm() - prefactor_min(&ps)).abs() < 1e-6);
    }
}

#[test]
fn two_mode_centred_uses_mvm() {
    for r in [0.05, 0.3, 0.8] {
        let g = make_sqth_product(0.2, r, 2).unwrap();
        let c = ModeVector::from_real(&[1.0, 1.0]).unwrap();
        let ps = PhotonTunedState::new(g, Sign::Subtract, c).unwrap();
        let rep = classify_subtracted(&ps).unwrap();
        assert_eq!(rep.wigner_negative.is_negative(), ps.mvm() > 1.0);
        assert_eq!(rep.wigner_negative.is_negative(), prefactor_min(&ps) < 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn single_mode_verdict_matches_sign_scan(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_single_mode_mother(&mut rng);
        let ps = PhotonTunedState::new(g, Sign::Subtract, ModeVector::basis(1, 0)).unwrap();
        let rep = classify_subtracted(&ps).unwrap();
        let scan = sign_scan_min_ratio(&ps, 121) < -1e-12;
        prop_assert_eq!(rep.wigner_negative.is_negative(), scan);
    }

    #[test]
    fn margin_sign_matches_lemma(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_single_mode_mother(&mut rng);
        let ps = PhotonTunedState::new(g, Sign::Subtract, ModeVector::basis(1, 0)).unwrap();
        let margin = negativity_margin(&ps);
        prop_assume!(margin.abs() > 1e-8);
        let rep = classify_subtracted(&ps).unwrap();
        prop_assert_eq!(rep.wigner_negative.is_negative(), margin < 0.0);
    }
}
