use std::f64::consts::LN_2;

use gausspm::phase_space::ModeVector;
use gausspm::states::*;
use gausspm::Error;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

#[test]
fn sqth_domain() {
    assert!(matches!(make_sqth(-0.1, 0.0), Err(Error::Domain(_))));
    assert!(matches!(make_sqth(1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(make_sqth(0.5, f64::NAN), Err(Error::Domain(_))));
    let p = make_sqth_product(0.3, 0.4, 3).unwrap();
    assert_eq!(p.n(), 3);
    assert!((p.det_v() - make_sqth(0.3, 0.4).unwrap().det_v().powi(3)).abs() < 1e-10);
    assert!(make_coherent(&[]).is_err());
}

#[test]
fn odd_family_constants() {
    for a in [0.0, 1.0, 3.0] {
        let s = TwoModeCoherentPlus::new(C64::new(a, 0.0), Parity::Odd);
        let sc = s.scalars().unwrap();
        assert!((sc.qcs_squared - 2.0).abs() < 1e-10);
        assert_eq!(sc.npt, 1.0);
        assert!((sc.eof - EOF_ODD).abs() < 1e-12);
        assert_eq!(s.normalization(), 1.0);
        assert!((s.npt_schmidt() - 1.0).abs() < 1e-12);
    }
    assert_eq!(EOF_ODD, LN_2);
}

#[test]
fn even_family_values() {
    let s = TwoModeCoherentPlus::new(C64::new(1.0, 0.0), Parity::Even);
    assert!((s.npt() - 0.5).abs() < 1e-15);
    assert!((s.normalization() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    assert!((s.qcs_closed_form() - (1.0 + 1.0 / 9.0)).abs() < 1e-15);
    let sc = even_odd_scalars(&s).unwrap();
    assert!((sc.qcs_squared - s.qcs_closed_form()).abs() < 1e-10);
    // at α = 0 the even state is |1,0⟩ + |0,1⟩ up to normalization: maximally entangled qubits
    let z = TwoModeCoherentPlus::new(C64::new(0.0, 0.0), Parity::Even);
    assert!((z.eof() - LN_2).abs() < 1e-12);
    assert!((z.npt() - 1.0).abs() < 1e-15);
}

#[test]
fn two_mode_sqthp_anchor() {
    let avg = two_mode_sqthp_qcs_average(0.2, 0.5).unwrap();
    assert!((avg - 1.54).abs() < 0.01);
    let c = ModeVector::from_real(&[1.0, 0.0]).unwrap();
    assert!((two_mode_sqthp_qcs(0.2, 0.5, &c).unwrap() - avg).abs() < 1e-10);
    assert!(two_mode_sqthp_qcs(0.2, 0.5, &ModeVector::basis(1, 0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // the identical product is invariant under real mode rotations; a global phase is irrelevant
    #[test]
    fn two_mode_sqthp_qcs_independent_of_real_c(q in 0.0f64..0.8, r in 0.0f64..1.5,
                                                 theta in 0.0f64..6.3, phi in 0.0f64..6.3) {
        let g = C64::from_polar(1.0, phi);
        let mv = ModeVector::normalized(vec![g * theta.cos(), g * theta.sin()]).unwrap();
        let a = two_mode_sqthp_qcs(q, r, &mv).unwrap();
        let b = two_mode_sqthp_qcs_average(q, r).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * b);
    }

    #[test]
    fn reduced_spectrum_is_a_distribution(a in 0.0f64..4.0, phase in 0.0f64..6.3, odd in any::<bool>()) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let s = TwoModeCoherentPlus::new(C64::from_polar(a, phase), parity);
        let [l1, l2] = s.reduced_eigenvalues();
        prop_assert!((l1 + l2 - 1.0).abs() < 1e-10);
        prop_assert!(l1 >= -1e-12 && l2 >= -1e-12);
        prop_assert!(s.eof() <= LN_2 + 1e-12);
        prop_assert!((s.qcs_closed_form() - s.scalars().unwrap().qcs_squared).abs() < 1e-9);
    }

    #[test]
    fn even_npt_decreases(a in 0.0f64..3.0, da in 0.01f64..1.0) {
        let lo = TwoModeCoherentPlus::new(C64::new(a, 0.0), Parity::Even);
        let hi = TwoModeCoherentPlus::new(C64::new(a + da, 0.0), Parity::Even);
        prop_assert!(hi.npt() < lo.npt());
        prop_assert!(hi.npt_schmidt() < lo.npt_schmidt());
    }
}
