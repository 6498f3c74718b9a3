#![allow(dead_code)]

use gausspm::phase_space::omega;
use gausspm::quadrature::gauss_legendre;
use gausspm::{GaussianState, PhotonTunedState};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// `W(r) = (2π²)^{-1} ∫ χ(ξ) e^{i√2 (Ωr)ᵀξ} dξ` for one mode, by tensor Gauss–Legendre
/// in coordinates where the Gaussian envelope of `χ` is isotropic.
pub fn wigner_from_char<F: Fn(&DVector<f64>) -> C64>(chi: F, v: &DMatrix<f64>, r: &DVector<f64>) -> f64 {
    let om = omega(1);
    let q = &om * v * om.transpose();
    let l = q.try_inverse().unwrap().cholesky().unwrap().l();
    let jac = l.determinant().abs();
    let (x, w) = gauss_legendre(160);
    let half = 10.0;
    let or = &om * r;
    let mut acc = C64::new(0.0, 0.0);
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in x.iter().enumerate() {
            let eta = DVector::from_vec(vec![half * a, half * b]);
            let xi = &l * eta;
            let phase = C64::new(0.0, std::f64::consts::SQRT_2 * or.dot(&xi)).exp();
            acc += chi(&xi) * phase * (w[i] * w[j]);
        }
    }
    (acc * half * half * jac).re / (2.0 * std::f64::consts::PI.powi(2))
}

pub fn single_mode_state(v: [f64; 3], d: [f64; 2]) -> GaussianState {
    GaussianState::new(
        DMatrix::from_row_slice(2, 2, &[v[0], v[1], v[1], v[2]]),
        DVector::from_vec(d.to_vec()),
    )
    .unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

pub fn check_fourier(ps: &PhotonTunedState, points: &[[f64; 2]], tol: f64) {
    for p in points {
        let r = DVector::from_vec(p.to_vec());
        let direct = ps.wigner(&r);
        let fourier = wigner_from_char(|xi| ps.char_xi(xi), ps.mother().covariance(), &r);
        assert!((direct - fourier).abs() < tol, "r={p:?}: {direct} vs {fourier}");
    }
}
