//! Quadrature coherence scale `C²` and related quantities.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::{integrate_poly_gaussian, poly_product, GaussianWeight, PolyExpr};
use crate::phase_space::{omega, GaussianState};
use crate::photon_ops::{PhotonTunedState, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QcsMethod {
    GaussianClosedForm,
    MomentEngine,
    PureStateTotalNoise,
}

impl QcsMethod {
    pub fn label(self) -> &'static str {
        match self {
            QcsMethod::GaussianClosedForm => "gaussian-closed-form",
            QcsMethod::MomentEngine => "moment-engine",
            QcsMethod::PureStateTotalNoise => "pure-state-total-noise",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QcsReport {
    pub qcs_squared: f64,
    pub method: QcsMethod,
    pub relative_gain: Option<f64>,
}

/// `C² = Tr V⁻¹ / 2n`.
pub fn qcs_gaussian(state: &GaussianState) -> QcsReport {
    QcsReport {
        qcs_squared: state.covariance_inverse().trace() / (2.0 * state.n() as f64),
        method: QcsMethod::GaussianClosedForm,
        relative_gain: None,
    }
}

/// `C² = ∫|ξ|²|P|²w / (n ∫|P|²w)` where `|χ|² = |P|² w` and `w = exp(-ξᵀΩVΩᵀξ)`.
fn l2_ratio(n: usize, p: &PolyExpr, state: &GaussianState) -> Result<f64> {
    let dim = 2 * n;
    let om = omega(n);
    let q = &om * state.covariance() * om.transpose();
    let w = GaussianWeight::new(q, DVector::zeros(dim), 1.0)?;
    let p2 = poly_product(&p.conj(), p)?;
    let num = integrate_poly_gaussian(&poly_product(&PolyExpr::norm_squared(dim), &p2)?, &w)?;
    let den = integrate_poly_gaussian(&p2, &w)?;
    Ok(num.re / (n as f64 * den.re))
}

/// Gaussian `C²` through the moment engine rather than the trace formula.
pub fn qcs_gaussian_moment(state: &GaussianState) -> Result<f64> {
    let dim = 2 * state.n();
    l2_ratio(state.n(), &PolyExpr::constant(dim, C64::new(1.0, 0.0)), state)
}

/// `C²(ρ±)` from the characteristic function, integrated exactly.
pub fn qcs_photon_tuned(ps: &PhotonTunedState) -> Result<QcsReport> {
    let p = ps.char_prefactor().to_poly();
    let c2 = l2_ratio(ps.n(), &p, ps.mother())?;
    let mother = qcs_gaussian(ps.mother()).qcs_squared;
    Ok(QcsReport {
        qcs_squared: c2,
        method: QcsMethod::MomentEngine,
        relative_gain: Some((c2 - mother) / mother),
    })
}

fn require_pure(state: &GaussianState) -> Result<()> {
    if (state.det_v() - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "total-noise formula needs a pure state, det V = {}",
            state.det_v()
        )));
    }
    Ok(())
}

/// `(1/n) Σ_k (Var x_k + Var p_k)` for a pure Gaussian state.
pub fn total_noise_gaussian(state: &GaussianState) -> Result<f64> {
    require_pure(state)?;
    Ok(state.covariance().trace() / (2.0 * state.n() as f64))
}

/// `C²` of a pure photon-added/subtracted state from its quadrature variances.
pub fn qcs_total_noise(ps: &PhotonTunedState) -> Result<QcsReport> {
    require_pure(ps.mother())?;
    let (mean, second) = ps.quadrature_moments()?;
    let var: f64 = (0..mean.len()).map(|i| second[(i, i)] - mean[i] * mean[i]).sum();
    let c2 = var / ps.n() as f64;
    let mother = qcs_gaussian(ps.mother()).qcs_squared;
    Ok(QcsReport {
        qcs_squared: c2,
        method: QcsMethod::PureStateTotalNoise,
        relative_gain: Some((c2 - mother) / mother),
    })
}

/// `R± = (C²(ρ±) - C²(ρ)) / C²(ρ)`.
pub fn relative_gain(ps: &PhotonTunedState) -> Result<f64> {
    let mother = qcs_gaussian(ps.mother()).qcs_squared;
    let tuned = qcs_photon_tuned(ps)?.qcs_squared;
    Ok((tuned - mother) / mother)
}

pub(crate) fn check_sqth_domain(q: f64, r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&q) || !q.is_finite() {
        return Err(Error::Domain(format!("q = {q} outside [0, 1)")));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("r = {r} must be nonnegative")));
    }
    Ok(())
}

/// Closed-form `C²` of the squeezed thermal state itself: `(1-q)/(1+q) cosh 2r`.
pub fn qcs_sqth(q: f64, r: f64) -> Result<f64> {
    check_sqth_domain(q, r)?;
    Ok((1.0 - q) / (1.0 + q) * (2.0 * r).cosh())
}

/// Closed-form `C²` of the photon-added (`Add`) or photon-subtracted squeezed thermal state.
pub fn qcs_closed_form_sqth(q: f64, r: f64, sign: Sign) -> Result<f64> {
    check_sqth_domain(q, r)?;
    let mu = (1.0 - q) / (1.0 + q);
    let (q2, q3, q4) = (q * q, q * q * q, q * q * q * q);
    match sign {
        Sign::Add => {
            let c = (2.0 * r).cosh();
            let s = (2.0 * r).sinh();
            let den = 2.0 * (1.0 - q4) * c
                + 2.0 * (1.0 + q2).powi(2)
                + (q4 + 10.0 * q2 + 1.0) * s * s;
            let num = -8.0 * q * (q2 - 1.0)
                + 3.0 * (q4 - 4.0 * q3 + 10.0 * q2 - 4.0 * q + 1.0) * c.powi(3)
                + 6.0 * (q - 1.0).powi(2) * (1.0 - q2) * c * c
                + (3.0 * q4 + 8.0 * q3 - 26.0 * q2 + 8.0 * q + 3.0) * c;
            Ok(mu * num / den)
        }
        Sign::Subtract => {
            if q == 0.0 && r == 0.0 {
                return Err(Error::AnnihilatingSubtraction {
                    kernel_vector: crate::phase_space::ModeVector::basis(1, 0)
                        .m_vector()
                        .iter()
                        .cloned()
                        .collect(),
                });
            }
            let (c2, c4, c6) = ((2.0 * r).cosh(), (4.0 * r).cosh(), (6.0 * r).cosh());
            let den = 4.0 * (q4 - 1.0) * c2 + 3.0 * q4 - 2.0 * q2
                + (q4 + 10.0 * q2 + 1.0) * c4
                + 3.0;
            let num = 12.0 * (q + 1.0) * (q - 1.0).powi(3) * c4
                + (21.0 * q4 - 4.0 * q3 - 14.0 * q2 - 4.0 * q + 21.0) * c2
                + 3.0 * (1.0 - 4.0 * q + 10.0 * q2 - 4.0 * q3 + q4) * c6
                + 4.0 * (q + 1.0) * (3.0 * q2 + 2.0 * q + 3.0) * (q - 1.0);
            Ok(mu * num / (2.0 * den))
        }
    }
}

/// Large-squeezing limit of `R±`: `2 - 12q(q²+1)/(q⁴+10q²+1)`.
pub fn relative_gain_limit(q: f64) -> f64 {
    2.0 - 12.0 * q * (q * q + 1.0) / (q.powi(4) + 10.0 * q * q + 1.0)
}

/// Thermal-state anchors: `C²_Th+` and `C²_Th-`.
pub fn qcs_thermal_added(q: f64) -> f64 {
    6.0 / (q + 1.0) - 1.0 - 2.0 * (q + 1.0) / (q * q + 1.0)
}

pub fn qcs_thermal_subtracted(q: f64) -> f64 {
    6.0 / (q + 1.0) - 3.0 - 2.0 * (1.0 - q) / (q * q + 1.0)
}

/// Purity half-life `½ t_R / ((2n̄∞ + 1) C² - 1)`.
pub fn purity_half_life(qcs_squared: f64, n_bar_env: f64, t_relax: f64) -> Result<f64> {
    let denom = (2.0 * n_bar_env + 1.0) * qcs_squared - 1.0;
    if !(denom > 0.0) || !(t_relax > 0.0) || n_bar_env < 0.0 {
        return Err(Error::Domain(format!(
            "half-life needs (2n+1)C^2 > 1 and t_R > 0, got (2n+1)C^2 = {}",
            denom + 1.0
        )));
    }
    Ok(0.5 * t_relax / denom)
}
