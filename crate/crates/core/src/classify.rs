//! Classicality, strong nonclassicality and Wigner-negativity predicates.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase_space::GaussianState;
use crate::photon_ops::{PhotonTunedState, Sign};
use crate::qcs::{check_sqth_domain, qcs_gaussian, qcs_photon_tuned};

const CLASSICAL_TOL: f64 = 1e-10;
const DEGENERACY_TOL: f64 = 1e-9;
const QCS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Negative,
    Positive,
    Unknown,
}

impl Verdict {
    fn from_bool(negative: bool) -> Self {
        if negative {
            Verdict::Negative
        } else {
            Verdict::Positive
        }
    }

    pub fn is_negative(self) -> bool {
        self == Verdict::Negative
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessValues {
    pub min_eig_v_minus_i: f64,
    pub qcs_squared: f64,
    pub mother_qcs_squared: f64,
    pub mvm: Option<f64>,
    pub v1: f64,
    pub d_proj: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub classical: bool,
    pub strongly_nonclassical: bool,
    pub wigner_negative: Verdict,
    pub witness_values: WitnessValues,
}

pub fn classify_gaussian(state: &GaussianState) -> ClassificationReport {
    let (min_eig, _) = state.min_eig_v_minus_i();
    let c2 = qcs_gaussian(state).qcs_squared;
    ClassificationReport {
        classical: min_eig >= -CLASSICAL_TOL,
        strongly_nonclassical: c2 > 1.0 + QCS_TOL,
        wigner_negative: Verdict::Positive,
        witness_values: WitnessValues {
            min_eig_v_minus_i: min_eig,
            qcs_squared: c2,
            mother_qcs_squared: c2,
            mvm: None,
            v1: min_eig + 1.0,
            d_proj: None,
        },
    }
}

/// Exact negativity test: `W₋` is negative somewhere iff `M + min_r |Lr - e|² < 0`,
/// with the minimum computed as a least-squares residual. Returns the margin.
pub fn negativity_margin(ps: &PhotonTunedState) -> f64 {
    let (w, e) = ps.lambda_projection();
    let dim = w.len();
    let l = DMatrix::from_fn(2, dim, |i, j| if i == 0 { w[j].re } else { w[j].im });
    let rhs = DVector::from_vec(vec![e.re, e.im]);
    let svd = l.clone().svd(true, true);
    let tol = 1e-12 * svd.singular_values.max().max(1.0);
    let residual = match svd.solve(&rhs, tol) {
        Ok(x) => (&l * x - &rhs).norm_squared(),
        Err(_) => rhs.norm_squared(),
    };
    ps.m_constant() + residual
}

pub fn classify_subtracted(ps: &PhotonTunedState) -> Result<ClassificationReport> {
    if ps.sign() != Sign::Subtract {
        return Err(Error::Domain("expected a photon-subtracted state".into()));
    }
    let mother = ps.mother();
    let g = classify_gaussian(mother);
    let (min_eig, e1) = mother.min_eig_v_minus_i();
    let v1 = min_eig + 1.0;
    let mother_c2 = g.witness_values.qcs_squared;
    let c2 = qcs_photon_tuned(ps)?.qcs_squared;
    let mvm = ps.mvm();
    let d = mother.displacement();
    let d_proj = d.dot(&e1).powi(2);
    let n = mother.n();

    let wigner_negative = if n == 1 {
        if (v1 - 1.0).abs() < DEGENERACY_TOL {
            Verdict::from_bool(mother_c2 > 1.0 + d_proj)
        } else if v1 < 1.0 {
            Verdict::from_bool(mother_c2 > 1.0)
        } else {
            Verdict::Positive
        }
    } else {
        let one_in_spec = mother
            .covariance()
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .any(|&v| (v - 1.0).abs() < DEGENERACY_TOL);
        if d.norm() < 1e-12 || !one_in_spec {
            Verdict::from_bool(mvm > 1.0)
        } else {
            let margin = negativity_margin(ps);
            if margin < -1e-10 {
                Verdict::Negative
            } else if margin > 1e-10 {
                Verdict::Positive
            } else {
                Verdict::Unknown
            }
        }
    };

    Ok(ClassificationReport {
        classical: g.classical,
        strongly_nonclassical: c2 > 1.0 + QCS_TOL,
        wigner_negative,
        witness_values: WitnessValues {
            min_eig_v_minus_i: min_eig,
            qcs_squared: c2,
            mother_qcs_squared: mother_c2,
            mvm: Some(mvm),
            v1,
            d_proj: Some(d_proj),
        },
    })
}

pub fn classify_added(ps: &PhotonTunedState) -> Result<ClassificationReport> {
    if ps.sign() != Sign::Add {
        return Err(Error::Domain("expected a photon-added state".into()));
    }
    let g = classify_gaussian(ps.mother());
    let c2 = qcs_photon_tuned(ps)?.qcs_squared;
    Ok(ClassificationReport {
        classical: false,
        strongly_nonclassical: c2 > 1.0 + QCS_TOL,
        wigner_negative: Verdict::Negative,
        witness_values: WitnessValues {
            min_eig_v_minus_i: g.witness_values.min_eig_v_minus_i,
            qcs_squared: c2,
            mother_qcs_squared: g.witness_values.qcs_squared,
            mvm: Some(ps.mvm()),
            v1: g.witness_values.v1,
            d_proj: None,
        },
    })
}

pub fn classify(ps: &PhotonTunedState) -> Result<ClassificationReport> {
    match ps.sign() {
        Sign::Add => classify_added(ps),
        Sign::Subtract => classify_subtracted(ps),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryLines {
    pub r_classical: f64,
    pub r_qcs_one: f64,
}

/// Classicality line `½ ln((1+q)/(1-q))` and unit-QCS line `½ arccosh((1+q)/(1-q))`.
pub fn boundary_lines(q: f64) -> Result<BoundaryLines> {
    check_sqth_domain(q, 0.0)?;
    let nu = (1.0 + q) / (1.0 - q);
    Ok(BoundaryLines {
        r_classical: 0.5 * nu.ln(),
        r_qcs_one: 0.5 * nu.acosh(),
    })
}
