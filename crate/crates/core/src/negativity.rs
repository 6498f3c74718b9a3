//! Wigner negative volume, negative-region geometry and the non-Gaussianity witness.

use std::f64::consts::{PI, TAU};

use nalgebra::{DVector, Matrix2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::phase_space::ModeVector;
use crate::photon_ops::{PhotonTunedState, Sign};
use crate::qcs::check_sqth_domain;
use crate::quadrature::{adaptive_2d, escalate, gauss_legendre, pairwise_sum, RdSequence};
use crate::special::bessel_i0_scaled;
use crate::states::{make_sqth, make_sqth_product, Parity};

/// `2/√e - 1`, the negative volume of the one-photon Fock state.
pub fn fock_one_negative_volume() -> f64 {
    2.0 * (-0.5f64).exp() - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NegativeRegion {
    Empty,
    Ellipse { kappa_x: f64, kappa_p: f64 },
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NegativityMethod {
    EllipseQuadrature,
    FullPlaneQuadrature,
    RadialBessel,
    MonteCarlo,
    ClosedForm,
}

impl NegativityMethod {
    pub fn label(self) -> &'static str {
        match self {
            NegativityMethod::EllipseQuadrature => "ellipse-quadrature",
            NegativityMethod::FullPlaneQuadrature => "full-plane-quadrature",
            NegativityMethod::RadialBessel => "radial-bessel",
            NegativityMethod::MonteCarlo => "monte-carlo",
            NegativityMethod::ClosedForm => "closed-form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativityReport {
    pub volume: f64,
    pub method: NegativityMethod,
    pub error_estimate: f64,
}

/// Semi-axes of the negative ellipse of photon-added/subtracted squeezed thermal states.
pub fn negative_region_sqth(q: f64, r: f64, sign: Sign) -> Result<NegativeRegion> {
    check_sqth_domain(q, r)?;
    let (c2, ch, sh) = ((2.0 * r).cosh(), r.cosh(), r.sinh());
    match sign {
        Sign::Add => {
            let root = ((1.0 + q).powi(2) + (1.0 - q * q) * c2).sqrt();
            Ok(NegativeRegion::Ellipse {
                kappa_x: (-r).exp() * root / (2.0 * (ch - q * sh)),
                kappa_p: r.exp() * root / (2.0 * (ch + q * sh)),
            })
        }
        Sign::Subtract => {
            if q == 0.0 && r == 0.0 {
                return Err(Error::Domain(
                    "subtraction from the vacuum is undefined".into(),
                ));
            }
            if q >= r.tanh().powi(2) {
                return Ok(NegativeRegion::Empty);
            }
            let root = ((1.0 - q * q) * c2 - (1.0 + q).powi(2)).sqrt();
            Ok(NegativeRegion::Ellipse {
                kappa_x: (-r).exp() * root / (2.0 * (sh - q * ch).abs()),
                kappa_p: r.exp() * root / (2.0 * (sh + q * ch)),
            })
        }
    }
}

/// Integrates `W±` over its negative region for a single-mode state.
///
/// The region is the disk `|t|² < -M±` in `t = m̄ᵀλ±`, integrated in polar coordinates
/// with tensor Gauss–Legendre rules of increasing order.
pub fn negative_volume_single_mode(ps: &PhotonTunedState) -> Result<NegativityReport> {
    if ps.n() != 1 {
        return Err(Error::Domain(format!(
            "single-mode negative volume needs n = 1, got {}",
            ps.n()
        )));
    }
    let m = ps.m_effective();
    if m >= 0.0 {
        return Ok(NegativityReport {
            volume: 0.0,
            method: NegativityMethod::EllipseQuadrature,
            error_estimate: 0.0,
        });
    }
    let (w, e) = ps.lambda_projection();
    let l = Matrix2::new(w[0].re, w[1].re, w[0].im, w[1].im);
    let det = l.determinant();
    let scale = l.norm().max(f64::MIN_POSITIVE);
    let Some(l_inv) = l.try_inverse().filter(|_| det.abs() > 1e-12 * scale * scale) else {
        let v = negative_volume_full_plane(ps)?;
        return Ok(NegativityReport {
            volume: v,
            method: NegativityMethod::FullPlaneQuadrature,
            error_estimate: 1e-9,
        });
    };
    let shift = Vector2::new(e.re, e.im);
    let jac = 1.0 / det.abs();
    let rho0 = (-m).sqrt();
    let rule = |order: usize| {
        let (x, wts) = gauss_legendre(order);
        let mut acc = Vec::with_capacity(order * order);
        for (xi, wi) in x.iter().zip(&wts) {
            let rho = 0.5 * rho0 * (xi + 1.0);
            for (xj, wj) in x.iter().zip(&wts) {
                let th = PI * (xj + 1.0);
                let t = Vector2::new(rho * th.cos(), rho * th.sin());
                let rv = l_inv * (t + shift);
                let val = ps.wigner(&DVector::from_column_slice(rv.as_slice()));
                acc.push(wi * wj * val.min(0.0) * rho);
            }
        }
        -pairwise_sum(&acc) * 0.5 * rho0 * PI * jac
    };
    let res = escalate(rule, 1e-6, 256, "single-mode negative volume")?;
    Ok(NegativityReport {
        volume: res.value,
        method: NegativityMethod::EllipseQuadrature,
        error_estimate: res.error,
    })
}

/// Box `d ± 9σ` in whitened coordinates `r = d + C u` with `C Cᵀ = V/2`.
fn whitened_integral<F: Fn(f64) -> f64>(ps: &PhotonTunedState, f: F, tol: f64) -> Result<f64> {
    let g = ps.mother();
    let half_v = g.covariance() * 0.5;
    let chol = half_v.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let c = chol.l();
    let jac = c.determinant().abs();
    let d = g.displacement().clone();
    let integrand = |u1: f64, u2: f64| {
        let r = &d + &c * DVector::from_vec(vec![u1, u2]);
        f(ps.wigner(&r)) * jac
    };
    adaptive_2d(&integrand, (-9.0, 9.0), (-9.0, 9.0), tol)
}

/// `-∫ min(W±, 0)` by adaptive quadrature over the whole plane.
pub fn negative_volume_full_plane(ps: &PhotonTunedState) -> Result<f64> {
    if ps.n() != 1 {
        return Err(Error::Domain("full-plane quadrature needs n = 1".into()));
    }
    Ok(-whitened_integral(ps, |w| w.min(0.0), 1e-11)?)
}

/// `½(∫|W±| - 1)` by adaptive quadrature over the whole plane.
pub fn negative_volume_abs_identity(ps: &PhotonTunedState) -> Result<f64> {
    if ps.n() != 1 {
        return Err(Error::Domain("full-plane quadrature needs n = 1".into()));
    }
    Ok(0.5 * (whitened_integral(ps, f64::abs, 1e-11)? - 1.0))
}

/// Normalization `∫ W±` over the plane, by adaptive quadrature.
pub fn wigner_total(ps: &PhotonTunedState) -> Result<f64> {
    whitened_integral(ps, |w| w, 1e-11)
}

/// Negative volume of the photon-added squeezed thermal state as `r → ∞`:
/// `(μ³/π) ∫₀^{2π} [1/(2a) - (1 - e^{-a/2})/a²] dθ`, `a = cos²θ + μ² sin²θ`.
pub fn negative_volume_asymptotic(q: f64) -> Result<f64> {
    check_sqth_domain(q, 0.0)?;
    let mu = (1.0 - q) / (1.0 + q);
    let f = |th: f64| {
        let a = th.cos().powi(2) + mu * mu * th.sin().powi(2);
        0.5 / a - (-(-0.5 * a).exp_m1()) / (a * a)
    };
    let rule = |n: usize| crate::quadrature::gl_integrate(f, 0.0, TAU, n);
    let res = escalate(rule, 1e-13, 256, "asymptotic negative volume")?;
    Ok(mu.powi(3) / PI * res.value)
}

/// Small-`q` approximation `(2/√e - 1) μ³`.
pub fn negative_volume_asymptotic_approx(q: f64) -> f64 {
    let mu = (1.0 - q) / (1.0 + q);
    fock_one_negative_volume() * mu.powi(3)
}

/// Negative volume of the photon-added two-mode coherent states.
pub fn negative_volume_even_odd(alpha: f64, parity: Parity) -> Result<NegativityReport> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha = {alpha} must be nonnegative")));
    }
    match parity {
        Parity::Odd => Ok(NegativityReport {
            volume: fock_one_negative_volume(),
            method: NegativityMethod::ClosedForm,
            error_estimate: 0.0,
        }),
        Parity::Even => {
            // e^{-r²-α²} I₀(2rα) = e^{-(r-α)²} · e^{-2rα} I₀(2rα)
            let f = |r: f64| {
                (-(r - alpha).powi(2)).exp() * r * (1.0 - 2.0 * r * r) * bessel_i0_scaled(2.0 * r * alpha)
            };
            let b = std::f64::consts::FRAC_1_SQRT_2;
            let rule = |n: usize| crate::quadrature::gl_integrate(f, 0.0, b, n);
            let res = escalate(rule, 1e-14, 256, "even-state negative volume")?;
            let pref = 2.0 / (1.0 + 2.0 * alpha * alpha);
            Ok(NegativityReport {
                volume: pref * res.value,
                method: NegativityMethod::RadialBessel,
                error_estimate: pref * res.error,
            })
        }
    }
}

/// Monte Carlo settings for two-mode volumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub seed: u64,
    /// Target standard error.
    pub tol: f64,
    pub max_points: usize,
    /// Number of independent random shifts of the point set.
    pub replicates: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            tol: 5e-4,
            max_points: 1 << 21,
            replicates: 16,
        }
    }
}

/// Two-mode negative volume by randomized quasi Monte Carlo.
///
/// Points `r ~ N(d, V/2)` come from the additive-recurrence sequence with independent
/// Cranley–Patterson shifts; the spread across shifts gives the standard error.
pub fn negative_volume_two_mode(ps: &PhotonTunedState, cfg: &McConfig) -> Result<NegativityReport> {
    if ps.n() != 2 {
        return Err(Error::Domain(format!("two-mode volume needs n = 2, got {}", ps.n())));
    }
    if cfg.replicates < 2 {
        return Err(Error::Domain("at least two replicates are needed".into()));
    }
    let g = ps.mother();
    let chol = (g.covariance() * 0.5)
        .cholesky()
        .ok_or(Error::NotPositiveDefinite)?;
    let c = chol.l();
    let d = g.displacement().clone();
    let (w, e) = ps.lambda_projection();
    let m = ps.m_effective();
    let norm = ps.norm();
    if m >= 0.0 {
        return Ok(NegativityReport {
            volume: 0.0,
            method: NegativityMethod::MonteCarlo,
            error_estimate: 0.0,
        });
    }
    // t = wᵀ(d + C z) - e = w_cᵀ z + t0
    let wc: Vec<_> = (0..4)
        .map(|j| (0..4).map(|i| w[i] * c[(i, j)]).sum::<num_complex::Complex64>())
        .collect();
    let t0 = (0..4).map(|i| w[i] * d[i]).sum::<num_complex::Complex64>() - e;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let shifts: Vec<[f64; 4]> = (0..cfg.replicates)
        .map(|_| std::array::from_fn(|_| rng.random::<f64>()))
        .collect();
    let seq = RdSequence::new(4);
    let normal = Normal::standard();

    let replicate_mean = |shift: &[f64; 4], npts: usize| -> f64 {
        let mut u = [0.0; 4];
        let block = 4096;
        let mut partial = Vec::with_capacity(npts.div_ceil(block));
        for start in (0..npts).step_by(block) {
            let mut acc = 0.0;
            for k in start..(start + block).min(npts) {
                seq.point(k as u64, shift, &mut u);
                let mut t = t0;
                for j in 0..4 {
                    let z = normal.inverse_cdf(u[j].clamp(1e-16, 1.0 - 1e-16));
                    t += wc[j] * z;
                }
                acc += (m + t.norm_sqr()).min(0.0);
            }
            partial.push(acc);
        }
        -norm * pairwise_sum(&partial) / npts as f64
    };

    let mut npts = 1 << 13;
    loop {
        let means: Vec<f64> = shifts.par_iter().map(|s| replicate_mean(s, npts)).collect();
        let k = means.len() as f64;
        let mean = pairwise_sum(&means) / k;
        let var = means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        let stderr = (var / k).sqrt();
        if stderr <= cfg.tol {
            return Ok(NegativityReport {
                volume: mean,
                method: NegativityMethod::MonteCarlo,
                error_estimate: stderr,
            });
        }
        if npts >= cfg.max_points {
            return Err(Error::NonConvergence {
                what: "two-mode negative volume",
                estimate: mean,
                error: stderr,
            });
        }
        npts = (npts * 4).min(cfg.max_points);
    }
}

/// Two-mode volume for a photon added to a product of identical squeezed thermal modes.
pub fn negative_volume_two_mode_sqthp(
    q: f64,
    r: f64,
    c: &ModeVector,
    cfg: &McConfig,
) -> Result<NegativityReport> {
    let mother = make_sqth_product(q, r, 2)?;
    let ps = PhotonTunedState::new(mother, Sign::Add, c.clone())?;
    negative_volume_two_mode(&ps, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QngReport {
    pub certified: bool,
    pub wigner_origin: f64,
    pub bound: f64,
    pub mean_photon_number: f64,
}

/// Witness `W(0) ≤ (1/π) e^{-2n̄(1+n̄)}` for single-mode centred states. Certifies quantum
/// non-Gaussianity when it holds; inconclusive otherwise.
pub fn qng_witness(ps: &PhotonTunedState) -> Result<QngReport> {
    if ps.n() != 1 {
        return Err(Error::Domain("witness needs a single-mode state".into()));
    }
    if ps.mother().displacement().norm() > 1e-12 {
        return Err(Error::Domain("witness needs a centred mother state".into()));
    }
    let nbar = ps.mean_photon_number()?;
    let w0 = ps.wigner(&DVector::zeros(2));
    let bound = (-2.0 * nbar * (1.0 + nbar)).exp() / PI;
    Ok(QngReport {
        certified: w0 <= bound,
        wigner_origin: w0,
        bound,
        mean_photon_number: nbar,
    })
}

/// Mean photon number of the photon-subtracted squeezed thermal state.
pub fn mean_photon_number_sqth_minus(q: f64, r: f64) -> Result<f64> {
    check_sqth_domain(q, r)?;
    if q == 0.0 && r == 0.0 {
        return Err(Error::Domain("subtraction from the vacuum is undefined".into()));
    }
    let c = (2.0 * r).cosh();
    let inner = (3.0 * (1.0 + q) * c - 4.0 * q / ((1.0 + q) * c - (1.0 - q))) / (1.0 - q);
    Ok(0.5 * (inner - 1.0))
}

/// `W(0) - (1/π)e^{-2n̄(1+n̄)}` for the photon-subtracted squeezed thermal state.
pub fn qng_margin_sqth_minus(q: f64, r: f64) -> Result<f64> {
    let ps = PhotonTunedState::new(make_sqth(q, r)?, Sign::Subtract, ModeVector::basis(1, 0))?;
    let rep = qng_witness(&ps)?;
    Ok(rep.wigner_origin - rep.bound)
}

/// Smallest squeezing above which the photon-subtracted squeezed thermal state is
/// certified by the witness, at fixed `q`.
pub fn qng_saturation_sqth_minus(q: f64) -> Result<f64> {
    check_sqth_domain(q, 0.0)?;
    let mut lo = if q == 0.0 { 1e-6 } else { 0.0 };
    let mut flo = qng_margin_sqth_minus(q, lo)?;
    if flo <= 0.0 {
        return Ok(lo);
    }
    let step = 0.01;
    let mut hi = lo;
    loop {
        hi += step;
        if hi > 10.0 {
            return Err(Error::NonConvergence {
                what: "witness saturation bracket",
                estimate: hi,
                error: f64::NAN,
            });
        }
        let fhi = qng_margin_sqth_minus(q, hi)?;
        if fhi <= 0.0 {
            break;
        }
        lo = hi;
        flo = fhi;
    }
    debug_assert!(flo > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if qng_margin_sqth_minus(q, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
