//! Single-photon addition and subtraction on Gaussian states.

use std::f64::consts::SQRT_2;
use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::moments::{integrate_poly_gaussian, GaussianWeight, PolyExpr};
use crate::phase_space::{omega, z_to_xi, GaussianState, ModeVector};

/// Offset added to `M±` in [`PhotonTunedState::wigner`]; zero except in mutation tests.
static M_PERTURBATION: AtomicU64 = AtomicU64::new(0);

/// Sets a debug offset on the constant `M±`. Used by `selftest --perturb-m`.
pub fn set_m_perturbation(delta: f64) {
    M_PERTURBATION.store(delta.to_bits(), Ordering::Relaxed);
}

fn m_perturbation() -> f64 {
    f64::from_bits(M_PERTURBATION.load(Ordering::Relaxed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Add,
    Subtract,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Add => 1.0,
            Sign::Subtract => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sign::Add => "add",
            Sign::Subtract => "subtract",
        }
    }
}

/// `c + lᵀx + xᵀAx` with complex coefficients.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    pub constant: C64,
    pub linear: DVector<C64>,
    pub quadratic: DMatrix<C64>,
}

impl QuadraticForm {
    pub fn eval(&self, x: &DVector<f64>) -> C64 {
        let xc = x.map(|v| C64::new(v, 0.0));
        self.constant + self.linear.dot(&xc) + xc.dot(&(&self.quadratic * &xc))
    }

    pub fn to_poly(&self) -> PolyExpr {
        PolyExpr::quadratic(self.constant, &self.linear, &self.quadratic)
    }
}

fn cplx(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

fn cplx_v(v: &DVector<f64>) -> DVector<C64> {
    v.map(|x| C64::new(x, 0.0))
}

/// `m̄ᵀ A m` for a real matrix `A`.
fn herm_form(m: &DVector<C64>, a: &DMatrix<f64>) -> C64 {
    m.dotc(&(cplx(a) * m))
}

/// True when `a(c) ρ a†(c) = 0`: `m_c ∈ Ker(V - I)` and `m̄_c · d = 0`.
pub fn is_annihilating(mother: &GaussianState, c: &ModeVector) -> bool {
    assert_eq!(mother.n(), c.n(), "mode count mismatch");
    let m = c.m_vector();
    let v = mother.covariance();
    let dim = v.nrows();
    let vm_i = cplx(&(v - DMatrix::identity(dim, dim)));
    let kernel = (vm_i * &m).norm() <= 1e-9 * v.norm();
    let md = m.dotc(&cplx_v(mother.displacement())).norm();
    let orth = md <= 1e-9 * mother.displacement().norm().max(1.0);
    kernel && orth
}

/// A photon-added (`Add`) or photon-subtracted (`Subtract`) Gaussian state.
#[derive(Debug, Clone)]
pub struct PhotonTunedState {
    mother: GaussianState,
    sign: Sign,
    c: ModeVector,
    m: DVector<C64>,
    norm: f64,
    // char prefactor: c0 - (uᵀξ + κ)(ūᵀξ + κ')
    c0: f64,
    u: DVector<C64>,
    kappa: C64,
    kappa_p: C64,
    // Wigner prefactor: M + (gᵀr - μ)(ḡᵀr - μ̄)
    m_const: f64,
    g: DVector<C64>,
    mu: C64,
}

impl PhotonTunedState {
    pub fn new(mother: GaussianState, sign: Sign, c: ModeVector) -> Result<Self> {
        if mother.n() != c.n() {
            return Err(Error::InvalidModeVector(format!(
                "mode vector has {} entries, state has {} modes",
                c.n(),
                mother.n()
            )));
        }
        let m = c.m_vector();
        if sign == Sign::Subtract && is_annihilating(&mother, &c) {
            return Err(Error::AnnihilatingSubtraction {
                kernel_vector: m.iter().cloned().collect(),
            });
        }
        let n = mother.n();
        let dim = 2 * n;
        let s = sign.value();
        let v = mother.covariance();
        let om = omega(n);
        let od = &om * mother.displacement();
        let odc = cplx_v(&od);

        let c0 = 0.5 * herm_form(&m, v).re + 0.5 * s;
        let pd = odc.dot(&m);
        let denom = c0 + pd.norm_sqr();
        if !(denom > 0.0 && denom.is_finite()) {
            return Err(Error::AnnihilatingSubtraction {
                kernel_vector: m.iter().cloned().collect(),
            });
        }
        let norm = 1.0 / denom;

        let b = (&om * v * &om - DMatrix::identity(dim, dim) * s) / SQRT_2;
        let u = cplx(&b) * &m;
        let i = C64::new(0.0, 1.0);
        // with χ^G ∝ exp(-i√2(Ωd)ᵀξ) the derivative operator yields -i(Ωd)ᵀm here
        let kappa = -i * pd;
        let kappa_p = -i * odc.dot(&m.conjugate());

        let v_inv = mother.covariance_inverse();
        let m_const = -0.5 * s - 0.5 * herm_form(&m, v_inv).re;
        let a = v_inv + DMatrix::identity(dim, dim) * s;
        let g = cplx(&a) * &m;
        let mu = m.dot(&cplx_v(&(v_inv * mother.displacement())));

        Ok(Self {
            mother,
            sign,
            c,
            m,
            norm,
            c0,
            u,
            kappa,
            kappa_p,
            m_const,
            g,
            mu,
        })
    }

    pub fn mother(&self) -> &GaussianState {
        &self.mother
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn mode_vector(&self) -> &ModeVector {
        &self.c
    }

    pub fn m_vector(&self) -> &DVector<C64> {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.mother.n()
    }

    /// `N±`, fixed by `χ±(0) = 1`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `M± = ∓½ - ½ m̄ᵀV⁻¹m` (without the debug offset).
    pub fn m_constant(&self) -> f64 {
        self.m_const
    }

    /// `M±` plus the debug offset; what [`Self::wigner`] actually uses.
    pub(crate) fn m_effective(&self) -> f64 {
        self.m_const + m_perturbation()
    }

    /// `m̄ᵀV⁻¹m`.
    pub fn mvm(&self) -> f64 {
        herm_form(&self.m, self.mother.covariance_inverse()).re
    }

    /// Polynomial prefactor `P` with `χ±(ξ) = P(ξ) χ^G(ξ)`, including `N±`.
    pub fn char_prefactor(&self) -> QuadraticForm {
        let nn = C64::new(self.norm, 0.0);
        let ub = self.u.conjugate();
        let outer = &self.u * ub.transpose();
        let sym = (&outer + outer.transpose()) * C64::new(0.5, 0.0);
        QuadraticForm {
            constant: nn * (C64::new(self.c0, 0.0) - self.kappa * self.kappa_p),
            linear: -(&self.u * self.kappa_p + &ub * self.kappa) * nn,
            quadratic: -sym * nn,
        }
    }

    /// Polynomial prefactor `R` with `W±(r) = R(r) W^G(r)`, including `N±`.
    pub fn wigner_prefactor(&self) -> QuadraticForm {
        let nn = C64::new(self.norm, 0.0);
        let gb = self.g.conjugate();
        let outer = &self.g * gb.transpose();
        let sym = outer.map(|z| C64::new(z.re, 0.0));
        QuadraticForm {
            constant: nn * (self.m_const + self.mu.norm_sqr()),
            linear: -(&self.g * self.mu.conj() + &gb * self.mu) * nn,
            quadratic: sym * nn,
        }
    }

    pub fn char_xi(&self, xi: &DVector<f64>) -> C64 {
        let xc = cplx_v(xi);
        let a = self.u.dot(&xc) + self.kappa;
        let b = self.u.conjugate().dot(&xc) + self.kappa_p;
        (C64::new(self.c0, 0.0) - a * b) * self.norm * self.mother.char_xi(xi)
    }

    pub fn char_pm(&self, z: &[C64]) -> C64 {
        self.char_xi(&z_to_xi(z))
    }

    pub fn wigner(&self, r: &DVector<f64>) -> f64 {
        let t = self.g.dot(&cplx_v(r)) - self.mu;
        let mut val = C64::new(self.m_effective(), 0.0) + t * t.conj();
        // m̄ᵀV⁻¹m is a Hermitian form, so any imaginary part is a transcription bug
        debug_assert!(val.im.abs() < 1e-12 * val.norm().max(1.0));
        val.im = 0.0;
        self.norm * val.re * self.mother.gaussian_wigner(r)
    }

    /// Complex `t = m̄ᵀλ±` written as `wᵀr - e` with `w = (V⁻¹ ± I) m̄`.
    pub(crate) fn lambda_projection(&self) -> (DVector<C64>, C64) {
        (self.g.conjugate(), self.mu.conj())
    }

    /// `∫ p(r) W±(r) dr` by the moment engine.
    pub fn wigner_expectation(&self, p: &PolyExpr) -> Result<C64> {
        let pref = self.wigner_prefactor().to_poly();
        let full = crate::moments::poly_product(&pref, p)?;
        let w = GaussianWeight::new(
            self.mother.covariance_inverse().clone(),
            self.mother.displacement().clone(),
            1.0 / self.mother.wigner_scale_inv(),
        )?;
        integrate_poly_gaussian(&full, &w)
    }

    /// First and second moments of the quadratures: `(mean, E[r rᵀ])`.
    pub fn quadrature_moments(&self) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let dim = 2 * self.n();
        let mut mean = DVector::zeros(dim);
        let mut second = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let xi = PolyExpr::var(dim, i);
            mean[i] = self.wigner_expectation(&xi)?.re;
            for j in i..dim {
                let p = crate::moments::poly_product(&xi, &PolyExpr::var(dim, j))?;
                let v = self.wigner_expectation(&p)?.re;
                second[(i, j)] = v;
                second[(j, i)] = v;
            }
        }
        Ok((mean, second))
    }

    /// `⟨a†a⟩` summed over modes, from the Wigner second moments.
    pub fn mean_photon_number(&self) -> Result<f64> {
        let (_, second) = self.quadrature_moments()?;
        Ok(0.5 * second.trace() - 0.5 * self.n() as f64)
    }
}

/// Central-difference evaluation of `-[c·(∂_z ∓ z̄/2)][c̄·(∂_z̄ ∓ z/2)] χ`, normalized to
/// one at `z = 0`. Only meant as an independent oracle for [`PhotonTunedState::char_pm`].
pub fn general_char_derivative_form<F>(
    chi: F,
    c: &ModeVector,
    sign: Sign,
    z: &[C64],
    h: f64,
) -> Result<C64>
where
    F: Fn(&[C64]) -> C64,
{
    if !(h >= 1e-7) || !h.is_finite() {
        return Err(Error::StepUnderflow { step: h });
    }
    let raw = |zz: &[C64]| raw_operator(&chi, c, sign, zz, h);
    let zero = vec![C64::new(0.0, 0.0); z.len()];
    let denom = raw(&zero);
    if denom.norm() < 1e-300 {
        return Err(Error::AnnihilatingSubtraction {
            kernel_vector: c.m_vector().iter().cloned().collect(),
        });
    }
    Ok(raw(z) / denom)
}

fn raw_operator<F>(chi: &F, c: &ModeVector, sign: Sign, z: &[C64], h: f64) -> C64
where
    F: Fn(&[C64]) -> C64,
{
    let n = z.len();
    let xi0 = z_to_xi(z);
    let f = |xi: &DVector<f64>| chi(&crate::phase_space::xi_to_z(xi));
    let (grad, hess) = richardson_derivatives(&f, &xi0, h);
    let i = C64::new(0.0, 1.0);
    let half = C64::new(0.5, 0.0);
    // ∂_{z_j} = ½(∂_x - i∂_p), ∂_{z̄_k} = ½(∂_x + i∂_p)
    let dz = |j: usize| (grad[2 * j] - i * grad[2 * j + 1]) * half;
    let dzb = |k: usize| (grad[2 * k] + i * grad[2 * k + 1]) * half;
    let dz_dzb = |j: usize, k: usize| {
        let (xj, pj, xk, pk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
        (hess[(xj, xk)] + i * hess[(xj, pk)] - i * hess[(pj, xk)] + hess[(pj, pk)]) * 0.25
    };
    let f0 = f(&xi0);
    let eps = -sign.value();
    let cs = c.as_slice();
    let mut total = C64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            let w = cs[j] * cs[k].conj();
            let delta = if j == k { f0 } else { C64::new(0.0, 0.0) };
            let term = dz_dzb(j, k)
                + (delta + z[k] * dz(j)) * (eps * 0.5)
                + z[j].conj() * (eps * 0.5) * (dzb(k) + z[k] * f0 * (eps * 0.5));
            total += w * term;
        }
    }
    -total
}

type Derivs = (Vec<C64>, DMatrix<C64>);

fn richardson_derivatives<F>(f: &F, x: &DVector<f64>, h: f64) -> Derivs
where
    F: Fn(&DVector<f64>) -> C64,
{
    let (g1, h1) = central_derivatives(f, x, h);
    let (g2, h2) = central_derivatives(f, x, h / 2.0);
    let g = g1
        .iter()
        .zip(&g2)
        .map(|(a, b)| (b * 4.0 - a) / 3.0)
        .collect();
    let hs = (h2 * C64::new(4.0, 0.0) - h1) / C64::new(3.0, 0.0);
    (g, hs)
}

fn central_derivatives<F>(f: &F, x: &DVector<f64>, h: f64) -> Derivs
where
    F: Fn(&DVector<f64>) -> C64,
{
    let dim = x.len();
    let at = |offs: &[(usize, f64)]| {
        let mut y = x.clone();
        for &(k, d) in offs {
            y[k] += d;
        }
        f(&y)
    };
    let f0 = f(x);
    let mut grad = Vec::with_capacity(dim);
    let mut hess = DMatrix::zeros(dim, dim);
    for a in 0..dim {
        let fp = at(&[(a, h)]);
        let fm = at(&[(a, -h)]);
        grad.push((fp - fm) / (2.0 * h));
        hess[(a, a)] = (fp - f0 * 2.0 + fm) / (h * h);
        for b in (a + 1)..dim {
            let v = (at(&[(a, h), (b, h)]) - at(&[(a, h), (b, -h)]) - at(&[(a, -h), (b, h)])
                + at(&[(a, -h), (b, -h)]))
                / (4.0 * h * h);
            hess[(a, b)] = v;
            hess[(b, a)] = v;
        }
    }
    (grad, hess)
}
