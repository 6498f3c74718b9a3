//! Named state families.

use std::f64::consts::{LN_2, SQRT_2};

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase_space::{GaussianState, ModeVector};
use crate::photon_ops::{PhotonTunedState, Sign};
use crate::qcs::{check_sqth_domain, qcs_gaussian, qcs_photon_tuned, qcs_total_noise};

/// Single-mode squeezed thermal state, `V = (1+q)/(1-q) diag(e^{-2r}, e^{2r})`.
pub fn make_sqth(q: f64, r: f64) -> Result<GaussianState> {
    check_sqth_domain(q, r)?;
    let nu = (1.0 + q) / (1.0 - q);
    let v = DMatrix::from_diagonal(&DVector::from_vec(vec![
        nu * (-2.0 * r).exp(),
        nu * (2.0 * r).exp(),
    ]));
    GaussianState::new(v, DVector::zeros(2))
}

/// `n` identical squeezed thermal modes.
pub fn make_sqth_product(q: f64, r: f64, n: usize) -> Result<GaussianState> {
    let one = make_sqth(q, r)?;
    let mut v = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        v.view_mut((2 * k, 2 * k), (2, 2)).copy_from(one.covariance());
    }
    GaussianState::new(v, DVector::zeros(2 * n))
}

/// Coherent state `|z⟩`: `V = I`, `d = √2 (Re z1, Im z1, ...)`.
pub fn make_coherent(z: &[C64]) -> Result<GaussianState> {
    if z.is_empty() {
        return Err(Error::InvalidState("no modes".into()));
    }
    let n = z.len();
    let d = DVector::from_iterator(2 * n, z.iter().flat_map(|c| [SQRT_2 * c.re, SQRT_2 * c.im]));
    GaussianState::new(DMatrix::identity(2 * n, 2 * n), d)
}

/// Random valid Gaussian state: thermal noise, squeezing, mode mixing and displacement.
pub fn random_gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GaussianState {
    let dim = 2 * n;
    let mut v = DMatrix::zeros(dim, dim);
    for k in 0..n {
        let nu = 1.0 + rng.random::<f64>() * 2.0;
        v[(2 * k, 2 * k)] = nu;
        v[(2 * k + 1, 2 * k + 1)] = nu;
    }
    let s = random_symplectic(n, rng);
    let v = &s * v * s.transpose();
    let v = (&v + v.transpose()) * 0.5;
    let d = DVector::from_fn(dim, |_, _| rng.random::<f64>() * 2.0 - 1.0);
    GaussianState::new(v, d).expect("congruence by a symplectic matrix preserves validity")
}

fn rotation(n: usize, k: usize, phi: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(2 * n, 2 * n);
    let (s, c) = phi.sin_cos();
    m[(2 * k, 2 * k)] = c;
    m[(2 * k, 2 * k + 1)] = s;
    m[(2 * k + 1, 2 * k)] = -s;
    m[(2 * k + 1, 2 * k + 1)] = c;
    m
}

fn squeezer(n: usize, k: usize, r: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(2 * n, 2 * n);
    m[(2 * k, 2 * k)] = (-r).exp();
    m[(2 * k + 1, 2 * k + 1)] = r.exp();
    m
}

fn beamsplitter(n: usize, j: usize, k: usize, t: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(2 * n, 2 * n);
    let (s, c) = t.sin_cos();
    for off in 0..2 {
        let (a, b) = (2 * j + off, 2 * k + off);
        m[(a, a)] = c;
        m[(a, b)] = s;
        m[(b, a)] = -s;
        m[(b, b)] = c;
    }
    m
}

fn random_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let tau = std::f64::consts::TAU;
    let mut s = DMatrix::identity(2 * n, 2 * n);
    for _ in 0..2 {
        for k in 0..n {
            s = rotation(n, k, rng.random::<f64>() * tau) * s;
            s = squeezer(n, k, rng.random::<f64>() * 1.2 - 0.6) * s;
        }
        for j in 0..n {
            for k in (j + 1)..n {
                s = beamsplitter(n, j, k, rng.random::<f64>() * tau) * s;
            }
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// `a†(c)|α, α⟩` with `c = (1, ±1)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCoherentPlus {
    pub alpha: C64,
    pub parity: Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvenOddScalars {
    pub qcs_squared: f64,
    pub npt: f64,
    pub eof: f64,
}

impl TwoModeCoherentPlus {
    pub fn new(alpha: C64, parity: Parity) -> Self {
        Self { alpha, parity }
    }

    pub fn mode_vector(&self) -> ModeVector {
        ModeVector::from_real(&[1.0, self.parity.sign()]).expect("nonzero")
    }

    pub fn photon_tuned(&self) -> Result<PhotonTunedState> {
        let mother = make_coherent(&[self.alpha, self.alpha])?;
        PhotonTunedState::new(mother, Sign::Add, self.mode_vector())
    }

    /// Normalization `(1 + 2|α|²)^{-1/2}` for even, 1 for odd.
    pub fn normalization(&self) -> f64 {
        match self.parity {
            Parity::Even => (1.0 + 2.0 * self.alpha.norm_sqr()).powf(-0.5),
            Parity::Odd => 1.0,
        }
    }

    /// Quoted partial-transpose negativity: `1/(1+|α|²)` even, 1 odd.
    pub fn npt(&self) -> f64 {
        match self.parity {
            Parity::Even => 1.0 / (1.0 + self.alpha.norm_sqr()),
            Parity::Odd => 1.0,
        }
    }

    /// Eigenvalues of the single-mode reduced state, from the 2×2 Gram matrix of the
    /// non-orthogonal pair `{|α⟩, a†|α⟩}`.
    pub fn reduced_eigenvalues(&self) -> [f64; 2] {
        let a = self.alpha;
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let gram = Matrix2::new(one, a.conj(), a, one + a.norm_sqr());
        let coef = Matrix2::new(zero, one, C64::new(self.parity.sign(), 0.0), zero);
        let red = coef * gram.transpose() * coef.adjoint();
        let m = red * gram;
        let tr = m.trace();
        let det = m.determinant();
        let disc = (tr * tr - det * 4.0).sqrt();
        let l1 = ((tr + disc) / tr * 0.5).re;
        let l2 = ((tr - disc) / tr * 0.5).re;
        [l1, l2]
    }

    /// Entanglement of formation (natural log), from the reduced-state entropy.
    pub fn eof(&self) -> f64 {
        self.reduced_eigenvalues()
            .iter()
            .filter(|&&l| l > 1e-10)
            .map(|&l| -l * l.ln())
            .sum()
    }

    /// Partial-transpose negativity `(Σ √λ)² - 1` computed from the Schmidt coefficients.
    pub fn npt_schmidt(&self) -> f64 {
        let s: f64 = self
            .reduced_eigenvalues()
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .sum();
        s * s - 1.0
    }

    pub fn scalars(&self) -> Result<EvenOddScalars> {
        let ps = self.photon_tuned()?;
        Ok(EvenOddScalars {
            qcs_squared: qcs_total_noise(&ps)?.qcs_squared,
            npt: self.npt(),
            eof: self.eof(),
        })
    }

    /// `1 + 1/(1+2|α|²)²` even, 2 odd.
    pub fn qcs_closed_form(&self) -> f64 {
        match self.parity {
            Parity::Even => 1.0 + (1.0 + 2.0 * self.alpha.norm_sqr()).powi(-2),
            Parity::Odd => 2.0,
        }
    }
}

pub fn even_odd_scalars(s: &TwoModeCoherentPlus) -> Result<EvenOddScalars> {
    s.scalars()
}

/// `ln 2`, the odd-state entanglement of formation.
pub const EOF_ODD: f64 = LN_2;

/// `C²` of photon-added two-mode squeezed thermal states via the moment engine.
pub fn two_mode_sqthp_qcs(q: f64, r: f64, c: &ModeVector) -> Result<f64> {
    if c.n() != 2 {
        return Err(Error::InvalidModeVector("two-mode state needs a 2-vector".into()));
    }
    let mother = make_sqth_product(q, r, 2)?;
    let ps = PhotonTunedState::new(mother, Sign::Add, c.clone())?;
    Ok(qcs_photon_tuned(&ps)?.qcs_squared)
}

/// `½(C²_SqTh + C²_SqTh+)`, the single-mode average.
pub fn two_mode_sqthp_qcs_average(q: f64, r: f64) -> Result<f64> {
    let g = qcs_gaussian(&make_sqth(q, r)?).qcs_squared;
    let p = crate::qcs::qcs_closed_form_sqth(q, r, Sign::Add)?;
    Ok(0.5 * (g + p))
}
