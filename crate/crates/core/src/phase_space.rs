//! Gaussian states, symplectic constants and the z ↔ ξ coordinate map.
//!
//! Quadratures are ordered `(x1, p1, ..., xn, pn)`. The covariance matrix is
//! `V_ij = 2 Cov(r_i, r_j)`, so the vacuum has `V = I`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

pub type C64 = Complex64;

const SYM_TOL: f64 = 1e-10;
const UNCERTAINTY_TOL: f64 = 1e-10;

/// Block-diagonal `Ω = ⊕ [[0, 1], [-1, 0]]`.
pub fn omega(n: usize) -> DMatrix<f64> {
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        o[(2 * k, 2 * k + 1)] = 1.0;
        o[(2 * k + 1, 2 * k)] = -1.0;
    }
    o
}

/// Block-diagonal `U = ⊕ (1/√2) [[1, i], [1, -i]]`.
pub fn u_matrix(n: usize) -> DMatrix<C64> {
    let s = 1.0 / SQRT_2;
    let mut u = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        u[(2 * k, 2 * k)] = C64::new(s, 0.0);
        u[(2 * k, 2 * k + 1)] = C64::new(0.0, s);
        u[(2 * k + 1, 2 * k)] = C64::new(s, 0.0);
        u[(2 * k + 1, 2 * k + 1)] = C64::new(0.0, -s);
    }
    u
}

/// Real phase-space vector ξ from complex `z` with `z_j = ξ_{j1} + i ξ_{j2}`.
pub fn z_to_xi(z: &[C64]) -> DVector<f64> {
    DVector::from_iterator(2 * z.len(), z.iter().flat_map(|c| [c.re, c.im]))
}

pub fn xi_to_z(xi: &DVector<f64>) -> Vec<C64> {
    xi.as_slice()
        .chunks(2)
        .map(|p| C64::new(p[0], p[1]))
        .collect()
}

/// Normalized complex mode vector `c` selecting the photon mode `a(c) = Σ c̄_k a_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeVector {
    c: Vec<C64>,
}

impl ModeVector {
    pub fn new(c: Vec<C64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidModeVector("empty".into()));
        }
        let norm2: f64 = c.iter().map(|x| x.norm_sqr()).sum();
        if !norm2.is_finite() || (norm2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidModeVector(format!(
                "squared norm {norm2} differs from 1"
            )));
        }
        Ok(Self { c })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(c: Vec<C64>) -> Result<Self> {
        let norm: f64 = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidModeVector("zero or non-finite vector".into()));
        }
        Self::new(c.into_iter().map(|x| x / norm).collect())
    }

    pub fn from_real(c: &[f64]) -> Result<Self> {
        Self::normalized(c.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Unit vector on mode `k` of `n`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut c = vec![C64::new(0.0, 0.0); n];
        c[k] = C64::new(1.0, 0.0);
        Self { c }
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.c
    }

    /// `m_c = U† (c1, 0, ..., cn, 0)`, i.e. `(c_k, -i c_k)/√2` per mode.
    pub fn m_vector(&self) -> DVector<C64> {
        let s = 1.0 / SQRT_2;
        DVector::from_iterator(
            2 * self.c.len(),
            self.c
                .iter()
                .flat_map(|&ck| [ck * s, ck * C64::new(0.0, -s)]),
        )
    }
}

/// An `n`-mode Gaussian state given by its covariance matrix and mean vector.
#[derive(Debug, Clone)]
pub struct GaussianState {
    n: usize,
    v: DMatrix<f64>,
    d: DVector<f64>,
    v_inv: DMatrix<f64>,
    det_v: f64,
}

impl GaussianState {
    /// Validates symmetry, `V + iΩ ≥ 0` and `det V ≥ 1`. Invalid input is rejected,
    /// never projected.
    pub fn new(v: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        let dim = v.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || v.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "covariance must be 2n x 2n, got {}x{}",
                v.nrows(),
                v.ncols()
            )));
        }
        if d.len() != dim {
            return Err(Error::InvalidState(format!(
                "displacement has length {}, expected {dim}",
                d.len()
            )));
        }
        if v.iter().chain(d.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let n = dim / 2;
        let scale = v.amax().max(1.0);
        if (&v - v.transpose()).amax() > SYM_TOL * scale {
            return Err(Error::InvalidState("covariance is not symmetric".into()));
        }
        let v = (&v + v.transpose()) * 0.5;

        let om = omega(n);
        let h = v.map(|x| C64::new(x, 0.0)) + om.map(|x| C64::new(0.0, x));
        let min_eig = h
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -UNCERTAINTY_TOL * scale {
            return Err(Error::InvalidState(format!(
                "uncertainty relation violated: min eigenvalue of V + iΩ is {min_eig:e}"
            )));
        }
        let chol = v
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidState("covariance is not positive definite".into()))?;
        let det_v = chol.determinant();
        if det_v < 1.0 - UNCERTAINTY_TOL * scale {
            return Err(Error::InvalidState(format!("det V = {det_v} < 1")));
        }
        let v_inv = chol.inverse();
        Ok(Self {
            n,
            v,
            d,
            v_inv,
            det_v,
        })
    }

    pub fn vacuum(n: usize) -> Self {
        Self::new(DMatrix::identity(2 * n, 2 * n), DVector::zeros(2 * n))
            .expect("vacuum is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.d
    }

    pub fn covariance_inverse(&self) -> &DMatrix<f64> {
        &self.v_inv
    }

    pub fn det_v(&self) -> f64 {
        self.det_v
    }

    /// `χ(ξ) = exp(-½ ξᵀΩVΩᵀξ - i√2 (Ωd)ᵀξ)`.
    pub fn char_xi(&self, xi: &DVector<f64>) -> C64 {
        let om = omega(self.n);
        let oxi = om.transpose() * xi;
        let quad = oxi.dot(&(&self.v * &oxi));
        let lin = (&om * &self.d).dot(xi);
        C64::new(-0.5 * quad, -SQRT_2 * lin).exp()
    }

    pub fn gaussian_char(&self, z: &[C64]) -> C64 {
        self.char_xi(&z_to_xi(z))
    }

    /// `W(r) = exp(-(r-d)ᵀV⁻¹(r-d)) / (πⁿ √det V)`.
    pub fn gaussian_wigner(&self, r: &DVector<f64>) -> f64 {
        let y = r - &self.d;
        let e = y.dot(&(&self.v_inv * &y));
        (-e).exp() / self.wigner_scale_inv()
    }

    /// `πⁿ √det V`, the inverse peak scale of the Wigner function.
    pub fn wigner_scale_inv(&self) -> f64 {
        PI.powi(self.n as i32) * self.det_v.sqrt()
    }

    pub fn purity(&self) -> f64 {
        1.0 / self.det_v.sqrt()
    }

    pub fn mean_photon_number(&self) -> f64 {
        (self.v.trace() - 2.0 * self.n as f64) / 4.0 + self.d.norm_squared() / 2.0
    }

    /// Smallest eigenvalue of `V - I` and its eigenvector.
    pub fn min_eig_v_minus_i(&self) -> (f64, DVector<f64>) {
        let eig = self.v.clone().symmetric_eigen();
        let (k, &v1) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty");
        (v1 - 1.0, eig.eigenvectors.column(k).into_owned())
    }
}
