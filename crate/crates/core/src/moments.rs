//! Exact integrals of polynomial × Gaussian over `R^D` by Isserlis pairing.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 6;

/// Sparse polynomial in `nvars` real variables with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyExpr {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, C64>,
}

fn degree_of(e: &[u8]) -> usize {
    e.iter().map(|&k| k as usize).sum()
}

impl PolyExpr {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The monomial `ξ_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, C64::new(1.0, 0.0));
        p
    }

    /// `c + lᵀξ + ξᵀAξ`.
    pub fn quadratic(c: C64, linear: &DVector<C64>, quad: &DMatrix<C64>) -> Self {
        let nv = linear.len();
        let mut p = Self::constant(nv, c);
        for i in 0..nv {
            let mut e = vec![0; nv];
            e[i] = 1;
            p.add_term(e, linear[i]);
            for j in 0..nv {
                let mut e = vec![0; nv];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, quad[(i, j)]);
            }
        }
        p
    }

    /// `|ξ|² = Σ ξ_i²`.
    pub fn norm_squared(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        for i in 0..nvars {
            let mut e = vec![0; nvars];
            e[i] = 2;
            p.add_term(e, C64::new(1.0, 0.0));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| degree_of(e)).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &C64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    fn add_term(&mut self, e: Vec<u8>, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert(C64::new(0.0, 0.0));
        *slot += c;
        if *slot == C64::new(0.0, 0.0) {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, &c)| {
                c * e
                    .iter()
                    .zip(x)
                    .map(|(&k, &xi)| xi.powi(k as i32))
                    .product::<f64>()
            })
            .sum()
    }
}

/// Coefficient-wise convolution. Fails when the product degree exceeds [`MAX_DEGREE`].
pub fn poly_product(a: &PolyExpr, b: &PolyExpr) -> Result<PolyExpr> {
    assert_eq!(a.nvars, b.nvars, "variable count mismatch");
    let degree = a.degree() + b.degree();
    if degree > MAX_DEGREE && !a.terms.is_empty() && !b.terms.is_empty() {
        return Err(Error::DegreeOverflow {
            degree,
            bound: MAX_DEGREE,
        });
    }
    let mut out = PolyExpr::zero(a.nvars);
    for (ea, &ca) in &a.terms {
        for (eb, &cb) in &b.terms {
            let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            out.add_term(e, ca * cb);
        }
    }
    Ok(out)
}

/// `scale · exp(-(ξ-s)ᵀQ(ξ-s))` with `Q` positive definite.
#[derive(Debug, Clone)]
pub struct GaussianWeight {
    precision: DMatrix<f64>,
    shift: DVector<f64>,
    scale: f64,
}

impl GaussianWeight {
    pub fn new(precision: DMatrix<f64>, shift: DVector<f64>, scale: f64) -> Result<Self> {
        if precision.nrows() != shift.len() || !precision.is_square() {
            return Err(Error::Domain("weight dimension mismatch".into()));
        }
        let sym = (&precision + precision.transpose()) * 0.5;
        if sym.clone().cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self {
            precision: sym,
            shift,
            scale,
        })
    }

    pub fn precision(&self) -> &DMatrix<f64> {
        &self.precision
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.shift
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let y = DVector::from_column_slice(x) - &self.shift;
        self.scale * (-y.dot(&(&self.precision * &y))).exp()
    }
}

fn binomial(n: u8, k: u8) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

struct Isserlis<'a> {
    cov: &'a DMatrix<f64>,
    memo: HashMap<Vec<u8>, f64>,
}

impl Isserlis<'_> {
    /// `E[η_{i1} ... η_{ik}]` for a centered Gaussian; `idx` is sorted.
    fn moment(&mut self, idx: &[u8]) -> f64 {
        if idx.is_empty() {
            return 1.0;
        }
        if idx.len() % 2 == 1 {
            return 0.0;
        }
        if let Some(&v) = self.memo.get(idx) {
            return v;
        }
        let first = idx[0] as usize;
        let rest = &idx[1..];
        let mut total = 0.0;
        for j in 0..rest.len() {
            if j > 0 && rest[j] == rest[j - 1] {
                // identical partner: same sub-moment, count multiplicity instead
                continue;
            }
            let mult = rest[j..].iter().take_while(|&&x| x == rest[j]).count() as f64;
            let c = self.cov[(first, rest[j] as usize)];
            if c == 0.0 {
                continue;
            }
            let mut sub = Vec::with_capacity(rest.len() - 1);
            sub.extend_from_slice(&rest[..j]);
            sub.extend_from_slice(&rest[j + 1..]);
            total += mult * c * self.moment(&sub);
        }
        self.memo.insert(idx.to_vec(), total);
        total
    }
}

/// Exact `∫ p(ξ) w(ξ) dξ`: shift to the centre, expand binomially and apply
/// Isserlis pairing with covariance `Q⁻¹/2`.
pub fn integrate_poly_gaussian(p: &PolyExpr, w: &GaussianWeight) -> Result<C64> {
    let dim = w.shift.len();
    if p.nvars != dim {
        return Err(Error::Domain(format!(
            "polynomial has {} variables, weight has {dim}",
            p.nvars
        )));
    }
    if p.degree() > MAX_DEGREE {
        return Err(Error::DegreeOverflow {
            degree: p.degree(),
            bound: MAX_DEGREE,
        });
    }
    let chol = w
        .precision
        .clone()
        .cholesky()
        .ok_or(Error::NotPositiveDefinite)?;
    let det_q = chol.determinant();
    let cov = chol.inverse() * 0.5;
    let z = w.scale * PI.powf(dim as f64 / 2.0) / det_q.sqrt();

    let mut iss = Isserlis {
        cov: &cov,
        memo: HashMap::new(),
    };
    let mut total = C64::new(0.0, 0.0);
    for (alpha, &coef) in &p.terms {
        total += coef * shifted_monomial(alpha, w.shift.as_slice(), &mut iss);
    }
    Ok(total * z)
}

/// `E[∏ (s_i + η_i)^{α_i}]` by expanding each factor binomially.
fn shifted_monomial(alpha: &[u8], s: &[f64], iss: &mut Isserlis<'_>) -> f64 {
    let mut beta = vec![0u8; alpha.len()];
    let mut total = 0.0;
    loop {
        let mut coef = 1.0;
        for i in 0..alpha.len() {
            coef *= binomial(alpha[i], beta[i]) * s[i].powi((alpha[i] - beta[i]) as i32);
        }
        if coef != 0.0 {
            let mut idx = Vec::new();
            for (i, &b) in beta.iter().enumerate() {
                idx.extend(std::iter::repeat_n(i as u8, b as usize));
            }
            total += coef * iss.moment(&idx);
        }
        // odometer over 0..=alpha_i
        let mut k = 0;
        loop {
            if k == alpha.len() {
                return total;
            }
            if beta[k] < alpha[k] {
                beta[k] += 1;
                break;
            }
            beta[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    fn std_weight(dim: usize) -> GaussianWeight {
        GaussianWeight::new(DMatrix::identity(dim, dim), DVector::zeros(dim), 1.0).unwrap()
    }

    fn mono(nv: usize, e: &[u8]) -> PolyExpr {
        let mut p = PolyExpr::zero(nv);
        p.add_term(e.to_vec(), one());
        p
    }

    #[test]
    fn basic_moments() {
        let w = std_weight(2);
        let v = integrate_poly_gaussian(&PolyExpr::constant(2, one()), &w).unwrap();
        assert!((v.re - PI).abs() < 1e-14);
        let v = integrate_poly_gaussian(&mono(2, &[2, 0]), &w).unwrap();
        assert!((v.re - PI / 2.0).abs() < 1e-14);
        let v = integrate_poly_gaussian(&mono(2, &[4, 0]), &w).unwrap();
        assert!((v.re - 3.0 * PI / 4.0).abs() < 1e-14);
        let v = integrate_poly_gaussian(&mono(2, &[3, 1]), &w).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn shifted_mean() {
        let w = GaussianWeight::new(
            DMatrix::identity(2, 2),
            DVector::from_vec(vec![0.5, -2.0]),
            1.0,
        )
        .unwrap();
        // E[ξ1 ξ2] = s1 s2 for uncorrelated coordinates
        let v = integrate_poly_gaussian(&mono(2, &[1, 1]), &w).unwrap();
        assert!((v.re / PI - (-1.0)).abs() < 1e-14);
        // E[ξ1³] = s³ + 3 s σ² with σ² = 1/2
        let v = integrate_poly_gaussian(&mono(2, &[3, 0]), &w).unwrap();
        assert!((v.re / PI - (0.125 + 0.75)).abs() < 1e-14);
    }

    #[test]
    fn product_and_overflow() {
        let x = PolyExpr::var(2, 0);
        let a = PolyExpr::constant(2, one()).add(&x);
        let b = PolyExpr::constant(2, one()).add(&x.scale(-one()));
        let p = poly_product(&a, &b).unwrap();
        let want = PolyExpr::constant(2, one()).add(&mono(2, &[2, 0]).scale(-one()));
        assert_eq!(p, want);
        let q4 = mono(2, &[4, 0]);
        let q3 = mono(2, &[0, 3]);
        assert!(matches!(
            poly_product(&q4, &q3),
            Err(Error::DegreeOverflow { degree: 7, .. })
        ));
    }

    #[test]
    fn rejects_indefinite_precision() {
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            GaussianWeight::new(q, DVector::zeros(2), 1.0),
            Err(Error::NotPositiveDefinite)
        ));
    }
}
