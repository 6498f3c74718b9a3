//! Numerical integration helpers: Gauss–Legendre rules, adaptive Gauss–Kronrod and
//! the additive-recurrence low-discrepancy sequence used for randomized quasi Monte Carlo.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wt = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wt;
        w[n - 1 - i] = wt;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (z * p1 - p0) / (z * z - 1.0))
}

/// `∫_a^b f` with an `n`-point Gauss–Legendre rule.
pub fn gl_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    let vals: Vec<f64> = x.iter().zip(&w).map(|(&xi, &wi)| wi * f(c + h * xi)).collect();
    h * pairwise_sum(&vals)
}

/// Result of an order-escalating rule.
#[derive(Debug, Clone, Copy)]
pub struct Escalated {
    pub value: f64,
    pub error: f64,
    pub order: usize,
}

/// Evaluates `rule(order)` for orders 8, 16, ..., `max_order` until two successive
/// estimates differ by less than `tol`.
pub fn escalate<F: Fn(usize) -> f64>(
    rule: F,
    tol: f64,
    max_order: usize,
    what: &'static str,
) -> Result<Escalated> {
    let mut order = 8;
    let mut prev = rule(order);
    while order < max_order {
        order *= 2;
        let cur = rule(order);
        let err = (cur - prev).abs();
        if err < tol {
            return Ok(Escalated {
                value: cur,
                error: err,
                order,
            });
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what,
        estimate: prev,
        error: f64::NAN,
    })
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One 15-point Kronrod panel: `(kronrod, |kronrod - gauss|)`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Adaptive Gauss–Kronrod integration to absolute tolerance `tol`.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    adaptive_panels(f, a, b, tol, 1)
}

/// [`adaptive`] starting from `panels` equal subintervals, so that features narrower than
/// the whole interval are not missed by the first error estimate.
pub fn adaptive_panels<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    panels: usize,
) -> Result<(f64, f64)> {
    let panels = panels.max(1);
    let step = (b - a) / panels as f64;
    let mut stack: Vec<(f64, f64, usize)> = (0..panels)
        .rev()
        .map(|k| {
            let lo = a + step * k as f64;
            let hi = if k + 1 == panels { b } else { lo + step };
            (lo, hi, 0)
        })
        .collect();
    let mut total = Vec::new();
    let mut err = 0.0;
    let width = (b - a).abs();
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk15(f, lo, hi);
        let local_tol = tol * ((hi - lo).abs() / width).max(1e-3);
        if e <= local_tol || depth >= 40 {
            if depth >= 40 && e > local_tol {
                return Err(Error::NonConvergence {
                    what: "adaptive quadrature",
                    estimate: v,
                    error: e,
                });
            }
            total.push(v);
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok((pairwise_sum(&total), err))
}

/// Nested adaptive integration over the rectangle `[ax, bx] × [ay, by]`, each axis
/// starting from panels of width at most one half.
pub fn adaptive_2d<F: Fn(f64, f64) -> f64>(
    f: &F,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    tol: f64,
) -> Result<f64> {
    let panels = |lo: f64, hi: f64| ((hi - lo).abs() * 2.0).ceil() as usize;
    let inner_tol = tol / (bx - ax).abs().max(1.0);
    let failure = std::cell::Cell::new(None);
    let outer = |x: f64| match adaptive_panels(&|y| f(x, y), ay, by, inner_tol, panels(ay, by)) {
        Ok((v, _)) => v,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let (v, _) = adaptive_panels(&outer, ax, bx, tol, panels(ax, bx))?;
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Additive recurrence `u_k = frac(shift + k·α)` with `α_j = φ_d^{-j}`, where `φ_d` is the
/// positive root of `x^{d+1} = x + 1`.
#[derive(Debug, Clone)]
pub struct RdSequence {
    alpha: Vec<f64>,
}

impl RdSequence {
    pub fn new(dim: usize) -> Self {
        let mut phi: f64 = 2.0;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
        }
        let alpha = (1..=dim).map(|j| phi.powi(-(j as i32))).collect();
        Self { alpha }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// Writes point `k` with a Cranley–Patterson shift into `out`.
    pub fn point(&self, k: u64, shift: &[f64], out: &mut [f64]) {
        for ((o, &a), &s) in out.iter_mut().zip(&self.alpha).zip(shift) {
            // k·α mod 1 computed in two parts to keep precision for large k
            let hi = (k >> 20) as f64;
            let lo = (k & ((1 << 20) - 1)) as f64;
            let v = (hi * (a * (1u64 << 20) as f64).fract()).fract() + (lo * a).fract() + s;
            *o = v - v.floor();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        for n in [1, 2, 5, 8, 16, 64, 256] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} weight sum {s}");
            let deg = (2 * n - 1).min(20) as i32;
            let deg = deg - (deg % 2);
            let m: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg)).sum();
            assert!((m - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn adaptive_handles_kinks() {
        let (v, _) = adaptive(&|x: f64| x.abs(), -1.0, 2.0, 1e-12).unwrap();
        assert!((v - 2.5).abs() < 1e-11);
        let v = adaptive_2d(&|x, y| (-(x * x + y * y)).exp(), (-8.0, 8.0), (-8.0, 8.0), 1e-11)
            .unwrap();
        assert!((v - PI).abs() < 1e-10);
    }

    #[test]
    fn rd_sequence_is_equidistributed() {
        let seq = RdSequence::new(4);
        let mut out = [0.0; 4];
        let n = 1 << 14;
        let mut mean = [0.0; 4];
        for k in 0..n {
            seq.point(k, &[0.1, 0.2, 0.3, 0.4], &mut out);
            for j in 0..4 {
                assert!((0.0..1.0).contains(&out[j]));
                mean[j] += out[j] / n as f64;
            }
        }
        for m in mean {
            assert!((m - 0.5).abs() < 1e-3);
        }
    }

    #[test]
    fn escalate_reports_nonconvergence() {
        let r = escalate(|n| n as f64, 1e-6, 256, "test");
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
        let r = escalate(|n| gl_integrate(|x| x.exp(), 0.0, 1.0, n), 1e-12, 256, "exp").unwrap();
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-14);
    }
}
