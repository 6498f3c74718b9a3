//! Acceptance checks shared by `gausspm selftest` and the `acceptance` test target.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{boundary_lines, classify_subtracted};
use crate::error::Result;
use crate::negativity::{
    fock_one_negative_volume, negative_region_sqth, negative_volume_even_odd,
    negative_volume_single_mode, negative_volume_two_mode, negative_volume_two_mode_sqthp,
    qng_margin_sqth_minus, qng_saturation_sqth_minus, McConfig, NegativeRegion,
};
use crate::phase_space::{GaussianState, ModeVector};
use crate::photon_ops::{PhotonTunedState, Sign};
use crate::qcs::{
    qcs_closed_form_sqth, qcs_gaussian, qcs_gaussian_moment, qcs_photon_tuned, qcs_sqth,
    qcs_thermal_added, relative_gain, relative_gain_limit,
};
use crate::states::{
    make_sqth, random_gaussian, two_mode_sqthp_qcs, two_mode_sqthp_qcs_average, Parity,
    TwoModeCoherentPlus,
};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{:>2}] {} ({:.3} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Collects named sub-checks into one result line.
struct Checks {
    parts: Vec<String>,
    ok: bool,
}

impl Checks {
    fn new() -> Self {
        Self {
            parts: Vec::new(),
            ok: true,
        }
    }

    fn check(&mut self, label: &str, ok: bool, info: String) {
        self.ok &= ok;
        self.parts
            .push(format!("{}{label}: {info}", if ok { "" } else { "!! " }));
    }

    fn record<T>(&mut self, label: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(label, false, format!("error {e}"));
                None
            }
        }
    }

    fn finish(self, id: u32, name: &'static str, start: Instant) -> CheckResult {
        CheckResult {
            id,
            name,
            passed: self.ok,
            detail: self.parts.join("; "),
            elapsed: start.elapsed(),
        }
    }
}

fn mv1() -> ModeVector {
    ModeVector::basis(1, 0)
}

fn tuned(q: f64, r: f64, sign: Sign) -> Result<PhotonTunedState> {
    PhotonTunedState::new(make_sqth(q, r)?, sign, mv1())
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub const FOCK_NEG_VOLUME_QUOTED: f64 = 0.21306;

pub fn criterion_1() -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    let vol = PhotonTunedState::new(GaussianState::vacuum(1), Sign::Add, mv1())
        .and_then(|ps| negative_volume_single_mode(&ps));
    if let Some(rep) = c.record("N_W(|1>)", vol) {
        let t = start.elapsed().as_secs_f64();
        c.check(
            "N_W(|1>)",
            (rep.volume - FOCK_NEG_VOLUME_QUOTED).abs() <= 1e-4,
            format!("{:.8} vs 0.21306 +- 1e-4", rep.volume),
        );
        c.check("runtime", t < 1.0, format!("{t:.3} s < 1 s"));
    }
    c.finish(1, "Fock negativity", start)
}

pub fn criterion_2() -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    for r in [0.5, 1.0, 2.0] {
        for sign in [Sign::Add, Sign::Subtract] {
            let v = tuned(0.0, r, sign).and_then(|ps| negative_volume_single_mode(&ps));
            if let Some(rep) = c.record("volume", v) {
                c.check(
                    &format!("N_W(SqV{} r={r})", sign.label()),
                    (rep.volume - FOCK_NEG_VOLUME_QUOTED).abs() <= 1e-4,
                    format!("{:.8}", rep.volume),
                );
            }
        }
        let pair = tuned(0.0, r, Sign::Add).and_then(|p| Ok((p, tuned(0.0, r, Sign::Subtract)?)));
        if let Some((plus, minus)) = c.record("build", pair) {
            let mut sup: f64 = 0.0;
            for rad in linspace(0.0, 3.0, 31) {
                for th in linspace(0.0, 2.0 * PI, 37) {
                    let z = [C64::from_polar(rad, th)];
                    sup = sup.max((plus.char_pm(&z) - minus.char_pm(&z)).norm());
                }
            }
            c.check(
                &format!("sup|chi+ - chi-| r={r}"),
                sup < 1e-10,
                format!("{sup:.2e}"),
            );
        }
    }
    c.finish(2, "squeezing independence of SqV+-", start)
}

pub fn criterion_3() -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for q in linspace(0.0, 0.9, 20) {
        for r in linspace(0.0, 3.0, 20) {
            for sign in [Sign::Add, Sign::Subtract] {
                if sign == Sign::Subtract && q == 0.0 && r == 0.0 {
                    continue;
                }
                let res = tuned(q, r, sign).and_then(|ps| {
                    let a = qcs_photon_tuned(&ps)?.qcs_squared;
                    let b = qcs_closed_form_sqth(q, r, sign)?;
                    Ok(((a - b) / b).abs())
                });
                match res {
                    Ok(e) => worst = worst.max(e),
                    Err(_) => failures += 1,
                }
            }
        }
    }
    let t = start.elapsed().as_secs_f64();
    c.check("errors", failures == 0, format!("{failures} evaluation errors"));
    c.check("max rel err", worst < 1e-8, format!("{worst:.2e} < 1e-8"));
    c.check("runtime", t < 10.0, format!("{t:.3} s < 10 s"));
    c.finish(3, "QCS closed-form triangle", start)
}

pub fn criterion_4(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let n = 1 + k % 2;
        let s = random_gaussian(n, &mut rng);
        let a = qcs_gaussian(&s).qcs_squared;
        if let Some(b) = c.record("moment", qcs_gaussian_moment(&s)) {
            worst = worst.max(((a - b) / a).abs());
        }
    }
    c.check("max rel err", worst < 1e-8, format!("{worst:.2e} over 100 states"));
    c.finish(4, "Gaussian QCS two paths", start)
}

pub fn criterion_5() -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    let fock = PhotonTunedState::new(GaussianState::vacuum(1), Sign::Add, mv1())
        .and_then(|ps| qcs_photon_tuned(&ps));
    if let Some(rep) = c.record("fock", fock) {
        c.check(
            "C2(|1>)",
            (rep.qcs_squared - 3.0).abs() <= 4.0 * f64::EPSILON * 3.0,
            format!("{:.17}", rep.qcs_squared),
        );
    }
    for q in [0.1, 0.5, 0.9] {
        let v = tuned(q, 0.0, Sign::Add).and_then(|ps| qcs_photon_tuned(&ps));
        if let Some(rep) = c.record("Th+", v) {
            let want = qcs_thermal_added(q);
            c.check(
                &format!("C2_Th+({q})"),
                (rep.qcs_squared - want).abs() < 1e-10,
                format!("{:.12} vs {want:.12}", rep.qcs_squared),
            );
        }
    }
    let mut worst = f64::NEG_INFINITY;
    for q in linspace(0.01, 0.99, 99) {
        let v = tuned(q, 0.0, Sign::Subtract).and_then(|ps| qcs_photon_tuned(&ps));
        if let Some(rep) = c.record("Th-", v) {
            worst = worst.max(rep.qcs_squared);
        }
    }
    c.check("max C2_Th- on (0,1)", worst <= 1.0, format!("{worst:.12}"));
    c.finish(5, "Fock and thermal anchors", start)
}

pub fn criterion_6() -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    for r in [0.0, 1.0, 2.0] {
        if let Some(g) = c.record("gain", tuned(0.0, r, Sign::Add).and_then(|p| relative_gain(&p))) {
            c.check(&format!("R+(0,{r})"), (g - 2.0).abs() <= 1e-8, format!("{g:.12}"));
        }
    }
    for q in [0.1, 0.3] {
        let lim = relative_gain_limit(q);
        for sign in [Sign::Add, Sign::Subtract] {
            if let Some(g) = c.record("gain", tuned(q, 5.0, sign).and_then(|p| relative_gain(&p))) {
                let rel = ((g - lim) / lim).abs();
                c.check(
                    &format!("R{}({q},5)", sign.label()),
                    rel <= 0.01,
                    format!("{g:.6} vs limit {lim:.6}"),
                );
            }
        }
    }
    c.finish(6, "relative gain", start)
}

/// Sign scan of `W` on a dense whitened grid, refined by compass search on `W / W^G`.
/// Returns the smallest value of `W / W^G` found.
pub fn sign_scan_min_ratio(ps: &PhotonTunedState, grid: usize) -> f64 {
    let g = ps.mother();
    let chol = (g.covariance() * 0.5).cholesky().expect("valid state");
    let cl = chol.l();
    let d = g.displacement().clone();
    let ratio = |r: &DVector<f64>| {
        let wg = g.gaussian_wigner(r);
        let v = ps.wigner(r) / wg;
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut best = (f64::INFINITY, d.clone());
    for u1 in linspace(-8.0, 8.0, grid) {
        for u2 in linspace(-8.0, 8.0, grid) {
            let r = &d + &cl * DVector::from_vec(vec![u1, u2]);
            let v = ratio(&r);
            if v < best.0 {
                best = (v, r);
            }
        }
    }
    let (mut fbest, mut x) = best;
    let mut step = 16.0 / grid as f64 * cl.norm();
    let dirs = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)];
    for _ in 0..5000 {
        let mut improved = false;
        for (a, b) in dirs {
            let y = &x + DVector::from_vec(vec![a * step, b * step]);
            let fy = ratio(&y);
            if fy < fbest {
                fbest = fy;
                x = y;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    fbest
}

/// Random single-mode mother: rotated squeezed thermal state with a displacement.
pub fn random_single_mode_mother<R: Rng + ?Sized>(rng: &mut R) -> GaussianState {
    let q = 0.9 * rng.random::<f64>();
    let r = 2.0 * rng.random::<f64>();
    let phi = PI * rng.random::<f64>();
    let base = make_sqth(q, r).expect("in domain");
    let (s, co) = phi.sin_cos();
    let rot = DMatrix::from_row_slice(2, 2, &[co, s, -s, co]);
    let v = &rot * base.covariance() * rot.transpose();
    let d = DVector::from_fn(2, |_, _| 2.0 * rng.random::<f64>() - 1.0);
    GaussianState::new((&v + v.transpose()) * 0.5, d).expect("valid")
}

pub fn criterion_7(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagree = 0;
    let mut negatives = 0;
    for _ in 0..200 {
        let mother = random_single_mode_mother(&mut rng);
        let Some(ps) = c.record("build", PhotonTunedState::new(mother, Sign::Subtract, mv1())) else {
            continue;
        };
        let Some(rep) = c.record("classify", classify_subtracted(&ps)) else {
            continue;
        };
        let scan_negative = sign_scan_min_ratio(&ps, 201) < -1e-12;
        negatives += scan_negative as usize;
        if scan_negative != rep.wigner_negative.is_negative() {
            disagree += 1;
        }
    }
    c.check(
        "disagreements",
        disagree == 0,
        format!("{disagree} of 200 ({negatives} negative by scan)"),
    );
    let mut worst: f64 = 0.0;
    for q in linspace(0.05, 0.95, 19) {
        let f = |r: f64| make_sqth(q, r).map(|s| s.min_eig_v_minus_i().0).unwrap_or(f64::NAN);
        let root = bisect(f, 0.0, 5.0);
        let lines = boundary_lines(q).expect("in domain");
        worst = worst.max((root - lines.r_classical).abs());
    }
    c.check("r_classical crossing", worst < 1e-10, format!("max |diff| {worst:.2e}"));
    c.finish(7, "classification audit", start)
}

pub fn criterion_8() -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut worst: f64 = 0.0;
    let mut worst_engine: f64 = 0.0;
    for k in 1..=9 {
        let q = k as f64 / 10.0;
        let f = |r: f64| qcs_closed_form_sqth(q, r, Sign::Subtract).map(|v| v - 1.0).unwrap_or(f64::NAN);
        let root = bisect(f, 0.0, 3.0);
        let lines = boundary_lines(q).expect("in domain");
        worst = worst.max((root - lines.r_qcs_one).abs());
        if let Some(v) = c.record(
            "engine",
            tuned(q, lines.r_qcs_one, Sign::Subtract).and_then(|p| qcs_photon_tuned(&p)),
        ) {
            worst_engine = worst_engine.max((v.qcs_squared - 1.0).abs());
        }
        if let Ok(g) = qcs_sqth(q, lines.r_qcs_one) {
            worst_engine = worst_engine.max((g - 1.0).abs());
        }
    }
    c.check("|root - r_qcs_one|", worst < 1e-8, format!("{worst:.2e}"));
    c.check("C2 at r_qcs_one", worst_engine < 1e-8, format!("max |C2 - 1| {worst_engine:.2e}"));
    c.finish(8, "level-line coincidence", start)
}

pub fn criterion_9(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    let cfg = McConfig {
        seed,
        ..McConfig::default()
    };
    let vectors = [
        ModeVector::from_real(&[1.0, 0.0]).expect("nonzero"),
        ModeVector::from_real(&[0.0, 1.0]).expect("nonzero"),
        ModeVector::from_real(&[1.0, 1.0]).expect("nonzero"),
    ];
    for cv in &vectors {
        if let Some(rep) = c.record("mc", negative_volume_two_mode_sqthp(0.2, 0.5, cv, &cfg)) {
            c.check(
                &format!("N_W c={:?}", cv.as_slice().iter().map(|z| z.re).collect::<Vec<_>>()),
                (rep.volume - 0.104).abs() <= 0.003,
                format!("{:.5} +- {:.1e}", rep.volume, rep.error_estimate),
            );
        }
    }
    if let Some(avg) = c.record("avg", two_mode_sqthp_qcs_average(0.2, 0.5)) {
        for cv in &vectors {
            if let Some(v) = c.record("qcs", two_mode_sqthp_qcs(0.2, 0.5, cv)) {
                c.check(
                    "C2_2SqTh+",
                    (v - 1.54).abs() <= 0.01 && (v - avg).abs() <= 1e-8,
                    format!("{v:.10} vs average {avg:.10}"),
                );
            }
        }
    }
    let t = start.elapsed().as_secs_f64();
    c.check("runtime", t < 60.0, format!("{t:.2} s < 60 s"));
    c.finish(9, "two-mode anchors", start)
}

pub fn criterion_10() -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    for a in [0.0, 1.0, 3.0] {
        let odd = TwoModeCoherentPlus::new(C64::new(a, 0.0), Parity::Odd);
        if let Some(s) = c.record("odd", odd.scalars()) {
            c.check(
                &format!("C2_odd({a})"),
                (s.qcs_squared - 2.0).abs() <= 1e-8,
                format!("{:.12}", s.qcs_squared),
            );
        }
        if let Some(rep) = c.record("odd", negative_volume_even_odd(a, Parity::Odd)) {
            c.check(
                &format!("N_W_odd({a})"),
                (rep.volume - 0.2131).abs() <= 1e-4,
                format!("{:.6}", rep.volume),
            );
        }
    }
    let e0 = negative_volume_even_odd(0.0, Parity::Even);
    let e19 = negative_volume_even_odd(1.9, Parity::Even);
    if let (Some(e0), Some(e19)) = (c.record("even", e0), c.record("even", e19)) {
        let ratio = e19.volume / e0.volume;
        c.check(
            "N_W_even(1.9)/N_W_even(0)",
            (ratio - 0.05).abs() <= 0.01,
            format!("{ratio:.5} vs 0.05 +- 0.01"),
        );
    }
    let npt = TwoModeCoherentPlus::new(C64::new(1.0, 0.0), Parity::Even).npt();
    c.check("NPT_even(1)", (npt - 0.5).abs() <= 1e-8, format!("{npt:.12}"));
    let eof = TwoModeCoherentPlus::new(C64::new(1.0, 0.0), Parity::Odd).eof();
    c.check("EoF_odd", (eof - LN_2).abs() <= 1e-8, format!("{eof:.12}"));
    c.finish(10, "even/odd family", start)
}

pub fn criterion_11() -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    let q = 0.1;
    let lines = boundary_lines(q).expect("in domain");
    if let Some(r_sat) = c.record("saturation", qng_saturation_sqth_minus(q)) {
        c.check(
            "ordering",
            lines.r_classical < r_sat && r_sat < lines.r_qcs_one,
            format!(
                "{:.6} < {r_sat:.6} < {:.6}",
                lines.r_classical, lines.r_qcs_one
            ),
        );
        let mut uncertified = 0;
        for r in linspace(r_sat, lines.r_qcs_one, 41).into_iter().skip(1) {
            match qng_margin_sqth_minus(q, r) {
                Ok(m) if m <= 0.0 => {}
                _ => uncertified += 1,
            }
        }
        c.check("certified strip", uncertified == 0, format!("{uncertified} of 40 inconclusive"));
    }
    c.finish(11, "non-Gaussianity witness", start)
}

/// `W±(0)` of photon-added/subtracted squeezed thermal states.
pub fn wigner_origin_sqth(q: f64, r: f64, sign: Sign) -> f64 {
    let c = (2.0 * r).cosh();
    let pre = (1.0 - q).powi(2) / (PI * (1.0 + q).powi(2));
    match sign {
        Sign::Add => -pre * ((1.0 - q) * c + 1.0 + q) / ((1.0 + q) * c + 1.0 - q),
        Sign::Subtract => pre * (-(1.0 - q) * c + 1.0 + q) / ((1.0 + q) * c - 1.0 + q),
    }
}

pub fn criterion_12() -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut worst_origin: f64 = 0.0;
    let mut worst_boundary: f64 = 0.0;
    let mut iff_fail = 0;
    for q in linspace(0.0, 0.9, 10) {
        for r in linspace(0.0, 2.0, 9) {
            for sign in [Sign::Add, Sign::Subtract] {
                if sign == Sign::Subtract && q == 0.0 && r == 0.0 {
                    continue;
                }
                let Some(ps) = c.record("build", tuned(q, r, sign)) else {
                    continue;
                };
                let w0 = ps.wigner(&DVector::zeros(2));
                worst_origin = worst_origin.max((w0 - wigner_origin_sqth(q, r, sign)).abs());
                let scale = 1.0 / ps.mother().wigner_scale_inv();
                let region = negative_region_sqth(q, r, sign);
                if let Ok(NegativeRegion::Ellipse { kappa_x, kappa_p }) = region {
                    for th in linspace(0.0, 2.0 * PI, 25) {
                        let p = DVector::from_vec(vec![kappa_x * th.cos(), kappa_p * th.sin()]);
                        worst_boundary = worst_boundary.max(ps.wigner(&p).abs() / scale);
                    }
                }
                if sign == Sign::Subtract {
                    let predicted = q < r.tanh().powi(2);
                    let direct = w0 < 0.0;
                    let geometric = matches!(region, Ok(NegativeRegion::Ellipse { .. }));
                    if predicted != direct || predicted != geometric {
                        iff_fail += 1;
                    }
                }
            }
        }
    }
    c.check("W(0) closed forms", worst_origin < 1e-12, format!("max |diff| {worst_origin:.2e}"));
    c.check("ellipse boundary", worst_boundary < 1e-10, format!("max |W|/scale {worst_boundary:.2e}"));
    c.check("SqTh- negative iff q < tanh^2 r", iff_fail == 0, format!("{iff_fail} mismatches"));
    c.finish(12, "negative-region geometry", start)
}

/// Recomputes the single-mode spot values at `(q, r) = (0.1, 0.5)`; informational only.
pub fn criterion_13() -> CheckResult {
    let start = Instant::now();
    let mut c = Checks::new();
    let (q, r) = (0.1, 0.5);
    let vals = (|| -> Result<[f64; 7]> {
        let plus = tuned(q, r, Sign::Add)?;
        let minus = tuned(q, r, Sign::Subtract)?;
        Ok([
            qcs_closed_form_sqth(q, r, Sign::Add)?,
            qcs_sqth(q, r)?,
            qcs_closed_form_sqth(q, r, Sign::Subtract)?,
            negative_volume_single_mode(&plus)?.volume,
            negative_volume_single_mode(&minus)?.volume,
            relative_gain(&minus)?,
            relative_gain(&plus)?,
        ])
    })();
    if let Some(v) = c.record("spot values", vals) {
        c.check(
            "recomputed",
            v.iter().all(|x| x.is_finite()),
            format!(
                "C2_SqTh+={:.4} C2_SqTh={:.4} C2_SqTh-={:.4} N_W+={:.4} N_W-={:.4} R-={:.4} R+={:.4}",
                v[0], v[1], v[2], v[3], v[4], v[5], v[6]
            ),
        );
    }
    c.finish(13, "spot values (documentation only)", start)
}

/// Extra cross-check used by the test suite: generic Monte Carlo on the odd state.
pub fn odd_state_monte_carlo(alpha: f64, seed: u64) -> Result<f64> {
    let ps = TwoModeCoherentPlus::new(C64::new(alpha, 0.0), Parity::Odd).photon_tuned()?;
    let cfg = McConfig {
        seed,
        ..McConfig::default()
    };
    Ok(negative_volume_two_mode(&ps, &cfg)?.volume)
}

pub fn run_all(seed: u64) -> Vec<CheckResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(seed),
        criterion_5(),
        criterion_6(),
        criterion_7(seed),
        criterion_8(),
        criterion_9(seed),
        criterion_10(),
        criterion_11(),
        criterion_12(),
        criterion_13(),
    ]
}

/// Quoted negative volume of the Fock state, for reference in reports.
pub fn fock_reference() -> f64 {
    fock_one_negative_volume()
}
