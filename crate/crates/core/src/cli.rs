//! Command-line front end: `gausspm {eval|sweep|selftest}`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance;
use crate::classify::{classify, classify_gaussian, ClassificationReport, Verdict};
use crate::error::Error;
use crate::negativity::{
    negative_volume_even_odd, negative_volume_single_mode, negative_volume_two_mode, qng_witness,
    McConfig,
};
use crate::phase_space::{GaussianState, ModeVector};
use crate::photon_ops::{set_m_perturbation, PhotonTunedState, Sign};
use crate::qcs::{qcs_gaussian, qcs_photon_tuned, relative_gain};
use crate::states::{make_coherent, make_sqth_product, Parity, TwoModeCoherentPlus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "gausspm", version, about = "Photon-added/subtracted Gaussian state toolkit")]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one quantity for one state and print a JSON record.
    Eval(EvalArgs),
    /// Evaluate a quantity on a (q, r) grid of squeezed thermal states.
    Sweep(SweepArgs),
    /// Run the acceptance checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Sqth,
    Coherent,
    Evenodd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Add,
    Subtract,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Qcs,
    Gain,
    Negativity,
    Classify,
    Qng,
    Nbar,
    Npt,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct StateArgs {
    #[arg(long, value_enum, default_value = "sqth")]
    state: StateKind,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Coherent amplitude, `a` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    modes: u8,
    #[arg(long, value_enum, default_value = "add")]
    op: Op,
    /// Mode vector as comma-separated `re,im` pairs; normalized automatically.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Flat `key=value` file read before the command-line flags.
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum)]
    quantity: Quantity,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    quantity: Quantity,
    #[arg(long, value_enum, default_value = "add")]
    op: Op,
    /// `min:max:steps`
    #[arg(long)]
    q_range: String,
    /// `min:max:steps`
    #[arg(long)]
    r_range: String,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    modes: u8,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Debug hook: shifts the constant of the Wigner prefactor.
    #[arg(long, allow_hyphen_values = true)]
    perturb_m: Option<f64>,
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Io(_) => EXIT_IO,
            CliError::Lib(e) => exit_code(e),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Io(_) => "io",
            CliError::Lib(e) => e.kind(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Parse(m) | CliError::Io(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

/// Exit code for a library error: 3 for invalid input, 5 for numerical failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidState(_)
        | Error::InvalidModeVector(_)
        | Error::AnnihilatingSubtraction { .. }
        | Error::Domain(_) => EXIT_DOMAIN,
        Error::NotPositiveDefinite
        | Error::DegreeOverflow { .. }
        | Error::StepUnderflow { .. }
        | Error::NonConvergence { .. } => EXIT_NUMERIC,
    }
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(&args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI on `args` (including the program name), writing to `out` and `err`.
pub fn run_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(args, out) {
        Ok(code) => code,
        Err(e) => {
            let msg = e.message().replace('\n', " ");
            let _ = writeln!(
                err,
                "error kind={} message={}",
                e.kind(),
                serde_json::to_string(msg.trim()).unwrap_or_default()
            );
            e.code()
        }
    }
}

fn dispatch(args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    let args = splice_params(args)?;
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{e}").map_err(io_err)?;
                return Ok(EXIT_OK);
            }
            let text = e.to_string();
            let first = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            return Err(CliError::Parse(first.trim_start_matches("error: ").to_string()));
        }
    };
    match cli.command {
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Selftest(a) => cmd_selftest(&a, out),
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Inserts `--key value` pairs from a `--params` file right after the subcommand, so that
/// flags given on the command line take precedence.
fn splice_params(args: &[String]) -> Result<Vec<String>, CliError> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--params" {
            path = Some(
                args.get(i + 1)
                    .ok_or_else(|| CliError::Parse("--params needs a path".into()))?
                    .clone(),
            );
        } else if let Some(p) = a.strip_prefix("--params=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(args.to_vec());
    };
    let text = fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let mut extra = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("{path}:{}: expected key=value", n + 1)))?;
        let k = k.trim().replace('_', "-");
        if k == "params" {
            return Err(CliError::Parse(format!("{path}:{}: nested params file", n + 1)));
        }
        extra.push(format!("--{k}={}", v.trim()));
    }
    let mut out = args.to_vec();
    let at = out.len().min(2);
    out.splice(at..at, extra);
    Ok(out)
}

fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Parse(format!("{what}: cannot parse '{}'", t.trim())))
        })
        .collect()
}

fn parse_alpha(s: &str) -> Result<C64, CliError> {
    match parse_f64_list(s, "--alpha")?.as_slice() {
        [a] => Ok(C64::new(*a, 0.0)),
        [a, b] => Ok(C64::new(*a, *b)),
        _ => Err(CliError::Parse("--alpha expects 'a' or 're,im'".into())),
    }
}

fn parse_mode_vector(s: &str) -> Result<Vec<C64>, CliError> {
    let v = parse_f64_list(s, "--c")?;
    if v.len() % 2 != 0 {
        return Err(CliError::Parse("--c expects comma-separated re,im pairs".into()));
    }
    Ok(v.chunks(2).map(|p| C64::new(p[0], p[1])).collect())
}

fn parse_range(s: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Parse(format!("{flag} expects min:max:steps, got '{s}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if steps < 2 {
        return Err(CliError::Parse(format!("{flag}: steps must be at least 2")));
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(bad());
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

/// A fully resolved state description.
#[derive(Debug, Clone)]
pub struct StateSpec {
    pub kind: StateKind,
    pub q: f64,
    pub r: f64,
    pub alpha: C64,
    pub modes: usize,
    pub op: Op,
    pub c: Option<Vec<C64>>,
}

impl StateSpec {
    fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("kind".into(), json!(self.kind));
        match self.kind {
            StateKind::Sqth => {
                m.insert("q".into(), json!(self.q));
                m.insert("r".into(), json!(self.r));
            }
            StateKind::Coherent | StateKind::Evenodd => {
                m.insert("alpha".into(), json!([self.alpha.re, self.alpha.im]));
            }
        }
        m.insert("modes".into(), json!(self.modes));
        m.insert("op".into(), json!(self.op));
        if let Some(c) = &self.c {
            let pairs: Vec<[f64; 2]> = c.iter().map(|z| [z.re, z.im]).collect();
            m.insert("c".into(), json!(pairs));
        }
        Value::Object(m)
    }

    fn mode_vector(&self) -> crate::Result<ModeVector> {
        match &self.c {
            Some(c) => {
                if c.len() != self.modes {
                    return Err(Error::InvalidModeVector(format!(
                        "--c has {} entries for {} modes",
                        c.len(),
                        self.modes
                    )));
                }
                ModeVector::normalized(c.clone())
            }
            None => Ok(ModeVector::basis(self.modes, 0)),
        }
    }

    fn even_odd(&self) -> crate::Result<TwoModeCoherentPlus> {
        let parity = match &self.c {
            None => Parity::Even,
            Some(c) => {
                let mv = ModeVector::normalized(c.clone())?;
                let s = mv.as_slice();
                let h = std::f64::consts::FRAC_1_SQRT_2;
                let close = |z: C64, w: f64| (z - C64::new(w, 0.0)).norm() < 1e-9;
                if s.len() == 2 && close(s[0], h) && close(s[1], h) {
                    Parity::Even
                } else if s.len() == 2 && close(s[0], h) && close(s[1], -h) {
                    Parity::Odd
                } else {
                    return Err(Error::InvalidModeVector(
                        "evenodd needs c = (1,1) or (1,-1) up to normalization".into(),
                    ));
                }
            }
        };
        Ok(TwoModeCoherentPlus::new(self.alpha, parity))
    }

    fn mother(&self) -> crate::Result<GaussianState> {
        match self.kind {
            StateKind::Sqth => make_sqth_product(self.q, self.r, self.modes),
            StateKind::Coherent => make_coherent(&vec![self.alpha; self.modes]),
            StateKind::Evenodd => make_coherent(&[self.alpha, self.alpha]),
        }
    }

    /// The photon-tuned state, or `None` for `--op none`.
    fn tuned(&self) -> crate::Result<Option<PhotonTunedState>> {
        let sign = match self.op {
            Op::Add => Sign::Add,
            Op::Subtract => Sign::Subtract,
            Op::None => return Ok(None),
        };
        if self.kind == StateKind::Evenodd {
            if sign != Sign::Add {
                return Err(Error::Domain("evenodd states are photon-added".into()));
            }
            return self.even_odd()?.photon_tuned().map(Some);
        }
        PhotonTunedState::new(self.mother()?, sign, self.mode_vector()?).map(Some)
    }
}

fn resolve_state(a: &StateArgs) -> Result<StateSpec, CliError> {
    let modes = a.modes as usize;
    let alpha = a.alpha.as_deref().map(parse_alpha).transpose()?;
    let c = a.c.as_deref().map(parse_mode_vector).transpose()?;
    let (q, r) = match a.state {
        StateKind::Sqth => (
            a.q.ok_or_else(|| CliError::Parse("--state sqth needs --q".into()))?,
            a.r.ok_or_else(|| CliError::Parse("--state sqth needs --r".into()))?,
        ),
        _ => (0.0, 0.0),
    };
    let alpha = match a.state {
        StateKind::Sqth => C64::new(0.0, 0.0),
        _ => alpha.ok_or_else(|| CliError::Parse("this state needs --alpha".into()))?,
    };
    let modes = if a.state == StateKind::Evenodd { 2 } else { modes };
    Ok(StateSpec {
        kind: a.state,
        q,
        r,
        alpha,
        modes,
        op: a.op,
        c,
    })
}

/// Result of one evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub value: f64,
    pub method: String,
    pub error_estimate: f64,
}

impl Record {
    fn exact(value: f64, method: &str) -> Self {
        Self {
            value,
            method: method.into(),
            error_estimate: 0.0,
        }
    }
}

/// Numeric class code: 0 classical, 1 nonclassical, 2 strongly nonclassical with positive
/// Wigner function, 3 Wigner-negative, -1 undecided.
pub fn classify_code(rep: &ClassificationReport) -> i32 {
    match rep.wigner_negative {
        Verdict::Negative => 3,
        Verdict::Unknown => -1,
        Verdict::Positive if rep.classical => 0,
        Verdict::Positive if rep.strongly_nonclassical => 2,
        Verdict::Positive => 1,
    }
}

/// Evaluates `quantity` on `st`; `seed` drives two-mode Monte Carlo.
pub fn evaluate(st: &StateSpec, quantity: Quantity, seed: u64) -> crate::Result<Record> {
    let tuned = st.tuned()?;
    match quantity {
        Quantity::Qcs => Ok(match &tuned {
            Some(ps) => {
                let rep = qcs_photon_tuned(ps)?;
                Record::exact(rep.qcs_squared, rep.method.label())
            }
            None => {
                let rep = qcs_gaussian(&st.mother()?);
                Record::exact(rep.qcs_squared, rep.method.label())
            }
        }),
        Quantity::Gain => {
            let ps = tuned.ok_or_else(|| Error::Domain("gain needs --op add or subtract".into()))?;
            Ok(Record::exact(relative_gain(&ps)?, "moment-engine"))
        }
        Quantity::Negativity => {
            let Some(ps) = tuned else {
                return Ok(Record::exact(0.0, "gaussian-positive"));
            };
            let rep = if st.kind == StateKind::Evenodd {
                negative_volume_even_odd(st.alpha.norm(), st.even_odd()?.parity)?
            } else if ps.n() == 1 {
                negative_volume_single_mode(&ps)?
            } else {
                let cfg = McConfig {
                    seed,
                    ..McConfig::default()
                };
                negative_volume_two_mode(&ps, &cfg)?
            };
            Ok(Record {
                value: rep.volume,
                method: rep.method.label().into(),
                error_estimate: rep.error_estimate,
            })
        }
        Quantity::Classify => {
            let rep = match &tuned {
                Some(ps) => classify(ps)?,
                None => classify_gaussian(&st.mother()?),
            };
            Ok(Record::exact(classify_code(&rep) as f64, "exact-criterion"))
        }
        Quantity::Qng => {
            let ps = tuned.ok_or_else(|| Error::Domain("qng needs --op add or subtract".into()))?;
            let rep = qng_witness(&ps)?;
            Ok(Record::exact(rep.wigner_origin - rep.bound, "wigner-origin-witness"))
        }
        Quantity::Nbar => Ok(match &tuned {
            Some(ps) => Record::exact(ps.mean_photon_number()?, "moment-engine"),
            None => Record::exact(st.mother()?.mean_photon_number(), "gaussian-closed-form"),
        }),
        Quantity::Npt | Quantity::Eof => {
            if st.kind != StateKind::Evenodd || st.op != Op::Add {
                return Err(Error::Domain(
                    "npt and eof are available for --state evenodd --op add".into(),
                ));
            }
            let s = st.even_odd()?;
            Ok(if quantity == Quantity::Npt {
                Record::exact(s.npt(), "closed-form")
            } else {
                Record::exact(s.eof(), "schmidt-decomposition")
            })
        }
    }
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let st = resolve_state(&a.state)?;
    let rec = evaluate(&st, a.quantity, a.state.seed)?;
    let line = json!({
        "state": st.to_json(),
        "quantity": a.quantity,
        "value": rec.value,
        "method": rec.method,
        "error_estimate": rec.error_estimate,
    });
    writeln!(out, "{line}").map_err(io_err)?;
    Ok(EXIT_OK)
}

/// `%.{sig}g`-style formatting; `nan` for NaN.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mant = trim_zeros(mant);
        format!("{mant}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Monte Carlo seed for grid point `index`, independent of scheduling.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let qs = parse_range(&a.q_range, "--q-range")?;
    let rs = parse_range(&a.r_range, "--r-range")?;
    let c = a.c.as_deref().map(parse_mode_vector).transpose()?;
    let grid: Vec<(f64, f64)> = qs
        .iter()
        .flat_map(|&q| rs.iter().map(move |&r| (q, r)))
        .collect();
    let base = StateSpec {
        kind: StateKind::Sqth,
        q: 0.0,
        r: 0.0,
        alpha: C64::new(0.0, 0.0),
        modes: a.modes as usize,
        op: a.op,
        c,
    };
    // validate the mode vector once so a bad --c fails fast instead of filling the grid
    base.mode_vector()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let rows: Vec<Record> = pool.install(|| {
        grid.par_iter()
            .enumerate()
            .map(|(i, &(q, r))| {
                let st = StateSpec { q, r, ..base.clone() };
                evaluate(&st, a.quantity, point_seed(a.seed, i)).unwrap_or_else(|e| Record {
                    value: f64::NAN,
                    method: format!("undefined:{}", e.kind()),
                    error_estimate: f64::NAN,
                })
            })
            .collect()
    });
    let mut text = String::new();
    match a.format {
        Format::Csv => {
            text.push_str("q,r,value,method,error_estimate\n");
            for (&(q, r), rec) in grid.iter().zip(&rows) {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    format_sig(q, 12),
                    format_sig(r, 12),
                    format_sig(rec.value, 12),
                    rec.method,
                    format_sig(rec.error_estimate, 12)
                ));
            }
        }
        Format::Json => {
            for (&(q, r), rec) in grid.iter().zip(&rows) {
                let num = |x: f64| if x.is_finite() { json!(x) } else { Value::Null };
                let line = json!({
                    "q": q,
                    "r": r,
                    "value": num(rec.value),
                    "method": rec.method,
                    "error_estimate": num(rec.error_estimate),
                });
                text.push_str(&line.to_string());
                text.push('\n');
            }
        }
    }
    match &a.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes()).map_err(io_err)?,
    }
    Ok(EXIT_OK)
}

fn cmd_selftest(a: &SelftestArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    if let Some(delta) = a.perturb_m {
        set_m_perturbation(delta);
    }
    let results = acceptance::run_all(a.seed);
    set_m_perturbation(0.0);
    let mut failed = 0;
    for r in &results {
        writeln!(out, "{r}").map_err(io_err)?;
        failed += usize::from(!r.passed);
    }
    writeln!(
        out,
        "{} of {} checks passed in {:.2} s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    )
    .map_err(io_err)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_SELFTEST_FAILED })
}
