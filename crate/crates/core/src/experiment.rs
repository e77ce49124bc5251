//! Experiment configuration and the `params`, `approx` and `errors` workflows.
//!
//! Configuration files are flat `key=value` text (`#` starts a comment) using
//! the same keys as the command-line flags: `a`, `T`, `n`, `method`,
//! `procedure`, `x`, `t-grid`, `precision`, `out`, `fixed-params`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{int, Field, Rational};
use crate::error::{Error, Result};
use crate::model::{exact_solution, MethodKind, ProblemConfig};
use crate::numeric::{parse_rational, Precision, Real, DEFAULT_DIGITS};
use crate::optimize::{fixed_spec, functional_value, greedy_schedule, ErrorFunctionalConfig, MinimizerOptions};
use crate::procedure::{run, ControlParam, IterationTrace, ProcedureKind, ProcedureSpec};

/// Uniform grid `start, start+h, …, stop` with `count ≥ 2` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TGrid {
    pub start: Rational,
    pub stop: Rational,
    pub count: usize,
}

impl TGrid {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(Error::Parse(format!("t-grid must be start:stop:count, got `{s}`")));
        };
        let count: usize = count.trim().parse().map_err(|_| Error::Parse(format!("bad grid count `{count}`")))?;
        let grid = Self { start: parse_rational(start)?, stop: parse_rational(stop)?, count };
        if grid.count < 2 {
            return Err(Error::Config("t-grid needs at least 2 points".into()));
        }
        Ok(grid)
    }

    pub fn default_for(method: MethodKind) -> Self {
        match method {
            MethodKind::Blues => Self { start: int(0), stop: int(10), count: 501 },
            MethodKind::Vim => Self { start: int(0), stop: int(4), count: 201 },
        }
    }

    pub fn points(&self) -> Vec<Rational> {
        let h = (&self.stop - &self.start) / int(self.count as i64 - 1);
        (0..self.count).map(|i| &self.start + &h * int(i as i64)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub a: Rational,
    pub horizon: Rational,
    pub steps: usize,
    pub method: MethodKind,
    /// `None` means every comparison procedure where that makes sense.
    pub procedure: Option<ProcedureKind>,
    pub fixed_params: Option<BTreeMap<String, Rational>>,
    pub x: Rational,
    pub t_grid: Option<TGrid>,
    /// Output directory; `errors` falls back to the working directory.
    pub out_dir: Option<PathBuf>,
    pub precision: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            a: int(2),
            horizon: int(1),
            steps: 3,
            method: MethodKind::Vim,
            procedure: None,
            fixed_params: None,
            x: int(1),
            t_grid: None,
            out_dir: None,
            precision: DEFAULT_DIGITS,
        }
    }
}

/// Parses `key=value` lines.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) =
            line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

impl ExperimentConfig {
    /// Applies `key → value` settings on top of `self`.
    pub fn apply(mut self, settings: &BTreeMap<String, String>) -> Result<Self> {
        for (key, value) in settings {
            match key.as_str() {
                "a" => self.a = parse_rational(value)?,
                "T" => self.horizon = parse_rational(value)?,
                "n" => self.steps = value.parse().map_err(|_| Error::Parse(format!("bad step count `{value}`")))?,
                "method" => self.method = value.parse()?,
                "procedure" => {
                    self.procedure = match value.as_str() {
                        "all" => None,
                        p => Some(p.parse()?),
                    }
                }
                "x" => self.x = parse_rational(value)?,
                "t-grid" => self.t_grid = Some(TGrid::parse(value)?),
                "precision" => {
                    self.precision = value.parse().map_err(|_| Error::Parse(format!("bad precision `{value}`")))?
                }
                "out" => self.out_dir = Some(PathBuf::from(value)),
                "fixed-params" => self.fixed_params = Some(load_fixed_params(Path::new(value))?),
                other => return Err(Error::Config(format!("unknown key `{other}`"))),
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::default().apply(&parse_key_values(&fs::read_to_string(path)?)?)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.horizon.is_positive() {
            return Err(Error::Config("T must be positive".into()));
        }
        if self.precision == 0 {
            return Err(Error::Config("precision must be at least 1 digit".into()));
        }
        Ok(())
    }

    pub fn problem(&self) -> ProblemConfig {
        ProblemConfig::new(self.a.clone())
    }

    pub fn functional(&self) -> Result<ErrorFunctionalConfig> {
        ErrorFunctionalConfig::new(self.horizon.clone())
    }

    pub fn prec(&self) -> Precision {
        Precision::digits(self.precision)
    }

    fn minimizer(&self) -> MinimizerOptions {
        MinimizerOptions { precision: Precision::digits(self.precision.max(DEFAULT_DIGITS)), ..Default::default() }
    }

    pub fn grid(&self) -> TGrid {
        self.t_grid.clone().unwrap_or_else(|| TGrid::default_for(self.method))
    }
}

/// Fixed parameters: either a `params` report or a flat `{"name": "p/q"}` object.
pub fn parse_fixed_params(text: &str) -> Result<BTreeMap<String, Rational>> {
    if let Ok(report) = serde_json::from_str::<ParamsReport>(text) {
        let mut out = BTreeMap::new();
        for step in &report.steps {
            for p in &step.parameters {
                out.insert(p.name.clone(), parse_rational(&p.rational)?);
            }
        }
        return Ok(out);
    }
    let flat: BTreeMap<String, serde_json::Value> = serde_json::from_str(text)?;
    flat.into_iter()
        .map(|(k, v)| {
            let s = match v {
                serde_json::Value::String(s) => s,
                serde_json::Value::Number(n) => n.to_string(),
                other => return Err(Error::Parse(format!("parameter `{k}`: unsupported value {other}"))),
            };
            Ok((k, parse_rational(&s)?))
        })
        .collect()
}

pub fn load_fixed_params(path: &Path) -> Result<BTreeMap<String, Rational>> {
    parse_fixed_params(&fs::read_to_string(path)?)
}

/// Builds a numeric procedure from fixed values named `alpha1…`, `beta1…`,
/// `alpha` (Krasnoselskii) or `lambda`.
pub fn spec_from_fixed(
    kind: ProcedureKind,
    steps: usize,
    values: &BTreeMap<String, Rational>,
) -> Result<ProcedureSpec> {
    let get = |name: &str| {
        values.get(name).cloned().map(ControlParam::Value).ok_or_else(|| Error::UnboundParam(name.to_string()))
    };
    let seq = |prefix: &str| (1..=steps).map(|k| get(&format!("{prefix}{k}"))).collect::<Result<Vec<_>>>();
    Ok(match kind {
        ProcedureKind::Picard => ProcedureSpec::Picard,
        ProcedureKind::Mann => ProcedureSpec::Mann { alpha: seq("alpha")? },
        ProcedureKind::Krasnoselskii => ProcedureSpec::Krasnoselskii { alpha: get("alpha")? },
        ProcedureKind::Ishikawa => ProcedureSpec::Ishikawa { alpha: seq("alpha")?, beta: seq("beta")? },
        ProcedureKind::HybridPk => ProcedureSpec::HybridPk { lambda: get("lambda")? },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamEntry {
    pub name: String,
    pub value_5dp: String,
    pub value_12dp: String,
    /// Exact value used by the algebra.
    pub rational: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepEntry {
    pub step: usize,
    pub parameters: Vec<ParamEntry>,
    /// Functional of the step's iterate at the chosen parameters.
    #[serde(rename = "E")]
    pub e: String,
    /// Same functional at the parameters that reduce the step to Picard.
    #[serde(rename = "E_picard_point")]
    pub e_picard_point: Option<String>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsReport {
    pub method: MethodKind,
    pub procedure: ProcedureKind,
    pub a: String,
    #[serde(rename = "T")]
    pub horizon: String,
    pub n: usize,
    pub optimized: bool,
    pub steps: Vec<StepEntry>,
    /// Functional of the final iterate.
    #[serde(rename = "E_final")]
    pub e_final: String,
    /// Functional of the `n`-th Picard iterate.
    #[serde(rename = "E_picard")]
    pub e_picard: String,
    pub not_worse_than_picard: bool,
}

impl ParamsReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Human-readable table.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} / {}  a={}  T={}  n={}{}",
            self.method,
            self.procedure,
            self.a,
            self.horizon,
            self.n,
            if self.optimized { "" } else { "  (fixed)" }
        );
        let _ = writeln!(s, "{:>4}  {:<8} {:>10}  {:>16}  {:>14}", "step", "param", "value", "value (12 dp)", "E");
        for st in &self.steps {
            for p in &st.parameters {
                let _ = writeln!(
                    s,
                    "{:>4}  {:<8} {:>10}  {:>16}  {:>14}",
                    st.step, p.name, p.value_5dp, p.value_12dp, st.e
                );
            }
        }
        let _ = writeln!(s, "E(final) = {}   E(Picard) = {}", self.e_final, self.e_picard);
        s
    }
}

fn sci(v: &Real) -> String {
    v.to_sci_string(12)
}

fn require_procedure(cfg: &ExperimentConfig) -> Result<ProcedureKind> {
    cfg.procedure.ok_or_else(|| Error::Config("this command needs --procedure".into()))
}

/// Numeric procedure for a configuration: fixed values when given, otherwise
/// the optimized schedule.
pub fn resolve_procedure(cfg: &ExperimentConfig, kind: ProcedureKind) -> Result<ProcedureSpec> {
    if kind == ProcedureKind::Picard {
        return Ok(ProcedureSpec::Picard);
    }
    match &cfg.fixed_params {
        Some(values) => spec_from_fixed(kind, cfg.steps, values),
        None => {
            let results =
                greedy_schedule(kind, cfg.method, &cfg.problem(), &cfg.functional()?, cfg.steps, &cfg.minimizer())?;
            fixed_spec(kind, &results)
        }
    }
}

pub fn cmd_params(cfg: &ExperimentConfig) -> Result<ParamsReport> {
    let kind = require_procedure(cfg)?;
    if kind == ProcedureKind::Picard {
        return Err(Error::InvalidProcedure("picard has no control parameters".into()));
    }
    if cfg.steps == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    let problem = cfg.problem();
    let efc = cfg.functional()?;
    let mopts = cfg.minimizer();
    let entry = |name: &str, value: &Real, rational: &Rational| ParamEntry {
        name: name.to_string(),
        value_5dp: value.to_fixed_string(5),
        value_12dp: value.to_fixed_string(12),
        rational: rational.to_string(),
    };

    let (steps, spec, optimized) = match &cfg.fixed_params {
        None => {
            let results = greedy_schedule(kind, cfg.method, &problem, &efc, cfg.steps, &mopts)?;
            let steps = results
                .iter()
                .map(|r| StepEntry {
                    step: r.step,
                    parameters: r.bindings.iter().map(|b| entry(&b.name, &b.value, &b.rational)).collect(),
                    e: sci(&r.value),
                    e_picard_point: r.picard_value.as_ref().map(sci),
                    degenerate: r.degenerate,
                })
                .collect();
            (steps, fixed_spec(kind, &results)?, true)
        }
        Some(values) => {
            let spec = spec_from_fixed(kind, cfg.steps, values)?;
            let trace = run(&spec, cfg.method, &problem, cfg.steps)?;
            let names_at = |k: usize| -> Vec<String> {
                match kind {
                    ProcedureKind::Mann => vec![format!("alpha{k}")],
                    ProcedureKind::Ishikawa => vec![format!("alpha{k}"), format!("beta{k}")],
                    ProcedureKind::Krasnoselskii => vec!["alpha".into()],
                    _ => vec!["lambda".into()],
                }
            };
            let per_step = matches!(kind, ProcedureKind::Mann | ProcedureKind::Ishikawa);
            let step_ids: Vec<usize> = if per_step { (1..=cfg.steps).collect() } else { vec![cfg.steps] };
            let mut steps = Vec::new();
            for k in step_ids {
                let parameters = names_at(k)
                    .iter()
                    .map(|n| {
                        let r = &values[n];
                        entry(n, &Real::from_rational(r, mopts.precision), r)
                    })
                    .collect();
                let e = functional_value(&trace.iterates[k], &problem, &efc, &mopts)?;
                steps.push(StepEntry { step: k, parameters, e: sci(&e), e_picard_point: None, degenerate: false });
            }
            (steps, spec, false)
        }
    };

    let trace = run(&spec, cfg.method, &problem, cfg.steps)?;
    let e_final = functional_value(trace.last(), &problem, &efc, &mopts)?;
    let picard = run(&ProcedureSpec::Picard, cfg.method, &problem, cfg.steps)?;
    let e_picard = functional_value(picard.last(), &problem, &efc, &mopts)?;
    Ok(ParamsReport {
        method: cfg.method,
        procedure: kind,
        a: cfg.a.to_string(),
        horizon: cfg.horizon.to_string(),
        n: cfg.steps,
        optimized,
        steps,
        e_final: sci(&e_final),
        e_picard: sci(&e_picard),
        not_worse_than_picard: e_final <= e_picard,
    })
}

/// Closed forms of every iterate, one `u_k = …` line each (plus `v_k` lines
/// for two-step procedures).
/// `params_<method>_<procedure>_n<n>.json`.
pub fn params_file_name(report: &ParamsReport) -> String {
    format!("params_{}_{}_n{}.json", report.method, report.procedure, report.n)
}

pub fn cmd_approx(cfg: &ExperimentConfig) -> Result<String> {
    let kind = cfg.procedure.unwrap_or(ProcedureKind::Picard);
    let spec = resolve_procedure(cfg, kind)?;
    let trace = run(&spec, cfg.method, &cfg.problem(), cfg.steps)?;
    Ok(render_trace(&trace))
}

pub fn render_trace(trace: &IterationTrace) -> String {
    let mut s = String::new();
    for (k, u) in trace.iterates.iter().enumerate() {
        if k > 0 {
            if let Some(v) = trace.auxiliary.get(k - 1) {
                let _ = writeln!(s, "v_{} = {v}", k - 1);
            }
        }
        let _ = writeln!(s, "u_{k} = {u}");
    }
    s
}

#[derive(Debug, Clone)]
pub struct ErrorCurveRow {
    pub t: Rational,
    pub approx: Real,
    pub exact: Real,
    /// `None` when the approximant is exact at this point.
    pub log10_abs_err: Option<Real>,
}

impl ErrorCurveRow {
    pub fn csv_line(&self, digits: usize) -> String {
        let err = self.log10_abs_err.as_ref().map_or_else(|| "-inf".to_string(), |v| v.to_sci_string(digits));
        format!(
            "{},{},{},{}",
            format_grid_value(&self.t, digits),
            self.approx.to_sci_string(digits),
            self.exact.to_sci_string(digits),
            err
        )
    }
}

pub const CSV_HEADER: &str = "t,approx,exact,log10_abs_err";

/// Exact decimal when the expansion terminates, else `digits` significant digits.
fn format_grid_value(t: &Rational, digits: usize) -> String {
    let mut d = t.denom().clone();
    for p in [2u32, 5] {
        let p = num_bigint::BigInt::from(p);
        while (&d % &p).is_zero() {
            d /= &p;
        }
    }
    if d == num_bigint::BigInt::from(1) {
        let mut places = 0usize;
        let mut scaled = t.clone();
        while !scaled.is_integer() {
            scaled *= int(10);
            places += 1;
        }
        return Real::from_rational(t, Precision::digits(digits.max(places + 20))).to_fixed_string(places);
    }
    Real::from_rational(t, Precision::digits(digits)).to_sci_string(digits)
}

/// `log10|u_ex − u|` along `t` at fixed `x`; the difference is formed exactly
/// before evaluation.
pub fn error_curve(
    u: &Field,
    problem: &ProblemConfig,
    x: &Rational,
    grid: &TGrid,
    prec: Precision,
) -> Result<Vec<ErrorCurveRow>> {
    let exact = exact_solution(problem);
    let diff = exact.try_sub(u)?;
    let exact_at_zero = diff.at_t0().is_zero();
    let xr = Real::from_rational(x, prec);
    grid.points()
        .into_iter()
        .map(|t| {
            let tr = Real::from_rational(&t, prec);
            let approx = u.eval_numeric(&xr, &tr, prec)?;
            let ex = exact.eval_numeric(&xr, &tr, prec)?;
            let d = diff.eval_numeric(&xr, &tr, prec)?;
            let log10_abs_err =
                if (t.is_zero() && exact_at_zero) || d.is_zero() { None } else { Some(d.abs().log10()) };
            Ok(ErrorCurveRow { t, approx, exact: ex, log10_abs_err })
        })
        .collect()
}

pub fn render_csv(rows: &[ErrorCurveRow], digits: usize) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.csv_line(digits));
        s.push('\n');
    }
    s
}

/// The procedures compared in the error figures.
pub const COMPARISON: [ProcedureKind; 4] =
    [ProcedureKind::Picard, ProcedureKind::Mann, ProcedureKind::Ishikawa, ProcedureKind::HybridPk];

/// Writes one CSV per procedure into `out_dir`, returning the paths.
pub fn cmd_errors(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let kinds: Vec<ProcedureKind> = match cfg.procedure {
        Some(k) => vec![k],
        None => COMPARISON.to_vec(),
    };
    let out_dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir)?;
    let problem = cfg.problem();
    let grid = cfg.grid();
    let mut written = Vec::new();
    for kind in kinds {
        let spec = resolve_procedure(cfg, kind)?;
        let trace = run(&spec, cfg.method, &problem, cfg.steps)?;
        let rows = error_curve(trace.last(), &problem, &cfg.x, &grid, cfg.prec())?;
        let path = out_dir.join(format!("{}_{}_n{}.csv", cfg.method, kind, cfg.steps));
        fs::write(&path, render_csv(&rows, cfg.precision))?;
        written.push(path);
    }
    Ok(written)
}

/// Least-squares slope of `log10_abs_err` against `t` over `[from, to]`.
pub fn fitted_slope(rows: &[ErrorCurveRow], from: f64, to: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| {
            let t = Real::from_rational(&r.t, Precision::digits(20)).to_f64();
            let e = r.log10_abs_err.as_ref()?.to_f64();
            (t >= from && t <= to).then_some((t, e))
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx).powi(2)));
    Some(num / den)
}
