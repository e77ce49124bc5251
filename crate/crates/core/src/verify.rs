//! Self-checks of the algebra, the operators and the procedures.
//!
//! Every check is exact except `quadrature`, which compares analytic
//! integrals against adaptive Gauss–Kronrod at relative tolerance `1e-10`
//! of `∫|f|`. The Green convolution is injectable through [`VerifyHooks`] so
//! a corrupted implementation can be shown to be caught.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{int, ratio, Exponomial, Field, ParamPoly, ParamSpace, Rational};
use crate::model::{
    blues_t_with, blues_zeroth, exact_solution, initial_field_in, pde_residual, picard_closed_form, residual_operator,
    vim_t, MethodKind, ProblemConfig,
};
use crate::numeric::Precision;
use crate::optimize::{error_functional, ErrorFunctionalConfig};
use crate::procedure::{run, ControlParam, IterationTrace, ProcedureKind, ProcedureSpec};
use crate::quadrature;

/// Random exact values for property checks.
pub mod sample {
    use super::*;

    pub fn small_rational(rng: &mut impl Rng) -> Rational {
        ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
    }

    pub fn rate(rng: &mut impl Rng) -> Rational {
        const RATES: [(i64, i64); 8] = [(-3, 1), (-2, 1), (-3, 2), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1)];
        let (n, d) = RATES[rng.gen_range(0..RATES.len())];
        ratio(n, d)
    }

    /// Affine-plus-bilinear polynomial in the space's first two symbols.
    pub fn poly(rng: &mut impl Rng, space: &ParamSpace) -> ParamPoly {
        let mut p = ParamPoly::constant(space, small_rational(rng));
        let vars: Vec<ParamPoly> = space.names().iter().take(2).map(|n| ParamPoly::var(space, n).unwrap()).collect();
        for v in &vars {
            if rng.gen_bool(0.5) {
                p = &p + &v.scale(&small_rational(rng));
            }
        }
        if vars.len() == 2 && rng.gen_bool(0.25) {
            p = &p + &(&vars[0] * &vars[1]).scale(&small_rational(rng));
        }
        p
    }

    pub fn exponomial(rng: &mut impl Rng, space: &ParamSpace) -> Exponomial {
        let groups = (0..rng.gen_range(1..=3)).map(|_| {
            let deg = rng.gen_range(0..=3);
            (rate(rng), (0..=deg).map(|_| poly(rng, space)).collect())
        });
        Exponomial::from_groups(space, groups.collect::<Vec<_>>())
    }

    /// One or two channels out of `e^{−x}, e^{−2x}, e^{−3x}`.
    pub fn field(rng: &mut impl Rng, space: &ParamSpace) -> Field {
        let parts: Vec<(u32, Exponomial)> =
            (0..rng.gen_range(1..=2)).map(|_| (rng.gen_range(1..=3), exponomial(rng, space))).collect();
        Field::from_channels(space, parts)
    }

    pub fn single_channel(rng: &mut impl Rng, space: &ParamSpace) -> Field {
        Field::single(1, exponomial(rng, space))
    }

    pub fn bindings(rng: &mut impl Rng, space: &ParamSpace) -> BTreeMap<String, Rational> {
        space.names().iter().map(|n| (n.clone(), small_rational(rng))).collect()
    }
}

pub type Convolution = Box<dyn Fn(&Field, &Rational) -> Field>;

pub struct VerifyHooks {
    pub convolve: Convolution,
}

impl Default for VerifyHooks {
    fn default() -> Self {
        Self { convolve: Box::new(|f, a| f.convolve_green(a)) }
    }
}

impl VerifyHooks {
    pub fn with_convolution(f: impl Fn(&Field, &Rational) -> Field + 'static) -> Self {
        Self { convolve: Box::new(f) }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub problem: ProblemConfig,
    pub functional: ErrorFunctionalConfig,
    pub seed: u64,
    pub samples: usize,
    /// Highest Picard order checked against the closed forms.
    pub max_picard: usize,
    /// Steps of the procedure traces.
    pub steps: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            problem: ProblemConfig::default(),
            functional: ErrorFunctionalConfig::default(),
            seed: 0x5eed,
            samples: 24,
            max_picard: 6,
            steps: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

type Check = fn(&VerifyConfig, &VerifyHooks, &mut ChaCha8Rng) -> Result<String, String>;

const CHECKS: [(&str, Check); 12] = [
    ("ring-laws", ring_laws),
    ("calculus", calculus),
    ("convolution", convolution),
    ("substitution", substitution),
    ("channel-cancellation", channel_cancellation),
    ("exact-solution", exact_fixed_point),
    ("picard-closed-forms", picard_closed_forms),
    ("initial-condition", initial_condition),
    ("reduction-lattice", reduction_lattice),
    ("degree-bounds", degree_bounds),
    ("quadrature", quadrature_agreement),
    ("functional-nonnegative", functional_nonnegative),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

pub fn run_checks(cfg: &VerifyConfig, hooks: &VerifyHooks) -> VerifyReport {
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
            let (passed, detail) = match check(cfg, hooks, &mut rng) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome { name, passed, detail }
        })
        .collect();
    VerifyReport { checks }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ensure_eq<T: PartialEq + fmt::Display>(lhs: &T, rhs: &T, what: &str) -> Result<(), String> {
    ensure(lhs == rhs, || format!("{what}: {lhs} != {rhs}"))
}

fn pq() -> ParamSpace {
    ParamSpace::new(["p", "q"]).expect("distinct names")
}

fn ring_laws(cfg: &VerifyConfig, _: &VerifyHooks, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let s = pq();
    for _ in 0..cfg.samples {
        let (f, g, h) = (sample::exponomial(rng, &s), sample::exponomial(rng, &s), sample::exponomial(rng, &s));
        ensure_eq(&(&f + &g), &(&g + &f), "f+g")?;
        ensure_eq(&(&f * &g), &(&g * &f), "fg")?;
        ensure_eq(&(&(&f * &g) * &h), &(&f * &(&g * &h)), "(fg)h")?;
        ensure_eq(&(&f * &(&g + &h)), &(&(&f * &g) + &(&f * &h)), "f(g+h)")?;
        ensure_eq(&(&f * &Exponomial::one(&s)), &f, "f·1")?;
        ensure((&f + &(-&f)).is_zero(), || "f + (-f)".into())?;

        let (u, v, w) = (sample::field(rng, &s), sample::field(rng, &s), sample::field(rng, &s));
        ensure_eq(&(&u + &v), &(&v + &u), "u+v")?;
        ensure_eq(&(&u * &v), &(&v * &u), "uv")?;
        ensure_eq(&(&(&u * &v) * &w), &(&u * &(&v * &w)), "(uv)w")?;
        ensure_eq(&(&u * &(&v + &w)), &(&(&u * &v) + &(&u * &w)), "u(v+w)")?;
        ensure_eq(&(&u * &v).diff_x(), &(&(&u.diff_x() * &v) + &(&u * &v.diff_x())), "product rule in x")?;
        ensure_eq(&(&u * &v).diff_t(), &(&(&u.diff_t() * &v) + &(&u * &v.diff_t())), "product rule in t")?;
    }
    Ok(format!("{} samples", cfg.samples))
}

fn calculus(cfg: &VerifyConfig, _: &VerifyHooks, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let s = pq();
    for _ in 0..cfg.samples {
        let f = sample::field(rng, &s);
        let big_f = f.integrate_0t();
        ensure_eq(&big_f.diff_t(), &f, "d/dt ∫f")?;
        ensure(big_f.at_t0().is_zero(), || format!("∫f at t=0: {}", big_f.at_t0()))?;
        ensure_eq(&f.diff_t().integrate_0t(), &(&f - &f.at_t0()), "∫ df/dt")?;
    }
    Ok(format!("{} samples", cfg.samples))
}

fn convolution(cfg: &VerifyConfig, hooks: &VerifyHooks, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let s = pq();
    let a = &cfg.problem.a;
    // e^{−at}·t^m hits the resonant branch
    let resonant = Field::single(1, Exponomial::monomial(&s, -a.clone(), 2, ParamPoly::var(&s, "p").unwrap()));
    let mut cases = vec![resonant];
    cases.extend((0..cfg.samples).map(|_| sample::field(rng, &s)));
    for f in &cases {
        let g = (hooks.convolve)(f, a);
        ensure_eq(&(&g.diff_t() + &g.scale_rational(a)), f, "(∂t + a)(G∗f)")?;
        ensure(g.at_t0().is_zero(), || format!("G∗f at t=0: {}", g.at_t0()))?;
    }
    Ok(format!("{} samples", cases.len()))
}

fn substitution(cfg: &VerifyConfig, hooks: &VerifyHooks, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let s = pq();
    let a = &cfg.problem.a;
    let err = |e: crate::Error| e.to_string();
    for _ in 0..cfg.samples {
        let (f, g) = (sample::field(rng, &s), sample::field(rng, &s));
        let b = sample::bindings(rng, &s);
        let sub = |h: &Field| h.substitute_params(&b);
        let (fs, gs) = (sub(&f).map_err(err)?, sub(&g).map_err(err)?);
        ensure_eq(&sub(&(&f + &g)).map_err(err)?, &(&fs + &gs), "σ(f+g)")?;
        ensure_eq(&sub(&(&f * &g)).map_err(err)?, &(&fs * &gs), "σ(fg)")?;
        ensure_eq(&sub(&f.diff_t()).map_err(err)?, &fs.diff_t(), "σ(∂t f)")?;
        ensure_eq(&sub(&f.diff_x()).map_err(err)?, &fs.diff_x(), "σ(∂x f)")?;
        ensure_eq(&sub(&f.integrate_0t()).map_err(err)?, &fs.integrate_0t(), "σ(∫f)")?;
        ensure_eq(&sub(&(hooks.convolve)(&f, a)).map_err(err)?, &(hooks.convolve)(&fs, a), "σ(G∗f)")?;
        ensure_eq(&sub(&vim_t(&f, &cfg.problem)).map_err(err)?, &vim_t(&fs, &cfg.problem), "σ(T_vim f)")?;
        let blues = |h: &Field| blues_t_with(h, &cfg.problem, &hooks.convolve);
        ensure_eq(&sub(&blues(&f)).map_err(err)?, &blues(&fs), "σ(T_blues f)")?;
    }
    Ok(format!("{} samples", cfg.samples))
}

fn channel_cancellation(cfg: &VerifyConfig, hooks: &VerifyHooks, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let s = pq();
    for _ in 0..cfg.samples {
        let u = sample::single_channel(rng, &s);
        let only_first = |f: &Field| f.channel_keys().iter().all(|&k| k == 1);
        ensure(only_first(&residual_operator(&u)), || {
            format!("R u has channels {:?}", residual_operator(&u).channel_keys())
        })?;
        ensure(only_first(&pde_residual(&u, &cfg.problem)), || "N u leaves channel 1".into())?;
        ensure(only_first(&vim_t(&u, &cfg.problem)), || "T_vim u leaves channel 1".into())?;
        ensure(only_first(&blues_t_with(&u, &cfg.problem, &hooks.convolve)), || "T_blues u leaves channel 1".into())?;
        // R u = u_xx once the quadratic terms cancel
        ensure_eq(&residual_operator(&u), &u.diff_x().diff_x(), "R u")?;
    }
    Ok(format!("{} samples", cfg.samples))
}

fn exact_fixed_point(cfg: &VerifyConfig, hooks: &VerifyHooks, _: &mut ChaCha8Rng) -> Result<String, String> {
    let exact = exact_solution(&cfg.problem);
    ensure(pde_residual(&exact, &cfg.problem).is_zero(), || "N u_ex ≠ 0".into())?;
    ensure_eq(&vim_t(&exact, &cfg.problem), &exact, "T_vim u_ex")?;
    ensure_eq(&blues_t_with(&exact, &cfg.problem, &hooks.convolve), &exact, "T_blues u_ex")?;
    Ok(format!("u_ex = {exact}"))
}

fn picard_closed_forms(cfg: &VerifyConfig, hooks: &VerifyHooks, _: &mut ChaCha8Rng) -> Result<String, String> {
    let p = &cfg.problem;
    let mut u_vim = initial_field_in(&ParamSpace::empty());
    let mut u_blues = blues_zeroth(p);
    for n in 0..=cfg.max_picard {
        if n > 0 {
            u_vim = vim_t(&u_vim, p);
            u_blues = blues_t_with(&u_blues, p, &hooks.convolve);
        }
        ensure_eq(&u_vim, &picard_closed_form(MethodKind::Vim, p, n), &format!("VIM u_{n}"))?;
        ensure_eq(&u_blues, &picard_closed_form(MethodKind::Blues, p, n), &format!("BLUES u_{n}"))?;
    }
    Ok(format!("n ≤ {} at a = {}", cfg.max_picard, p.a))
}

fn run_trace(
    spec: &ProcedureSpec,
    method: MethodKind,
    cfg: &VerifyConfig,
    steps: usize,
) -> Result<IterationTrace, String> {
    run(spec, method, &cfg.problem, steps).map_err(|e| e.to_string())
}

fn random_numeric_spec(kind: ProcedureKind, steps: usize, rng: &mut ChaCha8Rng) -> ProcedureSpec {
    let mut v = || ControlParam::Value(ratio(rng.gen_range(-4..=10), 4));
    match kind {
        ProcedureKind::Picard => ProcedureSpec::Picard,
        ProcedureKind::Mann => ProcedureSpec::Mann { alpha: (0..steps).map(|_| v()).collect() },
        ProcedureKind::Krasnoselskii => ProcedureSpec::Krasnoselskii { alpha: v() },
        ProcedureKind::Ishikawa => {
            let alpha = (0..steps).map(|_| v()).collect();
            ProcedureSpec::Ishikawa { alpha, beta: (0..steps).map(|_| v()).collect() }
        }
        ProcedureKind::HybridPk => ProcedureSpec::HybridPk { lambda: v() },
    }
}

/// Symbolic traces are kept shorter for the two-parameter-per-step procedure.
fn symbolic_steps(kind: ProcedureKind, steps: usize) -> usize {
    if kind == ProcedureKind::Ishikawa {
        steps.min(2)
    } else {
        steps
    }
}

fn initial_condition(cfg: &VerifyConfig, _: &VerifyHooks, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut count = 0;
    for method in MethodKind::ALL {
        for kind in ProcedureKind::ALL {
            let symbolic = ProcedureSpec::symbolic(kind, symbolic_steps(kind, cfg.steps));
            let numeric = random_numeric_spec(kind, cfg.steps, rng);
            for (spec, steps) in [(symbolic, symbolic_steps(kind, cfg.steps)), (numeric, cfg.steps)] {
                let trace = run_trace(&spec, method, cfg, steps)?;
                for (k, u) in trace.iterates.iter().chain(&trace.auxiliary).enumerate() {
                    let start = initial_field_in(u.space());
                    ensure(u.at_t0() == start, || format!("{method}/{kind} iterate {k} at t=0: {}", u.at_t0()))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} iterates"))
}

/// Substitutes every symbol and drops to the empty space.
fn bind(u: &Field, values: &BTreeMap<String, Rational>) -> Result<Field, String> {
    u.substitute_params(values).and_then(|f| f.with_space(&ParamSpace::empty())).map_err(|e| e.to_string())
}

fn reduction_lattice(cfg: &VerifyConfig, _: &VerifyHooks, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let n = cfg.steps;
    let val = ControlParam::Value;
    for method in MethodKind::ALL {
        let picard = run_trace(&ProcedureSpec::Picard, method, cfg, 2 * n)?;
        let alphas: Vec<ControlParam> = (0..n).map(|_| val(ratio(rng.gen_range(-4..=10), 4))).collect();
        let mann = run_trace(&ProcedureSpec::Mann { alpha: alphas.clone() }, method, cfg, n)?;

        let ones = ProcedureSpec::Mann { alpha: vec![val(int(1)); n] };
        ensure(run_trace(&ones, method, cfg, n)?.iterates == picard.iterates[..=n], || {
            format!("{method}: Mann(1) ≠ Picard")
        })?;

        let ish = ProcedureSpec::Ishikawa { alpha: alphas.clone(), beta: vec![val(int(0)); n] };
        ensure(run_trace(&ish, method, cfg, n)?.iterates == mann.iterates, || {
            format!("{method}: Ishikawa(β=0) ≠ Mann")
        })?;

        let shared = alphas[0].clone();
        let kras = run_trace(&ProcedureSpec::Krasnoselskii { alpha: shared.clone() }, method, cfg, n)?;
        let mann_const = run_trace(&ProcedureSpec::Mann { alpha: vec![shared; n] }, method, cfg, n)?;
        ensure(kras.iterates == mann_const.iterates, || format!("{method}: Krasnoselskii ≠ constant Mann"))?;

        let hyb0 = run_trace(&ProcedureSpec::HybridPk { lambda: val(int(0)) }, method, cfg, n)?;
        ensure(hyb0.iterates == picard.iterates[..=n], || format!("{method}: hybrid(λ=0) ≠ Picard"))?;
        let hyb1 = run_trace(&ProcedureSpec::HybridPk { lambda: val(int(1)) }, method, cfg, n)?;
        for k in 0..=n {
            ensure(hyb1.iterates[k] == picard.iterates[2 * k], || {
                format!("{method}: hybrid(λ=1) u_{k} ≠ Picard u_{}", 2 * k)
            })?;
        }

        // the same reductions by substitution into symbolic traces
        let sym = run_trace(&ProcedureSpec::symbolic(ProcedureKind::Mann, n), method, cfg, n)?;
        let unit: BTreeMap<String, Rational> = (1..=n).map(|k| (format!("alpha{k}"), int(1))).collect();
        for k in 0..=n {
            let reduced = bind(&sym.iterates[k], &unit)?;
            ensure(reduced == picard.iterates[k], || format!("{method}: σ(Mann u_{k}) ≠ Picard"))?;
        }
        let sym = run_trace(&ProcedureSpec::symbolic(ProcedureKind::HybridPk, n), method, cfg, n)?;
        let zero = BTreeMap::from([("lambda".to_string(), Rational::zero())]);
        let one = BTreeMap::from([("lambda".to_string(), Rational::one())]);
        for k in 0..=n {
            let (at0, at1) = (bind(&sym.iterates[k], &zero)?, bind(&sym.iterates[k], &one)?);
            ensure(at0 == picard.iterates[k] && at1 == picard.iterates[2 * k], || {
                format!("{method}: σ(hybrid u_{k})")
            })?;
        }
    }
    Ok(format!("n = {n}"))
}

fn degree_bounds(cfg: &VerifyConfig, _: &VerifyHooks, _: &mut ChaCha8Rng) -> Result<String, String> {
    let check = |what: String, got: Option<u32>, bound: u32| {
        ensure(got.unwrap_or(0) <= bound, || format!("{what}: degree {got:?} > {bound}"))
    };
    for method in MethodKind::ALL {
        for kind in
            [ProcedureKind::Mann, ProcedureKind::Ishikawa, ProcedureKind::Krasnoselskii, ProcedureKind::HybridPk]
        {
            let n = symbolic_steps(kind, cfg.steps);
            let spec = ProcedureSpec::symbolic(kind, n);
            let trace = run_trace(&spec, method, cfg, n)?;
            let shared = matches!(kind, ProcedureKind::Krasnoselskii | ProcedureKind::HybridPk);
            for (k, u) in trace.iterates.iter().enumerate() {
                let e = error_functional(u, &cfg.problem, &cfg.functional).map_err(|e| e.to_string())?;
                for sym in spec.symbols() {
                    let bound = if shared { k as u32 } else { 1 };
                    check(format!("{method}/{kind} u_{k} in {sym}"), u.degree_in(&sym), bound)?;
                    check(format!("{method}/{kind} E(u_{k}) in {sym}"), e.degree_in(&sym), 2 * bound)?;
                }
            }
        }
    }
    Ok(format!("n = {}", cfg.steps))
}

const QUAD_TOL: f64 = 1e-10;

fn close(exact: f64, q: &quadrature::Quadrature) -> bool {
    (exact - q.value).abs() <= QUAD_TOL * q.abs_value.max(exact.abs())
}

fn quadrature_agreement(cfg: &VerifyConfig, hooks: &VerifyHooks, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let s = ParamSpace::empty();
    let a = &cfg.problem.a;
    let af = crate::numeric::Real::from_rational(a, Precision::digits(20)).to_f64();
    let eval = |f: &Field, x: f64, t: f64| f.eval_f64(x, t).expect("numeric field");
    let mut count = 0;
    for _ in 0..cfg.samples.min(8) {
        let f = sample::field(rng, &s);
        let (big_f, g) = (f.integrate_0t(), (hooks.convolve)(&f, a));
        for t in [0.5, 1.0, 2.0] {
            let q = quadrature::integrate(|s| eval(&f, 1.0, s), 0.0, t, 1e-13);
            let exact = eval(&big_f, 1.0, t);
            ensure(close(exact, &q), || format!("∫₀^{t} f: exact {exact:e}, quadrature {:e}", q.value))?;
            let q = quadrature::integrate(|s| (-af * (t - s)).exp() * eval(&f, 1.0, s), 0.0, t, 1e-13);
            let exact = eval(&g, 1.0, t);
            ensure(close(exact, &q), || format!("(G∗f)({t}): exact {exact:e}, quadrature {:e}", q.value))?;
            count += 2;
        }
    }
    // E of concrete iterates: (1/T)∫₀ᵀ r² against the exact moments
    let horizon = crate::numeric::Real::from_rational(&cfg.functional.horizon, Precision::digits(20)).to_f64();
    for method in MethodKind::ALL {
        for kind in ProcedureKind::ALL {
            let spec = random_numeric_spec(kind, cfg.steps, rng);
            let u = run_trace(&spec, method, cfg, cfg.steps)?.last().clone();
            let r = pde_residual(&u, &cfg.problem);
            let Some(r1) = r.channel(1).cloned() else { continue };
            let r1 = Field::single(1, r1);
            let e = error_functional(&u, &cfg.problem, &cfg.functional)
                .and_then(|e| e.eval(&BTreeMap::new(), Precision::default()))
                .map_err(|e| e.to_string())?
                .to_f64();
            // x = 0 so the channel factor is 1
            let q = quadrature::integrate(|t| eval(&r1, 0.0, t).powi(2) / horizon, 0.0, horizon, 1e-13);
            ensure(close(e, &q), || format!("E for {method}/{kind}: exact {e:e}, quadrature {:e}", q.value))?;
            count += 1;
        }
    }
    Ok(format!("{count} integrals"))
}

fn functional_nonnegative(cfg: &VerifyConfig, _: &VerifyHooks, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let prec = Precision::default();
    let mut count = 0;
    for method in MethodKind::ALL {
        for kind in [ProcedureKind::Mann, ProcedureKind::HybridPk, ProcedureKind::Ishikawa] {
            let n = symbolic_steps(kind, cfg.steps).min(2);
            let spec = ProcedureSpec::symbolic(kind, n);
            let u = run_trace(&spec, method, cfg, n)?.last().clone();
            let e = error_functional(&u, &cfg.problem, &cfg.functional).map_err(|e| e.to_string())?;
            let numeric = e.numeric(prec);
            for _ in 0..cfg.samples {
                let point: Vec<_> = (0..numeric.names.len())
                    .map(|_| crate::numeric::Real::from_rational(&ratio(rng.gen_range(-8..=40), 16), prec))
                    .collect();
                let v = numeric.eval(&point);
                ensure(!v.is_negative(), || format!("{method}/{kind}: E = {v} < 0"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} points"))
}

/// Human-readable summary used by the CLI.
pub fn summary(report: &VerifyReport) -> String {
    let mut s = report.to_string();
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(s, "{} checks, {failed} failed", report.checks.len());
    s
}
