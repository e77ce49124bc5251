//! Global minimization of polynomial functionals over a parameter box.
//!
//! One dimension: real roots of `dE/dp` are isolated by the derivative
//! cascade (roots of `P` are separated by roots of `P'`, so `P` is monotone
//! between consecutive ones) and refined by bisection at working precision;
//! `E` is compared at every critical point and both endpoints.
//!
//! Two dimensions: coordinate descent with exact 1D minimizations from
//! several starts.

use std::collections::BTreeMap;

use super::functional::{ErrorPolynomial, NumericPoly};
use crate::algebra::{ratio, Rational};
use crate::error::{Error, Result};
use crate::numeric::{parse_rational, simplest_within, Precision, Real};

/// Closed parameter interval, used per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBox {
    pub lo: Rational,
    pub hi: Rational,
}

impl SearchBox {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyBox { lo: lo.to_string(), hi: hi.to_string() });
        }
        Ok(Self { lo, hi })
    }

    fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }
}

impl Default for SearchBox {
    /// `[−1/2, 5/2]`.
    fn default() -> Self {
        Self { lo: ratio(-1, 2), hi: ratio(5, 2) }
    }
}

#[derive(Debug, Clone)]
pub struct ParamBinding {
    pub name: String,
    pub value: Real,
    /// Rational within 1e-16 of `value`; this is what re-enters exact algebra.
    pub rational: Rational,
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub step: usize,
    pub bindings: Vec<ParamBinding>,
    /// `E` at the optimum.
    pub value: Real,
    /// `E` at the parameter point that reduces the procedure to Picard.
    pub picard_value: Option<Real>,
    pub polynomial: ErrorPolynomial,
    pub search_box: SearchBox,
    pub degenerate: bool,
    /// `−b/2a` when `E` is quadratic in a single parameter.
    pub closed_form: Option<Real>,
}

impl OptimizationResult {
    pub fn binding(&self, name: &str) -> Option<&ParamBinding> {
        self.bindings.iter().find(|b| b.name == name)
    }

    pub fn rational_bindings(&self) -> BTreeMap<String, Rational> {
        self.bindings.iter().map(|b| (b.name.clone(), b.rational.clone())).collect()
    }
}

/// Knobs shared by the minimizers.
#[derive(Debug, Clone)]
pub struct MinimizerOptions {
    pub precision: Precision,
    pub search_box: SearchBox,
    /// Relative gap under which two candidate minima count as tied.
    pub tie_tolerance: f64,
    pub descent_tolerance: f64,
    pub max_sweeps: usize,
    pub gradient_tolerance: f64,
}

impl Default for MinimizerOptions {
    fn default() -> Self {
        Self {
            precision: Precision::default(),
            search_box: SearchBox::default(),
            tie_tolerance: 1e-12,
            descent_tolerance: 1e-13,
            max_sweeps: 200,
            gradient_tolerance: 1e-10,
        }
    }
}

pub(crate) fn to_binding(name: &str, value: Real) -> ParamBinding {
    let digits = value.precision().decimal_digits().max(30);
    let exact = value.to_rational(digits);
    let rational = simplest_within(&exact, &parse_rational("1e-16").expect("literal"));
    ParamBinding { name: name.to_string(), value, rational }
}

fn horner(coeffs: &[Real], x: &Real) -> Real {
    let mut acc = Real::zero(x.precision());
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn derivative(coeffs: &[Real]) -> Vec<Real> {
    coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &Real::from_i64(i as i64, c.precision())).collect()
}

fn trimmed(coeffs: &[Real]) -> &[Real] {
    let len = coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    &coeffs[..len]
}

fn sign(v: &Real) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_negative() {
        -1
    } else {
        1
    }
}

/// Sorted real roots of the polynomial in `[lo, hi]`.
pub fn real_roots(coeffs: &[Real], lo: &Real, hi: &Real, prec: Precision) -> Vec<Real> {
    let coeffs = trimmed(coeffs);
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let mut knots = vec![lo.clone()];
    knots.extend(real_roots(&derivative(coeffs), lo, hi, prec));
    knots.push(hi.clone());
    let mut roots: Vec<Real> = Vec::new();
    let push = |r: Real, roots: &mut Vec<Real>| {
        if roots.last().is_none_or(|last| last < &r) {
            roots.push(r);
        }
    };
    for pair in knots.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (fa, fb) = (horner(coeffs, a), horner(coeffs, b));
        match (sign(&fa), sign(&fb)) {
            (0, _) => push(a.clone(), &mut roots),
            (sa, sb) if sa != 0 && sb != 0 && sa != sb => {
                push(bisect(coeffs, a.clone(), b.clone(), sa, prec), &mut roots)
            }
            _ => {}
        }
    }
    if sign(&horner(coeffs, hi)) == 0 {
        push(hi.clone(), &mut roots);
    }
    roots
}

fn bisect(coeffs: &[Real], mut a: Real, mut b: Real, sign_a: i8, prec: Precision) -> Real {
    let half = Real::from_rational(&ratio(1, 2), prec);
    for _ in 0..prec.bits() {
        let mid = (&a + &b) * &half;
        match sign(&horner(coeffs, &mid)) {
            0 => return mid,
            s if s == sign_a => a = mid,
            _ => b = mid,
        }
    }
    (&a + &b) * &half
}

/// Minimizer of a dense univariate polynomial over `[lo, hi]`, or `None` if
/// the polynomial is constant.
fn argmin_dense(coeffs: &[Real], lo: &Real, hi: &Real, opts: &MinimizerOptions) -> Option<(Real, Real)> {
    if trimmed(coeffs).len() <= 1 {
        return None;
    }
    let prec = opts.precision;
    let mut candidates = vec![lo.clone()];
    candidates.extend(real_roots(&derivative(coeffs), lo, hi, prec));
    candidates.push(hi.clone());
    let scored: Vec<(Real, Real)> = candidates.into_iter().map(|x| (horner(coeffs, &x), x)).collect();
    let best = scored.iter().map(|(v, _)| v.clone()).reduce(|a, b| if b < a { b } else { a })?;
    let tol = Real::from_f64(opts.tie_tolerance, prec) * best.abs().max(Real::from_f64(1e-300, prec));
    // candidates are sorted by position, so the first tied one is the smallest
    scored.into_iter().find(|(v, _)| (v - &best) <= tol).map(|(v, x)| (x, v))
}

fn check_box(opts: &MinimizerOptions) -> Result<(Real, Real)> {
    let SearchBox { lo, hi } = &opts.search_box;
    if lo > hi {
        return Err(Error::EmptyBox { lo: lo.to_string(), hi: hi.to_string() });
    }
    Ok((Real::from_rational(lo, opts.precision), Real::from_rational(hi, opts.precision)))
}

fn index_of(e: &ErrorPolynomial, name: &str) -> Result<usize> {
    e.space().index_of(name).ok_or_else(|| Error::UndeclaredParam(name.to_string()))
}

pub fn minimize_1d(e: &ErrorPolynomial, param: &str, opts: &MinimizerOptions) -> Result<OptimizationResult> {
    let idx = index_of(e, param)?;
    let others: Vec<String> = e.free_params().into_iter().filter(|n| n != param).collect();
    if !others.is_empty() {
        return Err(Error::NotUnivariate { param: param.to_string(), others });
    }
    let (lo, hi) = check_box(opts)?;
    let prec = opts.precision;
    let numeric = e.numeric(prec);
    let zeros = vec![Real::zero(prec); e.space().len()];
    let coeffs = numeric.restrict(idx, &zeros, prec);

    let (arg, value, degenerate) = match argmin_dense(&coeffs, &lo, &hi, opts) {
        Some((x, v)) => (x, v, false),
        None => {
            let v = coeffs.first().cloned().unwrap_or_else(|| Real::zero(prec));
            (lo.clone(), v, true)
        }
    };

    let mut closed_form = None;
    let c = trimmed(&coeffs);
    if c.len() == 3 && !c[2].is_negative() {
        let x = -(&c[1]) / (&c[2] * &Real::from_i64(2, prec));
        if x >= lo && x <= hi {
            let gap = (&x - &arg).abs().to_f64();
            if gap > 1e-12 {
                return Err(Error::MinimizerCheck(format!(
                    "closed-form vertex {x} and isolated root {arg} differ by {gap:e}"
                )));
            }
        }
        closed_form = Some(x);
    }

    Ok(OptimizationResult {
        step: 0,
        bindings: vec![to_binding(param, arg)],
        value,
        picard_value: None,
        polynomial: e.clone(),
        search_box: opts.search_box.clone(),
        degenerate,
        closed_form,
    })
}

struct Descent {
    point: [Real; 2],
    value: Real,
    degenerate: bool,
}

fn coordinate_descent(
    poly: &NumericPoly,
    idx: [usize; 2],
    start: [Real; 2],
    lo: &Real,
    hi: &Real,
    opts: &MinimizerOptions,
) -> Option<Descent> {
    let prec = opts.precision;
    let dims = poly.names.len();
    let mut full = vec![Real::zero(prec); dims];
    full[idx[0]] = start[0].clone();
    full[idx[1]] = start[1].clone();
    for _ in 0..opts.max_sweeps {
        let mut change = 0f64;
        let mut degenerate = false;
        for &var in &idx {
            let coeffs = poly.restrict(var, &full, prec);
            match argmin_dense(&coeffs, lo, hi, opts) {
                Some((x, _)) => {
                    change = change.max((&x - &full[var]).abs().to_f64());
                    full[var] = x;
                }
                None => degenerate = true,
            }
        }
        if change < opts.descent_tolerance {
            let value = poly.eval(&full);
            return Some(Descent { point: [full[idx[0]].clone(), full[idx[1]].clone()], value, degenerate });
        }
    }
    None
}

/// Coordinate-descent minimization of a biquadratic functional in two
/// parameters, from `(1, 1)` and the corners and edge midpoints of the box.
pub fn minimize_2d(e: &ErrorPolynomial, params: (&str, &str), opts: &MinimizerOptions) -> Result<OptimizationResult> {
    let idx = [index_of(e, params.0)?, index_of(e, params.1)?];
    let others: Vec<String> = e.free_params().into_iter().filter(|n| n != params.0 && n != params.1).collect();
    if !others.is_empty() {
        return Err(Error::NotUnivariate { param: format!("{}, {}", params.0, params.1), others });
    }
    for name in [params.0, params.1] {
        if e.degree_in(name).unwrap_or(0) > 2 {
            return Err(Error::NotBiquadratic(name.to_string()));
        }
    }
    let (lo, hi) = check_box(opts)?;
    let prec = opts.precision;
    let poly = e.numeric(prec);
    let mid_r = (&opts.search_box.lo + &opts.search_box.hi) / Rational::from_integer(2.into());
    let mid = Real::from_rational(&mid_r, prec);

    let one = Rational::from_integer(1.into());
    let first = if opts.search_box.contains(&one) { Real::one(prec) } else { mid.clone() };
    let mut starts = vec![[first.clone(), first]];
    for a in [&lo, &hi] {
        for b in [&lo, &hi] {
            starts.push([a.clone(), b.clone()]);
        }
    }
    starts.push([mid.clone(), lo.clone()]);
    starts.push([mid.clone(), hi.clone()]);
    starts.push([lo.clone(), mid.clone()]);
    starts.push([hi.clone(), mid]);

    let mut best: Option<Descent> = None;
    for start in starts {
        let Some(run) = coordinate_descent(&poly, idx, start, &lo, &hi, opts) else { continue };
        best = Some(match best {
            None => run,
            Some(b) => {
                let tol = Real::from_f64(opts.tie_tolerance, prec) * b.value.abs().max(Real::from_f64(1e-300, prec));
                let better = run.value < &b.value - &tol;
                let tied = !better && (&run.value - &b.value).abs() <= tol;
                let smaller = (&run.point[0], &run.point[1]) < (&b.point[0], &b.point[1]);
                if better || (tied && smaller) {
                    run
                } else {
                    b
                }
            }
        });
    }
    let best = best.ok_or(Error::NoConvergence)?;

    let mut full = vec![Real::zero(prec); poly.names.len()];
    full[idx[0]] = best.point[0].clone();
    full[idx[1]] = best.point[1].clone();
    let edge = Real::from_f64(1e-12, prec);
    for (k, &var) in idx.iter().enumerate() {
        let x = &best.point[k];
        let interior = (x - &lo) > edge && (&hi - x) > edge;
        if !interior {
            continue;
        }
        let g = poly.partial(var).eval(&full).abs().to_f64();
        if g >= opts.gradient_tolerance {
            return Err(Error::MinimizerCheck(format!("|dE/d{}| = {g:e} at the descent result", poly.names[var])));
        }
    }

    Ok(OptimizationResult {
        step: 0,
        bindings: vec![to_binding(params.0, best.point[0].clone()), to_binding(params.1, best.point[1].clone())],
        value: best.value,
        picard_value: None,
        polynomial: e.clone(),
        search_box: opts.search_box.clone(),
        degenerate: best.degenerate,
        closed_form: None,
    })
}
