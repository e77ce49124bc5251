//! Finite sums of `e^{μt}·p(t)` with parameter-polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::param::{ParamPoly, ParamSpace};
use super::Rational;
use crate::error::Result;

/// One rate group `e^{rate·t}·Σ_m coeffs[m]·t^m`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExpTerm {
    rate: Rational,
    coeffs: Vec<ParamPoly>,
}

impl ExpTerm {
    pub fn rate(&self) -> &Rational {
        &self.rate
    }

    /// Coefficient of `t^m` is `coeffs()[m]`.
    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Canonical form: terms sorted by strictly increasing rate, no zero terms,
/// no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Exponomial {
    space: ParamSpace,
    terms: Vec<ExpTerm>,
}

fn trim(coeffs: &mut Vec<ParamPoly>) {
    while coeffs.last().is_some_and(ParamPoly::is_zero) {
        coeffs.pop();
    }
}

fn add_into(acc: &mut Vec<ParamPoly>, other: &[ParamPoly], space: &ParamSpace) {
    if acc.len() < other.len() {
        acc.resize(other.len(), ParamPoly::zero(space));
    }
    for (a, b) in acc.iter_mut().zip(other) {
        *a = &*a + b;
    }
}

impl Exponomial {
    pub fn zero(space: &ParamSpace) -> Self {
        Self { space: space.clone(), terms: Vec::new() }
    }

    pub fn one(space: &ParamSpace) -> Self {
        Self::monomial(space, Rational::zero(), 0, ParamPoly::one(space))
    }

    /// `c·t^power·e^{rate·t}`.
    pub fn monomial(space: &ParamSpace, rate: Rational, power: usize, c: ParamPoly) -> Self {
        let mut coeffs = vec![ParamPoly::zero(space); power];
        coeffs.push(c);
        Self::from_groups(space, [(rate, coeffs)])
    }

    /// `e^{rate·t}` with unit coefficient.
    pub fn exp(space: &ParamSpace, rate: Rational) -> Self {
        Self::monomial(space, rate, 0, ParamPoly::one(space))
    }

    /// Builds the canonical form from arbitrary `(rate, coefficients)` groups.
    pub fn from_groups<I>(space: &ParamSpace, groups: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Vec<ParamPoly>)>,
    {
        let mut merged: BTreeMap<Rational, Vec<ParamPoly>> = BTreeMap::new();
        for (rate, coeffs) in groups {
            add_into(merged.entry(rate).or_default(), &coeffs, space);
        }
        let terms = merged
            .into_iter()
            .filter_map(|(rate, mut coeffs)| {
                trim(&mut coeffs);
                (!coeffs.is_empty()).then_some(ExpTerm { rate, coeffs })
            })
            .collect();
        Self { space: space.clone(), terms }
    }

    pub fn space(&self) -> &ParamSpace {
        &self.space
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Polynomial part at a given rate, if present.
    pub fn term_at(&self, rate: &Rational) -> Option<&ExpTerm> {
        self.terms.iter().find(|t| &t.rate == rate)
    }

    fn map_coeffs(&self, f: impl Fn(&ParamPoly) -> ParamPoly) -> Self {
        Self::from_groups(&self.space, self.terms.iter().map(|t| (t.rate.clone(), t.coeffs.iter().map(&f).collect())))
    }

    pub fn scale(&self, c: &ParamPoly) -> Self {
        self.map_coeffs(|p| p * c)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.map_coeffs(|p| p.scale(c))
    }

    /// Multiplies by `e^{shift·t}`.
    pub fn shift_rate(&self, shift: &Rational) -> Self {
        Self {
            space: self.space.clone(),
            terms: self.terms.iter().map(|t| ExpTerm { rate: &t.rate + shift, coeffs: t.coeffs.clone() }).collect(),
        }
    }

    /// `d/dt [e^{μt} p(t)] = e^{μt} (μ p + p')`.
    pub fn diff_t(&self) -> Self {
        Self::from_groups(
            &self.space,
            self.terms.iter().map(|t| {
                let mut out: Vec<ParamPoly> = t.coeffs.iter().map(|c| c.scale(&t.rate)).collect();
                for (m, c) in t.coeffs.iter().enumerate().skip(1) {
                    out[m - 1] = &out[m - 1] + &c.scale(&Rational::from_integer(m.into()));
                }
                (t.rate.clone(), out)
            }),
        )
    }

    /// `∫₀ᵗ f(s) ds`, exact. Rate-0 terms integrate to polynomials; each other
    /// rate produces an `e^{μt}`-polynomial plus a rate-0 constant fixing the
    /// value at `t = 0` to zero.
    pub fn integrate_0t(&self) -> Self {
        let mut groups: Vec<(Rational, Vec<ParamPoly>)> = Vec::new();
        for term in &self.terms {
            if term.rate.is_zero() {
                let mut out = vec![ParamPoly::zero(&self.space)];
                for (m, c) in term.coeffs.iter().enumerate() {
                    out.push(c.scale(&Rational::new(1.into(), (m + 1).into())));
                }
                groups.push((Rational::zero(), out));
                continue;
            }
            let inv = term.rate.recip();
            let mut exp_part = vec![ParamPoly::zero(&self.space); term.coeffs.len()];
            let mut constant = ParamPoly::zero(&self.space);
            for (m, c) in term.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                // ∫ e^{μs} s^m ds = e^{μs} Σ_j (-1)^j m!/(m-j)! s^{m-j} / μ^{j+1}
                let mut factor = inv.clone();
                for j in 0..=m {
                    let signed = if j % 2 == 0 { factor.clone() } else { -factor.clone() };
                    exp_part[m - j] = &exp_part[m - j] + &c.scale(&signed);
                    if j == m {
                        constant = &constant - &c.scale(&signed);
                    }
                    factor = &factor * &inv * Rational::from_integer((m - j).into());
                }
            }
            groups.push((term.rate.clone(), exp_part));
            groups.push((Rational::zero(), vec![constant]));
        }
        Self::from_groups(&self.space, groups)
    }

    /// Value at `t = 0`, i.e. the sum of all constant coefficients.
    pub fn at_zero(&self) -> ParamPoly {
        self.terms.iter().fold(ParamPoly::zero(&self.space), |acc, t| &acc + &t.coeffs[0])
    }

    pub fn substitute(&self, bindings: &BTreeMap<String, Rational>) -> Result<Self> {
        let groups = self
            .terms
            .iter()
            .map(|t| Ok((t.rate.clone(), t.coeffs.iter().map(|c| c.substitute(bindings)).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_groups(&self.space, groups))
    }

    pub fn with_space(&self, target: &ParamSpace) -> Result<Self> {
        let groups = self
            .terms
            .iter()
            .map(|t| Ok((t.rate.clone(), t.coeffs.iter().map(|c| c.with_space(target)).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_groups(target, groups))
    }

    /// Largest degree of `name` across all coefficients.
    pub fn degree_in(&self, name: &str) -> Option<u32> {
        self.space.index_of(name)?;
        Some(self.terms.iter().flat_map(|t| &t.coeffs).filter_map(|c| c.degree_in(name)).max().unwrap_or(0))
    }

    pub fn free_params(&self) -> Vec<String> {
        let mut names: Vec<String> = self.terms.iter().flat_map(|t| &t.coeffs).flat_map(|c| c.free_params()).collect();
        names.sort();
        names.dedup();
        names
    }

    fn assert_space(&self, other: &Self) {
        assert!(self.space == other.space, "Exponomial spaces differ: {:?} vs {:?}", self.space, other.space);
    }
}

impl Add<&Exponomial> for &Exponomial {
    type Output = Exponomial;
    fn add(self, rhs: &Exponomial) -> Exponomial {
        self.assert_space(rhs);
        let groups = self.terms.iter().chain(&rhs.terms).map(|t| (t.rate.clone(), t.coeffs.clone()));
        Exponomial::from_groups(&self.space, groups)
    }
}

impl Sub<&Exponomial> for &Exponomial {
    type Output = Exponomial;
    fn sub(self, rhs: &Exponomial) -> Exponomial {
        self + &(-rhs)
    }
}

impl Neg for &Exponomial {
    type Output = Exponomial;
    fn neg(self) -> Exponomial {
        self.map_coeffs(|c| -c)
    }
}

impl Mul<&Exponomial> for &Exponomial {
    type Output = Exponomial;
    fn mul(self, rhs: &Exponomial) -> Exponomial {
        self.assert_space(rhs);
        let mut groups = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let mut prod = vec![ParamPoly::zero(&self.space); a.coeffs.len() + b.coeffs.len() - 1];
                for (i, ca) in a.coeffs.iter().enumerate() {
                    if ca.is_zero() {
                        continue;
                    }
                    for (j, cb) in b.coeffs.iter().enumerate() {
                        prod[i + j] = &prod[i + j] + &(ca * cb);
                    }
                }
                groups.push((&a.rate + &b.rate, prod));
            }
        }
        Exponomial::from_groups(&self.space, groups)
    }
}

pub(crate) fn fmt_rate_factor(rate: &Rational, var: &str) -> Option<String> {
    if rate.is_zero() {
        return None;
    }
    Some(if rate.is_one() {
        format!("exp({var})")
    } else if (-rate).is_one() {
        format!("exp(-{var})")
    } else {
        format!("exp({rate}*{var})")
    })
}

/// Polynomial part rendered as `1 - t + 1/2*t^2`.
pub(crate) fn fmt_poly(coeffs: &[ParamPoly]) -> String {
    let mut out = String::new();
    for (m, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let power = match m {
            0 => None,
            1 => Some("t".to_string()),
            _ => Some(format!("t^{m}")),
        };
        let (negative, body) = match c.as_constant() {
            Some(r) => {
                let mag = r.abs();
                let body = match (&power, mag.is_one()) {
                    (None, _) => mag.to_string(),
                    (Some(p), true) => p.clone(),
                    (Some(p), false) => format!("{mag}*{p}"),
                };
                (r.is_negative(), body)
            }
            None => {
                let body = match &power {
                    None => format!("({c})"),
                    Some(p) => format!("({c})*{p}"),
                };
                (false, body)
            }
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Exponomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let poly = fmt_poly(&t.coeffs);
                match fmt_rate_factor(&t.rate, "t") {
                    None => format!("({poly})"),
                    Some(e) => format!("{e}*({poly})"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Exponomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
