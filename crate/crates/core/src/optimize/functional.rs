use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use super::exprat::ExpRational;
use crate::algebra::{Field, Monomial, ParamSpace, Rational};
use crate::error::{Error, Result};
use crate::model::{pde_residual, ProblemConfig};
use crate::numeric::{Precision, Real};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorFunctionalConfig {
    pub horizon: Rational,
}

impl ErrorFunctionalConfig {
    pub fn new(horizon: Rational) -> Result<Self> {
        if !horizon.is_positive() {
            return Err(Error::Config(format!("horizon T must be positive, got {horizon}")));
        }
        Ok(Self { horizon })
    }
}

impl Default for ErrorFunctionalConfig {
    fn default() -> Self {
        Self { horizon: Rational::from_integer(1.into()) }
    }
}

/// `E = (1/T)∫₀ᵀ r(s)² ds` as a polynomial in the control parameters with
/// [`ExpRational`] coefficients, where `e^{−x}·r(t)` is the PDE residual of
/// the iterate (the `e^{−2x}` factor is divided out).
#[derive(Clone, PartialEq, Eq)]
pub struct ErrorPolynomial {
    space: ParamSpace,
    terms: BTreeMap<Monomial, ExpRational>,
}

impl ErrorPolynomial {
    pub fn space(&self) -> &ParamSpace {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExpRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_in(&self, name: &str) -> Option<u32> {
        let idx = self.space.index_of(name)?;
        Some(self.terms.keys().map(|m| m[idx]).max().unwrap_or(0))
    }

    pub fn free_params(&self) -> Vec<String> {
        self.space
            .names()
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|m| m[*i] > 0))
            .map(|(_, n)| n.clone())
            .collect()
    }

    /// Each coefficient evaluated to `digits` significant digits.
    pub fn decimal_coefficients(&self, digits: usize) -> Vec<(Monomial, String)> {
        let prec = Precision::digits(digits);
        self.terms.iter().map(|(m, c)| (m.clone(), c.eval(prec).to_sci_string(digits))).collect()
    }

    pub fn numeric(&self, prec: Precision) -> NumericPoly {
        NumericPoly {
            names: self.space.names().to_vec(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.eval(prec))).collect(),
        }
    }

    /// Evaluates at a point; parameters absent from `point` count as zero only
    /// if they do not occur.
    pub fn eval(&self, point: &BTreeMap<String, Real>, prec: Precision) -> Result<Real> {
        let values = self
            .space
            .names()
            .iter()
            .map(|n| point.get(n).cloned().ok_or_else(|| Error::UnboundParam(n.clone())))
            .collect::<Vec<_>>();
        let free = self.free_params();
        let resolved: Vec<Real> = values
            .into_iter()
            .zip(self.space.names())
            .map(|(v, n)| match v {
                Ok(v) => Ok(v),
                Err(e) if free.contains(n) => Err(e),
                Err(_) => Ok(Real::zero(prec)),
            })
            .collect::<Result<_>>()?;
        Ok(self.numeric(prec).eval(&resolved))
    }
}

impl fmt::Display for ErrorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        let n = &self.space.names()[i];
                        if e == 1 {
                            n.clone()
                        } else {
                            format!("{n}^{e}")
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("[{c}]")
                } else {
                    format!("[{c}]*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ErrorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Multivariate polynomial with high-precision real coefficients.
#[derive(Debug, Clone)]
pub struct NumericPoly {
    pub names: Vec<String>,
    pub terms: Vec<(Monomial, Real)>,
}

impl NumericPoly {
    pub fn eval(&self, point: &[Real]) -> Real {
        let prec = self.terms.first().map(|(_, c)| c.precision()).unwrap_or_default();
        self.terms.iter().fold(Real::zero(prec), |acc, (m, c)| {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    v = v * x.powi(e as usize);
                }
            }
            acc + v
        })
    }

    pub fn partial(&self, var: usize) -> NumericPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m[var] > 0)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2[var] -= 1;
                (m2, c * &Real::from_i64(m[var] as i64, c.precision()))
            })
            .collect();
        NumericPoly { names: self.names.clone(), terms }
    }

    /// Dense coefficients in `var` with all other variables fixed at `point`.
    pub fn restrict(&self, var: usize, point: &[Real], prec: Precision) -> Vec<Real> {
        let deg = self.terms.iter().map(|(m, _)| m[var] as usize).max().unwrap_or(0);
        let mut out = vec![Real::zero(prec); deg + 1];
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, (x, &e)) in point.iter().zip(m).enumerate() {
                if i != var && e > 0 {
                    v = v * x.powi(e as usize);
                }
            }
            let k = m[var] as usize;
            out[k] = &out[k] + &v;
        }
        out
    }
}

/// Builds the residual square-error functional of an iterate.
pub fn error_functional(u: &Field, cfg: &ProblemConfig, efc: &ErrorFunctionalConfig) -> Result<ErrorPolynomial> {
    let residual = pde_residual(u, cfg);
    let space = residual.space().clone();
    let mut terms: BTreeMap<Monomial, ExpRational> = BTreeMap::new();
    if residual.is_zero() {
        return Ok(ErrorPolynomial { space, terms });
    }
    if residual.channel_keys() != [1] {
        return Err(Error::MultiChannelResidual(residual.channel_keys()));
    }
    let r = residual.channel(1).expect("channel 1 present");
    let square = r * r;
    let inv_t = efc.horizon.recip();
    for term in square.terms() {
        for (m, c) in term.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let moment = ExpRational::exp_moment(term.rate(), m, &efc.horizon).scale(&inv_t);
            for (mono, k) in c.terms() {
                let slot = terms.entry(mono.clone()).or_default();
                *slot = &*slot + &moment.scale(k);
            }
        }
    }
    terms.retain(|_, v| !v.is_zero());
    Ok(ErrorPolynomial { space, terms })
}
