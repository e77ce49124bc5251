//! Spatially separable functions `Σ_k e^{−kx}·f_k(t)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::exponomial::{fmt_poly, fmt_rate_factor, Exponomial};
use super::param::{ParamPoly, ParamSpace};
use super::Rational;
use crate::error::{Error, Result};
use crate::numeric::{Precision, Real};

/// Channel keys are ≥ 1 and never map to a zero [`Exponomial`].
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    space: ParamSpace,
    channels: BTreeMap<u32, Exponomial>,
}

impl Field {
    pub fn zero(space: &ParamSpace) -> Self {
        Self { space: space.clone(), channels: BTreeMap::new() }
    }

    /// `e^{−kx}·f(t)`.
    ///
    /// # Panics
    /// When `channel == 0` or `f` lives in another parameter space.
    pub fn single(channel: u32, f: Exponomial) -> Self {
        assert!(channel >= 1, "channel keys start at 1");
        let space = f.space().clone();
        let mut channels = BTreeMap::new();
        if !f.is_zero() {
            channels.insert(channel, f);
        }
        Self { space, channels }
    }

    pub fn from_channels<I>(space: &ParamSpace, parts: I) -> Self
    where
        I: IntoIterator<Item = (u32, Exponomial)>,
    {
        let mut out = Self::zero(space);
        for (k, f) in parts {
            out.accumulate(k, &f);
        }
        out
    }

    pub fn space(&self) -> &ParamSpace {
        &self.space
    }

    pub fn channels(&self) -> &BTreeMap<u32, Exponomial> {
        &self.channels
    }

    pub fn channel(&self, k: u32) -> Option<&Exponomial> {
        self.channels.get(&k)
    }

    pub fn channel_keys(&self) -> Vec<u32> {
        self.channels.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.channels.is_empty()
    }

    fn accumulate(&mut self, k: u32, f: &Exponomial) {
        assert!(k >= 1, "channel keys start at 1");
        assert!(f.space() == &self.space, "Field spaces differ: {:?} vs {:?}", f.space(), self.space);
        let sum = match self.channels.get(&k) {
            Some(prev) => prev + f,
            None => f.clone(),
        };
        if sum.is_zero() {
            self.channels.remove(&k);
        } else {
            self.channels.insert(k, sum);
        }
    }

    fn map(&self, f: impl Fn(u32, &Exponomial) -> Exponomial) -> Self {
        Self::from_channels(&self.space, self.channels.iter().map(|(&k, e)| (k, f(k, e))))
    }

    pub fn try_add(&self, other: &Field) -> Result<Field> {
        self.space.ensure_same(&other.space)?;
        let mut out = self.clone();
        for (&k, f) in &other.channels {
            out.accumulate(k, f);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Field) -> Result<Field> {
        self.try_add(&-other)
    }

    /// Channels add, rates add, `t`-polynomials multiply.
    pub fn try_mul(&self, other: &Field) -> Result<Field> {
        self.space.ensure_same(&other.space)?;
        let mut out = Self::zero(&self.space);
        for (&ka, fa) in &self.channels {
            for (&kb, fb) in &other.channels {
                out.accumulate(ka + kb, &(fa * fb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ParamPoly) -> Field {
        self.map(|_, e| e.scale(c))
    }

    pub fn scale_rational(&self, c: &Rational) -> Field {
        self.map(|_, e| e.scale_rational(c))
    }

    pub fn diff_t(&self) -> Field {
        self.map(|_, e| e.diff_t())
    }

    /// `∂/∂x e^{−kx} = −k e^{−kx}`.
    pub fn diff_x(&self) -> Field {
        self.map(|k, e| e.scale_rational(&-Rational::from_integer(k.into())))
    }

    pub fn integrate_0t(&self) -> Field {
        self.map(|_, e| e.integrate_0t())
    }

    /// `∫₀ᵗ e^{−a(t−s)} f(x,s) ds = e^{−at}·∫₀ᵗ e^{as} f(x,s) ds`. Rates that
    /// cancel the kernel exactly fall into the polynomial branch of the
    /// integral, producing the `t·e^{−at}` family.
    pub fn convolve_green(&self, a: &Rational) -> Field {
        self.map(|_, e| e.shift_rate(a).integrate_0t().shift_rate(&-a))
    }

    /// Multiplies every channel by `e^{shift·t}`.
    pub fn shift_rate(&self, shift: &Rational) -> Field {
        self.map(|_, e| e.shift_rate(shift))
    }

    pub fn substitute_params(&self, bindings: &BTreeMap<String, Rational>) -> Result<Field> {
        for name in bindings.keys() {
            if self.space.index_of(name).is_none() {
                return Err(Error::UndeclaredParam(name.clone()));
            }
        }
        let parts = self.channels.iter().map(|(&k, e)| Ok((k, e.substitute(bindings)?))).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_channels(&self.space, parts))
    }

    /// Re-expresses the field over `target`; every occurring parameter must be
    /// declared there.
    pub fn with_space(&self, target: &ParamSpace) -> Result<Field> {
        let parts = self.channels.iter().map(|(&k, e)| Ok((k, e.with_space(target)?))).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_channels(target, parts))
    }

    pub fn degree_in(&self, name: &str) -> Option<u32> {
        self.space.index_of(name)?;
        Some(self.channels.values().filter_map(|e| e.degree_in(name)).max().unwrap_or(0))
    }

    pub fn free_params(&self) -> Vec<String> {
        let mut names: Vec<String> = self.channels.values().flat_map(|e| e.free_params()).collect();
        names.sort();
        names.dedup();
        names
    }

    /// Exact value at `t = 0` as `Σ_k e^{−kx}·c_k`.
    pub fn at_t0(&self) -> Field {
        Self::from_channels(
            &self.space,
            self.channels
                .iter()
                .map(|(&k, e)| (k, Exponomial::monomial(&self.space, Rational::zero(), 0, e.at_zero()))),
        )
    }

    pub fn eval_numeric(&self, x: &Real, t: &Real, prec: Precision) -> Result<Real> {
        if let Some(name) = self.free_params().into_iter().next() {
            return Err(Error::UnboundParam(name));
        }
        let mut total = Real::zero(prec);
        for (&k, e) in &self.channels {
            let spatial = (-(Real::from_i64(k as i64, prec) * x)).exp();
            let mut temporal = Real::zero(prec);
            for term in e.terms() {
                let mut poly = Real::zero(prec);
                for c in term.coeffs().iter().rev() {
                    let c = c.as_constant().expect("no free parameters");
                    poly = poly * t + Real::from_rational(&c, prec);
                }
                let growth = if term.rate().is_zero() {
                    Real::one(prec)
                } else {
                    (Real::from_rational(term.rate(), prec) * t).exp()
                };
                temporal = temporal + poly * growth;
            }
            total = total + spatial * temporal;
        }
        Ok(total)
    }

    /// Convenience evaluation in `f64` at rational or float coordinates.
    pub fn eval_f64(&self, x: f64, t: f64) -> Result<f64> {
        let prec = Precision::digits(30);
        Ok(self.eval_numeric(&Real::from_f64(x, prec), &Real::from_f64(t, prec), prec)?.to_f64())
    }
}

impl Add<&Field> for &Field {
    type Output = Field;
    /// # Panics
    /// On mismatched parameter spaces; use [`Field::try_add`] to get an error.
    fn add(self, rhs: &Field) -> Field {
        self.try_add(rhs).expect("add: mismatched parameter spaces")
    }
}

impl Sub<&Field> for &Field {
    type Output = Field;
    fn sub(self, rhs: &Field) -> Field {
        self.try_sub(rhs).expect("sub: mismatched parameter spaces")
    }
}

impl Mul<&Field> for &Field {
    type Output = Field;
    fn mul(self, rhs: &Field) -> Field {
        self.try_mul(rhs).expect("mul: mismatched parameter spaces")
    }
}

impl Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.map(|_, e| -e)
    }
}

fn fmt_channel(k: u32) -> String {
    if k == 1 {
        "exp(-x)".into()
    } else {
        format!("exp(-{k}*x)")
    }
}

/// Sum of `exp(-k*x)[*exp(μ*t)]*(polynomial in t)` groups, with exact `p/q`
/// coefficients, e.g. `exp(-x)*exp(-2*t)*(1 + t)`.
impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.channels.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // rate-0 group first, then increasing rate
        for (&k, e) in &self.channels {
            let mut terms: Vec<_> = e.terms().iter().collect();
            terms.sort_by_key(|t| (!t.rate().is_zero(), t.rate().clone()));
            for term in terms {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                let mut factors = vec![fmt_channel(k)];
                factors.extend(fmt_rate_factor(term.rate(), "t"));
                let coeffs = term.coeffs();
                let nonzero = coeffs.iter().filter(|c| !c.is_zero()).count();
                let unit_single = nonzero == 1 && coeffs.last().is_some_and(ParamPoly::is_one);
                if unit_single {
                    match coeffs.len() - 1 {
                        0 => {}
                        1 => factors.push("t".into()),
                        m => factors.push(format!("t^{m}")),
                    }
                } else if nonzero == 1
                    && coeffs.len() == 1
                    && coeffs[0].as_constant().is_some_and(|c| c.is_negative() && c.abs().is_one())
                {
                    factors.insert(0, "(-1)".into());
                } else {
                    factors.push(format!("({})", fmt_poly(coeffs)));
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
