use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;
use crate::numeric::{Precision, Real};

/// A finite sum `Σ c_j·e^{q_j}` with rational `c_j`, `q_j`. Since `e` is
/// transcendental, the sum is zero iff every `c_j` is zero, so the stored
/// form (no zero coefficients, distinct exponents) is canonical.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ExpRational {
    terms: BTreeMap<Rational, Rational>,
}

impl ExpRational {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(c: Rational) -> Self {
        Self::term(c, Rational::zero())
    }

    /// `c·e^q`.
    pub fn term(c: Rational, q: Rational) -> Self {
        let mut out = Self::zero();
        out.push(q, c);
        out
    }

    fn push(&mut self, q: Rational, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(q.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&q);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (q, v) in &self.terms {
            out.push(q.clone(), v * c);
        }
        out
    }

    pub fn eval(&self, prec: Precision) -> Real {
        self.terms.iter().fold(Real::zero(prec), |acc, (q, c)| {
            let growth = if q.is_zero() { Real::one(prec) } else { Real::from_rational(q, prec).exp() };
            acc + Real::from_rational(c, prec) * growth
        })
    }

    /// `∫₀ᵀ e^{μs}·s^m ds`.
    pub fn exp_moment(rate: &Rational, m: usize, horizon: &Rational) -> Self {
        if rate.is_zero() {
            let mut p = Rational::one();
            for _ in 0..=m {
                p *= horizon;
            }
            return Self::rational(p / Rational::from_integer((m + 1).into()));
        }
        // e^{μT} Σ_j (−1)^j m!/(m−j)! T^{m−j}/μ^{j+1}  −  (−1)^m m!/μ^{m+1}
        let inv = rate.recip();
        let mut out = Self::zero();
        let mut factor = inv.clone();
        let q = rate * horizon;
        for j in 0..=m {
            let signed = if j % 2 == 0 { factor.clone() } else { -factor.clone() };
            let mut tp = Rational::one();
            for _ in 0..(m - j) {
                tp *= horizon;
            }
            out.push(q.clone(), &signed * tp);
            if j == m {
                out.push(Rational::zero(), -signed);
            }
            factor = &factor * &inv * Rational::from_integer((m - j).into());
        }
        out
    }
}

impl Add<&ExpRational> for &ExpRational {
    type Output = ExpRational;
    fn add(self, rhs: &ExpRational) -> ExpRational {
        let mut out = self.clone();
        for (q, c) in &rhs.terms {
            out.push(q.clone(), c.clone());
        }
        out
    }
}

impl fmt::Display for ExpRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (q, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if q.is_zero() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*exp({q})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExpRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
