//! Multivariate polynomials over exact rationals in a declared, ordered set of
//! named control parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Ordered list of parameter names shared by every coefficient of a value.
#[derive(Clone, Default)]
pub struct ParamSpace(Arc<[String]>);

impl ParamSpace {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a space from names; duplicates are rejected.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidProcedure(format!("duplicate parameter name `{n}`")));
            }
        }
        Ok(Self(names.into()))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub(crate) fn ensure_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ParamSetMismatch { left: self.0.join(", "), right: other.0.join(", ") })
        }
    }
}

impl PartialEq for ParamSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for ParamSpace {}

impl fmt::Debug for ParamSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector, one entry per name of the enclosing [`ParamSpace`].
pub type Monomial = Vec<u32>;

#[derive(Clone)]
pub struct ParamPoly {
    space: ParamSpace,
    terms: BTreeMap<Monomial, Rational>,
}

impl ParamPoly {
    pub fn zero(space: &ParamSpace) -> Self {
        Self { space: space.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(space: &ParamSpace, c: Rational) -> Self {
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(vec![0; space.len()], c);
        }
        p
    }

    pub fn one(space: &ParamSpace) -> Self {
        Self::constant(space, Rational::one())
    }

    pub fn from_int(space: &ParamSpace, c: i64) -> Self {
        Self::constant(space, Rational::from_integer(c.into()))
    }

    /// The polynomial consisting of the single parameter `name`.
    pub fn var(space: &ParamSpace, name: &str) -> Result<Self> {
        let idx = space.index_of(name).ok_or_else(|| Error::UndeclaredParam(name.to_string()))?;
        let mut mono = vec![0; space.len()];
        mono[idx] = 1;
        let mut p = Self::zero(space);
        p.terms.insert(mono, Rational::one());
        Ok(p)
    }

    pub fn space(&self) -> &ParamSpace {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value when no parameter appears.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn degree_in(&self, name: &str) -> Option<u32> {
        let idx = self.space.index_of(name)?;
        Some(self.terms.keys().map(|m| m[idx]).max().unwrap_or(0))
    }

    /// Names that occur with positive degree.
    pub fn free_params(&self) -> Vec<String> {
        self.space
            .names()
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|m| m[*i] > 0))
            .map(|(_, n)| n.clone())
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.space);
        }
        Self { space: self.space.clone(), terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Replaces bound parameters by their values. Unbound parameters stay.
    pub fn substitute(&self, bindings: &BTreeMap<String, Rational>) -> Result<Self> {
        let mut values: Vec<Option<&Rational>> = vec![None; self.space.len()];
        for (name, v) in bindings {
            let idx = self.space.index_of(name).ok_or_else(|| Error::UndeclaredParam(name.clone()))?;
            values[idx] = Some(v);
        }
        let mut out = Self::zero(&self.space);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut mono = m.clone();
            for (i, e) in mono.iter_mut().enumerate() {
                if let Some(v) = values[i] {
                    coeff *= pow_rational(v, *e);
                    *e = 0;
                }
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over another space. Every parameter that
    /// occurs must be declared in `target`.
    pub fn with_space(&self, target: &ParamSpace) -> Result<Self> {
        if &self.space == target {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.space.names().iter().map(|n| target.index_of(n)).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut mono = vec![0; target.len()];
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| Error::UndeclaredParam(self.space.names()[i].clone()))?;
                mono[j] = e;
            }
            out.add_term(mono, c.clone());
        }
        Ok(out)
    }

    fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn assert_space(&self, other: &Self) {
        assert!(self.space == other.space, "ParamPoly spaces differ: {:?} vs {:?}", self.space, other.space);
    }
}

pub(crate) fn pow_rational(v: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= v;
    }
    acc
}

impl PartialEq for ParamPoly {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.terms == other.terms
    }
}

impl Eq for ParamPoly {}

impl Add<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        self.assert_space(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self + &(-rhs)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly { space: self.space.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    // exponents add when monomials multiply
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        self.assert_space(rhs);
        let mut out = ParamPoly::zero(&self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mono = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.add_term(mono, ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as a sum of monomials, e.g. `1 - alpha1 + 1/2*alpha1*beta1^2`.
impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
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
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (vars.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let s = ParamSpace::new(["a"]).unwrap();
        let a = ParamPoly::var(&s, "a").unwrap();
        let d = &a - &a;
        assert!(d.is_zero());
        assert_eq!(d.terms().count(), 0);
    }

    #[test]
    fn product_and_degree() {
        let s = ParamSpace::new(["a", "b"]).unwrap();
        let a = ParamPoly::var(&s, "a").unwrap();
        let b = ParamPoly::var(&s, "b").unwrap();
        let one = ParamPoly::one(&s);
        let p = &(&one - &a) * &(&a + &b);
        assert_eq!(p.degree_in("a"), Some(2));
        assert_eq!(p.degree_in("b"), Some(1));
        assert_eq!(p.to_string(), "b + a - a*b - a^2");
    }

    #[test]
    fn substitution_binds_subset() {
        let s = ParamSpace::new(["a", "b"]).unwrap();
        let a = ParamPoly::var(&s, "a").unwrap();
        let b = ParamPoly::var(&s, "b").unwrap();
        let p = &a * &b;
        let bound = p.substitute(&BTreeMap::from([("a".to_string(), q(1, 2))])).unwrap();
        assert_eq!(bound, b.scale(&q(1, 2)));
        assert!(matches!(p.substitute(&BTreeMap::from([("z".to_string(), q(1, 1))])), Err(Error::UndeclaredParam(_))));
    }

    #[test]
    fn respacing_requires_declared_names() {
        let s = ParamSpace::new(["a"]).unwrap();
        let a = ParamPoly::var(&s, "a").unwrap();
        let wide = ParamSpace::new(["b", "a"]).unwrap();
        let moved = a.with_space(&wide).unwrap();
        assert_eq!(moved, ParamPoly::var(&wide, "a").unwrap());
        assert!(a.with_space(&ParamSpace::empty()).is_err());
        assert_eq!(ParamPoly::from_int(&s, 3).with_space(&ParamSpace::empty()).unwrap().as_constant(), Some(q(3, 1)));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(ParamSpace::new(["a", "a"]).is_err());
    }
}
