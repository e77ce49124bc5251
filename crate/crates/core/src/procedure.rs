//! Fixed-point iteration procedures over an abstract operator `T`.
//!
//! | procedure     | step                                                    |
//! |---------------|---------------------------------------------------------|
//! | Picard        | `u' = T u`                                              |
//! | Mann          | `u' = (1−α_n) u + α_n T u`                              |
//! | Krasnoselskii | Mann with a single `α`                                  |
//! | Ishikawa      | `v = (1−β_n) u + β_n T u`, `u' = (1−α_n) u + α_n T v`   |
//! | Hybrid P-K    | `v = (1−λ) u + λ T u`, `u' = T v`                       |
//!
//! Control parameters are exact rationals or named symbols; symbols become
//! variables of the iterate's [`ParamSpace`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, ParamPoly, ParamSpace, Rational};
use crate::error::{Error, Result};
use crate::model::{Method, MethodKind, ProblemConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ControlParam {
    Value(Rational),
    Symbol(String),
}

impl ControlParam {
    pub fn value(r: Rational) -> Self {
        ControlParam::Value(r)
    }

    pub fn symbol(name: impl Into<String>) -> Self {
        ControlParam::Symbol(name.into())
    }

    pub fn to_poly(&self, space: &ParamSpace) -> Result<ParamPoly> {
        match self {
            ControlParam::Value(r) => Ok(ParamPoly::constant(space, r.clone())),
            ControlParam::Symbol(name) => ParamPoly::var(space, name),
        }
    }

    fn symbol_name(&self) -> Option<&str> {
        match self {
            ControlParam::Symbol(n) => Some(n),
            ControlParam::Value(_) => None,
        }
    }
}

impl From<Rational> for ControlParam {
    fn from(r: Rational) -> Self {
        ControlParam::Value(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcedureKind {
    Picard,
    Mann,
    Krasnoselskii,
    Ishikawa,
    HybridPk,
}

impl ProcedureKind {
    pub const ALL: [ProcedureKind; 5] = [
        ProcedureKind::Picard,
        ProcedureKind::Mann,
        ProcedureKind::Krasnoselskii,
        ProcedureKind::Ishikawa,
        ProcedureKind::HybridPk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProcedureKind::Picard => "picard",
            ProcedureKind::Mann => "mann",
            ProcedureKind::Krasnoselskii => "krasnoselskii",
            ProcedureKind::Ishikawa => "ishikawa",
            ProcedureKind::HybridPk => "hybrid-pk",
        }
    }
}

impl fmt::Display for ProcedureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProcedureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        ProcedureKind::ALL
            .into_iter()
            .find(|k| k.as_str() == lower || (lower == "hybrid" && *k == ProcedureKind::HybridPk))
            .ok_or_else(|| Error::Parse(format!("unknown procedure `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProcedureSpec {
    Picard,
    Mann { alpha: Vec<ControlParam> },
    Krasnoselskii { alpha: ControlParam },
    Ishikawa { alpha: Vec<ControlParam>, beta: Vec<ControlParam> },
    HybridPk { lambda: ControlParam },
}

impl ProcedureSpec {
    pub fn kind(&self) -> ProcedureKind {
        match self {
            ProcedureSpec::Picard => ProcedureKind::Picard,
            ProcedureSpec::Mann { .. } => ProcedureKind::Mann,
            ProcedureSpec::Krasnoselskii { .. } => ProcedureKind::Krasnoselskii,
            ProcedureSpec::Ishikawa { .. } => ProcedureKind::Ishikawa,
            ProcedureSpec::HybridPk { .. } => ProcedureKind::HybridPk,
        }
    }

    /// Fresh per-step symbols `alpha1…alphaN`, `beta1…betaN`, or a shared
    /// `alpha` / `lambda`.
    pub fn symbolic(kind: ProcedureKind, steps: usize) -> Self {
        let seq = |p: &str| (1..=steps).map(|i| ControlParam::symbol(format!("{p}{i}"))).collect();
        match kind {
            ProcedureKind::Picard => ProcedureSpec::Picard,
            ProcedureKind::Mann => ProcedureSpec::Mann { alpha: seq("alpha") },
            ProcedureKind::Krasnoselskii => ProcedureSpec::Krasnoselskii { alpha: ControlParam::symbol("alpha") },
            ProcedureKind::Ishikawa => ProcedureSpec::Ishikawa { alpha: seq("alpha"), beta: seq("beta") },
            ProcedureKind::HybridPk => ProcedureSpec::HybridPk { lambda: ControlParam::symbol("lambda") },
        }
    }

    /// Symbols in first-appearance order.
    pub fn symbols(&self) -> Vec<String> {
        let params: Vec<&ControlParam> = match self {
            ProcedureSpec::Picard => vec![],
            ProcedureSpec::Mann { alpha } => alpha.iter().collect(),
            ProcedureSpec::Krasnoselskii { alpha } => vec![alpha],
            ProcedureSpec::Ishikawa { alpha, beta } => alpha.iter().chain(beta).collect(),
            ProcedureSpec::HybridPk { lambda } => vec![lambda],
        };
        let mut names: Vec<String> = Vec::new();
        for n in params.into_iter().filter_map(ControlParam::symbol_name) {
            if !names.iter().any(|m| m == n) {
                names.push(n.to_string());
            }
        }
        names
    }

    fn check_len(&self, steps: usize) -> Result<()> {
        let given = match self {
            ProcedureSpec::Mann { alpha } => alpha.len(),
            ProcedureSpec::Ishikawa { alpha, beta } => alpha.len().min(beta.len()),
            _ => return Ok(()),
        };
        if given < steps {
            return Err(Error::InsufficientParams { needed: steps, given });
        }
        Ok(())
    }

    fn check_distinct_symbols(&self) -> Result<()> {
        let per_step = match self {
            ProcedureSpec::Mann { alpha } => alpha.iter().collect::<Vec<_>>(),
            ProcedureSpec::Ishikawa { alpha, beta } => alpha.iter().chain(beta).collect(),
            _ => return Ok(()),
        };
        let names: Vec<&str> = per_step.into_iter().filter_map(ControlParam::symbol_name).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidProcedure(format!("symbol `{n}` reused across steps")));
            }
        }
        Ok(())
    }
}

/// `u_0 … u_n`, plus the auxiliary `v_0 … v_{n−1}` of two-step procedures.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub method: MethodKind,
    pub procedure: ProcedureSpec,
    pub iterates: Vec<Field>,
    pub auxiliary: Vec<Field>,
}

impl IterationTrace {
    pub fn last(&self) -> &Field {
        self.iterates.last().expect("trace holds u_0")
    }

    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }
}

fn blend(u: &Field, tu: &Field, w: &ParamPoly) -> Field {
    // (1−w)u + w·Tu = u + w(Tu − u)
    u + &(tu - u).scale(w)
}

pub fn picard_step(op: impl Fn(&Field) -> Field, u: &Field) -> Field {
    op(u)
}

pub fn mann_step(op: impl Fn(&Field) -> Field, u: &Field, alpha: &ControlParam) -> Result<Field> {
    let a = alpha.to_poly(u.space())?;
    Ok(blend(u, &op(u), &a))
}

/// Returns `(v_n, u_{n+1})`.
pub fn ishikawa_step(
    op: impl Fn(&Field) -> Field,
    u: &Field,
    alpha: &ControlParam,
    beta: &ControlParam,
) -> Result<(Field, Field)> {
    let a = alpha.to_poly(u.space())?;
    let b = beta.to_poly(u.space())?;
    let v = blend(u, &op(u), &b);
    let next = blend(u, &op(&v), &a);
    Ok((v, next))
}

/// Returns `(v_n, u_{n+1})`.
pub fn hybrid_pk_step(op: impl Fn(&Field) -> Field, u: &Field, lambda: &ControlParam) -> Result<(Field, Field)> {
    let l = lambda.to_poly(u.space())?;
    let v = blend(u, &op(u), &l);
    let next = op(&v);
    Ok((v, next))
}

/// Runs `steps` iterations starting from the method's `u_0`, embedded in a
/// space holding every symbol of `procedure`.
pub fn run(procedure: &ProcedureSpec, method: MethodKind, cfg: &ProblemConfig, steps: usize) -> Result<IterationTrace> {
    let space = ParamSpace::new(procedure.symbols())?;
    let m = Method::new(method, cfg.clone());
    run_from(procedure, &m, m.start(&space), steps)
}

/// Like [`run`] but from an explicit starting iterate; its space must declare
/// every symbol of `procedure`.
pub fn run_from(procedure: &ProcedureSpec, method: &Method, u0: Field, steps: usize) -> Result<IterationTrace> {
    procedure.check_len(steps)?;
    procedure.check_distinct_symbols()?;
    let op = |u: &Field| method.apply(u);
    let mut iterates = vec![u0];
    let mut auxiliary = Vec::new();
    for n in 0..steps {
        let u = &iterates[n];
        let next = match procedure {
            ProcedureSpec::Picard => picard_step(op, u),
            ProcedureSpec::Mann { alpha } => mann_step(op, u, &alpha[n])?,
            ProcedureSpec::Krasnoselskii { alpha } => mann_step(op, u, alpha)?,
            ProcedureSpec::Ishikawa { alpha, beta } => {
                let (v, next) = ishikawa_step(op, u, &alpha[n], &beta[n])?;
                auxiliary.push(v);
                next
            }
            ProcedureSpec::HybridPk { lambda } => {
                let (v, next) = hybrid_pk_step(op, u, lambda)?;
                auxiliary.push(v);
                next
            }
        };
        iterates.push(next);
    }
    Ok(IterationTrace { method: method.kind, procedure: procedure.clone(), iterates, auxiliary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, Exponomial};
    use crate::model::{blues_t, blues_zeroth, initial_field, picard_closed_form, vim_t};

    fn cfg() -> ProblemConfig {
        ProblemConfig::default()
    }

    fn v(n: i64) -> ControlParam {
        ControlParam::Value(int(n))
    }

    fn channel1(space: &ParamSpace, rate: i64, cs: Vec<ParamPoly>) -> Field {
        Field::single(1, Exponomial::from_groups(space, [(int(rate), cs)]))
    }

    #[test]
    fn picard_reproduces_closed_forms() {
        let c = cfg();
        let vim = run(&ProcedureSpec::Picard, MethodKind::Vim, &c, 3).unwrap();
        assert_eq!(vim.last(), &picard_closed_form(MethodKind::Vim, &c, 3));
        assert_eq!(vim.last().to_string(), "exp(-x)*(1 - t + 1/2*t^2 - 1/6*t^3)");
        let blues = run(&ProcedureSpec::Picard, MethodKind::Blues, &c, 2).unwrap();
        assert_eq!(blues.last().to_string(), "exp(-x)*exp(-2*t)*(1 + t + 1/2*t^2)");
        let none = run(&ProcedureSpec::Picard, MethodKind::Vim, &c, 0).unwrap();
        assert_eq!(none.iterates, vec![initial_field()]);
    }

    #[test]
    fn mann_unit_alpha_is_picard() {
        let c = cfg();
        let u = initial_field();
        assert_eq!(mann_step(|f| vim_t(f, &c), &u, &v(1)).unwrap(), picard_step(|f| vim_t(f, &c), &u));
    }

    #[test]
    fn symbolic_mann_first_step() {
        let c = cfg();
        let s = ParamSpace::new(["alpha"]).unwrap();
        let alpha = ParamPoly::var(&s, "alpha").unwrap();
        let sym = ControlParam::symbol("alpha");
        let u = initial_field().with_space(&s).unwrap();
        let vim = mann_step(|f| vim_t(f, &c), &u, &sym).unwrap();
        assert_eq!(vim, channel1(&s, 0, vec![ParamPoly::one(&s), -&alpha]));
        let u = blues_zeroth(&c).with_space(&s).unwrap();
        let blues = mann_step(|f| blues_t(f, &c), &u, &sym).unwrap();
        assert_eq!(blues, channel1(&s, -2, vec![ParamPoly::one(&s), alpha.clone()]));
    }

    #[test]
    fn symbolic_ishikawa_first_step() {
        let c = cfg();
        let s = ParamSpace::new(["alpha", "beta"]).unwrap();
        let a = ParamPoly::var(&s, "alpha").unwrap();
        let b = ParamPoly::var(&s, "beta").unwrap();
        let u = initial_field().with_space(&s).unwrap();
        let (_, next) =
            ishikawa_step(|f| vim_t(f, &c), &u, &ControlParam::symbol("alpha"), &ControlParam::symbol("beta")).unwrap();
        // 1 − αt + αβ t²/2
        let ab_half = (&a * &b).scale(&crate::algebra::ratio(1, 2));
        assert_eq!(next, channel1(&s, 0, vec![ParamPoly::one(&s), -&a, ab_half]));
    }

    #[test]
    fn ishikawa_reductions() {
        let c = cfg();
        let op = |f: &Field| blues_t(f, &c);
        let u = blues_zeroth(&c);
        let alpha = ControlParam::Value(crate::algebra::ratio(3, 4));
        let (vn, next) = ishikawa_step(op, &u, &alpha, &v(0)).unwrap();
        assert_eq!(vn, u);
        assert_eq!(next, mann_step(op, &u, &alpha).unwrap());
        let (_, p) = ishikawa_step(op, &u, &v(1), &v(0)).unwrap();
        assert_eq!(p, picard_step(op, &u));
    }

    #[test]
    fn hybrid_reductions() {
        let c = cfg();
        let op = |f: &Field| vim_t(f, &c);
        let u = initial_field();
        assert_eq!(hybrid_pk_step(op, &u, &v(0)).unwrap().1, op(&u));
        let (_, twice) = hybrid_pk_step(op, &u, &v(1)).unwrap();
        assert_eq!(twice, op(&op(&u)));
        assert_eq!(twice, picard_closed_form(MethodKind::Vim, &c, 2));
    }

    #[test]
    fn run_rejects_short_parameter_lists() {
        let spec = ProcedureSpec::Mann { alpha: vec![v(1), v(1)] };
        assert!(matches!(
            run(&spec, MethodKind::Vim, &cfg(), 3),
            Err(Error::InsufficientParams { needed: 3, given: 2 })
        ));
        let dup = ProcedureSpec::Mann { alpha: vec![ControlParam::symbol("a"), ControlParam::symbol("a")] };
        assert!(run(&dup, MethodKind::Vim, &cfg(), 2).is_err());
    }

    #[test]
    fn procedure_kind_names() {
        for k in ProcedureKind::ALL {
            assert_eq!(k.as_str().parse::<ProcedureKind>().unwrap(), k);
        }
        assert!("newton".parse::<ProcedureKind>().is_err());
    }
}
