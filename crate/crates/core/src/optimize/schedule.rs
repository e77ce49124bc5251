use std::collections::BTreeMap;

use super::functional::{error_functional, ErrorFunctionalConfig, ErrorPolynomial};
use super::minimize::{minimize_1d, minimize_2d, MinimizerOptions, OptimizationResult};
use crate::algebra::{Field, ParamSpace, Rational};
use crate::error::{Error, Result};
use crate::model::{Method, MethodKind, ProblemConfig};
use crate::numeric::Real;
use crate::procedure::{hybrid_pk_step, ishikawa_step, mann_step, ControlParam, ProcedureKind, ProcedureSpec};

fn at_step<T>(step: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Step { step, source: Box::new(e) })
}

fn picard_value(e: &ErrorPolynomial, point: &[(&str, i64)], opts: &MinimizerOptions) -> Result<Real> {
    let prec = opts.precision;
    let map: BTreeMap<String, Real> = point.iter().map(|(n, v)| (n.to_string(), Real::from_i64(*v, prec))).collect();
    e.eval(&map, prec)
}

fn freeze(u: &Field, bindings: &BTreeMap<String, Rational>) -> Result<Field> {
    u.substitute_params(bindings)?.with_space(&ParamSpace::empty())
}

/// Optimizes the control parameters of `kind`.
///
/// Mann and Ishikawa: one symbolic step at a time from the frozen previous
/// iterate, minimizing `E` of the new iterate over that step's parameters.
/// Krasnoselskii and hybrid Picard-Krasnoselskii: all `steps` with one shared
/// symbol, minimizing `E` of the final iterate once.
pub fn greedy_schedule(
    kind: ProcedureKind,
    method: MethodKind,
    cfg: &ProblemConfig,
    efc: &ErrorFunctionalConfig,
    steps: usize,
    opts: &MinimizerOptions,
) -> Result<Vec<OptimizationResult>> {
    if steps == 0 {
        return Err(Error::Config("the schedule needs at least one step".into()));
    }
    let m = Method::new(method, cfg.clone());
    let op = |f: &Field| m.apply(f);
    let mut u = m.start(&ParamSpace::empty());
    let mut results = Vec::new();
    match kind {
        ProcedureKind::Picard => {
            return Err(Error::InvalidProcedure("picard has no control parameters".into()));
        }
        ProcedureKind::Mann => {
            for k in 1..=steps {
                let name = format!("alpha{k}");
                let space = ParamSpace::new([name.clone()])?;
                let next = mann_step(op, &u.with_space(&space)?, &ControlParam::symbol(&name))?;
                let e = at_step(k, error_functional(&next, cfg, efc))?;
                let mut res = at_step(k, minimize_1d(&e, &name, opts))?;
                res.step = k;
                res.picard_value = Some(picard_value(&e, &[(&name, 1)], opts)?);
                u = freeze(&next, &res.rational_bindings())?;
                results.push(res);
            }
        }
        ProcedureKind::Ishikawa => {
            for k in 1..=steps {
                let (a, b) = (format!("alpha{k}"), format!("beta{k}"));
                let space = ParamSpace::new([a.clone(), b.clone()])?;
                let (_, next) =
                    ishikawa_step(op, &u.with_space(&space)?, &ControlParam::symbol(&a), &ControlParam::symbol(&b))?;
                let e = at_step(k, error_functional(&next, cfg, efc))?;
                let mut res = at_step(k, minimize_2d(&e, (&a, &b), opts))?;
                res.step = k;
                res.picard_value = Some(picard_value(&e, &[(&a, 1), (&b, 0)], opts)?);
                u = freeze(&next, &res.rational_bindings())?;
                results.push(res);
            }
        }
        ProcedureKind::Krasnoselskii | ProcedureKind::HybridPk => {
            let (name, reduces_at) = match kind {
                ProcedureKind::Krasnoselskii => ("alpha", 1),
                _ => ("lambda", 0),
            };
            let space = ParamSpace::new([name])?;
            let sym = ControlParam::symbol(name);
            let mut v = u.with_space(&space)?;
            for _ in 0..steps {
                v = match kind {
                    ProcedureKind::Krasnoselskii => mann_step(op, &v, &sym)?,
                    _ => hybrid_pk_step(op, &v, &sym)?.1,
                };
            }
            let e = at_step(steps, error_functional(&v, cfg, efc))?;
            let mut res = at_step(steps, minimize_1d(&e, name, opts))?;
            res.step = steps;
            res.picard_value = Some(picard_value(&e, &[(name, reduces_at)], opts)?);
            results.push(res);
        }
    }
    Ok(results)
}

/// A numeric procedure specification carrying the optimized values.
pub fn fixed_spec(kind: ProcedureKind, results: &[OptimizationResult]) -> Result<ProcedureSpec> {
    let value = |r: &OptimizationResult, name: &str| -> Result<ControlParam> {
        r.binding(name)
            .map(|b| ControlParam::Value(b.rational.clone()))
            .ok_or_else(|| Error::UnboundParam(name.to_string()))
    };
    Ok(match kind {
        ProcedureKind::Picard => ProcedureSpec::Picard,
        ProcedureKind::Mann => ProcedureSpec::Mann {
            alpha: results.iter().map(|r| value(r, &format!("alpha{}", r.step))).collect::<Result<_>>()?,
        },
        ProcedureKind::Ishikawa => ProcedureSpec::Ishikawa {
            alpha: results.iter().map(|r| value(r, &format!("alpha{}", r.step))).collect::<Result<_>>()?,
            beta: results.iter().map(|r| value(r, &format!("beta{}", r.step))).collect::<Result<_>>()?,
        },
        ProcedureKind::Krasnoselskii => {
            let r = results.first().ok_or_else(|| Error::UnboundParam("alpha".into()))?;
            ProcedureSpec::Krasnoselskii { alpha: value(r, "alpha")? }
        }
        ProcedureKind::HybridPk => {
            let r = results.first().ok_or_else(|| Error::UnboundParam("lambda".into()))?;
            ProcedureSpec::HybridPk { lambda: value(r, "lambda")? }
        }
    })
}

/// `E` of a fully numeric iterate.
pub fn functional_value(
    u: &Field,
    cfg: &ProblemConfig,
    efc: &ErrorFunctionalConfig,
    opts: &MinimizerOptions,
) -> Result<Real> {
    error_functional(u, cfg, efc)?.eval(&BTreeMap::new(), opts.precision)
}
