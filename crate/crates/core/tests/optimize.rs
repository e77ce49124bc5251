use std::collections::BTreeMap;

use blues_core::algebra::{int, ratio, Field, ParamSpace};
use blues_core::model::{
    exact_solution, initial_field_in, pde_residual, picard_closed_form, Method, MethodKind, ProblemConfig,
};
use blues_core::numeric::{Precision, Real};
use blues_core::optimize::{
    error_functional, greedy_schedule, minimize_1d, minimize_2d, ErrorFunctionalConfig, ErrorPolynomial,
    MinimizerOptions, SearchBox,
};
use blues_core::procedure::{ishikawa_step, mann_step, ControlParam, ProcedureKind};
use blues_core::quadrature;
use blues_core::Error;

fn first_step_e(method: MethodKind, names: &[&str]) -> ErrorPolynomial {
    let cfg = ProblemConfig::default();
    let m = Method::new(method, cfg.clone());
    let space = ParamSpace::new(names.iter().copied()).unwrap();
    let u0 = m.start(&space);
    let u1 = mann_step(|f: &Field| m.apply(f), &u0, &ControlParam::symbol(names[0])).unwrap();
    error_functional(&u1, &cfg, &ErrorFunctionalConfig::default()).unwrap()
}

fn box02() -> MinimizerOptions {
    MinimizerOptions { search_box: SearchBox::new(int(0), int(2)).unwrap(), ..Default::default() }
}

#[test]
fn mann_first_step_minimizers() {
    let res = minimize_1d(&first_step_e(MethodKind::Vim, &["alpha"]), "alpha", &box02()).unwrap();
    let b = res.binding("alpha").unwrap();
    assert_eq!(b.rational, ratio(9, 14));
    assert!(!res.degenerate);
    let closed = res.closed_form.as_ref().expect("quadratic");
    assert!((closed - &b.value).abs().to_f64() < 1e-12);

    let res = minimize_1d(&first_step_e(MethodKind::Blues, &["alpha"]), "alpha", &box02()).unwrap();
    assert!((res.binding("alpha").unwrap().value.to_f64() - 1.2118).abs() < 1e-4);
}

#[test]
fn functional_of_known_iterates() {
    let cfg = ProblemConfig::default();
    let efc = ErrorFunctionalConfig::default();
    let u = picard_closed_form(MethodKind::Vim, &cfg, 3);
    let e = error_functional(&u, &cfg, &efc).unwrap();
    let v = e.eval(&BTreeMap::new(), Precision::default()).unwrap();
    let expect = Real::from_rational(&ratio(1, 252), Precision::default());
    assert!((&v - &expect).abs().to_f64() < 1e-45);
    assert!(error_functional(&exact_solution(&cfg), &cfg, &efc).unwrap().is_zero());
}

#[test]
fn functional_matches_quadrature() {
    let cfg = ProblemConfig::default();
    for method in MethodKind::ALL {
        for horizon in [ratio(1, 2), int(1), int(2)] {
            let efc = ErrorFunctionalConfig::new(horizon.clone()).unwrap();
            let u = picard_closed_form(method, &cfg, 3);
            let e = error_functional(&u, &cfg, &efc).unwrap().eval(&BTreeMap::new(), Precision::default()).unwrap();
            let r = pde_residual(&u, &cfg);
            let t_end = Real::from_rational(&horizon, Precision::default()).to_f64();
            let q = quadrature::integrate(|t| r.eval_f64(0.0, t).unwrap().powi(2) / t_end, 0.0, t_end, 1e-13);
            let e = e.to_f64();
            assert!((e - q.value).abs() <= 1e-10 * q.abs_value, "{method} T={horizon}: {e} vs {}", q.value);
        }
    }
}

#[test]
fn constant_functional_is_degenerate() {
    // E built in a space with an extra symbol it never uses
    let e = first_step_e(MethodKind::Vim, &["alpha", "beta"]);
    assert_eq!(e.degree_in("beta").unwrap_or(0), 0);
    assert!(matches!(minimize_1d(&e, "beta", &box02()), Err(Error::NotUnivariate { .. })));

    let cfg = ProblemConfig::default();
    let efc = ErrorFunctionalConfig::default();
    let space = ParamSpace::new(["alpha"]).unwrap();
    let e = error_functional(&picard_closed_form(MethodKind::Vim, &cfg, 2).with_space(&space).unwrap(), &cfg, &efc)
        .unwrap();
    let res = minimize_1d(&e, "alpha", &box02()).unwrap();
    assert!(res.degenerate);
    assert_eq!(res.binding("alpha").unwrap().rational, int(0));

    let opts = MinimizerOptions::default();
    let e = first_step_e(MethodKind::Vim, &["alpha", "beta"]);
    let res = minimize_2d(&e, ("alpha", "beta"), &opts).unwrap();
    assert!(res.degenerate);
    assert_eq!(res.binding("alpha").unwrap().rational, ratio(9, 14));
    let beta = res.binding("beta").unwrap().rational.clone();
    assert!([ratio(-1, 2), int(1), ratio(5, 2)].contains(&beta), "beta = {beta}");
}

#[test]
fn ishikawa_first_step_vim() {
    let cfg = ProblemConfig::default();
    let m = Method::new(MethodKind::Vim, cfg.clone());
    let space = ParamSpace::new(["a1", "b1"]).unwrap();
    let (_, u1) = ishikawa_step(
        |f: &Field| m.apply(f),
        &initial_field_in(&space),
        &ControlParam::symbol("a1"),
        &ControlParam::symbol("b1"),
    )
    .unwrap();
    let e = error_functional(&u1, &cfg, &ErrorFunctionalConfig::default()).unwrap();
    assert!(e.degree_in("a1").unwrap() <= 2 && e.degree_in("b1").unwrap() <= 2);
    let res = minimize_2d(&e, ("a1", "b1"), &MinimizerOptions::default()).unwrap();
    assert!((res.binding("a1").unwrap().value.to_f64() - 0.94272).abs() < 1e-5);
    assert!((res.binding("b1").unwrap().value.to_f64() - 0.65972).abs() < 1e-5);
}

#[test]
fn optimum_never_worse_than_picard_point() {
    let cfg = ProblemConfig::default();
    let efc = ErrorFunctionalConfig::default();
    let opts = MinimizerOptions::default();
    for method in MethodKind::ALL {
        for kind in [ProcedureKind::Mann, ProcedureKind::Krasnoselskii, ProcedureKind::HybridPk] {
            for r in greedy_schedule(kind, method, &cfg, &efc, 3, &opts).unwrap() {
                let picard = r.picard_value.as_ref().unwrap();
                assert!(r.value <= *picard, "{method}/{kind} step {}", r.step);
                for b in &r.bindings {
                    let lo = Real::from_rational(&r.search_box.lo, opts.precision);
                    let hi = Real::from_rational(&r.search_box.hi, opts.precision);
                    assert!(b.value >= lo && b.value <= hi);
                    let gap = (&Real::from_rational(&b.rational, opts.precision) - &b.value).abs().to_f64();
                    assert!(gap < 1e-15);
                }
            }
        }
    }
}

#[test]
fn schedule_rejects_picard_and_zero_steps() {
    let cfg = ProblemConfig::default();
    let efc = ErrorFunctionalConfig::default();
    let opts = MinimizerOptions::default();
    assert!(matches!(
        greedy_schedule(ProcedureKind::Picard, MethodKind::Vim, &cfg, &efc, 3, &opts),
        Err(Error::InvalidProcedure(_))
    ));
    assert!(greedy_schedule(ProcedureKind::Mann, MethodKind::Vim, &cfg, &efc, 0, &opts).is_err());
    let empty = MinimizerOptions { search_box: SearchBox { lo: int(1), hi: int(0) }, ..Default::default() };
    let err = greedy_schedule(ProcedureKind::Mann, MethodKind::Vim, &cfg, &efc, 1, &empty).unwrap_err();
    assert!(matches!(err, Error::Step { step: 1, .. }), "{err}");
}
