use std::collections::BTreeMap;
use std::fs;

use blues_core::algebra::int;
use blues_core::experiment::{
    cmd_approx, cmd_errors, cmd_params, parse_fixed_params, resolve_procedure, ExperimentConfig, TGrid, CSV_HEADER,
};
use blues_core::model::MethodKind;
use blues_core::procedure::{run, ProcedureKind};

fn cfg(method: MethodKind, kind: ProcedureKind, n: usize) -> ExperimentConfig {
    ExperimentConfig { method, procedure: Some(kind), steps: n, ..Default::default() }
}

#[test]
fn params_report_for_mann_vim() {
    let report = cmd_params(&cfg(MethodKind::Vim, ProcedureKind::Mann, 3)).unwrap();
    let shown: Vec<&str> = report.steps.iter().map(|s| s.parameters[0].value_5dp.as_str()).collect();
    assert_eq!(shown, ["0.64286", "0.84990", "0.74308"]);
    assert_eq!(report.steps[0].parameters[0].value_12dp, "0.642857142857");
    assert!(report.not_worse_than_picard);
    let json = report.to_json().unwrap();
    let keys: Vec<usize> = ["\"method\"", "\"procedure\"", "\"a\"", "\"T\"", "\"n\"", "\"steps\"", "\"E_final\""]
        .iter()
        .map(|k| json.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]), "{json}");
}

#[test]
fn params_report_for_ishikawa_blues() {
    let report = cmd_params(&cfg(MethodKind::Blues, ProcedureKind::Ishikawa, 3)).unwrap();
    let get = |name: &str| {
        report.steps.iter().flat_map(|s| &s.parameters).find(|p| p.name == name).unwrap().value_5dp.clone()
    };
    assert_eq!([get("alpha1"), get("alpha2"), get("alpha3")], ["0.95312", "0.98052", "0.99276"]);
    assert_eq!([get("beta1"), get("beta2")], ["1.52507", "1.14221"]);
    assert!(report.not_worse_than_picard);
}

#[test]
fn fixed_unit_alpha_matches_picard() {
    let mut c = cfg(MethodKind::Vim, ProcedureKind::Mann, 1);
    c.fixed_params = Some(parse_fixed_params(r#"{"alpha1": "1"}"#).unwrap());
    let report = cmd_params(&c).unwrap();
    assert!(!report.optimized);
    assert_eq!(report.steps[0].parameters[0].rational, "1");
    assert_eq!(report.e_final, report.e_picard);
}

#[test]
fn every_optimized_procedure_beats_picard() {
    for method in MethodKind::ALL {
        for kind in [ProcedureKind::Mann, ProcedureKind::Krasnoselskii, ProcedureKind::HybridPk] {
            let report = cmd_params(&cfg(method, kind, 3)).unwrap();
            assert!(report.not_worse_than_picard, "{method}/{kind}");
        }
    }
}

#[test]
fn parameter_json_round_trips() {
    for kind in [ProcedureKind::Mann, ProcedureKind::HybridPk, ProcedureKind::Krasnoselskii] {
        let c = cfg(MethodKind::Blues, kind, 3);
        let report = cmd_params(&c).unwrap();
        let mut fixed = c.clone();
        fixed.fixed_params = Some(parse_fixed_params(&report.to_json().unwrap()).unwrap());
        let a = run(&resolve_procedure(&c, kind).unwrap(), c.method, &c.problem(), 3).unwrap();
        let b = run(&resolve_procedure(&fixed, kind).unwrap(), c.method, &c.problem(), 3).unwrap();
        assert_eq!(a.iterates, b.iterates, "{kind}");
        assert_eq!(cmd_approx(&c).unwrap(), cmd_approx(&fixed).unwrap());
    }
}

#[test]
fn csv_is_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = cfg(MethodKind::Vim, ProcedureKind::Picard, 3);
    c.t_grid = Some(TGrid::parse("0:2:5").unwrap());
    c.precision = 20;
    c.out_dir = Some(dir.path().join("a"));
    let first = cmd_errors(&c).unwrap();
    c.out_dir = Some(dir.path().join("b"));
    let second = cmd_errors(&c).unwrap();
    assert_eq!(first.len(), 1);
    assert_eq!(first[0].file_name().unwrap(), "vim_picard_n3.csv");
    let text = fs::read_to_string(&first[0]).unwrap();
    assert_eq!(text, fs::read_to_string(&second[0]).unwrap());

    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 6);
    let row0: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(row0[0], "0");
    assert_eq!(row0[1], row0[2]);
    assert!(row0[1].starts_with("3.678794411714423216"));
    assert_eq!(row0[3], "-inf");
    // t = 1: |e^{-2} − e^{-1}/3|
    let row: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(row[0], "1");
    let expect = ((-2f64).exp() - (-1f64).exp() / 3.0).abs().log10();
    assert!((row[3].parse::<f64>().unwrap() - expect).abs() < 1e-12);
}

#[test]
fn errors_default_to_all_comparison_procedures() {
    let dir = tempfile::tempdir().unwrap();
    let c = ExperimentConfig {
        method: MethodKind::Blues,
        t_grid: Some(TGrid::parse("0:1:3").unwrap()),
        out_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let names: Vec<String> =
        cmd_errors(&c).unwrap().iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert_eq!(names, ["blues_picard_n3.csv", "blues_mann_n3.csv", "blues_ishikawa_n3.csv", "blues_hybrid-pk_n3.csv"]);
}

#[test]
fn config_file_loads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(&path, "a = 3\nT = 1/2\nn = 2\nmethod = blues\nprocedure = hybrid\nt-grid = 0:1:11\n").unwrap();
    let c = ExperimentConfig::from_file(&path).unwrap();
    assert_eq!(c.a, int(3));
    assert_eq!(c.steps, 2);
    assert_eq!(c.procedure, Some(ProcedureKind::HybridPk));
    assert_eq!(c.grid().count, 11);
    let bad = BTreeMap::from([("t-grid".to_string(), "0:1:1".to_string())]);
    assert!(ExperimentConfig::default().apply(&bad).is_err());
}
