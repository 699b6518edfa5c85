use std::process::{Command as Proc, Output};

use epperturb_cli::args::{AxisSpec, Command, OrderSpec, RaySpec, WindowSpec};
use epperturb_cli::{command_from_report, parse_args, report, Format};
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Proc::new(env!("CARGO_BIN_EXE_epperturb")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn reals(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|z| z["re"].as_f64().unwrap()).collect()
}

#[test]
fn spectrum_on_the_four_level_path() {
    let r = json_of(&bin(&["spectrum", "--N", "4", "--t", "0.04"]));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "spectrum");
    let e = reals(&r["results"]["eigenvalues"]);
    for (x, w) in e.iter().zip([-0.6, -0.2, 0.2, 0.6]) {
        assert!((x - w).abs() < 1e-10);
    }
    assert!(r["results"]["eigenvalues"].as_array().unwrap().iter().all(|z| z["im"] == 0.0));
    assert_eq!(r["results"]["all_real"], true);
}

#[test]
fn perturb_three_levels() {
    let r = json_of(&bin(&["perturb", "--N", "3", "--t", "1e-4", "--order", "leading"]));
    let res = &r["results"];
    let want = [[-1.0, -0.5, 0.0], [2.0, 0.0, -0.5], [0.0, 2.0, 1.0]];
    for (i, row) in want.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            let x = res["W_over_lambda"][i][j]["re"].as_f64().unwrap();
            assert!((x - w).abs() < 1e-4, "({i},{j}) = {x}");
        }
    }
    let mut roots = reals(&res["roots"]);
    roots.sort_by(f64::total_cmp);
    for (x, w) in roots.iter().zip([-0.02, 0.0, 0.02]) {
        assert!((x - w).abs() < 1e-9);
    }
    assert_eq!(res["states"].as_array().unwrap().len(), 3);
    assert_eq!(res["leading"].as_array().unwrap().len(), 3);
}

#[test]
fn two_level_scan_csv() {
    let out = bin(&["scan", "--N", "2", "--axis", "a:-2:2:401"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().iter().collect::<Vec<_>>(), ["a", "label", "physical", "max_imag", "min_gap"]);
    let mut count = 0;
    for rec in rows.records() {
        let rec = rec.unwrap();
        let a: f64 = rec[0].parse().unwrap();
        assert_eq!(&rec[2] == "true", a.abs() < 1.0, "a = {a}");
        count += 1;
    }
    assert_eq!(count, 401);
}

#[test]
fn scan_is_identical_across_thread_counts() {
    let run = |threads: &str| {
        Proc::new(env!("CARGO_BIN_EXE_epperturb"))
            .args(["scan", "--N", "4", "--axis", "a:0:3:13", "--axis", "b:0:3:11"])
            .env("EPPERTURB_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(String::from_utf8_lossy(&one.stdout).lines().count(), 1 + 13 * 11);
    assert_eq!(run("many").status.code(), Some(2));
}

#[test]
fn every_command_succeeds() {
    let cases: &[&[&str]] = &[
        &["build", "--N", "5"],
        &["spectrum", "--N", "3", "--a", "0.5"],
        &["path", "--N", "6", "--t", "0.3"],
        &["jordan", "--N", "4"],
        &["perturb", "--N", "4", "--t", "0.01"],
        &["scan", "--N", "3", "--axis", "t:0.1:0.9:9", "--format", "json"],
        &["boundary", "--N", "2", "--ray", "a:0:2"],
        &["metric", "--N", "4", "--t", "0.3", "--kappa", "1,2,3,4"],
        &["pseudo", "--N", "2", "--a", "0.999", "--window", "-1:1:-1:1", "--res", "5", "--eps", "1e-2,1e-3"],
    ];
    for args in cases {
        let out = bin(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn numerical_failures_exit_with_one() {
    let cases: &[(&[&str], &str)] = &[
        (&["boundary", "--N", "4", "--ray", "t:0.5:0.001"], "NoSignChange"),
        (&["metric", "--N", "2", "--a", "1.5"], "NotPhysical"),
        (&["path", "--N", "4", "--t", "0.9", "--G", "0,1"], "PathOutOfRange"),
        (&["metric", "--N", "3", "--t", "0.5", "--kappa", "1,2"], "InvalidInput"),
        (&["jordan", "--N", "4", "--t", "0.3"], "NotSingleBlock"),
    ];
    for (args, name) in cases {
        let out = bin(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(name), "{args:?}: {err}");
        assert_eq!(err.trim().lines().count(), 1);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["spectrum", "--N", "1"],
        &["spectrum", "--N", "3", "--unknown", "1"],
        &["spectrum"],
        &["spectrum", "--N", "4", "--g", "1"],
        &["spectrum", "--N", "4", "--g", "1,1", "--t", "0.1"],
        &["spectrum", "--N", "2", "--b", "1"],
        &["spectrum", "--N", "2", "--format", "csv"],
        &["spectrum", "--N", "2", "--tol", "-1"],
        &["scan", "--N", "2", "--axis", "q:0:1:3"],
        &["scan", "--N", "2", "--axis", "a:0:1"],
        &["scan", "--N", "4", "--axis", "a:0:1:2", "--axis", "b:0:1:2", "--axis", "t:0:1:2"],
        &["boundary", "--N", "2"],
        &["pseudo", "--N", "2", "--window", "-1:1:-1:1", "--res", "1"],
        &["perturb", "--N", "3", "--order", "0"],
        &["bogus"],
    ];
    for args in cases {
        assert_eq!(bin(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(bin(&["scan", "--help"]).status.code(), Some(0));
}

#[test]
fn parsed_configurations() {
    let c = parse_args(["epperturb", "build", "--N", "5"]).unwrap();
    let Command::Build(m) = &c.command else { panic!() };
    assert_eq!((m.n, m.t, m.s, m.tol), (5, None, 0.0, 1e-10));
    assert_eq!(c.format, Format::Json);
    let r = report(&c.command).unwrap();
    assert_eq!(r["results"]["couplings"], serde_json::json!([2.0, 6f64.sqrt()]));

    let c = parse_args(["epperturb", "boundary", "--N", "3", "--ray", "a:0:2"]).unwrap();
    let Command::Boundary(b) = &c.command else { panic!() };
    assert_eq!(b.ray, RaySpec { name: "a".into(), from: 0.0, to: 2.0 });

    let c = parse_args([
        "epperturb", "pseudo", "--N", "2", "--a", "0.999", "--window", "-1:1:-1:1", "--res", "101", "--eps", "1e-2,1e-3",
    ])
    .unwrap();
    let Command::Pseudo(p) = &c.command else { panic!() };
    assert_eq!(p.window, WindowSpec { re_min: -1.0, re_max: 1.0, im_min: -1.0, im_max: 1.0 });
    assert_eq!((p.res, p.eps.clone(), p.model.a), (101, vec![1e-2, 1e-3], Some(0.999)));
    assert_eq!(c.format, Format::Csv);

    let c = parse_args(["epperturb", "scan", "--N", "2", "--axis", "a:-2:2:401"]).unwrap();
    let Command::Scan(s) = &c.command else { panic!() };
    assert_eq!(s.axis, vec![AxisSpec { name: "a".into(), lo: -2.0, hi: 2.0, count: 401 }]);

    let c = parse_args(["epperturb", "perturb", "--N", "3", "--order", "4"]).unwrap();
    let Command::Perturb(p) = &c.command else { panic!() };
    assert_eq!(p.order, OrderSpec::Terms(4));
}

#[test]
fn reports_replay_bit_identically() {
    let invocations: &[&[&str]] = &[
        &["build", "--N", "4", "--a", "0.3", "--b", "1.1"],
        &["spectrum", "--N", "5", "--t", "0.37", "--s", "-0.25"],
        &["path", "--N", "6", "--t", "0.123"],
        &["jordan", "--N", "5"],
        &["perturb", "--N", "4", "--t", "0.003", "--order", "3"],
        &["perturb", "--N", "2", "--g", "0.95", "--lambda", "0.1"],
        &["scan", "--N", "4", "--axis", "t:0.01:0.99:7", "--axis", "s:-1:1:3"],
        &["boundary", "--N", "3", "--t", "0.2", "--ray", "a:0:3"],
        &["metric", "--N", "3", "--t", "0.7", "--kappa", "1,0.5,2"],
        &["pseudo", "--N", "3", "--window", "-3:3:-1:1", "--res", "4", "--eps", "0.1"],
    ];
    for args in invocations {
        let out = bin(&[args, &["--format", "json"][..]].concat());
        let text = String::from_utf8(out.stdout.clone()).unwrap();
        let first = json_of(&out);
        let cmd = command_from_report(&first).unwrap();
        let again = report(&cmd).unwrap();
        assert_eq!(first["inputs"], again["inputs"], "{args:?}");
        assert_eq!(first["results"], again["results"], "{args:?}");
        let rendered = epperturb_cli::render(&cmd, &again, Format::Json).unwrap();
        assert_eq!(rendered, text, "{args:?}");
    }
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bin(&["spectrum", "--N", "2", "--t", "0.25", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let e = reals(&v["results"]["eigenvalues"]);
    assert!((e[0] + 0.5).abs() < 1e-12 && (e[1] - 0.5).abs() < 1e-12);
}
