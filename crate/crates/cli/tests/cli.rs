use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use owct_cli::{read_csv, HEADER};

fn owct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_owct"))
        .args(args)
        .output()
        .expect("spawn owct")
}

fn ok(args: &[&str]) -> Vec<u8> {
    let out = owct(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for f in [&a, &b] {
        ok(&[
            "gen",
            "--model",
            "cos",
            "--n",
            "2",
            "--m",
            "2",
            "--seed",
            "7",
            "--out",
            p(f),
        ]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read(&a).unwrap(),
        ok(&["gen", "--model", "cos", "--n", "2", "--m", "2", "--seed", "7"])
    );
}

#[test]
fn coflow_demands_are_integers() {
    let text = String::from_utf8(ok(&[
        "gen", "--model", "coflow", "--n", "4", "--m", "3", "--seed", "1",
    ]))
    .unwrap();
    assert!(text.starts_with("COFLOW"));
    assert!(!text.contains('/') && !text.contains('.'));
}

#[test]
fn empty_instance_list_gives_header_only() {
    let out = ok(&["run", "--model", "cos"]);
    assert_eq!(
        String::from_utf8(out).unwrap(),
        format!("{}\n", HEADER.join(","))
    );
}

#[test]
fn run_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    ok(&[
        "gen",
        "--model",
        "cos",
        "--n",
        "6",
        "--m",
        "2",
        "--seed",
        "11",
        "--count",
        "4",
        "--out",
        p(&inst),
    ]);
    let mut files: Vec<String> = fs::read_dir(&inst)
        .unwrap()
        .map(|e| e.unwrap().path().to_str().unwrap().to_string())
        .collect();
    files.sort();
    assert_eq!(files.len(), 4);

    let csv = dir.path().join("det.csv");
    let mut args = vec!["run", "--model", "cos", "--strict", "--out", p(&csv)];
    args.extend(files.iter().map(String::as_str));
    ok(&args);
    let rows = read_csv(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r.bound_pass, Some(true));
        assert_eq!(r.factor, 3.0);
        let opt = r.opt_upper.unwrap();
        assert!(r.objective <= r.bound.unwrap());
        assert!(r.objective >= opt);
    }

    let text = String::from_utf8(ok(&["report", p(&csv)])).unwrap();
    assert!(text.contains("== cos =="));
    assert!(
        text.contains("exact + dp, det grid: 4 rows, factor 3.0000"),
        "{text}"
    );
    assert!(text.contains("4 passed, 0 failed"));
}

#[test]
fn randomized_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt");
    ok(&[
        "gen",
        "--model",
        "coflow",
        "--n",
        "4",
        "--m",
        "2",
        "--seed",
        "3",
        "--out",
        p(&inst),
    ]);
    let args = [
        "run",
        "--model",
        "coflow",
        "--grid",
        "rand",
        "--trials",
        "5",
        "--seed",
        "40",
        "--no-timing",
        p(&inst),
    ];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    let rows = read_csv(first.as_slice()).unwrap();
    assert_eq!(
        rows.iter().map(|r| r.seed).collect::<Vec<_>>(),
        vec![40, 41, 42, 43, 44]
    );
    assert!(rows
        .iter()
        .all(|r| r.eta.is_some_and(|e| (0.5..1.0).contains(&e))));
}

#[test]
fn knap_takes_eps() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt");
    ok(&[
        "gen",
        "--model",
        "cos",
        "--n",
        "5",
        "--m",
        "2",
        "--seed",
        "9",
        "--out",
        p(&inst),
    ]);
    let rows = read_csv(
        ok(&[
            "run",
            "--model",
            "cos",
            "--muwp",
            "knap",
            "--eps",
            "1/2",
            p(&inst),
        ])
        .as_slice(),
    )
    .unwrap();
    assert_eq!(rows[0].muwp, "knap");
    // 2(1 + eps) + 1
    assert_eq!(rows[0].factor, 4.0);
    let out = owct(&[
        "run",
        "--model",
        "cos",
        "--muwp",
        "knap",
        "--eps",
        "0",
        p(&inst),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(owct(&["run", "--model", "nope"]).status.code(), Some(1));
    assert_eq!(owct(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(owct(&["report"]).status.code(), Some(1));
    assert_eq!(
        owct(&["gen", "--model", "cos", "--n", "2", "--m", "2", "--pmin", "5", "--pmax", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(owct(&["--help"]).status.code(), Some(0));
}

#[test]
fn incompatible_solver_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("c.txt");
    ok(&[
        "gen",
        "--model",
        "cluster",
        "--n",
        "3",
        "--m",
        "2",
        "--seed",
        "1",
        "--out",
        p(&inst),
    ]);
    let out = owct(&["run", "--model", "cluster", "--muwp", "lp2", p(&inst)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot be used"));
    ok(&[
        "run",
        "--model",
        "cluster",
        "--muwp",
        "cluster-lp",
        p(&inst),
    ]);
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "a,b\n1,2\n").unwrap();
    assert_eq!(owct(&["report", p(&bad)]).status.code(), Some(1));
    let inst = dir.path().join("bad.txt");
    fs::write(&inst, "COS 2\n").unwrap();
    assert_eq!(
        owct(&["run", "--model", "cos", p(&inst)]).status.code(),
        Some(1)
    );
}

#[test]
fn oracle_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("two.txt");
    fs::write(&inst, "COS 2 2\n1 2\n0 0\n1 2\n3 1\n").unwrap();
    let text = String::from_utf8(ok(&["oracle", p(&inst), "--deadline", "2"])).unwrap();
    assert!(text.contains("optimum without releases 8 : 1 0"), "{text}");
}
