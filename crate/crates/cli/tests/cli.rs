use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn osax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osax"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn help_everywhere() {
    for sub in [
        None,
        Some("encode"),
        Some("optimize"),
        Some("compare"),
        Some("baseline"),
        Some("synth"),
    ] {
        let mut args: Vec<&str> = sub.into_iter().collect();
        args.push("--help");
        let out = osax(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(stdout(&out).contains("Usage"));
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(osax(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(osax(&["compare", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(
        osax(&["compare", "--two-step-generations", "50"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(osax(&[]).status.code(), Some(1));
}

#[test]
fn missing_config_names_the_file() {
    let out = osax(&["compare", "--config", "missing.cfg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("missing.cfg"));
}

#[test]
fn bad_config_key_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "popsize = 12\nfrobs = 3\n").unwrap();
    let out = osax(&["compare", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("frobs"), "{}", stderr(&out));
}

#[test]
fn unequal_budget_rejected() {
    let out = osax(&[
        "compare",
        "--one-step-generations",
        "100",
        "--two-step-generations",
        "40,50",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_toy_series() {
    // z = [-1.5275, -1.0911, ..., 1.5275]; pair means are +-1.3093, +-0.4364
    let out = osax(&[
        "encode",
        "--values",
        "1,2,3,4,5,6,7,8",
        "--alpha",
        "3",
        "--segments",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("paa: -1.3093 -0.4364 0.4364 1.3093"),
        "{text}"
    );
    assert!(text.contains("symbols: 0 0 2 2"));
    assert!(text.lines().any(|l| l == "word: aacc"));

    let out = osax(&[
        "encode",
        "--values",
        "1,2,3",
        "--segments",
        "2",
        "--cuts",
        "-0.5,0.5",
    ]);
    assert!(stdout(&out).contains("word: ac"));
}

#[test]
fn unknown_dataset_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = osax(&[
        "baseline",
        "--data-root",
        dir.path().to_str().unwrap(),
        "--datasets",
        "NoSuchSet",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("NoSuchSet"));
}

fn compare_once(root: &Path, out: &Path) -> Output {
    osax(&[
        "compare",
        "--data-root",
        root.to_str().unwrap(),
        "--datasets",
        "toy",
        "--alpha",
        "3,5",
        "--seed",
        "1,2",
        "--one-step-generations",
        "6",
        "--two-step-generations",
        "3,3",
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn synth_then_compare_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("data");
    let out = osax(&[
        "synth",
        "--out",
        root.to_str().unwrap(),
        "--name",
        "toy",
        "--preset",
        "shapes",
        "--count",
        "18",
        "--test-count",
        "12",
        "--length",
        "24",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(root.join("toy/toy_TRAIN").is_file());
    assert!(root.join("toy/toy_TEST").is_file());

    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let first = compare_once(&root, &a);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    assert!(stdout(&first).contains("mean gap"));
    assert_eq!(compare_once(&root, &b).status.code(), Some(0));
    let csv = fs::read(a.join("report.csv")).unwrap();
    assert_eq!(csv, fs::read(b.join("report.csv")).unwrap());
    // header + 2 alphabets x 2 seeds x 3 methods
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 13);
    assert!(a.join("report.json").is_file());
    assert!(a.join("plots/toy.svg").is_file());

    let opt = osax(&[
        "optimize",
        "--data-root",
        root.to_str().unwrap(),
        "--dataset",
        "toy",
        "--method",
        "one-step",
        "--alpha",
        "4",
        "--one-step-generations",
        "4",
        "--two-step-generations",
        "2,2",
        "--out",
        dir.path().join("opt").to_str().unwrap(),
    ]);
    assert_eq!(opt.status.code(), Some(0), "{}", stderr(&opt));
    assert!(stdout(&opt).contains("evaluations: 48"));
    let json = fs::read_to_string(dir.path().join("opt/params.json")).unwrap();
    assert!(json.contains("\"one-step\""));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["benchmarks.toml", "standin.toml"] {
        let cfg = osax::ExperimentConfig::from_file(&dir.join(name)).unwrap();
        cfg.validate().unwrap();
    }
    let full = osax::ExperimentConfig::from_file(&dir.join("benchmarks.toml")).unwrap();
    assert_eq!(
        full,
        osax::ExperimentConfig {
            datasets: full.datasets.clone(),
            ..Default::default()
        }
    );
}
