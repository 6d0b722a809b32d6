use osax::data::generate_control_chart;
use osax::experiments::{run_breakpoint_stage, test_error, train_error};
use osax::*;

fn euclid_loo_error(d: &Dataset) -> f64 {
    let s = d.series();
    let mut misses = 0;
    for i in 0..s.len() {
        let mut best = (usize::MAX, f64::INFINITY);
        for j in 0..s.len() {
            if i == j {
                continue;
            }
            let dist: f64 = s[i]
                .values()
                .iter()
                .zip(s[j].values())
                .map(|(a, b)| (a - b).powi(2))
                .sum();
            if dist < best.1 {
                best = (j, dist);
            }
        }
        if d.labels()[best.0] != d.labels()[i] {
            misses += 1;
        }
    }
    misses as f64 / s.len() as f64
}

fn spec(families: Vec<ShapeFamily>, noise: f64, seed: u64) -> SynthSpec {
    SynthSpec {
        name: "s".into(),
        families,
        count: 40,
        length: 48,
        noise,
        variation: 0.0,
        seed,
    }
}

#[test]
fn noiseless_families_are_separable() {
    let d = generate_synthetic(&spec(
        vec![ShapeFamily::Cyclic, ShapeFamily::IncreasingTrend],
        0.0,
        1,
    ))
    .unwrap();
    assert_eq!(euclid_loo_error(&d), 0.0);
}

#[test]
fn heavy_noise_approaches_chance() {
    // two classes, shapes buried under sd-50 noise: 1-NN error should hover near 1/2
    let mean: f64 = (0..20)
        .map(|seed| {
            let d = generate_synthetic(&spec(
                vec![ShapeFamily::Cyclic, ShapeFamily::Flat],
                50.0,
                seed,
            ))
            .unwrap();
            euclid_loo_error(&d)
        })
        .sum::<f64>()
        / 20.0;
    assert!((mean - 0.5).abs() < 0.1, "mean error {mean}");
}

#[test]
fn comparison_from_files_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let train = generate_control_chart("cc", 24, 32, 1).unwrap();
    let test = generate_control_chart("cc", 18, 32, 2).unwrap();
    write_ucr(&train, &root.join("cc/cc_TRAIN")).unwrap();
    write_ucr(&test, &root.join("cc/cc_TEST")).unwrap();

    let cfg = ExperimentConfig {
        datasets: vec!["cc".into()],
        data_root: root.to_path_buf(),
        alphabets: vec![3, 6],
        seeds: vec![4, 5],
        one_step_generations: 8,
        two_step_generations: [4, 4],
        ..Default::default()
    };
    let report = run_comparison(&cfg).unwrap();
    assert_eq!(report.rows().len(), 2 * 2 * 3);
    let (tr, te) = DatasetRegistry::open(root).unwrap().load("cc").unwrap();
    for row in report.rows() {
        assert_eq!(row.gap, row.test_error - row.train_error);
        assert!((0.0..=1.0).contains(&row.train_error) && (0.0..=1.0).contains(&row.test_error));
        let params = RepresentationParams::new(
            Alphabet::new(row.alpha).unwrap(),
            row.segments,
            Breakpoints::new(row.cuts.clone()).unwrap(),
            WeightVector::new(row.weights.clone()).unwrap(),
        )
        .unwrap();
        assert_eq!(train_error(&tr, &params).unwrap(), row.train_error);
        assert_eq!(
            test_error(&tr, &te, &params, EvalMode::Holdout).unwrap(),
            row.test_error
        );
        match row.method {
            Method::Baseline => assert_eq!(row.evaluations, 0),
            _ => assert_eq!(row.evaluations, 12 * 8),
        }
    }
    for alpha in [3, 6] {
        let base: Vec<_> = report
            .rows()
            .iter()
            .filter(|r| r.method == Method::Baseline && r.alpha == alpha)
            .map(|r| (r.train_error, r.test_error))
            .collect();
        assert!(base.windows(2).all(|w| w[0] == w[1]));
    }

    report.write_outputs(&root.join("out")).unwrap();
    for f in ["report.csv", "report.json", "plots/cc.svg", "plots/cc.csv"] {
        assert!(root.join("out").join(f).is_file(), "{f} missing");
    }
}

#[test]
fn missing_dataset_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        datasets: vec!["FaceFour".into()],
        data_root: dir.path().to_path_buf(),
        ..Default::default()
    };
    match run_comparison(&cfg) {
        Err(Error::Io { path, .. }) => assert!(path.ends_with("FaceFour/FaceFour_TRAIN")),
        other => panic!("expected an I/O error, got {other:?}"),
    }
    let unknown = ExperimentConfig {
        datasets: vec!["NoSuchSet".into()],
        data_root: dir.path().to_path_buf(),
        ..Default::default()
    };
    assert!(matches!(
        run_comparison(&unknown),
        Err(Error::UnknownDataset(_))
    ));
}

#[test]
fn loo_mode_scores_the_test_split_alone() {
    let train = generate_control_chart("cc", 24, 32, 1).unwrap();
    let test = generate_control_chart("cc", 18, 32, 2).unwrap();
    let cfg = ExperimentConfig {
        one_step_generations: 6,
        two_step_generations: [3, 3],
        ..Default::default()
    };
    let a = Alphabet::new(5).unwrap();
    let stage = run_breakpoint_stage(&train, &cfg, a, 4, 9).unwrap();
    let loo = test_error(&train, &test, &stage.params, EvalMode::Loo).unwrap();
    assert_eq!(loo, train_error(&test, &stage.params).unwrap());
}

#[test]
fn bundled_standin_matches_generator() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let (train, test) = DatasetRegistry::open(&root)
        .unwrap()
        .load("synthetic_control_standin")
        .unwrap();
    let (want_train, want_test) = synthetic_control_standin();
    assert_eq!(train.series(), want_train.series());
    assert_eq!(test.series(), want_test.series());
    assert_eq!(train.class_count(), 6);
}
