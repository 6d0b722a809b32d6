//! One-step vs two-step on the bundled control-chart stand-in.

use osax::experiments::default_segments;
use osax::{
    run_baseline_sax, run_one_step, run_two_step, synthetic_control_standin, Alphabet, EvalMode,
    ExperimentConfig,
};

fn main() -> osax::Result<()> {
    let (train, test) = synthetic_control_standin();
    let cfg = ExperimentConfig::default();
    let segments = default_segments(train.series_length());
    for alpha in [3, 10, 20] {
        let a = Alphabet::new(alpha)?;
        let (bt, be) = run_baseline_sax(&train, &test, a, segments, EvalMode::Holdout)?;
        println!("alpha={alpha} baseline train={bt:.3} test={be:.3}");
        for seed in 1..=5 {
            let one = run_one_step(&train, &cfg, a, segments, seed)?;
            let two = run_two_step(&train, &cfg, a, segments, seed)?;
            let t1 = osax::experiments::test_error(&train, &test, &one.params, EvalMode::Holdout)?;
            let t2 = osax::experiments::test_error(&train, &test, &two.params, EvalMode::Holdout)?;
            println!(
                "  seed={seed} one-step {:.3}/{t1:.3}  two-step {:.3}/{t2:.3}",
                one.train_error, two.train_error
            );
        }
    }
    Ok(())
}
