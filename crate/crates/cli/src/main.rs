mod args;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use osax::data::generate_control_chart;
use osax::experiments::test_error;
use osax::{
    discretize, gaussian_breakpoints, generate_synthetic, paa, parse_ucr, run_baseline_sax,
    run_comparison, run_one_step, run_two_step, write_ucr, znormalize, Alphabet, Breakpoints,
    DatasetRegistry, Error, ExperimentConfig, ExperimentReport, Method, ReportRow, ShapeFamily,
    SynthSpec, TimeSeries,
};

use args::{BaselineArgs, Cli, Command, CompareArgs, EncodeArgs, OptimizeArgs, Preset, SynthArgs};

const USAGE_ERROR: u8 = 1;
const DATA_ERROR: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_ERROR),
            };
        }
    };
    let result = match cli.command {
        Command::Encode(a) => encode(a),
        Command::Optimize(a) => optimize(a),
        Command::Compare(a) => compare(a),
        Command::Baseline(a) => baseline(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(DATA_ERROR)
        }
    }
}

fn encode(a: EncodeArgs) -> osax::Result<()> {
    let series = match &a.file {
        Some(path) => {
            let data = parse_ucr(path)?;
            data.series().get(a.row).cloned().ok_or_else(|| {
                Error::InvalidArgument(format!("{} has no row {}", path.display(), a.row))
            })?
        }
        None => TimeSeries::new(a.values.clone(), None)?,
    };
    let cuts = if a.cuts.is_empty() {
        gaussian_breakpoints(Alphabet::new(a.alpha)?)
    } else {
        Breakpoints::new(a.cuts.clone())?
    };
    let segments = a.segments.unwrap_or(series.len());
    let z = znormalize(&series);
    let reduced = paa(&z, segments)?;
    let word = discretize(&reduced, &cuts);
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:.4}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("normalized: {}", fmt(z.values()));
    println!("paa: {}", fmt(reduced.means()));
    println!("cuts: {}", fmt(cuts.cuts()));
    println!(
        "symbols: {}",
        word.symbols()
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!("word: {}", word.to_letters());
    Ok(())
}

fn config_from(flags: &args::ExperimentFlags) -> osax::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    flags.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

fn optimize(a: OptimizeArgs) -> osax::Result<()> {
    let cfg = config_from(&a.flags)?;
    let (train, test) = DatasetRegistry::open(&cfg.data_root)?.load(&a.dataset)?;
    let alphabet = Alphabet::new(cfg.alphabets[0])?;
    let seed = cfg.seeds[0];
    let segments = cfg.segments_for(&a.dataset, train.series_length());
    let method = Method::from(a.method);
    let out = match method {
        Method::OneStep => run_one_step(&train, &cfg, alphabet, segments, seed)?,
        _ => run_two_step(&train, &cfg, alphabet, segments, seed)?,
    };
    let test_err = test_error(&train, &test, &out.params, cfg.mode)?;
    println!("dataset: {}", a.dataset);
    println!("method: {method}");
    println!(
        "alpha: {alphabet}  segments: {segments}  seed: {seed}  mode: {}",
        cfg.mode
    );
    println!("cuts: {:?}", out.params.cuts.cuts());
    println!("weights: {:?}", out.params.weights.as_slice());
    println!("train_error: {}", out.train_error);
    println!("test_error: {test_err}");
    println!("gap: {}", test_err - out.train_error);
    println!("evaluations: {}", out.evaluations);
    if let Some(dir) = a.out {
        let row = ReportRow::new(
            &a.dataset,
            method,
            seed,
            cfg.mode,
            &out.params,
            out.train_error,
            test_err,
            out.evaluations,
            out.trace.clone(),
        );
        let json = ExperimentReport::new(cfg.mode, vec![row]).to_json_string()?;
        write_text(&dir, "params.json", &json)?;
    }
    Ok(())
}

fn compare(a: CompareArgs) -> osax::Result<()> {
    let mut cfg = match &a.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    a.flags.apply(&mut cfg);
    if !a.datasets.is_empty() {
        cfg.datasets = a.datasets.clone();
    }
    cfg.validate()?;
    let report = run_comparison(&cfg)?;
    report.write_outputs(&a.out)?;

    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<28} {:>5} {:<9} {:>10} {:>10} {:>10}",
        "dataset", "alpha", "method", "train", "test", "gap"
    );
    for s in report.summary() {
        let _ = writeln!(
            text,
            "{:<28} {:>5} {:<9} {:>10.4} {:>10.4} {:>10.4}",
            s.dataset, s.alpha, s.method, s.train_error.mean, s.test_error.mean, s.gap.mean
        );
    }
    if let Some(o) = report.overfitting() {
        let _ = writeln!(
            text,
            "mean gap: one-step {:.4}, two-step {:.4} ({})",
            o.one_step_mean_gap,
            o.two_step_mean_gap,
            if o.one_step_gap_larger {
                "one-step overfits at least as much"
            } else {
                "two-step overfits more"
            }
        );
    }
    print!("{text}");
    println!(
        "mode: {}; reports written to {}",
        report.mode(),
        a.out.display()
    );
    Ok(())
}

fn baseline(a: BaselineArgs) -> osax::Result<()> {
    let cfg = config_from(&a.flags)?;
    let registry = DatasetRegistry::open(&cfg.data_root)?;
    let mut csv = String::from("dataset,alpha,segments,mode,train_error,test_error,gap\n");
    for name in &a.datasets {
        let (train, test) = registry.load(name)?;
        let segments = cfg.segments_for(name, train.series_length());
        for &alpha in &cfg.alphabets {
            let (tr, te) =
                run_baseline_sax(&train, &test, Alphabet::new(alpha)?, segments, cfg.mode)?;
            let _ = writeln!(
                csv,
                "{name},{alpha},{segments},{},{tr},{te},{}",
                cfg.mode,
                te - tr
            );
        }
    }
    print!("{csv}");
    if let Some(dir) = a.out {
        write_text(&dir, "baseline.csv", &csv)?;
    }
    Ok(())
}

fn write_text(dir: &Path, file: &str, text: &str) -> osax::Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let path = dir.join(file);
    fs::write(&path, text).map_err(|e| Error::Io { path, source: e })
}

fn synth(a: SynthArgs) -> osax::Result<()> {
    let make = |count: usize, seed: u64| match a.preset {
        Preset::ControlChart => generate_control_chart(&a.name, count, a.length, seed),
        Preset::Shapes => {
            let families = a
                .families
                .iter()
                .map(|f| f.parse::<ShapeFamily>())
                .collect::<osax::Result<Vec<_>>>()?;
            generate_synthetic(&SynthSpec {
                name: a.name.clone(),
                families,
                count,
                length: a.length,
                noise: a.noise,
                variation: a.variation,
                seed,
            })
        }
    };
    let train = make(a.count, a.seed)?;
    let test = make(a.test_count, a.seed.wrapping_add(1))?;
    let dir = a.out.join(&a.name);
    let train_path = dir.join(format!("{}_TRAIN", a.name));
    let test_path = dir.join(format!("{}_TEST", a.name));
    write_ucr(&train, &train_path)?;
    write_ucr(&test, &test_path)?;
    println!("{}", train_path.display());
    println!("{}", test_path.display());
    Ok(())
}
