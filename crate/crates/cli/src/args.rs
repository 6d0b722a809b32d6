use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use osax::{EvalMode, ExperimentConfig, Method};

#[derive(Debug, Parser)]
#[command(
    name = "osax",
    version,
    about = "Optimize SAX breakpoints and segment weights with differential evolution"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode one series as a symbolic word.
    Encode(EncodeArgs),
    /// Optimize one dataset with one method and print the learned parameters.
    Optimize(OptimizeArgs),
    /// Run the one-step / two-step / baseline comparison and write reports.
    Compare(CompareArgs),
    /// Score Gaussian SAX with unit weights.
    Baseline(BaselineArgs),
    /// Write synthetic UCR-format train/test files.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Holdout,
    Loo,
}

impl From<ModeArg> for EvalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Holdout => EvalMode::Holdout,
            ModeArg::Loo => EvalMode::Loo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    OneStep,
    TwoStep,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::OneStep => Method::OneStep,
            MethodArg::TwoStep => Method::TwoStep,
        }
    }
}

/// Overrides for every experiment config key.
#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentFlags {
    /// Directory with UCR datasets (`<root>/<NAME>/<NAME>_TRAIN`, `_TEST`) and optional registry.toml.
    #[arg(long)]
    pub data_root: Option<PathBuf>,
    /// Alphabet sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<usize>,
    /// PAA segments for every dataset (default: round(n/8), at least 2).
    #[arg(long)]
    pub segments: Option<usize>,
    /// Per-dataset segment count, `NAME=N`; repeatable.
    #[arg(long = "dataset-segments", value_parser = parse_named_count)]
    pub dataset_segments: Vec<(String, usize)>,
    /// DE seeds, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub seed: Vec<u64>,
    /// Test-split scoring: nearest training series, or leave-one-out within the test split.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub popsize: Option<usize>,
    /// Differentiation constant F.
    #[arg(long)]
    pub mutation: Option<f64>,
    /// Crossover constant Cr.
    #[arg(long)]
    pub crossover: Option<f64>,
    #[arg(long)]
    pub one_step_generations: Option<usize>,
    /// Step-1 and step-2 generations, `A,B`.
    #[arg(long, value_parser = parse_pair::<usize>)]
    pub two_step_generations: Option<(usize, usize)>,
    /// Early-stopping cap on the one-step budget (two-step stages get half each).
    #[arg(long)]
    pub max_generations: Option<usize>,
    /// Breakpoint search range, `LO,HI`.
    #[arg(long, value_parser = parse_pair::<f64>, allow_hyphen_values = true)]
    pub breakpoint_bounds: Option<(f64, f64)>,
    /// Weight search range, `LO,HI`.
    #[arg(long, value_parser = parse_pair::<f64>)]
    pub weight_bounds: Option<(f64, f64)>,
    /// Run independent cells in parallel.
    #[arg(long)]
    pub parallel: Option<bool>,
}

fn parse_named_count(s: &str) -> Result<(String, usize), String> {
    let (name, n) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=N, got `{s}`"))?;
    let n = n
        .parse()
        .map_err(|e| format!("bad segment count in `{s}`: {e}"))?;
    Ok((name.to_owned(), n))
}

fn parse_pair<T>(s: &str) -> Result<(T, T), String>
where
    T: std::str::FromStr + Clone + Send + Sync + 'static,
    T::Err: std::fmt::Display,
{
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected A,B, got `{s}`"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<T>()
            .map_err(|e| format!("bad value `{v}`: {e}"))
    };
    Ok((parse(a)?, parse(b)?))
}

impl ExperimentFlags {
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(root) = &self.data_root {
            cfg.data_root = root.clone();
        }
        if !self.alpha.is_empty() {
            cfg.alphabets = self.alpha.clone();
        }
        if let Some(n) = self.segments {
            cfg.segments = Some(n);
        }
        for (name, n) in &self.dataset_segments {
            cfg.segments_per_dataset.insert(name.clone(), *n);
        }
        if !self.seed.is_empty() {
            cfg.seeds = self.seed.clone();
        }
        if let Some(m) = self.mode {
            cfg.mode = m.into();
        }
        if let Some(p) = self.popsize {
            cfg.popsize = p;
        }
        if let Some(f) = self.mutation {
            cfg.mutation = f;
        }
        if let Some(c) = self.crossover {
            cfg.crossover = c;
        }
        if let Some(g) = self.one_step_generations {
            cfg.one_step_generations = g;
        }
        if let Some((a, b)) = self.two_step_generations {
            cfg.two_step_generations = [a, b];
        }
        if let Some(m) = self.max_generations {
            cfg.max_generations = Some(m);
        }
        if let Some(b) = self.breakpoint_bounds {
            cfg.breakpoint_bounds = b;
        }
        if let Some(b) = self.weight_bounds {
            cfg.weight_bounds = b;
        }
        if let Some(p) = self.parallel {
            cfg.parallel = p;
        }
    }
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// Series values, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "file",
        required_unless_present = "file"
    )]
    pub values: Vec<f64>,
    /// UCR file to read the series from.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Zero-based row in `--file`.
    #[arg(long, default_value_t = 0)]
    pub row: usize,
    #[arg(long, default_value_t = 3)]
    pub alpha: usize,
    /// PAA segments (default: series length).
    #[arg(long)]
    pub segments: Option<usize>,
    /// Custom breakpoints instead of Gaussian ones, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub cuts: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub dataset: String,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Write the learned parameters to `<out>/params.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub flags: ExperimentFlags,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// TOML experiment config; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Dataset names, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub datasets: Vec<String>,
    /// Output directory for report.csv, report.json and plots/.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    #[command(flatten)]
    pub flags: ExperimentFlags,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    /// Dataset names, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub datasets: Vec<String>,
    /// Write `<out>/baseline.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub flags: ExperimentFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Classic six-pattern control-chart generator.
    ControlChart,
    /// Unit-amplitude shape families with Gaussian noise.
    Shapes,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Data root; files go to `<out>/<name>/<name>_{TRAIN,TEST}`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "synthetic_control_standin")]
    pub name: String,
    #[arg(long, value_enum, default_value_t = Preset::ControlChart)]
    pub preset: Preset,
    /// Shape families for `--preset shapes`, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "flat,cyclic,increasing,decreasing,upward-shift,downward-shift"
    )]
    pub families: Vec<String>,
    /// Training series.
    #[arg(long, default_value_t = 60)]
    pub count: usize,
    /// Test series.
    #[arg(long, default_value_t = 60)]
    pub test_count: usize,
    #[arg(long, default_value_t = 60)]
    pub length: usize,
    /// Noise standard deviation (shapes preset).
    #[arg(long, default_value_t = 0.5)]
    pub noise: f64,
    /// Shape parameter jitter in [0, 1] (shapes preset).
    #[arg(long, default_value_t = 0.5)]
    pub variation: f64,
    /// Train split seed; the test split uses seed + 1.
    #[arg(long, default_value_t = 2013)]
    pub seed: u64,
}
