//! One-step and two-step breakpoint/weight optimization and the train/test
//! comparison against Gaussian SAX.
//!
//! One-step runs a single DE over the genome `[cuts (α-1) | weights (N)]`.
//! Two-step first optimizes the cuts with unit weights, then freezes them and
//! optimizes the weights. Both minimize the leave-one-out 1-NN error on the
//! training split and spend the same number of fitness evaluations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::DatasetRegistry;
use crate::de::{evolve_with, DeConfig, EvolveOptions, FitnessFunction};
use crate::error::{Error, Result};
use crate::knn::{
    discretize_all, encode_dataset, holdout_error, loo_error, reduce_dataset, Dataset,
    RepresentationParams,
};
use crate::report::{ExperimentReport, ReportRow};
use crate::sax::{
    build_dist_table, gaussian_breakpoints, Alphabet, Breakpoints, DistTable, Label, PaaVector,
    SymbolicWord, WeightVector,
};

/// Minimum spacing kept between repaired breakpoints.
pub const MIN_CUT_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Baseline,
    OneStep,
    TwoStep,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Baseline, Method::OneStep, Method::TwoStep];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::OneStep => "one-step",
            Method::TwoStep => "two-step",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Method::Baseline),
            "one-step" => Ok(Method::OneStep),
            "two-step" => Ok(Method::TwoStep),
            other => Err(Error::invalid(format!("unknown method `{other}`"))),
        }
    }
}

/// How learned parameters are scored on the test split.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Each test series is labeled by its nearest training series.
    #[default]
    Holdout,
    /// Leave-one-out within the test split.
    Loo,
}

impl EvalMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalMode::Holdout => "holdout",
            EvalMode::Loo => "loo",
        }
    }
}

impl std::fmt::Display for EvalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EvalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "holdout" => Ok(EvalMode::Holdout),
            "loo" => Ok(EvalMode::Loo),
            other => Err(Error::invalid(format!(
                "unknown evaluation mode `{other}` (expected holdout or loo)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub datasets: Vec<String>,
    /// Directory holding UCR-format datasets and an optional `registry.toml`.
    pub data_root: PathBuf,
    pub alphabets: Vec<usize>,
    pub seeds: Vec<u64>,
    pub mode: EvalMode,
    /// Segment count for every dataset; falls back to `round(n / 8)`, at least 2.
    pub segments: Option<usize>,
    pub segments_per_dataset: BTreeMap<String, usize>,
    pub popsize: usize,
    pub mutation: f64,
    pub crossover: f64,
    pub one_step_generations: usize,
    pub two_step_generations: [usize; 2],
    /// Early-stopping cap on the one-step budget; two-step gets half per step.
    pub max_generations: Option<usize>,
    pub breakpoint_bounds: (f64, f64),
    pub weight_bounds: (f64, f64),
    /// Run independent (dataset, alphabet, seed) cells on the rayon pool.
    pub parallel: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            datasets: Vec::new(),
            data_root: PathBuf::from("data"),
            alphabets: vec![3, 10, 20],
            seeds: vec![1, 2, 3, 4, 5],
            mode: EvalMode::Holdout,
            segments: None,
            segments_per_dataset: BTreeMap::new(),
            popsize: 12,
            mutation: 0.9,
            crossover: 0.5,
            one_step_generations: 100,
            two_step_generations: [50, 50],
            max_generations: None,
            breakpoint_bounds: (-3.0, 3.0),
            weight_bounds: (0.01, 2.0),
            parallel: true,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let [a, b] = self.two_step_generations;
        if self.one_step_generations != a + b {
            return Err(Error::Config(format!(
                "one-step budget ({}) must equal the two-step budgets combined ({a} + {b})",
                self.one_step_generations
            )));
        }
        if a == 0 || b == 0 {
            return Err(Error::Config(
                "each two-step stage needs at least 1 generation".into(),
            ));
        }
        if let Some(m) = self.max_generations {
            if m < 2 || m % 2 != 0 {
                return Err(Error::Config(format!(
                    "max_generations must be an even number >= 2, got {m}"
                )));
            }
        }
        for &a in &self.alphabets {
            Alphabet::new(a)?;
        }
        if self.alphabets.is_empty() || self.seeds.is_empty() {
            return Err(Error::Config(
                "need at least one alphabet size and one seed".into(),
            ));
        }
        let (lo, hi) = self.breakpoint_bounds;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Config(format!("bad breakpoint bounds [{lo}, {hi}]")));
        }
        let (lo, hi) = self.weight_bounds;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(Error::Config(format!(
                "weight bounds must satisfy 0 < lo <= hi, got [{lo}, {hi}]"
            )));
        }
        if self.segments == Some(0) || self.segments_per_dataset.values().any(|&n| n == 0) {
            return Err(Error::Config("segment counts must be positive".into()));
        }
        DeConfig {
            popsize: self.popsize,
            mutation: self.mutation,
            crossover: self.crossover,
            generations: 1,
            seed: 0,
            bounds: vec![(0.0, 1.0)],
        }
        .validate()
    }

    /// `(one-step, [step 1, step 2])` generation counts after the early-stopping cap.
    pub fn budgets(&self) -> (usize, [usize; 2]) {
        match self.max_generations {
            Some(m) if m < self.one_step_generations => (m, [m / 2, m / 2]),
            _ => (self.one_step_generations, self.two_step_generations),
        }
    }

    pub fn segments_for(&self, dataset: &str, series_length: usize) -> usize {
        let n = self
            .segments_per_dataset
            .get(dataset)
            .copied()
            .or(self.segments)
            .unwrap_or_else(|| default_segments(series_length));
        n.min(series_length)
    }

    fn de(&self, generations: usize, seed: u64, bounds: Vec<(f64, f64)>) -> DeConfig {
        DeConfig {
            popsize: self.popsize,
            mutation: self.mutation,
            crossover: self.crossover,
            generations,
            seed,
            bounds,
        }
    }
}

pub fn default_segments(series_length: usize) -> usize {
    ((series_length as f64 / 8.0).round() as usize)
        .max(2)
        .min(series_length)
}

/// Seed of the weight stage of a two-step run started with `seed`.
pub fn weight_stage_seed(seed: u64) -> u64 {
    seed.wrapping_add(0x9E37_79B9_7F4A_7C15)
}

/// Sorts, clips into `[lo, hi]` and spreads cuts at least [`MIN_CUT_GAP`] apart.
pub fn repair_breakpoints(cuts: &mut [f64], lo: f64, hi: f64) {
    for c in cuts.iter_mut() {
        *c = c.clamp(lo, hi);
    }
    cuts.sort_by(f64::total_cmp);
    for i in 1..cuts.len() {
        if cuts[i] < cuts[i - 1] + MIN_CUT_GAP {
            cuts[i] = cuts[i - 1] + MIN_CUT_GAP;
        }
    }
    if let Some(last) = cuts.last_mut() {
        if *last > hi {
            *last = hi;
            for i in (0..cuts.len() - 1).rev() {
                if cuts[i] > cuts[i + 1] - MIN_CUT_GAP {
                    cuts[i] = cuts[i + 1] - MIN_CUT_GAP;
                }
            }
        }
    }
}

/// Splits a one-step genome into cuts and weights.
pub fn decode_genome(
    genome: &[f64],
    alphabet: Alphabet,
    segments: usize,
) -> Result<(Breakpoints, WeightVector)> {
    let k = alphabet.size() - 1;
    if genome.len() != k + segments {
        return Err(Error::invalid(format!(
            "genome of length {} does not hold {k} cuts and {segments} weights",
            genome.len()
        )));
    }
    Ok((
        Breakpoints::new(genome[..k].to_vec())?,
        WeightVector::new(genome[k..].to_vec())?,
    ))
}

enum Layout {
    Joint {
        cuts: usize,
    },
    CutsOnly {
        cuts: usize,
        weights: WeightVector,
    },
    WeightsOnly {
        words: Vec<SymbolicWord>,
        table: DistTable,
    },
}

/// Leave-one-out 1-NN error of a training split as a function of the genome.
pub struct OsaxFitness {
    reduced: Vec<PaaVector>,
    labels: Vec<Label>,
    layout: Layout,
    cut_bounds: (f64, f64),
    calls: AtomicUsize,
}

impl OsaxFitness {
    fn new(
        train: &Dataset,
        segments: usize,
        layout: Layout,
        cut_bounds: (f64, f64),
    ) -> Result<Self> {
        Ok(Self {
            reduced: reduce_dataset(train, segments)?,
            labels: train.labels().to_vec(),
            layout,
            cut_bounds,
            calls: AtomicUsize::new(0),
        })
    }

    /// Genome `[cuts | weights]`.
    pub fn joint(
        train: &Dataset,
        alphabet: Alphabet,
        segments: usize,
        cut_bounds: (f64, f64),
    ) -> Result<Self> {
        Self::new(
            train,
            segments,
            Layout::Joint {
                cuts: alphabet.size() - 1,
            },
            cut_bounds,
        )
    }

    /// Genome `[cuts]` with fixed weights.
    pub fn cuts_only(
        train: &Dataset,
        alphabet: Alphabet,
        weights: WeightVector,
        cut_bounds: (f64, f64),
    ) -> Result<Self> {
        let segments = weights.len();
        let layout = Layout::CutsOnly {
            cuts: alphabet.size() - 1,
            weights,
        };
        Self::new(train, segments, layout, cut_bounds)
    }

    /// Genome `[weights]` with fixed cuts.
    pub fn weights_only(train: &Dataset, cuts: &Breakpoints, segments: usize) -> Result<Self> {
        let reduced = reduce_dataset(train, segments)?;
        let words = discretize_all(&reduced, cuts);
        let table = build_dist_table(cuts);
        Ok(Self {
            reduced,
            labels: train.labels().to_vec(),
            layout: Layout::WeightsOnly { words, table },
            cut_bounds: (f64::NEG_INFINITY, f64::INFINITY),
            calls: AtomicUsize::new(0),
        })
    }

    /// Number of `evaluate` calls so far.
    pub fn evaluations(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    fn segments(&self) -> usize {
        self.reduced[0].segments()
    }

    fn error(&self, genome: &[f64]) -> Result<f64> {
        match &self.layout {
            Layout::Joint { cuts } => {
                let b = Breakpoints::new(genome[..*cuts].to_vec())?;
                let w = WeightVector::new(genome[*cuts..].to_vec())?;
                let words = discretize_all(&self.reduced, &b);
                loo_error(&words, &self.labels, &build_dist_table(&b), &w)
            }
            Layout::CutsOnly { weights, .. } => {
                let b = Breakpoints::new(genome.to_vec())?;
                let words = discretize_all(&self.reduced, &b);
                loo_error(&words, &self.labels, &build_dist_table(&b), weights)
            }
            Layout::WeightsOnly { words, table } => {
                let w = WeightVector::new(genome.to_vec())?;
                loo_error(words, &self.labels, table, &w)
            }
        }
    }
}

impl FitnessFunction for OsaxFitness {
    fn dimension(&self) -> usize {
        match &self.layout {
            Layout::Joint { cuts } => cuts + self.segments(),
            Layout::CutsOnly { cuts, .. } => *cuts,
            Layout::WeightsOnly { .. } => self.segments(),
        }
    }

    fn evaluate(&self, genome: &[f64]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        // repaired genomes always decode; anything else scores worst
        self.error(genome).unwrap_or(f64::INFINITY)
    }

    fn repair(&self, genome: &mut [f64]) {
        let (lo, hi) = self.cut_bounds;
        match &self.layout {
            Layout::Joint { cuts } => repair_breakpoints(&mut genome[..*cuts], lo, hi),
            Layout::CutsOnly { .. } => repair_breakpoints(genome, lo, hi),
            Layout::WeightsOnly { .. } => {}
        }
    }
}

/// Learned representation plus how it was found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimized {
    pub params: RepresentationParams,
    /// Leave-one-out error on the training split.
    pub train_error: f64,
    /// Best fitness after each generation; stages are concatenated for two-step.
    pub trace: Vec<f64>,
    /// Fitness evaluations spent, as counted by the fitness function.
    pub evaluations: usize,
}

pub fn run_one_step(
    train: &Dataset,
    cfg: &ExperimentConfig,
    alphabet: Alphabet,
    segments: usize,
    seed: u64,
) -> Result<Optimized> {
    check_segments(train, segments)?;
    let (generations, _) = cfg.budgets();
    let fitness = OsaxFitness::joint(train, alphabet, segments, cfg.breakpoint_bounds)?;
    let mut bounds = vec![cfg.breakpoint_bounds; alphabet.size() - 1];
    bounds.extend(std::iter::repeat_n(cfg.weight_bounds, segments));
    let run = evolve_with(
        &cfg.de(generations, seed, bounds),
        &fitness,
        &EvolveOptions::default(),
    )?;
    let (cuts, weights) = decode_genome(&run.best.genome, alphabet, segments)?;
    Ok(Optimized {
        params: RepresentationParams::new(alphabet, segments, cuts, weights)?,
        train_error: run.best.score(),
        trace: run.history,
        evaluations: fitness.evaluations(),
    })
}

/// First two-step stage: cuts only, unit weights.
pub fn run_breakpoint_stage(
    train: &Dataset,
    cfg: &ExperimentConfig,
    alphabet: Alphabet,
    segments: usize,
    seed: u64,
) -> Result<Optimized> {
    check_segments(train, segments)?;
    let (_, [generations, _]) = cfg.budgets();
    let unit = WeightVector::uniform(segments);
    let fitness = OsaxFitness::cuts_only(train, alphabet, unit.clone(), cfg.breakpoint_bounds)?;
    let bounds = vec![cfg.breakpoint_bounds; alphabet.size() - 1];
    let run = evolve_with(
        &cfg.de(generations, seed, bounds),
        &fitness,
        &EvolveOptions::default(),
    )?;
    Ok(Optimized {
        params: RepresentationParams::new(
            alphabet,
            segments,
            Breakpoints::new(run.best.genome.clone())?,
            unit,
        )?,
        train_error: run.best.score(),
        trace: run.history,
        evaluations: fitness.evaluations(),
    })
}

/// Second two-step stage: weights only, with the unit vector in the initial population.
pub fn run_weight_stage(
    train: &Dataset,
    cfg: &ExperimentConfig,
    cuts: &Breakpoints,
    segments: usize,
    seed: u64,
) -> Result<Optimized> {
    check_segments(train, segments)?;
    let (_, [_, generations]) = cfg.budgets();
    let fitness = OsaxFitness::weights_only(train, cuts, segments)?;
    let bounds = vec![cfg.weight_bounds; segments];
    let unit = vec![1.0f64.clamp(cfg.weight_bounds.0, cfg.weight_bounds.1); segments];
    let opts = EvolveOptions {
        injected: vec![unit],
        parallel: false,
    };
    let run = evolve_with(&cfg.de(generations, seed, bounds), &fitness, &opts)?;
    Ok(Optimized {
        params: RepresentationParams::new(
            cuts.alphabet(),
            segments,
            cuts.clone(),
            WeightVector::new(run.best.genome.clone())?,
        )?,
        train_error: run.best.score(),
        trace: run.history,
        evaluations: fitness.evaluations(),
    })
}

pub fn run_two_step(
    train: &Dataset,
    cfg: &ExperimentConfig,
    alphabet: Alphabet,
    segments: usize,
    seed: u64,
) -> Result<Optimized> {
    let first = run_breakpoint_stage(train, cfg, alphabet, segments, seed)?;
    let second = run_weight_stage(
        train,
        cfg,
        &first.params.cuts,
        segments,
        weight_stage_seed(seed),
    )?;
    let mut trace = first.trace;
    trace.extend(second.trace);
    Ok(Optimized {
        params: second.params,
        train_error: second.train_error,
        trace,
        evaluations: first.evaluations + second.evaluations,
    })
}

fn check_segments(train: &Dataset, segments: usize) -> Result<()> {
    let n = train.series_length();
    if segments == 0 || segments > n {
        return Err(Error::invalid(format!(
            "{segments} segments requested for series of length {n}"
        )));
    }
    Ok(())
}

pub fn train_error(train: &Dataset, params: &RepresentationParams) -> Result<f64> {
    let words = encode_dataset(train, params)?;
    loo_error(&words, train.labels(), &params.table(), &params.weights)
}

/// Error of `params` on the test split under `mode`.
pub fn test_error(
    train: &Dataset,
    test: &Dataset,
    params: &RepresentationParams,
    mode: EvalMode,
) -> Result<f64> {
    if train.series_length() != test.series_length() {
        return Err(Error::invalid(format!(
            "train series have length {}, test series {}",
            train.series_length(),
            test.series_length()
        )));
    }
    let table = params.table();
    let test_words = encode_dataset(test, params)?;
    match mode {
        EvalMode::Holdout => {
            let train_words = encode_dataset(train, params)?;
            holdout_error(
                &train_words,
                train.labels(),
                &test_words,
                test.labels(),
                &table,
                &params.weights,
            )
        }
        EvalMode::Loo => loo_error(&test_words, test.labels(), &table, &params.weights),
    }
}

pub fn baseline_params(alphabet: Alphabet, segments: usize) -> RepresentationParams {
    RepresentationParams {
        alphabet,
        segments,
        cuts: gaussian_breakpoints(alphabet),
        weights: WeightVector::uniform(segments),
    }
}

/// Gaussian cuts and unit weights: `(train_error, test_error)`.
pub fn run_baseline_sax(
    train: &Dataset,
    test: &Dataset,
    alphabet: Alphabet,
    segments: usize,
    mode: EvalMode,
) -> Result<(f64, f64)> {
    check_segments(train, segments)?;
    let params = baseline_params(alphabet, segments);
    Ok((
        train_error(train, &params)?,
        test_error(train, test, &params, mode)?,
    ))
}

/// A train/test pair under one name.
#[derive(Debug, Clone)]
pub struct Split {
    pub name: String,
    pub train: Dataset,
    pub test: Dataset,
}

pub fn run_comparison(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    if cfg.datasets.is_empty() {
        return Err(Error::Config("no datasets configured".into()));
    }
    let registry = DatasetRegistry::open(&cfg.data_root)?;
    let splits = cfg
        .datasets
        .iter()
        .map(|name| {
            let (train, test) = registry.load(name)?;
            Ok(Split {
                name: name.clone(),
                train,
                test,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    run_comparison_on(&splits, cfg)
}

struct Cell<'a> {
    split: &'a Split,
    alphabet: Alphabet,
    segments: usize,
    seed: u64,
}

/// Runs every (dataset, alphabet, seed) cell; rows come out in config order.
pub fn run_comparison_on(splits: &[Split], cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for split in splits {
        let segments = cfg.segments_for(&split.name, split.train.series_length());
        for &a in &cfg.alphabets {
            for &seed in &cfg.seeds {
                cells.push(Cell {
                    split,
                    alphabet: Alphabet::new(a)?,
                    segments,
                    seed,
                });
            }
        }
    }
    let run = |cell: &Cell| -> Result<Vec<ReportRow>> {
        log::info!(
            "{} alpha={} seed={} segments={}",
            cell.split.name,
            cell.alphabet,
            cell.seed,
            cell.segments
        );
        run_cell(cell, cfg)
    };
    let per_cell: Vec<Result<Vec<ReportRow>>> = if cfg.parallel {
        cells.par_iter().map(run).collect()
    } else {
        cells.iter().map(run).collect()
    };
    let mut rows = Vec::with_capacity(cells.len() * 3);
    for r in per_cell {
        rows.extend(r?);
    }
    Ok(ExperimentReport::new(cfg.mode, rows))
}

fn run_cell(cell: &Cell, cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let Split { name, train, test } = cell.split;
    let mut rows = Vec::with_capacity(3);
    let base = baseline_params(cell.alphabet, cell.segments);
    let (base_train, base_test) =
        run_baseline_sax(train, test, cell.alphabet, cell.segments, cfg.mode)?;
    rows.push(ReportRow::new(
        name,
        Method::Baseline,
        cell.seed,
        cfg.mode,
        &base,
        base_train,
        base_test,
        0,
        Vec::new(),
    ));
    for method in [Method::OneStep, Method::TwoStep] {
        let opt = match method {
            Method::OneStep => run_one_step(train, cfg, cell.alphabet, cell.segments, cell.seed)?,
            _ => run_two_step(train, cfg, cell.alphabet, cell.segments, cell.seed)?,
        };
        let test_err = test_error(train, test, &opt.params, cfg.mode)?;
        rows.push(ReportRow::new(
            name,
            method,
            cell.seed,
            cfg.mode,
            &opt.params,
            opt.train_error,
            test_err,
            opt.evaluations,
            opt.trace,
        ));
    }
    Ok(rows)
}
