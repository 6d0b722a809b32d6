//! Breakpoint and segment-weight optimization for SAX time-series
//! representations.
//!
//! * [`sax`]: normalization, PAA, discretization with arbitrary cuts, and the
//!   MINDIST / weighted MINDIST lower-bounding distances.
//! * [`de`]: a seeded DE/rand/1/bin engine.
//! * [`knn`]: 1-NN leave-one-out and holdout error over symbolic words.
//! * [`experiments`]: the one-step and two-step optimizers, the Gaussian SAX
//!   baseline, and the train/test comparison.
//! * [`report`] and [`plot`]: CSV, JSON and SVG output.
//! * [`data`]: UCR flat files, synthetic datasets and the dataset registry.

pub mod data;
pub mod de;
pub mod error;
pub mod experiments;
pub mod knn;
pub mod plot;
pub mod report;
pub mod sax;

pub use data::{
    generate_synthetic, parse_ucr, synthetic_control_standin, write_ucr, DatasetRegistry,
    ShapeFamily, SynthSpec,
};
pub use de::{evolve, Candidate, DeConfig, Evolution, FitnessFunction};
pub use error::{Error, Result};
pub use experiments::{
    run_baseline_sax, run_comparison, run_comparison_on, run_one_step, run_two_step, EvalMode,
    ExperimentConfig, Method, Optimized, Split,
};
pub use knn::{encode_dataset, holdout_error, loo_error, Dataset, RepresentationParams};
pub use report::{ExperimentReport, ReportRow};
pub use sax::{
    build_dist_table, discretize, gaussian_breakpoints, mindist, paa, weighted_mindist, znormalize,
    Alphabet, Breakpoints, DistTable, Label, PaaVector, SymbolicWord, TimeSeries, WeightVector,
};
