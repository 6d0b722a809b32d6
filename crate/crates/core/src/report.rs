//! Experiment rows, seed aggregation and CSV/JSON/SVG output.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{EvalMode, Method};
use crate::knn::RepresentationParams;
use crate::plot;

pub const CSV_HEADER: [&str; 8] = [
    "dataset",
    "alpha",
    "method",
    "seed",
    "train_error",
    "test_error",
    "gap",
    "evaluations",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dataset: String,
    pub alpha: usize,
    pub method: Method,
    pub seed: u64,
    pub segments: usize,
    pub mode: EvalMode,
    pub train_error: f64,
    pub test_error: f64,
    /// `test_error - train_error`.
    pub gap: f64,
    pub evaluations: usize,
    pub cuts: Vec<f64>,
    pub weights: Vec<f64>,
    pub trace: Vec<f64>,
}

impl ReportRow {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dataset: &str,
        method: Method,
        seed: u64,
        mode: EvalMode,
        params: &RepresentationParams,
        train_error: f64,
        test_error: f64,
        evaluations: usize,
        trace: Vec<f64>,
    ) -> Self {
        Self {
            dataset: dataset.to_owned(),
            alpha: params.alphabet.size(),
            method,
            seed,
            segments: params.segments,
            mode,
            train_error,
            test_error,
            gap: test_error - train_error,
            evaluations,
            cuts: params.cuts.cuts().to_vec(),
            weights: params.weights.as_slice().to_vec(),
            trace,
        }
    }
}

/// Min/mean/max of one quantity over seeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Spread {
    fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut sum, mut n, mut min, mut max) = (0.0, 0usize, f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            sum += v;
            n += 1;
            min = min.min(v);
            max = max.max(v);
        }
        Self {
            mean: sum / n as f64,
            min,
            max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub alpha: usize,
    pub method: Method,
    pub seeds: usize,
    pub train_error: Spread,
    pub test_error: Spread,
    pub gap: Spread,
}

/// Mean overfitting gap of each optimized method over the whole report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverfitCheck {
    pub one_step_mean_gap: f64,
    pub two_step_mean_gap: f64,
    /// One-step generalizes no better than two-step.
    pub one_step_gap_larger: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    mode: EvalMode,
    rows: Vec<ReportRow>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    mode: EvalMode,
    rows: &'a [ReportRow],
    summary: Vec<SummaryRow>,
    overfitting: Option<OverfitCheck>,
}

impl ExperimentReport {
    pub fn new(mode: EvalMode, rows: Vec<ReportRow>) -> Self {
        Self { mode, rows }
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    /// Seed aggregates keyed by (dataset, alpha, method), in first-seen dataset order.
    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut order: Vec<&str> = Vec::new();
        let mut groups: BTreeMap<(usize, usize, Method), Vec<&ReportRow>> = BTreeMap::new();
        for r in &self.rows {
            let d = match order.iter().position(|&n| n == r.dataset) {
                Some(i) => i,
                None => {
                    order.push(&r.dataset);
                    order.len() - 1
                }
            };
            groups.entry((d, r.alpha, r.method)).or_default().push(r);
        }
        groups
            .into_iter()
            .map(|((d, alpha, method), rows)| SummaryRow {
                dataset: order[d].to_owned(),
                alpha,
                method,
                seeds: rows.len(),
                train_error: Spread::of(rows.iter().map(|r| r.train_error)),
                test_error: Spread::of(rows.iter().map(|r| r.test_error)),
                gap: Spread::of(rows.iter().map(|r| r.gap)),
            })
            .collect()
    }

    pub fn overfitting(&self) -> Option<OverfitCheck> {
        let mean_gap = |m: Method| {
            let gaps: Vec<f64> = self
                .rows
                .iter()
                .filter(|r| r.method == m)
                .map(|r| r.gap)
                .collect();
            (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64)
        };
        let one = mean_gap(Method::OneStep)?;
        let two = mean_gap(Method::TwoStep)?;
        Some(OverfitCheck {
            one_step_mean_gap: one,
            two_step_mean_gap: two,
            one_step_gap_larger: one >= two,
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let ser = |e: csv::Error| Error::Serialize(e.to_string());
        w.write_record(CSV_HEADER).map_err(ser)?;
        for r in &self.rows {
            w.write_record([
                r.dataset.clone(),
                r.alpha.to_string(),
                r.method.to_string(),
                r.seed.to_string(),
                r.train_error.to_string(),
                r.test_error.to_string(),
                r.gap.to_string(),
                r.evaluations.to_string(),
            ])
            .map_err(ser)?;
        }
        w.flush().map_err(|e| Error::Serialize(e.to_string()))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Serialize(e.to_string()))
    }

    pub fn to_json_string(&self) -> Result<String> {
        serde_json::to_string_pretty(&JsonReport {
            mode: self.mode,
            rows: &self.rows,
            summary: self.summary(),
            overfitting: self.overfitting(),
        })
        .map_err(|e| Error::Serialize(e.to_string()))
    }

    /// Writes `report.csv`, `report.json` and `plots/<dataset>.{csv,svg}` under `dir`.
    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        let plots = dir.join("plots");
        fs::create_dir_all(&plots).map_err(|e| Error::io(&plots, e))?;
        write_file(&dir.join("report.csv"), self.to_csv_string()?.as_bytes())?;
        write_file(&dir.join("report.json"), self.to_json_string()?.as_bytes())?;
        let summary = self.summary();
        let mut datasets: Vec<&str> = Vec::new();
        for s in &summary {
            if !datasets.contains(&s.dataset.as_str()) {
                datasets.push(&s.dataset);
            }
        }
        for d in datasets {
            let rows: Vec<&SummaryRow> = summary.iter().filter(|s| s.dataset == d).collect();
            let stem = sanitize(d);
            write_file(
                &plots.join(format!("{stem}.csv")),
                plot::bar_csv(&rows).as_bytes(),
            )?;
            write_file(
                &plots.join(format!("{stem}.svg")),
                plot::bar_svg(d, &rows).as_bytes(),
            )?;
        }
        Ok(())
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}
