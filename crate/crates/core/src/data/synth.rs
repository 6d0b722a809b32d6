//! Seeded synthetic datasets built from parameterized shape families.
//!
//! Shapes follow the six control-chart patterns (flat, cyclic, rising and
//! falling trend, upward and downward shift) on a unit amplitude, plus iid
//! Gaussian noise of standard deviation `noise`. `variation` in `[0, 1]`
//! jitters each series' amplitude, period and shift point; at zero every
//! member of a class has the same underlying shape.

use std::f64::consts::TAU;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knn::Dataset;
use crate::sax::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeFamily {
    Flat,
    Cyclic,
    IncreasingTrend,
    DecreasingTrend,
    UpwardShift,
    DownwardShift,
}

impl ShapeFamily {
    pub const ALL: [ShapeFamily; 6] = [
        ShapeFamily::Flat,
        ShapeFamily::Cyclic,
        ShapeFamily::IncreasingTrend,
        ShapeFamily::DecreasingTrend,
        ShapeFamily::UpwardShift,
        ShapeFamily::DownwardShift,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ShapeFamily::Flat => "flat",
            ShapeFamily::Cyclic => "cyclic",
            ShapeFamily::IncreasingTrend => "increasing",
            ShapeFamily::DecreasingTrend => "decreasing",
            ShapeFamily::UpwardShift => "upward-shift",
            ShapeFamily::DownwardShift => "downward-shift",
        }
    }

    fn sample<R: Rng>(self, length: usize, variation: f64, rng: &mut R) -> Vec<f64> {
        let mut jitter = |spread: f64| {
            if variation > 0.0 {
                1.0 + rng.random_range(-1.0..=1.0) * spread * variation
            } else {
                1.0
            }
        };
        let amplitude = jitter(0.5);
        let n = length as f64;
        match self {
            ShapeFamily::Flat => vec![0.0; length],
            ShapeFamily::Cyclic => {
                let period = n / 4.0 * jitter(0.4);
                (0..length)
                    .map(|t| amplitude * (TAU * t as f64 / period).sin())
                    .collect()
            }
            ShapeFamily::IncreasingTrend | ShapeFamily::DecreasingTrend => {
                let sign = if self == ShapeFamily::IncreasingTrend {
                    1.0
                } else {
                    -1.0
                };
                (0..length)
                    .map(|t| sign * amplitude * 2.0 * t as f64 / n)
                    .collect()
            }
            ShapeFamily::UpwardShift | ShapeFamily::DownwardShift => {
                let sign = if self == ShapeFamily::UpwardShift {
                    1.0
                } else {
                    -1.0
                };
                let at = (n / 2.0 * jitter(0.5)).round() as usize;
                (0..length)
                    .map(|t| if t >= at { sign * amplitude * 2.0 } else { 0.0 })
                    .collect()
            }
        }
    }
}

impl std::fmt::Display for ShapeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ShapeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ShapeFamily::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown shape family `{s}` (expected one of {})",
                    ShapeFamily::ALL.map(|f| f.as_str()).join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub name: String,
    /// Class `i + 1` is drawn from `families[i]`.
    pub families: Vec<ShapeFamily>,
    pub count: usize,
    pub length: usize,
    pub noise: f64,
    pub variation: f64,
    pub seed: u64,
}

/// Series are assigned to classes round-robin, so class sizes differ by at most one.
pub fn generate_synthetic(spec: &SynthSpec) -> Result<Dataset> {
    if spec.count < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 series, got {}",
            spec.count
        )));
    }
    if spec.length < 4 {
        return Err(Error::invalid(format!(
            "series length must be at least 4, got {}",
            spec.length
        )));
    }
    if spec.families.is_empty() {
        return Err(Error::invalid("at least one shape family is required"));
    }
    if !(spec.noise.is_finite() && spec.noise >= 0.0) {
        return Err(Error::invalid(
            "noise must be a finite, nonnegative standard deviation",
        ));
    }
    if !(0.0..=1.0).contains(&spec.variation) {
        return Err(Error::invalid("variation must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = Normal::new(0.0, spec.noise).map_err(|e| Error::invalid(e.to_string()))?;
    let series = (0..spec.count)
        .map(|i| {
            let class = i % spec.families.len();
            let mut values = spec.families[class].sample(spec.length, spec.variation, &mut rng);
            if spec.noise > 0.0 {
                for v in &mut values {
                    *v += normal.sample(&mut rng);
                }
            }
            TimeSeries::labeled(values, class as i64 + 1)
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(spec.name.clone(), series)
}

/// Control-chart patterns with the classic generator's parameter ranges:
/// base level 30, uniform noise `r * 2` with `r` in `[-3, 3]`, cycle
/// amplitude and period in `[10, 15]`, trend slope in `[0.2, 0.5]`, shift
/// height in `[7.5, 20]` starting between `n/3` and `2n/3`. Classes 1..=6
/// follow [`ShapeFamily::ALL`] and are assigned round-robin.
pub fn generate_control_chart(
    name: &str,
    count: usize,
    length: usize,
    seed: u64,
) -> Result<Dataset> {
    if count < 2 || length < 4 {
        return Err(Error::invalid(format!(
            "control chart needs count >= 2 and length >= 4, got {count} x {length}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = length as f64;
    let series = (0..count)
        .map(|i| {
            let class = i % ShapeFamily::ALL.len();
            let family = ShapeFamily::ALL[class];
            let amplitude = rng.random_range(10.0..=15.0);
            let period = rng.random_range(10.0..=15.0);
            let slope = rng.random_range(0.2..=0.5);
            let height = rng.random_range(7.5..=20.0);
            let onset = rng.random_range(n / 3.0..=2.0 * n / 3.0);
            let values = (0..length)
                .map(|t| {
                    let tf = t as f64;
                    let base = 30.0 + 2.0 * rng.random_range(-3.0..=3.0);
                    base + match family {
                        ShapeFamily::Flat => 0.0,
                        ShapeFamily::Cyclic => amplitude * (TAU * tf / period).sin(),
                        ShapeFamily::IncreasingTrend => slope * tf,
                        ShapeFamily::DecreasingTrend => -slope * tf,
                        ShapeFamily::UpwardShift if tf >= onset => height,
                        ShapeFamily::DownwardShift if tf >= onset => -height,
                        _ => 0.0,
                    }
                })
                .collect();
            TimeSeries::labeled(values, class as i64 + 1)
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(name, series)
}

/// Fixed 60-series, 6-class, length-60 control-chart train/test pair for runs
/// without the archive files.
pub fn synthetic_control_standin() -> (Dataset, Dataset) {
    let make = |seed| {
        generate_control_chart("synthetic_control_standin", 60, 60, seed)
            .expect("valid stand-in shape")
    };
    (make(2013), make(2014))
}
