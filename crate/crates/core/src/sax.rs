//! Symbolic aggregate approximation with arbitrary breakpoints.
//!
//! The pipeline is z-normalization, piecewise aggregate approximation (PAA),
//! and discretization of the PAA means against a sorted set of cut points.
//! Words are compared with the lookup-table lower bound (MINDIST) or its
//! per-segment weighted variant.
//!
//! PAA uses proportional frames when the number of segments does not divide
//! the series length: segment `i` spans `[i*n/N, (i+1)*n/N)` on a continuous
//! index axis where sample `j` occupies `[j, j+1)`, and a straddling sample
//! contributes to each segment in proportion to its overlap. Every segment
//! therefore has total mass `n/N`, which keeps MINDIST a lower bound of the
//! Euclidean distance for every `N`.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Class labels as found in UCR files.
pub type Label = i64;

/// A uniformly sampled series with an optional class label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    label: Option<Label>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, label: Option<Label>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("time series must have at least one value"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "time series value at index {i} is not finite"
            )));
        }
        Ok(Self { values, label })
    }

    pub fn labeled(values: Vec<f64>, label: Label) -> Result<Self> {
        Self::new(values, Some(label))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> Option<Label> {
        self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Rescales to zero mean and unit population standard deviation.
///
/// A constant series maps to all zeros.
pub fn znormalize(series: &TimeSeries) -> TimeSeries {
    TimeSeries {
        values: znormalize_values(&series.values),
        label: series.label,
    }
}

pub(crate) fn znormalize_values(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    if sd == 0.0 || !sd.is_finite() {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - mean) / sd).collect()
}

/// Segment means of a series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaaVector {
    means: Vec<f64>,
    source_length: usize,
}

impl PaaVector {
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn segments(&self) -> usize {
        self.means.len()
    }
}

pub fn paa(series: &TimeSeries, segments: usize) -> Result<PaaVector> {
    paa_values(&series.values, segments)
}

pub fn paa_values(values: &[f64], segments: usize) -> Result<PaaVector> {
    let n = values.len();
    if segments == 0 || segments > n {
        return Err(Error::invalid(format!(
            "PAA needs 1 <= segments <= {n}, got {segments}"
        )));
    }
    let means = if segments == n {
        values.to_vec()
    } else if n.is_multiple_of(segments) {
        let width = n / segments;
        values
            .chunks_exact(width)
            .map(|c| c.iter().sum::<f64>() / width as f64)
            .collect()
    } else {
        // Scaled axis: sample j covers [j*N, (j+1)*N), segment i covers [i*n, (i+1)*n).
        (0..segments)
            .map(|i| {
                let (lo, hi) = (i * n, (i + 1) * n);
                let first = lo / segments;
                let last = (hi - 1) / segments;
                let acc: f64 = (first..=last)
                    .map(|j| {
                        let overlap = hi.min((j + 1) * segments) - lo.max(j * segments);
                        overlap as f64 * values[j]
                    })
                    .sum();
                acc / n as f64
            })
            .collect()
    };
    Ok(PaaVector {
        means,
        source_length: n,
    })
}

/// Number of symbols in a SAX alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::invalid(format!(
                "alphabet size must be at least 2, got {size}"
            )));
        }
        Ok(Self(size))
    }

    pub fn size(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for Alphabet {
    type Error = Error;

    fn try_from(size: usize) -> Result<Self> {
        Self::new(size)
    }
}

impl From<Alphabet> for usize {
    fn from(a: Alphabet) -> usize {
        a.0
    }
}

impl std::fmt::Display for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Strictly increasing, finite cut points. `k` cuts define `k + 1` symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Breakpoints {
    cuts: Vec<f64>,
}

impl Breakpoints {
    pub fn new(cuts: Vec<f64>) -> Result<Self> {
        if cuts.is_empty() {
            return Err(Error::invalid("at least one breakpoint is required"));
        }
        if cuts.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("breakpoints must be finite"));
        }
        if let Some(i) = cuts.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "breakpoints must be strictly increasing (index {} >= index {})",
                i,
                i + 1
            )));
        }
        Ok(Self { cuts })
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet(self.cuts.len() + 1)
    }

    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.cuts.iter().all(|&c| c >= lo && c <= hi)
    }
}

impl TryFrom<Vec<f64>> for Breakpoints {
    type Error = Error;

    fn try_from(cuts: Vec<f64>) -> Result<Self> {
        Self::new(cuts)
    }
}

impl From<Breakpoints> for Vec<f64> {
    fn from(b: Breakpoints) -> Vec<f64> {
        b.cuts
    }
}

/// Equiprobable cuts under the standard normal: `cuts[i] = Φ⁻¹((i + 1) / α)`.
pub fn gaussian_breakpoints(alphabet: Alphabet) -> Breakpoints {
    let normal = Normal::standard();
    let a = alphabet.size() as f64;
    let cuts = (1..alphabet.size())
        .map(|i| normal.inverse_cdf(i as f64 / a))
        .collect();
    Breakpoints { cuts }
}

/// A discretized series. Symbols are region indices, `0` being the lowest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolicWord {
    symbols: Vec<u32>,
    source_length: usize,
}

impl SymbolicWord {
    pub fn new(symbols: Vec<u32>, source_length: usize) -> Result<Self> {
        if symbols.is_empty() || symbols.len() > source_length {
            return Err(Error::invalid(format!(
                "word of {} symbols cannot describe a series of length {source_length}",
                symbols.len()
            )));
        }
        Ok(Self {
            symbols,
            source_length,
        })
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Letters `a`, `b`, ... for alphabets up to 26, else dot-separated indices.
    pub fn to_letters(&self) -> String {
        if self.symbols.iter().all(|&s| s < 26) {
            self.symbols
                .iter()
                .map(|&s| char::from(b'a' + s as u8))
                .collect()
        } else {
            self.symbols
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

/// Maps each PAA mean to the number of cuts at or below it, so a mean equal
/// to `cuts[i]` lands in region `i + 1`.
pub fn discretize(paa: &PaaVector, cuts: &Breakpoints) -> SymbolicWord {
    SymbolicWord {
        symbols: paa
            .means
            .iter()
            .map(|&m| symbol_of(m, &cuts.cuts))
            .collect(),
        source_length: paa.source_length,
    }
}

#[inline]
fn symbol_of(mean: f64, cuts: &[f64]) -> u32 {
    cuts.partition_point(|&c| c <= mean) as u32
}

/// Symmetric symbol-pair lower-bound distances for one set of cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct DistTable {
    alphabet: usize,
    cells: Vec<f64>,
}

impl DistTable {
    pub fn alphabet(&self) -> Alphabet {
        Alphabet(self.alphabet)
    }

    #[inline]
    pub fn get(&self, r: u32, c: u32) -> f64 {
        self.cells[r as usize * self.alphabet + c as usize]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.cells.chunks_exact(self.alphabet)
    }
}

pub fn build_dist_table(cuts: &Breakpoints) -> DistTable {
    let a = cuts.cuts.len() + 1;
    let mut cells = vec![0.0; a * a];
    for r in 0..a {
        for c in (r + 2)..a {
            let d = cuts.cuts[c - 1] - cuts.cuts[r];
            cells[r * a + c] = d;
            cells[c * a + r] = d;
        }
    }
    DistTable { alphabet: a, cells }
}

/// Positive per-segment weights for the weighted distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("weight vector must not be empty"));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::invalid(format!(
                "weight at index {i} must be finite and positive"
            )));
        }
        Ok(Self(weights))
    }

    pub fn uniform(len: usize) -> Self {
        Self(vec![1.0; len.max(1)])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.0.iter().all(|&w| w >= lo && w <= hi)
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(w: Vec<f64>) -> Result<Self> {
        Self::new(w)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Vec<f64> {
        w.0
    }
}

fn check_pair(a: &SymbolicWord, b: &SymbolicWord, table: &DistTable) -> Result<()> {
    if a.symbols.len() != b.symbols.len() || a.source_length != b.source_length {
        return Err(Error::invalid(format!(
            "word shapes differ: {}/{} vs {}/{}",
            a.symbols.len(),
            a.source_length,
            b.symbols.len(),
            b.source_length
        )));
    }
    let limit = table.alphabet as u32;
    if a.symbols.iter().chain(&b.symbols).any(|&s| s >= limit) {
        return Err(Error::invalid(format!(
            "symbol outside alphabet of size {limit}"
        )));
    }
    Ok(())
}

/// `sqrt(n/N) * sqrt(sum dist(a_i, b_i)^2)`.
pub fn mindist(a: &SymbolicWord, b: &SymbolicWord, table: &DistTable) -> Result<f64> {
    check_pair(a, b, table)?;
    let sum: f64 = a
        .symbols
        .iter()
        .zip(&b.symbols)
        .map(|(&x, &y)| {
            let d = table.get(x, y);
            d * d
        })
        .sum();
    Ok(scale(a) * sum.sqrt())
}

/// `sqrt(n/N) * sqrt(sum w_i * dist(a_i, b_i)^2)`; equal to [`mindist`] at unit weights.
pub fn weighted_mindist(
    a: &SymbolicWord,
    b: &SymbolicWord,
    table: &DistTable,
    weights: &WeightVector,
) -> Result<f64> {
    check_pair(a, b, table)?;
    if weights.len() != a.len() {
        return Err(Error::invalid(format!(
            "{} weights for words of length {}",
            weights.len(),
            a.len()
        )));
    }
    Ok(weighted_unchecked(a, b, table, weights.as_slice()))
}

#[inline]
pub(crate) fn weighted_unchecked(
    a: &SymbolicWord,
    b: &SymbolicWord,
    table: &DistTable,
    weights: &[f64],
) -> f64 {
    let sum: f64 = a
        .symbols
        .iter()
        .zip(&b.symbols)
        .zip(weights)
        .map(|((&x, &y), &w)| {
            let d = table.get(x, y);
            w * (d * d)
        })
        .sum();
    scale(a) * sum.sqrt()
}

#[inline]
fn scale(word: &SymbolicWord) -> f64 {
    (word.source_length as f64 / word.symbols.len() as f64).sqrt()
}
