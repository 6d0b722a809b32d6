//! 1-NN classification over symbolic words.
//!
//! Distance ties go to the lowest reference index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sax::{
    discretize, paa_values, weighted_unchecked, znormalize_values, Alphabet, Breakpoints,
    DistTable, Label, PaaVector, SymbolicWord, TimeSeries, WeightVector,
};

/// Labeled, equal-length series.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    series: Vec<TimeSeries>,
    labels: Vec<Label>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, series: Vec<TimeSeries>) -> Result<Self> {
        let name = name.into();
        if series.len() < 2 {
            return Err(Error::invalid(format!(
                "dataset `{name}` needs at least 2 series, has {}",
                series.len()
            )));
        }
        let n = series[0].len();
        if let Some(i) = series.iter().position(|s| s.len() != n) {
            return Err(Error::invalid(format!(
                "dataset `{name}`: series {i} has length {}, expected {n}",
                series[i].len()
            )));
        }
        let labels = series
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.label().ok_or_else(|| {
                    Error::invalid(format!("dataset `{name}`: series {i} has no label"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            name,
            series,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Length shared by every series.
    pub fn series_length(&self) -> usize {
        self.series[0].len()
    }

    pub fn class_count(&self) -> usize {
        let mut l = self.labels.clone();
        l.sort_unstable();
        l.dedup();
        l.len()
    }
}

/// Everything needed to turn a series into a word and compare words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationParams {
    pub alphabet: Alphabet,
    pub segments: usize,
    pub cuts: Breakpoints,
    pub weights: WeightVector,
}

impl RepresentationParams {
    pub fn new(
        alphabet: Alphabet,
        segments: usize,
        cuts: Breakpoints,
        weights: WeightVector,
    ) -> Result<Self> {
        if cuts.alphabet() != alphabet {
            return Err(Error::invalid(format!(
                "{} cuts do not define an alphabet of size {alphabet}",
                cuts.cuts().len()
            )));
        }
        if weights.len() != segments {
            return Err(Error::invalid(format!(
                "{} weights for {segments} segments",
                weights.len()
            )));
        }
        Ok(Self {
            alphabet,
            segments,
            cuts,
            weights,
        })
    }

    pub fn table(&self) -> DistTable {
        crate::sax::build_dist_table(&self.cuts)
    }
}

/// Normalized PAA vectors of every series; independent of cuts and weights.
pub fn reduce_dataset(data: &Dataset, segments: usize) -> Result<Vec<PaaVector>> {
    data.series
        .iter()
        .map(|s| paa_values(&znormalize_values(s.values()), segments))
        .collect()
}

pub fn discretize_all(reduced: &[PaaVector], cuts: &Breakpoints) -> Vec<SymbolicWord> {
    reduced.iter().map(|p| discretize(p, cuts)).collect()
}

pub fn encode_dataset(data: &Dataset, params: &RepresentationParams) -> Result<Vec<SymbolicWord>> {
    Ok(discretize_all(
        &reduce_dataset(data, params.segments)?,
        &params.cuts,
    ))
}

fn check_words(words: &[SymbolicWord], table: &DistTable, weights: &WeightVector) -> Result<()> {
    let Some(first) = words.first() else {
        return Ok(());
    };
    let limit = table.alphabet().size() as u32;
    for (i, w) in words.iter().enumerate() {
        if w.len() != first.len() || w.source_length() != first.source_length() {
            return Err(Error::invalid(format!(
                "word {i} differs in shape from word 0"
            )));
        }
        if w.symbols().iter().any(|&s| s >= limit) {
            return Err(Error::invalid(format!(
                "word {i} has a symbol outside the alphabet"
            )));
        }
    }
    if weights.len() != first.len() {
        return Err(Error::invalid(format!(
            "{} weights for words of length {}",
            weights.len(),
            first.len()
        )));
    }
    Ok(())
}

/// Index of the closest reference, skipping `exclude`; lowest index wins ties.
fn nearest(
    query: &SymbolicWord,
    refs: &[SymbolicWord],
    exclude: Option<usize>,
    table: &DistTable,
    weights: &[f64],
) -> usize {
    let mut best = (usize::MAX, f64::INFINITY);
    for (j, r) in refs.iter().enumerate() {
        if Some(j) == exclude {
            continue;
        }
        let d = weighted_unchecked(query, r, table, weights);
        if d < best.1 || best.0 == usize::MAX {
            best = (j, d);
        }
    }
    best.0
}

/// Leave-one-out miss count.
pub fn loo_misses(
    words: &[SymbolicWord],
    labels: &[Label],
    table: &DistTable,
    weights: &WeightVector,
) -> Result<usize> {
    if words.len() < 2 {
        return Err(Error::invalid(format!(
            "leave-one-out needs at least 2 words, got {}",
            words.len()
        )));
    }
    if labels.len() != words.len() {
        return Err(Error::invalid("one label per word is required"));
    }
    check_words(words, table, weights)?;
    let w = weights.as_slice();
    Ok(words
        .iter()
        .enumerate()
        .filter(|&(i, q)| labels[nearest(q, words, Some(i), table, w)] != labels[i])
        .count())
}

/// Fraction of words misclassified by their nearest other word.
pub fn loo_error(
    words: &[SymbolicWord],
    labels: &[Label],
    table: &DistTable,
    weights: &WeightVector,
) -> Result<f64> {
    Ok(loo_misses(words, labels, table, weights)? as f64 / words.len() as f64)
}

pub fn holdout_misses(
    train_words: &[SymbolicWord],
    train_labels: &[Label],
    test_words: &[SymbolicWord],
    test_labels: &[Label],
    table: &DistTable,
    weights: &WeightVector,
) -> Result<usize> {
    if train_words.is_empty() {
        return Err(Error::invalid(
            "holdout evaluation needs a nonempty training set",
        ));
    }
    if test_words.is_empty() {
        return Err(Error::invalid(
            "holdout evaluation needs a nonempty test set",
        ));
    }
    if train_labels.len() != train_words.len() || test_labels.len() != test_words.len() {
        return Err(Error::invalid("one label per word is required"));
    }
    check_words(train_words, table, weights)?;
    check_words(test_words, table, weights)?;
    let (a, b) = (&train_words[0], &test_words[0]);
    if a.len() != b.len() || a.source_length() != b.source_length() {
        return Err(Error::invalid("train and test words differ in shape"));
    }
    let w = weights.as_slice();
    Ok(test_words
        .iter()
        .zip(test_labels)
        .filter(|&(q, l)| train_labels[nearest(q, train_words, None, table, w)] != *l)
        .count())
}

/// Fraction of test words misclassified by their nearest training word.
pub fn holdout_error(
    train_words: &[SymbolicWord],
    train_labels: &[Label],
    test_words: &[SymbolicWord],
    test_labels: &[Label],
    table: &DistTable,
    weights: &WeightVector,
) -> Result<f64> {
    let misses = holdout_misses(
        train_words,
        train_labels,
        test_words,
        test_labels,
        table,
        weights,
    )?;
    Ok(misses as f64 / test_words.len() as f64)
}
