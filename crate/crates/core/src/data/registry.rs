//! Maps dataset names to train/test files under a data root.
//!
//! Names are registered from three sources, later ones overriding earlier:
//! the six benchmark names used in the experiments, every directory `D`
//! under the root holding a `D_TRAIN` file, and an optional `registry.toml`
//! manifest in the root:
//!
//! ```toml
//! [datasets.FaceFour]
//! train = "FaceFour/FaceFour_TRAIN.tsv"
//! test = "FaceFour/FaceFour_TEST.tsv"
//! length = 350
//! classes = 4
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::ucr::parse_ucr;
use crate::error::{Error, Result};
use crate::knn::Dataset;

pub const PAPER_DATASETS: [&str; 6] = [
    "DiatomSizeReduction",
    "FaceFour",
    "MoteStrain",
    "SonyAIBORobotSurfaceII",
    "synthetic_control",
    "TwoLeadECG",
];

const MANIFEST: &str = "registry.toml";
const EXTENSIONS: [&str; 3] = ["", ".tsv", ".txt"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetEntry {
    pub name: String,
    pub train: PathBuf,
    pub test: PathBuf,
    pub expected_length: Option<usize>,
    pub expected_classes: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    #[serde(default)]
    datasets: BTreeMap<String, ManifestEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    train: Option<PathBuf>,
    test: Option<PathBuf>,
    length: Option<usize>,
    classes: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct DatasetRegistry {
    root: PathBuf,
    entries: BTreeMap<String, DatasetEntry>,
}

impl DatasetRegistry {
    /// Registers the benchmark names, discovered directories and the manifest.
    /// A missing root is not an error; loading from it is.
    pub fn open(root: &Path) -> Result<Self> {
        let mut reg = Self {
            root: root.to_path_buf(),
            entries: BTreeMap::new(),
        };
        for name in PAPER_DATASETS {
            reg.register(reg.conventional(name));
        }
        if let Ok(dir) = fs::read_dir(root) {
            let mut found: Vec<String> = dir
                .filter_map(|e| e.ok())
                .filter(|e| e.path().is_dir())
                .map(|e| e.file_name().to_string_lossy().into_owned())
                .filter(|n| reg.existing(n, "TRAIN").is_some())
                .collect();
            found.sort();
            for name in found {
                reg.register(reg.conventional(&name));
            }
        }
        let manifest = root.join(MANIFEST);
        if manifest.is_file() {
            let text = fs::read_to_string(&manifest).map_err(|e| Error::io(&manifest, e))?;
            let parsed: Manifest = toml::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", manifest.display())))?;
            for (name, m) in parsed.datasets {
                let base = reg.conventional(&name);
                reg.register(DatasetEntry {
                    train: m.train.map(|p| root.join(p)).unwrap_or(base.train),
                    test: m.test.map(|p| root.join(p)).unwrap_or(base.test),
                    expected_length: m.length,
                    expected_classes: m.classes,
                    name,
                });
            }
        }
        Ok(reg)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn register(&mut self, entry: DatasetEntry) {
        self.entries.insert(entry.name.clone(), entry);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn lookup(&self, name: &str) -> Result<&DatasetEntry> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownDataset(name.to_owned()))
    }

    /// Parses the train and test splits and checks them against the manifest.
    pub fn load(&self, name: &str) -> Result<(Dataset, Dataset)> {
        let entry = self.lookup(name)?;
        let train = parse_ucr(&entry.train)?;
        let test = parse_ucr(&entry.test)?;
        for (split, path) in [(&train, &entry.train), (&test, &entry.test)] {
            let bad = |msg: String| Error::Config(format!("{}: {msg}", path.display()));
            if let Some(n) = entry.expected_length {
                if split.series_length() != n {
                    return Err(bad(format!(
                        "series length {} differs from registered length {n}",
                        split.series_length()
                    )));
                }
            }
            if let Some(c) = entry.expected_classes {
                if split.class_count() != c {
                    return Err(bad(format!(
                        "{} classes found, {c} registered",
                        split.class_count()
                    )));
                }
            }
        }
        if train.series_length() != test.series_length() {
            return Err(Error::invalid(format!(
                "`{name}`: train length {} differs from test length {}",
                train.series_length(),
                test.series_length()
            )));
        }
        Ok((train.renamed(name), test.renamed(name)))
    }

    fn existing(&self, name: &str, split: &str) -> Option<PathBuf> {
        EXTENSIONS
            .iter()
            .flat_map(|ext| {
                [
                    self.root.join(name).join(format!("{name}_{split}{ext}")),
                    self.root.join(format!("{name}_{split}{ext}")),
                ]
            })
            .find(|p| p.is_file())
    }

    fn conventional(&self, name: &str) -> DatasetEntry {
        let path = |split: &str| {
            self.existing(name, split)
                .unwrap_or_else(|| self.root.join(name).join(format!("{name}_{split}")))
        };
        DatasetEntry {
            name: name.to_owned(),
            train: path("TRAIN"),
            test: path("TEST"),
            expected_length: None,
            expected_classes: None,
        }
    }
}
