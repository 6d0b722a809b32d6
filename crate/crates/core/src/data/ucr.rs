//! Classic UCR flat format: one series per line, class label first.
//!
//! Fields may be separated by commas or by runs of whitespace. Labels that
//! are written as floats (`1.0000000e+00`) are rounded to the nearest integer.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::knn::Dataset;
use crate::sax::{Label, TimeSeries};

pub fn parse_ucr(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = dataset_name(path);
    parse_ucr_str(&name, &text, path)
}

/// `origin` only labels error messages.
pub fn parse_ucr_str(name: &str, text: &str, origin: &Path) -> Result<Dataset> {
    let err = |line: usize, column: Option<usize>, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        column,
        message,
    };
    let mut series = Vec::new();
    let mut width: Option<(usize, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let mut numbers = Vec::with_capacity(fields.len());
        for (col, f) in fields.iter().enumerate() {
            let v: f64 = f
                .parse()
                .map_err(|_| err(line_no, Some(col + 1), format!("`{f}` is not a number")))?;
            if !v.is_finite() {
                return Err(err(line_no, Some(col + 1), format!("`{f}` is not finite")));
            }
            numbers.push(v);
        }
        if numbers.len() < 2 {
            return Err(err(
                line_no,
                None,
                "a row needs a label and at least one value".into(),
            ));
        }
        match width {
            None => width = Some((numbers.len(), line_no)),
            Some((w, first)) if w != numbers.len() => {
                return Err(err(
                    line_no,
                    None,
                    format!(
                        "row has {} values, line {first} has {}",
                        numbers.len() - 1,
                        w - 1
                    ),
                ));
            }
            _ => {}
        }
        let label = to_label(numbers[0], origin, line_no);
        let values = numbers.split_off(1);
        series.push(TimeSeries::labeled(values, label)?);
    }
    if series.is_empty() {
        return Err(err(0, None, "file contains no series".into()));
    }
    Dataset::new(name, series)
}

fn to_label(v: f64, origin: &Path, line: usize) -> Label {
    let rounded = v.round();
    if rounded != v {
        log::warn!(
            "{}:{line}: non-integer label {v} rounded to {rounded}",
            origin.display()
        );
    }
    rounded as Label
}

fn dataset_name(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    for suffix in ["_TRAIN", "_TEST"] {
        if let Some(base) = stem.strip_suffix(suffix) {
            return base.to_owned();
        }
    }
    stem
}

/// Comma-separated rendering that parses back to identical values.
pub fn ucr_string(data: &Dataset) -> String {
    let mut out = String::new();
    for (s, label) in data.series().iter().zip(data.labels()) {
        let _ = write!(out, "{label}");
        for v in s.values() {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_ucr(data: &Dataset, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(PathBuf::from(parent), e))?;
    }
    fs::write(path, ucr_string(data)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Dataset> {
        parse_ucr_str("t", text, Path::new("t.txt"))
    }

    #[test]
    fn comma_rows() {
        let d = parse("1,0.5,0.7,0.9\n2,1,2,3\n").unwrap();
        assert_eq!(d.labels(), &[1, 2]);
        assert_eq!(d.series()[0].values(), &[0.5, 0.7, 0.9]);
    }

    #[test]
    fn whitespace_rows_and_float_labels() {
        let d = parse("2  0.5  0.7\n\n  1.0000000e+00\t1.5 -2\n").unwrap();
        assert_eq!(d.labels(), &[2, 1]);
        assert_eq!(d.series()[0].values(), &[0.5, 0.7]);
        assert_eq!(d.series()[1].values(), &[1.5, -2.0]);
    }

    #[test]
    fn ragged_rows_name_the_line() {
        let e = parse("1,1,2,3\n1,1,2,3\n2,1,2\n").unwrap_err();
        match e {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column, None);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_field_names_line_and_column() {
        let e = parse("1,1,2\n1,x,2\n").unwrap_err();
        assert!(matches!(
            e,
            Error::Parse {
                line: 2,
                column: Some(2),
                ..
            }
        ));
        assert!(e.to_string().contains("t.txt:2:2"));
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(parse("").is_err());
        assert!(parse("\n  \n").is_err());
    }

    #[test]
    fn names_from_paths() {
        assert_eq!(dataset_name(Path::new("x/FaceFour_TRAIN.tsv")), "FaceFour");
        assert_eq!(
            dataset_name(Path::new("x/synthetic_control_TEST")),
            "synthetic_control"
        );
        assert_eq!(dataset_name(Path::new("plain.txt")), "plain");
    }

    #[test]
    fn missing_file_names_path() {
        let e = parse_ucr(Path::new("/nonexistent/none_TRAIN")).unwrap_err();
        assert!(e.to_string().contains("/nonexistent/none_TRAIN"));
    }
}
