//! Data model for univariate series, class labels, and labeled datasets.
//!
//! All types here are immutable after construction and can be shared freely
//! across threads. Construction is permissive about values (a series may hold
//! NaN straight from a file); [`validate_dataset`] is the gate that fitting
//! code runs before touching the numbers.

use std::fmt;

use crate::error::{Error, Result};

/// An ordered sequence of real values, length at least 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DegenerateSeries { len: 0, min: 1 });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Series of consecutive deltas `t[i+1] - t[i]`, length `n - 1`.
    pub fn first_order_diff(&self) -> Result<TimeSeries> {
        if self.len() < 2 {
            return Err(Error::DegenerateSeries {
                len: self.len(),
                min: 2,
            });
        }
        let diffs = self.values.windows(2).map(|p| p[1] - p[0]).collect();
        Ok(TimeSeries { values: diffs })
    }
}

/// Opaque class token, compared by exact equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLabel(String);

impl ClassLabel {
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        if token.is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(Self(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A collection of series with one label each.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    series: Vec<TimeSeries>,
    labels: Vec<ClassLabel>,
}

impl LabeledDataset {
    pub fn new(series: Vec<TimeSeries>, labels: Vec<ClassLabel>) -> Result<Self> {
        if series.len() != labels.len() {
            return Err(Error::CountMismatch {
                series: series.len(),
                labels: labels.len(),
            });
        }
        Ok(Self { series, labels })
    }

    /// Number of series (the dataset size `m`).
    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    /// Length of the first series, if any. Meaningful once validation has
    /// confirmed all series share one length.
    pub fn series_len(&self) -> Option<usize> {
        self.series.first().map(TimeSeries::len)
    }

    pub fn num_classes(&self) -> usize {
        let mut distinct: Vec<&ClassLabel> = self.labels.iter().collect();
        distinct.sort();
        distinct.dedup();
        distinct.len()
    }
}

/// One violated dataset invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Fitting needs at least 2 series.
    TooFewSeries { m: usize },
    /// Fitting needs at least 2 distinct classes.
    TooFewClasses { found: usize },
    /// All series must share one length.
    UnequalLength {
        series: usize,
        len: usize,
        expected: usize,
    },
    /// First non-finite value found in a series.
    NonFinite { series: usize, index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewSeries { m } => {
                write!(f, "dataset has {m} series, need at least 2")
            }
            Violation::TooFewClasses { found } => {
                write!(f, "dataset has {found} distinct class(es), need at least 2")
            }
            Violation::UnequalLength {
                series,
                len,
                expected,
            } => write!(
                f,
                "unequal lengths: series {series} has length {len}, expected {expected}"
            ),
            Violation::NonFinite { series, index } => {
                write!(f, "non-finite value at (series {series}, index {index})")
            }
        }
    }
}

/// Outcome of [`validate_dataset`]: empty means the dataset is fit-ready.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidDataset(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "- {v}")?;
        }
        Ok(())
    }
}

/// Checks the fitting invariants. Pure: never mutates the dataset, and
/// repeated calls return the same report.
pub fn validate_dataset(d: &LabeledDataset) -> ValidationReport {
    let mut violations = Vec::new();
    if d.len() < 2 {
        violations.push(Violation::TooFewSeries { m: d.len() });
    }
    let classes = d.num_classes();
    if classes < 2 {
        violations.push(Violation::TooFewClasses { found: classes });
    }
    if let Some(expected) = d.series_len() {
        for (i, s) in d.series().iter().enumerate() {
            if s.len() != expected {
                violations.push(Violation::UnequalLength {
                    series: i,
                    len: s.len(),
                    expected,
                });
            }
            if let Some(index) = s.values().iter().position(|v| !v.is_finite()) {
                violations.push(Violation::NonFinite { series: i, index });
            }
        }
    }
    ValidationReport { violations }
}
