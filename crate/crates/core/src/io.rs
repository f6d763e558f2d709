//! File formats: UCR-style delimited datasets, versioned JSON model files,
//! prediction and report CSVs.
//!
//! Output files are written atomically (temp file + rename), so a failed
//! run never leaves a partial file behind. Model serialization is
//! canonical: saving the same model twice yields byte-identical files, and
//! a load followed by predict reproduces the original predictions bit for
//! bit.

use std::borrow::Cow;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dilation::DilationRate;
use crate::ensemble::{ConfigDraw, EnsembleParams, FittedTransform};
use crate::error::{Error, Result};
use crate::model::TrainedModel;
use crate::ridge::RidgeModel;
use crate::series::{ClassLabel, LabeledDataset, TimeSeries};
use crate::sfa::{BinningStrategy, SfaConfig, SfaModel};

/// Version gate for model files; bump on any schema change.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Fixed header of report CSVs.
pub const REPORT_HEADER: &str = "name,m_train,m_test,n,r_max,feature_dim,train_seconds,predict_seconds,accuracy,memory_estimate_bytes";

// ---------------------------------------------------------------------------
// datasets
// ---------------------------------------------------------------------------

/// Loads a UCR-style file: one series per line, the first tab-separated
/// field is the class label, the rest are the values.
pub fn load_ucr_tsv(path: &Path) -> Result<LabeledDataset> {
    load_delimited(path, '\t')
}

/// Same layout with commas instead of tabs.
pub fn load_ucr_csv(path: &Path) -> Result<LabeledDataset> {
    load_delimited(path, ',')
}

fn load_delimited(path: &Path, delimiter: char) -> Result<LabeledDataset> {
    let format_err = |line: usize, msg: String| Error::Format {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;

    let mut series = Vec::new();
    let mut labels = Vec::new();
    let mut expected_len: Option<usize> = None;
    for (idx, raw_line) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim_end_matches('\r');
        if line.is_empty() {
            return Err(format_err(line_no, "empty line".into()));
        }
        let mut fields = line.split(delimiter);
        let label_token = fields.next().expect("split yields at least one field").trim();
        let label = ClassLabel::new(label_token)
            .map_err(|_| format_err(line_no, "empty class label".into()))?;
        let mut values = Vec::new();
        for field in fields {
            let field = field.trim();
            let value: f64 = field.parse().map_err(|_| {
                format_err(line_no, format!("cannot parse value {field:?}"))
            })?;
            values.push(value);
        }
        if values.is_empty() {
            return Err(format_err(line_no, "line has a label but no values".into()));
        }
        match expected_len {
            None => expected_len = Some(values.len()),
            Some(expected) if expected != values.len() => {
                return Err(format_err(
                    line_no,
                    format!("row has {} values, expected {expected}", values.len()),
                ));
            }
            _ => {}
        }
        labels.push(label);
        series.push(TimeSeries::new(values).expect("non-empty values"));
    }
    if series.is_empty() {
        return Err(format_err(1, "file contains no series".into()));
    }
    LabeledDataset::new(series, labels)
}

/// Writes a dataset in the tab-separated layout accepted by
/// [`load_ucr_tsv`]. Values keep full precision.
pub fn write_ucr_tsv(dataset: &LabeledDataset, path: &Path) -> Result<()> {
    let mut out = String::new();
    for (series, label) in dataset.series().iter().zip(dataset.labels()) {
        out.push_str(label.as_str());
        for v in series.values() {
            let _ = write!(out, "\t{v}");
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

// ---------------------------------------------------------------------------
// model files
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsRecord {
    w_min: usize,
    w_max: usize,
    r_max: usize,
    seed: u64,
    use_diff: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelRecord {
    selected: Vec<usize>,
    breakpoints: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DrawRecord {
    w: usize,
    d: usize,
    l: usize,
    binning: BinningStrategy,
    raw: ChannelRecord,
    diff: Option<ChannelRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format_version: u32,
    params: ParamsRecord,
    n_train: usize,
    draws: Vec<DrawRecord>,
    classes: Vec<String>,
    alpha: f64,
    weights: Vec<Vec<f64>>,
    intercepts: Vec<f64>,
    feature_means: Vec<f64>,
}

fn channel_record(model: &SfaModel) -> ChannelRecord {
    ChannelRecord {
        selected: model.selected().to_vec(),
        breakpoints: model.breakpoints().to_vec(),
    }
}

fn model_to_file(model: &TrainedModel) -> ModelFile {
    let ft = model.transform();
    let params = ft.params();
    let draws = ft
        .draws()
        .iter()
        .enumerate()
        .map(|(r, draw)| DrawRecord {
            w: draw.w,
            d: draw.d.get(),
            l: draw.l,
            binning: draw.binning,
            raw: channel_record(&ft.models_raw()[r]),
            diff: ft.models_diff().map(|models| channel_record(&models[r])),
        })
        .collect();
    let ridge = model.ridge();
    ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        params: ParamsRecord {
            w_min: params.w_min,
            w_max: params.w_max,
            r_max: params.r_max,
            seed: params.seed,
            use_diff: params.use_diff,
        },
        n_train: ft.n_train(),
        draws,
        classes: ridge.classes().iter().map(|c| c.as_str().to_owned()).collect(),
        alpha: ridge.alpha(),
        weights: ridge.weights().to_vec(),
        intercepts: ridge.intercepts().to_vec(),
        feature_means: ridge.feature_means().to_vec(),
    }
}

fn schema_err(e: impl std::fmt::Display) -> Error {
    Error::Schema(e.to_string())
}

fn rebuild_channel(
    record: &ChannelRecord,
    w: usize,
    binning: BinningStrategy,
) -> Result<SfaModel> {
    let config = SfaConfig::new(w, record.selected.len(), binning, true).map_err(schema_err)?;
    SfaModel::new(config, record.selected.clone(), record.breakpoints.clone())
        .map_err(schema_err)
}

fn model_from_file(file: ModelFile) -> Result<TrainedModel> {
    let params = EnsembleParams::new(
        file.params.w_min,
        file.params.w_max,
        file.params.r_max,
        file.params.seed,
        file.params.use_diff,
    )
    .map_err(schema_err)?;

    let mut draws = Vec::with_capacity(file.draws.len());
    let mut models_raw = Vec::with_capacity(file.draws.len());
    let mut models_diff = params.use_diff.then(Vec::new);
    for record in &file.draws {
        let d = DilationRate::new(record.d).map_err(schema_err)?;
        draws.push(ConfigDraw {
            w: record.w,
            d,
            l: record.l,
            binning: record.binning,
        });
        models_raw.push(rebuild_channel(&record.raw, record.w, record.binning)?);
        match (&mut models_diff, &record.diff) {
            (Some(models), Some(diff)) => {
                models.push(rebuild_channel(diff, record.w, record.binning)?);
            }
            (None, None) => {}
            _ => {
                return Err(Error::Schema(
                    "diff channel presence does not match use_diff".into(),
                ));
            }
        }
    }
    let transform =
        FittedTransform::from_parts(params, draws, models_raw, models_diff, file.n_train)
            .map_err(schema_err)?;

    let classes = file
        .classes
        .into_iter()
        .map(|c| ClassLabel::new(c).map_err(schema_err))
        .collect::<Result<Vec<_>>>()?;
    let ridge = RidgeModel::from_parts(
        classes,
        file.weights,
        file.intercepts,
        file.alpha,
        file.feature_means,
    )
    .map_err(schema_err)?;

    TrainedModel::new(transform, ridge).map_err(schema_err)
}

/// Serializes a fitted model to canonical JSON.
pub fn save_model(model: &TrainedModel, path: &Path) -> Result<()> {
    let file = model_to_file(model);
    let bytes = serde_json::to_vec(&file).expect("model serialization cannot fail");
    write_atomic(path, &bytes)
}

/// Loads a model file, gating on the format version before the full parse.
pub fn load_model(path: &Path) -> Result<TrainedModel> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let probe: VersionProbe = serde_json::from_str(&content).map_err(classify_json_error)?;
    if probe.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::Version {
            found: probe.format_version,
            supported: MODEL_FORMAT_VERSION,
        });
    }
    let file: ModelFile = serde_json::from_str(&content).map_err(classify_json_error)?;
    model_from_file(file)
}

fn classify_json_error(e: serde_json::Error) -> Error {
    match e.classify() {
        serde_json::error::Category::Data => Error::Schema(e.to_string()),
        _ => Error::Parse(e.to_string()),
    }
}

// ---------------------------------------------------------------------------
// predictions and reports
// ---------------------------------------------------------------------------

fn csv_field(s: &str) -> Cow<'_, str> {
    if s.contains([',', '"', '\n', '\r']) {
        Cow::Owned(format!("\"{}\"", s.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(s)
    }
}

/// Writes one record per series: index, predicted label and, when
/// available, the true label.
pub fn write_predictions(
    predicted: &[ClassLabel],
    truth: Option<&[ClassLabel]>,
    path: &Path,
) -> Result<()> {
    if let Some(truth) = truth {
        if truth.len() != predicted.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} predictions but {} true labels",
                predicted.len(),
                truth.len()
            )));
        }
    }
    let mut out = String::new();
    out.push_str(if truth.is_some() {
        "index,predicted,true\n"
    } else {
        "index,predicted\n"
    });
    for (i, label) in predicted.iter().enumerate() {
        let _ = write!(out, "{i},{}", csv_field(label.as_str()));
        if let Some(truth) = truth {
            let _ = write!(out, ",{}", csv_field(truth[i].as_str()));
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// One benchmark/evaluate result.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub name: String,
    pub m_train: usize,
    pub m_test: usize,
    pub n: usize,
    pub r_max: usize,
    pub feature_dim: usize,
    pub train_seconds: f64,
    pub predict_seconds: f64,
    pub accuracy: f64,
    pub memory_estimate_bytes: u64,
}

impl ReportRow {
    fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            csv_field(&self.name),
            self.m_train,
            self.m_test,
            self.n,
            self.r_max,
            self.feature_dim,
            self.train_seconds,
            self.predict_seconds,
            self.accuracy,
            self.memory_estimate_bytes
        )
    }
}

/// Writes a full report: the fixed header plus one line per row.
pub fn write_report(rows: &[ReportRow], path: &Path) -> Result<()> {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(REPORT_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Appends one row, creating the file with its header first if needed.
pub fn append_report_row(row: &ReportRow, path: &Path) -> Result<()> {
    let mut payload = String::new();
    if !path.exists() {
        payload.push_str(REPORT_HEADER);
        payload.push('\n');
    }
    payload.push_str(&row.to_csv_line());
    payload.push('\n');
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    file.write_all(payload.as_bytes())
        .map_err(|e| Error::io(path, e))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
