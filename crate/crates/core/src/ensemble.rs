//! Randomized configuration ensemble and the fit/transform pipeline.
//!
//! Each of `r_max` configurations draws a window length, a dilation rate, a
//! word length and a binning strategy. One draw parameterizes both channels
//! (the raw series and, by default, its first-order difference); every
//! (draw, channel) pair contributes a 256-slot block to the feature vector,
//! so the feature dimension is `channels * 256 * r_max` no matter what the
//! data looks like.
//!
//! All randomness flows from one seeded ChaCha8 stream, which is
//! platform-independent; fitting is deterministic given (dataset, params,
//! seed) regardless of the rayon thread count, because the per-draw work is
//! internally sequential and results are assembled in draw order.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dictionary::{bag_of_words, BagOfWords, NUM_WORDS};
use crate::dilation::{apply_dilation, sample_dilation, DilationRate};
use crate::error::{Error, Result};
use crate::series::{validate_dataset, LabeledDataset, TimeSeries};
use crate::sfa::{fit_sfa, num_components, BinningStrategy, SfaConfig, SfaModel};

/// Attempts to re-draw a window length that also fits the shorter
/// difference channel before giving up.
const RESAMPLE_ATTEMPTS: usize = 100;

/// Ensemble hyper-parameters. `w_max` and `r_max` have data-driven defaults
/// (see [`default_wmax`] and [`default_rmax`]); [`EnsembleParams::auto`]
/// applies them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnsembleParams {
    pub w_min: usize,
    pub w_max: usize,
    pub r_max: usize,
    pub seed: u64,
    pub use_diff: bool,
}

impl EnsembleParams {
    pub fn new(w_min: usize, w_max: usize, r_max: usize, seed: u64, use_diff: bool) -> Result<Self> {
        if w_min < 4 {
            return Err(Error::InvalidParams(format!(
                "w_min must be at least 4, got {w_min}"
            )));
        }
        if w_max < w_min {
            return Err(Error::InvalidParams(format!(
                "w_max ({w_max}) must not be below w_min ({w_min})"
            )));
        }
        if r_max == 0 {
            return Err(Error::InvalidParams("r_max must be at least 1".into()));
        }
        Ok(Self {
            w_min,
            w_max,
            r_max,
            seed,
            use_diff,
        })
    }

    /// Default parameters for a dataset of `m` series of length `n`.
    pub fn auto(m: usize, n: usize, seed: u64) -> Result<Self> {
        Self::new(4, default_wmax(n), default_rmax(m, n), seed, true)
    }

    pub fn channels(&self) -> usize {
        if self.use_diff {
            2
        } else {
            1
        }
    }

    /// `channels * 256 * r_max`, independent of the data.
    pub fn feature_dim(&self) -> usize {
        self.channels() * NUM_WORDS * self.r_max
    }
}

/// Ensemble size rule of thumb: larger ensembles for more or longer series.
pub fn default_rmax(m: usize, n: usize) -> usize {
    if m <= 250 {
        50
    } else if n <= 100 {
        100
    } else {
        150
    }
}

/// Default window-length ceiling by series length (24 / 44 / 84), clamped
/// to the series length.
pub fn default_wmax(n: usize) -> usize {
    let v = if n < 100 {
        24
    } else if n < 500 {
        44
    } else {
        84
    };
    v.min(n)
}

/// One randomized configuration; `l` is the drawn word length in `{7, 8}`
/// (the per-window component budget may clamp it further for tiny windows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigDraw {
    pub w: usize,
    pub d: DilationRate,
    pub l: usize,
    pub binning: BinningStrategy,
}

/// Word length actually used for a draw: tiny windows expose fewer than 7
/// components, so the drawn length is clamped to what exists.
fn effective_word_length(l: usize, w: usize) -> usize {
    l.min(num_components(w))
}

/// Draws `r_max` configurations. Window lengths are uniform on
/// `[w_min, min(w_max, n)]`, dilation follows [`sample_dilation`], word
/// lengths are uniform on `{7, 8}` and binning uniform over the two
/// strategies. Deterministic for a given generator state.
pub fn draw_configs<R: Rng + ?Sized>(
    rng: &mut R,
    params: &EnsembleParams,
    n: usize,
) -> Result<Vec<ConfigDraw>> {
    if n < params.w_min {
        return Err(Error::InvalidWindow {
            w: params.w_min,
            n,
        });
    }
    let w_ceil = params.w_max.min(n);
    let mut draws = Vec::with_capacity(params.r_max);
    for _ in 0..params.r_max {
        let mut w = rng.gen_range(params.w_min..=w_ceil);
        if params.use_diff {
            // the diff channel is one point shorter
            let mut attempts = 0;
            while w > n - 1 {
                attempts += 1;
                if attempts > RESAMPLE_ATTEMPTS {
                    return Err(Error::InvalidWindow { w, n: n - 1 });
                }
                w = rng.gen_range(params.w_min..=w_ceil);
            }
        }
        let d = sample_dilation(rng, n, w)?;
        let l = rng.gen_range(7..=8);
        let binning = if rng.gen_range(0..=1) == 0 {
            BinningStrategy::EquiDepth
        } else {
            BinningStrategy::EquiWidth
        };
        draws.push(ConfigDraw { w, d, l, binning });
    }
    Ok(draws)
}

/// The fitted transform: the drawn configurations plus one discretizer per
/// (draw, channel). Immutable once fitted; safe to share across threads.
#[derive(Clone, Debug)]
pub struct FittedTransform {
    params: EnsembleParams,
    draws: Vec<ConfigDraw>,
    models_raw: Vec<SfaModel>,
    models_diff: Option<Vec<SfaModel>>,
    n_train: usize,
}

impl FittedTransform {
    /// Reassembles a transform from its serialized parts.
    pub fn from_parts(
        params: EnsembleParams,
        draws: Vec<ConfigDraw>,
        models_raw: Vec<SfaModel>,
        models_diff: Option<Vec<SfaModel>>,
        n_train: usize,
    ) -> Result<Self> {
        if draws.len() != params.r_max {
            return Err(Error::InvalidParams(format!(
                "expected {} draws, got {}",
                params.r_max,
                draws.len()
            )));
        }
        if models_raw.len() != draws.len() {
            return Err(Error::InvalidParams(format!(
                "expected {} raw models, got {}",
                draws.len(),
                models_raw.len()
            )));
        }
        match (&models_diff, params.use_diff) {
            (Some(models), true) if models.len() != draws.len() => {
                return Err(Error::InvalidParams(format!(
                    "expected {} diff models, got {}",
                    draws.len(),
                    models.len()
                )));
            }
            (Some(_), false) => {
                return Err(Error::InvalidParams(
                    "diff models present but use_diff is false".into(),
                ));
            }
            (None, true) => {
                return Err(Error::InvalidParams(
                    "use_diff is true but diff models are missing".into(),
                ));
            }
            _ => {}
        }
        for (r, draw) in draws.iter().enumerate() {
            let check = |model: &SfaModel, channel: &str| -> Result<()> {
                if model.config().window_length != draw.w {
                    return Err(Error::InvalidParams(format!(
                        "draw {r} {channel} model window length {} does not match draw ({})",
                        model.config().window_length,
                        draw.w
                    )));
                }
                Ok(())
            };
            check(&models_raw[r], "raw")?;
            if let Some(models) = &models_diff {
                check(&models[r], "diff")?;
            }
        }
        if n_train == 0 {
            return Err(Error::InvalidParams("n_train must be positive".into()));
        }
        Ok(Self {
            params,
            draws,
            models_raw,
            models_diff,
            n_train,
        })
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn draws(&self) -> &[ConfigDraw] {
        &self.draws
    }

    pub fn models_raw(&self) -> &[SfaModel] {
        &self.models_raw
    }

    pub fn models_diff(&self) -> Option<&[SfaModel]> {
        self.models_diff.as_deref()
    }

    /// Series length the transform was fitted on; inputs must match.
    pub fn n_train(&self) -> usize {
        self.n_train
    }

    pub fn feature_dim(&self) -> usize {
        self.params.feature_dim()
    }
}

struct ChannelFit {
    model: SfaModel,
    bags: Vec<BagOfWords>,
}

struct DrawFit {
    raw: ChannelFit,
    diff: Option<ChannelFit>,
}

fn fit_channel(series: &[TimeSeries], draw: &ConfigDraw) -> Result<ChannelFit> {
    let dilated = series
        .iter()
        .map(|s| apply_dilation(s, draw.d))
        .collect::<Result<Vec<_>>>()?;
    let config = SfaConfig::new(
        draw.w,
        effective_word_length(draw.l, draw.w),
        draw.binning,
        true,
    )?;
    let model = fit_sfa(
        dilated.iter().flat_map(|s| s.values().windows(draw.w)),
        &config,
    )?;
    let bags = dilated
        .iter()
        .map(|s| bag_of_words(s, &model))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelFit { model, bags })
}

fn transform_channel(
    series: &TimeSeries,
    draw: &ConfigDraw,
    model: &SfaModel,
) -> Result<BagOfWords> {
    let dilated = apply_dilation(series, draw.d)?;
    bag_of_words(&dilated, model)
}

fn write_bag(row: &mut [f64], offset: usize, bag: &BagOfWords) {
    for (slot, &count) in row[offset..offset + NUM_WORDS]
        .iter_mut()
        .zip(bag.counts())
    {
        *slot = f64::from(count);
    }
}

/// Fits the full transform and returns it together with the training
/// feature matrix (`m x feature_dim`).
///
/// For draw `r` and channel `c` (raw = 0, diff = 1) the counts occupy
/// columns `[(r * channels + c) * 256, +256)`.
pub fn fit(
    dataset: &LabeledDataset,
    params: &EnsembleParams,
) -> Result<(FittedTransform, Array2<f64>)> {
    validate_dataset(dataset).into_result()?;
    let n = dataset.series_len().expect("validated dataset is non-empty");
    if n < params.w_min {
        return Err(Error::InvalidWindow {
            w: params.w_min,
            n,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let draws = draw_configs(&mut rng, params, n)?;

    let series = dataset.series();
    let diff_series = if params.use_diff {
        Some(
            series
                .iter()
                .map(TimeSeries::first_order_diff)
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    let per_draw = draws
        .par_iter()
        .map(|draw| {
            let raw = fit_channel(series, draw)?;
            let diff = diff_series
                .as_deref()
                .map(|d| fit_channel(d, draw))
                .transpose()?;
            Ok(DrawFit { raw, diff })
        })
        .collect::<Result<Vec<_>>>()?;

    let m = dataset.len();
    let channels = params.channels();
    let mut x = Array2::<f64>::zeros((m, params.feature_dim()));
    for (r, fitted) in per_draw.iter().enumerate() {
        for i in 0..m {
            let row = x.row_mut(i).into_slice().expect("row-major matrix");
            write_bag(row, (r * channels) * NUM_WORDS, &fitted.raw.bags[i]);
            if let Some(diff) = &fitted.diff {
                write_bag(row, (r * channels + 1) * NUM_WORDS, &diff.bags[i]);
            }
        }
    }

    let models_raw = per_draw.iter().map(|f| f.raw.model.clone()).collect();
    let models_diff = if params.use_diff {
        Some(
            per_draw
                .iter()
                .map(|f| f.diff.as_ref().expect("diff fitted").model.clone())
                .collect(),
        )
    } else {
        None
    };
    let transform = FittedTransform {
        params: params.clone(),
        draws,
        models_raw,
        models_diff,
        n_train: n,
    };
    Ok((transform, x))
}

/// Applies a fitted transform to new series without refitting. Row layout
/// matches [`fit`] exactly.
pub fn transform(ft: &FittedTransform, dataset: &LabeledDataset) -> Result<Array2<f64>> {
    for (i, s) in dataset.series().iter().enumerate() {
        if s.len() != ft.n_train {
            return Err(Error::ShapeMismatch(format!(
                "series {i} has length {}, the model was fitted on length {}",
                s.len(),
                ft.n_train
            )));
        }
    }
    let dim = ft.feature_dim();
    let channels = ft.params.channels();
    let rows = dataset
        .series()
        .par_iter()
        .map(|s| -> Result<Vec<f64>> {
            let mut row = vec![0.0; dim];
            let diff = if ft.params.use_diff {
                Some(s.first_order_diff()?)
            } else {
                None
            };
            for (r, draw) in ft.draws.iter().enumerate() {
                let bag = transform_channel(s, draw, &ft.models_raw[r])?;
                write_bag(&mut row, (r * channels) * NUM_WORDS, &bag);
                if let (Some(diff), Some(models)) = (&diff, &ft.models_diff) {
                    let bag = transform_channel(diff, draw, &models[r])?;
                    write_bag(&mut row, (r * channels + 1) * NUM_WORDS, &bag);
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let m = rows.len();
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((m, dim), flat)
        .map_err(|e| Error::ShapeMismatch(e.to_string()))
}

/// Bytes needed to hold the dense count matrix for `m` series:
/// `256 * r_max * m * channels * 4` (counts are 32-bit).
pub fn memory_estimate(m: usize, r_max: usize, use_diff: bool) -> u64 {
    let channels: u64 = if use_diff { 2 } else { 1 };
    NUM_WORDS as u64 * r_max as u64 * m as u64 * channels * 4
}
