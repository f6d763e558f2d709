//! Symbolic Fourier approximation with a two-symbol alphabet.
//!
//! A window of `w` real values is mapped to a short binary word in three
//! steps:
//!
//! 1. the window is scaled to unit standard deviation (amplitude
//!    invariance; a guard skips the division for near-constant windows),
//! 2. a one-sided DFT turns it into interleaved real/imaginary components
//!    `[re0, im0, re1, im1, ...]` for frequencies `k = 0..floor(w/2)`; the
//!    mean component `re0` is kept,
//! 3. each of the `l` components chosen at fit time is compared against its
//!    breakpoint: strictly below gives bit 0, at-or-above gives bit 1. The
//!    first (highest-variance) component lands in the most significant bit.
//!
//! Component selection is unsupervised: the `l` components with the highest
//! empirical variance across all training windows win, ties going to the
//! lower index. Wide spread means wide bins, so near-identical windows keep
//! mapping to the same word. Breakpoints come from equi-depth (median) or
//! equi-width (range midpoint) binning of the training values.
//!
//! Fit and transform share one table-driven summation path
//! ([`TrigTable`]), so a window seen at fit time produces bit-identical
//! component values at transform time; breakpoint ties behave the same on
//! both sides. The standalone [`window_dft`] entry point is FFT-backed and
//! is held to the direct-summation definition within 1e-9 per component.

use std::f64::consts::TAU;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed two-symbol alphabet: one breakpoint per component, one bit per
/// symbol.
pub const ALPHABET_SIZE: usize = 2;

/// Standard deviations below this are treated as 1 when scaling windows.
pub const STD_GUARD: f64 = 1e-8;

/// Number of interleaved real/imaginary components of a length-`w` window:
/// `2 * (floor(w/2) + 1)`.
pub fn num_components(w: usize) -> usize {
    2 * (w / 2 + 1)
}

/// Binning strategy for deriving a component's breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BinningStrategy {
    /// Threshold at the empirical median.
    EquiDepth,
    /// Threshold at the midpoint of the observed range.
    EquiWidth,
}

impl std::fmt::Display for BinningStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BinningStrategy::EquiDepth => "equi-depth",
            BinningStrategy::EquiWidth => "equi-width",
        })
    }
}

/// Per-discretizer configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SfaConfig {
    /// Window length `w`, at least 2.
    pub window_length: usize,
    /// Word length `l`: number of components kept, in `1..=8` and at most
    /// `num_components(w)`.
    pub word_length: usize,
    pub binning: BinningStrategy,
    /// Scale each window to unit standard deviation before the transform.
    pub scale_std: bool,
}

impl SfaConfig {
    pub fn new(
        window_length: usize,
        word_length: usize,
        binning: BinningStrategy,
        scale_std: bool,
    ) -> Result<Self> {
        if window_length < 2 {
            return Err(Error::InvalidWindow {
                w: window_length,
                n: window_length,
            });
        }
        if word_length == 0 || word_length > 8 || word_length > num_components(window_length) {
            return Err(Error::InvalidParams(format!(
                "word length {word_length} out of range for window length {window_length}"
            )));
        }
        Ok(Self {
            window_length,
            word_length,
            binning,
            scale_std,
        })
    }
}

/// A word code in `[0, 2^l)`; with `l = 8` one of 256 values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Word(u8);

impl Word {
    pub fn code(self) -> u8 {
        self.0
    }

    /// Slot index into a 256-slot dictionary.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Scale factor for a window: its population standard deviation, or 1 when
/// that falls below [`STD_GUARD`].
pub(crate) fn window_scale(window: &[f64]) -> f64 {
    let n = window.len() as f64;
    let mean = window.iter().sum::<f64>() / n;
    let var = window
        .iter()
        .map(|x| {
            let c = x - mean;
            c * c
        })
        .sum::<f64>()
        / n;
    let std = var.sqrt();
    if std < STD_GUARD {
        1.0
    } else {
        std
    }
}

pub(crate) fn scale_window_into(window: &[f64], scale_std: bool, out: &mut [f64]) {
    debug_assert_eq!(window.len(), out.len());
    if scale_std {
        let scale = window_scale(window);
        for (o, &x) in out.iter_mut().zip(window) {
            *o = x / scale;
        }
    } else {
        out.copy_from_slice(window);
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Precomputed cos/-sin rows, one per interleaved component. Component `p`
/// is `re(k)` for even `p` and `im(k)` for odd `p`, with `k = p / 2`; its
/// value for a window `x` is the plain sum `dot(x, rows[p])`.
///
/// The `im0` row and, for even `w`, the Nyquist imaginary row are exactly
/// zero for real input and are stored as zeros.
pub(crate) struct TrigTable {
    rows: Vec<Vec<f64>>,
}

impl TrigTable {
    pub(crate) fn new(w: usize) -> Self {
        let comps = num_components(w);
        let mut rows = Vec::with_capacity(comps);
        for p in 0..comps {
            let k = p / 2;
            let mut row = vec![0.0; w];
            let forced_zero = p == 1 || (w.is_multiple_of(2) && p == comps - 1);
            if !forced_zero {
                for (j, slot) in row.iter_mut().enumerate() {
                    let angle = TAU * (j * k) as f64 / w as f64;
                    *slot = if p % 2 == 0 { angle.cos() } else { -angle.sin() };
                }
            }
            rows.push(row);
        }
        Self { rows }
    }

    pub(crate) fn num_components(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn row(&self, p: usize) -> &[f64] {
        &self.rows[p]
    }

    fn coefficients_into(&self, scaled: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = dot(scaled, row);
        }
    }
}

/// Full one-sided DFT of one window as interleaved real/imaginary parts,
/// `c_k = sum_j x_j * exp(-2*pi*i*j*k / w)` for `k = 0..floor(w/2)`.
///
/// With `scale_std` the window is divided by its standard deviation first
/// (see [`STD_GUARD`]). `im0` and, for even `w`, the Nyquist imaginary part
/// are exactly zero.
pub fn window_dft(window: &[f64], scale_std: bool) -> Vec<f64> {
    let w = window.len();
    let scale = if scale_std { window_scale(window) } else { 1.0 };
    let mut buf: Vec<Complex<f64>> = window
        .iter()
        .map(|&x| Complex::new(x / scale, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(w).process(&mut buf);
    let mut out = Vec::with_capacity(num_components(w));
    for c in buf.iter().take(w / 2 + 1) {
        out.push(c.re);
        out.push(c.im);
    }
    // exactly zero for real input regardless of the FFT algorithm
    out[1] = 0.0;
    if w.is_multiple_of(2) {
        let last = out.len() - 1;
        out[last] = 0.0;
    }
    out
}

/// Row-major matrix of per-window coefficient vectors.
#[derive(Clone, Debug)]
pub struct CoefficientMatrix {
    data: Vec<f64>,
    num_components: usize,
}

impl CoefficientMatrix {
    pub fn new(num_components: usize) -> Self {
        Self {
            data: Vec::new(),
            num_components,
        }
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.num_components);
        self.data.extend_from_slice(row);
    }

    pub fn num_rows(&self) -> usize {
        self.data.len().checked_div(self.num_components).unwrap_or(0)
    }

    pub fn num_components(&self) -> usize {
        self.num_components
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let c = self.num_components;
        &self.data[i * c..(i + 1) * c]
    }

    pub fn column_values(&self, p: usize) -> Vec<f64> {
        (0..self.num_rows()).map(|i| self.row(i)[p]).collect()
    }
}

/// Picks the `word_length` component indices with the highest empirical
/// variance across the training windows, sorted by descending variance,
/// ties to the lower index. Variance uses a two-pass formula.
pub fn select_coefficients(matrix: &CoefficientMatrix, word_length: usize) -> Result<Vec<usize>> {
    let rows = matrix.num_rows();
    let comps = matrix.num_components();
    if rows < 2 {
        return Err(Error::InsufficientData(format!(
            "variance selection needs at least 2 windows, got {rows}"
        )));
    }
    if word_length > comps {
        return Err(Error::InvalidParams(format!(
            "cannot select {word_length} of {comps} components"
        )));
    }

    let mut means = vec![0.0; comps];
    let mut mins = vec![f64::INFINITY; comps];
    let mut maxs = vec![f64::NEG_INFINITY; comps];
    for i in 0..rows {
        for (p, v) in matrix.row(i).iter().enumerate() {
            means[p] += v;
            mins[p] = mins[p].min(*v);
            maxs[p] = maxs[p].max(*v);
        }
    }
    for m in &mut means {
        *m /= rows as f64;
    }
    let mut variances = vec![0.0; comps];
    for i in 0..rows {
        for (p, v) in matrix.row(i).iter().enumerate() {
            let c = v - means[p];
            variances[p] += c * c;
        }
    }
    for (p, v) in variances.iter_mut().enumerate() {
        // a constant column has exactly zero variance; without the guard,
        // rounding in the mean leaves ~1e-34 noise that scrambles tie order
        *v = if mins[p] == maxs[p] { 0.0 } else { *v / rows as f64 };
    }

    let mut order: Vec<usize> = (0..comps).collect();
    order.sort_by(|&a, &b| variances[b].total_cmp(&variances[a]).then(a.cmp(&b)));
    order.truncate(word_length);
    Ok(order)
}

/// Breakpoint for one component from its training values.
///
/// Equi-depth takes the empirical median (mean of the two central order
/// statistics for even counts); equi-width takes `(min + max) / 2`. A
/// degenerate sample (`min == max`) yields that value under both strategies.
pub fn compute_breakpoints(values: &[f64], binning: BinningStrategy) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InsufficientData(
            "breakpoint estimation needs a non-empty sample".into(),
        ));
    }
    match binning {
        BinningStrategy::EquiDepth => {
            let mut sorted = values.to_vec();
            sorted.sort_by(f64::total_cmp);
            let n = sorted.len();
            if n % 2 == 1 {
                Ok(sorted[n / 2])
            } else {
                Ok((sorted[n / 2 - 1] + sorted[n / 2]) / 2.0)
            }
        }
        BinningStrategy::EquiWidth => {
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for &v in values {
                min = min.min(v);
                max = max.max(v);
            }
            Ok((min + max) / 2.0)
        }
    }
}

/// A fitted discretizer: the selected component indices (descending
/// variance) and one breakpoint per selected component.
#[derive(Clone, Debug)]
pub struct SfaModel {
    config: SfaConfig,
    selected: Vec<usize>,
    breakpoints: Vec<f64>,
    // trig rows for the selected components, rebuilt deterministically from
    // (w, selected); never serialized
    rows: Vec<Vec<f64>>,
}

impl SfaModel {
    pub fn new(config: SfaConfig, selected: Vec<usize>, breakpoints: Vec<f64>) -> Result<Self> {
        let l = config.word_length;
        if selected.len() != l || breakpoints.len() != l {
            return Err(Error::InvalidParams(format!(
                "model needs {l} selected components and breakpoints, got {} and {}",
                selected.len(),
                breakpoints.len()
            )));
        }
        let comps = num_components(config.window_length);
        let mut seen = vec![false; comps];
        for &p in &selected {
            if p >= comps {
                return Err(Error::InvalidParams(format!(
                    "component index {p} out of range (have {comps})"
                )));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParams(format!(
                    "component index {p} selected twice"
                )));
            }
        }
        let table = TrigTable::new(config.window_length);
        let rows = selected.iter().map(|&p| table.row(p).to_vec()).collect();
        Ok(Self {
            config,
            selected,
            breakpoints,
            rows,
        })
    }

    pub fn config(&self) -> &SfaConfig {
        &self.config
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Encodes one window as a word. Bit `i` of the selection order (0 =
    /// highest variance) lands at position `l - 1 - i`; a component value
    /// at-or-above its breakpoint sets the bit.
    pub fn transform_word(&self, window: &[f64]) -> Result<Word> {
        let w = self.config.window_length;
        if window.len() != w {
            return Err(Error::InvalidWindow {
                w,
                n: window.len(),
            });
        }
        let mut scaled = vec![0.0; w];
        scale_window_into(window, self.config.scale_std, &mut scaled);
        Ok(self.word_from_scaled(&scaled))
    }

    /// Same as [`Self::transform_word`] but over an already-scaled window;
    /// the hot path for bag construction.
    pub(crate) fn word_from_scaled(&self, scaled: &[f64]) -> Word {
        let l = self.config.word_length;
        let mut code = 0u8;
        for (i, (row, &bp)) in self.rows.iter().zip(&self.breakpoints).enumerate() {
            if dot(scaled, row) >= bp {
                code |= 1 << (l - 1 - i);
            }
        }
        Word(code)
    }
}

/// Fits a discretizer on a pool of training windows: computes every
/// window's full coefficient vector, selects components by variance, then
/// derives one breakpoint per selected component.
pub fn fit_sfa<'a, I>(windows: I, config: &SfaConfig) -> Result<SfaModel>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let w = config.window_length;
    let table = TrigTable::new(w);
    let comps = table.num_components();
    let mut matrix = CoefficientMatrix::new(comps);
    let mut scaled = vec![0.0; w];
    let mut row = vec![0.0; comps];
    for window in windows {
        if window.len() != w {
            return Err(Error::InvalidWindow {
                w,
                n: window.len(),
            });
        }
        scale_window_into(window, config.scale_std, &mut scaled);
        table.coefficients_into(&scaled, &mut row);
        matrix.push_row(&row);
    }
    if matrix.num_rows() < 2 {
        return Err(Error::InsufficientData(format!(
            "fitting needs at least 2 windows, got {}",
            matrix.num_rows()
        )));
    }
    let selected = select_coefficients(&matrix, config.word_length)?;
    let breakpoints = selected
        .iter()
        .map(|&p| compute_breakpoints(&matrix.column_values(p), config.binning))
        .collect::<Result<Vec<_>>>()?;
    SfaModel::new(config.clone(), selected, breakpoints)
}
