//! Dilation realized as a reordering of the series.
//!
//! A dilated sliding window (gap of `d` between the values a window sees)
//! over `T` is equivalent to a plain step-1 sliding window over a reordered
//! copy of `T`: take the `d` down-sampled strands starting at offsets
//! `0..d` and concatenate them. Every dilated subsequence of `T` then shows
//! up as a contiguous window of the reordered series, so downstream windowed
//! code needs no dilation support at all. The price is `(w-1)(d-1)` extra
//! windows that straddle strand boundaries; for realistic lengths these are
//! noise.

use rand::Rng;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Gap width between the values a dilated window sees; always at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DilationRate(usize);

impl DilationRate {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroDilation);
        }
        Ok(Self(d))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Reorders `t` so that a step-1 sliding window sees dilated content.
///
/// Returns the concatenation of the down-sampled strands `t[i..].step_by(d)`
/// for `i = 0..d`, in offset order. The output has the same length and the
/// same value multiset as the input; `d = 1` returns the series unchanged.
pub fn apply_dilation(t: &TimeSeries, d: DilationRate) -> Result<TimeSeries> {
    let n = t.len();
    let d = d.get();
    if d > n {
        return Err(Error::InvalidDilation { d, n });
    }
    let values = t.values();
    let mut out = Vec::with_capacity(n);
    for offset in 0..d {
        out.extend(values[offset..].iter().step_by(d));
    }
    TimeSeries::new(out)
}

/// Largest dilation for which a dilated window of length `w` still fits in
/// `n` points: `floor((n-1) / (w-1))`.
pub fn max_dilation(n: usize, w: usize) -> Result<usize> {
    if w < 2 || w > n {
        return Err(Error::InvalidWindow { w, n });
    }
    Ok((n - 1) / (w - 1))
}

/// Draws a dilation rate with an exponent uniform on
/// `[0, log2((n-1)/(w-1))]` and returns `floor(2^x)`.
///
/// The exponent bound uses the real ratio, so the largest admissible rate
/// keeps a small but positive probability; small rates dominate. The result
/// always lies in `[1, max_dilation(n, w)]`.
pub fn sample_dilation<R: Rng + ?Sized>(rng: &mut R, n: usize, w: usize) -> Result<DilationRate> {
    let max_d = max_dilation(n, w)?;
    let ratio = (n - 1) as f64 / (w - 1) as f64;
    let exponent = rng.gen_range(0.0..=ratio.log2());
    let d = (2f64.powf(exponent).floor() as usize).clamp(1, max_d);
    DilationRate::new(d)
}
