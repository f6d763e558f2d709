//! Fixed 256-slot word-count dictionaries.

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::sfa::{scale_window_into, SfaModel};

/// Dictionary size: every window maps into one of 256 slots regardless of
/// the word length (shorter words just leave the upper slots at zero), so
/// the global feature layout depends only on the ensemble size.
pub const NUM_WORDS: usize = 256;

/// Word counts for one series under one discretizer. Counts always sum to
/// the number of step-1 windows, `n - w + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BagOfWords {
    counts: [u32; NUM_WORDS],
}

impl BagOfWords {
    pub fn counts(&self) -> &[u32; NUM_WORDS] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }
}

/// Slides a width-`w`, step-1 window over the (already dilated) series and
/// tallies each window's word.
pub fn bag_of_words(t_dilated: &TimeSeries, model: &SfaModel) -> Result<BagOfWords> {
    let w = model.config().window_length;
    let values = t_dilated.values();
    if values.len() < w {
        return Err(Error::InvalidWindow {
            w,
            n: values.len(),
        });
    }
    let mut counts = [0u32; NUM_WORDS];
    let mut scaled = vec![0.0; w];
    for window in values.windows(w) {
        scale_window_into(window, model.config().scale_std, &mut scaled);
        counts[model.word_from_scaled(&scaled).index()] += 1;
    }
    Ok(BagOfWords { counts })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::sfa::{fit_sfa, BinningStrategy, SfaConfig};

    fn fit_on(series: &TimeSeries, config: &SfaConfig) -> SfaModel {
        let w = config.window_length;
        fit_sfa(series.values().windows(w), config).unwrap()
    }

    #[test]
    fn counts_sum_to_window_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = TimeSeries::new((0..10).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let config = SfaConfig::new(4, 6, BinningStrategy::EquiDepth, true).unwrap();
        let model = fit_on(&t, &config);
        let bag = bag_of_words(&t, &model).unwrap();
        assert_eq!(bag.total(), 7);
    }

    #[test]
    fn constant_series_fills_one_slot() {
        let t = TimeSeries::new(vec![2.5; 30]).unwrap();
        let config = SfaConfig::new(6, 7, BinningStrategy::EquiWidth, true).unwrap();
        let model = fit_on(&t, &config);
        let bag = bag_of_words(&t, &model).unwrap();
        let nonzero: Vec<(usize, u32)> = bag
            .counts()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i, c))
            .collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].1, 30 - 6 + 1);
    }

    #[test]
    fn matches_window_by_window_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let t = TimeSeries::new((0..60).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let config = SfaConfig::new(9, 8, BinningStrategy::EquiDepth, true).unwrap();
        let model = fit_on(&t, &config);
        let bag = bag_of_words(&t, &model).unwrap();

        let mut expected = [0u32; NUM_WORDS];
        for window in t.values().windows(9) {
            expected[model.transform_word(window).unwrap().index()] += 1;
        }
        assert_eq!(bag.counts(), &expected);
    }

    #[test]
    fn short_words_never_touch_upper_slots() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let t = TimeSeries::new((0..80).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let config = SfaConfig::new(10, 7, BinningStrategy::EquiWidth, true).unwrap();
        let model = fit_on(&t, &config);
        let bag = bag_of_words(&t, &model).unwrap();
        assert!(bag.counts()[128..].iter().all(|&c| c == 0));
        assert_eq!(bag.total(), 80 - 10 + 1);
    }

    #[test]
    fn repeated_calls_are_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let t = TimeSeries::new((0..40).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let config = SfaConfig::new(5, 6, BinningStrategy::EquiDepth, true).unwrap();
        let model = fit_on(&t, &config);
        assert_eq!(
            bag_of_words(&t, &model).unwrap(),
            bag_of_words(&t, &model).unwrap()
        );
    }

    #[test]
    fn rejects_series_shorter_than_window() {
        let t = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        let long = TimeSeries::new((0..12).map(|i| i as f64).collect()).unwrap();
        let config = SfaConfig::new(6, 7, BinningStrategy::EquiDepth, true).unwrap();
        let model = fit_on(&long, &config);
        assert!(matches!(
            bag_of_words(&t, &model),
            Err(Error::InvalidWindow { w: 6, n: 3 })
        ));
    }
}
