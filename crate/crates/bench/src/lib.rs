//! Data generators shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsdict_core::{ClassLabel, LabeledDataset, TimeSeries};

/// Deterministic random series of length `n`.
pub fn random_series(n: usize, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TimeSeries::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

/// Two-class dataset of noisy sinusoids, `m` series of length `n`.
pub fn sinusoid_dataset(m: usize, n: usize, seed: u64) -> LabeledDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut series = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    for i in 0..m {
        let period = if i % 2 == 0 { 32.0 } else { 16.0 };
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let values = (0..n)
            .map(|j| {
                (std::f64::consts::TAU * j as f64 / period + phase).sin()
                    + rng.gen_range(-0.3..0.3)
            })
            .collect();
        series.push(TimeSeries::new(values).unwrap());
        labels.push(ClassLabel::new(format!("{}", i % 2 + 1)).unwrap());
    }
    LabeledDataset::new(series, labels).unwrap()
}
