//! Shared helpers for the CLI and acceptance tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsdict_core::{ClassLabel, LabeledDataset, TimeSeries};

/// Standard normal draw via Box-Muller.
pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Two classes of noisy sinusoids with random phases; labels "1" and "2".
pub fn sinusoid_dataset(
    m_per_class: usize,
    n: usize,
    periods: [f64; 2],
    noise: f64,
    seed: u64,
) -> LabeledDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut series = Vec::new();
    let mut labels = Vec::new();
    for (class, period) in periods.iter().enumerate() {
        for _ in 0..m_per_class {
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            let values: Vec<f64> = (0..n)
                .map(|i| {
                    (std::f64::consts::TAU * i as f64 / period + phase).sin()
                        + noise * gaussian(&mut rng)
                })
                .collect();
            series.push(TimeSeries::new(values).unwrap());
            labels.push(ClassLabel::new(format!("{}", class + 1)).unwrap());
        }
    }
    LabeledDataset::new(series, labels).unwrap()
}

/// Random-walk noise dataset with two labels, for format/flow tests.
pub fn noise_dataset(m: usize, n: usize, seed: u64) -> LabeledDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let series = (0..m)
        .map(|_| {
            let mut level = 0.0;
            let values = (0..n)
                .map(|_| {
                    level += rng.gen_range(-1.0..1.0);
                    level
                })
                .collect();
            TimeSeries::new(values).unwrap()
        })
        .collect();
    let labels = (0..m)
        .map(|i| ClassLabel::new(format!("{}", i % 2 + 1)).unwrap())
        .collect();
    LabeledDataset::new(series, labels).unwrap()
}
