//! Time series classification through random dilated word dictionaries.
//!
//! A series is reordered so that plain sliding windows see dilated content
//! ([`dilation`]), each window is condensed into a short binary word by a
//! variance-guided symbolic Fourier transform ([`sfa`]), and word counts
//! land in fixed 256-slot dictionaries ([`dictionary`]). An ensemble of
//! randomized configurations ([`ensemble`]) concatenates those dictionaries
//! into one dense feature vector of predictable size, which a ridge
//! classifier with exact leave-one-out cross-validation separates
//! ([`ridge`]). Dataset ingestion and model persistence live in [`io`].

pub mod dictionary;
pub mod dilation;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod model;
pub mod ridge;
pub mod series;
pub mod sfa;

pub use dictionary::{BagOfWords, NUM_WORDS};
pub use dilation::DilationRate;
pub use ensemble::{ConfigDraw, EnsembleParams, FittedTransform};
pub use error::{Error, Result};
pub use model::TrainedModel;
pub use ridge::{AlphaGrid, RidgeModel};
pub use series::{ClassLabel, LabeledDataset, TimeSeries, ValidationReport};
pub use sfa::{BinningStrategy, SfaConfig, SfaModel, Word};
