//! The end-to-end classifier: fitted transform plus ridge model.

use crate::ensemble::{self, EnsembleParams, FittedTransform};
use crate::error::{Error, Result};
use crate::ridge::{self, AlphaGrid, RidgeModel};
use crate::series::{ClassLabel, LabeledDataset};

/// A fully fitted classifier, ready to predict or persist.
#[derive(Clone, Debug)]
pub struct TrainedModel {
    transform: FittedTransform,
    ridge: RidgeModel,
}

impl TrainedModel {
    pub fn new(transform: FittedTransform, ridge: RidgeModel) -> Result<Self> {
        if ridge.num_features() != transform.feature_dim() {
            return Err(Error::ShapeMismatch(format!(
                "ridge model expects {} features, the transform produces {}",
                ridge.num_features(),
                transform.feature_dim()
            )));
        }
        Ok(Self { transform, ridge })
    }

    /// Fits the transform and the classifier on a labeled dataset.
    pub fn fit(dataset: &LabeledDataset, params: &EnsembleParams) -> Result<Self> {
        let (transform, x) = ensemble::fit(dataset, params)?;
        let ridge = ridge::fit_ridge_cv(x.view(), dataset.labels(), &AlphaGrid::log_spaced())?;
        Ok(Self { transform, ridge })
    }

    /// Predicts one label per series. Labels on the input dataset are
    /// ignored.
    pub fn predict(&self, dataset: &LabeledDataset) -> Result<Vec<ClassLabel>> {
        let x = ensemble::transform(&self.transform, dataset)?;
        ridge::predict(&self.ridge, x.view())
    }

    pub fn transform(&self) -> &FittedTransform {
        &self.transform
    }

    pub fn ridge(&self) -> &RidgeModel {
        &self.ridge
    }

    pub fn feature_dim(&self) -> usize {
        self.transform.feature_dim()
    }
}
