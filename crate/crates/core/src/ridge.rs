//! One-vs-rest ridge regression with exact leave-one-out cross-validation.
//!
//! Labels are encoded as +/-1 targets (a single output for the binary
//! case), features and targets are mean-centered (no variance scaling), and
//! the regularization strength is picked from a fixed grid by exact LOO
//! error. With `G = Xc * Xc^T = U diag(lambda) U^T` computed once, every
//! alpha reuses the same decomposition:
//!
//! * fitted values  `yhat = U diag(lambda / (lambda + alpha)) U^T yc`,
//! * LOO residuals  `e_i = r_i / (1 - h_ii)` with
//!   `1 - h_ii = sum_k U_ik^2 * alpha / (lambda_k + alpha)`, a positive sum
//!   that avoids the cancellation in `1 - h_ii` directly,
//! * weights at the chosen alpha via the dual form
//!   `w = Xc^T (G + alpha I)^{-1} yc`, which solves the primal normal
//!   equations exactly for any alpha > 0.
//!
//! Scores are computed row by row, so batched prediction and single-row
//! prediction agree bit for bit.

use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::series::ClassLabel;

/// The 10 candidate regularization strengths, logarithmically spaced from
/// 1e-1 to 1e5 inclusive.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaGrid {
    values: Vec<f64>,
}

impl AlphaGrid {
    pub fn log_spaced() -> Self {
        let values = (0..10)
            .map(|i| {
                // exponent (6*i - 9) / 9 walks -1 .. 5
                let num: i32 = 6 * i - 9;
                if num % 9 == 0 {
                    10f64.powi(num / 9)
                } else {
                    10f64.powf(f64::from(num) / 9.0)
                }
            })
            .collect();
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl Default for AlphaGrid {
    fn default() -> Self {
        Self::log_spaced()
    }
}

/// Fitted linear classifier. `weights` has one row per output: a single row
/// for two classes, one row per class otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct RidgeModel {
    classes: Vec<ClassLabel>,
    weights: Vec<Vec<f64>>,
    intercepts: Vec<f64>,
    alpha: f64,
    feature_means: Vec<f64>,
}

impl RidgeModel {
    /// Reassembles a model from its serialized parts.
    pub fn from_parts(
        classes: Vec<ClassLabel>,
        weights: Vec<Vec<f64>>,
        intercepts: Vec<f64>,
        alpha: f64,
        feature_means: Vec<f64>,
    ) -> Result<Self> {
        if classes.len() < 2 {
            return Err(Error::InvalidParams(format!(
                "need at least 2 classes, got {}",
                classes.len()
            )));
        }
        let outputs = if classes.len() == 2 { 1 } else { classes.len() };
        if weights.len() != outputs || intercepts.len() != outputs {
            return Err(Error::InvalidParams(format!(
                "expected {outputs} weight rows and intercepts, got {} and {}",
                weights.len(),
                intercepts.len()
            )));
        }
        let dim = feature_means.len();
        if weights.iter().any(|w| w.len() != dim) {
            return Err(Error::InvalidParams(
                "weight rows must match the feature mean vector".into(),
            ));
        }
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(Self {
            classes,
            weights,
            intercepts,
            alpha,
            feature_means,
        })
    }

    pub fn classes(&self) -> &[ClassLabel] {
        &self.classes
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn intercepts(&self) -> &[f64] {
        &self.intercepts
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn feature_means(&self) -> &[f64] {
        &self.feature_means
    }

    pub fn num_features(&self) -> usize {
        self.feature_means.len()
    }
}

struct Prepared {
    classes: Vec<ClassLabel>,
    xc: Array2<f64>,
    yc: Array2<f64>,
    x_means: Array1<f64>,
    y_means: Array1<f64>,
    eigvals: Array1<f64>,
    /// columns are eigenvectors of the Gram matrix
    eigvecs: Array2<f64>,
}

fn sorted_classes(labels: &[ClassLabel]) -> Vec<ClassLabel> {
    let mut classes: Vec<ClassLabel> = labels.to_vec();
    classes.sort();
    classes.dedup();
    classes
}

/// One-vs-rest +/-1 targets; for two classes a single column that is +1 on
/// the second class.
fn encode_targets(labels: &[ClassLabel], classes: &[ClassLabel]) -> Array2<f64> {
    let m = labels.len();
    if classes.len() == 2 {
        let mut y = Array2::zeros((m, 1));
        for (i, label) in labels.iter().enumerate() {
            y[[i, 0]] = if label == &classes[1] { 1.0 } else { -1.0 };
        }
        y
    } else {
        let mut y = Array2::from_elem((m, classes.len()), -1.0);
        for (i, label) in labels.iter().enumerate() {
            let k = classes.iter().position(|c| c == label).expect("known class");
            y[[i, k]] = 1.0;
        }
        y
    }
}

fn symmetric_eigen(gram: &Array2<f64>) -> (Array1<f64>, Array2<f64>) {
    let m = gram.nrows();
    let g = nalgebra::DMatrix::from_row_iterator(m, m, gram.iter().copied());
    let eig = nalgebra::SymmetricEigen::new(g);
    let vals = Array1::from_iter(eig.eigenvalues.iter().copied());
    let mut vecs = Array2::zeros((m, m));
    for i in 0..m {
        for j in 0..m {
            vecs[[i, j]] = eig.eigenvectors[(i, j)];
        }
    }
    (vals, vecs)
}

fn prepare(x: ArrayView2<f64>, labels: &[ClassLabel]) -> Result<Prepared> {
    let m = x.nrows();
    if labels.len() != m {
        return Err(Error::ShapeMismatch(format!(
            "{m} feature rows but {} labels",
            labels.len()
        )));
    }
    if m < 3 {
        return Err(Error::Fit(format!("need at least 3 rows, got {m}")));
    }
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::Fit("non-finite feature value".into()));
    }
    let classes = sorted_classes(labels);
    if classes.len() < 2 {
        return Err(Error::Fit(format!(
            "need at least 2 classes, got {}",
            classes.len()
        )));
    }

    let y = encode_targets(labels, &classes);
    let x_means = x.mean_axis(Axis(0)).expect("m >= 3");
    let y_means = y.mean_axis(Axis(0)).expect("m >= 3");
    let xc = &x - &x_means;
    let yc = &y - &y_means;
    let gram = xc.dot(&xc.t());
    let (eigvals, eigvecs) = symmetric_eigen(&gram);
    Ok(Prepared {
        classes,
        xc,
        yc,
        x_means,
        y_means,
        eigvals,
        eigvecs,
    })
}

/// Mean squared LOO error at one alpha, summed over outputs.
fn loo_mse(p: &Prepared, alpha: f64) -> f64 {
    let m = p.xc.nrows();
    let shrink = p.eigvals.mapv(|l| l / (l + alpha));
    let complement = p.eigvals.mapv(|l| alpha / (l + alpha));

    let t = p.eigvecs.t().dot(&p.yc);
    let fitted = p.eigvecs.dot(&(&t * &shrink.view().insert_axis(Axis(1))));
    let resid = &p.yc - &fitted;

    let mut one_minus_h = Array1::zeros(m);
    for i in 0..m {
        let mut s = 0.0;
        for e in 0..m {
            s += p.eigvecs[[i, e]] * p.eigvecs[[i, e]] * complement[e];
        }
        one_minus_h[i] = s;
    }

    let outputs = p.yc.ncols();
    let mut total = 0.0;
    for k in 0..outputs {
        let mut sum = 0.0;
        for i in 0..m {
            let e = resid[[i, k]] / one_minus_h[i];
            sum += e * e;
        }
        total += sum / m as f64;
    }
    total
}

fn refit(p: &Prepared, alpha: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let inv = p.eigvals.mapv(|l| 1.0 / (l + alpha));
    let t = p.eigvecs.t().dot(&p.yc);
    let beta = p.eigvecs.dot(&(&t * &inv.view().insert_axis(Axis(1))));
    let wmat = p.xc.t().dot(&beta); // dim x outputs

    let outputs = p.yc.ncols();
    let mut weights = Vec::with_capacity(outputs);
    let mut intercepts = Vec::with_capacity(outputs);
    for k in 0..outputs {
        let w: Vec<f64> = wmat.column(k).to_vec();
        let shift: f64 = p
            .x_means
            .iter()
            .zip(&w)
            .map(|(mu, wj)| mu * wj)
            .sum();
        intercepts.push(p.y_means[k] - shift);
        weights.push(w);
    }
    (weights, intercepts)
}

/// Per-alpha LOO errors over the grid, for diagnostics and oracle checks.
pub fn loo_mse_per_alpha(
    x: ArrayView2<f64>,
    labels: &[ClassLabel],
    grid: &AlphaGrid,
) -> Result<Vec<f64>> {
    let p = prepare(x, labels)?;
    Ok(grid.values().iter().map(|&a| loo_mse(&p, a)).collect())
}

/// Fits the classifier, choosing alpha by minimal LOO error (ties go to the
/// smaller alpha) and refitting on all rows at the winner.
pub fn fit_ridge_cv(
    x: ArrayView2<f64>,
    labels: &[ClassLabel],
    grid: &AlphaGrid,
) -> Result<RidgeModel> {
    let p = prepare(x, labels)?;
    let mut best_alpha = grid.values()[0];
    let mut best_err = f64::INFINITY;
    for &alpha in grid.values() {
        let err = loo_mse(&p, alpha);
        if err < best_err {
            best_err = err;
            best_alpha = alpha;
        }
    }
    let (weights, intercepts) = refit(&p, best_alpha);
    Ok(RidgeModel {
        classes: p.classes,
        weights,
        intercepts,
        alpha: best_alpha,
        feature_means: p.x_means.to_vec(),
    })
}

/// Raw decision scores, one row per input, one column per output. Each row
/// is computed independently of the rest of the batch.
pub fn decision_function(model: &RidgeModel, x: ArrayView2<f64>) -> Result<Array2<f64>> {
    let dim = model.num_features();
    if x.ncols() != dim {
        return Err(Error::ShapeMismatch(format!(
            "input has {} features, the model expects {dim}",
            x.ncols()
        )));
    }
    let outputs = model.weights.len();
    let mut scores = Array2::zeros((x.nrows(), outputs));
    for (i, row) in x.rows().into_iter().enumerate() {
        for (k, (w, &b)) in model.weights.iter().zip(&model.intercepts).enumerate() {
            let s: f64 = row.iter().zip(w).map(|(xj, wj)| xj * wj).sum();
            scores[[i, k]] = s + b;
        }
    }
    Ok(scores)
}

/// Predicted labels: sign decision for two classes, argmax otherwise, with
/// ties going to the earlier class.
pub fn predict(model: &RidgeModel, x: ArrayView2<f64>) -> Result<Vec<ClassLabel>> {
    let scores = decision_function(model, x)?;
    let labels = scores
        .rows()
        .into_iter()
        .map(|row| {
            if model.classes.len() == 2 {
                if row[0] > 0.0 {
                    model.classes[1].clone()
                } else {
                    model.classes[0].clone()
                }
            } else {
                let mut best = 0;
                for k in 1..row.len() {
                    if row[k] > row[best] {
                        best = k;
                    }
                }
                model.classes[best].clone()
            }
        })
        .collect();
    Ok(labels)
}

/// Fraction of predictions matching the reference labels.
pub fn accuracy(predicted: &[ClassLabel], truth: &[ClassLabel]) -> f64 {
    assert_eq!(predicted.len(), truth.len());
    assert!(!predicted.is_empty());
    let hits = predicted
        .iter()
        .zip(truth)
        .filter(|(p, t)| p == t)
        .count();
    hits as f64 / predicted.len() as f64
}
