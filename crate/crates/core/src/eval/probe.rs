//! Multinomial logistic-regression probe trained by full-batch gradient
//! descent on standardized features.

use ndarray::{Array1, Array2, ArrayView1, Axis};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::folds::{complement, stratified_folds};
use super::CvScore;
use crate::encoder::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Standard deviations below this are replaced by it.
pub const SCALE_FLOOR: f64 = 1e-8;
const INIT_RANGE: f64 = 0.01;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2_lambda: f64,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            learning_rate: 0.1,
            epochs: 500,
            l2_lambda: 1e-3,
            seed: 0,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidArgument("epochs must be positive".into()));
        }
        if !(self.l2_lambda >= 0.0 && self.l2_lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "l2 penalty must be non-negative, got {}",
                self.l2_lambda
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProbe {
    pub mean: Array1<f64>,
    pub scale: Array1<f64>,
    /// `dim x classes`.
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
    /// Regularized objective before each epoch, then after the last.
    pub loss_history: Vec<f64>,
    /// Mean cross-entropy on the training rows after the last epoch.
    pub final_loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeScore {
    pub accuracy: f64,
    pub loss: f64,
}

fn log_softmax(logits: ArrayView1<f64>) -> Array1<f64> {
    let max = logits.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let lse = max + logits.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
    logits.mapv(|v| v - lse)
}

/// Mean cross-entropy of `labels` under the linear model.
fn data_loss(x: &Array2<f64>, labels: &[usize], w: &Array2<f64>, b: &Array1<f64>) -> f64 {
    let logits = x.dot(w) + b;
    let total: f64 = logits
        .axis_iter(Axis(0))
        .zip(labels)
        .map(|(row, &y)| -log_softmax(row)[y])
        .sum();
    total / labels.len() as f64
}

/// Objective `mean CE + l2 / 2 * |W|^2` and its gradient in `(W, b)`.
/// The bias is not penalized.
pub fn loss_and_gradient(
    x: &Array2<f64>,
    labels: &[usize],
    w: &Array2<f64>,
    b: &Array1<f64>,
    l2: f64,
) -> (f64, Array2<f64>, Array1<f64>) {
    let n = labels.len() as f64;
    let logits = x.dot(w) + b;
    let mut residual = Array2::zeros(logits.raw_dim());
    let mut ce = 0.0;
    for ((row, mut r), &y) in logits.axis_iter(Axis(0)).zip(residual.axis_iter_mut(Axis(0))).zip(labels) {
        let lp = log_softmax(row);
        ce -= lp[y];
        r.assign(&lp.mapv(f64::exp));
        r[y] -= 1.0;
    }
    let gw = x.t().dot(&residual) / n + w * l2;
    let gb = residual.sum_axis(Axis(0)) / n;
    let loss = ce / n + 0.5 * l2 * w.iter().map(|v| v * v).sum::<f64>();
    (loss, gw, gb)
}

fn standardize(x: &Array2<f64>, mean: &Array1<f64>, scale: &Array1<f64>) -> Array2<f64> {
    (x - mean) / scale
}

/// Trains on every row of `train`. A step that would raise the objective is
/// retried with half the learning rate, so the loss never increases.
pub fn train_linear_probe(train: &EmbeddingMatrix, config: &ProbeConfig) -> Result<LinearProbe> {
    config.validate()?;
    let mut present: Vec<usize> = train.labels.clone();
    present.sort_unstable();
    present.dedup();
    if present.len() < 2 {
        return Err(Error::SingleClass(present.len()));
    }
    let d = train.dim();
    let classes = train.class_count();
    let mean = train.rows.mean_axis(Axis(0)).expect("non-empty");
    let scale = train
        .rows
        .std_axis(Axis(0), 0.0)
        .mapv(|s| if s < SCALE_FLOOR { SCALE_FLOOR } else { s });
    let x = standardize(&train.rows, &mean, &scale);

    let mut rng = rng_from_seed(config.seed);
    let mut w = Array2::from_shape_simple_fn((d, classes), || rng.random_range(-INIT_RANGE..INIT_RANGE));
    let mut b = Array1::zeros(classes);
    let mut lr = config.learning_rate;
    let (mut loss, mut gw, mut gb) = loss_and_gradient(&x, &train.labels, &w, &b, config.l2_lambda);
    let mut history = Vec::with_capacity(config.epochs + 1);
    for _ in 0..config.epochs {
        history.push(loss);
        for _ in 0..MAX_HALVINGS {
            let w2 = &w - &(&gw * lr);
            let b2 = &b - &(&gb * lr);
            let next = loss_and_gradient(&x, &train.labels, &w2, &b2, config.l2_lambda);
            if next.0 <= loss {
                (w, b) = (w2, b2);
                (loss, gw, gb) = next;
                break;
            }
            lr *= 0.5;
        }
    }
    history.push(loss);
    let final_loss = data_loss(&x, &train.labels, &w, &b);
    Ok(LinearProbe {
        mean,
        scale,
        weights: w,
        bias: b,
        loss_history: history,
        final_loss,
    })
}

impl LinearProbe {
    pub fn classes(&self) -> usize {
        self.bias.len()
    }

    /// Arg-max class per row; ties go to the smallest class id.
    pub fn predict(&self, emb: &EmbeddingMatrix) -> Result<Vec<usize>> {
        let logits = self.logits(emb)?;
        Ok(logits
            .axis_iter(Axis(0))
            .map(|row| {
                let mut best = 0;
                for (c, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = c;
                    }
                }
                best
            })
            .collect())
    }

    fn logits(&self, emb: &EmbeddingMatrix) -> Result<Array2<f64>> {
        if emb.dim() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                found: emb.dim(),
            });
        }
        Ok(standardize(&emb.rows, &self.mean, &self.scale).dot(&self.weights) + &self.bias)
    }
}

/// Accuracy and mean cross-entropy of a trained probe on `emb`.
pub fn probe_eval(probe: &LinearProbe, emb: &EmbeddingMatrix) -> Result<ProbeScore> {
    if emb.is_empty() {
        return Err(Error::InvalidArgument("no rows to evaluate".into()));
    }
    if let Some(&y) = emb.labels.iter().find(|&&y| y >= probe.classes()) {
        return Err(Error::InvalidArgument(format!(
            "label {y} unseen by a probe with {} classes",
            probe.classes()
        )));
    }
    let pred = probe.predict(emb)?;
    let hits = pred.iter().zip(&emb.labels).filter(|(p, y)| p == y).count();
    let x = standardize(&emb.rows, &probe.mean, &probe.scale);
    Ok(ProbeScore {
        accuracy: hits as f64 / emb.len() as f64,
        loss: data_loss(&x, &emb.labels, &probe.weights, &probe.bias),
    })
}

/// Stratified cross-validated probe accuracy; `seed` fixes the folds and
/// `config.seed` the initial weights.
pub fn cross_validate_probe(
    emb: &EmbeddingMatrix,
    config: &ProbeConfig,
    folds: usize,
    seed: u64,
) -> Result<CvScore> {
    let splits = stratified_folds(&emb.labels, folds, seed)?;
    let accs = splits
        .par_iter()
        .map(|test_idx| {
            let train = emb.select(&complement(emb.len(), test_idx));
            let probe = train_linear_probe(&train, config)?;
            Ok(probe_eval(&probe, &emb.select(test_idx))?.accuracy)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CvScore::from_folds(accs))
}
