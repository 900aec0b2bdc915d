//! k-nearest-neighbor classification under cosine similarity.

use ndarray::Axis;
use rayon::prelude::*;

use super::folds::{complement, stratified_folds};
use super::CvScore;
use crate::encoder::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::linalg::{dot, normalize_rows};

/// Predicts a class for every row of `test` from the `k` most cosine-similar
/// rows of `train`. Training rows tied with the k-th similarity also vote;
/// a vote tie goes to the smallest class id.
pub fn knn_predict(train: &EmbeddingMatrix, test: &EmbeddingMatrix, k: usize) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if train.is_empty() {
        return Err(Error::InvalidArgument("no training rows".into()));
    }
    if train.dim() != test.dim() {
        return Err(Error::DimensionMismatch {
            expected: train.dim(),
            found: test.dim(),
        });
    }
    let a = normalize_rows(&train.rows);
    let b = normalize_rows(&test.rows);
    let classes = train.class_count();
    let k = k.min(train.len());
    Ok((0..b.nrows())
        .into_par_iter()
        .map(|r| {
            let q = b.row(r);
            let mut sims: Vec<(f64, usize)> = a
                .axis_iter(Axis(0))
                .enumerate()
                .map(|(i, r)| (dot(q, r), i))
                .collect();
            sims.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
            let cutoff = sims[k - 1].0;
            let mut votes = vec![0usize; classes];
            for &(_, i) in sims.iter().take_while(|(s, _)| *s >= cutoff) {
                votes[train.labels[i]] += 1;
            }
            let best = *votes.iter().max().expect("at least one class");
            votes.iter().position(|&v| v == best).expect("max present")
        })
        .collect())
}

/// Stratified cross-validated kNN accuracy.
pub fn knn_accuracy(emb: &EmbeddingMatrix, k: usize, folds: usize, seed: u64) -> Result<CvScore> {
    let splits = stratified_folds(&emb.labels, folds, seed)?;
    let accs = splits
        .iter()
        .map(|test_idx| {
            let train = emb.select(&complement(emb.len(), test_idx));
            let test = emb.select(test_idx);
            let pred = knn_predict(&train, &test, k)?;
            let hits = pred.iter().zip(&test.labels).filter(|(p, y)| p == y).count();
            Ok(hits as f64 / test.len() as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CvScore::from_folds(accs))
}
