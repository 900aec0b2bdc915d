//! Evaluating embeddings: kNN and linear-probe accuracy, the NT-XENT loss,
//! class-sorted similarity matrices and the affinity/diversity audit.

pub mod affinity;
pub mod folds;
pub mod knn;
pub mod ntxent;
pub mod probe;
pub mod similarity;

use serde::Serialize;

use crate::linalg::mean_std;

pub use affinity::{affinity_audit, AffinityReport};
pub use folds::stratified_folds;
pub use knn::{knn_accuracy, knn_predict};
pub use ntxent::{nt_xent, DEFAULT_TEMPERATURE};
pub use probe::{cross_validate_probe, probe_eval, train_linear_probe, LinearProbe, ProbeConfig, ProbeScore};
pub use similarity::{similarity_matrix, SimilarityReport};

/// Accuracy per fold with its mean and population standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvScore {
    pub mean: f64,
    pub std: f64,
    pub fold_accuracies: Vec<f64>,
}

impl CvScore {
    pub fn from_folds(fold_accuracies: Vec<f64>) -> Self {
        let (mean, std) = mean_std(&fold_accuracies);
        CvScore {
            mean,
            std,
            fold_accuracies,
        }
    }
}
