//! All-pairs cosine similarity with rows grouped by class.

use ndarray::Array2;
use serde::Serialize;

use crate::encoder::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::linalg::{cosine, CompensatedSum};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityReport {
    /// Original row index at each sorted position.
    pub order: Vec<usize>,
    pub sorted_labels: Vec<usize>,
    #[serde(skip)]
    pub matrix: Array2<f64>,
    /// Sorted position where each class after the first begins.
    pub class_boundaries: Vec<usize>,
    /// Mean over same-class off-diagonal pairs; `None` without such pairs.
    pub intra_mean: Option<f64>,
    /// Mean over cross-class pairs; `None` with a single class.
    pub inter_mean: Option<f64>,
    /// `intra_mean > inter_mean`.
    pub passes: bool,
}

pub fn similarity_matrix(emb: &EmbeddingMatrix) -> Result<SimilarityReport> {
    let n = emb.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "similarity matrix needs at least 2 rows, got {n}"
        )));
    }
    if let Some(i) = emb.rows.rows().into_iter().position(|r| r.iter().all(|&v| v == 0.0)) {
        return Err(Error::ZeroVector(i));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| emb.labels[i]);
    let sorted_labels: Vec<usize> = order.iter().map(|&i| emb.labels[i]).collect();
    let class_boundaries = (1..n)
        .filter(|&p| sorted_labels[p] != sorted_labels[p - 1])
        .collect();

    let mut matrix = Array2::zeros((n, n));
    let mut intra = CompensatedSum::default();
    let mut inter = CompensatedSum::default();
    let (mut n_intra, mut n_inter) = (0usize, 0usize);
    for p in 0..n {
        matrix[[p, p]] = 1.0;
        for q in p + 1..n {
            let s = cosine(emb.rows.row(order[p]), emb.rows.row(order[q])).expect("nonzero rows");
            matrix[[p, q]] = s;
            matrix[[q, p]] = s;
            if sorted_labels[p] == sorted_labels[q] {
                intra.add(s);
                n_intra += 1;
            } else {
                inter.add(s);
                n_inter += 1;
            }
        }
    }
    let intra_mean = (n_intra > 0).then(|| intra.value() / n_intra as f64);
    let inter_mean = (n_inter > 0).then(|| inter.value() / n_inter as f64);
    let passes = matches!((intra_mean, inter_mean), (Some(a), Some(b)) if a > b);
    Ok(SimilarityReport {
        order,
        sorted_labels,
        matrix,
        class_boundaries,
        intra_mean,
        inter_mean,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn identical_rows() {
        let emb = EmbeddingMatrix::new(Array2::from_elem((4, 2), 0.3), vec![1, 0, 1, 0]).unwrap();
        let r = similarity_matrix(&emb).unwrap();
        assert!(r.matrix.iter().all(|&v| (v - 1.0).abs() < 1e-15));
        assert!((r.intra_mean.unwrap() - 1.0).abs() < 1e-15);
        assert!((r.inter_mean.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(r.order, vec![1, 3, 0, 2]);
        assert_eq!(r.class_boundaries, vec![2]);
    }

    #[test]
    fn orthogonal_clusters() {
        let rows = array![[0.0, 2.0], [1.0, 0.0], [0.0, 1.0], [3.0, 0.0]];
        let emb = EmbeddingMatrix::new(rows, vec![1, 0, 1, 0]).unwrap();
        let r = similarity_matrix(&emb).unwrap();
        assert_eq!(r.intra_mean, Some(1.0));
        assert_eq!(r.inter_mean, Some(0.0));
        assert!(r.passes);
        assert_eq!(r.matrix, r.matrix.t());
    }

    #[test]
    fn zero_row_is_reported() {
        let emb = EmbeddingMatrix::new(array![[1.0], [0.0]], vec![0, 1]).unwrap();
        assert!(matches!(similarity_matrix(&emb), Err(Error::ZeroVector(1))));
    }

    #[test]
    fn single_class_has_no_inter_mean() {
        let emb = EmbeddingMatrix::new(array![[1.0], [2.0]], vec![0, 0]).unwrap();
        let r = similarity_matrix(&emb).unwrap();
        assert_eq!(r.inter_mean, None);
        assert!(!r.passes);
    }
}
