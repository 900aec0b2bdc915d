//! Measuring what an augmentation changed: Laplacian spectra in graph space,
//! cosine similarity in feature space, SSIM in image space.

pub mod jacobi;
pub mod ssim;

use ndarray::Array2;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphDataset};
use crate::linalg::cosine;

pub use jacobi::symmetric_eigenvalues;
pub use ssim::ssim;

pub const DEFAULT_COVERAGE: f64 = 0.9;

/// Eigenvalues below zero but above this are rounding noise and become 0.
const NEGATIVE_CLAMP: f64 = 1e-9;

/// Dense combinatorial Laplacian `D - A`; edge weights are ignored.
pub fn laplacian(graph: &Graph) -> Array2<f64> {
    let n = graph.num_nodes();
    let mut l = Array2::zeros((n, n));
    for &(u, v) in &graph.edges {
        l[[u, v]] -= 1.0;
        l[[v, u]] -= 1.0;
        l[[u, u]] += 1.0;
        l[[v, v]] += 1.0;
    }
    l
}

/// Eigenvalues of the unweighted Laplacian, sorted descending.
pub fn laplacian_spectrum(graph: &Graph) -> Result<Vec<f64>> {
    if graph.num_nodes() == 0 {
        return Err(Error::InvalidArgument("spectrum of an empty graph".into()));
    }
    let mut ev = symmetric_eigenvalues(&laplacian(graph))?;
    for v in &mut ev {
        if *v < 0.0 && *v >= -NEGATIVE_CLAMP {
            *v = 0.0;
        }
    }
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Smallest prefix length of a descending spectrum whose sum reaches
/// `coverage` of the total. An all-zero spectrum gives 1.
pub fn coverage_count(spectrum: &[f64], coverage: f64) -> usize {
    let total: f64 = spectrum.iter().sum();
    if total <= 0.0 {
        return 1;
    }
    let target = coverage * total - 1e-12 * total;
    let mut acc = 0.0;
    for (i, v) in spectrum.iter().enumerate() {
        acc += v;
        if acc >= target {
            return i + 1;
        }
    }
    spectrum.len()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub eigenvalues_a: Vec<f64>,
    pub eigenvalues_b: Vec<f64>,
    pub k_a: usize,
    pub k_b: usize,
    pub k: usize,
    pub score: f64,
}

/// Sum of squared differences between the leading `k = min(k_a, k_b)`
/// eigenvalues, where `k_x` is the coverage count of each spectrum.
pub fn spectral_similarity(a: &Graph, b: &Graph, coverage: f64) -> Result<SpectralReport> {
    if !(coverage > 0.0 && coverage <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "coverage {coverage} outside (0, 1]"
        )));
    }
    let eigenvalues_a = laplacian_spectrum(a)?;
    let eigenvalues_b = laplacian_spectrum(b)?;
    let k_a = coverage_count(&eigenvalues_a, coverage);
    let k_b = coverage_count(&eigenvalues_b, coverage);
    let k = k_a.min(k_b);
    let score = eigenvalues_a[..k]
        .iter()
        .zip(&eigenvalues_b[..k])
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(SpectralReport {
        eigenvalues_a,
        eigenvalues_b,
        k_a,
        k_b,
        k,
        score,
    })
}

/// Mean cosine similarity of corresponding node features over the first
/// `min(n_a, n_b)` nodes. Pairs involving a zero row contribute 0.
pub fn feature_similarity(a: &Graph, b: &Graph) -> Result<f64> {
    if a.feature_dim() != b.feature_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.feature_dim(),
            found: b.feature_dim(),
        });
    }
    let m = a.num_nodes().min(b.num_nodes());
    if m == 0 {
        return Err(Error::InvalidArgument(
            "no corresponding nodes to compare".into(),
        ));
    }
    let total: f64 = (0..m)
        .map(|i| cosine(a.features.row(i), b.features.row(i)).unwrap_or(0.0))
        .sum();
    Ok(total / m as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityReport {
    pub spectral: SpectralReport,
    pub feature_similarity: f64,
    pub ssim: Option<f64>,
}

pub fn fidelity_report(
    a: &Graph,
    b: &Graph,
    images: Option<(&Array2<f64>, &Array2<f64>)>,
    coverage: f64,
) -> Result<FidelityReport> {
    Ok(FidelityReport {
        spectral: spectral_similarity(a, b, coverage)?,
        feature_similarity: feature_similarity(a, b)?,
        ssim: images.map(|(x, y)| ssim(x, y)).transpose()?,
    })
}

/// One row of a batch fidelity report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairReport {
    pub index: usize,
    pub spectral_score: f64,
    pub k: usize,
    pub feature_similarity: f64,
    pub ssim: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchReport {
    pub pairs: Vec<PairReport>,
}

/// Compares graph `i` of `a` with graph `i` of `b` for every index.
pub fn fidelity_batch(a: &GraphDataset, b: &GraphDataset, coverage: f64) -> Result<BatchReport> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "datasets differ in size: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let pairs = a
        .graphs
        .par_iter()
        .zip(b.graphs.par_iter())
        .enumerate()
        .map(|(index, (ga, gb))| {
            let r = fidelity_report(ga, gb, None, coverage).map_err(|e| Error::at_graph(index, e))?;
            Ok(PairReport {
                index,
                spectral_score: r.spectral.score,
                k: r.spectral.k,
                feature_similarity: r.feature_similarity,
                ssim: r.ssim,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BatchReport { pairs })
}
