//! Untrained GIN encoder used as the random-initialization baseline.
//!
//! Each layer computes `h <- relu(relu(((1 + eps) h + sum of neighbors) W1 + b1) W2 + b2)`
//! and the graph embedding concatenates the sum-pooled node states of every
//! layer. Edge weights are ignored.

use ndarray::{Array1, Array2, Axis};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphDataset};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EncoderConfig {
    pub layers: usize,
    pub hidden_dim: usize,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig {
            layers: 3,
            hidden_dim: 32,
            epsilon: 0.0,
            seed: 0,
        }
    }
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 || self.hidden_dim == 0 {
            return Err(Error::InvalidArgument(format!(
                "encoder needs at least one layer and hidden unit, got {} x {}",
                self.layers, self.hidden_dim
            )));
        }
        if !self.epsilon.is_finite() {
            return Err(Error::InvalidArgument("epsilon must be finite".into()));
        }
        Ok(())
    }

    pub fn embedding_dim(&self) -> usize {
        self.layers * self.hidden_dim
    }
}

/// Weights are stored input-major: `x.dot(w)` maps a row of width `fan_in`
/// to width `fan_out`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub weight: Array2<f64>,
    pub bias: Array1<f64>,
}

impl Affine {
    fn apply_relu(&self, x: &Array2<f64>) -> Array2<f64> {
        let mut out = x.dot(&self.weight) + &self.bias;
        out.mapv_inplace(|v| v.max(0.0));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GinLayer {
    pub first: Affine,
    pub second: Affine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Encoder {
    input_dim: usize,
    epsilon: f64,
    layers: Vec<GinLayer>,
}

/// Glorot-uniform weights, zero biases.
fn glorot(rng: &mut impl Rng, fan_in: usize, fan_out: usize) -> Affine {
    let a = (6.0 / (fan_in + fan_out) as f64).sqrt();
    let weight = Array2::from_shape_simple_fn((fan_in, fan_out), || rng.random_range(-a..a));
    Affine {
        weight,
        bias: Array1::zeros(fan_out),
    }
}

pub fn init_encoder(config: &EncoderConfig, input_dim: usize) -> Result<Encoder> {
    config.validate()?;
    if input_dim == 0 {
        return Err(Error::InvalidArgument("input dimension must be positive".into()));
    }
    let mut rng = rng_from_seed(config.seed);
    let h = config.hidden_dim;
    let layers = (0..config.layers)
        .map(|l| {
            let fan_in = if l == 0 { input_dim } else { h };
            GinLayer {
                first: glorot(&mut rng, fan_in, h),
                second: glorot(&mut rng, h, h),
            }
        })
        .collect();
    Ok(Encoder {
        input_dim,
        epsilon: config.epsilon,
        layers,
    })
}

impl Encoder {
    /// Builds an encoder from explicit parameters, checking shapes.
    pub fn from_layers(input_dim: usize, epsilon: f64, layers: Vec<GinLayer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidArgument("encoder needs at least one layer".into()));
        }
        let mut width = input_dim;
        for layer in &layers {
            for map in [&layer.first, &layer.second] {
                if map.weight.nrows() != width {
                    return Err(Error::DimensionMismatch {
                        expected: width,
                        found: map.weight.nrows(),
                    });
                }
                if map.bias.len() != map.weight.ncols() {
                    return Err(Error::DimensionMismatch {
                        expected: map.weight.ncols(),
                        found: map.bias.len(),
                    });
                }
                width = map.weight.ncols();
            }
        }
        Ok(Encoder {
            input_dim,
            epsilon,
            layers,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn layers(&self) -> &[GinLayer] {
        &self.layers
    }

    pub fn embedding_dim(&self) -> usize {
        self.layers.iter().map(|l| l.second.weight.ncols()).sum()
    }

    pub fn embed(&self, graph: &Graph) -> Result<Array1<f64>> {
        if graph.feature_dim() != self.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                found: graph.feature_dim(),
            });
        }
        let mut h = graph.features.clone();
        let mut out = Vec::with_capacity(self.embedding_dim());
        for layer in &self.layers {
            let mut agg = h.mapv(|v| (1.0 + self.epsilon) * v);
            for &(u, v) in &graph.edges {
                let (hu, hv) = (h.row(u).to_owned(), h.row(v).to_owned());
                agg.row_mut(u).scaled_add(1.0, &hv);
                agg.row_mut(v).scaled_add(1.0, &hu);
            }
            h = layer.second.apply_relu(&layer.first.apply_relu(&agg));
            out.extend(h.sum_axis(Axis(0)).iter().copied());
        }
        Ok(Array1::from(out))
    }

    /// Embeds every graph in parallel; row `i` is `embed(&dataset.graphs[i])`.
    pub fn embed_dataset(&self, dataset: &GraphDataset) -> Result<EmbeddingMatrix> {
        let rows = dataset
            .graphs
            .par_iter()
            .enumerate()
            .map(|(i, g)| self.embed(g).map_err(|e| Error::at_graph(i, e)))
            .collect::<Result<Vec<_>>>()?;
        let labels = dataset
            .graphs
            .iter()
            .enumerate()
            .map(|(i, g)| {
                g.graph_label.ok_or_else(|| {
                    Error::at_graph(i, Error::InvalidArgument("graph has no class label".into()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let d = self.embedding_dim();
        let mut m = Array2::zeros((rows.len(), d));
        for (mut dst, src) in m.axis_iter_mut(Axis(0)).zip(&rows) {
            dst.assign(src);
        }
        EmbeddingMatrix::new(m, labels)
    }
}

/// One embedding row per graph with its class label.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    pub rows: Array2<f64>,
    pub labels: Vec<usize>,
}

impl EmbeddingMatrix {
    pub fn new(rows: Array2<f64>, labels: Vec<usize>) -> Result<Self> {
        if rows.nrows() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.nrows(),
                found: labels.len(),
            });
        }
        if let Some(pos) = rows.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite embedding value in row {}",
                pos / rows.ncols().max(1)
            )));
        }
        Ok(EmbeddingMatrix { rows, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    pub fn class_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Rows at `idx`, in that order.
    pub fn select(&self, idx: &[usize]) -> EmbeddingMatrix {
        EmbeddingMatrix {
            rows: self.rows.select(Axis(0), idx),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}
