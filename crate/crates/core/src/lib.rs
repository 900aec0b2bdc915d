//! Graph augmentation and representation-audit toolkit.
//!
//! The crate is organised around an attributed undirected [`Graph`] model:
//!
//! - [`augment`]: domain-agnostic augmentations (node dropping, edge
//!   perturbation, attribute masking, subgraph removal) and context-aware ones
//!   (co-occurrence graph edits, super-pixel colorizing).
//! - [`fidelity`]: Laplacian spectra, spectral similarity, node-feature
//!   similarity and SSIM, used to measure what an augmentation changed.
//! - [`encoder`]: an untrained GIN encoder producing graph-level embeddings.
//! - [`eval`]: kNN and linear-probe accuracy, NT-XENT, similarity matrices and
//!   the affinity/diversity audit.
//! - [`io`]: TU datasets, word vectors, corpora, CSV matrices and PGM heatmaps.

pub mod augment;
pub mod encoder;
pub mod error;
pub mod eval;
pub mod fidelity;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{Graph, GraphDataset, Violation};
