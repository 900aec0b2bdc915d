//! Graph augmentations and their dataset-level application.

pub mod context;
pub mod generic;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphDataset};
use crate::io::EmbeddingTable;
use crate::rng::split_seed;

pub use context::{
    apply_context, build_cooccurrence, colorize, colorize_with, feature_swap, random_delete_rewire,
    random_insert, synonym_replace, ContextAugConfig,
};
pub use generic::{attribute_mask, edge_perturb, node_drop, subgraph_sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AugmentationKind {
    NodeDrop,
    EdgePerturb,
    AttrMask,
    Subgraph,
    SynonymReplace,
    RandomInsert,
    RandomDeleteRewire,
    FeatureSwap,
    Colorize,
    Identity,
}

impl AugmentationKind {
    pub const ALL: [AugmentationKind; 10] = [
        AugmentationKind::NodeDrop,
        AugmentationKind::EdgePerturb,
        AugmentationKind::AttrMask,
        AugmentationKind::Subgraph,
        AugmentationKind::SynonymReplace,
        AugmentationKind::RandomInsert,
        AugmentationKind::RandomDeleteRewire,
        AugmentationKind::FeatureSwap,
        AugmentationKind::Colorize,
        AugmentationKind::Identity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AugmentationKind::NodeDrop => "node-drop",
            AugmentationKind::EdgePerturb => "edge-perturb",
            AugmentationKind::AttrMask => "attr-mask",
            AugmentationKind::Subgraph => "subgraph",
            AugmentationKind::SynonymReplace => "synonym-replace",
            AugmentationKind::RandomInsert => "random-insert",
            AugmentationKind::RandomDeleteRewire => "random-delete-rewire",
            AugmentationKind::FeatureSwap => "feature-swap",
            AugmentationKind::Colorize => "colorize",
            AugmentationKind::Identity => "identity",
        }
    }

    pub fn needs_table(self) -> bool {
        matches!(
            self,
            AugmentationKind::SynonymReplace | AugmentationKind::RandomInsert
        )
    }
}

impl fmt::Display for AugmentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AugmentationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        AugmentationKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| {
                let names: Vec<&str> = AugmentationKind::ALL.iter().map(|k| k.name()).collect();
                Error::InvalidArgument(format!(
                    "unknown augmentation {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// One augmentation with its strength and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AugmentationSpec {
    pub kind: AugmentationKind,
    pub ratio: f64,
    pub seed: u64,
}

impl AugmentationSpec {
    pub fn new(kind: AugmentationKind, ratio: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&ratio) {
            return Err(Error::InvalidArgument(format!("ratio {ratio} outside [0, 1]")));
        }
        Ok(AugmentationSpec { kind, ratio, seed })
    }

    pub fn identity() -> Self {
        AugmentationSpec {
            kind: AugmentationKind::Identity,
            ratio: 0.0,
            seed: 0,
        }
    }
}

/// Applies `spec` to one graph using `spec.seed` directly.
pub fn apply(spec: &AugmentationSpec, graph: &Graph, table: Option<&EmbeddingTable>) -> Result<Graph> {
    apply_seeded(spec.kind, spec.ratio, spec.seed, graph, table)
}

fn apply_seeded(
    kind: AugmentationKind,
    ratio: f64,
    seed: u64,
    graph: &Graph,
    table: Option<&EmbeddingTable>,
) -> Result<Graph> {
    let need_table = || {
        table.ok_or_else(|| {
            Error::InvalidArgument(format!("{kind} requires an embedding table"))
        })
    };
    match kind {
        AugmentationKind::NodeDrop => Ok(node_drop(graph, ratio, seed)),
        AugmentationKind::EdgePerturb => Ok(edge_perturb(graph, ratio, seed)),
        AugmentationKind::AttrMask => Ok(attribute_mask(graph, ratio, seed, 0.0)),
        AugmentationKind::Subgraph => subgraph_sample(graph, ratio, seed),
        AugmentationKind::SynonymReplace => synonym_replace(graph, ratio, need_table()?, seed),
        AugmentationKind::RandomInsert => random_insert(graph, ratio, need_table()?, seed),
        AugmentationKind::RandomDeleteRewire => Ok(random_delete_rewire(graph, ratio, seed)),
        AugmentationKind::FeatureSwap => Ok(feature_swap(graph, ratio, seed)),
        AugmentationKind::Colorize => colorize(graph, seed),
        AugmentationKind::Identity => Ok(graph.clone()),
    }
}

/// Applies `spec` to every graph; graph `i` uses `split_seed(spec.seed, i)`.
/// The output is independent of thread scheduling but does depend on dataset
/// order.
pub fn apply_dataset(
    spec: &AugmentationSpec,
    dataset: &GraphDataset,
    table: Option<&EmbeddingTable>,
) -> Result<GraphDataset> {
    if spec.kind.needs_table() && table.is_none() {
        return Err(Error::InvalidArgument(format!(
            "{} requires an embedding table",
            spec.kind
        )));
    }
    let graphs = dataset
        .graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            apply_seeded(spec.kind, spec.ratio, split_seed(spec.seed, i as u64), g, table)
                .map_err(|e| Error::at_graph(i, e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GraphDataset {
        name: dataset.name.clone(),
        graphs,
        class_count: dataset.class_count,
    })
}

/// [`apply_context`] on every graph, with `config.seed` split per graph index.
pub fn apply_context_dataset(
    config: &ContextAugConfig,
    dataset: &GraphDataset,
    table: &EmbeddingTable,
) -> Result<GraphDataset> {
    config.validate()?;
    let graphs = dataset
        .graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let cfg = ContextAugConfig {
                seed: split_seed(config.seed, i as u64),
                ..*config
            };
            apply_context(&cfg, g, table).map_err(|e| Error::at_graph(i, e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GraphDataset {
        name: dataset.name.clone(),
        graphs,
        class_count: dataset.class_count,
    })
}
