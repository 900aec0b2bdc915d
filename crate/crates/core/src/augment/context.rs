//! Context-aware augmentations.
//!
//! Text: documents become co-occurrence graphs whose nodes are unique words
//! carrying word vectors. Synonym replacement, random insertion, random
//! swapping and random deletion are applied directly in graph space; their
//! strengths scale with the sentence length (`token_count`), not the node
//! count, since repeated words share one node.
//!
//! Images: super-pixel graphs with `[intensity, x, y]` features are
//! colorized by a per-graph random RGB tint.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, Axis};
use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{Document, EmbeddingTable};
use crate::linalg::{dot, norm};
use crate::rng::{rng_from_seed, scaled_count, split_seed};

/// Strengths for [`apply_context`], as fractions of sentence length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContextAugConfig {
    pub synonym_ratio: f64,
    pub delete_ratio: f64,
    pub insert_ratio: f64,
    pub swap_ratio: f64,
    pub seed: u64,
}

impl Default for ContextAugConfig {
    fn default() -> Self {
        ContextAugConfig {
            synonym_ratio: 0.05,
            delete_ratio: 0.10,
            insert_ratio: 0.05,
            swap_ratio: 0.05,
            seed: 0,
        }
    }
}

impl ContextAugConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, r) in [
            ("synonym", self.synonym_ratio),
            ("delete", self.delete_ratio),
            ("insert", self.insert_ratio),
            ("swap", self.swap_ratio),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::InvalidArgument(format!(
                    "{name} ratio {r} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Parses `synonym=0.05,delete=0.10,insert=0.05,swap=0.05`; omitted keys
/// keep their defaults. The seed is not part of the string.
impl FromStr for ContextAugConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cfg = ContextAugConfig::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, found {part:?}")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("{key}: {value:?} is not a number")))?;
            match key.trim() {
                "synonym" => cfg.synonym_ratio = value,
                "delete" => cfg.delete_ratio = value,
                "insert" => cfg.insert_ratio = value,
                "swap" => cfg.swap_ratio = value,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown augmentation {other:?} (expected synonym, delete, insert or swap)"
                    )))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for ContextAugConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "synonym={},delete={},insert={},swap={}",
            self.synonym_ratio, self.delete_ratio, self.insert_ratio, self.swap_ratio
        )
    }
}

/// Co-occurrence graph of a document.
///
/// One node per unique token in order of first appearance. Tokens at
/// positions `p < q` co-occur when `q - p < window`; every such position pair
/// of distinct words adds 1 to the weight of their edge. Node features are
/// the word vectors, or zeros for out-of-vocabulary words.
pub fn build_cooccurrence(doc: &Document, window: usize, table: &EmbeddingTable) -> Result<Graph> {
    if window < 2 {
        return Err(Error::InvalidArgument(format!(
            "window must be at least 2, got {window}"
        )));
    }
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut words: Vec<&str> = Vec::new();
    let positions: Vec<usize> = doc
        .tokens
        .iter()
        .map(|t| {
            *ids.entry(t.as_str()).or_insert_with(|| {
                words.push(t.as_str());
                words.len() - 1
            })
        })
        .collect();

    let mut counts: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for p in 0..positions.len() {
        for q in p + 1..positions.len().min(p + window) {
            let (a, b) = (positions[p], positions[q]);
            if a != b {
                *counts.entry((a.min(b), a.max(b))).or_insert(0.0) += 1.0;
            }
        }
    }

    let mut features = Array2::zeros((words.len(), table.dim()));
    for (i, w) in words.iter().enumerate() {
        if let Some(v) = table.get(w) {
            features.row_mut(i).assign(&v);
        }
    }
    let (edges, weights): (Vec<_>, Vec<_>) = counts.into_iter().unzip();
    let mut g = Graph::new(features, edges);
    g.edge_weights = Some(weights);
    g.graph_label = Some(doc.label);
    g.token_count = Some(doc.tokens.len());
    Ok(g)
}

fn strength_base(graph: &Graph) -> usize {
    graph.token_count.unwrap_or_else(|| graph.num_nodes())
}

fn check_table(graph: &Graph, table: &EmbeddingTable) -> Result<()> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    if table.dim() != graph.feature_dim() {
        return Err(Error::DimensionMismatch {
            expected: graph.feature_dim(),
            found: table.dim(),
        });
    }
    Ok(())
}

/// Index of the table row with the highest cosine similarity to `feature`,
/// skipping rows identical to it and zero rows. Ties go to the lower index.
pub fn nearest_word(feature: ndarray::ArrayView1<f64>, table: &EmbeddingTable) -> Option<usize> {
    let fnorm = norm(feature);
    if fnorm == 0.0 {
        return None;
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, row) in table.vectors().rows().into_iter().enumerate() {
        if row == feature {
            continue;
        }
        let rnorm = norm(row);
        if rnorm == 0.0 {
            continue;
        }
        let sim = dot(row, feature) / (rnorm * fnorm);
        if best.is_none_or(|(_, b)| sim > b) {
            best = Some((i, sim));
        }
    }
    best.map(|(i, _)| i)
}

/// Replaces the features of `floor(ratio * T)` uniformly chosen nodes with
/// the closest other word vector. Nodes with zero features are skipped.
pub fn synonym_replace(
    graph: &Graph,
    ratio: f64,
    table: &EmbeddingTable,
    seed: u64,
) -> Result<Graph> {
    check_table(graph, table)?;
    let n = graph.num_nodes();
    let m = scaled_count(ratio, strength_base(graph)).min(n);
    let mut out = graph.clone();
    if m == 0 {
        return Ok(out);
    }
    let mut rng = rng_from_seed(seed);
    let mut chosen: Vec<usize> = index::sample(&mut rng, n, m).into_vec();
    chosen.sort_unstable();
    for v in chosen {
        if let Some(w) = nearest_word(graph.features.row(v), table) {
            out.features.row_mut(v).assign(&table.row(w));
        }
    }
    Ok(out)
}

/// Mutable adjacency used by the node-inserting and node-deleting edits.
struct WeightedAdjacency {
    neighbours: Vec<BTreeMap<usize, f64>>,
}

impl WeightedAdjacency {
    fn of(graph: &Graph) -> Self {
        let mut neighbours = vec![BTreeMap::new(); graph.num_nodes()];
        for (i, &(u, v)) in graph.edges.iter().enumerate() {
            let w = graph.weight(i);
            neighbours[u].insert(v, w);
            neighbours[v].insert(u, w);
        }
        WeightedAdjacency { neighbours }
    }

    fn connect(&mut self, u: usize, v: usize, w: f64) {
        self.neighbours[u].insert(v, w);
        self.neighbours[v].insert(u, w);
    }

    /// Canonical edges restricted to `alive` nodes, renumbered by position.
    fn edges(&self, alive: &[usize]) -> (Vec<(usize, usize)>, Vec<f64>) {
        let position: HashMap<usize, usize> =
            alive.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        for &u in alive {
            for (&v, &w) in &self.neighbours[u] {
                if u < v {
                    if let (Some(&a), Some(&b)) = (position.get(&u), position.get(&v)) {
                        edges.push((a, b));
                        weights.push(w);
                    }
                }
            }
        }
        (edges, weights)
    }
}

/// `floor(ratio * T)` insertions. Each picks a uniform existing node `u` and a
/// uniform word vector `w`, then appends a node with feature `w` connected to
/// every current neighbour of `u` with the same weights.
pub fn random_insert(
    graph: &Graph,
    ratio: f64,
    table: &EmbeddingTable,
    seed: u64,
) -> Result<Graph> {
    check_table(graph, table)?;
    let m = scaled_count(ratio, strength_base(graph));
    if m == 0 {
        return Ok(graph.clone());
    }
    let n = graph.num_nodes();
    if n == 0 {
        return Err(Error::InvalidArgument("cannot insert into an empty graph".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut adj = WeightedAdjacency::of(graph);
    let mut rows: Vec<Array1<f64>> = Vec::with_capacity(m);
    let mut labels = graph.node_labels.clone();
    for _ in 0..m {
        let current = adj.neighbours.len();
        let u = rng.random_range(0..current);
        let w = rng.random_range(0..table.len());
        let copied: Vec<(usize, f64)> = adj.neighbours[u].iter().map(|(&x, &wt)| (x, wt)).collect();
        adj.neighbours.push(BTreeMap::new());
        for (x, wt) in copied {
            adj.connect(current, x, wt);
        }
        rows.push(table.row(w).to_owned());
        if let Some(l) = labels.as_mut() {
            let copy = l[u];
            l.push(copy);
        }
    }
    let mut features = graph.features.clone();
    for row in rows {
        features.push_row(row.view()).expect("table dimension checked");
    }
    let alive: Vec<usize> = (0..features.nrows()).collect();
    let (edges, weights) = adj.edges(&alive);
    Ok(Graph {
        features,
        edges,
        edge_weights: graph.edge_weights.as_ref().map(|_| weights),
        graph_label: graph.graph_label,
        node_labels: labels,
        token_count: graph.token_count,
    })
}

/// `min(n - 1, floor(ratio * T))` sequential deletions. Each removes a uniform
/// node, then connects every pair of its former neighbours that was not
/// already adjacent (weight 1.0).
pub fn random_delete_rewire(graph: &Graph, ratio: f64, seed: u64) -> Graph {
    let n = graph.num_nodes();
    let m = scaled_count(ratio, strength_base(graph)).min(n.saturating_sub(1));
    if m == 0 {
        return graph.clone();
    }
    let mut rng = rng_from_seed(seed);
    let mut adj = WeightedAdjacency::of(graph);
    let mut alive: Vec<usize> = (0..n).collect();
    for _ in 0..m {
        let x = alive.remove(rng.random_range(0..alive.len()));
        let former: Vec<usize> = std::mem::take(&mut adj.neighbours[x]).into_keys().collect();
        for &y in &former {
            adj.neighbours[y].remove(&x);
        }
        for (i, &a) in former.iter().enumerate() {
            for &b in &former[i + 1..] {
                if !adj.neighbours[a].contains_key(&b) {
                    adj.connect(a, b, 1.0);
                }
            }
        }
    }
    let (edges, weights) = adj.edges(&alive);
    Graph {
        features: graph.features.select(Axis(0), &alive),
        edges,
        edge_weights: graph.edge_weights.as_ref().map(|_| weights),
        graph_label: graph.graph_label,
        node_labels: graph
            .node_labels
            .as_ref()
            .map(|l| alive.iter().map(|&v| l[v]).collect()),
        token_count: graph.token_count,
    }
}

/// `floor(ratio * T)` swaps of the feature rows (and node labels) of two
/// distinct uniformly chosen nodes.
pub fn feature_swap(graph: &Graph, ratio: f64, seed: u64) -> Graph {
    let n = graph.num_nodes();
    let m = scaled_count(ratio, strength_base(graph));
    let mut out = graph.clone();
    if m == 0 || n < 2 {
        return out;
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..m {
        let pair = index::sample(&mut rng, n, 2);
        let (a, b) = (pair.index(0), pair.index(1));
        let row_a = out.features.row(a).to_owned();
        let row_b = out.features.row(b).to_owned();
        out.features.row_mut(a).assign(&row_b);
        out.features.row_mut(b).assign(&row_a);
        if let Some(l) = out.node_labels.as_mut() {
            l.swap(a, b);
        }
    }
    out
}

/// Synonym replacement, random insertion, random swap and random deletion, in
/// that order, with sub-seeds `split_seed(config.seed, 0..=3)`.
pub fn apply_context(
    config: &ContextAugConfig,
    graph: &Graph,
    table: &EmbeddingTable,
) -> Result<Graph> {
    config.validate()?;
    let g = synonym_replace(graph, config.synonym_ratio, table, split_seed(config.seed, 0))?;
    let g = random_insert(&g, config.insert_ratio, table, split_seed(config.seed, 1))?;
    let g = feature_swap(&g, config.swap_ratio, split_seed(config.seed, 2));
    Ok(random_delete_rewire(&g, config.delete_ratio, split_seed(config.seed, 3)))
}

/// Tints `[intensity, x, y]` features with one uniform RGB color per graph,
/// giving `[i*r, i*g, i*b, x, y]`.
pub fn colorize(graph: &Graph, seed: u64) -> Result<Graph> {
    let mut rng = rng_from_seed(seed);
    let color = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
    colorize_with(graph, color)
}

pub fn colorize_with(graph: &Graph, color: [f64; 3]) -> Result<Graph> {
    if graph.feature_dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: graph.feature_dim(),
        });
    }
    let n = graph.num_nodes();
    let mut features = Array2::zeros((n, 5));
    for (i, row) in graph.features.rows().into_iter().enumerate() {
        let intensity = row[0];
        for (c, &channel) in color.iter().enumerate() {
            features[[i, c]] = intensity * channel;
        }
        features[[i, 3]] = row[1];
        features[[i, 4]] = row[2];
    }
    let mut out = graph.clone();
    out.features = features;
    Ok(out)
}
