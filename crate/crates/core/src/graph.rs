//! Attributed undirected graphs and graph-classification datasets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use ndarray::{Array2, Axis};
use serde::Serialize;

use crate::error::{Error, Result};

/// An attributed undirected simple graph.
///
/// Node features form an `n x d` matrix. Edges are unordered pairs stored as
/// `(u, v)` with `u < v`; [`Graph::new`] canonicalises its input, but the
/// fields are public so that malformed graphs can be represented and
/// reported by [`Graph::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    pub features: Array2<f64>,
    pub edges: Vec<(usize, usize)>,
    /// One positive weight per edge, aligned with `edges`.
    pub edge_weights: Option<Vec<f64>>,
    pub graph_label: Option<usize>,
    pub node_labels: Option<Vec<i64>>,
    /// Length of the source sentence for co-occurrence graphs.
    pub token_count: Option<usize>,
}

/// A broken [`Graph`] invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    SelfLoop { node: usize },
    EndpointOutOfRange { edge: usize, endpoint: usize, nodes: usize },
    DuplicateEdge { edge: usize, u: usize, v: usize },
    EdgeWeightCount { weights: usize, edges: usize },
    NonPositiveWeight { edge: usize },
    NodeLabelCount { labels: usize, nodes: usize },
    ZeroTokenCount,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop { node } => write!(f, "self-loop at node {node}"),
            Violation::EndpointOutOfRange {
                edge,
                endpoint,
                nodes,
            } => write!(
                f,
                "endpoint out of range: edge {edge} references node {endpoint} but the graph has {nodes} nodes"
            ),
            Violation::DuplicateEdge { edge, u, v } => {
                write!(f, "duplicate edge {edge}: ({u}, {v}) already present")
            }
            Violation::EdgeWeightCount { weights, edges } => {
                write!(f, "edge weight count {weights} differs from edge count {edges}")
            }
            Violation::NonPositiveWeight { edge } => {
                write!(f, "edge weight at index {edge} is not strictly positive")
            }
            Violation::NodeLabelCount { labels, nodes } => {
                write!(f, "node label count {labels} differs from node count {nodes}")
            }
            Violation::ZeroTokenCount => write!(f, "token count must be positive"),
        }
    }
}

impl Graph {
    /// Builds a graph from features and an edge list. Edge orientation is
    /// normalised to `u < v` and the list is sorted; duplicates and
    /// self-loops are kept so that `validate` can report them.
    pub fn new(features: Array2<f64>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect();
        edges.sort_unstable();
        Graph {
            features,
            edges,
            edge_weights: None,
            graph_label: None,
            node_labels: None,
            token_count: None,
        }
    }

    /// Graph with `n` nodes carrying the constant feature `1.0`.
    pub fn unit_features(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Graph::new(Array2::ones((n, 1)), edges)
    }

    pub fn with_label(mut self, label: usize) -> Self {
        self.graph_label = Some(label);
        self
    }

    pub fn num_nodes(&self) -> usize {
        self.features.nrows()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn feature_dim(&self) -> usize {
        self.features.ncols()
    }

    pub fn weight(&self, edge: usize) -> f64 {
        self.edge_weights.as_ref().map_or(1.0, |w| w[edge])
    }

    /// Lists every broken invariant; empty for a valid graph.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.num_nodes();
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a == b {
                out.push(Violation::SelfLoop { node: a });
            }
            for endpoint in [a, b] {
                if endpoint >= n {
                    out.push(Violation::EndpointOutOfRange {
                        edge: i,
                        endpoint,
                        nodes: n,
                    });
                }
            }
            let key = (a.min(b), a.max(b));
            if a != b && !seen.insert(key) {
                out.push(Violation::DuplicateEdge {
                    edge: i,
                    u: key.0,
                    v: key.1,
                });
            }
        }
        if let Some(w) = &self.edge_weights {
            if w.len() != self.edges.len() {
                out.push(Violation::EdgeWeightCount {
                    weights: w.len(),
                    edges: self.edges.len(),
                });
            }
            for (i, &x) in w.iter().enumerate() {
                if x.is_nan() || x <= 0.0 {
                    out.push(Violation::NonPositiveWeight { edge: i });
                }
            }
        }
        if let Some(labels) = &self.node_labels {
            if labels.len() != n {
                out.push(Violation::NodeLabelCount {
                    labels: labels.len(),
                    nodes: n,
                });
            }
        }
        if self.token_count == Some(0) {
            out.push(Violation::ZeroTokenCount);
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn degree(&self, node: usize) -> Result<usize> {
        let n = self.num_nodes();
        if node >= n {
            return Err(Error::NodeOutOfRange { index: node, nodes: n });
        }
        Ok(self
            .edges
            .iter()
            .filter(|&&(u, v)| u == node || v == node)
            .count())
    }

    /// Neighbour lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Maximal connected node sets, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.num_nodes();
        let adj = self.adjacency();
        let mut component = vec![usize::MAX; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if component[start] != usize::MAX {
                continue;
            }
            let id = parts.len();
            let mut members = vec![start];
            component[start] = id;
            let mut head = 0;
            while head < members.len() {
                let u = members[head];
                head += 1;
                for &v in &adj[u] {
                    if component[v] == usize::MAX {
                        component[v] = id;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            parts.push(members);
        }
        parts
    }

    /// Induced subgraph on `keep` (strictly increasing node indices).
    /// Nodes are renumbered preserving relative order; features, node labels,
    /// edge weights, the graph label and the token count are carried over.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let remap: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if let (Some(&a), Some(&b)) = (remap.get(&u), remap.get(&v)) {
                edges.push((a, b));
                weights.push(self.weight(i));
            }
        }
        Graph {
            features: self.features.select(Axis(0), keep),
            edges,
            edge_weights: self.edge_weights.as_ref().map(|_| weights),
            graph_label: self.graph_label,
            node_labels: self
                .node_labels
                .as_ref()
                .map(|l| keep.iter().map(|&i| l[i]).collect()),
            token_count: self.token_count,
        }
    }

    /// Relabels nodes so that old node `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let n = self.num_nodes();
        assert_eq!(perm.len(), n, "permutation length must equal node count");
        let mut features = Array2::zeros(self.features.raw_dim());
        for (old, &new) in perm.iter().enumerate() {
            features.row_mut(new).assign(&self.features.row(old));
        }
        let mut pairs: Vec<((usize, usize), f64)> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| {
                let (a, b) = (perm[u], perm[v]);
                ((a.min(b), a.max(b)), self.weight(i))
            })
            .collect();
        pairs.sort_by_key(|x| x.0);
        let node_labels = self.node_labels.as_ref().map(|l| {
            let mut out = vec![0; n];
            for (old, &new) in perm.iter().enumerate() {
                out[new] = l[old];
            }
            out
        });
        Graph {
            features,
            edges: pairs.iter().map(|p| p.0).collect(),
            edge_weights: self
                .edge_weights
                .as_ref()
                .map(|_| pairs.iter().map(|p| p.1).collect()),
            graph_label: self.graph_label,
            node_labels,
            token_count: self.token_count,
        }
    }

    /// Disjoint union; nodes of `other` are appended after those of `self`.
    /// Metadata of `self` is kept.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        if self.feature_dim() != other.feature_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_dim(),
                found: other.feature_dim(),
            });
        }
        let offset = self.num_nodes();
        let features = ndarray::concatenate(Axis(0), &[self.features.view(), other.features.view()])
            .expect("feature dimensions checked above");
        let mut g = Graph::new(
            features,
            self.edges
                .iter()
                .copied()
                .chain(other.edges.iter().map(|&(u, v)| (u + offset, v + offset))),
        );
        g.graph_label = self.graph_label;
        Ok(g)
    }
}

/// An ordered graph-classification dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDataset {
    pub name: String,
    pub graphs: Vec<Graph>,
    pub class_count: usize,
}

impl GraphDataset {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn feature_dim(&self) -> Option<usize> {
        self.graphs.first().map(Graph::feature_dim)
    }

    /// Graph labels, in dataset order. Unlabelled graphs map to `None`.
    pub fn labels(&self) -> Vec<Option<usize>> {
        self.graphs.iter().map(|g| g.graph_label).collect()
    }

    /// Dataset-level invariant check: labels present and below
    /// `class_count`, one shared feature dimension, every graph valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.class_count == 0 {
            out.push("class_count must be positive".to_string());
        }
        let dim = self.feature_dim();
        for (i, g) in self.graphs.iter().enumerate() {
            match g.graph_label {
                None => out.push(format!("graph {i}: missing graph label")),
                Some(l) if l >= self.class_count => out.push(format!(
                    "graph {i}: label {l} outside [0, {})",
                    self.class_count
                )),
                _ => {}
            }
            if Some(g.feature_dim()) != dim {
                out.push(format!(
                    "graph {i}: feature dimension {} differs from {}",
                    g.feature_dim(),
                    dim.unwrap_or(0)
                ));
            }
            out.extend(g.validate().into_iter().map(|v| format!("graph {i}: {v}")));
        }
        out
    }
}
