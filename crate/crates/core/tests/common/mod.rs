#![allow(dead_code)]

pub mod checks;
pub mod oracle;

use augaudit::{Graph, GraphDataset};
use ndarray::Array2;
use proptest::prelude::*;

/// Graphs with 1..=max_nodes nodes, 1..=3 feature columns, optional edge
/// weights, node labels and a token count at least the node count. Column 0
/// holds the node index so tests can follow nodes through relabelings.
pub fn arb_graph(max_nodes: usize) -> impl Strategy<Value = Graph> {
    (1..=max_nodes, 1usize..=3).prop_flat_map(|(n, d)| {
        let pairs = n * (n - 1) / 2;
        (
            Just((n, d)),
            prop::collection::vec(-4.0f64..4.0, n * d),
            prop::collection::vec(prop::bool::weighted(0.35), pairs),
            prop::collection::vec(0.5f64..3.0, pairs),
            any::<bool>(),
            prop::option::of(prop::collection::vec(0i64..4, n)),
            prop::option::of(0usize..6),
        )
            .prop_map(|((n, d), feats, mask, weights, weighted, labels, extra)| {
                let mut features = Array2::from_shape_vec((n, d), feats).unwrap();
                for i in 0..n {
                    features[[i, 0]] = i as f64;
                }
                let pairs: Vec<(usize, usize)> =
                    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
                let mut edges = Vec::new();
                let mut w = Vec::new();
                for (k, p) in pairs.iter().enumerate() {
                    if mask[k] {
                        edges.push(*p);
                        w.push(weights[k]);
                    }
                }
                let mut g = Graph::new(features, edges);
                if weighted {
                    g.edge_weights = Some(w);
                }
                g.node_labels = labels;
                g.token_count = extra.map(|e| n + e);
                g.with_label(n % 2)
            })
    })
}

/// Feature rows sorted lexicographically, for multiset comparisons.
pub fn sorted_rows(m: &Array2<f64>) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = m.rows().into_iter().map(|r| r.to_vec()).collect();
    rows.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    rows
}

pub fn floor_count(ratio: f64, size: usize) -> usize {
    augaudit::rng::scaled_count(ratio, size)
}

/// Small datasets covering every optional TU column, named "RT".
pub fn arb_dataset() -> impl Strategy<Value = GraphDataset> {
    let graph = (1usize..8).prop_flat_map(|n| {
        (
            prop::collection::vec(-1e3f64..1e3, n * 2),
            prop::collection::vec(any::<bool>(), n * (n - 1) / 2),
            prop::collection::vec(0i64..5, n),
            0usize..3,
            1usize..20,
            prop::collection::vec(0.25f64..4.0, n * (n - 1) / 2),
        )
            .prop_map(move |(f, mask, nl, label, tokens, w)| {
                let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
                let chosen: Vec<usize> = (0..pairs.len()).filter(|&k| mask[k]).collect();
                let mut g = Graph::new(Array2::from_shape_vec((n, 2), f).unwrap(), chosen.iter().map(|&k| pairs[k]));
                g.edge_weights = Some(chosen.iter().map(|&k| w[k]).collect());
                g.node_labels = Some(nl);
                g.token_count = Some(tokens);
                g.with_label(label)
            })
    });
    (prop::collection::vec(graph, 3..7), any::<bool>()).prop_map(|(mut graphs, weighted)| {
        for (i, g) in graphs.iter_mut().enumerate() {
            // every class id in 0..3 appears so labels survive remapping
            g.graph_label = Some(i % 3);
            if !weighted {
                g.edge_weights = None;
                g.token_count = None;
            }
        }
        GraphDataset { name: "RT".into(), graphs, class_count: 3 }
    })
}
