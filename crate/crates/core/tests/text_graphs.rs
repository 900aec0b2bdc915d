mod common;

use std::collections::BTreeSet;

use augaudit::augment::{apply_context, build_cooccurrence, colorize, colorize_with, ContextAugConfig};
use augaudit::io::{Document, EmbeddingTable};
use augaudit::Graph;
use ndarray::{array, Array2};
use proptest::prelude::*;

fn table() -> EmbeddingTable {
    EmbeddingTable::new(
        vec!["the".into(), "cat".into(), "sat".into(), "mat".into()],
        array![[0.1, 0.2], [1.0, 0.0], [0.0, 1.0], [0.7, 0.7]],
    )
    .unwrap()
}

/// Edges as word pairs, using each node's feature to look its word up.
fn word_edges(g: &Graph, t: &EmbeddingTable) -> BTreeSet<(String, String)> {
    let word = |i: usize| {
        (0..t.len())
            .find(|&w| t.row(w) == g.features.row(i))
            .map(|w| t.words()[w].clone())
            .unwrap_or_else(|| "<oov>".into())
    };
    g.edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (word(u), word(v));
            (a.clone().min(b.clone()), a.max(b))
        })
        .collect()
}

fn pair(a: &str, b: &str) -> (String, String) {
    (a.min(b).to_string(), a.max(b).to_string())
}

#[test]
fn the_cat_sat_windows() {
    let t = table();
    let doc = Document::from_text("the cat sat", 1);
    let w2 = build_cooccurrence(&doc, 2, &t).unwrap();
    assert_eq!(w2.num_nodes(), 3);
    assert_eq!(word_edges(&w2, &t), BTreeSet::from([pair("the", "cat"), pair("cat", "sat")]));
    let w3 = build_cooccurrence(&doc, 3, &t).unwrap();
    assert_eq!(
        word_edges(&w3, &t),
        BTreeSet::from([pair("the", "cat"), pair("cat", "sat"), pair("the", "sat")])
    );
    assert_eq!(w3.token_count, Some(3));
    assert_eq!(w3.graph_label, Some(1));
    assert!(build_cooccurrence(&doc, 1, &t).is_err());
}

#[test]
fn repeated_word_counts_twice() {
    let doc = Document::from_text("a b a", 0);
    let g = build_cooccurrence(&doc, 2, &table()).unwrap();
    assert_eq!(g.num_nodes(), 2);
    assert_eq!(g.edges, vec![(0, 1)]);
    assert_eq!(g.edge_weights, Some(vec![2.0]));
    // both words are out of vocabulary
    assert!(g.features.iter().all(|&v| v == 0.0));
}

#[test]
fn pipeline_counts_compose() {
    let t = table();
    let doc = Document::from_text("the cat sat on the mat near the cat by the sat mat cat", 0);
    let g = build_cooccurrence(&doc, 3, &t).unwrap();
    let tokens = doc.tokens.len();
    let cfg = ContextAugConfig { synonym_ratio: 0.2, delete_ratio: 0.25, insert_ratio: 0.3, swap_ratio: 0.2, seed: 5 };
    let out = apply_context(&cfg, &g, &t).unwrap();
    let inserted = (0.3 * tokens as f64).floor() as usize;
    let after_insert = g.num_nodes() + inserted;
    let deleted = ((0.25 * tokens as f64).floor() as usize).min(after_insert - 1);
    assert_eq!(out.num_nodes(), after_insert - deleted);
    assert!(out.is_valid());
    assert_eq!(out, apply_context(&cfg, &g, &t).unwrap());
    let zero = ContextAugConfig { synonym_ratio: 0.0, delete_ratio: 0.0, insert_ratio: 0.0, swap_ratio: 0.0, seed: 1 };
    assert_eq!(apply_context(&zero, &g, &t).unwrap(), g);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn colorize_keeps_positions(feats in prop::collection::vec(0.0f64..1.0, 3..30), seed in any::<u64>()) {
        let n = feats.len() / 3;
        let m = Array2::from_shape_vec((n, 3), feats[..n * 3].to_vec()).unwrap();
        let g = Graph::new(m, (1..n).map(|i| (i - 1, i)));
        let out = colorize(&g, seed).unwrap();
        prop_assert_eq!(out.feature_dim(), 5);
        prop_assert_eq!(&out.edges, &g.edges);
        prop_assert_eq!(out.features.slice(ndarray::s![.., 3..]), g.features.slice(ndarray::s![.., 1..]));
        // one tint per graph: channel ratios agree across nodes
        for i in 0..n {
            let x = g.features[[i, 0]];
            for c in 0..3 {
                prop_assert!(out.features[[i, c]] <= x + 1e-15);
            }
        }
    }
}

#[test]
fn forced_colors() {
    let g = Graph::new(array![[0.5, 1.0, 2.0], [0.25, 3.0, 4.0]], [(0, 1)]);
    let white = colorize_with(&g, [1.0, 1.0, 1.0]).unwrap();
    assert_eq!(white.features, array![[0.5, 0.5, 0.5, 1.0, 2.0], [0.25, 0.25, 0.25, 3.0, 4.0]]);
    let black = colorize_with(&g, [0.0, 0.0, 0.0]).unwrap();
    assert!(black.features.slice(ndarray::s![.., ..3]).iter().all(|&v| v == 0.0));
    assert!(colorize(&Graph::unit_features(2, [(0, 1)]), 0).is_err());
}
