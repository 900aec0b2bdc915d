//! Augmentation invariants as reusable checks over one graph, ratio and seed.

use std::collections::{BTreeSet, HashSet};

use augaudit::augment::{
    attribute_mask, edge_perturb, feature_swap, node_drop, random_delete_rewire, random_insert,
    subgraph_sample, synonym_replace,
};
use augaudit::io::EmbeddingTable;
use augaudit::Graph;
use ndarray::Array2;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::{floor_count, sorted_rows};

pub const MASK: f64 = 12345.5;

type Check = Result<(), TestCaseError>;

pub fn ratio() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), 0.0f64..=1.0]
}

pub fn table(d: usize) -> EmbeddingTable {
    let words = (0..5).map(|i| format!("w{i}")).collect();
    let vectors = Array2::from_shape_fn((5, d), |(i, j)| ((i * 7 + j * 3) % 5) as f64 - 1.5);
    EmbeddingTable::new(words, vectors).unwrap()
}

/// Node ids carried in feature column 0.
pub fn ids(g: &Graph) -> Vec<usize> {
    g.features.column(0).iter().map(|&v| v as usize).collect()
}

pub fn id_edges(g: &Graph) -> HashSet<(usize, usize)> {
    let id = ids(g);
    g.edges
        .iter()
        .map(|&(u, v)| (id[u].min(id[v]), id[u].max(id[v])))
        .collect()
}

fn induced(g: &Graph, keep: &BTreeSet<usize>) -> HashSet<(usize, usize)> {
    g.edges
        .iter()
        .copied()
        .filter(|(u, v)| keep.contains(u) && keep.contains(v))
        .collect()
}

pub fn node_drop_invariants(g: &Graph, r: f64, seed: u64) -> Check {
    let out = node_drop(g, r, seed);
    let n = g.num_nodes();
    prop_assert!(out.is_valid(), "{:?}", out.validate());
    prop_assert_eq!(out.num_nodes(), n - floor_count(r, n).min(n - 1));
    prop_assert_eq!(&out, &node_drop(g, r, seed));
    // survivors keep order and exactly their induced edges
    let kept = ids(&out);
    prop_assert!(kept.windows(2).all(|w| w[0] < w[1]));
    let keep: BTreeSet<usize> = kept.iter().copied().collect();
    prop_assert_eq!(id_edges(&out), induced(g, &keep));
    if r == 0.0 {
        prop_assert_eq!(&out, g);
    }
    prop_assert_eq!(out.graph_label, g.graph_label);
    Ok(())
}

pub fn edge_perturb_invariants(g: &Graph, r: f64, seed: u64) -> Check {
    let out = edge_perturb(g, r, seed);
    let n = g.num_nodes();
    prop_assert!(out.is_valid(), "{:?}", out.validate());
    prop_assert_eq!(out.num_nodes(), n);
    prop_assert_eq!(&out.features, &g.features);
    let e = g.num_edges();
    let removed = floor_count(r, e);
    let free = n * (n - 1) / 2 - e;
    prop_assert_eq!(out.num_edges(), e - removed + removed.min(free));
    let before: HashSet<_> = g.edges.iter().copied().collect();
    let after: HashSet<_> = out.edges.iter().copied().collect();
    prop_assert_eq!(before.difference(&after).count(), removed);
    prop_assert_eq!(after.difference(&before).count(), removed.min(free));
    prop_assert_eq!(&out, &edge_perturb(g, r, seed));
    if r == 0.0 {
        prop_assert_eq!(&out, g);
    }
    Ok(())
}

pub fn attribute_mask_invariants(g: &Graph, r: f64, seed: u64) -> Check {
    let out = attribute_mask(g, r, seed, MASK);
    prop_assert!(out.is_valid());
    prop_assert_eq!(&out.edges, &g.edges);
    let masked = out.features.rows().into_iter().filter(|row| row.iter().all(|&v| v == MASK)).count();
    prop_assert_eq!(masked, floor_count(r, g.num_nodes()));
    for (a, b) in out.features.rows().into_iter().zip(g.features.rows()) {
        prop_assert!(a == b || a.iter().all(|&v| v == MASK));
    }
    prop_assert_eq!(&out, &attribute_mask(g, r, seed, MASK));
    if r == 0.0 {
        prop_assert_eq!(&out, g);
    }
    Ok(())
}

pub fn subgraph_sample_invariants(g: &Graph, r: f64, seed: u64) -> Check {
    let n = g.num_nodes();
    let t = floor_count(r, n).max(1);
    match subgraph_sample(g, r, seed) {
        Ok(out) => {
            prop_assert!(n >= 2 && t < n);
            prop_assert!(out.is_valid(), "{:?}", out.validate());
            prop_assert_eq!(out.num_nodes(), n - t);
            let keep: BTreeSet<usize> = ids(&out).into_iter().collect();
            prop_assert_eq!(id_edges(&out), induced(g, &keep));
            prop_assert_eq!(&out, &subgraph_sample(g, r, seed).unwrap());
        }
        Err(_) => prop_assert!(n < 2 || t >= n),
    }
    Ok(())
}

pub fn feature_swap_invariants(g: &Graph, r: f64, seed: u64) -> Check {
    let out = feature_swap(g, r, seed);
    prop_assert!(out.is_valid());
    prop_assert_eq!(&out.edges, &g.edges);
    prop_assert_eq!(sorted_rows(&out.features), sorted_rows(&g.features));
    if let (Some(a), Some(b)) = (&out.node_labels, &g.node_labels) {
        // labels travel with their feature rows
        for (i, &id) in ids(&out).iter().enumerate() {
            prop_assert_eq!(a[i], b[id]);
        }
    }
    prop_assert_eq!(&out, &feature_swap(g, r, seed));
    if r == 0.0 {
        prop_assert_eq!(&out, g);
    }
    Ok(())
}

pub fn delete_rewire_invariants(g: &Graph, r: f64, seed: u64) -> Check {
    let out = random_delete_rewire(g, r, seed);
    let n = g.num_nodes();
    let base = g.token_count.unwrap_or(n);
    prop_assert!(out.is_valid(), "{:?}", out.validate());
    prop_assert_eq!(out.num_nodes(), n - floor_count(r, base).min(n - 1));
    prop_assert_eq!(out.token_count, g.token_count);
    // survivors that shared a deleted neighbour are adjacent
    let alive: BTreeSet<usize> = ids(&out).into_iter().collect();
    let edges = id_edges(&out);
    let adj = g.adjacency();
    for x in (0..n).filter(|x| !alive.contains(x)) {
        let nb: Vec<usize> = adj[x].iter().copied().filter(|y| alive.contains(y)).collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                prop_assert!(edges.contains(&(a.min(b), a.max(b))), "{a}-{b} lost after deleting {x}");
            }
        }
    }
    // original edges between survivors are kept
    for &(u, v) in &g.edges {
        if alive.contains(&u) && alive.contains(&v) {
            prop_assert!(edges.contains(&(u, v)));
        }
    }
    prop_assert_eq!(&out, &random_delete_rewire(g, r, seed));
    if r == 0.0 {
        prop_assert_eq!(&out, g);
    }
    Ok(())
}

pub fn random_insert_invariants(g: &Graph, r: f64, seed: u64) -> Check {
    let t = table(g.feature_dim());
    let out = random_insert(g, r, &t, seed).unwrap();
    let n = g.num_nodes();
    let m = floor_count(r, g.token_count.unwrap_or(n));
    prop_assert!(out.is_valid(), "{:?}", out.validate());
    prop_assert_eq!(out.num_nodes(), n + m);
    prop_assert_eq!(out.features.slice(ndarray::s![..n, ..]), g.features.view());
    for &(u, v) in &g.edges {
        prop_assert!(out.edges.contains(&(u, v)));
    }
    prop_assert_eq!(&out, &random_insert(g, r, &t, seed).unwrap());
    if r == 0.0 {
        prop_assert_eq!(&out, g);
    }
    Ok(())
}

pub fn synonym_replace_invariants(g: &Graph, r: f64, seed: u64) -> Check {
    let t = table(g.feature_dim());
    let out = synonym_replace(g, r, &t, seed).unwrap();
    prop_assert!(out.is_valid());
    prop_assert_eq!(&out.edges, &g.edges);
    prop_assert_eq!(&out.edge_weights, &g.edge_weights);
    let changed = out.features.rows().into_iter().zip(g.features.rows()).filter(|(a, b)| a != b).count();
    prop_assert!(changed <= floor_count(r, g.token_count.unwrap_or(g.num_nodes())));
    prop_assert_eq!(&out, &synonym_replace(g, r, &t, seed).unwrap());
    if r == 0.0 {
        prop_assert_eq!(&out, g);
    }
    Ok(())
}

/// Every check above on one input.
pub fn all_invariants(g: &Graph, r: f64, seed: u64) -> Check {
    node_drop_invariants(g, r, seed)?;
    edge_perturb_invariants(g, r, seed)?;
    attribute_mask_invariants(g, r, seed)?;
    subgraph_sample_invariants(g, r, seed)?;
    feature_swap_invariants(g, r, seed)?;
    delete_rewire_invariants(g, r, seed)?;
    random_insert_invariants(g, r, seed)?;
    synonym_replace_invariants(g, r, seed)
}
