//! Domain-agnostic augmentations: node dropping, edge perturbation,
//! attribute masking and random-walk subgraph removal.
//!
//! Every count is `floor(ratio * size)` (see [`scaled_count`]).

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{rng_from_seed, scaled_count};

/// Removes `min(n - 1, floor(ratio * n))` uniformly chosen nodes and returns
/// the induced subgraph on the survivors.
pub fn node_drop(graph: &Graph, ratio: f64, seed: u64) -> Graph {
    let n = graph.num_nodes();
    let m = scaled_count(ratio, n).min(n.saturating_sub(1));
    if m == 0 {
        return graph.clone();
    }
    let mut rng = rng_from_seed(seed);
    let mut dropped = vec![false; n];
    for i in index::sample(&mut rng, n, m) {
        dropped[i] = true;
    }
    let keep: Vec<usize> = (0..n).filter(|&i| !dropped[i]).collect();
    graph.induced_subgraph(&keep)
}

/// Removes `r = floor(ratio * |E|)` uniformly chosen edges, then adds
/// `min(r, #non-edges)` edges drawn uniformly from the non-edges of the
/// original graph. Added edges get weight 1.0 when the graph is weighted.
pub fn edge_perturb(graph: &Graph, ratio: f64, seed: u64) -> Graph {
    let e = graph.num_edges();
    let r = scaled_count(ratio, e);
    if r == 0 {
        return graph.clone();
    }
    let mut rng = rng_from_seed(seed);
    let removed: HashSet<usize> = index::sample(&mut rng, e, r).into_iter().collect();

    let n = graph.num_nodes();
    let existing: HashSet<(usize, usize)> = graph.edges.iter().copied().collect();
    let pairs = n * n.saturating_sub(1) / 2;
    let free = pairs - existing.len();
    let add = r.min(free);

    let mut added: Vec<(usize, usize)> = Vec::with_capacity(add);
    if add > 0 {
        if free * 2 >= pairs && pairs > 4096 {
            // sparse: rejection sampling is uniform over non-edges
            let mut chosen = HashSet::with_capacity(add);
            while chosen.len() < add {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                let key = (u.min(v), u.max(v));
                if u != v && !existing.contains(&key) && chosen.insert(key) {
                    added.push(key);
                }
            }
        } else {
            let non_edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|p| !existing.contains(p))
                .collect();
            added.extend(
                index::sample(&mut rng, non_edges.len(), add)
                    .into_iter()
                    .map(|i| non_edges[i]),
            );
        }
    }

    let mut next: Vec<((usize, usize), f64)> = graph
        .edges
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .map(|(i, &p)| (p, graph.weight(i)))
        .chain(added.into_iter().map(|p| (p, 1.0)))
        .collect();
    next.sort_by_key(|a| a.0);

    let mut out = graph.clone();
    out.edges = next.iter().map(|x| x.0).collect();
    out.edge_weights = graph
        .edge_weights
        .as_ref()
        .map(|_| next.iter().map(|x| x.1).collect());
    out
}

/// Sets every feature of `floor(ratio * n)` uniformly chosen nodes to
/// `mask_value`.
pub fn attribute_mask(graph: &Graph, ratio: f64, seed: u64, mask_value: f64) -> Graph {
    let n = graph.num_nodes();
    let m = scaled_count(ratio, n);
    let mut out = graph.clone();
    if m == 0 {
        return out;
    }
    let mut rng = rng_from_seed(seed);
    for i in index::sample(&mut rng, n, m) {
        out.features.row_mut(i).fill(mask_value);
    }
    out
}

/// Collects `t = max(1, floor(ratio * n))` distinct nodes with a random walk
/// and removes them, returning the induced subgraph on the rest.
///
/// The walk starts at a uniform node; once every node of the current
/// component has been collected it jumps to a uniform unvisited node.
/// Fails when the graph has fewer than two nodes or when `t >= n`.
pub fn subgraph_sample(graph: &Graph, ratio: f64, seed: u64) -> Result<Graph> {
    let n = graph.num_nodes();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "subgraph sampling needs at least 2 nodes, graph has {n}"
        )));
    }
    let t = scaled_count(ratio, n).max(1);
    if t >= n {
        return Err(Error::InvalidArgument(format!(
            "ratio {ratio} would remove all {n} nodes"
        )));
    }

    let adj = graph.adjacency();
    let parts = graph.connected_components();
    let mut component = vec![0; n];
    for (c, members) in parts.iter().enumerate() {
        for &v in members {
            component[v] = c;
        }
    }
    let mut remaining: Vec<usize> = parts.iter().map(Vec::len).collect();

    let mut rng = rng_from_seed(seed);
    let mut visited = vec![false; n];
    let mut collected = 0;
    let mut visit = |v: usize, visited: &mut [bool], remaining: &mut [usize]| {
        if !visited[v] {
            visited[v] = true;
            remaining[component[v]] -= 1;
            collected += 1;
        }
        collected
    };

    let mut current = rng.random_range(0..n);
    let mut count = visit(current, &mut visited, &mut remaining);
    while count < t {
        if remaining[component[current]] == 0 {
            let unvisited: Vec<usize> = (0..n).filter(|&v| !visited[v]).collect();
            current = unvisited[rng.random_range(0..unvisited.len())];
        } else {
            let nbrs = &adj[current];
            current = nbrs[rng.random_range(0..nbrs.len())];
        }
        count = visit(current, &mut visited, &mut remaining);
    }

    let keep: Vec<usize> = (0..n).filter(|&v| !visited[v]).collect();
    Ok(graph.induced_subgraph(&keep))
}
