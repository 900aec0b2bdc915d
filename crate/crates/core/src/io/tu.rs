//! TU benchmark layout.
//!
//! A dataset `NAME` lives in a directory holding `NAME_A.txt` (one `u, v` line
//! per directed edge, 1-based global node ids), `NAME_graph_indicator.txt`
//! (graph id per node), `NAME_graph_labels.txt` (label per graph) and
//! optionally `NAME_node_labels.txt` and `NAME_node_attributes.txt`.
//!
//! Two non-standard optional files carry data the TU layout has no slot for:
//! `NAME_edge_weights.txt` (one positive weight per `_A.txt` line) and
//! `NAME_token_counts.txt` (one positive integer per graph).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphDataset};

fn file(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}_{suffix}.txt"))
}

fn read_required(path: &Path) -> Result<String> {
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    if path.is_file() {
        fs::read_to_string(path).map(Some).map_err(|e| Error::io(path, e))
    } else {
        Ok(None)
    }
}

/// Non-blank lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(',').map(str::trim)
}

fn parse_int(path: &Path, line: usize, column: usize, s: &str) -> Result<i64> {
    s.parse::<i64>().map_err(|_| {
        Error::parse(path, line, Some(column), format!("expected an integer, found {s:?}"))
    })
}

fn parse_float(path: &Path, line: usize, column: usize, s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| {
        Error::parse(path, line, Some(column), format!("expected a number, found {s:?}"))
    })
}

fn parse_int_column(path: &Path, text: &str) -> Result<Vec<(usize, i64)>> {
    lines(text)
        .map(|(no, l)| {
            let first = fields(l).next().unwrap_or("");
            parse_int(path, no, 1, first).map(|v| (no, v))
        })
        .collect()
}

/// Loads `directory/name_*.txt`.
///
/// Edges are deduplicated and made undirected; self-loops are dropped. Graph
/// labels are remapped to contiguous ids in ascending order of their original
/// values. Node features come from node attributes when present, else from a
/// one-hot encoding of node labels over the dataset-wide label alphabet, else
/// the constant `1.0`.
pub fn load_tu_dataset(directory: &Path, name: &str) -> Result<GraphDataset> {
    let indicator_path = file(directory, name, "graph_indicator");
    let edges_path = file(directory, name, "A");
    let labels_path = file(directory, name, "graph_labels");
    let indicator_text = read_required(&indicator_path)?;
    let edges_text = read_required(&edges_path)?;
    let labels_text = read_required(&labels_path)?;

    let indicator = parse_int_column(&indicator_path, &indicator_text)?;
    let total_nodes = indicator.len();
    let graph_ids: BTreeSet<i64> = indicator.iter().map(|&(_, g)| g).collect();
    let graph_index: BTreeMap<i64, usize> =
        graph_ids.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let graph_count = graph_ids.len();

    // global node -> (graph, local index)
    let mut sizes = vec![0usize; graph_count];
    let mut placement = Vec::with_capacity(total_nodes);
    for &(_, g) in &indicator {
        let gi = graph_index[&g];
        placement.push((gi, sizes[gi]));
        sizes[gi] += 1;
    }

    let raw_labels = parse_int_column(&labels_path, &labels_text)?;
    if raw_labels.len() != graph_count {
        return Err(Error::parse(
            &labels_path,
            raw_labels.len().max(1),
            None,
            format!(
                "found {} graph labels for {} graphs",
                raw_labels.len(),
                graph_count
            ),
        ));
    }
    let alphabet: BTreeSet<i64> = raw_labels.iter().map(|&(_, l)| l).collect();
    let label_index: BTreeMap<i64, usize> =
        alphabet.iter().enumerate().map(|(i, &l)| (l, i)).collect();

    let weights_path = file(directory, name, "edge_weights");
    let weight_lines: Option<Vec<(usize, f64)>> = read_optional(&weights_path)?
        .map(|text| {
            lines(&text)
                .map(|(no, l)| {
                    let w = parse_float(&weights_path, no, 1, fields(l).next().unwrap_or(""))?;
                    if w > 0.0 {
                        Ok((no, w))
                    } else {
                        Err(Error::parse(&weights_path, no, Some(1), "edge weight must be positive"))
                    }
                })
                .collect::<Result<_>>()
        })
        .transpose()?;

    let mut edge_sets: Vec<BTreeMap<(usize, usize), f64>> = vec![BTreeMap::new(); graph_count];
    for (k, (no, l)) in lines(&edges_text).enumerate() {
        let mut it = fields(l);
        let (a, b) = match (it.next(), it.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::parse(&edges_path, no, None, "expected two node ids"));
            }
        };
        let a = parse_int(&edges_path, no, 1, a)?;
        let b = parse_int(&edges_path, no, 2, b)?;
        let endpoint = |v: i64, col: usize| -> Result<(usize, usize)> {
            if v < 1 || v as usize > total_nodes {
                return Err(Error::parse(
                    &edges_path,
                    no,
                    Some(col),
                    format!("node {v} outside the dataset's {total_nodes} nodes"),
                ));
            }
            Ok(placement[v as usize - 1])
        };
        let (ga, la) = endpoint(a, 1)?;
        let (gb, lb) = endpoint(b, 2)?;
        if ga != gb {
            return Err(Error::parse(
                &edges_path,
                no,
                None,
                format!("edge ({a}, {b}) connects nodes of different graphs"),
            ));
        }
        if la == lb {
            continue;
        }
        let weight = match &weight_lines {
            Some(w) => match w.get(k) {
                Some(&(_, w)) => w,
                None => {
                    return Err(Error::parse(
                        &weights_path,
                        w.len() + 1,
                        None,
                        "fewer edge weights than edge lines",
                    ))
                }
            },
            None => 1.0,
        };
        edge_sets[ga].entry((la.min(lb), la.max(lb))).or_insert(weight);
    }

    let node_labels_path = file(directory, name, "node_labels");
    let node_labels: Option<Vec<i64>> = read_optional(&node_labels_path)?
        .map(|text| parse_int_column(&node_labels_path, &text))
        .transpose()?
        .map(|v| v.into_iter().map(|(_, l)| l).collect());
    if let Some(l) = &node_labels {
        if l.len() != total_nodes {
            return Err(Error::parse(
                &node_labels_path,
                l.len().max(1),
                None,
                format!("found {} node labels for {} nodes", l.len(), total_nodes),
            ));
        }
    }

    let attributes_path = file(directory, name, "node_attributes");
    let attributes: Option<Vec<Vec<f64>>> = read_optional(&attributes_path)?
        .map(|text| {
            let mut rows = Vec::new();
            let mut dim = None;
            for (no, l) in lines(&text) {
                let row = fields(l)
                    .enumerate()
                    .map(|(c, s)| parse_float(&attributes_path, no, c + 1, s))
                    .collect::<Result<Vec<f64>>>()?;
                match dim {
                    None => dim = Some(row.len()),
                    Some(d) if d != row.len() => {
                        return Err(Error::parse(
                            &attributes_path,
                            no,
                            None,
                            format!("inconsistent dimension: expected {d}, found {}", row.len()),
                        ))
                    }
                    _ => {}
                }
                rows.push(row);
            }
            Ok(rows)
        })
        .transpose()?;
    if let Some(a) = &attributes {
        if a.len() != total_nodes {
            return Err(Error::parse(
                &attributes_path,
                a.len().max(1),
                None,
                format!("found {} attribute rows for {} nodes", a.len(), total_nodes),
            ));
        }
    }

    let token_path = file(directory, name, "token_counts");
    let token_counts: Option<Vec<usize>> = read_optional(&token_path)?
        .map(|text| {
            parse_int_column(&token_path, &text)?
                .into_iter()
                .map(|(no, v)| {
                    if v >= 1 {
                        Ok(v as usize)
                    } else {
                        Err(Error::parse(&token_path, no, Some(1), "token count must be positive"))
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    if let Some(t) = &token_counts {
        if t.len() != graph_count {
            return Err(Error::parse(
                &token_path,
                t.len().max(1),
                None,
                format!("found {} token counts for {} graphs", t.len(), graph_count),
            ));
        }
    }

    let node_alphabet: BTreeMap<i64, usize> = node_labels
        .as_ref()
        .map(|l| {
            l.iter()
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .enumerate()
                .map(|(i, v)| (v, i))
                .collect()
        })
        .unwrap_or_default();
    let dim = match (&attributes, &node_labels) {
        (Some(a), _) => a.first().map_or(1, Vec::len),
        (None, Some(_)) => node_alphabet.len(),
        (None, None) => 1,
    };

    let mut features: Vec<Array2<f64>> = sizes.iter().map(|&n| Array2::zeros((n, dim))).collect();
    let mut graph_node_labels: Vec<Vec<i64>> = sizes.iter().map(|&n| Vec::with_capacity(n)).collect();
    for (global, &(g, local)) in placement.iter().enumerate() {
        let mut row = features[g].row_mut(local);
        match (&attributes, &node_labels) {
            (Some(a), _) => {
                for (dst, &src) in row.iter_mut().zip(&a[global]) {
                    *dst = src;
                }
            }
            (None, Some(l)) => row[node_alphabet[&l[global]]] = 1.0,
            (None, None) => row[0] = 1.0,
        }
        if let Some(l) = &node_labels {
            graph_node_labels[g].push(l[global]);
        }
    }

    let graphs = features
        .into_iter()
        .zip(edge_sets)
        .zip(graph_node_labels)
        .enumerate()
        .map(|(g, ((features, edges), node_label_list))| {
            let weighted = weight_lines.is_some();
            let (pairs, weights): (Vec<_>, Vec<_>) = edges.into_iter().unzip();
            let mut graph = Graph::new(features, pairs);
            graph.edge_weights = weighted.then_some(weights);
            graph.graph_label = Some(label_index[&raw_labels[g].1]);
            graph.node_labels = node_labels.as_ref().map(|_| node_label_list);
            graph.token_count = token_counts.as_ref().map(|t| t[g]);
            graph
        })
        .collect();

    Ok(GraphDataset {
        name: name.to_string(),
        graphs,
        class_count: alphabet.len().max(1),
    })
}

/// Writes `dataset` into `directory` (created if needed) using the dataset's
/// name as file prefix. Node features are always written as node attributes.
pub fn write_tu_dataset(dataset: &GraphDataset, directory: &Path) -> Result<()> {
    fs::create_dir_all(directory).map_err(|e| Error::io(directory, e))?;
    let name = &dataset.name;
    let mut a = String::new();
    let mut weights = String::new();
    let mut indicator = String::new();
    let mut labels = String::new();
    let mut node_labels = String::new();
    let mut attributes = String::new();
    let mut tokens = String::new();

    let weighted = dataset.graphs.iter().any(|g| g.edge_weights.is_some());
    let all_node_labels = !dataset.is_empty() && dataset.graphs.iter().all(|g| g.node_labels.is_some());
    let all_tokens = !dataset.is_empty() && dataset.graphs.iter().all(|g| g.token_count.is_some());

    let mut offset = 1usize;
    for (gi, g) in dataset.graphs.iter().enumerate() {
        let label = g.graph_label.ok_or_else(|| {
            Error::at_graph(gi, Error::InvalidArgument("graph has no label".into()))
        })?;
        writeln!(labels, "{label}").unwrap();
        for (ei, &(u, v)) in g.edges.iter().enumerate() {
            let (u, v) = (u + offset, v + offset);
            writeln!(a, "{u}, {v}").unwrap();
            writeln!(a, "{v}, {u}").unwrap();
            if weighted {
                let w = g.weight(ei);
                writeln!(weights, "{w:?}").unwrap();
                writeln!(weights, "{w:?}").unwrap();
            }
        }
        for row in g.features.rows() {
            writeln!(indicator, "{}", gi + 1).unwrap();
            let cells: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
            writeln!(attributes, "{}", cells.join(", ")).unwrap();
        }
        if all_node_labels {
            for l in g.node_labels.as_ref().unwrap() {
                writeln!(node_labels, "{l}").unwrap();
            }
        }
        if all_tokens {
            writeln!(tokens, "{}", g.token_count.unwrap()).unwrap();
        }
        offset += g.num_nodes();
    }

    let write = |suffix: &str, body: &str| -> Result<()> {
        let path = file(directory, name, suffix);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))
    };
    write("A", &a)?;
    write("graph_indicator", &indicator)?;
    write("graph_labels", &labels)?;
    write("node_attributes", &attributes)?;
    if weighted {
        write("edge_weights", &weights)?;
    }
    if all_node_labels {
        write("node_labels", &node_labels)?;
    }
    if all_tokens {
        write("token_counts", &tokens)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn write_files(dir: &Path, files: &[(&str, &str)]) {
        for (suffix, body) in files {
            fs::write(file(dir, "TOY", suffix), body).unwrap();
        }
    }

    #[test]
    fn loads_two_graph_toy() {
        let dir = tempfile::tempdir().unwrap();
        write_files(
            dir.path(),
            &[
                ("A", "1, 2\n2, 1\n"),
                ("graph_indicator", "1\n1\n2\n"),
                ("graph_labels", "-1\n1\n"),
            ],
        );
        let ds = load_tu_dataset(dir.path(), "TOY").unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.class_count, 2);
        assert_eq!(ds.graphs[0].num_nodes(), 2);
        assert_eq!(ds.graphs[0].edges, vec![(0, 1)]);
        assert_eq!(ds.graphs[1].num_nodes(), 1);
        assert_eq!(ds.labels(), vec![Some(0), Some(1)]);
        assert_eq!(ds.graphs[1].features, array![[1.0]]);
        assert!(ds.validate().is_empty());
    }

    #[test]
    fn node_labels_become_global_one_hot() {
        let dir = tempfile::tempdir().unwrap();
        write_files(
            dir.path(),
            &[
                ("A", "1, 2\n2, 1\n"),
                ("graph_indicator", "1\n1\n2\n"),
                ("graph_labels", "0\n1\n"),
                ("node_labels", "3\n5\n7\n"),
            ],
        );
        let ds = load_tu_dataset(dir.path(), "TOY").unwrap();
        assert_eq!(ds.graphs[0].features, array![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
        assert_eq!(ds.graphs[1].features, array![[0.0, 0.0, 1.0]]);
        assert_eq!(ds.graphs[1].node_labels, Some(vec![7]));
    }

    #[test]
    fn attributes_take_precedence() {
        let dir = tempfile::tempdir().unwrap();
        write_files(
            dir.path(),
            &[
                ("A", ""),
                ("graph_indicator", "1\n"),
                ("graph_labels", "4\n"),
                ("node_labels", "3\n"),
                ("node_attributes", "0.5, -2\n"),
            ],
        );
        let ds = load_tu_dataset(dir.path(), "TOY").unwrap();
        assert_eq!(ds.graphs[0].features, array![[0.5, -2.0]]);
        assert_eq!(ds.class_count, 1);
    }

    #[test]
    fn missing_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        write_files(dir.path(), &[("A", ""), ("graph_indicator", "1\n")]);
        let err = load_tu_dataset(dir.path(), "TOY").unwrap_err();
        assert!(matches!(err, Error::MissingFile(p) if p.ends_with("TOY_graph_labels.txt")));
    }

    #[test]
    fn cross_graph_edge_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        write_files(
            dir.path(),
            &[
                ("A", "1, 3\n"),
                ("graph_indicator", "1\n1\n2\n"),
                ("graph_labels", "0\n1\n"),
            ],
        );
        let err = load_tu_dataset(dir.path(), "TOY").unwrap_err();
        assert!(err.to_string().contains("different graphs"), "{err}");
    }

    #[test]
    fn non_integer_label_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        write_files(
            dir.path(),
            &[("A", ""), ("graph_indicator", "1\n"), ("graph_labels", "one\n")],
        );
        let err = load_tu_dataset(dir.path(), "TOY").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn out_of_range_edge_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        write_files(
            dir.path(),
            &[("A", "1, 9\n"), ("graph_indicator", "1\n"), ("graph_labels", "0\n")],
        );
        assert!(load_tu_dataset(dir.path(), "TOY").is_err());
    }

    #[test]
    fn single_node_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let ds = GraphDataset {
            name: "ONE".into(),
            graphs: vec![Graph::unit_features(1, []).with_label(0)],
            class_count: 1,
        };
        write_tu_dataset(&ds, dir.path()).unwrap();
        assert_eq!(load_tu_dataset(dir.path(), "ONE").unwrap(), ds);
    }

    #[test]
    fn weights_labels_and_tokens_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut g0 = Graph::new(array![[0.1, 0.2], [0.3, 1e-7], [-5.5, 2.0]], [(0, 1), (1, 2)])
            .with_label(1);
        g0.edge_weights = Some(vec![2.0, 1.0]);
        g0.node_labels = Some(vec![1, 2, 3]);
        g0.token_count = Some(4);
        let mut g1 = Graph::new(array![[1.0, 1.0]], []).with_label(0);
        g1.edge_weights = Some(vec![]);
        g1.node_labels = Some(vec![2]);
        g1.token_count = Some(1);
        let ds = GraphDataset {
            name: "W".into(),
            graphs: vec![g0, g1],
            class_count: 2,
        };
        write_tu_dataset(&ds, dir.path()).unwrap();
        assert_eq!(load_tu_dataset(dir.path(), "W").unwrap(), ds);
    }
}
