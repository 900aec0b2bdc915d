//! Word-vector tables and labelled text corpora.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};

/// Word -> vector map with rows in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    words: Vec<String>,
    vectors: Array2<f64>,
    index: HashMap<String, usize>,
}

impl EmbeddingTable {
    pub fn new(words: Vec<String>, vectors: Array2<f64>) -> Result<Self> {
        if words.len() != vectors.nrows() {
            return Err(Error::InvalidArgument(format!(
                "{} words but {} vectors",
                words.len(),
                vectors.nrows()
            )));
        }
        if vectors.ncols() == 0 {
            return Err(Error::InvalidArgument("embedding dimension must be positive".into()));
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate word {w:?}")));
            }
        }
        Ok(EmbeddingTable {
            words,
            vectors,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn vectors(&self) -> &Array2<f64> {
        &self.vectors
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.vectors.row(i)
    }

    pub fn get(&self, word: &str) -> Option<ArrayView1<'_, f64>> {
        self.index.get(word).map(|&i| self.vectors.row(i))
    }
}

/// Reads the text word-vector format: one `word v1 ... vd` line per word,
/// optionally preceded by a `count dim` header.
pub fn load_embedding_table(path: &Path) -> Result<EmbeddingTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let rows: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    if rows.is_empty() {
        return Err(Error::parse(path, 1, None, "empty file"));
    }

    let mut body = &rows[..];
    let mut header = None;
    if let [(_, first), rest @ ..] = &rows[..] {
        if let ([count, dim], Some((_, next))) = (first.as_slice(), rest.first()) {
            if let (Ok(count), Ok(dim)) = (count.parse::<usize>(), dim.parse::<usize>()) {
                if next.len() == dim + 1 {
                    header = Some((count, dim));
                    body = rest;
                }
            }
        }
    }

    let dim = body[0].1.len() - 1;
    if dim == 0 {
        return Err(Error::parse(path, body[0].0, None, "row has no vector components"));
    }
    let mut words = Vec::with_capacity(body.len());
    let mut values = Vec::with_capacity(body.len() * dim);
    let mut seen = HashMap::new();
    for (no, tokens) in body {
        if tokens.len() - 1 != dim {
            return Err(Error::parse(
                path,
                *no,
                None,
                format!("inconsistent dimension: expected {dim}, found {}", tokens.len() - 1),
            ));
        }
        if let Some(prev) = seen.insert(tokens[0], *no) {
            return Err(Error::parse(
                path,
                *no,
                None,
                format!("duplicate word {:?} (first seen on line {prev})", tokens[0]),
            ));
        }
        words.push(tokens[0].to_string());
        for (c, t) in tokens[1..].iter().enumerate() {
            values.push(t.parse::<f64>().map_err(|_| {
                Error::parse(path, *no, Some(c + 2), format!("expected a number, found {t:?}"))
            })?);
        }
    }
    if let Some((count, hdim)) = header {
        if hdim != dim || count != words.len() {
            return Err(Error::parse(
                path,
                rows[0].0,
                None,
                format!(
                    "header declares {count} x {hdim} but the file holds {} x {dim}",
                    words.len()
                ),
            ));
        }
    }
    let vectors = Array2::from_shape_vec((words.len(), dim), values)
        .expect("row lengths checked above");
    EmbeddingTable::new(words, vectors)
}

/// A labelled, tokenised document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub tokens: Vec<String>,
    pub label: usize,
}

impl Document {
    /// Whitespace tokenisation with lowercasing.
    pub fn from_text(text: &str, label: usize) -> Self {
        Document {
            tokens: text.split_whitespace().map(str::to_lowercase).collect(),
            label,
        }
    }
}

/// Reads a TSV corpus: `label<TAB>space-separated tokens` per line. Blank
/// lines are skipped.
pub fn load_corpus(path: &Path) -> Result<Vec<Document>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text, path)
}

pub(crate) fn parse_corpus(text: &str, path: &Path) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (label, body) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(path, no, None, "expected `label<TAB>tokens`"))?;
        let label = label.trim().parse::<usize>().map_err(|_| {
            Error::parse(path, no, Some(1), format!("label {label:?} is not a class id"))
        })?;
        let doc = Document::from_text(body, label);
        if doc.tokens.is_empty() {
            return Err(Error::parse(path, no, Some(2), "document has no tokens"));
        }
        docs.push(doc);
    }
    Ok(docs)
}
