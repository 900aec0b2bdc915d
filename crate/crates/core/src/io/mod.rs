//! File formats: TU datasets, word vectors, corpora, CSV matrices, label
//! files and PGM heatmaps.

mod matrix;
mod text;
mod tu;

pub use matrix::{
    format_significant, heatmap_pgm, labels_to_string, matrix_to_csv, parse_matrix_csv,
    quantize, read_labels, read_matrix_csv, write_heatmap_pgm, write_labels, write_matrix_csv,
};
pub use text::{load_corpus, load_embedding_table, Document, EmbeddingTable};
pub use tu::{load_tu_dataset, write_tu_dataset};
