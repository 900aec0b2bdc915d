//! `augaudit`: augment graph datasets, measure augmentation fidelity and
//! audit representations from the command line.
//!
//! Exit status is 0 on success, 1 when reading data or computing fails and 2
//! on a usage error.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use augaudit::augment::{AugmentationKind, ContextAugConfig};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "augaudit", version, about = "Graph augmentation and representation audit toolkit")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = parse_positive_count)]
    pub threads: Option<usize>,
    /// Do not print results to stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply one augmentation to every graph of a TU dataset.
    Augment(AugmentArgs),
    /// Build and augment word co-occurrence graphs.
    #[command(subcommand)]
    Text(TextCommand),
    /// Compare two TU datasets graph by graph.
    Fidelity(FidelityArgs),
    /// Embed a TU dataset with an untrained GIN encoder.
    Embed(EmbedArgs),
    /// Cross-validated accuracy of embeddings.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Representation sanity checks.
    #[command(subcommand)]
    Sanity(SanityCommand),
    /// Affinity and diversity of an augmentation.
    #[command(subcommand)]
    Audit(AuditCommand),
    /// Loss diagnostics.
    #[command(subcommand)]
    Diag(DiagCommand),
}

#[derive(Args, Debug)]
pub struct DatasetArgs {
    /// TU dataset directory.
    #[arg(long)]
    pub input: PathBuf,
    /// File prefix inside the directory (default: detected).
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Args, Debug)]
pub struct AugmentArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[arg(long)]
    pub op: AugmentationKind,
    #[arg(long, value_parser = parse_fraction)]
    pub ratio: f64,
    #[arg(long)]
    pub seed: u64,
    /// Word vectors, needed by synonym-replace and random-insert.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Output TU dataset directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum TextCommand {
    /// Turn a `label<TAB>text` corpus into a TU dataset of co-occurrence graphs.
    BuildGraph(BuildGraphArgs),
    /// Apply synonym/insert/swap/delete edits to co-occurrence graphs.
    Augment(TextAugmentArgs),
}

#[derive(Args, Debug)]
pub struct BuildGraphArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long, value_parser = parse_at_least_two)]
    pub window: usize,
    /// Dataset name used as file prefix.
    #[arg(long, default_value = "TEXT")]
    pub name: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct TextAugmentArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[arg(long)]
    pub embeddings: PathBuf,
    /// Strengths as `synonym=..,delete=..,insert=..,swap=..`.
    #[arg(long, default_value_t = ContextAugConfig::default())]
    pub config: ContextAugConfig,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct FidelityArgs {
    /// Original TU dataset directory.
    #[arg(long)]
    pub a: PathBuf,
    /// Augmented TU dataset directory.
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, default_value_t = augaudit::fidelity::DEFAULT_COVERAGE, value_parser = parse_coverage)]
    pub coverage: f64,
    /// Directory of `<index>.csv` grayscale images for the originals.
    #[arg(long, requires = "images_b")]
    pub images_a: Option<PathBuf>,
    /// Directory of `<index>.csv` grayscale images for the augmented graphs.
    #[arg(long, requires = "images_a")]
    pub images_b: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EncoderArgs {
    #[arg(long, default_value_t = 3, value_parser = parse_positive_count)]
    pub layers: usize,
    #[arg(long, default_value_t = 32, value_parser = parse_positive_count)]
    pub hidden: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub epsilon: f64,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub encoder: EncoderArgs,
    #[arg(long)]
    pub seed: u64,
    /// Embedding matrix CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Class labels, one per line.
    #[arg(long)]
    pub labels_out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EmbeddingInput {
    #[arg(long)]
    pub emb: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[arg(long, default_value_t = 0.1, value_parser = parse_positive)]
    pub lr: f64,
    #[arg(long, default_value_t = 500, value_parser = parse_positive_count)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1e-3, value_parser = parse_non_negative)]
    pub l2: f64,
}

#[derive(Subcommand, Debug)]
pub enum EvalCommand {
    /// Stratified k-fold kNN accuracy under cosine similarity.
    Knn {
        #[command(flatten)]
        input: EmbeddingInput,
        #[arg(long, default_value_t = 5, value_parser = parse_positive_count)]
        k: usize,
        #[arg(long, default_value_t = 10, value_parser = parse_at_least_two)]
        folds: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Stratified k-fold linear-probe accuracy.
    Probe {
        #[command(flatten)]
        input: EmbeddingInput,
        #[command(flatten)]
        probe: ProbeArgs,
        #[arg(long, default_value_t = 10, value_parser = parse_at_least_two)]
        folds: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SanityCommand {
    /// Class-sorted cosine similarity heatmap with intra/inter-class means.
    SimMatrix {
        #[command(flatten)]
        input: EmbeddingInput,
        /// PGM heatmap.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Optional CSV copy of the sorted matrix.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum AuditCommand {
    /// Clean-vs-augmented probe accuracy and loss on frozen random embeddings.
    Affinity {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[arg(long)]
        op: AugmentationKind,
        #[arg(long, value_parser = parse_fraction)]
        ratio: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[command(flatten)]
        encoder: EncoderArgs,
        #[command(flatten)]
        probe: ProbeArgs,
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum DiagCommand {
    /// NT-XENT of paired embedding matrices (row i of each is a positive pair).
    NtXent {
        #[arg(long)]
        emb_a: PathBuf,
        #[arg(long)]
        emb_b: PathBuf,
        #[arg(long, default_value_t = augaudit::eval::DEFAULT_TEMPERATURE, value_parser = parse_positive)]
        tau: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn parse_count(s: &str, min: usize) -> Result<usize, String> {
    let v = s
        .parse::<usize>()
        .map_err(|_| format!("{s:?} is not a non-negative integer"))?;
    if v >= min {
        Ok(v)
    } else {
        Err(format!("{v} is below the minimum of {min}"))
    }
}

fn parse_positive_count(s: &str) -> Result<usize, String> {
    parse_count(s, 1)
}

fn parse_at_least_two(s: &str) -> Result<usize, String> {
    parse_count(s, 2)
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("{s:?} is not a number"))
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn parse_coverage(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is outside (0, 1]"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} is not positive"))
    }
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} is negative"))
    }
}

fn run(argv: Vec<OsString>) -> u8 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    let rendered = e.render().to_string();
                    let line = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: invalid usage");
                    eprintln!("{line}");
                    2
                }
            };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return 1;
        }
    }
    let argv: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match commands::execute(&cli, &argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os().collect()))
}
