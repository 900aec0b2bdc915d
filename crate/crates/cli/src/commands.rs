//! Subcommand implementations.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use augaudit::augment::{apply_context_dataset, apply_dataset, build_cooccurrence, AugmentationSpec};
use augaudit::encoder::{init_encoder, EmbeddingMatrix, EncoderConfig};
use augaudit::eval::{
    affinity_audit, cross_validate_probe, knn_accuracy, nt_xent, similarity_matrix, ProbeConfig,
};
use augaudit::fidelity::{fidelity_batch, ssim};
use augaudit::io::{
    heatmap_pgm, labels_to_string, load_corpus, load_embedding_table, load_tu_dataset,
    matrix_to_csv, read_labels, read_matrix_csv, write_tu_dataset, EmbeddingTable,
};
use augaudit::rng::split_seed;
use augaudit::GraphDataset;
use serde::Serialize;

use crate::output::{write_json, Manifest, Outputs};
use crate::{
    AuditCommand, Cli, Command, DatasetArgs, DiagCommand, EmbeddingInput, EncoderArgs, EvalCommand,
    ProbeArgs, SanityCommand, TextCommand,
};

pub fn execute(cli: &Cli, argv: &[String]) -> Result<()> {
    let say = |text: &str| {
        if !cli.quiet {
            println!("{text}");
        }
    };
    match &cli.command {
        Command::Augment(a) => {
            let mut m = Manifest::new("augment", argv);
            m.seed("seed", a.seed);
            let ds = load_dataset(&a.dataset, &mut m)?;
            let table = a.embeddings.as_deref().map(|p| load_table(p, &mut m)).transpose()?;
            let spec = AugmentationSpec::new(a.op, a.ratio, a.seed)?;
            let out_ds = apply_dataset(&spec, &ds, table.as_ref())
                .with_context(|| format!("augmenting {}", a.dataset.input.display()))?;
            let mut outs = Outputs::default();
            write_tu_dataset(&out_ds, &outs.dir(&a.out)?)?;
            outs.commit(m)?;
            say(&format!("wrote {} graphs to {}", out_ds.len(), a.out.display()));
        }
        Command::Text(TextCommand::BuildGraph(b)) => {
            let mut m = Manifest::new("text build-graph", argv);
            m.input(&b.corpus)?;
            let docs = load_corpus(&b.corpus)?;
            let table = load_table(&b.embeddings, &mut m)?;
            let graphs = docs
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    build_cooccurrence(d, b.window, &table)
                        .with_context(|| format!("document {} of {}", i + 1, b.corpus.display()))
                })
                .collect::<Result<Vec<_>>>()?;
            let class_count = docs.iter().map(|d| d.label + 1).max().unwrap_or(1);
            let ds = GraphDataset {
                name: b.name.clone(),
                graphs,
                class_count,
            };
            let mut outs = Outputs::default();
            write_tu_dataset(&ds, &outs.dir(&b.out)?)?;
            outs.commit(m)?;
            say(&format!("wrote {} graphs to {}", ds.len(), b.out.display()));
        }
        Command::Text(TextCommand::Augment(t)) => {
            let mut m = Manifest::new("text augment", argv);
            m.seed("seed", t.seed);
            let ds = load_dataset(&t.dataset, &mut m)?;
            let table = load_table(&t.embeddings, &mut m)?;
            let config = augaudit::augment::ContextAugConfig {
                seed: t.seed,
                ..t.config
            };
            let out_ds = apply_context_dataset(&config, &ds, &table)
                .with_context(|| format!("augmenting {}", t.dataset.input.display()))?;
            let mut outs = Outputs::default();
            write_tu_dataset(&out_ds, &outs.dir(&t.out)?)?;
            outs.commit(m)?;
            say(&format!("wrote {} graphs to {}", out_ds.len(), t.out.display()));
        }
        Command::Fidelity(f) => {
            let mut m = Manifest::new("fidelity", argv);
            let a = load_dataset(&DatasetArgs { input: f.a.clone(), name: None }, &mut m)?;
            let b = load_dataset(&DatasetArgs { input: f.b.clone(), name: None }, &mut m)?;
            let mut report = fidelity_batch(&a, &b, f.coverage)?;
            if let (Some(da), Some(db)) = (&f.images_a, &f.images_b) {
                m.input(da)?;
                m.input(db)?;
                for pair in &mut report.pairs {
                    let ia = read_matrix_csv(&da.join(format!("{}.csv", pair.index)))?;
                    let ib = read_matrix_csv(&db.join(format!("{}.csv", pair.index)))?;
                    pair.ssim = Some(ssim(&ia, &ib).with_context(|| format!("image pair {}", pair.index))?);
                }
            }
            let mut outs = Outputs::default();
            write_json(&report, &outs.file(&f.out)?)?;
            outs.commit(m)?;
            say(&format!("compared {} graph pairs; report in {}", report.pairs.len(), f.out.display()));
        }
        Command::Embed(e) => {
            let mut m = Manifest::new("embed", argv);
            m.seed("seed", e.seed);
            let ds = load_dataset(&e.dataset, &mut m)?;
            let emb = embed(&ds, &e.encoder, e.seed)?;
            let mut outs = Outputs::default();
            fs::write(outs.file(&e.out)?, matrix_to_csv(&emb.rows))?;
            fs::write(outs.file(&e.labels_out)?, labels_to_string(&emb.labels))?;
            outs.commit(m)?;
            say(&format!("embedded {} graphs into {} dimensions", emb.len(), emb.dim()));
        }
        Command::Eval(EvalCommand::Knn { input, k, folds, seed, report }) => {
            let mut m = Manifest::new("eval knn", argv);
            m.seed("seed", *seed);
            let emb = load_embeddings(input, &mut m)?;
            let score = knn_accuracy(&emb, *k, *folds, *seed)?;
            finish_report(&score, report.as_deref(), m)?;
            say(&json(&score)?);
        }
        Command::Eval(EvalCommand::Probe { input, probe, folds, seed, report }) => {
            let mut m = Manifest::new("eval probe", argv);
            m.seed("seed", *seed);
            let emb = load_embeddings(input, &mut m)?;
            let score = cross_validate_probe(&emb, &probe_config(probe, *seed), *folds, *seed)?;
            finish_report(&score, report.as_deref(), m)?;
            say(&json(&score)?);
        }
        Command::Sanity(SanityCommand::SimMatrix { input, out, report, matrix_out }) => {
            let mut m = Manifest::new("sanity sim-matrix", argv);
            let emb = load_embeddings(input, &mut m)?;
            let sim = similarity_matrix(&emb)?;
            let summary = SimSummary {
                n: emb.len(),
                intra_mean: sim.intra_mean,
                inter_mean: sim.inter_mean,
                passes: sim.passes,
                class_boundaries: sim.class_boundaries.clone(),
            };
            let mut outs = Outputs::default();
            fs::write(outs.file(out)?, heatmap_pgm(&sim.matrix))?;
            write_json(&summary, &outs.file(report)?)?;
            if let Some(p) = matrix_out {
                fs::write(outs.file(p)?, matrix_to_csv(&sim.matrix))?;
            }
            outs.commit(m)?;
            say(&json(&summary)?);
        }
        Command::Audit(AuditCommand::Affinity {
            dataset,
            op,
            ratio,
            seed,
            embeddings,
            encoder,
            probe,
            report,
        }) => {
            let mut m = Manifest::new("audit affinity", argv);
            m.seed("seed", *seed);
            let ds = load_dataset(dataset, &mut m)?;
            let table = embeddings.as_deref().map(|p| load_table(p, &mut m)).transpose()?;
            let spec = AugmentationSpec::new(*op, *ratio, split_seed(*seed, 0))?;
            let enc = encoder_config(encoder, split_seed(*seed, 1));
            let probe = probe_config(probe, split_seed(*seed, 2));
            let r = affinity_audit(&ds, &spec, &enc, &probe, table.as_ref())?;
            let mut outs = Outputs::default();
            write_json(&r, &outs.file(report)?)?;
            outs.commit(m)?;
            say(&json(&r)?);
        }
        Command::Diag(DiagCommand::NtXent { emb_a, emb_b, tau, report }) => {
            let mut m = Manifest::new("diag nt-xent", argv);
            m.input(emb_a)?;
            m.input(emb_b)?;
            let a = read_matrix_csv(emb_a)?;
            let b = read_matrix_csv(emb_b)?;
            let loss = nt_xent(&a, &b, *tau)?;
            let r = NtXentReport {
                n: a.nrows(),
                temperature: *tau,
                loss,
            };
            finish_report(&r, report.as_deref(), m)?;
            say(&json(&r)?);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SimSummary {
    n: usize,
    intra_mean: Option<f64>,
    inter_mean: Option<f64>,
    passes: bool,
    class_boundaries: Vec<usize>,
}

#[derive(Serialize)]
struct NtXentReport {
    n: usize,
    temperature: f64,
    loss: f64,
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn finish_report<T: Serialize>(value: &T, path: Option<&Path>, manifest: Manifest) -> Result<()> {
    if let Some(p) = path {
        let mut outs = Outputs::default();
        write_json(value, &outs.file(p)?)?;
        outs.commit(manifest)?;
    }
    Ok(())
}

/// The prefix of the single `*_graph_indicator.txt` file in `dir`.
fn detect_name(dir: &Path) -> Result<String> {
    if !dir.is_dir() {
        bail!("input directory {} does not exist", dir.display());
    }
    let mut names: Vec<String> = fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            e.file_name()
                .to_str()
                .and_then(|n| n.strip_suffix("_graph_indicator.txt"))
                .map(str::to_string)
        })
        .collect();
    names.sort();
    match names.len() {
        1 => Ok(names.remove(0)),
        0 => bail!("no *_graph_indicator.txt file in {}", dir.display()),
        _ => bail!(
            "several datasets in {} ({}); pick one with --name",
            dir.display(),
            names.join(", ")
        ),
    }
}

fn load_dataset(args: &DatasetArgs, m: &mut Manifest) -> Result<GraphDataset> {
    let name = match &args.name {
        Some(n) => n.clone(),
        None => detect_name(&args.input)?,
    };
    let ds = load_tu_dataset(&args.input, &name)?;
    m.input(&args.input)?;
    Ok(ds)
}

fn load_table(path: &Path, m: &mut Manifest) -> Result<EmbeddingTable> {
    let t = load_embedding_table(path)?;
    m.input(path)?;
    Ok(t)
}

fn load_embeddings(input: &EmbeddingInput, m: &mut Manifest) -> Result<EmbeddingMatrix> {
    let rows = read_matrix_csv(&input.emb)?;
    let labels = read_labels(&input.labels)?;
    m.input(&input.emb)?;
    m.input(&input.labels)?;
    EmbeddingMatrix::new(rows, labels).with_context(|| {
        format!(
            "pairing {} with {}",
            input.emb.display(),
            input.labels.display()
        )
    })
}

fn encoder_config(e: &EncoderArgs, seed: u64) -> EncoderConfig {
    EncoderConfig {
        layers: e.layers,
        hidden_dim: e.hidden,
        epsilon: e.epsilon,
        seed,
    }
}

fn probe_config(p: &ProbeArgs, seed: u64) -> ProbeConfig {
    ProbeConfig {
        learning_rate: p.lr,
        epochs: p.epochs,
        l2_lambda: p.l2,
        seed,
    }
}

fn embed(ds: &GraphDataset, e: &EncoderArgs, seed: u64) -> Result<EmbeddingMatrix> {
    let dim = ds.feature_dim().context("dataset has no graphs")?;
    let enc = init_encoder(&encoder_config(e, seed), dim)?;
    Ok(enc.embed_dataset(ds)?)
}
