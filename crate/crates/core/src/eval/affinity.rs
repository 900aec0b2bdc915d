//! Affinity and diversity of an augmentation, measured with a linear probe
//! on frozen random-encoder embeddings.

use serde::Serialize;

use super::probe::{probe_eval, train_linear_probe, ProbeConfig};
use crate::augment::{apply_dataset, AugmentationSpec};
use crate::encoder::{init_encoder, EncoderConfig};
use crate::error::{Error, Result};
use crate::graph::GraphDataset;
use crate::io::EmbeddingTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffinityReport {
    /// Accuracy of the probe trained on clean embeddings, on clean rows.
    pub clean_accuracy: f64,
    /// Accuracy of the same probe on the augmented rows.
    pub augmented_accuracy: f64,
    /// `clean_accuracy - augmented_accuracy`.
    pub affinity: f64,
    pub clean_loss: f64,
    pub augmented_loss: f64,
    /// Final training cross-entropy of the clean-trained probe.
    pub clean_train_loss: f64,
    /// Final training cross-entropy of a probe trained on augmented rows.
    pub augmented_train_loss: f64,
    /// `augmented_train_loss - clean_train_loss`.
    pub diversity: f64,
}

/// Embeds the clean and augmented datasets with one random encoder, trains a
/// probe on the clean embeddings and evaluates it on both. A second probe
/// trained on the augmented embeddings gives the diversity term.
pub fn affinity_audit(
    dataset: &GraphDataset,
    spec: &AugmentationSpec,
    encoder: &EncoderConfig,
    probe: &ProbeConfig,
    table: Option<&EmbeddingTable>,
) -> Result<AffinityReport> {
    let dim = dataset
        .feature_dim()
        .ok_or_else(|| Error::InvalidArgument("dataset is empty".into()))?;
    let enc = init_encoder(encoder, dim)?;
    let clean = enc.embed_dataset(dataset)?;
    let augmented = enc.embed_dataset(&apply_dataset(spec, dataset, table)?)?;

    let clean_probe = train_linear_probe(&clean, probe)?;
    let on_clean = probe_eval(&clean_probe, &clean)?;
    let on_augmented = probe_eval(&clean_probe, &augmented)?;
    let augmented_probe = train_linear_probe(&augmented, probe)?;

    Ok(AffinityReport {
        clean_accuracy: on_clean.accuracy,
        augmented_accuracy: on_augmented.accuracy,
        affinity: on_clean.accuracy - on_augmented.accuracy,
        clean_loss: on_clean.loss,
        augmented_loss: on_augmented.loss,
        clean_train_loss: clean_probe.final_loss,
        augmented_train_loss: augmented_probe.final_loss,
        diversity: augmented_probe.final_loss - clean_probe.final_loss,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::AugmentationKind;
    use crate::graph::fixtures::*;

    fn toy() -> GraphDataset {
        let mut graphs = Vec::new();
        for i in 0..6 {
            graphs.push(path(4 + i).with_label(0));
            graphs.push(complete(3 + i % 3).with_label(1));
        }
        GraphDataset {
            name: "toy".into(),
            graphs,
            class_count: 2,
        }
    }

    #[test]
    fn identity_gives_exact_zeros() {
        let cfg = ProbeConfig {
            epochs: 50,
            ..ProbeConfig::default()
        };
        let r = affinity_audit(&toy(), &AugmentationSpec::identity(), &EncoderConfig::default(), &cfg, None)
            .unwrap();
        assert_eq!(r.affinity, 0.0);
        assert_eq!(r.diversity, 0.0);
        assert_eq!(r.clean_accuracy, r.augmented_accuracy);
    }

    #[test]
    fn fields_are_consistent() {
        let spec = AugmentationSpec::new(AugmentationKind::NodeDrop, 0.3, 4).unwrap();
        let cfg = ProbeConfig {
            epochs: 50,
            ..ProbeConfig::default()
        };
        let r = affinity_audit(&toy(), &spec, &EncoderConfig::default(), &cfg, None).unwrap();
        assert!((0.0..=1.0).contains(&r.augmented_accuracy));
        assert_eq!(r.affinity, r.clean_accuracy - r.augmented_accuracy);
        assert_eq!(r.diversity, r.augmented_train_loss - r.clean_train_loss);
    }
}
