use alloc::string::String;
use alloc::vec::Vec;

use super::{
    corpus_word_types, dce_per_video, dce_variant_video, diversity_idf, lsa_diversity, mixed_mbleu, self_cider,
    word_types, DceParams, LSA_MAX_RANK,
};
use crate::corpus::{Corpus, DEFAULT_CAP};
use crate::refmetrics::{MeteorParams, Smoothing};
use crate::simcore::EmbeddingProvider;
use crate::stats::mean;
use crate::{Error, Result};

/// Diversity metrics in report column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiversityMetric {
    Dce,
    DceVariant,
    WordTypes,
    MixedMbleu,
    SelfCider,
    Lsa,
}

impl DiversityMetric {
    pub const ALL: [DiversityMetric; 6] = [
        DiversityMetric::Dce,
        DiversityMetric::DceVariant,
        DiversityMetric::WordTypes,
        DiversityMetric::MixedMbleu,
        DiversityMetric::SelfCider,
        DiversityMetric::Lsa,
    ];

    /// Identifier used on the command line and as a report key.
    pub fn key(self) -> &'static str {
        match self {
            DiversityMetric::Dce => "dce",
            DiversityMetric::DceVariant => "dce-variant",
            DiversityMetric::WordTypes => "word-types",
            DiversityMetric::MixedMbleu => "mixed-mbleu",
            DiversityMetric::SelfCider => "self-cider",
            DiversityMetric::Lsa => "lsa",
        }
    }

    /// Column heading.
    pub fn label(self) -> &'static str {
        match self {
            DiversityMetric::Dce => "DCE",
            DiversityMetric::DceVariant => "DCE-Variant",
            DiversityMetric::WordTypes => "Word Types",
            DiversityMetric::MixedMbleu => "Mixed mBLEU",
            DiversityMetric::SelfCider => "Self-CIDEr",
            DiversityMetric::Lsa => "LSA-based",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.key() == key)
    }

    pub fn needs_references(self) -> bool {
        self == DiversityMetric::Dce
    }

    pub fn needs_embeddings(self) -> bool {
        matches!(self, DiversityMetric::Dce | DiversityMetric::DceVariant)
    }

    /// Corpus value reported when every video was skipped: the score of a
    /// set with no diversity at all.
    fn no_diversity_value(self) -> f64 {
        match self {
            DiversityMetric::MixedMbleu => 1.0,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityConfig {
    pub dce: DceParams,
    pub meteor: MeteorParams,
    pub mbleu_smoothing: Smoothing,
    /// Captions kept per video after deduplication.
    pub cap: usize,
}

impl Default for DiversityConfig {
    fn default() -> Self {
        DiversityConfig {
            dce: DceParams::default(),
            meteor: MeteorParams::default(),
            mbleu_smoothing: Smoothing::On,
            cap: DEFAULT_CAP,
        }
    }
}

/// Corpus value of one metric with its per-video breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSummary {
    pub value: f64,
    /// `None` marks a video the metric skipped.
    pub per_video: Vec<(String, Option<f64>)>,
    pub skipped: usize,
}

impl MetricSummary {
    fn from_per_video(metric: DiversityMetric, per_video: Vec<(String, Option<f64>)>) -> Self {
        let scored: Vec<f64> = per_video.iter().filter_map(|(_, v)| *v).collect();
        let skipped = per_video.len() - scored.len();
        let value = mean(&scored).unwrap_or_else(|| metric.no_diversity_value());
        MetricSummary { value, per_video, skipped }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiversityReport {
    /// Requested metrics in column order.
    pub metrics: Vec<DiversityMetric>,
    pub dce: Option<MetricSummary>,
    pub dce_variant: Option<MetricSummary>,
    /// Distinct tokens across the whole corpus.
    pub word_types: Option<usize>,
    /// Distinct tokens per video.
    pub word_types_per_video: Vec<(String, usize)>,
    pub mixed_mbleu: Option<MetricSummary>,
    pub self_cider: Option<MetricSummary>,
    pub lsa: Option<MetricSummary>,
    pub video_count: usize,
    pub config: DiversityConfig,
    /// Provider description when an embedding metric ran.
    pub provider: Option<String>,
    /// IDF document count when Self-CIDEr ran.
    pub idf_documents: Option<usize>,
    pub lsa_max_rank: usize,
}

impl DiversityReport {
    pub fn summary(&self, metric: DiversityMetric) -> Option<&MetricSummary> {
        match metric {
            DiversityMetric::Dce => self.dce.as_ref(),
            DiversityMetric::DceVariant => self.dce_variant.as_ref(),
            DiversityMetric::WordTypes => None,
            DiversityMetric::MixedMbleu => self.mixed_mbleu.as_ref(),
            DiversityMetric::SelfCider => self.self_cider.as_ref(),
            DiversityMetric::Lsa => self.lsa.as_ref(),
        }
    }

    /// Corpus-level value of a computed metric.
    pub fn value(&self, metric: DiversityMetric) -> Option<f64> {
        match metric {
            DiversityMetric::WordTypes => self.word_types.map(|w| w as f64),
            _ => self.summary(metric).map(|s| s.value),
        }
    }
}

/// Deduplicates and caps every caption set, then computes the requested
/// metrics. Embedding metrics need `provider`; DCE needs references.
pub fn evaluate_diversity(
    corpus: &Corpus,
    metrics: &[DiversityMetric],
    provider: Option<&EmbeddingProvider>,
    config: &DiversityConfig,
) -> Result<DiversityReport> {
    config.dce.validate()?;
    config.meteor.validate()?;
    if metrics.is_empty() {
        return Err(Error::Input("no diversity metric selected".into()));
    }
    let mut selected = metrics.to_vec();
    selected.sort();
    selected.dedup();

    let corpus = corpus.dedup_and_cap(config.cap);
    let needs_provider = selected.iter().any(|m| m.needs_embeddings());
    let provider = match (needs_provider, provider) {
        (true, None) => return Err(Error::MissingEmbedding("no embedding provider configured".into())),
        (true, Some(p)) => Some(p),
        (false, _) => None,
    };

    let mut report = DiversityReport {
        metrics: selected.clone(),
        dce: None,
        dce_variant: None,
        word_types: None,
        word_types_per_video: Vec::new(),
        mixed_mbleu: None,
        self_cider: None,
        lsa: None,
        video_count: corpus.video_count(),
        config: *config,
        provider: provider.map(EmbeddingProvider::describe),
        idf_documents: None,
        lsa_max_rank: LSA_MAX_RANK,
    };

    for metric in selected {
        match metric {
            DiversityMetric::Dce => {
                let p = provider.expect("checked above");
                let rows = dce_per_video(&corpus, p, &config.dce, &config.meteor)?;
                let rows = rows.into_iter().map(|(v, x)| (v, Some(x))).collect();
                report.dce = Some(MetricSummary::from_per_video(metric, rows));
            }
            DiversityMetric::DceVariant => {
                let p = provider.expect("checked above");
                let rows = corpus
                    .caption_sets()
                    .map(|s| Ok((String::from(s.video_id()), Some(dce_variant_video(s, p, &config.dce)?))))
                    .collect::<Result<_>>()?;
                report.dce_variant = Some(MetricSummary::from_per_video(metric, rows));
            }
            DiversityMetric::WordTypes => {
                report.word_types = Some(corpus_word_types(&corpus));
                report.word_types_per_video =
                    corpus.caption_sets().map(|s| (String::from(s.video_id()), word_types([s]))).collect();
            }
            DiversityMetric::MixedMbleu => {
                let rows = corpus
                    .caption_sets()
                    .map(|s| Ok((String::from(s.video_id()), mixed_mbleu(s, config.mbleu_smoothing)?)))
                    .collect::<Result<_>>()?;
                report.mixed_mbleu = Some(MetricSummary::from_per_video(metric, rows));
            }
            DiversityMetric::SelfCider => {
                let idf = diversity_idf(&corpus)?;
                report.idf_documents = Some(idf.documents());
                let rows = corpus
                    .caption_sets()
                    .map(|s| Ok((String::from(s.video_id()), self_cider(s, &idf)?)))
                    .collect::<Result<_>>()?;
                report.self_cider = Some(MetricSummary::from_per_video(metric, rows));
            }
            DiversityMetric::Lsa => {
                let rows = corpus
                    .caption_sets()
                    .map(|s| Ok((String::from(s.video_id()), lsa_diversity(s)?)))
                    .collect::<Result<_>>()?;
                report.lsa = Some(MetricSummary::from_per_video(metric, rows));
            }
        }
    }
    Ok(report)
}
