//! Diversity metrics over caption sets.
//!
//! DCE weights the dissimilarity of every unordered caption pair by the sum of
//! the two captions' METEOR scores:
//!
//! ```text
//! term(i, j) = [M(i) + M(j)] * [δ (1 - J(i, j)) + (1 - δ) (1 - max(0, cos(e_i, e_j)))]
//! DCE(video) = Σ_{i<j} term(i, j) / C(k, 2)
//! ```
//!
//! and the corpus value is the mean over videos. DCE-Variant drops the METEOR
//! factor. A video with a single caption has no pairs and scores 0.

mod kernel;
mod report;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

pub use kernel::{
    cider_kernel, diversity_idf, lsa_diversity, self_cider, self_cider_from_kernel, KernelSource, SimilarityKernel,
    DIVERSITY_IDF_POLICY, LSA_MAX_RANK,
};
pub use report::{evaluate_diversity, DiversityConfig, DiversityMetric, DiversityReport, MetricSummary};

use crate::corpus::{CaptionSet, Corpus};
use crate::refmetrics::{meteor, sentence_bleu, MeteorParams, Smoothing};
use crate::simcore::{cosine, jaccard, EmbeddingProvider};
use crate::stats::{mean, pairwise_sum};
use crate::textproc::{TokenSeq, MAX_ORDER};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DceParams {
    /// Weight of the word-level (Jaccard) term against the embedding term.
    pub delta: f64,
}

impl Default for DceParams {
    fn default() -> Self {
        DceParams { delta: 0.5 }
    }
}

impl DceParams {
    pub fn new(delta: f64) -> Result<Self> {
        let p = DceParams { delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if (0.0..=1.0).contains(&self.delta) {
            Ok(())
        } else {
            Err(Error::Input(alloc::format!("delta {} outside [0, 1]", self.delta)))
        }
    }
}

/// The ingredients of one unordered caption pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    /// `M(i) + M(j)`; exactly 1 for DCE-Variant.
    pub weight: f64,
    pub jaccard: f64,
    /// Embedding cosine after clamping below at 0.
    pub cosine: f64,
}

impl PairTerm {
    /// Dissimilarity bracket, in [0, 1].
    pub fn bracket(&self, delta: f64) -> f64 {
        delta * (1.0 - self.jaccard) + (1.0 - delta) * (1.0 - self.cosine)
    }

    pub fn term(&self, delta: f64) -> f64 {
        self.weight * self.bracket(delta)
    }
}

/// Pair terms for every `i < j`, in lexicographic order. With `meteor_scores`
/// absent every weight is 1 (DCE-Variant).
pub fn pair_terms(set: &CaptionSet, provider: &EmbeddingProvider, meteor_scores: Option<&[f64]>) -> Result<Vec<PairTerm>> {
    let seqs = set.token_seqs();
    if let Some(m) = meteor_scores {
        if m.len() != seqs.len() {
            return Err(Error::DimensionMismatch { expected: seqs.len(), found: m.len() });
        }
    }
    let embeddings: Vec<_> = set.captions().iter().map(|c| provider.embed(&c.raw_text)).collect::<Result<_>>()?;
    let mut terms = Vec::with_capacity(seqs.len() * seqs.len().saturating_sub(1) / 2);
    for i in 0..seqs.len() {
        for j in i + 1..seqs.len() {
            terms.push(PairTerm {
                i,
                j,
                weight: meteor_scores.map_or(1.0, |m| m[i] + m[j]),
                jaccard: jaccard(&seqs[i], &seqs[j]),
                cosine: cosine(&embeddings[i], &embeddings[j])?.max(0.0),
            });
        }
    }
    Ok(terms)
}

/// Mean pair term; 0 when there are no pairs.
pub fn aggregate_pairs(terms: &[PairTerm], delta: f64) -> f64 {
    let values: Vec<f64> = terms.iter().map(|t| t.term(delta)).collect();
    mean(&values).unwrap_or(0.0)
}

/// METEOR of every caption of `set` against `refs`.
pub fn caption_meteor(set: &CaptionSet, refs: &[TokenSeq], params: &MeteorParams) -> Result<Vec<f64>> {
    set.captions().iter().map(|c| meteor(&c.tokens(), refs, params)).collect()
}

/// Per-video DCE.
pub fn dce_video(
    set: &CaptionSet,
    refs: &[TokenSeq],
    provider: &EmbeddingProvider,
    params: &DceParams,
    meteor_params: &MeteorParams,
) -> Result<f64> {
    params.validate()?;
    if set.len() < 2 {
        return Ok(0.0);
    }
    let m = caption_meteor(set, refs, meteor_params)?;
    Ok(aggregate_pairs(&pair_terms(set, provider, Some(&m))?, params.delta))
}

/// Per-video DCE-Variant (no METEOR weighting).
pub fn dce_variant_video(set: &CaptionSet, provider: &EmbeddingProvider, params: &DceParams) -> Result<f64> {
    params.validate()?;
    if set.len() < 2 {
        return Ok(0.0);
    }
    Ok(aggregate_pairs(&pair_terms(set, provider, None)?, params.delta))
}

/// Corpus DCE: mean of per-video DCE. Every captioned video needs references.
pub fn dce(corpus: &Corpus, provider: &EmbeddingProvider, params: &DceParams, meteor_params: &MeteorParams) -> Result<f64> {
    let per_video = dce_per_video(corpus, provider, params, meteor_params)?;
    Ok(mean(&per_video.iter().map(|(_, v)| *v).collect::<Vec<_>>()).unwrap_or(0.0))
}

pub(crate) fn dce_per_video(
    corpus: &Corpus,
    provider: &EmbeddingProvider,
    params: &DceParams,
    meteor_params: &MeteorParams,
) -> Result<Vec<(String, f64)>> {
    if let Some(missing) = corpus.videos_missing_references().first() {
        return Err(Error::MissingReferences(String::from(*missing)));
    }
    corpus
        .caption_sets()
        .map(|set| {
            let refs = corpus.require_references(set.video_id())?.token_seqs();
            Ok((String::from(set.video_id()), dce_video(set, &refs, provider, params, meteor_params)?))
        })
        .collect()
}

/// Corpus DCE-Variant: mean of per-video values. No references needed.
pub fn dce_variant(corpus: &Corpus, provider: &EmbeddingProvider, params: &DceParams) -> Result<f64> {
    let values: Vec<f64> =
        corpus.caption_sets().map(|s| dce_variant_video(s, provider, params)).collect::<Result<_>>()?;
    Ok(mean(&values).unwrap_or(0.0))
}

/// Distinct normalized tokens across a collection of caption sets.
pub fn word_types<'a>(sets: impl IntoIterator<Item = &'a CaptionSet>) -> usize {
    let mut types = BTreeSet::new();
    for set in sets {
        for seq in set.token_seqs() {
            types.extend(seq.tokens().iter().cloned());
        }
    }
    types.len()
}

/// Distinct normalized tokens across every caption of the corpus.
pub fn corpus_word_types(corpus: &Corpus) -> usize {
    word_types(corpus.caption_sets())
}

/// Mean leave-one-out BLEU (cumulative up to order `n`) of a set.
/// `None` for sets with fewer than two captions.
pub fn mbleu_n(set: &CaptionSet, n: usize, smoothing: Smoothing) -> Result<Option<f64>> {
    let seqs = set.token_seqs();
    if seqs.len() < 2 {
        return Ok(None);
    }
    let mut scores = Vec::with_capacity(seqs.len());
    for (i, cand) in seqs.iter().enumerate() {
        let rest: Vec<TokenSeq> =
            seqs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, s)| s.clone()).collect();
        scores.push(sentence_bleu(cand, &rest, n, smoothing)?);
    }
    Ok(Some(pairwise_sum(&scores) / scores.len() as f64))
}

/// Mean of mBLEU-1 through mBLEU-4. Lower means more diverse.
pub fn mixed_mbleu(set: &CaptionSet, smoothing: Smoothing) -> Result<Option<f64>> {
    let mut per_order = [0.0; MAX_ORDER];
    for (n, slot) in per_order.iter_mut().enumerate() {
        match mbleu_n(set, n + 1, smoothing)? {
            Some(v) => *slot = v,
            None => return Ok(None),
        }
    }
    Ok(Some(pairwise_sum(&per_order) / MAX_ORDER as f64))
}
