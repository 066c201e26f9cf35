//! Reference-based accuracy metrics and the best-1 protocol.
//!
//! Multiple references follow each metric's own convention: METEOR and
//! ROUGE-L take the best reference, CIDEr averages over references, and BLEU
//! clips against all references at once.

mod bleu;
mod cider;
mod meteor;
mod rouge;

use alloc::string::String;
use alloc::vec::Vec;

pub use bleu::{sentence_bleu, Smoothing};
pub use cider::{build_idf, cider, IdfTable};
pub(crate) use cider::SentenceVectors;
pub use meteor::{align, meteor, meteor_single, Alignment, MeteorParams, SEARCH_BUDGET};
pub use rouge::{lcs_len, rouge_l, ROUGE_BETA};

use crate::corpus::{Caption, CaptionSet, Corpus};
use crate::stats::mean;
use crate::textproc::{TokenSeq, MAX_ORDER};
use crate::{Error, Result};

/// IDF document policy used for accuracy scoring.
pub const ACCURACY_IDF_POLICY: &str = "one document per reference sentence";

/// Caption with the highest METEOR against `refs`; ties go to the lower index.
pub fn best1_select<'a>(set: &'a CaptionSet, refs: &[TokenSeq], params: &MeteorParams) -> Result<&'a Caption> {
    let mut best: Option<(&Caption, f64)> = None;
    for c in set.captions() {
        let score = meteor(&c.tokens(), refs, params)?;
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((c, score));
        }
    }
    best.map(|(c, _)| c).ok_or_else(|| Error::Input(alloc::format!("video {:?} has no captions", set.video_id())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccuracyMode {
    /// Every caption scored, averaged per video.
    AllCaptions,
    /// Only the best-1 caption of each video.
    Best1,
}

impl AccuracyMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AccuracyMode::AllCaptions => "all-captions",
            AccuracyMode::Best1 => "best1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AccuracyOptions {
    pub smoothing: Smoothing,
    pub meteor: MeteorParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AccuracyScores {
    pub meteor: f64,
    pub bleu4: f64,
    pub cider: f64,
    pub rouge_l: f64,
}

impl AccuracyScores {
    fn mean_of(rows: &[AccuracyScores]) -> AccuracyScores {
        let col = |f: fn(&AccuracyScores) -> f64| mean(&rows.iter().map(f).collect::<Vec<_>>()).unwrap_or(0.0);
        AccuracyScores {
            meteor: col(|s| s.meteor),
            bleu4: col(|s| s.bleu4),
            cider: col(|s| s.cider),
            rouge_l: col(|s| s.rouge_l),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VideoAccuracy {
    pub video_id: String,
    pub scores: AccuracyScores,
    /// Index of the best-1 caption (best-1 mode only).
    pub best1_index: Option<usize>,
    pub captions_scored: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub mode: AccuracyMode,
    pub videos: Vec<VideoAccuracy>,
    /// Mean over videos, each weighted equally.
    pub mean: AccuracyScores,
    pub options: AccuracyOptions,
    pub idf_documents: usize,
}

/// All four metrics of one caption against one video's references.
pub fn score_caption(cand: &TokenSeq, refs: &[TokenSeq], idf: &IdfTable, options: &AccuracyOptions) -> Result<AccuracyScores> {
    Ok(AccuracyScores {
        meteor: meteor(cand, refs, &options.meteor)?,
        bleu4: sentence_bleu(cand, refs, MAX_ORDER, options.smoothing)?,
        cider: cider(cand, refs, idf)?,
        rouge_l: rouge_l(cand, refs)?,
    })
}

/// IDF over every reference sentence of the videos that have captions.
pub fn accuracy_idf(corpus: &Corpus) -> Result<IdfTable> {
    let mut docs = Vec::new();
    for set in corpus.caption_sets() {
        docs.extend(corpus.require_references(set.video_id())?.token_seqs());
    }
    build_idf(&docs)
}

/// Scores the corpus in the given mode. Every captioned video needs references.
pub fn corpus_accuracy(corpus: &Corpus, mode: AccuracyMode, options: &AccuracyOptions) -> Result<AccuracyReport> {
    options.meteor.validate()?;
    if let Some(missing) = corpus.videos_missing_references().first() {
        return Err(Error::MissingReferences(String::from(*missing)));
    }
    let idf = accuracy_idf(corpus)?;
    let mut videos = Vec::with_capacity(corpus.video_count());
    for set in corpus.caption_sets() {
        let refs = corpus.require_references(set.video_id())?.token_seqs();
        let row = match mode {
            AccuracyMode::AllCaptions => {
                let per_caption: Vec<AccuracyScores> = set
                    .captions()
                    .iter()
                    .map(|c| score_caption(&c.tokens(), &refs, &idf, options))
                    .collect::<Result<_>>()?;
                VideoAccuracy {
                    video_id: String::from(set.video_id()),
                    scores: AccuracyScores::mean_of(&per_caption),
                    best1_index: None,
                    captions_scored: per_caption.len(),
                }
            }
            AccuracyMode::Best1 => {
                let best = best1_select(set, &refs, &options.meteor)?;
                VideoAccuracy {
                    video_id: String::from(set.video_id()),
                    scores: score_caption(&best.tokens(), &refs, &idf, options)?,
                    best1_index: Some(best.index),
                    captions_scored: 1,
                }
            }
        };
        videos.push(row);
    }
    let rows: Vec<AccuracyScores> = videos.iter().map(|v| v.scores).collect();
    Ok(AccuracyReport { mode, mean: AccuracyScores::mean_of(&rows), videos, options: *options, idf_documents: idf.documents() })
}
