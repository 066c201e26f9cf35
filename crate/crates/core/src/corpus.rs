//! Caption sets, reference sets and the corpus that indexes them by video.

use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::textproc::{tokenize, TokenSeq};
use crate::{Error, Result};

pub use crate::simcore::EmbeddingTable;

/// Captions kept per video after deduplication.
pub const DEFAULT_CAP: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caption {
    pub video_id: String,
    pub index: usize,
    pub raw_text: String,
}

impl Caption {
    pub fn tokens(&self) -> TokenSeq {
        tokenize(&self.raw_text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaptionSet {
    video_id: String,
    captions: Vec<Caption>,
}

impl CaptionSet {
    /// Builds a set from raw sentences in order. Sentences that are blank
    /// after trimming are rejected, as is an empty list.
    pub fn new<S: AsRef<str>>(video_id: &str, sentences: &[S]) -> Result<Self> {
        if sentences.is_empty() {
            return Err(Error::Input(format!("video {video_id:?} has no captions")));
        }
        let mut set = CaptionSet { video_id: String::from(video_id), captions: Vec::new() };
        for s in sentences {
            set.push(s.as_ref())?;
        }
        Ok(set)
    }

    fn push(&mut self, text: &str) -> Result<()> {
        if text.trim().is_empty() {
            return Err(Error::Input(format!("empty caption for video {:?}", self.video_id)));
        }
        self.captions.push(Caption {
            video_id: self.video_id.clone(),
            index: self.captions.len(),
            raw_text: String::from(text),
        });
        Ok(())
    }

    pub fn video_id(&self) -> &str {
        &self.video_id
    }

    pub fn captions(&self) -> &[Caption] {
        &self.captions
    }

    pub fn len(&self) -> usize {
        self.captions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.captions.is_empty()
    }

    pub fn token_seqs(&self) -> Vec<TokenSeq> {
        self.captions.iter().map(Caption::tokens).collect()
    }
}

/// Drops captions whose normalized tokens repeat an earlier caption, keeps
/// the first `cap` survivors and renumbers them from 0.
pub fn dedup_and_cap(set: &CaptionSet, cap: usize) -> CaptionSet {
    let cap = cap.max(1);
    let mut seen = BTreeSet::new();
    let mut captions = Vec::new();
    for c in &set.captions {
        if captions.len() == cap {
            break;
        }
        if seen.insert(c.tokens().tokens().to_vec()) {
            captions.push(Caption { index: captions.len(), ..c.clone() });
        }
    }
    CaptionSet { video_id: set.video_id.clone(), captions }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceSet {
    video_id: String,
    references: Vec<String>,
}

impl ReferenceSet {
    pub fn new<S: AsRef<str>>(video_id: &str, references: &[S]) -> Result<Self> {
        if references.is_empty() {
            return Err(Error::Input(format!("video {video_id:?} has an empty reference list")));
        }
        let mut out = ReferenceSet { video_id: String::from(video_id), references: Vec::new() };
        out.extend(references)?;
        Ok(out)
    }

    fn extend<S: AsRef<str>>(&mut self, references: &[S]) -> Result<()> {
        for r in references {
            let r = r.as_ref();
            if r.trim().is_empty() {
                return Err(Error::Input(format!("empty reference for video {:?}", self.video_id)));
            }
            self.references.push(String::from(r));
        }
        Ok(())
    }

    pub fn video_id(&self) -> &str {
        &self.video_id
    }

    pub fn references(&self) -> &[String] {
        &self.references
    }

    pub fn len(&self) -> usize {
        self.references.len()
    }

    pub fn is_empty(&self) -> bool {
        self.references.is_empty()
    }

    pub fn token_seqs(&self) -> Vec<TokenSeq> {
        self.references.iter().map(|r| tokenize(r)).collect()
    }
}

/// Caption sets (and optionally references) keyed by video id. Iteration is
/// always in sorted video-id order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    caption_sets: BTreeMap<String, CaptionSet>,
    reference_sets: Option<BTreeMap<String, ReferenceSet>>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends captions for a video, merging with any earlier record for it.
    pub fn add_captions<S: AsRef<str>>(&mut self, video_id: &str, captions: &[S]) -> Result<()> {
        match self.caption_sets.entry(String::from(video_id)) {
            Entry::Vacant(slot) => {
                slot.insert(CaptionSet::new(video_id, captions)?);
            }
            Entry::Occupied(mut slot) => {
                if captions.is_empty() {
                    return Err(Error::Input(format!("video {video_id:?} has no captions")));
                }
                for c in captions {
                    slot.get_mut().push(c.as_ref())?;
                }
            }
        }
        Ok(())
    }

    /// Appends references for a video, merging with any earlier record for it.
    pub fn add_references<S: AsRef<str>>(&mut self, video_id: &str, references: &[S]) -> Result<()> {
        let sets = self.reference_sets.get_or_insert_with(BTreeMap::new);
        match sets.entry(String::from(video_id)) {
            Entry::Vacant(slot) => {
                slot.insert(ReferenceSet::new(video_id, references)?);
            }
            Entry::Occupied(mut slot) => {
                if references.is_empty() {
                    return Err(Error::Input(format!("video {video_id:?} has an empty reference list")));
                }
                slot.get_mut().extend(references)?;
            }
        }
        Ok(())
    }

    pub fn insert_caption_set(&mut self, set: CaptionSet) {
        self.caption_sets.insert(set.video_id.clone(), set);
    }

    pub fn insert_reference_set(&mut self, set: ReferenceSet) {
        self.reference_sets.get_or_insert_with(BTreeMap::new).insert(set.video_id.clone(), set);
    }

    /// Number of videos with captions.
    pub fn video_count(&self) -> usize {
        self.caption_sets.len()
    }

    pub fn caption_sets(&self) -> impl Iterator<Item = &CaptionSet> {
        self.caption_sets.values()
    }

    pub fn caption_set(&self, video_id: &str) -> Option<&CaptionSet> {
        self.caption_sets.get(video_id)
    }

    pub fn has_references(&self) -> bool {
        self.reference_sets.is_some()
    }

    pub fn reference_sets(&self) -> impl Iterator<Item = &ReferenceSet> {
        self.reference_sets.iter().flat_map(BTreeMap::values)
    }

    pub fn references(&self, video_id: &str) -> Option<&ReferenceSet> {
        self.reference_sets.as_ref()?.get(video_id)
    }

    /// Like [`Corpus::references`] but missing references are an error.
    pub fn require_references(&self, video_id: &str) -> Result<&ReferenceSet> {
        self.references(video_id).ok_or_else(|| Error::MissingReferences(String::from(video_id)))
    }

    /// Videos that have captions but no references, sorted.
    pub fn videos_missing_references(&self) -> Vec<&str> {
        self.caption_sets.keys().filter(|v| self.references(v).is_none()).map(String::as_str).collect()
    }

    /// Videos that have references but no captions, sorted.
    pub fn orphan_reference_videos(&self) -> Vec<&str> {
        self.reference_sets()
            .map(ReferenceSet::video_id)
            .filter(|v| !self.caption_sets.contains_key(*v))
            .collect()
    }

    /// Applies [`dedup_and_cap`] to every caption set.
    pub fn dedup_and_cap(&self, cap: usize) -> Corpus {
        Corpus {
            caption_sets: self.caption_sets.iter().map(|(k, v)| (k.clone(), dedup_and_cap(v, cap))).collect(),
            reference_sets: self.reference_sets.clone(),
        }
    }
}
