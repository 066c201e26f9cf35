use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use libm::{log, sqrt};

use crate::textproc::{all_orders, NGramCounts, TokenSeq, MAX_ORDER};
use crate::{Error, Result};

/// Per-order inverse document frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable {
    documents: usize,
    doc_freq: [BTreeMap<Vec<String>, usize>; MAX_ORDER],
}

impl IdfTable {
    /// One document per entry of `documents`; an n-gram counts for a
    /// document if it appears in any of the document's sentences.
    pub fn from_grouped<'a, I>(documents: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [TokenSeq]>,
    {
        let mut doc_freq: [BTreeMap<Vec<String>, usize>; MAX_ORDER] = Default::default();
        let mut count = 0;
        for doc in documents {
            count += 1;
            let mut seen: [BTreeSet<&[String]>; MAX_ORDER] = Default::default();
            for seq in doc {
                for n in 1..=MAX_ORDER {
                    seen[n - 1].extend(seq.tokens().windows(n));
                }
            }
            for (n, grams) in seen.iter().enumerate() {
                for g in grams {
                    *doc_freq[n].entry(g.to_vec()).or_insert(0) += 1;
                }
            }
        }
        if count == 0 {
            return Err(Error::Input("IDF needs at least one document".into()));
        }
        Ok(IdfTable { documents: count, doc_freq })
    }

    pub fn documents(&self) -> usize {
        self.documents
    }

    /// `ln(|D| / df)`, or `ln |D|` for n-grams never seen.
    pub fn idf(&self, gram: &[String]) -> f64 {
        let n = gram.len();
        let df = if (1..=MAX_ORDER).contains(&n) { self.doc_freq[n - 1].get(gram).copied().unwrap_or(0) } else { 0 };
        let d = self.documents as f64;
        if df == 0 {
            log(d)
        } else {
            log(d / df as f64)
        }
    }

    pub fn doc_freq(&self, gram: &[String]) -> usize {
        let n = gram.len();
        if !(1..=MAX_ORDER).contains(&n) {
            return 0;
        }
        self.doc_freq[n - 1].get(gram).copied().unwrap_or(0)
    }
}

/// One document per sentence.
pub fn build_idf(documents: &[TokenSeq]) -> Result<IdfTable> {
    IdfTable::from_grouped(documents.iter().map(core::slice::from_ref))
}

/// TF-IDF weights of one order, keyed by n-gram.
pub(crate) struct TfIdf<'a> {
    weights: BTreeMap<&'a [String], f64>,
    norm: f64,
}

impl<'a> TfIdf<'a> {
    pub(crate) fn new(counts: &'a NGramCounts, idf: &IdfTable) -> Self {
        let weights: BTreeMap<_, _> = counts.iter().map(|(g, c)| (g, c as f64 * idf.idf(g))).collect();
        let norm = sqrt(weights.values().map(|w| w * w).sum());
        TfIdf { weights, norm }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.norm == 0.0
    }

    /// Cosine similarity, 0 when either vector is all zero and exactly 1 for
    /// equal vectors.
    pub(crate) fn cosine(&self, other: &TfIdf<'_>) -> f64 {
        if self.is_zero() || other.is_zero() {
            return 0.0;
        }
        if self.weights == other.weights {
            return 1.0;
        }
        let dot: f64 = self.weights.iter().filter_map(|(g, w)| other.weights.get(g).map(|v| w * v)).sum();
        (dot / (self.norm * other.norm)).clamp(0.0, 1.0)
    }
}

/// Order-n TF-IDF vectors of a sentence for n = 1..=4.
pub(crate) struct SentenceVectors {
    counts: [NGramCounts; MAX_ORDER],
}

impl SentenceVectors {
    pub(crate) fn new(seq: &TokenSeq) -> Self {
        SentenceVectors { counts: all_orders(seq) }
    }

    pub(crate) fn weighted<'a>(&'a self, idf: &IdfTable) -> [TfIdf<'a>; MAX_ORDER] {
        core::array::from_fn(|n| TfIdf::new(&self.counts[n], idf))
    }
}

/// CIDEr: per order, the mean TF-IDF cosine against the references; then the
/// mean over the four orders.
pub fn cider(cand: &TokenSeq, refs: &[TokenSeq], idf: &IdfTable) -> Result<f64> {
    if refs.is_empty() {
        return Err(Error::Input("CIDEr needs at least one reference".into()));
    }
    let cand_counts = SentenceVectors::new(cand);
    let cand_vecs = cand_counts.weighted(idf);
    let ref_counts: Vec<SentenceVectors> = refs.iter().map(SentenceVectors::new).collect();
    let mut total = 0.0;
    for (n, cv) in cand_vecs.iter().enumerate() {
        let mut per_ref = 0.0;
        for rc in &ref_counts {
            let rv = TfIdf::new(&rc.counts[n], idf);
            per_ref += cv.cosine(&rv);
        }
        total += per_ref / refs.len() as f64;
    }
    Ok(total / MAX_ORDER as f64)
}
