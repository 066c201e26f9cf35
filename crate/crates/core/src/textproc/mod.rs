//! Text normalization, tokenization, stemming and n-gram statistics.
//!
//! Every metric in the crate goes through [`tokenize`], so two sentences that
//! differ only in case or punctuation are the same sentence everywhere.

mod porter;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

pub use porter::porter_stem;

/// Highest n-gram order used by any metric.
pub const MAX_ORDER: usize = 4;

/// Lowercases, turns every character that is neither alphanumeric nor
/// whitespace into a space, collapses whitespace runs and trims.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        } else {
            pending_space = true;
        }
    }
    out
}

/// A normalized token sequence together with the text it came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenSeq {
    tokens: Vec<String>,
    source: String,
}

impl TokenSeq {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Tokens joined by single spaces; equal to `normalize(source)`.
    pub fn normalized(&self) -> String {
        self.tokens.join(" ")
    }
}

pub fn tokenize(text: &str) -> TokenSeq {
    TokenSeq {
        tokens: normalize(text).split_whitespace().map(String::from).collect(),
        source: String::from(text),
    }
}

/// Sliding-window n-gram counts of one order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NGramCounts {
    order: usize,
    counts: BTreeMap<Vec<String>, usize>,
}

impl NGramCounts {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, gram: &[String]) -> usize {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[String], usize)> {
        self.counts.iter().map(|(g, &c)| (g.as_slice(), c))
    }

    /// Number of distinct n-grams.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Sum of all counts.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

pub fn ngram_counts(seq: &TokenSeq, n: usize) -> Result<NGramCounts> {
    if !(1..=MAX_ORDER).contains(&n) {
        return Err(Error::InvalidOrder(n));
    }
    let mut counts = BTreeMap::new();
    for window in seq.tokens.windows(n) {
        *counts.entry(window.to_vec()).or_insert(0) += 1;
    }
    Ok(NGramCounts { order: n, counts })
}

/// Counts for orders `1..=MAX_ORDER`, index `n - 1`.
pub(crate) fn all_orders(seq: &TokenSeq) -> [NGramCounts; MAX_ORDER] {
    core::array::from_fn(|i| ngram_counts(seq, i + 1).expect("order in range"))
}
