//! Pairwise similarity primitives and sentence-embedding providers.

use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use libm::{fabs, sqrt};

use crate::textproc::{normalize, tokenize, TokenSeq};
use crate::{Error, Result};

/// Dimension of the built-in hashed embedder.
pub const DEFAULT_FALLBACK_DIM: usize = 4096;

/// Allowed deviation from unit norm.
pub const UNIT_NORM_TOL: f64 = 1e-9;

/// Jaccard coefficient over the unique tokens of two sequences.
///
/// Two empty sequences are identical (1); one empty sequence shares nothing (0).
pub fn jaccard(a: &TokenSeq, b: &TokenSeq) -> f64 {
    let sa: BTreeSet<&str> = a.tokens().iter().map(String::as_str).collect();
    let sb: BTreeSet<&str> = b.tokens().iter().map(String::as_str).collect();
    match (sa.is_empty(), sb.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let inter = sa.intersection(&sb).count();
    let union = sa.len() + sb.len() - inter;
    inter as f64 / union as f64
}

/// A unit-L2-norm real vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector(Vec<f64>);

impl EmbeddingVector {
    /// Scales `components` to unit norm. Zero, empty or non-finite input is rejected.
    pub fn normalized(components: Vec<f64>) -> Result<Self> {
        let norm = sqrt(components.iter().map(|x| x * x).sum());
        if components.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(EmbeddingVector(components.into_iter().map(|x| x / norm).collect()))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }
}

/// Dot product of two unit vectors, clamped to [-1, 1]. Equal vectors give
/// exactly 1 regardless of rounding in the normalization.
pub fn cosine(u: &EmbeddingVector, v: &EmbeddingVector) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: v.dim() });
    }
    if u == v {
        return Ok(1.0);
    }
    let dot: f64 = u.0.iter().zip(&v.0).map(|(a, b)| a * b).sum();
    Ok(dot.clamp(-1.0, 1.0))
}

/// Precomputed sentence vectors keyed by normalized sentence text.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmbeddingTable {
    dim: Option<usize>,
    vectors: BTreeMap<String, EmbeddingVector>,
}

impl EmbeddingTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a record. The first record fixes the dimension; re-inserting a
    /// sentence is allowed only with the same (normalized) vector.
    pub fn insert(&mut self, sentence: &str, components: Vec<f64>) -> Result<()> {
        if let Some(d) = self.dim {
            if components.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: components.len() });
            }
        }
        let vector = EmbeddingVector::normalized(components)?;
        self.dim.get_or_insert(vector.dim());
        match self.vectors.entry(normalize(sentence)) {
            Entry::Vacant(slot) => {
                slot.insert(vector);
            }
            Entry::Occupied(existing) => {
                if *existing.get() != vector {
                    return Err(Error::Input(format!(
                        "sentence {:?} appears twice with different vectors",
                        existing.key()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Looks up a sentence after normalizing it.
    pub fn get(&self, sentence: &str) -> Option<&EmbeddingVector> {
        self.vectors.get(&normalize(sentence))
    }
}

/// Where sentence vectors come from.
#[derive(Debug, Clone, PartialEq)]
pub enum EmbeddingProvider {
    /// Lookup in a table loaded from file.
    Precomputed(EmbeddingTable),
    /// Hashed unigram + bigram features with sign hashing.
    Fallback { dim: usize },
}

impl EmbeddingProvider {
    pub fn fallback() -> Self {
        EmbeddingProvider::Fallback { dim: DEFAULT_FALLBACK_DIM }
    }

    pub fn embed(&self, sentence: &str) -> Result<EmbeddingVector> {
        match self {
            EmbeddingProvider::Precomputed(table) => {
                table.get(sentence).cloned().ok_or_else(|| Error::MissingEmbedding(normalize(sentence)))
            }
            EmbeddingProvider::Fallback { dim } => hashed_embedding(&tokenize(sentence), *dim),
        }
    }

    /// Short label recorded next to every score that used this provider.
    pub fn describe(&self) -> String {
        match self {
            EmbeddingProvider::Precomputed(t) => {
                format!("precomputed-table(dim={}, sentences={})", t.dim().unwrap_or(0), t.len())
            }
            EmbeddingProvider::Fallback { dim } => format!("hashed-unigram-bigram(dim={dim}, fnv1a64, signed)"),
        }
    }
}

fn fnv1a64(parts: &[&[u8]]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for &b in *part {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// Bucket index and sign for one hashed feature.
pub fn feature_slot(feature: &[&str], dim: usize) -> (usize, f64) {
    let mut parts: Vec<&[u8]> = Vec::with_capacity(feature.len() * 2 + 1);
    let order = [b'0' + feature.len() as u8];
    parts.push(&order);
    for tok in feature {
        parts.push(b"\x1f");
        parts.push(tok.as_bytes());
    }
    let h = fnv1a64(&parts);
    let sign = if h >> 63 == 1 { -1.0 } else { 1.0 };
    ((h % dim as u64) as usize, sign)
}

fn hashed_embedding(seq: &TokenSeq, dim: usize) -> Result<EmbeddingVector> {
    if dim == 0 {
        return Err(Error::Input("fallback embedding dimension must be positive".into()));
    }
    let mut v = vec![0.0; dim];
    let toks: Vec<&str> = seq.tokens().iter().map(String::as_str).collect();
    for t in &toks {
        let (slot, sign) = feature_slot(core::slice::from_ref(t), dim);
        v[slot] += sign;
    }
    for pair in toks.windows(2) {
        let (slot, sign) = feature_slot(pair, dim);
        v[slot] += sign;
    }
    EmbeddingVector::normalized(v).map_err(|_| Error::MissingEmbedding(seq.normalized()))
}

/// True when `v` has unit norm within [`UNIT_NORM_TOL`].
pub fn is_unit(v: &EmbeddingVector) -> bool {
    fabs(sqrt(v.0.iter().map(|x| x * x).sum()) - 1.0) <= UNIT_NORM_TOL
}
