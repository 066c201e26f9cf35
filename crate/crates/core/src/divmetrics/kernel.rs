//! Spectral diversity: Self-CIDEr over a TF-IDF similarity kernel, and the
//! bag-of-words LSA baseline.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use libm::{fabs, log, sqrt};

use crate::corpus::{CaptionSet, Corpus};
use crate::numkit::{svd, truncated_svd, DenseMatrix};
use crate::refmetrics::{IdfTable, SentenceVectors};
use crate::stats::{mean, pairwise_sum};
use crate::textproc::TokenSeq;
use crate::{Error, Result};

/// IDF document policy for diversity metrics.
pub const DIVERSITY_IDF_POLICY: &str = "one document per video caption set";

/// Upper bound on the LSA truncation rank.
pub const LSA_MAX_RANK: usize = 16;

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSource {
    Cider,
    Lsa,
    /// Supplied directly by the caller.
    External,
}

/// Symmetric pairwise similarity matrix with unit diagonal and entries in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityKernel {
    matrix: DenseMatrix,
    source: KernelSource,
}

impl SimilarityKernel {
    pub fn new(matrix: DenseMatrix, source: KernelSource) -> Result<Self> {
        let k = matrix.rows();
        if matrix.cols() != k {
            return Err(Error::DimensionMismatch { expected: k, found: matrix.cols() });
        }
        for i in 0..k {
            if matrix[(i, i)] != 1.0 {
                return Err(Error::Input(alloc::format!("kernel diagonal entry {i} is not 1")));
            }
            for j in 0..k {
                let v = matrix[(i, j)];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Input(alloc::format!("kernel entry ({i}, {j}) = {v} outside [0, 1]")));
                }
                if fabs(v - matrix[(j, i)]) > SYMMETRY_TOL {
                    return Err(Error::Input(alloc::format!("kernel is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(SimilarityKernel { matrix, source })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn source(&self) -> KernelSource {
        self.source
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }
}

/// IDF with one document per video: the union of that video's captions.
pub fn diversity_idf(corpus: &Corpus) -> Result<IdfTable> {
    let docs: Vec<Vec<TokenSeq>> = corpus.caption_sets().map(CaptionSet::token_seqs).collect();
    IdfTable::from_grouped(docs.iter().map(Vec::as_slice))
}

/// Pairwise TF-IDF cosine kernel averaged over n-gram orders. Orders where
/// both captions have an all-zero vector are left out of that pair's average;
/// a pair with no usable order scores 0. Captions with equal token sequences
/// score 1 like the diagonal, even when every weight is 0.
pub fn cider_kernel(set: &CaptionSet, idf: &IdfTable) -> Result<SimilarityKernel> {
    let k = set.len();
    let seqs = set.token_seqs();
    let counts: Vec<SentenceVectors> = seqs.iter().map(SentenceVectors::new).collect();
    let vectors: Vec<_> = counts.iter().map(|c| c.weighted(idf)).collect();
    let mut m = DenseMatrix::identity(k);
    for i in 0..k {
        for j in i + 1..k {
            if seqs[i].tokens() == seqs[j].tokens() {
                m[(i, j)] = 1.0;
                m[(j, i)] = 1.0;
                continue;
            }
            let mut sum = 0.0;
            let mut used = 0;
            for (a, b) in vectors[i].iter().zip(&vectors[j]) {
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                sum += a.cosine(b);
                used += 1;
            }
            let v = if used == 0 { 0.0 } else { sum / used as f64 };
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SimilarityKernel::new(m, KernelSource::Cider)
}

/// `-ln(σ₁ / Σσ) / ln k` over the kernel's singular values, clamped to [0, 1].
/// 0 for a set of identical captions, 1 for mutually dissimilar ones.
pub fn self_cider_from_kernel(kernel: &SimilarityKernel) -> Result<f64> {
    let k = kernel.size();
    if k < 2 {
        return Err(Error::Input("Self-CIDEr needs at least two captions".into()));
    }
    let s = svd(kernel.matrix())?.s;
    let total = pairwise_sum(&s);
    let ratio = s[0] / total;
    let score = -log(ratio) / log(k as f64);
    Ok(score.clamp(0.0, 1.0) + 0.0)
}

/// Self-CIDEr of a caption set; `None` when it has fewer than two captions.
pub fn self_cider(set: &CaptionSet, idf: &IdfTable) -> Result<Option<f64>> {
    if set.len() < 2 {
        return Ok(None);
    }
    self_cider_from_kernel(&cider_kernel(set, idf)?).map(Some)
}

/// Caption vectors in LSA space: rows of `V Σ` from a truncated SVD of the
/// term-by-caption count matrix. `None` when every caption is empty.
pub fn lsa_embeddings(set: &CaptionSet) -> Result<Option<Vec<Vec<f64>>>> {
    let seqs = set.token_seqs();
    let mut vocab: BTreeMap<&str, usize> = BTreeMap::new();
    for seq in &seqs {
        for t in seq.tokens() {
            vocab.entry(t.as_str()).or_insert(0);
        }
    }
    if vocab.is_empty() {
        return Ok(None);
    }
    for (row, slot) in vocab.values_mut().enumerate() {
        *slot = row;
    }
    let k = seqs.len();
    let mut a = DenseMatrix::zeros(vocab.len(), k);
    for (j, seq) in seqs.iter().enumerate() {
        for t in seq.tokens() {
            a[(vocab[t.as_str()], j)] += 1.0;
        }
    }
    let rank = k.min(vocab.len()).min(LSA_MAX_RANK);
    let d = truncated_svd(&a, rank)?;
    let rows = (0..k).map(|j| (0..d.rank()).map(|l| d.s[l] * d.vt[(l, j)]).collect()).collect();
    Ok(Some(rows))
}

fn clamped_cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = sqrt(a.iter().map(|x| x * x).sum());
    let nb = sqrt(b.iter().map(|x| x * x).sum());
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    if a == b {
        return 1.0;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// `1 - mean pairwise cosine` in LSA space. `None` for fewer than two
/// captions or when every caption is empty.
pub fn lsa_diversity(set: &CaptionSet) -> Result<Option<f64>> {
    if set.len() < 2 {
        return Ok(None);
    }
    let Some(rows) = lsa_embeddings(set)? else { return Ok(None) };
    let mut sims = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            sims.push(clamped_cosine(&rows[i], &rows[j]));
        }
    }
    Ok(mean(&sims).map(|m| 1.0 - m))
}
