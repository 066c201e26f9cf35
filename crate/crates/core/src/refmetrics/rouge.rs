use alloc::vec;

use crate::textproc::TokenSeq;
use crate::{Error, Result};

/// Recall weight of the ROUGE-L F-measure.
pub const ROUGE_BETA: f64 = 1.2;

/// Length of the longest common subsequence of two token sequences.
pub fn lcs_len(a: &TokenSeq, b: &TokenSeq) -> usize {
    let (a, b) = (a.tokens(), b.tokens());
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn rouge_l_single(cand: &TokenSeq, reference: &TokenSeq) -> f64 {
    if cand.is_empty() || reference.is_empty() {
        return 0.0;
    }
    let l = lcs_len(cand, reference);
    if l == 0 {
        return 0.0;
    }
    let r = l as f64 / reference.len() as f64;
    let p = l as f64 / cand.len() as f64;
    let b2 = ROUGE_BETA * ROUGE_BETA;
    (1.0 + b2) * r * p / (r + b2 * p)
}

/// ROUGE-L F-measure, best over references.
pub fn rouge_l(cand: &TokenSeq, refs: &[TokenSeq]) -> Result<f64> {
    if refs.is_empty() {
        return Err(Error::Input("ROUGE-L needs at least one reference".into()));
    }
    Ok(refs.iter().map(|r| rouge_l_single(cand, r)).fold(0.0, f64::max))
}
