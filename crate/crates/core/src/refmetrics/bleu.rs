use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use libm::{exp, log};

use crate::textproc::{ngram_counts, TokenSeq, MAX_ORDER};
use crate::{Error, Result};

/// Whether zero n-gram matches for orders >= 2 are smoothed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Smoothing {
    /// Add one to numerator and denominator of a zero-match precision (n >= 2).
    On,
    /// Any zero precision makes the score 0.
    #[default]
    Off,
}

impl Smoothing {
    pub fn as_str(self) -> &'static str {
        match self {
            Smoothing::On => "on",
            Smoothing::Off => "off",
        }
    }
}

/// Clipped matches and candidate n-gram total for one order.
pub(crate) fn clipped_precision(cand: &TokenSeq, refs: &[TokenSeq], n: usize) -> Result<(usize, usize)> {
    let cand_counts = ngram_counts(cand, n)?;
    let mut max_ref: BTreeMap<&[alloc::string::String], usize> = BTreeMap::new();
    let ref_counts: Vec<_> = refs.iter().map(|r| ngram_counts(r, n)).collect::<Result<_>>()?;
    for counts in &ref_counts {
        for (g, c) in counts.iter() {
            let slot = max_ref.entry(g).or_insert(0);
            *slot = (*slot).max(c);
        }
    }
    let clipped = cand_counts.iter().map(|(g, c)| c.min(max_ref.get(g).copied().unwrap_or(0))).sum();
    Ok((clipped, cand_counts.total()))
}

/// Length of the reference closest to `cand_len`; ties go to the shorter one.
pub(crate) fn closest_ref_len(cand_len: usize, refs: &[TokenSeq]) -> usize {
    refs.iter()
        .map(TokenSeq::len)
        .min_by_key(|&r| (r.abs_diff(cand_len), r))
        .unwrap_or(0)
}

/// Sentence-level BLEU with uniform weights over orders `1..=max_n`.
pub fn sentence_bleu(cand: &TokenSeq, refs: &[TokenSeq], max_n: usize, smoothing: Smoothing) -> Result<f64> {
    if !(1..=MAX_ORDER).contains(&max_n) {
        return Err(Error::InvalidOrder(max_n));
    }
    if refs.is_empty() {
        return Err(Error::Input("BLEU needs at least one reference".into()));
    }
    if cand.is_empty() {
        return Ok(0.0);
    }
    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let (clipped, total) = clipped_precision(cand, refs, n)?;
        let p = if clipped > 0 {
            clipped as f64 / total as f64
        } else if smoothing == Smoothing::On && n >= 2 {
            1.0 / (total as f64 + 1.0)
        } else {
            return Ok(0.0);
        };
        log_sum += log(p);
    }
    let c = cand.len() as f64;
    let r = closest_ref_len(cand.len(), refs) as f64;
    let bp = if c > r { 1.0 } else { exp(1.0 - r / c) };
    Ok((bp * exp(log_sum / max_n as f64)).clamp(0.0, 1.0))
}
