//! METEOR with exact and Porter-stem matching stages.
//!
//! Stage 1 aligns identical tokens, stage 2 aligns the leftovers whose stems
//! agree. Match counts are fixed by the stage order; among alignments that
//! reach them, the one with the fewest chunks is chosen. Minimizing chunks is
//! a combinatorial search, bounded by [`SEARCH_BUDGET`] visited nodes after
//! the first complete alignment has been found.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use libm::pow;

use crate::textproc::{porter_stem, TokenSeq};
use crate::{Error, Result};

/// Search nodes explored before settling for the best alignment so far.
pub const SEARCH_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeteorParams {
    /// Run the Porter-stem stage after exact matching.
    pub stem_stage: bool,
    /// Recall weight `w` in `F = (1 + w) P R / (R + w P)`.
    pub recall_weight: f64,
    /// Fragmentation penalty scale.
    pub gamma: f64,
    /// Fragmentation penalty exponent.
    pub beta: f64,
}

impl Default for MeteorParams {
    fn default() -> Self {
        MeteorParams { stem_stage: true, recall_weight: 9.0, gamma: 0.5, beta: 3.0 }
    }
}

impl MeteorParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Input(alloc::format!("METEOR gamma {} outside [0, 1]", self.gamma)));
        }
        if self.beta.is_nan() || self.beta <= 0.0 {
            return Err(Error::Input(alloc::format!("METEOR beta {} must be positive", self.beta)));
        }
        if self.recall_weight.is_nan() || self.recall_weight < 0.0 {
            return Err(Error::Input(alloc::format!("METEOR recall weight {} is negative", self.recall_weight)));
        }
        Ok(())
    }
}

/// A chosen alignment between a candidate and one reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    /// `(candidate position, reference position)` pairs, sorted by candidate position.
    pub pairs: Vec<(usize, usize)>,
    pub exact: usize,
    pub stem: usize,
    pub chunks: usize,
}

impl Alignment {
    pub fn matches(&self) -> usize {
        self.exact + self.stem
    }
}

/// Maximum two-stage match counts `(exact, stem)`.
fn stage_counts(cand: &[String], reference: &[String], stem_stage: bool) -> (usize, usize) {
    let mut by_word: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for w in cand {
        by_word.entry(w).or_default().0 += 1;
    }
    for w in reference {
        by_word.entry(w).or_default().1 += 1;
    }
    let exact = by_word.values().map(|&(a, b)| a.min(b)).sum();
    if !stem_stage {
        return (exact, 0);
    }
    // Every leftover occurrence of a word shares that word's stem, so the
    // stem stage reduces to counting leftovers per stem.
    let mut by_stem: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (w, &(a, b)) in &by_word {
        let shared = a.min(b);
        let slot = by_stem.entry(porter_stem(w)).or_default();
        slot.0 += a - shared;
        slot.1 += b - shared;
    }
    let stem = by_stem.values().map(|&(a, b)| a.min(b)).sum();
    (exact, stem)
}

struct Search<'a> {
    cand: &'a [String],
    reference: &'a [String],
    cand_stems: &'a [String],
    ref_stems: &'a [String],
    stem_stage: bool,
    target_exact: usize,
    target_stem: usize,
    /// Candidate positions `>= i` that have an exact partner somewhere.
    exact_capable: Vec<usize>,
    /// Candidate positions `>= i` that have any partner somewhere.
    any_capable: Vec<usize>,
    used: Vec<bool>,
    current: Vec<(usize, usize)>,
    best: Option<(usize, Vec<(usize, usize)>)>,
    visited: usize,
}

impl Search<'_> {
    fn kind(&self, i: usize, j: usize) -> Option<bool> {
        if self.cand[i] == self.reference[j] {
            Some(true)
        } else if self.stem_stage && self.cand_stems[i] == self.ref_stems[j] {
            Some(false)
        } else {
            None
        }
    }

    fn exhausted(&self) -> bool {
        self.best.is_some() && self.visited >= SEARCH_BUDGET
    }

    fn run(&mut self, i: usize, exact: usize, stem: usize, chunks: usize, last: Option<(usize, usize)>) {
        self.visited += 1;
        if self.exhausted() {
            return;
        }
        if let Some((best, _)) = &self.best {
            if chunks >= *best {
                return;
            }
        }
        if exact + self.exact_capable[i] < self.target_exact
            || exact + stem + self.any_capable[i] < self.target_exact + self.target_stem
        {
            return;
        }
        if i == self.cand.len() {
            if exact == self.target_exact && stem == self.target_stem {
                self.best = Some((chunks, self.current.clone()));
            }
            return;
        }

        // Continuing the current chunk first finds good solutions early.
        let continuation = last.filter(|&(li, _)| li + 1 == i).map(|(_, lj)| lj + 1);
        let mut options: Vec<usize> = Vec::new();
        if let Some(j) = continuation.filter(|&j| j < self.reference.len()) {
            options.push(j);
        }
        options.extend((0..self.reference.len()).filter(|&j| Some(j) != continuation));

        for j in options {
            if self.used[j] {
                continue;
            }
            let Some(is_exact) = self.kind(i, j) else { continue };
            let (e, s) = if is_exact { (exact + 1, stem) } else { (exact, stem + 1) };
            if e > self.target_exact || s > self.target_stem {
                continue;
            }
            let new_chunk = usize::from(continuation != Some(j));
            self.used[j] = true;
            self.current.push((i, j));
            self.run(i + 1, e, s, chunks + new_chunk, Some((i, j)));
            self.current.pop();
            self.used[j] = false;
            if self.exhausted() {
                return;
            }
        }
        self.run(i + 1, exact, stem, chunks, last);
    }
}

/// Two-stage alignment of `cand` against one reference.
pub fn align(cand: &TokenSeq, reference: &TokenSeq, stem_stage: bool) -> Alignment {
    let c = cand.tokens();
    let r = reference.tokens();
    let cs: Vec<String> = c.iter().map(|t| porter_stem(t)).collect();
    let rs: Vec<String> = r.iter().map(|t| porter_stem(t)).collect();
    let (target_exact, target_stem) = stage_counts(c, r, stem_stage);
    if target_exact + target_stem == 0 {
        return Alignment { pairs: Vec::new(), exact: 0, stem: 0, chunks: 0 };
    }

    let mut exact_capable = vec![0; c.len() + 1];
    let mut any_capable = vec![0; c.len() + 1];
    for i in (0..c.len()).rev() {
        let has_exact = r.iter().any(|t| *t == c[i]);
        let has_any = has_exact || (stem_stage && rs.iter().any(|s| *s == cs[i]));
        exact_capable[i] = exact_capable[i + 1] + usize::from(has_exact);
        any_capable[i] = any_capable[i + 1] + usize::from(has_any);
    }

    let mut search = Search {
        cand: c,
        reference: r,
        cand_stems: &cs,
        ref_stems: &rs,
        stem_stage,
        target_exact,
        target_stem,
        exact_capable,
        any_capable,
        used: vec![false; r.len()],
        current: Vec::new(),
        best: None,
        visited: 0,
    };
    search.run(0, 0, 0, 0, None);
    let (chunks, pairs) = search.best.expect("a maximal alignment always exists");
    Alignment { pairs, exact: target_exact, stem: target_stem, chunks }
}

fn score_alignment(a: &Alignment, cand_len: usize, ref_len: usize, params: &MeteorParams) -> f64 {
    let m = a.matches();
    if m == 0 {
        return 0.0;
    }
    let m = m as f64;
    let p = m / cand_len as f64;
    let r = m / ref_len as f64;
    let w = params.recall_weight;
    let f = (1.0 + w) * p * r / (r + w * p);
    let penalty = params.gamma * pow(a.chunks as f64 / m, params.beta);
    f * (1.0 - penalty)
}

/// METEOR against a single reference.
pub fn meteor_single(cand: &TokenSeq, reference: &TokenSeq, params: &MeteorParams) -> f64 {
    if cand.is_empty() || reference.is_empty() {
        return 0.0;
    }
    let a = align(cand, reference, params.stem_stage);
    score_alignment(&a, cand.len(), reference.len(), params)
}

/// METEOR of `cand`: the best score over all references.
pub fn meteor(cand: &TokenSeq, refs: &[TokenSeq], params: &MeteorParams) -> Result<f64> {
    params.validate()?;
    if refs.is_empty() {
        return Err(Error::Input("METEOR needs at least one reference".into()));
    }
    Ok(refs.iter().map(|r| meteor_single(cand, r, params)).fold(0.0, f64::max))
}
