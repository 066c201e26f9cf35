//! Brute-force reference implementations written straight from the metric
//! definitions. They share no code with the library except `porter_stem`.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use capdiv_core::textproc::porter_stem;
use rand::Rng;

pub fn words(s: &str) -> Vec<String> {
    s.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()).map(str::to_lowercase).collect()
}

fn grams(w: &[String], n: usize) -> HashMap<Vec<String>, usize> {
    let mut m = HashMap::new();
    if w.len() >= n {
        for i in 0..=w.len() - n {
            *m.entry(w[i..i + n].to_vec()).or_insert(0) += 1;
        }
    }
    m
}

pub fn bleu(cand: &[String], refs: &[Vec<String>], max_n: usize, smoothing: bool) -> f64 {
    if cand.is_empty() {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let c = grams(cand, n);
        let mut best: HashMap<Vec<String>, usize> = HashMap::new();
        for r in refs {
            for (g, k) in grams(r, n) {
                let e = best.entry(g).or_insert(0);
                *e = (*e).max(k);
            }
        }
        let total: usize = c.values().sum();
        let hit: usize = c.iter().map(|(g, k)| (*k).min(*best.get(g).unwrap_or(&0))).sum();
        let p = if hit > 0 {
            hit as f64 / total as f64
        } else if smoothing && n >= 2 {
            1.0 / (total as f64 + 1.0)
        } else {
            return 0.0;
        };
        log_sum += p.ln();
    }
    let c = cand.len() as i64;
    let mut r = refs[0].len() as i64;
    for x in refs {
        let l = x.len() as i64;
        if (l - c).abs() < (r - c).abs() || ((l - c).abs() == (r - c).abs() && l < r) {
            r = l;
        }
    }
    let bp = if c >= r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    bp * (log_sum / max_n as f64).exp()
}

fn lcs(a: &[String], b: &[String], memo: &mut HashMap<(usize, usize), usize>) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let key = (a.len(), b.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let v = if a[0] == b[0] {
        1 + lcs(&a[1..], &b[1..], memo)
    } else {
        lcs(&a[1..], b, memo).max(lcs(a, &b[1..], memo))
    };
    memo.insert(key, v);
    v
}

pub fn rouge_l(cand: &[String], refs: &[Vec<String>]) -> f64 {
    let mut best = 0.0f64;
    for r in refs {
        let l = lcs(cand, r, &mut HashMap::new()) as f64;
        if l == 0.0 {
            continue;
        }
        let (rec, prec) = (l / r.len() as f64, l / cand.len() as f64);
        let b2 = 1.2f64 * 1.2;
        best = best.max((1.0 + b2) * rec * prec / (rec + b2 * prec));
    }
    best
}

pub struct Idf {
    docs: usize,
    df: HashMap<Vec<String>, usize>,
}

impl Idf {
    /// Each document is a group of sentences; an n-gram counts once per group.
    pub fn new(groups: &[Vec<Vec<String>>]) -> Self {
        let mut df = HashMap::new();
        for g in groups {
            let mut seen = HashSet::new();
            for s in g {
                for n in 1..=4 {
                    seen.extend(grams(s, n).into_keys());
                }
            }
            for k in seen {
                *df.entry(k).or_insert(0) += 1;
            }
        }
        Idf { docs: groups.len(), df }
    }

    pub fn weight(&self, g: &[String]) -> f64 {
        (self.docs as f64 / *self.df.get(g).unwrap_or(&1) as f64).ln()
    }

    fn vector(&self, s: &[String], n: usize) -> HashMap<Vec<String>, f64> {
        grams(s, n).into_iter().map(|(g, k)| { let w = self.weight(&g); (g, k as f64 * w) }).collect()
    }
}

fn cos(a: &HashMap<Vec<String>, f64>, b: &HashMap<Vec<String>, f64>) -> Option<f64> {
    let na: f64 = a.values().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.values().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    let dot: f64 = a.iter().map(|(g, x)| x * b.get(g).unwrap_or(&0.0)).sum();
    Some(dot / (na * nb))
}

pub fn cider(cand: &[String], refs: &[Vec<String>], idf: &Idf) -> f64 {
    let mut total = 0.0;
    for n in 1..=4 {
        let c = idf.vector(cand, n);
        let s: f64 = refs.iter().map(|r| cos(&c, &idf.vector(r, n)).unwrap_or(0.0)).sum();
        total += s / refs.len() as f64;
    }
    total / 4.0
}

/// Pairwise kernel entry of Self-CIDEr: mean cosine over orders where at
/// least one side is nonzero; 1 for equal sentences.
pub fn cider_kernel_entry(a: &[String], b: &[String], idf: &Idf) -> f64 {
    if a == b {
        return 1.0;
    }
    let mut vals = vec![];
    for n in 1..=4 {
        let (va, vb) = (idf.vector(a, n), idf.vector(b, n));
        let za = va.values().all(|x| *x == 0.0);
        let zb = vb.values().all(|x| *x == 0.0);
        if za && zb {
            continue;
        }
        vals.push(cos(&va, &vb).unwrap_or(0.0));
    }
    if vals.is_empty() { 0.0 } else { vals.iter().sum::<f64>() / vals.len() as f64 }
}

/// METEOR by exhaustive search over alignments: most exact matches, then
/// most stem matches, then fewest chunks.
pub fn meteor(cand: &[String], refs: &[Vec<String>]) -> f64 {
    refs.iter().map(|r| meteor_one(cand, r)).fold(0.0, f64::max)
}

fn meteor_one(c: &[String], r: &[String]) -> f64 {
    if c.is_empty() || r.is_empty() {
        return 0.0;
    }
    let cs: Vec<String> = c.iter().map(|w| porter_stem(w)).collect();
    let rs: Vec<String> = r.iter().map(|w| porter_stem(w)).collect();
    let mut best: Option<(usize, usize, i64)> = None;
    let mut pairs = vec![];
    let mut used = vec![false; r.len()];
    search(c, r, &cs, &rs, 0, &mut used, &mut pairs, &mut best);
    let (ex, st, neg_ch) = best.unwrap();
    let m = (ex + st) as f64;
    if m == 0.0 {
        return 0.0;
    }
    let ch = -neg_ch as f64;
    let p = m / c.len() as f64;
    let rec = m / r.len() as f64;
    let f = 10.0 * p * rec / (rec + 9.0 * p);
    f * (1.0 - 0.5 * (ch / m).powi(3))
}

#[allow(clippy::too_many_arguments)]
fn search(
    c: &[String],
    r: &[String],
    cs: &[String],
    rs: &[String],
    i: usize,
    used: &mut Vec<bool>,
    pairs: &mut Vec<(usize, usize)>,
    best: &mut Option<(usize, usize, i64)>,
) {
    if i == c.len() {
        let ex = pairs.iter().filter(|(a, b)| c[*a] == r[*b]).count();
        let st = pairs.len() - ex;
        let mut ch = 0i64;
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if k == 0 || !(a == pairs[k - 1].0 + 1 && b == pairs[k - 1].1 + 1) {
                ch += 1;
            }
        }
        let key = (ex, st, -ch);
        if best.is_none_or(|b| key > b) {
            *best = Some(key);
        }
        return;
    }
    search(c, r, cs, rs, i + 1, used, pairs, best);
    for j in 0..r.len() {
        if !used[j] && (c[i] == r[j] || cs[i] == rs[j]) {
            used[j] = true;
            pairs.push((i, j));
            search(c, r, cs, rs, i + 1, used, pairs, best);
            pairs.pop();
            used[j] = false;
        }
    }
}

pub fn jaccard(a: &[String], b: &[String]) -> f64 {
    let sa: HashSet<&String> = a.iter().collect();
    let sb: HashSet<&String> = b.iter().collect();
    if sa.is_empty() && sb.is_empty() {
        return 1.0;
    }
    sa.intersection(&sb).count() as f64 / sa.union(&sb).count() as f64
}

pub fn raw_cosine(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (nu * nv)
}

/// One video's DCE, term by term over unordered pairs.
pub fn dce_video(caps: &[String], refs: &[String], emb: &HashMap<String, Vec<f64>>, delta: f64, weighted: bool) -> f64 {
    let toks: Vec<Vec<String>> = caps.iter().map(|s| words(s)).collect();
    let rtoks: Vec<Vec<String>> = refs.iter().map(|s| words(s)).collect();
    let k = caps.len();
    if k < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut n = 0usize;
    for i in 0..k {
        for j in i + 1..k {
            let w = if weighted { meteor(&toks[i], &rtoks) + meteor(&toks[j], &rtoks) } else { 1.0 };
            let cs = raw_cosine(&emb[&caps[i]], &emb[&caps[j]]).max(0.0);
            let jac = jaccard(&toks[i], &toks[j]);
            sum += w * (delta * (1.0 - jac) + (1.0 - delta) * (1.0 - cs));
            n += 1;
        }
    }
    sum / n as f64
}

pub const VOCAB: [&str; 20] = [
    "a", "man", "men", "dog", "dogs", "run", "runs", "running", "the", "cat", "jump", "jumps", "jumping", "is",
    "on", "grass", "ball", "play", "plays", "park",
];

pub fn random_sentence<R: Rng>(rng: &mut R, min: usize, max: usize) -> Vec<String> {
    let len = rng.gen_range(min..=max);
    (0..len).map(|_| VOCAB[rng.gen_range(0..VOCAB.len())].to_string()).collect()
}

/// A toy video: distinct captions, a few references and a random embedding
/// per caption.
pub struct ToyVideo {
    pub id: String,
    pub captions: Vec<String>,
    pub refs: Vec<String>,
    pub vectors: Vec<Vec<f64>>,
}

pub fn toy_videos<R: Rng>(rng: &mut R, count: usize) -> Vec<ToyVideo> {
    let mut seen_global: HashSet<String> = HashSet::new();
    let mut out = vec![];
    for v in 0..count {
        let k = rng.gen_range(2..=6);
        let mut captions: Vec<String> = vec![];
        while captions.len() < k {
            let s = random_sentence(rng, 1, 7).join(" ");
            if !captions.contains(&s) && seen_global.insert(s.clone()) {
                captions.push(s);
            }
        }
        let refs = (0..rng.gen_range(1..=3)).map(|_| random_sentence(rng, 2, 7).join(" ")).collect();
        let vectors = (0..k).map(|_| (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        out.push(ToyVideo { id: format!("video{v:03}"), captions, refs, vectors });
    }
    out
}
