//! JSON and Markdown report rendering.
//!
//! JSON objects have sorted keys and every metric value is printed with
//! exactly four decimals (round half to even), so equal inputs give
//! byte-identical reports.

use std::collections::BTreeMap;

use capdiv_core::corpus::Corpus;
use capdiv_core::divmetrics::{DiversityMetric, DiversityReport, DIVERSITY_IDF_POLICY};
use capdiv_core::refmetrics::{AccuracyReport, AccuracyScores, MeteorParams, ACCURACY_IDF_POLICY};
use serde_json::{json, Map, Number, Value};

use crate::io::InputFile;

/// Four-decimal rendering; negative zero prints as zero.
pub fn fixed4(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

fn num4(x: f64) -> Value {
    Value::Number(fixed4(x).parse::<Number>().expect("finite decimal"))
}

fn opt4(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num4)
}

/// Everything a report needs to know about where its numbers came from.
#[derive(Debug, Clone, Default)]
pub struct RunInfo<'a> {
    pub inputs: Vec<(&'static str, &'a InputFile)>,
    pub cap: usize,
    pub captions_loaded: usize,
    pub captions_kept: usize,
}

impl RunInfo<'_> {
    fn header(&self, command: &str) -> Map<String, Value> {
        let mut inputs = Map::new();
        for (role, f) in &self.inputs {
            inputs.insert(role.to_string(), json!({ "path": f.label(), "sha256": f.sha256 }));
        }
        let mut m = Map::new();
        m.insert("command".into(), json!(command));
        m.insert("inputs".into(), Value::Object(inputs));
        m.insert("captions".into(), json!({ "loaded": self.captions_loaded, "kept": self.captions_kept }));
        m.insert("tool".into(), json!({ "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") }));
        m
    }
}

fn meteor_params(p: &MeteorParams) -> Value {
    json!({
        "stem_stage": p.stem_stage,
        "recall_weight": p.recall_weight,
        "gamma": p.gamma,
        "beta": p.beta,
    })
}

pub fn diversity_json(report: &DiversityReport, info: &RunInfo) -> Value {
    let mut m = info.header("diversity");
    let order: Vec<&str> = report.metrics.iter().map(|x| x.key()).collect();
    m.insert("metric_order".into(), json!(order));
    m.insert("video_count".into(), json!(report.video_count));

    let mut metrics = Map::new();
    for &metric in &report.metrics {
        let entry = match metric {
            DiversityMetric::WordTypes => {
                let per: BTreeMap<&str, usize> =
                    report.word_types_per_video.iter().map(|(v, n)| (v.as_str(), *n)).collect();
                json!({
                    "label": metric.label(),
                    "value": report.word_types.unwrap_or(0),
                    "per_video": per,
                    "scope": "corpus",
                })
            }
            _ => {
                let s = report.summary(metric).expect("selected metric was computed");
                let per: Map<String, Value> = s.per_video.iter().map(|(v, x)| (v.clone(), opt4(*x))).collect();
                json!({
                    "label": metric.label(),
                    "value": num4(s.value),
                    "per_video": per,
                    "skipped": s.skipped,
                })
            }
        };
        metrics.insert(metric.key().into(), entry);
    }
    m.insert("metrics".into(), Value::Object(metrics));

    let c = &report.config;
    m.insert(
        "parameters".into(),
        json!({
            "cap": c.cap,
            "delta": c.dce.delta,
            "meteor": meteor_params(&c.meteor),
            "mbleu_smoothing": c.mbleu_smoothing.as_str(),
            "embedding_provider": report.provider,
            "idf_policy": DIVERSITY_IDF_POLICY,
            "idf_documents": report.idf_documents,
            "lsa_max_rank": report.lsa_max_rank,
        }),
    );
    Value::Object(m)
}

fn scores(s: &AccuracyScores) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("meteor".into(), num4(s.meteor));
    m.insert("bleu4".into(), num4(s.bleu4));
    m.insert("cider".into(), num4(s.cider));
    m.insert("rouge_l".into(), num4(s.rouge_l));
    m
}

fn accuracy_block(report: &AccuracyReport, corpus: &Corpus) -> Value {
    let mut per = Map::new();
    for v in &report.videos {
        let mut row = scores(&v.scores);
        row.insert("captions_scored".into(), json!(v.captions_scored));
        if let Some(i) = v.best1_index {
            let text = corpus.caption_set(&v.video_id).map(|s| s.captions()[i].raw_text.clone());
            row.insert("index".into(), json!(i));
            row.insert("caption".into(), json!(text));
        }
        per.insert(v.video_id.clone(), Value::Object(row));
    }
    json!({ "mean": scores(&report.mean), "per_video": per })
}

/// `corpus` is the deduplicated corpus the reports were computed on.
pub fn accuracy_json(all: &AccuracyReport, best1: Option<&AccuracyReport>, corpus: &Corpus, info: &RunInfo) -> Value {
    let mut m = info.header("accuracy");
    m.insert("video_count".into(), json!(all.videos.len()));
    m.insert("all_captions".into(), accuracy_block(all, corpus));
    if let Some(b) = best1 {
        m.insert("best1".into(), accuracy_block(b, corpus));
    }
    m.insert(
        "parameters".into(),
        json!({
            "cap": info.cap,
            "smoothing": all.options.smoothing.as_str(),
            "meteor": meteor_params(&all.options.meteor),
            "idf_policy": ACCURACY_IDF_POLICY,
            "idf_documents": all.idf_documents,
        }),
    );
    Value::Object(m)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    out.push_str(&format!("| {} |\n", header.join(" | ")));
    let numeric = |c: usize| rows.iter().all(|r| r[c] == "-" || r[c].parse::<f64>().is_ok());
    let rule: Vec<&str> = (0..header.len()).map(|c| if c > 0 && numeric(c) { "---:" } else { "---" }).collect();
    out.push_str(&format!("| {} |\n", rule.join(" | ")));
    for r in rows {
        out.push_str(&format!("| {} |\n", r.join(" | ")));
    }
}

fn inputs_md(out: &mut String, info: &RunInfo) {
    for (role, f) in &info.inputs {
        out.push_str(&format!("- {role}: `{}` (sha256 {})\n", f.label(), f.sha256));
    }
    out.push_str(&format!("- caption counts: {} loaded, {} kept (cap {})\n", info.captions_loaded, info.captions_kept, info.cap));
}

/// Corpus values in column order, then a per-video breakdown.
pub fn diversity_markdown(report: &DiversityReport, info: &RunInfo) -> String {
    let mut out = String::from("# Diversity\n\n");
    let labels: Vec<&str> = report.metrics.iter().map(|m| m.label()).collect();
    let mut header = vec!["Videos"];
    header.extend(&labels);
    let mut row = vec![report.video_count.to_string()];
    for &m in &report.metrics {
        row.push(match m {
            DiversityMetric::WordTypes => report.word_types.unwrap_or(0).to_string(),
            _ => fixed4(report.value(m).unwrap_or(0.0)),
        });
    }
    table(&mut out, &header, &[row]);

    out.push_str("\n## Per video\n\n");
    let mut header = vec!["Video"];
    header.extend(&labels);
    let mut rows = Vec::new();
    for (i, (video, words)) in per_video_ids(report).into_iter().enumerate() {
        let mut row = vec![video.clone()];
        for &m in &report.metrics {
            row.push(match m {
                DiversityMetric::WordTypes => words.map_or("-".into(), |w| w.to_string()),
                _ => report.summary(m).and_then(|s| s.per_video[i].1).map_or("-".into(), fixed4),
            });
        }
        rows.push(row);
    }
    table(&mut out, &header, &rows);

    out.push_str("\n## Parameters\n\n");
    let c = &report.config;
    out.push_str(&format!("- delta: {}\n- mBLEU smoothing: {}\n", c.dce.delta, c.mbleu_smoothing.as_str()));
    out.push_str(&format!(
        "- embedding provider: {}\n- IDF: {}\n- LSA max rank: {}\n",
        report.provider.as_deref().unwrap_or("none"),
        DIVERSITY_IDF_POLICY,
        report.lsa_max_rank
    ));
    for &m in &report.metrics {
        if let Some(s) = report.summary(m).filter(|s| s.skipped > 0) {
            out.push_str(&format!("- {} skipped {} video(s)\n", m.label(), s.skipped));
        }
    }
    inputs_md(&mut out, info);
    out
}

fn per_video_ids(report: &DiversityReport) -> Vec<(String, Option<usize>)> {
    if let Some(s) = report.metrics.iter().find_map(|&m| report.summary(m)) {
        let words: BTreeMap<&str, usize> = report.word_types_per_video.iter().map(|(v, n)| (v.as_str(), *n)).collect();
        return s.per_video.iter().map(|(v, _)| (v.clone(), words.get(v.as_str()).copied())).collect();
    }
    report.word_types_per_video.iter().map(|(v, n)| (v.clone(), Some(*n))).collect()
}

pub fn accuracy_markdown(all: &AccuracyReport, best1: Option<&AccuracyReport>, corpus: &Corpus, info: &RunInfo) -> String {
    let mut out = String::from("# Accuracy\n\n");
    let header = ["Mode", "METEOR", "BLEU4", "CIDEr", "ROUGE-L"];
    let row = |r: &AccuracyReport| {
        let s = &r.mean;
        vec![r.mode.as_str().to_string(), fixed4(s.meteor), fixed4(s.bleu4), fixed4(s.cider), fixed4(s.rouge_l)]
    };
    let mut rows = vec![row(all)];
    rows.extend(best1.map(row));
    table(&mut out, &header, &rows);

    if let Some(b) = best1 {
        out.push_str("\n## Best-1 captions\n\n");
        let rows: Vec<Vec<String>> = b
            .videos
            .iter()
            .map(|v| {
                let i = v.best1_index.unwrap_or(0);
                let text = corpus.caption_set(&v.video_id).map_or(String::new(), |s| s.captions()[i].raw_text.clone());
                vec![v.video_id.clone(), i.to_string(), text.replace('|', "\\|"), fixed4(v.scores.meteor)]
            })
            .collect();
        table(&mut out, &["Video", "Index", "Caption", "METEOR"], &rows);
    }

    out.push_str("\n## Parameters\n\n");
    out.push_str(&format!(
        "- BLEU smoothing: {}\n- IDF: {} ({} documents)\n",
        all.options.smoothing.as_str(),
        ACCURACY_IDF_POLICY,
        all.idf_documents
    ));
    inputs_md(&mut out, info);
    out
}
