use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use capdiv::io;
use serde_json::Value;
use tempfile::TempDir;

fn capdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capdiv")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
    serde_json::from_slice(&o.stdout).unwrap()
}

struct Toy {
    _dir: TempDir,
    caps: PathBuf,
    refs: PathBuf,
    emb: PathBuf,
}

fn toy() -> Toy {
    let dir = tempfile::tempdir().unwrap();
    let caps = write(
        dir.path(),
        "caps.jsonl",
        concat!(
            "{\"video_id\": \"v1\", \"captions\": [\"a dog runs\", \"a dog is running on grass\", \"a cat sleeps\"]}\n",
            "{\"video_id\": \"v2\", \"captions\": [\"a woman is dancing\", \"a man is cooking food\"]}\n",
            "{\"video_id\": \"v3\", \"captions\": [\"the sun sets\"]}\n",
        ),
    );
    let refs = write(
        dir.path(),
        "refs.jsonl",
        concat!(
            "{\"video_id\": \"v1\", \"references\": [\"a dog is running on the grass\", \"a dog runs\"]}\n",
            "{\"video_id\": \"v2\", \"references\": [\"a man is cooking food in a kitchen\"]}\n",
            "{\"video_id\": \"v3\", \"references\": [\"the sun sets over the sea\"]}\n",
        ),
    );
    let mut emb = String::new();
    let sentences = ["a dog runs", "a dog is running on grass", "a cat sleeps", "a woman is dancing", "a man is cooking food", "the sun sets"];
    for (i, sentence) in sentences.iter().enumerate() {
        let v: Vec<String> = (0..6).map(|j| if j == i { "1".into() } else { "0.1".into() }).collect();
        emb.push_str(&format!("{{\"sentence\": \"{sentence}\", \"vector\": [{}]}}\n", v.join(", ")));
    }
    let emb = write(dir.path(), "emb.jsonl", &emb);
    Toy { _dir: dir, caps, refs, emb }
}

#[test]
fn validate_reports_counts() {
    let t = toy();
    let o = capdiv(&["validate", "--captions", s(&t.caps), "--refs", s(&t.refs), "--embeddings", s(&t.emb)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("captions: 3 videos, 6 captions"), "{out}");
    assert!(out.contains("references: 3 videos, 4 sentences"));
    assert!(out.contains("embeddings: 6 sentences, dim 6"));
}

#[test]
fn validate_names_the_bad_line() {
    let dir = tempfile::tempdir().unwrap();
    let mut text: String = (0..6).map(|i| format!("{{\"video_id\": \"v{i}\", \"captions\": [\"x y\"]}}\n")).collect();
    text.push_str("{\"video_id\": \"v6\", \"captions\": \"oops\"}\n");
    let p = write(dir.path(), "bad.jsonl", &text);
    let o = capdiv(&["validate", "--captions", s(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 7"), "{}", stderr(&o));
}

#[test]
fn embedding_dimension_mismatch_is_an_input_error() {
    let t = toy();
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "e.jsonl", "{\"sentence\": \"a\", \"vector\": [1, 2, 3, 4]}\n{\"sentence\": \"b\", \"vector\": [1, 2, 3, 4, 5]}\n");
    let o = capdiv(&["validate", "--captions", s(&t.caps), "--embeddings", s(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = capdiv(&["validate", "--captions", "/nonexistent/caps.jsonl"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn large_corpus_loads_every_video() {
    let dir = tempfile::tempdir().unwrap();
    let text: String = (0..670).map(|i| format!("{{\"video_id\": \"vid{i}\", \"captions\": [\"a man runs\"]}}\n")).collect();
    let p = write(dir.path(), "msvd.jsonl", &text);
    assert_eq!(io::load_captions(&p).unwrap().video_count(), 670);
    let o = capdiv(&["validate", "--captions", s(&p)]);
    assert!(stdout(&o).contains("670 videos"));
}

#[test]
fn loading_is_idempotent() {
    let t = toy();
    let mut a = io::load_captions(&t.caps).unwrap();
    let mut b = io::load_captions(&t.caps).unwrap();
    io::load_references(&t.refs, &mut a).unwrap();
    io::load_references(&t.refs, &mut b).unwrap();
    assert_eq!(a, b);
}

#[test]
fn cap_keeps_first_thirty_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let caps: Vec<String> = (0..35).map(|i| format!("\"caption number {i}\"")).collect();
    let p = write(dir.path(), "c.jsonl", &format!("{{\"video_id\": \"v\", \"captions\": [{}]}}\n", caps.join(", ")));
    let r = json(&capdiv(&["diversity", "--captions", s(&p), "--metrics", "word-types"]));
    assert_eq!(r["captions"]["loaded"], 35);
    assert_eq!(r["captions"]["kept"], 30);
    // "caption", "number" and the numbers 0..29
    assert_eq!(r["metrics"]["word-types"]["value"], 32);
}

#[test]
fn accuracy_best1_block_and_determinism() {
    let t = toy();
    let args = ["accuracy", "--captions", s(&t.caps), "--refs", s(&t.refs), "--best1"];
    let first = capdiv(&args);
    let second = capdiv(&args);
    assert_eq!(first.stdout, second.stdout);
    let r = json(&first);
    let best = &r["best1"]["per_video"];
    assert_eq!(best["v1"]["index"], 0);
    assert_eq!(best["v1"]["caption"], "a dog runs");
    assert_eq!(best["v2"]["index"], 1);
    assert_eq!(best["v3"]["index"], 0);
    assert_eq!(r["parameters"]["smoothing"], "off");
    assert!(r["all_captions"]["per_video"]["v1"]["captions_scored"] == 3);
}

#[test]
fn accuracy_perfect_match_prints_ones() {
    let dir = tempfile::tempdir().unwrap();
    let caps = write(
        dir.path(),
        "c.jsonl",
        "{\"video_id\": \"a\", \"captions\": [\"a man is slicing a tomato\"]}\n{\"video_id\": \"b\", \"captions\": [\"two dogs play in the park\"]}\n",
    );
    let refs = write(
        dir.path(),
        "r.jsonl",
        "{\"video_id\": \"a\", \"references\": [\"a man is slicing a tomato\"]}\n{\"video_id\": \"b\", \"references\": [\"two dogs play in the park\"]}\n",
    );
    let o = capdiv(&["accuracy", "--captions", s(&caps), "--refs", s(&refs)]);
    let text = stdout(&o);
    for key in ["bleu4", "cider", "rouge_l"] {
        assert!(text.contains(&format!("\"{key}\": 1.0000")), "{key}: {text}");
    }
    let md = stdout(&capdiv(&["accuracy", "--captions", s(&caps), "--refs", s(&refs), "--format", "markdown"]));
    assert!(md.contains("| METEOR | BLEU4 | CIDEr | ROUGE-L |"));
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let t = toy();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let base = ["diversity", "--captions", s(&t.caps), "--refs", s(&t.refs), "--embeddings", s(&t.emb)];
    let direct = capdiv(&base);
    let mut args = base.to_vec();
    args.extend(["--out", s(&out)]);
    let o = capdiv(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), direct.stdout);
}

#[test]
fn identical_captions_degenerate_report() {
    let dir = tempfile::tempdir().unwrap();
    let caps = write(
        dir.path(),
        "c.jsonl",
        "{\"video_id\": \"a\", \"captions\": [\"a man runs\", \"A man runs.\", \"a man runs\"]}\n{\"video_id\": \"b\", \"captions\": [\"two dogs play\", \"two dogs play\"]}\n",
    );
    let refs = write(
        dir.path(),
        "r.jsonl",
        "{\"video_id\": \"a\", \"references\": [\"a man runs\"]}\n{\"video_id\": \"b\", \"references\": [\"dogs play\"]}\n",
    );
    let o = capdiv(&["diversity", "--captions", s(&caps), "--refs", s(&refs), "--fallback-embeddings"]);
    let text = stdout(&o);
    let r = json(&o);
    let m = &r["metrics"];
    assert_eq!(m["dce"]["value"].to_string(), "0.0000", "{text}");
    assert_eq!(m["mixed-mbleu"]["value"].to_string(), "1.0000");
    assert_eq!(m["self-cider"]["value"].to_string(), "0.0000");
    assert_eq!(m["lsa"]["value"].to_string(), "0.0000");
}

#[test]
fn exit_code_matrix() {
    let t = toy();
    let c = s(&t.caps);
    // 0: late binding, nothing but captions
    assert_eq!(capdiv(&["diversity", "--captions", c, "--metrics", "word-types"]).status.code(), Some(0));
    assert_eq!(capdiv(&["diversity", "--captions", c, "--metrics", "mixed-mbleu,self-cider,lsa"]).status.code(), Some(0));
    // 2: input errors
    assert_eq!(capdiv(&["diversity", "--captions", c, "--delta", "1.5", "--metrics", "lsa"]).status.code(), Some(2));
    assert_eq!(capdiv(&["diversity", "--captions", c, "--metrics", "bleu"]).status.code(), Some(2));
    assert_eq!(capdiv(&["diversity", "--captions", c, "--cap", "0"]).status.code(), Some(2));
    assert_eq!(
        capdiv(&["diversity", "--captions", c, "--embeddings", s(&t.emb), "--fallback-embeddings"]).status.code(),
        Some(2)
    );
    // 3: embeddings
    let o = capdiv(&["diversity", "--captions", c, "--metrics", "dce-variant"]);
    assert_eq!(o.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let partial = write(dir.path(), "e.jsonl", "{\"sentence\": \"a dog runs\", \"vector\": [1, 0]}\n");
    let o = capdiv(&["diversity", "--captions", c, "--embeddings", s(&partial), "--metrics", "dce-variant"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("a cat sleeps") || stderr(&o).contains("a dog is running"));
    // 4: references
    let o = capdiv(&["diversity", "--captions", c, "--fallback-embeddings", "--metrics", "dce"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("--refs"));
    assert_eq!(capdiv(&["accuracy", "--captions", c]).status.code(), Some(4));
    let some_refs = write(dir.path(), "r.jsonl", "{\"video_id\": \"v1\", \"references\": [\"a dog\"]}\n");
    assert_eq!(capdiv(&["accuracy", "--captions", c, "--refs", s(&some_refs)]).status.code(), Some(4));
    assert_eq!(
        capdiv(&["diversity", "--captions", c, "--refs", s(&some_refs), "--fallback-embeddings", "--metrics", "dce"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn orphan_references_warn() {
    let t = toy();
    let dir = tempfile::tempdir().unwrap();
    let refs = std::fs::read_to_string(&t.refs).unwrap() + "{\"video_id\": \"zz\", \"references\": [\"nothing\"]}\n";
    let refs = write(dir.path(), "r.jsonl", &refs);
    let o = capdiv(&["accuracy", "--captions", s(&t.caps), "--refs", s(&refs)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("\"zz\""));
}

#[test]
fn markdown_columns_follow_table_order() {
    let t = toy();
    let o = capdiv(&[
        "diversity", "--captions", s(&t.caps), "--refs", s(&t.refs), "--embeddings", s(&t.emb),
        "--metrics", "lsa,self-cider,word-types,dce,mixed-mbleu,dce-variant", "--format", "markdown",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| Videos | DCE | DCE-Variant | Word Types | Mixed mBLEU | Self-CIDEr | LSA-based |"));
}
