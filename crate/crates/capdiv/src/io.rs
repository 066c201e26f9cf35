//! JSONL readers for caption, reference and embedding files.
//!
//! ```text
//! {"video_id": "v1", "captions": ["a man runs", "someone jogs"]}
//! {"video_id": "v1", "references": ["a man is running"]}
//! {"sentence": "a man runs", "vector": [0.1, 0.7, 0.2]}
//! ```
//!
//! Blank lines are skipped. Errors carry the 1-based line number.

use std::io::BufRead;
use std::path::{Path, PathBuf};

use capdiv_core::corpus::{Corpus, EmbeddingTable};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

/// An input file read fully into memory, with its SHA-256.
#[derive(Debug, Clone)]
pub struct InputFile {
    pub path: PathBuf,
    pub sha256: String,
    bytes: Vec<u8>,
}

impl InputFile {
    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Ok(InputFile { path: path.to_path_buf(), sha256: hex_digest(&bytes), bytes })
    }

    pub fn label(&self) -> String {
        self.path.display().to_string()
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Which list a caption-style record carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    Captions,
    References,
}

impl SetKind {
    pub fn field(self) -> &'static str {
        match self {
            SetKind::Captions => "captions",
            SetKind::References => "references",
        }
    }
}

/// One `{"video_id", "captions" | "references"}` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetRecord {
    pub line: usize,
    pub video_id: String,
    pub sentences: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRecord {
    pub line: usize,
    pub sentence: String,
    pub vector: Vec<f64>,
}

fn record_error(file: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Record { file: file.to_string(), line, message: message.into() }
}

/// Yields `(line number, object)` for every non-blank line.
fn objects<'a, R: BufRead + 'a>(
    reader: R,
    file: &'a str,
) -> impl Iterator<Item = Result<(usize, Map<String, Value>)>> + 'a {
    reader.lines().enumerate().filter_map(move |(i, line)| {
        let n = i + 1;
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(record_error(file, n, format!("unreadable line: {e}")))),
        };
        if line.trim().is_empty() {
            return None;
        }
        Some(match serde_json::from_str::<Value>(&line) {
            Ok(Value::Object(map)) => Ok((n, map)),
            Ok(_) => Err(record_error(file, n, "record is not a JSON object")),
            Err(e) => Err(record_error(file, n, format!("invalid JSON: {e}"))),
        })
    })
}

fn check_fields(map: &Map<String, Value>, allowed: [&str; 2], file: &str, line: usize) -> Result<()> {
    for key in allowed {
        if !map.contains_key(key) {
            return Err(record_error(file, line, format!("missing field {key:?}")));
        }
    }
    if let Some(extra) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(record_error(file, line, format!("unexpected field {extra:?}")));
    }
    Ok(())
}

pub fn read_sets<R: BufRead>(reader: R, file: &str, kind: SetKind) -> Result<Vec<SetRecord>> {
    let field = kind.field();
    let mut out = Vec::new();
    for item in objects(reader, file) {
        let (line, map) = item?;
        check_fields(&map, ["video_id", field], file, line)?;
        let video_id = match &map["video_id"] {
            Value::String(s) if !s.trim().is_empty() => s.clone(),
            Value::String(_) => return Err(record_error(file, line, "video_id is empty")),
            _ => return Err(record_error(file, line, "video_id must be a string")),
        };
        let Value::Array(items) = &map[field] else {
            return Err(record_error(file, line, format!("{field} must be an array of strings")));
        };
        if items.is_empty() {
            return Err(record_error(file, line, format!("{field} list is empty")));
        }
        let mut sentences = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            match item {
                Value::String(s) if !s.trim().is_empty() => sentences.push(s.clone()),
                Value::String(_) => return Err(record_error(file, line, format!("{field}[{i}] is empty"))),
                _ => return Err(record_error(file, line, format!("{field}[{i}] is not a string"))),
            }
        }
        out.push(SetRecord { line, video_id, sentences });
    }
    Ok(out)
}

pub fn read_embeddings<R: BufRead>(reader: R, file: &str) -> Result<Vec<EmbeddingRecord>> {
    let mut out = Vec::new();
    for item in objects(reader, file) {
        let (line, map) = item?;
        check_fields(&map, ["sentence", "vector"], file, line)?;
        let Value::String(sentence) = &map["sentence"] else {
            return Err(record_error(file, line, "sentence must be a string"));
        };
        let Value::Array(items) = &map["vector"] else {
            return Err(record_error(file, line, "vector must be an array of numbers"));
        };
        let vector = items
            .iter()
            .map(|v| v.as_f64().filter(|x| x.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| record_error(file, line, "vector must contain only finite numbers"))?;
        if vector.is_empty() {
            return Err(record_error(file, line, "vector is empty"));
        }
        out.push(EmbeddingRecord { line, sentence: sentence.clone(), vector });
    }
    Ok(out)
}

/// Adds caption or reference records to `corpus`; repeated video ids merge
/// in file order.
pub fn add_sets(corpus: &mut Corpus, records: &[SetRecord], kind: SetKind, file: &str) -> Result<()> {
    for r in records {
        let added = match kind {
            SetKind::Captions => corpus.add_captions(&r.video_id, &r.sentences),
            SetKind::References => corpus.add_references(&r.video_id, &r.sentences),
        };
        added.map_err(|e| record_error(file, r.line, e.to_string()))?;
    }
    Ok(())
}

pub fn build_table(records: &[EmbeddingRecord], file: &str) -> Result<EmbeddingTable> {
    let mut table = EmbeddingTable::new();
    for r in records {
        table.insert(&r.sentence, r.vector.clone()).map_err(|e| record_error(file, r.line, e.to_string()))?;
    }
    Ok(table)
}

pub fn load_captions(path: &Path) -> Result<Corpus> {
    let input = InputFile::read(path)?;
    let mut corpus = Corpus::new();
    let records = read_sets(input.bytes(), &input.label(), SetKind::Captions)?;
    add_sets(&mut corpus, &records, SetKind::Captions, &input.label())?;
    Ok(corpus)
}

/// Reads reference records into an existing corpus.
pub fn load_references(path: &Path, corpus: &mut Corpus) -> Result<()> {
    let input = InputFile::read(path)?;
    let records = read_sets(input.bytes(), &input.label(), SetKind::References)?;
    add_sets(corpus, &records, SetKind::References, &input.label())
}

pub fn load_embeddings(path: &Path) -> Result<EmbeddingTable> {
    let input = InputFile::read(path)?;
    build_table(&read_embeddings(input.bytes(), &input.label())?, &input.label())
}
