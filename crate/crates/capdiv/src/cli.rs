//! Command-line surface: argument definitions and command drivers.

use std::io::Write;
use std::path::{Path, PathBuf};

use capdiv_core::corpus::{Corpus, DEFAULT_CAP};
use capdiv_core::divmetrics::{evaluate_diversity, DceParams, DiversityConfig, DiversityMetric};
use capdiv_core::refmetrics::{corpus_accuracy, AccuracyMode, AccuracyOptions, Smoothing};
use capdiv_core::simcore::EmbeddingProvider;
use clap::builder::RangedU64ValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::io::{self, InputFile, SetKind};
use crate::render::{self, RunInfo};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "capdiv", version, about = "Accuracy and diversity evaluation for generated captions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse input files and report record counts
    Validate(ValidateArgs),
    /// Score captions against references (METEOR, BLEU4, CIDEr, ROUGE-L)
    Accuracy(AccuracyArgs),
    /// Diversity of each video's caption set
    Diversity(DiversityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl From<Switch> for Smoothing {
    fn from(s: Switch) -> Self {
        match s {
            Switch::On => Smoothing::On,
            Switch::Off => Smoothing::Off,
        }
    }
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_name = "PATH")]
    pub captions: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub refs: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub embeddings: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report destination (default: stdout)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AccuracyArgs {
    #[arg(long, value_name = "PATH")]
    pub captions: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub refs: Option<PathBuf>,
    /// Captions kept per video after removing duplicates
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    pub cap: usize,
    /// Also score the best-1 caption (highest METEOR) of every video
    #[arg(long)]
    pub best1: bool,
    /// BLEU smoothing (default: off)
    #[arg(long, value_enum)]
    pub smoothing: Option<Switch>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DiversityArgs {
    #[arg(long, value_name = "PATH")]
    pub captions: PathBuf,
    /// Needed by dce
    #[arg(long, value_name = "PATH")]
    pub refs: Option<PathBuf>,
    /// Sentence vectors for dce and dce-variant
    #[arg(long, value_name = "PATH", conflicts_with = "fallback_embeddings")]
    pub embeddings: Option<PathBuf>,
    /// Use the built-in hashed embedder instead of an embedding file
    #[arg(long)]
    pub fallback_embeddings: bool,
    /// Weight of the word-level term in dce
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    pub cap: usize,
    /// Comma-separated subset of dce,dce-variant,word-types,mixed-mbleu,self-cider,lsa
    #[arg(long, value_delimiter = ',', value_parser = parse_metric)]
    pub metrics: Option<Vec<DiversityMetric>>,
    /// mBLEU smoothing (default: on)
    #[arg(long, value_enum)]
    pub smoothing: Option<Switch>,
    #[command(flatten)]
    pub output: Output,
}

fn parse_metric(s: &str) -> std::result::Result<DiversityMetric, String> {
    DiversityMetric::from_key(s.trim()).ok_or_else(|| {
        let keys: Vec<&str> = DiversityMetric::ALL.iter().map(|m| m.key()).collect();
        format!("unknown metric {s:?} (expected one of {})", keys.join(", "))
    })
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Validate(a) => validate(&a, stdout, stderr),
        Command::Accuracy(a) => accuracy(&a, stdout, stderr),
        Command::Diversity(a) => diversity(&a, stdout, stderr),
    }
}

fn console(w: &mut dyn Write, line: &str) -> Result<()> {
    writeln!(w, "{line}").map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
}

fn caption_total(c: &Corpus) -> usize {
    c.caption_sets().map(|s| s.len()).sum()
}

struct Loaded {
    corpus: Corpus,
    files: Vec<(&'static str, InputFile)>,
}

fn load(captions: &Path, refs: Option<&Path>, stderr: &mut dyn Write) -> Result<Loaded> {
    let cap_file = InputFile::read(captions)?;
    let mut corpus = Corpus::new();
    let records = io::read_sets(cap_file.bytes(), &cap_file.label(), SetKind::Captions)?;
    io::add_sets(&mut corpus, &records, SetKind::Captions, &cap_file.label())?;
    let mut files = vec![("captions", cap_file)];
    if let Some(path) = refs {
        let f = InputFile::read(path)?;
        let records = io::read_sets(f.bytes(), &f.label(), SetKind::References)?;
        io::add_sets(&mut corpus, &records, SetKind::References, &f.label())?;
        for v in corpus.orphan_reference_videos() {
            console(stderr, &format!("warning: references for {v:?} have no captions; ignored"))?;
        }
        files.push(("references", f));
    }
    Ok(Loaded { corpus, files })
}

fn write_report(output: &Output, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io { path: path.clone(), source }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| Error::Io { path: "<stdout>".into(), source }),
    }
}

fn validate(a: &ValidateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let loaded = load(&a.captions, a.refs.as_deref(), stderr)?;
    let c = &loaded.corpus;
    console(stdout, &format!("captions: {} videos, {} captions", c.video_count(), caption_total(c)))?;
    if c.has_references() {
        let n: usize = c.reference_sets().map(|r| r.len()).sum();
        console(stdout, &format!("references: {} videos, {} sentences", c.reference_sets().count(), n))?;
        let missing = c.videos_missing_references();
        if !missing.is_empty() {
            console(stderr, &format!("warning: {} captioned video(s) have no references", missing.len()))?;
        }
    }
    if let Some(path) = &a.embeddings {
        let t = io::load_embeddings(path)?;
        console(stdout, &format!("embeddings: {} sentences, dim {}", t.len(), t.dim().unwrap_or(0)))?;
    }
    Ok(())
}

fn accuracy(a: &AccuracyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let loaded = load(&a.captions, a.refs.as_deref(), stderr)?;
    if a.refs.is_none() {
        return Err(Error::ReferencesRequired("accuracy needs a reference file (--refs)".into()));
    }
    let corpus = loaded.corpus.dedup_and_cap(a.cap);
    let options = AccuracyOptions { smoothing: a.smoothing.map_or(Smoothing::Off, Smoothing::from), ..Default::default() };
    let all = corpus_accuracy(&corpus, AccuracyMode::AllCaptions, &options)?;
    let best1 = if a.best1 { Some(corpus_accuracy(&corpus, AccuracyMode::Best1, &options)?) } else { None };
    let info = RunInfo {
        inputs: loaded.files.iter().map(|(r, f)| (*r, f)).collect(),
        cap: a.cap,
        captions_loaded: caption_total(&loaded.corpus),
        captions_kept: caption_total(&corpus),
    };
    let text = match a.output.format {
        Format::Json => render::to_json_text(&render::accuracy_json(&all, best1.as_ref(), &corpus, &info)),
        Format::Markdown => render::accuracy_markdown(&all, best1.as_ref(), &corpus, &info),
    };
    write_report(&a.output, &text, stdout)
}

fn diversity(a: &DiversityArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let dce = DceParams::new(a.delta)?;
    let metrics = a.metrics.clone().unwrap_or_else(|| DiversityMetric::ALL.to_vec());
    let loaded = load(&a.captions, a.refs.as_deref(), stderr)?;
    let table = match &a.embeddings {
        Some(path) => {
            let f = InputFile::read(path)?;
            let t = io::build_table(&io::read_embeddings(f.bytes(), &f.label())?, &f.label())?;
            Some((t, f))
        }
        None => None,
    };

    if metrics.contains(&DiversityMetric::Dce) && a.refs.is_none() {
        return Err(Error::ReferencesRequired("metric dce weights pairs by METEOR and needs --refs".into()));
    }
    let provider = match (table, a.fallback_embeddings) {
        (Some((t, _)), _) => Some(EmbeddingProvider::Precomputed(t)),
        (None, true) => Some(EmbeddingProvider::fallback()),
        (None, false) => None,
    };
    if provider.is_none() && metrics.iter().any(|m| m.needs_embeddings()) {
        return Err(Error::EmbeddingsRequired("dce and dce-variant need --embeddings or --fallback-embeddings".into()));
    }

    let config = DiversityConfig {
        dce,
        mbleu_smoothing: a.smoothing.map_or(Smoothing::On, Smoothing::from),
        cap: a.cap,
        ..Default::default()
    };
    let report = evaluate_diversity(&loaded.corpus, &metrics, provider.as_ref(), &config)?;

    let mut files: Vec<(&'static str, InputFile)> = loaded.files;
    if let Some(path) = &a.embeddings {
        files.push(("embeddings", InputFile::read(path)?));
    }
    let info = RunInfo {
        inputs: files.iter().map(|(r, f)| (*r, f)).collect(),
        cap: a.cap,
        captions_loaded: caption_total(&loaded.corpus),
        captions_kept: caption_total(&loaded.corpus.dedup_and_cap(a.cap)),
    };
    let text = match a.output.format {
        Format::Json => render::to_json_text(&render::diversity_json(&report, &info)),
        Format::Markdown => render::diversity_markdown(&report, &info),
    };
    write_report(&a.output, &text, stdout)
}
