//! The `lexforge` command line.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 input/output
//! error, 4 oracle unreachable after retries.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use lexforge_core::evaluation::{evaluate, identity_baseline};
use lexforge_core::induction::{run_induction_with, InductionConfig, InductionRun, Outcome, StepEvent};
use lexforge_core::{MaskFiller, MockOracle, PathMode, Reranker, Symbol};
use serde::Serialize;

use crate::client::{HttpOracle, RetryPolicy};
use crate::config::ConfigFile;
use crate::error::{Error, Result};
use crate::formats;

pub const ORACLE_URL_ENV: &str = "LEXFORGE_ORACLE_URL";
const DEFAULT_KS: [usize; 4] = [1, 2, 3, 5];

#[derive(Debug, Parser)]
#[command(name = "lexforge", version, about = "Bilingual lexicon induction via mask filling and orthographic reranking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Induce a lexicon from an LRL corpus.
    Induce(InduceArgs),
    /// Score a lexicon against a silver lexicon.
    Evaluate(EvaluateArgs),
    /// Score the identity baseline (every word predicted as itself).
    BaselineId(BaselineArgs),
    /// Show the most probable substitutions in a rulebook dump.
    RulebookInspect(InspectArgs),
    /// Build a unigram-fallback mock oracle table from an HRL corpus.
    MockOracleGen(MockGenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RerankerArg {
    Basic,
    Rulebook,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathModeArg {
    Unit,
    Matrix,
}

#[derive(Debug, Clone, Default, Args)]
pub struct InduceArgs {
    /// key = value file with defaults for any of these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// LRL corpus, one sentence per line (repeatable)
    #[arg(long)]
    pub corpus: Vec<PathBuf>,
    /// HRL vocabulary: `word<TAB>frequency` or `word` per line
    #[arg(long)]
    pub hrl_vocab: Option<PathBuf>,
    /// Minimum frequency for a vocabulary word to count as shared [default: 1]
    #[arg(long)]
    pub vocab_min_freq: Option<u64>,
    /// Mask-fill service base URL (falls back to $LEXFORGE_ORACLE_URL)
    #[arg(long)]
    pub oracle_url: Option<String>,
    /// JSON mock-oracle table, for offline runs
    #[arg(long)]
    pub mock_table: Option<PathBuf>,
    /// Candidate reranker [default: basic]
    #[arg(long, value_enum)]
    pub reranker: Option<RerankerArg>,
    /// Minimum normalized similarity (exclusive) to accept a pair [default: 0.5]
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Maximum passes over the work queue [default: 3]
    #[arg(long)]
    pub passes: Option<u32>,
    /// Candidates requested per masked position [default: 30]
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Items processed between queue reprioritizations [default: 100]
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Rulebook: ignore updates whose source side is the null character
    #[arg(long)]
    pub freeze_null: bool,
    /// Edit script used for rulebook scoring and updates [default: unit]
    #[arg(long, value_enum)]
    pub path_mode: Option<PathModeArg>,
    /// Seed for retry jitter [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Stop once a whole pass learns nothing
    #[arg(long)]
    pub early_stop: bool,
    /// Oracle retries per query [default: 3]
    #[arg(long)]
    pub retries: Option<u32>,
    /// Output lexicon TSV
    #[arg(long)]
    pub out_lexicon: Option<PathBuf>,
    /// Output run report JSON
    #[arg(long)]
    pub out_report: Option<PathBuf>,
    /// Output rulebook matrix dump (rulebook reranker only)
    #[arg(long)]
    pub out_rulebook: Option<PathBuf>,
    /// Candidates written per source word [default: 5]
    #[arg(long)]
    pub lexicon_top_k: Option<usize>,
    /// No progress lines on stderr
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Lexicon TSV written by `induce`
    #[arg(long)]
    pub lexicon: PathBuf,
    /// Silver lexicon: `source<TAB>target1<TAB>target2…`
    #[arg(long)]
    pub silver: PathBuf,
    /// Cut-offs to score (comma separated or repeated) [default: 1,2,3,5]
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    /// Also write the results as JSON
    #[arg(long)]
    pub out_json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BaselineArgs {
    /// Silver lexicon: `source<TAB>target1<TAB>target2…`
    #[arg(long)]
    pub silver: PathBuf,
    /// Cut-offs to score (comma separated or repeated) [default: 1,2,3,5]
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    /// Also write the results as JSON
    #[arg(long)]
    pub out_json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct InspectArgs {
    /// Rulebook dump written by `induce --out-rulebook`
    #[arg(long)]
    pub rulebook: PathBuf,
    /// Non-self substitutions shown per source character
    #[arg(long, default_value_t = 3)]
    pub top: usize,
    /// Only rows whose strongest non-self probability reaches this value
    #[arg(long, default_value_t = 0.0)]
    pub min_prob: f64,
}

#[derive(Debug, Clone, Args)]
pub struct MockGenArgs {
    /// HRL corpus, one sentence per line (repeatable)
    #[arg(long, required = true)]
    pub corpus: Vec<PathBuf>,
    /// Fallback words kept
    #[arg(long, default_value_t = 30)]
    pub top_k: usize,
    /// Output table path
    #[arg(long)]
    pub mock_table: PathBuf,
}

/// Everything `induce` needs, after merging flags, config file and defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct InduceSettings {
    pub corpus: Vec<PathBuf>,
    pub hrl_vocab: PathBuf,
    pub vocab_min_freq: u64,
    pub oracle: OracleSource,
    pub induction: InductionConfig,
    pub retries: u32,
    pub out_lexicon: PathBuf,
    pub out_report: Option<PathBuf>,
    pub out_rulebook: Option<PathBuf>,
    pub lexicon_top_k: usize,
    pub quiet: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleSource {
    Url(String),
    MockTable(PathBuf),
}

fn parse_reranker(v: &str) -> Result<Reranker> {
    match v {
        "basic" => Ok(Reranker::Basic),
        "rulebook" => Ok(Reranker::Rulebook),
        _ => Err(Error::Config(format!("unknown reranker {v:?}"))),
    }
}

fn parse_path_mode(v: &str) -> Result<PathMode> {
    match v {
        "unit" => Ok(PathMode::UnitCost),
        "matrix" => Ok(PathMode::MatrixOptimal),
        _ => Err(Error::Config(format!("unknown path mode {v:?}"))),
    }
}

impl InduceArgs {
    /// Flag > config file > environment (oracle URL only) > default.
    pub fn resolve(&self, env_url: Option<String>) -> Result<InduceSettings> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let defaults = InductionConfig::default();

        let corpus = if !self.corpus.is_empty() {
            self.corpus.clone()
        } else {
            file.raw("corpus")
                .map(|v| v.split(',').map(|p| PathBuf::from(p.trim())).collect())
                .unwrap_or_default()
        };
        if corpus.is_empty() {
            return Err(Error::Config("--corpus is required".into()));
        }
        let hrl_vocab = self
            .hrl_vocab
            .clone()
            .or(file.get("hrl-vocab")?)
            .ok_or_else(|| Error::Config("--hrl-vocab is required".into()))?;
        let out_lexicon = self
            .out_lexicon
            .clone()
            .or(file.get("out-lexicon")?)
            .ok_or_else(|| Error::Config("--out-lexicon is required".into()))?;

        let mock = self.mock_table.clone().or(file.get("mock-table")?);
        let url = self.oracle_url.clone().or(file.get("oracle-url")?);
        let oracle = match (mock, url) {
            (Some(_), Some(_)) => return Err(Error::Config("give either --mock-table or --oracle-url, not both".into())),
            (Some(m), None) => OracleSource::MockTable(m),
            (None, Some(u)) => OracleSource::Url(u),
            (None, None) => match env_url.filter(|u| !u.is_empty()) {
                Some(u) => OracleSource::Url(u),
                None => {
                    return Err(Error::Config(format!(
                        "no oracle: pass --oracle-url, --mock-table or set {ORACLE_URL_ENV}"
                    )))
                }
            },
        };

        let reranker = match self.reranker {
            Some(RerankerArg::Basic) => Reranker::Basic,
            Some(RerankerArg::Rulebook) => Reranker::Rulebook,
            None => file.raw("reranker").map(parse_reranker).transpose()?.unwrap_or(defaults.reranker),
        };
        let path_mode = match self.path_mode {
            Some(PathModeArg::Unit) => PathMode::UnitCost,
            Some(PathModeArg::Matrix) => PathMode::MatrixOptimal,
            None => file.raw("path-mode").map(parse_path_mode).transpose()?.unwrap_or(defaults.path_mode),
        };
        let induction = InductionConfig {
            reranker,
            path_mode,
            similarity_threshold: self.threshold.or(file.get("threshold")?).unwrap_or(defaults.similarity_threshold),
            max_passes: self.passes.or(file.get("passes")?).unwrap_or(defaults.max_passes),
            top_k: self.top_k.or(file.get("top-k")?).unwrap_or(defaults.top_k),
            batch_size: self.batch_size.or(file.get("batch-size")?).unwrap_or(defaults.batch_size),
            freeze_null: self.freeze_null || file.flag("freeze-null")?.unwrap_or(defaults.freeze_null),
            random_seed: self.seed.or(file.get("seed")?).unwrap_or(defaults.random_seed),
            early_stop: self.early_stop || file.flag("early-stop")?.unwrap_or(defaults.early_stop),
            ..defaults
        };
        induction.validate().map_err(|e| Error::Config(e.to_string()))?;

        let lexicon_top_k = self.lexicon_top_k.or(file.get("lexicon-top-k")?).unwrap_or(5);
        if lexicon_top_k == 0 {
            return Err(Error::Config("--lexicon-top-k must be at least 1".into()));
        }
        Ok(InduceSettings {
            corpus,
            hrl_vocab,
            vocab_min_freq: self.vocab_min_freq.or(file.get("vocab-min-freq")?).unwrap_or(1),
            oracle,
            induction,
            retries: self.retries.or(file.get("retries")?).unwrap_or(3),
            out_lexicon,
            out_report: self.out_report.clone().or(file.get("out-report")?),
            out_rulebook: self.out_rulebook.clone().or(file.get("out-rulebook")?),
            lexicon_top_k,
            quiet: self.quiet,
        })
    }
}

#[derive(Serialize)]
struct ReportFile<'a> {
    config: &'a InductionConfig,
    oracle: &'a OracleSource,
    corpus: &'a [PathBuf],
    hrl_vocab: &'a Path,
    corpus_sentences: usize,
    vocabulary_size: usize,
    lexicon_size: usize,
    report: &'a lexforge_core::RunReport,
}

fn progress(ev: &StepEvent<'_>, batch: usize) {
    let what = match ev.result {
        Ok(Outcome::Learned { target, similarity, .. }) => format!("learned {target} ({similarity:.3})"),
        Ok(Outcome::Identity { .. }) => "identity".into(),
        Ok(Outcome::Rejected) => "rejected".into(),
        Ok(Outcome::OracleEmpty) => "no candidates".into(),
        Err(e) => format!("oracle failure: {e}"),
    };
    if ev.result.is_err() || ev.lexicon_size.is_multiple_of(batch.max(1)) && matches!(ev.result, Ok(Outcome::Learned { .. })) {
        eprintln!("[pass {}] {} -> {what}; lexicon size {}", ev.pass, ev.item.word, ev.lexicon_size);
    }
}

pub fn cmd_induce(args: &InduceArgs) -> Result<InductionRun> {
    let settings = args.resolve(std::env::var(ORACLE_URL_ENV).ok())?;
    induce(&settings)
}

/// Runs induction with resolved settings and writes every requested output.
pub fn induce(settings: &InduceSettings) -> Result<InductionRun> {
    let corpus = formats::read_corpora(&settings.corpus)?;
    let vocabulary = formats::read_vocabulary(&settings.hrl_vocab, settings.vocab_min_freq)?;
    let mut oracle: Box<dyn MaskFiller> = match &settings.oracle {
        OracleSource::MockTable(p) => Box::new(formats::read_mock_table(p)?),
        OracleSource::Url(u) => Box::new(
            HttpOracle::new(
                u,
                RetryPolicy {
                    max_retries: settings.retries,
                    ..Default::default()
                },
                settings.induction.random_seed,
            )
            .map_err(|e| Error::OracleUnreachable(e.to_string()))?,
        ),
    };

    let cfg = &settings.induction;
    let started = Instant::now();
    let quiet = settings.quiet;
    let mut run = run_induction_with(&corpus, &vocabulary, &mut oracle, cfg, |ev| {
        if !quiet {
            progress(ev, cfg.batch_size);
        }
    })
    .map_err(|e| match e {
        lexforge_core::Error::InvalidArgument(m) => Error::Config(m),
        other => Error::Core(other),
    })?;
    run.report.wall_time_secs = Some(started.elapsed().as_secs_f64());
    if !quiet {
        let r = &run.report;
        eprintln!(
            "done: {} items processed over {} passes, {} entries, {} oracle failures, {:.1}s",
            r.items_processed(),
            r.passes.len(),
            run.lexicon.len(),
            r.oracle_failures,
            r.wall_time_secs.unwrap_or_default()
        );
    }

    formats::write_text(&settings.out_lexicon, &formats::lexicon_to_tsv(&run.lexicon, settings.lexicon_top_k))?;
    if let Some(path) = &settings.out_report {
        let file = ReportFile {
            config: cfg,
            oracle: &settings.oracle,
            corpus: &settings.corpus,
            hrl_vocab: &settings.hrl_vocab,
            corpus_sentences: corpus.len(),
            vocabulary_size: vocabulary.len(),
            lexicon_size: run.lexicon.len(),
            report: &run.report,
        };
        let mut json = serde_json::to_string_pretty(&file).expect("report serializes");
        json.push('\n');
        formats::write_text(path, &json)?;
    }
    if let (Some(path), Some(m)) = (&settings.out_rulebook, &run.rulebook) {
        formats::write_text(path, &formats::rulebook_to_tsv(m))?;
    }

    let r = &run.report;
    if r.oracle_calls > 0 && r.oracle_failures == r.oracle_calls {
        return Err(Error::OracleUnreachable(format!(
            "all {} queries failed after retries",
            r.oracle_calls
        )));
    }
    Ok(run)
}

fn ks_or_default(ks: &[usize]) -> Result<Vec<usize>> {
    if ks.contains(&0) {
        return Err(Error::Config("k must be at least 1".into()));
    }
    Ok(if ks.is_empty() { DEFAULT_KS.to_vec() } else { ks.to_vec() })
}

pub fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let ks = ks_or_default(&args.k)?;
    let lexicon = formats::read_lexicon(&args.lexicon)?;
    let silver = formats::read_silver(&args.silver)?;
    let results = evaluate(&lexicon, &silver, &ks).map_err(|e| Error::Config(e.to_string()))?;
    let label = args.lexicon.file_stem().map_or("lexicon".into(), |s| s.to_string_lossy().into_owned());
    let _ = out.write_all(formats::eval_table(&label, &results).as_bytes());
    if let Some(p) = &args.out_json {
        formats::write_text(p, &formats::eval_to_json(&results))?;
    }
    Ok(())
}

pub fn cmd_baseline_id(args: &BaselineArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let ks = ks_or_default(&args.k)?;
    let silver = formats::read_silver(&args.silver)?;
    let results = ks
        .iter()
        .map(|&k| identity_baseline(&silver, k))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Config(e.to_string()))?;
    let _ = out.write_all(formats::eval_table("ID", &results).as_bytes());
    if let Some(p) = &args.out_json {
        formats::write_text(p, &formats::eval_to_json(&results))?;
    }
    Ok(())
}

pub fn cmd_rulebook_inspect(args: &InspectArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let rows = formats::parse_rulebook(&formats::read_text(&args.rulebook)?, &args.rulebook)?;
    let mut by_source: Vec<(Symbol, Vec<&formats::RulebookRow>)> = Vec::new();
    for r in &rows {
        match by_source.last_mut() {
            Some((s, v)) if *s == r.source => v.push(r),
            _ => by_source.push((r.source, vec![r])),
        }
    }
    for (source, mut cells) in by_source {
        cells.sort_by(|a, b| b.probability.total_cmp(&a.probability).then(a.target.cmp(&b.target)));
        let own = cells.iter().find(|c| c.target == source).map_or(0.0, |c| c.probability);
        let others: Vec<_> = cells.iter().filter(|c| c.target != source).take(args.top).collect();
        if others.first().map_or(0.0, |c| c.probability) < args.min_prob {
            continue;
        }
        let shown: Vec<String> = others.iter().map(|c| format!("{} {:.4}", c.target, c.probability)).collect();
        let _ = writeln!(out, "{source}\tself {own:.4}\t{}", shown.join("\t"));
    }
    Ok(())
}

pub fn cmd_mock_oracle_gen(args: &MockGenArgs) -> Result<MockOracle> {
    if args.top_k == 0 {
        return Err(Error::Config("--top-k must be at least 1".into()));
    }
    let corpus = formats::read_corpora(&args.corpus)?;
    let counts = formats::unigram_counts(&corpus);
    let fallback = MockOracle::unigram_fallback(counts.iter().map(|(w, &c)| (w.as_str(), c)), args.top_k);
    let mock = MockOracle::default().with_fallback(fallback);
    formats::write_text(&args.mock_table, &formats::mock_table_to_json(&mock))?;
    Ok(mock)
}

/// Parses `argv` and runs the chosen subcommand; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Induce(a) => cmd_induce(a).map(|_| ()),
        Command::Evaluate(a) => cmd_evaluate(a, &mut out),
        Command::BaselineId(a) => cmd_baseline_id(a, &mut out),
        Command::RulebookInspect(a) => cmd_rulebook_inspect(a, &mut out),
        Command::MockOracleGen(a) => cmd_mock_oracle_gen(a).map(|_| ()),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Config(_)) {
                let name = match &cli.command {
                    Command::Induce(_) => "induce",
                    Command::Evaluate(_) => "evaluate",
                    Command::BaselineId(_) => "baseline-id",
                    Command::RulebookInspect(_) => "rulebook-inspect",
                    Command::MockOracleGen(_) => "mock-oracle-gen",
                };
                let mut cmd = Cli::command();
                if let Some(sub) = cmd.find_subcommand_mut(name) {
                    eprintln!("\n{}", sub.render_usage());
                }
            }
            e.exit_code()
        }
    }
}
