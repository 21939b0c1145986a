//! Command-line front end.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analytics::{
    classify_thread_topics, hardness_distribution, human_study_metrics, tag_agreement, thread_stats, HardnessLevel,
    JudgmentRecord,
};
use crate::datastore::{import_published, load_bundle, read_jsonl, save_bundle, DatasetBundle, ImportMapping, Manifest};
use crate::engine::{simulate_threads, OracleMode, SimulationParams};
use crate::eval::{evaluate_dataset, Anonymizer, EvalDataset, EvalParams, HttpAnonymizer, HttpAnonymizerConfig, RuleBasedAnonymizer};
use crate::gateway::{GenerationConfig, Gateway, HttpBackend, HttpBackendConfig, RunLog};
use crate::model::Attribute;
use crate::oracle::{aggregate_all, sanitize_against_ground_truth, tag_threads, LabelSource, ModelOracle};
use crate::profiles::{enrich_all, generate_profiles, ProfileBatchSpec};
use crate::review::{serve, ReviewConfig, ReviewState};

/// Everything a config file may set. Flags override it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub simulation: SimulationParams,
    pub backend: HttpBackendConfig,
    /// Backend for equivalence judgments and answer extraction; defaults to `backend`.
    pub judge: Option<HttpBackendConfig>,
    pub generation: GenerationConfig,
    pub parallelism: Option<usize>,
    /// JSONL file receiving every backend request and response.
    pub run_log: Option<PathBuf>,
    pub eval: EvalParams,
    pub anonymizer: HttpAnonymizerConfig,
    pub review: ReviewConfig,
    pub import: ImportMapping,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

#[derive(Debug, Parser)]
#[command(name = "paiforge", version, about = "Synthetic comment threads with attribute labels, and inference evaluation on them")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// Use the deterministic offline mock for every model call.
    #[arg(long, global = true)]
    pub mock: bool,
    /// Root seed for every sampled decision.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML run config.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// More log output (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsTable {
    Thread,
    Hardness,
    Agreement,
    Humanstudy,
    Topics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Profile,
    Comment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Human,
    Model,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Inline,
    PostHoc,
    Off,
}

fn parse_attribute(s: &str) -> Result<Attribute, String> {
    Attribute::normalize(s).ok_or_else(|| format!("unknown attribute `{s}`"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate synthetic profiles with writing styles into a new dataset.
    GenerateProfiles {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 40)]
        count: usize,
        /// Skip the writing-style pass.
        #[arg(long)]
        no_styles: bool,
    },
    /// Simulate comment threads over the dataset's profiles.
    Simulate {
        #[arg(long)]
        dataset: PathBuf,
        /// Target attribute(s), cycled over threads. Defaults to all.
        #[arg(long = "attribute", value_parser = parse_attribute)]
        attributes: Vec<Attribute>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        rounds: Option<u32>,
        /// Agents sampled into each thread.
        #[arg(long)]
        profiles: Option<usize>,
        #[arg(long, value_enum, default_value_t = OracleArg::Inline)]
        oracle: OracleArg,
    },
    /// Tag comments that carry no tags yet.
    Tag {
        #[arg(long)]
        dataset: PathBuf,
    },
    /// Aggregate comment tags into profile labels.
    Aggregate {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, value_enum, default_value_t = Source::Human)]
        source: Source,
        /// Keep labels that disagree with the profile's ground truth.
        #[arg(long)]
        no_sanitize: bool,
    },
    /// Run attribute inference against the aggregated labels.
    Evaluate {
        #[arg(long)]
        dataset: PathBuf,
        /// Model id sent to the backend.
        #[arg(long)]
        model: Option<String>,
        /// Mask entities in comments before inference.
        #[arg(long)]
        anonymized: bool,
        /// Write the JSON report here as well.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Descriptive statistics.
    Stats {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, value_enum, default_value_t = StatsTable::Thread)]
        table: StatsTable,
        #[arg(long, value_enum, default_value_t = Level::Profile)]
        level: Level,
        /// Judgment records (JSONL) for the human study table.
        #[arg(long)]
        judgments: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Import the published dataset into a bundle.
    Import {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// TOML field mapping; overrides the config's [import] section.
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Check a bundle's schema and referential integrity.
    Validate {
        #[arg(long)]
        dataset: PathBuf,
    },
    /// Serve the review API (and UI, if configured).
    ServeReview {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Static bearer token; also read from PAIFORGE_REVIEW_TOKEN.
        #[arg(long, env = "PAIFORGE_REVIEW_TOKEN")]
        token: Option<String>,
        #[arg(long)]
        ui: Option<PathBuf>,
        #[arg(long)]
        show_reasoning: bool,
    },
    /// generate-profiles, simulate, aggregate and stats in one go.
    Pipeline {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        profiles: usize,
        #[arg(long, default_value_t = 2)]
        threads: usize,
        #[arg(long)]
        rounds: Option<u32>,
        /// Also run the evaluation on the result.
        #[arg(long)]
        evaluate: bool,
    },
}

struct Ctx {
    mock: bool,
    seed: u64,
    config: RunConfig,
}

impl Ctx {
    fn gateway(&self, backend: &HttpBackendConfig, model: Option<&str>) -> Result<Gateway> {
        let gw = if self.mock {
            Gateway::mock().with_model(model.unwrap_or("mock"))
        } else {
            let b = HttpBackend::new(backend).context("building the chat backend")?;
            Gateway::new(Arc::new(b)).with_model(model.unwrap_or(&backend.model))
        };
        let mut gw = gw.with_generation(self.config.generation.clone());
        if let Some(p) = self.config.parallelism {
            gw = gw.with_parallelism(p);
        }
        if let Some(path) = &self.config.run_log {
            gw = gw.with_log(RunLog::open(path).with_context(|| format!("opening run log {}", path.display()))?);
        }
        Ok(gw)
    }

    fn model(&self) -> Result<Gateway> {
        self.gateway(&self.config.backend, None)
    }

    fn judge(&self) -> Result<Gateway> {
        let cfg = self.config.judge.as_ref().unwrap_or(&self.config.backend);
        self.gateway(cfg, None)
    }

    fn manifest(&self, generator: &str) -> Manifest {
        // Mock runs must be byte-reproducible, so they carry a fixed timestamp.
        let at = if self.mock { chrono::DateTime::UNIX_EPOCH } else { chrono::Utc::now() };
        Manifest::new(self.seed, generator, at)
    }

    fn params(&self) -> SimulationParams {
        SimulationParams { seed: self.seed, ..self.config.simulation.clone() }
    }
}

/// Parse `args` and run. Usage errors print help and yield exit code 2.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    init_logging(cli.verbose);
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match runtime.block_on(execute(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn init_logging(verbose: u8) {
    let default = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let filter = tracing_subscriber::EnvFilter::try_from_default_env()
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new(default));
    let _ = tracing_subscriber::fmt().with_env_filter(filter).with_writer(std::io::stderr).try_init();
}

pub async fn execute(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let seed = cli.seed.or(config.seed).unwrap_or(config.simulation.seed);
    let ctx = Ctx { mock: cli.mock, seed, config };
    match cli.command {
        Command::GenerateProfiles { out, count, no_styles } => {
            let mut bundle = DatasetBundle::new(ctx.manifest(""));
            generate_into(&ctx, &mut bundle, count, !no_styles).await?;
            save_bundle(&bundle, &out)?;
            println!("{} profiles written to {}", bundle.profiles.len(), out.display());
        }
        Command::Simulate { dataset, attributes, threads, rounds, profiles, oracle } => {
            let mut bundle = load_bundle(&dataset)?;
            let mut params = ctx.params();
            params.no_threads = threads.unwrap_or(params.no_threads);
            params.no_rounds = rounds.unwrap_or(params.no_rounds);
            params.no_profiles = profiles.unwrap_or(params.no_profiles);
            let mode = match oracle {
                OracleArg::Inline => OracleMode::Inline,
                OracleArg::PostHoc => OracleMode::PostHoc,
                OracleArg::Off => OracleMode::Off,
            };
            simulate_into(&ctx, &mut bundle, &params, &attributes, mode).await?;
            save_bundle(&bundle, &dataset)?;
            println!("{} threads, {} comments", bundle.threads.len(), bundle.comment_count());
        }
        Command::Tag { dataset } => {
            let mut bundle = load_bundle(&dataset)?;
            let stats = tag_threads(&mut bundle.threads, &ctx.model()?, ctx.seed).await;
            save_bundle(&bundle, &dataset)?;
            println!("tagged {} comments, {} failed", stats.tagged, stats.failed);
        }
        Command::Aggregate { dataset, source, no_sanitize } => {
            let mut bundle = load_bundle(&dataset)?;
            let source = match source {
                Source::Human => LabelSource::Human,
                Source::Model => LabelSource::Model,
            };
            aggregate_into(&mut bundle, source, !no_sanitize);
            save_bundle(&bundle, &dataset)?;
            let n: usize = bundle.labels.iter().map(|l| l.len()).sum();
            println!("{n} profile labels over {} profiles", bundle.labels.iter().filter(|l| !l.is_empty()).count());
        }
        Command::Evaluate { dataset, model, anonymized, out, format } => {
            let bundle = load_bundle(&dataset)?;
            let gw = ctx.gateway(&ctx.config.backend, model.as_deref())?;
            let text = evaluate_bundle(&ctx, &bundle, &gw, anonymized, out.as_deref(), format).await?;
            print!("{text}");
        }
        Command::Stats { dataset, table, level, judgments, format } => {
            let bundle = load_bundle(&dataset)?;
            print!("{}", stats(&ctx, &bundle, table, level, judgments.as_deref(), format).await?);
        }
        Command::Import { from, out, mapping } => {
            let mapping = match mapping {
                Some(p) => ImportMapping::from_toml(&std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?)?,
                None => ctx.config.import.clone(),
            };
            let (bundle, summary) = import_published(&from, &mapping)?;
            save_bundle(&bundle, &out)?;
            println!(
                "comments {}  threads {}  profiles {}  human labels {}  model labels {}",
                summary.comments, summary.threads, summary.profiles, summary.human_labels, summary.model_labels
            );
        }
        Command::Validate { dataset } => {
            let b = load_bundle(&dataset)?;
            println!(
                "ok: schema {}, {} profiles, {} threads, {} comments, {} decisions, {} label sets",
                b.manifest.schema_version,
                b.profiles.len(),
                b.threads.len(),
                b.comment_count(),
                b.decisions.len(),
                b.labels.len()
            );
        }
        Command::ServeReview { dataset, port, host, token, ui, show_reasoning } => {
            let state = ReviewState::load(&dataset)?;
            let mut cfg = ctx.config.review.clone();
            cfg.token = token.or(cfg.token);
            cfg.ui_dir = ui.or(cfg.ui_dir);
            cfg.show_reasoning |= show_reasoning;
            let addr = format!("{host}:{port}").parse().with_context(|| format!("bad address {host}:{port}"))?;
            serve(Some(state), cfg, addr).await?;
        }
        Command::Pipeline { out, profiles, threads, rounds, evaluate } => {
            let mut bundle = DatasetBundle::new(ctx.manifest(""));
            generate_into(&ctx, &mut bundle, profiles, true).await?;
            let mut params = ctx.params();
            params.no_threads = threads;
            params.no_rounds = rounds.unwrap_or(params.no_rounds);
            simulate_into(&ctx, &mut bundle, &params, &[], OracleMode::Inline).await?;
            // Without review decisions only model labels exist.
            let source = if bundle.decisions.is_empty() { LabelSource::Model } else { LabelSource::Human };
            aggregate_into(&mut bundle, source, true);
            save_bundle(&bundle, &out)?;
            print!("{}", thread_stats(&bundle.threads).to_text());
            if evaluate {
                let gw = ctx.model()?;
                print!("{}", evaluate_bundle(&ctx, &bundle, &gw, false, None, OutputFormat::Text).await?);
            }
        }
    }
    Ok(())
}

async fn generate_into(ctx: &Ctx, bundle: &mut DatasetBundle, count: usize, styles: bool) -> Result<()> {
    let gw = ctx.model()?;
    let mut profiles = generate_profiles(&ProfileBatchSpec::new(count, ctx.seed), &gw).await?;
    if styles {
        profiles = enrich_all(&profiles, &gw, ctx.seed).await?;
    }
    bundle.manifest.generator_model = generator_name(&gw);
    bundle.profiles = profiles;
    Ok(())
}

fn generator_name(gw: &Gateway) -> String {
    if gw.model_id().is_empty() {
        gw.backend_name().to_string()
    } else {
        gw.model_id().to_string()
    }
}

async fn simulate_into(
    ctx: &Ctx,
    bundle: &mut DatasetBundle,
    params: &SimulationParams,
    attributes: &[Attribute],
    mode: OracleMode,
) -> Result<()> {
    if bundle.profiles.is_empty() {
        bail!("dataset has no profiles; run generate-profiles first");
    }
    if !bundle.threads.is_empty() {
        tracing::warn!("replacing {} existing threads and their decisions and labels", bundle.threads.len());
    }
    let attrs = if attributes.is_empty() { Attribute::ALL.to_vec() } else { attributes.to_vec() };
    let gw = ctx.model()?;
    let oracle = ModelOracle::new(ctx.judge()?);
    let inline = (mode == OracleMode::Inline).then_some(&oracle as &dyn crate::engine::CommentOracle);
    let results = simulate_threads(&bundle.profiles, &attrs, params, inline, &gw).await?;
    let mut threads: Vec<_> = results.into_iter().map(|(t, _)| t).collect();
    if mode == OracleMode::PostHoc {
        tag_threads(&mut threads, &oracle_gateway(ctx)?, params.seed).await;
    }
    bundle.threads = threads;
    bundle.decisions.clear();
    bundle.labels.clear();
    if bundle.manifest.generator_model.is_empty() {
        bundle.manifest.generator_model = generator_name(&gw);
    }
    Ok(())
}

fn oracle_gateway(ctx: &Ctx) -> Result<Gateway> {
    ctx.judge()
}

fn aggregate_into(bundle: &mut DatasetBundle, source: LabelSource, sanitize: bool) {
    let (threads, failures) = bundle.resolved_threads();
    for (d, e) in &failures {
        tracing::warn!("decision on {} skipped: {e}", d.key());
    }
    let mut labels = aggregate_all(&threads, &bundle.profiles, source);
    if sanitize {
        labels = labels
            .iter()
            .zip(&bundle.profiles)
            .map(|(l, p)| sanitize_against_ground_truth(l, p, crate::eval::equivalent))
            .collect();
    }
    bundle.labels = labels;
}

async fn evaluate_bundle(
    ctx: &Ctx,
    bundle: &DatasetBundle,
    gw: &Gateway,
    anonymized: bool,
    out: Option<&Path>,
    format: OutputFormat,
) -> Result<String> {
    if bundle.labels.iter().all(|l| l.is_empty()) {
        bail!("dataset has no profile labels; run aggregate first");
    }
    let (threads, _) = bundle.resolved_threads();
    let anonymizer: Option<Arc<dyn Anonymizer>> = match (anonymized, ctx.mock || ctx.config.anonymizer.endpoint.is_empty()) {
        (false, _) => None,
        (true, true) => Some(Arc::new(RuleBasedAnonymizer)),
        (true, false) => Some(Arc::new(HttpAnonymizer::new(&ctx.config.anonymizer).map_err(anyhow::Error::msg)?)),
    };
    let params = EvalParams { seed: ctx.seed, ..ctx.config.eval.clone() };
    let (report, _) = evaluate_dataset(
        EvalDataset { threads: &threads, labels: &bundle.labels },
        gw,
        &ctx.judge()?,
        anonymizer,
        &params,
    )
    .await?;
    let json = serde_json::to_string_pretty(&report.to_json())?;
    if let Some(path) = out {
        std::fs::write(path, format!("{json}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(match format {
        OutputFormat::Json => format!("{json}\n"),
        OutputFormat::Text | OutputFormat::Csv => report.to_text(),
    })
}

async fn stats(
    ctx: &Ctx,
    bundle: &DatasetBundle,
    table: StatsTable,
    level: Level,
    judgments: Option<&Path>,
    format: OutputFormat,
) -> Result<String> {
    let (threads, _) = bundle.resolved_threads();
    let json = |v: serde_json::Value| format!("{}\n", serde_json::to_string_pretty(&v).unwrap_or_default());
    Ok(match table {
        StatsTable::Thread => {
            let s = thread_stats(&threads);
            match format {
                OutputFormat::Text => s.to_text(),
                OutputFormat::Csv => s.to_csv(),
                OutputFormat::Json => json(serde_json::to_value(s)?),
            }
        }
        StatsTable::Hardness => {
            let level = match level {
                Level::Profile => HardnessLevel::Profile,
                Level::Comment => HardnessLevel::Comment,
            };
            let t = hardness_distribution(level, &threads, &bundle.labels);
            match format {
                OutputFormat::Text => t.to_text(),
                OutputFormat::Csv => t.to_csv(),
                OutputFormat::Json => json(serde_json::to_value(t)?),
            }
        }
        StatsTable::Agreement => {
            let m = tag_agreement(&threads);
            match format {
                OutputFormat::Text => m.to_text(),
                OutputFormat::Csv => format!(
                    "true_negative,false_negative,false_positive,true_positive,fnr,fpr\n{},{},{},{},{:.4},{:.4}\n",
                    m.true_negative, m.false_negative, m.false_positive, m.true_positive, m.fnr(), m.fpr()
                ),
                OutputFormat::Json => json(serde_json::json!({"matrix": m, "fnr": m.fnr(), "fpr": m.fpr()})),
            }
        }
        StatsTable::Humanstudy => {
            let path = judgments.context("--judgments is required for the human study table")?;
            let records: Vec<JudgmentRecord> = read_jsonl(path)?;
            let m = human_study_metrics(&records);
            match format {
                OutputFormat::Json => json(serde_json::to_value(&m)?),
                _ => format!(
                    "accuracy {:.1}%  FPR {:.1}%  FNR {:.1}%  pairwise agreement {:.1}%  raters {}\n",
                    100.0 * m.accuracy,
                    100.0 * m.fpr,
                    100.0 * m.fnr,
                    100.0 * m.pairwise_agreement,
                    m.per_rater_accuracy.len()
                ),
            }
        }
        StatsTable::Topics => {
            let t = classify_thread_topics(&threads, &ctx.judge()?, ctx.seed).await;
            match format {
                OutputFormat::Json => json(serde_json::to_value(&t)?),
                _ => {
                    let mut s = format!("unique subreddits {}  skipped threads {}\n", t.unique_subreddits, t.skipped.len());
                    for (id, subs) in &t.per_thread {
                        s.push_str(&format!("{id}: {}\n", subs.join(", ")));
                    }
                    s
                }
            }
        }
    })
}
