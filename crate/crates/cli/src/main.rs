mod config;

use std::fmt;
use std::fs::OpenOptions;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;

use ontocq_core::analysis::{
    build_report, classify_all, judgment_template, sample_uniform, verdict_counts, write_report,
    write_verdicts, AnalysisError, OntologyAxiomIndex, ReportOptions,
};
use ontocq_core::harness::{check_integrity, load_records, plan_jobs, run_all, HarnessError};
use ontocq_core::kb::{ingest, KbError, KnowledgeSnapshot};
use ontocq_core::patterns::{
    build_corpus, emit_problem_files, read_manifest, write_manifest, PatternContext, PatternError,
    Problem,
};
use ontocq_core::projection::{project_snapshot, ProjectedMapping, ProjectionError};

use config::RunConfig;

const SNAPSHOT: &str = "snapshot.json";
const PROJECTED: &str = "projected.json";
const MANIFEST: &str = "manifest.jsonl";
const PROBLEMS: &str = "problems";
const RECORDS: &str = "records.jsonl";
const VERDICTS: &str = "verdicts.jsonl";
const REPORT: &str = "report";
const SAMPLE: &str = "sample";

#[derive(Parser)]
#[command(name = "ontocq", version = version_string(), about = "Competency questions for first-order ontologies, checked with theorem provers")]
struct Cli {
    /// Pipeline configuration (TOML).
    #[arg(short, long, default_value = "ontocq.toml", global = true)]
    config: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read the lexical database, mappings and taxonomy into a snapshot.
    Ingest,
    /// Lift mappings onto core concepts.
    Project,
    /// Instantiate the question patterns into a problem manifest.
    Generate,
    /// Write one TPTP file per conjecture.
    Emit,
    /// Run the configured provers on every conjecture lacking a record.
    Run {
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Classify every problem from the record store.
    Classify,
    /// Render the report tables.
    Report,
    /// Draw a uniform audit sample with a judgment template.
    Sample {
        #[arg(long)]
        fraction: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn version_string() -> &'static str {
    concat!(env!("CARGO_PKG_VERSION"), " (format ", "1", ")")
}

#[derive(Debug)]
enum Failure {
    Config(String),
    MissingArtifact { path: PathBuf, stage: &'static str },
    Input(String),
    Integrity(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::MissingArtifact { .. } => 3,
            Failure::Input(_) => 4,
            Failure::Integrity(_) => 5,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::MissingArtifact { path, stage } => {
                write!(
                    f,
                    "missing artifact {}: run `ontocq {stage}` first",
                    path.display()
                )
            }
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Integrity(m) => write!(f, "integrity error: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<KbError> for Failure {
    fn from(e: KbError) -> Self {
        match e {
            KbError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<ProjectionError> for Failure {
    fn from(e: ProjectionError) -> Self {
        match e {
            ProjectionError::ComplementOnNonCore { .. } => Failure::Integrity(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<PatternError> for Failure {
    fn from(e: PatternError) -> Self {
        match e {
            PatternError::Io { .. } => Failure::Io(e.to_string()),
            PatternError::Manifest { .. } => Failure::Input(e.to_string()),
            _ => Failure::Integrity(e.to_string()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config { .. } => Failure::Config(e.to_string()),
            HarnessError::Io { .. } => Failure::Io(e.to_string()),
            HarnessError::Record { .. } => Failure::Input(e.to_string()),
            HarnessError::Duplicate { .. } | HarnessError::UnknownProblem(_) => {
                Failure::Integrity(e.to_string())
            }
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::UnknownAxiom { .. } | AnalysisError::DuplicateAxiom(_) => {
                Failure::Integrity(e.to_string())
            }
            AnalysisError::Ontology(_) => Failure::Input(e.to_string()),
            AnalysisError::Io { .. } | AnalysisError::Csv(_) => Failure::Io(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn require(dir: &Path, name: &str, stage: &'static str) -> Result<PathBuf> {
    let path = dir.join(name);
    if path.exists() {
        Ok(path)
    } else {
        Err(Failure::MissingArtifact { path, stage })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn load_snapshot(out: &Path) -> Result<KnowledgeSnapshot> {
    Ok(KnowledgeSnapshot::from_json(&read(&require(
        out, SNAPSHOT, "ingest",
    )?)?)?)
}

fn load_projected(out: &Path) -> Result<ProjectedMapping> {
    Ok(ProjectedMapping::from_json(&read(&require(
        out, PROJECTED, "project",
    )?)?)?)
}

fn load_manifest(out: &Path) -> Result<Vec<Problem>> {
    Ok(read_manifest(&read(&require(out, MANIFEST, "generate")?)?)?)
}

fn ontology_file(cfg: &RunConfig) -> Result<&Path> {
    cfg.inputs
        .ontology_file
        .as_deref()
        .ok_or_else(|| Failure::Config("inputs.ontology_file is not set".into()))
}

fn cmd_ingest(cfg: &RunConfig) -> Result<()> {
    let snap = ingest(&cfg.ingest_inputs())?;
    for w in &snap.report.warnings {
        log::warn!("{w}");
    }
    let path = cfg.output_dir.join(SNAPSHOT);
    write(&path, &snap.to_json()?)?;
    info!(
        "{} synsets, {} mapped synsets",
        snap.synsets.len(),
        snap.mapping.len()
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_project(cfg: &RunConfig) -> Result<()> {
    let snap = load_snapshot(&cfg.output_dir)?;
    let projected = project_snapshot(&snap)?;
    let path = cfg.output_dir.join(PROJECTED);
    write(&path, &projected.to_json())?;
    let stats: String = projected
        .stats
        .rows()
        .into_iter()
        .map(|(k, v)| format!("{k} {v}\n"))
        .collect();
    write(&cfg.output_dir.join("projection_stats.txt"), &stats)?;
    print!("{stats}");
    Ok(())
}

fn cmd_generate(cfg: &RunConfig) -> Result<()> {
    let snap = load_snapshot(&cfg.output_dir)?;
    let projected = load_projected(&cfg.output_dir)?;
    let ctx = PatternContext {
        snapshot: &snap,
        projected: &projected,
        options: &cfg.statement,
    };
    let corpus = build_corpus(&ctx)?;
    write(
        &cfg.output_dir.join(MANIFEST),
        &write_manifest(&corpus.problems),
    )?;
    let json =
        serde_json::to_string_pretty(&corpus.report).map_err(|e| Failure::Io(e.to_string()))?;
    write(&cfg.output_dir.join("generation_report.json"), &json)?;
    let text = corpus.report.render_text();
    write(&cfg.output_dir.join("generation_report.txt"), &text)?;
    print!("{text}");
    Ok(())
}

fn cmd_emit(cfg: &RunConfig) -> Result<()> {
    let problems = load_manifest(&cfg.output_dir)?;
    let include = cfg
        .ontology_include()
        .ok_or_else(|| Failure::Config("inputs.ontology_file is not set".into()))?;
    let dir = cfg.output_dir.join(PROBLEMS);
    let written = emit_problem_files(&problems, &include, &cfg.symbol_map, &dir)?;
    println!("wrote {} problem files to {}", written.len(), dir.display());
    Ok(())
}

fn cmd_run(cfg: &RunConfig, jobs: usize) -> Result<()> {
    if cfg.provers.is_empty() {
        return Err(Failure::Config("no provers configured".into()));
    }
    let problems = load_manifest(&cfg.output_dir)?;
    let problem_dir = require(&cfg.output_dir, PROBLEMS, "emit")?;
    let ontology = ontology_file(cfg)?.to_string_lossy().into_owned();
    let store = cfg.output_dir.join(RECORDS);
    let existing = load_records(&store)?;
    check_integrity(&existing, &problems)?;
    let plan = plan_jobs(&problems, &cfg.provers, &existing, &problem_dir);
    for j in &plan {
        if !j.problem_file.exists() {
            return Err(Failure::MissingArtifact {
                path: j.problem_file.clone(),
                stage: "emit",
            });
        }
    }
    info!(
        "{} jobs planned, {} records present",
        plan.len(),
        existing.len()
    );
    let mut sink = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&store)
        .map_err(|e| io_err(&store, e))?;
    let done = run_all(&plan, &cfg.provers, &ontology, jobs, &mut sink)?;
    println!("{} records appended to {}", done.len(), store.display());
    Ok(())
}

fn load_checked_records(
    cfg: &RunConfig,
    problems: &[Problem],
) -> Result<Vec<ontocq_core::harness::RunRecord>> {
    let records = load_records(&cfg.output_dir.join(RECORDS))?;
    check_integrity(&records, problems)?;
    Ok(records)
}

fn cmd_classify(cfg: &RunConfig) -> Result<()> {
    let problems = load_manifest(&cfg.output_dir)?;
    let records = load_checked_records(cfg, &problems)?;
    let verdicts = classify_all(&problems, &records);
    write(&cfg.output_dir.join(VERDICTS), &write_verdicts(&verdicts))?;
    for (v, n) in verdict_counts(&verdicts) {
        println!("{v:?} {n}");
    }
    Ok(())
}

fn cmd_report(cfg: &RunConfig) -> Result<()> {
    let problems = load_manifest(&cfg.output_dir)?;
    let records = load_checked_records(cfg, &problems)?;
    let index = match &cfg.inputs.ontology_file {
        Some(p) => Some(OntologyAxiomIndex::from_file(p)?),
        None => None,
    };
    let opts = ReportOptions {
        efficiency_mode: cfg.report.efficiency_mode,
        provers: cfg.provers.iter().map(|p| p.id.clone()).collect(),
    };
    let report = build_report(&problems, &records, index.as_ref(), &opts)?;
    let dir = cfg.output_dir.join(REPORT);
    write_report(&report, &dir)?;
    write(
        &cfg.output_dir.join(VERDICTS),
        &write_verdicts(&report.verdicts),
    )?;
    print!("{}", report.render_text());
    Ok(())
}

fn cmd_sample(cfg: &RunConfig, fraction: f64, seed: Option<u64>) -> Result<()> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Failure::Config(format!(
            "fraction {fraction} outside [0, 1]"
        )));
    }
    let problems = load_manifest(&cfg.output_dir)?;
    let sample = sample_uniform(&problems, fraction, seed.unwrap_or(cfg.seed));
    let dir = cfg.output_dir.join(SAMPLE);
    write(&dir.join("sample.jsonl"), &write_manifest(&sample))?;
    let template = judgment_template(&sample).map_err(|e| Failure::Io(e.to_string()))?;
    write(&dir.join("judgments.csv"), &template)?;
    println!(
        "sampled {} of {} problems into {}",
        sample.len(),
        problems.len(),
        dir.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = RunConfig::load(&cli.config).map_err(Failure::Config)?;
    match cli.command {
        Command::Ingest => cmd_ingest(&cfg),
        Command::Project => cmd_project(&cfg),
        Command::Generate => cmd_generate(&cfg),
        Command::Emit => cmd_emit(&cfg),
        Command::Run { jobs } => cmd_run(&cfg, jobs),
        Command::Classify => cmd_classify(&cfg),
        Command::Report => cmd_report(&cfg),
        Command::Sample { fraction, seed } => cmd_sample(&cfg, fraction, seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ontocq: {e}");
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_names_format() {
        assert!(version_string().ends_with(&format!("(format {})", ontocq_core::FORMAT_VERSION)));
        assert!(version_string().starts_with(env!("CARGO_PKG_VERSION")));
    }
}
