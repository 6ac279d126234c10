//! Command-line front end: ingest -> analyze -> report over the hep-th
//! citation dataset, plus a meme frequency ranking and the propagation
//! oracle self-check.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use memetrace::analysis;
use memetrace::config::{ConfigError, RunConfig};
use memetrace::corpus::{self, Corpus};
use memetrace::gender::{load_name_table, NameGenderTable};
use memetrace::meme::{self, FrequencyMode, MemeLexicon, StopwordList};
use memetrace::oracle::{run_oracle_check, OracleOptions, OracleOutcome};
use memetrace::report;

const EXIT_INPUT: u8 = 2;
const EXIT_SNAPSHOT_EXISTS: u8 = 3;
const EXIT_CONFIG: u8 = 4;
const EXIT_INSUFFICIENT_DATA: u8 = 5;

#[derive(Parser)]
#[command(
    name = "memetrace",
    about = "Meme propagation analysis over the hep-th citation network",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct CommonOpts {
    /// Config file with `key = value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Abstracts directory, .tar.gz archive, or single .abs file.
    #[arg(long)]
    abstracts: Option<PathBuf>,
    /// Citation edge list file.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Corpus snapshot directory (written by `ingest`).
    #[arg(long)]
    snapshot: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Clone, Default)]
struct AnalysisOpts {
    /// Given-name gender table (name, proportion_female, count).
    #[arg(long)]
    name_table: Option<PathBuf>,
    /// Meme lexicon file, one meme per line (built-in list by default).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Output directory for the report bundle.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Gender classification threshold in (0.5, 1].
    #[arg(long)]
    gender_threshold: Option<f64>,
    /// Minimum observations for a name to classify.
    #[arg(long)]
    gender_min_count: Option<u64>,
    /// Relative-frequency cut for meme selection.
    #[arg(long)]
    meme_threshold: Option<f64>,
    /// Also scan titles for meme carriers.
    #[arg(long)]
    include_titles: bool,
    /// Match self-citations on any shared author, not just the first.
    #[arg(long)]
    self_citation_any_author: bool,
    /// Drop universe papers with no admissible out-edge from propagation
    /// denominators.
    #[arg(long)]
    restrict_universe: bool,
    /// Also write the per-author table (id, name, counts, gender) here.
    #[arg(long)]
    export_authors: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the raw dataset and write a corpus snapshot.
    Ingest {
        #[command(flatten)]
        common: CommonOpts,
        /// Overwrite an existing snapshot.
        #[arg(long)]
        force: bool,
    },
    /// Run the full analysis and write the report bundle.
    Analyze {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        analysis: AnalysisOpts,
    },
    /// Print the stopword-filtered word frequency ranking.
    Memes {
        #[command(flatten)]
        common: CommonOpts,
        /// Stopword file, one token per line (built-in list by default).
        #[arg(long)]
        stopwords: Option<PathBuf>,
        /// papers | occurrences
        #[arg(long, default_value = "papers")]
        mode: String,
        /// Number of rows to print.
        #[arg(long, default_value_t = 40)]
        top: usize,
        /// Write the ranking here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-emit the report bundle from an existing snapshot.
    Report {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        analysis: AnalysisOpts,
    },
    /// Compare the propagation counters against the brute-force oracle on
    /// random graphs.
    OracleCheck {
        /// RNG seed for instance generation.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random instances.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(error_exit_code(&error))
        }
    }
}

fn error_exit_code(error: &anyhow::Error) -> u8 {
    if error.downcast_ref::<ConfigError>().is_some() {
        EXIT_CONFIG
    } else {
        EXIT_INPUT
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Ingest { common, force } => cmd_ingest(common, force),
        Command::Analyze { common, analysis } => cmd_analyze(common, analysis, false),
        Command::Report { common, analysis } => cmd_analyze(common, analysis, true),
        Command::Memes { common, stopwords, mode, top, out } => {
            cmd_memes(common, stopwords, &mode, top, out)
        }
        Command::OracleCheck { seed, trials } => cmd_oracle_check(seed, trials),
    }
}

/// Assembles the effective config: file, then env, then flags.
fn effective_config(common: &CommonOpts, analysis: Option<&AnalysisOpts>) -> anyhow::Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    config.apply_env();
    if let Some(v) = &common.abstracts {
        config.abstracts = Some(v.clone());
    }
    if let Some(v) = &common.edges {
        config.edges = Some(v.clone());
    }
    if let Some(v) = &common.snapshot {
        config.snapshot = Some(v.clone());
    }
    if let Some(v) = common.threads {
        config.threads = v;
    }
    if let Some(opts) = analysis {
        if let Some(v) = &opts.name_table {
            config.name_table = Some(v.clone());
        }
        if let Some(v) = &opts.lexicon {
            config.lexicon = Some(v.clone());
        }
        if let Some(v) = &opts.output_dir {
            config.output_dir = v.clone();
        }
        if let Some(v) = opts.gender_threshold {
            config.gender_threshold = v;
        }
        if let Some(v) = opts.gender_min_count {
            config.gender_min_count = v;
        }
        if let Some(v) = opts.meme_threshold {
            config.meme_threshold = v;
        }
        if opts.include_titles {
            config.carrier_include_titles = true;
        }
        if opts.self_citation_any_author {
            config.self_citation_any_author = true;
        }
        if opts.restrict_universe {
            config.restrict_universe_to_citing = true;
        }
    }
    config.validate()?;
    Ok(config)
}

fn thread_pool(threads: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?)
}

/// Loads the corpus from a snapshot if configured, else from raw paths.
fn load_corpus(config: &RunConfig, snapshot_only: bool) -> anyhow::Result<Corpus> {
    if let Some(snapshot) = &config.snapshot {
        if snapshot.join(corpus::SNAPSHOT_PAPERS_FILE).exists() || snapshot_only {
            return Ok(corpus::load_snapshot(snapshot)?);
        }
    }
    if snapshot_only {
        anyhow::bail!("report requires --snapshot pointing at an ingested corpus");
    }
    match (&config.abstracts, &config.edges) {
        (Some(abstracts), Some(edges)) => Ok(corpus::ingest(abstracts, edges)?),
        _ => anyhow::bail!(
            "no input: pass --snapshot, or both --abstracts and --edges (or set them in the config file)"
        ),
    }
}

fn load_lexicon(config: &RunConfig) -> anyhow::Result<MemeLexicon> {
    Ok(match &config.lexicon {
        Some(path) => MemeLexicon::load(path)?,
        None => MemeLexicon::parse(memetrace::DEFAULT_LEXICON)?,
    })
}

fn load_table(config: &RunConfig) -> anyhow::Result<NameGenderTable> {
    let Some(path) = &config.name_table else {
        anyhow::bail!("a gender name table is required: pass --name-table (name, proportion_female, count)");
    };
    let (table, skipped) = load_name_table(path)?;
    if skipped > 0 {
        eprintln!("name table: skipped {skipped} malformed rows");
    }
    Ok(table)
}

fn cmd_ingest(common: CommonOpts, force: bool) -> anyhow::Result<ExitCode> {
    let config = effective_config(&common, None)?;
    let Some(snapshot) = config.snapshot.clone() else {
        anyhow::bail!("ingest needs --snapshot DIR to write the parsed corpus into");
    };
    if snapshot.join(corpus::SNAPSHOT_PAPERS_FILE).exists() && !force {
        eprintln!(
            "snapshot already exists at {} (pass --force to overwrite)",
            snapshot.display()
        );
        return Ok(ExitCode::from(EXIT_SNAPSHOT_EXISTS));
    }
    let (Some(abstracts), Some(edges)) = (config.abstracts.clone(), config.edges.clone()) else {
        anyhow::bail!("ingest needs both --abstracts and --edges");
    };
    let pool = thread_pool(config.threads)?;
    let corpus = pool.install(|| corpus::ingest(&abstracts, &edges))?;
    corpus::write_snapshot(&corpus, &snapshot)?;
    println!("{}", corpus.ingest_report);
    println!("snapshot written to {}", snapshot.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(
    common: CommonOpts,
    analysis_opts: AnalysisOpts,
    snapshot_only: bool,
) -> anyhow::Result<ExitCode> {
    let config = effective_config(&common, Some(&analysis_opts))?;
    let corpus = load_corpus(&config, snapshot_only)?;
    let table = load_table(&config)?;
    let lexicon = load_lexicon(&config)?;
    let pool = thread_pool(config.threads)?;
    let (outputs, artifacts) =
        pool.install(|| analysis::run(&corpus, &table, &lexicon, &config.analysis_config()))?;

    report::write_bundle(&config.output_dir, &outputs, &corpus.ingest_report)?;
    if let Some(path) = &analysis_opts.export_authors {
        std::fs::write(path, report::render_author_table(&artifacts.authors, &artifacts.genders))?;
    }
    print!("{}", report::render_summary(&outputs, &corpus.ingest_report));
    println!("\nreport bundle written to {}", config.output_dir.display());

    // an empty selection is a successful (if empty) analysis; insufficient
    // data on a nonempty table is the partial-result condition
    let meme_data_missing = !outputs.selected_memes.is_empty()
        && (outputs.corr_gendered.is_insufficient()
            || outputs.corr_female.is_insufficient()
            || outputs.corr_male.is_insufficient());
    if outputs.selected_memes.is_empty() {
        eprintln!("warning: no meme passed the {} frequency threshold", config.meme_threshold);
    }
    if meme_data_missing || outputs.author_correlations.is_none() {
        eprintln!("warning: some correlations had insufficient data (bundle still written)");
        return Ok(ExitCode::from(EXIT_INSUFFICIENT_DATA));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_memes(
    common: CommonOpts,
    stopwords: Option<PathBuf>,
    mode: &str,
    top: usize,
    out: Option<PathBuf>,
) -> anyhow::Result<ExitCode> {
    let mut config = effective_config(&common, None)?;
    if let Some(path) = stopwords {
        config.stopwords = Some(path);
    }
    let mode = match mode {
        "papers" => FrequencyMode::Papers,
        "occurrences" => FrequencyMode::Occurrences,
        other => {
            return Err(
                ConfigError::Value(format!("mode must be papers|occurrences, got {other:?}")).into()
            )
        }
    };
    let corpus = load_corpus(&config, false)?;
    let stopwords = match &config.stopwords {
        Some(path) => StopwordList::load(path)?,
        None => StopwordList::parse(memetrace::DEFAULT_STOPWORDS),
    };
    let pool = thread_pool(config.threads)?;
    let universe = corpus.all_ids();
    let ranking =
        pool.install(|| meme::word_frequency_ranking(&corpus, &universe, &stopwords, mode));
    let rendered =
        report::render_frequency_ranking(&ranking, universe.len() as u64, mode, top);
    match out {
        Some(path) => std::fs::write(&path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle_check(seed: u64, trials: u64) -> anyhow::Result<ExitCode> {
    match run_oracle_check(seed, trials, OracleOptions::default()) {
        OracleOutcome::Pass { trials, comparisons } => {
            println!("oracle-check: PASS ({trials} trials, {comparisons} comparisons)");
            Ok(ExitCode::SUCCESS)
        }
        OracleOutcome::Vacuous => {
            println!("oracle-check: PASS (vacuous, zero trials requested)");
            Ok(ExitCode::SUCCESS)
        }
        OracleOutcome::Mismatch { trial, fixture } => {
            eprintln!("oracle-check: FAIL at trial {trial}");
            eprintln!("{fixture}");
            Ok(ExitCode::FAILURE)
        }
    }
}
