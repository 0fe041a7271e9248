//! Command-line entry point: `eval`, `condense`, and `gains` subcommands.
//!
//! Exit codes: 0 on success, 1 when a request or file fails validation,
//! 2 when a file cannot be read. Reports go to stdout; warnings and counts
//! go to stderr.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gradeval::driver::{self, DriverParams, EvalInputs, EvalOptions, R0Policy};
use gradeval::formats;
use gradeval::measures;
use gradeval_core::corpus::IntentSet;
use gradeval_core::gain::{unanimity_upgrade_scores, GainSpec, DEFAULT_UNANIMITY_RATE};

#[derive(Parser)]
#[command(
    name = "gradeval",
    version,
    about = "Graded-relevance evaluation of ranked retrieval runs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a run against judgments; print per-topic values and means.
    Eval(EvalArgs),
    /// Drop unjudged documents from a run, preserving order.
    Condense(CondenseArgs),
    /// Print the per-level gain table, plus per-document upgraded gains
    /// when assessor labels are supplied.
    Gains(GainsArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Graded judgments: `topic intent doc level` (intent 0 = topic level).
    #[arg(long)]
    qrels: PathBuf,
    /// Run in six-column format, optional seventh vertical column.
    #[arg(long)]
    run: PathBuf,
    /// Intent declarations: `topic intent probability [inf|nav]`.
    #[arg(long)]
    intents: Option<PathBuf>,
    /// Vertical probabilities: `topic intent vertical probability`.
    /// Requires --intents.
    #[arg(long)]
    verticals: Option<PathBuf>,
    /// Subtopic-to-intent mapping: `topic subtopic intent`.
    #[arg(long)]
    submap: Option<PathBuf>,
    /// Equivalence classes: `topic class doc`.
    #[arg(long)]
    classes: Option<PathBuf>,
    /// Gain scheme: linear, quadratic, or `level:gain` pairs like 0:0,1:1,2:3.
    #[arg(long, default_value = "linear")]
    gains: String,
    /// Measures to compute, e.g. `ap q@10 d#-ndcg@10`.
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    measures: Vec<String>,
    /// Cutoffs applied to every measure requested without `@N`.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    cutoffs: Vec<usize>,
    /// Patience weight in the blended ratio.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Intent-recall weight in the sharp diversity blend.
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// First-level weight in the hierarchy blend.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Diversity weight in the vertical-aware blend.
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Logarithm base for the original discounted-gain measures.
    #[arg(long, default_value_t = 2.0)]
    log_base: f64,
    /// Base of the exponential stop probability.
    #[arg(long, default_value_t = 2.0)]
    err_base: f64,
    /// Gain awarded to an embedded vertical entry on every intent.
    #[arg(long, default_value_t = 2.0)]
    vertical_gain: f64,
    /// Drop unjudged documents from every ranking before scoring.
    #[arg(long)]
    condensed: bool,
    /// Undefined values: report as zero, or exclude from rows and means.
    #[arg(long, default_value = "zero", value_parser = parse_policy)]
    r0_policy: R0Policy,
    /// Do not zero-fill judged topics that the run skipped.
    #[arg(long)]
    run_topics_only: bool,
}

#[derive(Args)]
struct CondenseArgs {
    /// Graded judgments deciding which documents are kept.
    #[arg(long)]
    qrels: PathBuf,
    /// Run to condense.
    #[arg(long)]
    run: PathBuf,
}

#[derive(Args)]
struct GainsArgs {
    /// Gain scheme: linear, quadratic, or `level:gain` pairs.
    #[arg(long, default_value = "linear")]
    gains: String,
    /// Judgments that size the level range of the preset schemes.
    #[arg(long)]
    qrels: Option<PathBuf>,
    /// Per-assessor scores, one `topic doc score...` line per document.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Agreement bonus rate per assessor.
    #[arg(long, default_value_t = DEFAULT_UNANIMITY_RATE)]
    unanimity_p: f64,
    /// Largest possible score spread; defaults to the highest label score.
    #[arg(long)]
    dmax: Option<f64>,
}

fn parse_policy(s: &str) -> Result<R0Policy, String> {
    s.parse()
}

enum AppError {
    /// A file could not be read.
    Io(PathBuf, std::io::Error),
    /// The request or a file's content is unusable.
    Invalid(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let usage = !matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if usage {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Eval(args) => run_eval(args),
        Command::Condense(args) => run_condense(args),
        Command::Gains(args) => run_gains(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path).map_err(|e| AppError::Io(path.to_owned(), e))
}

/// Prefixes content errors with the file they came from.
fn in_file<T>(path: &Path, parsed: Result<T, formats::FormatError>) -> Result<T, AppError> {
    parsed.map_err(|e| AppError::Invalid(format!("{}: {e}", path.display())))
}

fn run_eval(args: EvalArgs) -> Result<(), AppError> {
    let specs = measures::expand(&args.measures, &args.cutoffs).map_err(AppError::Invalid)?;
    let gains = GainSpec::parse(&args.gains).map_err(|e| AppError::Invalid(e.to_string()))?;

    let qrels = in_file(&args.qrels, formats::parse_qrels(&read(&args.qrels)?))?;
    let (run, warnings) = in_file(&args.run, formats::parse_run(&read(&args.run)?))?;
    for w in &warnings {
        eprintln!("warning: {}: {w}", args.run.display());
    }

    let intents: Option<IntentSet> = match &args.intents {
        None => {
            if args.verticals.is_some() {
                return Err(AppError::Invalid(
                    "--verticals needs --intents to attach the probabilities to".into(),
                ));
            }
            None
        }
        Some(path) => {
            let mut set = in_file(path, formats::parse_intents(&read(path)?))?;
            if let Some(vpath) = &args.verticals {
                in_file(vpath, formats::parse_verticals(&mut set, &read(vpath)?))?;
            }
            Some(set)
        }
    };
    let classes = match &args.classes {
        None => None,
        Some(path) => Some(in_file(path, formats::parse_classes(&read(path)?))?),
    };
    let submap = match &args.submap {
        None => None,
        Some(path) => Some(in_file(path, formats::parse_submap(&read(path)?))?),
    };

    let options = EvalOptions {
        measures: specs,
        gains,
        params: DriverParams {
            beta: args.beta,
            gamma: args.gamma,
            alpha: args.alpha,
            lambda: args.lambda,
            log_base: args.log_base,
            err_base: args.err_base,
            vertical_gain: args.vertical_gain,
        },
        condensed: args.condensed,
        r0_policy: args.r0_policy,
        run_topics_only: args.run_topics_only,
    };
    let inputs = EvalInputs {
        qrels: &qrels,
        run: &run,
        intents: intents.as_ref(),
        classes: classes.as_ref(),
        submap: submap.as_ref(),
    };
    let report =
        driver::evaluate(&inputs, &options).map_err(|e| AppError::Invalid(e.to_string()))?;

    print!("{}", report.render());

    if run.is_empty() {
        eprintln!("warning: the run has no topics; 0 topics evaluated");
    }
    if report.run_only > 0 {
        eprintln!(
            "warning: {} run topic(s) have no judgments",
            report.run_only
        );
    }
    if report.qrels_only > 0 {
        eprintln!(
            "note: {} judged topic(s) missing from the run were scored 0",
            report.qrels_only
        );
    }
    if report.undefined > 0 {
        let action = match args.r0_policy {
            R0Policy::Zero => "reported as 0",
            R0Policy::Exclude => "left out of rows and means",
        };
        eprintln!(
            "note: {} undefined measure value(s) {action}",
            report.undefined
        );
    }
    Ok(())
}

fn run_condense(args: CondenseArgs) -> Result<(), AppError> {
    let qrels = in_file(&args.qrels, formats::parse_qrels(&read(&args.qrels)?))?;
    let (run, warnings) = in_file(&args.run, formats::parse_run(&read(&args.run)?))?;
    for w in &warnings {
        eprintln!("warning: {}: {w}", args.run.display());
    }
    let outcome =
        driver::condense_run(&run, &qrels).map_err(|e| AppError::Invalid(e.to_string()))?;
    print!("{}", formats::serialize_run(&outcome.run));
    eprintln!(
        "note: removed {} unjudged entr{}",
        outcome.removed,
        if outcome.removed == 1 { "y" } else { "ies" }
    );
    for topic in &outcome.emptied {
        eprintln!("warning: topic {topic} has no judged documents left");
    }
    Ok(())
}

fn run_gains(args: GainsArgs) -> Result<(), AppError> {
    let spec = GainSpec::parse(&args.gains).map_err(|e| AppError::Invalid(e.to_string()))?;
    let max_level = match (&spec, &args.qrels) {
        (GainSpec::Table(_), _) => 0,
        (_, Some(path)) => in_file(path, formats::parse_qrels(&read(path)?))?.max_level(),
        (_, None) => {
            return Err(AppError::Invalid(
                "preset gain schemes need --qrels to size the level range".into(),
            ))
        }
    };
    let scheme = spec
        .resolve(max_level)
        .map_err(|e| AppError::Invalid(e.to_string()))?;

    let mut out = String::new();
    for (level, gain) in scheme.gains().iter().enumerate() {
        let _ = writeln!(out, "L{level}\t{gain:.4}");
    }

    if let Some(path) = &args.labels {
        let labels = in_file(path, formats::parse_labels(&read(path)?))?;
        let dmax = args.dmax.or_else(|| labels.max_score()).unwrap_or(0.0);
        for (topic, docs) in labels.topics() {
            for (doc, scores) in docs {
                let raw: f64 = scores.iter().sum();
                let upgraded =
                    unanimity_upgrade_scores(scores, args.unanimity_p, dmax).map_err(|e| {
                        AppError::Invalid(format!("topic {topic}, document {doc}: {e}"))
                    })?;
                let _ = writeln!(out, "{topic}\t{doc}\t{raw:.4}\t{upgraded:.4}");
            }
        }
    }
    print!("{out}");
    Ok(())
}
