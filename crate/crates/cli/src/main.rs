//! `signbridge` operator command line.
//!
//! Exit status: 0 on success, 2 when a command fails, 64 on bad usage.
//! Results go to stdout as JSON, JSON Lines or CSV; diagnostics go to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use signbridge_service::ServiceConfig;

const EXIT_FAILURE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "signbridge", version, about = "English-to-sign translation and sign recognition toolkit")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate an English sentence into a sign playlist.
    Translate(TranslateArgs),
    /// Inspect or edit a sign asset lexicon.
    #[command(subcommand)]
    Lexicon(LexiconCommand),
    /// Create or inspect landmark datasets.
    #[command(subcommand)]
    Dataset(DatasetCommand),
    /// Train a recognizer on a labeled landmark dataset.
    Train(TrainArgs),
    /// Evaluate a trained model on a labeled dataset.
    Eval(EvalArgs),
    /// Classify each frame of a landmark recording.
    Predict(PredictArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct LexiconArg {
    /// Lexicon manifest.
    #[arg(long = "lexicon", env = "SIGNBRIDGE_LEXICON_MANIFEST", default_value = "data/lexicon/lexicon.json")]
    path: PathBuf,
}

#[derive(Args)]
struct TranslateArgs {
    #[arg(long)]
    text: String,
    #[command(flatten)]
    lexicon: LexiconArg,
    /// Print only the tense marker and keywords, e.g. `Now i happy`.
    #[arg(long)]
    keywords_only: bool,
    /// Emit `<prefix><kind>/<gloss>` URIs instead of file paths.
    #[arg(long, value_name = "PREFIX")]
    asset_prefix: Option<String>,
}

#[derive(Subcommand)]
enum LexiconCommand {
    /// Register a video clip for a gloss; the clip is copied into the pack.
    Add {
        #[arg(long)]
        gloss: String,
        /// word, letter, digit or marker.
        #[arg(long, default_value = "word")]
        kind: String,
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        lexicon: LexiconArg,
    },
    /// List entries as JSON Lines.
    List {
        #[command(flatten)]
        lexicon: LexiconArg,
    },
    /// Validate the manifest and every asset it references.
    Check {
        #[command(flatten)]
        lexicon: LexiconArg,
    },
    /// Write a placeholder pack covering letters, digits and tense markers.
    Init {
        /// Directory to create the pack in.
        #[arg(long)]
        dir: PathBuf,
        /// Extra word glosses.
        #[arg(long, value_delimiter = ',')]
        words: Vec<String>,
    },
}

#[derive(Subcommand)]
enum DatasetCommand {
    /// Generate a synthetic labeled landmark dataset (JSON Lines).
    Synth {
        #[arg(long, default_value_t = 10)]
        classes: usize,
        #[arg(long, default_value_t = 200)]
        per_class: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a dataset: class counts, hands per frame, invalid frames.
    Inspect {
        #[arg(long)]
        data: PathBuf,
    },
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    #[arg(long, default_value_t = 128)]
    batch: usize,
    /// Fraction of each class held out for validation.
    #[arg(long, default_value_t = 0.25)]
    val: f64,
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    #[arg(long, default_value_t = 0.9)]
    momentum: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "64,32")]
    hidden: Vec<usize>,
    /// Model file to write.
    #[arg(long, default_value = "model.json")]
    out: PathBuf,
    /// Per-epoch CSV log; stdout when omitted.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// F1-confidence curve as CSV.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Confusion matrix as CSV.
    #[arg(long)]
    confusion: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// JSON Lines recording; `-` reads stdin.
    #[arg(long)]
    frames: PathBuf,
    /// Emit only smoothed label changes.
    #[arg(long)]
    smooth: bool,
}

#[derive(Args)]
struct ServeArgs {
    #[command(flatten)]
    config: ServiceConfig,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("signbridge: error: {e:#}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

/// A closed downstream pipe (`signbridge ... | head`) is not a failure.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}
