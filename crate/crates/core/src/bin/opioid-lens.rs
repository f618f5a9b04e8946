use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use opioid_lens::config::{ModelKind, Overrides, PipelineConfig};
use opioid_lens::pipeline::{run_subcommand, Stage};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Ingest,
    ParseListings,
    Ner,
    Topics,
    Weaklabel,
    Train,
    Eval,
    Report,
    Pipeline,
}

impl From<Command> for Stage {
    fn from(c: Command) -> Stage {
        match c {
            Command::Ingest => Stage::Ingest,
            Command::ParseListings => Stage::ParseListings,
            Command::Ner => Stage::Ner,
            Command::Topics => Stage::Topics,
            Command::Weaklabel => Stage::Weaklabel,
            Command::Train => Stage::Train,
            Command::Eval => Stage::Eval,
            Command::Report => Stage::Report,
            Command::Pipeline => Stage::Pipeline,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Nb,
    Lr,
}

/// Opioid cryptomarket and social media text analytics.
#[derive(Debug, Parser)]
#[command(name = "opioid-lens", version)]
struct Cli {
    /// Stage to run; `pipeline` runs all of them in order.
    #[arg(value_enum)]
    command: Command,
    /// TOML configuration file.
    #[arg(long, short)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sample_n: Option<usize>,
    #[arg(long)]
    ngram_max: Option<usize>,
    #[arg(long)]
    min_df: Option<usize>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// Overrides `output_dir` from the config file.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Suppress progress output.
    #[arg(long, short)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let overrides = Overrides {
        seed: cli.seed,
        sample_n: cli.sample_n,
        ngram_max: cli.ngram_max,
        min_df: cli.min_df,
        model: cli.model.map(|m| match m {
            ModelArg::Nb => ModelKind::Nb,
            ModelArg::Lr => ModelKind::Lr,
        }),
        output_dir: cli.output_dir,
    };
    let result = PipelineConfig::load(&cli.config, &overrides)
        .and_then(|cfg| run_subcommand(cli.command.into(), &cfg));
    match result {
        Ok(report) => {
            if !cli.quiet {
                for line in &report.log {
                    eprintln!("{line}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
