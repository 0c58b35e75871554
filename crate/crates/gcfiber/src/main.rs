use std::path::PathBuf;

use clap::builder::TypedValueParser;
use clap::{Parser, Subcommand, ValueEnum};
use gcfiber::commands::{self, Format, Settings, DEFAULT_SAMPLES, MAX_CORPUS_N};
use gcfiber::error::CliError;
use gcfiber::output::emit;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Gelfand-Cetlin fiber analysis: dimensions, classification, sampling and
/// numeric verification of triangle files.
#[derive(Debug, Parser)]
#[command(name = "gcfiber", version)]
struct Cli {
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Overrides any seed stored in the input file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Isotropy residual bound used by `verify`.
    #[arg(long, global = true)]
    tol_iso: Option<f64>,
    /// Walk-separated sample points per triangle for `verify`.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    samples: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chains, dimension, classification and topology of each triangle.
    Analyze {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Points of the fiber over a triangle.
    Sample {
        input: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
        count: usize,
        #[arg(long, default_value_t = 0)]
        steps: usize,
    },
    /// Compare combinatorial, group and numeric dimensions; exit 5 on disagreement.
    Verify {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Write the regression corpus, one annotated file per triangle.
    Corpus {
        #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(2..=MAX_CORPUS_N as u64).map(|v| v as usize))]
        n_max: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    let settings = Settings {
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
        seed: cli.seed,
        tol_iso: cli.tol_iso,
        samples: cli.samples,
    };
    let outcome = match &cli.command {
        Command::Analyze { inputs } => commands::analyze_files(inputs, &settings)?,
        Command::Sample {
            input,
            count,
            steps,
        } => commands::sample_file(input, *count, *steps, &settings)?,
        Command::Verify { inputs } => commands::verify_files(inputs, &settings)?,
        Command::Corpus { n_max, out_dir } => commands::write_corpus(*n_max, out_dir, &settings)?,
    };
    emit(&outcome.text, cli.out.as_deref())?;
    Ok(outcome)
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(outcome) => outcome.exit.code(),
        Err(e) => {
            eprintln!("gcfiber: {e}");
            e.exit_code().code()
        }
    };
    std::process::exit(code);
}
