//! `hnpoly` — exact Harder–Narasimhan toolkit.
//!
//! Reads an HN description (explicit data, a filtered vector space, or a
//! split bundle on the projective line) from a JSON file and reports derived
//! data, the HN polygon (CSV/SVG), exact slope-walk tail probabilities
//! against their normal and Chebyshev approximations, and tensor-power
//! dimension counts.
//!
//! Exit codes: 2 malformed input, 3 validation failure, 4 I/O failure,
//! 5 grid or enumeration bound exceeded.

mod input;
mod report;

use std::env;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hn_core::prob::{ProbConfig, ProbError};
use hn_core::{HNPolygon, Rational};

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Validation(String),
    Io(String),
    Overflow(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Io(_) => 4,
            CliError::Overflow(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m) | CliError::Io(m)
            | CliError::Overflow(m) => m,
        }
    }
}

impl From<ProbError> for CliError {
    fn from(err: ProbError) -> Self {
        match err {
            ProbError::ScaledRangeOverflow { .. } => CliError::Overflow(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "hnpoly",
    version,
    about = "Exact Harder-Narasimhan data, polygons, walk tail probabilities and tensor dimension counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TailArgs {
    /// Input description (JSON)
    input: PathBuf,
    /// Tail threshold, as `p` or `p/q`
    #[arg(long, value_parser = input::parse_rational_arg, allow_hyphen_values = true)]
    z: Rational,
    /// Walk lengths, comma separated (e.g. 16,64,256)
    #[arg(long = "m-list", value_delimiter = ',', required = true, value_parser = clap::value_parser!(u32).range(1..))]
    m_list: Vec<u32>,
    /// Cap on the scaled slope-sum grid (cells); default 10000000.
    /// The HNPOLY_GRID_BOUND environment variable is used when the flag is
    /// absent.
    #[arg(long = "grid-bound")]
    grid_bound: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print HN data and everything derived from it
    Analyze {
        /// Input description (JSON)
        input: PathBuf,
    },
    /// Emit the HN polygon as CSV (stdout or --csv) and optionally SVG
    Polygon {
        /// Input description (JSON)
        input: PathBuf,
        /// Write the SVG rendering to this path
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the CSV tables to this path instead of stdout
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Tabulate exact tail probabilities against CLT and Chebyshev
    Prob {
        #[command(flatten)]
        tail: TailArgs,
        /// Add a Monte Carlo tail estimate with this many samples per row
        #[arg(long)]
        mc: Option<u64>,
        /// Seed for the Monte Carlo estimate
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tabulate tensor-power dimension counts and the dimension ratio
    Tensor {
        #[command(flatten)]
        tail: TailArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { input } => {
            let loaded = input::load(&input)?;
            print!("{}", report::analyze(&loaded.data, &loaded.warnings));
            Ok(())
        }
        Command::Polygon { input, svg, csv } => {
            let loaded = input::load(&input)?;
            let polygon = HNPolygon::from_data(&loaded.data);
            if let Some(path) = svg {
                report::write_atomic(&path, &polygon.to_svg())?;
            }
            let csv_text = report::polygon_csv(&polygon, &loaded.warnings);
            match csv {
                Some(path) => report::write_atomic(&path, &csv_text)?,
                None => print!("{csv_text}"),
            }
            Ok(())
        }
        Command::Prob { tail, mc, seed } => {
            let loaded = input::load(&tail.input)?;
            let config = prob_config(tail.grid_bound)?;
            let csv = report::prob_csv(
                &loaded.data,
                &tail.z,
                &tail.m_list,
                mc,
                seed,
                &config,
                &loaded.warnings,
            )?;
            print!("{csv}");
            Ok(())
        }
        Command::Tensor { tail } => {
            let loaded = input::load(&tail.input)?;
            let config = prob_config(tail.grid_bound)?;
            let csv = report::tensor_csv(
                &loaded.data,
                &tail.z,
                &tail.m_list,
                &config,
                &loaded.warnings,
            )?;
            print!("{csv}");
            Ok(())
        }
    }
}

/// Builds the probability configuration. The `--grid-bound` flag wins over
/// the `HNPOLY_GRID_BOUND` environment variable.
fn prob_config(flag: Option<u64>) -> Result<ProbConfig, CliError> {
    let mut config = ProbConfig::default();
    if let Some(bound) = flag {
        config.grid_bound = bound;
    } else if let Ok(text) = env::var("HNPOLY_GRID_BOUND") {
        config.grid_bound = text.parse().map_err(|_| {
            CliError::Parse(format!("invalid HNPOLY_GRID_BOUND value {text:?}"))
        })?;
    }
    Ok(config)
}
