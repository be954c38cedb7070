use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use potlab_core::oracle::OracleTag;

use crate::input::{BBox, Grid, PointArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Robin functions, capacities, condensers and distortion-inequality checks.
#[derive(Debug, Parser)]
#[command(name = "potlab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Mesh size for solver-backed quantities.
    #[arg(long, global = true, default_value_t = 0.02)]
    pub h: f64,

    /// Output format. Defaults to csv for `asymptotics` and json elsewhere.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the main output here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Also sample the field on a grid and write it as CSV.
    #[arg(long)]
    pub field_csv: Option<PathBuf>,

    #[arg(long, default_value = "64x64")]
    pub grid: Grid,

    /// Grid box `x0,y0,x1,y1`; defaults to the bounding box of a bounded domain.
    #[arg(long, allow_hyphen_values = true)]
    pub bbox: Option<BBox>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Robin radius and capacity at a pole.
    Robin {
        #[arg(long)]
        domain: PathBuf,
        /// Name of a gamma set in the domain file (default: the whole boundary).
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        pole: PointArg,
        /// Add a Richardson estimate from a second solve at 2h.
        #[arg(long)]
        richardson: bool,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Green function values (gamma = the whole boundary).
    Green {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        pole: PointArg,
        /// Evaluation points; repeat the flag for several.
        #[arg(long = "at", allow_hyphen_values = true)]
        at: Vec<PointArg>,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Robin capacity at a pole, or logarithmic capacity for exterior domains.
    Capacity {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        gamma: Option<String>,
        /// Defaults to infinity, which requires an exterior domain.
        #[arg(long, allow_hyphen_values = true)]
        pole: Option<PointArg>,
    },
    /// Condenser capacity at one plate scale, with the two-term expansion.
    Condenser {
        #[arg(long)]
        study: PathBuf,
        /// Plate scale; defaults to the first `r` of the study file.
        #[arg(long)]
        r: Option<f64>,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Residual study of the two-term expansion over decreasing plate scales.
    Asymptotics {
        #[arg(long)]
        study: PathBuf,
        /// Comma-separated, strictly decreasing; defaults to the study file list.
        #[arg(long, value_delimiter = ',')]
        r: Vec<f64>,
        /// Exit with status 1 when residual·log²r does not strictly decrease.
        #[arg(long)]
        strict: bool,
    },
    /// Evaluate a closed-form oracle; complex arguments are given as two reals.
    Oracle {
        #[arg(value_parser = parse_oracle)]
        name: OracleTag,
        #[arg(allow_negative_numbers = true)]
        args: Vec<f64>,
    },
    /// Verify distortion-inequality scenarios.
    Verify {
        /// Scenario files, or names of bundled scenarios.
        #[arg(long)]
        scenario: Vec<PathBuf>,
        /// Run every bundled scenario.
        #[arg(long)]
        all: bool,
        /// Also fail (status 1) when a hypothesis does not hold.
        #[arg(long)]
        strict: bool,
        /// Override the numeric budget for solver-backed scenarios.
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Summarize JSON-lines output of `verify`.
    Report {
        #[arg(long)]
        input: PathBuf,
    },
}

fn parse_oracle(s: &str) -> Result<OracleTag, String> {
    s.parse::<OracleTag>().map_err(|_| {
        let names: Vec<&str> = OracleTag::ALL.iter().map(|t| t.name()).collect();
        format!("unknown oracle '{s}' (one of {})", names.join(", "))
    })
}
