//! `chainsynth` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 I/O error.

mod commands;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "chainsynth",
    version,
    about = "Two-site chain assembly under one-way control: exact values, Monte Carlo runs, and timelines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SettingsArg {
    /// Site-2 observables (sx - sz)/sqrt(2) and (sx + sz)/sqrt(2); attains
    /// S = +2*sqrt(2).
    Corrected,
    /// Site-2 observables (sz - sx)/sqrt(2) and -(sx + sz)/sqrt(2), the
    /// negation of the corrected pair; yields S = -2*sqrt(2).
    PaperVerbatim,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    OneWayClassical,
    OneWayQuantum,
    TwoWayFeedback,
}

#[derive(clap::Args, Debug)]
struct GeometryArgs {
    /// CPU -> site 1 distance, meters.
    #[arg(long, default_value_t = 0.0)]
    d1: f64,
    /// CPU -> site 2 distance, meters.
    #[arg(long, default_value_t = 0.0)]
    d2: f64,
    /// Site 1 -> site 2 distance, meters.
    #[arg(long, default_value_t = 0.0)]
    d12: f64,
    /// Signal speed, m/s.
    #[arg(long, default_value_t = chainsynth::distsim::DEFAULT_SIGNAL_SPEED)]
    signal_speed: f64,
    /// Seconds between consecutive CPU emissions.
    #[arg(long, default_value_t = 0.0)]
    cadence: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the CHSH combination S for a settings variant.
    Chsh {
        #[arg(long, value_enum, default_value_t = SettingsArg::Corrected)]
        settings: SettingsArg,
    },
    /// Enumerate all 16 deterministic strategies and their exact values.
    Bound,
    /// Print the exact per-step value of a strategy spec.
    Exact {
        /// Strategy spec: det:<four signs>, mix:<16 weights>, quantum:corrected,
        /// or quantum:paper-verbatim.
        #[arg(long)]
        strategy: String,
    },
    /// Run a two-site assembly and write the chains (csv) or report (json).
    Simulate {
        #[arg(long)]
        strategy: String,
        /// Number of monoblocks to attach (must be >= 1).
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Also write the chains as text to <prefix>.chain1.txt and
        /// <prefix>.chain2.txt.
        #[arg(long)]
        dump_chains: Option<PathBuf>,
    },
    /// Simulate the control timeline and emit the per-step event log.
    Timeline {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Strategy spec for the one-way modes; defaults to det:++++ for
        /// classical and quantum:corrected for quantum.
        #[arg(long)]
        strategy: Option<String>,
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv emits the event log; json the run report.
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Compare the three control modes on one geometry.
    Compare {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep the site-2 measurement angle and emit (theta, S, noncr) rows.
    Sweep {
        /// Start angle, radians.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        from: f64,
        /// End angle, radians.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_negative_numbers = true)]
        to: f64,
        /// Number of grid points (>= 1).
        #[arg(long, default_value_t = 65)]
        points: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load two chain files and print their overlay report.
    Overlay {
        /// Chain file for site 1 (one <type><sign> line per block).
        #[arg(long)]
        chain1: PathBuf,
        /// Chain file for site 2.
        #[arg(long)]
        chain2: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
