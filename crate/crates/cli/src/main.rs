mod cache;
mod commands;
mod error;
mod output;

use clap::{Args, Parser, Subcommand};
use output::Format;
use std::path::PathBuf;
use std::process::ExitCode;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "thurston", version, about = "Expanding Thurston maps from two-tile subdivision rules")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format; `experiment` defaults to csv, everything else to tsv.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Add a decimal column next to each exact column.
    #[arg(long, global = true)]
    pub float: bool,
    /// Print cache and timing counters to stderr.
    #[arg(long, global = true)]
    pub stats: bool,
    /// Cache directory; overrides THURSTON_CACHE.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Deepest level any command may build.
    #[arg(long, global = true, default_value_t = 10)]
    pub level_cap: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a rule file against every structural invariant.
    Validate { rule: PathBuf },
    /// Tile classes, measure weights and critical structure of a rule.
    Info { rule: PathBuf },
    /// Cell counts and tile classes for levels 0 through `--level`.
    Subdivide {
        rule: PathBuf,
        #[arg(long, default_value_t = 3)]
        level: u32,
        /// Also run the structural checks on every level.
        #[arg(long)]
        check: bool,
        /// Only the cell counts and Euler characteristic.
        #[arg(long)]
        counts: bool,
        /// Print the level-n complex as a rule file for f^n instead of the table.
        #[arg(long, conflicts_with = "counts")]
        dump: bool,
    },
    /// Tiles touching an edge at its subdivision vertices, for k = 0..=K.
    CoverEdge {
        rule: PathBuf,
        /// Edge id at `--level`.
        #[arg(long, default_value_t = 0)]
        edge: u32,
        #[arg(long, default_value_t = 0)]
        level: u32,
        #[arg(long, default_value_t = 4)]
        k: u32,
    },
    /// Fixed points of an iterate with their weights.
    FixedPoints {
        rule: PathBuf,
        #[arg(long, default_value_t = 1)]
        iterate: u32,
        /// Address depth in letters.
        #[arg(long, default_value_t = 32)]
        depth: usize,
    },
    /// Weighted and plain counts of points with f^n(x) = f^m(x).
    Preperiodic {
        rule: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// List the points instead of the counts.
        #[arg(long)]
        points: bool,
    },
    /// Exact-period counts: enumeration against the Möbius formula.
    Periods {
        rule: PathBuf,
        #[arg(long, default_value_t = 4)]
        max: u32,
    },
    /// Orientation of the fixed points of the map on the curve.
    Circle { rule: PathBuf },
    /// The measure of maximal entropy on level-m tiles.
    Mome {
        rule: PathBuf,
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// An equidistribution measure against the measure of maximal entropy.
    Equidist {
        rule: PathBuf,
        /// preimage-weighted, preimage-plain, preperiodic-weighted or preperiodic-plain.
        #[arg(long, default_value = "preimage-weighted")]
        kind: String,
        /// Preimage steps for the preimage kinds.
        #[arg(long, default_value_t = 3)]
        i: u32,
        /// Preperiod for the preperiodic kinds.
        #[arg(long = "pm", default_value_t = 0)]
        pm: u32,
        /// Period bound for the preperiodic kinds.
        #[arg(long = "pn", default_value_t = 2)]
        pn: u32,
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// Color of the 0-tile holding the base point.
        #[arg(long, value_enum, default_value = "white")]
        base: BaseColor,
    },
    /// Random backward orbit from a generic point, evaluated on level-m tiles.
    Sample {
        rule: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// The white tile coded by a word and its shift.
    Code {
        rule: PathBuf,
        /// Symbols 0-9 then a-z.
        #[arg(long)]
        word: String,
        /// Level of the reported ancestor.
        #[arg(long, default_value_t = 0)]
        level: u32,
    },
    /// Store subdivided complexes for later commands.
    Cache {
        #[arg(required_unless_present = "clear")]
        rule: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        level: u32,
        /// Empty the cache directory instead.
        #[arg(long)]
        clear: bool,
    },
    /// Series for plotting.
    Experiment {
        rule: PathBuf,
        #[command(subcommand)]
        series: Series,
    },
    /// Print a generated or iterated rule file.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BaseColor {
    White,
    Black,
}

#[derive(Debug, Subcommand)]
pub enum Series {
    /// Distance of the weighted preimage measure from the measure of maximal entropy, by i.
    Equidist {
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long, default_value_t = 5)]
        imax: u32,
    },
    /// Cover size of a 0-edge by k.
    CoverEdge {
        #[arg(long, default_value_t = 0)]
        edge: u32,
        #[arg(long, default_value_t = 5)]
        kmax: u32,
    },
    /// Sampler distance against step count.
    Sampler {
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = 10_000)]
        every: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// The a-by-b checkerboard rule.
    Checkerboard { a: u32, b: u32 },
    /// A rule shipped with the library.
    Bundled { name: String },
    /// The n-th iterate of a rule file.
    Iterate {
        rule: PathBuf,
        #[arg(long)]
        n: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
