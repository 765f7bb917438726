//! `kplanar`: decompose drawn graphs into planes, check the results
//! against exact oracles, and evaluate the supporting bounds.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "kplanar", version, about = "k-plane decompositions of graph drawings with bounded local crossings")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of planes.
    #[arg(long, global = true, default_value_t = 2)]
    pub k: usize,
    /// Slack above the target survival rate.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub eps: f64,
    /// Label weights: `optimal`, `uniform`, or a list such as `2/3,1/3`.
    #[arg(long, global = true, default_value = "optimal")]
    pub weights: String,
    /// Monte Carlo trials.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: u64,
    /// Resampling rounds for the randomized searches.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub budget: usize,
    /// Write the JSON envelope here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write an SVG rendering of the decomposition here.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Logarithm base for the lcr thresholds.
    #[arg(long, global = true, value_enum, default_value_t = LogBaseArg::E)]
    pub log_base: LogBaseArg,
    /// More log output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBaseArg {
    #[value(name = "e")]
    E,
    #[value(name = "2")]
    Two,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Counts crossings and loads of a drawing and lists applicable bounds.
    Analyze {
        drawing: PathBuf,
        /// Print the JSON envelope instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Splits a drawing into planes.
    Decompose {
        drawing: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Construction)]
        mode: ModeArg,
        /// Spend the whole budget minimizing instead of stopping at the first certified labeling.
        #[arg(long)]
        best_of_budget: bool,
        #[arg(long, value_enum, default_value_t = PolicyArg::Local)]
        policy: PolicyArg,
        /// What moves together in the SVG panels.
        #[arg(long, value_enum, default_value_t = GroupingArg::Surviving)]
        grouping: GroupingArg,
    },
    /// Samples labelings and compares with exact values and tail bounds.
    Montecarlo { drawing: PathBuf },
    /// Evaluates the bound calculators.
    Bounds {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        /// Maximum degree.
        #[arg(long)]
        delta: Option<u64>,
        /// Local crossing number L.
        #[arg(long, alias = "l")]
        lcr: Option<u64>,
        /// Crossing count C.
        #[arg(long, alias = "c")]
        cr: Option<u64>,
        /// Ratio of maximum to average degree.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive ground truth for small drawings.
    Oracle {
        drawing: PathBuf,
        #[arg(long, value_enum)]
        mode: OracleModeArg,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::MaxG)]
        objective: ObjectiveArg,
        /// Conditioned edge, for `--mode conditional`.
        #[arg(long)]
        edge: Option<usize>,
        /// Label of the edge's first endpoint.
        #[arg(long, default_value_t = 0)]
        i: usize,
        /// Label of the edge's second endpoint.
        #[arg(long, default_value_t = 0)]
        j: usize,
    },
    /// Generates a drawing.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: Option<usize>,
        /// Target degree, for `regularish`.
        #[arg(long)]
        d: Option<usize>,
        /// Edge list to place, for `geometric`.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Construction,
    DegreePartition,
    Coloring,
    Combined,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyArg {
    Local,
    Restart,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupingArg {
    Surviving,
    Components,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleModeArg {
    Labeling,
    Partition,
    Expectation,
    Conditional,
    Scopes,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveArg {
    #[value(name = "max_g", alias = "max-g")]
    MaxG,
    #[value(name = "sum_g", alias = "sum-g")]
    SumG,
    Combined,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyArg {
    ConvexKn,
    CylKn,
    Regularish,
    Geometric,
}

fn main() -> ExitCode {
    // Usage errors exit 1; clap's own code 2 means "uncertified" here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match commands::run(&cli) {
        Ok(commands::Status::Certified) => ExitCode::SUCCESS,
        Ok(commands::Status::Uncertified) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
