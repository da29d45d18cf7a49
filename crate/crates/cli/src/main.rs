use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "slotoffer", version, about = "Slot-offering policies for appointment booking under customer choice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Nonseq,
    Seq,
    Fullinfo,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Sim,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum DemandArg {
    Det,
    Poisson,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the optimality equations and write the value table as JSON.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Enumerate all ordered partitions instead of singleton orders.
        #[arg(long)]
        exhaustive: bool,
        /// With --exhaustive, also enumerate sequences that leave types out.
        #[arg(long, requires = "exhaustive")]
        partial_covers: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve the fluid LP and write the solution with its static policy.
    Fluid {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 1)]
        scale: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate independent days under a policy.
    Simulate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        policy: String,
        #[arg(long, default_value_t = 1000)]
        days: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit the optimal action over a two-dimensional slice of the state space as CSV.
    PolicyMap {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Fixed coordinates, e.g. `m1=4,n=5`.
        #[arg(long)]
        fix: String,
        /// Two slot coordinates spanning the grid, e.g. `m2,m3`.
        #[arg(long)]
        axes: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate one of the experiment tables.
    Table {
        #[arg(long)]
        name: String,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Simulated days per scenario in sim mode.
        #[arg(long, default_value_t = 1000)]
        days: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Shorthand for `--format markdown`.
        #[arg(long)]
        markdown: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the rolling-horizon booking system under one policy.
    Multiday {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        policy: String,
        #[arg(long, value_enum, default_value = "det")]
        demand: DemandArg,
        /// Number of acceptable days per customer.
        #[arg(long = "D", default_value_t = 1)]
        acceptable_days: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1200)]
        days: usize,
        #[arg(long, default_value_t = 200)]
        warmup: usize,
        #[arg(long, default_value_t = 15)]
        window: usize,
        /// Customers per day; also the number of periods the policy is told remain.
        #[arg(long, default_value_t = 30)]
        daily_demand: usize,
    },
    /// Run the multi-day improvement grid over all capacity scenarios.
    MultidayTable {
        #[arg(long, value_enum, default_value = "det")]
        demand: DemandArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1200)]
        days: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        markdown: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", commands::error_json(&err));
            ExitCode::FAILURE
        }
    }
}
