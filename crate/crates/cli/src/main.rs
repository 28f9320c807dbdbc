//! `nashflow`: exact dynamic equilibria from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "nashflow", version, about = "Exact Nash flows over time in the fluid queueing model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EtaArg {
    Exhaustive,
    Observed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TargetArg {
    Transit,
    Capacity,
    Inflow,
    Label,
}

#[derive(Subcommand)]
enum Command {
    /// Thin flow for a configuration file {"active": [...], "resetting": [...]}.
    SolveThinflow {
        instance: PathBuf,
        configuration: PathBuf,
    },
    /// Integrate the equilibrium trajectory.
    Integrate {
        instance: PathBuf,
        /// `empty` or a labeling file {"node": "p/q", ...}.
        #[arg(long, default_value = "empty")]
        start: String,
        /// `steady`, `horizon=THETA` or `phases=N`.
        #[arg(long, default_value = "steady")]
        stop: String,
        /// Trajectory CSV; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Flow-over-time CSV.
        #[arg(long)]
        flow_out: Option<PathBuf>,
        /// Run report JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Steady-state certificate with convergence bounds.
    SteadyState {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "exhaustive")]
        eta: EtaArg,
        #[arg(long, default_value = "empty")]
        start: String,
    },
    /// Run the invariant suite; exit 1 on any failure.
    Check {
        instance: PathBuf,
        #[arg(long, default_value = "empty")]
        start: String,
        /// Also verify a trajectory CSV against the instance.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Continuity sweep over one perturbed parameter.
    Perturb {
        instance: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
        /// Arc id for transit and capacity sweeps.
        #[arg(long)]
        arc: Option<String>,
        /// Node for label sweeps; the sink if omitted.
        #[arg(long)]
        node: Option<String>,
        /// Comma-separated positive, strictly decreasing rationals.
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<String>,
        #[arg(long)]
        horizon: String,
        /// Sweep CSV; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::SolveThinflow { instance, configuration } => commands::solve_thinflow(&instance, &configuration),
        Command::Integrate { instance, start, stop, out, flow_out, report } => {
            commands::integrate(&instance, &start, &stop, out.as_deref(), flow_out.as_deref(), report.as_deref())
        }
        Command::SteadyState { instance, eta, start } => commands::steady_state(&instance, eta, &start),
        Command::Check { instance, start, trajectory } => commands::check(&instance, &start, trajectory.as_deref()),
        Command::Perturb { instance, target, arc, node, deltas, horizon, out } => commands::perturb(
            &instance,
            target,
            arc.as_deref(),
            node.as_deref(),
            &deltas,
            &horizon,
            out.as_deref(),
        ),
    };
    ExitCode::from(code)
}
