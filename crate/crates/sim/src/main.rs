use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use swarmpath_core::simulator::Controller;
use swarmpath_sim::commands::{cmd_compare, cmd_run, cmd_sweep, cmd_validate, CommandOutput, ExitStatus, RunOverrides};
use swarmpath_sim::validate::DEFAULT_DT;

#[derive(Parser)]
#[command(name = "swarmpath-sim", version, about = "Leader-follower swarm path planning simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ControllerArg {
    /// Virtual leader with impedance links and obstacle re-linking.
    Swarmpath,
    /// Every drone descends its own potential field independently.
    Apf,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one controller on a scenario.
    Run {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "swarmpath")]
        controller: ControllerArg,
        #[arg(short = 'o', long = "out", env = "SWARMPATH_OUT", default_value = "out")]
        out: PathBuf,
        /// Override the scenario's time step, s.
        #[arg(long)]
        dt: Option<f64>,
        /// Override the scenario's step budget.
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Run both controllers on a scenario and compare them.
    Compare {
        scenario: PathBuf,
        #[arg(short = 'o', long = "out", env = "SWARMPATH_OUT", default_value = "out")]
        out: PathBuf,
    },
    /// Sweep one impedance parameter.
    Sweep {
        sweep_spec: PathBuf,
        #[arg(short = 'o', long = "out", env = "SWARMPATH_OUT", default_value = "out")]
        out: PathBuf,
    },
    /// Check the integrator and force law against their closed forms.
    Validate {
        #[arg(long, hide = true, default_value_t = DEFAULT_DT)]
        dt: f64,
    },
}

fn report(result: Result<CommandOutput, swarmpath_sim::commands::CliError>) -> ExitCode {
    match result {
        Ok(out) => {
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            println!("{}", out.summary.trim_end());
            ExitCode::from(out.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::Error.code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario, controller, out, dt, max_steps } => {
            let controller = match controller {
                ControllerArg::Swarmpath => Controller::SwarmPath,
                ControllerArg::Apf => Controller::ConventionalApf,
            };
            report(cmd_run(&scenario, controller, &out, RunOverrides { dt, max_steps }))
        }
        Command::Compare { scenario, out } => report(cmd_compare(&scenario, &out)),
        Command::Sweep { sweep_spec, out } => report(cmd_sweep(&sweep_spec, &out)),
        Command::Validate { dt } => report(Ok(cmd_validate(dt))),
    }
}
