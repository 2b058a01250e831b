//! `nhtls`: scenario runner for the non-Hermitian two-level system.

mod config;
mod error;
mod output;
mod preset;
mod runner;
mod sweep;
mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{parse_config_file, resolve, RawConfig};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "nhtls",
    about = "Non-Hermitian dynamics of a dissipative two-level system",
    long_about = "Propagates the density matrix of a two-level system coupled to an \
                  effective environment, verifies trajectories against closed-form \
                  solutions and conservation laws, and emits CSV/JSON datasets.\n\n\
                  Exit codes: 1 configuration/constraint problem, 2 numeric failure, \
                  3 verification failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate one scenario and write the trajectory.
    Run(ScenarioArgs),
    /// Like `run`, but always verify against the oracle and invariants.
    Verify(ScenarioArgs),
    /// One propagation per grid point of a parameter axis.
    Sweep(SweepArgs),
    /// Emit a figure-reproduction dataset (fig1 | fig2 | fig3).
    Preset(PresetArgs),
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Flat key-value config file; command-line flags win over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// general | conserved-energy-exp | conserved-energy-poly |
    /// vanishing-population | dephasing | purification
    #[arg(long)]
    scenario: Option<String>,
    /// Tunneling frequency Ω (rad/time), default 1.
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a2: Option<f64>,
    /// Gauge parameter a₀; defaults to γ.
    #[arg(long, allow_negative_numbers = true)]
    a0: Option<f64>,
    /// Sign of the square root in W: +1 or -1.
    #[arg(long, allow_negative_numbers = true)]
    w_sign: Option<f64>,
    /// Mixing parameter of the purification initial state, 0 < p < 1.
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    /// excited | ground | plus-coherent | diag-mixed:P | explicit:8 floats
    #[arg(long)]
    initial: Option<String>,
    /// Integrator step (units 1/Ω), default 0.002/Ω.
    #[arg(long)]
    dt: Option<f64>,
    /// Time horizon (units 1/Ω), default 10/Ω.
    #[arg(long)]
    t_max: Option<f64>,
    /// linear-raw | nonlinear-normalized | state-vector
    #[arg(long)]
    form: Option<String>,
    /// Record every n-th step, default 10.
    #[arg(long)]
    record_every: Option<usize>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    /// Verify against the closed-form oracle and the invariant suite.
    #[arg(long)]
    verify: bool,
}

impl ScenarioArgs {
    fn to_raw(&self) -> RawConfig {
        RawConfig {
            scenario: self.scenario.clone(),
            omega: self.omega,
            gamma: self.gamma,
            beta: self.beta,
            a2: self.a2,
            a0: self.a0,
            w_sign: self.w_sign,
            p: self.p,
            initial: self.initial.clone(),
            dt: self.dt,
            t_max: self.t_max,
            form: self.form.clone(),
            record_every: self.record_every,
            out_csv: self.out_csv.clone(),
            out_json: self.out_json.clone(),
            verify: self.verify.then_some(true),
            ..Default::default()
        }
    }

    fn merged(&self) -> Result<RawConfig, CliError> {
        let base = match &self.config {
            Some(path) => parse_config_file(path)?,
            None => RawConfig::default(),
        };
        Ok(self.to_raw().merged_over(base))
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Swept parameter: gamma | beta | a2 | a0 | omega | p.
    #[arg(long)]
    param: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    stop: Option<f64>,
    /// Number of grid points, default 11.
    #[arg(long)]
    count: Option<usize>,
}

#[derive(Args)]
struct PresetArgs {
    /// fig1 | fig2 | fig3 (also accepted as a positional name).
    #[arg(long)]
    preset: Option<String>,
    name: Option<String>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Assert the t = 0 and asymptote anchors of the figure.
    #[arg(long)]
    verify: bool,
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let plan = resolve(&args.merged()?)?;
            runner::execute_run(&plan)
        }
        Command::Verify(args) => {
            let mut raw = args.merged()?;
            raw.verify = Some(true);
            let plan = resolve(&raw)?;
            runner::execute_run(&plan)
        }
        Command::Sweep(args) => {
            let mut raw = args.scenario.merged()?;
            raw.sweep_param = args.param.or(raw.sweep_param);
            raw.sweep_start = args.start.or(raw.sweep_start);
            raw.sweep_stop = args.stop.or(raw.sweep_stop);
            raw.sweep_count = args.count.or(raw.sweep_count);
            let plan = resolve(&raw)?;
            sweep::execute_sweep(&plan)
        }
        Command::Preset(args) => {
            let name = args
                .preset
                .or(args.name)
                .ok_or_else(|| CliError::usage("preset needs a name: fig1 | fig2 | fig3"))?;
            preset::execute_preset(&name, args.out_csv, args.verify)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = dispatch(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code);
    }
}
