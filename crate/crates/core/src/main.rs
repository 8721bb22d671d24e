use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use halfwave::config::RunConfig;
use halfwave::lab::{self, Command, Exit};

/// Traveling solitary waves of the focusing half-wave equation.
#[derive(Parser)]
#[command(name = "halfwave", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve for a traveling-wave profile (or probe |v| >= 1).
    Solve(Flags),
    /// Sweep |v| toward 1 and fit the scaling laws.
    Sweep(Flags),
    /// Evolve a profile or a stored field in time.
    Evolve(Flags),
    /// Evaluate the resolvent kernel and its decay.
    Kernel(Flags),
    /// Run the identity suite on a stored profile.
    Check(Flags),
    /// Re-run a manifest and compare output digests.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct Flags {
    /// TOML file with any of the keys below; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Velocity components, one speed along the first axis, or sweep speeds.
    #[arg(long, num_args = 1.., action = clap::ArgAction::Append)]
    v: Vec<f64>,
    #[arg(long)]
    n: Option<usize>,
    /// Half extent of the box [-L, L)^d.
    #[arg(long = "L")]
    half_extent: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    /// Final time.
    #[arg(long = "T")]
    final_time: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    /// gaussian | q0 | random:<seed> | file:<path>
    #[arg(long)]
    seed_profile: Option<String>,
    /// Solve the energy-critical problem (d >= 2).
    #[arg(long)]
    critical: bool,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, num_args = 1.., action = clap::ArgAction::Append)]
    radii: Vec<f64>,
    #[arg(long)]
    record_every: Option<f64>,
    #[arg(long)]
    gate: Option<f64>,
    /// Turn the nonlinearity off (free evolution).
    #[arg(long)]
    linear: bool,
}

impl Flags {
    fn into_config(self) -> Result<RunConfig, halfwave::Error> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            d: self.d,
            p: self.p,
            v: (!self.v.is_empty()).then_some(self.v),
            n: self.n,
            half_extent: self.half_extent,
            tol: self.tol,
            max_iters: self.max_iters,
            dt: self.dt,
            final_time: self.final_time,
            out_dir: self.out_dir,
            jobs: self.jobs,
            seed_profile: self.seed_profile,
            critical: self.critical.then_some(true),
            input: self.input,
            radii: (!self.radii.is_empty()).then_some(self.radii),
            record_every: self.record_every,
            gate: self.gate,
            spacing: None,
            max_n: None,
            nonlinear: self.linear.then_some(false),
        };
        Ok(base.overlay(flags))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, flags) = match cli.command {
        Cmd::Solve(f) => (Command::Solve, f),
        Cmd::Sweep(f) => (Command::Sweep, f),
        Cmd::Evolve(f) => (Command::Evolve, f),
        Cmd::Kernel(f) => (Command::Kernel, f),
        Cmd::Check(f) => (Command::Check, f),
        Cmd::Replay { manifest, out_dir } => {
            return match lab::replay(&manifest, &out_dir) {
                Ok(report) if report.identical() => {
                    println!("replay identical: {} outputs", report.replayed.outputs.len());
                    ExitCode::SUCCESS
                }
                Ok(report) => {
                    eprintln!("replay differs in: {}", report.mismatches.join(", "));
                    ExitCode::from(Exit::Failure.code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit.code() as u8)
                }
            };
        }
    };
    let config = match flags.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(Exit::Config.code() as u8);
        }
    };
    match lab::run(command, config) {
        Ok(outcome) => {
            print!("{}", outcome.summary.render());
            ExitCode::from(outcome.exit.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit.code() as u8)
        }
    }
}
