//! Command-line driver: scenario runs, acceptance suites and convergence
//! studies.
//!
//! Exit status: 0 success, 1 runtime failure, 2 configuration or usage
//! error, 3 verification failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod run;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use acoustoelastic::oracle::CaseId;
use acoustoelastic::verify::{self, Suite, DEFAULT_SEED};
use acoustoelastic::Error;
use clap::{Parser, Subcommand};

use config::ScenarioConfig;

#[derive(Debug, Parser)]
#[command(
    name = "acoustoelastic",
    version,
    about = "Acoustic-elastic scattering with compressed-coordinate truncation"
)]
struct Cli {
    /// Output directory; overrides `output.dir` in a scenario file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the randomized property checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Print only machine-readable results and errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Run { config: PathBuf },
    /// Run an acceptance suite: map, lemmas, energy, causality, equivalence, mms, apriori or all.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
    /// Manufactured-solution refinement study: zero, bubble, radial or dipole.
    Convergence {
        #[arg(value_parser = parse_case)]
        case: CaseId,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(3..))]
        levels: u32,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_case(s: &str) -> Result<CaseId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Error(Error),
    Verification(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Domain(_) | Error::Mesh(_) => 2,
        _ => 1,
    }
}

fn write_file(path: PathBuf, text: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    }
    std::fs::write(&path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Run { config } => {
            let cfg = ScenarioConfig::load(config)?;
            let out = cli.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
            let summary = run::run_scenario(&cfg, &out)?;
            if !cli.quiet {
                println!("steps {} dt {:.6e}", summary.steps, summary.dt);
                println!("final energy {:.10e}", summary.final_energy);
                println!("relative energy drift {:.3e}", summary.drift);
                if let Some(err) = summary.manufactured_error {
                    println!("L2 pressure error at T {err:.6e}");
                }
                if summary.snapshots > 0 {
                    println!("snapshots {}", summary.snapshots);
                }
                for path in &summary.outputs {
                    println!("wrote {}", path.display());
                }
                println!("wall time {:.3} s", summary.wall.as_secs_f64());
            }
            Ok(())
        }
        Command::Verify { suite } => {
            let checks = verify::run_suite(*suite, cli.seed)?;
            let mut report = String::new();
            for c in &checks {
                let _ = writeln!(report, "{c}");
            }
            print!("{report}");
            if let Some(out) = &cli.out {
                write_file(out.join(format!("verify_{}.txt", suite.name())), &report)?;
            }
            let failed = checks.iter().filter(|c| !c.pass).count();
            if !cli.quiet {
                eprintln!("{} checks, {failed} failed", checks.len());
            }
            if failed > 0 {
                Err(Failure::Verification(failed))
            } else {
                Ok(())
            }
        }
        Command::Convergence { case, levels } => {
            let study = verify::convergence_study(*case, *levels as usize)?;
            let mut table = String::from("level,n_radial,n_angular,dt,steps,error,order\n");
            for (k, l) in study.iter().enumerate() {
                let order = l.order.map_or_else(|| "-".to_string(), |o| format!("{o:.4}"));
                let _ = writeln!(
                    table,
                    "{k},{},{},{:.6e},{},{:.6e},{order}",
                    l.n_radial, l.n_angular, l.dt, l.steps, l.error
                );
            }
            print!("{table}");
            if let Some(out) = &cli.out {
                write_file(out.join(format!("convergence_{}.csv", case.name())), &table)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Verification(n)) => {
            if !cli.quiet {
                eprintln!("verification failed: {n} check(s)");
            }
            ExitCode::from(3)
        }
    }
}
