use std::path::PathBuf;
use std::process::ExitCode;

use apev::pipeline::{self, Status};
use apev::{report, CliError, Config};
use apev_mms::{build_case, convergence_study, final_time, ladder};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "apev", version, about = "Compressible Euler flow under a damped elastic plate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configuration and write the run directory.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute window diagnostics from the snapshots of a run.
    Diagnose {
        #[arg(long)]
        traj: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Manufactured-solution convergence study.
    Mms {
        /// a|frozen, b|plate or c|coupled.
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the initial data and its compatible time jet.
    Initdata {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sobolev norms of the fields of a snapshot.
    Norms {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summary text and plots for one or more output directories.
    Report {
        #[arg(long = "dir", required = true, num_args = 1..)]
        dirs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn execute(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Run { config, out } => {
            let cfg = Config::read(&config)?;
            let outcome = pipeline::run(&cfg, &out)?;
            if let Status::Completed = outcome.status {
                println!("completed {} steps to t = {:.6} (dt = {:.3e})", outcome.steps, outcome.t, outcome.dt);
            }
            outcome.into_result().map(|_| ())
        }
        Command::Diagnose { traj, out } => {
            let n = pipeline::diagnose(&traj, &out)?;
            println!("diagnosed {n} snapshots");
            Ok(())
        }
        Command::Mms { case, levels, out } => {
            let c = build_case(&case)?;
            let study = convergence_study(&c, &ladder(c.name, levels), final_time(c.name))?;
            study.write(&out)?;
            print!("{}", study.table().render());
            Ok(())
        }
        Command::Initdata { config, out } => {
            let e0 = pipeline::initdata(&Config::read(&config)?, &out)?;
            println!("E0 = {e0:.6e}");
            Ok(())
        }
        Command::Norms { snapshot, out } => {
            let t = pipeline::snapshot_norms(&snapshot)?;
            match out {
                Some(p) => t.write(&p)?,
                None => print!("{}", t.render()),
            }
            Ok(())
        }
        Command::Report { dirs, out } => {
            let out = out.unwrap_or_else(|| dirs[0].clone());
            print!("{}", report::report(&dirs, &out)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
