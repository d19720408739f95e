use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exciton_cavity::config::{Overrides, RunConfig};
use exciton_cavity::runner::{self, SweepAxis, ValidationReport};
use exciton_cavity::Error;

#[derive(Parser)]
#[command(version, about = "Exciton-cavity dynamics: runs, sweeps and oracle validation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Flat TOML file whose keys mirror the long flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: Overrides,
}

#[derive(Subcommand)]
enum Command {
    /// Single run writing an observable table and a metadata record.
    Run(Common),
    /// One run per value of a parameter, plus an index file.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// n-total, n-excited, k, kprime or alpha.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        values: String,
        /// Set n-excited = n-total / 2 at every point.
        #[arg(long)]
        half_filled: bool,
    },
    /// Analytic-versus-oracle validation report.
    Validate(Common),
}

fn resolve(common: &Common) -> Result<RunConfig, Error> {
    let file = match &common.config {
        Some(p) => Overrides::from_file(p)?,
        None => Overrides::default(),
    };
    RunConfig::resolve(&file.layered(common.flags.clone()))
}

fn parse_values(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse()
                .map_err(|_| Error::InvalidConfig(format!("sweep value '{v}' is not a number")))
        })
        .collect()
}

fn execute(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Run(common) => {
            let outcome = runner::run(&resolve(&common)?)?;
            for line in outcome.summary_lines() {
                println!("{line}");
            }
            Ok(0)
        }
        Command::Sweep {
            common,
            axis,
            values,
            half_filled,
        } => {
            let axis: SweepAxis = axis.parse()?;
            let values = parse_values(&values)?;
            let base = resolve(&common)?;
            let dir = common.flags.out.clone().unwrap_or_else(|| PathBuf::from("sweep"));
            let index = runner::sweep(&base, axis, &values, half_filled, &dir)?;
            for line in index.summary_lines() {
                println!("{line}");
            }
            println!("wrote {}", dir.join("index.json").display());
            Ok(index.exit_code())
        }
        Command::Validate(common) => {
            let cfg = resolve(&common)?;
            let report = runner::validate(&cfg)?;
            let path = ValidationReport::path(&cfg);
            runner::write_report(&report, &path)?;
            for line in report.summary_lines() {
                println!("{line}");
            }
            println!("wrote {}", path.display());
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
