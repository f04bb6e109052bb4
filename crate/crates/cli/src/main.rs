use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use rig_cli::commands;
use rig_cli::experiments::{self, IqValue};
use rig_cli::{CliError, Overrides, Result, Strategy, TolMode};
use rig_core::Tolerance;

#[derive(Parser)]
#[command(name = "rig", version, about = "Rigorous Gauss-Legendre integration of algebraic functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the problem in FILE and print a JSON report.
    Integrate {
        file: PathBuf,
        #[command(flatten)]
        flags: ProblemFlags,
    },
    /// Print the segment plan for FILE without integrating.
    Plan {
        file: PathBuf,
        #[command(flatten)]
        flags: ProblemFlags,
    },
    /// Print Gauss-Legendre nodes and weights as CSV.
    Nodes {
        n: usize,
        #[arg(long, default_value_t = 128)]
        precision: u32,
    },
    /// Node-count studies and the random-curve benchmark.
    Experiment {
        #[command(subcommand)]
        which: Experiment,
    },
}

#[derive(Args)]
struct ProblemFlags {
    #[arg(long, value_enum)]
    strategy: Option<Strategy>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long = "tol-mode", value_enum)]
    tol_mode: Option<TolMode>,
    #[arg(long)]
    precision: Option<u32>,
}

impl From<&ProblemFlags> for Overrides {
    fn from(f: &ProblemFlags) -> Self {
        Overrides {
            strategy: f.strategy,
            beta: f.beta,
            epsilon: f.epsilon,
            tolerance_mode: f.tol_mode,
            precision: f.precision,
        }
    }
}

#[derive(Subcommand)]
enum Experiment {
    /// N1 and N2 over z0 = x + iy on a grid in (0, 1)^2.
    Heatmap {
        #[arg(long, default_value_t = 0.5)]
        v: f64,
        #[arg(long, default_value = "2^-100")]
        tol: String,
        #[arg(long, default_value_t = 8)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lemma and proxy node counts for the I_q quartic family.
    Iq {
        #[arg(long, default_value = "0.5,0.1,0.02,0.01,0.005")]
        q: String,
        #[arg(long, default_value = "2^-100")]
        tol: String,
        /// Bound mode of the main plan whose value is reported.
        #[arg(long, value_enum, default_value = "lemma")]
        bound: IqValue,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// N1 and N2 for z0 = iq.
    Pole {
        #[arg(long, default_value_t = 0.5)]
        v: f64,
        #[arg(long, default_value = "0.1,0.01,0.001,0.0001")]
        q: String,
        #[arg(long, default_value = "2^-100")]
        tol: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random curves of total degree at most 4 integrated by all three methods.
    Bench {
        #[arg(long, default_value_t = 30)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "2^-100")]
        tol: String,
        /// Report measured milliseconds instead of the deterministic cost model.
        #[arg(long)]
        wall_clock: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn tolerance(s: &str) -> Result<Tolerance> {
    Ok(Tolerance::from_str(s)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Integrate { file, flags } => {
            let problem = commands::load_problem(&file, &(&flags).into())?;
            println!("{}", commands::integrate(&problem)?.to_json()?);
        }
        Command::Plan { file, flags } => {
            let problem = commands::load_problem(&file, &(&flags).into())?;
            println!("{}", commands::plan_document(&problem)?.to_json()?);
        }
        Command::Nodes { n, precision } => commands::write_nodes(n, precision, io::stdout().lock())?,
        Command::Experiment { which } => match which {
            Experiment::Heatmap { v, tol, grid, out } => {
                let rows = experiments::heatmap(v, &tolerance(&tol)?, grid)?;
                experiments::write_heatmap(&rows, output(out.as_deref())?)?;
            }
            Experiment::Iq { q, tol, bound, out } => {
                let tol = tolerance(&tol)?;
                let rows = experiments::iq(&experiments::parse_list(&q)?, &tol, bound)?;
                experiments::write_iq(&rows, &tol, output(out.as_deref())?)?;
            }
            Experiment::Pole { v, q, tol, out } => {
                let rows = experiments::pole(v, &experiments::parse_list(&q)?, &tolerance(&tol)?)?;
                experiments::write_pole(&rows, output(out.as_deref())?)?;
            }
            Experiment::Bench { count, seed, tol, wall_clock, out } => {
                let result = experiments::bench(count, seed, &tolerance(&tol)?, wall_clock)?;
                for line in &result.rejections {
                    eprintln!("rejected {line}");
                }
                experiments::write_bench(&result.rows, output(out.as_deref())?)?;
                let meta = serde_json::to_string_pretty(&result.meta)?;
                match out {
                    Some(p) => {
                        let mut name = p.into_os_string();
                        name.push(".meta.json");
                        std::fs::write(name, meta + "\n")?;
                    }
                    None => eprintln!("{meta}"),
                }
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", CliError::Parse(e.to_string().trim_end().to_string()).to_json());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
