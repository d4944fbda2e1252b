use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nal::commands::{figure_cmd, induced_cmd, jacobian_cmd, qmu_cmd};
use nal::output::to_string;
use nal::plateau::{plateau_cmd, PlateauArgs};
use nal::suite::run_suite;

const EXIT_USAGE: u8 = 1;
const EXIT_NONCONVERGENCE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Areas, energies and discrete Plateau discs on normed planes.
#[derive(Parser, Debug)]
#[command(name = "nal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jacobian of an area definition at a norm.
    Jacobian {
        #[arg(long)]
        norm: String,
        #[arg(long)]
        area: String,
        /// Half-vertices used to polygonize analytic norms [default: 256].
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// SL₂-orbit minimization of an energy and the induced Jacobian.
    Induced {
        #[arg(long)]
        norm: String,
        #[arg(long)]
        energy: String,
        /// Orbit grid cells per axis.
        #[arg(long, default_value_t = nal_core::induced::ORBIT_RESOLUTION)]
        resolution: usize,
    },
    /// Seeded search for the infimum of J/J^i over a family of norms.
    Qmu {
        #[arg(long)]
        area: String,
        #[arg(long, default_value = "random:8")]
        family: String,
        #[arg(long, default_value_t = 400)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-candidate CSV output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Minimize an energy over PL discs spanning a boundary curve.
    Plateau {
        #[arg(long, default_value = "sup")]
        target: String,
        /// `square`, `circle[:M]` or a file with one point per line.
        /// `circle` alone has one point per boundary vertex of the mesh.
        #[arg(long, default_value = "square")]
        boundary: String,
        #[arg(long, default_value = "reshetnyak")]
        energy: String,
        #[arg(long, default_value_t = 4)]
        mesh_level: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Inner-variation trials.
        #[arg(long, default_value_t = 48)]
        trials: usize,
        #[arg(long)]
        max_iterations: Option<usize>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check the closed-form constants.
    Verify {
        #[arg(long)]
        json: bool,
        /// Include runtimes in the JSON report.
        #[arg(long)]
        timings: bool,
        /// Run one group (`lambda`, `induced`, `q`, `qc`, `jd`) or one check.
        #[arg(long)]
        only: Option<String>,
    },
    /// SVG overlay of a norm ball, its Loewner ellipse, minimal
    /// parallelogram and polar dual.
    Figure {
        #[arg(long)]
        norm: String,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(s: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(s.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(v: &serde_json::Value) -> anyhow::Result<()> {
    emit(&(to_string(v) + "\n"))
}

fn run(cmd: Command) -> anyhow::Result<u8> {
    match cmd {
        Command::Jacobian { norm, area, resolution } => print_json(&jacobian_cmd(&norm, &area, resolution)?)?,
        Command::Induced { norm, energy, resolution } => print_json(&induced_cmd(&norm, &energy, resolution)?)?,
        Command::Qmu { area, family, budget, seed, csv } => print_json(&qmu_cmd(&area, &family, budget, seed, csv.as_deref())?)?,
        Command::Plateau { target, boundary, energy, mesh_level, seed, trials, max_iterations, svg } => {
            let args = PlateauArgs { target, boundary, energy, mesh_level, seed, trials, max_iterations, svg };
            let run = plateau_cmd(&args)?;
            print_json(&run.report)?;
            if !run.converged {
                return Ok(EXIT_NONCONVERGENCE);
            }
        }
        Command::Verify { json, timings, only } => {
            let report = run_suite(only.as_deref())?;
            if json {
                print_json(&report.to_json(timings))?;
            } else {
                emit(&report.table())?;
            }
            if !report.all_pass() {
                return Ok(EXIT_VERIFY);
            }
        }
        Command::Figure { norm, resolution, svg } => {
            let s = figure_cmd(&norm, resolution)?;
            match svg {
                Some(path) => std::fs::write(path, s)?,
                None => emit(&s)?,
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    nal::init_threads();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<nal::NumericalFailure>() { EXIT_NONCONVERGENCE } else { EXIT_USAGE })
        }
    }
}
