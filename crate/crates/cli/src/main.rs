use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nisim::bounds::combined_report_with;
use nisim::oracle::{
    exhaustive_extremes, local_search, Direction, LocalSearchConfig, Objective, OracleResult,
};
use nisim_cli::config::load_config;
use nisim_cli::curve::{curve_dataset, default_grid, write_csv};
use nisim_cli::render::{bounds_text, oracle_summary, to_json, verify_text};
use nisim_cli::verify::{run_verify, VerifyConfig, DEFAULT_DIMS, DEFAULT_TRIALS};
use nisim_cli::{exit, CliError, Result};

/// Environment variable fixing the worker thread count.
const THREADS_ENV: &str = "NIS_THREADS";

#[derive(Parser)]
#[command(
    name = "nisim",
    version,
    about = "Bounds, curves, extremal searches and identity checks for non-interactive simulation of binary codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Collision,
    Distance,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Local,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Max,
    Min,
}

#[derive(Subcommand)]
enum Command {
    /// Every bound family on q for marginals (a, b) and correlation rho.
    Bounds {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// key = value file overriding optimizer defaults.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// CSV of symmetric (a = b) bound curves at fixed rho.
    Curve {
        #[arg(long)]
        rho: f64,
        /// Comma-separated marginals in (0, 1/2]; defaults to a log grid on
        /// [0.02, 0.5] plus the dyadic points 1/2, …, 1/32.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Extremal collision probability or average distance over code pairs.
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long = "M")]
        m: usize,
        #[arg(long = "N")]
        k: usize,
        /// Required for the collision objective.
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<f64>,
        #[arg(long, value_enum, default_value = "collision")]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        /// Extremum pursued by local search.
        #[arg(long, value_enum, default_value = "max")]
        direction: DirectionArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = LocalSearchConfig::default().restarts)]
        restarts: usize,
        /// Write the JSON result here and print a summary instead.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write witness codes here in the code file format.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Randomized identity suite; exits 1 if any identity fails.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random code pairs per dimension.
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_DIMS)]
        dims: Vec<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Perturb the named identity family (harness self-test).
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => write_file(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_witnesses(dir: &Path, r: &OracleResult) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for (tag, w) in [("max", &r.max_witness), ("min", &r.min_witness)] {
        if let Some(w) = w {
            write_file(&dir.join(format!("{tag}_a.code")), w.a.to_code_file().as_bytes())?;
            write_file(&dir.join(format!("{tag}_b.code")), w.b.to_code_file().as_bytes())?;
        }
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_ENV}={value:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} threads: {e}")))
}

fn run(cli: Cli) -> Result<u8> {
    configure_threads()?;
    match cli.command {
        Command::Bounds {
            a,
            b,
            rho,
            format,
            config,
        } => {
            let cfg = load_config(config.as_deref())?;
            let report = combined_report_with(a, b, rho, &cfg)?;
            let text = match format {
                Format::Json => to_json(&report)?,
                Format::Text => bounds_text(&report),
            };
            emit(None, &text)?;
        }
        Command::Curve {
            rho,
            grid,
            output,
            config,
        } => {
            let cfg = load_config(config.as_deref())?;
            let grid = grid.unwrap_or_else(default_grid);
            let data = curve_dataset(rho, &grid, &cfg)?;
            let mut buf = Vec::new();
            write_csv(&data, &mut buf)?;
            match output {
                Some(p) => write_file(&p, &buf)?,
                None => std::io::stdout().write_all(&buf).map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?,
            }
        }
        Command::Oracle {
            n,
            m,
            k,
            rho,
            objective,
            mode,
            direction,
            seed,
            restarts,
            output,
            witness_dir,
        } => {
            let objective = match (objective, rho) {
                (ObjectiveArg::Collision, Some(rho)) => Objective::Collision { rho },
                (ObjectiveArg::Collision, None) => {
                    return Err(CliError::Usage("--rho is required for the collision objective".into()))
                }
                (ObjectiveArg::Distance, _) => Objective::Distance,
            };
            let result = match mode {
                Mode::Exhaustive => exhaustive_extremes(n, m, k, objective)?,
                Mode::Local => {
                    let cfg = LocalSearchConfig {
                        seed,
                        restarts,
                        ..LocalSearchConfig::default()
                    };
                    let direction = match direction {
                        DirectionArg::Max => Direction::Max,
                        DirectionArg::Min => Direction::Min,
                    };
                    local_search(n, m, k, objective, direction, &cfg)?
                }
            };
            if let Some(dir) = witness_dir {
                write_witnesses(&dir, &result)?;
            }
            let json = to_json(&result)?;
            match output {
                Some(p) => {
                    write_file(&p, json.as_bytes())?;
                    print!("{}", oracle_summary(&result));
                }
                None => print!("{json}"),
            }
        }
        Command::Verify {
            seed,
            trials,
            dims,
            format,
            output,
            inject_fault,
        } => {
            let cfg = VerifyConfig {
                seed,
                trials,
                dims,
                inject_fault,
            };
            let report = run_verify(&cfg)?;
            let text = match format {
                Format::Json => to_json(&report)?,
                Format::Text => verify_text(&report),
            };
            emit(output.as_deref(), &text)?;
            if !report.passed {
                for f in &report.failures {
                    eprintln!("identity failed: {} (n={}, trial={}): {}", f.family, f.n, f.trial, f.message);
                }
                return Ok(exit::VERIFY_FAILED);
            }
        }
    }
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
