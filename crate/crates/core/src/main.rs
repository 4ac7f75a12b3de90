use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use fidzero::models::{registry, LatticeKind, ModelKind};
use fidzero::sweep::{self, parse_config, SweepAxis, SweepError};

#[derive(Parser)]
#[command(
    name = "fidzero",
    version,
    about = "Exact zeros of ground-state fidelity under twisted boundary conditions"
)]
struct Cli {
    /// Worker threads for sweep points (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Suppress the summary line.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file.
    Sweep {
        config: PathBuf,
        /// Override `[output] path`.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List registered models and their parameters.
    Models,
    /// Regenerate the data behind one figure panel (or `all`).
    Reproduce {
        figure_id: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Sweep the twist flux; the analytic critical fluxes are always included.
    ScanFlux {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sweep the system size and fit alpha against 1/L.
    Scaling {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn print_models() {
    for e in registry() {
        let lattice = match e.kind {
            ModelKind::Band(LatticeKind::Chain) => "chain",
            ModelKind::Band(LatticeKind::Honeycomb) => "honeycomb",
            ModelKind::Interacting => "chain (exact diagonalization)",
        };
        println!("{}: {}", e.name, e.description);
        println!("  lattice: {lattice}");
        println!(
            "  driving parameter: {} (second point: {}_tilde)",
            e.driving, e.driving
        );
        println!(
            "  alpha_prime: {}",
            if e.supports_alpha_prime {
                "supported"
            } else {
                "unsupported"
            }
        );
        println!("  flux: {}", e.flux_axes);
        for p in e.params {
            println!("  {} = {}  {}", p.name, p.default, p.doc);
        }
    }
}

fn run_config(
    path: &PathBuf,
    output: Option<PathBuf>,
    axis: Option<SweepAxis>,
    command: &str,
    workers: usize,
    quiet: bool,
) -> Result<(), SweepError> {
    let text = fs::read_to_string(path)
        .map_err(|e| SweepError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut config = parse_config(&text, axis)
        .map_err(|e| SweepError::Config(format!("{}: {e}", path.display())))?;
    if let Some(out) = output {
        config.output_path = out;
    }
    let start = Instant::now();
    let outcome = sweep::run_sweep(&config)?;
    let meta = sweep::RunMeta {
        command: command.to_string(),
        workers,
        wall_time: start.elapsed(),
    };
    sweep::write_outputs(&config, &outcome, &meta)?;
    if !quiet {
        println!("{}", sweep::summary(&config, &outcome));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    let workers = rayon::current_num_threads();
    let result = match cli.command {
        Command::Models => {
            print_models();
            Ok(())
        }
        Command::Sweep { config, output } => {
            run_config(&config, output, None, "sweep", workers, cli.quiet)
        }
        Command::ScanFlux { config, output } => run_config(
            &config,
            output,
            Some(SweepAxis::Flux),
            "scan-flux",
            workers,
            cli.quiet,
        ),
        Command::Scaling { config, output } => run_config(
            &config,
            output,
            Some(SweepAxis::Size),
            "scaling",
            workers,
            cli.quiet,
        ),
        Command::Reproduce { figure_id, out_dir } => {
            sweep::reproduce(&figure_id, &out_dir, workers).map(|reps| {
                if !cli.quiet {
                    for r in reps {
                        for s in r.summaries {
                            println!("{}: {s}", r.id);
                        }
                    }
                }
            })
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
