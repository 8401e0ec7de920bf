use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{ensure, Result};
use clap::{Parser, Subcommand};

use qjunction_cli::config::{Config, GridKind};
use qjunction_cli::plot::{emit_plot, PlotSpec};
use qjunction_cli::sweep::{resolve_threads, run_sweep, write_csv_file};
use qjunction_cli::{spectrum, validate};

#[derive(Parser)]
#[command(
    name = "qjunction",
    version,
    about = "Heat transport through quantum junctions"
)]
struct Cli {
    /// Log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write one CSV row per grid point.
    Sweep {
        config: PathBuf,
        /// Worker threads; falls back to LT_THREADS, then all cores.
        #[arg(short = 'j', long)]
        threads: Option<usize>,
        /// Override the CSV path from the config.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Override the SVG path from the config.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Eigenfrequencies, Q elements and closed-form spectra at the sweep start.
    Spectrum { config: PathBuf },
    /// Diagram enumeration utilities.
    Diagrams {
        #[command(subcommand)]
        command: DiagramsCommand,
    },
    /// Run the invariant suite; exits nonzero on any failure.
    Validate {
        /// Also run the Rabi-model transport checks.
        #[arg(long)]
        physics: bool,
    },
    /// Plot CSV columns to SVG.
    Plot {
        csv: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value = "value")]
        x: String,
        #[arg(long, num_args = 1.., default_value = "kappa_total")]
        y: Vec<String>,
        /// Divide x by this column.
        #[arg(long)]
        x_over: Option<String>,
        /// Divide every y series by this column.
        #[arg(long)]
        y_over: Option<String>,
        #[arg(long)]
        log_x: bool,
        #[arg(long)]
        log_y: bool,
        #[arg(long)]
        title: Option<String>,
    },
}

#[derive(Subcommand)]
enum DiagramsCommand {
    /// Print (total, irreducible) counts at perturbative order 2n.
    Count {
        #[arg(long)]
        order: usize,
    },
}

fn sweep(
    config: PathBuf,
    threads: Option<usize>,
    csv: Option<PathBuf>,
    svg: Option<PathBuf>,
) -> Result<ExitCode> {
    let cfg = Config::from_file(&config)?;
    let csv = csv.unwrap_or_else(|| cfg.output.csv.clone());
    let svg = svg.or_else(|| cfg.output.svg.clone());
    let threads = resolve_threads(threads);
    log::info!("{} points on {threads} threads", cfg.sweep.points);
    let out = run_sweep(&cfg, threads)?;
    write_csv_file(&out, &csv)?;
    if let Some(svg) = svg {
        let mut y = vec!["kappa2".to_string()];
        if cfg.kappa4_enabled() {
            y.extend(["kappa4".to_string(), "kappa_total".to_string()]);
        }
        let log = cfg.sweep.grid == GridKind::Log;
        let spec = PlotSpec {
            y,
            log_x: log,
            log_y: log,
            ..Default::default()
        };
        emit_plot(&csv, &spec, &svg)?;
    }
    let failures = out.failures();
    eprintln!(
        "wrote {} rows to {} ({failures} failed)",
        out.rows.len(),
        csv.display()
    );
    for r in out.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "  {} = {:e}: {}",
            out.variable,
            r.value,
            r.error.as_deref().unwrap_or("")
        );
    }
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sweep {
            config,
            threads,
            csv,
            svg,
        } => sweep(config, threads, csv, svg),
        Command::Spectrum { config } => {
            print!("{}", spectrum::report(&Config::from_file(&config)?)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Diagrams {
            command: DiagramsCommand::Count { order },
        } => {
            ensure!(
                order >= 2 && order % 2 == 0,
                "order must be a positive even number"
            );
            let (total, irreducible) = qjunction::diagrams::count_diagrams(order / 2)?;
            println!("order {order}: total {total}, irreducible {irreducible}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { physics } => {
            let mut checks = validate::invariant_suite();
            if physics {
                checks.extend(validate::rabi_physics());
            }
            print!("{}", validate::report(&checks));
            Ok(if checks.iter().all(|c| c.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Plot {
            csv,
            out,
            x,
            y,
            x_over,
            y_over,
            log_x,
            log_y,
            title,
        } => {
            let spec = PlotSpec {
                x,
                y,
                x_over,
                y_over,
                log_x,
                log_y,
                title,
            };
            emit_plot(&csv, &spec, &out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
