//! Benchmark CLI: convergence sweeps, error-vs-time curves and chart
//! rendering for the exact propagator scheme and its RK4 comparator.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use laxspec::bench::{
    emit_svg, parse_config, run_convergence, run_error_vs_time, Axis, BenchError,
    ConvergenceReport, PlotSpec, ProblemSpec, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "laxspec",
    about = "Benchmark harness for exact-in-time spectral solvers \
             (Benjamin-Ono, Calogero-Sutherland, cubic Szego) and an RK4 baseline",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the truncation K and report errors against a reference.
    Convergence(RunArgs),
    /// Fix K and sweep the evaluation time t.
    ErrorVsTime(RunArgs),
    /// Render a CSV report as an SVG line chart.
    Plot(PlotArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration file (flat key = value lines).
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG chart of the sweep.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Worker-pool width (overrides the config file).
    #[arg(long)]
    jobs: Option<usize>,
    /// Random-data seed (overrides the config file).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct PlotArgs {
    /// Input CSV report.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output SVG path.
    #[arg(long)]
    svg: PathBuf,
    /// X-axis column: K, t, error or wall_seconds.
    #[arg(long, default_value = "K")]
    x: String,
    /// Y-axis column: K, t, error or wall_seconds.
    #[arg(long, default_value = "error")]
    y: String,
    /// Logarithmic x-axis.
    #[arg(long)]
    logx: bool,
    /// Logarithmic y-axis.
    #[arg(long)]
    logy: bool,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                BenchError::Divergence { .. } => ExitCode::from(3),
                BenchError::Config(_) | BenchError::Io(_) => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Convergence(args) => {
            let cfg = load_config(&args)?;
            let report = run_convergence(&cfg)?;
            finish_run(&args, &cfg, report, Axis::KModes)
        }
        Command::ErrorVsTime(args) => {
            let cfg = load_config(&args)?;
            let report = run_error_vs_time(&cfg)?;
            finish_run(&args, &cfg, report, Axis::Time)
        }
        Command::Plot(args) => {
            let report = ConvergenceReport::read_csv_path(&args.input)?;
            let spec = PlotSpec {
                x: Axis::parse(&args.x)?,
                y: Axis::parse(&args.y)?,
                logx: args.logx,
                logy: args.logy,
            };
            emit_svg(&report, &spec, &args.svg)?;
            println!("wrote chart to {}", args.svg.display());
            Ok(())
        }
    }
}

fn load_config(args: &RunArgs) -> Result<RunConfig, BenchError> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut cfg = parse_config(&text)?;
    if let Some(jobs) = args.jobs {
        cfg.jobs = jobs;
    }
    if let Some(seed) = args.seed {
        match &mut cfg.problem {
            ProblemSpec::Random(spec) => spec.seed = seed,
            ProblemSpec::TravelingWave { .. } => {
                return Err(BenchError::Config(
                    "--seed only applies to the random problem".into(),
                ));
            }
        }
    }
    Ok(cfg)
}

fn finish_run(
    args: &RunArgs,
    cfg: &RunConfig,
    report: ConvergenceReport,
    x_axis: Axis,
) -> Result<(), BenchError> {
    report.write_csv_path(&args.out)?;
    println!(
        "wrote {} rows ({} solvers, {} K values, {} t values) to {}",
        report.rows.len(),
        cfg.solvers.len(),
        cfg.k_list.len(),
        cfg.t_list.len(),
        args.out.display()
    );
    if let Some(svg_path) = &args.svg {
        let spec = PlotSpec {
            x: x_axis,
            y: Axis::Error,
            logx: true,
            logy: true,
        };
        emit_svg(&report, &spec, svg_path)?;
        println!("wrote chart to {}", svg_path.display());
    }
    Ok(())
}
