//! Benchmark harness: convergence sweeps and error-vs-time curves over the
//! exact propagator scheme and the RK4 baseline, with CSV reports and SVG
//! charts behind a small CLI.

pub mod config;
pub mod svg;

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_complex::Complex64;

use crate::problems::{
    hardy_random_data, random_initial_data, traveling_wave_coeffs, RandomDataSpec,
};
use crate::rk4::{rk4_evolve, Rk4Config, Rk4Error};
use crate::scheme::{EquationKind, ExactSolver};
use crate::spectral::{sobolev_error, SpectralCoeffs, SymmetryClass};

pub use config::parse_config;
pub use svg::{emit_svg, render_svg, Axis, PlotSpec};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("rk4 diverged for {equation} at K={k_modes}, t={t} (step {step})")]
    Divergence {
        equation: EquationKind,
        k_modes: usize,
        t: f64,
        step: usize,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Which solver produced a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SolverKind {
    ExactScheme,
    Rk4,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::ExactScheme => "exact-scheme",
            SolverKind::Rk4 => "rk4",
        })
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact-scheme" => Ok(SolverKind::ExactScheme),
            "rk4" => Ok(SolverKind::Rk4),
            other => Err(format!(
                "unknown solver `{other}` (expected exact-scheme or rk4)"
            )),
        }
    }
}

/// Initial-data family for a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemSpec {
    /// The Benjamin-Ono traveling wave with speed `c`.
    TravelingWave { c: f64 },
    /// Randomized Sobolev-class data (real-valued for Benjamin-Ono,
    /// Hardy-class for the other equations).
    Random(RandomDataSpec),
}

/// What errors are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceSpec {
    /// The closed-form traveling wave (Benjamin-Ono only).
    Analytic,
    /// The exact scheme itself at a fine truncation `k_ref`.
    SelfAtKRef { k_ref: usize },
}

impl fmt::Display for ReferenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceSpec::Analytic => f.write_str("analytic"),
            ReferenceSpec::SelfAtKRef { k_ref } => write!(f, "self@{k_ref}"),
        }
    }
}

/// Full description of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub equation: EquationKind,
    pub problem: ProblemSpec,
    pub k_list: Vec<usize>,
    pub t_list: Vec<f64>,
    pub r_list: Vec<f64>,
    pub solvers: Vec<SolverKind>,
    pub reference: ReferenceSpec,
    /// CFL constant handed to the RK4 baseline.
    pub cfl_c: f64,
    /// Dealiasing toggle for the RK4 baseline.
    pub dealias: bool,
    /// `l^2` norm the initial data is rescaled to (default 1; random draws
    /// are already unit-normalized). Keeps focusing Calogero-Sutherland
    /// runs below the mass gate.
    pub amplitude: f64,
    /// Worker-pool width; 1 serializes all timing.
    pub jobs: usize,
}

impl RunConfig {
    fn validate(&self) -> Result<(), BenchError> {
        let cfg_err = |msg: String| Err(BenchError::Config(msg));
        for &k in &self.k_list {
            if k < 2 {
                return cfg_err(format!("K entries must be at least 2, got {k}"));
            }
        }
        for &t in &self.t_list {
            if !t.is_finite() || t < 0.0 {
                return cfg_err(format!("t entries must be finite and nonnegative, got {t}"));
            }
        }
        for &r in &self.r_list {
            if !r.is_finite() {
                return cfg_err(format!("r entries must be finite, got {r}"));
            }
        }
        if self.r_list.is_empty() {
            return cfg_err("r_list must not be empty".into());
        }
        if !self.cfl_c.is_finite() || self.cfl_c <= 0.0 {
            return cfg_err(format!("cfl_c must be positive, got {}", self.cfl_c));
        }
        if !self.amplitude.is_finite() || self.amplitude <= 0.0 {
            return cfg_err(format!("amplitude must be positive, got {}", self.amplitude));
        }
        if self.jobs == 0 {
            return cfg_err("jobs must be at least 1".into());
        }
        match self.problem {
            ProblemSpec::TravelingWave { c } => {
                if self.equation != EquationKind::BenjaminOno {
                    return cfg_err(format!(
                        "the traveling wave is a Benjamin-Ono solution; equation is {}",
                        self.equation
                    ));
                }
                if !c.is_finite() || c <= 1.0 {
                    return cfg_err(format!("traveling wave speed must exceed 1, got {c}"));
                }
            }
            ProblemSpec::Random(spec) => {
                if self.reference == ReferenceSpec::Analytic {
                    return cfg_err(
                        "random data has no analytic solution; use the self reference".into(),
                    );
                }
                if spec.theta <= 0.5 {
                    return cfg_err(format!("theta must exceed 1/2, got {}", spec.theta));
                }
                if spec.k_ref == 0 {
                    return cfg_err("k_ref must be positive".into());
                }
            }
        }
        if let ReferenceSpec::SelfAtKRef { k_ref } = self.reference {
            if let Some(&k_max) = self.k_list.iter().max() {
                if k_max > k_ref {
                    return cfg_err(format!(
                        "K entries must not exceed the reference truncation {k_ref}, got {k_max}"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// One measured point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub equation: EquationKind,
    pub solver: SolverKind,
    pub k_modes: usize,
    pub t: f64,
    pub r: f64,
    pub error: f64,
    pub wall_seconds: f64,
    pub reference: String,
}

pub const CSV_HEADER: &str = "equation,solver,K,t,r,error,wall_seconds,reference";

/// The rows of a sweep, sorted by (solver, K, t, r).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
}

impl ConvergenceReport {
    fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            (a.solver, a.k_modes)
                .cmp(&(b.solver, b.k_modes))
                .then(a.t.total_cmp(&b.t))
                .then(a.r.total_cmp(&b.r))
        });
    }

    /// Serializes with 17 significant digits, enough to round-trip `f64`.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for row in &self.rows {
            writeln!(
                w,
                "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                row.equation,
                row.solver,
                row.k_modes,
                row.t,
                row.r,
                row.error,
                row.wall_seconds,
                row.reference
            )?;
        }
        Ok(())
    }

    pub fn write_csv_path(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let mut file = std::fs::File::create(path)?;
        self.write_csv(&mut file)?;
        file.flush()
    }

    pub fn read_csv(r: impl BufRead) -> Result<Self, BenchError> {
        let bad = |line: usize, msg: String| {
            BenchError::Config(format!("csv line {}: {msg}", line + 1))
        };
        let mut lines = r.lines().enumerate();
        match lines.next() {
            Some((_, Ok(header))) if header.trim_end() == CSV_HEADER => {}
            Some((i, Ok(header))) => {
                return Err(bad(i, format!("unexpected header `{header}`")));
            }
            Some((_, Err(e))) => return Err(e.into()),
            None => return Err(BenchError::Config("empty csv".into())),
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let line = line?;
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(bad(i, format!("expected 8 fields, got {}", fields.len())));
            }
            let float = |s: &str, what: &str| {
                s.parse::<f64>()
                    .map_err(|e| bad(i, format!("bad {what} `{s}`: {e}")))
            };
            rows.push(ReportRow {
                equation: fields[0].parse().map_err(|e| bad(i, e))?,
                solver: fields[1].parse().map_err(|e| bad(i, e))?,
                k_modes: fields[2]
                    .parse()
                    .map_err(|e| bad(i, format!("bad K `{}`: {e}", fields[2])))?,
                t: float(fields[3], "t")?,
                r: float(fields[4], "r")?,
                error: float(fields[5], "error")?,
                wall_seconds: float(fields[6], "wall_seconds")?,
                reference: fields[7].to_string(),
            });
        }
        Ok(ConvergenceReport { rows })
    }

    pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Self, BenchError> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}

/// Convergence sweep: K varies, errors against the configured reference.
pub fn run_convergence(cfg: &RunConfig) -> Result<ConvergenceReport, BenchError> {
    execute(cfg)
}

/// Error-versus-time sweep: a single truncation, t varies. The exact scheme
/// solves each t independently (cost flat in t); RK4 steps from 0 to t
/// (cost linear in t).
pub fn run_error_vs_time(cfg: &RunConfig) -> Result<ConvergenceReport, BenchError> {
    if cfg.k_list.len() != 1 {
        return Err(BenchError::Config(format!(
            "error-vs-time runs use exactly one K, got {:?}",
            cfg.k_list
        )));
    }
    execute(cfg)
}

struct Job {
    solver: SolverKind,
    k_modes: usize,
    t_index: usize,
}

fn execute(cfg: &RunConfig) -> Result<ConvergenceReport, BenchError> {
    cfg.validate()?;
    let data = initial_data(cfg)?;
    let references = reference_solutions(cfg, &data)?;
    let mut jobs = Vec::new();
    for &solver in &cfg.solvers {
        for &k_modes in &cfg.k_list {
            for t_index in 0..cfg.t_list.len() {
                jobs.push(Job {
                    solver,
                    k_modes,
                    t_index,
                });
            }
        }
    }
    let results = run_pool(cfg.jobs, &jobs, |job| run_job(cfg, &data, &references, job));
    let mut rows = Vec::new();
    for result in results {
        rows.extend(result?);
    }
    let mut report = ConvergenceReport { rows };
    report.sort();
    Ok(report)
}

/// Full-resolution initial data: generated once, truncated per job.
fn initial_data(cfg: &RunConfig) -> Result<SpectralCoeffs, BenchError> {
    let len = match cfg.reference {
        ReferenceSpec::SelfAtKRef { k_ref } => k_ref,
        ReferenceSpec::Analytic => cfg.k_list.iter().copied().max().unwrap_or(2),
    };
    let data = match cfg.problem {
        ProblemSpec::TravelingWave { c } => traveling_wave_coeffs(c, 0.0, len)
            .map_err(|e| BenchError::Config(e.to_string()))?,
        ProblemSpec::Random(mut spec) => {
            spec.k_ref = len;
            let draw = match cfg.equation.data_class() {
                SymmetryClass::RealValued => random_initial_data(&spec),
                SymmetryClass::Hardy => hardy_random_data(&spec),
            };
            draw.map_err(|e| BenchError::Config(e.to_string()))?
        }
    };
    if cfg.amplitude == 1.0 {
        return Ok(data);
    }
    let amps: Vec<Complex64> = data.amps().iter().map(|a| a * cfg.amplitude).collect();
    SpectralCoeffs::new(data.kind(), amps).map_err(|e| BenchError::Config(e.to_string()))
}

/// Reference solutions, one per t entry, computed outside any timing.
fn reference_solutions(
    cfg: &RunConfig,
    data: &SpectralCoeffs,
) -> Result<Vec<SpectralCoeffs>, BenchError> {
    match cfg.reference {
        ReferenceSpec::Analytic => {
            let ProblemSpec::TravelingWave { c } = cfg.problem else {
                return Err(BenchError::Config(
                    "analytic reference requires the traveling-wave problem".into(),
                ));
            };
            // Long enough that the ignored analytic tail is far below
            // roundoff for every K in the sweep.
            let len = cfg
                .k_list
                .iter()
                .copied()
                .max()
                .unwrap_or(2)
                .saturating_mul(4)
                .max(256);
            cfg.t_list
                .iter()
                .map(|&t| {
                    let mut wave = traveling_wave_coeffs(c, t, len)
                        .map_err(|e| BenchError::Config(e.to_string()))?;
                    if cfg.amplitude != 1.0 {
                        let amps: Vec<Complex64> =
                            wave.amps().iter().map(|a| a * cfg.amplitude).collect();
                        wave = SpectralCoeffs::new(wave.kind(), amps)
                            .map_err(|e| BenchError::Config(e.to_string()))?;
                    }
                    Ok(wave)
                })
                .collect()
        }
        ReferenceSpec::SelfAtKRef { k_ref } => {
            let solver = ExactSolver::new(cfg.equation, data, k_ref)
                .map_err(|e| BenchError::Config(e.to_string()))?;
            cfg.t_list
                .iter()
                .map(|&t| {
                    solver
                        .evolve(t)
                        .map_err(|e| BenchError::Config(e.to_string()))
                })
                .collect()
        }
    }
}

/// Runs one (solver, K, t) cell: three timed solves, median wall time, one
/// row per requested Sobolev index.
fn run_job(
    cfg: &RunConfig,
    data: &SpectralCoeffs,
    references: &[SpectralCoeffs],
    job: &Job,
) -> Result<Vec<ReportRow>, BenchError> {
    let t = cfg.t_list[job.t_index];
    let mut times = [0.0f64; 3];
    let mut solution = None;
    for slot in &mut times {
        let start = Instant::now();
        let solved = solve_once(cfg, data, job.solver, job.k_modes, t)?;
        *slot = start.elapsed().as_secs_f64().max(1e-9);
        solution = Some(solved);
    }
    times.sort_by(f64::total_cmp);
    let wall_seconds = times[1];
    let solution = solution.expect("three repetitions ran");
    let reference = &references[job.t_index];
    cfg.r_list
        .iter()
        .map(|&r| {
            let error = sobolev_error(&solution, reference, r)
                .map_err(|e| BenchError::Config(e.to_string()))?;
            Ok(ReportRow {
                equation: cfg.equation,
                solver: job.solver,
                k_modes: job.k_modes,
                t,
                r,
                error,
                wall_seconds,
                reference: cfg.reference.to_string(),
            })
        })
        .collect()
}

fn solve_once(
    cfg: &RunConfig,
    data: &SpectralCoeffs,
    solver: SolverKind,
    k_modes: usize,
    t: f64,
) -> Result<SpectralCoeffs, BenchError> {
    match solver {
        SolverKind::ExactScheme => {
            let prepared = ExactSolver::new(cfg.equation, data, k_modes)
                .map_err(|e| BenchError::Config(e.to_string()))?;
            prepared
                .evolve(t)
                .map_err(|e| BenchError::Config(e.to_string()))
        }
        SolverKind::Rk4 => {
            let mut rk4_cfg = Rk4Config::new(k_modes, t);
            rk4_cfg.cfl_c = cfg.cfl_c;
            rk4_cfg.dealias = cfg.dealias;
            rk4_evolve(cfg.equation, data, &rk4_cfg).map_err(|e| match e {
                Rk4Error::Divergence { step, .. } => BenchError::Divergence {
                    equation: cfg.equation,
                    k_modes,
                    t,
                    step,
                },
                other => BenchError::Config(other.to_string()),
            })
        }
    }
}

/// Minimal fixed-width worker pool: items are claimed off an atomic counter;
/// remaining items are skipped once any worker reports an error.
fn run_pool<J: Sync, R: Send>(
    width: usize,
    items: &[J],
    work: impl Fn(&J) -> Result<R, BenchError> + Sync,
) -> Vec<Result<R, BenchError>> {
    let width = width.min(items.len()).max(1);
    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let slots: Vec<Mutex<Option<Result<R, BenchError>>>> =
        items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..width {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() || abort.load(Ordering::Relaxed) {
                    return;
                }
                let result = work(&items[i]);
                if result.is_err() {
                    abort.store(true, Ordering::Relaxed);
                }
                *slots[i].lock().expect("result slot poisoned") = Some(result);
            });
        }
    });
    let mut out = Vec::with_capacity(items.len());
    for slot in slots {
        match slot.into_inner().expect("result slot poisoned") {
            Some(result) => out.push(result),
            // Skipped after an abort: surface the abort cause instead.
            None => out.push(Err(BenchError::Config(
                "job skipped after an earlier failure".into(),
            ))),
        }
    }
    out
}
