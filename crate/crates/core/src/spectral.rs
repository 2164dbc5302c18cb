//! Truncated Fourier states on the torus and the operations the solvers share.
//!
//! A state stores only the non-negative frequencies `u_hat(0..K-1)`. What the
//! negative frequencies are is determined by the symmetry class:
//! real-valued functions satisfy `u_hat(-k) = conj(u_hat(k))`, Hardy-space
//! functions (only non-negative frequencies) have them identically zero.
//! Sobolev norms, grid transforms and the CSV exchange format all honor the
//! implicit negative half of the spectrum.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::fft::FftPlan;

/// Symmetry class of the implicit negative frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryClass {
    /// `u_hat(-k) = conj(u_hat(k))`; the function is real on the grid and
    /// `u_hat(0)` must be real.
    RealValued,
    /// `u_hat(k) = 0` for `k < 0`; the function lives in the Hardy space.
    Hardy,
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryClass::RealValued => write!(f, "RealValued"),
            SymmetryClass::Hardy => write!(f, "Hardy"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("transform length {n} is not a power of two")]
    NotPowerOfTwo { n: usize },
    #[error("buffer length {got} does not match plan size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("grid of {n} points cannot carry {modes} modes without aliasing (need n >= 2*modes)")]
    GridTooSmall { n: usize, modes: usize },
    #[error("a state needs at least one mode")]
    EmptyCoeffs,
    #[error("amplitudes must be finite")]
    NonFinite,
    #[error("real-valued states require a real mean: u_hat(0) = {0}")]
    ComplexMean(Complex64),
    #[error("symmetry classes differ ({a} vs {b})")]
    KindMismatch { a: SymmetryClass, b: SymmetryClass },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed coefficient file: {0}")]
    Parse(String),
}

/// Fourier amplitudes `u_hat(0), ..., u_hat(K-1)` plus their symmetry class.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs {
    kind: SymmetryClass,
    amps: Vec<Complex64>,
}

impl SpectralCoeffs {
    /// Validates and wraps amplitudes. `K = amps.len()` must be positive, all
    /// entries finite, and real-valued states must have a real mean.
    pub fn new(kind: SymmetryClass, amps: Vec<Complex64>) -> Result<Self, SpectralError> {
        if amps.is_empty() {
            return Err(SpectralError::EmptyCoeffs);
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        if kind == SymmetryClass::RealValued && amps[0].im != 0.0 {
            return Err(SpectralError::ComplexMean(amps[0]));
        }
        Ok(SpectralCoeffs { kind, amps })
    }

    pub fn real_valued(amps: Vec<Complex64>) -> Result<Self, SpectralError> {
        Self::new(SymmetryClass::RealValued, amps)
    }

    pub fn hardy(amps: Vec<Complex64>) -> Result<Self, SpectralError> {
        Self::new(SymmetryClass::Hardy, amps)
    }

    /// The zero state with `k_modes` modes.
    pub fn zeros(kind: SymmetryClass, k_modes: usize) -> Self {
        assert!(k_modes > 0, "a state needs at least one mode");
        SpectralCoeffs {
            kind,
            amps: vec![Complex64::new(0.0, 0.0); k_modes],
        }
    }

    pub fn kind(&self) -> SymmetryClass {
        self.kind
    }

    /// Number of stored (non-negative) modes.
    pub fn mode_count(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// `u_hat(k)` for any integer `k`, honoring the symmetry class and
    /// returning zero beyond the truncation.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        if k >= 0 {
            self.amps
                .get(k as usize)
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0))
        } else {
            match self.kind {
                SymmetryClass::RealValued => self.coefficient(-k).conj(),
                SymmetryClass::Hardy => Complex64::new(0.0, 0.0),
            }
        }
    }

    /// `L^2` norm, i.e. the Sobolev norm with `r = 0`.
    pub fn l2_norm(&self) -> f64 {
        sobolev_norm(self, 0.0)
    }
}

/// Keeps modes `0..k_modes`, zero-padding when the target is wider. The
/// symmetry class is preserved; on the shared modes the amplitudes are copied
/// bit for bit.
pub fn project_truncate(f: &SpectralCoeffs, k_modes: usize) -> SpectralCoeffs {
    assert!(k_modes > 0, "a state needs at least one mode");
    let mut amps = vec![Complex64::new(0.0, 0.0); k_modes];
    let shared = k_modes.min(f.mode_count());
    amps[..shared].copy_from_slice(&f.amps()[..shared]);
    SpectralCoeffs {
        kind: f.kind(),
        amps,
    }
}

fn sobolev_weight(k: usize, r: f64) -> f64 {
    let k = k as f64;
    if r == 0.0 {
        1.0
    } else {
        (1.0 + k * k).powf(r)
    }
}

/// `H^r` norm `sqrt(sum_k (1+k^2)^r |u_hat(k)|^2)` over the full spectrum,
/// counting the implicit negative frequencies of real-valued states.
pub fn sobolev_norm(f: &SpectralCoeffs, r: f64) -> f64 {
    let mut sum = 0.0;
    for (k, a) in f.amps().iter().enumerate() {
        let mult = if k > 0 && f.kind() == SymmetryClass::RealValued {
            2.0
        } else {
            1.0
        };
        sum += mult * sobolev_weight(k, r) * a.norm_sqr();
    }
    sum.sqrt()
}

/// `H^r` distance between two states of the same symmetry class; the shorter
/// state is zero-padded so different truncations compare directly.
pub fn sobolev_error(a: &SpectralCoeffs, b: &SpectralCoeffs, r: f64) -> Result<f64, SpectralError> {
    if a.kind() != b.kind() {
        return Err(SpectralError::KindMismatch {
            a: a.kind(),
            b: b.kind(),
        });
    }
    let modes = a.mode_count().max(b.mode_count());
    let zero = Complex64::new(0.0, 0.0);
    let mut sum = 0.0;
    for k in 0..modes {
        let da = a.amps().get(k).copied().unwrap_or(zero);
        let db = b.amps().get(k).copied().unwrap_or(zero);
        let mult = if k > 0 && a.kind() == SymmetryClass::RealValued {
            2.0
        } else {
            1.0
        };
        sum += mult * sobolev_weight(k, r) * (da - db).norm_sqr();
    }
    Ok(sum.sqrt())
}

/// Samples the state on the `n`-point grid `x_j = -pi + 2 pi j / n`.
///
/// `n` must be a power of two with `n >= 2 * mode_count` so the implicit
/// negative frequencies of real-valued states fit without aliasing.
/// Real-valued states produce samples whose imaginary parts vanish to
/// roundoff.
pub fn to_grid(f: &SpectralCoeffs, n: usize) -> Result<Vec<Complex64>, SpectralError> {
    let plan = FftPlan::new(n)?;
    let k_modes = f.mode_count();
    if n < 2 * k_modes {
        return Err(SpectralError::GridTooSmall { n, modes: k_modes });
    }
    let mut bins = vec![Complex64::new(0.0, 0.0); n];
    bins[..k_modes].copy_from_slice(f.amps());
    if f.kind() == SymmetryClass::RealValued {
        for k in 1..k_modes {
            bins[n - k] = f.amps()[k].conj();
        }
    }
    plan.inverse(&mut bins)?;
    Ok(bins)
}

/// Recovers `k_modes` coefficients from grid samples; inverts [`to_grid`] on
/// band-limited input. For real-valued states the conjugate pair of bins is
/// averaged and the mean forced real, which projects roundoff off the
/// symmetry constraint.
pub fn from_grid(
    samples: &[Complex64],
    kind: SymmetryClass,
    k_modes: usize,
) -> Result<SpectralCoeffs, SpectralError> {
    if k_modes == 0 {
        return Err(SpectralError::EmptyCoeffs);
    }
    let n = samples.len();
    let plan = FftPlan::new(n)?;
    if n < 2 * k_modes {
        return Err(SpectralError::GridTooSmall { n, modes: k_modes });
    }
    let mut bins = samples.to_vec();
    plan.forward(&mut bins)?;
    let amps: Vec<Complex64> = match kind {
        SymmetryClass::Hardy => bins[..k_modes].to_vec(),
        SymmetryClass::RealValued => (0..k_modes)
            .map(|k| {
                if k == 0 {
                    Complex64::new(bins[0].re, 0.0)
                } else {
                    0.5 * (bins[k] + bins[n - k].conj())
                }
            })
            .collect(),
    };
    SpectralCoeffs::new(kind, amps)
}

fn format_f64(x: f64) -> String {
    // 17 significant digits: enough to round-trip any f64.
    format!("{x:.16e}")
}

/// Writes the coefficient exchange format: a metadata comment, a `k,re,im`
/// header and one row per stored mode, 17 significant digits per value.
pub fn write_coeffs_csv(f: &SpectralCoeffs, path: &Path) -> Result<(), SpectralError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "# kind={} K={}", f.kind(), f.mode_count())?;
    writeln!(out, "k,re,im")?;
    for (k, a) in f.amps().iter().enumerate() {
        writeln!(out, "{k},{},{}", format_f64(a.re), format_f64(a.im))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads the format produced by [`write_coeffs_csv`].
pub fn read_coeffs_csv(path: &Path) -> Result<SpectralCoeffs, SpectralError> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut lines = file.lines();
    let meta = lines
        .next()
        .ok_or_else(|| SpectralError::Parse("empty file".into()))??;
    let meta = meta
        .strip_prefix('#')
        .ok_or_else(|| SpectralError::Parse("missing `# kind=... K=...` metadata line".into()))?
        .trim();
    let mut kind = None;
    let mut k_modes = None;
    for token in meta.split_whitespace() {
        if let Some(v) = token.strip_prefix("kind=") {
            kind = Some(match v {
                "RealValued" => SymmetryClass::RealValued,
                "Hardy" => SymmetryClass::Hardy,
                other => {
                    return Err(SpectralError::Parse(format!("unknown kind `{other}`")));
                }
            });
        } else if let Some(v) = token.strip_prefix("K=") {
            k_modes = Some(
                v.parse::<usize>()
                    .map_err(|e| SpectralError::Parse(format!("bad K: {e}")))?,
            );
        }
    }
    let kind = kind.ok_or_else(|| SpectralError::Parse("metadata lacks kind=".into()))?;
    let k_modes = k_modes.ok_or_else(|| SpectralError::Parse("metadata lacks K=".into()))?;
    let header = lines
        .next()
        .ok_or_else(|| SpectralError::Parse("missing header".into()))??;
    if header.trim() != "k,re,im" {
        return Err(SpectralError::Parse(format!(
            "expected header `k,re,im`, got `{header}`"
        )));
    }
    let mut amps = Vec::with_capacity(k_modes);
    for (row, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let k: usize = fields
            .next()
            .ok_or_else(|| SpectralError::Parse("missing k".into()))?
            .trim()
            .parse()
            .map_err(|e| SpectralError::Parse(format!("row {row}: bad k: {e}")))?;
        if k != row {
            return Err(SpectralError::Parse(format!(
                "row {row} carries mode {k}; modes must be consecutive from 0"
            )));
        }
        let mut float = |name: &str| -> Result<f64, SpectralError> {
            fields
                .next()
                .ok_or_else(|| SpectralError::Parse(format!("row {row}: missing {name}")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| SpectralError::Parse(format!("row {row}: bad {name}: {e}")))
        };
        let re = float("re")?;
        let im = float("im")?;
        amps.push(Complex64::new(re, im));
    }
    if amps.len() != k_modes {
        return Err(SpectralError::Parse(format!(
            "metadata promises K={k_modes} but file holds {} rows",
            amps.len()
        )));
    }
    SpectralCoeffs::new(kind, amps)
}
