//! Pseudo-spectral RK4 baseline solver.
//!
//! The classical comparator for the exact propagator scheme: the equations
//! are written as stiff ODE systems for the Fourier coefficients — linear
//! dispersion applied diagonally, nonlinear terms evaluated pointwise on a
//! zero-padded collocation grid — and integrated with the classical 4-stage
//! Runge-Kutta method under a CFL time-step restriction.
//!
//! Right-hand sides (`Pi` is the projection onto non-negative modes):
//!
//! * Benjamin-Ono: `u_t = d_x(|D|u - u^2)`, multiplier `i k |k|`.
//! * Calogero-Sutherland: `u_t = i u_xx +/- 2 u d_x Pi(|u|^2)`,
//!   multiplier `-i k^2`; `+` is the focusing sign.
//! * cubic Szego: `u_t = -i Pi(|u|^2 u)`, no linear part.

use num_complex::Complex64;

use crate::fft::FftPlan;
use crate::scheme::{CsSign, EquationKind};
use crate::spectral::{project_truncate, SpectralCoeffs, SpectralError, SymmetryClass};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Any coefficient magnitude beyond this aborts the integration.
const BLOW_UP: f64 = 1e8;

/// Time-stepping parameters.
///
/// The step is tied to the spacing `h = pi / K` of the `2K`-point collocation
/// grid that resolves `K` modes: `tau = cfl_c * h^2` for the second-order
/// dispersion of Benjamin-Ono and Calogero-Sutherland, `tau = cfl_c * h` for
/// the dispersionless Szego equation, then rounded down so the final time is
/// an integer number of steps. At the default `cfl_c = 1/4` the top mode
/// sits at `|tau * k^2| < pi^2/4 ~ 2.47`, inside the RK4 imaginary-axis
/// stability interval `(0, 2*sqrt(2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk4Config {
    /// Number of retained non-negative modes.
    pub k_modes: usize,
    /// Final time `T >= 0`.
    pub t_final: f64,
    /// CFL constant, default `1/4`.
    pub cfl_c: f64,
    /// Zero-pad the product grids so band-limited products are alias-free
    /// (default). Disabling reproduces a plain collocation comparator.
    pub dealias: bool,
}

impl Rk4Config {
    pub fn new(k_modes: usize, t_final: f64) -> Self {
        Rk4Config {
            k_modes,
            t_final,
            cfl_c: 0.25,
            dealias: true,
        }
    }

    fn validate(&self) -> Result<(), Rk4Error> {
        if self.k_modes == 0 {
            return Err(Rk4Error::BadConfig("k_modes must be at least 1".into()));
        }
        if !self.t_final.is_finite() || self.t_final < 0.0 {
            return Err(Rk4Error::BadConfig(format!(
                "t_final must be finite and nonnegative, got {}",
                self.t_final
            )));
        }
        if !self.cfl_c.is_finite() || self.cfl_c <= 0.0 {
            return Err(Rk4Error::BadConfig(format!(
                "cfl_c must be finite and positive, got {}",
                self.cfl_c
            )));
        }
        Ok(())
    }

    /// Number of steps and step size for `eq`: the largest CFL-admissible
    /// step shrunk so `t_final` is hit exactly.
    pub fn steps(&self, eq: EquationKind) -> (usize, f64) {
        let h = std::f64::consts::PI / self.k_modes as f64;
        let tau_raw = match eq {
            EquationKind::BenjaminOno | EquationKind::CalogeroSutherland { .. } => {
                self.cfl_c * h * h
            }
            EquationKind::Szego => self.cfl_c * h,
        };
        if self.t_final == 0.0 {
            return (0, 0.0);
        }
        let n = (self.t_final / tau_raw).ceil().max(1.0) as usize;
        (n, self.t_final / n as f64)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Rk4Error {
    #[error("{equation} needs {expected} data, got {got}")]
    KindMismatch {
        equation: EquationKind,
        expected: SymmetryClass,
        got: SymmetryClass,
    },
    #[error("invalid RK4 configuration: {0}")]
    BadConfig(String),
    #[error(
        "solution diverged at step {step}: max coefficient magnitude {max_abs:.3e} \
         (threshold {BLOW_UP:.0e})"
    )]
    Divergence { step: usize, max_abs: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Scratch buffers and FFT plan for evaluating one equation's right-hand
/// side at a fixed truncation.
struct RhsWorkspace {
    eq: EquationKind,
    plan: FftPlan,
    /// Grid samples of `u`.
    grid_u: Vec<Complex64>,
    /// Grid/coefficient scratch for the nonlinear products.
    scratch: Vec<Complex64>,
}

impl RhsWorkspace {
    fn new(eq: EquationKind, k_modes: usize, dealias: bool) -> Result<Self, Rk4Error> {
        // Alias-free minimum grid sizes for reading modes 0..K-1 of the
        // products: a quadratic product of K-mode data spreads over
        // |k| <= 2K-2, so 3K-2 points separate it from the wrap-around; the
        // Szego cubic spreads over -(K-1)..2K-2, two-sided width 3K-2, and
        // 4K points keep every product mode representable outright.
        let min_points = if dealias {
            match eq {
                EquationKind::BenjaminOno | EquationKind::CalogeroSutherland { .. } => {
                    (3 * k_modes - 2).max(2 * k_modes)
                }
                EquationKind::Szego => 4 * k_modes,
            }
        } else {
            2 * k_modes
        };
        let n = min_points.next_power_of_two();
        Ok(RhsWorkspace {
            eq,
            plan: FftPlan::new(n)?,
            grid_u: vec![ZERO; n],
            scratch: vec![ZERO; n],
        })
    }

    /// Synthesizes grid samples of the function with truncated coefficients
    /// `amps` into `buf` (negative modes by conjugation for real-valued data).
    fn synthesize(plan: &FftPlan, buf: &mut [Complex64], amps: &[Complex64], kind: SymmetryClass) {
        let n = buf.len();
        buf.fill(ZERO);
        buf[..amps.len()].copy_from_slice(amps);
        if kind == SymmetryClass::RealValued {
            for (k, a) in amps.iter().enumerate().skip(1) {
                buf[n - k] = a.conj();
            }
        }
        plan.inverse(buf).expect("buffer sized to the plan");
    }

    /// Writes `du/dt` for coefficients `amps` into `out` (both length `K`).
    fn eval(&mut self, amps: &[Complex64], out: &mut [Complex64]) {
        match self.eq {
            EquationKind::BenjaminOno => {
                Self::synthesize(&self.plan, &mut self.grid_u, amps, SymmetryClass::RealValued);
                for (dst, u) in self.scratch.iter_mut().zip(&self.grid_u) {
                    *dst = u * u;
                }
                self.plan
                    .forward(&mut self.scratch)
                    .expect("scratch sized to the plan");
                for (k, slot) in out.iter_mut().enumerate() {
                    let kf = k as f64;
                    *slot = I * kf * (kf * amps[k] - self.scratch[k]);
                }
            }
            EquationKind::CalogeroSutherland { sign } => {
                let s = match sign {
                    CsSign::Focusing => 2.0,
                    CsSign::Defocusing => -2.0,
                };
                Self::synthesize(&self.plan, &mut self.grid_u, amps, SymmetryClass::Hardy);
                for (dst, u) in self.scratch.iter_mut().zip(&self.grid_u) {
                    *dst = Complex64::new(u.norm_sqr(), 0.0);
                }
                self.plan
                    .forward(&mut self.scratch)
                    .expect("scratch sized to the plan");
                // d_x Pi(|u|^2) has exactly the modes 1..K-1: |u|^2 spreads
                // over |k| <= K-1 and the derivative kills the mean.
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = I * k as f64 * self.scratch[k];
                }
                Self::synthesize(&self.plan, &mut self.scratch, out, SymmetryClass::Hardy);
                for (dst, u) in self.scratch.iter_mut().zip(&self.grid_u) {
                    *dst *= u;
                }
                self.plan
                    .forward(&mut self.scratch)
                    .expect("scratch sized to the plan");
                for (k, slot) in out.iter_mut().enumerate() {
                    let kf = k as f64;
                    *slot = -I * kf * kf * amps[k] + s * self.scratch[k];
                }
            }
            EquationKind::Szego => {
                Self::synthesize(&self.plan, &mut self.grid_u, amps, SymmetryClass::Hardy);
                for (dst, u) in self.scratch.iter_mut().zip(&self.grid_u) {
                    *dst = u * u.norm_sqr();
                }
                self.plan
                    .forward(&mut self.scratch)
                    .expect("scratch sized to the plan");
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = -I * self.scratch[k];
                }
            }
        }
    }
}

fn check_kind(eq: EquationKind, u: &SpectralCoeffs) -> Result<(), Rk4Error> {
    let expected = eq.data_class();
    if u.kind() != expected {
        return Err(Rk4Error::KindMismatch {
            equation: eq,
            expected,
            got: u.kind(),
        });
    }
    Ok(())
}

/// The Fourier-space time derivative `du/dt` at truncation `u.mode_count()`,
/// with alias-free products.
pub fn rhs(eq: EquationKind, u: &SpectralCoeffs) -> Result<SpectralCoeffs, Rk4Error> {
    check_kind(eq, u)?;
    let k_modes = u.mode_count();
    let mut ws = RhsWorkspace::new(eq, k_modes, true)?;
    let mut out = vec![ZERO; k_modes];
    ws.eval(u.amps(), &mut out);
    Ok(SpectralCoeffs::new(u.kind(), out)?)
}

/// Classical RK4 loop over `f`; `step` indexes the divergence report.
fn rk4_loop(
    y: &mut [Complex64],
    n_steps: usize,
    tau: f64,
    mut f: impl FnMut(&[Complex64], &mut [Complex64]),
) -> Result<(), Rk4Error> {
    let n = y.len();
    let mut k1 = vec![ZERO; n];
    let mut k2 = vec![ZERO; n];
    let mut k3 = vec![ZERO; n];
    let mut k4 = vec![ZERO; n];
    let mut stage = vec![ZERO; n];
    for step in 0..n_steps {
        f(y, &mut k1);
        for j in 0..n {
            stage[j] = y[j] + 0.5 * tau * k1[j];
        }
        f(&stage, &mut k2);
        for j in 0..n {
            stage[j] = y[j] + 0.5 * tau * k2[j];
        }
        f(&stage, &mut k3);
        for j in 0..n {
            stage[j] = y[j] + tau * k3[j];
        }
        f(&stage, &mut k4);
        for j in 0..n {
            y[j] += tau / 6.0 * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]);
        }
        let max_abs = y.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        // Written so NaN fails the comparison and trips the guard too.
        if !(max_abs <= BLOW_UP) {
            return Err(Rk4Error::Divergence { step, max_abs });
        }
    }
    Ok(())
}

/// Integrates `u0` (truncated to `cfg.k_modes`) from `t = 0` to
/// `cfg.t_final`. Cost is `O((T/tau) * K log K)`, growing linearly with the
/// final time — the foil to the time-independent exact scheme.
pub fn rk4_evolve(
    eq: EquationKind,
    u0: &SpectralCoeffs,
    cfg: &Rk4Config,
) -> Result<SpectralCoeffs, Rk4Error> {
    check_kind(eq, u0)?;
    cfg.validate()?;
    let truncated = project_truncate(u0, cfg.k_modes);
    let (n_steps, tau) = cfg.steps(eq);
    if n_steps == 0 {
        return Ok(truncated);
    }
    let mut ws = RhsWorkspace::new(eq, cfg.k_modes, cfg.dealias)?;
    let mut y = truncated.amps().to_vec();
    rk4_loop(&mut y, n_steps, tau, |amps, out| {
        ws.eval(amps, out);
        if eq.data_class() == SymmetryClass::RealValued {
            debug_assert!(
                out[0].im.abs() <= 1e-30,
                "real-valued symmetry broken: mean derivative {}",
                out[0]
            );
        }
    })?;
    Ok(SpectralCoeffs::new(u0.kind(), y)?)
}
