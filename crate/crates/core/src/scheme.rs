//! Exact-in-time evolution of the Benjamin-Ono, Calogero-Sutherland and
//! cubic Szego equations on the torus.
//!
//! For each equation the flow restricted to the first `K` non-negative modes
//! has a closed propagator form built from two Hermitian matrices `A` and `M`
//! that depend only on the initial data:
//!
//! ```text
//! u_hat_K(t, k) = e_0 . ( e^{-i t M} e^{i t A} S* )^k  e^{-i t M} u0,   k = 0..K-1
//! ```
//!
//! where `S*` drops the zeroth coefficient and shifts the rest down by one.
//! One evolution therefore costs one eigendecomposition plus `K` propagator
//! applications, `O(K^3)` in total and independent of `t`.
//!
//! The matrix recipes (with `D = diag(0..K-1)`, `T` the Toeplitz matrix
//! `T[k][l] = u0_hat(k-l)`, `H` the Hankel matrix `H[k][l] = u0_hat(k+l)`):
//!
//! * Benjamin-Ono (real-valued data): `A = I + 2D - 2T`, `M = 0`.
//! * Calogero-Sutherland (Hardy data): `A = -I - 2D +/- 2 T T^dagger`,
//!   `M = 0`; `+` is the focusing sign, `-` the defocusing sign.
//! * cubic Szego (Hardy data): `A = H H^dagger - u0 u0^dagger`,
//!   `M = H H^dagger`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::eig::{
    eigendecompose, EigError, EigenFactorization, HermitianMatrix, PhaseSign, UnitaryPropagator,
};
use crate::spectral::{project_truncate, SpectralCoeffs, SpectralError, SymmetryClass};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Focusing/defocusing sign of the Calogero-Sutherland nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsSign {
    Focusing,
    Defocusing,
}

/// The three integrable flows the crate evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationKind {
    BenjaminOno,
    CalogeroSutherland { sign: CsSign },
    Szego,
}

impl EquationKind {
    /// Symmetry class the equation's initial data must have.
    pub fn data_class(self) -> SymmetryClass {
        match self {
            EquationKind::BenjaminOno => SymmetryClass::RealValued,
            EquationKind::CalogeroSutherland { .. } | EquationKind::Szego => SymmetryClass::Hardy,
        }
    }
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let token = match self {
            EquationKind::BenjaminOno => "bo",
            EquationKind::CalogeroSutherland {
                sign: CsSign::Focusing,
            } => "cs-focusing",
            EquationKind::CalogeroSutherland {
                sign: CsSign::Defocusing,
            } => "cs-defocusing",
            EquationKind::Szego => "szego",
        };
        f.write_str(token)
    }
}

impl FromStr for EquationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bo" => Ok(EquationKind::BenjaminOno),
            "cs-focusing" => Ok(EquationKind::CalogeroSutherland {
                sign: CsSign::Focusing,
            }),
            "cs-defocusing" => Ok(EquationKind::CalogeroSutherland {
                sign: CsSign::Defocusing,
            }),
            "szego" => Ok(EquationKind::Szego),
            other => Err(format!(
                "unknown equation `{other}` (expected bo, cs-focusing, cs-defocusing or szego)"
            )),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SchemeError {
    #[error("{equation} needs {expected} data, got {got}")]
    KindMismatch {
        equation: EquationKind,
        expected: SymmetryClass,
        got: SymmetryClass,
    },
    #[error(
        "focusing Calogero-Sutherland requires L2 norm strictly below 1, got {norm} \
         (the flow is only globally defined under that mass bound)"
    )]
    MassGate { norm: f64 },
    #[error(transparent)]
    Eig(#[from] EigError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// The Hermitian pair driving the propagator formula; `m = None` encodes
/// `M = 0` (Benjamin-Ono and Calogero-Sutherland).
#[derive(Debug, Clone)]
pub struct SchemeMatrices {
    pub a: HermitianMatrix,
    pub m: Option<HermitianMatrix>,
}

/// Builds `A` and `M` for `eq` from data truncated to `k_modes`.
pub fn build_matrices(
    eq: EquationKind,
    u0: &SpectralCoeffs,
    k_modes: usize,
) -> Result<SchemeMatrices, SchemeError> {
    check_kind(eq, u0)?;
    let u = project_truncate(u0, k_modes);
    let c = u.amps();
    let n = k_modes;
    let matrices = match eq {
        EquationKind::BenjaminOno => {
            // A = I + 2D - 2T; on the lower triangle T[k][l] = u0_hat(k-l).
            let a = HermitianMatrix::from_lower_fn(n, |k, l| {
                let t = c[k - l];
                if k == l {
                    Complex64::new(1.0 + 2.0 * k as f64 - 2.0 * t.re, 0.0)
                } else {
                    -2.0 * t
                }
            });
            SchemeMatrices { a, m: None }
        }
        EquationKind::CalogeroSutherland { sign } => {
            // T is lower triangular for Hardy data, so
            // (T T^dagger)[k][l] = sum_{m<=min(k,l)} u0_hat(k-m) conj(u0_hat(l-m)).
            let s = match sign {
                CsSign::Focusing => 2.0,
                CsSign::Defocusing => -2.0,
            };
            let a = HermitianMatrix::from_lower_fn(n, |k, l| {
                let mut tt = ZERO;
                for m in 0..=l.min(k) {
                    tt += c[k - m] * c[l - m].conj();
                }
                let diag = if k == l {
                    Complex64::new(-1.0 - 2.0 * k as f64, 0.0)
                } else {
                    ZERO
                };
                diag + s * tt
            });
            SchemeMatrices { a, m: None }
        }
        EquationKind::Szego => {
            // H[k][l] = u0_hat(k+l) vanishes once k+l >= K, so
            // (H H^dagger)[k][l] = sum_m u0_hat(k+m) conj(u0_hat(l+m)) with
            // the sum cut at the truncation.
            let hh = |k: usize, l: usize| {
                let mut acc = ZERO;
                for m in 0..n.saturating_sub(k.max(l)) {
                    acc += c[k + m] * c[l + m].conj();
                }
                acc
            };
            let a = HermitianMatrix::from_lower_fn(n, |k, l| hh(k, l) - c[k] * c[l].conj());
            let m = HermitianMatrix::from_lower_fn(n, |k, l| hh(k, l));
            SchemeMatrices { a, m: Some(m) }
        }
    };
    Ok(matrices)
}

fn check_kind(eq: EquationKind, u0: &SpectralCoeffs) -> Result<(), SchemeError> {
    let expected = eq.data_class();
    if u0.kind() != expected {
        return Err(SchemeError::KindMismatch {
            equation: eq,
            expected,
            got: u0.kind(),
        });
    }
    Ok(())
}

/// Initial data folded into diagonalized propagator matrices; evolving to any
/// `t` afterwards reuses the factorizations.
#[derive(Debug, Clone)]
pub struct ExactSolver {
    eq: EquationKind,
    kind: SymmetryClass,
    u0: Vec<Complex64>,
    a_fac: EigenFactorization,
    m_fac: Option<EigenFactorization>,
}

impl ExactSolver {
    /// Validates the data, truncates it to `k_modes`, builds and
    /// diagonalizes the scheme matrices.
    ///
    /// Focusing Calogero-Sutherland data must satisfy the mass gate
    /// `||u0||_{L^2} < 1` (checked with a `1e-12` guard band against
    /// acceptance right at the boundary); the flow is not globally defined
    /// otherwise.
    pub fn new(eq: EquationKind, u0: &SpectralCoeffs, k_modes: usize) -> Result<Self, SchemeError> {
        check_kind(eq, u0)?;
        if let EquationKind::CalogeroSutherland {
            sign: CsSign::Focusing,
        } = eq
        {
            let norm = u0.l2_norm();
            if norm >= 1.0 - 1e-12 {
                return Err(SchemeError::MassGate { norm });
            }
        }
        let matrices = build_matrices(eq, u0, k_modes)?;
        let a_fac = eigendecompose(&matrices.a)?;
        let m_fac = matrices.m.as_ref().map(eigendecompose).transpose()?;
        Ok(ExactSolver {
            eq,
            kind: u0.kind(),
            u0: project_truncate(u0, k_modes).amps().to_vec(),
            a_fac,
            m_fac,
        })
    }

    pub fn equation(&self) -> EquationKind {
        self.eq
    }

    pub fn mode_count(&self) -> usize {
        self.u0.len()
    }

    /// Evolves the prepared data to time `t` by iterating
    /// `w <- e^{-i t M} e^{i t A} S* w` and collecting the zeroth component
    /// after each shift; `K` propagator applications in total.
    pub fn evolve(&self, t: f64) -> Result<SpectralCoeffs, SchemeError> {
        let k_modes = self.u0.len();
        let prop_a = self.a_fac.propagator(t, PhaseSign::Plus);
        let prop_m: Option<UnitaryPropagator<'_>> =
            self.m_fac.as_ref().map(|f| f.propagator(t, PhaseSign::Minus));

        let mut w = self.u0.clone();
        if let Some(pm) = &prop_m {
            w = pm.apply(&w);
        }
        let mut out = vec![ZERO; k_modes];
        out[0] = w[0];
        let mut prev_norm = vec_norm(&w);
        for slot in out.iter_mut().skip(1) {
            // S*: drop the zeroth coefficient, shift the rest down.
            w.rotate_left(1);
            w[k_modes - 1] = ZERO;
            w = prop_a.apply(&w);
            if let Some(pm) = &prop_m {
                w = pm.apply(&w);
            }
            // The shift is non-expansive and the propagators are unitary, so
            // the iterate norms may only decrease (up to roundoff).
            if cfg!(debug_assertions) {
                let norm = vec_norm(&w);
                debug_assert!(
                    norm <= prev_norm * (1.0 + 1e-11) + f64::MIN_POSITIVE,
                    "iterate norm grew from {prev_norm} to {norm}"
                );
                prev_norm = norm;
            }
            *slot = w[0];
        }
        Ok(SpectralCoeffs::new(self.kind, out)?)
    }
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// One-shot evolution: prepare (eigendecompose) and evolve to `t`.
pub fn evolve_exact(
    eq: EquationKind,
    u0: &SpectralCoeffs,
    k_modes: usize,
    t: f64,
) -> Result<SpectralCoeffs, SchemeError> {
    ExactSolver::new(eq, u0, k_modes)?.evolve(t)
}

/// The evolved zeroth coefficient `u_hat_K(t, 0)`. Because `M = 0` for
/// Benjamin-Ono and Calogero-Sutherland, it equals `u0_hat(0)` there exactly
/// (the mean is a conserved quantity the truncation preserves bit for bit).
pub fn mean_mode(
    eq: EquationKind,
    u0: &SpectralCoeffs,
    k_modes: usize,
    t: f64,
) -> Result<Complex64, SchemeError> {
    Ok(evolve_exact(eq, u0, k_modes, t)?.amps()[0])
}
