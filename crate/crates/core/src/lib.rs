//! Spectral solvers for three completely integrable equations on the torus —
//! Benjamin-Ono, Calogero-Sutherland and the cubic Szego equation — built
//! around explicit propagator formulas: the truncated flow is evaluated at
//! any time `t` by diagonalizing small Hermitian matrices assembled from the
//! initial data, at a cost independent of `t`. A pseudo-spectral RK4
//! baseline and a benchmark harness measure the trade-off against classical
//! time stepping.
//!
//! Entry points:
//!
//! * [`spectral::SpectralCoeffs`] — truncated Fourier data on the torus,
//!   either real-valued (negative modes by conjugation) or Hardy-class
//!   (no negative modes).
//! * [`scheme::evolve_exact`] / [`scheme::ExactSolver`] — the exact-in-time
//!   propagator scheme.
//! * [`rk4::rk4_evolve`] — the CFL-limited Runge-Kutta comparator.
//! * [`problems`] — traveling-wave and randomized initial data.
//! * [`bench`] — convergence sweeps, CSV reports and SVG charts behind the
//!   command-line interface.

pub mod bench;
pub mod eig;
pub mod fft;
pub mod problems;
pub mod rk4;
pub mod scheme;
pub mod spectral;

pub use eig::{eigendecompose, EigError, EigenFactorization, HermitianMatrix, PhaseSign};
pub use problems::{
    hardy_random_data, random_initial_data, szego_constant_solution, traveling_wave_coeffs,
    ProblemError, RandomDataSpec,
};
pub use rk4::{rhs, rk4_evolve, Rk4Config, Rk4Error};
pub use scheme::{
    build_matrices, evolve_exact, CsSign, EquationKind, ExactSolver, SchemeError, SchemeMatrices,
};
pub use spectral::{
    from_grid, project_truncate, sobolev_error, sobolev_norm, to_grid, SpectralCoeffs,
    SpectralError, SymmetryClass,
};
