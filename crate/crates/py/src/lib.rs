//! Python bindings for the spectral solvers: truncated Fourier data, the
//! exact-in-time propagator scheme, the RK4 comparator, and the stock
//! initial-data families, exposed as the `laxspec_py` extension module.
//!
//! Complex amplitudes cross the boundary as Python `complex` values;
//! equations are named by the same tokens the benchmark configuration uses
//! (`bo`, `cs-focusing`, `cs-defocusing`, `szego`).

use laxspec::{EquationKind, RandomDataSpec, Rk4Config, SpectralCoeffs, SymmetryClass};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_equation(token: &str) -> PyResult<EquationKind> {
    token.parse::<EquationKind>().map_err(value_error)
}

fn parse_kind(token: &str) -> PyResult<SymmetryClass> {
    match token {
        "real-valued" => Ok(SymmetryClass::RealValued),
        "hardy" => Ok(SymmetryClass::Hardy),
        other => Err(value_error(format!(
            "unknown symmetry class `{other}` (expected real-valued or hardy)"
        ))),
    }
}

fn kind_token(kind: SymmetryClass) -> &'static str {
    match kind {
        SymmetryClass::RealValued => "real-valued",
        SymmetryClass::Hardy => "hardy",
    }
}

/// Truncated Fourier data on the torus: amplitudes for modes `0..K-1`, with
/// negative modes implied by the symmetry class (conjugate-mirrored for
/// real-valued data, absent for Hardy-class data).
#[pyclass(name = "SpectralCoeffs")]
#[derive(Clone)]
struct PyCoeffs {
    inner: SpectralCoeffs,
}

#[pymethods]
impl PyCoeffs {
    /// Real-valued data from non-negative-mode amplitudes (amps[0] must be
    /// real; negative modes follow by conjugation).
    #[staticmethod]
    fn real_valued(amps: Vec<Complex64>) -> PyResult<Self> {
        Ok(PyCoeffs {
            inner: SpectralCoeffs::real_valued(amps).map_err(value_error)?,
        })
    }

    /// Hardy-class data: no negative modes at all.
    #[staticmethod]
    fn hardy(amps: Vec<Complex64>) -> PyResult<Self> {
        Ok(PyCoeffs {
            inner: SpectralCoeffs::hardy(amps).map_err(value_error)?,
        })
    }

    /// Symmetry class token: `real-valued` or `hardy`.
    #[getter]
    fn kind(&self) -> &'static str {
        kind_token(self.inner.kind())
    }

    /// Number of retained non-negative modes.
    #[getter]
    fn mode_count(&self) -> usize {
        self.inner.mode_count()
    }

    /// The stored amplitudes for modes `0..K-1`.
    fn amps(&self) -> Vec<Complex64> {
        self.inner.amps().to_vec()
    }

    /// Coefficient at any signed mode index, honoring the symmetry class
    /// (zero outside the band).
    fn coefficient(&self, k: i64) -> Complex64 {
        self.inner.coefficient(k)
    }

    /// l^2 norm over the full symmetric spectrum.
    fn l2_norm(&self) -> f64 {
        self.inner.l2_norm()
    }

    /// Sobolev H^r norm with weights `(1 + k^2)^r`.
    fn sobolev_norm(&self, r: f64) -> f64 {
        laxspec::sobolev_norm(&self.inner, r)
    }

    /// A copy truncated (or zero-padded) to `k_modes` retained modes.
    fn truncate(&self, k_modes: usize) -> Self {
        PyCoeffs {
            inner: laxspec::project_truncate(&self.inner, k_modes),
        }
    }

    /// Collocation samples on the uniform `n`-point grid (`n >= 2K`).
    fn to_grid(&self, n: usize) -> PyResult<Vec<Complex64>> {
        laxspec::to_grid(&self.inner, n).map_err(value_error)
    }

    fn __len__(&self) -> usize {
        self.inner.mode_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "SpectralCoeffs(kind='{}', mode_count={}, l2_norm={:.6})",
            kind_token(self.inner.kind()),
            self.inner.mode_count(),
            self.inner.l2_norm()
        )
    }
}

/// Evolve `u0` to time `t` with the exact-in-time propagator scheme at
/// truncation `k_modes`. Cost is independent of `t`.
#[pyfunction]
fn evolve_exact(equation: &str, u0: &PyCoeffs, k_modes: usize, t: f64) -> PyResult<PyCoeffs> {
    let eq = parse_equation(equation)?;
    Ok(PyCoeffs {
        inner: laxspec::evolve_exact(eq, &u0.inner, k_modes, t).map_err(value_error)?,
    })
}

/// Evolve `u0` to time `t` with the pseudo-spectral RK4 baseline; the step
/// count grows linearly with `t` under the CFL bound.
#[pyfunction]
#[pyo3(signature = (equation, u0, k_modes, t, cfl_c = 0.25, dealias = true))]
fn rk4_evolve(
    equation: &str,
    u0: &PyCoeffs,
    k_modes: usize,
    t: f64,
    cfl_c: f64,
    dealias: bool,
) -> PyResult<PyCoeffs> {
    let eq = parse_equation(equation)?;
    let mut cfg = Rk4Config::new(k_modes, t);
    cfg.cfl_c = cfl_c;
    cfg.dealias = dealias;
    Ok(PyCoeffs {
        inner: laxspec::rk4_evolve(eq, &u0.inner, &cfg).map_err(value_error)?,
    })
}

/// Coefficients of the Benjamin-Ono traveling wave
/// `1 / (c - sqrt(c^2 - 1) cos(x - ct))` at time `t`, for speeds `c > 1`.
#[pyfunction]
fn traveling_wave(c: f64, t: f64, k_modes: usize) -> PyResult<PyCoeffs> {
    Ok(PyCoeffs {
        inner: laxspec::traveling_wave_coeffs(c, t, k_modes).map_err(value_error)?,
    })
}

/// Random real-valued data with Sobolev-type decay `(1 + k)^{-(s + theta)}`,
/// normalized to unit l^2 norm; deterministic in the seed.
#[pyfunction]
#[pyo3(signature = (seed, s, k_ref, theta = 0.6))]
fn random_initial_data(seed: u64, s: f64, k_ref: usize, theta: f64) -> PyResult<PyCoeffs> {
    let mut spec = RandomDataSpec::new(seed, s, k_ref);
    spec.theta = theta;
    Ok(PyCoeffs {
        inner: laxspec::random_initial_data(&spec).map_err(value_error)?,
    })
}

/// Hardy-class counterpart of `random_initial_data`.
#[pyfunction]
#[pyo3(signature = (seed, s, k_ref, theta = 0.6))]
fn hardy_random_data(seed: u64, s: f64, k_ref: usize, theta: f64) -> PyResult<PyCoeffs> {
    let mut spec = RandomDataSpec::new(seed, s, k_ref);
    spec.theta = theta;
    Ok(PyCoeffs {
        inner: laxspec::hardy_random_data(&spec).map_err(value_error)?,
    })
}

/// The one-mode cubic Szego solution `a * exp(-it |a|^2)` as Hardy data.
#[pyfunction]
fn szego_constant(a: Complex64, t: f64) -> PyResult<PyCoeffs> {
    Ok(PyCoeffs {
        inner: laxspec::szego_constant_solution(a, t).map_err(value_error)?,
    })
}

/// Sobolev H^r distance between two data sets of the same symmetry class
/// (the shorter one is zero-padded).
#[pyfunction]
fn sobolev_error(a: &PyCoeffs, b: &PyCoeffs, r: f64) -> PyResult<f64> {
    laxspec::sobolev_error(&a.inner, &b.inner, r).map_err(value_error)
}

/// Recover `k_modes` coefficients from uniform grid samples (`len >= 2K`).
#[pyfunction]
fn from_grid(kind: &str, samples: Vec<Complex64>, k_modes: usize) -> PyResult<PyCoeffs> {
    let class = parse_kind(kind)?;
    Ok(PyCoeffs {
        inner: laxspec::from_grid(&samples, class, k_modes).map_err(value_error)?,
    })
}

#[pymodule]
fn laxspec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCoeffs>()?;
    m.add_function(wrap_pyfunction!(evolve_exact, m)?)?;
    m.add_function(wrap_pyfunction!(rk4_evolve, m)?)?;
    m.add_function(wrap_pyfunction!(traveling_wave, m)?)?;
    m.add_function(wrap_pyfunction!(random_initial_data, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_random_data, m)?)?;
    m.add_function(wrap_pyfunction!(szego_constant, m)?)?;
    m.add_function(wrap_pyfunction!(sobolev_error, m)?)?;
    m.add_function(wrap_pyfunction!(from_grid, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Registers the module into a live interpreter and drives it through
    /// Python attribute access and calls, end to end.
    #[test]
    fn module_round_trips_through_the_interpreter() {
        Python::with_gil(|py| {
            let module = PyModule::new_bound(py, "laxspec_py").expect("module object");
            laxspec_py(&module).expect("module init");

            // Wave data evolved by the scheme lands on the translated wave.
            let wave0 = module
                .getattr("traveling_wave")
                .unwrap()
                .call1((1.19366207319, 0.0, 16))
                .expect("wave at t = 0");
            let evolved = module
                .getattr("evolve_exact")
                .unwrap()
                .call1(("bo", &wave0, 16, 0.7))
                .expect("scheme evolution");
            let wave_t = module
                .getattr("traveling_wave")
                .unwrap()
                .call1((1.19366207319, 0.7, 16))
                .expect("wave at t = 0.7");
            let err: f64 = module
                .getattr("sobolev_error")
                .unwrap()
                .call1((&evolved, &wave_t, 0.0))
                .unwrap()
                .extract()
                .expect("a float distance");
            // The slow wave's spectrum decays fast enough that 16 modes
            // leave only an O(1e-8) band-limitation residue.
            assert!(
                err < 1e-7,
                "16-mode wave evolution should track the closed form, error {err:.3e}"
            );

            let repr: String = evolved.repr().unwrap().extract().unwrap();
            assert!(
                repr.contains("real-valued") && repr.contains("mode_count=16"),
                "repr should describe the data, got {repr}"
            );

            // Unknown equation tokens surface as ValueError.
            let bad = module
                .getattr("evolve_exact")
                .unwrap()
                .call1(("kdv", &wave0, 16, 0.7));
            let message = bad.expect_err("unknown token must fail").to_string();
            assert!(
                message.contains("unknown equation"),
                "error should name the problem, got {message}"
            );
        });
    }

    #[test]
    fn rust_level_conversions_cover_the_data_type() {
        let a = Complex64::new(0.4, -0.3);
        let u0 = PyCoeffs::hardy(vec![a]).expect("one-mode data");
        let out = evolve_exact("szego", &u0, 1, 2.0).expect("one-mode evolution");
        let expected = a * Complex64::from_polar(1.0, -2.0 * a.norm_sqr());
        let diff = (out.amps()[0] - expected).norm();
        assert!(
            diff <= 1e-12,
            "one-mode output {} should equal {expected}, difference {diff:.3e}",
            out.amps()[0]
        );

        let grid = out.to_grid(8).expect("grid synthesis");
        let back = from_grid("hardy", grid, 1).expect("grid analysis");
        let round_trip = (back.amps()[0] - out.amps()[0]).norm();
        assert!(
            round_trip <= 1e-13,
            "grid round trip should be lossless for band-limited data, drift {round_trip:.3e}"
        );

        assert!(parse_kind("real-valued").is_ok());
        assert!(parse_kind("hermitian").is_err());
    }
}
