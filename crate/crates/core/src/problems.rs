//! Problem generators: the Benjamin-Ono traveling wave, randomized Sobolev
//! data, and closed-form special cases used for validation.

use num_complex::Complex64;

use crate::spectral::{SpectralCoeffs, SpectralError, SymmetryClass};

#[derive(Debug, thiserror::Error)]
pub enum ProblemError {
    #[error("traveling wave requires speed c > 1, got {c}")]
    WaveSpeedTooSmall { c: f64 },
    #[error("random data requires decay offset theta > 1/2, got {theta}")]
    ThetaTooSmall { theta: f64 },
    #[error("invalid problem specification: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Geometric decay rate `rho = (c-1)/sqrt(c^2-1)` of the traveling wave's
/// Fourier coefficients; lies in `(0, 1)` for every speed `c > 1`.
pub fn wave_decay_rate(c: f64) -> Result<f64, ProblemError> {
    if !c.is_finite() || c <= 1.0 {
        return Err(ProblemError::WaveSpeedTooSmall { c });
    }
    Ok((c - 1.0) / (c * c - 1.0).sqrt())
}

/// Fourier coefficients of the traveling wave
/// `u*(t,x) = 1 / (c - sqrt(c^2-1) cos(x - c t))`: mode `k >= 0` carries
/// `rho^k e^{-i k c t}`, so the mean is exactly 1 and the tail is geometric.
pub fn traveling_wave_coeffs(
    c: f64,
    t: f64,
    k_modes: usize,
) -> Result<SpectralCoeffs, ProblemError> {
    let rho = wave_decay_rate(c)?;
    if !t.is_finite() {
        return Err(ProblemError::BadSpec(format!("time must be finite, got {t}")));
    }
    let amps = (0..k_modes)
        .map(|k| Complex64::from_polar(rho.powi(k as i32), -(k as f64) * c * t))
        .collect();
    Ok(SpectralCoeffs::real_valued(amps)?)
}

/// Parameters of the randomized `H^s`-type initial data: coefficients are
/// independent Gaussians damped by `(1+k)^{-(s+theta)}` and rescaled to unit
/// `l^2` norm. Draws are a pure function of `(seed, mode)`, so the same seed
/// at a larger `k_ref` extends the smaller draw coefficient for coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomDataSpec {
    pub seed: u64,
    /// Regularity exponent `s` of the target class.
    pub s: f64,
    /// Decay offset, must exceed `1/2` so the weighted draw is in `l^2`
    /// uniformly in `k_ref`; default 0.6.
    pub theta: f64,
    /// Number of retained non-negative modes.
    pub k_ref: usize,
}

impl RandomDataSpec {
    pub fn new(seed: u64, s: f64, k_ref: usize) -> Self {
        RandomDataSpec {
            seed,
            s,
            theta: 0.6,
            k_ref,
        }
    }

    fn validate(&self) -> Result<(), ProblemError> {
        if !self.theta.is_finite() || self.theta <= 0.5 {
            return Err(ProblemError::ThetaTooSmall { theta: self.theta });
        }
        if !self.s.is_finite() {
            return Err(ProblemError::BadSpec(format!(
                "regularity s must be finite, got {}",
                self.s
            )));
        }
        if self.k_ref == 0 {
            return Err(ProblemError::BadSpec("k_ref must be at least 1".into()));
        }
        Ok(())
    }
}

/// Counter-based Gaussian stream: each mode's draw is a hash of
/// `(seed, mode)` pushed through Box-Muller, with no sequential state.
struct GaussianStream {
    seed: u64,
}

impl GaussianStream {
    /// SplitMix64 finalizer applied to the `counter`-th element of the
    /// Weyl sequence started at `seed`.
    fn bits(&self, counter: u64) -> u64 {
        let mut z = self
            .seed
            .wrapping_add(counter.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in the half-open interval `(0, 1]`, safe to feed into `ln`.
    fn u01(&self, counter: u64) -> f64 {
        ((self.bits(counter) >> 11) + 1) as f64 / 9_007_199_254_740_992.0
    }

    /// Two independent standard normals for `mode`, via Box-Muller.
    fn pair(&self, mode: u64) -> (f64, f64) {
        let u1 = self.u01(2 * mode);
        let u2 = self.u01(2 * mode + 1);
        let r = (-2.0 * u1.ln()).sqrt();
        let phi = 2.0 * std::f64::consts::PI * u2;
        (r * phi.cos(), r * phi.sin())
    }
}

/// Weighted, unnormalized draw: mode 0 is real `N(0,1)`, higher modes are
/// complex with `N(0, 1/2)` components, all damped by `(1+k)^{-(s+theta)}`.
fn weighted_draw(spec: &RandomDataSpec) -> Vec<Complex64> {
    let stream = GaussianStream { seed: spec.seed };
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    (0..spec.k_ref)
        .map(|k| {
            let (z1, z2) = stream.pair(k as u64);
            let gaussian = if k == 0 {
                Complex64::new(z1, 0.0)
            } else {
                Complex64::new(z1 * inv_sqrt2, z2 * inv_sqrt2)
            };
            gaussian * (1.0 + k as f64).powf(-(spec.s + spec.theta))
        })
        .collect()
}

fn normalized(kind: SymmetryClass, mut amps: Vec<Complex64>) -> Result<SpectralCoeffs, ProblemError> {
    let mut sq = amps[0].norm_sqr();
    for a in &amps[1..] {
        sq += match kind {
            // Mirrored negative modes count toward the mass.
            SymmetryClass::RealValued => 2.0 * a.norm_sqr(),
            SymmetryClass::Hardy => a.norm_sqr(),
        };
    }
    let norm = sq.sqrt();
    if norm <= 0.0 {
        return Err(ProblemError::BadSpec(
            "degenerate draw: all coefficients vanished".into(),
        ));
    }
    for a in &mut amps {
        *a /= norm;
    }
    Ok(SpectralCoeffs::new(kind, amps)?)
}

/// Random real-valued initial data with unit `l^2` norm (negative modes by
/// conjugation); deterministic in `spec.seed`.
pub fn random_initial_data(spec: &RandomDataSpec) -> Result<SpectralCoeffs, ProblemError> {
    spec.validate()?;
    normalized(SymmetryClass::RealValued, weighted_draw(spec))
}

/// The Hardy-space variant of [`random_initial_data`] for the
/// Calogero-Sutherland and Szego equations: same per-mode draws, no
/// conjugate mirroring, unit `l^2` norm over the non-negative modes alone.
pub fn hardy_random_data(spec: &RandomDataSpec) -> Result<SpectralCoeffs, ProblemError> {
    spec.validate()?;
    normalized(SymmetryClass::Hardy, weighted_draw(spec))
}

/// Exact solution of the cubic Szego equation for spatially constant data:
/// `u(t) = a e^{-i t |a|^2}` (the modulus is conserved, the phase rotates at
/// the squared mass).
pub fn szego_constant_solution(a: Complex64, t: f64) -> Result<SpectralCoeffs, ProblemError> {
    let angle = -t * a.norm_sqr();
    let value = a * Complex64::new(angle.cos(), angle.sin());
    Ok(SpectralCoeffs::hardy(vec![value])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rk4::rhs;
    use crate::scheme::EquationKind;
    use crate::spectral::to_grid;

    const C_WIDE: f64 = 15.0 / (4.0 * std::f64::consts::PI);
    const C_PEAKED: f64 = 15.0 / std::f64::consts::PI;

    #[test]
    fn decay_rates_match_the_reference_values() {
        // rho = (c-1)/sqrt(c^2-1) for the two standard speeds.
        let wide = wave_decay_rate(C_WIDE).unwrap();
        assert!(
            (wide - 0.29712).abs() < 5e-6,
            "c=15/(4pi): rho = {wide}, expected ~0.29712"
        );
        let peaked = wave_decay_rate(C_PEAKED).unwrap();
        assert!(
            (peaked - 0.80849).abs() < 5e-6,
            "c=15/pi: rho = {peaked}, expected ~0.80849"
        );
        for c in [1.001, 1.5, 2.0, 10.0, 1e6] {
            let rho = wave_decay_rate(c).unwrap();
            assert!(rho > 0.0 && rho < 1.0, "c={c}: rho={rho} out of (0,1)");
        }
    }

    #[test]
    fn small_speeds_are_rejected() {
        for c in [1.0, 0.5, -3.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                traveling_wave_coeffs(c, 0.0, 8),
                Err(ProblemError::WaveSpeedTooSmall { .. })
            ));
        }
    }

    #[test]
    fn traveling_wave_mean_is_exactly_one() {
        for (c, t) in [(C_WIDE, 0.0), (C_WIDE, 3.7), (2.0, 100.0), (C_PEAKED, 1.0)] {
            let u = traveling_wave_coeffs(c, t, 16).unwrap();
            assert_eq!(u.amps()[0], Complex64::new(1.0, 0.0), "c={c}, t={t}");
        }
    }

    #[test]
    fn time_dependence_is_a_pure_phase_per_mode() {
        let (c, t) = (2.0, 0.83);
        let at0 = traveling_wave_coeffs(c, 0.0, 24).unwrap();
        let att = traveling_wave_coeffs(c, t, 24).unwrap();
        for k in 0..24 {
            let angle = -(k as f64) * c * t;
            let expect = at0.amps()[k] * Complex64::new(angle.cos(), angle.sin());
            assert!(
                (att.amps()[k] - expect).norm() < 1e-15,
                "mode {k} phase drifted"
            );
        }
    }

    #[test]
    fn traveling_wave_grid_values_are_positive_with_known_minimum() {
        // The profile is 1/(c - sqrt(c^2-1) cos(x - ct)) > 0 with minimum
        // 1/(c + sqrt(c^2-1)), attained on the grid at x = -pi when t = 0.
        let c = C_WIDE;
        let u = traveling_wave_coeffs(c, 0.0, 32).unwrap();
        let grid = to_grid(&u, 64).unwrap();
        let mut min = f64::INFINITY;
        for v in &grid {
            assert!(v.re > 0.0, "profile must stay positive, got {v}");
            assert!(v.im.abs() < 1e-13, "profile must be real, got {v}");
            min = min.min(v.re);
        }
        let expect = 1.0 / (c + (c * c - 1.0).sqrt());
        assert!(
            (min - expect).abs() < 1e-10,
            "grid minimum {min} vs closed form {expect}"
        );
    }

    #[test]
    fn traveling_wave_satisfies_the_pde_spectrally() {
        // d_t u* = -c d_x u* for the exact profile, so the Benjamin-Ono
        // right-hand side applied to the truncated coefficients must equal
        // -c * (i k u_hat) up to the (tiny) truncation tail.
        let k_modes = 128;
        let u = traveling_wave_coeffs(C_WIDE, 0.0, k_modes).unwrap();
        let dudt = rhs(EquationKind::BenjaminOno, &u).unwrap();
        let mut err_sq = 0.0;
        for k in 0..k_modes {
            let expect = Complex64::new(0.0, -(k as f64) * C_WIDE) * u.amps()[k];
            err_sq += (dudt.amps()[k] - expect).norm_sqr();
        }
        let err = (2.0 * err_sq).sqrt();
        assert!(err < 1e-8, "PDE residual {err} too large");
    }

    #[test]
    fn gaussian_stream_has_standard_moments() {
        let stream = GaussianStream { seed: 17 };
        let n = 20_000;
        let (mut sum, mut sum_sq, mut cross) = (0.0, 0.0, 0.0);
        for mode in 0..n {
            let (z1, z2) = stream.pair(mode);
            sum += z1 + z2;
            sum_sq += z1 * z1 + z2 * z2;
            cross += z1 * z2;
        }
        let mean = sum / (2 * n) as f64;
        let var = sum_sq / (2 * n) as f64 - mean * mean;
        let cov = cross / n as f64;
        assert!(mean.abs() < 0.02, "sample mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "sample variance {var}");
        assert!(cov.abs() < 0.02, "components should be uncorrelated, {cov}");
    }

    #[test]
    fn draws_are_deterministic_in_the_seed() {
        let spec = RandomDataSpec::new(42, 2.0, 64);
        let a = random_initial_data(&spec).unwrap();
        let b = random_initial_data(&spec).unwrap();
        assert_eq!(a.amps(), b.amps());
        let mut other = spec;
        other.seed = 43;
        let c = random_initial_data(&other).unwrap();
        assert_ne!(a.amps(), c.amps());
    }

    #[test]
    fn draws_have_unit_mass() {
        for seed in [1, 7, 42] {
            let spec = RandomDataSpec::new(seed, 2.0, 256);
            let real = random_initial_data(&spec).unwrap();
            assert!((real.l2_norm() - 1.0).abs() < 1e-12, "seed {seed}");
            let hardy = hardy_random_data(&spec).unwrap();
            assert!((hardy.l2_norm() - 1.0).abs() < 1e-12, "seed {seed}");
            assert_eq!(hardy.kind(), SymmetryClass::Hardy);
            assert_eq!(real.kind(), SymmetryClass::RealValued);
        }
    }

    #[test]
    fn theta_at_or_below_half_is_rejected() {
        for theta in [0.5, 0.3, 0.0, -1.0, f64::NAN] {
            let mut spec = RandomDataSpec::new(1, 2.0, 8);
            spec.theta = theta;
            assert!(matches!(
                random_initial_data(&spec),
                Err(ProblemError::ThetaTooSmall { .. })
            ));
        }
        // Anything strictly above 1/2 is allowed.
        let mut spec = RandomDataSpec::new(1, 2.0, 8);
        spec.theta = 0.500001;
        assert!(random_initial_data(&spec).is_ok());
    }

    #[test]
    fn larger_truncations_extend_smaller_ones() {
        // The counter-based stream assigns draws per mode, so truncations at
        // different k_ref agree up to the overall normalization constant.
        let small = random_initial_data(&RandomDataSpec::new(42, 2.0, 8)).unwrap();
        let big = random_initial_data(&RandomDataSpec::new(42, 2.0, 32)).unwrap();
        let ratio = big.amps()[0].re / small.amps()[0].re;
        assert!(ratio > 0.0 && ratio <= 1.0 + 1e-12);
        for k in 0..8 {
            let scaled = small.amps()[k] * ratio;
            assert!(
                (big.amps()[k] - scaled).norm() < 1e-12,
                "mode {k}: {} vs rescaled {}",
                big.amps()[k],
                scaled
            );
        }
    }

    #[test]
    fn tail_mass_decays_at_the_advertised_rate() {
        // For s = 2, theta = 0.6 the tail mass beyond K behaves like
        // K^{-(2s + 2 theta - 1)}; the fitted constant should be stable.
        let spec = RandomDataSpec {
            seed: 42,
            s: 2.0,
            theta: 0.6,
            k_ref: 1024,
        };
        let u = random_initial_data(&spec).unwrap();
        let tail = |k0: usize| -> f64 {
            u.amps()[k0..]
                .iter()
                .map(|a| 2.0 * a.norm_sqr())
                .sum::<f64>()
        };
        let exponent = 2.0 * spec.s + 2.0 * spec.theta - 1.0;
        let fitted: Vec<f64> = [64usize, 128, 256]
            .iter()
            .map(|&k| tail(k) * (k as f64).powf(exponent))
            .collect();
        let c_max = fitted.iter().cloned().fold(f64::MIN, f64::max);
        let c_min = fitted.iter().cloned().fold(f64::MAX, f64::min);
        assert!(
            c_max / c_min < 3.0,
            "fitted tail constants vary too much: {fitted:?}"
        );
    }

    #[test]
    fn szego_constant_solution_matches_the_phase_formula() {
        let zero = szego_constant_solution(Complex64::new(0.0, 0.0), 5.0).unwrap();
        assert_eq!(zero.amps()[0], Complex64::new(0.0, 0.0));
        let flip = szego_constant_solution(Complex64::new(1.0, 0.0), std::f64::consts::PI).unwrap();
        assert!((flip.amps()[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let half = szego_constant_solution(Complex64::new(0.5, 0.0), 2.0).unwrap();
        assert!((half.amps()[0].norm() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bad_specs_are_rejected() {
        assert!(matches!(
            random_initial_data(&RandomDataSpec::new(1, f64::NAN, 8)),
            Err(ProblemError::BadSpec(_))
        ));
        assert!(matches!(
            random_initial_data(&RandomDataSpec::new(1, 2.0, 0)),
            Err(ProblemError::BadSpec(_))
        ));
    }
}
