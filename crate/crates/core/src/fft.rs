//! Iterative radix-2 FFT on the symmetric torus grid.
//!
//! All transforms are phrased against the collocation grid
//! `x_j = -pi + 2*pi*j/N`, so the analysis direction computes
//! `u_hat(k) = (1/N) * sum_j f(x_j) e^{-i k x_j}` and the synthesis direction
//! computes `f(x_j) = sum_k u_hat(k) e^{i k x_j}`. Bin `k >= N/2` holds the
//! negative frequency `k - N`. The grid origin at `-pi` contributes the
//! alternating phase `(-1)^k` relative to a textbook DFT; both directions
//! account for it so that `inverse(forward(f)) == f`.

use num_complex::Complex64;

use crate::spectral::SpectralError;

/// Precomputed twiddle factors for one transform size.
///
/// Reusable across calls; the time-stepping loops create one plan per grid
/// size instead of recomputing `sin`/`cos` tables on every product.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    // twiddles[j] = e^{-2 pi i j / n} for j < n/2
    twiddles: Vec<Complex64>,
}

impl FftPlan {
    /// Builds a plan for transforms of length `n`, which must be a power of two.
    pub fn new(n: usize) -> Result<Self, SpectralError> {
        if n == 0 || !n.is_power_of_two() {
            return Err(SpectralError::NotPowerOfTwo { n });
        }
        let twiddles = (0..n / 2)
            .map(|j| {
                let angle = -2.0 * std::f64::consts::PI * j as f64 / n as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        Ok(FftPlan { n, twiddles })
    }

    /// Transform length.
    pub fn size(&self) -> usize {
        self.n
    }

    fn check_len(&self, len: usize) -> Result<(), SpectralError> {
        if len != self.n {
            return Err(SpectralError::LengthMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }

    /// In-place analysis: samples on `x_j` are replaced by coefficients
    /// `u_hat(k) = (1/N) sum_j f(x_j) e^{-i k x_j}`.
    pub fn forward(&self, buf: &mut [Complex64]) -> Result<(), SpectralError> {
        self.check_len(buf.len())?;
        self.butterflies(buf, false);
        let scale = 1.0 / self.n as f64;
        for (k, c) in buf.iter_mut().enumerate() {
            *c *= scale;
            if k % 2 == 1 {
                *c = -*c;
            }
        }
        Ok(())
    }

    /// In-place synthesis: coefficients are replaced by samples
    /// `f(x_j) = sum_k u_hat(k) e^{i k x_j}` on the grid `x_j = -pi + 2 pi j / N`.
    pub fn inverse(&self, buf: &mut [Complex64]) -> Result<(), SpectralError> {
        self.check_len(buf.len())?;
        for (k, c) in buf.iter_mut().enumerate() {
            if k % 2 == 1 {
                *c = -*c;
            }
        }
        self.butterflies(buf, true);
        Ok(())
    }

    /// Standard iterative decimation-in-time radix-2 kernel (bit-reversal
    /// permutation followed by butterfly passes). `conjugate` flips the
    /// twiddle sign for the synthesis direction.
    fn butterflies(&self, buf: &mut [Complex64], conjugate: bool) {
        let n = self.n;
        // Bit-reversal permutation.
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for j in 0..half {
                    let mut w = self.twiddles[stride * j];
                    if conjugate {
                        w = w.conj();
                    }
                    let a = buf[start + j];
                    let b = buf[start + j + half] * w;
                    buf[start + j] = a + b;
                    buf[start + j + half] = a - b;
                }
            }
            len <<= 1;
        }
    }
}

/// Analysis transform into a fresh vector. See [`FftPlan::forward`].
pub fn fft_forward(samples: &[Complex64]) -> Result<Vec<Complex64>, SpectralError> {
    let plan = FftPlan::new(samples.len())?;
    let mut buf = samples.to_vec();
    plan.forward(&mut buf)?;
    Ok(buf)
}

/// Synthesis transform into a fresh vector. See [`FftPlan::inverse`].
pub fn fft_inverse(coeffs: &[Complex64]) -> Result<Vec<Complex64>, SpectralError> {
    let plan = FftPlan::new(coeffs.len())?;
    let mut buf = coeffs.to_vec();
    plan.inverse(&mut buf)?;
    Ok(buf)
}
