//! Helpers shared by the integration suites: plain dense linear algebra on
//! row-major complex buffers, a scaling-and-squaring matrix exponential, a
//! direct evaluation of the propagator-product formula built on it, and a
//! small deterministic random stream.
//!
//! Everything here is deliberately written from scratch against textbook
//! definitions rather than through the library's own kernels, so the test
//! targets can use it as an independent cross-check.

#![allow(dead_code)]

use laxspec::{build_matrices, EquationKind, HermitianMatrix, SpectralCoeffs, SymmetryClass};
use num_complex::Complex64;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

// ---------------------------------------------------------------------------
// Deterministic random stream (sequential SplitMix64 + uniform reals).
// ---------------------------------------------------------------------------

/// Sequential pseudo-random stream for generating test inputs. Unrelated to
/// the library's Gaussian sampler: plain uniform variates are all the test
/// data needs.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform on `[-1, 1)`.
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }

    /// Uniform on the square `[-1, 1)^2` of the complex plane.
    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.symmetric(), self.symmetric())
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }
}

// ---------------------------------------------------------------------------
// Dense row-major complex matrix helpers.
// ---------------------------------------------------------------------------

pub fn identity(n: usize) -> Vec<Complex64> {
    let mut m = vec![ZERO; n * n];
    for j in 0..n {
        m[j * n + j] = ONE;
    }
    m
}

pub fn mat_mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut c = vec![ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == ZERO {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

pub fn mat_vec(a: &[Complex64], v: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut w = vec![ZERO; n];
    for i in 0..n {
        let mut acc = ZERO;
        for j in 0..n {
            acc += a[i * n + j] * v[j];
        }
        w[i] = acc;
    }
    w
}

/// Maximum absolute column sum (the induced 1-norm).
pub fn one_norm(a: &[Complex64], n: usize) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// Matrix exponential by scaling and squaring.
// ---------------------------------------------------------------------------

/// `exp(A)` for a dense row-major `n x n` complex matrix: scale `A` by a
/// power of two until its 1-norm is at most 1/2, sum the Taylor series to
/// machine-precision stagnation, and square the result back up.
pub fn expm(a: &[Complex64], n: usize) -> Vec<Complex64> {
    let norm = one_norm(a, n);
    let squarings = if norm <= 0.5 {
        0
    } else {
        (norm / 0.5).log2().ceil() as u32
    };
    let scale = 0.5f64.powi(squarings as i32);
    let b: Vec<Complex64> = a.iter().map(|z| z * scale).collect();

    let mut sum = identity(n);
    let mut term = identity(n);
    for m in 1..=60u32 {
        term = mat_mul(&term, &b, n);
        let inv = 1.0 / f64::from(m);
        for z in term.iter_mut() {
            *z *= inv;
        }
        for (s, t) in sum.iter_mut().zip(term.iter()) {
            *s += t;
        }
        if one_norm(&term, n) <= 1e-20 * one_norm(&sum, n).max(1.0) {
            break;
        }
    }
    let mut result = sum;
    for _ in 0..squarings {
        result = mat_mul(&result, &result, n);
    }
    result
}

/// Dense `sign * i * t * H` ready for `expm`.
pub fn i_t_h(h: &HermitianMatrix, t: f64, sign: f64) -> Vec<Complex64> {
    let phase = Complex64::new(0.0, sign * t);
    h.to_dense().iter().map(|z| phase * z).collect()
}

// ---------------------------------------------------------------------------
// Random test inputs.
// ---------------------------------------------------------------------------

pub fn random_hermitian(rng: &mut TestRng, n: usize) -> HermitianMatrix {
    HermitianMatrix::from_lower_fn(n, |_, _| rng.complex())
}

/// Random coefficients of the given symmetry class, rescaled to the requested
/// l^2 norm (computed over the full symmetric spectrum for real-valued data).
pub fn random_coeffs(
    rng: &mut TestRng,
    kind: SymmetryClass,
    k_modes: usize,
    norm: f64,
) -> SpectralCoeffs {
    let mut amps: Vec<Complex64> = (0..k_modes).map(|_| rng.complex()).collect();
    if kind == SymmetryClass::RealValued {
        amps[0] = Complex64::new(amps[0].re, 0.0);
    }
    let raw = SpectralCoeffs::new(kind, amps).expect("constraints satisfied by construction");
    let current = raw.l2_norm();
    let factor = norm / current;
    let scaled: Vec<Complex64> = raw.amps().iter().map(|z| z * factor).collect();
    SpectralCoeffs::new(kind, scaled).expect("rescaling preserves the symmetry constraint")
}

// ---------------------------------------------------------------------------
// Direct evaluation of the propagator-product formula.
// ---------------------------------------------------------------------------

/// Evaluates the scheme's defining formula head-on: coefficient `k` of the
/// output is the first entry of `(E_M E_A S)^k E_M u0`, where `E_A = exp(itA)`
/// and `E_M = exp(-itM)` come from the scaling-and-squaring oracle, `S` is the
/// explicit index-shift matrix, and the power is an explicit matrix power.
/// Shares only the matrix recipes with the production path; exponentials,
/// shifts, and products are all independent.
pub fn direct_formula(
    eq: EquationKind,
    u0: &SpectralCoeffs,
    k_modes: usize,
    t: f64,
) -> Vec<Complex64> {
    let n = k_modes;
    let mats = build_matrices(eq, u0, n).expect("matrix assembly for direct evaluation");
    let e_a = expm(&i_t_h(&mats.a, t, 1.0), n);
    let e_m = match &mats.m {
        Some(m) => expm(&i_t_h(m, t, -1.0), n),
        None => identity(n),
    };
    // Shift: (S w)[j] = w[j + 1], last entry zero.
    let mut shift = vec![ZERO; n * n];
    for j in 0..n.saturating_sub(1) {
        shift[j * n + (j + 1)] = ONE;
    }
    let step = mat_mul(&e_m, &mat_mul(&e_a, &shift, n), n);

    let mut u0_vec = vec![ZERO; n];
    for (j, slot) in u0_vec.iter_mut().enumerate() {
        *slot = u0.coefficient(j as i64);
    }
    let w0 = mat_vec(&e_m, &u0_vec, n);

    let mut power = identity(n);
    let mut out = vec![ZERO; n];
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            power = mat_mul(&step, &power, n);
        }
        let row0: Vec<Complex64> = power[0..n].to_vec();
        *slot = row0
            .iter()
            .zip(w0.iter())
            .map(|(p, w)| p * w)
            .sum::<Complex64>();
    }
    out
}
