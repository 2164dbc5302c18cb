//! Dense complex Hermitian eigendecomposition and unitary propagators.
//!
//! The pipeline is the classic dependency-free one: Householder reduction of
//! the Hermitian matrix to complex tridiagonal form, a diagonal phase
//! transformation that makes the off-diagonals real and non-negative, then
//! implicit QL with Wilkinson shifts on the real symmetric tridiagonal
//! matrix, accumulating the rotations into the eigenvector matrix.
//! Eigenvalues come out ascending. The QL sweep count is capped at 50 per
//! eigenvalue.
//!
//! [`EigenBackend`] is the seam for substituting an external solver; the rest
//! of the crate only consumes [`EigenFactorization`].

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Sweep cap per eigenvalue in the QL iteration.
const MAX_SWEEPS: usize = 50;

#[derive(Debug, thiserror::Error)]
pub enum EigError {
    #[error("matrix dimension must be at least 1")]
    Empty,
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error(
        "QL iteration did not converge for a {size}x{size} matrix \
         (off-diagonal residual {residual:.3e} after {sweeps} sweeps)"
    )]
    NoConvergence {
        size: usize,
        residual: f64,
        sweeps: usize,
    },
}

/// Hermitian matrix stored as its packed lower triangle.
///
/// Only entries `(k, l)` with `l <= k` are stored; the upper triangle is the
/// conjugate mirror, so `get(k, l) == get(l, k).conj()` holds exactly by
/// construction. Diagonal entries are kept real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    lower: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds an `n x n` Hermitian matrix from a generator that is consulted
    /// only on the lower triangle (`l <= k`). The imaginary part of diagonal
    /// values is discarded.
    pub fn from_lower_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n > 0, "matrix dimension must be at least 1");
        let mut lower = Vec::with_capacity(n * (n + 1) / 2);
        for k in 0..n {
            for l in 0..=k {
                let v = f(k, l);
                lower.push(if l == k { Complex64::new(v.re, 0.0) } else { v });
            }
        }
        HermitianMatrix { n, lower }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_lower_fn(n, |_, _| ZERO)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn lower_index(k: usize, l: usize) -> usize {
        k * (k + 1) / 2 + l
    }

    /// Entry `(k, l)`; the upper triangle mirrors the stored lower triangle.
    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        if l <= k {
            self.lower[Self::lower_index(k, l)]
        } else {
            self.lower[Self::lower_index(l, k)].conj()
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut sum = 0.0;
        for k in 0..self.n {
            for l in 0..=k {
                let sq = self.lower[Self::lower_index(k, l)].norm_sqr();
                sum += if l == k { sq } else { 2.0 * sq };
            }
        }
        sum.sqrt()
    }

    /// Dense row-major copy (used by the solver and by tests).
    pub fn to_dense(&self) -> Vec<Complex64> {
        let n = self.n;
        let mut dense = vec![ZERO; n * n];
        for k in 0..n {
            for l in 0..=k {
                let v = self.lower[Self::lower_index(k, l)];
                dense[k * n + l] = v;
                dense[l * n + k] = v.conj();
            }
        }
        dense
    }

    fn is_finite(&self) -> bool {
        self.lower
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Result of diagonalizing a Hermitian matrix: `H = U diag(lambda) U^dagger`
/// with ascending real eigenvalues and unitary `U` stored column-major
/// (column `j` is the eigenvector of `lambda[j]`).
#[derive(Debug, Clone)]
pub struct EigenFactorization {
    n: usize,
    lambdas: Vec<f64>,
    u: Vec<Complex64>, // column-major: u[j * n + i] = U_{ij}
}

impl EigenFactorization {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambdas
    }

    /// Column-major unitary factor; column `j` is the eigenvector of
    /// `eigenvalues()[j]`.
    pub fn eigenvectors(&self) -> &[Complex64] {
        &self.u
    }

    /// `U v`.
    pub fn apply_u(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        let mut out = vec![ZERO; self.n];
        for (j, &vj) in v.iter().enumerate() {
            let col = &self.u[j * self.n..(j + 1) * self.n];
            for (o, &c) in out.iter_mut().zip(col) {
                *o += c * vj;
            }
        }
        out
    }

    /// `U^dagger v`.
    pub fn apply_u_dagger(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|j| {
                let col = &self.u[j * self.n..(j + 1) * self.n];
                col.iter().zip(v).map(|(c, x)| c.conj() * x).sum()
            })
            .collect()
    }

    /// Prepares application of `exp(sign * i * t * H)`.
    pub fn propagator(&self, t: f64, sign: PhaseSign) -> UnitaryPropagator<'_> {
        propagator(self, t, sign)
    }
}

/// Sign of the exponent in `exp(sign * i * t * H)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSign {
    Plus,
    Minus,
}

impl PhaseSign {
    fn factor(self) -> f64 {
        match self {
            PhaseSign::Plus => 1.0,
            PhaseSign::Minus => -1.0,
        }
    }
}

/// Applies `exp(sign * i * t * H) = U diag(e^{sign * i * t * lambda}) U^dagger`
/// through two dense matrix-vector products; exactly unitary up to roundoff
/// because the eigenvalue phases have modulus one.
#[derive(Debug, Clone)]
pub struct UnitaryPropagator<'a> {
    fac: &'a EigenFactorization,
    phases: Vec<Complex64>,
}

/// Builds the propagator for `exp(sign * i * t * H)` from a factorization of `H`.
pub fn propagator(fac: &EigenFactorization, t: f64, sign: PhaseSign) -> UnitaryPropagator<'_> {
    let s = sign.factor() * t;
    let phases = fac
        .lambdas
        .iter()
        .map(|&l| {
            let angle = s * l;
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect();
    UnitaryPropagator { fac, phases }
}

impl UnitaryPropagator<'_> {
    pub fn dim(&self) -> usize {
        self.fac.n
    }

    /// `exp(sign * i * t * H) v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut spectral = self.fac.apply_u_dagger(v);
        for (s, p) in spectral.iter_mut().zip(&self.phases) {
            *s *= p;
        }
        self.fac.apply_u(&spectral)
    }
}

/// Seam for plugging in an external eigensolver; the built-in one is
/// [`HouseholderQl`].
pub trait EigenBackend {
    fn eigendecompose(&self, h: &HermitianMatrix) -> Result<EigenFactorization, EigError>;
}

/// The built-in dense solver (Householder reduction + phase transform +
/// implicit QL with Wilkinson shifts).
#[derive(Debug, Clone, Copy, Default)]
pub struct HouseholderQl;

/// Diagonalizes with the built-in backend.
pub fn eigendecompose(h: &HermitianMatrix) -> Result<EigenFactorization, EigError> {
    HouseholderQl.eigendecompose(h)
}

impl EigenBackend for HouseholderQl {
    fn eigendecompose(&self, h: &HermitianMatrix) -> Result<EigenFactorization, EigError> {
        let n = h.dim();
        if n == 0 {
            return Err(EigError::Empty);
        }
        if !h.is_finite() {
            return Err(EigError::NonFinite);
        }

        // Working dense copy (row-major) kept numerically Hermitian: rank-2
        // updates write the lower triangle and mirror it.
        let mut a = h.to_dense();
        let mut diag = vec![0.0f64; n];
        let mut offdiag = vec![ZERO; n]; // offdiag[i] couples i and i+1; last unused
        let mut reflectors: Vec<(usize, Vec<Complex64>, f64)> = Vec::new();

        // Householder reduction to complex tridiagonal form.
        for i in 0..n.saturating_sub(2) {
            let start = i + 1;
            let m = n - start; // length of the column below the diagonal
            let mut x = vec![ZERO; m];
            for (r, xi) in x.iter_mut().enumerate() {
                *xi = a[(start + r) * n + i];
            }
            let sigma = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            let tail_zero = x[1..].iter().all(|v| *v == ZERO);
            if sigma == 0.0 || tail_zero {
                offdiag[i] = x[0];
                reflectors.push((start, Vec::new(), 0.0));
                continue;
            }
            let alpha = x[0];
            let phase = if alpha == ZERO {
                Complex64::new(1.0, 0.0)
            } else {
                alpha / alpha.norm()
            };
            // v = x + phase * sigma * e1, H = I - beta v v^dagger maps x to
            // -phase * sigma * e1.
            let mut v = x;
            v[0] += phase * sigma;
            let beta = 2.0 / v.iter().map(|z| z.norm_sqr()).sum::<f64>();
            offdiag[i] = -phase * sigma;

            // p = beta * A_sub * v. Only the lower triangle of the trailing
            // block is kept current; each stored entry feeds both its own row
            // and, conjugated, the mirrored row.
            let mut p = vec![ZERO; m];
            for r in 0..m {
                let row = &a[(start + r) * n + start..(start + r) * n + start + r + 1];
                let mut acc = row[r] * v[r];
                for c in 0..r {
                    acc += row[c] * v[c];
                    p[c] += row[c].conj() * v[r];
                }
                p[r] += acc;
            }
            for pi in &mut p {
                *pi *= beta;
            }
            // w = p - (beta/2) (v^dagger p) v keeps the update Hermitian.
            let vp: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
            let kappa = 0.5 * beta * vp;
            let w: Vec<Complex64> = p
                .iter()
                .zip(&v)
                .map(|(pi, vi)| pi - kappa * vi)
                .collect();
            // A_sub -= v w^dagger + w v^dagger on the lower triangle.
            for r in 0..m {
                let row = &mut a[(start + r) * n + start..(start + r) * n + start + r + 1];
                let (vr, wr) = (v[r], w[r]);
                for c in 0..r {
                    row[c] -= vr * w[c].conj() + wr * v[c].conj();
                }
                let dr = row[r] - (vr * wr.conj() + wr * vr.conj());
                row[r] = Complex64::new(dr.re, 0.0);
            }
            // Column i now reduces to the single subdiagonal entry.
            a[start * n + i] = offdiag[i];
            for r in 1..m {
                a[(start + r) * n + i] = ZERO;
            }
            reflectors.push((start, v, beta));
        }
        if n >= 2 {
            offdiag[n - 2] = a[(n - 1) * n + (n - 2)];
        }
        for i in 0..n {
            diag[i] = a[i * n + i].re;
        }

        // Accumulate Q = H_0 H_1 ... (column-major) by applying reflectors in
        // reverse to the identity; reflector i only touches rows/cols >= i+1.
        let mut u = vec![ZERO; n * n];
        for j in 0..n {
            u[j * n + j] = Complex64::new(1.0, 0.0);
        }
        for (start, v, beta) in reflectors.iter().rev() {
            if v.is_empty() {
                continue;
            }
            let m = v.len();
            for col in *start..n {
                let colslice = &mut u[col * n + start..col * n + start + m];
                let dot: Complex64 = v
                    .iter()
                    .zip(colslice.iter())
                    .map(|(vi, qi)| vi.conj() * qi)
                    .sum();
                let scale = *beta * dot;
                for (qi, vi) in colslice.iter_mut().zip(v) {
                    *qi -= scale * vi;
                }
            }
        }

        // Diagonal phase transform: make the off-diagonals real non-negative
        // and fold the phases into the columns of Q.
        let mut e = vec![0.0f64; n];
        let mut phi = Complex64::new(1.0, 0.0);
        for i in 0..n.saturating_sub(1) {
            let mag = offdiag[i].norm();
            e[i] = mag;
            let next_phi = if mag == 0.0 { phi } else { offdiag[i] * phi / mag };
            // Column i already carries phi; scale column i+1 by next_phi.
            if next_phi != Complex64::new(1.0, 0.0) {
                for q in &mut u[(i + 1) * n..(i + 2) * n] {
                    *q *= next_phi;
                }
            }
            phi = next_phi;
        }

        ql_implicit(&mut diag, &mut e, &mut u, n)?;

        // Sort ascending, permuting eigenvector columns alongside.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
        let lambdas: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
        let mut sorted_u = vec![ZERO; n * n];
        for (dst, &src) in order.iter().enumerate() {
            sorted_u[dst * n..(dst + 1) * n].copy_from_slice(&u[src * n..(src + 1) * n]);
        }

        Ok(EigenFactorization {
            n,
            lambdas,
            u: sorted_u,
        })
    }
}

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal matrix
/// (diagonal `d`, sub-diagonal `e`, sentinel `e[n-1] = 0`), accumulating the
/// rotations into the column-major complex matrix `v`.
fn ql_implicit(d: &mut [f64], e: &mut [f64], v: &mut [Complex64], n: usize) -> Result<(), EigError> {
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut sweeps = 0usize;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(EigError::NoConvergence {
                        size: n,
                        residual: e[l].abs(),
                        sweeps: MAX_SWEEPS,
                    });
                }

                // Wilkinson shift.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                // Implicit QL sweep from m down to l.
                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    // Rotate eigenvector columns i and i+1.
                    let (lo, hi) = v.split_at_mut((i + 1) * n);
                    let col_i = &mut lo[i * n..(i + 1) * n];
                    let col_j = &mut hi[..n];
                    for (qi, qj) in col_i.iter_mut().zip(col_j.iter_mut()) {
                        let t = *qj;
                        *qj = s * *qi + c * t;
                        *qi = c * *qi - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
