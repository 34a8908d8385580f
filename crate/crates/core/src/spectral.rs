//! Eigendecomposition of banded Hermitian matrices.
//!
//! The matrix is first reduced to real symmetric tridiagonal form with
//! bulge-chasing Givens rotations that never leave the band, then diagonalized
//! by implicit QL iteration with Wilkinson shifts. The unitary eigenvector
//! matrix is never formed: it is kept as the logged rotation sequence, so both
//! the decomposition and every application of it to a vector cost O(n^2) for a
//! fixed bandwidth. This is what lets the dense oracle run at dimensions well
//! above a thousand.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;

/// Complex Givens rotation acting on the index pair `(p, p + 1)`.
///
/// As a 2x2 block it is `[[c, s], [-conj(s), c]]` with real `c`.
#[derive(Debug, Clone, Copy)]
struct ComplexRotation {
    p: u32,
    c: f64,
    s: Complex64,
}

impl ComplexRotation {
    /// Rotation that annihilates `y` against the pivot `x`.
    fn annihilating(p: usize, x: Complex64, y: Complex64) -> Self {
        let ax = x.norm();
        let rho = Float::hypot(ax, y.norm());
        if ax == 0.0 {
            ComplexRotation { p: p as u32, c: 0.0, s: Complex64::new(1.0, 0.0) }
        } else {
            ComplexRotation { p: p as u32, c: ax / rho, s: (x / ax) * y.conj() / rho }
        }
    }

    #[inline]
    fn apply(&self, v: &mut [Complex64]) {
        let p = self.p as usize;
        let (x, y) = (v[p], v[p + 1]);
        v[p] = x * self.c + self.s * y;
        v[p + 1] = -self.s.conj() * x + y * self.c;
    }

    #[inline]
    fn apply_adjoint(&self, v: &mut [Complex64]) {
        let p = self.p as usize;
        let (x, y) = (v[p], v[p + 1]);
        v[p] = x * self.c - self.s * y;
        v[p + 1] = self.s.conj() * x + y * self.c;
    }
}

/// Real plane rotation recorded by the QL sweeps; block `[[c, s], [-s, c]]`.
#[derive(Debug, Clone, Copy)]
struct RealRotation {
    i: u32,
    c: f64,
    s: f64,
}

impl RealRotation {
    #[inline]
    fn apply(&self, v: &mut [Complex64]) {
        let i = self.i as usize;
        let (x, y) = (v[i], v[i + 1]);
        v[i] = x * self.c + y * self.s;
        v[i + 1] = y * self.c - x * self.s;
    }

    #[inline]
    fn apply_transpose(&self, v: &mut [Complex64]) {
        let i = self.i as usize;
        let (x, y) = (v[i], v[i + 1]);
        v[i] = x * self.c - y * self.s;
        v[i + 1] = x * self.s + y * self.c;
    }
}

/// Factored eigendecomposition `A = U diag(eigenvalues) U^H`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    eigenvalues: Vec<f64>,
    band: Vec<ComplexRotation>,
    phases: Vec<Complex64>,
    ql: Vec<RealRotation>,
}

impl HermitianEigen {
    /// Decomposes a row-major `dim x dim` Hermitian matrix whose entries vanish
    /// outside `|i - j| <= bandwidth`. Only the band is read; Hermiticity is
    /// assumed, not checked.
    pub fn from_banded(entries: &[Complex64], dim: usize, bandwidth: usize) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { left: entries.len(), right: dim * dim });
        }
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        let mut a = entries.to_vec();
        let band = reduce_band(&mut a, dim, bandwidth.min(dim - 1));

        let diag: Vec<f64> = (0..dim).map(|i| a[i * dim + i].re).collect();
        let mut off = Vec::with_capacity(dim.saturating_sub(1));
        let mut phases = Vec::with_capacity(dim);
        phases.push(Complex64::new(1.0, 0.0));
        for i in 0..dim - 1 {
            let e = a[(i + 1) * dim + i];
            let m = e.norm();
            let last = phases[i];
            phases.push(if m > 0.0 { last * (e / m) } else { last });
            off.push(m);
        }

        let (eigenvalues, ql) = tridiagonal_ql(diag, off)?;
        Ok(HermitianEigen { eigenvalues, band, phases, ql })
    }

    /// Decomposes the real symmetric tridiagonal matrix with the given
    /// diagonal and sub-diagonal.
    pub fn from_tridiagonal(diag: &[f64], off: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch { left: off.len() + 1, right: diag.len() });
        }
        let (eigenvalues, ql) = tridiagonal_ql(diag.to_vec(), off.to_vec())?;
        Ok(HermitianEigen {
            phases: alloc::vec![Complex64::new(1.0, 0.0); diag.len()],
            eigenvalues,
            band: Vec::new(),
            ql,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues, in the (unsorted) order matching the eigenbasis coordinates.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Replaces `v` by its coordinates `U^H v` in the eigenbasis.
    pub fn to_eigenbasis(&self, v: &mut [Complex64]) {
        assert_eq!(v.len(), self.dim());
        for rot in &self.band {
            rot.apply(v);
        }
        for (x, ph) in v.iter_mut().zip(&self.phases) {
            *x *= ph.conj();
        }
        for rot in &self.ql {
            rot.apply_transpose(v);
        }
    }

    /// Replaces eigenbasis coordinates `y` by the vector `U y`.
    pub fn from_eigenbasis(&self, y: &mut [Complex64]) {
        assert_eq!(y.len(), self.dim());
        for rot in self.ql.iter().rev() {
            rot.apply(y);
        }
        for (x, ph) in y.iter_mut().zip(&self.phases) {
            *x *= ph;
        }
        for rot in self.band.iter().rev() {
            rot.apply_adjoint(y);
        }
    }

    /// The `j`-th eigenvector as a dense column.
    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        let mut y = alloc::vec![Complex64::new(0.0, 0.0); self.dim()];
        y[j] = Complex64::new(1.0, 0.0);
        self.from_eigenbasis(&mut y);
        y
    }

    /// `exp(i t A) v`.
    pub fn exp_i_apply(&self, t: f64, v: &[Complex64]) -> Vec<Complex64> {
        let mut y = v.to_vec();
        self.to_eigenbasis(&mut y);
        for (c, &lambda) in y.iter_mut().zip(&self.eigenvalues) {
            let (s, co) = Float::sin_cos(t * lambda);
            *c *= Complex64::new(co, s);
        }
        self.from_eigenbasis(&mut y);
        y
    }
}

/// Chases the band of a Hermitian matrix down to tridiagonal form in place and
/// returns the rotations `G_1, G_2, ...` with `T = ... G_2 G_1 A G_1^H G_2^H ...`.
fn reduce_band(a: &mut [Complex64], n: usize, b: usize) -> Vec<ComplexRotation> {
    let mut log = Vec::new();
    if b < 2 {
        return log;
    }
    for k in 0..n.saturating_sub(2) {
        let top = (k + b).min(n - 1);
        for i in (k + 2..=top).rev() {
            // annihilate (p + 1, col) against (p, col); each rotation leaves one
            // bulge at (p + 1 + b, p) which is chased off the bottom.
            let mut p = i - 1;
            let mut col = k;
            loop {
                let x = a[p * n + col];
                let y = a[(p + 1) * n + col];
                if y == Complex64::new(0.0, 0.0) {
                    break;
                }
                let rot = ComplexRotation::annihilating(p, x, y);
                rotate_similarity(a, n, b, &rot);
                a[(p + 1) * n + col] = Complex64::new(0.0, 0.0);
                a[col * n + p + 1] = Complex64::new(0.0, 0.0);
                log.push(rot);
                let bulge_row = p + 1 + b;
                if bulge_row >= n {
                    break;
                }
                col = p;
                p = bulge_row - 1;
            }
        }
    }
    log
}

fn rotate_similarity(a: &mut [Complex64], n: usize, b: usize, rot: &ComplexRotation) {
    let p = rot.p as usize;
    let q = p + 1;
    let lo = p.saturating_sub(b + 1);
    let hi = (q + b + 2).min(n);
    let (c, s) = (rot.c, rot.s);
    for j in lo..hi {
        let x = a[p * n + j];
        let y = a[q * n + j];
        a[p * n + j] = x * c + s * y;
        a[q * n + j] = -s.conj() * x + y * c;
    }
    for i in lo..hi {
        let x = a[i * n + p];
        let y = a[i * n + q];
        a[i * n + p] = x * c + y * s.conj();
        a[i * n + q] = -x * s + y * c;
    }
}

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal matrix.
/// Returns the eigenvalues and the rotation log whose product (in order) is
/// the orthogonal eigenvector matrix.
fn tridiagonal_ql(mut d: Vec<f64>, off: Vec<f64>) -> Result<(Vec<f64>, Vec<RealRotation>)> {
    let n = d.len();
    let mut e = off;
    e.push(0.0);
    let mut log = Vec::new();

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::EigenNoConvergence { index: l });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = Float::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = Float::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                log.push(RealRotation { i: i as u32, c, s });
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, log))
}

#[cfg(test)]
mod tests {
    extern crate std;
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Deterministic pseudo-random Hermitian band matrix.
    fn banded(n: usize, b: usize, seed: u64) -> Vec<Complex64> {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c(next(), 0.0);
            for j in i + 1..(i + b + 1).min(n) {
                let z = c(next(), next());
                a[i * n + j] = z;
                a[j * n + i] = z.conj();
            }
        }
        a
    }

    fn reconstruct_error(a: &[Complex64], n: usize, eig: &HermitianEigen) -> f64 {
        let vecs: Vec<Vec<Complex64>> = (0..n).map(|j| eig.eigenvector(j)).collect();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = c(0.0, 0.0);
                for k in 0..n {
                    s += vecs[k][i] * eig.eigenvalues()[k] * vecs[k][j].conj();
                }
                worst = worst.max((s - a[i * n + j]).norm());
            }
        }
        worst
    }

    #[test]
    fn reconstructs_banded_matrices() {
        for &(n, b) in &[(1, 0), (2, 1), (5, 0), (7, 1), (12, 2), (20, 3), (33, 5), (16, 15)] {
            let a = banded(n, b, 17 + n as u64);
            let eig = HermitianEigen::from_banded(&a, n, b).unwrap();
            let err = reconstruct_error(&a, n, &eig);
            assert!(err < 1e-12, "n={n} b={b} err={err}");
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let n = 24;
        let a = banded(n, 2, 5);
        let eig = HermitianEigen::from_banded(&a, n, 2).unwrap();
        let vecs: Vec<Vec<Complex64>> = (0..n).map(|j| eig.eigenvector(j)).collect();
        for i in 0..n {
            for j in 0..n {
                let dot: Complex64 = vecs[i].iter().zip(&vecs[j]).map(|(x, y)| x.conj() * y).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - c(expect, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn tridiagonal_eigenvalues_of_path_graph() {
        // eigenvalues of the n-site hopping chain are 2 cos(k pi / (n + 1))
        let n = 9;
        let eig = HermitianEigen::from_tridiagonal(&vec![0.0; n], &vec![1.0; n - 1]).unwrap();
        let mut got = eig.eigenvalues().to_vec();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want: Vec<f64> = (1..=n)
            .map(|k| 2.0 * Float::cos(k as f64 * core::f64::consts::PI / (n as f64 + 1.0)))
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-13);
        }
    }

    #[test]
    fn exponential_is_unitary_and_additive() {
        let n = 40;
        let a = banded(n, 2, 99);
        let eig = HermitianEigen::from_banded(&a, n, 2).unwrap();
        let mut v = vec![c(0.0, 0.0); n];
        v[0] = c(0.6, 0.0);
        v[3] = c(0.0, 0.8);
        let one = eig.exp_i_apply(1.7, &v);
        let norm: f64 = one.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-13);
        let two = eig.exp_i_apply(0.5, &eig.exp_i_apply(1.2, &v));
        for (x, y) in one.iter().zip(&two) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn diagonal_input_needs_no_rotations() {
        let n = 4;
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c(i as f64, 0.0);
        }
        let eig = HermitianEigen::from_banded(&a, n, 0).unwrap();
        assert_eq!(eig.eigenvalues(), &[0.0, 1.0, 2.0, 3.0]);
        let v = vec![c(1.0, 0.0); n];
        let out = eig.exp_i_apply(core::f64::consts::PI, &v);
        assert!((out[1] - c(-1.0, 0.0)).norm() < 1e-15);
    }
}
