//! Truncated Fock space: state vectors, banded operator matrices, the ladder
//! operators and exact unitary evolution.
//!
//! Every closed form elsewhere in the crate is checked against this module,
//! so nothing here depends on the coherent-state analytics.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::spectral::HermitianEigen;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Hermiticity tolerance, relative to the largest entry (floored at 1).
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed drift of the norm under unitary evolution.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Truncation size plus the guard band used to detect leakage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    dim: usize,
    tail_tolerance: f64,
    guard_fraction: f64,
}

impl TruncationConfig {
    pub const DEFAULT_DIM: usize = 256;
    pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;
    pub const DEFAULT_GUARD_FRACTION: f64 = 0.125;

    pub fn new(dim: usize) -> Result<Self> {
        Self::with_tolerances(dim, Self::DEFAULT_TAIL_TOLERANCE, Self::DEFAULT_GUARD_FRACTION)
    }

    pub fn with_tolerances(dim: usize, tail_tolerance: f64, guard_fraction: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        if !(tail_tolerance > 0.0) {
            return Err(Error::InvalidParameter("tail_tolerance must be positive"));
        }
        if !(guard_fraction > 0.0 && guard_fraction < 1.0) {
            return Err(Error::InvalidParameter("guard_fraction must lie in (0, 1)"));
        }
        Ok(TruncationConfig { dim, tail_tolerance, guard_fraction })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    pub fn guard_fraction(&self) -> f64 {
        self.guard_fraction
    }

    /// Number of top indices forming the guard band (at least one).
    pub fn guard_len(&self) -> usize {
        let g = Float::ceil(self.dim as f64 * self.guard_fraction) as usize;
        g.clamp(1, self.dim)
    }

    /// Number of leading indices outside the guard band.
    pub fn safe_len(&self) -> usize {
        self.dim - self.guard_len()
    }

    fn require_dim(&self, min: usize) -> Result<()> {
        if self.dim < min {
            Err(Error::DimensionTooSmall { min, got: self.dim })
        } else {
            Ok(())
        }
    }
}

impl Default for TruncationConfig {
    fn default() -> Self {
        TruncationConfig {
            dim: Self::DEFAULT_DIM,
            tail_tolerance: Self::DEFAULT_TAIL_TOLERANCE,
            guard_fraction: Self::DEFAULT_GUARD_FRACTION,
        }
    }
}

/// Coefficients of a state over `|0>, ..., |dim - 1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        Ok(FockVector { amplitudes })
    }

    /// The number state `|k>`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionTooSmall { min: k + 1, got: dim });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[k] = ONE;
        Ok(FockVector { amplitudes })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::basis(dim, 0)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Probability carried by the guard band of `cfg`.
    pub fn guard_mass(&self, cfg: &TruncationConfig) -> f64 {
        let start = self.dim().saturating_sub(cfg.guard_len());
        self.amplitudes[start..].iter().map(|z| z.norm_sqr()).sum()
    }

    /// Mean occupation `sum_k k |c_k|^2`.
    pub fn mean_index(&self) -> f64 {
        self.amplitudes.iter().enumerate().map(|(k, z)| k as f64 * z.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> FockVector {
        FockVector { amplitudes: self.amplitudes.iter().map(|z| z * factor).collect() }
    }
}

/// `sum_k conj(u_k) v_k`.
pub fn inner(u: &FockVector, v: &FockVector) -> Result<Complex64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { left: u.dim(), right: v.dim() });
    }
    Ok(u.amplitudes.iter().zip(&v.amplitudes).map(|(x, y)| x.conj() * y).sum())
}

/// Dense square complex matrix that tracks its bandwidth.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    bandwidth: usize,
}

impl OperatorMatrix {
    /// Wraps row-major entries; the bandwidth is read off the sparsity pattern.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { left: entries.len(), right: dim * dim });
        }
        let mut m = OperatorMatrix { dim, entries, bandwidth: 0 };
        m.bandwidth = m.measure_bandwidth();
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        let mut m = OperatorMatrix { dim, entries, bandwidth: 0 };
        m.bandwidth = m.measure_bandwidth();
        m
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    fn measure_bandwidth(&self) -> usize {
        let n = self.dim;
        let mut b = 0;
        for i in 0..n {
            for j in 0..n {
                if self.entries[i * n + j] != ZERO {
                    b = b.max(i.abs_diff(j));
                }
            }
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    /// Column range that can hold nonzeros in row `i`.
    #[inline]
    fn band_cols(&self, i: usize) -> core::ops::Range<usize> {
        i.saturating_sub(self.bandwidth)..(i + self.bandwidth + 1).min(self.dim)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        OperatorMatrix {
            dim: n,
            entries: (0..n * n).map(|idx| self.entries[(idx % n) * n + idx / n].conj()).collect(),
            bandwidth: self.bandwidth,
        }
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in self.band_cols(i) {
                let x = self.entries[i * n + k];
                if x == ZERO {
                    continue;
                }
                for j in other.band_cols(k) {
                    out[i * n + j] += x * other.entries[k * n + j];
                }
            }
        }
        OperatorMatrix::from_entries(n, out)
    }

    /// Matrix-vector product restricted to the band.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: v.len() });
        }
        let n = self.dim;
        Ok((0..n)
            .map(|i| self.band_cols(i).map(|j| self.entries[i * n + j] * v[j]).sum())
            .collect())
    }

    pub fn apply_to(&self, v: &FockVector) -> Result<FockVector> {
        FockVector::new(self.apply(v.amplitudes())?)
    }

    /// Largest `|A_ij - conj(A_ji)|` over the leading `block x block` corner.
    pub fn hermiticity_deviation(&self, block: usize) -> f64 {
        let n = self.dim;
        let block = block.min(n);
        let mut worst = 0.0f64;
        for i in 0..block {
            for j in i..block {
                worst = worst.max((self.entries[i * n + j] - self.entries[j * n + i].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Whether the whole matrix is Hermitian within [`HERMITIAN_TOL`].
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation(self.dim) <= HERMITIAN_TOL * self.max_abs().max(1.0)
    }

    /// Largest entrywise difference over the leading `block x block` corner.
    pub fn max_diff_in_block(&self, other: &OperatorMatrix, block: usize) -> Result<f64> {
        self.same_dim(other)?;
        let n = self.dim;
        let block = block.min(n);
        let mut worst = 0.0f64;
        for i in 0..block {
            for j in 0..block {
                worst = worst.max((self.entries[i * n + j] - other.entries[i * n + j]).norm());
            }
        }
        Ok(worst)
    }

    /// The leading `dim x dim` corner.
    pub fn truncated(&self, dim: usize) -> Result<OperatorMatrix> {
        if dim == 0 || dim > self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: dim });
        }
        let n = self.dim;
        Ok(OperatorMatrix::from_fn(dim, |i, j| self.entries[i * n + j]))
    }

    pub fn scale(&self, factor: Complex64) -> OperatorMatrix {
        let entries: Vec<Complex64> = self.entries.iter().map(|z| z * factor).collect();
        OperatorMatrix::from_entries(self.dim, entries).expect("same shape")
    }

    fn same_dim(&self, other: &OperatorMatrix) -> Result<()> {
        if self.dim != other.dim {
            Err(Error::DimensionMismatch { left: self.dim, right: other.dim })
        } else {
            Ok(())
        }
    }

    fn zip_with(&self, other: &OperatorMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> OperatorMatrix {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(&x, &y)| f(x, y)).collect();
        OperatorMatrix::from_entries(self.dim, entries).expect("same shape")
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.zip_with(rhs, |x, y| x + y)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.zip_with(rhs, |x, y| x - y)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.matmul(rhs).expect("operator dimension mismatch")
    }
}

impl Mul<f64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: f64) -> OperatorMatrix {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Mul<Complex64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Complex64) -> OperatorMatrix {
        self.scale(rhs)
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Annihilation and creation operators, `a|k> = sqrt(k)|k-1>`.
pub fn build_ladders(cfg: &TruncationConfig) -> Result<(OperatorMatrix, OperatorMatrix)> {
    cfg.require_dim(2)?;
    let n = cfg.dim();
    let a = OperatorMatrix::from_fn(n, |i, j| {
        if j == i + 1 {
            Complex64::new(Float::sqrt(j as f64), 0.0)
        } else {
            ZERO
        }
    });
    let a_dagger = a.adjoint();
    Ok((a, a_dagger))
}

/// Reusable `exp(i t L)` for a fixed Hermitian `L`.
#[derive(Debug, Clone)]
pub struct Propagator {
    cfg: TruncationConfig,
    eigen: HermitianEigen,
}

impl Propagator {
    pub fn new(l: &OperatorMatrix, cfg: &TruncationConfig) -> Result<Self> {
        if l.dim() != cfg.dim() {
            return Err(Error::DimensionMismatch { left: l.dim(), right: cfg.dim() });
        }
        let deviation = l.hermiticity_deviation(l.dim());
        if deviation > HERMITIAN_TOL * l.max_abs().max(1.0) {
            return Err(Error::NonHermitianInput { deviation });
        }
        let eigen = HermitianEigen::from_banded(l.entries(), l.dim(), l.bandwidth())?;
        Ok(Propagator { cfg: *cfg, eigen })
    }

    pub fn config(&self) -> &TruncationConfig {
        &self.cfg
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.eigen.eigenvalues()
    }

    /// `exp(i t L) v0` with the normalization and guard-band checks.
    pub fn evolve(&self, t: f64, v0: &FockVector) -> Result<FockVector> {
        if v0.dim() != self.cfg.dim() {
            return Err(Error::DimensionMismatch { left: self.cfg.dim(), right: v0.dim() });
        }
        let n0 = v0.norm_sqr();
        if (n0 - 1.0).abs() > UNITARITY_TOL {
            return Err(Error::NotNormalized { norm_sqr: n0 });
        }
        let out = FockVector { amplitudes: self.eigen.exp_i_apply(t, v0.amplitudes()) };
        let n1 = out.norm_sqr();
        if (n1 - 1.0).abs() > UNITARITY_TOL {
            return Err(Error::NormDrift { norm_sqr: n1 });
        }
        let mass = out.guard_mass(&self.cfg);
        if mass > self.cfg.tail_tolerance() {
            return Err(Error::TruncationOverflow { mass, tolerance: self.cfg.tail_tolerance() });
        }
        Ok(out)
    }

    /// `exp(i t L) v` with no normalization or guard checks; for building
    /// operator-level unitaries column by column.
    pub fn evolve_unchecked(&self, t: f64, v: &[Complex64]) -> Vec<Complex64> {
        self.eigen.exp_i_apply(t, v)
    }
}

/// `exp(i t L) v0` by eigendecomposition of the Hermitian `L`.
pub fn evolve_state(l: &OperatorMatrix, t: f64, v0: &FockVector, cfg: &TruncationConfig) -> Result<FockVector> {
    Propagator::new(l, cfg)?.evolve(t, v0)
}

/// `exp(X)` for anti-Hermitian `X`, as a dense unitary.
pub fn unitary_exp(x: &OperatorMatrix) -> Result<OperatorMatrix> {
    // exp(X) = exp(i * 1 * H) with H = -i X
    let h = x.scale(Complex64::new(0.0, -1.0));
    let cfg = TruncationConfig::new(x.dim())?;
    let prop = Propagator::new(&h, &cfg)?;
    let n = x.dim();
    let mut entries = vec![ZERO; n * n];
    let mut e = vec![ZERO; n];
    for j in 0..n {
        e.iter_mut().for_each(|z| *z = ZERO);
        e[j] = ONE;
        let col = prop.evolve_unchecked(1.0, &e);
        for (i, z) in col.into_iter().enumerate() {
            entries[i * n + j] = z;
        }
    }
    OperatorMatrix::from_entries(n, entries)
}
