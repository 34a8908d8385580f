//! Lanczos tridiagonalization of a Hermitian Liouvillian and evolution on
//! the resulting hopping chain.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fock::{FockVector, OperatorMatrix, HERMITIAN_TOL, UNITARITY_TOL};
use crate::spectral::HermitianEigen;

/// A candidate `b_n` at or below this ends the chain.
pub const BREAKDOWN_TOL: f64 = 1e-12;
/// Largest end-site probability tolerated by [`propagate_chain`].
pub const EDGE_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Lanczos coefficients of a chain with `m` sites.
///
/// `b[n - 1]` couples sites `n - 1` and `n`. Site energies `a_n` are kept
/// since they vanish only for parity-symmetric Liouvillians.
#[derive(Debug, Clone, PartialEq)]
pub struct KrylovChain {
    a: Vec<f64>,
    b: Vec<f64>,
    residual: f64,
    exhausted: bool,
}

impl KrylovChain {
    /// Chain with the given site energies and hoppings.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || b.len() + 1 != a.len() {
            return Err(Error::InvalidParameter("chain needs m site energies and m - 1 hoppings"));
        }
        if b.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::InvalidParameter("hoppings must be positive"));
        }
        Ok(KrylovChain { a, b, residual: 0.0, exhausted: false })
    }

    /// Pure hopping chain with zero site energies.
    pub fn from_hoppings(b: Vec<f64>) -> Result<Self> {
        Self::new(vec![0.0; b.len() + 1], b)
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// `b_1 .. b_{m-1}`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Norm of the first discarded Lanczos vector.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// The Krylov space closed before `m` sites were requested.
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn max_diagonal(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(Float::abs(*x)))
    }
}

/// Orthonormal Lanczos vectors `|K_0> .. |K_{m-1}>`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrylovBasis {
    vectors: Vec<Vec<Complex64>>,
}

impl KrylovBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, n: usize) -> &[Complex64] {
        &self.vectors[n]
    }

    /// `<K_n|psi>` for every basis vector.
    pub fn project(&self, psi: &[Complex64]) -> Vec<Complex64> {
        self.vectors.iter().map(|k| dot(k, psi)).collect()
    }

    /// `sum n |<K_n|psi>|^2`.
    pub fn position(&self, psi: &[Complex64]) -> f64 {
        self.project(psi).iter().enumerate().map(|(n, z)| n as f64 * z.norm_sqr()).sum()
    }

    /// Largest `|<K_i|K_j> - delta_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(u, v) - target).norm());
            }
        }
        worst
    }
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    Float::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

fn orthogonalize(w: &mut [Complex64], basis: &[Vec<Complex64>]) {
    // classical Gram-Schmidt, applied twice
    for _ in 0..2 {
        let coeffs: Vec<Complex64> = basis.iter().map(|q| dot(q, w)).collect();
        for (q, c) in basis.iter().zip(coeffs) {
            for (x, y) in w.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
}

/// Lanczos recursion from `seed`, keeping at most `m` sites.
pub fn lanczos_tridiagonalize(l: &OperatorMatrix, seed: &FockVector, m: usize, reorth: bool) -> Result<KrylovChain> {
    lanczos_with_basis(l, seed, m, reorth).map(|(chain, _)| chain)
}

/// [`lanczos_tridiagonalize`] that also returns the Lanczos vectors.
pub fn lanczos_with_basis(
    l: &OperatorMatrix,
    seed: &FockVector,
    m: usize,
    reorth: bool,
) -> Result<(KrylovChain, KrylovBasis)> {
    let dim = l.dim();
    if seed.dim() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: seed.dim() });
    }
    if m == 0 || m > dim {
        return Err(Error::InvalidParameter("chain length must lie in 1..=dim"));
    }
    let deviation = l.hermiticity_deviation(dim);
    if deviation > HERMITIAN_TOL * l.max_abs().max(1.0) {
        return Err(Error::NonHermitianInput { deviation });
    }
    let n0 = seed.norm_sqr();
    if Float::abs(n0 - 1.0) > UNITARITY_TOL {
        return Err(Error::NotNormalized { norm_sqr: n0 });
    }

    let mut a = Vec::with_capacity(m);
    let mut b: Vec<f64> = Vec::with_capacity(m);
    let mut vectors: Vec<Vec<Complex64>> = vec![seed.amplitudes().to_vec()];
    let mut exhausted = false;
    let residual = loop {
        let n = vectors.len() - 1;
        let q = &vectors[n];
        let mut w = l.apply(q)?;
        let an = dot(q, &w).re;
        for (x, y) in w.iter_mut().zip(q) {
            *x -= *y * an;
        }
        if n > 0 {
            let bn = b[n - 1];
            for (x, y) in w.iter_mut().zip(&vectors[n - 1]) {
                *x -= *y * bn;
            }
        }
        if reorth {
            orthogonalize(&mut w, &vectors);
        }
        a.push(an);
        let next = norm(&w);
        if vectors.len() == m {
            break next;
        }
        if next <= BREAKDOWN_TOL {
            exhausted = true;
            break next;
        }
        b.push(next);
        w.iter_mut().for_each(|z| *z /= next);
        vectors.push(w);
    };
    Ok((KrylovChain { a, b, residual, exhausted }, KrylovBasis { vectors }))
}

/// Chain amplitudes `phi_n(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainWavefunction {
    pub t: f64,
    pub phi: Vec<Complex64>,
}

impl ChainWavefunction {
    pub fn norm_sqr(&self) -> f64 {
        self.phi.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `phi(t) = exp(i t T) e_0` for the chain matrix `T`, at each grid time.
pub fn propagate_chain(chain: &KrylovChain, t_grid: &[f64]) -> Result<Vec<ChainWavefunction>> {
    if chain.m() < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: chain.m() });
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("time grid must be finite and ascending"));
    }
    let eigen = HermitianEigen::from_tridiagonal(&chain.a, &chain.b)?;
    let mut e0 = vec![ZERO; chain.m()];
    e0[0] = Complex64::new(1.0, 0.0);
    let last = chain.m() - 1;
    t_grid
        .iter()
        .map(|&t| {
            let phi = if t == 0.0 { e0.clone() } else { eigen.exp_i_apply(t, &e0) };
            let edge = phi[last].norm_sqr();
            if !chain.exhausted && edge > EDGE_TOL {
                return Err(Error::EdgeLeak { t, mass: edge });
            }
            let wf = ChainWavefunction { t, phi };
            let n = wf.norm_sqr();
            if Float::abs(n - 1.0) > EDGE_TOL {
                return Err(Error::NormDrift { norm_sqr: n });
            }
            Ok(wf)
        })
        .collect()
}

/// Mean chain position `sum n |phi_n|^2`.
pub fn chain_complexity(wf: &ChainWavefunction) -> f64 {
    wf.phi.iter().enumerate().map(|(n, z)| n as f64 * z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    extern crate std;
    use super::*;
    use crate::algebra::{build_generators, build_liouvillian, Generator, LiouvillianSpec};
    use crate::fock::{build_ladders, TruncationConfig};

    fn cfg(dim: usize) -> TruncationConfig {
        TruncationConfig::new(dim).unwrap()
    }

    #[test]
    fn displacement_chain_has_sqrt_n_hoppings() {
        let c = cfg(64);
        let (a, ad) = build_ladders(&c).unwrap();
        let l = &a + &ad;
        let chain = lanczos_tridiagonalize(&l, &FockVector::vacuum(64).unwrap(), 21, true).unwrap();
        for (n, b) in chain.b().iter().enumerate() {
            assert!((b - ((n + 1) as f64).sqrt()).abs() < 1e-9);
        }
        assert!(chain.max_diagonal() < 1e-12);
    }

    #[test]
    fn squeeze_chain_first_hopping() {
        let gens = build_generators(&cfg(64)).unwrap();
        let l = gens.get(Generator::LPlus1) + gens.get(Generator::LMinus1);
        let chain = lanczos_tridiagonalize(&l, &FockVector::vacuum(64).unwrap(), 10, true).unwrap();
        assert!((chain.b()[0] - 0.5f64.sqrt()).abs() < 1e-12);
        // b_n = sqrt(n (n - 1 + 2h)) with h = 1/4
        for (i, b) in chain.b().iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((b - (n * (n - 0.5)).sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn mixed_liouvillian_first_hopping() {
        let c = cfg(64);
        let l = build_liouvillian(&LiouvillianSpec::new(1.0, 1.0).unwrap(), &c).unwrap();
        let (chain, basis) = lanczos_with_basis(&l, &FockVector::vacuum(64).unwrap(), 30, true).unwrap();
        assert!((chain.b()[0] - 1.5f64.sqrt()).abs() < 1e-12);
        assert!(basis.orthonormality_defect() < 1e-10);
        // <K_1|L|K_1> = 4/3 at alpha = beta = 1
        assert!((chain.a()[1] - 4.0 / 3.0).abs() < 1e-12);
        for i in 0..basis.len() {
            let li = l.apply(basis.vector(i)).unwrap();
            for j in 0..basis.len() {
                if i.abs_diff(j) >= 2 {
                    assert!(dot(basis.vector(j), &li).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn breakdown_ends_the_chain() {
        let c = cfg(8);
        let (a, ad) = build_ladders(&c).unwrap();
        let chain = lanczos_tridiagonalize(&(&a + &ad), &FockVector::vacuum(8).unwrap(), 8, true).unwrap();
        assert_eq!(chain.m(), 8);
        assert!(!chain.is_exhausted());
        assert!(chain.residual() < 1e-12);
        let number = &ad * &a;
        let chain = lanczos_tridiagonalize(&number, &FockVector::basis(8, 3).unwrap(), 5, true).unwrap();
        assert!(chain.is_exhausted());
        assert_eq!(chain.m(), 1);
    }

    #[test]
    fn input_validation() {
        let c = cfg(8);
        let (a, _) = build_ladders(&c).unwrap();
        let vac = FockVector::vacuum(8).unwrap();
        assert!(matches!(lanczos_tridiagonalize(&a, &vac, 4, true), Err(Error::NonHermitianInput { .. })));
        let h = &a + &a.adjoint();
        assert!(lanczos_tridiagonalize(&h, &vac, 9, true).is_err());
        let half = vac.scaled(Complex64::new(0.5, 0.0));
        assert!(matches!(lanczos_tridiagonalize(&h, &half, 4, true), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn initial_condition() {
        let chain = KrylovChain::from_hoppings(vec![1.0, 2.0, 3.0]).unwrap();
        let wf = &propagate_chain(&chain, &[0.0]).unwrap()[0];
        assert_eq!(wf.phi[0], Complex64::new(1.0, 0.0));
        assert!(wf.phi[1..].iter().all(|z| z.norm() < 1e-15));
        assert_eq!(chain_complexity(wf), 0.0);
    }

    #[test]
    fn poisson_on_sqrt_n_chain() {
        let b: Vec<f64> = (1..60).map(|n| (n as f64).sqrt()).collect();
        let chain = KrylovChain::from_hoppings(b).unwrap();
        let wf = &propagate_chain(&chain, &[0.7]).unwrap()[0];
        let lambda: f64 = 0.49;
        let mut fact = 1.0;
        for (n, z) in wf.phi.iter().enumerate().take(20) {
            if n > 0 {
                fact *= n as f64;
            }
            let want = (-lambda).exp() * lambda.powi(n as i32) / fact;
            assert!((z.norm_sqr() - want).abs() < 1e-8);
        }
        assert!((chain_complexity(wf) - lambda).abs() < 1e-8);
    }

    #[test]
    fn squeeze_chain_complexity() {
        // b_n = sqrt(n (n - 1/2)) at h = 1/4
        let b: Vec<f64> = (1..200).map(|n| (n as f64 * (n as f64 - 0.5)).sqrt()).collect();
        let chain = KrylovChain::from_hoppings(b).unwrap();
        let wf = &propagate_chain(&chain, &[1.0]).unwrap()[0];
        let want = 0.5 * 1f64.sinh().powi(2);
        assert!((chain_complexity(wf) - want).abs() < 1e-6);
        assert!((want - 0.6905489).abs() < 1e-7);
    }

    #[test]
    fn edge_leak_is_reported() {
        let chain = KrylovChain::from_hoppings(vec![1.0; 5]).unwrap();
        let err = propagate_chain(&chain, &[0.0, 0.5, 5.0]).unwrap_err();
        assert!(matches!(err, Error::EdgeLeak { t, .. } if t == 0.5 || t == 5.0));
        assert!(propagate_chain(&KrylovChain::from_hoppings(vec![]).unwrap(), &[0.0]).is_err());
        assert!(propagate_chain(&chain, &[1.0, 0.5]).is_err());
    }
}
