//! Oscillator realization of the Heisenberg-Weyl, SL(2,R) and Schrodinger
//! generators, and the quadratic Liouvillian built from them.

use alloc::collections::BTreeMap;
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fock::{build_ladders, OperatorMatrix, TruncationConfig};

/// Real coefficients of `L = alpha (a^dag + a) + (beta / 2)(a^dag^2 + a^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiouvillianSpec {
    pub alpha: f64,
    pub beta: f64,
}

impl LiouvillianSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter("alpha and beta must be finite"));
        }
        Ok(LiouvillianSpec { alpha, beta })
    }
}

/// Labels of the generators in a [`GeneratorSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    A,
    ADagger,
    P,
    G,
    M,
    H,
    K,
    D,
    L0,
    LPlus1,
    LMinus1,
    Number,
}

impl Generator {
    pub const ALL: [Generator; 12] = [
        Generator::A,
        Generator::ADagger,
        Generator::P,
        Generator::G,
        Generator::M,
        Generator::H,
        Generator::K,
        Generator::D,
        Generator::L0,
        Generator::LPlus1,
        Generator::LMinus1,
        Generator::Number,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Generator::A => "a",
            Generator::ADagger => "a_dagger",
            Generator::P => "P",
            Generator::G => "G",
            Generator::M => "M",
            Generator::H => "H",
            Generator::K => "K",
            Generator::D => "D",
            Generator::L0 => "L0",
            Generator::LPlus1 => "L_plus1",
            Generator::LMinus1 => "L_minus1",
            Generator::Number => "number",
        }
    }

    pub fn from_label(label: &str) -> Option<Generator> {
        Generator::ALL.iter().copied().find(|g| g.label() == label)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// All generators at a common truncation.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    cfg: TruncationConfig,
    ops: BTreeMap<Generator, OperatorMatrix>,
}

impl GeneratorSet {
    pub fn config(&self) -> &TruncationConfig {
        &self.cfg
    }

    pub fn get(&self, g: Generator) -> &OperatorMatrix {
        &self.ops[&g]
    }

    pub fn by_label(&self, label: &str) -> Option<&OperatorMatrix> {
        Generator::from_label(label).map(|g| self.get(g))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Generator, &OperatorMatrix)> {
        self.ops.iter().map(|(g, m)| (*g, m))
    }
}

/// `eta (a^dag a + 1/2) + delta + R a^dag^2 + L a^2 + r a^dag + l a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticHamiltonian {
    pub eta: Complex64,
    pub delta: Complex64,
    /// coefficient of `a^dag^2`
    pub creation_sq: Complex64,
    /// coefficient of `a^2`
    pub annihilation_sq: Complex64,
    /// coefficient of `a^dag`
    pub creation: Complex64,
    /// coefficient of `a`
    pub annihilation: Complex64,
}

impl QuadraticHamiltonian {
    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        QuadraticHamiltonian { eta: z, delta: z, creation_sq: z, annihilation_sq: z, creation: z, annihilation: z }
    }

    /// The Liouvillian of `spec` written as a quadratic form.
    pub fn from_liouvillian(spec: &LiouvillianSpec) -> Self {
        let half_beta = Complex64::new(spec.beta / 2.0, 0.0);
        let alpha = Complex64::new(spec.alpha, 0.0);
        QuadraticHamiltonian {
            creation_sq: half_beta,
            annihilation_sq: half_beta,
            creation: alpha,
            annihilation: alpha,
            ..Self::zero()
        }
    }

    /// `eta`, `delta` real, `L = conj(R)` and `l = conj(r)`.
    pub fn is_hermitian(&self) -> bool {
        self.eta.im == 0.0
            && self.delta.im == 0.0
            && self.annihilation_sq == self.creation_sq.conj()
            && self.annihilation == self.creation.conj()
    }

    pub fn scale(&self, z: Complex64) -> Self {
        QuadraticHamiltonian {
            eta: self.eta * z,
            delta: self.delta * z,
            creation_sq: self.creation_sq * z,
            annihilation_sq: self.annihilation_sq * z,
            creation: self.creation * z,
            annihilation: self.annihilation * z,
        }
    }

    /// Lie bracket, closed on this six-dimensional span.
    pub fn bracket(&self, other: &Self) -> Self {
        let (x, y) = (self, other);
        // [E, a^dag^2] = 2 a^dag^2, [E, a^2] = -2 a^2, [E, a^dag] = a^dag, [E, a] = -a,
        // [a^2, a^dag^2] = 4E, [a, a^dag] = 1, [a^2, a^dag] = 2a, [a, a^dag^2] = 2 a^dag
        QuadraticHamiltonian {
            eta: 4.0 * (x.annihilation_sq * y.creation_sq - x.creation_sq * y.annihilation_sq),
            delta: x.annihilation * y.creation - x.creation * y.annihilation,
            creation_sq: 2.0 * (x.eta * y.creation_sq - x.creation_sq * y.eta),
            annihilation_sq: -2.0 * (x.eta * y.annihilation_sq - x.annihilation_sq * y.eta),
            creation: x.eta * y.creation - x.creation * y.eta + 2.0 * (x.annihilation * y.creation_sq - x.creation_sq * y.annihilation),
            annihilation: -(x.eta * y.annihilation - x.annihilation * y.eta)
                + 2.0 * (x.annihilation_sq * y.creation - x.creation * y.annihilation_sq),
        }
    }
}

/// `[X, Y] = XY - YX`.
pub fn commutator(x: &OperatorMatrix, y: &OperatorMatrix) -> Result<OperatorMatrix> {
    let xy = x.matmul(y)?;
    let yx = y.matmul(x)?;
    Ok(&xy - &yx)
}

/// Builds every generator from the truncated ladder matrices.
///
/// `P = (a^dag - a)/sqrt2`, `G = (a^dag + a)/sqrt2`, `M = a a^dag - a^dag a`,
/// `H = -(a - a^dag)^2 / 4`, `K = -(a + a^dag)^2 / 4`, `D = (a^2 - a^dag^2) / 2`,
/// which closes `[P,G] = -M`, `[H,K] = D`, `[D,H] = -2H`, `[D,K] = 2K`,
/// `[D,P] = -P`, `[D,G] = G`; and `L0 = (a^dag a + a a^dag)/4`,
/// `L_{+1} = a^2/2`, `L_{-1} = a^dag^2/2` with lowest weight 1/4.
pub fn build_generators(cfg: &TruncationConfig) -> Result<GeneratorSet> {
    if cfg.dim() < 8 {
        return Err(Error::DimensionTooSmall { min: 8, got: cfg.dim() });
    }
    let (a, ad) = build_ladders(cfg)?;
    let inv_sqrt2 = 1.0 / Float::sqrt(2.0);
    let a2 = &a * &a;
    let ad2 = &ad * &ad;
    let n = &ad * &a;
    let aad = &a * &ad;
    let plus = &ad + &a;
    let minus = &a - &ad;

    let mut ops = BTreeMap::new();
    ops.insert(Generator::P, &(&ad - &a) * inv_sqrt2);
    ops.insert(Generator::G, &plus * inv_sqrt2);
    ops.insert(Generator::M, &aad - &n);
    ops.insert(Generator::H, &(&minus * &minus) * -0.25);
    ops.insert(Generator::K, &(&plus * &plus) * -0.25);
    ops.insert(Generator::D, &(&a2 - &ad2) * 0.5);
    ops.insert(Generator::L0, &(&n + &aad) * 0.25);
    ops.insert(Generator::LPlus1, &a2 * 0.5);
    ops.insert(Generator::LMinus1, &ad2 * 0.5);
    ops.insert(Generator::Number, n);
    ops.insert(Generator::A, a);
    ops.insert(Generator::ADagger, ad);
    Ok(GeneratorSet { cfg: *cfg, ops })
}

/// `alpha (a^dag + a) + (beta/2)(a^dag^2 + a^2)`; pentadiagonal when `beta != 0`.
pub fn build_liouvillian(spec: &LiouvillianSpec, cfg: &TruncationConfig) -> Result<OperatorMatrix> {
    if cfg.dim() < 4 {
        return Err(Error::DimensionTooSmall { min: 4, got: cfg.dim() });
    }
    let (a, ad) = build_ladders(cfg)?;
    let linear = &(&ad + &a) * spec.alpha;
    let quadratic = &(&(&ad * &ad) + &(&a * &a)) * (spec.beta / 2.0);
    Ok(&linear + &quadratic)
}

/// Matrix of a [`QuadraticHamiltonian`] in the truncated Fock basis.
pub fn hamiltonian_to_matrix(h: &QuadraticHamiltonian, cfg: &TruncationConfig) -> Result<OperatorMatrix> {
    if cfg.dim() < 4 {
        return Err(Error::DimensionTooSmall { min: 4, got: cfg.dim() });
    }
    let dim = cfg.dim();
    Ok(OperatorMatrix::from_fn(dim, |i, j| {
        let s = |k: usize| Float::sqrt(k as f64);
        if i == j {
            h.eta * (i as f64 + 0.5) + h.delta
        } else if i == j + 2 {
            h.creation_sq * (s(j + 1) * s(j + 2))
        } else if j == i + 2 {
            h.annihilation_sq * (s(i + 1) * s(i + 2))
        } else if i == j + 1 {
            h.creation * s(i)
        } else if j == i + 1 {
            h.annihilation * s(j)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}
