//! From `(alpha, beta, t)` to the displacement-squeeze parameters
//! `(v, w, theta)` of `exp(i t L)`, in closed form and through a faithful
//! 4x4 representation of the quadratic algebra.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::algebra::{LiouvillianSpec, QuadraticHamiltonian};
use crate::coherent::{phi_zero, DisplacementParams, Recurrence};
use crate::error::{Error, Result};
use crate::expm::{expm, matmul, Square};
use crate::fock::{build_ladders, FockVector, OperatorMatrix, Propagator, TruncationConfig};

/// Largest accepted mismatch between `exp(i t rep(L))` and the rebuilt product.
pub const DECOMPOSITION_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Image of a [`QuadraticHamiltonian`] under the 4x4 representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rep4Matrix {
    pub entries: Square<4>,
}

impl Rep4Matrix {
    pub fn commutator(&self, other: &Rep4Matrix) -> Rep4Matrix {
        let xy = matmul(&self.entries, &other.entries);
        let yx = matmul(&other.entries, &self.entries);
        let mut entries = xy;
        for i in 0..4 {
            for j in 0..4 {
                entries[i][j] -= yx[i][j];
            }
        }
        Rep4Matrix { entries }
    }

    /// First row and last column vanish.
    pub fn has_rep_structure(&self) -> bool {
        (0..4).all(|j| self.entries[0][j] == ZERO) && (0..4).all(|i| self.entries[i][3] == ZERO)
    }
}

/// Rows `(0,0,0,0)`, `(r, eta, 2R, 0)`, `(-l, -2L, -eta, 0)`, `(-2 delta, -l, -r, 0)`.
pub fn to_rep4(h: &QuadraticHamiltonian) -> Rep4Matrix {
    let (eta, delta) = (h.eta, h.delta);
    let (big_r, big_l) = (h.creation_sq, h.annihilation_sq);
    let (r, l) = (h.creation, h.annihilation);
    Rep4Matrix {
        entries: [
            [ZERO, ZERO, ZERO, ZERO],
            [r, eta, big_r * 2.0, ZERO],
            [-l, -big_l * 2.0, -eta, ZERO],
            [-delta * 2.0, -l, -r, ZERO],
        ],
    }
}

/// `v a - conj(v) a^dag`.
pub fn displacement_generator(v: Complex64) -> QuadraticHamiltonian {
    QuadraticHamiltonian { annihilation: v, creation: -v.conj(), ..QuadraticHamiltonian::zero() }
}

/// `(w/2) a^2 - (conj(w)/2) a^dag^2`.
pub fn squeeze_generator(w: Complex64) -> QuadraticHamiltonian {
    QuadraticHamiltonian { annihilation_sq: w / 2.0, creation_sq: -w.conj() / 2.0, ..QuadraticHamiltonian::zero() }
}

/// `(sinh x - x) / x^2`, accurate near zero.
fn sinh_excess(x: f64) -> f64 {
    if Float::abs(x) < 1e-3 {
        let x2 = x * x;
        x * (1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 / 5040.0))
    } else {
        (Float::sinh(x) - x) / (x * x)
    }
}

/// `v = (a/b)(1 - cosh bt) + i (a/b) sinh bt`, `w = i b t`,
/// `theta = exp[i (a^2/b^2)(sinh bt - bt)]`; `beta = 0` gives `v = i a t`.
pub fn closed_form_params(spec: &LiouvillianSpec, t: f64) -> DisplacementParams {
    let (a, b) = (spec.alpha, spec.beta);
    let x = b * t;
    let (v, w, theta) = if b == 0.0 || t == 0.0 {
        (Complex64::new(0.0, a * t), ZERO, Complex64::new(1.0, 0.0))
    } else {
        let half = Float::sinh(x / 2.0);
        let v = Complex64::new(-2.0 * a / b * half * half, a / b * Float::sinh(x));
        let phase = a * a * t * t * sinh_excess(x);
        (v, Complex64::new(0.0, x), Complex64::from_polar(1.0, phase))
    };
    DisplacementParams::new(v, w, theta).expect("finite closed-form parameters")
}

fn rep_exp(h: &QuadraticHamiltonian) -> Result<Square<4>> {
    expm(&to_rep4(h).entries)
}

fn max_abs(x: &Square<4>) -> f64 {
    x.iter().flatten().fold(0.0, |m, z| m.max(z.norm()))
}

/// Reads `(v, w, theta)` off `exp(i t rep(L))` and checks that
/// `rep(theta) exp(rep(D(v))) exp(rep(S(w)))` rebuilds it.
pub fn decompose_exponential(spec: &LiouvillianSpec, t: f64) -> Result<DisplacementParams> {
    let g = rep_exp(&QuadraticHamiltonian::from_liouvillian(spec).scale(Complex64::new(0.0, t)))?;
    let v = -g[2][0];
    let sinh_r = g[2][1].norm();
    let w = if sinh_r == 0.0 {
        ZERO
    } else {
        // g[2][1] = -(w/|w|) sinh|w|
        let r = Float::asinh(sinh_r);
        -g[2][1] / sinh_r * r
    };
    // the scalar part of the generator lands at [3][0] as -2 log(theta)
    let phase = (I * g[3][0] / 2.0).re;
    let theta = Complex64::from_polar(1.0, phase);
    let params = DisplacementParams::new(v, w, theta)?;

    let mut rebuilt = matmul(&rep_exp(&displacement_generator(v))?, &rep_exp(&squeeze_generator(w))?);
    rebuilt[3][0] += Complex64::new(0.0, -2.0 * phase);
    let mut residual = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            residual = residual.max((rebuilt[i][j] - g[i][j]).norm());
        }
    }
    let residual = residual / max_abs(&g).max(1.0);
    if !(residual <= DECOMPOSITION_TOL) {
        return Err(Error::DecompositionFailure { residual });
    }
    Ok(params)
}

/// Probability that `S|0>` places on the guard band of `cfg`.
pub fn vacuum_guard_mass(p: &DisplacementParams, cfg: &TruncationConfig) -> f64 {
    let rec = Recurrence::new(p);
    let mut phi = vec![phi_zero(p)];
    crate::coherent::extend(&rec, &mut phi, cfg.safe_len());
    let kept = crate::coherent::fsum(phi.iter().map(|z| z.norm_sqr()));
    (1.0 - kept).max(0.0)
}

/// `S a S^{-1} = cosh|w| a + u sinh|w| a^dag + conj(v) cosh|w| + v u sinh|w|`
/// with `u = conj(w)/|w|`.
pub fn bogoliubov(p: &DisplacementParams, cfg: &TruncationConfig) -> Result<OperatorMatrix> {
    if cfg.dim() < 8 {
        return Err(Error::DimensionTooSmall { min: 8, got: cfg.dim() });
    }
    let mass = vacuum_guard_mass(p, cfg);
    if mass > cfg.tail_tolerance() {
        return Err(Error::TruncationOverflow { mass, tolerance: cfg.tail_tolerance() });
    }
    let r = p.w_abs();
    let (sh, ch) = (Float::sinh(r), Float::cosh(r));
    let u = p.squeeze_phase();
    let (a, ad) = build_ladders(cfg)?;
    let shift = p.v().conj() * ch + p.v() * u * sh;
    let id = OperatorMatrix::identity(cfg.dim());
    Ok(&(&(&a * ch) + &(&ad * (u * sh))) + &(&id * shift))
}

fn unitary_of(x: &QuadraticHamiltonian, cfg: &TruncationConfig) -> Result<Propagator> {
    // exp(X) = exp(i H) with H = -i X
    let h = crate::algebra::hamiltonian_to_matrix(&x.scale(-I), cfg)?;
    Propagator::new(&h, cfg)
}

/// `theta exp(v a - conj(v) a^dag) exp((w/2) a^2 - (conj(w)/2) a^dag^2) |0>`
/// built from truncated matrix exponentials.
pub fn compose_on_vacuum(p: &DisplacementParams, cfg: &TruncationConfig) -> Result<FockVector> {
    let squeeze = unitary_of(&squeeze_generator(p.w()), cfg)?;
    let displace = unitary_of(&displacement_generator(p.v()), cfg)?;
    let vac = FockVector::vacuum(cfg.dim())?;
    let out = displace.evolve_unchecked(1.0, &squeeze.evolve_unchecked(1.0, vac.amplitudes()));
    let state = FockVector::new(out)?.scaled(p.theta());
    let mass = state.guard_mass(cfg);
    if mass > cfg.tail_tolerance() {
        return Err(Error::TruncationOverflow { mass, tolerance: cfg.tail_tolerance() });
    }
    Ok(state)
}

/// `S a S^{-1}` by explicit exponentials in a `working_dim`-dimensional
/// space, cut back to `cfg.dim()`.
pub fn conjugate_annihilation(p: &DisplacementParams, cfg: &TruncationConfig, working_dim: usize) -> Result<OperatorMatrix> {
    if working_dim < cfg.dim() {
        return Err(Error::DimensionTooSmall { min: cfg.dim(), got: working_dim });
    }
    let work = TruncationConfig::with_tolerances(working_dim, cfg.tail_tolerance(), cfg.guard_fraction())?;
    let squeeze = unitary_of(&squeeze_generator(p.w()), &work)?;
    let displace = unitary_of(&displacement_generator(p.v()), &work)?;
    let forward = |x: &[Complex64]| displace.evolve_unchecked(1.0, &squeeze.evolve_unchecked(1.0, x));
    let backward = |x: &[Complex64]| squeeze.evolve_unchecked(-1.0, &displace.evolve_unchecked(-1.0, x));

    let n = cfg.dim();
    let mut worst = 0.0f64;
    // columns j of S a S^dag: S a (S^dag e_j)
    let mut entries = vec![ZERO; n * n];
    let mut e = vec![ZERO; working_dim];
    for j in 0..n {
        e.iter_mut().for_each(|z| *z = ZERO);
        e[j] = Complex64::new(1.0, 0.0);
        let back = backward(&e);
        worst = worst.max(tail(&back, work.safe_len()));
        let mut lowered: Vec<Complex64> = back[1..].iter().enumerate().map(|(k, z)| z * Float::sqrt((k + 1) as f64)).collect();
        lowered.push(ZERO);
        let col = forward(&lowered);
        worst = worst.max(tail(&forward(&e), work.safe_len()));
        for i in 0..n {
            entries[i * n + j] = col[i];
        }
    }
    if worst > work.tail_tolerance() {
        return Err(Error::TruncationOverflow { mass: worst, tolerance: work.tail_tolerance() });
    }
    OperatorMatrix::from_entries(n, entries)
}

fn tail(v: &[Complex64], from: usize) -> f64 {
    v[from..].iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    extern crate std;
    use super::*;
    use crate::fock::evolve_state;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(a: f64, b: f64) -> LiouvillianSpec {
        LiouvillianSpec::new(a, b).unwrap()
    }

    fn random_h(seed: u64) -> QuadraticHamiltonian {
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        QuadraticHamiltonian {
            eta: c(next(), next()),
            delta: c(next(), next()),
            creation_sq: c(next(), next()),
            annihilation_sq: c(next(), next()),
            creation: c(next(), next()),
            annihilation: c(next(), next()),
        }
    }

    #[test]
    fn rep_examples() {
        assert_eq!(to_rep4(&QuadraticHamiltonian::zero()).entries, crate::expm::zeros::<4>());
        let h = QuadraticHamiltonian { eta: c(1.0, 0.0), ..QuadraticHamiltonian::zero() };
        let m = to_rep4(&h);
        assert_eq!(m.entries[1][1], c(1.0, 0.0));
        assert_eq!(m.entries[2][2], c(-1.0, 0.0));
        assert!(m.has_rep_structure());
    }

    #[test]
    fn rep_is_homomorphism() {
        for seed in 0..20 {
            let (x, y) = (random_h(seed), random_h(seed + 100));
            let lhs = to_rep4(&x.bracket(&y));
            let rhs = to_rep4(&x).commutator(&to_rep4(&y));
            for i in 0..4 {
                for j in 0..4 {
                    assert!((lhs.entries[i][j] - rhs.entries[i][j]).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let p = closed_form_params(&spec(1.0, 1.0), 0.0);
        assert_eq!((p.v(), p.w(), p.theta()), (c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)));
        let p = closed_form_params(&spec(1.0, 1.0), 1.0);
        assert!((p.v() - c(-0.5430807, 1.1752012)).norm() < 1e-7);
        assert_eq!(p.w(), c(0.0, 1.0));
        let p = closed_form_params(&spec(1.0, 0.0), 2.0);
        assert_eq!(p.v(), c(0.0, 2.0));
        assert_eq!(p.w(), c(0.0, 0.0));
    }

    #[test]
    fn small_beta_is_continuous() {
        let a = closed_form_params(&spec(1.0, 1e-9), 2.0);
        assert!((a.v() - c(0.0, 2.0)).norm() < 1e-8);
        assert!((a.theta() - c(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn decomposition_examples() {
        let p = decompose_exponential(&spec(1.0, 0.0), 1.0).unwrap();
        assert!((p.v() - c(0.0, 1.0)).norm() < 1e-12 && p.w() == c(0.0, 0.0));
        let p = decompose_exponential(&spec(0.0, 1.0), 1.0).unwrap();
        assert!(p.v().norm() < 1e-12 && (p.w() - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn decomposition_matches_closed_form() {
        for &(a, b) in &[(1.0, 1.0), (0.5, 1.0), (0.3, -0.7), (2.0, 0.25)] {
            for &t in &[0.1, 0.5, 1.0, 2.0] {
                let s = spec(a, b);
                let d = decompose_exponential(&s, t).unwrap();
                let cf = closed_form_params(&s, t);
                assert!((d.v() - cf.v()).norm() < 1e-10, "{a} {b} {t}");
                assert!((d.w() - cf.w()).norm() < 1e-10);
                assert!((d.theta() - cf.theta()).norm() < 1e-10);
                assert!(d.w().re.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(matches!(decompose_exponential(&spec(1.0, 1.0), 30.0), Err(Error::ExponentialOutOfRange { .. })));
    }

    #[test]
    fn bogoliubov_trivial_cases() {
        let cfg = TruncationConfig::new(16).unwrap();
        let (a, _) = build_ladders(&cfg).unwrap();
        let p = DisplacementParams::unphased(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(bogoliubov(&p, &cfg).unwrap().max_diff_in_block(&a, 16).unwrap(), 0.0);
        let p = DisplacementParams::unphased(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let shifted = &a + &OperatorMatrix::identity(16);
        assert_eq!(bogoliubov(&p, &cfg).unwrap().max_diff_in_block(&shifted, 16).unwrap(), 0.0);
    }

    #[test]
    fn bogoliubov_matches_conjugation() {
        let cfg = TruncationConfig::new(64).unwrap();
        for (v, w) in [(c(0.0, 0.0), c(0.0, 0.5)), (c(0.3, -0.2), c(0.2, 0.1))] {
            let p = DisplacementParams::unphased(v, w).unwrap();
            let closed = bogoliubov(&p, &cfg).unwrap();
            let explicit = conjugate_annihilation(&p, &cfg, 512).unwrap();
            assert!(closed.max_diff_in_block(&explicit, cfg.safe_len()).unwrap() < 1e-7);
        }
        let p = DisplacementParams::unphased(c(0.0, 0.0), c(0.0, 0.5)).unwrap();
        let b = bogoliubov(&p, &cfg).unwrap();
        assert!((b.get(0, 1).re - 0.5f64.cosh()).abs() < 1e-15);
        assert!((b.get(1, 0) - c(0.0, -0.5f64.sinh())).norm() < 1e-15);
    }

    #[test]
    fn bogoliubov_overflow() {
        let cfg = TruncationConfig::new(16).unwrap();
        let p = DisplacementParams::unphased(c(0.0, 0.0), c(0.0, 3.0)).unwrap();
        assert!(matches!(bogoliubov(&p, &cfg), Err(Error::TruncationOverflow { .. })));
        assert!(bogoliubov(&p, &TruncationConfig::new(4).unwrap()).is_err());
    }

    #[test]
    fn composed_operator_matches_evolution() {
        let cfg = TruncationConfig::new(256).unwrap();
        for &(a, b, t) in &[(1.0, 1.0, 1.0), (0.5, 0.25, 2.0), (0.0, 0.5, 1.0)] {
            let s = spec(a, b);
            let p = closed_form_params(&s, t);
            let composed = compose_on_vacuum(&p, &cfg).unwrap();
            let l = crate::algebra::build_liouvillian(&s, &cfg).unwrap();
            let evolved = evolve_state(&l, t, &FockVector::vacuum(256).unwrap(), &cfg).unwrap();
            let err = composed
                .amplitudes()
                .iter()
                .zip(evolved.amplitudes())
                .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
            assert!(err < 1e-8, "{a} {b} {t}: {err}");
        }
    }
}
