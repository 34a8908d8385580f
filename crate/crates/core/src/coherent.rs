//! Fock-basis amplitudes of the displaced squeezed vacuum `S(v, w)|0>` and
//! the complexity, moments and limits derived from them.
//!
//! Amplitudes come from the three-term recurrence obtained by pushing `a`
//! through `S`; the Hermite closed form is kept only as a cross-check since
//! `H_k` and `sqrt(k!)` overflow long before `phi_k` does.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::algebra::LiouvillianSpec;
use crate::bch::closed_form_params;
use crate::error::{Error, Result};

/// Default target for `1 - sum |phi_k|^2`.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default upper bound on the number of amplitudes.
pub const DEFAULT_CAP: usize = 4096;
/// Highest index at which the Hermite closed form is evaluated.
pub const HERMITE_MAX_K: usize = 150;

const START_K: usize = 64;
const THETA_TOL: f64 = 1e-12;

fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Compensated summation.
pub(crate) fn fsum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let t = sum + x;
        if Float::abs(sum) >= Float::abs(x) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Displacement `v`, squeeze `w` and phase `theta` of the group element
/// `theta exp(v a - conj(v) a^dag) exp((w/2) a^2 - (conj(w)/2) a^dag^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementParams {
    v: Complex64,
    w: Complex64,
    theta: Complex64,
    s: Option<Complex64>,
}

impl DisplacementParams {
    pub fn new(v: Complex64, w: Complex64, theta: Complex64) -> Result<Self> {
        if !(v.is_finite() && w.is_finite() && theta.is_finite()) {
            return Err(Error::InvalidParameter("displacement parameters must be finite"));
        }
        if Float::abs(theta.norm() - 1.0) > THETA_TOL {
            return Err(Error::InvalidParameter("theta must have unit modulus"));
        }
        let s = if w == cplx(0.0, 0.0) { None } else { Some(hermite_argument(v, w)) };
        Ok(DisplacementParams { v, w, theta, s })
    }

    /// Same element with `theta = 1`.
    pub fn unphased(v: Complex64, w: Complex64) -> Result<Self> {
        Self::new(v, w, cplx(1.0, 0.0))
    }

    pub fn v(&self) -> Complex64 {
        self.v
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    pub fn theta(&self) -> Complex64 {
        self.theta
    }

    /// Hermite argument; `None` when `w = 0`.
    pub fn s(&self) -> Option<Complex64> {
        self.s
    }

    pub fn w_abs(&self) -> f64 {
        self.w.norm()
    }

    /// `conj(w)/|w|`, taken as 1 at `w = 0`.
    pub fn squeeze_phase(&self) -> Complex64 {
        let r = self.w.norm();
        if r == 0.0 {
            cplx(1.0, 0.0)
        } else {
            self.w.conj() / r
        }
    }

    /// `q` with `q^k = (conj(w)/(2|w|) tanh|w|)^(k/2)`, using the principal
    /// root of `conj(w)/|w|`.
    pub fn hermite_scale(&self) -> Option<Complex64> {
        self.s?;
        let z = Float::tanh(self.w_abs());
        Some(self.squeeze_phase().sqrt() * Float::sqrt(z / 2.0))
    }
}

/// `s = -(v sigma sqrt(z) + conj(v) conj(sigma) / sqrt(z)) / sqrt2` with
/// `sigma = sqrt(conj(w)/|w|)` (principal) and `(w/|w|)^(1/2) = conj(sigma)`.
fn hermite_argument(v: Complex64, w: Complex64) -> Complex64 {
    let r = w.norm();
    let sigma = (w.conj() / r).sqrt();
    let rz = Float::sqrt(Float::tanh(r));
    -(v * sigma * rz + v.conj() * sigma.conj() / rz) / Float::sqrt(2.0)
}

/// Truncated amplitude list `phi_0..phi_kmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSeries {
    params: Option<DisplacementParams>,
    phi: Vec<Complex64>,
    tail_bound: f64,
}

impl AmplitudeSeries {
    /// The group element, when the series is a Schrodinger coherent state.
    pub fn params(&self) -> Option<&DisplacementParams> {
        self.params.as_ref()
    }

    pub fn phi(&self) -> &[Complex64] {
        &self.phi
    }

    pub fn k_max(&self) -> usize {
        self.phi.len() - 1
    }

    /// `1 - sum |phi_k|^2`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.phi.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        fsum(self.phi.iter().map(|z| z.norm_sqr()))
    }

    /// `sum k^n |phi_k|^2`.
    pub fn moment(&self, n: u32) -> f64 {
        fsum(self.phi.iter().enumerate().map(|(k, z)| Float::powi(k as f64, n as i32) * z.norm_sqr()))
    }

    pub fn complexity(&self) -> f64 {
        self.moment(1)
    }

    /// `sum (k - K)^2 |phi_k|^2`.
    pub fn variance(&self) -> f64 {
        let mean = self.complexity();
        fsum(self.phi.iter().enumerate().map(|(k, z)| {
            let d = k as f64 - mean;
            d * d * z.norm_sqr()
        }))
    }
}

/// `<0|S|0> = theta e^{-|v|^2/2} cosh^{-1/2}|w| e^{-v^2 conj(w)/(2|w|) tanh|w|}`.
pub fn phi_zero(p: &DisplacementParams) -> Complex64 {
    let r = p.w_abs();
    let gauss = Float::exp(-p.v.norm_sqr() / 2.0);
    if r == 0.0 {
        return p.theta * gauss;
    }
    let squeeze = (p.v * p.v * p.squeeze_phase() * (-0.5 * Float::tanh(r))).exp();
    p.theta * squeeze * (gauss / Float::sqrt(Float::cosh(r)))
}

pub(crate) struct Recurrence {
    cosh: f64,
    coupling: Complex64,
    shift: Complex64,
}

impl Recurrence {
    pub(crate) fn new(p: &DisplacementParams) -> Self {
        let r = p.w_abs();
        let (sh, ch) = (Float::sinh(r), Float::cosh(r));
        let u = p.squeeze_phase();
        Recurrence { cosh: ch, coupling: u * sh, shift: p.v.conj() * ch + p.v * u * sh }
    }

    /// `phi_{k+1}` from `phi_{k-1}` and `phi_k`.
    fn step(&self, k: usize, prev: Complex64, cur: Complex64) -> Complex64 {
        let kf = k as f64;
        -(self.coupling * prev * Float::sqrt(kf) + self.shift * cur) / (Float::sqrt(kf + 1.0) * self.cosh)
    }
}

pub(crate) fn extend(rec: &Recurrence, phi: &mut Vec<Complex64>, len: usize) {
    while phi.len() < len {
        let k = phi.len() - 1;
        let prev = if k == 0 { cplx(0.0, 0.0) } else { phi[k - 1] };
        let next = rec.step(k, prev, phi[k]);
        phi.push(next);
    }
}

/// [`phi_series_capped`] with the default cap.
pub fn phi_series(p: &DisplacementParams, tol: f64) -> Result<AmplitudeSeries> {
    phi_series_capped(p, tol, DEFAULT_CAP)
}

/// Amplitudes by forward recurrence, doubling `k_max` from 64 until the
/// missing probability is at most `tol`.
pub fn phi_series_capped(p: &DisplacementParams, tol: f64, cap: usize) -> Result<AmplitudeSeries> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    let rec = Recurrence::new(p);
    let mut phi = Vec::with_capacity(START_K + 1);
    phi.push(phi_zero(p));
    let mut k_max = START_K.min(cap);
    loop {
        extend(&rec, &mut phi, k_max + 1);
        let tail = 1.0 - fsum(phi.iter().map(|z| z.norm_sqr()));
        if tail <= tol {
            return Ok(AmplitudeSeries { params: Some(*p), phi, tail_bound: tail });
        }
        if k_max >= cap {
            return Err(Error::NonConvergent { cap });
        }
        k_max = (2 * k_max).min(cap);
    }
}

/// Length of the prefix holding every `|phi_k|^2 > threshold`.
pub fn support_len(p: &DisplacementParams, threshold: f64) -> Result<usize> {
    let cap = 1 << 16;
    let series = phi_series_capped(p, 1e-13, cap)?;
    let rec = Recurrence::new(p);
    let mut phi = series.phi;
    // past the tail cutoff the envelope only decays; walk until two quiet sites in a row
    while phi.len() < cap {
        let n = phi.len();
        if phi[n - 1].norm_sqr() <= threshold && phi[n - 2].norm_sqr() <= threshold {
            break;
        }
        extend(&rec, &mut phi, n + 1);
    }
    Ok(phi.iter().rposition(|z| z.norm_sqr() > threshold).map_or(1, |k| k + 1))
}

/// A multiple of 128 (at least 256) whose non-guard block holds every
/// amplitude above `1e-20`.
pub fn suggested_dim(p: &DisplacementParams) -> Result<usize> {
    let need = support_len(p, 1e-20)? + 16;
    let dim = (need * 8).div_ceil(7);
    Ok(dim.div_ceil(128).max(2) * 128)
}

/// Physicists' Hermite polynomials `H_0..H_n` at complex `x`.
pub fn hermite(x: Complex64, n: usize) -> Vec<Complex64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(cplx(1.0, 0.0));
    if n >= 1 {
        h.push(x * 2.0);
    }
    for k in 1..n {
        let next = x * h[k] * 2.0 - h[k - 1] * (2.0 * k as f64);
        h.push(next);
    }
    h
}

/// `phi_k = q^k H_k(s) phi_0 / sqrt(k!)` for `k <= k_max <= 150`.
pub fn phi_hermite(p: &DisplacementParams, k_max: usize) -> Result<Vec<Complex64>> {
    if k_max > HERMITE_MAX_K {
        return Err(Error::InvalidParameter("Hermite cross-check is limited to k <= 150"));
    }
    let (s, q) = match (p.s(), p.hermite_scale()) {
        (Some(s), Some(q)) => (s, q),
        _ => return Err(Error::InvalidParameter("Hermite form needs w != 0")),
    };
    let h = hermite(s, k_max);
    let phi0 = phi_zero(p);
    let mut qk = cplx(1.0, 0.0);
    let mut fact_sqrt = 1.0;
    let mut out = Vec::with_capacity(k_max + 1);
    for (k, hk) in h.into_iter().enumerate() {
        if k > 0 {
            qk *= q;
            fact_sqrt *= Float::sqrt(k as f64);
        }
        out.push(qk * hk * phi0 / fact_sqrt);
    }
    Ok(out)
}

fn mehler_log(s: Complex64, r: f64) -> f64 {
    // log of (1-z^2)^{-1/2} exp[(2|s|^2 z - (s^2 + conj(s)^2) z^2)/(1 - z^2)], z = tanh r
    let z = Float::tanh(r);
    let ch = Float::cosh(r);
    let num = 2.0 * s.norm_sqr() * z - 2.0 * (s * s).re * z * z;
    Float::ln(ch) + num * ch * ch
}

/// `|phi_0|^2` times Mehler's closed sum; equals `sum |phi_k|^2`.
pub fn mehler_normalization_check(p: &DisplacementParams) -> f64 {
    let p0 = phi_zero(p).norm_sqr();
    match p.s() {
        Some(s) => p0 * Float::exp(mehler_log(s, p.w_abs())),
        None => p0 * Float::exp(p.v.norm_sqr()),
    }
}

/// `K = |v|^2 + sinh^2|w|`.
pub fn complexity_closed(p: &DisplacementParams) -> f64 {
    let sh = Float::sinh(p.w_abs());
    p.v.norm_sqr() + sh * sh
}

/// `sum k^n |phi_k|^2` by direct summation.
pub fn moment_n(p: &DisplacementParams, n: u32) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    Ok(phi_series(p, DEFAULT_TOL)?.moment(n))
}

/// `(z d/dz)^n M / M` at fixed `s` from the analytic derivatives of
/// `log M`, for `n <= 2` and `w != 0`.
pub fn moment_identity(p: &DisplacementParams, n: u32) -> Option<f64> {
    let s = p.s()?;
    if n == 0 {
        return Some(1.0);
    }
    let z = Float::tanh(p.w_abs());
    let a = 2.0 * s.norm_sqr();
    let b = 2.0 * (s * s).re;
    let ch2 = Float::powi(Float::cosh(p.w_abs()), 2);
    // 1/(1 - z^2) = cosh^2|w|
    let f1 = z * ch2 + (a - 2.0 * b * z + a * z * z) * ch2 * ch2;
    let f2 = (1.0 + z * z) * ch2 * ch2
        + ((2.0 * a * z - 2.0 * b) + 4.0 * z * (a - 2.0 * b * z + a * z * z) * ch2) * ch2 * ch2;
    match n {
        1 => Some(z * f1),
        2 => Some(z * f1 + z * z * (f2 + f1 * f1)),
        _ => None,
    }
}

/// The same identity by central differences in `|w|` at fixed `s`, with
/// `z d/dz = (sinh 2|w| / 2) d/d|w|`. Step `1e-5` for `n = 1`; `n = 2`
/// Richardson-extrapolates steps `1e-3` and `2e-3`.
pub fn moment_identity_fd(p: &DisplacementParams, n: u32) -> Option<f64> {
    let s = p.s()?;
    let r = p.w_abs();
    let f = |x: f64| mehler_log(s, x);
    let c = Float::sinh(2.0 * r) / 2.0;
    match n {
        0 => Some(1.0),
        1 => {
            let h = 1e-5;
            if r <= 2.0 * h {
                return None;
            }
            Some(c * (f(r + h) - f(r - h)) / (2.0 * h))
        }
        2 => {
            let h = 1e-3;
            if r <= 4.0 * h {
                return None;
            }
            let second = |h: f64| {
                let (fp, f0, fm) = (f(r + h), f(r), f(r - h));
                let d1 = (fp - fm) / (2.0 * h);
                let d2 = (fp - 2.0 * f0 + fm) / (h * h);
                // D(D M)/M with D = c d/d|w| and c' = cosh 2|w|
                c * Float::cosh(2.0 * r) * d1 + c * c * (d2 + d1 * d1)
            };
            Some((4.0 * second(h) - second(2.0 * h)) / 3.0)
        }
        _ => None,
    }
}

/// Direct-summation variance next to the printed closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceReport {
    pub sigma2: f64,
    pub printed: f64,
}

impl VarianceReport {
    pub fn deviation(&self) -> f64 {
        self.printed - self.sigma2
    }
}

/// `|v| cosh 2|w| + sinh|w| cosh|w| (sinh 2|w| - (conj(v)^2 w + v^2 conj(w))/|w|)`,
/// exactly as printed. Its first term disagrees with the Poisson limit.
pub fn variance_printed(p: &DisplacementParams) -> f64 {
    let r = p.w_abs();
    let first = p.v.norm() * Float::cosh(2.0 * r);
    if r == 0.0 {
        return first;
    }
    let cross = (p.v.conj() * p.v.conj() * p.w + p.v * p.v * p.w.conj()).re / r;
    first + Float::sinh(r) * Float::cosh(r) * (Float::sinh(2.0 * r) - cross)
}

pub fn variance_closed(p: &DisplacementParams) -> Result<VarianceReport> {
    let sigma2 = phi_series(p, DEFAULT_TOL)?.variance();
    Ok(VarianceReport { sigma2, printed: variance_printed(p) })
}

/// First moment, variance and requested higher moments.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub k: f64,
    pub sigma2: f64,
    pub moments: BTreeMap<u32, f64>,
}

pub fn moment_report(p: &DisplacementParams, orders: &[u32]) -> Result<MomentReport> {
    let series = phi_series(p, DEFAULT_TOL)?;
    let mut moments = BTreeMap::new();
    for &n in orders.iter().chain([1, 2].iter()) {
        moments.entry(n).or_insert_with(|| series.moment(n));
    }
    Ok(MomentReport { k: moments[&1], sigma2: series.variance(), moments })
}

/// Coherent-state profile `|phi_n|^2 = e^{-a^2 t^2} (a t)^{2n} / n!` and `K = a^2 t^2`.
pub fn hw_profile(alpha: f64, t: f64) -> Result<(AmplitudeSeries, f64)> {
    let p = DisplacementParams::unphased(cplx(0.0, alpha * t), cplx(0.0, 0.0))?;
    let series = phi_series(&p, DEFAULT_TOL)?;
    Ok((series, alpha * alpha * t * t))
}

/// Lowest weight `h` of a discrete-series SL(2,R) representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SL2RWeight {
    h: f64,
}

impl SL2RWeight {
    /// Weight carried by the even states of the oscillator.
    pub const OSCILLATOR: SL2RWeight = SL2RWeight { h: 0.25 };

    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter("SL(2,R) weight must be positive"));
        }
        Ok(SL2RWeight { h })
    }

    pub fn h(&self) -> f64 {
        self.h
    }
}

/// `phi_n = sqrt(Gamma(2h+n)/(n! Gamma(2h))) tanh^n(bt) / cosh^{2h}(bt)` and
/// `K = 2h sinh^2(bt)`. Ratios `phi_{n+1}/phi_n` avoid the gamma function.
pub fn sl2r_profile(weight: SL2RWeight, beta: f64, t: f64) -> Result<(AmplitudeSeries, f64)> {
    let h = weight.h;
    let x = beta * t;
    if !x.is_finite() {
        return Err(Error::InvalidParameter("beta * t must be finite"));
    }
    let th = Float::tanh(x);
    let sh = Float::sinh(x);
    let k = 2.0 * h * sh * sh;
    let mut phi = Vec::with_capacity(START_K + 1);
    phi.push(cplx(Float::powf(Float::cosh(x), -2.0 * h), 0.0));
    let mut k_max = START_K;
    loop {
        while phi.len() <= k_max {
            let n = (phi.len() - 1) as f64;
            let prev = phi[phi.len() - 1];
            phi.push(prev * (Float::sqrt((2.0 * h + n) / (n + 1.0)) * th));
        }
        let tail = 1.0 - fsum(phi.iter().map(|z| z.norm_sqr()));
        if tail <= DEFAULT_TOL {
            return Ok((AmplitudeSeries { params: None, phi, tail_bound: tail }, k));
        }
        if k_max >= DEFAULT_CAP {
            return Err(Error::NonConvergent { cap: DEFAULT_CAP });
        }
        k_max = (2 * k_max).min(DEFAULT_CAP);
    }
}

/// `4 cosh(bt) sinh^2(bt/2) / b^2 - t^2`, the cross term of the complexity.
pub fn interaction_term(spec: &LiouvillianSpec, t: f64) -> f64 {
    let b = spec.beta;
    if b == 0.0 {
        return 0.0;
    }
    let x = b * t;
    let sh = Float::sinh(x / 2.0);
    4.0 * Float::cosh(x) * sh * sh / (b * b) - t * t
}

/// `K(t) = a^2 t^2 + sinh^2(bt) + a^2 [4 cosh(bt) sinh^2(bt/2)/b^2 - t^2]`.
pub fn schrodinger_complexity_t(spec: &LiouvillianSpec, t: f64) -> f64 {
    let a2 = spec.alpha * spec.alpha;
    if spec.beta == 0.0 {
        return a2 * t * t;
    }
    let sh = Float::sinh(spec.beta * t);
    a2 * t * t + sh * sh + a2 * interaction_term(spec, t)
}

/// `t_s = log(4 b^2 / (b^2 + 2 a^2)) / b`.
pub fn scrambling_time(spec: &LiouvillianSpec) -> Result<f64> {
    let (a, b) = (spec.alpha, spec.beta);
    if !(b > 0.0) {
        return Err(Error::InvalidParameter("scrambling time needs beta > 0"));
    }
    Ok(Float::ln(4.0 * b * b / (b * b + 2.0 * a * a)) / b)
}

/// Return probability `|phi_0(t)|^2`.
pub fn autocorrelator_t(spec: &LiouvillianSpec, t: f64) -> f64 {
    phi_zero(&closed_form_params(spec, t)).norm_sqr()
}

/// `exp(-a^2 (e^{2bt} - 1)^2 / (8 b^2) + 2bt) / cosh(2bt)` as printed; not
/// the return probability.
pub fn autocorrelator_printed(spec: &LiouvillianSpec, t: f64) -> f64 {
    let (a, b) = (spec.alpha, spec.beta);
    if b == 0.0 {
        return Float::exp(-a * a * t * t / 2.0);
    }
    let g = Float::exp_m1(2.0 * b * t);
    Float::exp(-a * a * g * g / (8.0 * b * b) + 2.0 * b * t) / Float::cosh(2.0 * b * t)
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| a + step * i as f64)
}

/// Least-squares `c0 + c1 x + c2 x^2`.
pub fn quadratic_fit(xs: &[f64], ys: &[f64]) -> Result<[f64; 3]> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { left: xs.len(), right: ys.len() });
    }
    if xs.len() < 3 {
        return Err(Error::DimensionTooSmall { min: 3, got: xs.len() });
    }
    let scale = xs.iter().fold(0.0f64, |m, x| m.max(Float::abs(*x)));
    if scale == 0.0 {
        return Err(Error::InvalidParameter("fit abscissae are all zero"));
    }
    let mut m = [[0.0f64; 4]; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let u = x / scale;
        let basis = [1.0, u, u * u];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
            m[i][3] += basis[i] * y;
        }
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| Float::abs(m[a][col]).total_cmp(&Float::abs(m[b][col]))).unwrap_or(col);
        m.swap(col, piv);
        if m[col][col] == 0.0 {
            return Err(Error::InvalidParameter("degenerate fit abscissae"));
        }
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..4 {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    let c: [f64; 3] = core::array::from_fn(|i| m[i][3] / m[i][i]);
    Ok([c[0], c[1] / scale, c[2] / (scale * scale)])
}

/// Quadratic coefficient of `K(t)` fitted on `points` samples of `[0, t_max]`.
pub fn early_time_coefficient(spec: &LiouvillianSpec, t_max: f64, points: usize) -> Result<f64> {
    let ts: Vec<f64> = linspace(0.0, t_max, points).collect();
    let ks: Vec<f64> = ts.iter().map(|&t| schrodinger_complexity_t(spec, t)).collect();
    Ok(quadratic_fit(&ts, &ks)?[2])
}

/// Least-squares slope of `log K(t)` over `points` samples of `[t0, t1]`.
pub fn growth_exponent(spec: &LiouvillianSpec, t0: f64, t1: f64, points: usize) -> Result<f64> {
    if points < 2 || !(t1 > t0) {
        return Err(Error::InvalidParameter("growth fit needs t1 > t0 and two points"));
    }
    let ts: Vec<f64> = linspace(t0, t1, points).collect();
    let ys: Vec<f64> = ts.iter().map(|&t| Float::ln(schrodinger_complexity_t(spec, t))).collect();
    let n = points as f64;
    let mt = fsum(ts.iter().copied()) / n;
    let my = fsum(ys.iter().copied()) / n;
    let sxy = fsum(ts.iter().zip(&ys).map(|(t, y)| (t - mt) * (y - my)));
    let sxx = fsum(ts.iter().map(|t| (t - mt) * (t - mt)));
    Ok(sxy / sxx)
}

/// Growth exponent of `K(t)` on `t in [4, 6]`.
pub fn late_time_exponent(spec: &LiouvillianSpec) -> Result<f64> {
    growth_exponent(spec, 4.0, 6.0, 41)
}

/// A printed closed form evaluated beside the value it is meant to equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyProbe {
    pub name: &'static str,
    pub printed: f64,
    pub reference: f64,
}

impl DiscrepancyProbe {
    pub fn deviation(&self) -> f64 {
        self.printed - self.reference
    }
}

/// The variance first term at `v = 2i, w = 0`, the printed autocorrelator at
/// `t = 0.1`, and the printed late-time exponent `beta` against the fit.
pub fn discrepancy_probes(spec: &LiouvillianSpec) -> Result<Vec<DiscrepancyProbe>> {
    let poisson = DisplacementParams::unphased(cplx(0.0, 2.0), cplx(0.0, 0.0))?;
    let var = variance_closed(&poisson)?;
    let t = 0.1;
    let mut probes = alloc::vec![
        DiscrepancyProbe { name: "variance_first_term", printed: var.printed, reference: var.sigma2 },
        DiscrepancyProbe {
            name: "autocorrelator",
            printed: autocorrelator_printed(spec, t),
            reference: autocorrelator_t(spec, t),
        },
    ];
    if spec.beta > 0.0 {
        probes.push(DiscrepancyProbe {
            name: "late_time_exponent",
            printed: spec.beta,
            reference: late_time_exponent(spec)?,
        });
    }
    Ok(probes)
}
