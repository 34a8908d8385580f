//! Dense exponential of small fixed-size complex matrices by Pade-13
//! scaling and squaring.

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

pub type Square<const N: usize> = [[Complex64; N]; N];

/// Largest 1-norm accepted by [`expm`].
pub const MAX_NORM: f64 = 50.0;

const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn zeros<const N: usize>() -> Square<N> {
    [[ZERO; N]; N]
}

pub fn identity<const N: usize>() -> Square<N> {
    let mut m = zeros::<N>();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn matmul<const N: usize>(x: &Square<N>, y: &Square<N>) -> Square<N> {
    let mut out = zeros::<N>();
    for i in 0..N {
        for k in 0..N {
            let xik = x[i][k];
            if xik == ZERO {
                continue;
            }
            for j in 0..N {
                out[i][j] += xik * y[k][j];
            }
        }
    }
    out
}

/// Maximum absolute column sum.
pub fn norm1<const N: usize>(x: &Square<N>) -> f64 {
    (0..N).map(|j| (0..N).map(|i| x[i][j].norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn lin<const N: usize>(terms: &[(f64, &Square<N>)]) -> Square<N> {
    let mut out = zeros::<N>();
    for (c, m) in terms {
        for i in 0..N {
            for j in 0..N {
                out[i][j] += m[i][j] * *c;
            }
        }
    }
    out
}

/// Solves `p x = q` by LU with partial pivoting.
fn solve<const N: usize>(mut p: Square<N>, mut q: Square<N>) -> Square<N> {
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&a, &b| p[a][col].norm().total_cmp(&p[b][col].norm()))
            .unwrap_or(col);
        p.swap(col, pivot);
        q.swap(col, pivot);
        let d = p[col][col];
        for r in col + 1..N {
            let f = p[r][col] / d;
            if f == ZERO {
                continue;
            }
            for c in col..N {
                let t = p[col][c];
                p[r][c] -= f * t;
            }
            for c in 0..N {
                let t = q[col][c];
                q[r][c] -= f * t;
            }
        }
    }
    for col in (0..N).rev() {
        let d = p[col][col];
        for c in 0..N {
            let mut acc = q[col][c];
            for k in col + 1..N {
                acc -= p[col][k] * q[k][c];
            }
            q[col][c] = acc / d;
        }
    }
    q
}

/// `exp(x)` to roughly double precision for `||x||_1 <= 50`.
pub fn expm<const N: usize>(x: &Square<N>) -> Result<Square<N>> {
    let norm = norm1(x);
    if !norm.is_finite() || norm > MAX_NORM {
        return Err(Error::ExponentialOutOfRange { norm });
    }
    let squarings = if norm > THETA_13 { Float::ceil(Float::log2(norm / THETA_13)) as u32 } else { 0 };
    let scale = Float::powi(0.5, squarings as i32);
    let a = lin(&[(scale, x)]);
    let id = identity::<N>();
    let a2 = matmul(&a, &a);
    let a4 = matmul(&a2, &a2);
    let a6 = matmul(&a4, &a2);
    let b = &PADE_13;

    let u_inner = lin(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let u_outer = lin(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &id)]);
    let u_sum = lin(&[(1.0, &matmul(&a6, &u_inner)), (1.0, &u_outer)]);
    let u = matmul(&a, &u_sum);

    let v_inner = lin(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let v_outer = lin(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &id)]);
    let v = lin(&[(1.0, &matmul(&a6, &v_inner)), (1.0, &v_outer)]);

    let mut r = solve(lin(&[(1.0, &v), (-1.0, &u)]), lin(&[(1.0, &v), (1.0, &u)]));
    for _ in 0..squarings {
        r = matmul(&r, &r);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    extern crate std;
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_diff<const N: usize>(x: &Square<N>, y: &Square<N>) -> f64 {
        let mut m = 0.0f64;
        for i in 0..N {
            for j in 0..N {
                m = m.max((x[i][j] - y[i][j]).norm());
            }
        }
        m
    }

    #[test]
    fn zero_gives_identity() {
        assert_eq!(expm(&zeros::<4>()).unwrap(), identity::<4>());
    }

    #[test]
    fn diagonal() {
        let mut x = zeros::<3>();
        x[0][0] = c(1.0, 0.0);
        x[1][1] = c(-2.5, 0.0);
        x[2][2] = c(0.0, 3.0);
        let e = expm(&x).unwrap();
        assert!((e[0][0] - c(1.0f64.exp(), 0.0)).norm() < 1e-14);
        assert!((e[1][1].re - (-2.5f64).exp()).abs() < 1e-15);
        assert!((e[2][2] - c(3.0f64.cos(), 3.0f64.sin())).norm() < 1e-14);
    }

    #[test]
    fn rotation_generator() {
        // exp([[0, -x], [x, 0]]) = [[cos x, -sin x], [sin x, cos x]]
        let x = 17.3;
        let m = [[c(0.0, 0.0), c(-x, 0.0)], [c(x, 0.0), c(0.0, 0.0)]];
        let e = expm(&m).unwrap();
        let want = [[c(x.cos(), 0.0), c(-x.sin(), 0.0)], [c(x.sin(), 0.0), c(x.cos(), 0.0)]];
        assert!(max_diff(&e, &want) < 1e-12);
    }

    #[test]
    fn boost_generator() {
        let x = 6.0;
        let m = [[c(0.0, 0.0), c(x, 0.0)], [c(x, 0.0), c(0.0, 0.0)]];
        let e = expm(&m).unwrap();
        assert!((e[0][0].re / x.cosh() - 1.0).abs() < 1e-13);
        assert!((e[0][1].re / x.sinh() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn nilpotent_is_exact() {
        let mut n = zeros::<4>();
        n[1][0] = c(2.0, 1.0);
        n[2][1] = c(-1.0, 0.5);
        let e = expm(&n).unwrap();
        let mut want = identity::<4>();
        want[1][0] = n[1][0];
        want[2][1] = n[2][1];
        want[2][0] = n[2][1] * n[1][0] * 0.5;
        assert!(max_diff(&e, &want) < 1e-14);
    }

    #[test]
    fn inverse_of_negation() {
        let mut x = zeros::<4>();
        for i in 0..4 {
            for j in 0..4 {
                x[i][j] = c(((i * 7 + j * 3) % 5) as f64 * 0.4 - 0.8, ((i + 2 * j) % 3) as f64 * 0.3);
            }
        }
        let p = expm(&x).unwrap();
        let neg = lin(&[(-1.0, &x)]);
        let q = expm(&neg).unwrap();
        assert!(max_diff(&matmul(&p, &q), &identity::<4>()) < 1e-12);
    }

    #[test]
    fn rejects_large_norm() {
        let mut x = zeros::<2>();
        x[0][1] = c(60.0, 0.0);
        assert!(matches!(expm(&x), Err(Error::ExponentialOutOfRange { .. })));
    }
}
