use krylov_core::algebra::{build_liouvillian, LiouvillianSpec, QuadraticHamiltonian};
use krylov_core::bch::{closed_form_params, decompose_exponential, to_rep4};
use krylov_core::coherent::{
    complexity_closed, interaction_term, mehler_normalization_check, phi_series_capped, schrodinger_complexity_t,
    DisplacementParams,
};
use krylov_core::fock::{FockVector, TruncationConfig};
use krylov_core::lanczos::lanczos_with_basis;
use num_complex::Complex64;
use proptest::prelude::*;

fn complex(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| Complex64::new(re, im))
}

fn polar(max_abs: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max_abs, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

fn quadratic() -> impl Strategy<Value = QuadraticHamiltonian> {
    (complex(2.0), complex(2.0), complex(2.0), complex(2.0), complex(2.0), complex(2.0)).prop_map(
        |(eta, delta, creation_sq, annihilation_sq, creation, annihilation)| QuadraticHamiltonian {
            eta,
            delta,
            creation_sq,
            annihilation_sq,
            creation,
            annihilation,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rep4_preserves_brackets(x in quadratic(), y in quadratic()) {
        let lhs = to_rep4(&x.bracket(&y));
        let rhs = to_rep4(&x).commutator(&to_rep4(&y));
        prop_assert!(lhs.has_rep_structure());
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((lhs.entries[i][j] - rhs.entries[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn amplitudes_are_normalized(v in polar(4.0), w in polar(3.0)) {
        let p = DisplacementParams::unphased(v, w).unwrap();
        let series = phi_series_capped(&p, 1e-13, 1 << 14).unwrap();
        prop_assert!((series.norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert!((mehler_normalization_check(&p) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mean_index_matches_closed_form(v in polar(4.0), w in polar(3.0)) {
        let p = DisplacementParams::unphased(v, w).unwrap();
        let series = phi_series_capped(&p, 1e-13, 1 << 14).unwrap();
        let k = complexity_closed(&p);
        prop_assert!((series.complexity() - k).abs() < 1e-8 * k.max(1.0), "{} vs {}", series.complexity(), k);
    }

    #[test]
    fn undisplaced_states_have_even_support(w in polar(2.0)) {
        let p = DisplacementParams::unphased(Complex64::new(0.0, 0.0), w).unwrap();
        let series = phi_series_capped(&p, 1e-12, 1 << 14).unwrap();
        for z in series.phi().iter().skip(1).step_by(2) {
            prop_assert!(z.norm() < 1e-14);
        }
    }

    #[test]
    fn closed_form_phase_and_squeeze(alpha in -2.0..2.0f64, beta in -1.5..1.5f64, t in 0.0..2.0f64) {
        let spec = LiouvillianSpec::new(alpha, beta).unwrap();
        let p = closed_form_params(&spec, t);
        prop_assert!((p.theta().norm() - 1.0).abs() < 1e-12);
        prop_assert_eq!(p.w().re, 0.0);
        let d = decompose_exponential(&spec, t).unwrap();
        prop_assert!(d.w().re.abs() < 1e-10);
        prop_assert!((d.v() - p.v()).norm() < 1e-10 * p.v().norm().max(1.0));
        prop_assert!((d.theta() - p.theta()).norm() < 1e-10);
    }

    #[test]
    fn complexity_in_time_is_superadditive(alpha in -2.0..2.0f64, beta in -1.5..1.5f64, t in 0.0..3.0f64) {
        let spec = LiouvillianSpec::new(alpha, beta).unwrap();
        let k = schrodinger_complexity_t(&spec, t);
        let split = alpha * alpha * t * t + (beta * t).sinh().powi(2);
        prop_assert!(interaction_term(&spec, t) >= -1e-12);
        prop_assert!(k >= split - 1e-12);
        let closed = complexity_closed(&closed_form_params(&spec, t));
        prop_assert!((k - closed).abs() < 1e-10 * k.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lanczos_basis_tridiagonalizes(alpha in -1.5..1.5f64, beta in 0.1..1.5f64) {
        let cfg = TruncationConfig::new(96).unwrap();
        let l = build_liouvillian(&LiouvillianSpec::new(alpha, beta).unwrap(), &cfg).unwrap();
        let (chain, basis) = lanczos_with_basis(&l, &FockVector::vacuum(96).unwrap(), 40, true).unwrap();
        prop_assert!(basis.orthonormality_defect() < 1e-10);
        for i in 0..basis.len() {
            let li = l.apply(basis.vector(i)).unwrap();
            for j in 0..basis.len() {
                let entry: Complex64 = basis.vector(j).iter().zip(&li).map(|(x, y)| x.conj() * y).sum();
                if i.abs_diff(j) >= 2 {
                    prop_assert!(entry.norm() < 1e-10);
                } else if i == j {
                    prop_assert!((entry.re - chain.a()[i]).abs() < 1e-10);
                } else {
                    prop_assert!((entry.norm() - chain.b()[i.min(j)]).abs() < 1e-10);
                }
            }
        }
        let b1 = (alpha * alpha + beta * beta / 2.0).sqrt();
        prop_assert!((chain.b()[0] - b1).abs() < 1e-12);
    }
}
