//! Property-based invariants over randomly drawn parameters.

use expint_family::family::{check_domain, closed_form, transform_scaling, ParamTriple};
use expint_family::oracle::{oracle_i, QuadratureSpec};
use expint_family::special::{expint, gamma_complete, gamma_sum_check};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Strategy for admissible triples away from the existence boundary.
fn admissible_triple() -> impl Strategy<Value = ParamTriple> {
    (0.25f64..3.5, -1.5f64..3.5, 0.5f64..3.0).prop_map(|(mu, nu, margin)| {
        let bound = (-1.0f64).max(-1.0 - mu * (nu - 1.0));
        ParamTriple::new(bound + margin, mu, nu)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expint_positive_and_decreasing_in_z(nu in -1.5f64..3.5, z in 0.01f64..20.0) {
        let e = expint(nu, z).unwrap();
        prop_assert!(e > 0.0);
        let e2 = expint(nu, z * 1.05).unwrap();
        prop_assert!(e2 < e);
    }

    #[test]
    fn expint_decreasing_in_nu_for_z_above_one(nu in -1.0f64..3.0, z in 1.0f64..20.0) {
        // For z >= 1 the integrand t^{-nu} e^{-zt} on [1, inf) decreases
        // pointwise as nu grows.
        let e = expint(nu, z).unwrap();
        let e2 = expint(nu + 0.5, z).unwrap();
        prop_assert!(e2 <= e);
    }

    #[test]
    fn gamma_split_closure(a in 0.1f64..8.0, x in 0.0f64..30.0) {
        let g = gamma_complete(a).unwrap();
        let s = gamma_sum_check(a, x).unwrap();
        prop_assert!(s.abs() <= 1e-13 * g, "a={a} x={x}: {s:e}");
    }

    #[test]
    fn closed_form_positive_and_monotone_in_z(p in admissible_triple(), z in 0.05f64..6.0) {
        let v = closed_form(&p, z).unwrap().value;
        prop_assert!(v > 0.0, "{p:?} z={z}: {v}");
        // The increment over [z, 1.1z] is positive but underflows f64
        // resolution once z^mu is large; require strict growth only while
        // the tail is representable.
        let v2 = closed_form(&p, z * 1.1).unwrap().value;
        prop_assert!(v2 >= v, "integral of a positive function cannot shrink with z");
        if z.powf(p.mu) < 25.0 {
            prop_assert!(v2 > v, "tail increment should still be resolvable here");
        }
    }

    #[test]
    fn scaling_transform_is_exact(p in admissible_triple(), z in 0.1f64..4.0, r in 0.3f64..3.0) {
        let lhs = closed_form(&p, z).unwrap().value;
        let q = transform_scaling(&p, r).unwrap();
        let rhs = closed_form(&q, z.powf(r)).unwrap().value / r;
        prop_assert!(rel(lhs, rhs) < 1e-11, "{p:?} z={z} r={r}");
    }

    #[test]
    fn domain_verdict_matches_inequality(
        lambda in -2.0f64..4.0,
        mu in 0.25f64..3.5,
        nu in -2.0f64..3.5,
    ) {
        let p = ParamTriple::new(lambda, mu, nu);
        let v = check_domain(&p).unwrap();
        let expected = lambda > (-1.0f64).max(-1.0 - mu * (nu - 1.0));
        prop_assert_eq!(v.admissible, expected);
        prop_assert!(closed_form(&p, 1.0).is_ok() == expected);
    }

    #[test]
    fn oracle_matches_closed_form(p in admissible_triple(), z in 0.1f64..4.0) {
        let spec = QuadratureSpec { rel_tol: 1e-9, ..Default::default() };
        let cf = closed_form(&p, z).unwrap().value;
        let o = oracle_i(&p, z, &spec).unwrap();
        prop_assert!(rel(cf, o.value) < 1e-7, "{p:?} z={z}");
    }
}
