use proptest::prelude::*;
use unf_core::model::{
    characteristic_a, classify_region, equilibria, gl_vector_field, map_p, map_v, map_v_inverse,
    saddle_spectrum, unf_vector_field, Zone,
};
use unf_core::{GlParams, State, UnfParams};

/// Generalized Lorenz parameters with r > q > -a and b < 2a.
fn gl_params() -> impl Strategy<Value = GlParams> {
    (0.5f64..40.0, 0.05f64..0.95, 0.1f64..60.0, 0.0f64..1.0).prop_map(|(a, bf, span, qf)| {
        let q = -a + qf * (a + 30.0) * 0.999 + 1e-3;
        GlParams::new(a, bf * 2.0 * a, q + span, q)
    })
}

fn state() -> impl Strategy<Value = State> {
    (-20.0f64..20.0, -20.0f64..20.0, -5.0f64..50.0).prop_map(|(x, y, z)| State::new(x, y, z))
}

/// Derivative of the coordinate map along `v`, by central differences.
fn dv_numeric(g: &GlParams, s: &State, v: &State) -> State {
    let h = 1e-6;
    let (a, _) = map_v(g, &(*s + *v * h), 0.0).unwrap();
    let (b, _) = map_v(g, &(*s - *v * h), 0.0).unwrap();
    (a - b) * (0.5 / h)
}

proptest! {
    #[test]
    fn map_roundtrip(g in gl_params(), s in state(), t in -10.0f64..10.0) {
        let (u, tau) = map_v(&g, &s, t).unwrap();
        let (back, t2) = map_v_inverse(&g, &u, tau).unwrap();
        prop_assert!(back.dist(&s) <= 1e-12 * (1.0 + s.norm()) * 10.0);
        prop_assert!((t2 - t).abs() <= 1e-12 * (1.0 + t.abs()));
    }

    #[test]
    fn conjugacy_holds(g in gl_params(), s in state()) {
        let p = map_p(&g).unwrap();
        let w = g.omega().unwrap();
        let (u, _) = map_v(&g, &s, 0.0).unwrap();
        let lhs = dv_numeric(&g, &s, &gl_vector_field(&g, &s)) * w;
        let rhs = unf_vector_field(&p, &u);
        prop_assert!((lhs - rhs).norm() <= 1e-5 * (1.0 + rhs.norm()), "{lhs:?} vs {rhs:?}");
    }

    #[test]
    fn image_is_positive(g in gl_params()) {
        let p = map_p(&g).unwrap();
        prop_assert!(p.lambda > 0.0 && p.alpha > 0.0 && p.beta > 0.0);
    }

    #[test]
    fn equilibria_are_fixed(l in 0.0f64..3.0, a in 0.01f64..2.0, b in 0.01f64..3.0) {
        let p = UnfParams::new(l, a, b).unwrap();
        let e = equilibria(&p).unwrap();
        for s in [e.origin, e.plus, e.minus] {
            prop_assert!(unf_vector_field(&p, &s).norm() < 1e-14);
        }
        prop_assert_eq!(e.minus, e.plus.mirror());
    }

    #[test]
    fn saddle_product(l in 0.0f64..50.0) {
        let s = saddle_spectrum(&UnfParams::new(l, 0.3, 1.0).unwrap());
        prop_assert!((s.e1 * s.e2 + 1.0).abs() < 1e-12);
        prop_assert!(s.e1 > 0.0 && s.e2 < 0.0);
        prop_assert!((s.e1 + s.e2 + l).abs() < 1e-12 * (1.0 + l));
    }

    #[test]
    fn field_is_odd(l in 0.0f64..3.0, a in 0.0f64..2.0, b in 0.0f64..3.0, s in state()) {
        let p = UnfParams::new(l, a, b).unwrap();
        let f = unf_vector_field(&p, &s);
        let m = unf_vector_field(&p, &s.mirror());
        prop_assert_eq!(m, f.mirror());
    }
}

#[test]
fn chen_family_lies_on_the_chen_curve() {
    for (a, b, c) in [(35.0, 3.0, 28.0), (30.0, 2.0, 25.0), (40.0, 5.0, 30.0)] {
        let p = map_p(&GlParams::chen(a, b, c)).unwrap();
        let big_a = characteristic_a(&p);
        assert!((p.lambda - (big_a * big_a - 1.0) / (2.0 * big_a)).abs() < 1e-10);
        let label = classify_region(&p, 1e-9);
        assert_eq!(label.zone, Zone::ChenLike);
        assert!(label.on_chen_curve);
    }
}
