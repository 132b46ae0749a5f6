mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use shearlab::evolution::{build_operator, evolve, helmholtz_inverse, EvolveOptions, Method};
use shearlab::grid::{Field, Grid};
use shearlab::indicators::{pi1, pi1_hilbert};
use shearlab::io::fmt17;
use shearlab::rayleigh::MarchOptions;
use shearlab::witness::{plateau, ramp, theorem1_data, toy_solve, ToyVariant};

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn ramp_is_monotone_and_antisymmetric(x in 0.0f64..1.0, d in 0.0f64..0.5) {
        prop_assert!((ramp(x) + ramp(1.0 - x) - 1.0).abs() < 1e-14);
        prop_assert!(ramp((x + d).min(1.0)) >= ramp(x) - 1e-15);
        prop_assert!((0.0..=1.0).contains(&ramp(x)));
    }

    #[test]
    fn plateau_shape(m in 1.5f64..14.0, y in -1.0f64..2.0) {
        let z = m.exp();
        let v = plateau(z, y);
        prop_assert!((0.0..=0.5).contains(&v));
        if y <= 1.0 / z || y >= 1.0 {
            prop_assert_eq!(v, 0.0);
        }
        if y >= 2.0 / z && y <= 0.5 {
            prop_assert_eq!(v, 0.5);
        }
    }

    #[test]
    fn witness_norm_budget(m in 1.5f64..14.0) {
        let d = theorem1_data(m).unwrap();
        prop_assert!(d.l2 + d.linf <= 1.0);
        prop_assert_eq!(d.linf, 0.5);
        prop_assert_eq!(d.support, (1.0 / d.z, 1.0));
    }

    #[test]
    fn toy_semigroup_and_linearity(v in prop_oneof![Just(ToyVariant::A1), Just(ToyVariant::A2)],
                                   nu in 0.0f64..0.5, s in 0.0f64..20.0, t in 0.0f64..20.0,
                                   a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let once = toy_solve(v, nu, (a, b), s + t).unwrap();
        let mid = toy_solve(v, nu, (a, b), s).unwrap();
        let twice = toy_solve(v, nu, mid, t).unwrap();
        let tol = 1e-10 * (1.0 + once.0.abs() + once.1.abs());
        prop_assert!((once.0 - twice.0).abs() <= tol && (once.1 - twice.1).abs() <= tol);
        let p = toy_solve(v, nu, (1.0, 0.0), t).unwrap();
        let q = toy_solve(v, nu, (0.0, 1.0), t).unwrap();
        let r = toy_solve(v, nu, (a, b), t).unwrap();
        prop_assert!((a * p.1 + b * q.1 - r.1).abs() <= 1e-12 * (1.0 + r.1.abs() + t));
    }

    #[test]
    fn seventeen_digits_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let s = fmt17(x);
        prop_assert_eq!(s.parse::<f64>().unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn helmholtz_inverse_is_negative_on_positive_data(c in -3.0f64..3.0, w in 0.2f64..2.0) {
        let g = Grid::new(10.0, 255).unwrap();
        let om = Field::from_real_fn(g, |y| (-((y - c) / w).powi(2)).exp());
        let psi = helmholtz_inverse(&g, &om);
        prop_assert!(psi.values.iter().all(|v| v.re <= 0.0 && v.im == 0.0));
    }

    #[test]
    fn evolution_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -1.0f64..1.0) {
        let g = Grid::new(8.0, 64).unwrap();
        let op = build_operator(&simple_flow(), &g, 0.0).unwrap();
        let u = Field::from_real_fn(g, |y| (-(y - c).powi(2)).exp());
        let v = Field::from_real_fn(g, |y| y * (-y * y).exp());
        let mix = u.scale(Complex64::new(a, 0.0)).add(&v.scale(Complex64::new(0.0, b)));
        let o = EvolveOptions { snapshots: true, ..Default::default() };
        let t = [0.0, 3.0];
        let eu = evolve(&op, &u, &t, Method::Rk4, &o).unwrap();
        let ev = evolve(&op, &v, &t, Method::Rk4, &o).unwrap();
        let em = evolve(&op, &mix, &t, Method::Rk4, &o).unwrap();
        let lin = eu.omega[1].scale(Complex64::new(a, 0.0)).add(&ev.omega[1].scale(Complex64::new(0.0, b)));
        prop_assert!(em.omega[1].sub(&lin).l2() <= 1e-12 * (1.0 + lin.l2()));
    }

    #[test]
    fn pi1_routes_agree(c in -1.5f64..1.5) {
        let f = simple_flow();
        let a = pi1(&f, c, &MarchOptions::default()).unwrap();
        let b = pi1_hilbert(&f, c, 400);
        prop_assert!((a - b).abs() <= 1e-6, "c {}: {} {}", c, a, b);
    }
}
