mod common;

use common::*;
use num_complex::Complex64;
use shearlab::flow::{NeutralFlowParams, ShearFlow};
use shearlab::indicators::*;
use shearlab::numerics::quad::integrate;
use shearlab::numerics::spline::CubicSpline;
use shearlab::rayleigh::{glue_gamma, Forcing, MarchOptions};
use shearlab::witness::theorem1_data;

fn o() -> MarchOptions {
    MarchOptions::default()
}

#[test]
fn hilbert_oracle_over_fifty_samples() {
    for f in [simple_flow(), multiple_flow(), neutral(1.2, 0.4)] {
        for c in linspace(-1.2, 1.2, 50) {
            let a = pi1(&f, c, &o()).unwrap();
            let b = pi1_hilbert(&f, c, 400);
            assert!((a - b).abs() <= 1e-6, "{}: c {c} subtraction {a} hilbert {b}", f.label);
        }
    }
}

#[test]
fn couette_and_symmetric_values() {
    let c = ShearFlow::couette();
    assert_eq!(pi1(&c, 0.4, &o()).unwrap(), 0.0);
    // Π₂ = ∫ (1/sinh²x - 1/x²) dx, with the removable point at 0 patched by its limit -1/3.
    let f = |x: f64| if x.abs() < 1e-3 { -1.0 / 3.0 + x * x / 15.0 } else { 1.0 / x.sinh().powi(2) - 1.0 / (x * x) };
    let brute = 2.0 * (integrate(f, 0.0, 1.0, 1e-14, 1e-12, 2000).unwrap() + integrate(f, 1.0, 60.0, 1e-14, 1e-12, 2000).unwrap() - 1.0 / 60.0);
    let p2 = pi2(&c, 0.0, &o()).unwrap();
    assert!((p2 - brute).abs() < 1e-8, "{p2} vs {brute}");
    // b odd: Π₁ is even in c.
    let m = multiple_flow();
    for c in [0.2, 0.55, 0.9] {
        let a = pi1(&m, c, &o()).unwrap();
        let b = pi1(&m, -c, &o()).unwrap();
        assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "{a} {b}");
    }
}

#[test]
fn pi2_is_negative_and_translation_covariant() {
    let p = NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n: N_SIMPLE, theta: 0.9, target_eigenvalue: -1.0 };
    let f = ShearFlow::neutral(&p, 0.0);
    let g = ShearFlow::neutral(&p, -0.37);
    for c in linspace(-1.0, 1.0, 9) {
        let a = pi2(&f, c, &o()).unwrap();
        assert!(a < 0.0);
        let b = pi2(&g, g.b(f.invert(c)), &o()).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} {b}");
    }
}

#[test]
fn j2_closed_form_and_derivatives() {
    let f = simple_flow();
    for c in [-0.6, -0.1, 0.0, 0.25, 0.8] {
        let (_, j2) = j1j2(&f, c, &o()).unwrap();
        let yc = f.invert(c);
        let d = f.derivs(yc);
        let cf = std::f64::consts::PI * d[2] / d[1].powi(3);
        assert!((j2 - cf).abs() <= 1e-14 * cf.abs().max(1.0));
        let (_, fd) = dj1j2(&f, c, 0.005, &o()).unwrap();
        let an = dj2_analytic(&f, c);
        assert!((fd - an).abs() < 1e-6, "c {c}: {fd} vs {an}");
    }
    assert!(j1j2(&ShearFlow::couette(), 0.3, &o()).unwrap().1 == 0.0);
}

#[test]
fn tuned_flows_have_zero_indicators_at_zero() {
    for f in [simple_flow(), multiple_flow()] {
        let (j1, j2) = j1j2(&f, 0.0, &o()).unwrap();
        assert!(j1.abs() <= 1e-6 && j2.abs() <= 1e-6, "{}: {j1} {j2}", f.label);
    }
}

#[test]
fn derivative_estimates_stable_under_step_refinement() {
    let f = simple_flow();
    for c in [-0.4, 0.0, 0.3] {
        let a = dj1j2(&f, c, 0.01, &o()).unwrap();
        let b = dj1j2(&f, c, 0.005, &o()).unwrap();
        assert!((a.0 - b.0).abs() < 1e-5 && (a.1 - b.1).abs() < 1e-5, "{a:?} {b:?}");
    }
}

#[test]
fn boundary_values_of_the_wronskian() {
    let f = simple_flow();
    for c in [-0.5, 0.2, 0.7] {
        let (j1, j2) = j1j2(&f, c, &o()).unwrap();
        for s in [1e-2, 1e-3] {
            let up = wronskian(&f, Complex64::new(c, s), &o()).unwrap();
            let dn = wronskian(&f, Complex64::new(c, -s), &o()).unwrap();
            assert!((up - Complex64::new(j1, -j2)).norm() <= 10.0 * s);
            assert!((dn - Complex64::new(j1, j2)).norm() <= 10.0 * s);
        }
    }
}

#[test]
fn slope_at_the_simple_eigenvalue_two_routes() {
    let f = simple_flow();
    let r = report_at(&f, 0.0, &IndicatorTolerances::default(), &o()).unwrap();
    assert_eq!(r.multiplicity, Multiplicity::Simple);
    assert!(!r.flagged);
    let v = r.wronskian_slope_vertical.unwrap();
    assert!((v - r.wronskian_slope).norm() <= 1e-3 * r.wronskian_slope.norm());
    // Frozen: ∂J₂(0) of the simple flow.
    assert!((r.dj2 + 0.16922348).abs() < 1e-7, "{}", r.dj2);
}

#[test]
fn lower_bounds_away_from_the_eigenvalue() {
    let f = simple_flow();
    let mut cl_far = f64::INFINITY;
    let mut cl_near = f64::INFINITY;
    for c in linspace(-2.0, 2.0, 41) {
        if c.abs() < 1e-9 {
            continue;
        }
        let (j1, j2) = j1j2(&f, c, &o()).unwrap();
        let s = j1 * j1 + j2 * j2;
        if c.abs() >= 1.0 {
            cl_far = cl_far.min(s);
        }
        cl_near = cl_near.min(s / (c * c));
    }
    assert!(cl_far > 1e-2 && cl_near > 1e-3, "C_l far {cl_far} near {cl_near}");
}

#[test]
fn scan_results() {
    let tol = IndicatorTolerances::default();
    assert!(scan_embedded(&ShearFlow::couette(), (-1.0, 1.0), 11, &tol, &o()).unwrap().is_empty());
    let s = scan_embedded(&simple_flow(), (-1.0, 1.0), 21, &tol, &o()).unwrap();
    assert_eq!(s.len(), 1);
    assert!(s[0].c_star.abs() < 1e-6 && s[0].multiplicity == Multiplicity::Simple);
    let m = scan_embedded(&multiple_flow(), (-1.0, 1.0), 21, &tol, &o()).unwrap();
    assert_eq!(m.len(), 1);
    assert_eq!(m[0].multiplicity, Multiplicity::Multiple);
    let p = NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n: N_SIMPLE, theta: 0.9, target_eigenvalue: -1.0 };
    let shifted = ShearFlow::neutral(&p, 0.25);
    let t = scan_embedded(&shifted, (-0.75, 1.25), 21, &tol, &o()).unwrap();
    assert_eq!(t.len(), 1);
    assert!((t[0].c_star - 0.25).abs() < 1e-6);
}

#[test]
fn critical_layer_integrals() {
    let f = simple_flow();
    let zero = Forcing::zero();
    assert_eq!(j3j4(&f, &zero, 0.1, &o()).unwrap(), (0.0, 0.0));
    let g = damping_data();
    let (j3, j4) = j3j4(&f, &g, 0.1, &o()).unwrap();
    for s in [1e-2, 1e-3] {
        let js = jstar(&f, &g, Complex64::new(0.1, s), &o()).unwrap();
        assert!((js - Complex64::new(j3, j4)).norm() <= 20.0 * s, "s {s}: {js} vs {j3} + i{j4}");
    }
}

#[test]
fn projection_coefficient_properties() {
    let f = simple_flow();
    let r = report_at(&f, 0.0, &IndicatorTolerances::default(), &o()).unwrap();
    let g = damping_data();
    let p = projection_coefficient(&f, &g, &r, &o()).unwrap();
    // Frozen from the first full run.
    assert!((p - Complex64::new(1.1461, -1.1586)).norm() < 1e-3, "{p}");
    let p3 = projection_coefficient(&f, &g.scaled(-2.5), &r, &o()).unwrap();
    assert!((p3 + 2.5 * p).norm() < 1e-10 * p.norm());

    // The eigenfunction's own vorticity projects to 1.
    let ys = linspace(-9.0, 9.0, 3601);
    let gam = glue_gamma(&f, 0.0, &ys, &o()).unwrap();
    let spline = CubicSpline::natural(&ys, &gam.omega_star).unwrap();
    let w = Forcing::new(move |y| spline.eval(y), (-9.0, 9.0), vec![]);
    let pw = projection_coefficient(&f, &w, &r, &o()).unwrap();
    assert!((pw - 1.0).norm() < 1e-5, "P(ω_*) = {pw}");

    let m = report_at(&multiple_flow(), 0.0, &IndicatorTolerances::default(), &o()).unwrap();
    assert_eq!(projection_coefficient(&multiple_flow(), &g, &m, &o()).unwrap_err().exit_code(), 2);
}

#[test]
fn witness_projection_is_large() {
    let f = simple_flow();
    let r = report_at(&f, 0.0, &IndicatorTolerances::default(), &o()).unwrap();
    let d = theorem1_data(10.0).unwrap();
    let (j3, _) = j3j4(&f, &d.forcing(), 0.0, &o()).unwrap();
    let p = projection_coefficient(&f, &d.forcing(), &r, &o()).unwrap();
    let kappa_p = p.norm() / 10.0;
    assert!(kappa_p >= 0.1, "|P|/M = {kappa_p}");
    assert!(j3 / d.j3_bound() > 0.1, "J3 {j3} bound {}", d.j3_bound());
}
