mod common;

use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shearlab::flow::ShearFlow;
use shearlab::indicators::{j1j2, wronskian};
use shearlab::numerics::ode::Dopri5;
use shearlab::rayleigh::*;

fn flows() -> Vec<ShearFlow> {
    vec![ShearFlow::couette(), simple_flow(), multiple_flow()]
}

#[test]
fn seed_value_slope_and_curvature() {
    let o = MarchOptions::default();
    for f in flows() {
        for c in [-0.5, 0.0, 0.3] {
            let yc = f.invert(c);
            let br = real_branch(&f, c, &[yc], None, &o).unwrap();
            assert_eq!(br.phi1[0], 1.0);
            assert_eq!(br.dphi1[0], 0.0);
            assert_eq!(br.phi[0], 0.0);
            assert_eq!(br.dphi[0], f.d1(yc));
            let d2 = phi1_second_derivative(&f, c, &o).unwrap();
            assert!((d2 - 1.0 / 3.0).abs() < 1e-6, "{}: c {c} φ₁'' = {d2}", f.label);
        }
    }
}

/// Couette at `c = 0`: `(y²φ₁')' = y²φ₁` integrated from the Taylor data at `y = 0.05`.
#[test]
fn couette_phi1_against_adaptive_integrator() {
    let y0 = 0.05f64;
    let mut st = [1.0 + y0 * y0 / 6.0 + y0.powi(4) / 120.0, y0 / 3.0 + y0.powi(3) / 30.0];
    let mut f = |y: f64, u: &[f64], du: &mut [f64]| {
        du[0] = u[1];
        du[1] = u[0] - 2.0 * u[1] / y;
    };
    let mut s = Dopri5::new(2, 1e-12, vec![1e-14, 1e-14], 1e-3);
    let mut t = y0;
    s.advance(&mut f, &mut t, &mut st, 1.0).unwrap();
    let v = solve_phi1(&ShearFlow::couette(), 0.0, &[1.0], &MarchOptions::default()).unwrap()[0];
    assert!((v - st[0]).abs() < 1e-8, "{v} vs {}", st[0]);
    assert!((v - 1f64.sinh()).abs() < 1e-10);
}

#[test]
fn phi1_estimates_on_random_samples() {
    let o = MarchOptions::default();
    let fl = flows();
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut c_fit = 0.0f64;
    for _ in 0..200 {
        let f = &fl[rng.gen_range(0..fl.len())];
        let c = rng.gen_range(-1.5..1.5);
        let yc = f.invert(c);
        let x: f64 = rng.gen_range(-8.0..8.0);
        let y = yc + x;
        let br = real_branch(f, c, &[y], None, &o).unwrap();
        let (p, dp) = (br.phi1[0], br.dphi1[0]);
        assert!(p >= 1.0 - 1e-14, "φ₁ < 1 at {y} ({})", f.label);
        assert!(p <= x.abs().exp() * (1.0 + 1e-12), "φ₁ above e^|y-yc| at {y}");
        assert!(dp * x >= -1e-14, "sign condition at {y}");
        assert!(dp.abs() <= p * (1.0 + 1e-12));
        assert!(dp.abs() <= x.abs() * p * (1.0 + 1e-12));
        if x.abs() <= 1.0 && x != 0.0 {
            c_fit = c_fit.max((p - 1.0).abs() / (x * x));
        }
    }
    // One global constant; 1/6 is the Couette value at the origin.
    assert!(c_fit > 0.1 && c_fit < 1.0, "fitted C = {c_fit}");
}

#[test]
fn couette_phi1_is_even() {
    let o = MarchOptions::default();
    let ys: Vec<f64> = (1..40).flat_map(|k| [0.3 + 0.1 * k as f64, 0.3 - 0.1 * k as f64]).collect();
    let br = real_branch(&ShearFlow::couette(), 0.3, &ys, None, &o).unwrap();
    for k in 0..ys.len() / 2 {
        let (a, b) = (br.phi1[2 * k], br.phi1[2 * k + 1]);
        assert!((a - b).abs() <= 1e-10 * a, "{a} {b}");
    }
}

#[test]
fn phi2_is_one_on_the_real_axis_and_conjugation_symmetric() {
    let o = MarchOptions::default();
    let f = simple_flow();
    let ys = linspace(-5.0, 5.0, 41);
    let p = solve_phi2(&f, Complex64::new(0.2, 0.0), &ys, &o).unwrap();
    assert!(p.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    let a = solve_phi2(&f, Complex64::new(0.2, 0.01), &ys, &o).unwrap();
    let b = solve_phi2(&f, Complex64::new(0.2, -0.01), &ys, &o).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y.conj()).norm() < 1e-10);
    }
    // |φ₂ - 1| ≤ C|c_i| with one constant over two decades.
    let mut ratios = Vec::new();
    for ci in [1e-2, 1e-3, 1e-4] {
        let p = solve_phi2(&f, Complex64::new(0.2, ci), &ys, &o).unwrap();
        ratios.push(p.iter().map(|v| (v - 1.0).norm()).fold(0.0, f64::max) / ci);
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
    assert!(hi < 2.0 * lo, "{ratios:?}");
}

#[test]
fn determinant_matches_quadrature_wronskian() {
    let o = MarchOptions::default();
    for f in [simple_flow(), multiple_flow(), ShearFlow::couette()] {
        for c in [Complex64::new(0.1, 0.05), Complex64::new(-0.4, 0.01), Complex64::new(0.3, -0.02)] {
            let w = wronskian(&f, c, &o).unwrap();
            let dets = wronskian_determinant(&f, c, &[-2.0, -0.5, 0.7, 1.9], &o).unwrap();
            for d in dets {
                assert!((d - w).norm() <= 1e-8 * w.norm().max(1.0), "{}: {c} det {d} vs W {w}", f.label);
            }
        }
    }
}

#[test]
fn glued_eigenfunction_at_the_embedded_eigenvalue() {
    let o = MarchOptions::default();
    for f in [simple_flow(), multiple_flow()] {
        let ys = linspace(-6.0, 6.0, 121);
        let g = glue_gamma(&f, 0.0, &ys, &o).unwrap();
        let v = -1.0 / g.b1;
        assert!((g.limit_minus - v).abs() < 1e-9 && (g.limit_plus - v).abs() < 1e-9);
        assert!(g.mismatch < 1e-8, "{}: mismatch {}", f.label, g.mismatch);
        // Rayleigh residual away from the critical layer (5-point second difference).
        let h = 1e-3;
        for &y in &[-3.0, -1.0, -0.4, 0.5, 1.5, 3.0] {
            let pts: Vec<f64> = (-2..=2).map(|k| y + k as f64 * h).collect();
            let gg = glue_gamma(&f, 0.0, &pts, &o).unwrap().gamma;
            let d2 = (-gg[0] + 16.0 * gg[1] - 30.0 * gg[2] + 16.0 * gg[3] - gg[4]) / (12.0 * h * h);
            let res = f.b(y) * (d2 - gg[2]) - f.d2(y) * gg[2];
            assert!(res.abs() < 1e-6, "{}: residual {res} at {y}", f.label);
        }
    }
}

/// Away from an eigenvalue the derivative jump of the glued function is `-b'(y_c) J₁` when `b''(y_c) = 0`.
#[test]
fn derivative_jump_tracks_the_indicator() {
    let o = MarchOptions::default();
    for n in [1.5, 2.0, 2.3] {
        let f = neutral(n, 0.9);
        let (j1, j2) = j1j2(&f, 0.0, &o).unwrap();
        assert!(j2 == 0.0 && j1.abs() > 1e-3);
        let g = glue_gamma(&f, 0.0, &[], &o).unwrap();
        assert!(g.log_coefficient.abs() < 1e-8);
        let expect = -g.b1 * j1;
        assert!((g.deriv_jump - expect).abs() < 1e-6 * expect.abs(), "N {n}: jump {} vs -b'J1 {expect}", g.deriv_jump);
    }
}

#[test]
fn c_derivative_limits_match_explicit_integrals() {
    let o = MarchOptions::default();
    for (f, tol) in [(simple_flow(), 1e-6), (multiple_flow(), 1e-8)] {
        let d = gamma_c_derivative(&f, 0.0, &[], &o).unwrap();
        let e = explicit_limits(&f, 0.0, &o).unwrap();
        assert!((d.value_minus - e.value_minus).abs() < tol, "{}: {} vs {}", f.label, d.value_minus, e.value_minus);
        assert!((d.value_plus - e.value_plus).abs() < tol);
    }
}

#[test]
fn associated_function_matching_only_for_the_multiple_flow() {
    let o = MarchOptions::default();
    let m = gamma_c_derivative(&multiple_flow(), 0.0, &[], &o).unwrap();
    assert!(m.jump_value.abs() < 1e-8 && m.deriv_mismatch < 1e-6, "{m:?}");
    let s = gamma_c_derivative(&simple_flow(), 0.0, &[], &o).unwrap();
    assert!(s.deriv_mismatch > 1e-3 || s.jump_value.abs() > 1e-3, "{s:?}");
}

/// `b (∂²-1)∂_cΓ - b''∂_cΓ - (∂²-1)Γ = 0` at `c* = 0`.
#[test]
fn c_derivative_equation_residual() {
    let o = MarchOptions::default();
    let f = multiple_flow();
    let h = 2e-3;
    let mut num = 0.0;
    let mut den = 0.0;
    for &y in &[-2.5, -1.2, -0.6, -0.3, 0.35, 0.8, 1.7, 3.0] {
        let pts: Vec<f64> = (-2..=2).map(|k| y + k as f64 * h).collect();
        let d = gamma_c_derivative(&f, 0.0, &pts, &o).unwrap().values;
        let g = glue_gamma(&f, 0.0, &pts, &o).unwrap();
        let lap = |v: &[f64]| (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h) - v[2];
        let om = lap(&g.gamma);
        let r = f.b(y) * lap(&d) - f.d2(y) * d[2] - om;
        num += r * r;
        den += om * om;
    }
    assert!(num.sqrt() <= 1e-4 * den.sqrt(), "{} vs {}", num.sqrt(), den.sqrt());
}

#[test]
fn inhomogeneous_left_and_right_forms_agree() {
    let o = MarchOptions::default();
    let f = simple_flow();
    let g = damping_data();
    let ys = linspace(-4.0, 4.0, 33);
    let c = Complex64::new(0.2, 0.05);
    let s = solve_inhomogeneous(&f, c, &g, &ys, &o).unwrap();
    let scale = s.phi.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (a, b) in s.phi_left.iter().zip(&s.phi_right) {
        assert!((a - b).norm() < 1e-6 * scale);
    }
    let z = solve_inhomogeneous(&f, c, &Forcing::zero(), &ys, &o).unwrap();
    assert!(z.mu == Complex64::new(0.0, 0.0) && z.phi.iter().all(|v| v.norm() == 0.0));
}
