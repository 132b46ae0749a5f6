//! Indicator functions `J₁…J₄`, the Wronskian, and the embedded-eigenvalue scan.

use crate::error::{Error, Result};
use crate::flow::{j2_closed_form, ShearFlow};
use crate::numerics::fit::neville;
use crate::numerics::quad::{composite_gl, integrate};
use crate::rayleigh::march::side_extent;
use crate::rayleigh::{complex_branch, real_branch, Forcing, MarchOptions};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Tolerances used by the scan and the multiplicity classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorTolerances {
    /// Detection threshold on `J₁² + J₂²`.
    pub tol_eigen: f64,
    /// Multiplicity threshold on `|∂J₁| + |∂J₂|`.
    pub tol_mult: f64,
    /// Step of the central differences in `c_r`.
    pub fd_step: f64,
}

impl Default for IndicatorTolerances {
    fn default() -> Self {
        Self { tol_eigen: 1e-6, tol_mult: 1e-4, fd_step: 0.005 }
    }
}

/// `P.V. ∫ (b'(y_c) - b'(y)) / (b - c_r)² dy` by symmetric pairing around `y_c`.
pub fn pi1(flow: &ShearFlow, c_r: f64, opts: &MarchOptions) -> Result<f64> {
    let yc = flow.invert(c_r);
    let b1 = flow.d1(yc);
    let term = |y: f64| {
        let bb = flow.diff(y, yc);
        -flow.d1_diff(y, yc) / (bb * bb)
    };
    let a = opts.pv_window;
    // The odd pole -b''(y_c)/(b'² s) cancels between the two members of each pair.
    let inner = integrate(|s: f64| term(yc + s) + term(yc - s), 0.0, a, 1e-14, 1e-13, 4000)?;
    let mut total = inner;
    for sigma in [-1.0, 1.0] {
        let s_end = side_extent(flow, yc, sigma, 0.0, None);
        let mut lo = a;
        for hi in [2.0, s_end] {
            if hi > lo {
                total += integrate(|s: f64| term(yc + sigma * s), lo, hi, 1e-15, 1e-13, 4000)?;
                lo = hi;
            }
        }
        let y_end = yc + sigma * lo;
        let be = flow.d1(y_end);
        total += (b1 - be) / (be * flow.diff(y_end, yc).abs());
    }
    Ok(total)
}

/// Independent route: `b'(y_c) · P.V.∫ g(v)/(v - c_r) dv` with `g = -b''/b'³` at `b⁻¹(v)`.
///
/// Composite Gauss–Legendre in the velocity variable, with `g(c_r)` subtracted.
pub fn pi1_hilbert(flow: &ShearFlow, c_r: f64, panels: usize) -> f64 {
    let yc = flow.invert(c_r);
    let b1 = flow.d1(yc);
    let g = |v: f64| {
        let y = flow.invert(v);
        let (d1, d2) = flow.d12(y);
        -d2 / (d1 * d1 * d1)
    };
    let g0 = g(c_r);
    let w = flow.window + 1.0;
    let r = (flow.b(w) - c_r).abs().max((flow.b(-w) - c_r).abs()) + 1.0;
    let mut total = 0.0;
    for (lo, hi) in [(c_r - r, c_r), (c_r, c_r + r)] {
        let (xs, ws) = composite_gl(lo, hi, panels, 10);
        for (v, wt) in xs.iter().zip(&ws) {
            total += wt * (g(*v) - g0) / (v - c_r);
        }
    }
    // g0 times P.V.∫ dv/(v - c) over the symmetric window vanishes; g vanishes outside it.
    b1 * total
}

/// `∫ (1/φ₁² - 1) / (b - c_r)² dy`.
pub fn pi2(flow: &ShearFlow, c_r: f64, opts: &MarchOptions) -> Result<f64> {
    Ok(real_branch(flow, c_r, &[], None, opts)?.pi2())
}

/// One row of an indicator table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorSample {
    pub c_r: f64,
    pub j1: f64,
    pub j2: f64,
    pub pi1: f64,
    pub pi2: f64,
    pub dj1: f64,
    pub dj2: f64,
    pub j3: Option<f64>,
    pub j4: Option<f64>,
}

/// `(J₁, J₂)`; the boundary values of `W` from above and below are `J₁ ∓ i J₂`.
pub fn j1j2(flow: &ShearFlow, c_r: f64, opts: &MarchOptions) -> Result<(f64, f64)> {
    let yc = flow.invert(c_r);
    let b1 = flow.d1(yc);
    Ok((pi1(flow, c_r, opts)? / b1 + pi2(flow, c_r, opts)?, j2_closed_form(flow, yc)))
}

/// `c_r`-derivatives of `J₁` and `J₂` by Richardson-extrapolated central differences.
pub fn dj1j2(flow: &ShearFlow, c_r: f64, h: f64, opts: &MarchOptions) -> Result<(f64, f64)> {
    let mut d = Vec::new();
    for step in [h, 0.5 * h] {
        let (a1, a2) = j1j2(flow, c_r + step, opts)?;
        let (b1, b2) = j1j2(flow, c_r - step, opts)?;
        d.push(((a1 - b1) / (2.0 * step), (a2 - b2) / (2.0 * step)));
    }
    Ok(((4.0 * d[1].0 - d[0].0) / 3.0, (4.0 * d[1].1 - d[0].1) / 3.0))
}

/// `∂_{c_r} J₂ = π (b''' b' - 3 b''²) / b'⁵` at `y_c`.
pub fn dj2_analytic(flow: &ShearFlow, c_r: f64) -> f64 {
    let d = flow.derivs(flow.invert(c_r));
    PI * (d[3] * d[1] - 3.0 * d[2] * d[2]) / d[1].powi(5)
}

pub fn indicator_sample(flow: &ShearFlow, c_r: f64, g: Option<&Forcing>, tol: &IndicatorTolerances, opts: &MarchOptions) -> Result<IndicatorSample> {
    let yc = flow.invert(c_r);
    let b1 = flow.d1(yc);
    let p1 = pi1(flow, c_r, opts)?;
    let p2 = pi2(flow, c_r, opts)?;
    let (dj1, dj2) = dj1j2(flow, c_r, tol.fd_step, opts)?;
    let (j3, j4) = match g {
        Some(g) => {
            let (a, b) = j3j4(flow, g, c_r, opts)?;
            (Some(a), Some(b))
        }
        None => (None, None),
    };
    Ok(IndicatorSample { c_r, j1: p1 / b1 + p2, j2: j2_closed_form(flow, yc), pi1: p1, pi2: p2, dj1, dj2, j3, j4 })
}

/// `W(c) = ∫ 1/φ²` for non-real `c`.
pub fn wronskian(flow: &ShearFlow, c: Complex64, opts: &MarchOptions) -> Result<Complex64> {
    Ok(complex_branch(flow, c, &[], None, opts)?.w)
}

/// `(J₃, J₄)` for the source `g` at real `c_r`.
pub fn j3j4(flow: &ShearFlow, g: &Forcing, c_r: f64, opts: &MarchOptions) -> Result<(f64, f64)> {
    let br = real_branch(flow, c_r, &[], Some(g), opts)?;
    let j4 = PI * g.eval(br.yc) / (br.b1 * br.b1);
    Ok((br.j3(), j4))
}

/// `J*(g, c) = ∫ (∫_{y_c}^{y} g φ₁(·, c)) / φ² dy` for non-real `c`.
pub fn jstar(flow: &ShearFlow, g: &Forcing, c: Complex64, opts: &MarchOptions) -> Result<Complex64> {
    Ok(complex_branch(flow, c, &[], Some(g), opts)?.jstar)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicity {
    Simple,
    Multiple,
}

/// A located embedded eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueReport {
    pub c_star: f64,
    /// `J₁² + J₂²` at `c_star`.
    pub residual: f64,
    pub j1: f64,
    pub j2: f64,
    pub dj1: f64,
    pub dj2: f64,
    pub multiplicity: Multiplicity,
    /// `|∂J₁| + |∂J₂|`.
    pub dj_norm: f64,
    /// `∂J₁ - i ∂J₂`.
    pub wronskian_slope: Complex64,
    /// Limit of `W(c* + is)/(is)` extrapolated along the vertical approach.
    pub wronskian_slope_vertical: Option<Complex64>,
    /// Relative disagreement of the two slopes; above 1e-3 the report is flagged.
    pub slope_disagreement: Option<f64>,
    pub flagged: bool,
    pub tol_eigen: f64,
    pub tol_mult: f64,
}

fn objective(flow: &ShearFlow, c: f64, opts: &MarchOptions) -> Result<f64> {
    let (a, b) = j1j2(flow, c, opts)?;
    Ok(a * a + b * b)
}

/// Scans `[a, b]` for zeros of `J₁² + J₂²`.
pub fn scan_embedded(
    flow: &ShearFlow,
    interval: (f64, f64),
    coarse_n: usize,
    tol: &IndicatorTolerances,
    opts: &MarchOptions,
) -> Result<Vec<EigenvalueReport>> {
    let (a, b) = interval;
    let n = coarse_n.max(3);
    let cs: Vec<f64> = (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect();
    let fs: Vec<f64> = cs.iter().map(|c| objective(flow, *c, opts)).collect::<Result<_>>()?;
    let mut out: Vec<EigenvalueReport> = Vec::new();
    for k in 0..n {
        let left = if k > 0 { fs[k - 1] } else { f64::INFINITY };
        let right = if k + 1 < n { fs[k + 1] } else { f64::INFINITY };
        if !(fs[k] <= left && fs[k] < right) {
            continue;
        }
        let lo = cs[k.saturating_sub(1)];
        let hi = cs[(k + 1).min(n - 1)];
        let mut c = golden_section(|c| objective(flow, c, opts), lo, hi, 1e-10)?;
        c = newton_polish(flow, c, lo, hi, tol, opts)?;
        let (j1, j2) = j1j2(flow, c, opts)?;
        let residual = j1 * j1 + j2 * j2;
        if residual > tol.tol_eigen {
            continue;
        }
        if out.iter().any(|r| (r.c_star - c).abs() < 1e-6) {
            continue;
        }
        out.push(make_report(flow, c, j1, j2, tol, opts)?);
    }
    Ok(out)
}

fn make_report(flow: &ShearFlow, c: f64, j1: f64, j2: f64, tol: &IndicatorTolerances, opts: &MarchOptions) -> Result<EigenvalueReport> {
    let (dj1, dj2) = dj1j2(flow, c, tol.fd_step, opts)?;
    let dj_norm = dj1.abs() + dj2.abs();
    let multiplicity = if dj_norm <= tol.tol_mult { Multiplicity::Multiple } else { Multiplicity::Simple };
    let slope = Complex64::new(dj1, -dj2);
    let (vertical, disagreement) = if multiplicity == Multiplicity::Simple {
        let v = wronskian_slope_vertical(flow, c, opts)?;
        (Some(v), Some((v - slope).norm() / slope.norm()))
    } else {
        (None, None)
    };
    Ok(EigenvalueReport {
        c_star: c,
        residual: j1 * j1 + j2 * j2,
        j1,
        j2,
        dj1,
        dj2,
        multiplicity,
        dj_norm,
        wronskian_slope: slope,
        wronskian_slope_vertical: vertical,
        slope_disagreement: disagreement,
        flagged: disagreement.is_some_and(|d| d > 1e-3),
        tol_eigen: tol.tol_eigen,
        tol_mult: tol.tol_mult,
    })
}

/// Report for a known eigenvalue location (no scan).
pub fn report_at(flow: &ShearFlow, c: f64, tol: &IndicatorTolerances, opts: &MarchOptions) -> Result<EigenvalueReport> {
    let (j1, j2) = j1j2(flow, c, opts)?;
    make_report(flow, c, j1, j2, tol, opts)
}

/// `lim_{s→0⁺} (W(c* + is) - W_b(c*)) / (is)` by polynomial extrapolation in `s`.
///
/// `W_b = J₁ - iJ₂` is the boundary value at `c*`; it vanishes at an eigenvalue and
/// is subtracted so that the residual of the root location does not pollute the limit.
pub fn wronskian_slope_vertical(flow: &ShearFlow, c_star: f64, opts: &MarchOptions) -> Result<Complex64> {
    let (j1, j2) = j1j2(flow, c_star, opts)?;
    let wb = Complex64::new(j1, -j2);
    let ss = [0.02, 0.01, 0.005, 0.0025];
    let mut q = Vec::new();
    for s in ss {
        let w = wronskian(flow, Complex64::new(c_star, s), opts)?;
        q.push((w - wb) / Complex64::new(0.0, s));
    }
    Ok(neville(&ss, &q, 0.0))
}

fn golden_section(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Gauss–Newton steps on `(J₁, J₂)`; skipped when both derivatives are negligible.
fn newton_polish(flow: &ShearFlow, mut c: f64, lo: f64, hi: f64, tol: &IndicatorTolerances, opts: &MarchOptions) -> Result<f64> {
    for _ in 0..6 {
        let (j1, j2) = j1j2(flow, c, opts)?;
        let (d1, d2) = dj1j2(flow, c, tol.fd_step.min(0.01), opts)?;
        let den = d1 * d1 + d2 * d2;
        if den.sqrt() <= tol.tol_mult {
            break;
        }
        let step = -(j1 * d1 + j2 * d2) / den;
        let next = (c + step).clamp(lo, hi);
        if objective(flow, next, opts)? > j1 * j1 + j2 * j2 {
            break;
        }
        c = next;
        if step.abs() < 1e-14 {
            break;
        }
    }
    Ok(c)
}

/// `P = (J₃ + iJ₄)/(∂J₁ - i∂J₂)` at the report's eigenvalue.
pub fn projection_coefficient(flow: &ShearFlow, g: &Forcing, report: &EigenvalueReport, opts: &MarchOptions) -> Result<Complex64> {
    if report.multiplicity == Multiplicity::Multiple || report.wronskian_slope.norm() <= report.tol_mult {
        return Err(Error::Hypothesis(
            "projection coefficient undefined at a multiple eigenvalue (slope of the Wronskian vanishes)".into(),
        ));
    }
    let (j3, j4) = j3j4(flow, g, report.c_star, opts)?;
    Ok(Complex64::new(j3, j4) / report.wronskian_slope)
}

/// Indicator table over a list of `c_r` values.
pub fn indicator_table(flow: &ShearFlow, cs: &[f64], g: Option<&Forcing>, tol: &IndicatorTolerances, opts: &MarchOptions) -> Result<Vec<IndicatorSample>> {
    cs.iter().map(|c| indicator_sample(flow, *c, g, tol, opts)).collect()
}
