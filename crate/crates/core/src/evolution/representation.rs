//! Stream function from the spectral representation formula, and its split into
//! eigenspace and continuous-spectrum parts.

use super::EvolutionTrace;
use crate::error::{config_err, Error, Result};
use crate::flow::{j2_closed_form, ShearFlow};
use crate::grid::{h1_norm, l2_norm, Field};
use crate::indicators::{pi1, projection_coefficient, EigenvalueReport, Multiplicity};
use crate::numerics::fit::{loglog_fit, LinearFit};
use crate::numerics::quad::{composite_gl, integrate};
use crate::rayleigh::{glue_gamma, real_branch, Forcing, MarchOptions};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Even smooth cutoff: `1` on `|c| ≤ 1`, `0` on `|c| ≥ 2`.
pub fn chi(c: f64) -> f64 {
    let a = c.abs();
    if a <= 1.0 {
        return 1.0;
    }
    if a >= 2.0 {
        return 0.0;
    }
    let f = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let (p, q) = (f(2.0 - a), f(a - 1.0));
    p / (p + q)
}

fn sinc_t(c: f64, t: f64) -> f64 {
    if c == 0.0 {
        t
    } else {
        (c * t).sin() / c
    }
}

/// `Ψ_χ(t)`: the cut-off real-line integral of `e^{-ict}/c` over `|c| > ½` plus the lower half circle of radius ½.
pub fn psi_chi(t: f64) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(config_err(format!("Ψ_χ needs t ≥ 0, got {t}")));
    }
    // Pairing c with -c leaves -2i ∫ χ(c) sin(ct)/c over (½, 2).
    let mut line = 0.0;
    for (a, b) in [(0.5, 1.0), (1.0, 2.0)] {
        line += integrate(|c: f64| chi(c) * (c * t).sin() / c, a, b, 1e-14, 1e-13, 4000)?;
    }
    // c = ½e^{iθ}, θ ∈ [-π, 0]: dc/c = i dθ.
    let arc: Complex64 = integrate(
        |th: f64| {
            let c = Complex64::from_polar(0.5, th);
            I * (-I * c * t).exp()
        },
        -PI,
        0.0,
        1e-14,
        1e-13,
        4000,
    )?;
    Ok(Complex64::new(0.0, -2.0 * line) + arc)
}

/// Independent principal value `P.V.∫ χ(c) e^{-ict}/c dc`, expected to equal `Ψ_χ(t) - iπ`.
pub fn pv_chi_integral(t: f64) -> Result<Complex64> {
    let mut v = 0.0;
    for (a, b) in [(0.0, 1.0), (1.0, 2.0)] {
        v += integrate(|c: f64| chi(c) * sinc_t(c, t), a, b, 1e-14, 1e-13, 4000)?;
    }
    Ok(Complex64::new(0.0, -2.0 * v))
}

/// `sup t|Ψ_χ(t)|` over the given times.
pub fn psi_chi_decay(times: &[f64]) -> Result<f64> {
    let mut m = 0.0f64;
    for t in times {
        m = m.max(t * psi_chi(*t)?.norm());
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RepresentationOptions {
    /// Critical points range over the support of `ω_in` widened by this margin.
    pub margin: f64,
    /// Maximal Gauss–Legendre panel width in `c_r`.
    pub panel: f64,
    pub order: usize,
    /// Worker threads (0: all available).
    pub threads: usize,
}

impl Default for RepresentationOptions {
    fn default() -> Self {
        Self { margin: 12.0, panel: 0.1, order: 8, threads: 0 }
    }
}

/// `Ψ(t, ·)` from the representation formula on a set of sample points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Representation {
    pub y: Vec<f64>,
    pub times: Vec<f64>,
    pub psi: Vec<Vec<Complex64>>,
    pub projection: Complex64,
    pub c_star: f64,
    /// `Γ(·, c*)` on the sample points.
    pub gamma: Vec<f64>,
    pub c_range: (f64, f64),
    pub nodes: usize,
}

/// Kernel `(J₁J₄ + J₂J₃)/(J₁² + J₂²)` and `Γ(·, c_r)` at one quadrature node.
fn node_eval(flow: &ShearFlow, g: &Forcing, c: f64, ys: &[f64], opts: &MarchOptions) -> Result<(f64, Vec<f64>)> {
    let br = real_branch(flow, c, ys, Some(g), opts)?;
    let b1 = br.b1;
    let j1 = pi1(flow, c, opts)? / b1 + br.pi2();
    let j2 = j2_closed_form(flow, br.yc);
    let j3 = br.j3();
    let j4 = PI * g.eval(br.yc) / (b1 * b1);
    Ok(((j1 * j4 + j2 * j3) / (j1 * j1 + j2 * j2), br.glued()))
}

fn split_panels(a: f64, b: f64, width: f64, order: usize) -> (Vec<f64>, Vec<f64>) {
    let panels = ((b - a) / width).ceil().max(1.0) as usize;
    composite_gl(a, b, panels, order)
}

/// Evaluates `Ψ(t, y)` for every `t` in `times` and `y` in `ys`.
///
/// The simple pole of the kernel at `c*` is removed by subtracting `χ(c - c*)·Im P/(c - c*)`,
/// whose principal value is folded in through `Ψ_χ`.
pub fn psi_representation(
    flow: &ShearFlow,
    omega_in: &Forcing,
    times: &[f64],
    ys: &[f64],
    report: &EigenvalueReport,
    opts: &MarchOptions,
    ropts: &RepresentationOptions,
) -> Result<Representation> {
    if report.multiplicity != Multiplicity::Simple {
        return Err(Error::Hypothesis(
            "representation formula needs a simple embedded eigenvalue; use the associated-function path".into(),
        ));
    }
    let cs = report.c_star;
    let p = projection_coefficient(flow, omega_in, report, opts)?;
    let gamma0 = glue_gamma(flow, cs, ys, opts)?.gamma;

    let (s0, s1) = omega_in.support;
    let c_lo = flow.b(s0 - ropts.margin).min(cs - 2.0);
    let c_hi = flow.b(s1 + ropts.margin).max(cs + 2.0);
    let (mut cn, mut cw) = split_panels(c_lo, cs, ropts.panel, ropts.order);
    let (cn2, cw2) = split_panels(cs, c_hi, ropts.panel, ropts.order);
    cn.extend(cn2);
    cw.extend(cw2);

    let nt = times.len();
    let ny = ys.len();
    let threads = if ropts.threads == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        ropts.threads
    };
    let chunk = cn.len().div_ceil(threads.max(1));
    let partials: Vec<Result<Vec<Vec<Complex64>>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cn
            .chunks(chunk)
            .zip(cw.chunks(chunk))
            .map(|(nodes, weights)| {
                let gamma0 = &gamma0;
                scope.spawn(move || -> Result<Vec<Vec<Complex64>>> {
                    let mut acc = vec![vec![ZERO; ny]; nt];
                    for (&c, &w) in nodes.iter().zip(weights) {
                        let (k, gamma) = node_eval(flow, omega_in, c, ys, opts)?;
                        let d = c - cs;
                        let sub = chi(d) * p.im / d;
                        for (ti, t) in times.iter().enumerate() {
                            let ph = (-I * c * *t).exp() * w;
                            for j in 0..ny {
                                acc[ti][j] += ph * (k * gamma[j] - sub * gamma0[j]);
                            }
                        }
                    }
                    Ok(acc)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("quadrature worker panicked")).collect()
    });
    let mut total = vec![vec![ZERO; ny]; nt];
    for part in partials {
        let part = part?;
        for (tot, pt) in total.iter_mut().zip(part) {
            for (a, b) in tot.iter_mut().zip(pt) {
                *a += b;
            }
        }
    }
    let mut psi = Vec::with_capacity(nt);
    for (ti, t) in times.iter().enumerate() {
        let phase = (-I * cs * *t).exp();
        let pv_pole = p.im * phase * (psi_chi(*t)? - I * PI);
        let row = (0..ny)
            .map(|j| -(total[ti][j] + pv_pole * gamma0[j]) / PI + p.re * phase * gamma0[j])
            .collect();
        psi.push(row);
    }
    Ok(Representation {
        y: ys.to_vec(),
        times: times.to_vec(),
        psi,
        projection: p,
        c_star: cs,
        gamma: gamma0,
        c_range: (c_lo, c_hi),
        nodes: cn.len(),
    })
}

/// Eigenspace part `Ψ₁ = P Γ(·, c*)` and norm histories of the remainder `Ψ₂ = Ψ - Ψ₁`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    pub projection: Complex64,
    pub c_star: f64,
    #[serde(skip)]
    pub psi1: Option<Field>,
    pub times: Vec<f64>,
    pub psi2_l2: Vec<f64>,
    pub psi2_h1: Vec<f64>,
}

impl Decomposition {
    /// Log-log fit of `|Ψ₂|_{L²}` over `t ∈ [t0, t1]`.
    pub fn damping_fit(&self, t0: f64, t1: f64) -> LinearFit {
        self.fit(&self.psi2_l2, t0, t1)
    }

    /// Log-log fit of `|Ψ₂|_{H¹}` over `t ∈ [t0, t1]`.
    pub fn h1_fit(&self, t0: f64, t1: f64) -> LinearFit {
        self.fit(&self.psi2_h1, t0, t1)
    }

    fn fit(&self, v: &[f64], t0: f64, t1: f64) -> LinearFit {
        let (x, y): (Vec<f64>, Vec<f64>) =
            self.times.iter().zip(v).filter(|(t, _)| **t >= t0 * (1.0 - 1e-12) && **t <= t1 * (1.0 + 1e-12)).map(|(t, v)| (*t, *v)).unzip();
        loglog_fit(&x, &y)
    }
}

/// Splits the recorded stream functions of `trace` (snapshots required).
pub fn decompose_psi(
    flow: &ShearFlow,
    omega_in: &Forcing,
    trace: &EvolutionTrace,
    report: &EigenvalueReport,
    opts: &MarchOptions,
) -> Result<Decomposition> {
    if trace.psi.len() != trace.times.len() {
        return Err(config_err("decomposition needs stream-function snapshots at every output time"));
    }
    let grid = trace.psi[0].grid;
    let p = projection_coefficient(flow, omega_in, report, opts)?;
    let cs = report.c_star;
    let gamma = glue_gamma(flow, cs, &grid.nodes(), opts)?.gamma;
    let psi1 = Field::from_real(grid, &gamma).scale(p);
    let mut psi2_l2 = Vec::with_capacity(trace.times.len());
    let mut psi2_h1 = Vec::with_capacity(trace.times.len());
    for (t, psi) in trace.times.iter().zip(&trace.psi) {
        let phase = (-I * cs * *t).exp();
        let r: Vec<Complex64> = psi.values.iter().zip(&psi1.values).map(|(a, b)| a - b * phase).collect();
        psi2_l2.push(l2_norm(&r, grid.h));
        psi2_h1.push(h1_norm(&r, grid.h));
    }
    Ok(Decomposition { projection: p, c_star: cs, psi1: Some(psi1), times: trace.times.clone(), psi2_l2, psi2_h1 })
}
