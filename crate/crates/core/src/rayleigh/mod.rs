//! Solutions of the homogeneous and inhomogeneous Rayleigh equations.
//!
//! Branches are evaluated at arbitrary sample points `y` (usually grid nodes). Each
//! half-line on either side of the critical point is marched outward from `y_c`.

pub mod march;

use crate::error::{nonconv, Error, Result};
use crate::flow::ShearFlow;
use crate::numerics::fit::{log_coefficient, log_extrapolate};
use crate::numerics::ode::Dopri5;
use crate::numerics::quad::integrate;
pub use march::{Forcing, MarchOptions, AT_CRITICAL};
use march::{march_complex_side, march_real_side, side_extent, ComplexSide, RealSide};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Sample points of one half-line, sorted by distance from `y_c`.
struct SideNodes {
    s: Vec<f64>,
    /// `(sample index, node index)`.
    owners: Vec<(usize, usize)>,
}

fn side_nodes(ys: &[f64], yc: f64, sigma: f64) -> SideNodes {
    let mut v: Vec<(f64, usize)> =
        ys.iter().enumerate().filter_map(|(i, y)| {
            let s = sigma * (y - yc);
            (s >= AT_CRITICAL).then_some((s, i))
        }).collect();
    v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut s: Vec<f64> = Vec::with_capacity(v.len());
    let mut owners = Vec::with_capacity(v.len());
    for (sv, i) in v {
        if s.last().map_or(true, |l| sv > *l) {
            s.push(sv);
        }
        owners.push((i, s.len() - 1));
    }
    SideNodes { s, owners }
}

fn side_of(y: f64, yc: f64) -> i8 {
    let x = y - yc;
    if x >= AT_CRITICAL {
        1
    } else if x <= -AT_CRITICAL {
        -1
    } else {
        0
    }
}

/// Real-parameter branch: `φ₁`, `φ = (b - c_r) φ₁` and outward integrals of `1/φ²`.
#[derive(Debug, Clone)]
pub struct RealBranch {
    pub c_r: f64,
    pub yc: f64,
    pub b1: f64,
    pub y: Vec<f64>,
    /// -1, 0 or +1: position relative to `y_c`.
    pub side: Vec<i8>,
    pub phi1: Vec<f64>,
    pub dphi1: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    /// `∫ 1/φ²` from `y` to the infinity on its own side (infinite at `y_c`).
    pub t_out: Vec<f64>,
    /// `∫_{y_c}^{y} g φ₁` when a forcing is attached.
    pub f: Vec<f64>,
    /// Outward integrals of `(b'(y_c) - b')/(b - c_r)²` and `1/φ² - 1/(b - c_r)²`.
    pub q_out: Vec<f64>,
    pub p_out: Vec<f64>,
    pub minus: RealSide,
    pub plus: RealSide,
}

/// Marches the real branch at `c_r` and samples it at `ys`.
pub fn real_branch(flow: &ShearFlow, c_r: f64, ys: &[f64], forcing: Option<&Forcing>, opts: &MarchOptions) -> Result<RealBranch> {
    let yc = flow.invert(c_r);
    real_branch_at(flow, yc, c_r, ys, forcing, opts)
}

fn real_branch_at(
    flow: &ShearFlow,
    yc: f64,
    c_r: f64,
    ys: &[f64],
    forcing: Option<&Forcing>,
    opts: &MarchOptions,
) -> Result<RealBranch> {
    let b1 = flow.d1(yc);
    let n = ys.len();
    let mut br = RealBranch {
        c_r,
        yc,
        b1,
        y: ys.to_vec(),
        side: ys.iter().map(|y| side_of(*y, yc)).collect(),
        phi1: vec![1.0; n],
        dphi1: vec![0.0; n],
        phi: vec![0.0; n],
        dphi: vec![b1; n],
        t_out: vec![f64::INFINITY; n],
        f: vec![0.0; n],
        q_out: vec![0.0; n],
        p_out: vec![0.0; n],
        minus: empty_real(),
        plus: empty_real(),
    };
    for sigma in [-1.0, 1.0] {
        let nodes = side_nodes(ys, yc, sigma);
        let smax = nodes.s.last().copied().unwrap_or(0.0);
        let s_end = side_extent(flow, yc, sigma, smax, forcing);
        let side = march_real_side(flow, yc, sigma, &nodes.s, forcing, s_end, opts)?;
        let t = side.outward_integrals();
        for &(i, k) in &nodes.owners {
            let y = yc + sigma * side.s[k];
            let bb = flow.diff(y, yc);
            let w = side.w[k];
            let v = side.v[k];
            br.phi1[i] = 1.0 + w;
            br.dphi1[i] = v / (bb * bb);
            br.phi[i] = bb * (1.0 + w);
            br.dphi[i] = flow.d1(y) * (1.0 + w) + v / bb;
            br.t_out[i] = t[k];
            br.f[i] = side.f[k];
            br.q_out[i] = side.q_out[k];
            br.p_out[i] = side.p_out[k];
        }
        if sigma < 0.0 {
            br.minus = side;
        } else {
            br.plus = side;
        }
    }
    Ok(br)
}

fn empty_real() -> RealSide {
    RealSide {
        sigma: 0.0,
        s: vec![],
        w: vec![],
        v: vec![],
        inc: vec![],
        tail: 0.0,
        p2: 0.0,
        p3: 0.0,
        f: vec![],
        q_out: vec![],
        p_out: vec![],
        s_end: 0.0,
    }
}

impl RealBranch {
    /// `∫ (1/φ² - 1/(b - c_r)²)` over the real line.
    pub fn pi2(&self) -> f64 {
        self.minus.p2 + self.plus.p2
    }

    /// Principal-value part of the critical-layer integral `∫ F/φ²` (needs a forcing).
    pub fn j3(&self) -> f64 {
        self.minus.p3 + self.plus.p3
    }

    /// Glued decaying solution: `φ⁻` left of `y_c`, `φ⁺` right of it, `-1/b'(y_c)` at `y_c`.
    ///
    /// Uses `∫ 1/φ² = 1/(b'(y_c)|B|) + Q/b'(y_c) + P` with `B = b - c_r`, so that no
    /// singular terms cancel near `y_c`.
    pub fn glued(&self) -> Vec<f64> {
        (0..self.y.len())
            .map(|i| match self.side[i] {
                0 => -1.0 / self.b1,
                _ => {
                    let babs = self.phi[i].abs() / self.phi1[i];
                    -self.phi1[i] / self.b1 - babs * self.phi1[i] * (self.q_out[i] / self.b1 + self.p_out[i])
                }
            })
            .collect()
    }

    /// `∂_y` of [`RealBranch::glued`] (NaN at `y_c`, where only one-sided limits exist).
    pub fn glued_dy(&self, flow: &ShearFlow) -> Vec<f64> {
        (0..self.y.len())
            .map(|i| match self.side[i] {
                0 => f64::NAN,
                s => {
                    let sigma = s as f64;
                    let y = self.y[i];
                    let p = self.phi1[i];
                    let w = p - 1.0;
                    let babs = (self.phi[i] / p).abs();
                    let bp = flow.d1(y);
                    let dp_ds = sigma * self.dphi1[i];
                    let bracket = self.q_out[i] / self.b1 + self.p_out[i];
                    // [1/φ₁ - b'φ₁/b'(y_c)]/|B| written without cancellation.
                    let near = (-flow.d1_diff(y, self.yc) / self.b1 - bp / self.b1 * w * (2.0 + w)) / (p * babs);
                    let d_ds = -dp_ds / self.b1 - (bp * p + babs * dp_ds) * bracket + near;
                    sigma * d_ds
                }
            })
            .collect()
    }

    /// `φ⁺` on the right half-line and `φ⁻` on the left one (NaN on the other side).
    pub fn varphi_pm(&self) -> (Vec<f64>, Vec<f64>) {
        let g = self.glued();
        let plus = (0..g.len()).map(|i| if self.side[i] >= 0 { g[i] } else { f64::NAN }).collect();
        let minus = (0..g.len()).map(|i| if self.side[i] <= 0 { g[i] } else { f64::NAN }).collect();
        (plus, minus)
    }
}

/// `∂²φ₁(y_c)` from symmetric samples of the march (checks the series seed).
pub fn phi1_second_derivative(flow: &ShearFlow, c_r: f64, opts: &MarchOptions) -> Result<f64> {
    let yc = flow.invert(c_r);
    let ss = [2e-3, 4e-3];
    let ys: Vec<f64> = ss.iter().flat_map(|s| [yc - s, yc + s]).collect();
    let br = real_branch_at(flow, yc, c_r, &ys, None, opts)?;
    // (φ₁(s) + φ₁(-s) - 2)/s² = φ₁'' + O(s²); one Richardson step removes the O(s²) term.
    let est: Vec<f64> = ss
        .iter()
        .enumerate()
        .map(|(k, s)| (br.phi1[2 * k] + br.phi1[2 * k + 1] - 2.0) / (s * s))
        .collect();
    Ok((4.0 * est[0] - est[1]) / 3.0)
}

/// `φ₁` on the sample points.
pub fn solve_phi1(flow: &ShearFlow, c_r: f64, ys: &[f64], opts: &MarchOptions) -> Result<Vec<f64>> {
    Ok(real_branch(flow, c_r, ys, None, opts)?.phi1)
}

/// Complex-parameter branch with the integrals needed by the resolvent.
#[derive(Debug, Clone)]
pub struct ComplexBranch {
    pub c: Complex64,
    pub yc: f64,
    pub b1: f64,
    pub y: Vec<f64>,
    pub side: Vec<i8>,
    pub phi: Vec<Complex64>,
    pub dphi: Vec<Complex64>,
    /// `∫_{y_c}^{y} g φ/(b - c)`.
    pub f: Vec<Complex64>,
    /// `∫_{-∞}^{y} 1/φ²` and `∫_{y}^{∞} 1/φ²`.
    pub t_left: Vec<Complex64>,
    pub t_right: Vec<Complex64>,
    /// Same with the numerator `F`.
    pub i_left: Vec<Complex64>,
    pub i_right: Vec<Complex64>,
    /// Wronskian `∫ 1/φ²`.
    pub w: Complex64,
    /// `∫ F/φ²` over the real line.
    pub jstar: Complex64,
    pub minus: ComplexSide,
    pub plus: ComplexSide,
}

pub fn complex_branch(
    flow: &ShearFlow,
    c: Complex64,
    ys: &[f64],
    forcing: Option<&Forcing>,
    opts: &MarchOptions,
) -> Result<ComplexBranch> {
    if c.im == 0.0 {
        return Err(Error::Config("complex branch needs a non-real spectral parameter".into()));
    }
    let yc = flow.invert(c.re);
    let b1 = flow.d1(yc);
    let n = ys.len();
    let z = Complex64::new(0.0, 0.0);
    let mut sides: Vec<(SideNodes, ComplexSide)> = Vec::new();
    for sigma in [-1.0, 1.0] {
        let nodes = side_nodes(ys, yc, sigma);
        let smax = nodes.s.last().copied().unwrap_or(0.0);
        let s_end = side_extent(flow, yc, sigma, smax, forcing);
        let side = march_complex_side(flow, yc, c.im, sigma, &nodes.s, forcing, s_end, opts)?;
        sides.push((nodes, side));
    }
    let w = sides[0].1.total_t + sides[1].1.total_t;
    let jstar = sides[0].1.total_i + sides[1].1.total_i;
    let mut br = ComplexBranch {
        c,
        yc,
        b1,
        y: ys.to_vec(),
        side: ys.iter().map(|y| side_of(*y, yc)).collect(),
        phi: vec![Complex64::new(0.0, -c.im); n],
        dphi: vec![Complex64::new(b1, 0.0); n],
        f: vec![z; n],
        t_left: vec![sides[0].1.total_t; n],
        t_right: vec![sides[1].1.total_t; n],
        i_left: vec![sides[0].1.total_i; n],
        i_right: vec![sides[1].1.total_i; n],
        w,
        jstar,
        minus: sides[0].1.clone(),
        plus: sides[1].1.clone(),
    };
    for (nodes, side) in &sides {
        let (t, ii) = side.outward();
        for &(i, k) in &nodes.owners {
            br.phi[i] = side.phi[k];
            br.dphi[i] = side.dphi[k];
            br.f[i] = side.f[k];
            if side.sigma < 0.0 {
                br.t_left[i] = t[k];
                br.t_right[i] = w - t[k];
                br.i_left[i] = ii[k];
                br.i_right[i] = jstar - ii[k];
            } else {
                br.t_right[i] = t[k];
                br.t_left[i] = w - t[k];
                br.i_right[i] = ii[k];
                br.i_left[i] = jstar - ii[k];
            }
        }
    }
    Ok(br)
}

impl ComplexBranch {
    /// `(φ⁺, φ⁻)` with `φ^± = φ ∫_{±∞}^{y} 1/φ²`.
    pub fn varphi_pm(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let plus = self.phi.iter().zip(&self.t_right).map(|(p, t)| -p * t).collect();
        let minus = self.phi.iter().zip(&self.t_left).map(|(p, t)| p * t).collect();
        (plus, minus)
    }

    /// `φ₁(y, c) = φ/(b - c)`.
    pub fn phi1_complex(&self, flow: &ShearFlow) -> Vec<Complex64> {
        self.y
            .iter()
            .zip(&self.phi)
            .map(|(y, p)| {
                let bc = Complex64::new(flow.diff(*y, self.yc), -self.c.im);
                p / bc
            })
            .collect()
    }
}

/// `φ₂ = φ / ((b - c) φ₁(·, c_r))`; identically one for real `c`.
pub fn solve_phi2(flow: &ShearFlow, c: Complex64, ys: &[f64], opts: &MarchOptions) -> Result<Vec<Complex64>> {
    if c.im == 0.0 {
        return Ok(vec![Complex64::new(1.0, 0.0); ys.len()]);
    }
    let cb = complex_branch(flow, c, ys, None, opts)?;
    let rb = real_branch_at(flow, cb.yc, c.re, ys, None, opts)?;
    let p1 = cb.phi1_complex(flow);
    Ok(p1.iter().zip(&rb.phi1).map(|(a, b)| a / b).collect())
}

/// Decaying solutions `φ^±` at a non-real parameter, sampled at `ys`.
pub fn varphi_pm(flow: &ShearFlow, c: Complex64, ys: &[f64], opts: &MarchOptions) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    Ok(complex_branch(flow, c, ys, None, opts)?.varphi_pm())
}

/// Determinant `φ⁻ ∂φ⁺ - φ⁺ ∂φ⁻` at the probes, from inward shooting of the decaying solutions.
///
/// The decaying solutions are started as pure exponentials where `b'' = 0` and
/// integrated toward the probes; their normalization uses the far-field amplitude of
/// the regular solution. No quadrature of `1/φ²` is involved.
pub fn wronskian_determinant(flow: &ShearFlow, c: Complex64, probes: &[f64], opts: &MarchOptions) -> Result<Vec<Complex64>> {
    let br = complex_branch(flow, c, probes, None, opts)?;
    let yc = br.yc;
    let a_r = (br.plus.phi_end + br.plus.dphi_end) * 0.5;
    let a_l = (br.minus.phi_end - br.minus.dphi_end) * 0.5;
    let y_r = yc + br.plus.s_end;
    let y_l = yc - br.minus.s_end;
    let up = shoot_inward(flow, c, y_r, 1.0, probes, opts)?;
    let um = shoot_inward(flow, c, y_l, -1.0, probes, opts)?;
    let k = -(a_l * a_r * 4.0).inv();
    Ok(up.iter().zip(&um).map(|(p, m)| (m.0 * p.1 - p.0 * m.1) * k).collect())
}

/// Solution decaying toward `σ∞`, equal to `exp(-σ(y - y_far))` at `y_far`, sampled at the probes.
fn shoot_inward(
    flow: &ShearFlow,
    c: Complex64,
    y_far: f64,
    sigma: f64,
    probes: &[f64],
    opts: &MarchOptions,
) -> Result<Vec<(Complex64, Complex64)>> {
    let mut order: Vec<usize> = (0..probes.len()).collect();
    order.sort_by(|a, b| (sigma * (y_far - probes[*a])).partial_cmp(&(sigma * (y_far - probes[*b]))).unwrap());
    let mut out = vec![(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); probes.len()];
    let mut st = [1.0, 0.0, -sigma, 0.0];
    let mut f = |tau: f64, u: &[f64], du: &mut [f64]| {
        let y = y_far - sigma * tau;
        let bc = Complex64::new(flow.b(y), 0.0) - c;
        let phi = Complex64::new(u[0], u[1]);
        let dd = phi + phi * flow.d2(y) / bc;
        du[0] = -sigma * u[2];
        du[1] = -sigma * u[3];
        du[2] = -sigma * dd.re;
        du[3] = -sigma * dd.im;
    };
    let mut solver = Dopri5::new(4, opts.rtol, vec![1e-300; 4], 1e-3);
    let mut t = 0.0;
    for k in order {
        let tau = sigma * (y_far - probes[k]);
        if tau < 0.0 {
            return Err(Error::Config("probe lies beyond the shooting start".into()));
        }
        solver.advance(&mut f, &mut t, &mut st, tau)?;
        out[k] = (Complex64::new(st[0], st[1]), Complex64::new(st[2], st[3]));
    }
    Ok(out)
}

/// Glued eigenfunction candidate `Γ(·, c*)` with its matching diagnostics at `y_c`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GluedEigenfunction {
    pub c_star: f64,
    pub yc: f64,
    pub b1: f64,
    pub y: Vec<f64>,
    pub gamma: Vec<f64>,
    pub dgamma: Vec<f64>,
    /// `(∂² - 1)Γ = b''Γ/(b - c*)`.
    pub omega_star: Vec<f64>,
    /// Extrapolated one-sided limits of `Γ` at `y_c`.
    pub limit_minus: f64,
    pub limit_plus: f64,
    /// `lim [∂_yΓ(y_c + s) - ∂_yΓ(y_c - s)]`.
    pub deriv_jump: f64,
    /// Coefficient of `ln|y - y_c|` in `∂_yΓ` (vanishes iff `b''(y_c) = 0`).
    pub log_coefficient: f64,
    /// `b' · |J₁ - i J₂|` measured from the two previous quantities.
    pub mismatch: f64,
}

fn probe_offsets(s1: f64, k: usize) -> Vec<f64> {
    (1..=k).map(|j| s1 * j as f64).collect()
}

/// Builds `Γ = φ^∓` on either side of `y_c = b⁻¹(c*)` and measures the derivative mismatch.
pub fn glue_gamma(flow: &ShearFlow, c_star: f64, ys: &[f64], opts: &MarchOptions) -> Result<GluedEigenfunction> {
    let yc = flow.invert(c_star);
    let probes = probe_offsets(2e-3, 12);
    let mut all: Vec<f64> = ys.to_vec();
    for s in &probes {
        all.push(yc - s);
        all.push(yc + s);
    }
    let br = real_branch_at(flow, yc, c_star, &all, None, opts)?;
    let g = br.glued();
    let dg = br.glued_dy(flow);
    let n = ys.len();
    let mut vm = Vec::new();
    let mut vp = Vec::new();
    let mut diff = Vec::new();
    let mut mean = Vec::new();
    for k in 0..probes.len() {
        let (im, ip) = (n + 2 * k, n + 2 * k + 1);
        vm.push(g[im]);
        vp.push(g[ip]);
        diff.push(dg[ip] - dg[im]);
        mean.push(0.5 * (dg[ip] + dg[im]));
    }
    let b1 = br.b1;
    let logs = has_log_terms(flow, yc, false);
    let deriv_jump = log_extrapolate(&probes, &diff, logs);
    let log_coefficient = if logs { log_coefficient(&probes, &mean) } else { 0.0 };
    let omega_star = (0..n)
        .map(|i| {
            let y = ys[i];
            flow.potential(y, yc) * g[i]
        })
        .collect();
    // ∂_yΓ ≈ -(b''/b'²) ln|y - y_c| + ...; b''(y_c)/b'³ · π = J₂.
    let j2_times_b1 = -log_coefficient * PI;
    let mismatch = (deriv_jump * deriv_jump + j2_times_b1 * j2_times_b1).sqrt();
    Ok(GluedEigenfunction {
        c_star,
        yc,
        b1,
        y: ys.to_vec(),
        gamma: g[..n].to_vec(),
        dgamma: dg[..n].to_vec(),
        omega_star,
        limit_minus: log_extrapolate(&probes, &vm, logs),
        limit_plus: log_extrapolate(&probes, &vp, logs),
        deriv_jump,
        log_coefficient,
        mismatch,
    })
}

/// `∂_{c_r}Γ` by Richardson-extrapolated central differences in the spectral parameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaCDerivative {
    pub c_star: f64,
    pub yc: f64,
    pub y: Vec<f64>,
    pub values: Vec<f64>,
    pub dy_values: Vec<f64>,
    pub delta: f64,
    /// One-sided limits at `y_c` of `∂_cφ^∓` and `∂_y∂_cφ^∓`.
    pub value_minus: f64,
    pub value_plus: f64,
    pub deriv_minus: f64,
    pub deriv_plus: f64,
    /// `value_minus - value_plus`.
    pub jump_value: f64,
    /// `lim [∂_y∂_cΓ(y_c - s) - ∂_y∂_cΓ(y_c + s)]`.
    pub jump_deriv: f64,
    /// Coefficient of `ln|y - y_c|` in `∂_y∂_cΓ` (vanishes iff `b'''(y_c) = 0` at an eigenvalue).
    pub log_coefficient: f64,
    /// `hypot(jump_deriv, π log_coefficient)`, of size `b' |∂J₁ - i∂J₂|`.
    pub deriv_mismatch: f64,
}

fn sub_log(v: &[f64], s: &[f64], l: f64) -> Vec<f64> {
    v.iter().zip(s).map(|(a, x)| a - l * (x.ln() + 1.0)).collect()
}

/// Whether one-sided expansions at `y_c` carry logarithms (`b''(y_c) ≠ 0`, or `b'''(y_c) ≠ 0` for `c`-derivatives).
fn has_log_terms(flow: &ShearFlow, yc: f64, c_derivative: bool) -> bool {
    let d = flow.derivs(yc);
    d[2].abs() > 1e-12 || (c_derivative && d[3].abs() > 1e-12)
}

/// Explicit one-sided limits at `y_c` from half-line integrals (independent of the differences).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExplicitLimits {
    pub value_minus: f64,
    pub value_plus: f64,
    pub pi1_minus: f64,
    pub pi1_plus: f64,
    pub pi2_minus: f64,
    pub pi2_plus: f64,
}

fn glued_at(flow: &ShearFlow, c: f64, ys: &[f64], opts: &MarchOptions) -> Result<(Vec<f64>, Vec<f64>, Vec<i8>)> {
    let br = real_branch(flow, c, ys, None, opts)?;
    Ok((br.glued(), br.glued_dy(flow), br.side))
}

/// Central difference in `c` of the glued branches, one Richardson step (error O(δ⁴)).
fn c_difference(flow: &ShearFlow, c: f64, delta: f64, ys: &[f64], opts: &MarchOptions) -> Result<(Vec<f64>, Vec<f64>)> {
    let yc = flow.invert(c);
    let base: Vec<i8> = ys.iter().map(|y| side_of(*y, yc)).collect();
    let mut d = Vec::new();
    for h in [delta, 0.5 * delta] {
        let (gp, dgp, sp) = glued_at(flow, c + h, ys, opts)?;
        let (gm, dgm, sm) = glued_at(flow, c - h, ys, opts)?;
        for k in 0..ys.len() {
            if base[k] != 0 && (sp[k] != base[k] || sm[k] != base[k]) {
                return Err(nonconv("finite-difference step moves the critical point across a sample"));
            }
        }
        let v: Vec<f64> = gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        let dv: Vec<f64> = dgp.iter().zip(&dgm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        d.push((v, dv));
    }
    let rich = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| (4.0 * y - x) / 3.0).collect() };
    Ok((rich(&d[0].0, &d[1].0), rich(&d[0].1, &d[1].1)))
}

/// `∂_{c_r}Γ(·, c*)` on the sample points, with matching diagnostics at `y_c`.
///
/// Samples closer to `y_c` than [`AT_CRITICAL`] take the mean of the one-sided limits.
pub fn gamma_c_derivative(flow: &ShearFlow, c_star: f64, ys: &[f64], opts: &MarchOptions) -> Result<GammaCDerivative> {
    let yc = flow.invert(c_star);
    let b1 = flow.d1(yc);
    let dmin = ys.iter().map(|y| (y - yc).abs()).filter(|d| *d >= AT_CRITICAL).fold(f64::INFINITY, f64::min);
    let delta = (0.4 * b1 * dmin).min(0.02);
    let (mut values, mut dy_values) = c_difference(flow, c_star, delta, ys, opts)?;

    let probes = probe_offsets(4e-3, 12);
    // The step scales with the probe offset, so the difference error shares the
    // expansion in s that the extrapolation removes.
    let mut pv = Vec::with_capacity(2 * probes.len());
    let mut pdv = Vec::with_capacity(2 * probes.len());
    for s in &probes {
        let (v, dv) = c_difference(flow, c_star, 0.25 * b1 * s, &[yc - s, yc + s], opts)?;
        pv.extend(v);
        pdv.extend(dv);
    }
    let take = |v: &[f64], off: usize| -> Vec<f64> { (0..probes.len()).map(|k| v[2 * k + off]).collect() };
    let logs = has_log_terms(flow, yc, true);
    let value_minus = log_extrapolate(&probes, &take(&pv, 0), logs);
    let value_plus = log_extrapolate(&probes, &take(&pv, 1), logs);
    let dd: Vec<f64> = (0..probes.len()).map(|k| pdv[2 * k] - pdv[2 * k + 1]).collect();
    let jump_deriv = log_extrapolate(&probes, &dd, logs);
    let mean: Vec<f64> = (0..probes.len()).map(|k| 0.5 * (pdv[2 * k] + pdv[2 * k + 1])).collect();
    let log_coefficient = if logs { log_coefficient(&probes, &mean) } else { 0.0 };
    // One-sided slopes diverge like L ln s when L ≠ 0; the finite parts are reported.
    let deriv_minus = log_extrapolate(&probes, &sub_log(&take(&pdv, 0), &probes, log_coefficient), logs);
    let deriv_plus = log_extrapolate(&probes, &sub_log(&take(&pdv, 1), &probes, log_coefficient), logs);
    let deriv_mismatch = (jump_deriv * jump_deriv + (PI * log_coefficient).powi(2)).sqrt();
    for (i, y) in ys.iter().enumerate() {
        if side_of(*y, yc) == 0 {
            values[i] = 0.5 * (value_minus + value_plus);
            dy_values[i] = 0.5 * (deriv_minus + deriv_plus);
        }
    }
    Ok(GammaCDerivative {
        c_star,
        yc,
        y: ys.to_vec(),
        values,
        dy_values,
        delta,
        value_minus,
        value_plus,
        deriv_minus,
        deriv_plus,
        jump_value: value_minus - value_plus,
        jump_deriv,
        log_coefficient,
        deriv_mismatch,
    })
}

/// `∫` over one half-line of `(b'(y_c) - b'(y))/(b - c_r)²`; finite only when `b''(y_c) = 0`.
pub fn half_line_pi1(flow: &ShearFlow, yc: f64, sigma: f64) -> Result<f64> {
    let b1 = flow.d1(yc);
    let s_end = side_extent(flow, yc, sigma, 0.0, None);
    let f = |s: f64| {
        let y = yc + sigma * s;
        let bb = flow.diff(y, yc);
        -flow.d1_diff(y, yc) / (bb * bb)
    };
    let mut total = 0.0;
    let mut a = 0.0;
    for b in [0.5, 2.0, s_end] {
        if b > a {
            total += integrate(f, a, b, 1e-14, 1e-12, 4000)?;
            a = b;
        }
    }
    let y_end = yc + sigma * s_end;
    let be = flow.d1(y_end);
    total += (b1 - be) / (be * flow.diff(y_end, yc).abs());
    Ok(total)
}

/// One-sided limits of `∂_cφ^∓` at `y_c` from half-line integrals.
pub fn explicit_limits(flow: &ShearFlow, c_star: f64, opts: &MarchOptions) -> Result<ExplicitLimits> {
    let br = real_branch(flow, c_star, &[], None, opts)?;
    let b1 = br.b1;
    let pi1_minus = half_line_pi1(flow, br.yc, -1.0)?;
    let pi1_plus = half_line_pi1(flow, br.yc, 1.0)?;
    let pi2_minus = br.minus.p2;
    let pi2_plus = br.plus.p2;
    Ok(ExplicitLimits {
        value_minus: -pi1_minus / b1 - pi2_minus,
        value_plus: pi1_plus / b1 + pi2_plus,
        pi1_minus,
        pi1_plus,
        pi2_minus,
        pi2_plus,
    })
}

/// Solution of the forced Rayleigh equation at a non-real parameter.
#[derive(Debug, Clone)]
pub struct InhomogeneousSolution {
    pub c: Complex64,
    pub y: Vec<f64>,
    /// Left representation `Φ_{i,l} - μ Φ_{h,l}`.
    pub phi_left: Vec<Complex64>,
    /// Right representation `Φ_{i,r} - μ Φ_{h,r}`.
    pub phi_right: Vec<Complex64>,
    /// Combined solution: left formula left of `y_c`, right formula right of it.
    pub phi: Vec<Complex64>,
    pub mu: Complex64,
    pub jstar: Complex64,
    pub wronskian: Complex64,
}

impl InhomogeneousSolution {
    /// Resolvent action `(c - L)^{-1}Ψ_in = iΦ`.
    pub fn resolvent(&self) -> Vec<Complex64> {
        self.phi.iter().map(|p| I * p).collect()
    }
}

/// Solves `Φ'' - Φ - b''Φ/(b - c) = i g/(b - c)` with decay at both ends.
pub fn solve_inhomogeneous(
    flow: &ShearFlow,
    c: Complex64,
    forcing: &Forcing,
    ys: &[f64],
    opts: &MarchOptions,
) -> Result<InhomogeneousSolution> {
    let br = complex_branch(flow, c, ys, Some(forcing), opts)?;
    if br.w.norm() < 1e-12 {
        return Err(Error::Hypothesis(format!("Wronskian {:e} vanishes: resolvent ill-conditioned at c = {c}", br.w.norm())));
    }
    let mu = br.jstar / br.w;
    let n = ys.len();
    let mut left = vec![Complex64::new(0.0, 0.0); n];
    let mut right = left.clone();
    let mut phi = left.clone();
    for i in 0..n {
        left[i] = I * br.phi[i] * (br.i_left[i] - mu * br.t_left[i]);
        right[i] = -I * br.phi[i] * (br.i_right[i] - mu * br.t_right[i]);
        phi[i] = if br.side[i] <= 0 { left[i] } else { right[i] };
    }
    Ok(InhomogeneousSolution { c, y: ys.to_vec(), phi_left: left, phi_right: right, phi, mu, jstar: br.jstar, wronskian: br.w })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ys(l: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| -l + 2.0 * l * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn couette_phi1_is_sinh_ratio() {
        let f = ShearFlow::couette();
        let y = ys(4.0, 41);
        let br = real_branch(&f, 0.3, &y, None, &MarchOptions::default()).unwrap();
        for (i, yy) in y.iter().enumerate() {
            let s = yy - 0.3;
            let e = if s.abs() < 1e-12 { 1.0 } else { s.sinh() / s };
            assert!((br.phi1[i] - e).abs() < 1e-9 * e, "y={yy}: {} vs {e}", br.phi1[i]);
        }
        assert!((br.pi2() + 2.0).abs() < 1e-9, "pi2 = {}", br.pi2());
    }

    #[test]
    fn couette_glued_is_exponential() {
        let f = ShearFlow::couette();
        let y = ys(5.0, 51);
        let g = glue_gamma(&f, 0.0, &y, &MarchOptions::default()).unwrap();
        for (i, yy) in y.iter().enumerate() {
            assert!((g.gamma[i] + (-yy.abs()).exp()).abs() < 1e-9, "y={yy}");
        }
        assert!((g.deriv_jump - 2.0).abs() < 1e-6, "jump {}", g.deriv_jump);
        assert!(g.log_coefficient.abs() < 1e-6);
    }

    #[test]
    fn couette_wronskian_closed_form() {
        let f = ShearFlow::couette();
        for eps in [0.5, 0.1, 0.01] {
            let c = Complex64::new(0.2, eps);
            let br = complex_branch(&f, c, &[], None, &MarchOptions::default()).unwrap();
            let e = -2.0 / (1.0 + eps * eps);
            assert!((br.w - e).norm() < 1e-8, "eps={eps}: {}", br.w);
            let det = wronskian_determinant(&f, c, &[-1.0, 0.2, 1.5], &MarchOptions::default()).unwrap();
            for d in det {
                assert!((d - br.w).norm() < 1e-8, "det {d} vs {}", br.w);
            }
        }
    }

    #[test]
    fn couette_c_derivative_limits() {
        let f = ShearFlow::couette();
        let y = ys(3.0, 31);
        let d = gamma_c_derivative(&f, 0.0, &y, &MarchOptions::default()).unwrap();
        assert!((d.value_minus - 1.0).abs() < 1e-6 && (d.value_plus + 1.0).abs() < 1e-6, "{d:?}");
        assert!((d.jump_value - 2.0).abs() < 1e-6);
        assert!(d.jump_deriv.abs() < 1e-5);
        let e = explicit_limits(&f, 0.0, &MarchOptions::default()).unwrap();
        assert!((e.value_minus - 1.0).abs() < 1e-8 && (e.value_plus + 1.0).abs() < 1e-8, "{e:?}");
    }
}
