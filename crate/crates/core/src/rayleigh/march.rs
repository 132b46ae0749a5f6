//! Outward marches of the Rayleigh equation from the critical point.
//!
//! Each half-line `y = y_c + σ s`, `s > 0`, is integrated separately. Integrals of
//! `1/φ²` are accumulated per node interval and rescaled by the value at the left
//! node, so that outward tail sums never cancel.

use crate::error::Result;
use crate::flow::ShearFlow;
use crate::numerics::ode::Dopri5;
use crate::numerics::quad::gauss_legendre;
use num_complex::Complex64;
use std::sync::Arc;

/// Real source term `g(y)` with a bounded support and optional kinks.
#[derive(Clone)]
pub struct Forcing {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub support: (f64, f64),
    pub breakpoints: Vec<f64>,
}

impl std::fmt::Debug for Forcing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Forcing").field("support", &self.support).field("breakpoints", &self.breakpoints).finish()
    }
}

impl Forcing {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, support: (f64, f64), breakpoints: Vec<f64>) -> Self {
        Self { f: Arc::new(f), support, breakpoints }
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0, (0.0, 0.0), Vec::new())
    }

    #[inline]
    pub fn eval(&self, y: f64) -> f64 {
        if y < self.support.0 || y > self.support.1 {
            0.0
        } else {
            (self.f)(y)
        }
    }

    pub fn scaled(&self, a: f64) -> Forcing {
        let f = self.f.clone();
        Forcing { f: Arc::new(move |y| a * f(y)), support: self.support, breakpoints: self.breakpoints.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct MarchOptions {
    pub rtol: f64,
    /// Start offset of the real march (series seed and Gauss–Legendre integrals below it).
    pub s0: f64,
    /// Half-width of the symmetric pole-subtraction window.
    pub pv_window: f64,
}

impl Default for MarchOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, s0: 5e-4, pv_window: 0.5 }
    }
}

/// Offsets closer than this to `y_c` are treated as the critical point itself.
pub const AT_CRITICAL: f64 = 1e-7;

/// Minimal outward extent so that the free-solution tail model applies.
pub fn side_extent(flow: &ShearFlow, yc: f64, sigma: f64, nodes_max: f64, forcing: Option<&Forcing>) -> f64 {
    let edge = sigma * flow.window;
    let mut s = (edge - yc) * sigma;
    if let Some(g) = forcing {
        let far = if sigma > 0.0 { g.support.1 } else { g.support.0 };
        s = s.max((far - yc) * sigma);
    }
    s.max(nodes_max).max(1.0) + 0.25
}

/// Result of one real half-line march.
#[derive(Debug, Clone)]
pub struct RealSide {
    pub sigma: f64,
    pub s: Vec<f64>,
    /// `φ₁ - 1` at the nodes.
    pub w: Vec<f64>,
    /// `(b - c_r)² φ₁'` at the nodes.
    pub v: Vec<f64>,
    /// `∫ 1/φ²` from node k to node k+1 (last entry: to the march end).
    pub inc: Vec<f64>,
    /// `∫ 1/φ²` beyond the march end.
    pub tail: f64,
    /// `∫ (1/φ² - 1/B²)` over the whole half-line.
    pub p2: f64,
    /// Regularized half-line contribution to the critical-layer integral of `F/φ²`.
    pub p3: f64,
    /// `F = ∫_{y_c}^{y} g φ₁` at the nodes.
    pub f: Vec<f64>,
    /// Outward integrals of `(b'(y_c) - b')/B²` and `1/φ² - 1/B²` from each node.
    pub q_out: Vec<f64>,
    pub p_out: Vec<f64>,
    pub s_end: f64,
}

impl RealSide {
    /// `∫ 1/φ²` from node k outward to infinity.
    pub fn outward_integrals(&self) -> Vec<f64> {
        let n = self.s.len();
        let mut t = vec![0.0; n];
        let mut acc = self.tail;
        for k in (0..n).rev() {
            acc += self.inc[k];
            t[k] = acc;
        }
        t
    }
}

/// Series seed of `φ₁` about `y_c`: returns `(φ₁ - 1, φ₁')` at offset `x = y - y_c`.
pub fn phi1_seed(d: &[f64; 5], x: f64) -> (f64, f64) {
    let b1 = d[1];
    let beta1 = d[2] / (2.0 * b1);
    let beta2 = d[3] / (6.0 * b1);
    let a2 = 1.0 / 6.0;
    let a3 = -beta1 / 18.0;
    let a4 = (1.0 / 6.0 + beta1 * beta1 - 4.0 / 3.0 * beta2) / 20.0;
    let w = x * x * (a2 + x * (a3 + x * a4));
    let dw = x * (2.0 * a2 + x * (3.0 * a3 + x * 4.0 * a4));
    (w, dw)
}

enum Stop {
    Node(usize),
    Aux,
}

fn stops(s_nodes: &[f64], aux: &[f64], s_end: f64, s_start: f64) -> Vec<(f64, Stop)> {
    let mut v: Vec<(f64, Stop)> = s_nodes.iter().enumerate().map(|(k, s)| (*s, Stop::Node(k))).collect();
    for a in aux {
        if *a > s_start && *a < s_end {
            v.push((*a, Stop::Aux));
        }
    }
    v.push((s_end, Stop::Aux));
    v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    v
}

fn forcing_aux(forcing: Option<&Forcing>, yc: f64, sigma: f64) -> Vec<f64> {
    let mut aux = Vec::new();
    if let Some(g) = forcing {
        for y in g.breakpoints.iter().chain([g.support.0, g.support.1].iter()) {
            let s = (y - yc) * sigma;
            if s > 0.0 {
                aux.push(s);
            }
        }
    }
    aux
}

/// Marches `φ₁` (real spectral parameter) outward along one half-line.
///
/// `s_nodes` must be increasing and larger than [`AT_CRITICAL`].
pub fn march_real_side(
    flow: &ShearFlow,
    yc: f64,
    sigma: f64,
    s_nodes: &[f64],
    forcing: Option<&Forcing>,
    s_end: f64,
    opts: &MarchOptions,
) -> Result<RealSide> {
    let d = flow.derivs(yc);
    let b1 = d[1];
    let g0 = forcing.map(|g| g.eval(yc)).unwrap_or(0.0);
    let a = opts.pv_window;
    let s0 = opts.s0.min(0.5 * s_nodes.first().copied().unwrap_or(1.0));

    // state: w, v, p2, r, F, p3, q
    let mut st = [0.0f64; 7];
    let x0 = sigma * s0;
    let (w0, dw0) = phi1_seed(&d, x0);
    let bb0 = flow.diff(yc + x0, yc);
    st[0] = w0;
    st[1] = bb0 * bb0 * dw0;
    let (gx, gw) = gauss_legendre(10);
    let seed_phi1 = |u: f64| 1.0 + phi1_seed(&d, sigma * u).0;
    let seed_f = |u: f64| -> f64 {
        match forcing {
            Some(g) => gx.iter().zip(&gw).map(|(x, w)| {
                let v = 0.5 * u * (x + 1.0);
                0.5 * u * w * sigma * g.eval(yc + sigma * v) * seed_phi1(v)
            }).sum(),
            None => 0.0,
        }
    };
    for (x, w) in gx.iter().zip(&gw) {
        let u = 0.5 * s0 * (x + 1.0);
        let wt = 0.5 * s0 * w;
        let p = seed_phi1(u);
        let bb = flow.diff(yc + sigma * u, yc);
        let inv = 1.0 / (bb * bb * p * p);
        st[2] += wt * -(p - 1.0) * (p + 1.0) * inv;
        if forcing.is_some() {
            st[5] += wt * (seed_f(u) * inv - sigma * g0 / (b1 * b1 * u));
        }
    }
    st[4] = seed_f(s0);

    let mut rhs = RealRhs { flow, yc, sigma, forcing, g0, b1, a, scale: 0.0, active: false };
    // φ₁ = 1 + w needs absolute accuracy; a v error feeds w through ∫ δv/B².
    let atol = vec![1e-17, 1e-20 * b1 * b1 * s0, 1e-15, 1e-300, 1e-16, 1e-14, 1e-15];
    let mut solver = Dopri5::new(7, opts.rtol, atol, 0.1 * s0);
    let mut aux = forcing_aux(forcing, yc, sigma);
    if forcing.is_some() {
        aux.push(a);
    }
    let plan = stops(s_nodes, &aux, s_end, s0);
    let n = s_nodes.len();
    let mut out = RealSide {
        sigma,
        s: s_nodes.to_vec(),
        w: vec![0.0; n],
        v: vec![0.0; n],
        inc: vec![0.0; n],
        tail: 0.0,
        p2: 0.0,
        p3: 0.0,
        f: vec![0.0; n],
        q_out: vec![0.0; n],
        p_out: vec![0.0; n],
        s_end,
    };
    let mut t = s0;
    let mut last_node: Option<usize> = None;
    for (sp, kind) in plan {
        {
            let r = &rhs;
            let mut f = |s: f64, u: &[f64], du: &mut [f64]| r.eval(s, u, du);
            solver.advance(&mut f, &mut t, &mut st, sp)?;
        }
        match kind {
            Stop::Node(k) => {
                out.w[k] = st[0];
                out.v[k] = st[1];
                out.f[k] = st[4];
                out.q_out[k] = st[6];
                out.p_out[k] = st[2];
                if let Some(j) = last_node {
                    out.inc[j] = st[3] / rhs.scale;
                }
                let bb = flow.diff(yc + sigma * sp, yc);
                let phi = bb * (1.0 + st[0]);
                rhs.scale = phi * phi;
                rhs.active = true;
                st[3] = 0.0;
                last_node = Some(k);
                solver.invalidate();
            }
            Stop::Aux => solver.invalidate(),
        }
    }
    if let Some(j) = last_node {
        out.inc[j] = st[3] / rhs.scale;
    }
    // Free-solution tail beyond the march end.
    let y_end = yc + sigma * s_end;
    let bb = flow.diff(y_end, yc);
    let b1e = flow.d1(y_end);
    let phi = bb * (1.0 + st[0]);
    let dphi = b1e * (1.0 + st[0]) + st[1] / bb;
    let amp = 0.5 * (phi + sigma * dphi);
    let tail = 1.0 / (2.0 * amp * phi);
    let slope_inf = flow.end_slope(sigma);
    out.tail = tail;
    let p_tail = tail - 1.0 / (slope_inf * bb.abs());
    let q_tail = (b1 - slope_inf) / (slope_inf * bb.abs());
    for k in 0..n {
        out.p_out[k] = st[2] - out.p_out[k] + p_tail;
        out.q_out[k] = st[6] - out.q_out[k] + q_tail;
    }
    out.p2 = st[2] + p_tail;
    out.p3 = st[5] + st[4] * tail;
    Ok(out)
}

struct RealRhs<'a> {
    flow: &'a ShearFlow,
    yc: f64,
    sigma: f64,
    forcing: Option<&'a Forcing>,
    g0: f64,
    b1: f64,
    a: f64,
    scale: f64,
    active: bool,
}

impl RealRhs<'_> {
    #[inline]
    fn eval(&self, s: f64, u: &[f64], du: &mut [f64]) {
        let sigma = self.sigma;
        let y = self.yc + sigma * s;
        let bb = self.flow.diff(y, self.yc);
        let b2 = bb * bb;
        let p = 1.0 + u[0];
        du[0] = sigma * u[1] / b2;
        du[1] = sigma * b2 * p;
        let inv = 1.0 / (b2 * p * p);
        du[2] = -u[0] * (2.0 + u[0]) * inv;
        du[6] = -self.flow.d1_diff(y, self.yc) / b2;
        du[3] = if self.active { self.scale * inv } else { 0.0 };
        match self.forcing {
            Some(g) => {
                du[4] = sigma * g.eval(y) * p;
                du[5] = u[4] * inv - if s < self.a { sigma * self.g0 / (self.b1 * self.b1 * s) } else { 0.0 };
            }
            None => {
                du[4] = 0.0;
                du[5] = 0.0;
            }
        }
    }
}

/// Result of one complex half-line march (spectral parameter off the real axis).
#[derive(Debug, Clone)]
pub struct ComplexSide {
    pub sigma: f64,
    pub s: Vec<f64>,
    pub phi: Vec<Complex64>,
    /// `∂_y φ` at the nodes.
    pub dphi: Vec<Complex64>,
    /// `F* = ∫_{y_c}^{y} g φ/(b - c)` at the nodes.
    pub f: Vec<Complex64>,
    /// Per-interval `∫ 1/φ²` and `∫ F*/φ²` (last entry to the march end).
    pub inc_t: Vec<Complex64>,
    pub inc_i: Vec<Complex64>,
    /// Whole half-line integrals including tails.
    pub total_t: Complex64,
    pub total_i: Complex64,
    pub tail_t: Complex64,
    pub tail_i: Complex64,
    pub s_end: f64,
    pub phi_end: Complex64,
    pub dphi_end: Complex64,
}

impl ComplexSide {
    pub fn outward(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.s.len();
        let mut t = vec![Complex64::new(0.0, 0.0); n];
        let mut i = t.clone();
        let mut at = self.tail_t;
        let mut ai = self.tail_i;
        for k in (0..n).rev() {
            at += self.inc_t[k];
            ai += self.inc_i[k];
            t[k] = at;
            i[k] = ai;
        }
        (t, i)
    }
}

struct ComplexRhs<'a> {
    flow: &'a ShearFlow,
    yc: f64,
    ci: f64,
    sigma: f64,
    forcing: Option<&'a Forcing>,
    scale: Complex64,
    active: bool,
}

impl ComplexRhs<'_> {
    #[inline]
    fn eval(&self, s: f64, u: &[f64], du: &mut [f64]) {
        let sigma = self.sigma;
        let y = self.yc + sigma * s;
        let bc = Complex64::new(self.flow.diff(y, self.yc), -self.ci);
        let b2 = self.flow.d2(y);
        let phi = Complex64::new(u[0], u[1]);
        let dphi = Complex64::new(u[2], u[3]);
        let ddphi = phi + phi * b2 / bc;
        du[0] = sigma * dphi.re;
        du[1] = sigma * dphi.im;
        du[2] = sigma * ddphi.re;
        du[3] = sigma * ddphi.im;
        let inv = (phi * phi).inv();
        let r = if self.active { self.scale * inv } else { Complex64::new(0.0, 0.0) };
        du[4] = r.re;
        du[5] = r.im;
        du[6] = inv.re;
        du[7] = inv.im;
        match self.forcing {
            Some(g) => {
                let gv = g.eval(y);
                let df = phi / bc * (sigma * gv);
                let f = Complex64::new(u[8], u[9]);
                du[8] = df.re;
                du[9] = df.im;
                let fi = f * inv;
                let ri = if self.active { self.scale * fi } else { Complex64::new(0.0, 0.0) };
                du[10] = ri.re;
                du[11] = ri.im;
                du[12] = fi.re;
                du[13] = fi.im;
            }
            None => {
                for d in du[8..14].iter_mut() {
                    *d = 0.0;
                }
            }
        }
    }
}

/// Marches the regular solution `φ` (with `φ(y_c) = -i c_i`, `φ'(y_c) = b'(y_c)`) outward.
#[allow(clippy::too_many_arguments)]
pub fn march_complex_side(
    flow: &ShearFlow,
    yc: f64,
    ci: f64,
    sigma: f64,
    s_nodes: &[f64],
    forcing: Option<&Forcing>,
    s_end: f64,
    opts: &MarchOptions,
) -> Result<ComplexSide> {
    let b1 = flow.d1(yc);
    let mut st = [0.0f64; 14];
    st[1] = -ci;
    st[2] = b1;
    let mut rhs = ComplexRhs { flow, yc, ci, sigma, forcing, scale: Complex64::new(0.0, 0.0), active: false };
    let mut atol = vec![1e-300; 14];
    for (k, a) in atol.iter_mut().enumerate() {
        *a = match k {
            0..=3 => 1e-16 * ci.abs().max(1e-3),
            _ => 1e-16,
        };
    }
    let h0 = (0.1 * ci.abs() / b1).clamp(1e-12, 1e-3);
    let mut solver = Dopri5::new(14, opts.rtol, atol, h0);
    let plan = stops(s_nodes, &forcing_aux(forcing, yc, sigma), s_end, 0.0);
    let n = s_nodes.len();
    let z = Complex64::new(0.0, 0.0);
    let mut out = ComplexSide {
        sigma,
        s: s_nodes.to_vec(),
        phi: vec![z; n],
        dphi: vec![z; n],
        f: vec![z; n],
        inc_t: vec![z; n],
        inc_i: vec![z; n],
        total_t: z,
        total_i: z,
        tail_t: z,
        tail_i: z,
        s_end,
        phi_end: z,
        dphi_end: z,
    };
    let mut t = 0.0;
    let mut last: Option<usize> = None;
    for (sp, kind) in plan {
        if sp > t {
            let r = &rhs;
            let mut f = |s: f64, u: &[f64], du: &mut [f64]| r.eval(s, u, du);
            solver.advance(&mut f, &mut t, &mut st, sp)?;
        }
        if let Stop::Node(k) = kind {
            let phi = Complex64::new(st[0], st[1]);
            out.phi[k] = phi;
            out.dphi[k] = Complex64::new(st[2], st[3]);
            out.f[k] = Complex64::new(st[8], st[9]);
            if let Some(j) = last {
                out.inc_t[j] = Complex64::new(st[4], st[5]) / rhs.scale;
                out.inc_i[j] = Complex64::new(st[10], st[11]) / rhs.scale;
            }
            rhs.scale = phi * phi;
            rhs.active = true;
            st[4] = 0.0;
            st[5] = 0.0;
            st[10] = 0.0;
            st[11] = 0.0;
            last = Some(k);
        }
        solver.invalidate();
    }
    if let Some(j) = last {
        out.inc_t[j] = Complex64::new(st[4], st[5]) / rhs.scale;
        out.inc_i[j] = Complex64::new(st[10], st[11]) / rhs.scale;
    }
    let phi = Complex64::new(st[0], st[1]);
    let dphi = Complex64::new(st[2], st[3]);
    let amp = (phi + dphi * sigma) * 0.5;
    let tail = (amp * phi * 2.0).inv();
    let fend = Complex64::new(st[8], st[9]);
    out.tail_t = tail;
    out.tail_i = fend * tail;
    out.total_t = Complex64::new(st[6], st[7]) + tail;
    out.total_i = Complex64::new(st[12], st[13]) + fend * tail;
    out.phi_end = phi;
    out.dphi_end = dphi;
    Ok(out)
}
