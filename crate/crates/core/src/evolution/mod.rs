//! Discretized Rayleigh and Orr–Sommerfeld dynamics for the mode `k = 1`.
//!
//! The vorticity obeys `∂_tω = -iRω + νHω` with `R = b - b''H⁻¹` and `H = ∂² - 1`,
//! on a truncated uniform grid with zero Dirichlet data.

mod representation;

pub use representation::{
    chi, decompose_psi, psi_chi, psi_chi_decay, psi_representation, pv_chi_integral, Decomposition, Representation,
    RepresentationOptions,
};

use crate::error::{config_err, nonconv, Result};
use crate::flow::ShearFlow;
use crate::grid::{h1_norm, h2_norm, l2_norm, linf_norm, Field, Grid};
use crate::numerics::tridiag::{SymToeplitz3, ToeplitzLu};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Finite-difference scheme for `(∂² - 1)ψ = ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HelmholtzScheme {
    /// Three-point second-order scheme.
    SecondOrder,
    /// Compact fourth-order (Numerov) scheme, still tridiagonal.
    #[default]
    Numerov,
}

/// Factored discrete inverse of `∂² - 1` with zero Dirichlet data at `±L`.
#[derive(Debug, Clone)]
pub struct Helmholtz {
    pub grid: Grid,
    pub scheme: HelmholtzScheme,
    lu: ToeplitzLu,
    rhs: SymToeplitz3,
}

impl Helmholtz {
    pub fn new(grid: Grid, scheme: HelmholtzScheme) -> Self {
        let h2 = grid.h * grid.h;
        let (lhs, rhs) = match scheme {
            HelmholtzScheme::SecondOrder => (SymToeplitz3 { off: 1.0, diag: -2.0 - h2 }, SymToeplitz3 { off: 0.0, diag: h2 }),
            HelmholtzScheme::Numerov => (
                SymToeplitz3 { off: 1.0 - h2 / 12.0, diag: -2.0 - 10.0 * h2 / 12.0 },
                SymToeplitz3 { off: h2 / 12.0, diag: 10.0 * h2 / 12.0 },
            ),
        };
        Self { grid, scheme, lu: ToeplitzLu::new(lhs, grid.n), rhs }
    }

    /// `ψ = H⁻¹ω`, written into `out`.
    pub fn solve_into(&self, omega: &[Complex64], out: &mut [Complex64]) {
        self.rhs.apply(omega, out);
        self.lu.solve(out);
    }

    pub fn solve(&self, omega: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; omega.len()];
        self.solve_into(omega, &mut out);
        out
    }

    pub fn solve_real(&self, omega: &[f64]) -> Vec<f64> {
        let n = omega.len();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let l = if i > 0 { omega[i - 1] } else { 0.0 };
            let r = if i + 1 < n { omega[i + 1] } else { 0.0 };
            out[i] = self.rhs.diag * omega[i] + self.rhs.off * (l + r);
        }
        self.lu.solve_real(&mut out);
        out
    }

    /// Three-point `(∂² - 1)f` with zero data outside the grid.
    pub fn apply(&self, f: &[Complex64], out: &mut [Complex64]) {
        let n = f.len();
        let ih2 = 1.0 / (self.grid.h * self.grid.h);
        for i in 0..n {
            let l = if i > 0 { f[i - 1] } else { ZERO };
            let r = if i + 1 < n { f[i + 1] } else { ZERO };
            out[i] = (l + r - f[i] * 2.0) * ih2 - f[i];
        }
    }
}

/// Solves `(∂² - 1)ψ = ω` with the default (Numerov) scheme.
pub fn helmholtz_inverse(grid: &Grid, omega: &Field) -> Field {
    helmholtz_inverse_with(grid, omega, HelmholtzScheme::Numerov)
}

pub fn helmholtz_inverse_with(grid: &Grid, omega: &Field, scheme: HelmholtzScheme) -> Field {
    Field { grid: *grid, values: Helmholtz::new(*grid, scheme).solve(&omega.values) }
}

/// Whole-line Green's function quadrature `ψ(y) = -½∫e^{-|y-x|}ω(x)dx` on the grid nodes.
pub fn helmholtz_green(grid: &Grid, omega: &Field) -> Field {
    let n = grid.n;
    let h = grid.h;
    let e = (-h).exp();
    let v = &omega.values;
    // Trapezoid rule: the kink of the kernel sits on a node and the data vanish at ±L.
    let mut left = vec![ZERO; n];
    let mut acc = ZERO;
    for j in 0..n {
        acc = acc * e + v[j];
        left[j] = acc;
    }
    let mut right = vec![ZERO; n];
    acc = ZERO;
    for j in (0..n).rev() {
        acc = acc * e + v[j];
        right[j] = acc;
    }
    let values = (0..n).map(|j| (left[j] + right[j] - v[j]) * (-0.5 * h)).collect();
    Field { grid: *grid, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Rayleigh,
    OrrSommerfeld,
}

/// Discretized generator of the mode-1 linearized dynamics.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub grid: Grid,
    pub nu: f64,
    /// Streamwise wavenumber (fixed to 1).
    pub k: f64,
    pub kind: OperatorKind,
    pub b: Vec<f64>,
    pub b2: Vec<f64>,
    pub helmholtz: Helmholtz,
}

/// Assembles the operator for `flow` on `grid` with viscosity `nu ≥ 0`.
pub fn build_operator(flow: &ShearFlow, grid: &Grid, nu: f64) -> Result<OperatorMatrix> {
    build_operator_with(flow, grid, nu, HelmholtzScheme::Numerov)
}

pub fn build_operator_with(flow: &ShearFlow, grid: &Grid, nu: f64, scheme: HelmholtzScheme) -> Result<OperatorMatrix> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(config_err(format!("viscosity must be non-negative, got {nu}")));
    }
    let ys = grid.nodes();
    Ok(OperatorMatrix {
        grid: *grid,
        nu,
        k: 1.0,
        kind: if nu > 0.0 { OperatorKind::OrrSommerfeld } else { OperatorKind::Rayleigh },
        b: ys.iter().map(|y| flow.b(*y)).collect(),
        b2: ys.iter().map(|y| flow.d2(*y)).collect(),
        helmholtz: Helmholtz::new(*grid, scheme),
    })
}

impl OperatorMatrix {
    /// `Rω = bω - b''H⁻¹ω`; `psi` receives `H⁻¹ω`.
    pub fn rayleigh_apply(&self, w: &[Complex64], psi: &mut [Complex64], out: &mut [Complex64]) {
        self.helmholtz.solve_into(w, psi);
        for i in 0..w.len() {
            out[i] = w[i] * self.b[i] - psi[i] * self.b2[i];
        }
    }

    /// `∂_tω = -iRω + νHω`.
    pub fn generator_apply(&self, w: &[Complex64], scratch: &mut [Complex64], out: &mut [Complex64]) {
        self.rayleigh_apply(w, scratch, out);
        for o in out.iter_mut() {
            *o *= -I;
        }
        if self.nu > 0.0 {
            self.helmholtz.apply(w, scratch);
            for (o, s) in out.iter_mut().zip(scratch.iter()) {
                *o += s * self.nu;
            }
        }
    }

    /// Dense discrete `H⁻¹` (real).
    pub fn dense_helmholtz_inverse(&self) -> DMatrix<f64> {
        let n = self.grid.n;
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.helmholtz.solve_real(&e);
            e[j] = 0.0;
            for i in 0..n {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    /// Dense Rayleigh matrix `diag(b) - diag(b'')H⁻¹` (real).
    pub fn dense_rayleigh(&self) -> DMatrix<f64> {
        let mut m = -self.dense_helmholtz_inverse();
        for i in 0..self.grid.n {
            let s = self.b2[i];
            for v in m.row_mut(i).iter_mut() {
                *v *= s;
            }
            m[(i, i)] += self.b[i];
        }
        m
    }

    /// Dense generator `-iR + νH`.
    pub fn dense_generator(&self) -> DMatrix<Complex64> {
        let n = self.grid.n;
        let r = self.dense_rayleigh();
        let mut g = r.map(|v| -I * v);
        if self.nu > 0.0 {
            let ih2 = 1.0 / (self.grid.h * self.grid.h);
            for i in 0..n {
                g[(i, i)] += Complex64::new(self.nu * (-2.0 * ih2 - 1.0), 0.0);
                if i > 0 {
                    g[(i, i - 1)] += Complex64::new(self.nu * ih2, 0.0);
                }
                if i + 1 < n {
                    g[(i, i + 1)] += Complex64::new(self.nu * ih2, 0.0);
                }
            }
        }
        g
    }

    /// Eigenvalues of the discrete Rayleigh matrix.
    pub fn rayleigh_spectrum(&self) -> Vec<Complex64> {
        self.dense_rayleigh().complex_eigenvalues().iter().copied().collect()
    }

    /// Upper bound for the spectral radius of the generator.
    pub fn spectral_radius_estimate(&self) -> f64 {
        let bmax = self.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let b2max = self.b2.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let h = self.grid.h;
        bmax + b2max + self.nu * (4.0 / (h * h) + 1.0)
    }

    /// Growth rate `C = 2 sup|b''|` of the a-priori bound `|ω(t)| ≤ e^{Ct}|ω_in|`.
    pub fn growth_bound_rate(&self) -> f64 {
        2.0 * self.b2.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4,
    Expm,
}

impl std::str::FromStr for Method {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(Method::Rk4),
            "expm" => Ok(Method::Expm),
            _ => Err(config_err(format!("unknown time integrator `{s}` (expected rk4 or expm)"))),
        }
    }
}

/// Largest grid for which the dense matrix exponential is offered.
pub const EXPM_MAX_N: usize = 512;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EvolveOptions {
    /// RK4 step is `cfl / ρ̂` with `ρ̂` the spectral-radius estimate.
    pub cfl: f64,
    /// Keep `ω` and `Ψ` at every output time.
    pub snapshots: bool,
    /// Blow-up is declared when `|ω(t)| > blowup · e^{Ct}|ω_in|`.
    pub blowup: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { cfl: 0.5, snapshots: false, blowup: 10.0 }
    }
}

/// Norm histories (and optional snapshots) of one trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolutionTrace {
    pub method: Method,
    pub nu: f64,
    pub dt: Option<f64>,
    pub times: Vec<f64>,
    pub omega_l2: Vec<f64>,
    pub omega_linf: Vec<f64>,
    pub omega_h2: Vec<f64>,
    pub psi_l2: Vec<f64>,
    pub psi_linf: Vec<f64>,
    pub psi_h1: Vec<f64>,
    #[serde(skip)]
    pub omega: Vec<Field>,
    #[serde(skip)]
    pub psi: Vec<Field>,
}

impl EvolutionTrace {
    fn new(method: Method, nu: f64, dt: Option<f64>) -> Self {
        Self {
            method,
            nu,
            dt,
            times: vec![],
            omega_l2: vec![],
            omega_linf: vec![],
            omega_h2: vec![],
            psi_l2: vec![],
            psi_linf: vec![],
            psi_h1: vec![],
            omega: vec![],
            psi: vec![],
        }
    }

    fn record(&mut self, grid: &Grid, t: f64, w: &[Complex64], psi: &[Complex64], keep: bool) {
        let h = grid.h;
        self.times.push(t);
        self.omega_l2.push(l2_norm(w, h));
        self.omega_linf.push(linf_norm(w));
        self.omega_h2.push(h2_norm(w, h));
        self.psi_l2.push(l2_norm(psi, h));
        self.psi_linf.push(linf_norm(psi));
        self.psi_h1.push(h1_norm(psi, h));
        if keep {
            self.omega.push(Field { grid: *grid, values: w.to_vec() });
            self.psi.push(Field { grid: *grid, values: psi.to_vec() });
        }
    }

    /// Final vorticity snapshot, if snapshots were kept.
    pub fn last_omega(&self) -> Option<&Field> {
        self.omega.last()
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(config_err("no output times given"));
    }
    if times[0] < 0.0 || times.iter().any(|t| !t.is_finite()) {
        return Err(config_err("output times must be finite and non-negative"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config_err("output times must be strictly increasing"));
    }
    Ok(())
}

/// Evolves `omega_in` and records norms at each output time.
pub fn evolve(op: &OperatorMatrix, omega_in: &Field, times: &[f64], method: Method, opts: &EvolveOptions) -> Result<EvolutionTrace> {
    check_times(times)?;
    if omega_in.grid != op.grid {
        return Err(config_err("initial vorticity lives on a different grid than the operator"));
    }
    match method {
        Method::Rk4 => evolve_rk4(op, omega_in, times, opts),
        Method::Expm => evolve_expm(op, omega_in, times, opts),
    }
}

fn guard(op: &OperatorMatrix, t: f64, norm: f64, norm0: f64, opts: &EvolveOptions) -> Result<()> {
    let bound = opts.blowup * (op.growth_bound_rate() * t).exp() * norm0;
    if !norm.is_finite() || norm > bound.max(1e-300) {
        return Err(nonconv(format!(
            "instability detected at t = {t}: |ω| = {norm:e} exceeds the a-priori bound {bound:e}"
        )));
    }
    Ok(())
}

fn evolve_rk4(op: &OperatorMatrix, omega_in: &Field, times: &[f64], opts: &EvolveOptions) -> Result<EvolutionTrace> {
    if !(opts.cfl > 0.0 && opts.cfl <= 2.5) {
        return Err(config_err(format!("cfl must lie in (0, 2.5], got {}", opts.cfl)));
    }
    let n = op.grid.n;
    let dt_max = opts.cfl / op.spectral_radius_estimate();
    let mut tr = EvolutionTrace::new(Method::Rk4, op.nu, Some(dt_max));
    let mut w = omega_in.values.clone();
    let norm0 = l2_norm(&w, op.grid.h);
    let mut psi = vec![ZERO; n];
    let (mut k1, mut k2, mut k3, mut k4, mut tmp, mut scratch) =
        (vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]);
    let mut t = 0.0;
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / dt_max).ceil().max(1.0) as usize;
            let dt = span / steps as f64;
            for _ in 0..steps {
                op.generator_apply(&w, &mut scratch, &mut k1);
                for i in 0..n {
                    tmp[i] = w[i] + k1[i] * (0.5 * dt);
                }
                op.generator_apply(&tmp, &mut scratch, &mut k2);
                for i in 0..n {
                    tmp[i] = w[i] + k2[i] * (0.5 * dt);
                }
                op.generator_apply(&tmp, &mut scratch, &mut k3);
                for i in 0..n {
                    tmp[i] = w[i] + k3[i] * dt;
                }
                op.generator_apply(&tmp, &mut scratch, &mut k4);
                for i in 0..n {
                    w[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
                }
            }
            t = target;
        }
        op.helmholtz.solve_into(&w, &mut psi);
        tr.record(&op.grid, target, &w, &psi, opts.snapshots);
        guard(op, target, *tr.omega_l2.last().unwrap(), norm0, opts)?;
    }
    Ok(tr)
}

fn evolve_expm(op: &OperatorMatrix, omega_in: &Field, times: &[f64], opts: &EvolveOptions) -> Result<EvolutionTrace> {
    let n = op.grid.n;
    if n > EXPM_MAX_N {
        return Err(config_err(format!("matrix exponential limited to n ≤ {EXPM_MAX_N}, got {n}")));
    }
    let g = op.dense_generator();
    let w0 = nalgebra::DVector::from_column_slice(&omega_in.values);
    let norm0 = l2_norm(&omega_in.values, op.grid.h);
    let mut tr = EvolutionTrace::new(Method::Expm, op.nu, None);
    let mut psi = vec![ZERO; n];
    for &t in times {
        let e = (&g * Complex64::new(t, 0.0)).exp();
        let w: Vec<Complex64> = (e * &w0).iter().copied().collect();
        op.helmholtz.solve_into(&w, &mut psi);
        tr.record(&op.grid, t, &w, &psi, opts.snapshots);
        guard(op, t, *tr.omega_l2.last().unwrap(), norm0, opts)?;
    }
    Ok(tr)
}

/// Logarithmically spaced output times on `[t0, t1]`, optionally preceded by `t = 0`.
pub fn log_times(t0: f64, t1: f64, count: usize, with_zero: bool) -> Vec<f64> {
    let mut v = Vec::with_capacity(count + 1);
    if with_zero {
        v.push(0.0);
    }
    let (a, b) = (t0.ln(), t1.ln());
    for k in 0..count {
        let s = if count > 1 { k as f64 / (count - 1) as f64 } else { 0.0 };
        v.push((a + s * (b - a)).exp());
    }
    v
}

/// Uniform output times `0, dt, ..., t1`.
pub fn uniform_times(t1: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|k| t1 * k as f64 / count as f64).collect()
}

/// Smallest `C` with `|ω(t)|_{H²} ≤ C e^{Ct}|ω_in|_{H²}` along the recorded trajectory.
pub fn gronwall_constant(trace: &EvolutionTrace) -> f64 {
    let n0 = trace.omega_h2[0].max(1e-300);
    let mut c = 1.0f64;
    for _ in 0..60 {
        let ok = trace.times.iter().zip(&trace.omega_h2).all(|(t, v)| *v <= c * (c * t).exp() * n0 * (1.0 + 1e-12));
        if ok {
            break;
        }
        c *= 1.25;
    }
    // Shrink back towards the smallest admissible value.
    let (mut lo, mut hi) = (0.0, c);
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        let ok = trace.times.iter().zip(&trace.omega_h2).all(|(t, v)| *v <= m * (m * t).exp() * n0 * (1.0 + 1e-12));
        if ok {
            hi = m;
        } else {
            lo = m;
        }
    }
    hi
}
