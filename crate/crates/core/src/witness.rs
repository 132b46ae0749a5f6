//! Instability witnesses: plateau data with a large projection coefficient, the
//! associated function behind linear growth, toy models, and viscous sweeps.

use crate::error::{config_err, nonconv, Error, Result};
use crate::evolution::{build_operator, evolve, uniform_times, EvolutionTrace, EvolveOptions, Method, OperatorMatrix};
use crate::flow::ShearFlow;
use crate::grid::{l2_norm, linf_norm, Field, Grid};
use crate::indicators::{projection_coefficient, EigenvalueReport, Multiplicity};
use crate::numerics::fit::{linear_fit, loglog_fit, LinearFit};
use crate::numerics::ode::Dopri5;
use crate::numerics::quad::integrate;
use crate::rayleigh::{gamma_c_derivative, glue_gamma, Forcing, MarchOptions};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Ramp `S(x) = x - sin(2πx)/(2π)` on `[0, 1]`, clamped outside; `S', S''` vanish at both ends.
pub fn ramp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x - (2.0 * PI * x).sin() / (2.0 * PI)
    }
}

/// Plateau initial vorticity `ω_in = ½χ_Z` with `Z = e^M`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessData {
    pub m: f64,
    pub z: f64,
    pub support: (f64, f64),
    pub l2: f64,
    pub linf: f64,
    #[serde(skip)]
    forcing: Option<Forcing>,
}

/// `½ χ_Z(y)`: rises on `[1/Z, 2/Z]`, equals ½ on `[2/Z, ½]`, falls on `[½, 1]`.
pub fn plateau(z: f64, y: f64) -> f64 {
    let a = 1.0 / z;
    if y <= a || y >= 1.0 {
        0.0
    } else if y < 2.0 * a {
        0.5 * ramp((y - a) / a)
    } else if y <= 0.5 {
        0.5
    } else {
        0.5 * ramp((1.0 - y) / 0.5)
    }
}

/// `½ ln(Z/4) + 2/Z - ½`, the explicit lower bound for the critical-layer integral of the witness.
pub fn j3_lower_bound(z: f64) -> f64 {
    0.5 * (z / 4.0).ln() + 2.0 / z - 0.5
}

pub fn theorem1_data(m: f64) -> Result<WitnessData> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(config_err(format!("amplification target M must be positive, got {m}")));
    }
    let z = m.exp();
    if z <= 4.0 {
        return Err(config_err(format!("Z = e^M = {z} must exceed 4 so that the plateau [2/Z, 1/2] is non-empty")));
    }
    let a = 1.0 / z;
    let mut sq = 0.0;
    for (lo, hi) in [(a, 2.0 * a), (2.0 * a, 0.5), (0.5, 1.0)] {
        sq += integrate(|y: f64| plateau(z, y).powi(2), lo, hi, 1e-15, 1e-13, 2000)?;
    }
    let forcing = Forcing::new(move |y| plateau(z, y), (a, 1.0), vec![2.0 * a, 0.5]);
    Ok(WitnessData { m, z, support: (a, 1.0), l2: sq.sqrt(), linf: 0.5, forcing: Some(forcing) })
}

impl WitnessData {
    pub fn eval(&self, y: f64) -> f64 {
        plateau(self.z, y)
    }

    pub fn forcing(&self) -> Forcing {
        self.forcing.clone().unwrap_or_else(|| {
            let z = self.z;
            Forcing::new(move |y| plateau(z, y), self.support, vec![2.0 / z, 0.5])
        })
    }

    pub fn j3_bound(&self) -> f64 {
        j3_lower_bound(self.z)
    }

    /// Samples the data on `grid`; each ramp must span at least three cells.
    pub fn field(&self, grid: &Grid) -> Result<Field> {
        if 1.0 / self.z < 3.0 * grid.h {
            return Err(config_err(format!(
                "ramp width 1/Z = {:.3e} is below three grid cells (h = {:.3e}): refine the grid near 0",
                1.0 / self.z,
                grid.h
            )));
        }
        Ok(Field::from_real_fn(*grid, |y| self.eval(y)))
    }
}

/// Growth of one trajectory relative to its initial data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthReport {
    pub m: f64,
    pub nu: f64,
    pub horizon: f64,
    pub kappa: Option<f64>,
    /// `κ M` when `κ` is known.
    pub target: Option<f64>,
    pub omega_in_l2: f64,
    pub omega_in_linf: f64,
    pub times: Vec<f64>,
    pub amp_l2: Vec<f64>,
    pub amp_linf: Vec<f64>,
    pub amplification_l2: f64,
    pub amplification_linf: f64,
    pub t_star_l2: f64,
    pub t_star_linf: f64,
    /// First output time at which both amplifications reach the target.
    pub first_target_time: Option<f64>,
    pub achieved: Option<bool>,
    pub projection: Option<Complex64>,
    /// `|Ψ(T)|_{L²} / (|P| |Γ|_{L²})` at the horizon.
    pub psi_ratio: Option<f64>,
}

impl GrowthReport {
    fn from_trace(m: f64, trace: &EvolutionTrace, kappa: Option<f64>) -> Self {
        let (n2, ni) = (trace.omega_l2[0].max(1e-300), trace.omega_linf[0].max(1e-300));
        let amp_l2: Vec<f64> = trace.omega_l2.iter().map(|v| v / n2).collect();
        let amp_linf: Vec<f64> = trace.omega_linf.iter().map(|v| v / ni).collect();
        let argmax = |v: &[f64]| v.iter().enumerate().fold((0, f64::MIN), |b, (i, x)| if *x > b.1 { (i, *x) } else { b });
        let (i2, a2) = argmax(&amp_l2);
        let (ii, ai) = argmax(&amp_linf);
        let target = kappa.map(|k| k * m);
        let first = target.and_then(|tg| (0..trace.times.len()).find(|&k| amp_l2[k] >= tg && amp_linf[k] >= tg).map(|k| trace.times[k]));
        GrowthReport {
            m,
            nu: trace.nu,
            horizon: *trace.times.last().unwrap_or(&0.0),
            kappa,
            target,
            omega_in_l2: trace.omega_l2[0],
            omega_in_linf: trace.omega_linf[0],
            times: trace.times.clone(),
            amp_l2,
            amp_linf,
            amplification_l2: a2,
            amplification_linf: ai,
            t_star_l2: trace.times[i2],
            t_star_linf: trace.times[ii],
            first_target_time: first,
            achieved: target.map(|_| first.is_some()),
            projection: None,
            psi_ratio: None,
        }
    }

    /// Amplification (L²) at the output time closest to `t`.
    pub fn amplification_at(&self, t: f64) -> f64 {
        let k = self.times.iter().enumerate().fold((0, f64::INFINITY), |b, (i, s)| if (s - t).abs() < b.1 { (i, (s - t).abs()) } else { b }).0;
        self.amp_l2[k]
    }
}

/// Time-stepping parameters shared by the growth experiments.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GrowthRunOptions {
    pub horizon: f64,
    pub output_dt: f64,
    pub cfl: f64,
}

impl Default for GrowthRunOptions {
    fn default() -> Self {
        Self { horizon: 50.0, output_dt: 0.5, cfl: 0.5 }
    }
}

fn output_times(o: &GrowthRunOptions) -> Result<Vec<f64>> {
    if !(o.horizon > 0.0 && o.output_dt > 0.0) {
        return Err(config_err("horizon and output spacing must be positive"));
    }
    Ok(uniform_times(o.horizon, (o.horizon / o.output_dt).round().max(1.0) as usize))
}

/// Evolves `omega_in` without any spectral precondition (control runs).
pub fn growth_run(op: &OperatorMatrix, omega_in: &Field, m: f64, kappa: Option<f64>, o: &GrowthRunOptions, snapshots: bool) -> Result<(GrowthReport, EvolutionTrace)> {
    let times = output_times(o)?;
    let trace = evolve(op, omega_in, &times, Method::Rk4, &EvolveOptions { cfl: o.cfl, snapshots, ..Default::default() })?;
    Ok((GrowthReport::from_trace(m, &trace, kappa), trace))
}

/// Evolves the plateau witness for `M` and reports the growth against `κ M`.
///
/// Refuses (hypothesis failure) when no embedded eigenvalue is supplied.
pub fn run_theorem1(
    flow: &ShearFlow,
    m: f64,
    grid: &Grid,
    report: Option<&EigenvalueReport>,
    kappa: Option<f64>,
    o: &GrowthRunOptions,
    opts: &MarchOptions,
) -> Result<GrowthReport> {
    let report = report.ok_or_else(|| Error::Hypothesis("no embedded eigenvalue found: the growth mechanism is absent".into()))?;
    let data = theorem1_data(m)?;
    let field = data.field(grid)?;
    let op = build_operator(flow, grid, 0.0)?;
    let (mut g, trace) = growth_run(&op, &field, m, kappa, o, false)?;
    if report.multiplicity == Multiplicity::Simple {
        let p = projection_coefficient(flow, &data.forcing(), report, opts)?;
        let gamma = glue_gamma(flow, report.c_star, &grid.nodes(), opts)?.gamma;
        let gl2 = l2_norm(&gamma.iter().map(|v| Complex64::new(*v, 0.0)).collect::<Vec<_>>(), grid.h);
        g.projection = Some(p);
        g.psi_ratio = Some(trace.psi_l2.last().unwrap() / (p.norm() * gl2));
    }
    Ok(g)
}

/// Flow constant `κ = min(L², L∞ amplification)/M` measured on the witness for `m` (normally 2).
pub fn measure_kappa(flow: &ShearFlow, m: f64, grid: &Grid, report: &EigenvalueReport, o: &GrowthRunOptions, opts: &MarchOptions) -> Result<f64> {
    let g = run_theorem1(flow, m, grid, Some(report), None, o, opts)?;
    Ok(g.amplification_l2.min(g.amplification_linf) / m)
}

/// `b''/(b - c*)²` continued through `y_c` (requires `b''(y_c) = b'''(y_c) = 0` there).
fn potential_sq(flow: &ShearFlow, y: f64, yc: f64) -> f64 {
    let x = y - yc;
    let d = flow.derivs(yc);
    if x.abs() < 1e-4 && d[2].abs() <= 1e-12 && d[3].abs() <= 1e-10 {
        return d[4] / (2.0 * d[1] * d[1]);
    }
    let bb = flow.diff(y, yc);
    flow.d2(y) / (bb * bb)
}

/// Closed-form linear-growth solution `𝔴(t) = e^{-ic*t}(t ω_* + i η)` at a multiple eigenvalue.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssociatedSolution {
    pub c_star: f64,
    pub grid: Grid,
    pub gamma: Vec<f64>,
    pub gamma_c: Vec<f64>,
    /// `ω_* = (∂² - 1)Γ`.
    pub omega_star: Vec<f64>,
    /// `η = (∂² - 1)∂_cΓ`.
    pub eta: Vec<f64>,
    pub omega_star_l2: f64,
    pub omega_star_linf: f64,
    pub eta_l2: f64,
    pub deriv_mismatch: f64,
    pub jump_value: f64,
}

/// Builds `Γ`, `∂_cΓ` and the associated function on `grid`.
///
/// Fails when `∂_cΓ` does not match across `y_c` within `mismatch_tol` (the eigenvalue is then simple).
pub fn theorem2_solution(flow: &ShearFlow, report: &EigenvalueReport, grid: &Grid, mismatch_tol: f64, opts: &MarchOptions) -> Result<AssociatedSolution> {
    if report.multiplicity != Multiplicity::Multiple {
        return Err(Error::Hypothesis("associated function needs a multiple embedded eigenvalue".into()));
    }
    let ys = grid.nodes();
    let cs = report.c_star;
    let glued = glue_gamma(flow, cs, &ys, opts)?;
    let dc = gamma_c_derivative(flow, cs, &ys, opts)?;
    let mismatch = dc.deriv_mismatch.max(dc.jump_value.abs());
    if !(mismatch <= mismatch_tol) {
        return Err(Error::Hypothesis(format!(
            "∂_cΓ does not match across the critical layer (mismatch {mismatch:e} > {mismatch_tol:e})"
        )));
    }
    let yc = glued.yc;
    let gamma = glued.gamma;
    let gamma_c = dc.values;
    let omega_star: Vec<f64> = ys.iter().zip(&gamma).map(|(y, g)| flow.potential(*y, yc) * g).collect();
    let eta: Vec<f64> = (0..ys.len())
        .map(|i| potential_sq(flow, ys[i], yc) * gamma[i] + flow.potential(ys[i], yc) * gamma_c[i])
        .collect();
    let cx = |v: &[f64]| v.iter().map(|x| Complex64::new(*x, 0.0)).collect::<Vec<_>>();
    Ok(AssociatedSolution {
        c_star: cs,
        grid: *grid,
        omega_star_l2: l2_norm(&cx(&omega_star), grid.h),
        omega_star_linf: linf_norm(&cx(&omega_star)),
        eta_l2: l2_norm(&cx(&eta), grid.h),
        gamma,
        gamma_c,
        omega_star,
        eta,
        deriv_mismatch: dc.deriv_mismatch,
        jump_value: dc.jump_value,
    })
}

/// Diagnostics of the associated function against the discrete dynamics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub residual: f64,
    pub times: Vec<f64>,
    pub w_l2: Vec<f64>,
    pub w_linf: Vec<f64>,
    pub fit_l2: LinearFit,
    pub fit_linf: LinearFit,
    /// Fitted L² slope over `|ω_*|_{L²}`.
    pub slope_ratio: f64,
    /// Relative L² gap between evolving `iη` and `𝔴(t_check)`.
    pub evolution_gap: Option<f64>,
    pub t_check: f64,
}

impl AssociatedSolution {
    pub fn w(&self, t: f64) -> Vec<Complex64> {
        let ph = (-I * self.c_star * t).exp();
        self.omega_star.iter().zip(&self.eta).map(|(a, b)| ph * Complex64::new(t * a, *b)).collect()
    }

    /// Initial data `𝔴(0) = iη`.
    pub fn omega_in(&self) -> Field {
        Field { grid: self.grid, values: self.eta.iter().map(|b| Complex64::new(0.0, *b)).collect() }
    }

    /// `max_t |∂_t𝔴 + iR𝔴|_{L²} / |𝔴|_{L²}` with the discrete Rayleigh operator.
    pub fn residual(&self, op: &OperatorMatrix, times: &[f64]) -> f64 {
        let n = self.grid.n;
        let mut psi = vec![Complex64::new(0.0, 0.0); n];
        let mut rw = psi.clone();
        let mut worst = 0.0f64;
        for &t in times {
            let w = self.w(t);
            let ph = (-I * self.c_star * t).exp();
            // ∂_t𝔴 = -ic*𝔴 + e^{-ic*t} ω_*.
            op.rayleigh_apply(&w, &mut psi, &mut rw);
            let r: Vec<Complex64> = (0..n).map(|i| -I * self.c_star * w[i] + ph * self.omega_star[i] + I * rw[i]).collect();
            worst = worst.max(l2_norm(&r, self.grid.h) / l2_norm(&w, self.grid.h));
        }
        worst
    }
}

/// Residual, linear-growth fits over `[t0, t1]` and the evolution cross-check at `t_check`.
pub fn run_theorem2(sol: &AssociatedSolution, op: &OperatorMatrix, fit_window: (f64, f64), t_check: Option<f64>, cfl: f64) -> Result<Theorem2Report> {
    let (t0, t1) = fit_window;
    let times: Vec<f64> = (0..=40).map(|k| t0 + (t1 - t0) * k as f64 / 40.0).collect();
    let residual = sol.residual(op, &times);
    let w_l2: Vec<f64> = times.iter().map(|t| l2_norm(&sol.w(*t), sol.grid.h)).collect();
    let w_linf: Vec<f64> = times.iter().map(|t| linf_norm(&sol.w(*t))).collect();
    let fit_l2 = linear_fit(&times, &w_l2);
    let fit_linf = linear_fit(&times, &w_linf);
    let evolution_gap = match t_check {
        Some(tc) => {
            let tr = evolve(op, &sol.omega_in(), &[0.0, tc], Method::Rk4, &EvolveOptions { cfl, snapshots: true, ..Default::default() })?;
            let exact = Field { grid: sol.grid, values: sol.w(tc) };
            Some(tr.omega[1].sub(&exact).l2() / exact.l2())
        }
        None => None,
    };
    Ok(Theorem2Report {
        residual,
        slope_ratio: fit_l2.slope / sol.omega_star_l2,
        times,
        w_l2,
        w_linf,
        fit_l2,
        fit_linf,
        evolution_gap,
        t_check: t_check.unwrap_or(f64::NAN),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToyVariant {
    /// Distinct eigenvalues `-2ν, -ν` (transient growth).
    #[serde(alias = "A1")]
    A1,
    /// Single Jordan block at `-ν` (linear growth).
    #[serde(alias = "A2")]
    A2,
}

impl std::str::FromStr for ToyVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a1" => Ok(ToyVariant::A1),
            "a2" => Ok(ToyVariant::A2),
            _ => Err(config_err(format!("unknown toy variant `{s}` (expected A1 or A2)"))),
        }
    }
}

impl ToyVariant {
    pub fn matrix(&self, nu: f64) -> [[f64; 2]; 2] {
        match self {
            ToyVariant::A1 => [[-2.0 * nu, 0.0], [1.0, -nu]],
            ToyVariant::A2 => [[-nu, 0.0], [1.0, -nu]],
        }
    }
}

/// Closed-form `(ψ̃(t), φ̃(t))` of the two-mode toy system.
pub fn toy_solve(variant: ToyVariant, nu: f64, init: (f64, f64), t: f64) -> Result<(f64, f64)> {
    if !(nu >= 0.0) {
        return Err(config_err(format!("viscosity must be non-negative, got {nu}")));
    }
    let (p0, f0) = init;
    Ok(match variant {
        ToyVariant::A1 => {
            let psi = p0 * (-2.0 * nu * t).exp();
            // (e^{-νt} - e^{-2νt})/ν = e^{-νt}(1 - e^{-νt})/ν, continuous at ν = 0.
            let growth = if nu * t < 1e-8 { t * (1.0 - 1.5 * nu * t) } else { (-nu * t).exp() * -(-nu * t).exp_m1() / nu };
            (psi, f0 * (-nu * t).exp() + p0 * growth)
        }
        ToyVariant::A2 => {
            let e = (-nu * t).exp();
            (p0 * e, (f0 + p0 * t) * e)
        }
    })
}

/// Adaptive Dormand–Prince integration of the toy system (independent of the closed form).
pub fn toy_integrate(variant: ToyVariant, nu: f64, init: (f64, f64), t: f64) -> Result<(f64, f64)> {
    let a = variant.matrix(nu);
    let mut y = [init.0, init.1];
    let mut s = 0.0;
    let mut solver = Dopri5::new(2, 1e-14, vec![1e-16, 1e-16], 1e-3);
    let mut f = |_: f64, u: &[f64], du: &mut [f64]| {
        du[0] = a[0][0] * u[0] + a[0][1] * u[1];
        du[1] = a[1][0] * u[0] + a[1][1] * u[1];
    };
    solver.advance(&mut f, &mut s, &mut y, t).map_err(|e| nonconv(e.to_string()))?;
    Ok((y[0], y[1]))
}

/// Toy trajectory sampled at `times`: `(t, ψ̃, φ̃)`.
pub fn toy_curve(variant: ToyVariant, nu: f64, init: (f64, f64), times: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    times.iter().map(|t| toy_solve(variant, nu, init, *t).map(|(a, b)| (*t, a, b))).collect()
}

/// Viscous repetition of the growth experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViscousReport {
    pub m: f64,
    pub kappa: Option<f64>,
    pub horizon: f64,
    pub inviscid: GrowthReport,
    pub nus: Vec<f64>,
    pub runs: Vec<GrowthReport>,
    /// `|A_ν(T) - A_0(T)|` for the L² amplification at the horizon.
    pub deviation: Vec<f64>,
    /// `|ω_ν(T) - ω_0(T)|_{L²} / |ω_in|_{L²}` at the horizon.
    pub field_deviation: Vec<f64>,
    /// Log-log fit of the amplification deviation against `ν` over the selected `ν`.
    pub order_fit: LinearFit,
    /// Same fit for the field deviation.
    pub order_fit_field: LinearFit,
    /// Largest listed `ν` whose peak amplification still reaches `κ M / 2`.
    pub nu0: Option<f64>,
}

/// Repeats the witness run with the viscous generator for each `ν` in `nus`.
#[allow(clippy::too_many_arguments)]
pub fn run_viscous(
    flow: &ShearFlow,
    m: f64,
    nus: &[f64],
    grid: &Grid,
    kappa: Option<f64>,
    o: &GrowthRunOptions,
    order_nus: Option<&[f64]>,
) -> Result<ViscousReport> {
    let data = theorem1_data(m)?;
    let field = data.field(grid)?;
    let (inviscid, base) = growth_run(&build_operator(flow, grid, 0.0)?, &field, m, kappa, o, true)?;
    let a0 = *inviscid.amp_l2.last().unwrap();
    let w0 = base.omega.last().unwrap();
    let mut runs = Vec::new();
    let mut deviation = Vec::new();
    let mut field_deviation = Vec::new();
    for &nu in nus {
        let (g, tr) = growth_run(&build_operator(flow, grid, nu)?, &field, m, kappa, o, true)?;
        deviation.push((g.amp_l2.last().unwrap() - a0).abs());
        field_deviation.push(tr.omega.last().unwrap().sub(w0).l2() / field.l2());
        runs.push(g);
    }
    let sel: Vec<usize> = match order_nus {
        Some(list) => (0..nus.len()).filter(|&i| list.iter().any(|v| (v - nus[i]).abs() <= 1e-12 * v.abs())).collect(),
        None => (0..nus.len()).collect(),
    };
    let xs: Vec<f64> = sel.iter().map(|&i| nus[i]).collect();
    let pick = |v: &[f64]| sel.iter().map(|&i| v[i]).collect::<Vec<_>>();
    let order_fit = loglog_fit(&xs, &pick(&deviation));
    let order_fit_field = loglog_fit(&xs, &pick(&field_deviation));
    let nu0 = kappa.and_then(|k| {
        nus.iter().zip(&runs).filter(|(_, g)| g.amplification_l2.min(g.amplification_linf) >= 0.5 * k * m).map(|(n, _)| *n).fold(None, |b: Option<f64>, n| Some(b.map_or(n, |x| x.max(n))))
    });
    Ok(ViscousReport { m, kappa, horizon: o.horizon, inviscid, nus: nus.to_vec(), runs, deviation, field_deviation, order_fit, order_fit_field, nu0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_closed_form_matches_integrator() {
        for v in [ToyVariant::A1, ToyVariant::A2] {
            for nu in [0.0, 0.01, 0.3] {
                let t = if nu > 0.0 { 1.0 / nu } else { 7.0 };
                let a = toy_solve(v, nu, (1.0, 0.0), t).unwrap();
                let b = toy_integrate(v, nu, (1.0, 0.0), t).unwrap();
                assert!((a.0 - b.0).abs() < 1e-10 && (a.1 - b.1).abs() < 1e-10 * a.1.abs().max(1.0), "{v:?} {nu}: {a:?} {b:?}");
            }
        }
        let (_, phi) = toy_solve(ToyVariant::A1, 0.01, (1.0, 0.0), 100.0).unwrap();
        assert!((phi - 100.0 * ((-1f64).exp() - (-2f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn plateau_invariants() {
        let d = theorem1_data(10.0).unwrap();
        assert_eq!(d.linf, 0.5);
        assert!(d.l2 <= 0.5 && d.l2 + d.linf <= 1.0);
        assert_eq!(d.eval(0.3), 0.5);
        assert_eq!(d.eval(1.0), 0.0);
        assert_eq!(d.eval(1.0 / d.z), 0.0);
        assert!((d.j3_bound() - 3.8068528194400546).abs() < 1e-3);
    }
}
