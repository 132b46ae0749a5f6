//! Command-line surface: one function per subcommand, each returning its output files.

use crate::config::{FlowConfig, RunConfig};
use crate::error::{config_err, Error, Result};
use crate::evolution::{build_operator, decompose_psi, evolve, gronwall_constant, EvolveOptions};
use crate::flow::ShearFlow;
use crate::grid::Field;
use crate::indicators::{indicator_table, j1j2, report_at, scan_embedded, EigenvalueReport, Multiplicity};
use crate::io::{config_hash, render_svg, Axes, Header, OutputSet, Series, Table};
use crate::numerics::fit::LinearFit;
use crate::witness::{measure_kappa, run_theorem1, run_theorem2, run_viscous, theorem2_solution, toy_integrate, toy_solve, GrowthReport, GrowthRunOptions};
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;

pub const ANCHOR_INDICATORS: &str = "boundary values of the Wronskian on the real axis";
pub const ANCHOR_EIGENVALUES: &str = "embedded eigenvalues located by the real-axis indicators";
pub const ANCHOR_EVOLUTION: &str = "linearized Euler evolution norms";
pub const ANCHOR_DAMPING: &str = "inviscid damping of the continuous-spectrum part";
pub const ANCHOR_GROWTH: &str = "large amplification from plateau data";
pub const ANCHOR_ASSOCIATED: &str = "linear-in-time growth from associated function";
pub const ANCHOR_TOY: &str = "two-mode toy model of transient and linear growth";
pub const ANCHOR_FLOW: &str = "neutral flow tuned by Schrodinger ground state";
pub const ANCHOR_VISCOUS: &str = "persistence of amplification under small viscosity";

#[derive(Debug, Parser)]
#[command(name = "shearlab", version, about = "Embedded eigenvalues, growth and damping around monotone shear flows")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML or JSON run configuration (defaults apply when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    pub plot: bool,
    /// Override the grid node count.
    #[arg(long = "grid-n", global = true)]
    pub grid_n: Option<usize>,
    /// Override the grid half-width.
    #[arg(long = "grid-L", global = true)]
    pub grid_l: Option<f64>,
    #[arg(long = "tol-eigen", global = true)]
    pub tol_eigen: Option<f64>,
    #[arg(long = "tol-mult", global = true)]
    pub tol_mult: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Indicator table and embedded-eigenvalue scan.
    Analyze,
    /// Time evolution of the linearized equation.
    Evolve,
    /// Instability witnesses (plateau data or associated function).
    Witness,
    /// Two-mode toy model.
    Toy,
    /// Neutral flow construction.
    FlowBuild,
    /// Growth experiment under small viscosity.
    Viscous,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Evolve => "evolve",
            Command::Witness => "witness",
            Command::Toy => "toy",
            Command::FlowBuild => "flow-build",
            Command::Viscous => "viscous",
        }
    }
}

impl Cli {
    /// Loads the configuration and applies command-line overrides.
    pub fn resolve_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(n) = self.grid_n {
            cfg.grid.n = Some(n);
            cfg.grid.h = None;
        }
        if let Some(l) = self.grid_l {
            cfg.grid.l = l;
        }
        if let Some(t) = self.tol_eigen {
            cfg.tolerances.tol_eigen = t;
        }
        if let Some(t) = self.tol_mult {
            cfg.tolerances.tol_mult = t;
        }
        Ok(cfg)
    }
}

/// Runs one subcommand and returns the rendered files (nothing is written).
pub fn run_command(command: Command, cfg: &RunConfig, plot: bool) -> Result<OutputSet> {
    let hash = config_hash(cfg)?;
    let header = Header::new(command.name(), "", &hash, &cfg.tolerances.listing());
    match command {
        Command::Analyze => cmd_analyze(cfg, &header, plot),
        Command::Evolve => cmd_evolve(cfg, &header, plot),
        Command::Witness => cmd_witness(cfg, &header, plot),
        Command::Toy => cmd_toy(cfg, &header, plot),
        Command::FlowBuild => cmd_flow_build(cfg, &header, plot),
        Command::Viscous => cmd_viscous(cfg, &header, plot),
    }
}

/// Parses arguments, runs, writes files; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = cli.resolve_config().and_then(|cfg| run_command(cli.command, &cfg, cli.plot)).and_then(|files| files.write(&cli.out));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("shearlab {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

fn flow_of(cfg: &RunConfig) -> Result<ShearFlow> {
    Ok(cfg.flow.build()?.0)
}

fn locate(flow: &ShearFlow, c_star: f64, cfg: &RunConfig) -> Result<EigenvalueReport> {
    let tol = cfg.tolerances.indicators();
    let (j1, j2) = j1j2(flow, c_star, &cfg.tolerances.march())?;
    if j1 * j1 + j2 * j2 > tol.tol_eigen {
        return Err(Error::Hypothesis(format!(
            "no embedded eigenvalue at c = {c_star}: J1² + J2² = {:e} exceeds tol_eigen = {:e}",
            j1 * j1 + j2 * j2,
            tol.tol_eigen
        )));
    }
    report_at(flow, c_star, &tol, &cfg.tolerances.march())
}

#[derive(Serialize)]
struct AnalyzeSummary<'a> {
    flow: &'a str,
    c_range: (f64, f64),
    eigenvalues: Vec<EigenvalueReport>,
}

fn cmd_analyze(cfg: &RunConfig, header: &Header, plot: bool) -> Result<OutputSet> {
    let flow = flow_of(cfg)?;
    let a = &cfg.analyze;
    let range = a.c_range.unwrap_or((flow.b(-3.0), flow.b(3.0)));
    if !(range.1 > range.0) || a.samples < 2 {
        return Err(config_err("analyze needs c_range with c_lo < c_hi and samples ≥ 2"));
    }
    let tol = cfg.tolerances.indicators();
    let opts = cfg.tolerances.march();
    let cs: Vec<f64> = (0..a.samples).map(|k| range.0 + (range.1 - range.0) * k as f64 / (a.samples - 1) as f64).collect();
    let rows = indicator_table(&flow, &cs, None, &tol, &opts)?;
    let eig = scan_embedded(&flow, range, a.coarse_n, &tol, &opts)?;
    let mut t = Table::new(&["c_r", "J1", "J2", "J1sq_plus_J2sq", "pi1", "pi2", "dJ1", "dJ2"]);
    for r in &rows {
        t.push(vec![r.c_r, r.j1, r.j2, r.j1 * r.j1 + r.j2 * r.j2, r.pi1, r.pi2, r.dj1, r.dj2]);
    }
    let mut out = OutputSet::new();
    out.csv("indicators.csv", &header.with_anchor(ANCHOR_INDICATORS), &t);
    out.json("eigenvalues.json", &header.with_anchor(ANCHOR_EIGENVALUES), &AnalyzeSummary { flow: &flow.label, c_range: range, eigenvalues: eig })?;
    if plot {
        let j1: Vec<f64> = rows.iter().map(|r| r.j1).collect();
        let j2: Vec<f64> = rows.iter().map(|r| r.j2).collect();
        let s: Vec<f64> = rows.iter().map(|r| r.j1 * r.j1 + r.j2 * r.j2).collect();
        let h = header.with_anchor(ANCHOR_INDICATORS);
        out.svg("indicators.svg", render_svg(&h, "J1 and J2", "c_r", "value", &[Series::new("J1", &cs, &j1), Series::new("J2", &cs, &j2)], Axes::default()));
        out.svg("indicator_sum.svg", render_svg(&h, "J1^2 + J2^2", "c_r", "value", &[Series::new("J1^2+J2^2", &cs, &s)], Axes { log_x: false, log_y: true }));
    }
    Ok(out)
}

#[derive(Serialize)]
struct EvolveSummary {
    flow: String,
    n: usize,
    h: f64,
    l: f64,
    method: crate::evolution::Method,
    nu: f64,
    dt: Option<f64>,
    growth_bound_rate: f64,
    gronwall_constant: f64,
    decomposition: Option<DecompositionSummary>,
}

#[derive(Serialize)]
struct DecompositionSummary {
    c_star: f64,
    projection: num_complex::Complex64,
    damping_fit_l2: Option<LinearFit>,
    damping_fit_h1: Option<LinearFit>,
}

fn cmd_evolve(cfg: &RunConfig, header: &Header, plot: bool) -> Result<OutputSet> {
    let flow = flow_of(cfg)?;
    let grid = cfg.grid.grid()?;
    let e = &cfg.evolve;
    let op = build_operator(&flow, &grid, e.nu)?;
    let forcing = e.initial.forcing()?;
    let omega_in = Field::from_real_fn(grid, |y| forcing.eval(y));
    let times = e.times.times()?;
    let keep = e.snapshots || e.decompose_at.is_some();
    let trace = evolve(&op, &omega_in, &times, e.method, &EvolveOptions { cfl: cfg.tolerances.cfl, snapshots: keep, ..Default::default() })?;

    let decomposition = match e.decompose_at {
        Some(c) => {
            let rep = locate(&flow, c, cfg)?;
            if rep.multiplicity != Multiplicity::Simple {
                return Err(Error::Hypothesis("decomposition needs a simple embedded eigenvalue".into()));
            }
            Some(decompose_psi(&flow, &forcing, &trace, &rep, &cfg.tolerances.march())?)
        }
        None => None,
    };
    let mut cols = vec!["t", "omega_l2", "omega_linf", "omega_h2", "psi_l2", "psi_linf", "psi_h1"];
    if decomposition.is_some() {
        cols.extend(["psi2_l2", "psi2_h1"]);
    }
    let mut t = Table::new(&cols);
    for k in 0..trace.times.len() {
        let mut row = vec![trace.times[k], trace.omega_l2[k], trace.omega_linf[k], trace.omega_h2[k], trace.psi_l2[k], trace.psi_linf[k], trace.psi_h1[k]];
        if let Some(d) = &decomposition {
            row.extend([d.psi2_l2[k], d.psi2_h1[k]]);
        }
        t.push(row);
    }
    let anchor = if decomposition.is_some() { ANCHOR_DAMPING } else { ANCHOR_EVOLUTION };
    let h = header.with_anchor(anchor);
    let mut out = OutputSet::new();
    out.csv("trace.csv", &h, &t);
    if e.snapshots {
        let mut cols: Vec<String> = vec!["y".into()];
        for k in 0..times.len() {
            cols.push(format!("re_{k}"));
            cols.push(format!("im_{k}"));
        }
        let mut s = Table { columns: cols, rows: Vec::new() };
        for j in 0..grid.n {
            let mut row = vec![grid.y(j)];
            for w in &trace.omega {
                row.extend([w.values[j].re, w.values[j].im]);
            }
            s.push(row);
        }
        out.csv("omega_snapshots.csv", &h, &s);
    }
    let window = |t0: f64, t1: f64| times.iter().any(|t| *t <= t0 * 1.000001) && times.iter().any(|t| *t >= t1 * 0.999999);
    let summary = EvolveSummary {
        flow: flow.label.clone(),
        n: grid.n,
        h: grid.h,
        l: grid.l,
        method: trace.method,
        nu: e.nu,
        dt: trace.dt,
        growth_bound_rate: op.growth_bound_rate(),
        gronwall_constant: gronwall_constant(&trace),
        decomposition: decomposition.as_ref().map(|d| DecompositionSummary {
            c_star: d.c_star,
            projection: d.projection,
            damping_fit_l2: window(10.0, 100.0).then(|| d.damping_fit(10.0, 100.0)),
            damping_fit_h1: window(10.0, 100.0).then(|| d.h1_fit(10.0, 100.0)),
        }),
    };
    out.json("evolve.json", &h, &summary)?;
    if plot {
        let log = times.first().is_some_and(|t| *t > 0.0) || times.len() > 2 && times[2] / times[1] > 1.5;
        let xs: Vec<f64> = times.clone();
        let mut ser = vec![Series::new("|omega|_L2", &xs, &trace.omega_l2), Series::new("|psi|_L2", &xs, &trace.psi_l2)];
        if let Some(d) = &decomposition {
            ser.push(Series::new("|psi2|_L2", &xs, &d.psi2_l2));
            ser.push(Series::new("|psi2|_H1", &xs, &d.psi2_h1));
        }
        out.svg("trace.svg", render_svg(&h, "norm histories", "t", "norm", &ser, Axes { log_x: log, log_y: log }));
    }
    Ok(out)
}

#[derive(Serialize)]
struct WitnessSummary {
    flow: String,
    eigenvalue: EigenvalueReport,
    kappa: Option<f64>,
    kappa_measured: bool,
    growth: Vec<GrowthReport>,
    associated: Option<crate::witness::Theorem2Report>,
    associated_norms: Option<(f64, f64, f64)>,
}

fn cmd_witness(cfg: &RunConfig, header: &Header, plot: bool) -> Result<OutputSet> {
    let flow = flow_of(cfg)?;
    let grid = cfg.grid.grid()?;
    let w = &cfg.witness;
    let opts = cfg.tolerances.march();
    let rep = locate(&flow, w.c_star, cfg)?;
    let mut out = OutputSet::new();
    let mut summary = WitnessSummary { flow: flow.label.clone(), eigenvalue: rep.clone(), kappa: None, kappa_measured: false, growth: Vec::new(), associated: None, associated_norms: None };
    match rep.multiplicity {
        Multiplicity::Simple => {
            let go = GrowthRunOptions { horizon: w.horizon, output_dt: w.output_dt, cfl: cfg.tolerances.cfl };
            let kappa = match w.kappa {
                Some(k) => k,
                None => {
                    summary.kappa_measured = true;
                    measure_kappa(&flow, 2.0, &grid, &rep, &go, &opts)?
                }
            };
            summary.kappa = Some(kappa);
            let h = header.with_anchor(ANCHOR_GROWTH);
            let mut series = Vec::new();
            for &m in &w.m {
                let g = run_theorem1(&flow, m, &grid, Some(&rep), Some(kappa), &go, &opts)?;
                let mut t = Table::new(&["t", "amp_l2", "amp_linf", "target"]);
                for k in 0..g.times.len() {
                    t.push(vec![g.times[k], g.amp_l2[k], g.amp_linf[k], kappa * m]);
                }
                out.csv(&format!("growth_M{}.csv", tag(m)), &h, &t);
                series.push(Series::new(&format!("M={m} L2"), &g.times, &g.amp_l2));
                series.push(Series::new(&format!("M={m} Linf"), &g.times, &g.amp_linf));
                summary.growth.push(g);
            }
            if plot {
                out.svg("growth.svg", render_svg(&h, "amplification", "t", "|omega(t)|/|omega_in|", &series, Axes::default()));
            }
        }
        Multiplicity::Multiple => {
            let sol = theorem2_solution(&flow, &rep, &grid, cfg.tolerances.mismatch_tol, &opts)?;
            let op = build_operator(&flow, &grid, 0.0)?;
            let r = run_theorem2(&sol, &op, w.fit_window, Some(w.t_check), cfg.tolerances.cfl)?;
            let h = header.with_anchor(ANCHOR_ASSOCIATED);
            let mut t = Table::new(&["t", "w_l2", "w_linf", "fit_l2"]);
            for k in 0..r.times.len() {
                t.push(vec![r.times[k], r.w_l2[k], r.w_linf[k], r.fit_l2.slope * r.times[k] + r.fit_l2.intercept]);
            }
            out.csv("associated.csv", &h, &t);
            let mut p = Table::new(&["y", "gamma", "gamma_c", "omega_star", "eta"]);
            for j in 0..grid.n {
                p.push(vec![grid.y(j), sol.gamma[j], sol.gamma_c[j], sol.omega_star[j], sol.eta[j]]);
            }
            out.csv("associated_profile.csv", &h, &p);
            if plot {
                let fit: Vec<f64> = r.times.iter().map(|t| r.fit_l2.slope * t + r.fit_l2.intercept).collect();
                out.svg(
                    "associated.svg",
                    render_svg(&h, "associated-function growth", "t", "norm", &[Series::new("|w|_L2", &r.times, &r.w_l2), Series::new("linear fit", &r.times, &fit), Series::new("|w|_Linf", &r.times, &r.w_linf)], Axes::default()),
                );
            }
            summary.associated_norms = Some((sol.omega_star_l2, sol.omega_star_linf, sol.eta_l2));
            summary.associated = Some(r);
        }
    }
    out.json("witness.json", &header.with_anchor(if summary.associated.is_some() { ANCHOR_ASSOCIATED } else { ANCHOR_GROWTH }), &summary)?;
    Ok(out)
}

fn tag(v: f64) -> String {
    let s = format!("{v}");
    s.replace('.', "p").replace('-', "m")
}

#[derive(Serialize)]
struct ToySummary {
    variant: crate::witness::ToyVariant,
    nu: f64,
    init: (f64, f64),
    peak_phi: f64,
    peak_time: f64,
    phi_at_inverse_nu: Option<f64>,
    phi_at_inverse_nu_numeric: Option<f64>,
    max_numeric_error: f64,
}

fn cmd_toy(cfg: &RunConfig, header: &Header, plot: bool) -> Result<OutputSet> {
    let c = &cfg.toy;
    if !(c.t_end > 0.0) || c.count == 0 {
        return Err(config_err("toy needs t_end > 0 and count ≥ 1"));
    }
    let mut t = Table::new(&["t", "psi", "phi", "psi_numeric", "phi_numeric"]);
    let (mut peak, mut tpeak, mut err) = (f64::NEG_INFINITY, 0.0, 0.0f64);
    let (mut ts, mut phis) = (Vec::new(), Vec::new());
    for k in 0..=c.count {
        let time = c.t_end * k as f64 / c.count as f64;
        let (p, f) = toy_solve(c.variant, c.nu, c.init, time)?;
        let (pn, fnum) = toy_integrate(c.variant, c.nu, c.init, time)?;
        err = err.max((p - pn).abs()).max((f - fnum).abs() / f.abs().max(1.0));
        if f > peak {
            peak = f;
            tpeak = time;
        }
        ts.push(time);
        phis.push(f);
        t.push(vec![time, p, f, pn, fnum]);
    }
    let inv = (c.nu > 0.0).then(|| 1.0 / c.nu);
    let summary = ToySummary {
        variant: c.variant,
        nu: c.nu,
        init: c.init,
        peak_phi: peak,
        peak_time: tpeak,
        phi_at_inverse_nu: inv.map(|t| toy_solve(c.variant, c.nu, c.init, t).map(|v| v.1)).transpose()?,
        phi_at_inverse_nu_numeric: inv.map(|t| toy_integrate(c.variant, c.nu, c.init, t).map(|v| v.1)).transpose()?,
        max_numeric_error: err,
    };
    let h = header.with_anchor(ANCHOR_TOY);
    let mut out = OutputSet::new();
    out.csv("toy.csv", &h, &t);
    out.json("toy.json", &h, &summary)?;
    if plot {
        out.svg("toy.svg", render_svg(&h, "toy model", "t", "phi", &[Series::new("phi", &ts, &phis)], Axes::default()));
    }
    Ok(out)
}

#[derive(Serialize)]
struct FlowBuildSummary {
    report: crate::flow::NeutralBuildReport,
    j1_at_zero: f64,
    j2_at_zero: f64,
}

fn cmd_flow_build(cfg: &RunConfig, header: &Header, plot: bool) -> Result<OutputSet> {
    if !matches!(cfg.flow, FlowConfig::NeutralBuild { .. }) {
        return Err(config_err("flow-build needs a flow of kind `neutral_build`"));
    }
    let (flow, report) = cfg.flow.build()?;
    let report = report.ok_or_else(|| config_err("flow construction produced no report"))?;
    let (j1, j2) = j1j2(&flow, 0.0, &cfg.tolerances.march())?;
    let grid = cfg.grid.grid()?;
    let mut t = Table::new(&["y", "b", "b1", "b2", "b2_over_b"]);
    let (mut ys, mut bs) = (Vec::new(), Vec::new());
    for j in 0..grid.n {
        let y = grid.y(j);
        let d = flow.derivs(y);
        t.push(vec![y, d[0], d[1], d[2], flow.potential(y, 0.0)]);
        ys.push(y);
        bs.push(d[0]);
    }
    let h = header.with_anchor(ANCHOR_FLOW);
    let mut out = OutputSet::new();
    out.csv("flow.csv", &h, &t);
    out.json("flow_build.json", &h, &FlowBuildSummary { report, j1_at_zero: j1, j2_at_zero: j2 })?;
    if plot {
        out.svg("flow.svg", render_svg(&h, "profile", "y", "b", &[Series::new("b", &ys, &bs)], Axes::default()));
    }
    Ok(out)
}

fn cmd_viscous(cfg: &RunConfig, header: &Header, plot: bool) -> Result<OutputSet> {
    let flow = flow_of(cfg)?;
    let grid = cfg.grid.grid()?;
    let v = &cfg.viscous;
    let go = GrowthRunOptions { horizon: v.horizon, output_dt: v.output_dt, cfl: cfg.tolerances.cfl };
    let rep = locate(&flow, cfg.witness.c_star, cfg)?;
    let kappa = match v.kappa {
        Some(k) => k,
        None => measure_kappa(&flow, 2.0, &grid, &rep, &go, &cfg.tolerances.march())?,
    };
    let r = run_viscous(&flow, v.m, &v.nus, &grid, Some(kappa), &go, Some(&v.order_nus))?;
    let h = header.with_anchor(ANCHOR_VISCOUS);
    let mut t = Table::new(&["nu", "amp_l2", "amp_linf", "amp_l2_at_T", "deviation", "field_deviation"]);
    for (k, g) in r.runs.iter().enumerate() {
        t.push(vec![r.nus[k], g.amplification_l2, g.amplification_linf, *g.amp_l2.last().unwrap(), r.deviation[k], r.field_deviation[k]]);
    }
    let mut hist_cols = vec!["t".to_string(), "amp_l2_inviscid".to_string()];
    hist_cols.extend(r.nus.iter().map(|n| format!("amp_l2_nu_{}", crate::io::fmt17(*n))));
    let mut hist = Table { columns: hist_cols, rows: Vec::new() };
    for k in 0..r.inviscid.times.len() {
        let mut row = vec![r.inviscid.times[k], r.inviscid.amp_l2[k]];
        row.extend(r.runs.iter().map(|g| g.amp_l2[k]));
        hist.push(row);
    }
    let mut out = OutputSet::new();
    out.csv("viscous.csv", &h, &t);
    out.csv("viscous_histories.csv", &h, &hist);
    out.json("viscous.json", &h, &r)?;
    if plot {
        let mut ser = vec![Series::new("nu=0", &r.inviscid.times, &r.inviscid.amp_l2)];
        for g in &r.runs {
            ser.push(Series::new(&format!("nu={}", g.nu), &g.times, &g.amp_l2));
        }
        out.svg("viscous.svg", render_svg(&h, "amplification under viscosity", "t", "|omega(t)|/|omega_in|", &ser, Axes::default()));
    }
    Ok(out)
}
