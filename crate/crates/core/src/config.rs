//! Run configuration (TOML or JSON); a run is a pure function of its config.

use crate::error::{config_err, Result};
use crate::evolution::{log_times, uniform_times, Method};
use crate::flow::{build_neutral_flow, make_profile, read_tabulated_csv, GaussTerm, NeutralBuildOptions, NeutralBuildReport, ProfileSpec, ShearFlow};
use crate::grid::Grid;
use crate::indicators::IndicatorTolerances;
use crate::rayleigh::{Forcing, MarchOptions};
use crate::witness::{theorem1_data, ToyVariant};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Flow description: an explicit profile or a neutral-family construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlowConfig {
    Couette {
        #[serde(default)]
        shift: f64,
    },
    NeutralFamily {
        gamma0: f64,
        gamma1: f64,
        #[serde(rename = "N")]
        n: f64,
        #[serde(default = "one")]
        theta: f64,
        #[serde(default)]
        shift: f64,
    },
    GaussianSum {
        terms: Vec<GaussTerm>,
        #[serde(default)]
        shift: f64,
    },
    Tabulated {
        y: Vec<f64>,
        b: Vec<f64>,
    },
    /// Two-column CSV `y,b`.
    TabulatedCsv { path: String },
    /// Neutral family with `N` tuned so that the ground eigenvalue of `-d² + b''/b` is `target`.
    NeutralBuild {
        gamma0: f64,
        gamma1: f64,
        #[serde(default = "one")]
        theta: f64,
        #[serde(default = "minus_one")]
        target: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn minus_one() -> f64 {
    -1.0
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig::Couette { shift: 0.0 }
    }
}

impl FlowConfig {
    /// Builds the flow; the construction report is returned for `neutral_build`.
    pub fn build(&self) -> Result<(ShearFlow, Option<NeutralBuildReport>)> {
        let spec = match self {
            FlowConfig::Couette { shift } => ProfileSpec::Couette { shift: *shift },
            FlowConfig::NeutralFamily { gamma0, gamma1, n, theta, shift } => {
                ProfileSpec::NeutralFamily { gamma0: *gamma0, gamma1: *gamma1, n: *n, theta: *theta, shift: *shift }
            }
            FlowConfig::GaussianSum { terms, shift } => ProfileSpec::GaussianSum { terms: terms.clone(), shift: *shift },
            FlowConfig::Tabulated { y, b } => ProfileSpec::Tabulated { y: y.clone(), b: b.clone() },
            FlowConfig::TabulatedCsv { path } => read_tabulated_csv(Path::new(path))?,
            FlowConfig::NeutralBuild { gamma0, gamma1, theta, target } => {
                let (f, _, rep) = build_neutral_flow(*gamma0, *gamma1, *theta, *target, &NeutralBuildOptions::default())?;
                return Ok((f, Some(rep)));
            }
        };
        Ok((make_profile(&spec)?, None))
    }
}

/// Uniform grid on `[-L, L]`, given by node count `n` or spacing `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub h: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { l: 12.0, n: None, h: Some(0.01) }
    }
}

impl GridConfig {
    pub fn grid(&self) -> Result<Grid> {
        match (self.n, self.h) {
            (Some(n), _) => Grid::new(self.l, n),
            (None, Some(h)) => Grid::with_spacing(self.l, h),
            (None, None) => Err(config_err("grid needs either `n` or `h`")),
        }
    }
}

/// Every numerical tolerance that affects outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub tol_eigen: f64,
    pub tol_mult: f64,
    pub fd_step: f64,
    pub march_rtol: f64,
    pub march_s0: f64,
    pub pv_window: f64,
    pub cfl: f64,
    /// Allowed mismatch of `∂_cΓ` across the critical layer.
    pub mismatch_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let i = IndicatorTolerances::default();
        let m = MarchOptions::default();
        Self {
            tol_eigen: i.tol_eigen,
            tol_mult: i.tol_mult,
            fd_step: i.fd_step,
            march_rtol: m.rtol,
            march_s0: m.s0,
            pv_window: m.pv_window,
            cfl: 0.5,
            mismatch_tol: 1e-4,
        }
    }
}

impl Tolerances {
    pub fn indicators(&self) -> IndicatorTolerances {
        IndicatorTolerances { tol_eigen: self.tol_eigen, tol_mult: self.tol_mult, fd_step: self.fd_step }
    }

    pub fn march(&self) -> MarchOptions {
        MarchOptions { rtol: self.march_rtol, s0: self.march_s0, pv_window: self.pv_window }
    }

    pub fn listing(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("tol_eigen", self.tol_eigen),
            ("tol_mult", self.tol_mult),
            ("fd_step", self.fd_step),
            ("march_rtol", self.march_rtol),
            ("march_s0", self.march_s0),
            ("pv_window", self.pv_window),
            ("cfl", self.cfl),
            ("mismatch_tol", self.mismatch_tol),
        ]
    }
}

/// `(amp + slope (y - center)) exp(-(y - center)²/width²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpTerm {
    #[serde(default)]
    pub amp: f64,
    #[serde(default)]
    pub slope: f64,
    #[serde(default)]
    pub center: f64,
    pub width: f64,
}

/// Initial vorticity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    Bumps { terms: Vec<BumpTerm> },
    /// Plateau witness for amplification target `M`.
    Witness {
        #[serde(rename = "M")]
        m: f64,
    },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::Bumps {
            terms: vec![BumpTerm { amp: 0.0, slope: 1.0, center: 0.3, width: std::f64::consts::FRAC_1_SQRT_2 }, BumpTerm { amp: 0.5, slope: 0.0, center: 0.0, width: 1.0 }],
        }
    }
}

impl InitialData {
    pub fn forcing(&self) -> Result<Forcing> {
        match self {
            InitialData::Bumps { terms } => {
                if terms.is_empty() || terms.iter().any(|t| !(t.width > 0.0)) {
                    return Err(config_err("bump initial data needs at least one term with positive width"));
                }
                let lo = terms.iter().map(|t| t.center - 8.5 * t.width).fold(f64::INFINITY, f64::min);
                let hi = terms.iter().map(|t| t.center + 8.5 * t.width).fold(f64::NEG_INFINITY, f64::max);
                let terms = terms.clone();
                Ok(Forcing::new(
                    move |y| {
                        terms.iter().map(|t| {
                            let x = y - t.center;
                            (t.amp + t.slope * x) * (-(x * x) / (t.width * t.width)).exp()
                        }).sum()
                    },
                    (lo, hi),
                    Vec::new(),
                ))
            }
            InitialData::Witness { m } => Ok(theorem1_data(*m)?.forcing()),
        }
    }
}

/// Output-time schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeGrid {
    Uniform { t_end: f64, count: usize },
    /// `count` log-spaced times in `[t0, t1]`, optionally preceded by `t = 0`.
    Log {
        t0: f64,
        t1: f64,
        count: usize,
        #[serde(default = "yes")]
        with_zero: bool,
    },
    List { times: Vec<f64> },
}

fn yes() -> bool {
    true
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid::Log { t0: 1.0, t1: 100.0, count: 21, with_zero: true }
    }
}

impl TimeGrid {
    pub fn times(&self) -> Result<Vec<f64>> {
        let t = match self {
            TimeGrid::Uniform { t_end, count } => {
                if !(*t_end > 0.0) || *count == 0 {
                    return Err(config_err("uniform times need t_end > 0 and count ≥ 1"));
                }
                uniform_times(*t_end, *count)
            }
            TimeGrid::Log { t0, t1, count, with_zero } => {
                if !(*t0 > 0.0 && t1 > t0) || *count < 2 {
                    return Err(config_err("log times need 0 < t0 < t1 and count ≥ 2"));
                }
                log_times(*t0, *t1, *count, *with_zero)
            }
            TimeGrid::List { times } => times.clone(),
        };
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeConfig {
    /// Real interval scanned for embedded eigenvalues; defaults to `[b(-3), b(3)]`.
    pub c_range: Option<(f64, f64)>,
    pub coarse_n: usize,
    /// Points of the indicator table.
    pub samples: usize,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        Self { c_range: None, coarse_n: 41, samples: 81 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub method: Method,
    pub nu: f64,
    pub times: TimeGrid,
    pub initial: InitialData,
    /// Subtract the eigenspace part at this embedded eigenvalue (simple multiplicity).
    pub decompose_at: Option<f64>,
    /// Write `ω` snapshots as a CSV matrix.
    pub snapshots: bool,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self { method: Method::Rk4, nu: 0.0, times: TimeGrid::default(), initial: InitialData::default(), decompose_at: None, snapshots: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WitnessConfig {
    /// Location of the embedded eigenvalue.
    pub c_star: f64,
    /// Amplification targets.
    #[serde(rename = "M")]
    pub m: Vec<f64>,
    /// Frozen flow constant; measured at `M = 2` when absent.
    pub kappa: Option<f64>,
    pub horizon: f64,
    pub output_dt: f64,
    /// Fit window of the linear growth (multiple eigenvalue).
    pub fit_window: (f64, f64),
    /// Time of the evolution cross-check (multiple eigenvalue).
    pub t_check: f64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self { c_star: 0.0, m: vec![2.0, 5.0], kappa: None, horizon: 100.0, output_dt: 1.0, fit_window: (10.0, 50.0), t_check: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToyConfig {
    pub variant: ToyVariant,
    pub nu: f64,
    pub init: (f64, f64),
    pub t_end: f64,
    pub count: usize,
}

impl Default for ToyConfig {
    fn default() -> Self {
        Self { variant: ToyVariant::A1, nu: 0.01, init: (1.0, 0.0), t_end: 400.0, count: 400 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ViscousConfig {
    #[serde(rename = "M")]
    pub m: f64,
    pub nus: Vec<f64>,
    /// Subset of `nus` used for the convergence-order fit.
    pub order_nus: Vec<f64>,
    pub kappa: Option<f64>,
    pub horizon: f64,
    pub output_dt: f64,
}

impl Default for ViscousConfig {
    fn default() -> Self {
        Self { m: 2.0, nus: vec![1e-1, 3e-2, 1e-2, 1e-3, 1e-4], order_nus: vec![1e-2, 1e-3, 1e-4], kappa: None, horizon: 20.0, output_dt: 1.0 }
    }
}

/// Complete, serializable description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub flow: FlowConfig,
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub analyze: AnalyzeConfig,
    pub evolve: EvolveConfig,
    pub witness: WitnessConfig,
    pub toy: ToyConfig,
    pub viscous: ViscousConfig,
    /// Seed for randomized property sampling.
    pub seed: u64,
}

impl RunConfig {
    /// Parses TOML or JSON (by extension; content sniffing otherwise).
    pub fn parse(text: &str, path: Option<&Path>) -> Result<Self> {
        let ext = path.and_then(|p| p.extension()).and_then(|e| e.to_str()).unwrap_or("");
        let json = ext.eq_ignore_ascii_case("json") || (ext.is_empty() && text.trim_start().starts_with('{'));
        let name = path.map(|p| p.display().to_string()).unwrap_or_else(|| "<config>".into());
        if json {
            serde_json::from_str(text).map_err(|e| config_err(format!("{name}:{}:{}: {e}", e.line(), e.column())))
        } else {
            toml::from_str(text).map_err(|e| {
                let loc = e.span().map(|s| line_col(text, s.start)).map(|(l, c)| format!("{l}:{c}: ")).unwrap_or_default();
                config_err(format!("{name}:{loc}{}", e.message()))
            })
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, Some(path))
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, col)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let text = r#"
            seed = 7
            [flow]
            kind = "neutral_family"
            gamma0 = 0.5
            gamma1 = 0.3
            N = 2.0
            [grid]
            L = 8.0
            n = 129
            [tolerances]
            tol_eigen = 1e-7
            [toy]
            variant = "a2"
        "#;
        let c = RunConfig::parse(text, Some(Path::new("x.toml"))).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.tolerances.tol_eigen, 1e-7);
        assert_eq!(c.tolerances.tol_mult, 1e-4);
        assert_eq!(c.toy.variant, ToyVariant::A2);
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(RunConfig::parse(&j, Some(Path::new("x.json"))).unwrap(), c);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = RunConfig::parse("[grid]\nL = 8.0\nbogus = 1\n", Some(Path::new("bad.toml"))).unwrap_err();
        assert_eq!(e.exit_code(), 4);
        assert!(e.to_string().contains("bad.toml:3:"), "{e}");
    }
}
