//! Monotone shear-flow profiles, validation, and neutral-flow construction.

use crate::error::{config_err, nonconv, Error, Result};
use crate::grid::{Field, Grid};
use crate::io::fmt17;
use crate::numerics::quad::gauss_legendre;
use crate::numerics::spline::CubicSpline;
use crate::numerics::tridiag;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// One Gaussian building block: contributes `amp * exp(-y^2 / width^2)` to `b'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussTerm {
    pub amp: f64,
    pub width: f64,
}

/// Serializable profile description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileSpec {
    Couette {
        #[serde(default)]
        shift: f64,
    },
    /// `b(y) = y + N (∫ γ₀ e^{-z²/γ₀²} - θ ∫ γ₀γ₁² e^{-z²/(γ₀γ₁)²})`; θ = 1 is the symmetric case.
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
}

fn one() -> f64 {
    1.0
}

/// Parameters of the neutral family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeutralFlowParams {
    pub gamma0: f64,
    pub gamma1: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub theta: f64,
    pub target_eigenvalue: f64,
}

impl NeutralFlowParams {
    pub fn admissible(&self) -> bool {
        self.gamma0 > 0.0
            && self.gamma1 > 0.0
            && self.n > 0.0
            && self.theta >= 0.0
            && 1.0 - self.theta * self.n * self.gamma0 * self.gamma1 * self.gamma1 > 0.0
    }
}

#[derive(Debug)]
struct Table {
    spline: CubicSpline,
    d2: CubicSpline,
    lo: f64,
    hi: f64,
    dx: f64,
}

#[derive(Debug, Clone)]
enum Repr {
    Gauss { shift: f64, terms: Vec<GaussTerm> },
    Table(Arc<Table>),
}

/// Immutable monotone profile `b` with derivatives up to order four.
#[derive(Debug, Clone)]
pub struct ShearFlow {
    repr: Repr,
    pub label: String,
    /// Monotonicity constant: `c_m <= b' <= 1/c_m` on the sampled window.
    pub c_m: f64,
    /// Decay scale of `b''` and higher derivatives.
    pub decay_rate: f64,
    /// Beyond `|y| > window`, `b''`, `b'''`, `b''''` are below roundoff.
    pub window: f64,
}

const SQRT_PI_2: f64 = 0.886_226_925_452_758;

impl ShearFlow {
    pub fn couette() -> Self {
        Self::gaussian_sum(Vec::new(), 0.0, "couette".into())
    }

    pub fn gaussian_sum(terms: Vec<GaussTerm>, shift: f64, label: String) -> Self {
        let wmax = terms.iter().fold(0.0f64, |m, t| m.max(t.width.abs()));
        let window = if terms.is_empty() { 1.0 } else { 6.5 * wmax };
        let decay_rate = if terms.is_empty() { f64::INFINITY } else { 1.0 / wmax };
        let mut f = Self { repr: Repr::Gauss { shift, terms }, label, c_m: 1.0, decay_rate, window };
        f.c_m = f.measure_cm(-window - 1.0, window + 1.0, 4001);
        f
    }

    pub fn neutral(p: &NeutralFlowParams, shift: f64) -> Self {
        let terms = vec![
            GaussTerm { amp: p.n * p.gamma0, width: p.gamma0 },
            GaussTerm { amp: -p.theta * p.n * p.gamma0 * p.gamma1 * p.gamma1, width: p.gamma0 * p.gamma1 },
        ];
        let label = format!(
            "neutral_family(gamma0={}, gamma1={}, N={}, theta={})",
            fmt17(p.gamma0),
            fmt17(p.gamma1),
            fmt17(p.n),
            fmt17(p.theta)
        );
        Self::gaussian_sum(terms, shift, label)
    }

    pub fn tabulated(y: &[f64], b: &[f64], label: String) -> Result<Self> {
        if y.len() != b.len() {
            return Err(config_err("tabulated profile: y and b lengths differ"));
        }
        if y.len() < 8 {
            return Err(config_err("tabulated profile: need at least 8 points"));
        }
        for i in 1..b.len() {
            if y[i] <= y[i - 1] {
                return Err(config_err(format!("tabulated profile: y not increasing at row {i}")));
            }
            if b[i] <= b[i - 1] {
                return Err(config_err(format!("tabulated profile: non-monotone data at row {i}")));
            }
        }
        let spline = CubicSpline::natural(y, b).map_err(|e| config_err(e.to_string()))?;
        let d2v: Vec<f64> = y.iter().map(|t| spline.eval_all(*t)[2]).collect();
        let d2 = CubicSpline::natural(y, &d2v).map_err(|e| config_err(e.to_string()))?;
        let lo = y[0];
        let hi = y[y.len() - 1];
        let dx = (hi - lo) / (y.len() - 1) as f64;
        let window = lo.abs().max(hi.abs());
        let mut f = Self {
            repr: Repr::Table(Arc::new(Table { spline, d2, lo, hi, dx })),
            label,
            c_m: 1.0,
            decay_rate: 1.0 / window.max(1.0),
            window,
        };
        f.c_m = f.measure_cm(lo, hi, 4 * y.len() + 1);
        Ok(f)
    }

    fn measure_cm(&self, lo: f64, hi: f64, n: usize) -> f64 {
        let mut mn = f64::INFINITY;
        let mut mx = f64::NEG_INFINITY;
        for k in 0..n {
            let y = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            let d = self.d1(y);
            mn = mn.min(d);
            mx = mx.max(d);
        }
        mn.min(1.0 / mx)
    }

    /// `[b, b', b'', b''', b'''']` at `y`.
    pub fn derivs(&self, y: f64) -> [f64; 5] {
        match &self.repr {
            Repr::Gauss { shift, terms } => {
                let mut out = [y + shift, 1.0, 0.0, 0.0, 0.0];
                for t in terms {
                    let s = t.width;
                    let u = y / s;
                    let g = (-u * u).exp();
                    let is2 = 1.0 / (s * s);
                    out[0] += t.amp * s * SQRT_PI_2 * libm::erf(u);
                    out[1] += t.amp * g;
                    out[2] += t.amp * (-2.0 * y * is2) * g;
                    out[3] += t.amp * (4.0 * y * y * is2 * is2 - 2.0 * is2) * g;
                    out[4] += t.amp * (-8.0 * y * y * y * is2 * is2 * is2 + 12.0 * y * is2 * is2) * g;
                }
                out
            }
            Repr::Table(t) => {
                let d = t.spline.eval_all(y);
                let e = t.d2.eval_all(y);
                let b4 = if y < t.lo || y > t.hi {
                    0.0
                } else {
                    let dl = t.d2.eval_all(y - 0.5 * t.dx)[1];
                    let dr = t.d2.eval_all(y + 0.5 * t.dx)[1];
                    (dr - dl) / t.dx
                };
                let b3 = if y < t.lo || y > t.hi { 0.0 } else { e[1] };
                [d[0], d[1], d[2], b3, b4]
            }
        }
    }

    #[inline]
    pub fn b(&self, y: f64) -> f64 {
        match &self.repr {
            Repr::Gauss { shift, terms } => {
                let mut v = y + shift;
                for t in terms {
                    v += t.amp * t.width * SQRT_PI_2 * libm::erf(y / t.width);
                }
                v
            }
            Repr::Table(t) => t.spline.eval(y),
        }
    }

    #[inline]
    pub fn d1(&self, y: f64) -> f64 {
        match &self.repr {
            Repr::Gauss { terms, .. } => {
                let mut v = 1.0;
                for t in terms {
                    let u = y / t.width;
                    v += t.amp * (-u * u).exp();
                }
                v
            }
            Repr::Table(t) => t.spline.eval_all(y)[1],
        }
    }

    /// `(b', b'')` at `y`.
    #[inline]
    pub fn d12(&self, y: f64) -> (f64, f64) {
        match &self.repr {
            Repr::Gauss { terms, .. } => {
                let mut v1 = 1.0;
                let mut v2 = 0.0;
                for t in terms {
                    let u = y / t.width;
                    let g = t.amp * (-u * u).exp();
                    v1 += g;
                    v2 += -2.0 * y / (t.width * t.width) * g;
                }
                (v1, v2)
            }
            Repr::Table(t) => {
                let d = t.spline.eval_all(y);
                (d[1], d[2])
            }
        }
    }

    pub fn d2(&self, y: f64) -> f64 {
        self.d12(y).1
    }

    /// n-th derivative, `n` in 0..=4.
    pub fn deriv(&self, y: f64, n: usize) -> f64 {
        self.derivs(y)[n]
    }

    /// `b(y) - b(y0)` without cancellation for nearby points.
    pub fn diff(&self, y: f64, y0: f64) -> f64 {
        let x = y - y0;
        if x == 0.0 {
            return 0.0;
        }
        if x.abs() < 0.05 {
            let (gx, gw) = gl10();
            let m = 0.5 * (y + y0);
            let hl = 0.5 * x;
            let mut s = 0.0;
            for i in 0..10 {
                s += gw[i] * self.d1(m + hl * gx[i]);
            }
            s * hl
        } else {
            self.b(y) - self.b(y0)
        }
    }

    /// `b'(y) - b'(y0)` without cancellation for nearby points.
    pub fn d1_diff(&self, y: f64, y0: f64) -> f64 {
        let x = y - y0;
        if x == 0.0 {
            return 0.0;
        }
        if x.abs() < 0.05 {
            let (gx, gw) = gl10();
            let m = 0.5 * (y + y0);
            let hl = 0.5 * x;
            let mut s = 0.0;
            for i in 0..10 {
                s += gw[i] * self.d2(m + hl * gx[i]);
            }
            s * hl
        } else {
            self.d1(y) - self.d1(y0)
        }
    }

    /// Asymptotic slope of `b` at `±∞` (sign selects the end).
    pub fn end_slope(&self, sign: f64) -> f64 {
        match &self.repr {
            Repr::Gauss { .. } => 1.0,
            Repr::Table(t) => self.d1(if sign > 0.0 { t.hi + 1.0 } else { t.lo - 1.0 }),
        }
    }

    /// Solves `b(y) = c` by safeguarded Newton iteration.
    pub fn invert(&self, c: f64) -> f64 {
        let mut y = match &self.repr {
            Repr::Gauss { shift, .. } => c - shift,
            Repr::Table(t) => {
                let (blo, bhi) = (t.spline.eval(t.lo), t.spline.eval(t.hi));
                t.lo + (c - blo) / (bhi - blo) * (t.hi - t.lo)
            }
        };
        let r0 = self.b(y) - c;
        let cm = self.c_m.max(1e-6);
        let mut lo = y - r0.abs() / cm - 1e-9;
        let mut hi = y + r0.abs() / cm + 1e-9;
        while self.b(lo) > c {
            lo -= 2.0 * (hi - lo) + 1.0;
        }
        while self.b(hi) < c {
            hi += 2.0 * (hi - lo) + 1.0;
        }
        for _ in 0..200 {
            let r = self.b(y) - c;
            if r == 0.0 {
                return y;
            }
            if r > 0.0 {
                hi = y;
            } else {
                lo = y;
            }
            let mut ny = y - r / self.d1(y);
            if !(ny > lo && ny < hi) {
                ny = 0.5 * (lo + hi);
            }
            if (ny - y).abs() <= 1e-16 * (1.0 + y.abs()) || hi - lo <= 4.0 * f64::EPSILON * (1.0 + y.abs()) {
                y = ny;
                break;
            }
            y = ny;
        }
        y
    }

    /// `b''/b` extended by continuity through the zero `y0` of `b`.
    pub fn potential(&self, y: f64, y0: f64) -> f64 {
        let x = y - y0;
        if x.abs() < 1e-4 {
            let d = self.derivs(y0);
            if d[2].abs() <= 1e-12 {
                return d[3] / d[1] + x * (d[4] / (2.0 * d[1]) - d[3] * d[2] / (2.0 * d[1] * d[1]));
            }
        }
        self.d2(y) / self.diff(y, y0)
    }
}

fn gl10() -> &'static (Vec<f64>, Vec<f64>) {
    use std::sync::OnceLock;
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(10))
}

/// Builds a flow from its serialized description.
pub fn make_profile(spec: &ProfileSpec) -> Result<ShearFlow> {
    match spec {
        ProfileSpec::Couette { shift } => {
            let mut f = ShearFlow::couette();
            if *shift != 0.0 {
                f = ShearFlow::gaussian_sum(Vec::new(), *shift, format!("couette(shift={})", fmt17(*shift)));
            }
            Ok(f)
        }
        ProfileSpec::NeutralFamily { gamma0, gamma1, n, theta, shift } => {
            let p = NeutralFlowParams { gamma0: *gamma0, gamma1: *gamma1, n: *n, theta: *theta, target_eigenvalue: -1.0 };
            if !p.admissible() {
                return Err(config_err(format!(
                    "neutral_family parameters not admissible: need gamma0, gamma1, N > 0 and 1 - theta*N*gamma0*gamma1^2 > 0 (got {gamma0}, {gamma1}, {n}, theta {theta})"
                )));
            }
            Ok(ShearFlow::neutral(&p, *shift))
        }
        ProfileSpec::GaussianSum { terms, shift } => {
            for t in terms {
                if !(t.width > 0.0) {
                    return Err(config_err("gaussian_sum: widths must be positive"));
                }
            }
            let f = ShearFlow::gaussian_sum(terms.clone(), *shift, "gaussian_sum".into());
            if f.c_m <= 0.0 {
                return Err(config_err("gaussian_sum: profile is not monotone"));
            }
            Ok(f)
        }
        ProfileSpec::Tabulated { y, b } => ShearFlow::tabulated(y, b, "tabulated".into()),
    }
}

/// Reads a two-column `(y, b)` CSV file (header and `#` lines skipped).
pub fn read_tabulated_csv(path: &std::path::Path) -> Result<ProfileSpec> {
    let text = std::fs::read_to_string(path)?;
    let mut y = Vec::new();
    let mut b = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = l.split(',').map(|s| s.trim()).collect();
        if cols.len() < 2 {
            return Err(config_err(format!("{}:{}: expected two columns", path.display(), lineno + 1)));
        }
        match (cols[0].parse::<f64>(), cols[1].parse::<f64>()) {
            (Ok(a), Ok(c)) => {
                y.push(a);
                b.push(c);
            }
            _ if y.is_empty() => continue,
            _ => return Err(config_err(format!("{}:{}: not a number", path.display(), lineno + 1))),
        }
    }
    Ok(ProfileSpec::Tabulated { y, b })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    /// Required lower bound on `b'` (and `1/b'`).
    pub min_slope: f64,
    /// Tail magnitude allowed for `b''..b''''` at the window edges.
    pub tail_tol: f64,
    pub samples: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { min_slope: 1e-3, tail_tol: 1e-10, samples: 20001 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub window: f64,
    pub min_bprime: f64,
    pub max_bprime: f64,
    pub c_m: f64,
    pub tail_b2: f64,
    pub tail_b3: f64,
    pub tail_b4: f64,
    pub monotone: bool,
    pub slope_bounds: bool,
    pub tails_decay: bool,
    pub pass: bool,
}

/// Checks the standing monotonicity and decay assumptions on `[-l, l]`.
pub fn validate(flow: &ShearFlow, l: f64, opts: &ValidationOptions) -> ValidationReport {
    let n = opts.samples.max(3);
    let mut mn = f64::INFINITY;
    let mut mx = f64::NEG_INFINITY;
    let mut monotone = true;
    let mut prev = f64::NEG_INFINITY;
    for k in 0..n {
        let y = -l + 2.0 * l * k as f64 / (n - 1) as f64;
        let d = flow.d1(y);
        mn = mn.min(d);
        mx = mx.max(d);
        let b = flow.b(y);
        if b <= prev {
            monotone = false;
        }
        prev = b;
    }
    let mut tails = [0.0f64; 3];
    for y in [-l, l] {
        let d = flow.derivs(y);
        for k in 0..3 {
            tails[k] = tails[k].max(d[k + 2].abs());
        }
    }
    let c_m = mn.min(1.0 / mx);
    let slope_bounds = c_m >= opts.min_slope && mn > 0.0;
    let tails_decay = tails.iter().all(|t| *t <= opts.tail_tol);
    ValidationReport {
        window: l,
        min_bprime: mn,
        max_bprime: mx,
        c_m,
        tail_b2: tails[0],
        tail_b3: tails[1],
        tail_b4: tails[2],
        monotone,
        slope_bounds,
        tails_decay,
        pass: monotone && slope_bounds && tails_decay,
    }
}

/// Finite-difference Schrödinger matrix `-d²/dy² + b''/b` with Dirichlet data at `±L`.
fn schrodinger_matrix(flow: &ShearFlow, grid: &Grid, y0: f64) -> (Vec<f64>, Vec<f64>) {
    let h2 = grid.h * grid.h;
    let diag: Vec<f64> = (0..grid.n).map(|j| 2.0 / h2 + flow.potential(grid.y(j), y0)).collect();
    let off = vec![-1.0 / h2; grid.n - 1];
    (diag, off)
}

fn zero_of_b(flow: &ShearFlow) -> Result<f64> {
    let y0 = flow.invert(0.0);
    let d = flow.derivs(y0);
    if d[2].abs() > 1e-10 {
        return Err(Error::Hypothesis(format!(
            "potential b''/b is singular: b''({y0}) = {:e} is not zero",
            d[2]
        )));
    }
    Ok(y0)
}

/// Lowest eigenvalue and L²-normalized eigenvector of the discretized operator.
pub fn schrodinger_ground_eigen(flow: &ShearFlow, l: f64, n: usize) -> Result<(f64, Field)> {
    let grid = Grid::new(l, n)?;
    let y0 = zero_of_b(flow)?;
    let (diag, off) = schrodinger_matrix(flow, &grid, y0);
    let lam = tridiag::kth_eigenvalue(&diag, &off, 0);
    let mut v = tridiag::inverse_iteration(&diag, &off, lam);
    let s = (1.0 / grid.h).sqrt();
    let sign = if v.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    for x in v.iter_mut() {
        *x *= s * sign;
    }
    Ok((lam, Field::from_real(grid, &v)))
}

/// Richardson-refined ground eigenvalue from grids with spacing `h` and `h/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinedEigenvalue {
    pub lambda: f64,
    pub coarse: f64,
    pub fine: f64,
    /// Difference between two successive Richardson estimates.
    pub refinement_change: f64,
    pub l: f64,
    pub n: usize,
}

pub fn schrodinger_refined(flow: &ShearFlow, l: f64, n: usize) -> Result<RefinedEigenvalue> {
    let y0 = zero_of_b(flow)?;
    let lam_at = |n: usize| -> Result<f64> {
        let grid = Grid::new(l, n)?;
        let (d, o) = schrodinger_matrix(flow, &grid, y0);
        Ok(tridiag::kth_eigenvalue(&d, &o, 0))
    };
    let n = if n % 2 == 0 { n + 1 } else { n };
    let l1 = lam_at(n)?;
    let l2 = lam_at(2 * n + 1)?;
    let l3 = lam_at(4 * n + 3)?;
    let r1 = (4.0 * l2 - l1) / 3.0;
    let r2 = (4.0 * l3 - l2) / 3.0;
    let lambda = (16.0 * r2 - r1) / 15.0;
    Ok(RefinedEigenvalue { lambda, coarse: l1, fine: l3, refinement_change: (r2 - r1).abs(), l, n })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutralBuildReport {
    pub params: NeutralFlowParams,
    pub eigen: RefinedEigenvalue,
    pub scanned: Vec<(f64, f64)>,
    pub validation: ValidationReport,
    pub b2_at_zero: f64,
    pub b3_at_zero: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutralBuildOptions {
    pub n_lo: f64,
    pub n_hi: f64,
    pub scan_points: usize,
    pub grid_h: f64,
}

impl Default for NeutralBuildOptions {
    fn default() -> Self {
        Self { n_lo: 0.05, n_hi: 0.0, scan_points: 24, grid_h: 0.01 }
    }
}

/// Tunes `N` so that the ground eigenvalue of `-d² + b''/b` equals `target`.
pub fn build_neutral_flow(
    gamma0: f64,
    gamma1: f64,
    theta: f64,
    target: f64,
    opts: &NeutralBuildOptions,
) -> Result<(ShearFlow, f64, NeutralBuildReport)> {
    let n_max = if theta > 0.0 { 0.999 / (theta * gamma0 * gamma1 * gamma1) } else { 50.0 };
    let n_hi = if opts.n_hi > 0.0 { opts.n_hi.min(n_max) } else { n_max.min(50.0) };
    let n_lo = opts.n_lo;
    let mk = |n: f64| NeutralFlowParams { gamma0, gamma1, n, theta, target_eigenvalue: target };
    let probe = ShearFlow::neutral(&mk(1.0), 0.0);
    let l = 20.0f64.max(probe.window + 15.0);
    let npts = (2.0 * l / opts.grid_h).round() as usize | 1;
    let lam = |n: f64| -> Result<RefinedEigenvalue> { schrodinger_refined(&ShearFlow::neutral(&mk(n), 0.0), l, npts) };

    let mut scanned = Vec::new();
    let mut bracket = None;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..opts.scan_points {
        let n = n_lo + (n_hi - n_lo) * k as f64 / (opts.scan_points - 1) as f64;
        let v = lam(n)?.lambda;
        scanned.push((n, v));
        if let Some((pn, pv)) = prev {
            if v > pv + 1e-12 {
                return Err(nonconv(format!("eigenvalue not decreasing in N between {pn} and {n}")));
            }
            if (pv - target) * (v - target) <= 0.0 {
                bracket = Some((pn, n));
                break;
            }
        }
        prev = Some((n, v));
    }
    let (mut a, mut b) = bracket.ok_or_else(|| {
        let lo = scanned.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
        let hi = scanned.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        nonconv(format!("no N in [{n_lo}, {n_hi}] brackets the target {target}; scanned eigenvalues in [{lo}, {hi}]"))
    })?;
    let mut fa = lam(a)?.lambda - target;
    let mut best = lam(b)?;
    let mut nb = b;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let e = lam(m)?;
        let fm = e.lambda - target;
        if fm.abs() < (best.lambda - target).abs() {
            best = e;
            nb = m;
        }
        if fm == 0.0 || (b - a) < 1e-15 * m {
            break;
        }
        if fa * fm <= 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    let params = mk(nb);
    let flow = ShearFlow::neutral(&params, 0.0);
    let validation = validate(&flow, flow.window + 5.0, &ValidationOptions::default());
    let d0 = flow.derivs(0.0);
    let report = NeutralBuildReport { params, eigen: best, scanned, validation, b2_at_zero: d0[2], b3_at_zero: d0[3] };
    Ok((flow, nb, report))
}

/// `π b''(y_c) / b'(y_c)^3` helper used by several modules.
pub fn j2_closed_form(flow: &ShearFlow, yc: f64) -> f64 {
    let (b1, b2) = flow.d12(yc);
    PI * b2 / (b1 * b1 * b1)
}
