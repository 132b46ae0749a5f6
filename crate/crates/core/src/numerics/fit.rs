//! Small fitting and extrapolation helpers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares line through `(x, y)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    LinearFit { slope, intercept, r2 }
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly)
}

/// Value at `x0` of the interpolating polynomial through the points (Neville).
pub fn neville(xs: &[f64], ys: &[Complex64], x0: f64) -> Complex64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = ((x0 - xs[i + k]) * p[i] + (xs[i] - x0) * p[i + 1]) / (xs[i] - xs[i + k]);
        }
    }
    p[0]
}

pub fn neville_real(xs: &[f64], ys: &[f64], x0: f64) -> f64 {
    let c: Vec<Complex64> = ys.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    neville(xs, &c, x0).re
}

/// Limit at `s = 0` of samples fitted by least squares.
///
/// With `logs`, the basis is `1, s, s ln s, s², s² ln s, s³, s³ ln s, s⁴` (one-sided
/// limits at a critical layer where `b'' ≠ 0`); otherwise it is the monomials up to `s⁶`.
pub fn log_extrapolate(s: &[f64], v: &[f64], logs: bool) -> f64 {
    let basis = |x: f64| -> [f64; 8] {
        let l = x.ln();
        if logs {
            [1.0, x, x * l, x * x, x * x * l, x.powi(3), x.powi(3) * l, x.powi(4)]
        } else {
            [1.0, x, x * x, x.powi(3), x.powi(4), x.powi(5), x.powi(6), 0.0]
        }
    };
    let m = s.len();
    let k = (if logs { 8 } else { 7 }).min(m);
    let a = nalgebra::DMatrix::from_fn(m, k, |i, j| basis(s[i])[j]);
    let b = nalgebra::DVector::from_column_slice(v);
    let svd = a.svd(true, true);
    match svd.solve(&b, 1e-14) {
        Ok(x) => x[0],
        Err(_) => f64::NAN,
    }
}

/// Least-squares coefficients of `v ≈ Σ_j x_j basis(s)_j`.
pub fn least_squares<const K: usize>(s: &[f64], v: &[f64], basis: impl Fn(f64) -> [f64; K]) -> Vec<f64> {
    let a = nalgebra::DMatrix::from_fn(s.len(), K, |i, j| basis(s[i])[j]);
    let b = nalgebra::DVector::from_column_slice(v);
    match a.svd(true, true).solve(&b, 1e-14) {
        Ok(x) => x.iter().copied().collect(),
        Err(_) => vec![f64::NAN; K],
    }
}

/// Coefficient `L` of `ln s` in samples behaving like `L ln s + a + b s + c s ln s + d s² + ...`.
pub fn log_coefficient(s: &[f64], v: &[f64]) -> f64 {
    least_squares(s, v, |x| [x.ln(), 1.0, x, x * x.ln(), x * x, x * x * x.ln(), x.powi(3)])[0]
}
