//! Adaptive Gauss–Kronrod quadrature and Gauss–Legendre rules.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("quadrature did not converge on [{a}, {b}]: estimate error {err:e} after {intervals} intervals")]
pub struct QuadError {
    pub a: f64,
    pub b: f64,
    pub err: f64,
    pub intervals: usize,
}

pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = hl * XGK[j];
        let s = f(c - x) + f(c + x);
        rk = rk + s * WGK[j];
        if j % 2 == 1 {
            rg = rg + s * WG[j / 2];
        }
    }
    let k = rk * hl;
    let g = rg * hl;
    (k, (k - g).magnitude())
}

/// Globally adaptive G7/K15 integration of `f` on `[a, b]`.
pub fn integrate<T, F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_intervals: usize) -> Result<T, QuadError>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if a == b {
        return Ok(T::zero());
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        let mut worst = 0;
        for (i, p) in pieces.iter().enumerate() {
            total = total + p.2;
            err += p.3;
            if p.3 > pieces[worst].3 {
                worst = i;
            }
        }
        if err <= abs_tol.max(rel_tol * total.magnitude()) {
            return Ok(total);
        }
        if pieces.len() >= max_intervals {
            return Err(QuadError { a, b, err, intervals: pieces.len() });
        }
        let (pa, pb, _, _) = pieces.swap_remove(worst);
        let m = 0.5 * (pa + pb);
        if m <= pa || m >= pb {
            return Err(QuadError { a, b, err, intervals: pieces.len() });
        }
        let (v1, e1) = gk15(&mut f, pa, m);
        let (v2, e2) = gk15(&mut f, m, pb);
        pieces.push((pa, m, v1, e1));
        pieces.push((m, pb, v2, e2));
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite Gauss–Legendre nodes/weights on `[a, b]` split into `panels` equal panels.
pub fn composite_gl(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(order);
    let hw = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * order);
    let mut ws = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * hw;
        for (x, w) in gx.iter().zip(&gw) {
            xs.push(lo + 0.5 * hw * (x + 1.0));
            ws.push(0.5 * hw * w);
        }
    }
    (xs, ws)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_smooth() {
        let v: f64 = integrate(|x: f64| x.exp(), 0.0, 1.0, 1e-14, 1e-14, 100).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn gk_peaked() {
        let v: f64 = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10, 1e-12, 500).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((v - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn gk_complex() {
        let v: Complex64 = integrate(|x: f64| Complex64::new(0.0, x).exp(), 0.0, std::f64::consts::PI, 1e-13, 1e-13, 100).unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            for p in 0..(2 * n) {
                let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!((s - exact).abs() < 1e-13, "n={n} p={p}");
            }
        }
    }
}
