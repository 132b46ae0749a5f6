//! Truncated uniform grids and complex grid functions.

use crate::error::{config_err, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Interior nodes `y_j = -L + (j + 1) h`, `h = 2L / (n + 1)`; Dirichlet data sits at `±L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub l: f64,
    pub n: usize,
    pub h: f64,
}

impl Grid {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(config_err(format!("grid half-width must be positive, got {l}")));
        }
        if n < 64 {
            return Err(config_err(format!("grid needs at least 64 points, got {n}")));
        }
        Ok(Self { l, n, h: 2.0 * l / (n as f64 + 1.0) })
    }

    /// Grid with spacing at most `h` and an odd node count (so `y = 0` is a node).
    pub fn with_spacing(l: f64, h: f64) -> Result<Self> {
        let mut n = (2.0 * l / h).ceil() as usize;
        if n % 2 == 0 {
            n += 1;
        }
        Self::new(l, n.max(65))
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        -self.l + (j as f64 + 1.0) * self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.y(j)).collect()
    }

    /// Index of the node nearest to `y` (clamped).
    pub fn nearest(&self, y: f64) -> usize {
        let j = ((y + self.l) / self.h - 1.0).round();
        j.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// True if `y` lies at least `k` cells inside the boundary.
    pub fn has_margin(&self, y: f64, k: f64) -> bool {
        y.abs() <= self.l - k * self.h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.n] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        Self { grid, values: (0..grid.n).map(|j| f(grid.y(j))).collect() }
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |y| Complex64::new(f(y), 0.0))
    }

    pub fn from_real(grid: Grid, v: &[f64]) -> Self {
        Self { grid, values: v.iter().map(|x| Complex64::new(*x, 0.0)).collect() }
    }

    pub fn l2(&self) -> f64 {
        l2_norm(&self.values, self.grid.h)
    }

    pub fn linf(&self) -> f64 {
        linf_norm(&self.values)
    }

    pub fn h1(&self) -> f64 {
        h1_norm(&self.values, self.grid.h)
    }

    pub fn h2(&self) -> f64 {
        h2_norm(&self.values, self.grid.h)
    }

    pub fn scale(&self, a: Complex64) -> Field {
        Field { grid: self.grid, values: self.values.iter().map(|v| v * a).collect() }
    }

    pub fn sub(&self, o: &Field) -> Field {
        Field { grid: self.grid, values: self.values.iter().zip(&o.values).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, o: &Field) -> Field {
        Field { grid: self.grid, values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect() }
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Discrete inner product `h * sum conj(a) b`.
    pub fn inner(&self, o: &Field) -> Complex64 {
        self.values.iter().zip(&o.values).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.grid.h
    }

    /// Linear interpolation at an arbitrary point (zero outside the grid).
    pub fn interp(&self, y: f64) -> Complex64 {
        let t = (y + self.grid.l) / self.grid.h - 1.0;
        if t < -1.0 || t > self.grid.n as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let j = t.floor();
        let w = t - j;
        let at = |k: f64| {
            if k < 0.0 || k >= self.grid.n as f64 {
                Complex64::new(0.0, 0.0)
            } else {
                self.values[k as usize]
            }
        };
        at(j) * (1.0 - w) + at(j + 1.0) * w
    }
}

pub fn l2_norm(v: &[Complex64], h: f64) -> f64 {
    (v.iter().map(|x| x.norm_sqr()).sum::<f64>() * h).sqrt()
}

pub fn linf_norm(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.norm()))
}

/// `sqrt(|f|_2^2 + |f'|_2^2)` with centred differences and zero boundary data.
pub fn h1_norm(v: &[Complex64], h: f64) -> f64 {
    let n = v.len();
    let z = Complex64::new(0.0, 0.0);
    let mut d2 = 0.0;
    for i in 0..n {
        let l = if i > 0 { v[i - 1] } else { z };
        let r = if i + 1 < n { v[i + 1] } else { z };
        d2 += ((r - l) / (2.0 * h)).norm_sqr();
    }
    (l2_norm(v, h).powi(2) + d2 * h).sqrt()
}

/// `sqrt(|f|_2^2 + |f'|_2^2 + |f''|_2^2)` with centred differences and zero boundary data.
pub fn h2_norm(v: &[Complex64], h: f64) -> f64 {
    let n = v.len();
    let z = Complex64::new(0.0, 0.0);
    let mut d2 = 0.0;
    for i in 0..n {
        let l = if i > 0 { v[i - 1] } else { z };
        let r = if i + 1 < n { v[i + 1] } else { z };
        d2 += ((r - v[i] * 2.0 + l) / (h * h)).norm_sqr();
    }
    (h1_norm(v, h).powi(2) + d2 * h).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_symmetric_with_zero() {
        let g = Grid::with_spacing(4.0, 0.05).unwrap();
        assert_eq!(g.n % 2, 1);
        assert!(g.y(g.n / 2).abs() < 1e-14);
        assert!((g.y(0) + g.y(g.n - 1)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_norm() {
        let g = Grid::with_spacing(10.0, 0.01).unwrap();
        let f = Field::from_real_fn(g, |y| (-y * y).exp());
        let exact = (std::f64::consts::PI / 2.0).sqrt().sqrt();
        assert!((f.l2() - exact).abs() < 1e-10);
        assert!((f.linf() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_grids() {
        assert!(Grid::new(1.0, 10).is_err());
        assert!(Grid::new(-1.0, 100).is_err());
    }
}
