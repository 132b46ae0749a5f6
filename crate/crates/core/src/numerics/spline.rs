//! Natural cubic splines.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplineError {
    #[error("need at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("abscissae must be strictly increasing (index {0})")]
    NotIncreasing(usize),
}

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(x: &[f64], y: &[f64]) -> Result<Self, SplineError> {
        let n = x.len();
        if n < 4 || y.len() != n {
            return Err(SplineError::TooFewPoints(n.min(y.len())));
        }
        for i in 1..n {
            if x[i] <= x[i - 1] {
                return Err(SplineError::NotIncreasing(i));
            }
        }
        let mut sub = vec![0.0; n];
        let mut diag = vec![1.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            sub[i] = h0 / 6.0;
            diag[i] = (h0 + h1) / 3.0;
            sup[i] = h1 / 6.0;
            rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        }
        super::tridiag::thomas(&sub, &diag, &sup, &mut rhs);
        Ok(Self { x: x.to_vec(), y: y.to_vec(), m: rhs })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    fn locate(&self, t: f64) -> usize {
        let n = self.x.len();
        match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap_or(std::cmp::Ordering::Less)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// Value and derivatives 0..=3 at `t`; linear extrapolation outside the table.
    pub fn eval_all(&self, t: f64) -> [f64; 4] {
        let n = self.x.len();
        if t < self.x[0] {
            let d = self.eval_all(self.x[0]);
            return [d[0] + d[1] * (t - self.x[0]), d[1], 0.0, 0.0];
        }
        if t > self.x[n - 1] {
            let d = self.eval_all(self.x[n - 1]);
            return [d[0] + d[1] * (t - self.x[n - 1]), d[1], 0.0, 0.0];
        }
        let i = self.locate(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let v = a * self.y[i] + b * self.y[i + 1] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d1 = (self.y[i + 1] - self.y[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        let d2 = a * m0 + b * m1;
        let d3 = (m1 - m0) / h;
        [v, d1, d2, d3]
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_all(t)[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_smooth_function() {
        let x: Vec<f64> = (0..201).map(|i| -2.0 + 0.02 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        let s = CubicSpline::natural(&x, &y).unwrap();
        for t in [-1.5, -0.3, 0.77, 1.2] {
            let d = s.eval_all(t);
            assert!((d[0] - f64::sin(t)).abs() < 1e-7);
            assert!((d[1] - f64::cos(t)).abs() < 1e-5);
            assert!((d[2] + f64::sin(t)).abs() < 1e-3);
        }
    }

    #[test]
    fn rejects_unsorted() {
        assert!(CubicSpline::natural(&[0.0, 1.0, 0.5, 2.0], &[0.0; 4]).is_err());
    }
}
