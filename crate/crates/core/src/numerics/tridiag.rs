//! Tridiagonal solvers and symmetric tridiagonal eigenvalue tools.

use num_complex::Complex64;

/// Constant-coefficient tridiagonal matrix `tridiag(off, diag, off)` of size `n`.
#[derive(Debug, Clone, Copy)]
pub struct SymToeplitz3 {
    pub off: f64,
    pub diag: f64,
}

impl SymToeplitz3 {
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = x.len();
        for i in 0..n {
            let mut v = x[i] * self.diag;
            if i > 0 {
                v += x[i - 1] * self.off;
            }
            if i + 1 < n {
                v += x[i + 1] * self.off;
            }
            out[i] = v;
        }
    }
}

/// Precomputed LU factors of a constant-coefficient symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct ToeplitzLu {
    off: f64,
    inv_piv: Vec<f64>,
}

impl ToeplitzLu {
    pub fn new(m: SymToeplitz3, n: usize) -> Self {
        let mut inv_piv = Vec::with_capacity(n);
        let mut piv = m.diag;
        inv_piv.push(1.0 / piv);
        for _ in 1..n {
            piv = m.diag - m.off * m.off / piv;
            inv_piv.push(1.0 / piv);
        }
        Self { off: m.off, inv_piv }
    }

    /// Solves in place.
    pub fn solve(&self, x: &mut [Complex64]) {
        let n = x.len();
        debug_assert_eq!(n, self.inv_piv.len());
        // forward: z_i = x_i - off * z_{i-1} / piv_{i-1}
        for i in 1..n {
            let l = self.off * self.inv_piv[i - 1];
            let prev = x[i - 1];
            x[i] -= prev * l;
        }
        x[n - 1] *= self.inv_piv[n - 1];
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] = (x[i] - next * self.off) * self.inv_piv[i];
        }
    }

    pub fn solve_real(&self, x: &mut [f64]) {
        let n = x.len();
        for i in 1..n {
            let l = self.off * self.inv_piv[i - 1];
            x[i] -= l * x[i - 1];
        }
        x[n - 1] *= self.inv_piv[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = (x[i] - self.off * x[i + 1]) * self.inv_piv[i];
        }
    }
}

/// General real tridiagonal solve (Thomas algorithm). `sub[0]` and `sup[n-1]` are ignored.
pub fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    rhs[0] /= beta;
    for i in 1..n {
        c[i] = sup[i - 1] / beta;
        beta = diag[i] - sub[i] * c[i];
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i + 1] * rhs[i + 1];
    }
}

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix (diag, off).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let denom = if q == 0.0 { f64::EPSILON * (off[i - 1].abs() + 1.0) } else { q };
        q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval of a symmetric tridiagonal matrix.
pub fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The k-th smallest eigenvalue (k = 0 is the lowest) by Sturm bisection.
pub fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let (mut lo, mut hi) = gershgorin(diag, off);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector for an isolated eigenvalue `lambda` by inverse iteration.
pub fn inverse_iteration(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    let scale = diag.iter().fold(1.0f64, |m, d| m.max(d.abs()));
    let shift = lambda - 1e-10 * scale;
    let sub: Vec<f64> = std::iter::once(0.0).chain(off.iter().copied()).collect();
    let sup: Vec<f64> = off.iter().copied().chain(std::iter::once(0.0)).collect();
    let d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..6 {
        thomas(&sub, &d, &sup, &mut v);
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= nrm;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_eigenvalues() {
        let n = 50;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        for k in 0..5 {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((kth_eigenvalue(&diag, &off, k) - exact).abs() < 1e-13);
        }
        let v = inverse_iteration(&diag, &off, kth_eigenvalue(&diag, &off, 0));
        let s: f64 = (0..n).map(|j| ((j + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).sin()).map(|x| x * x).sum();
        let v0 = (std::f64::consts::PI / (n as f64 + 1.0)).sin() / s.sqrt();
        assert!((v[0].abs() - v0).abs() < 1e-10);
    }

    #[test]
    fn toeplitz_lu_roundtrip() {
        let m = SymToeplitz3 { off: 1.0 - 0.01 / 12.0, diag: -2.0 - 10.0 * 0.01 / 12.0 };
        let n = 40;
        let lu = ToeplitzLu::new(m, n);
        let x: Vec<Complex64> = (0..n).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        m.apply(&x, &mut b);
        lu.solve(&mut b);
        for i in 0..n {
            assert!((b[i] - x[i]).norm() < 1e-12);
        }
    }
}
