//! Adaptive Dormand–Prince 5(4) integrator with exact stop points.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("step budget of {0} exhausted")]
    TooManySteps(usize),
    #[error("non-finite state at t = {0:e}")]
    NonFinite(f64),
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Stateful DOPRI5 stepper. The step size persists across `advance` calls.
#[derive(Debug, Clone)]
pub struct Dopri5 {
    n: usize,
    pub rtol: f64,
    pub atol: Vec<f64>,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
    pub steps: usize,
    h: f64,
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    ynew: Vec<f64>,
    fsal_valid: bool,
}

impl Dopri5 {
    pub fn new(n: usize, rtol: f64, atol: Vec<f64>, h0: f64) -> Self {
        assert_eq!(atol.len(), n);
        Self {
            n,
            rtol,
            atol,
            h_min: 1e-300,
            h_max: f64::INFINITY,
            max_steps: 5_000_000,
            steps: 0,
            h: h0,
            k: std::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
            ynew: vec![0.0; n],
            fsal_valid: false,
        }
    }

    /// Must be called whenever the caller modifies the state between calls.
    pub fn invalidate(&mut self) {
        self.fsal_valid = false;
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    pub fn set_step_size(&mut self, h: f64) {
        self.h = h;
    }

    /// Integrates from `*t` to `t_end` (> `*t`), landing exactly on `t_end`.
    pub fn advance<F>(&mut self, f: &mut F, t: &mut f64, y: &mut [f64], t_end: f64) -> Result<(), OdeError>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = self.n;
        if t_end <= *t {
            return Ok(());
        }
        if !self.fsal_valid {
            f(*t, y, &mut self.k[0]);
            self.fsal_valid = true;
        }
        loop {
            let remaining = t_end - *t;
            if remaining <= 0.0 {
                return Ok(());
            }
            if self.steps >= self.max_steps {
                return Err(OdeError::TooManySteps(self.max_steps));
            }
            let mut h = self.h.min(self.h_max);
            let truncated = h >= remaining;
            if truncated {
                h = remaining;
            }
            let t0 = *t;
            let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;
            let tmp = &mut self.tmp;
            for i in 0..n {
                tmp[i] = y[i] + h * A21 * k1[i];
            }
            f(t0 + C2 * h, tmp, k2);
            for i in 0..n {
                tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            f(t0 + C3 * h, tmp, k3);
            for i in 0..n {
                tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            f(t0 + C4 * h, tmp, k4);
            for i in 0..n {
                tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            f(t0 + C5 * h, tmp, k5);
            for i in 0..n {
                tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            let t_new = if truncated { t_end } else { t0 + h };
            f(t_new, tmp, k6);
            let ynew = &mut self.ynew;
            for i in 0..n {
                ynew[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            f(t_new, ynew, k7);
            let mut err = 0.0;
            let mut finite = true;
            for i in 0..n {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol[i] + self.rtol * y[i].abs().max(ynew[i].abs());
                let r = e / sc;
                err += r * r;
                finite &= ynew[i].is_finite() && k7[i].is_finite();
            }
            err = (err / n as f64).sqrt();
            self.steps += 1;
            if !finite || !err.is_finite() {
                self.h = h * 0.1;
                if self.h < self.h_min || self.h < t0.abs() * 1e-15 {
                    return Err(OdeError::NonFinite(t0));
                }
                continue;
            }
            if err <= 1.0 {
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                let h_next = h * fac;
                if truncated {
                    if h_next < self.h {
                        self.h = h_next;
                    }
                } else {
                    self.h = h_next;
                }
                *t = t_new;
                y.copy_from_slice(ynew);
                std::mem::swap(k1, k7);
                if truncated {
                    return Ok(());
                }
            } else {
                let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                self.h = h * fac;
                if self.h < self.h_min || self.h <= t0.abs() * 4.0 * f64::EPSILON {
                    return Err(OdeError::StepUnderflow { t: t0, h: self.h });
                }
            }
        }
    }
}

/// Classical fixed-step RK4 on a real system; used as an independent check.
pub fn rk4_fixed<F>(f: &mut F, t0: f64, y0: &[f64], t1: f64, steps: usize) -> Vec<f64>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for s in 0..steps {
        let t = t0 + s as f64 * h;
        f(t, &y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        f(t + 0.5 * h, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        f(t + 0.5 * h, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + h * k3[i];
        }
        f(t + h, &tmp, &mut k4);
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_to_stop_points() {
        let mut f = |_t: f64, y: &[f64], d: &mut [f64]| d[0] = y[0];
        let mut s = Dopri5::new(1, 1e-12, vec![1e-14], 1e-3);
        let mut t = 0.0;
        let mut y = [1.0];
        for k in 1..=20 {
            let te = k as f64 * 0.1;
            s.advance(&mut f, &mut t, &mut y, te).unwrap();
            assert_eq!(t, te);
            assert!((y[0] - te.exp()).abs() < 1e-10 * te.exp());
        }
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let mut f = |_t: f64, y: &[f64], d: &mut [f64]| {
            d[0] = y[1];
            d[1] = -y[0];
        };
        let mut s = Dopri5::new(2, 1e-11, vec![1e-13; 2], 0.1);
        let mut t = 0.0;
        let mut y = [1.0, 0.0];
        s.advance(&mut f, &mut t, &mut y, 10.0).unwrap();
        assert!((y[0] - 10f64.cos()).abs() < 1e-9);
        assert!((y[1] + 10f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn rk4_fixed_order() {
        let mut f = |_t: f64, y: &[f64], d: &mut [f64]| d[0] = -y[0];
        let e1 = (rk4_fixed(&mut f, 0.0, &[1.0], 1.0, 10)[0] - (-1f64).exp()).abs();
        let e2 = (rk4_fixed(&mut f, 0.0, &[1.0], 1.0, 20)[0] - (-1f64).exp()).abs();
        assert!((e1 / e2 - 16.0).abs() < 1.5);
    }
}
