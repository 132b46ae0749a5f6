#![allow(dead_code)]

use shearlab::flow::{NeutralFlowParams, ShearFlow};
use shearlab::rayleigh::Forcing;

/// `N` tuned for `θ = 0.9` (simple embedded eigenvalue at 0); frozen from `build_neutral_flow`.
pub const N_SIMPLE: f64 = 2.198045843383094;
/// `N` tuned for `θ = 1` (multiple embedded eigenvalue at 0).
pub const N_MULTIPLE: f64 = 2.389977807999568;
/// Witness constant of the simple flow, measured at `M = 2` and rounded down.
pub const KAPPA: f64 = 1.6;

pub fn neutral(n: f64, theta: f64) -> ShearFlow {
    ShearFlow::neutral(&NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n, theta, target_eigenvalue: -1.0 }, 0.0)
}

pub fn simple_flow() -> ShearFlow {
    neutral(N_SIMPLE, 0.9)
}

pub fn multiple_flow() -> ShearFlow {
    neutral(N_MULTIPLE, 1.0)
}

/// Smooth, non-symmetric initial vorticity used for the damping and representation checks.
pub fn damping_data() -> Forcing {
    Forcing::new(|y: f64| (y - 0.3) * (-2.0 * (y - 0.3) * (y - 0.3)).exp() + 0.5 * (-y * y).exp(), (-6.0, 6.0), vec![])
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}
