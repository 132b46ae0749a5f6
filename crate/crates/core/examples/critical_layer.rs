//! Critical-layer integrals `J3, J4` and the projection onto the eigenspace.

use num_complex::Complex64;
use shearlab::flow::{NeutralFlowParams, ShearFlow};
use shearlab::indicators::{j3j4, jstar, projection_coefficient, report_at, IndicatorTolerances};
use shearlab::rayleigh::{Forcing, MarchOptions};

fn main() -> anyhow::Result<()> {
    let o = MarchOptions::default();
    let flow = ShearFlow::neutral(&NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n: 2.198045843383094, theta: 0.9, target_eigenvalue: -1.0 }, 0.0);
    let g = Forcing::new(|y: f64| (y - 0.3) * (-2.0 * (y - 0.3) * (y - 0.3)).exp() + 0.5 * (-y * y).exp(), (-6.0, 6.0), vec![]);
    for c in [-0.5, 0.0, 0.5] {
        let (j3, j4) = j3j4(&flow, &g, c, &o)?;
        let js = jstar(&flow, &g, Complex64::new(c, 1e-3), &o)?;
        println!("c = {c:>5}: J3 = {j3:.9}, J4 = {j4:.9}, J*(c + 0.001i) = {js:.9}");
    }
    let rep = report_at(&flow, 0.0, &IndicatorTolerances::default(), &o)?;
    println!("P(omega_in) = {:.9}", projection_coefficient(&flow, &g, &rep, &o)?);
    Ok(())
}
