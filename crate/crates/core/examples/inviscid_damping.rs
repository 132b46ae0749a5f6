//! Splits the stream function into its eigenspace part and a remainder that decays like 1/t.

use shearlab::evolution::{build_operator, decompose_psi, evolve, log_times, psi_chi, EvolveOptions, Method};
use shearlab::flow::{NeutralFlowParams, ShearFlow};
use shearlab::grid::{Field, Grid};
use shearlab::indicators::{report_at, IndicatorTolerances};
use shearlab::rayleigh::{Forcing, MarchOptions};

fn main() -> anyhow::Result<()> {
    let o = MarchOptions::default();
    let flow = ShearFlow::neutral(&NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n: 2.198045843383094, theta: 0.9, target_eigenvalue: -1.0 }, 0.0);
    let rep = report_at(&flow, 0.0, &IndicatorTolerances::default(), &o)?;
    let data = Forcing::new(|y: f64| (y - 0.3) * (-2.0 * (y - 0.3) * (y - 0.3)).exp() + 0.5 * (-y * y).exp(), (-6.0, 6.0), vec![]);
    let grid = Grid::with_spacing(16.0, 0.006)?;
    let op = build_operator(&flow, &grid, 0.0)?;
    let times = log_times(1.0, 100.0, 21, false);
    let tr = evolve(&op, &Field::from_real_fn(grid, |y| data.eval(y)), &times, Method::Rk4, &EvolveOptions { snapshots: true, ..Default::default() })?;
    let d = decompose_psi(&flow, &data, &tr, &rep, &o)?;
    println!("{:>9} {:>13} {:>13} {:>13}", "t", "|psi2|_L2", "|psi2|_H1", "|Psi_chi|");
    for k in 0..times.len() {
        println!("{:>9.3} {:>13.6e} {:>13.6e} {:>13.6e}", times[k], d.psi2_l2[k], d.psi2_h1[k], psi_chi(times[k])?.norm());
    }
    let fit = d.damping_fit(10.0, 100.0);
    println!("log-log slope over [10, 100]: {:.4} (R^2 {:.4})", fit.slope, fit.r2);
    Ok(())
}
