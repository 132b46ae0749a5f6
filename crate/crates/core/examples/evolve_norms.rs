//! Linearized Euler evolution: norm histories and the two time integrators.

use shearlab::evolution::{build_operator, evolve, gronwall_constant, log_times, uniform_times, EvolveOptions, Method};
use shearlab::flow::{NeutralFlowParams, ShearFlow};
use shearlab::grid::{Field, Grid};

fn main() -> anyhow::Result<()> {
    let flow = ShearFlow::neutral(&NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n: 2.198045843383094, theta: 0.9, target_eigenvalue: -1.0 }, 0.0);
    let grid = Grid::with_spacing(16.0, 0.01)?;
    let op = build_operator(&flow, &grid, 0.0)?;
    let w0 = Field::from_real_fn(grid, |y| (y - 0.3) * (-2.0 * (y - 0.3) * (y - 0.3)).exp() + 0.5 * (-y * y).exp());
    let tr = evolve(&op, &w0, &log_times(0.5, 50.0, 9, true), Method::Rk4, &EvolveOptions::default())?;
    println!("{:>9} {:>13} {:>13} {:>13} {:>13}", "t", "|w|_L2", "|w|_Linf", "|psi|_L2", "|psi|_H1");
    for k in 0..tr.times.len() {
        println!("{:>9.3} {:>13.6e} {:>13.6e} {:>13.6e} {:>13.6e}", tr.times[k], tr.omega_l2[k], tr.omega_linf[k], tr.psi_l2[k], tr.psi_h1[k]);
    }
    println!("Gronwall constant C = {:.4}", gronwall_constant(&tr));

    let small = Grid::new(8.0, 64)?;
    let op = build_operator(&flow, &small, 0.0)?;
    let w = Field::from_real_fn(small, |y| (-(y - 0.5) * (y - 0.5)).exp());
    let o = EvolveOptions { cfl: 0.1, snapshots: true, ..Default::default() };
    let ts = uniform_times(10.0, 10);
    let a = evolve(&op, &w, &ts, Method::Rk4, &o)?;
    let b = evolve(&op, &w, &ts, Method::Expm, &o)?;
    let gap = (0..ts.len()).map(|k| a.omega[k].sub(&b.omega[k]).l2() / b.omega[k].l2()).fold(0.0, f64::max);
    println!("rk4 vs matrix exponential on n = 64: {gap:.3e}");
    Ok(())
}
