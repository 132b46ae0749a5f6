//! Stream function from the spectral representation, compared with time stepping.

use num_complex::Complex64;
use shearlab::evolution::{build_operator, evolve, psi_representation, EvolveOptions, Method, RepresentationOptions};
use shearlab::flow::{NeutralFlowParams, ShearFlow};
use shearlab::grid::{Field, Grid};
use shearlab::indicators::{report_at, IndicatorTolerances};
use shearlab::rayleigh::{Forcing, MarchOptions};

fn main() -> anyhow::Result<()> {
    let o = MarchOptions::default();
    let flow = ShearFlow::neutral(&NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n: 2.198045843383094, theta: 0.9, target_eigenvalue: -1.0 }, 0.0);
    let rep = report_at(&flow, 0.0, &IndicatorTolerances::default(), &o)?;
    let data = Forcing::new(|y: f64| (y - 0.3) * (-2.0 * (y - 0.3) * (y - 0.3)).exp() + 0.5 * (-y * y).exp(), (-6.0, 6.0), vec![]);
    let grid = Grid::with_spacing(16.0, 0.01)?;
    let times = [1.0, 5.0];
    let op = build_operator(&flow, &grid, 0.0)?;
    let tr = evolve(&op, &Field::from_real_fn(grid, |y| data.eval(y)), &times, Method::Rk4, &EvolveOptions { snapshots: true, ..Default::default() })?;
    let idx: Vec<usize> = (0..grid.n).step_by(40).filter(|j| grid.y(*j).abs() <= 8.0).collect();
    let ys: Vec<f64> = idx.iter().map(|j| grid.y(*j)).collect();
    let r = psi_representation(&flow, &data, &times, &ys, &rep, &o, &RepresentationOptions { panel: 0.1, margin: 10.0, ..Default::default() })?;
    println!("projection P = {:.9}, {} quadrature nodes", r.projection, r.nodes);
    for (k, t) in times.iter().enumerate() {
        let ev: Vec<Complex64> = idx.iter().map(|j| tr.psi[k].values[*j]).collect();
        let num: f64 = ev.iter().zip(&r.psi[k]).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let den: f64 = ev.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        println!("t = {t}: relative gap {:.3e}", num / den);
    }
    Ok(())
}
