//! Linear-in-time growth generated by the associated function at a multiple eigenvalue.

use shearlab::evolution::build_operator;
use shearlab::flow::{NeutralFlowParams, ShearFlow};
use shearlab::grid::Grid;
use shearlab::indicators::{report_at, IndicatorTolerances};
use shearlab::rayleigh::MarchOptions;
use shearlab::witness::{run_theorem2, theorem2_solution};

fn main() -> anyhow::Result<()> {
    let o = MarchOptions::default();
    let flow = ShearFlow::neutral(&NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n: 2.389977807999568, theta: 1.0, target_eigenvalue: -1.0 }, 0.0);
    let rep = report_at(&flow, 0.0, &IndicatorTolerances::default(), &o)?;
    println!("multiplicity {:?}, dJ1 = {:.3e}, dJ2 = {:.3e}", rep.multiplicity, rep.dj1, rep.dj2);
    let grid = Grid::with_spacing(16.0, 0.02)?;
    let sol = theorem2_solution(&flow, &rep, &grid, 1e-4, &o)?;
    let r = run_theorem2(&sol, &build_operator(&flow, &grid, 0.0)?, (10.0, 50.0), Some(10.0), 0.5)?;
    println!("|omega_*| = {:.6}, |eta| = {:.6}, derivative mismatch {:.3e}", sol.omega_star_l2, sol.eta_l2, sol.deriv_mismatch);
    println!("residual {:.3e}, slope {:.6} (ratio {:.4}), R^2 {:.7}", r.residual, r.fit_l2.slope, r.slope_ratio, r.fit_l2.r2);
    println!("evolving i*eta to t = {} reproduces the closed form to {:.3e}", r.t_check, r.evolution_gap.unwrap_or(f64::NAN));
    Ok(())
}
