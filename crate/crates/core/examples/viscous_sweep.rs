//! Amplification of the plateau witness under small viscosity.

use shearlab::flow::{NeutralFlowParams, ShearFlow};
use shearlab::grid::Grid;
use shearlab::witness::{run_viscous, GrowthRunOptions};

fn main() -> anyhow::Result<()> {
    let flow = ShearFlow::neutral(&NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n: 2.198045843383094, theta: 0.9, target_eigenvalue: -1.0 }, 0.0);
    let grid = Grid::with_spacing(10.0, 0.02)?;
    let nus = [1e-2, 1e-3, 1e-4, 1e-5];
    for horizon in [2.0, 20.0] {
        let opts = GrowthRunOptions { horizon, output_dt: 1.0, cfl: 0.5 };
        let v = run_viscous(&flow, 2.0, &nus, &grid, Some(1.6), &opts, None)?;
        println!("T = {horizon}: inviscid amplification {:.6}", v.inviscid.amp_l2.last().unwrap());
        for k in 0..nus.len() {
            println!("  nu = {:.0e}: amplification deviation {:.4e}, field deviation {:.4e}", nus[k], v.deviation[k], v.field_deviation[k]);
        }
        println!("  fitted orders: amplification {:.3}, field {:.3}; nu0 = {:?}", v.order_fit.slope, v.order_fit_field.slope, v.nu0);
    }
    Ok(())
}
