//! Large amplification from plateau initial data near the critical layer.

use shearlab::evolution::build_operator;
use shearlab::flow::{NeutralFlowParams, ShearFlow};
use shearlab::grid::Grid;
use shearlab::indicators::{report_at, IndicatorTolerances};
use shearlab::rayleigh::MarchOptions;
use shearlab::witness::{growth_run, run_theorem1, theorem1_data, GrowthRunOptions};

fn main() -> anyhow::Result<()> {
    let o = MarchOptions::default();
    let flow = ShearFlow::neutral(&NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n: 2.198045843383094, theta: 0.9, target_eigenvalue: -1.0 }, 0.0);
    let rep = report_at(&flow, 0.0, &IndicatorTolerances::default(), &o)?;
    let grid = Grid::with_spacing(12.0, 0.002)?;
    let opts = GrowthRunOptions { horizon: 100.0, output_dt: 1.0, cfl: 0.5 };
    let kappa = 1.6;
    for m in [2.0, 5.0] {
        let d = theorem1_data(m)?;
        let g = run_theorem1(&flow, m, &grid, Some(&rep), Some(kappa), &opts, &o)?;
        println!(
            "M = {m}: Z = {:.3}, |w_in| = ({:.4}, {:.1}), amplification L2 {:.4} (t = {}), Linf {:.4} (t = {}), target {:.2} reached at {:?}",
            d.z, d.l2, d.linf, g.amplification_l2, g.t_star_l2, g.amplification_linf, g.t_star_linf, kappa * m, g.first_target_time
        );
        println!("        P = {:.6}, |Psi(T)| / (|P| |Gamma|) = {:.4}", g.projection.unwrap_or_default(), g.psi_ratio.unwrap_or(f64::NAN));
    }
    let w = theorem1_data(2.0)?.field(&grid)?;
    let c = growth_run(&build_operator(&ShearFlow::couette(), &grid, 0.0)?, &w, 2.0, None, &opts, false)?.0;
    println!("Couette control: amplification L2 {:.6}, Linf {:.6}", c.amplification_l2, c.amplification_linf);
    Ok(())
}
