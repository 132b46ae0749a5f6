//! The embedded eigenfunction `Γ` glued across the critical layer.

use shearlab::flow::{NeutralFlowParams, ShearFlow};
use shearlab::rayleigh::{glue_gamma, MarchOptions};

fn main() -> anyhow::Result<()> {
    let flow = ShearFlow::neutral(&NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n: 2.198045843383094, theta: 0.9, target_eigenvalue: -1.0 }, 0.0);
    let ys: Vec<f64> = (-40..=40).map(|k| 0.15 * k as f64).collect();
    let g = glue_gamma(&flow, 0.0, &ys, &MarchOptions::default())?;
    println!("one-sided limits at y_c: {:.12} / {:.12} (expected -1/b' = {:.12})", g.limit_minus, g.limit_plus, -1.0 / g.b1);
    println!("derivative jump {:.3e}, log coefficient {:.3e}, mismatch {:.3e}", g.deriv_jump, g.log_coefficient, g.mismatch);
    println!("{:>8} {:>16} {:>16}", "y", "Gamma", "omega_*");
    for k in (0..ys.len()).step_by(5) {
        println!("{:>8.3} {:>16.9e} {:>16.9e}", ys[k], g.gamma[k], g.omega_star[k]);
    }
    Ok(())
}
