//! Real-axis indicators `J1, J2` and the embedded-eigenvalue scan.

use shearlab::flow::{NeutralFlowParams, ShearFlow};
use shearlab::indicators::{j1j2, scan_embedded, IndicatorTolerances};
use shearlab::rayleigh::MarchOptions;

fn main() -> anyhow::Result<()> {
    let o = MarchOptions::default();
    let flow = ShearFlow::neutral(&NeutralFlowParams { gamma0: 0.5, gamma1: 0.3, n: 2.198045843383094, theta: 0.9, target_eigenvalue: -1.0 }, 0.0);
    println!("{:>8} {:>14} {:>14}", "c", "J1", "J2");
    for k in 0..=12 {
        let c = -1.2 + 0.2 * k as f64;
        let (j1, j2) = j1j2(&flow, c, &o)?;
        println!("{c:>8.3} {j1:>14.6e} {j2:>14.6e}");
    }
    for r in scan_embedded(&flow, (-1.0, 1.0), 41, &IndicatorTolerances::default(), &o)? {
        println!("embedded eigenvalue c* = {:.3e}: {:?}, dJ1 = {:.3e}, dJ2 = {:.6}", r.c_star, r.multiplicity, r.dj1, r.dj2);
    }
    let none = scan_embedded(&ShearFlow::couette(), (-1.0, 1.0), 21, &IndicatorTolerances::default(), &o)?;
    println!("Couette: {} embedded eigenvalues", none.len());
    Ok(())
}
