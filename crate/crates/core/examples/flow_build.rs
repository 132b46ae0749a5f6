//! Tunes the neutral flow so that its Schrödinger ground state sits at the target,
//! then checks that `c = 0` is an embedded eigenvalue.

use shearlab::flow::{build_neutral_flow, NeutralBuildOptions};
use shearlab::indicators::j1j2;
use shearlab::rayleigh::MarchOptions;

fn main() -> anyhow::Result<()> {
    for theta in [0.9, 1.0] {
        let (flow, n, rep) = build_neutral_flow(0.5, 0.3, theta, -1.0, &NeutralBuildOptions::default())?;
        let (j1, j2) = j1j2(&flow, 0.0, &MarchOptions::default())?;
        println!("theta = {theta}");
        println!("  N               = {n:.15}");
        println!("  ground state    = {:.12} (refinement change {:.2e})", rep.eigen.lambda, rep.eigen.refinement_change);
        println!("  b''(0), b'''(0) = {:.3e}, {:.3e}", rep.b2_at_zero, rep.b3_at_zero);
        println!("  J1(0), J2(0)    = {j1:.3e}, {j2:.3e}");
        println!("  monotone flow   = {} (b' in [{:.4}, {:.4}])", rep.validation.pass, rep.validation.min_bprime, rep.validation.max_bprime);
    }
    Ok(())
}
