//! Two-mode toy model: transient growth (distinct rates) and linear growth (Jordan block).

use shearlab::witness::{toy_integrate, toy_solve, ToyVariant};

fn main() -> anyhow::Result<()> {
    for nu in [1e-1, 1e-2, 1e-3] {
        let t = 1.0 / nu;
        let (_, a1) = toy_solve(ToyVariant::A1, nu, (1.0, 0.0), t)?;
        let (_, n1) = toy_integrate(ToyVariant::A1, nu, (1.0, 0.0), t)?;
        let (_, a2) = toy_solve(ToyVariant::A2, nu, (1.0, 0.0), t)?;
        println!(
            "nu = {nu:.0e}: A1 phi(1/nu) = {a1:.12} (nu^-1 (e^-1 - e^-2) = {:.12}, integrator gap {:.1e}), A2 phi(1/nu) = {a2:.6}",
            ((-1f64).exp() - (-2f64).exp()) / nu,
            (a1 - n1).abs()
        );
    }
    Ok(())
}
