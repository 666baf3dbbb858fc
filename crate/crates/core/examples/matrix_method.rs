//! Ground state of a particle on a ring in the truncated momentum basis.

use adiabatic_train::schrodinger::{density_peak, momentum_to_position, PotentialSpec, SchrodingerProblem};
use adiabatic_train::Result;

fn main() -> Result<()> {
    for mass in [25.0, 100.0, 400.0] {
        let problem = SchrodingerProblem::new(PotentialSpec::Cosine, mass, 5);
        let (energy, amps) = problem.ground_state()?;
        let density = momentum_to_position(&amps, 512)?;
        let (w, rho) = density_peak(&density);
        println!("m = {mass:>5}: E0 = {energy:.5}, peak rho = {rho:.4} at w = {w:.3}");
    }
    Ok(())
}
