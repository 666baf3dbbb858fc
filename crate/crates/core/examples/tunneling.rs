//! A Gaussian packet in one well of the cosine potential tunnels to the other.

use adiabatic_train::engine::evolve_real_time;
use adiabatic_train::schrodinger::{gaussian_packet, mass_near, momentum_to_position, PotentialSpec, SchrodingerProblem};
use adiabatic_train::{Hamiltonian, Result, StateVector};

fn main() -> Result<()> {
    let h = SchrodingerProblem::new(PotentialSpec::Cosine, 10.0, 5).build_hamiltonian()?;
    let packet = StateVector::from_amplitudes(gaussian_packet(0.25, 28.0, 5)?)?;
    let ev = evolve_real_time(&Hamiltonian::Dense(h), &packet, 400.0, 0.5, 1, 80)?;
    for snap in &ev.snapshots {
        let d = momentum_to_position(snap.state.amplitudes(), 512)?;
        println!(
            "t = {:>5.0}: left {:.3}  right {:.3}",
            snap.t,
            mass_near(&d, 0.25, 0.1),
            mass_near(&d, 0.75, 0.1)
        );
    }
    Ok(())
}
