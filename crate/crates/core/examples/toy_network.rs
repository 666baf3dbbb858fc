//! Training the two-layer squared network on the circle data by annealing.

use adiabatic_train::datasets::circle_dataset;
use adiabatic_train::engine::{evolve_adiabatic, initial_state_uniform, transverse_h0};
use adiabatic_train::nn::NnProblem;
use adiabatic_train::{AnnealSpec, Hamiltonian, Result};

fn main() -> Result<()> {
    let p = NnProblem::toy(circle_dataset(1000, 16))?;
    println!("loss: {} terms; Hamiltonian: {} terms", p.loss.term_count(), p.hamiltonian.term_count());
    let n = p.num_qubits();
    let spec = AnnealSpec::new(
        Hamiltonian::Pauli(transverse_h0(n)),
        Hamiltonian::Pauli(p.hamiltonian.clone()),
        10.0,
        10,
    )
    .with_substeps(32);
    let fin = evolve_adiabatic(&spec, &initial_state_uniform(n))?.final_state;
    for c in p.group_degenerate(&fin)?.iter().take(4) {
        println!(
            "p = {:.4}  E = {:.4}  x{}  weights {:?}",
            c.probability, c.energy, c.degeneracy, c.weights
        );
    }
    Ok(())
}
