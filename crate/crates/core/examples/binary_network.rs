//! The binary majority network on the 2x2 pixel task: anneal and exhaustive check.

use adiabatic_train::datasets::balanced_split;
use adiabatic_train::encoding::report_bitstring;
use adiabatic_train::engine::{evolve_adiabatic, initial_state_uniform, transverse_h0};
use adiabatic_train::nn::NnProblem;
use adiabatic_train::{AnnealSpec, Hamiltonian, Result};

fn main() -> Result<()> {
    let split = balanced_split(25);
    let p = NnProblem::binary(split.train, split.test)?;
    let n = p.num_qubits();
    let spec = AnnealSpec::new(
        Hamiltonian::Pauli(transverse_h0(n)),
        Hamiltonian::Pauli(p.hamiltonian.clone()),
        10.0,
        10,
    )
    .with_substeps(32);
    let probs = evolve_adiabatic(&spec, &initial_state_uniform(n))?.final_state.probabilities();

    let rows = p.enumerate_weightspace()?;
    let perfect: Vec<_> = rows
        .iter()
        .filter(|r| r.train_accuracy == 1.0 && r.test_accuracy == 1.0)
        .collect();
    println!("{} of {} configurations classify everything", perfect.len(), rows.len());
    for r in &perfect {
        println!("  {} p = {:.4}", report_bitstring(r.index, n), probs[r.index]);
    }
    Ok(())
}
