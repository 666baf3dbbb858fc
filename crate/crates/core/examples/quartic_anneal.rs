//! Adiabatic minimization of the quartic on a 7-qubit fractional-binary register.

use adiabatic_train::encoding::EncodingKind;
use adiabatic_train::engine::{evolve_adiabatic, initial_state_uniform, marginal, transverse_h0};
use adiabatic_train::experiments::pauli_potential;
use adiabatic_train::schrodinger::PotentialSpec;
use adiabatic_train::{AnnealSpec, EncodingTable, Hamiltonian, Result};

fn main() -> Result<()> {
    let n = 7;
    let mut table = EncodingTable::new();
    table.push("w", EncodingKind::FractionalBinary { num_qubits: n })?;
    let h = pauli_potential(&PotentialSpec::Quartic { lambda: 50.0 })?.substitute_encodings(&table)?;
    println!("{} Pauli terms, degree {}", h.term_count(), h.degree());

    let spec = AnnealSpec::new(Hamiltonian::Pauli(transverse_h0(n)), Hamiltonian::Pauli(h), 100.0, 1000);
    let ev = evolve_adiabatic(&spec, &initial_state_uniform(n))?;
    let mut bins = marginal(&ev.final_state, &table, "w")?;
    bins.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (w, p) in bins.iter().take(5) {
        println!("w = {w:.4}: {p:.4}");
    }
    Ok(())
}
