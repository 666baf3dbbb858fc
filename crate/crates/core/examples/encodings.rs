//! Laying variables out on qubits and decoding measured basis states.

use adiabatic_train::encoding::{report_bitstring, EncodingKind};
use adiabatic_train::{EncodingTable, Result};

fn main() -> Result<()> {
    let mut table = EncodingTable::new();
    table
        .push("w", EncodingKind::FractionalBinary { num_qubits: 3 })?
        .push("s", EncodingKind::SpinPm1)?
        .push("b", EncodingKind::Binary01)?;
    println!("{} qubits", table.total_qubits());
    println!("w operator: {}", table.encode("w")?);

    for index in [0usize, 5, 21, 63] {
        println!(
            "{index:>2} -> {} -> {:?}",
            report_bitstring(index, table.total_qubits()),
            table.assignment(index)
        );
    }
    Ok(())
}
