//! Variable polynomials: parsing, the majority threshold and encoding on qubits.

use adiabatic_train::encoding::EncodingKind;
use adiabatic_train::nn::theta_polynomial;
use adiabatic_train::{EncodingTable, Result, VarPolynomial};

fn main() -> Result<()> {
    let p: VarPolynomial = "3*x^2 - 2*x*y + 1".parse()?;
    println!("p = {p}, degree {}", p.degree());

    let inputs: Vec<VarPolynomial> = ["a", "b", "c"].iter().map(|v| VarPolynomial::var(*v)).collect();
    let theta = theta_polynomial(&inputs);
    println!("theta(a, b, c) = {theta}");

    let table = EncodingTable::uniform(&["a", "b", "c"], EncodingKind::Binary01)?;
    let h = theta.substitute_encodings(&table)?;
    println!("on qubits: {h}");
    println!("diagonal over basis states: {:?}", h.diagonal()?);
    Ok(())
}
