//! Products of Pauli strings, dense rendering and decomposition back.

use adiabatic_train::pauli::Polarity;
use adiabatic_train::{PauliAxis, PauliPolynomial, Result};

fn main() -> Result<()> {
    let x0 = PauliPolynomial::single(2, 0, PauliAxis::X, 1.0)?;
    let y0 = PauliPolynomial::single(2, 0, PauliAxis::Y, 1.0)?;
    // XY = iZ on the same qubit.
    println!("X0 * Y0 = {}", x0.multiply(&y0)?);

    let t1 = PauliPolynomial::binary_projector(2, 1, Polarity::Plus)?;
    println!("T1 = {}", t1);
    println!("T1^2 = {}  (idempotent)", t1.pow(2));

    let h = x0.add(&t1.scale(0.5))?;
    let m = h.to_matrix()?;
    println!("dense H:\n{m:.3}");
    let back = PauliPolynomial::decompose_matrix(&m, 2)?;
    println!("decomposed: {back}");
    println!("hermitian: {}, diagonal: {}", back.is_hermitian(), back.is_diagonal());
    Ok(())
}
