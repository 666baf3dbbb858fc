//! Pauli algebra against an independent dense Kronecker-product oracle.

use adiabatic_train::{Complex64, PauliAxis, PauliPolynomial, PauliString};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sigma(axis: PauliAxis) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let v = match axis {
        PauliAxis::I => [o, z, z, o],
        PauliAxis::X => [z, o, o, z],
        PauliAxis::Y => [z, -i, i, z],
        PauliAxis::Z => [o, z, z, -o],
    };
    DMatrix::from_row_slice(2, 2, &v)
}

/// Qubit 0 is the least significant index bit, so it is the rightmost factor.
fn kron_string(n: usize, coeff: Complex64, axes: &[PauliAxis]) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, coeff);
    for q in (0..n).rev() {
        m = m.kronecker(&sigma(axes[q]));
    }
    m
}

fn axis() -> impl Strategy<Value = PauliAxis> {
    prop_oneof![
        Just(PauliAxis::I),
        Just(PauliAxis::X),
        Just(PauliAxis::Y),
        Just(PauliAxis::Z)
    ]
}

/// Random polynomial plus its oracle matrix.
/// Real coefficients when `hermitian`, complex otherwise.
fn poly(n: usize, hermitian: bool) -> impl Strategy<Value = (PauliPolynomial, DMatrix<Complex64>)> {
    let im = if hermitian { 0.0..=0.0 } else { -1.0..=1.0f64 };
    prop::collection::vec((prop::collection::vec(axis(), n), -2.0..2.0f64, im), 1..6).prop_map(
        move |terms| {
            let dim = 1 << n;
            let mut dense = DMatrix::zeros(dim, dim);
            let mut strings = Vec::new();
            for (axes, re, im) in terms {
                dense += kron_string(n, c(re, im), &axes);
                strings.push(PauliString::new(c(re, im), axes.iter().copied().enumerate()));
            }
            (PauliPolynomial::from_strings(n, strings).unwrap(), dense)
        },
    )
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

type Pair = (PauliPolynomial, DMatrix<Complex64>);

fn sized() -> impl Strategy<Value = (Pair, Pair)> {
    (1usize..=4).prop_flat_map(|n| (poly(n, false), poly(n, false)))
}

fn hermitian() -> impl Strategy<Value = Pair> {
    (1usize..=4).prop_flat_map(|n| poly(n, true))
}

proptest! {
    #[test]
    fn dense_rendering_matches_kronecker(((p, m), _) in sized()) {
        prop_assert!(max_diff(&p.to_matrix().unwrap(), &m) < 1e-12);
    }

    #[test]
    fn product_matches_matrix_product(((p, a), (q, b)) in sized()) {
        let pq = p.multiply(&q).unwrap().to_matrix().unwrap();
        prop_assert!(max_diff(&pq, &(&a * &b)) < 1e-10);
    }

    #[test]
    fn sum_and_scale_match(((p, a), (q, b)) in sized(), k in -3.0..3.0f64) {
        let s = p.add(&q.scale(k)).unwrap().to_matrix().unwrap();
        let want = &a + &b * c(k, 0.0);
        prop_assert!(max_diff(&s, &want) < 1e-12);
    }

    #[test]
    fn decompose_round_trip((p, m) in hermitian()) {
        let back = PauliPolynomial::decompose_matrix(&m, p.num_qubits()).unwrap();
        prop_assert!(max_diff(&back.to_matrix().unwrap(), &m) <= 1e-10);
        for t in p.terms() {
            prop_assert!((back.coefficient(t.factors()) - t.coefficient).norm() <= 1e-10);
        }
    }

    #[test]
    fn non_hermitian_input_is_rejected(((p, m), _) in sized()) {
        if !p.is_hermitian() {
            prop_assert!(PauliPolynomial::decompose_matrix(&m, p.num_qubits()).is_err());
        }
    }

    #[test]
    fn hermitian_iff_matrix_hermitian(((p, m), _) in sized()) {
        let herm = max_diff(&m, &m.adjoint()) < 1e-12;
        prop_assert_eq!(p.is_hermitian(), herm);
    }

    #[test]
    fn diagonal_matches_matrix_diagonal((p, m) in hermitian()) {
        if p.is_diagonal() {
            let d = p.diagonal().unwrap();
            for (i, v) in d.iter().enumerate() {
                prop_assert!((m[(i, i)].re - v).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn single_qubit_products() {
    use PauliAxis::*;
    for a in [I, X, Y, Z] {
        for b in [I, X, Y, Z] {
            let (k, r) = a.mul(b);
            let lhs = sigma(a) * sigma(b);
            let phase = c(0.0, 1.0).powu(k as u32);
            assert!(max_diff(&lhs, &(sigma(r) * phase)) < 1e-15, "{a:?}{b:?}");
        }
    }
}
