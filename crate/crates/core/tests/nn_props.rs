//! Compiled Hamiltonians against brute-force loss evaluation.

use std::collections::HashMap;
use std::path::Path;

use adiabatic_train::datasets::{self, BandProbability};
use adiabatic_train::experiments::{ExperimentConfig, ToyDataset};
use adiabatic_train::nn::{self, NnProblem};
use adiabatic_train::VarPolynomial;
use proptest::prelude::*;

fn check_diagonal(p: &NnProblem) {
    let diag = p.hamiltonian.diagonal().unwrap();
    assert_eq!(diag.len(), 1 << p.num_qubits());
    for (i, e) in diag.iter().enumerate() {
        let w = p.weights(i);
        let loss = nn::numeric_loss(&p.model, &w, &p.train, p.loss_spec).unwrap();
        assert!(
            (e - loss).abs() <= 1e-9 * loss.abs().max(1.0),
            "config {i}: diagonal {e} vs loss {loss}"
        );
    }
}

#[test]
fn toy_circle_diagonal_matches_all_64_losses() {
    for seed in [0, 16, 99] {
        check_diagonal(&NnProblem::toy(datasets::circle_dataset(1000, seed)).unwrap());
    }
}

#[test]
fn toy_band_diagonal_matches_all_64_losses() {
    for reading in [BandProbability::Min, BandProbability::Max] {
        check_diagonal(&NnProblem::toy(datasets::band_dataset(1000, 16, reading)).unwrap());
    }
}

#[test]
fn binary_diagonal_matches_all_1024_losses() {
    for seed in [0, 25, 7] {
        let split = datasets::balanced_split(seed);
        check_diagonal(&NnProblem::binary(split.train, split.test).unwrap());
    }
}

#[test]
fn enumeration_rows_agree_with_diagonal() {
    let split = datasets::balanced_split(25);
    let p = NnProblem::binary(split.train, split.test).unwrap();
    let diag = p.hamiltonian.diagonal().unwrap();
    for r in p.enumerate_weightspace().unwrap() {
        assert!((r.loss - diag[r.index]).abs() <= 1e-9 * r.loss.abs().max(1.0));
    }
}

#[test]
fn theta_truth_tables_up_to_six_inputs() {
    for n in 1..=6usize {
        let names: Vec<String> = (0..n).map(|j| format!("u{j}")).collect();
        let inputs: Vec<VarPolynomial> = names.iter().map(VarPolynomial::var).collect();
        let theta = nn::theta_polynomial(&inputs);
        for bits in 0u32..(1 << n) {
            let assign: HashMap<String, f64> = names
                .iter()
                .enumerate()
                .map(|(j, v)| (v.clone(), f64::from(bits >> j & 1)))
                .collect();
            let ones = bits.count_ones() as usize;
            // Majority with ties going to 1: Σ(2u − 1) ≥ 0.
            let want = if 2 * ones >= n { 1.0 } else { 0.0 };
            let got = theta.evaluate(&assign).unwrap();
            assert!((got - want).abs() < 1e-12, "n={n} bits={bits:b}: {got}");
        }
    }
}

#[test]
fn shipped_polynomial_configs_respect_term_bounds() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut checked = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ExperimentConfig::load(&path).unwrap();
        let (dataset, n, seed, band) = match &cfg {
            ExperimentConfig::NnToy(c) => (c.dataset, c.n_points, c.seed, c.band_prob),
            ExperimentConfig::Enumerate(c) if c.model == adiabatic_train::experiments::EnumModel::Toy => {
                (c.dataset, c.n_points, c.seed, c.band_prob)
            }
            _ => continue,
        };
        let data = match dataset {
            ToyDataset::Circle => datasets::circle_dataset(n, seed),
            ToyDataset::Band => datasets::band_dataset(n, seed, band),
        };
        let p = NnProblem::toy(data).unwrap();
        assert!(p.model.has_polynomial_activations());
        let stats = p.term_stats();
        assert!(stats.within_bounds, "{}: {stats:?}", path.display());
        assert!(stats.hamiltonian_terms as u128 <= stats.generic_bound);
        assert!(stats.hamiltonian_terms as u128 <= stats.diagonal_bound);
        checked += 1;
    }
    assert!(checked >= 3, "only {checked} polynomial configs found");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn toy_diagonal_matches_loss_on_random_data(seed in any::<u64>(), n in 1usize..200) {
        let p = NnProblem::toy(datasets::circle_dataset(n, seed)).unwrap();
        let diag = p.hamiltonian.diagonal().unwrap();
        for i in [0usize, 17, 42, 63] {
            let loss = nn::numeric_loss(&p.model, &p.weights(i), &p.train, p.loss_spec).unwrap();
            prop_assert!((diag[i] - loss).abs() <= 1e-9 * loss.abs().max(1.0));
        }
    }

    #[test]
    fn degeneracy_classes_partition_probability(seed in any::<u64>()) {
        let p = NnProblem::toy(datasets::circle_dataset(50, seed)).unwrap();
        let state = adiabatic_train::StateVector::uniform(p.num_qubits());
        let classes = p.group_degenerate(&state).unwrap();
        let total: f64 = classes.iter().map(|c| c.probability).sum();
        let members: usize = classes.iter().map(|c| c.degeneracy).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert_eq!(members, 64);
        for c in &classes {
            for &m in &c.members {
                prop_assert!((p.hamiltonian.diagonal().unwrap()[m] - c.energy).abs() < 1e-9);
            }
        }
    }
}
