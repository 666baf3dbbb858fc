//! Sigmoid-relaxed Adam training of the binary network for comparison.

use adiabatic_train::classical::{train_pool, RelaxedModel, TrainConfig};
use adiabatic_train::datasets::balanced_split;
use adiabatic_train::nn::binary_model;
use adiabatic_train::Result;

fn main() -> Result<()> {
    let split = balanced_split(25);
    let cfg = TrainConfig::default();
    let relaxed = RelaxedModel::new(binary_model(), cfg.steepness, cfg.penalty)?;
    let runs = train_pool(&relaxed, &split.train, &split.test, &cfg, 0, 50)?;
    let mean = runs.iter().map(|r| r.train_accuracy).sum::<f64>() / runs.len() as f64;
    println!("mean train accuracy over {} runs: {mean:.3}", runs.len());
    for r in runs.iter().take(3) {
        println!("seed {}: {:?} -> train {:.2} test {:.2}", r.seed, r.binary, r.train_accuracy, r.test_accuracy);
    }
    Ok(())
}
