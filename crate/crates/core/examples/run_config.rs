//! Runs an experiment config the same way `aqc run` does.
//!
//! `cargo run --example run_config -- configs/nn_binary.json out/binary`

use std::path::PathBuf;

use adiabatic_train::experiments::{run, ExperimentConfig};

fn main() -> adiabatic_train::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args.next().unwrap_or_else(|| "configs/nn_toy_circle.json".into());
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/example".into()));
    let cfg = ExperimentConfig::load(config.as_ref())?;
    let summary = run(&cfg, &out)?;
    println!("{}: {} files in {}", summary.kind, summary.files.len(), out.display());
    for (k, v) in &summary.metrics {
        println!("  {k} = {v}");
    }
    Ok(())
}
