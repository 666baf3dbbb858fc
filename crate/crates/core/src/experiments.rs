//! Config-driven experiment runner.
//!
//! One JSON config describes one experiment; [`run`] writes its data files
//! and a `summary.json` into one output directory. Every data file starts
//! with a `# config=<sha256>` line (CSV) or a `config_hash` field (JSON) and
//! carries no timestamps, so rerunning a config reproduces the files byte for
//! byte. Only `summary.json` records wall time.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::classical::{self, RelaxedModel, TrainConfig};
use crate::datasets::{self, BandProbability, Sample};
use crate::encoding::{report_bitstring, EncodingKind, EncodingTable};
use crate::engine::{self, AnnealSpec, Hamiltonian, Method};
use crate::error::{Error, Result};
use crate::nn::{self, NnProblem, PoolEntry};
use crate::schrodinger::{self, PotentialSpec, SchrodingerProblem};
use crate::state::StateVector;
use crate::varpoly::VarPolynomial;

/// Largest register for Pauli-spin state-vector runs.
pub const PAULI_SPIN_CAP: usize = 20;
/// Dataset seed used by the toy experiments when none is given.
pub const DEFAULT_TOY_SEED: u64 = 16;
/// Pixel split seed used by the binary experiments when none is given.
pub const DEFAULT_SPLIT_SEED: u64 = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToyDataset {
    #[default]
    Circle,
    Band,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    #[default]
    Matrix,
    PauliSpin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumModel {
    Toy,
    #[default]
    Binary,
}

/// Linear-schedule Trotter settings for the Pauli-spin NN runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnealParams {
    pub n_steps: usize,
    pub t_final: f64,
    pub substeps: usize,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams {
            n_steps: 10,
            t_final: 10.0,
            substeps: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TunnelConfig {
    pub potential: PotentialSpec,
    pub mass: f64,
    pub num_qubits: usize,
    /// Packet center.
    pub center: f64,
    /// Minimum whose occupation is tracked; `center + ½` when absent.
    pub target: Option<f64>,
    /// Packet exponent; the harmonic value at `center` when absent.
    pub packet_exponent: Option<f64>,
    pub t_total: f64,
    pub dt: f64,
    pub snapshot_stride: usize,
    pub grid: usize,
    /// Half width of the windows used for well occupations.
    pub window: f64,
}

impl Default for TunnelConfig {
    fn default() -> Self {
        TunnelConfig {
            potential: PotentialSpec::Cosine,
            mass: 10.0,
            num_qubits: 5,
            center: 0.25,
            target: None,
            packet_exponent: None,
            t_total: 400.0,
            dt: 0.5,
            snapshot_stride: 8,
            grid: schrodinger::DENSITY_GRID,
            window: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnealMatrixConfig {
    pub potential: PotentialSpec,
    pub mass: f64,
    pub num_qubits: usize,
    pub t_final: f64,
    pub n_steps: usize,
    pub snapshot_stride: usize,
    pub grid: usize,
    /// Center of the window whose final occupation is reported.
    pub target: f64,
    pub window: f64,
}

impl Default for AnnealMatrixConfig {
    fn default() -> Self {
        AnnealMatrixConfig {
            potential: PotentialSpec::Cosine,
            mass: 100.0,
            num_qubits: 5,
            t_final: 100.0,
            n_steps: 400,
            snapshot_stride: 40,
            grid: schrodinger::DENSITY_GRID,
            target: 0.25,
            window: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PaulispinConfig {
    /// Must be `quartic` or `polynomial`.
    pub potential: PotentialSpec,
    pub num_qubits: usize,
    pub t_final: f64,
    pub n_steps: usize,
    pub substeps: usize,
    pub snapshot_stride: usize,
    /// Measurement shots to sample from the final state (0 = none).
    pub shots: usize,
    pub seed: u64,
}

impl Default for PaulispinConfig {
    fn default() -> Self {
        PaulispinConfig {
            potential: PotentialSpec::Quartic { lambda: 50.0 },
            num_qubits: 7,
            t_final: 100.0,
            n_steps: 1000,
            substeps: 1,
            snapshot_stride: 100,
            shots: 0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NnToyConfig {
    pub dataset: ToyDataset,
    pub n_points: usize,
    pub seed: u64,
    pub band_prob: BandProbability,
    pub anneal: AnnealParams,
    pub report_classes: usize,
}

impl Default for NnToyConfig {
    fn default() -> Self {
        NnToyConfig {
            dataset: ToyDataset::Circle,
            n_points: 1000,
            seed: DEFAULT_TOY_SEED,
            band_prob: BandProbability::Min,
            anneal: AnnealParams::default(),
            report_classes: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NnBinaryConfig {
    /// Pixel split seed.
    pub seed: u64,
    pub anneal: AnnealParams,
    pub report_classes: usize,
}

impl Default for NnBinaryConfig {
    fn default() -> Self {
        NnBinaryConfig {
            seed: DEFAULT_SPLIT_SEED,
            anneal: AnnealParams::default(),
            report_classes: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub representation: Representation,
    pub potential: PotentialSpec,
    /// Matrix representation only.
    pub mass: f64,
    pub num_qubits: usize,
    pub s_points: usize,
    pub levels: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            representation: Representation::Matrix,
            potential: PotentialSpec::Quartic { lambda: 8.0 },
            mass: 200.0,
            num_qubits: 5,
            s_points: 51,
            levels: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MassScanConfig {
    pub potential: PotentialSpec,
    pub masses: Vec<f64>,
    pub num_qubits: usize,
    pub grid: usize,
}

impl Default for MassScanConfig {
    fn default() -> Self {
        MassScanConfig {
            potential: PotentialSpec::Cosine,
            masses: vec![25.0, 100.0, 400.0],
            num_qubits: 5,
            grid: schrodinger::DENSITY_GRID,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassicalPoolConfig {
    /// Seed of the first run; run `i` uses `seed + i`.
    pub seed: u64,
    pub split_seed: u64,
    pub runs: usize,
    pub train: TrainConfig,
}

impl Default for ClassicalPoolConfig {
    fn default() -> Self {
        ClassicalPoolConfig {
            seed: 0,
            split_seed: DEFAULT_SPLIT_SEED,
            runs: 1000,
            train: TrainConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AccuracyCurvesConfig {
    /// Pixel split seed.
    pub seed: u64,
    pub anneal: AnnealParams,
    pub pool_size: usize,
    pub pool_seed: u64,
    pub classical_runs: usize,
    pub classical_seed: u64,
    pub train: TrainConfig,
    pub repetitions: usize,
    pub n_grid: Vec<usize>,
    pub curve_seed: u64,
}

impl Default for AccuracyCurvesConfig {
    fn default() -> Self {
        AccuracyCurvesConfig {
            seed: DEFAULT_SPLIT_SEED,
            anneal: AnnealParams::default(),
            pool_size: 1000,
            pool_seed: 0,
            classical_runs: 1000,
            classical_seed: 0,
            train: TrainConfig::default(),
            repetitions: 1000,
            n_grid: (1..=10).collect(),
            curve_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnumerateConfig {
    pub model: EnumModel,
    /// Dataset seed (toy) or split seed (binary).
    pub seed: u64,
    /// Toy model only.
    pub dataset: ToyDataset,
    pub n_points: usize,
    pub band_prob: BandProbability,
}

impl Default for EnumerateConfig {
    fn default() -> Self {
        EnumerateConfig {
            model: EnumModel::Binary,
            seed: DEFAULT_SPLIT_SEED,
            dataset: ToyDataset::Circle,
            n_points: 1000,
            band_prob: BandProbability::Min,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Tunnel(TunnelConfig),
    AnnealMatrix(AnnealMatrixConfig),
    AnnealPaulispin(PaulispinConfig),
    NnToy(NnToyConfig),
    NnBinary(NnBinaryConfig),
    Spectrum(SpectrumConfig),
    MassScan(MassScanConfig),
    ClassicalPool(ClassicalPoolConfig),
    AccuracyCurves(AccuracyCurvesConfig),
    Enumerate(EnumerateConfig),
}

/// `(kind, description)` of every experiment.
pub fn list_experiments() -> Vec<(&'static str, &'static str)> {
    vec![
        ("tunnel", "real-time evolution of a Gaussian packet in a periodic potential (matrix method)"),
        ("anneal-matrix", "adiabatic evolution from the free n = 0 mode to a potential (matrix method)"),
        ("anneal-paulispin", "adiabatic minimization of a polynomial with a fractional-binary register"),
        ("nn-toy", "adiabatic training of the two-layer squared network on the circle or band dataset"),
        ("nn-binary", "adiabatic training of the binary majority network on the 2x2 pixel task"),
        ("spectrum", "lowest instantaneous energies along the anneal"),
        ("mass-scan", "ground-state density peaks against mass"),
        ("classical-pool", "sigmoid-relaxed Adam training runs of the binary network"),
        ("accuracy-curves", "best-of-n accuracy curves for the quantum and classical pools"),
        ("enumerate", "exhaustive weight-space table of a network"),
    ]
}

/// Command-line overrides applied on top of a config.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub band_prob: Option<BandProbability>,
}

fn check_cap(what: &'static str, requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        return Err(Error::RegisterTooLarge { what, requested, cap });
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

fn check_nonzero(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidConfig(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidConfig("num_qubits must be at least 1".into()));
    }
    Ok(())
}

impl AnnealParams {
    fn validate(&self) -> Result<()> {
        check_nonzero("anneal.n_steps", self.n_steps)?;
        check_nonzero("anneal.substeps", self.substeps)?;
        check_positive("anneal.t_final", self.t_final)
    }
}

fn validate_train(t: &TrainConfig) -> Result<()> {
    check_positive("train.learning_rate", t.learning_rate)?;
    check_positive("train.epsilon", t.epsilon)?;
    check_positive("train.steepness", t.steepness)?;
    if !(0.0..1.0).contains(&t.beta1) || !(0.0..1.0).contains(&t.beta2) {
        return Err(Error::InvalidConfig("Adam betas must lie in [0, 1)".into()));
    }
    if !(t.penalty.is_finite() && t.penalty >= 0.0) {
        return Err(Error::InvalidConfig("train.penalty must be non-negative".into()));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentConfig::Tunnel(_) => "tunnel",
            ExperimentConfig::AnnealMatrix(_) => "anneal-matrix",
            ExperimentConfig::AnnealPaulispin(_) => "anneal-paulispin",
            ExperimentConfig::NnToy(_) => "nn-toy",
            ExperimentConfig::NnBinary(_) => "nn-binary",
            ExperimentConfig::Spectrum(_) => "spectrum",
            ExperimentConfig::MassScan(_) => "mass-scan",
            ExperimentConfig::ClassicalPool(_) => "classical-pool",
            ExperimentConfig::AccuracyCurves(_) => "accuracy-curves",
            ExperimentConfig::Enumerate(_) => "enumerate",
        }
    }

    /// Applies overrides; returns a note for every override the kind ignores.
    pub fn apply(&mut self, o: &Overrides) -> Vec<String> {
        let mut notes = Vec::new();
        if let Some(seed) = o.seed {
            match self {
                ExperimentConfig::AnnealPaulispin(c) => c.seed = seed,
                ExperimentConfig::NnToy(c) => c.seed = seed,
                ExperimentConfig::NnBinary(c) => c.seed = seed,
                ExperimentConfig::ClassicalPool(c) => c.seed = seed,
                ExperimentConfig::AccuracyCurves(c) => c.seed = seed,
                ExperimentConfig::Enumerate(c) => c.seed = seed,
                _ => notes.push(format!("--seed ignored: {} is deterministic", self.kind())),
            }
        }
        if let Some(b) = o.band_prob {
            match self {
                ExperimentConfig::NnToy(c) => c.band_prob = b,
                ExperimentConfig::Enumerate(c) => c.band_prob = b,
                _ => notes.push(format!("--band-prob ignored: {} has no band dataset", self.kind())),
            }
        }
        notes
    }

    /// Parameter and register-size checks; nothing is executed.
    pub fn validate(&self) -> Result<()> {
        match self {
            ExperimentConfig::Tunnel(c) => {
                c.potential.validate()?;
                check_qubits(c.num_qubits)?;
                check_cap("dense real-time evolution", c.num_qubits, schrodinger::DENSE_CAP)?;
                check_positive("mass", c.mass)?;
                check_positive("dt", c.dt)?;
                check_nonzero("grid", c.grid)?;
                if !(c.t_total.is_finite() && c.t_total >= 0.0) {
                    return Err(Error::InvalidConfig("t_total must be non-negative".into()));
                }
                if let Some(a) = c.packet_exponent {
                    check_positive("packet_exponent", a)?;
                }
                Ok(())
            }
            ExperimentConfig::AnnealMatrix(c) => {
                c.potential.validate()?;
                check_qubits(c.num_qubits)?;
                check_cap("dense evolution", c.num_qubits, engine::DENSE_EVOLUTION_CAP)?;
                check_positive("mass", c.mass)?;
                check_positive("t_final", c.t_final)?;
                check_nonzero("n_steps", c.n_steps)?;
                check_nonzero("grid", c.grid)
            }
            ExperimentConfig::AnnealPaulispin(c) => {
                pauli_potential(&c.potential)?;
                check_qubits(c.num_qubits)?;
                check_cap("Pauli-spin state vector", c.num_qubits, PAULI_SPIN_CAP)?;
                check_positive("t_final", c.t_final)?;
                check_nonzero("n_steps", c.n_steps)?;
                check_nonzero("substeps", c.substeps)
            }
            ExperimentConfig::NnToy(c) => {
                check_nonzero("n_points", c.n_points)?;
                c.anneal.validate()
            }
            ExperimentConfig::NnBinary(c) => c.anneal.validate(),
            ExperimentConfig::Spectrum(c) => {
                c.potential.validate()?;
                if c.representation == Representation::PauliSpin {
                    pauli_potential(&c.potential)?;
                } else {
                    check_positive("mass", c.mass)?;
                }
                check_qubits(c.num_qubits)?;
                check_cap("instantaneous spectrum", c.num_qubits, engine::SPECTRUM_CAP)?;
                if c.s_points < 2 {
                    return Err(Error::InvalidConfig("s_points must be at least 2".into()));
                }
                check_nonzero("levels", c.levels)
            }
            ExperimentConfig::MassScan(c) => {
                c.potential.validate()?;
                check_qubits(c.num_qubits)?;
                check_cap("dense Hamiltonian", c.num_qubits, schrodinger::DENSE_CAP)?;
                if c.masses.is_empty() {
                    return Err(Error::InvalidConfig("masses must not be empty".into()));
                }
                for &m in &c.masses {
                    check_positive("mass", m)?;
                }
                check_nonzero("grid", c.grid)
            }
            ExperimentConfig::ClassicalPool(c) => {
                check_nonzero("runs", c.runs)?;
                validate_train(&c.train)
            }
            ExperimentConfig::AccuracyCurves(c) => {
                c.anneal.validate()?;
                check_nonzero("pool_size", c.pool_size)?;
                check_nonzero("classical_runs", c.classical_runs)?;
                check_nonzero("repetitions", c.repetitions)?;
                if c.n_grid.is_empty() || c.n_grid.contains(&0) {
                    return Err(Error::InvalidConfig("n_grid must be non-empty with entries ≥ 1".into()));
                }
                validate_train(&c.train)
            }
            ExperimentConfig::Enumerate(c) => {
                if c.model == EnumModel::Toy {
                    check_nonzero("n_points", c.n_points)?;
                }
                Ok(())
            }
        }
    }

    /// The config with every default filled in, as JSON.
    pub fn effective(&self) -> Value {
        serde_json::to_value(self).expect("configs serialize")
    }

    /// SHA-256 of the compact effective config.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(&self.effective()).expect("configs serialize");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    pub kind: Option<String>,
    pub effective: Option<Value>,
    /// Dotted paths of parameters filled from defaults.
    pub defaulted: Vec<String>,
    pub notes: Vec<String>,
    pub errors: Vec<String>,
}

impl Diagnostics {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

fn collect_defaulted(raw: &Value, effective: &Value, prefix: &str, out: &mut Vec<String>) {
    let Value::Object(eff) = effective else { return };
    let empty = serde_json::Map::new();
    let raw = raw.as_object().unwrap_or(&empty);
    for (k, v) in eff {
        let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match raw.get(k) {
            None => out.push(path),
            Some(r) => collect_defaulted(r, v, &path, out),
        }
    }
}

/// Schema and size check of a config text without running it.
pub fn validate(text: &str, overrides: &Overrides) -> Diagnostics {
    let mut d = Diagnostics::default();
    let raw: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => {
            d.errors.push(format!("not valid JSON: {e}"));
            return d;
        }
    };
    let mut cfg = match ExperimentConfig::from_json(text) {
        Ok(c) => c,
        Err(e) => {
            d.errors.push(e.to_string());
            return d;
        }
    };
    d.notes = cfg.apply(overrides);
    d.kind = Some(cfg.kind().to_owned());
    let eff = cfg.effective();
    collect_defaulted(&raw, &eff, "", &mut d.defaulted);
    d.effective = Some(eff);
    if let Err(e) = cfg.validate() {
        d.errors.push(e.to_string());
    }
    d
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub kind: String,
    pub config_hash: String,
    pub wall_time_s: f64,
    pub metrics: BTreeMap<String, Value>,
    pub files: Vec<String>,
}

type Metrics = BTreeMap<String, Value>;

struct Output {
    dir: PathBuf,
    hash: String,
    files: Vec<String>,
}

fn num(x: f64) -> String {
    x.to_string()
}

impl Output {
    /// Writes through a temporary file and renames, so readers never see a
    /// partial file.
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let tmp = self.dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, self.dir.join(name))?;
        self.files.push(name.to_owned());
        Ok(())
    }

    fn csv<I>(&mut self, name: &str, header: &[String], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let mut buf = format!("# config={}\n", self.hash).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(header)?;
            for r in rows {
                w.write_record(&r)?;
            }
            w.flush()?;
        }
        self.write(name, &buf)
    }

    fn json(&mut self, name: &str, key: &str, value: Value) -> Result<()> {
        let doc = json!({ "config_hash": self.hash, key: value });
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    fn samples(&mut self, name: &str, samples: &[Sample], columns: &[&str]) -> Result<()> {
        let mut buf = format!("# config={}\n", self.hash).into_bytes();
        datasets::write_csv(&mut buf, samples, columns, None)?;
        self.write(name, &buf)
    }
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

/// Validates and runs `config`, writing into `out_dir` (created if needed).
pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<Summary> {
    config.validate()?;
    fs::create_dir_all(out_dir)?;
    let start = Instant::now();
    let mut out = Output {
        dir: out_dir.to_path_buf(),
        hash: config.hash(),
        files: Vec::new(),
    };
    let metrics = match config {
        ExperimentConfig::Tunnel(c) => run_tunnel(c, &mut out)?,
        ExperimentConfig::AnnealMatrix(c) => run_anneal_matrix(c, &mut out)?,
        ExperimentConfig::AnnealPaulispin(c) => run_paulispin(c, &mut out)?,
        ExperimentConfig::NnToy(c) => run_nn_toy(c, &mut out)?,
        ExperimentConfig::NnBinary(c) => run_nn_binary(c, &mut out)?,
        ExperimentConfig::Spectrum(c) => run_spectrum(c, &mut out)?,
        ExperimentConfig::MassScan(c) => run_mass_scan(c, &mut out)?,
        ExperimentConfig::ClassicalPool(c) => run_classical_pool(c, &mut out)?,
        ExperimentConfig::AccuracyCurves(c) => run_accuracy_curves(c, &mut out)?,
        ExperimentConfig::Enumerate(c) => run_enumerate(c, &mut out)?,
    };
    let summary = Summary {
        kind: config.kind().to_owned(),
        config_hash: out.hash.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
        metrics,
        files: out.files.clone(),
    };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    out.write("summary.json", text.as_bytes())?;
    Ok(summary)
}

/// Loads, overrides and runs a config file.
pub fn run_file(path: &Path, out_dir: &Path, overrides: &Overrides) -> Result<Summary> {
    let mut cfg = ExperimentConfig::load(path)?;
    cfg.apply(overrides);
    run(&cfg, out_dir)
}

fn finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(name.to_owned()))
    }
}

/// Kinetic-only and full dense Hamiltonians of the matrix method.
pub fn matrix_pair(potential: &PotentialSpec, mass: f64, num_qubits: usize) -> Result<(Hamiltonian, Hamiltonian)> {
    let problem = SchrodingerProblem::new(potential.clone(), mass, num_qubits);
    let h = problem.build_hamiltonian()?;
    let t = problem.truncation;
    let kinetic: Vec<Complex64> = (0..t.dim())
        .map(|i| Complex64::new(problem.kinetic(t.mode_of(i)), 0.0))
        .collect();
    let h0 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(kinetic));
    Ok((Hamiltonian::Dense(h0), Hamiltonian::Dense(h)))
}

/// `V(w)` as a polynomial in `w` for the Pauli-spin encoding.
pub fn pauli_potential(potential: &PotentialSpec) -> Result<VarPolynomial> {
    match potential {
        PotentialSpec::Quartic { lambda } => Ok(schrodinger::QUARTIC_COEFFS
            .iter()
            .enumerate()
            .fold(VarPolynomial::zero(), |acc, (p, c)| {
                acc + VarPolynomial::var("w").pow(p as u32).scale(c * lambda)
            })),
        PotentialSpec::Polynomial { polynomial } => {
            let vars: Vec<String> = polynomial.variables().into_iter().collect();
            match vars.as_slice() {
                [] => Ok(polynomial.clone()),
                [v] => {
                    let map = [(v.clone(), VarPolynomial::var("w"))].into_iter().collect();
                    Ok(polynomial.compose(&map))
                }
                _ => Err(Error::InvalidConfig(format!(
                    "potential polynomial must have one variable, found {vars:?}"
                ))),
            }
        }
        _ => Err(Error::InvalidConfig(
            "the Pauli-spin encoding needs a quartic or polynomial potential".into(),
        )),
    }
}

fn paulispin_pair(potential: &PotentialSpec, num_qubits: usize) -> Result<(Hamiltonian, Hamiltonian, EncodingTable)> {
    let poly = pauli_potential(potential)?;
    let mut table = EncodingTable::new();
    table.push("w", EncodingKind::FractionalBinary { num_qubits })?;
    let h = poly.substitute_encodings(&table)?;
    Ok((
        Hamiltonian::Pauli(engine::transverse_h0(num_qubits)),
        Hamiltonian::Pauli(h),
        table,
    ))
}

fn curvature(potential: &PotentialSpec, w: f64) -> f64 {
    let h = 1e-4;
    (potential.value(w + h) - 2.0 * potential.value(w) + potential.value(w - h)) / (h * h)
}

/// Highest density point in `[lo, hi)`.
fn peak_in(density: &[(f64, f64)], lo: f64, hi: f64) -> (f64, f64) {
    let part: Vec<(f64, f64)> = density.iter().copied().filter(|p| p.0 >= lo && p.0 < hi).collect();
    schrodinger::density_peak(&part)
}

fn density_rows(rows: &mut Vec<Vec<String>>, lead: f64, density: &[(f64, f64)]) {
    rows.extend(density.iter().map(|(w, r)| vec![num(lead), num(*w), num(*r)]));
}

fn run_tunnel(c: &TunnelConfig, out: &mut Output) -> Result<Metrics> {
    let problem = SchrodingerProblem::new(c.potential.clone(), c.mass, c.num_qubits);
    let h = problem.build_hamiltonian()?;
    let exponent = match c.packet_exponent {
        Some(a) => a,
        None => {
            let k = curvature(&c.potential, c.center);
            if !(k > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "no minimum at center {} (curvature {k}); set packet_exponent",
                    c.center
                )));
            }
            schrodinger::sho_exponent(c.mass, k)
        }
    };
    let packet = StateVector::from_amplitudes(schrodinger::gaussian_packet(c.center, exponent, c.num_qubits)?)?;
    let ev = engine::evolve_real_time(&Hamiltonian::Dense(h), &packet, c.t_total, c.dt, 1, c.snapshot_stride)?;
    let target = c.target.unwrap_or((c.center + 0.5).rem_euclid(1.0));
    let mut rows = Vec::new();
    let mut best = (0.0, 0.0);
    let mut first_center = 0.0;
    for (i, snap) in ev.snapshots.iter().enumerate() {
        let d = schrodinger::momentum_to_position(snap.state.amplitudes(), c.grid)?;
        let at_target = schrodinger::mass_near(&d, target, c.window);
        if i == 0 {
            first_center = schrodinger::mass_near(&d, c.center, c.window);
        }
        if at_target > best.1 {
            best = (snap.t, at_target);
        }
        density_rows(&mut rows, snap.t, &d);
    }
    out.csv("density.csv", &header(&["t", "w", "rho"]), rows)?;
    let fin = schrodinger::momentum_to_position(ev.final_state.amplitudes(), c.grid)?;
    let mut m = Metrics::new();
    m.insert("packet_exponent".into(), json!(exponent));
    m.insert("target".into(), json!(target));
    m.insert("initial_center_mass".into(), json!(first_center));
    m.insert("max_target_mass".into(), json!(best.1));
    m.insert("max_target_time".into(), json!(best.0));
    m.insert("final_center_mass".into(), json!(schrodinger::mass_near(&fin, c.center, c.window)));
    m.insert("final_target_mass".into(), json!(schrodinger::mass_near(&fin, target, c.window)));
    m.insert("final_norm".into(), json!(finite("final norm", ev.final_state.norm())?));
    Ok(m)
}

fn run_anneal_matrix(c: &AnnealMatrixConfig, out: &mut Output) -> Result<Metrics> {
    let (h0, h) = matrix_pair(&c.potential, c.mass, c.num_qubits)?;
    let spec = AnnealSpec::new(h0.clone(), h.clone(), c.t_final, c.n_steps)
        .with_method(Method::Exact)
        .with_snapshot_stride(c.snapshot_stride);
    let ev = engine::evolve_adiabatic(&spec, &engine::initial_state_momentum(c.num_qubits))?;
    let mut rows = Vec::new();
    for snap in &ev.snapshots {
        let d = schrodinger::momentum_to_position(snap.state.amplitudes(), c.grid)?;
        density_rows(&mut rows, snap.t, &d);
    }
    out.csv("density.csv", &header(&["t", "w", "rho"]), rows)?;
    let fin = schrodinger::momentum_to_position(ev.final_state.amplitudes(), c.grid)?;
    let left = peak_in(&fin, 0.0, 0.5);
    let right = peak_in(&fin, 0.5, 1.0);
    let (e0, ground) = engine::instantaneous_ground_state(&h0, &h, 1.0)?;
    let mut m = Metrics::new();
    m.insert("ground_energy".into(), json!(finite("ground energy", e0)?));
    m.insert("final_energy".into(), json!(finite("final energy", h.expectation(&ev.final_state)?)?));
    m.insert("ground_fidelity".into(), json!(ground.fidelity(&ev.final_state)?));
    m.insert("left_peak_w".into(), json!(left.0));
    m.insert("left_peak_rho".into(), json!(left.1));
    m.insert("right_peak_w".into(), json!(right.0));
    m.insert("right_peak_rho".into(), json!(right.1));
    m.insert("peak_ratio".into(), json!(left.1.min(right.1) / left.1.max(right.1)));
    m.insert("target".into(), json!(c.target));
    m.insert("target_mass".into(), json!(schrodinger::mass_near(&fin, c.target, c.window)));
    Ok(m)
}

fn run_paulispin(c: &PaulispinConfig, out: &mut Output) -> Result<Metrics> {
    let (h0, h, table) = paulispin_pair(&c.potential, c.num_qubits)?;
    let spec = AnnealSpec::new(h0, h.clone(), c.t_final, c.n_steps)
        .with_substeps(c.substeps)
        .with_snapshot_stride(c.snapshot_stride);
    let ev = engine::evolve_adiabatic(&spec, &engine::initial_state_uniform(c.num_qubits))?;
    let hist = engine::measure_histogram(&ev.final_state, &table)?;
    out.json("histogram.json", "histogram", json!(engine::histogram_map(&hist)))?;
    let marg = engine::marginal(&ev.final_state, &table, "w")?;
    out.csv(
        "marginal.csv",
        &header(&["w", "probability"]),
        marg.iter().map(|(w, p)| vec![num(*w), num(*p)]),
    )?;
    let mut snaps = Vec::new();
    for snap in &ev.snapshots {
        for (i, a) in snap.state.amplitudes().iter().enumerate() {
            snaps.push(vec![num(snap.t), i.to_string(), num(a.re), num(a.im)]);
        }
    }
    out.csv("snapshots.csv", &header(&["t", "basis_index", "re", "im"]), snaps)?;

    let Hamiltonian::Pauli(hp) = &h else { unreachable!() };
    let diag = hp.diagonal()?;
    let e_min = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let probs = ev.final_state.probabilities();
    let ground_probability: f64 = diag
        .iter()
        .zip(&probs)
        .filter(|(e, _)| (**e - e_min).abs() <= 1e-9 * e_min.abs().max(1.0))
        .map(|(_, p)| p)
        .sum();
    let (argmax_w, argmax_p) = marg
        .iter()
        .copied()
        .fold((0.0, -1.0), |b, x| if x.1 > b.1 { x } else { b });
    let mut m = Metrics::new();
    m.insert("argmax_w".into(), json!(argmax_w));
    m.insert("argmax_probability".into(), json!(argmax_p));
    m.insert("bin_width".into(), json!(1.0 / (1u64 << c.num_qubits) as f64));
    m.insert("ground_probability".into(), json!(ground_probability));
    m.insert("min_bin_energy".into(), json!(e_min));
    m.insert("final_energy".into(), json!(finite("final energy", h.expectation(&ev.final_state)?)?));
    if c.shots > 0 {
        let draws = engine::sample_outcomes(&ev.final_state, c.shots, c.seed)?;
        let mut freq = vec![0.0; probs.len()];
        for &i in &draws {
            freq[i] += 1.0 / c.shots as f64;
        }
        let tv: f64 = freq.iter().zip(&probs).map(|(f, p)| (f - p).abs()).sum::<f64>() / 2.0;
        out.csv(
            "samples.csv",
            &header(&["shot", "basis_index", "bitstring", "w"]),
            draws.iter().enumerate().map(|(s, &i)| {
                vec![s.to_string(), i.to_string(), report_bitstring(i, c.num_qubits), num(table.decode_index(i)[0])]
            }),
        )?;
        m.insert("sampled_tv_distance".into(), json!(tv));
    }
    Ok(m)
}

fn anneal_nn(p: &NnProblem, a: &AnnealParams) -> Result<StateVector> {
    let n = p.num_qubits();
    let spec = AnnealSpec::new(
        Hamiltonian::Pauli(engine::transverse_h0(n)),
        Hamiltonian::Pauli(p.hamiltonian.clone()),
        a.t_final,
        a.n_steps,
    )
    .with_substeps(a.substeps);
    Ok(engine::evolve_adiabatic(&spec, &engine::initial_state_uniform(n))?.final_state)
}

fn toy_data(dataset: ToyDataset, n: usize, seed: u64, band: BandProbability) -> Vec<Sample> {
    match dataset {
        ToyDataset::Circle => datasets::circle_dataset(n, seed),
        ToyDataset::Band => datasets::band_dataset(n, seed, band),
    }
}

fn class_table(p: &NnProblem, classes: &[nn::DegeneracyClass], limit: usize) -> Result<Value> {
    classes
        .iter()
        .take(limit)
        .map(|c| {
            let e = p.pool_entry(c.representative)?;
            let mut v = serde_json::to_value(c)?;
            v["train_accuracy"] = json!(e.train_accuracy);
            if !p.test.is_empty() {
                v["test_accuracy"] = json!(e.test_accuracy);
            }
            Ok(v)
        })
        .collect::<Result<Vec<Value>>>()
        .map(Value::Array)
}

/// Whether basis state `index` realizes `Y = 2(x1² + x2²) − 1` on the probe.
fn is_circle_function(p: &NnProblem, index: usize) -> Result<bool> {
    let ys = p.probe_outputs(index)?;
    Ok(p.probe.iter().zip(&ys).all(|(x, y)| {
        let target = 2.0 * (x[0] * x[0] + x[1] * x[1]) - 1.0;
        (y - target).abs() <= 1e-9
    }))
}

fn run_nn_toy(c: &NnToyConfig, out: &mut Output) -> Result<Metrics> {
    let data = toy_data(c.dataset, c.n_points, c.seed, c.band_prob);
    out.samples("dataset.csv", &data, &["x1", "x2"])?;
    let p = NnProblem::toy(data)?;
    let fin = anneal_nn(&p, &c.anneal)?;
    let classes = p.group_degenerate(&fin)?;
    out.json("classes.json", "classes", class_table(&p, &classes, c.report_classes)?)?;
    let hist = engine::measure_histogram(&fin, &p.table)?;
    out.json("histogram.json", "histogram", json!(engine::histogram_map(&hist)))?;
    let diag = p.hamiltonian.diagonal()?;
    let e_min = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let top = &classes[0];
    let mut m = Metrics::new();
    m.insert("num_qubits".into(), json!(p.num_qubits()));
    m.insert("num_classes".into(), json!(classes.len()));
    m.insert("top_class_probability".into(), json!(top.probability));
    m.insert("top_class_energy".into(), json!(top.energy));
    m.insert("top_class_degeneracy".into(), json!(top.degeneracy));
    m.insert("top_class_bitstring".into(), json!(top.bitstring));
    m.insert("top_class_weights".into(), json!(top.weights));
    m.insert("min_energy".into(), json!(e_min));
    m.insert(
        "top_is_optimum".into(),
        json!((top.energy - e_min).abs() <= 1e-9 * e_min.abs().max(1.0)),
    );
    m.insert("top_is_circle".into(), json!(is_circle_function(&p, top.representative)?));
    m.insert("train_accuracy".into(), json!(p.pool_entry(top.representative)?.train_accuracy));
    m.insert("term_stats".into(), serde_json::to_value(p.term_stats())?);
    Ok(m)
}

fn perfect(e: &PoolEntry) -> bool {
    e.train_accuracy == 1.0 && e.test_accuracy == 1.0
}

fn enumeration_csv(p: &NnProblem, rows: &[nn::EnumerationRow], out: &mut Output) -> Result<()> {
    let mut head = header(&["index", "bitstring"]);
    head.extend(p.table.names().map(str::to_owned));
    head.extend(header(&["loss", "train_accuracy", "test_accuracy"]));
    out.csv(
        "enumeration.csv",
        &head,
        rows.iter().map(|r| {
            let mut v = vec![r.index.to_string(), r.bitstring.clone()];
            v.extend(r.weights.iter().map(|w| num(*w)));
            v.extend([num(r.loss), num(r.train_accuracy), num(r.test_accuracy)]);
            v
        }),
    )
}

fn run_nn_binary(c: &NnBinaryConfig, out: &mut Output) -> Result<Metrics> {
    let split = datasets::balanced_split(c.seed);
    let cols = ["p00", "p01", "p10", "p11"];
    out.samples("train.csv", &split.train, &cols)?;
    out.samples("test.csv", &split.test, &cols)?;
    let p = NnProblem::binary(split.train, split.test)?;
    let fin = anneal_nn(&p, &c.anneal)?;
    let probs = fin.probabilities();
    let classes = p.group_degenerate(&fin)?;
    out.json("classes.json", "classes", class_table(&p, &classes, c.report_classes)?)?;
    let hist = engine::measure_histogram(&fin, &p.table)?;
    out.json("histogram.json", "histogram", json!(engine::histogram_map(&hist)))?;
    let rows = p.enumerate_weightspace()?;
    enumeration_csv(&p, &rows, out)?;

    let argmax = probs
        .iter()
        .enumerate()
        .fold(0, |b, (i, &q)| if q > probs[b] { i } else { b });
    let am = p.pool_entry(argmax)?;
    let entries: Vec<PoolEntry> = rows
        .iter()
        .map(|r| PoolEntry {
            train_accuracy: r.train_accuracy,
            test_accuracy: r.test_accuracy,
        })
        .collect();
    let perfect_count = entries.iter().filter(|e| perfect(e)).count();
    let perfect_probability: f64 = entries
        .iter()
        .zip(&probs)
        .filter(|(e, _)| perfect(e))
        .map(|(_, q)| q)
        .sum();
    let mut m = Metrics::new();
    m.insert("num_qubits".into(), json!(p.num_qubits()));
    m.insert("argmax_bitstring".into(), json!(report_bitstring(argmax, p.num_qubits())));
    m.insert("argmax_weights".into(), json!(p.table.decode_index(argmax)));
    m.insert("argmax_probability".into(), json!(probs[argmax]));
    m.insert("argmax_train_accuracy".into(), json!(am.train_accuracy));
    m.insert("argmax_test_accuracy".into(), json!(am.test_accuracy));
    m.insert("argmax_perfect".into(), json!(perfect(&am)));
    m.insert("perfect_probability".into(), json!(perfect_probability));
    m.insert("perfect_count".into(), json!(perfect_count));
    m.insert("perfect_fraction".into(), json!(perfect_count as f64 / rows.len() as f64));
    m.insert("top_class_probability".into(), json!(classes[0].probability));
    m.insert("term_stats".into(), serde_json::to_value(p.term_stats())?);
    Ok(m)
}

fn run_spectrum(c: &SpectrumConfig, out: &mut Output) -> Result<Metrics> {
    let (h0, h) = match c.representation {
        Representation::Matrix => matrix_pair(&c.potential, c.mass, c.num_qubits)?,
        Representation::PauliSpin => {
            let (h0, h, _) = paulispin_pair(&c.potential, c.num_qubits)?;
            (h0, h)
        }
    };
    let grid: Vec<f64> = (0..c.s_points).map(|i| i as f64 / (c.s_points - 1) as f64).collect();
    let spec = engine::instantaneous_spectrum(&h0, &h, &grid, c.levels)?;
    let mut head = vec!["s".to_owned()];
    head.extend((0..c.levels.min(1 << c.num_qubits)).map(|k| format!("E{k}")));
    out.csv(
        "spectrum.csv",
        &head,
        spec.iter().map(|(s, e)| std::iter::once(num(*s)).chain(e.iter().map(|x| num(*x))).collect()),
    )?;
    let mut m = Metrics::new();
    if c.levels >= 2 && c.num_qubits >= 1 {
        let (s_gap, gap) = spec
            .iter()
            .map(|(s, e)| (*s, e[1] - e[0]))
            .fold((0.0, f64::INFINITY), |b, x| if x.1 < b.1 { x } else { b });
        m.insert("min_gap".into(), json!(finite("gap", gap)?));
        m.insert("min_gap_s".into(), json!(s_gap));
    }
    let last = &spec.last().expect("s_points ≥ 2").1;
    m.insert("final_ground_energy".into(), json!(last[0]));
    m.insert("initial_ground_energy".into(), json!(spec[0].1[0]));
    Ok(m)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn run_mass_scan(c: &MassScanConfig, out: &mut Output) -> Result<Metrics> {
    let mut rows = Vec::new();
    let mut peaks = Vec::new();
    let mut table = Vec::new();
    for &mass in &c.masses {
        let (e, amps) = SchrodingerProblem::new(c.potential.clone(), mass, c.num_qubits).ground_state()?;
        let d = schrodinger::momentum_to_position(&amps, c.grid)?;
        let (w, rho) = schrodinger::density_peak(&d);
        density_rows(&mut rows, mass, &d);
        peaks.push((mass, rho));
        table.push(json!({ "mass": mass, "energy": e, "peak_w": w, "peak_rho": rho }));
    }
    out.csv("density.csv", &header(&["m", "w", "rho"]), rows)?;
    let mut m = Metrics::new();
    m.insert("peaks".into(), Value::Array(table));
    if c.masses.len() >= 2 {
        m.insert("fitted_exponent".into(), json!(finite("fitted exponent", log_log_slope(&peaks))?));
    }
    Ok(m)
}

fn classical_runs(
    split: &datasets::Split,
    train: &TrainConfig,
    base_seed: u64,
    runs: usize,
) -> Result<(RelaxedModel, Vec<classical::RunResult>)> {
    let relaxed = RelaxedModel::new(nn::binary_model(), train.steepness, train.penalty)?;
    let results = classical::train_pool(&relaxed, &split.train, &split.test, train, base_seed, runs)?;
    Ok((relaxed, results))
}

fn classical_csv(name: &str, relaxed: &RelaxedModel, runs: &[classical::RunResult], out: &mut Output) -> Result<()> {
    let mut head = vec!["seed".to_owned()];
    head.extend(relaxed.names().iter().cloned());
    head.extend(header(&["train_accuracy", "test_accuracy"]));
    out.csv(
        name,
        &head,
        runs.iter().map(|r| {
            let mut v = vec![r.seed.to_string()];
            v.extend(r.binary.iter().map(|w| num(*w)));
            v.extend([num(r.train_accuracy), num(r.test_accuracy)]);
            v
        }),
    )
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n.max(1) as f64
}

fn run_classical_pool(c: &ClassicalPoolConfig, out: &mut Output) -> Result<Metrics> {
    let split = datasets::balanced_split(c.split_seed);
    let (relaxed, runs) = classical_runs(&split, &c.train, c.seed, c.runs)?;
    classical_csv("pool.csv", &relaxed, &runs, out)?;
    let mut m = Metrics::new();
    m.insert("mean_train_accuracy".into(), json!(mean(runs.iter().map(|r| r.train_accuracy))));
    m.insert("mean_test_accuracy".into(), json!(mean(runs.iter().map(|r| r.test_accuracy))));
    m.insert(
        "max_train_accuracy".into(),
        json!(runs.iter().map(|r| r.train_accuracy).fold(0.0, f64::max)),
    );
    m.insert(
        "perfect_train_fraction".into(),
        json!(mean(runs.iter().map(|r| f64::from(u8::from(r.train_accuracy == 1.0))))),
    );
    m.insert("mean_binarized_fraction".into(), json!(mean(runs.iter().map(|r| r.binarized_fraction(0.1)))));
    Ok(m)
}

fn curves_csv(name: &str, curve: &[nn::CurvePoint], out: &mut Output) -> Result<()> {
    out.csv(
        name,
        &header(&["n", "train_mean", "train_std", "test_mean", "test_std"]),
        curve.iter().map(|c| {
            vec![c.n.to_string(), num(c.train_mean), num(c.train_std), num(c.test_mean), num(c.test_std)]
        }),
    )
}

fn run_accuracy_curves(c: &AccuracyCurvesConfig, out: &mut Output) -> Result<Metrics> {
    let split = datasets::balanced_split(c.seed);
    let p = NnProblem::binary(split.train.clone(), split.test.clone())?;
    let fin = anneal_nn(&p, &c.anneal)?;
    let draws = engine::sample_outcomes(&fin, c.pool_size, c.pool_seed)?;
    let quantum: Vec<PoolEntry> = draws.iter().map(|&i| p.pool_entry(i)).collect::<Result<_>>()?;
    out.csv(
        "quantum_pool.csv",
        &header(&["draw", "basis_index", "bitstring", "train_accuracy", "test_accuracy"]),
        draws.iter().zip(&quantum).enumerate().map(|(k, (&i, e))| {
            vec![
                k.to_string(),
                i.to_string(),
                report_bitstring(i, p.num_qubits()),
                num(e.train_accuracy),
                num(e.test_accuracy),
            ]
        }),
    )?;
    let (relaxed, runs) = classical_runs(&split, &c.train, c.classical_seed, c.classical_runs)?;
    classical_csv("classical_pool.csv", &relaxed, &runs, out)?;
    let classical: Vec<PoolEntry> = runs.iter().map(|r| r.pool_entry()).collect();

    let qc = nn::accuracy_vs_runs(&quantum, &c.n_grid, c.repetitions, c.curve_seed)?;
    let cc = nn::accuracy_vs_runs(&classical, &c.n_grid, c.repetitions, c.curve_seed)?;
    curves_csv("quantum_curves.csv", &qc, out)?;
    curves_csv("classical_curves.csv", &cc, out)?;
    let by_n = |curve: &[nn::CurvePoint]| -> Value {
        curve.iter().map(|p| (p.n.to_string(), json!(p.train_mean))).collect::<serde_json::Map<_, _>>().into()
    };
    let ordered = qc
        .iter()
        .zip(&cc)
        .filter(|(q, _)| q.n >= 2)
        .all(|(q, k)| q.train_mean > k.train_mean);
    let mut m = Metrics::new();
    m.insert("quantum_train_mean".into(), by_n(&qc));
    m.insert("classical_train_mean".into(), by_n(&cc));
    m.insert("quantum_above_classical_from_n2".into(), json!(ordered));
    m.insert(
        "classical_plateau".into(),
        json!(cc.last().map(|p| p.train_mean).unwrap_or(f64::NAN)),
    );
    m.insert(
        "quantum_pool_train_mean".into(),
        json!(mean(quantum.iter().map(|e| e.train_accuracy))),
    );
    m.insert(
        "classical_pool_train_mean".into(),
        json!(mean(classical.iter().map(|e| e.train_accuracy))),
    );
    Ok(m)
}

fn run_enumerate(c: &EnumerateConfig, out: &mut Output) -> Result<Metrics> {
    let p = match c.model {
        EnumModel::Toy => {
            let data = toy_data(c.dataset, c.n_points, c.seed, c.band_prob);
            out.samples("dataset.csv", &data, &["x1", "x2"])?;
            NnProblem::toy(data)?
        }
        EnumModel::Binary => {
            let split = datasets::balanced_split(c.seed);
            let cols = ["p00", "p01", "p10", "p11"];
            out.samples("train.csv", &split.train, &cols)?;
            out.samples("test.csv", &split.test, &cols)?;
            NnProblem::binary(split.train, split.test)?
        }
    };
    let rows = p.enumerate_weightspace()?;
    enumeration_csv(&p, &rows, out)?;
    let min_loss = rows.iter().map(|r| r.loss).fold(f64::INFINITY, f64::min);
    let argmin: Vec<usize> = rows
        .iter()
        .filter(|r| (r.loss - min_loss).abs() <= 1e-9 * min_loss.abs().max(1.0))
        .map(|r| r.index)
        .collect();
    let mut m = Metrics::new();
    m.insert("rows".into(), json!(rows.len()));
    m.insert("min_loss".into(), json!(min_loss));
    m.insert("argmin_count".into(), json!(argmin.len()));
    m.insert(
        "argmin_bitstrings".into(),
        json!(argmin.iter().map(|&i| report_bitstring(i, p.num_qubits())).collect::<Vec<_>>()),
    );
    if !p.test.is_empty() {
        let count = rows
            .iter()
            .filter(|r| r.train_accuracy == 1.0 && r.test_accuracy == 1.0)
            .count();
        m.insert("perfect_count".into(), json!(count));
        m.insert("perfect_fraction".into(), json!(count as f64 / rows.len() as f64));
    }
    m.insert("term_stats".into(), serde_json::to_value(p.term_stats())?);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_round_trip() {
        for (kind, _) in list_experiments() {
            let cfg = ExperimentConfig::from_json(&format!(r#"{{"kind": "{kind}"}}"#)).unwrap();
            assert_eq!(cfg.kind(), kind);
            let back = ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
            assert_eq!(back, cfg);
            cfg.validate().unwrap();
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"kind": "nn-toy", "n_pionts": 5}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"kind": "nope"}"#).is_err());
    }

    #[test]
    fn missing_seed_is_reported() {
        let d = validate(r#"{"kind": "nn-toy", "dataset": "band"}"#, &Overrides::default());
        assert!(d.is_ok());
        assert!(d.defaulted.contains(&"seed".to_owned()));
        assert!(!d.defaulted.contains(&"dataset".to_owned()));
        assert_eq!(d.effective.unwrap()["seed"], json!(DEFAULT_TOY_SEED));
    }

    #[test]
    fn nested_defaults_are_reported() {
        let d = validate(
            r#"{"kind": "classical-pool", "train": {"steps": 10}}"#,
            &Overrides::default(),
        );
        assert!(d.defaulted.contains(&"train.learning_rate".to_owned()));
        assert!(!d.defaulted.contains(&"train.steps".to_owned()));
    }

    #[test]
    fn oversized_dense_register_rejected() {
        let d = validate(r#"{"kind": "anneal-matrix", "num_qubits": 30}"#, &Overrides::default());
        assert!(!d.is_ok());
        assert!(d.errors[0].contains("cap of 10"), "{:?}", d.errors);
        let d = validate(r#"{"kind": "mass-scan", "num_qubits": 30}"#, &Overrides::default());
        assert!(d.errors[0].contains("cap of 12"), "{:?}", d.errors);
    }

    #[test]
    fn band_flag_is_echoed() {
        let o = Overrides {
            seed: Some(3),
            band_prob: Some(BandProbability::Max),
        };
        let d = validate(r#"{"kind": "nn-toy", "dataset": "band"}"#, &o);
        let eff = d.effective.unwrap();
        assert_eq!(eff["band_prob"], json!("max"));
        assert_eq!(eff["seed"], json!(3));
        let d = validate(r#"{"kind": "mass-scan"}"#, &o);
        assert_eq!(d.notes.len(), 2);
    }

    #[test]
    fn paulispin_rejects_trigonometric_potential() {
        let d = validate(
            r#"{"kind": "anneal-paulispin", "potential": {"kind": "cosine"}}"#,
            &Overrides::default(),
        );
        assert!(!d.is_ok());
    }

    #[test]
    fn quartic_polynomial_matches_potential() {
        let pot = PotentialSpec::Quartic { lambda: 3.0 };
        let poly = pauli_potential(&pot).unwrap();
        for &w in &[0.0, 0.1848, 0.5, 0.8] {
            let v = poly.evaluate_with(|_| Some(w)).unwrap();
            assert!((v - pot.value(w)).abs() < 1e-12);
        }
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 4.0, 16.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(0.25))).collect();
        assert!((log_log_slope(&pts) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn hash_ignores_key_order_and_defaults() {
        let a = ExperimentConfig::from_json(r#"{"kind": "nn-binary", "seed": 25}"#).unwrap();
        let b = ExperimentConfig::from_json(r#"{"seed": 25, "kind": "nn-binary"}"#).unwrap();
        let c = ExperimentConfig::from_json(r#"{"kind": "nn-binary"}"#).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
