//! Small feed-forward networks whose weights live on qubits.
//!
//! A [`ModelSpec`] lists layers `z ↦ f(W z + b)`; every weight or bias entry
//! is either a named variable or a constant. For fixed inputs the network
//! output is a polynomial in the weight variables ([`symbolic_forward`]), so a
//! loss over a dataset is a [`VarPolynomial`] that compiles to a diagonal
//! Hamiltonian once each variable has an encoding.
//!
//! The majority-step activation `Θ(Σ_j u_j − n/2)` (with `Θ(0) = 1`) on 0/1
//! inputs is represented exactly by [`theta_polynomial`].

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::datasets::Sample;
use crate::encoding::{report_bitstring, EncodingKind, EncodingTable};
use crate::error::{Error, Result};
use crate::pauli::PauliPolynomial;
use crate::rng;
use crate::state::StateVector;
use crate::varpoly::VarPolynomial;

/// Largest register enumerated basis state by basis state.
pub const ENUMERATION_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Identity,
    Square,
    /// `Σ_k c_k z^k`.
    Polynomial { coefficients: Vec<f64> },
    /// `Θ(Σ_j u_j − n/2)` over the `n` products `u_j = w_j z_j`.
    StepMajority,
}

impl Activation {
    /// Polynomial degree, or the fan-in for the majority step.
    pub fn degree(&self, fan_in: usize) -> u32 {
        match self {
            Activation::Identity => 1,
            Activation::Square => 2,
            Activation::Polynomial { coefficients } => coefficients.len().saturating_sub(1) as u32,
            Activation::StepMajority => fan_in as u32,
        }
    }
}

/// A weight or bias: a named variable or a fixed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Var(String),
    Const(f64),
}

impl Entry {
    fn poly(&self) -> VarPolynomial {
        match self {
            Entry::Var(n) => VarPolynomial::var(n.clone()),
            Entry::Const(c) => VarPolynomial::constant(*c),
        }
    }

    fn value(&self, weights: &HashMap<String, f64>) -> Result<f64> {
        match self {
            Entry::Var(n) => weights.get(n).copied().ok_or_else(|| Error::MissingVariable(n.clone())),
            Entry::Const(c) => Ok(*c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    /// Row `i` holds the weights feeding output `i`.
    pub weights: Vec<Vec<Entry>>,
    pub biases: Vec<Entry>,
    pub activation: Activation,
}

impl LayerSpec {
    pub fn fan_in(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn outputs(&self) -> usize {
        self.weights.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub layers: Vec<LayerSpec>,
}

impl ModelSpec {
    pub fn input_dim(&self) -> usize {
        self.layers.first().map_or(0, LayerSpec::fan_in)
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(0, LayerSpec::outputs)
    }

    /// Variable names in layer, row, column order (weights before biases).
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in &self.layers {
            for e in l.weights.iter().flatten().chain(&l.biases) {
                if let Entry::Var(n) = e {
                    out.push(n.clone());
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::InvalidModel("model has no layers".into()));
        }
        let mut width = self.input_dim();
        for (k, l) in self.layers.iter().enumerate() {
            if l.weights.is_empty() || l.weights.iter().any(|r| r.len() != width) {
                return Err(Error::InvalidModel(format!(
                    "layer {k}: every weight row must have {width} entries"
                )));
            }
            if l.biases.len() != l.outputs() {
                return Err(Error::InvalidModel(format!(
                    "layer {k}: {} biases for {} outputs",
                    l.biases.len(),
                    l.outputs()
                )));
            }
            if l.activation == Activation::StepMajority
                && l.biases.iter().any(|b| *b != Entry::Const(0.0))
            {
                return Err(Error::InvalidModel(format!(
                    "layer {k}: majority-step layers take zero biases"
                )));
            }
            width = l.outputs();
        }
        let vars = self.variables();
        let unique: BTreeSet<&String> = vars.iter().collect();
        if unique.len() != vars.len() {
            return Err(Error::InvalidModel("variable names must be unique".into()));
        }
        Ok(())
    }

    /// Largest fan-in over the layers.
    pub fn max_fan_in(&self) -> usize {
        self.layers.iter().map(LayerSpec::fan_in).max().unwrap_or(0)
    }

    /// Largest activation degree over the layers.
    pub fn max_degree(&self) -> u32 {
        self.layers
            .iter()
            .map(|l| l.activation.degree(l.fan_in()))
            .max()
            .unwrap_or(0)
    }

    pub fn has_polynomial_activations(&self) -> bool {
        self.layers.iter().all(|l| l.activation != Activation::StepMajority)
    }
}

fn var_grid(prefix: &str, rows: usize, cols: usize) -> Vec<Vec<Entry>> {
    (1..=rows)
        .map(|i| (1..=cols).map(|j| Entry::Var(format!("{prefix}_{i}{j}"))).collect())
        .collect()
}

/// Two inputs, two squared hidden units, linear output with bias `−1`:
/// `Y = w2_1 (w1_11 x1 + w1_12 x2)² + w2_2 (w1_21 x1 + w1_22 x2)² − 1`.
pub fn toy_model() -> ModelSpec {
    ModelSpec {
        layers: vec![
            LayerSpec {
                weights: var_grid("w1", 2, 2),
                biases: vec![Entry::Const(0.0); 2],
                activation: Activation::Square,
            },
            LayerSpec {
                weights: vec![vec![Entry::Var("w2_1".into()), Entry::Var("w2_2".into())]],
                biases: vec![Entry::Const(-1.0)],
                activation: Activation::Identity,
            },
        ],
    }
}

/// Four pixel inputs, two majority hidden units, one majority output; all ten
/// weights binary and all biases zero.
pub fn binary_model() -> ModelSpec {
    ModelSpec {
        layers: vec![
            LayerSpec {
                weights: var_grid("w1", 2, 4),
                biases: vec![Entry::Const(0.0); 2],
                activation: Activation::StepMajority,
            },
            LayerSpec {
                weights: vec![vec![Entry::Var("w2_1".into()), Entry::Var("w2_2".into())]],
                biases: vec![Entry::Const(0.0)],
                activation: Activation::StepMajority,
            },
        ],
    }
}

/// One qubit per variable in [`ModelSpec::variables`] order.
pub fn encoding_for(model: &ModelSpec, kind: EncodingKind) -> Result<EncodingTable> {
    EncodingTable::uniform(&model.variables(), kind)
}

/// `Σ_{m ≤ ⌊n/2⌋} Σ_{|S| = m} Π_{j∉S} u_j Π_{k∈S} (1 − u_k)`, equal to
/// `Θ(Σ u − n/2)` whenever every `u_j ∈ {0, 1}`.
pub fn theta_polynomial(inputs: &[VarPolynomial]) -> VarPolynomial {
    let n = inputs.len();
    let one = VarPolynomial::constant(1.0);
    let complements: Vec<VarPolynomial> = inputs.iter().map(|u| &one - u).collect();
    let mut total = VarPolynomial::zero();
    // Walk every subset of "off" positions with at most ⌊n/2⌋ members.
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize > n / 2 {
            continue;
        }
        let mut term = one.clone();
        for j in 0..n {
            let f = if mask >> j & 1 == 1 { &complements[j] } else { &inputs[j] };
            term = &term * f;
        }
        total = &total + &term;
    }
    total
}

fn activate(act: &Activation, pre: VarPolynomial, products: &[VarPolynomial]) -> VarPolynomial {
    match act {
        Activation::Identity => pre,
        Activation::Square => pre.pow(2),
        Activation::Polynomial { coefficients } => {
            let mut acc = VarPolynomial::zero();
            let mut power = VarPolynomial::constant(1.0);
            for &c in coefficients {
                acc = &acc + &power.scale(c);
                power = &power * &pre;
            }
            acc
        }
        Activation::StepMajority => theta_polynomial(products),
    }
}

/// Network outputs at input `x` as polynomials in the weight variables.
pub fn symbolic_forward(model: &ModelSpec, x: &[f64]) -> Result<Vec<VarPolynomial>> {
    model.validate()?;
    if x.len() != model.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            got: x.len(),
        });
    }
    let mut z: Vec<VarPolynomial> = x.iter().map(|&v| VarPolynomial::constant(v)).collect();
    for layer in &model.layers {
        z = layer
            .weights
            .iter()
            .zip(&layer.biases)
            .map(|(row, b)| {
                let products: Vec<VarPolynomial> = row.iter().zip(&z).map(|(w, zi)| &w.poly() * zi).collect();
                let pre = products.iter().fold(b.poly(), |acc, p| &acc + p);
                activate(&layer.activation, pre, &products)
            })
            .collect();
    }
    Ok(z)
}

fn single_output(model: &ModelSpec) -> Result<()> {
    if model.output_dim() != 1 {
        return Err(Error::InvalidModel(format!(
            "expected one output, model has {}",
            model.output_dim()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossSpec {
    /// `(1/N) Σ_a (Y(x_a) − y_a)²`.
    MeanSquaredError,
    /// `Σ_a (−1)^{y_a} Y(x_a)` for labels in `{0, 1}`.
    LinearBinary,
}

impl LossSpec {
    fn check_labels(self, data: &[Sample]) -> Result<()> {
        if self == LossSpec::LinearBinary {
            if let Some(s) = data.iter().find(|s| s.label != 0 && s.label != 1) {
                return Err(Error::IncompatibleLabels(format!(
                    "linear binary loss needs labels in {{0, 1}}, found {}",
                    s.label
                )));
            }
        }
        Ok(())
    }

    /// Per-sample contribution for a numeric output `y_hat`.
    pub fn contribution(self, y_hat: f64, label: i32) -> f64 {
        match self {
            LossSpec::MeanSquaredError => (y_hat - f64::from(label)).powi(2),
            LossSpec::LinearBinary => {
                if label == 1 {
                    -y_hat
                } else {
                    y_hat
                }
            }
        }
    }

    fn normalization(self, n: usize) -> f64 {
        match self {
            LossSpec::MeanSquaredError => 1.0 / n.max(1) as f64,
            LossSpec::LinearBinary => 1.0,
        }
    }
}

/// Loss over `data` as a polynomial in the weights.
pub fn build_loss(model: &ModelSpec, data: &[Sample], loss: LossSpec) -> Result<VarPolynomial> {
    single_output(model)?;
    loss.check_labels(data)?;
    let mut total = VarPolynomial::zero();
    for s in data {
        let y = symbolic_forward(model, &s.features)?.remove(0);
        let term = match loss {
            LossSpec::MeanSquaredError => (&y - &VarPolynomial::constant(f64::from(s.label))).pow(2),
            LossSpec::LinearBinary => {
                if s.label == 1 {
                    -&y
                } else {
                    y
                }
            }
        };
        total = &total + &term;
    }
    Ok(total.scale(loss.normalization(data.len())))
}

/// Replaces weights by their qubit operators.
pub fn compile_hamiltonian(loss: &VarPolynomial, table: &EncodingTable) -> Result<PauliPolynomial> {
    loss.substitute_encodings(table)
}

fn step(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Numeric forward pass.
pub fn forward(model: &ModelSpec, weights: &HashMap<String, f64>, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != model.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            got: x.len(),
        });
    }
    let mut z = x.to_vec();
    for layer in &model.layers {
        let n = layer.fan_in() as f64;
        let mut next = Vec::with_capacity(layer.outputs());
        for (row, b) in layer.weights.iter().zip(&layer.biases) {
            let mut pre = b.value(weights)?;
            for (w, zi) in row.iter().zip(&z) {
                pre += w.value(weights)? * zi;
            }
            next.push(match &layer.activation {
                Activation::Identity => pre,
                Activation::Square => pre * pre,
                Activation::Polynomial { coefficients } => {
                    coefficients.iter().rev().fold(0.0, |acc, c| acc * pre + c)
                }
                Activation::StepMajority => step(pre - n / 2.0),
            });
        }
        z = next;
    }
    Ok(z)
}

/// Scalar output `Y(x)`.
pub fn predict(model: &ModelSpec, weights: &HashMap<String, f64>, x: &[f64]) -> Result<f64> {
    single_output(model)?;
    Ok(forward(model, weights, x)?[0])
}

/// Signal when `Y(x) ≥ threshold`.
pub fn decision(model: &ModelSpec, weights: &HashMap<String, f64>, x: &[f64], threshold: f64) -> Result<bool> {
    Ok(predict(model, weights, x)? >= threshold)
}

/// A sample counts as signal when its label is positive.
pub fn is_signal(s: &Sample) -> bool {
    s.label > 0
}

/// Fraction of samples whose decision matches the label.
pub fn accuracy(model: &ModelSpec, weights: &HashMap<String, f64>, data: &[Sample], threshold: f64) -> Result<f64> {
    if data.is_empty() {
        return Ok(0.0);
    }
    let mut hits = 0usize;
    for s in data {
        if decision(model, weights, &s.features, threshold)? == is_signal(s) {
            hits += 1;
        }
    }
    Ok(hits as f64 / data.len() as f64)
}

/// Loss from numeric forward passes (no polynomial expansion).
pub fn numeric_loss(model: &ModelSpec, weights: &HashMap<String, f64>, data: &[Sample], loss: LossSpec) -> Result<f64> {
    loss.check_labels(data)?;
    let mut total = 0.0;
    for s in data {
        total += loss.contribution(predict(model, weights, &s.features)?, s.label);
    }
    Ok(total * loss.normalization(data.len()))
}

/// Everything needed to train one network on qubits.
#[derive(Debug, Clone)]
pub struct NnProblem {
    pub model: ModelSpec,
    pub table: EncodingTable,
    pub loss_spec: LossSpec,
    pub threshold: f64,
    pub train: Vec<Sample>,
    pub test: Vec<Sample>,
    /// Inputs on which degeneracy classes are distinguished.
    pub probe: Vec<Vec<f64>>,
    pub loss: VarPolynomial,
    pub hamiltonian: PauliPolynomial,
}

impl NnProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        model: ModelSpec,
        kind: EncodingKind,
        loss_spec: LossSpec,
        threshold: f64,
        train: Vec<Sample>,
        test: Vec<Sample>,
        probe: Vec<Vec<f64>>,
    ) -> Result<Self> {
        model.validate()?;
        let table = encoding_for(&model, kind)?;
        let loss = build_loss(&model, &train, loss_spec)?;
        let hamiltonian = compile_hamiltonian(&loss, &table)?;
        Ok(NnProblem {
            model,
            table,
            loss_spec,
            threshold,
            train,
            test,
            probe,
            loss,
            hamiltonian,
        })
    }

    /// The two-layer squared network on a point dataset with ±1 weights. The
    /// probe is the training set plus a 21×21 grid on `[−1, 1]²`.
    pub fn toy(train: Vec<Sample>) -> Result<Self> {
        let mut probe: Vec<Vec<f64>> = train.iter().map(|s| s.features.clone()).collect();
        for i in 0..21 {
            for j in 0..21 {
                probe.push(vec![-1.0 + 0.1 * i as f64, -1.0 + 0.1 * j as f64]);
            }
        }
        Self::build(
            toy_model(),
            EncodingKind::SpinPm1,
            LossSpec::MeanSquaredError,
            0.0,
            train,
            Vec::new(),
            probe,
        )
    }

    /// The binary majority network on a pixel split with 0/1 weights. The
    /// probe is all 16 images.
    pub fn binary(train: Vec<Sample>, test: Vec<Sample>) -> Result<Self> {
        let probe = crate::datasets::pixel2x2_dataset().into_iter().map(|s| s.features).collect();
        Self::build(
            binary_model(),
            EncodingKind::Binary01,
            LossSpec::LinearBinary,
            0.5,
            train,
            test,
            probe,
        )
    }

    pub fn num_qubits(&self) -> usize {
        self.table.total_qubits()
    }

    /// Weights decoded from basis state `index`.
    pub fn weights(&self, index: usize) -> HashMap<String, f64> {
        self.table.assignment(index).into_iter().collect()
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.num_qubits() > ENUMERATION_CAP {
            return Err(Error::RegisterTooLarge {
                what: "weight-space enumeration",
                requested: self.num_qubits(),
                cap: ENUMERATION_CAP,
            });
        }
        Ok(())
    }

    /// Outputs on the probe inputs for basis state `index`.
    pub fn probe_outputs(&self, index: usize) -> Result<Vec<f64>> {
        let w = self.weights(index);
        self.probe.iter().map(|x| predict(&self.model, &w, x)).collect()
    }

    /// Basis states grouped by their output function on the probe set,
    /// sorted by decreasing probability.
    pub fn group_degenerate(&self, state: &StateVector) -> Result<Vec<DegeneracyClass>> {
        self.check_enumerable()?;
        if state.num_qubits() != self.num_qubits() {
            return Err(Error::RegisterMismatch {
                left: self.num_qubits(),
                right: state.num_qubits(),
            });
        }
        let diag = self.hamiltonian.diagonal()?;
        let probs = state.probabilities();
        let mut classes: BTreeMap<Vec<i64>, DegeneracyClass> = BTreeMap::new();
        for index in 0..state.dim() {
            let outputs = self.probe_outputs(index)?;
            let key: Vec<i64> = outputs.iter().map(|y| (y * 1e9).round() as i64).collect();
            let p = probs[index];
            let class = classes.entry(key).or_insert_with(|| DegeneracyClass {
                representative: index,
                bitstring: report_bitstring(index, self.num_qubits()),
                weights: self.table.decode_index(index),
                probability: 0.0,
                energy: diag[index],
                degeneracy: 0,
                prediction_hash: prediction_hash(&outputs),
                members: Vec::new(),
            });
            if p > probs[class.representative] {
                class.representative = index;
                class.bitstring = report_bitstring(index, self.num_qubits());
                class.weights = self.table.decode_index(index);
                class.energy = diag[index];
            }
            class.probability += p;
            class.degeneracy += 1;
            class.members.push(index);
        }
        let mut out: Vec<DegeneracyClass> = classes.into_values().collect();
        out.sort_by(|a, b| b.probability.total_cmp(&a.probability).then(a.representative.cmp(&b.representative)));
        Ok(out)
    }

    /// Loss and accuracies of every weight configuration, in basis order.
    pub fn enumerate_weightspace(&self) -> Result<Vec<EnumerationRow>> {
        self.check_enumerable()?;
        (0..1usize << self.num_qubits())
            .map(|index| {
                let w = self.weights(index);
                Ok(EnumerationRow {
                    index,
                    bitstring: report_bitstring(index, self.num_qubits()),
                    weights: self.table.decode_index(index),
                    loss: numeric_loss(&self.model, &w, &self.train, self.loss_spec)?,
                    train_accuracy: accuracy(&self.model, &w, &self.train, self.threshold)?,
                    test_accuracy: accuracy(&self.model, &w, &self.test, self.threshold)?,
                })
            })
            .collect()
    }

    /// Train and test accuracy of basis state `index`.
    pub fn pool_entry(&self, index: usize) -> Result<PoolEntry> {
        let w = self.weights(index);
        Ok(PoolEntry {
            train_accuracy: accuracy(&self.model, &w, &self.train, self.threshold)?,
            test_accuracy: accuracy(&self.model, &w, &self.test, self.threshold)?,
        })
    }

    pub fn term_stats(&self) -> TermStats {
        term_stats(&self.model, &self.loss, &self.hamiltonian)
    }
}

fn prediction_hash(outputs: &[f64]) -> String {
    let mut h = Sha256::new();
    for y in outputs {
        h.update(format!("{:.9};", y).as_bytes());
    }
    hex::encode(&h.finalize()[..8])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyClass {
    /// Most probable member.
    pub representative: usize,
    pub bitstring: String,
    pub weights: Vec<f64>,
    pub probability: f64,
    pub energy: f64,
    pub degeneracy: usize,
    pub prediction_hash: String,
    #[serde(skip)]
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationRow {
    pub index: usize,
    pub bitstring: String,
    pub weights: Vec<f64>,
    pub loss: f64,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub train_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub n: usize,
    pub train_mean: f64,
    pub train_std: f64,
    pub test_mean: f64,
    pub test_std: f64,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Best-of-`n` selection statistics.
///
/// Repetition `r` draws `n` pool entries with replacement from a generator
/// seeded with `seed + r`, keeps the one with the highest training accuracy
/// (first drawn on ties) and records its train and test accuracy.
pub fn accuracy_vs_runs(pool: &[PoolEntry], n_grid: &[usize], repetitions: usize, seed: u64) -> Result<Vec<CurvePoint>> {
    if pool.is_empty() {
        return Err(Error::Invalid("accuracy curves need a non-empty pool".into()));
    }
    if repetitions == 0 {
        return Err(Error::Invalid("repetitions must be ≥ 1".into()));
    }
    n_grid
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::Invalid("run counts must be ≥ 1".into()));
            }
            let mut train = Vec::with_capacity(repetitions);
            let mut test = Vec::with_capacity(repetitions);
            for r in 0..repetitions {
                let mut g = rng::seeded(seed.wrapping_add(r as u64));
                let mut best = pool[rng::index(&mut g, pool.len())];
                for _ in 1..n {
                    let e = pool[rng::index(&mut g, pool.len())];
                    if e.train_accuracy > best.train_accuracy {
                        best = e;
                    }
                }
                train.push(best.train_accuracy);
                test.push(best.test_accuracy);
            }
            let (train_mean, train_std) = mean_std(&train);
            let (test_mean, test_std) = mean_std(&test);
            Ok(CurvePoint {
                n,
                train_mean,
                train_std,
                test_mean,
                test_std,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermStats {
    pub loss_terms: usize,
    pub loss_degree: u32,
    pub hamiltonian_terms: usize,
    pub hamiltonian_degree: usize,
    /// `M^{d^L}` with `M` the largest fan-in, `d` the largest activation
    /// degree and `L` the number of layers (saturating).
    pub generic_bound: u128,
    /// `2^{N_q}`, the number of distinct Z-strings on the register.
    pub diagonal_bound: u128,
    pub within_bounds: bool,
}

pub fn term_stats(model: &ModelSpec, loss: &VarPolynomial, hamiltonian: &PauliPolynomial) -> TermStats {
    let m = model.max_fan_in() as u128;
    let d = model.max_degree();
    let l = model.layers.len() as u32;
    let exponent = d.checked_pow(l).unwrap_or(u32::MAX);
    let generic_bound = m.checked_pow(exponent).unwrap_or(u128::MAX);
    let diagonal_bound = 1u128.checked_shl(hamiltonian.num_qubits() as u32).unwrap_or(u128::MAX);
    let count = hamiltonian.term_count() as u128;
    TermStats {
        loss_terms: loss.term_count(),
        loss_degree: loss.degree(),
        hamiltonian_terms: hamiltonian.term_count(),
        hamiltonian_degree: hamiltonian.degree(),
        generic_bound,
        diagonal_bound,
        within_bounds: count <= generic_bound && count <= diagonal_bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    fn w(pairs: &[(&str, f64)]) -> HashMap<String, f64> {
        pairs.iter().map(|&(n, v)| (n.to_owned(), v)).collect()
    }

    fn toy_optimum() -> HashMap<String, f64> {
        w(&[("w1_11", 1.0), ("w1_12", 1.0), ("w1_21", 1.0), ("w1_22", -1.0), ("w2_1", 1.0), ("w2_2", 1.0)])
    }

    #[test]
    fn toy_forward_at_unit_input() {
        let y = symbolic_forward(&toy_model(), &[1.0, 0.0]).unwrap().remove(0);
        let want: VarPolynomial = "w2_1 * w1_11^2 + w2_2 * w1_21^2 - 1".parse().unwrap();
        assert_eq!(y, want);
    }

    #[test]
    fn constant_model_forward() {
        let mut m = toy_model();
        for l in &mut m.layers {
            for e in l.weights.iter_mut().flatten() {
                *e = Entry::Const(0.5);
            }
        }
        let y = symbolic_forward(&m, &[0.3, -0.7]).unwrap().remove(0);
        let numeric = predict(&m, &HashMap::new(), &[0.3, -0.7]).unwrap();
        assert_eq!(y.term_count(), 1);
        assert!((y.constant_term() - numeric).abs() < 1e-15);
    }

    #[test]
    fn theta_examples() {
        let t: Vec<VarPolynomial> = ["t1", "t2", "t3"].iter().map(|n| VarPolynomial::var(*n)).collect();
        let got = theta_polynomial(&t);
        let one = VarPolynomial::constant(1.0);
        let bar = |i: usize| &one - &t[i];
        let want = &(&(&(&t[0] * &t[1]) * &t[2]) + &(&(&t[0] * &t[1]) * &bar(2)))
            + &(&(&(&t[0] * &bar(1)) * &t[2]) + &(&(&bar(0) * &t[1]) * &t[2]));
        assert_eq!(got, want);
        assert_eq!(got, "t1*t2 + t1*t3 + t2*t3 - 2*t1*t2*t3".parse().unwrap());
        assert_eq!(theta_polynomial(&t[..1]), VarPolynomial::var("t1"));
    }

    #[test]
    fn toy_predictions() {
        let m = toy_model();
        let opt = toy_optimum();
        assert_eq!(predict(&m, &opt, &[0.0, 0.0]).unwrap(), -1.0);
        assert!(!decision(&m, &opt, &[0.0, 0.0], 0.0).unwrap());
        assert_eq!(predict(&m, &opt, &[1.0, 0.0]).unwrap(), 1.0);
        assert!(decision(&m, &opt, &[1.0, 0.0], 0.0).unwrap());
    }

    #[test]
    fn mse_single_sample() {
        let mut m = toy_model();
        m.layers[1].weights = vec![vec![Entry::Const(0.0), Entry::Const(0.0)]];
        let data = vec![Sample { features: vec![0.2, 0.1], label: 1 }];
        let l = build_loss(&m, &data, LossSpec::MeanSquaredError).unwrap();
        assert_eq!(l, VarPolynomial::constant(4.0));
        assert!(compile_hamiltonian(&l, &encoding_for(&toy_model(), EncodingKind::SpinPm1).unwrap())
            .unwrap()
            .is_diagonal());
    }

    #[test]
    fn linear_loss_contributions() {
        assert_eq!(LossSpec::LinearBinary.contribution(1.0, 1), -1.0);
        assert_eq!(LossSpec::LinearBinary.contribution(1.0, 0), 1.0);
        assert_eq!(LossSpec::LinearBinary.contribution(0.0, 0), 0.0);
        assert_eq!(LossSpec::LinearBinary.contribution(0.0, 1), 0.0);
        let bad = vec![Sample { features: vec![0.0; 4], label: 2 }];
        assert!(matches!(
            build_loss(&binary_model(), &bad, LossSpec::LinearBinary),
            Err(Error::IncompatibleLabels(_))
        ));
    }

    #[test]
    fn binary_problem_has_ten_qubits() {
        let s = datasets::balanced_split(0);
        let p = NnProblem::binary(s.train, s.test).unwrap();
        assert_eq!(p.num_qubits(), 10);
        assert!(p.hamiltonian.is_diagonal());
        assert_eq!(p.table.names().collect::<Vec<_>>()[..3], ["w1_11", "w1_12", "w1_13"]);
    }

    #[test]
    fn sign_flip_shares_a_class() {
        let p = NnProblem::toy(datasets::circle_dataset(50, 2)).unwrap();
        let classes = p.group_degenerate(&StateVector::uniform(6)).unwrap();
        // qubits 0 and 1 hold w1_11 and w1_12
        let a = 0usize;
        let b = 0b11usize;
        let class_of = |i: usize| classes.iter().position(|c| c.members.contains(&i)).unwrap();
        assert_eq!(class_of(a), class_of(b));
        let diag = p.hamiltonian.diagonal().unwrap();
        assert!((diag[a] - diag[b]).abs() < 1e-12);
        // uniform state: probability proportional to class size
        for c in &classes {
            assert!((c.probability - c.degeneracy as f64 / 64.0).abs() < 1e-12);
        }
    }

    #[test]
    fn curves() {
        let pool = vec![PoolEntry { train_accuracy: 0.7, test_accuracy: 0.5 }; 5];
        let c = accuracy_vs_runs(&pool, &[1, 4], 20, 1).unwrap();
        assert!(c
            .iter()
            .all(|p| (p.train_mean - 0.7).abs() < 1e-12 && p.train_std < 1e-7 && p.test_std < 1e-7));
        assert!(accuracy_vs_runs(&[], &[1], 1, 0).is_err());

        let pool = vec![
            PoolEntry { train_accuracy: 0.2, test_accuracy: 0.0 },
            PoolEntry { train_accuracy: 0.6, test_accuracy: 1.0 },
        ];
        let c = accuracy_vs_runs(&pool, &[1, 8], 4000, 3).unwrap();
        assert!((c[0].train_mean - 0.4).abs() < 0.02);
        assert!(c[1].train_mean > 0.59);
    }

    #[test]
    fn fixed_weight_model_enumerates_one_row() {
        let mut m = binary_model();
        for l in &mut m.layers {
            for e in l.weights.iter_mut().flatten() {
                *e = Entry::Const(1.0);
            }
        }
        let s = datasets::balanced_split(1);
        let p = NnProblem::build(m, EncodingKind::Binary01, LossSpec::LinearBinary, 0.5, s.train, s.test, vec![])
            .unwrap();
        assert_eq!(p.enumerate_weightspace().unwrap().len(), 1);
    }

    #[test]
    fn model_validation() {
        let mut m = toy_model();
        m.layers[1].weights[0].pop();
        assert!(m.validate().is_err());
        let mut m = toy_model();
        m.layers[1].weights[0][0] = Entry::Var("w1_11".into());
        assert!(m.validate().is_err());
        let json = serde_json::to_string(&toy_model()).unwrap();
        let back: ModelSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, toy_model());
    }
}
