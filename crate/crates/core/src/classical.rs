//! Gradient-descent baseline for the binary majority network.
//!
//! Each majority step `Θ(Σ_j w_j z_j − n/2)` is relaxed to the sigmoid
//! `σ(k(Σ_j w_j z_j − n/2))`, weights become continuous, and the loss gains
//! a penalty `Σ_w w²(w − 1)²` pulling every weight towards 0 or 1. Training
//! uses Adam with hand-written backpropagation; the final weights are rounded
//! at ½ to give a binary configuration comparable with the quantum pool.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::datasets::Sample;
use crate::error::{Error, Result};
use crate::nn::{self, Activation, Entry, ModelSpec, PoolEntry};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub steps: usize,
    pub steepness: f64,
    pub penalty: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            steps: 500,
            steepness: 10.0,
            penalty: 1.0,
        }
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Sigmoid relaxation of a majority-step network.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedModel {
    model: ModelSpec,
    names: Vec<String>,
    index: HashMap<String, usize>,
    pub steepness: f64,
    pub penalty: f64,
}

/// Layer entries resolved to parameter slots.
enum Slot {
    Param(usize),
    Fixed(f64),
}

impl RelaxedModel {
    pub fn new(model: ModelSpec, steepness: f64, penalty: f64) -> Result<Self> {
        model.validate()?;
        if model.layers.iter().any(|l| l.activation != Activation::StepMajority) {
            return Err(Error::InvalidModel("relaxation needs majority-step layers only".into()));
        }
        let names = model.variables();
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Ok(RelaxedModel {
            model,
            names,
            index,
            steepness,
            penalty,
        })
    }

    pub fn num_params(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    fn slot(&self, e: &Entry) -> Slot {
        match e {
            Entry::Var(n) => Slot::Param(self.index[n]),
            Entry::Const(c) => Slot::Fixed(*c),
        }
    }

    fn value(&self, e: &Entry, w: &[f64]) -> f64 {
        match self.slot(e) {
            Slot::Param(i) => w[i],
            Slot::Fixed(c) => c,
        }
    }

    /// Activations of every layer, input first.
    fn forward(&self, w: &[f64], x: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = vec![x.to_vec()];
        for layer in &self.model.layers {
            let z = acts.last().expect("non-empty");
            let half = layer.fan_in() as f64 / 2.0;
            let out = layer
                .weights
                .iter()
                .zip(&layer.biases)
                .map(|(row, b)| {
                    let pre: f64 = self.value(b, w)
                        + row.iter().zip(z).map(|(e, zi)| self.value(e, w) * zi).sum::<f64>();
                    sigmoid(self.steepness * (pre - half))
                })
                .collect();
            acts.push(out);
        }
        acts
    }

    /// Relaxed output `Y(x)`.
    pub fn output(&self, w: &[f64], x: &[f64]) -> f64 {
        self.forward(w, x).last().expect("non-empty")[0]
    }

    fn penalty_term(&self, w: &[f64]) -> f64 {
        self.penalty * w.iter().map(|v| v * v * (v - 1.0) * (v - 1.0)).sum::<f64>()
    }

    /// `Σ_a (−1)^{y_a} Y(x_a) + penalty · Σ w²(w − 1)²`.
    pub fn loss(&self, data: &[Sample], w: &[f64]) -> f64 {
        let data_term: f64 = data
            .iter()
            .map(|s| label_sign(s) * self.output(w, &s.features))
            .sum();
        data_term + self.penalty_term(w)
    }

    /// Analytic gradient of [`loss`](Self::loss).
    pub fn gradient(&self, data: &[Sample], w: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = w
            .iter()
            .map(|&v| self.penalty * 2.0 * v * (v - 1.0) * (2.0 * v - 1.0))
            .collect();
        for s in data {
            let acts = self.forward(w, &s.features);
            // dL/d(output of the current layer)
            let mut delta = vec![label_sign(s)];
            for (k, layer) in self.model.layers.iter().enumerate().rev() {
                let z = &acts[k];
                let a = &acts[k + 1];
                let mut next = vec![0.0; z.len()];
                for (i, (row, b)) in layer.weights.iter().zip(&layer.biases).enumerate() {
                    let d_pre = delta[i] * self.steepness * a[i] * (1.0 - a[i]);
                    if let Slot::Param(p) = self.slot(b) {
                        g[p] += d_pre;
                    }
                    for (j, e) in row.iter().enumerate() {
                        if let Slot::Param(p) = self.slot(e) {
                            g[p] += d_pre * z[j];
                        }
                        next[j] += d_pre * self.value(e, w);
                    }
                }
                delta = next;
            }
        }
        g
    }

    /// Named weights rounded at ½.
    pub fn binarize(&self, w: &[f64]) -> HashMap<String, f64> {
        self.names
            .iter()
            .zip(w)
            .map(|(n, &v)| (n.clone(), if v >= 0.5 { 1.0 } else { 0.0 }))
            .collect()
    }
}

fn label_sign(s: &Sample) -> f64 {
    if s.label == 1 {
        -1.0
    } else {
        1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    pub fn new(num_params: usize, cfg: &TrainConfig) -> Self {
        AdamState {
            m: vec![0.0; num_params],
            v: vec![0.0; num_params],
            t: 0,
            learning_rate: cfg.learning_rate,
            beta1: cfg.beta1,
            beta2: cfg.beta2,
            epsilon: cfg.epsilon,
        }
    }

    /// One bias-corrected Adam update of `w` in place.
    pub fn step(&mut self, w: &mut [f64], grads: &[f64]) -> Result<()> {
        if let Some(i) = grads.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFinite(format!(
                "gradient component {i} at Adam step {}",
                self.t + 1
            )));
        }
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t as i32);
        let c2 = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..w.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grads[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grads[i] * grads[i];
            let m_hat = self.m[i] / c1;
            let v_hat = self.v[i] / c2;
            w[i] -= self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
        }
        Ok(())
    }
}

/// Result of one training run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub seed: u64,
    /// Continuous weights after the last step.
    pub raw: Vec<f64>,
    /// Rounded weights in parameter order.
    pub binary: Vec<f64>,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
}

impl RunResult {
    pub fn pool_entry(&self) -> PoolEntry {
        PoolEntry {
            train_accuracy: self.train_accuracy,
            test_accuracy: self.test_accuracy,
        }
    }

    /// Fraction of raw weights within `tol` of 0 or 1.
    pub fn binarized_fraction(&self, tol: f64) -> f64 {
        let near = self
            .raw
            .iter()
            .filter(|&&v| v.abs() < tol || (v - 1.0).abs() < tol)
            .count();
        near as f64 / self.raw.len().max(1) as f64
    }
}

/// Trains from weights drawn uniformly in `[0, 1)` (parameter order) with the
/// generator seeded by `seed`.
pub fn train_run(
    relaxed: &RelaxedModel,
    train: &[Sample],
    test: &[Sample],
    cfg: &TrainConfig,
    seed: u64,
) -> Result<RunResult> {
    let mut r = rng::seeded(seed);
    let mut w: Vec<f64> = (0..relaxed.num_params()).map(|_| rng::unit_f64(&mut r)).collect();
    let mut adam = AdamState::new(w.len(), cfg);
    for _ in 0..cfg.steps {
        let g = relaxed.gradient(train, &w);
        adam.step(&mut w, &g)?;
    }
    let weights = relaxed.binarize(&w);
    let binary = relaxed.names().iter().map(|n| weights[n]).collect();
    Ok(RunResult {
        seed,
        raw: w,
        binary,
        train_accuracy: nn::accuracy(relaxed.model(), &weights, train, 0.5)?,
        test_accuracy: nn::accuracy(relaxed.model(), &weights, test, 0.5)?,
    })
}

/// `runs` independent trainings with seeds `base_seed, base_seed + 1, …`.
pub fn train_pool(
    relaxed: &RelaxedModel,
    train: &[Sample],
    test: &[Sample],
    cfg: &TrainConfig,
    base_seed: u64,
    runs: usize,
) -> Result<Vec<RunResult>> {
    (0..runs as u64)
        .map(|i| train_run(relaxed, train, test, cfg, base_seed.wrapping_add(i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::balanced_split;
    use crate::nn::binary_model;

    fn relaxed(k: f64) -> RelaxedModel {
        RelaxedModel::new(binary_model(), k, 1.0).unwrap()
    }

    #[test]
    fn penalty_values() {
        let m = relaxed(10.0);
        let zeros = vec![0.0; 10];
        assert_eq!(m.penalty_term(&zeros), 0.0);
        let halves = vec![0.5; 10];
        assert!((m.penalty_term(&halves) - 10.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn penalty_gradient_only_without_data() {
        let m = relaxed(10.0);
        let w = vec![0.0, 0.5, 1.0, 0.2, 0.9, 0.3, 0.0, 0.5, 1.0, 0.7];
        let g = m.gradient(&[], &w);
        for (gi, &v) in g.iter().zip(&w) {
            assert!((gi - 2.0 * v * (v - 1.0) * (2.0 * v - 1.0)).abs() < 1e-15);
        }
        assert_eq!(g[0], 0.0);
        assert_eq!(g[1], 0.0);
        assert_eq!(g[2], 0.0);
    }

    #[test]
    fn large_steepness_recovers_binary_loss() {
        // w1 rows sum to 1 so the hidden pre-activations never reach the
        // threshold of 2; the output unit sees 0 or w2·h, never exactly 1.
        let s = balanced_split(4);
        let w = vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0];
        let named: HashMap<String, f64> = relaxed(1.0).names().iter().cloned().zip(w.iter().copied()).collect();
        let exact = nn::numeric_loss(&binary_model(), &named, &s.train, nn::LossSpec::LinearBinary).unwrap();
        let e10 = (relaxed(10.0).loss(&s.train, &w) - exact).abs();
        let e100 = (relaxed(100.0).loss(&s.train, &w) - exact).abs();
        assert!(e100 < e10);
        assert!(e100 < 1e-3);
    }

    #[test]
    fn threshold_ties_give_one_half() {
        let m = relaxed(50.0);
        // hidden unit 1 sums to exactly 2, hidden unit 2 to 0; output sums w2_1·½ = ½ < 1
        let w = vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0];
        let acts = m.forward(&w, &[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(acts[1][0], 0.5);
    }

    #[test]
    fn adam_zero_gradient_is_a_fixed_point() {
        let cfg = TrainConfig::default();
        let mut st = AdamState::new(3, &cfg);
        let mut w = vec![0.1, 0.2, 0.3];
        for _ in 0..100 {
            st.step(&mut w, &[0.0; 3]).unwrap();
        }
        assert_eq!(w, vec![0.1, 0.2, 0.3]);
        assert!(st.step(&mut w, &[f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn adam_minimizes_quadratic() {
        let cfg = TrainConfig {
            learning_rate: 0.01,
            ..TrainConfig::default()
        };
        let mut st = AdamState::new(1, &cfg);
        let mut w = vec![0.0];
        for _ in 0..20_000 {
            let g = 2.0 * (w[0] - 3.0);
            st.step(&mut w, &[g]).unwrap();
        }
        assert!((w[0] - 3.0).abs() < 1e-4, "{}", w[0]);
    }

    #[test]
    fn runs_are_reproducible() {
        let s = balanced_split(2);
        let m = relaxed(10.0);
        let cfg = TrainConfig {
            steps: 50,
            ..TrainConfig::default()
        };
        let a = train_run(&m, &s.train, &s.test, &cfg, 9).unwrap();
        let b = train_run(&m, &s.train, &s.test, &cfg, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.binary.iter().all(|&v| v == 0.0 || v == 1.0));
    }
}
