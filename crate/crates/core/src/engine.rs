//! State-vector evolution.
//!
//! An anneal follows `H_A(t) = (1 − s(t)) H₀ + s(t) H`. Time is cut into
//! `n_steps` steps of length `δt = t_final / n_steps`, and step `k` uses the
//! schedule value at its left endpoint `t_k = k δt`. Two propagators are
//! available:
//!
//! - [`Method::Trotter`] splits every step (optionally into equal substeps)
//!   as `e^{−i s H δt} e^{−i (1−s) H₀ δt}`, applying the `H₀` factor first.
//!   Inside each factor the Z-only terms (all commuting) are applied exactly
//!   through a precomputed diagonal, the X-only terms exactly through
//!   single-qubit rotations or a Walsh–Hadamard change of basis, and any
//!   remaining term through `e^{−iθP} = cos θ − i sin θ P`.
//! - [`Method::Exact`] diagonalizes the dense `H_A(t_k)` each step and
//!   applies its exponential, so the only error left is the piecewise-constant
//!   schedule.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::encoding::{report_bitstring, EncodingTable};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pauli::{PauliAxis, PauliMasks, PauliPolynomial, PauliString};
use crate::rng;
use crate::state::StateVector;

/// Largest register evolved with dense exponentials.
pub const DENSE_EVOLUTION_CAP: usize = 10;
/// Largest register for instantaneous spectra.
pub const SPECTRUM_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Hamiltonian {
    Pauli(PauliPolynomial),
    Dense(DMatrix<Complex64>),
}

impl Hamiltonian {
    pub fn num_qubits(&self) -> usize {
        match self {
            Hamiltonian::Pauli(p) => p.num_qubits(),
            Hamiltonian::Dense(m) => m.nrows().trailing_zeros() as usize,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits()
    }

    fn validate(&self, what: &str) -> Result<()> {
        match self {
            Hamiltonian::Pauli(p) if !p.is_hermitian() => {
                Err(Error::Invalid(format!("{what} has complex coefficients")))
            }
            Hamiltonian::Dense(m) if !m.is_square() || !m.nrows().is_power_of_two() => Err(
                Error::InvalidMatrix(format!("{what} must be square with power-of-two size")),
            ),
            _ => Ok(()),
        }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        match self {
            Hamiltonian::Pauli(p) => p.to_matrix(),
            Hamiltonian::Dense(m) => Ok(m.clone()),
        }
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        match self {
            Hamiltonian::Pauli(p) => p.expectation(state),
            Hamiltonian::Dense(m) => {
                if m.nrows() != state.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: m.nrows(),
                        got: state.dim(),
                    });
                }
                let v = nalgebra::DVector::from_column_slice(state.amplitudes());
                Ok(v.dotc(&(m * &v)).re)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// `s(t) = t / t_final`.
    Linear { t_final: f64 },
}

impl Schedule {
    pub fn t_final(&self) -> f64 {
        match *self {
            Schedule::Linear { t_final } => t_final,
        }
    }

    pub fn s(&self, t: f64) -> f64 {
        match *self {
            Schedule::Linear { t_final } => (t / t_final).clamp(0.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Trotter,
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealSpec {
    pub h0: Hamiltonian,
    pub h: Hamiltonian,
    pub schedule: Schedule,
    pub n_steps: usize,
    pub substeps_per_step: usize,
    /// Record a snapshot every this many steps (0 disables snapshots apart
    /// from the initial and final states).
    pub snapshot_stride: usize,
    pub method: Method,
}

impl AnnealSpec {
    pub fn new(h0: Hamiltonian, h: Hamiltonian, t_final: f64, n_steps: usize) -> Self {
        AnnealSpec {
            h0,
            h,
            schedule: Schedule::Linear { t_final },
            n_steps,
            substeps_per_step: 1,
            snapshot_stride: 0,
            method: Method::default(),
        }
    }

    pub fn with_substeps(mut self, substeps: usize) -> Self {
        self.substeps_per_step = substeps;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_snapshot_stride(mut self, stride: usize) -> Self {
        self.snapshot_stride = stride;
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.h.num_qubits()
    }

    pub fn dt(&self) -> f64 {
        self.schedule.t_final() / self.n_steps as f64
    }

    pub fn validate(&self) -> Result<()> {
        self.h0.validate("H0")?;
        self.h.validate("H")?;
        if self.h0.num_qubits() != self.h.num_qubits() {
            return Err(Error::RegisterMismatch {
                left: self.h0.num_qubits(),
                right: self.h.num_qubits(),
            });
        }
        if self.n_steps == 0 || self.substeps_per_step == 0 {
            return Err(Error::Invalid("n_steps and substeps_per_step must be ≥ 1".into()));
        }
        let tf = self.schedule.t_final();
        if !(tf > 0.0 && tf.is_finite()) {
            return Err(Error::Invalid(format!("t_final must be positive, got {tf}")));
        }
        match self.method {
            Method::Trotter => match (&self.h0, &self.h) {
                (Hamiltonian::Pauli(_), Hamiltonian::Pauli(_)) => Ok(()),
                _ => Err(Error::Invalid(
                    "Trotter evolution needs both Hamiltonians as Pauli polynomials".into(),
                )),
            },
            Method::Exact if self.num_qubits() > DENSE_EVOLUTION_CAP => Err(Error::RegisterTooLarge {
                what: "dense evolution",
                requested: self.num_qubits(),
                cap: DENSE_EVOLUTION_CAP,
            }),
            Method::Exact => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub s: f64,
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub final_state: StateVector,
    pub snapshots: Vec<Snapshot>,
}

/// `½ Σ_ℓ (1 − X_ℓ)`, ground state the uniform superposition with energy 0.
pub fn transverse_h0(num_qubits: usize) -> PauliPolynomial {
    let strings = (0..num_qubits).flat_map(|q| {
        [
            PauliString::identity(Complex64::new(0.5, 0.0)),
            PauliString::single(-0.5, q, PauliAxis::X),
        ]
    });
    PauliPolynomial::from_strings(num_qubits, strings).expect("qubits in range")
}

/// `2^{−N/2} Σ_b |b⟩`.
pub fn initial_state_uniform(num_qubits: usize) -> StateVector {
    StateVector::uniform(num_qubits)
}

/// The `n = 0` momentum mode, basis index `2^{N−1}`.
pub fn initial_state_momentum(num_qubits: usize) -> StateVector {
    let index = if num_qubits == 0 { 0 } else { 1 << (num_qubits - 1) };
    StateVector::basis(num_qubits, index).expect("index in range")
}

/// Pauli polynomial pre-sorted into exactly solvable groups.
#[derive(Debug, Clone)]
pub(crate) struct SplitOperator {
    num_qubits: usize,
    /// Energies of the Z-only part (identity included) per basis state.
    diagonal: Option<Vec<f64>>,
    /// Single-qubit X terms, used when every X-only term has weight one.
    x_single: Vec<(usize, f64)>,
    /// Energies of the X-only part in the Hadamard basis, used otherwise.
    x_hadamard: Option<Vec<f64>>,
    rest: Vec<(PauliMasks, f64)>,
}

fn parity_diagonal(num_qubits: usize, terms: &[(usize, f64)]) -> Vec<f64> {
    let dim = 1usize << num_qubits;
    let mut d = vec![0.0; dim];
    for &(mask, c) in terms {
        for (b, e) in d.iter_mut().enumerate() {
            if (b & mask).count_ones() % 2 == 0 {
                *e += c;
            } else {
                *e -= c;
            }
        }
    }
    d
}

impl SplitOperator {
    pub fn new(p: &PauliPolynomial) -> Result<Self> {
        if !p.is_hermitian() {
            return Err(Error::Invalid("split operator needs real coefficients".into()));
        }
        let n = p.num_qubits();
        let mut z_terms = Vec::new();
        let mut x_terms = Vec::new();
        let mut rest = Vec::new();
        for s in p.terms() {
            let f = s.factors();
            let c = s.coefficient.re;
            let masks = PauliMasks::of(f);
            if f.iter().all(|&(_, a)| a == PauliAxis::Z) {
                z_terms.push((masks.z, c));
            } else if f.iter().all(|&(_, a)| a == PauliAxis::X) {
                x_terms.push((masks.x, c));
            } else {
                rest.push((masks, c));
            }
        }
        let diagonal = (!z_terms.is_empty()).then(|| parity_diagonal(n, &z_terms));
        let (x_single, x_hadamard) = if x_terms.iter().all(|(m, _)| m.count_ones() == 1) {
            let single = x_terms
                .iter()
                .map(|&(m, c)| (m.trailing_zeros() as usize, c))
                .collect();
            (single, None)
        } else {
            (Vec::new(), Some(parity_diagonal(n, &x_terms)))
        };
        Ok(SplitOperator {
            num_qubits: n,
            diagonal,
            x_single,
            x_hadamard,
            rest,
        })
    }

    /// `ψ ← e^{−iθ H_Z} ψ` for the Z-only group alone.
    pub fn apply_diagonal(&self, theta: f64, psi: &mut [Complex64]) {
        if let Some(d) = &self.diagonal {
            for (a, &e) in psi.iter_mut().zip(d) {
                *a *= Complex64::from_polar(1.0, -theta * e);
            }
        }
    }

    /// `ψ ← e^{−iθ H_rest} e^{−iθ H_X} e^{−iθ H_Z} ψ`.
    pub fn apply(&self, theta: f64, psi: &mut [Complex64]) {
        if theta == 0.0 {
            return;
        }
        self.apply_diagonal(theta, psi);
        for &(q, c) in &self.x_single {
            let (sin, cos) = (theta * c).sin_cos();
            let m = Complex64::new(0.0, -sin);
            let bit = 1usize << q;
            for b in 0..psi.len() {
                if b & bit == 0 {
                    let (a0, a1) = (psi[b], psi[b | bit]);
                    psi[b] = a0 * cos + a1 * m;
                    psi[b | bit] = a1 * cos + a0 * m;
                }
            }
        }
        if let Some(d) = &self.x_hadamard {
            walsh_hadamard(psi, self.num_qubits);
            for (a, &e) in psi.iter_mut().zip(d) {
                *a *= Complex64::from_polar(1.0, -theta * e);
            }
            walsh_hadamard(psi, self.num_qubits);
        }
        if !self.rest.is_empty() {
            let mut scratch = vec![Complex64::new(0.0, 0.0); psi.len()];
            for &(masks, c) in &self.rest {
                let (sin, cos) = (theta * c).sin_cos();
                for (b, &a) in psi.iter().enumerate() {
                    let (target, phase) = masks.act(b);
                    scratch[target] = phase * a;
                }
                for (a, p) in psi.iter_mut().zip(&scratch) {
                    *a = *a * cos - Complex64::new(0.0, sin) * p;
                }
            }
        }
    }
}

/// Normalized in-place Walsh–Hadamard transform (its own inverse).
fn walsh_hadamard(psi: &mut [Complex64], num_qubits: usize) {
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    for q in 0..num_qubits {
        let bit = 1usize << q;
        for b in 0..psi.len() {
            if b & bit == 0 {
                let (a0, a1) = (psi[b], psi[b | bit]);
                psi[b] = (a0 + a1) * norm;
                psi[b | bit] = (a0 - a1) * norm;
            }
        }
    }
}

fn check_initial(initial: &StateVector, num_qubits: usize) -> Result<()> {
    if initial.num_qubits() != num_qubits {
        return Err(Error::RegisterMismatch {
            left: num_qubits,
            right: initial.num_qubits(),
        });
    }
    initial.check_normalized()
}

fn snapshot(step: usize, t: f64, s: f64, amps: &[Complex64]) -> Snapshot {
    Snapshot {
        step,
        t,
        s,
        state: StateVector::from_amplitudes(amps.to_vec()).expect("power-of-two length"),
    }
}

/// Runs an anneal from `initial`.
pub fn evolve_adiabatic(spec: &AnnealSpec, initial: &StateVector) -> Result<Evolution> {
    spec.validate()?;
    check_initial(initial, spec.num_qubits())?;
    let dt = spec.dt();
    let mut psi = initial.amplitudes().to_vec();
    let mut snapshots = vec![snapshot(0, 0.0, 0.0, &psi)];
    let record = |k: usize, psi: &[Complex64], snaps: &mut Vec<Snapshot>| {
        let done = k == spec.n_steps;
        if done || (spec.snapshot_stride > 0 && k % spec.snapshot_stride == 0) {
            let t = k as f64 * dt;
            snaps.push(snapshot(k, t, spec.schedule.s(t), psi));
        }
    };
    match spec.method {
        Method::Trotter => {
            let (Hamiltonian::Pauli(p0), Hamiltonian::Pauli(p)) = (&spec.h0, &spec.h) else {
                unreachable!("validated")
            };
            let h0 = SplitOperator::new(p0)?;
            let h = SplitOperator::new(p)?;
            let sub = dt / spec.substeps_per_step as f64;
            for k in 0..spec.n_steps {
                let s = spec.schedule.s(k as f64 * dt);
                for _ in 0..spec.substeps_per_step {
                    h0.apply((1.0 - s) * sub, &mut psi);
                    h.apply(s * sub, &mut psi);
                }
                record(k + 1, &psi, &mut snapshots);
            }
        }
        Method::Exact => {
            let m0 = spec.h0.to_matrix()?;
            let m = spec.h.to_matrix()?;
            if m0.shape() != m.shape() {
                return Err(Error::DimensionMismatch {
                    expected: m.nrows(),
                    got: m0.nrows(),
                });
            }
            for k in 0..spec.n_steps {
                let s = spec.schedule.s(k as f64 * dt);
                let ha = &m0 * Complex64::new(1.0 - s, 0.0) + &m * Complex64::new(s, 0.0);
                let (vals, vecs) = linalg::hermitian_eigen(&ha);
                linalg::apply_exponential(&vals, &vecs, dt, &mut psi);
                record(k + 1, &psi, &mut snapshots);
            }
        }
    }
    Ok(Evolution {
        final_state: StateVector::from_amplitudes(psi)?,
        snapshots,
    })
}

/// Evolution under a fixed Hamiltonian for `round(t_total / dt)` steps.
/// Pauli input is Trotterized with `substeps` splits per step; dense input is
/// exponentiated exactly.
pub fn evolve_real_time(
    h: &Hamiltonian,
    initial: &StateVector,
    t_total: f64,
    dt: f64,
    substeps: usize,
    snapshot_stride: usize,
) -> Result<Evolution> {
    h.validate("H")?;
    check_initial(initial, h.num_qubits())?;
    if !(dt > 0.0 && t_total >= 0.0) || substeps == 0 {
        return Err(Error::Invalid("need dt > 0, t_total ≥ 0 and substeps ≥ 1".into()));
    }
    let steps = (t_total / dt).round() as usize;
    let mut psi = initial.amplitudes().to_vec();
    let mut snapshots = vec![snapshot(0, 0.0, 1.0, &psi)];
    let mut propagate: Box<dyn FnMut(&mut [Complex64])> = match h {
        Hamiltonian::Pauli(p) => {
            let op = SplitOperator::new(p)?;
            let sub = dt / substeps as f64;
            Box::new(move |psi| {
                for _ in 0..substeps {
                    op.apply(sub, psi)
                }
            })
        }
        Hamiltonian::Dense(m) => {
            if h.num_qubits() > SPECTRUM_CAP {
                return Err(Error::RegisterTooLarge {
                    what: "dense evolution",
                    requested: h.num_qubits(),
                    cap: SPECTRUM_CAP,
                });
            }
            let (vals, vecs) = linalg::hermitian_eigen(m);
            Box::new(move |psi| linalg::apply_exponential(&vals, &vecs, dt, psi))
        }
    };
    for k in 1..=steps {
        propagate(&mut psi);
        if k == steps || (snapshot_stride > 0 && k % snapshot_stride == 0) {
            snapshots.push(snapshot(k, k as f64 * dt, 1.0, &psi));
        }
    }
    Ok(Evolution {
        final_state: StateVector::from_amplitudes(psi)?,
        snapshots,
    })
}

/// Lowest `k` eigenvalues of `H_A(s)` for each `s` in `s_grid`.
pub fn instantaneous_spectrum(
    h0: &Hamiltonian,
    h: &Hamiltonian,
    s_grid: &[f64],
    k: usize,
) -> Result<Vec<(f64, Vec<f64>)>> {
    if h.num_qubits() > SPECTRUM_CAP {
        return Err(Error::RegisterTooLarge {
            what: "instantaneous spectrum",
            requested: h.num_qubits(),
            cap: SPECTRUM_CAP,
        });
    }
    let m0 = h0.to_matrix()?;
    let m = h.to_matrix()?;
    if m0.shape() != m.shape() {
        return Err(Error::RegisterMismatch {
            left: h0.num_qubits(),
            right: h.num_qubits(),
        });
    }
    Ok(s_grid
        .iter()
        .map(|&s| {
            let ha = &m0 * Complex64::new(1.0 - s, 0.0) + &m * Complex64::new(s, 0.0);
            let mut e = linalg::hermitian_eigenvalues(&ha);
            e.truncate(k);
            (s, e)
        })
        .collect())
}

/// Ground state of `H_A(s)` (dense), phase-fixed.
pub fn instantaneous_ground_state(h0: &Hamiltonian, h: &Hamiltonian, s: f64) -> Result<(f64, StateVector)> {
    let m0 = h0.to_matrix()?;
    let m = h.to_matrix()?;
    let ha = &m0 * Complex64::new(1.0 - s, 0.0) + &m * Complex64::new(s, 0.0);
    let (e, v) = crate::schrodinger::ground_state(&ha)?;
    Ok((e, StateVector::from_amplitudes(v)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramEntry {
    pub index: usize,
    /// T-eigenvalues, most significant qubit first.
    pub bitstring: String,
    pub values: Vec<f64>,
    pub probability: f64,
}

/// Probability of every basis state with its decoded variable values, in
/// basis order.
pub fn measure_histogram(state: &StateVector, table: &EncodingTable) -> Result<Vec<HistogramEntry>> {
    if table.total_qubits() != state.num_qubits() {
        return Err(Error::RegisterMismatch {
            left: table.total_qubits(),
            right: state.num_qubits(),
        });
    }
    state.check_normalized()?;
    Ok(state
        .probabilities()
        .into_iter()
        .enumerate()
        .map(|(index, probability)| HistogramEntry {
            index,
            bitstring: report_bitstring(index, state.num_qubits()),
            values: table.decode_index(index),
            probability,
        })
        .collect())
}

/// `{bitstring → probability}` view of a histogram.
pub fn histogram_map(entries: &[HistogramEntry]) -> BTreeMap<String, f64> {
    entries.iter().map(|e| (e.bitstring.clone(), e.probability)).collect()
}

/// Marginal distribution of one variable, sorted by value.
pub fn marginal(state: &StateVector, table: &EncodingTable, name: &str) -> Result<Vec<(f64, f64)>> {
    let enc = table
        .get(name)
        .ok_or_else(|| Error::UnencodedVariable(name.to_owned()))?;
    let mut acc: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for (i, p) in state.probabilities().into_iter().enumerate() {
        let v = enc.decode_index(i);
        acc.entry(v.to_bits()).or_insert((v, 0.0)).1 += p;
    }
    let mut out: Vec<(f64, f64)> = acc.into_values().collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// `shots` basis indices drawn from `|ψ|²` with a seeded generator.
pub fn sample_outcomes(state: &StateVector, shots: usize, seed: u64) -> Result<Vec<usize>> {
    state.check_normalized()?;
    let mut cdf = Vec::with_capacity(state.dim());
    let mut acc = 0.0;
    for p in state.probabilities() {
        acc += p;
        cdf.push(acc);
    }
    let mut r = rng::seeded(seed);
    let last = state.dim() - 1;
    Ok((0..shots)
        .map(|_| {
            let u = rng::unit_f64(&mut r) * acc;
            cdf.partition_point(|&c| c <= u).min(last)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::EncodingKind;

    fn random_hermitian_pauli(n: usize, seed: u64, axes: &[PauliAxis]) -> PauliPolynomial {
        let mut r = rng::seeded(seed);
        let mut strings = Vec::new();
        for _ in 0..6 {
            let factors: Vec<(usize, PauliAxis)> = (0..n)
                .map(|q| (q, axes[rng::index(&mut r, axes.len())]))
                .collect();
            strings.push(PauliString::new(Complex64::new(rng::uniform(&mut r, -1.0, 1.0), 0.0), factors));
        }
        PauliPolynomial::from_strings(n, strings).unwrap()
    }

    fn dense_exp(p: &PauliPolynomial, theta: f64, psi: &[Complex64]) -> Vec<Complex64> {
        let (v, vecs) = linalg::hermitian_eigen(&p.to_matrix().unwrap());
        let mut out = psi.to_vec();
        linalg::apply_exponential(&v, &vecs, theta, &mut out);
        out
    }

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut r = rng::seeded(seed);
        let amps = (0..1 << n)
            .map(|_| Complex64::new(rng::uniform(&mut r, -1.0, 1.0), rng::uniform(&mut r, -1.0, 1.0)))
            .collect();
        StateVector::normalized(amps).unwrap()
    }

    #[test]
    fn transverse_h0_basics() {
        let h = transverse_h0(1);
        assert_eq!(h.coefficient(&[]), Complex64::new(0.5, 0.0));
        assert_eq!(h.coefficient(&[(0, PauliAxis::X)]), Complex64::new(-0.5, 0.0));
        let h3 = Hamiltonian::Pauli(transverse_h0(3));
        let spec = instantaneous_spectrum(&h3, &h3, &[0.0], 8).unwrap();
        assert!(spec[0].1[0].abs() < 1e-12);
        assert!((spec[0].1[7] - 3.0).abs() < 1e-12);
        assert!(transverse_h0(2).expectation(&initial_state_uniform(2)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn exact_groups_match_dense() {
        for (seed, axes) in [
            (1, &[PauliAxis::I, PauliAxis::Z][..]),
            (2, &[PauliAxis::I, PauliAxis::X][..]),
            (3, &[PauliAxis::I, PauliAxis::X, PauliAxis::Z][..]),
        ] {
            let p = random_hermitian_pauli(3, seed, axes);
            let psi = random_state(3, seed + 10);
            let op = SplitOperator::new(&p).unwrap();
            let mut got = psi.amplitudes().to_vec();
            op.apply(0.7, &mut got);
            if seed < 3 {
                let want = dense_exp(&p, 0.7, psi.amplitudes());
                for (a, b) in got.iter().zip(&want) {
                    assert!((a - b).norm() < 1e-12, "seed {seed}");
                }
            }
            let n: f64 = got.iter().map(|a| a.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_x_rotations_match_dense() {
        let p = transverse_h0(3);
        let psi = random_state(3, 4);
        let mut got = psi.amplitudes().to_vec();
        SplitOperator::new(&p).unwrap().apply(0.4, &mut got);
        let want = dense_exp(&p, 0.4, psi.amplitudes());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn stationary_under_h0() {
        let h0 = Hamiltonian::Pauli(transverse_h0(3));
        let spec = AnnealSpec::new(h0.clone(), h0, 5.0, 20);
        let init = initial_state_uniform(3);
        let out = evolve_adiabatic(&spec, &init).unwrap();
        assert!((out.final_state.fidelity(&init).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let h0 = Hamiltonian::Pauli(transverse_h0(2));
        let h = Hamiltonian::Pauli(PauliPolynomial::single(2, 0, PauliAxis::Z, 1.0).unwrap());
        let spec = AnnealSpec::new(h0.clone(), h.clone(), 1.0, 4);
        let bad = StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 4]).unwrap();
        assert!(matches!(evolve_adiabatic(&spec, &bad), Err(Error::NotNormalized(_))));
        let dense = Hamiltonian::Dense(h.to_matrix().unwrap());
        let mixed = AnnealSpec::new(h0, dense, 1.0, 4);
        assert!(evolve_adiabatic(&mixed, &initial_state_uniform(2)).is_err());
        assert!(evolve_adiabatic(&mixed.with_method(Method::Exact), &initial_state_uniform(2)).is_ok());
    }

    #[test]
    fn snapshots_follow_stride() {
        let h0 = Hamiltonian::Pauli(transverse_h0(2));
        let h = Hamiltonian::Pauli(PauliPolynomial::single(2, 1, PauliAxis::Z, 1.0).unwrap());
        let spec = AnnealSpec::new(h0, h, 1.0, 10).with_snapshot_stride(3);
        let out = evolve_adiabatic(&spec, &initial_state_uniform(2)).unwrap();
        let steps: Vec<usize> = out.snapshots.iter().map(|s| s.step).collect();
        assert_eq!(steps, vec![0, 3, 6, 9, 10]);
        assert_eq!(out.snapshots.last().unwrap().state, out.final_state);
    }

    #[test]
    fn histograms() {
        let t = EncodingTable::uniform(&["a", "b"], EncodingKind::Binary01).unwrap();
        let h = measure_histogram(&initial_state_uniform(2), &t).unwrap();
        assert!(h.iter().all(|e| (e.probability - 0.25).abs() < 1e-15));
        let b = StateVector::basis(2, 2).unwrap();
        let h = measure_histogram(&b, &t).unwrap();
        assert_eq!(h[2].probability, 1.0);
        assert_eq!(h[2].bitstring, "01");
        assert_eq!(h[2].values, vec![1.0, 0.0]);
    }

    #[test]
    fn sampling_is_reproducible() {
        let s = random_state(3, 9);
        let a = sample_outcomes(&s, 100, 5).unwrap();
        assert_eq!(a, sample_outcomes(&s, 100, 5).unwrap());
        assert_ne!(a, sample_outcomes(&s, 100, 6).unwrap());
    }

    #[test]
    fn real_time_eigenstate_is_stationary() {
        let p = random_hermitian_pauli(3, 21, &[PauliAxis::I, PauliAxis::X, PauliAxis::Z]);
        let h = Hamiltonian::Dense(p.to_matrix().unwrap());
        let (_, gs) = crate::schrodinger::ground_state(&p.to_matrix().unwrap()).unwrap();
        let init = StateVector::from_amplitudes(gs).unwrap();
        let out = evolve_real_time(&h, &init, 3.0, 0.01, 1, 50).unwrap();
        for snap in &out.snapshots {
            for (a, b) in snap.state.probabilities().iter().zip(init.probabilities()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
