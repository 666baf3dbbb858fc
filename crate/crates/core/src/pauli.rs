//! Pauli-string algebra.
//!
//! A [`PauliPolynomial`] is a complex-weighted sum of tensor products of
//! single-qubit Pauli operators on a fixed register. Terms are kept in a
//! canonical map keyed by their factor pattern, ordered lexicographically by
//! `(qubit, axis)`, so serialization and the order in which evolution applies
//! terms are deterministic.
//!
//! Basis convention: qubit `q` is bit `q` of a computational-basis index
//! (qubit 0 least significant) and `Z|0⟩ = +|0⟩`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Coefficients with magnitude below this are dropped on canonicalization.
pub const DROP_TOLERANCE: f64 = 1e-12;

/// Largest register rendered as a dense matrix.
pub const DENSE_QUBIT_CAP: usize = 12;

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    /// Single-qubit product `self · other` as `(k, axis)` meaning `i^k · axis`.
    pub fn mul(self, other: PauliAxis) -> (u8, PauliAxis) {
        use PauliAxis::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    /// The 2×2 matrix, rows indexed by output bit.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            PauliAxis::I => [[one, z], [z, one]],
            PauliAxis::X => [[z, one], [one, z]],
            PauliAxis::Y => [[z, -i], [i, z]],
            PauliAxis::Z => [[one, z], [z, -one]],
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            PauliAxis::I => "I",
            PauliAxis::X => "X",
            PauliAxis::Y => "Y",
            PauliAxis::Z => "Z",
        }
    }

    fn from_bits(x: bool, z: bool) -> PauliAxis {
        match (x, z) {
            (false, false) => PauliAxis::I,
            (true, false) => PauliAxis::X,
            (true, true) => PauliAxis::Y,
            (false, true) => PauliAxis::Z,
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Sorted non-identity factors; the empty pattern is the identity.
pub type Pattern = Vec<(usize, PauliAxis)>;

/// A single weighted Pauli string.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coefficient: Complex64,
    factors: Pattern,
}

impl PauliString {
    /// Builds a string from arbitrary factors. Identity factors are dropped and
    /// repeated qubits are multiplied together in the order given.
    pub fn new(coefficient: Complex64, factors: impl IntoIterator<Item = (usize, PauliAxis)>) -> Self {
        let mut acc = PauliString {
            coefficient,
            factors: Vec::new(),
        };
        for (q, axis) in factors {
            if axis == PauliAxis::I {
                continue;
            }
            acc = acc.multiply(&PauliString {
                coefficient: Complex64::new(1.0, 0.0),
                factors: vec![(q, axis)],
            });
        }
        acc
    }

    pub fn identity(coefficient: Complex64) -> Self {
        PauliString {
            coefficient,
            factors: Vec::new(),
        }
    }

    pub fn single(coefficient: f64, qubit: usize, axis: PauliAxis) -> Self {
        PauliString::new(Complex64::new(coefficient, 0.0), [(qubit, axis)])
    }

    pub fn factors(&self) -> &[(usize, PauliAxis)] {
        &self.factors
    }

    /// Axis acting on `qubit` (identity when absent).
    pub fn axis(&self, qubit: usize) -> PauliAxis {
        self.factors
            .binary_search_by_key(&qubit, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(PauliAxis::I)
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.last().map(|&(q, _)| q)
    }

    /// Group product with the accumulated phase folded into the coefficient.
    pub fn multiply(&self, other: &PauliString) -> PauliString {
        let (phase, factors) = multiply_patterns(&self.factors, &other.factors);
        PauliString {
            coefficient: self.coefficient * other.coefficient * I_POWERS[phase as usize],
            factors,
        }
    }

    pub fn to_polynomial(&self, num_qubits: usize) -> Result<PauliPolynomial> {
        PauliPolynomial::from_strings(num_qubits, [self.clone()])
    }
}

fn multiply_patterns(a: &[(usize, PauliAxis)], b: &[(usize, PauliAxis)]) -> (u8, Pattern) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut phase = 0u8;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (qa, pa) = a[i];
        let (qb, pb) = b[j];
        if qa < qb {
            out.push((qa, pa));
            i += 1;
        } else if qb < qa {
            out.push((qb, pb));
            j += 1;
        } else {
            let (k, p) = pa.mul(pb);
            phase = (phase + k) % 4;
            if p != PauliAxis::I {
                out.push((qa, p));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    (phase, out)
}

/// Bit masks describing how a Pauli string acts on basis states:
/// `P|b⟩ = i^y · (-1)^{popcount(b & z)} |b ⊕ x⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PauliMasks {
    pub x: usize,
    pub z: usize,
    pub y_count: u32,
}

impl PauliMasks {
    pub fn of(pattern: &[(usize, PauliAxis)]) -> Self {
        let mut m = PauliMasks {
            x: 0,
            z: 0,
            y_count: 0,
        };
        for &(q, axis) in pattern {
            match axis {
                PauliAxis::I => {}
                PauliAxis::X => m.x |= 1 << q,
                PauliAxis::Z => m.z |= 1 << q,
                PauliAxis::Y => {
                    m.x |= 1 << q;
                    m.z |= 1 << q;
                    m.y_count += 1;
                }
            }
        }
        m
    }

    /// Target index and phase of `P|b⟩`.
    #[inline]
    pub fn act(&self, b: usize) -> (usize, Complex64) {
        let sign = if (b & self.z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        (b ^ self.x, I_POWERS[(self.y_count % 4) as usize] * sign)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// `T = ½(1 + Z)`, eigenvalue 1 on `|0⟩`.
    Plus,
    /// `T̄ = ½(1 − Z)`, eigenvalue 1 on `|1⟩`.
    Minus,
}

/// Canonical weighted sum of Pauli strings on `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliPolynomial {
    num_qubits: usize,
    terms: BTreeMap<Pattern, Complex64>,
}

impl PauliPolynomial {
    pub fn zero(num_qubits: usize) -> Self {
        PauliPolynomial {
            num_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(num_qubits: usize, coefficient: f64) -> Self {
        let mut p = Self::zero(num_qubits);
        p.accumulate(Vec::new(), Complex64::new(coefficient, 0.0));
        p
    }

    pub fn from_strings(num_qubits: usize, strings: impl IntoIterator<Item = PauliString>) -> Result<Self> {
        let mut p = Self::zero(num_qubits);
        for s in strings {
            if let Some(q) = s.max_qubit() {
                if q >= num_qubits {
                    return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
                }
            }
            p.accumulate(s.factors, s.coefficient);
        }
        Ok(p)
    }

    /// `coefficient · axis_qubit`.
    pub fn single(num_qubits: usize, qubit: usize, axis: PauliAxis, coefficient: f64) -> Result<Self> {
        Self::from_strings(num_qubits, [PauliString::single(coefficient, qubit, axis)])
    }

    /// The binary projector `½(1 ± Z_qubit)`.
    pub fn binary_projector(num_qubits: usize, qubit: usize, polarity: Polarity) -> Result<Self> {
        let sign = match polarity {
            Polarity::Plus => 0.5,
            Polarity::Minus => -0.5,
        };
        Self::from_strings(
            num_qubits,
            [
                PauliString::identity(Complex64::new(0.5, 0.0)),
                PauliString::single(sign, qubit, PauliAxis::Z),
            ],
        )
    }

    fn accumulate(&mut self, pattern: Pattern, c: Complex64) {
        let entry = self.terms.entry(pattern).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
    }

    fn canonicalize(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() >= DROP_TOLERANCE);
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest number of non-identity factors in any term.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = PauliString> + '_ {
        self.terms.iter().map(|(p, &c)| PauliString {
            coefficient: c,
            factors: p.clone(),
        })
    }

    /// Coefficient of the given factor pattern (zero when absent).
    pub fn coefficient(&self, factors: &[(usize, PauliAxis)]) -> Complex64 {
        let key = PauliString::new(Complex64::new(1.0, 0.0), factors.iter().copied());
        self.terms
            .get(&key.factors)
            .map(|c| c * key.coefficient.conj())
            .unwrap_or_default()
    }

    /// Every Pauli string is Hermitian, so the sum is Hermitian iff all
    /// coefficients are real.
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < DROP_TOLERANCE)
    }

    /// True when no term contains X or Y.
    pub fn is_diagonal(&self) -> bool {
        self.terms
            .keys()
            .all(|p| p.iter().all(|&(_, a)| a == PauliAxis::Z))
    }

    fn check_register(&self, other: &Self) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::RegisterMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_register(other)?;
        let mut out = self.clone();
        for (p, &c) in &other.terms {
            out.accumulate(p.clone(), c);
        }
        Ok(out.canonicalize())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.scale_complex(Complex64::new(factor, 0.0))
    }

    pub fn scale_complex(&self, factor: Complex64) -> Self {
        let terms = self.terms.iter().map(|(p, &c)| (p.clone(), c * factor)).collect();
        PauliPolynomial {
            num_qubits: self.num_qubits,
            terms,
        }
        .canonicalize()
    }

    pub fn add_constant(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.accumulate(Vec::new(), Complex64::new(c, 0.0));
        out.canonicalize()
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_register(other)?;
        let mut out = Self::zero(self.num_qubits);
        for (pa, &ca) in &self.terms {
            for (pb, &cb) in &other.terms {
                let (phase, pattern) = multiply_patterns(pa, pb);
                out.accumulate(pattern, ca * cb * I_POWERS[phase as usize]);
            }
        }
        Ok(out.canonicalize())
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = Self::identity(self.num_qubits, 1.0);
        for _ in 0..exponent {
            acc = acc.multiply(self).expect("same register");
        }
        acc
    }

    /// Same terms on a larger register.
    pub fn embed(&self, num_qubits: usize) -> Result<Self> {
        if num_qubits < self.num_qubits {
            return Err(Error::RegisterMismatch {
                left: self.num_qubits,
                right: num_qubits,
            });
        }
        Ok(PauliPolynomial {
            num_qubits,
            terms: self.terms.clone(),
        })
    }

    pub(crate) fn masked_terms(&self) -> impl Iterator<Item = (PauliMasks, Complex64)> + '_ {
        self.terms.iter().map(|(p, &c)| (PauliMasks::of(p), c))
    }

    fn dense_check(&self, what: &'static str) -> Result<()> {
        if self.num_qubits > DENSE_QUBIT_CAP {
            return Err(Error::RegisterTooLarge {
                what,
                requested: self.num_qubits,
                cap: DENSE_QUBIT_CAP,
            });
        }
        Ok(())
    }

    /// Dense `2^N × 2^N` matrix with qubit 0 as the least significant index.
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        self.dense_check("dense rendering")?;
        let dim = 1usize << self.num_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for (masks, c) in self.masked_terms() {
            for b in 0..dim {
                let (target, phase) = masks.act(b);
                m[(target, b)] += c * phase;
            }
        }
        Ok(m)
    }

    /// Diagonal entries, for Z-only polynomials without forming the matrix.
    pub fn diagonal(&self) -> Result<Vec<f64>> {
        if !self.is_diagonal() || !self.is_hermitian() {
            return Err(Error::Invalid(
                "diagonal() needs a real, Z-only polynomial".into(),
            ));
        }
        let dim = 1usize << self.num_qubits;
        let mut diag = vec![0.0; dim];
        for (masks, c) in self.masked_terms() {
            for (b, d) in diag.iter_mut().enumerate() {
                if (b & masks.z).count_ones() % 2 == 0 {
                    *d += c.re;
                } else {
                    *d -= c.re;
                }
            }
        }
        Ok(diag)
    }

    /// Pauli decomposition of a Hermitian matrix: each coefficient is
    /// `tr(P·H)/2^N` (real for Hermitian input).
    pub fn decompose_matrix(h: &DMatrix<Complex64>, num_qubits: usize) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::InvalidMatrix(format!(
                "matrix is {}×{}, not square",
                h.nrows(),
                h.ncols()
            )));
        }
        let dim = h.nrows();
        if !dim.is_power_of_two() || dim != 1usize << num_qubits {
            return Err(Error::InvalidMatrix(format!(
                "dimension {dim} does not match a {num_qubits}-qubit register"
            )));
        }
        if num_qubits > DENSE_QUBIT_CAP {
            return Err(Error::RegisterTooLarge {
                what: "Pauli decomposition",
                requested: num_qubits,
                cap: DENSE_QUBIT_CAP,
            });
        }
        let scale = h.iter().map(|c| c.norm()).fold(1.0, f64::max);
        for r in 0..dim {
            for c in r..dim {
                if (h[(r, c)] - h[(c, r)].conj()).norm() > 1e-9 * scale {
                    return Err(Error::InvalidMatrix(format!(
                        "not Hermitian at ({r}, {c})"
                    )));
                }
            }
        }
        let mut out = Self::zero(num_qubits);
        for x in 0..dim {
            for z in 0..dim {
                let pattern: Pattern = (0..num_qubits)
                    .filter_map(|q| {
                        let axis = PauliAxis::from_bits(x >> q & 1 == 1, z >> q & 1 == 1);
                        (axis != PauliAxis::I).then_some((q, axis))
                    })
                    .collect();
                let masks = PauliMasks::of(&pattern);
                // tr(P H) = Σ_b ⟨b|P H|b⟩ = Σ_b phase(b ⊕ x) · H[b ⊕ x, b]
                let mut trace = Complex64::new(0.0, 0.0);
                for b in 0..dim {
                    let src = b ^ masks.x;
                    let (_, phase) = masks.act(src);
                    trace += phase * h[(src, b)];
                }
                let c = trace.re / dim as f64;
                if c.abs() >= DROP_TOLERANCE {
                    out.terms.insert(pattern, Complex64::new(c, 0.0));
                }
            }
        }
        Ok(out)
    }

    /// `P|ψ⟩` on raw amplitudes.
    pub fn apply(&self, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = 1usize << self.num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (masks, c) in self.masked_terms() {
            for (b, &a) in amplitudes.iter().enumerate() {
                let (target, phase) = masks.act(b);
                out[target] += c * phase * a;
            }
        }
        Ok(out)
    }

    /// `⟨s|P|s⟩` as a complex number.
    pub fn expectation_complex(&self, state: &StateVector) -> Result<Complex64> {
        let amps = state.amplitudes();
        let applied = self.apply(amps)?;
        Ok(amps.iter().zip(&applied).map(|(a, b)| a.conj() * b).sum())
    }

    /// `⟨s|P|s⟩`; fails if the imaginary residual exceeds 1e-9.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        let e = self.expectation_complex(state)?;
        if e.im.abs() > 1e-9 {
            return Err(Error::Invalid(format!(
                "expectation has imaginary part {:e}; operator is not Hermitian",
                e.im
            )));
        }
        Ok(e.re)
    }
}

impl fmt::Display for PauliPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, s) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let c = s.coefficient;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            if s.factors.is_empty() {
                f.write_str("·I")?;
            }
            for (q, a) in s.factors {
                write!(f, "·{a}{q}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    ops: Vec<(usize, PauliAxis)>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    num_qubits: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for PauliPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialRepr {
            num_qubits: self.num_qubits,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| TermRepr {
                    ops: p.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PauliPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolynomialRepr::deserialize(deserializer)?;
        let strings = repr
            .terms
            .into_iter()
            .map(|t| PauliString::new(Complex64::new(t.re, t.im), t.ops));
        PauliPolynomial::from_strings(repr.num_qubits, strings)
            .map(PauliPolynomial::canonicalize)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PauliAxis::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_products() {
        let xz = PauliString::single(1.0, 0, X).multiply(&PauliString::single(1.0, 0, Z));
        assert_eq!(xz.factors(), &[(0, Y)]);
        assert_eq!(xz.coefficient, c(0.0, -1.0));

        let zz = PauliString::single(1.0, 0, Z).multiply(&PauliString::single(1.0, 0, Z));
        assert!(zz.factors().is_empty());
        assert_eq!(zz.coefficient, c(1.0, 0.0));
    }

    #[test]
    fn two_qubit_product() {
        let a = PauliString::new(c(2.0, 0.0), [(0, X), (1, Z)]);
        let b = PauliString::new(c(3.0, 0.0), [(0, Z), (1, Z)]);
        let p = a.multiply(&b);
        assert_eq!(p.factors(), &[(0, Y)]);
        assert_eq!(p.coefficient, c(0.0, -6.0));
    }

    #[test]
    fn repeated_factors_fold_on_construction() {
        let s = PauliString::new(c(1.0, 0.0), [(2, X), (0, Z), (2, Y)]);
        assert_eq!(s.factors(), &[(0, Z), (2, Z)]);
        assert_eq!(s.coefficient, c(0.0, 1.0));
    }

    #[test]
    fn cancellation_and_sums() {
        let z0 = PauliPolynomial::single(2, 0, Z, 1.0).unwrap();
        assert!(z0.add(&z0.scale(-1.0)).unwrap().is_zero());
        let z1 = PauliPolynomial::single(2, 1, Z, 1.0).unwrap();
        assert_eq!(z0.add(&z1).unwrap().term_count(), 2);

        let t = PauliPolynomial::binary_projector(1, 0, Polarity::Plus).unwrap();
        let tbar = PauliPolynomial::binary_projector(1, 0, Polarity::Minus).unwrap();
        assert_eq!(t.add(&tbar).unwrap(), PauliPolynomial::identity(1, 1.0));
    }

    #[test]
    fn mismatched_registers_rejected() {
        let a = PauliPolynomial::identity(1, 1.0);
        let b = PauliPolynomial::identity(2, 1.0);
        assert!(matches!(a.add(&b), Err(Error::RegisterMismatch { .. })));
        assert!(a.multiply(&b).is_err());
    }

    #[test]
    fn projector_algebra() {
        for q in 0..3 {
            let t = PauliPolynomial::binary_projector(3, q, Polarity::Plus).unwrap();
            let tbar = PauliPolynomial::binary_projector(3, q, Polarity::Minus).unwrap();
            assert_eq!(t.multiply(&t).unwrap(), t);
            assert_eq!(tbar.multiply(&tbar).unwrap(), tbar);
            assert!(t.multiply(&tbar).unwrap().is_zero());
        }
        let t = PauliPolynomial::binary_projector(1, 0, Polarity::Plus).unwrap();
        assert_eq!(t.coefficient(&[]), c(0.5, 0.0));
        assert_eq!(t.coefficient(&[(0, Z)]), c(0.5, 0.0));
    }

    #[test]
    fn dense_rendering_basics() {
        let id = PauliPolynomial::identity(1, 1.0).to_matrix().unwrap();
        assert_eq!(id, DMatrix::identity(2, 2));
        let t = PauliPolynomial::binary_projector(1, 0, Polarity::Plus)
            .unwrap()
            .to_matrix()
            .unwrap();
        assert_eq!(t[(0, 0)], c(1.0, 0.0));
        assert_eq!(t[(1, 1)], c(0.0, 0.0));
        assert!(PauliPolynomial::identity(13, 1.0).to_matrix().is_err());
    }

    #[test]
    fn decomposition_basics() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0, 0.0);
        let p = PauliPolynomial::decompose_matrix(&m, 1).unwrap();
        assert_eq!(p, PauliPolynomial::binary_projector(1, 0, Polarity::Plus).unwrap());

        let zero = DMatrix::<Complex64>::zeros(2, 2);
        assert!(PauliPolynomial::decompose_matrix(&zero, 1).unwrap().is_zero());
    }

    #[test]
    fn decomposition_rejects_bad_input() {
        let rect = DMatrix::<Complex64>::zeros(2, 4);
        assert!(PauliPolynomial::decompose_matrix(&rect, 1).is_err());
        let three = DMatrix::<Complex64>::zeros(3, 3);
        assert!(PauliPolynomial::decompose_matrix(&three, 1).is_err());
        let mut skew = DMatrix::<Complex64>::zeros(2, 2);
        skew[(0, 1)] = c(1.0, 0.0);
        assert!(PauliPolynomial::decompose_matrix(&skew, 1).is_err());
    }

    #[test]
    fn expectations() {
        let z0 = PauliPolynomial::single(1, 0, Z, 1.0).unwrap();
        let zero = StateVector::basis(1, 0).unwrap();
        assert_eq!(z0.expectation(&zero).unwrap(), 1.0);
        let plus = StateVector::uniform(1);
        assert!(z0.expectation(&plus).unwrap().abs() < 1e-15);
        let two = StateVector::uniform(2);
        assert!(z0.expectation(&two).is_err());
    }

    #[test]
    fn json_shape() {
        let p = PauliPolynomial::from_strings(
            2,
            [
                PauliString::new(c(0.5, 0.0), [(1, Z), (0, X)]),
                PauliString::identity(c(-1.0, 0.0)),
            ],
        )
        .unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "num_qubits": 2,
                "terms": [
                    {"ops": [], "re": -1.0, "im": 0.0},
                    {"ops": [[0, "X"], [1, "Z"]], "re": 0.5, "im": 0.0}
                ]
            })
        );
        let back: PauliPolynomial = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }
}
