//! Qubit encodings of real variables.
//!
//! Each variable owns a contiguous block of qubits. Under the basis convention
//! of [`crate::pauli`], a qubit in `|0⟩` is an eigenstate of the projector
//! `T = ½(1 + Z)` with eigenvalue 1 and `|1⟩` has eigenvalue 0. Decoding
//! therefore reads a basis index bit `b_q` as the T-eigenvalue `1 − b_q`.
//!
//! Bitstrings shown to users are T-eigenvalues written most significant qubit
//! first, see [`report_bitstring`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliAxis, PauliPolynomial, Polarity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableEncoding {
    /// `ŵ = 2^{-N} Σ_ℓ 2^ℓ T_{offset+ℓ}`, values `{0, 1/2^N, …, 1 − 1/2^N}`.
    FractionalBinary { num_qubits: usize, qubit_offset: usize },
    /// `Z` on one qubit, values `{−1, +1}`.
    SpinPm1 { qubit: usize },
    /// `T` on one qubit, values `{0, 1}`.
    Binary01 { qubit: usize },
}

impl VariableEncoding {
    pub fn qubits(&self) -> std::ops::Range<usize> {
        match *self {
            VariableEncoding::FractionalBinary {
                num_qubits,
                qubit_offset,
            } => qubit_offset..qubit_offset + num_qubits,
            VariableEncoding::SpinPm1 { qubit } | VariableEncoding::Binary01 { qubit } => {
                qubit..qubit + 1
            }
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            VariableEncoding::FractionalBinary { .. } => "FractionalBinary",
            VariableEncoding::SpinPm1 { .. } => "SpinPM1",
            VariableEncoding::Binary01 { .. } => "Binary01",
        }
    }

    /// Operator representing the variable on a `register`-qubit register.
    pub fn encode(&self, register: usize) -> Result<PauliPolynomial> {
        if let Some(q) = self.qubits().last() {
            if q >= register {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits: register,
                });
            }
        }
        match *self {
            VariableEncoding::FractionalBinary {
                num_qubits,
                qubit_offset,
            } => {
                let mut acc = PauliPolynomial::zero(register);
                let scale = (num_qubits as f64).exp2().recip();
                for l in 0..num_qubits {
                    let t = PauliPolynomial::binary_projector(register, qubit_offset + l, Polarity::Plus)?;
                    acc = acc.add(&t.scale(scale * (l as f64).exp2()))?;
                }
                Ok(acc)
            }
            VariableEncoding::SpinPm1 { qubit } => {
                PauliPolynomial::single(register, qubit, PauliAxis::Z, 1.0)
            }
            VariableEncoding::Binary01 { qubit } => {
                PauliPolynomial::binary_projector(register, qubit, Polarity::Plus)
            }
        }
    }

    /// Value from T-eigenvalues indexed by qubit (`t_bits[q] ∈ {0, 1}`).
    pub fn decode_bits(&self, t_bits: &[u8], register: usize) -> Result<f64> {
        if t_bits.len() != register {
            return Err(Error::DimensionMismatch {
                expected: register,
                got: t_bits.len(),
            });
        }
        if let Some(q) = self.qubits().last() {
            if q >= register {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits: register,
                });
            }
        }
        let t = |q: usize| f64::from(t_bits[q] & 1);
        Ok(match *self {
            VariableEncoding::FractionalBinary {
                num_qubits,
                qubit_offset,
            } => {
                let mut v = 0.0;
                for l in (0..num_qubits).rev() {
                    v = 2.0 * v + t(qubit_offset + l);
                }
                v / (num_qubits as f64).exp2()
            }
            VariableEncoding::SpinPm1 { qubit } => 2.0 * t(qubit) - 1.0,
            VariableEncoding::Binary01 { qubit } => t(qubit),
        })
    }

    /// Value on the computational basis state `|index⟩`.
    pub fn decode_index(&self, index: usize) -> f64 {
        let t = |q: usize| (!(index >> q) & 1) as f64;
        match *self {
            VariableEncoding::FractionalBinary {
                num_qubits,
                qubit_offset,
            } => {
                let raw = (index >> qubit_offset) & ((1usize << num_qubits) - 1);
                let flipped = !raw & ((1usize << num_qubits) - 1);
                flipped as f64 / (num_qubits as f64).exp2()
            }
            VariableEncoding::SpinPm1 { qubit } => 2.0 * t(qubit) - 1.0,
            VariableEncoding::Binary01 { qubit } => t(qubit),
        }
    }

    /// All decodable values in increasing order.
    pub fn bin_centers(&self) -> Vec<f64> {
        match *self {
            VariableEncoding::FractionalBinary { num_qubits, .. } => {
                let n = 1usize << num_qubits;
                (0..n).map(|k| k as f64 / n as f64).collect()
            }
            VariableEncoding::SpinPm1 { .. } => vec![-1.0, 1.0],
            VariableEncoding::Binary01 { .. } => vec![0.0, 1.0],
        }
    }

    /// Spacing between neighbouring decodable values.
    pub fn bin_width(&self) -> f64 {
        match *self {
            VariableEncoding::FractionalBinary { num_qubits, .. } => (num_qubits as f64).exp2().recip(),
            VariableEncoding::SpinPm1 { .. } => 2.0,
            VariableEncoding::Binary01 { .. } => 1.0,
        }
    }
}

/// T-eigenvalues of `index`, most significant qubit first.
pub fn report_bitstring(index: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .rev()
        .map(|q| if (index >> q) & 1 == 0 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`report_bitstring`].
pub fn parse_report_bitstring(s: &str) -> Result<usize> {
    let n = s.len();
    let mut index = 0usize;
    for (pos, ch) in s.chars().enumerate() {
        let q = n - 1 - pos;
        match ch {
            '1' => {}
            '0' => index |= 1 << q,
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("expected 0 or 1, found {ch:?}"),
                })
            }
        }
    }
    Ok(index)
}

/// How a variable is laid out when appended with [`EncodingTable::push`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EncodingKind {
    FractionalBinary { num_qubits: usize },
    #[serde(rename = "SpinPM1")]
    SpinPm1,
    Binary01,
}

/// Ordered assignment of variables to disjoint qubit blocks covering the
/// whole register.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingTable {
    entries: Vec<(String, VariableEncoding)>,
    total_qubits: usize,
}

impl Default for EncodingTable {
    fn default() -> Self {
        Self::new()
    }
}

impl EncodingTable {
    pub fn new() -> Self {
        EncodingTable {
            entries: Vec::new(),
            total_qubits: 0,
        }
    }

    /// Appends a variable on the next free qubits.
    pub fn push(&mut self, name: impl Into<String>, kind: EncodingKind) -> Result<&mut Self> {
        let name = name.into();
        if self.get(&name).is_some() {
            return Err(Error::InvalidEncoding(format!("duplicate variable `{name}`")));
        }
        let q = self.total_qubits;
        let enc = match kind {
            EncodingKind::FractionalBinary { num_qubits } => {
                if num_qubits == 0 {
                    return Err(Error::InvalidEncoding(format!(
                        "`{name}` needs at least one qubit"
                    )));
                }
                VariableEncoding::FractionalBinary {
                    num_qubits,
                    qubit_offset: q,
                }
            }
            EncodingKind::SpinPm1 => VariableEncoding::SpinPm1 { qubit: q },
            EncodingKind::Binary01 => VariableEncoding::Binary01 { qubit: q },
        };
        self.total_qubits += enc.qubits().len();
        self.entries.push((name, enc));
        Ok(self)
    }

    /// One variable per name, all with the same kind.
    pub fn uniform<S: AsRef<str>>(names: &[S], kind: EncodingKind) -> Result<Self> {
        let mut t = Self::new();
        for n in names {
            t.push(n.as_ref(), kind)?;
        }
        Ok(t)
    }

    /// Builds a table from explicit placements, checking that blocks are
    /// disjoint and cover `[0, total)`.
    pub fn from_entries(entries: Vec<(String, VariableEncoding)>) -> Result<Self> {
        let mut seen_names = std::collections::BTreeSet::new();
        let total: usize = entries.iter().map(|(_, e)| e.qubits().len()).sum();
        let mut covered = vec![false; total];
        for (name, e) in &entries {
            if !seen_names.insert(name.as_str()) {
                return Err(Error::InvalidEncoding(format!("duplicate variable `{name}`")));
            }
            if e.qubits().is_empty() {
                return Err(Error::InvalidEncoding(format!("`{name}` has no qubits")));
            }
            for q in e.qubits() {
                match covered.get_mut(q) {
                    Some(c) if !*c => *c = true,
                    Some(_) => {
                        return Err(Error::InvalidEncoding(format!(
                            "qubit {q} assigned twice (`{name}`)"
                        )))
                    }
                    None => {
                        return Err(Error::InvalidEncoding(format!(
                            "qubit {q} of `{name}` leaves a gap in the register"
                        )))
                    }
                }
            }
        }
        Ok(EncodingTable {
            entries,
            total_qubits: total,
        })
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&VariableEncoding> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn entries(&self) -> &[(String, VariableEncoding)] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    /// Encoded operator for `name` on the full register.
    pub fn encode(&self, name: &str) -> Result<PauliPolynomial> {
        self.get(name)
            .ok_or_else(|| Error::UnencodedVariable(name.to_owned()))?
            .encode(self.total_qubits)
    }

    /// Variable values on basis state `|index⟩`, in table order.
    pub fn decode_index(&self, index: usize) -> Vec<f64> {
        self.entries.iter().map(|(_, e)| e.decode_index(index)).collect()
    }

    /// Named variable values on basis state `|index⟩`.
    pub fn assignment(&self, index: usize) -> std::collections::BTreeMap<String, f64> {
        self.entries
            .iter()
            .map(|(n, e)| (n.clone(), e.decode_index(index)))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    name: String,
    variant: String,
    qubits: Vec<usize>,
}

impl Serialize for EncodingTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<EntryRepr> = self
            .entries
            .iter()
            .map(|(n, e)| EntryRepr {
                name: n.clone(),
                variant: e.variant_name().to_owned(),
                qubits: e.qubits().collect(),
            })
            .collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EncodingTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let list = Vec::<EntryRepr>::deserialize(d)?;
        let mut entries = Vec::with_capacity(list.len());
        for r in list {
            let contiguous = r.qubits.windows(2).all(|w| w[1] == w[0] + 1);
            let first = *r
                .qubits
                .first()
                .ok_or_else(|| D::Error::custom(format!("`{}` lists no qubits", r.name)))?;
            let enc = match (r.variant.as_str(), r.qubits.len()) {
                ("FractionalBinary", n) if contiguous => VariableEncoding::FractionalBinary {
                    num_qubits: n,
                    qubit_offset: first,
                },
                ("SpinPM1", 1) => VariableEncoding::SpinPm1 { qubit: first },
                ("Binary01", 1) => VariableEncoding::Binary01 { qubit: first },
                (v, n) => {
                    return Err(D::Error::custom(format!(
                        "`{}`: variant {v} cannot use {n} qubits {:?}",
                        r.name, r.qubits
                    )))
                }
            };
            entries.push((r.name, enc));
        }
        EncodingTable::from_entries(entries).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn fractional_binary_two_qubits() {
        let e = VariableEncoding::FractionalBinary {
            num_qubits: 2,
            qubit_offset: 0,
        };
        let p = e.encode(2).unwrap();
        assert_eq!(p.term_count(), 3);
        assert!((p.coefficient(&[]).re - 0.375).abs() < 1e-15);
        assert!((p.coefficient(&[(0, PauliAxis::Z)]).re - 0.125).abs() < 1e-15);
        assert!((p.coefficient(&[(1, PauliAxis::Z)]).re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn spin_encodes_as_z() {
        let p = VariableEncoding::SpinPm1 { qubit: 3 }.encode(4).unwrap();
        assert_eq!(p.term_count(), 1);
        assert_eq!(p.coefficient(&[(3, PauliAxis::Z)]), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn binary_spectrum() {
        let p = VariableEncoding::Binary01 { qubit: 0 }.encode(1).unwrap();
        assert_eq!(p.diagonal().unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn decode_examples() {
        let e = VariableEncoding::FractionalBinary {
            num_qubits: 3,
            qubit_offset: 0,
        };
        // t_bits indexed by qubit: (b0, b1, b2) = (1, 0, 1)
        assert_eq!(e.decode_bits(&[1, 0, 1], 3).unwrap(), 5.0 / 8.0);
        assert!(e.decode_bits(&[1, 0], 3).is_err());

        let s = VariableEncoding::SpinPm1 { qubit: 0 };
        assert_eq!(s.decode_index(1), -1.0);
        assert_eq!(s.decode_index(0), 1.0);

        let f2 = VariableEncoding::FractionalBinary {
            num_qubits: 2,
            qubit_offset: 0,
        };
        assert_eq!(f2.decode_bits(&[1, 1], 2).unwrap(), 0.75);
        assert_eq!(f2.decode_index(0), 0.75);
    }

    #[test]
    fn bin_center_lists() {
        let f1 = VariableEncoding::FractionalBinary {
            num_qubits: 1,
            qubit_offset: 0,
        };
        assert_eq!(f1.bin_centers(), vec![0.0, 0.5]);
        let f3 = VariableEncoding::FractionalBinary {
            num_qubits: 3,
            qubit_offset: 0,
        };
        assert_eq!(f3.bin_centers(), (0..8).map(|k| k as f64 / 8.0).collect::<Vec<_>>());
        assert_eq!(VariableEncoding::SpinPm1 { qubit: 0 }.bin_centers(), vec![-1.0, 1.0]);
    }

    #[test]
    fn report_bitstrings_round_trip() {
        assert_eq!(report_bitstring(0, 3), "111");
        assert_eq!(report_bitstring(1, 3), "110");
        for i in 0..16 {
            assert_eq!(parse_report_bitstring(&report_bitstring(i, 4)).unwrap(), i);
        }
    }

    #[test]
    fn table_layout_and_json() {
        let mut t = EncodingTable::new();
        t.push("a", EncodingKind::FractionalBinary { num_qubits: 3 })
            .unwrap()
            .push("b", EncodingKind::SpinPm1)
            .unwrap();
        assert_eq!(t.total_qubits(), 4);
        assert!(t.push("a", EncodingKind::Binary01).is_err());

        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(
            v,
            serde_json::json!([
                {"name": "a", "variant": "FractionalBinary", "qubits": [0, 1, 2]},
                {"name": "b", "variant": "SpinPM1", "qubits": [3]}
            ])
        );
        let back: EncodingTable = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn table_rejects_overlap_and_gaps() {
        let overlap = vec![
            ("a".to_owned(), VariableEncoding::SpinPm1 { qubit: 0 }),
            ("b".to_owned(), VariableEncoding::SpinPm1 { qubit: 0 }),
        ];
        assert!(EncodingTable::from_entries(overlap).is_err());
        let gap = vec![("a".to_owned(), VariableEncoding::SpinPm1 { qubit: 1 })];
        assert!(EncodingTable::from_entries(gap).is_err());
    }
}
