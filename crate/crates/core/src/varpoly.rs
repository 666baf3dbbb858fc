//! Polynomials over named real variables.
//!
//! These carry potentials and network losses before any qubit encoding is
//! chosen. The text form is a sum of products, e.g.
//! `18 * w^4 - 35 * w^3 + 0.372573` or `2 * a * b^2 - c`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::encoding::EncodingTable;
use crate::error::{Error, Result};
use crate::pauli::{PauliPolynomial, DROP_TOLERANCE};

/// Variable name → positive exponent, sorted by name.
pub type Powers = Vec<(String, u32)>;

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coefficient: f64,
    pub powers: Powers,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|(_, k)| k).sum()
    }
}

fn multiply_powers(a: &Powers, b: &Powers) -> Powers {
    let mut out: BTreeMap<&str, u32> = BTreeMap::new();
    for (n, k) in a.iter().chain(b) {
        *out.entry(n.as_str()).or_default() += k;
    }
    out.into_iter().map(|(n, k)| (n.to_owned(), k)).collect()
}

/// Canonical polynomial: one coefficient per distinct power pattern.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VarPolynomial {
    terms: BTreeMap<Powers, f64>,
}

impl VarPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.accumulate(Vec::new(), c);
        p.canonicalize()
    }

    pub fn var(name: impl Into<String>) -> Self {
        Self::monomial(1.0, [(name.into(), 1)])
    }

    pub fn monomial(coefficient: f64, powers: impl IntoIterator<Item = (String, u32)>) -> Self {
        let mut merged: BTreeMap<String, u32> = BTreeMap::new();
        for (n, k) in powers {
            if k > 0 {
                *merged.entry(n).or_default() += k;
            }
        }
        let mut p = Self::zero();
        p.accumulate(merged.into_iter().collect(), coefficient);
        p.canonicalize()
    }

    fn accumulate(&mut self, powers: Powers, c: f64) {
        *self.terms.entry(powers).or_insert(0.0) += c;
    }

    fn canonicalize(mut self) -> Self {
        self.terms.retain(|_, c| c.abs() >= DROP_TOLERANCE);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Largest total degree of any monomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|p| p.iter().map(|(_, k)| k).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn constant_term(&self) -> f64 {
        self.terms.get(&Vec::new()).copied().unwrap_or(0.0)
    }

    pub fn coefficient(&self, powers: &[(&str, u32)]) -> f64 {
        let key: Powers = {
            let mut v: Vec<(String, u32)> = powers.iter().map(|&(n, k)| (n.to_owned(), k)).collect();
            v.sort();
            v
        };
        self.terms.get(&key).copied().unwrap_or(0.0)
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(p, &c)| Monomial {
            coefficient: c,
            powers: p.clone(),
        })
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|p| p.iter().map(|(n, _)| n.clone()))
            .collect()
    }

    pub fn scale(&self, factor: f64) -> Self {
        VarPolynomial {
            terms: self.terms.iter().map(|(p, &c)| (p.clone(), c * factor)).collect(),
        }
        .canonicalize()
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = Self::constant(1.0);
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluates at a full assignment.
    pub fn evaluate(&self, assignment: &HashMap<String, f64>) -> Result<f64> {
        self.evaluate_with(|n| assignment.get(n).copied())
    }

    /// Evaluates with a lookup closure; fails on the first unknown variable.
    pub fn evaluate_with(&self, lookup: impl Fn(&str) -> Option<f64>) -> Result<f64> {
        let mut total = 0.0;
        for (p, &c) in &self.terms {
            let mut m = c;
            for (n, k) in p {
                let v = lookup(n).ok_or_else(|| Error::MissingVariable(n.clone()))?;
                m *= v.powi(*k as i32);
            }
            total += m;
        }
        Ok(total)
    }

    /// Substitutes polynomials for variables and re-expands. Variables
    /// without a substitution are kept.
    pub fn compose(&self, substitutions: &HashMap<String, VarPolynomial>) -> Self {
        let mut out = Self::zero();
        let mut power_cache: HashMap<(String, u32), VarPolynomial> = HashMap::new();
        for (p, &c) in &self.terms {
            let mut m = Self::constant(c);
            for (n, k) in p {
                let factor = match substitutions.get(n) {
                    Some(sub) => power_cache
                        .entry((n.clone(), *k))
                        .or_insert_with(|| sub.pow(*k))
                        .clone(),
                    None => Self::monomial(1.0, [(n.clone(), *k)]),
                };
                m = &m * &factor;
            }
            out = &out + &m;
        }
        out
    }

    /// Lowers every exponent of the named variables to 1, i.e. imposes
    /// `v² = v` for variables known to take values in `{0, 1}`.
    pub fn reduce_idempotent(&self, names: &BTreeSet<String>) -> Self {
        let mut out = Self::zero();
        for (p, &c) in &self.terms {
            let reduced = p
                .iter()
                .map(|(n, k)| (n.clone(), if names.contains(n) { 1 } else { *k }))
                .collect();
            out.accumulate(reduced, c);
        }
        out.canonicalize()
    }

    /// Reduces exponents modulo 2 for the named variables, imposing `v² = 1`
    /// for `±1`-valued variables.
    pub fn reduce_involutory(&self, names: &BTreeSet<String>) -> Self {
        let mut out = Self::zero();
        for (p, &c) in &self.terms {
            let reduced = p
                .iter()
                .filter_map(|(n, k)| {
                    if names.contains(n) {
                        (k % 2 == 1).then(|| (n.clone(), 1))
                    } else {
                        Some((n.clone(), *k))
                    }
                })
                .collect();
            out.accumulate(reduced, c);
        }
        out.canonicalize()
    }

    /// Replaces each variable by its encoded operator and expands.
    pub fn substitute_encodings(&self, table: &EncodingTable) -> Result<PauliPolynomial> {
        let register = table.total_qubits();
        let mut powers: HashMap<(&str, u32), PauliPolynomial> = HashMap::new();
        let mut out = PauliPolynomial::zero(register);
        for (p, &c) in &self.terms {
            let mut m = PauliPolynomial::identity(register, c);
            for (n, k) in p {
                let key = (n.as_str(), *k);
                if !powers.contains_key(&key) {
                    let base = table.encode(n)?;
                    powers.insert(key, base.pow(*k));
                }
                m = m.multiply(&powers[&key])?;
            }
            out = out.add(&m)?;
        }
        Ok(out)
    }
}

impl Add for &VarPolynomial {
    type Output = VarPolynomial;
    fn add(self, rhs: &VarPolynomial) -> VarPolynomial {
        let mut out = self.clone();
        for (p, &c) in &rhs.terms {
            out.accumulate(p.clone(), c);
        }
        out.canonicalize()
    }
}

impl Sub for &VarPolynomial {
    type Output = VarPolynomial;
    fn sub(self, rhs: &VarPolynomial) -> VarPolynomial {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &VarPolynomial {
    type Output = VarPolynomial;
    fn mul(self, rhs: &VarPolynomial) -> VarPolynomial {
        let mut out = VarPolynomial::zero();
        for (pa, &ca) in &self.terms {
            for (pb, &cb) in &rhs.terms {
                out.accumulate(multiply_powers(pa, pb), ca * cb);
            }
        }
        out.canonicalize()
    }
}

impl Neg for &VarPolynomial {
    type Output = VarPolynomial;
    fn neg(self) -> VarPolynomial {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for VarPolynomial {
            type Output = VarPolynomial;
            fn $m(self, rhs: VarPolynomial) -> VarPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for VarPolynomial {
    type Output = VarPolynomial;
    fn neg(self) -> VarPolynomial {
        -&self
    }
}

impl fmt::Display for VarPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, &c)) in self.terms.iter().enumerate() {
            let mag = if i == 0 {
                if c < 0.0 {
                    f.write_str("-")?;
                }
                c.abs()
            } else {
                f.write_str(if c < 0.0 { " - " } else { " + " })?;
                c.abs()
            };
            write!(f, "{mag:?}")?;
            for (n, k) in p {
                if *k == 1 {
                    write!(f, " * {n}")?;
                } else {
                    write!(f, " * {n}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(0, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let bytes = rest.as_bytes();
        let mut end = 0;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut j = end + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                end = j;
            }
        }
        match rest[..end].parse::<f64>() {
            Ok(v) => {
                self.pos += end;
                Ok(v)
            }
            Err(_) => self.err(format!("bad number {:?}", &rest[..end])),
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest
            .char_indices()
            .find(|&(i, c)| !(c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit())))
            .map_or(rest.len(), |(i, _)| i);
        if end == 0 {
            return self.err("expected a number or variable name");
        }
        self.pos += end;
        Ok(rest[..end].to_owned())
    }

    fn factor(&mut self) -> Result<VarPolynomial> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => Ok(VarPolynomial::constant(self.number()?)),
            Some(_) => {
                let name = self.ident()?;
                let k = if self.eat('^') {
                    self.skip_ws();
                    let start = self.pos;
                    let v = self.number()?;
                    if v.fract() != 0.0 || v < 0.0 || v > u32::MAX as f64 {
                        self.pos = start;
                        return self.err("exponent must be a non-negative integer");
                    }
                    v as u32
                } else {
                    1
                };
                Ok(VarPolynomial::monomial(1.0, [(name, k)]))
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn term(&mut self) -> Result<VarPolynomial> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn polynomial(&mut self) -> Result<VarPolynomial> {
        let mut sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        let mut acc = VarPolynomial::zero();
        loop {
            acc = &acc + &self.term()?.scale(sign);
            if self.eat('+') {
                sign = 1.0;
            } else if self.eat('-') {
                sign = -1.0;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(acc)
    }
}

impl FromStr for VarPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Parser { src: s, pos: 0 }.polynomial()
    }
}

impl Serialize for VarPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for VarPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
