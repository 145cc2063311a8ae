//! Integer polynomials: univariate in `t`, and multilinear-style monomials over
//! edge labels.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::label::Label;

/// A polynomial in `t` with integer coefficients; zero terms are never stored.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct UniPoly {
    terms: BTreeMap<usize, BigInt>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly::default()
    }

    /// `coeffs[k]` is the coefficient of `t^k`.
    pub fn from_coefficients<I: IntoIterator<Item = BigInt>>(coeffs: I) -> Self {
        let terms = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        UniPoly { terms }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::from_coefficients(coeffs.iter().map(|&c| BigInt::from(c)))
    }

    pub fn coefficient(&self, exponent: usize) -> BigInt {
        self.terms.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn add_term(&mut self, exponent: usize, coeff: BigInt) {
        let entry = self.terms.entry(exponent).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.terms.iter().map(|(&k, c)| c * t.pow(k as u32)).sum()
    }

    /// `t^n · p(1/t)`; requires `n ≥ deg p`.
    pub fn reversed(&self, n: usize) -> UniPoly {
        assert!(self.degree().is_none_or(|d| d <= n));
        UniPoly {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (n - k, c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for UniPoly {
    /// Descending powers, e.g. `t^4 + 5t^2 - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&k, c)) in self.terms.iter().rev().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if k == 0 || !magnitude.is_one() {
                write!(f, "{magnitude}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A polynomial in variables `z_e`, one per edge label. Each monomial is a
/// set of labels, so every variable has degree at most one.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct MultiPoly {
    terms: BTreeMap<Vec<Label>, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn add_monomial(&mut self, labels: &BTreeSet<Label>, coeff: BigInt) {
        let key: Vec<Label> = labels.iter().cloned().collect();
        let entry = self.terms.entry(key.clone()).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Label], &BigInt)> {
        self.terms.iter().map(|(k, c)| (k.as_slice(), c))
    }

    /// Value at the given weights; absent labels evaluate as zero.
    pub fn eval(&self, weights: &BTreeMap<Label, BigRational>) -> BigRational {
        let zero = BigRational::zero();
        self.terms
            .iter()
            .map(|(mono, c)| {
                mono.iter()
                    .fold(BigRational::from_integer(c.clone()), |acc, l| {
                        acc * weights.get(l).unwrap_or(&zero)
                    })
            })
            .sum()
    }

    /// Graded order: lower degree first, then lexicographic on labels.
    fn ordered_terms(&self) -> Vec<(&Vec<Label>, &BigInt)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
        terms
    }
}

impl fmt::Display for MultiPoly {
    /// E.g. `1 + z_1 z_2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (mono, c)) in self.ordered_terms().into_iter().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let vars: Vec<String> = mono.iter().map(|l| format!("z_{l}")).collect();
            match (mono.is_empty(), magnitude.is_one()) {
                (true, _) => write!(f, "{magnitude}")?,
                (false, true) => f.write_str(&vars.join(" "))?,
                (false, false) => write!(f, "{magnitude} {}", vars.join(" "))?,
            }
        }
        Ok(())
    }
}

impl Serialize for MultiPoly {
    /// A map from space-joined monomials (empty string for the constant) to
    /// coefficients.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.ordered_terms();
        let mut map = s.serialize_map(Some(terms.len()))?;
        for (mono, c) in terms {
            let key: Vec<&str> = mono.iter().map(Label::as_str).collect();
            map.serialize_entry(&key.join(" "), &c.to_string())?;
        }
        map.end()
    }
}
