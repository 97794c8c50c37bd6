use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::exact::{write_terms, LinearElement, Poly, Rational};

/// Basis index of a `B_r`-module carrier, one component per tensor factor.
/// On `ℚ[x]` the component `k` stands for `x^k`.
pub type BrKey = Vec<u32>;

/// Vector of a `B_r`-module carrier; zero coordinates are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BrElement {
    coords: BTreeMap<BrKey, Rational>,
}

impl BrElement {
    /// Reads a polynomial in `x` as an element of a single `ℚ[x]` factor.
    pub fn from_poly(p: &Poly) -> Self {
        Self::from_terms(p.terms().into_iter().map(|(k, c)| (vec![k as u32], c)))
    }

    /// Inverse of [`BrElement::from_poly`]; `None` unless every key has one
    /// component.
    pub fn to_poly(&self) -> Option<Poly> {
        let mut terms = Vec::with_capacity(self.coords.len());
        for (k, c) in &self.coords {
            let [k] = k.as_slice() else { return None };
            terms.push((*k as usize, c.clone()));
        }
        Some(Poly::from_terms(terms))
    }

    pub fn get(&self, key: &[u32]) -> Rational {
        self.coords.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn keys(&self) -> impl Iterator<Item = BrKey> + '_ {
        self.coords.keys().cloned()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BrKey, &Rational)> {
        self.coords.iter()
    }

    pub(crate) fn add_at(&mut self, key: BrKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.coords.entry(key) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }
}

pub(crate) fn fmt_key(key: &[u32]) -> String {
    let parts: Vec<String> = key.iter().map(u32::to_string).collect();
    format!("v[{}]", parts.join(","))
}

impl fmt::Display for BrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.coords.iter().map(|(k, c)| (c.clone(), fmt_key(k)));
        write_terms(f, terms, true)
    }
}

impl LinearElement for BrElement {
    type Key = BrKey;

    fn zero() -> Self {
        BrElement::default()
    }

    fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coords {
            out.add_at(k.clone(), c.clone());
        }
        out
    }

    fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return BrElement::default();
        }
        BrElement {
            coords: self.coords.iter().map(|(k, a)| (k.clone(), a * c)).collect(),
        }
    }

    fn terms(&self) -> Vec<(BrKey, Rational)> {
        self.coords.iter().map(|(k, c)| (k.clone(), c.clone())).collect()
    }

    fn from_terms<I: IntoIterator<Item = (BrKey, Rational)>>(terms: I) -> Self {
        let mut out = BrElement::default();
        for (k, c) in terms {
            out.add_at(k, c);
        }
        out
    }
}
