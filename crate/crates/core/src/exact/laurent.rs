use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{write_terms, LinearElement, Rational};

/// Finitely supported vector indexed by the integers; the coordinate at `n`
/// is the coefficient of `x^n`. Zero entries are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentVec {
    entries: BTreeMap<i64, Rational>,
}

impl LaurentVec {
    pub fn zero() -> Self {
        LaurentVec::default()
    }

    /// `c x^n`
    pub fn monomial(c: Rational, n: i64) -> Self {
        let mut v = LaurentVec::default();
        v.add_at(n, c);
        v
    }

    pub fn get(&self, n: i64) -> Rational {
        self.entries.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_at(&mut self, n: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry(n).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&n);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.entries.iter().map(|(&n, c)| (n, c))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for LaurentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .entries
            .iter()
            .rev()
            .map(|(n, c)| (c.clone(), format!("x^{n}")));
        write_terms(f, terms, true)
    }
}

impl LinearElement for LaurentVec {
    type Key = i64;

    fn zero() -> Self {
        LaurentVec::default()
    }

    fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in other.iter() {
            out.add_at(n, c.clone());
        }
        out
    }

    fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentVec::default();
        }
        LaurentVec {
            entries: self.entries.iter().map(|(&n, a)| (n, a * c)).collect(),
        }
    }

    fn terms(&self) -> Vec<(i64, Rational)> {
        self.entries.iter().map(|(&n, c)| (n, c.clone())).collect()
    }

    fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut v = LaurentVec::default();
        for (n, c) in terms {
            v.add_at(n, c);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn cancellation_removes_entries() {
        let a = LaurentVec::monomial(int(2), 3);
        let b = LaurentVec::monomial(int(-2), 3);
        assert!(a.plus(&b).is_zero());
        assert_eq!(a.plus(&b).len(), 0);
    }

    #[test]
    fn display_descends() {
        let v = LaurentVec::from_terms([(2, int(2)), (-1, rat(3, 2)), (0, int(-1))]);
        assert_eq!(v.to_string(), "2 x^2 - x^0 + 3/2 x^-1");
        assert_eq!(LaurentVec::zero().to_string(), "0");
    }
}
