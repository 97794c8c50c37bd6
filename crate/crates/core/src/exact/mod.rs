//! Exact scalars, dense polynomials, Laurent-indexed vectors and rational
//! linear algebra.

mod interp;
mod laurent;
mod matrix;
mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

pub use interp::{interpolate, lagrange_basis, top_coefficient_weights};
pub use laurent::LaurentVec;
pub use matrix::{span_insert, RatMatrix, Span};
pub use poly::Poly;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` in lowest terms. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `base^e` for any integer exponent. Negative exponents need a nonzero base.
pub fn pow(base: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let mag = base.clone().pow(e.unsigned_abs() as u32);
    if e < 0 {
        mag.recip()
    } else {
        mag
    }
}

pub fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

/// Parses `p`, `-p`, `p/q` (optionally with surrounding whitespace and a
/// unicode minus sign).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.as_str(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `p/q` (or `p`) text form; the inverse of [`parse_rational`].
pub fn fmt_rational(q: &Rational) -> String {
    q.to_string()
}

/// Common vector-space interface for every kind of module element, so that
/// suites, span tracking and interpolation can be written once.
pub trait LinearElement: Clone + PartialEq + fmt::Debug + fmt::Display {
    /// Index of a basis vector of the underlying space.
    type Key: Ord + Clone + fmt::Debug;

    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&-Rational::one()))
    }

    /// Nonzero coordinates in increasing key order.
    fn terms(&self) -> Vec<(Self::Key, Rational)>;

    /// Builds an element from coordinates; repeated keys accumulate.
    fn from_terms<I: IntoIterator<Item = (Self::Key, Rational)>>(terms: I) -> Self;

    fn basis(key: Self::Key) -> Self {
        Self::from_terms([(key, Rational::one())])
    }
}

/// Dimension of the span of `elems`, over the union of their supports.
pub fn rank_of<E: LinearElement>(elems: &[E]) -> usize {
    let mut columns: Vec<E::Key> = elems.iter().flat_map(|e| e.terms()).map(|(k, _)| k).collect();
    columns.sort();
    columns.dedup();
    let mut span = Span::new(columns.len());
    for e in elems {
        let mut row = vec![Rational::zero(); columns.len()];
        for (k, c) in e.terms() {
            let at = columns.binary_search(&k).expect("column collected above");
            row[at] = c;
        }
        span.insert(row).expect("row width matches");
    }
    span.rank()
}

/// Joins signed terms into `a - b + c` form. Each entry is the coefficient
/// and the monomial text (empty for the constant term).
pub(crate) fn write_terms(
    f: &mut fmt::Formatter<'_>,
    terms: impl IntoIterator<Item = (Rational, String)>,
    always_space: bool,
) -> fmt::Result {
    let mut first = true;
    for (c, mono) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        if mono.is_empty() {
            write!(f, "{a}")?;
        } else if a.is_one() {
            write!(f, "{mono}")?;
        } else if a.is_integer() && !always_space {
            write!(f, "{a}{mono}")?;
        } else {
            write!(f, "{a} {mono}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}
