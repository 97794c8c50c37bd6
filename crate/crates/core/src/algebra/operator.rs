use std::fmt;

use num_traits::Zero;

use super::{BrElement, BrKey, Carrier};
use crate::error::{Error, Result};
use crate::exact::{LinearElement, Poly, RatMatrix, Rational};

/// A linear endomorphism of a carrier, built from a few primitive kinds.
///
/// The primitive kinds (`PolyMult`, `UnitShift`, `Matrix`) act on one
/// tensor factor: factor 0 at top level, or the factor named by the nearest
/// enclosing `OnFactor`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BrOperator {
    Zero,
    /// `c · id`
    Scalar(Rational),
    /// Multiplication by a polynomial in `x`.
    PolyMult(Poly),
    /// `f(x) ↦ f(x + c)`
    UnitShift(Rational),
    Matrix(RatMatrix),
    Sum(Vec<BrOperator>),
    /// `Compose([a, b])` is `a ∘ b`: `b` acts first.
    Compose(Vec<BrOperator>),
    /// Runs the inner operator on the given tensor factor.
    OnFactor(usize, Box<BrOperator>),
}

impl BrOperator {
    pub fn identity() -> Self {
        BrOperator::Scalar(Rational::from_integer(1.into()))
    }

    pub fn apply(&self, v: &BrElement) -> BrElement {
        self.apply_on(v, 0)
    }

    fn apply_on(&self, v: &BrElement, factor: usize) -> BrElement {
        match self {
            BrOperator::Zero => BrElement::zero(),
            BrOperator::Scalar(c) => v.scaled(c),
            BrOperator::Sum(ops) => ops
                .iter()
                .fold(BrElement::zero(), |acc, op| acc.plus(&op.apply_on(v, factor))),
            BrOperator::Compose(ops) => ops
                .iter()
                .rev()
                .fold(v.clone(), |acc, op| op.apply_on(&acc, factor)),
            BrOperator::OnFactor(f, op) => op.apply_on(v, *f),
            primitive => {
                let mut out = BrElement::zero();
                for (key, c) in v.iter() {
                    for (j, a) in primitive.image_of_index(key[factor]) {
                        let mut target: BrKey = key.clone();
                        target[factor] = j;
                        out.add_at(target, c * a);
                    }
                }
                out
            }
        }
    }

    // Image of a single basis index under a primitive kind.
    fn image_of_index(&self, k: u32) -> Vec<(u32, Rational)> {
        match self {
            BrOperator::PolyMult(p) => p
                .terms()
                .into_iter()
                .map(|(j, c)| (k + j as u32, c))
                .collect(),
            // (x + c)^k = Σ_j C(k, j) c^{k-j} x^j
            BrOperator::UnitShift(c) => {
                let mut out = Vec::with_capacity(k as usize + 1);
                let mut coeff = Rational::from_integer(1.into());
                for j in (0..=k).rev() {
                    out.push((j, coeff.clone()));
                    if c.is_zero() {
                        break;
                    }
                    coeff = coeff * c * Rational::from_integer(j.into()) / Rational::from_integer((k - j + 1).into());
                }
                out.reverse();
                out
            }
            BrOperator::Matrix(m) => (0..m.rows())
                .filter(|&r| !m.get(r, k as usize).is_zero())
                .map(|r| (r as u32, m.get(r, k as usize).clone()))
                .collect(),
            _ => unreachable!("compound operators are expanded by apply_on"),
        }
    }

    /// Structural zero test (does not evaluate).
    pub fn is_zero(&self) -> bool {
        match self {
            BrOperator::Zero => true,
            BrOperator::Scalar(c) => c.is_zero(),
            BrOperator::PolyMult(p) => p.is_zero(),
            BrOperator::Matrix(m) => (0..m.rows()).all(|r| m.row(r).iter().all(Zero::is_zero)),
            BrOperator::Sum(ops) => ops.iter().all(BrOperator::is_zero),
            BrOperator::Compose(ops) => ops.iter().any(BrOperator::is_zero),
            BrOperator::OnFactor(_, op) => op.is_zero(),
            BrOperator::UnitShift(_) => false,
        }
    }

    /// The same operator acting on factors shifted by `offset`, as needed
    /// when this operator's module becomes the right-hand tensor factor.
    pub fn on_factors_from(&self, offset: usize) -> BrOperator {
        BrOperator::OnFactor(offset, Box::new(self.reindex(offset)))
    }

    fn reindex(&self, offset: usize) -> BrOperator {
        match self {
            BrOperator::Sum(ops) => BrOperator::Sum(ops.iter().map(|o| o.reindex(offset)).collect()),
            BrOperator::Compose(ops) => {
                BrOperator::Compose(ops.iter().map(|o| o.reindex(offset)).collect())
            }
            BrOperator::OnFactor(f, op) => BrOperator::OnFactor(f + offset, Box::new(op.reindex(offset))),
            other => other.clone(),
        }
    }

    pub(crate) fn check_carrier(&self, carrier: &Carrier, factor: usize) -> Result<()> {
        let factors = carrier.factors();
        let mismatch = || Error::CarrierMismatch {
            op: self.to_string(),
            carrier: carrier.to_string(),
        };
        match self {
            BrOperator::Zero | BrOperator::Scalar(_) => Ok(()),
            BrOperator::Sum(ops) | BrOperator::Compose(ops) => {
                ops.iter().try_for_each(|op| op.check_carrier(carrier, factor))
            }
            BrOperator::OnFactor(f, op) => {
                if *f >= factors.len() {
                    return Err(mismatch());
                }
                op.check_carrier(carrier, *f)
            }
            BrOperator::PolyMult(_) | BrOperator::UnitShift(_) => match factors[factor] {
                Carrier::Poly => Ok(()),
                _ => Err(mismatch()),
            },
            BrOperator::Matrix(m) => match factors[factor] {
                Carrier::FiniteDim(n) if m.is_square() && m.rows() == *n => Ok(()),
                _ => Err(mismatch()),
            },
        }
    }
}

impl fmt::Display for BrOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ops: &[BrOperator]| -> String {
            ops.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(", ")
        };
        match self {
            BrOperator::Zero => write!(f, "0"),
            BrOperator::Scalar(c) => write!(f, "scalar({c})"),
            BrOperator::PolyMult(p) => {
                write!(f, "mul({})", p.to_string().replace('t', "x"))
            }
            BrOperator::UnitShift(c) => write!(f, "shift({c})"),
            BrOperator::Matrix(m) => {
                let rows: Vec<String> = (0..m.rows())
                    .map(|r| {
                        let cells: Vec<String> = m.row(r).iter().map(|c| c.to_string()).collect();
                        format!("[{}]", cells.join(","))
                    })
                    .collect();
                write!(f, "matrix[{}]", rows.join(","))
            }
            BrOperator::Sum(ops) => write!(f, "sum({})", list(ops)),
            BrOperator::Compose(ops) => write!(f, "compose({})", list(ops)),
            BrOperator::OnFactor(k, op) => write!(f, "factor{k}({op})"),
        }
    }
}
