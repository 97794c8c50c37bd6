//! The solvable quotient `B_r` of the positive Virasoro subalgebra and its
//! modules.
//!
//! A module is described by `r + 1` linear operators on a carrier space,
//! one for each generator `d̄_i`. Carriers are either finite-dimensional
//! coordinate spaces or the polynomial ring `ℚ[x]`; tensor products keep one
//! key component per factor, so re-associating a triple product is a no-op
//! on coordinates.

mod element;
mod fixtures;
mod operator;

use std::fmt;


use crate::error::{Error, Result};
use crate::exact::{factorial, int, rank_of, LinearElement, Rational};

pub use element::{BrElement, BrKey};
pub(crate) use element::fmt_key;
pub use fixtures::{
    broken_fixture, density_module, make_mgamma, make_shift_module, make_shift_module_b1,
    mixed_fixture,
};
pub use operator::BrOperator;

/// Largest supported rank.
pub const MAX_RANK: usize = 6;

/// Window used when a constructor certifies its own output.
pub const DEFAULT_CERT_WINDOW: usize = 6;

/// The Lie algebra `B_r` with basis `d̄_0, …, d̄_r` and
/// `[d̄_i, d̄_j] = (j - i) d̄_{i+j}` (zero once `i + j > r`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BrAlgebra {
    r: usize,
}

impl BrAlgebra {
    pub fn new(r: usize) -> Result<Self> {
        if r > MAX_RANK {
            return Err(Error::RankOutOfRange(r));
        }
        Ok(BrAlgebra { r })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn dimension(&self) -> usize {
        self.r + 1
    }

    /// `[d̄_i, d̄_j]` as `(coefficient, index)`, or `None` when it vanishes.
    pub fn bracket(&self, i: usize, j: usize) -> Option<(Rational, usize)> {
        let k = i + j;
        if i == j || k > self.r {
            return None;
        }
        Some((int(j as i64 - i as i64), k))
    }

    /// The adjoint representation on `B_r` itself.
    pub fn adjoint(&self) -> BrModule {
        let n = self.dimension();
        let ops = (0..n)
            .map(|i| {
                let mut m = crate::exact::RatMatrix::zeros(n, n);
                for j in 0..n {
                    if let Some((c, k)) = self.bracket(i, j) {
                        m.set(k, j, c);
                    }
                }
                BrOperator::Matrix(m)
            })
            .collect();
        BrModule::new(format!("adjoint(B_{})", self.r), self.r, Carrier::FiniteDim(n), ops)
            .and_then(|m| m.certified(DEFAULT_CERT_WINDOW))
            .expect("the adjoint representation satisfies the relations")
    }
}

/// Underlying vector space of a `B_r`-module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Carrier {
    /// Coordinates `e_0, …, e_{n-1}`.
    FiniteDim(usize),
    /// `ℚ[x]` with basis `x^k`; probes cap the degree.
    Poly,
    /// Flattened tensor product, one key component per factor.
    Tensor(Vec<Carrier>),
}

impl Carrier {
    pub fn tensor(a: &Carrier, b: &Carrier) -> Carrier {
        let mut factors = a.factors().into_iter().cloned().collect::<Vec<_>>();
        factors.extend(b.factors().into_iter().cloned());
        Carrier::Tensor(factors)
    }

    /// Single-factor carriers making up this one.
    pub fn factors(&self) -> Vec<&Carrier> {
        match self {
            Carrier::Tensor(fs) => fs.iter().collect(),
            other => vec![other],
        }
    }

    pub fn factor_count(&self) -> usize {
        self.factors().len()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.factors().iter().try_fold(1usize, |acc, f| match f {
            Carrier::FiniteDim(n) => Some(acc * n),
            _ => None,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.dimension().is_some()
    }

    /// Basis keys of the probe window: every finite factor in full and
    /// polynomial factors up to degree `cap`, in lexicographic order.
    pub fn window_keys(&self, cap: usize) -> Vec<BrKey> {
        self.factors().iter().fold(vec![Vec::new()], |acc, f| {
            let range = match f {
                Carrier::FiniteDim(n) => *n as u32,
                _ => cap as u32 + 1,
            };
            acc.iter()
                .flat_map(|prefix| {
                    (0..range).map(move |k| {
                        let mut key = prefix.clone();
                        key.push(k);
                        key
                    })
                })
                .collect()
        })
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::FiniteDim(n) => write!(f, "Q^{n}"),
            Carrier::Poly => write!(f, "Q[x]"),
            Carrier::Tensor(fs) => {
                let parts: Vec<String> = fs.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(" (x) "))
            }
        }
    }
}

/// Record of a successful relation check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub window: usize,
    pub vectors_checked: usize,
    pub pairs_checked: usize,
}

/// A nonzero value of `[d̄_i, d̄_j] v - (j - i) d̄_{i+j} v`.
#[derive(Clone, PartialEq, Debug)]
pub struct Residual {
    pub i: usize,
    pub j: usize,
    pub basis: BrKey,
    pub value: BrElement,
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[d̄_{}, d̄_{}] on {} leaves {}", self.i, self.j, fmt_key(&self.basis), self.value)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct ValidationReport {
    pub window: usize,
    pub vectors_checked: usize,
    pub pairs_checked: usize,
    pub residuals: Vec<Residual>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// How `d̄_r` acts on a probe window.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dichotomy {
    Zero,
    InjectiveOnWindow,
    /// Nonzero with a nontrivial kernel: impossible for an irreducible module.
    Mixed,
}

/// A `B_r`-module: `ops[i]` realizes `d̄_i`.
#[derive(Clone, PartialEq, Debug)]
pub struct BrModule {
    name: String,
    r: usize,
    carrier: Carrier,
    ops: Vec<BrOperator>,
    certificate: Option<Certificate>,
}

impl BrModule {
    /// An uncertified description; see [`BrModule::certified`].
    pub fn new(name: impl Into<String>, r: usize, carrier: Carrier, ops: Vec<BrOperator>) -> Result<Self> {
        BrAlgebra::new(r)?;
        if ops.len() != r + 1 {
            return Err(Error::OperatorCount {
                expected: r + 1,
                got: ops.len(),
            });
        }
        for op in &ops {
            op.check_carrier(&carrier, 0)?;
        }
        Ok(BrModule {
            name: name.into(),
            r,
            carrier,
            ops,
            certificate: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn algebra(&self) -> BrAlgebra {
        BrAlgebra { r: self.r }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn ops(&self) -> &[BrOperator] {
        &self.ops
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    pub fn is_validated(&self) -> bool {
        self.certificate.is_some()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `d̄_i v`
    pub fn act(&self, i: usize, v: &BrElement) -> BrElement {
        self.ops[i].apply(v)
    }

    /// Checks every relation `[d̄_i, d̄_j] = (j - i) d̄_{i+j}` on the window
    /// basis and reports each nonzero residual with its witness.
    pub fn validate(&self, window: usize) -> ValidationReport {
        let keys = self.carrier.window_keys(window);
        let alg = self.algebra();
        let mut residuals = Vec::new();
        let mut pairs = 0;
        for i in 0..=self.r {
            for j in 0..=self.r {
                pairs += 1;
                for key in &keys {
                    let v = BrElement::basis(key.clone());
                    let lhs = self.act(i, &self.act(j, &v)).minus(&self.act(j, &self.act(i, &v)));
                    let rhs = match alg.bracket(i, j) {
                        Some((c, k)) => self.act(k, &v).scaled(&c),
                        None => BrElement::zero(),
                    };
                    let value = lhs.minus(&rhs);
                    if !value.is_zero() {
                        residuals.push(Residual {
                            i,
                            j,
                            basis: key.clone(),
                            value,
                        });
                    }
                }
            }
        }
        ValidationReport {
            window,
            vectors_checked: keys.len(),
            pairs_checked: pairs,
            residuals,
        }
    }

    /// Validates and attaches the certificate, or fails with the first
    /// witness.
    pub fn certified(mut self, window: usize) -> Result<Self> {
        let report = self.validate(window);
        if let Some(w) = report.residuals.first() {
            return Err(Error::InvalidModule(format!(
                "{}: [d{}, d{}] residual on v{:?} is {}",
                self.name, w.i, w.j, w.basis, w.value
            )));
        }
        self.certificate = Some(Certificate {
            window,
            vectors_checked: report.vectors_checked,
            pairs_checked: report.pairs_checked,
        });
        Ok(self)
    }

    /// The polynomial action `g(m) v = Σ_i m^{i+1} / (i+1)! · d̄_i v`.
    pub fn g_action(&self, m: i64, v: &BrElement) -> BrElement {
        if m == 0 {
            return BrElement::zero();
        }
        let mut out = BrElement::zero();
        let mut mpow = int(m);
        for i in 0..=self.r {
            if !self.ops[i].is_zero() {
                let coeff = &mpow / factorial(i + 1);
                out = out.plus(&self.act(i, v).scaled(&coeff));
            }
            mpow *= int(m);
        }
        out
    }

    /// Coproduct action on `self ⊗ other`: `d̄_i ↦ d̄_i ⊗ 1 + 1 ⊗ d̄_i`.
    pub fn tensor(&self, other: &BrModule) -> Result<BrModule> {
        if self.r != other.r {
            return Err(Error::RankMismatch {
                left: self.r,
                right: other.r,
            });
        }
        let (Some(c1), Some(c2)) = (&self.certificate, &other.certificate) else {
            return Err(Error::Unvalidated);
        };
        let offset = self.carrier.factor_count();
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(a, b)| BrOperator::Sum(vec![a.on_factors_from(0), b.on_factors_from(offset)]))
            .collect();
        let window = c1.window.min(c2.window).min(4);
        BrModule::new(
            format!("tensor({},{})", self.name, other.name),
            self.r,
            Carrier::tensor(&self.carrier, &other.carrier),
            ops,
        )?
        .certified(window)
    }

    /// Classifies `d̄_r` on the window as zero, injective, or neither.
    pub fn dr_dichotomy(&self, window: usize) -> Dichotomy {
        let keys = self.carrier.window_keys(window);
        let images: Vec<BrElement> = keys
            .iter()
            .map(|k| self.act(self.r, &BrElement::basis(k.clone())))
            .collect();
        if images.iter().all(BrElement::is_zero) {
            return Dichotomy::Zero;
        }
        let rank = rank_of(&images);
        if rank == keys.len() {
            Dichotomy::InjectiveOnWindow
        } else {
            Dichotomy::Mixed
        }
    }

    /// Matrix of `d̄_i` in the coordinate basis of a finite carrier.
    pub fn matrix_of(&self, i: usize) -> Result<crate::exact::RatMatrix> {
        let n = self.carrier.dimension().ok_or_else(|| {
            Error::Unsupported(format!("{} has an infinite carrier", self.name))
        })?;
        let keys = self.carrier.window_keys(0);
        let mut m = crate::exact::RatMatrix::zeros(n, n);
        for (col, key) in keys.iter().enumerate() {
            let img = self.act(i, &BrElement::basis(key.clone()));
            for (k, c) in img.terms() {
                let row = keys.binary_search(&k).expect("finite carrier is closed");
                m.set(row, col, c);
            }
        }
        Ok(m)
    }

    /// Change of basis `d̄_i ↦ P d̄_i P⁻¹` on a finite single-factor carrier.
    pub fn conjugate(&self, p: &crate::exact::RatMatrix) -> Result<BrModule> {
        let n = match &self.carrier {
            Carrier::FiniteDim(n) => *n,
            other => {
                return Err(Error::Unsupported(format!(
                    "conjugation needs a single finite factor, got {other}"
                )))
            }
        };
        if p.rows() != n || !p.is_square() {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.rows(),
            });
        }
        let p_inv = p.inverse()?;
        let ops = (0..=self.r)
            .map(|i| Ok(BrOperator::Matrix(p.mul(&self.matrix_of(i)?)?.mul(&p_inv)?)))
            .collect::<Result<Vec<_>>>()?;
        let module = BrModule::new(format!("{}^P", self.name), self.r, self.carrier.clone(), ops)?;
        match &self.certificate {
            Some(c) => module.certified(c.window),
            None => Ok(module),
        }
    }
}

/// Free-function form of [`BrModule::validate`].
pub fn validate_br_module(m: &BrModule, window: usize) -> ValidationReport {
    m.validate(window)
}

/// Free-function form of [`BrModule::g_action`].
pub fn br_g_action(m: &BrModule, k: i64, v: &BrElement) -> BrElement {
    m.g_action(k, v)
}

/// Free-function form of [`BrModule::tensor`].
pub fn tensor_br(a: &BrModule, b: &BrModule) -> Result<BrModule> {
    a.tensor(b)
}
