//! Runtime-typed modules and elements, for modules assembled from text.

use std::fmt;

use crate::algebra::BrKey;
use crate::av::{AModule, AvModule, Caps, OmegaModule};
use crate::error::{Error, Result};
use crate::exact::{LaurentVec, LinearElement, Poly, Rational};
use crate::fmod::{FElement, FModule};
use crate::weighting::WeightedOmega;

#[derive(Clone, PartialEq, Debug)]
pub enum DynModule {
    Omega(OmegaModule),
    A(AModule),
    Weighted(WeightedOmega),
    F(Box<FModule<DynModule>>),
}

/// Element of a [`DynModule`]. Zero is kind-less so that it can be produced
/// without knowing the module.
#[derive(Clone, PartialEq, Debug)]
pub enum DynElem {
    Zero,
    Poly(Poly),
    Laurent(LaurentVec),
    F(FElement<DynElem>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum DynKey {
    Poly(usize),
    Laurent(i64),
    F(BrKey, Box<DynKey>),
}

impl DynElem {
    fn norm(self) -> Self {
        let zero = match &self {
            DynElem::Zero => true,
            DynElem::Poly(p) => p.is_zero(),
            DynElem::Laurent(v) => v.is_zero(),
            DynElem::F(e) => e.is_zero(),
        };
        if zero {
            DynElem::Zero
        } else {
            self
        }
    }
}

impl From<Poly> for DynElem {
    fn from(p: Poly) -> Self {
        DynElem::Poly(p).norm()
    }
}

impl From<LaurentVec> for DynElem {
    fn from(v: LaurentVec) -> Self {
        DynElem::Laurent(v).norm()
    }
}

impl From<FElement<DynElem>> for DynElem {
    fn from(e: FElement<DynElem>) -> Self {
        DynElem::F(e).norm()
    }
}

impl fmt::Display for DynElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynElem::Zero => write!(f, "0"),
            DynElem::Poly(p) => write!(f, "{p}"),
            DynElem::Laurent(v) => write!(f, "{v}"),
            DynElem::F(e) => write!(f, "{e}"),
        }
    }
}

impl LinearElement for DynElem {
    type Key = DynKey;

    fn zero() -> Self {
        DynElem::Zero
    }

    fn is_zero(&self) -> bool {
        matches!(self, DynElem::Zero)
    }

    fn plus(&self, other: &Self) -> Self {
        match (self, other) {
            (DynElem::Zero, x) | (x, DynElem::Zero) => x.clone(),
            (DynElem::Poly(a), DynElem::Poly(b)) => (a + b).into(),
            (DynElem::Laurent(a), DynElem::Laurent(b)) => a.plus(b).into(),
            (DynElem::F(a), DynElem::F(b)) => a.plus(b).into(),
            (a, b) => panic!("adding elements of different modules: {a} and {b}"),
        }
    }

    fn scaled(&self, c: &Rational) -> Self {
        match self {
            DynElem::Zero => DynElem::Zero,
            DynElem::Poly(p) => p.scale(c).into(),
            DynElem::Laurent(v) => v.scaled(c).into(),
            DynElem::F(e) => e.scaled(c).into(),
        }
    }

    fn terms(&self) -> Vec<(DynKey, Rational)> {
        match self {
            DynElem::Zero => Vec::new(),
            DynElem::Poly(p) => p.terms().into_iter().map(|(k, c)| (DynKey::Poly(k), c)).collect(),
            DynElem::Laurent(v) => v.terms().into_iter().map(|(k, c)| (DynKey::Laurent(k), c)).collect(),
            DynElem::F(e) => e
                .terms()
                .into_iter()
                .map(|((b, k), c)| (DynKey::F(b, Box::new(k)), c))
                .collect(),
        }
    }

    fn from_terms<I: IntoIterator<Item = (DynKey, Rational)>>(terms: I) -> Self {
        let terms: Vec<(DynKey, Rational)> = terms.into_iter().collect();
        match terms.first().map(|(k, _)| k) {
            None => DynElem::Zero,
            Some(DynKey::Poly(_)) => Poly::from_terms(terms.into_iter().map(|(k, c)| match k {
                DynKey::Poly(k) => (k, c),
                other => panic!("mixed keys: {other:?}"),
            }))
            .into(),
            Some(DynKey::Laurent(_)) => LaurentVec::from_terms(terms.into_iter().map(|(k, c)| match k {
                DynKey::Laurent(k) => (k, c),
                other => panic!("mixed keys: {other:?}"),
            }))
            .into(),
            Some(DynKey::F(..)) => FElement::from_terms(terms.into_iter().map(|(k, c)| match k {
                DynKey::F(b, k) => ((b, *k), c),
                other => panic!("mixed keys: {other:?}"),
            }))
            .into(),
        }
    }
}

impl DynModule {
    pub fn omega(lambda: Rational, beta: Rational) -> Result<Self> {
        Ok(DynModule::Omega(OmegaModule::new(lambda, beta)?))
    }

    pub fn a(alpha: Rational, beta: Rational) -> Self {
        DynModule::A(AModule::new(alpha, beta))
    }

    pub fn f(br: crate::algebra::BrModule, inner: DynModule) -> Result<Self> {
        Ok(DynModule::F(Box::new(FModule::new(br, inner)?)))
    }

    /// Whether `e` has the shape of an element of this module.
    pub fn accepts(&self, e: &DynElem) -> bool {
        match (self, e) {
            (_, DynElem::Zero) => true,
            (DynModule::Omega(_), DynElem::Poly(_)) => true,
            (DynModule::A(_) | DynModule::Weighted(_), DynElem::Laurent(_)) => true,
            (DynModule::F(f), DynElem::F(e)) => {
                let factors = f.br().carrier().factor_count();
                e.parts().all(|(k, w)| k.len() == factors && f.inner().accepts(w))
            }
            _ => false,
        }
    }

    /// `F(M_1, F(M_2, W))` as a typed nested module, for flattening.
    pub fn as_nested(&self) -> Result<FModule<FModule<DynModule>>> {
        if let DynModule::F(outer) = self {
            if let DynModule::F(inner) = outer.inner() {
                return FModule::new(outer.br().clone(), (**inner).clone());
            }
        }
        Err(Error::Unsupported(format!("{} is not of the form F(M1, F(M2, W))", self.label())))
    }
}

impl AvModule for DynModule {
    type Elem = DynElem;

    fn label(&self) -> String {
        match self {
            DynModule::Omega(w) => w.label(),
            DynModule::A(a) => a.label(),
            DynModule::Weighted(w) => w.label(),
            DynModule::F(f) => f.label(),
        }
    }

    fn d(&self, m: i64, v: &DynElem) -> DynElem {
        match (self, v) {
            (_, DynElem::Zero) => DynElem::Zero,
            (DynModule::Omega(w), DynElem::Poly(p)) => w.d(m, p).into(),
            (DynModule::A(a), DynElem::Laurent(e)) => a.d(m, e).into(),
            (DynModule::Weighted(w), DynElem::Laurent(e)) => w.d(m, e).into(),
            (DynModule::F(f), DynElem::F(e)) => f.d(m, e).into(),
            (module, e) => panic!("{e} is not an element of {}", module.label()),
        }
    }

    fn x(&self, m: i64, v: &DynElem) -> DynElem {
        match (self, v) {
            (_, DynElem::Zero) => DynElem::Zero,
            (DynModule::Omega(w), DynElem::Poly(p)) => w.x(m, p).into(),
            (DynModule::A(a), DynElem::Laurent(e)) => a.x(m, e).into(),
            (DynModule::Weighted(w), DynElem::Laurent(e)) => w.x(m, e).into(),
            (DynModule::F(f), DynElem::F(e)) => f.x(m, e).into(),
            (module, e) => panic!("{e} is not an element of {}", module.label()),
        }
    }

    fn window_keys(&self, caps: &Caps) -> Vec<DynKey> {
        match self {
            DynModule::Omega(w) => w.window_keys(caps).into_iter().map(DynKey::Poly).collect(),
            DynModule::A(a) => a.window_keys(caps).into_iter().map(DynKey::Laurent).collect(),
            DynModule::Weighted(w) => w.window_keys(caps).into_iter().map(DynKey::Laurent).collect(),
            DynModule::F(f) => f
                .window_keys(caps)
                .into_iter()
                .map(|(b, k)| DynKey::F(b, Box::new(k)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_mgamma, make_shift_module_b1};
    use crate::exact::{int, rat};

    #[test]
    fn dynamic_matches_typed() {
        let typed = FModule::new(make_shift_module_b1(), OmegaModule::new(int(2), rat(1, 2)).unwrap()).unwrap();
        let dynm = DynModule::f(make_shift_module_b1(), DynModule::omega(int(2), rat(1, 2)).unwrap()).unwrap();
        let caps = Caps::uniform(2);
        let typed_basis = typed.window_basis(&caps);
        let dyn_basis = dynm.window_basis(&caps);
        assert_eq!(typed_basis.len(), dyn_basis.len());
        for (t, d) in typed_basis.iter().zip(&dyn_basis) {
            for m in -2..=2 {
                assert_eq!(typed.d(m, t).to_string(), dynm.d(m, d).to_string());
                assert_eq!(typed.x(m, t).to_string(), dynm.x(m, d).to_string());
            }
        }
    }

    #[test]
    fn zero_is_canonical() {
        let p: DynElem = Poly::t().into();
        assert_eq!(p.minus(&p), DynElem::Zero);
        assert_eq!(DynElem::from_terms(p.terms()), p);
        assert_eq!(DynElem::from(Poly::zero()), DynElem::Zero);
        let a = DynModule::a(int(0), int(0));
        assert_eq!(a.d(3, &LaurentVec::monomial(int(1), 0).into()), DynElem::Zero);
    }

    #[test]
    fn accepts_checks_shape() {
        let m = DynModule::f(make_mgamma(int(1), 1).unwrap(), DynModule::a(int(0), int(1))).unwrap();
        let good = DynElem::F(FElement::pure(vec![0], LaurentVec::monomial(int(1), 2).into()));
        let bad = DynElem::F(FElement::pure(vec![0, 0], LaurentVec::monomial(int(1), 2).into()));
        assert!(m.accepts(&good));
        assert!(!m.accepts(&bad));
        assert!(!m.accepts(&Poly::t().into()));
        assert!(m.as_nested().is_err());
    }
}
