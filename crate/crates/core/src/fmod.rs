//! The tensor construction `F(M, W) = M ⊗ W` of a `B_r`-module with an
//! (A,V)-module:
//!
//! ```text
//! d_m (v ⊗ w) = v ⊗ d_m w + (g(m) v) ⊗ x^m w
//! x^m (v ⊗ w) = v ⊗ x^m w
//! c   (v ⊗ w) = 0
//! ```
//!
//! where `g(m)` acts on `M` through the polynomial action of `B_r`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{BrElement, BrKey, BrModule};
use crate::av::{AModule, AvModule, Caps};
use crate::error::{Error, Result};
use crate::exact::{int, rank_of, LaurentVec, LinearElement, Rational};

/// Element of `M ⊗ W`, stored as `Σ_b e_b ⊗ w_b` over carrier basis keys
/// `b` with every `w_b` nonzero. Ordering is carrier key major, inner key
/// minor.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FElement<E> {
    parts: BTreeMap<BrKey, E>,
}

impl<E: LinearElement> FElement<E> {
    /// `e_key ⊗ w`
    pub fn pure(key: BrKey, w: E) -> Self {
        let mut out = Self::zero();
        out.add_part(key, w);
        out
    }

    /// `v ⊗ w` for an arbitrary carrier vector `v`.
    pub fn tensor(v: &BrElement, w: &E) -> Self {
        let mut out = Self::zero();
        for (key, c) in v.iter() {
            out.add_part(key.clone(), w.scaled(c));
        }
        out
    }

    pub fn parts(&self) -> impl Iterator<Item = (&BrKey, &E)> {
        self.parts.iter()
    }

    /// The inner component attached to a carrier basis vector.
    pub fn part(&self, key: &[u32]) -> E {
        self.parts.get(key).cloned().unwrap_or_else(E::zero)
    }

    pub(crate) fn add_part(&mut self, key: BrKey, w: E) {
        if w.is_zero() {
            return;
        }
        match self.parts.entry(key) {
            Entry::Occupied(mut e) => {
                let sum = e.get().plus(&w);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(e) => {
                e.insert(w);
            }
        }
    }

    fn map_inner(&self, f: impl Fn(&E) -> E) -> Self {
        let mut out = Self::zero();
        for (k, w) in &self.parts {
            out.add_part(k.clone(), f(w));
        }
        out
    }
}

impl<E: LinearElement> fmt::Display for FElement<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(k, w)| format!("{} (x) ({w})", crate::algebra::fmt_key(k)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<E: LinearElement> LinearElement for FElement<E> {
    type Key = (BrKey, E::Key);

    fn zero() -> Self {
        FElement {
            parts: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, w) in &other.parts {
            out.add_part(k.clone(), w.clone());
        }
        out
    }

    fn scaled(&self, c: &Rational) -> Self {
        self.map_inner(|w| w.scaled(c))
    }

    fn terms(&self) -> Vec<(Self::Key, Rational)> {
        self.parts
            .iter()
            .flat_map(|(b, w)| w.terms().into_iter().map(move |(k, c)| ((b.clone(), k), c)))
            .collect()
    }

    fn from_terms<I: IntoIterator<Item = (Self::Key, Rational)>>(terms: I) -> Self {
        let mut grouped: BTreeMap<BrKey, Vec<(E::Key, Rational)>> = BTreeMap::new();
        for ((b, k), c) in terms {
            grouped.entry(b).or_default().push((k, c));
        }
        let mut out = Self::zero();
        for (b, ts) in grouped {
            out.add_part(b, E::from_terms(ts));
        }
        out
    }
}

/// `F(M, W)` for a validated `B_r`-module `M` and an (A,V)-module `W`.
#[derive(Clone, PartialEq, Debug)]
pub struct FModule<W> {
    br: BrModule,
    inner: W,
}

impl<W: AvModule> FModule<W> {
    pub fn new(br: BrModule, inner: W) -> Result<Self> {
        if !br.is_validated() {
            return Err(Error::Unvalidated);
        }
        Ok(FModule { br, inner })
    }

    pub fn br(&self) -> &BrModule {
        &self.br
    }

    pub fn inner(&self) -> &W {
        &self.inner
    }
}

impl<W: AvModule> AvModule for FModule<W> {
    type Elem = FElement<W::Elem>;

    fn label(&self) -> String {
        format!("F({},{})", self.br.name(), self.inner.label())
    }

    fn d(&self, m: i64, e: &Self::Elem) -> Self::Elem {
        let mut out = FElement::zero();
        for (key, w) in e.parts() {
            out.add_part(key.clone(), self.inner.d(m, w));
            let gv = self.br.g_action(m, &BrElement::basis(key.clone()));
            if gv.is_zero() {
                continue;
            }
            let xw = self.inner.x(m, w);
            for (target, c) in gv.iter() {
                out.add_part(target.clone(), xw.scaled(c));
            }
        }
        out
    }

    fn x(&self, m: i64, e: &Self::Elem) -> Self::Elem {
        e.map_inner(|w| self.inner.x(m, w))
    }

    fn window_keys(&self, caps: &Caps) -> Vec<(BrKey, <W::Elem as LinearElement>::Key)> {
        let inner = self.inner.window_keys(caps);
        self.br
            .carrier()
            .window_keys(caps.carrier)
            .into_iter()
            .flat_map(|b| inner.iter().map(move |k| (b.clone(), k.clone())))
            .collect()
    }
}

pub fn f_d<W: AvModule>(f: &FModule<W>, m: i64, e: &FElement<W::Elem>) -> FElement<W::Elem> {
    f.d(m, e)
}

pub fn f_x<W: AvModule>(f: &FModule<W>, m: i64, e: &FElement<W::Elem>) -> FElement<W::Elem> {
    f.x(m, e)
}

pub fn f_c<W: AvModule>(f: &FModule<W>, e: &FElement<W::Elem>) -> FElement<W::Elem> {
    f.c(e)
}

/// `F(M_1, F(M_2, W)) → F(M_1 ⊗ M_2, W)`. The coordinate map is
/// [`reassociate`].
pub fn flatten<W: AvModule + Clone>(nested: &FModule<FModule<W>>) -> Result<FModule<W>> {
    let outer = nested.br();
    let inner = nested.inner();
    let product = outer.tensor(inner.br())?;
    FModule::new(product, inner.inner().clone())
}

/// `v_1 ⊗ (v_2 ⊗ w) ↦ (v_1 ⊗ v_2) ⊗ w`: concatenates carrier keys.
pub fn reassociate<E: LinearElement>(e: &FElement<FElement<E>>) -> FElement<E> {
    let mut out = FElement::zero();
    for (k1, inner) in e.parts() {
        for (k2, w) in inner.parts() {
            let mut key = k1.clone();
            key.extend_from_slice(k2);
            out.add_part(key, w.clone());
        }
    }
    out
}

/// Direct evaluation of `d_m (v ⊗ x^n) = ((n + α + βm) v + g(m) v) ⊗ x^{n+m}`
/// on `F(M, A(α, β))`, independent of the generic [`f_d`] path.
pub fn f_weight_action(f: &FModule<AModule>, m: i64, v: &BrElement, n: i64) -> FElement<LaurentVec> {
    let a = f.inner();
    let scalar = int(n) + a.alpha() + a.beta() * int(m);
    let image = v.scaled(&scalar).plus(&f.br().g_action(m, v));
    FElement::tensor(&image, &LaurentVec::monomial(int(1), n + m))
}

/// Whether every window basis vector is a `d_0`-eigenvector.
pub fn d0_diagonal_on_window<W: AvModule>(module: &W, caps: &Caps) -> bool {
    module.window_keys(caps).into_iter().all(|key| {
        let e = W::Elem::basis(key.clone());
        let img = module.d(0, &e);
        let eigen = img
            .terms()
            .into_iter()
            .find(|(k, _)| *k == key)
            .map_or_else(|| int(0), |(_, c)| c);
        img == e.scaled(&eigen)
    })
}

/// Whether `d_0 - a` is injective on the span of the window basis.
pub fn d0_shift_injective_on_window<W: AvModule>(module: &W, caps: &Caps, a: &Rational) -> bool {
    let basis = module.window_basis(caps);
    let images: Vec<W::Elem> = basis
        .iter()
        .map(|e| module.d(0, e).minus(&e.scaled(a)))
        .collect();
    rank_of(&images) == basis.len()
}
