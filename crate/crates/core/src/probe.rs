//! Truncated submodule generation over a finite basis window.
//!
//! The span of a seed is grown by applying windowed operators. Only images
//! that lie exactly inside the window are inserted, so a full-window verdict
//! is never produced by truncation. A proper-subspace verdict additionally
//! requires the final span to be closed under every windowed operator with
//! out-of-window terms projected away.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::av::{h_poly, AvModule, Caps, OmegaModule};
use crate::dynamic::{DynElem, DynModule};
use crate::error::{Error, Result};
use crate::exact::{int, interpolate, top_coefficient_weights, LaurentVec, LinearElement, Poly, Rational, Span};
use crate::fmod::{FElement, FModule};

/// Which generators are applied during a probe.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OperatorSet {
    /// `d_m` only: submodules for the Virasoro algebra.
    Virasoro,
    /// `d_m` and `x^m`: submodules for the (A,V)-structure.
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ProbeConfig {
    /// Operators `d_m` (and `x^m`) with `|m| ≤ modes`.
    pub modes: i64,
    pub caps: Caps,
    pub operators: OperatorSet,
    /// Upper bound on generation rounds.
    pub max_rounds: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            modes: 4,
            caps: Caps::new(5, 3),
            operators: OperatorSet::Virasoro,
            max_rounds: 64,
        }
    }
}

impl ProbeConfig {
    pub fn with_caps(mut self, inner: usize, carrier: usize) -> Self {
        self.caps = Caps::new(inner, carrier);
        self
    }

    pub fn with_modes(mut self, modes: i64) -> Self {
        self.modes = modes;
        self
    }

    pub fn with_operators(mut self, operators: OperatorSet) -> Self {
        self.operators = operators;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.modes < 1 || self.caps.inner < 1 || self.caps.carrier < 1 || self.max_rounds < 1 {
            return Err(Error::EmptyWindow);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Op {
    D(i64),
    X(i64),
}

impl Op {
    fn apply<M: AvModule>(self, module: &M, v: &M::Elem) -> M::Elem {
        match self {
            Op::D(m) => module.d(m, v),
            Op::X(m) => module.x(m, v),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum ProbeVerdict<E> {
    /// Canonical (reduced echelon) basis of a proper subspace closed under
    /// every windowed operator.
    ProperInvariantSubspaceFound { basis: Vec<E>, window_dim: usize },
    FullWindowReached { window_dim: usize },
    /// Span dimension after each round.
    Inconclusive { profile: Vec<usize>, window_dim: usize },
}

impl<E> ProbeVerdict<E> {
    pub fn is_proper(&self) -> bool {
        matches!(self, ProbeVerdict::ProperInvariantSubspaceFound { .. })
    }

    pub fn is_full(&self) -> bool {
        matches!(self, ProbeVerdict::FullWindowReached { .. })
    }

    pub fn summary(&self) -> String {
        match self {
            ProbeVerdict::ProperInvariantSubspaceFound { basis, window_dim } => {
                format!("PROPER SUBSPACE (dim {} of {window_dim})", basis.len())
            }
            ProbeVerdict::FullWindowReached { window_dim } => format!("FULL WINDOW (dim {window_dim})"),
            ProbeVerdict::Inconclusive { profile, window_dim } => {
                let dims: Vec<String> = profile.iter().map(|d| d.to_string()).collect();
                format!("INCONCLUSIVE (dims {} of {window_dim})", dims.join(","))
            }
        }
    }
}

/// Coordinates of elements relative to a fixed window basis.
struct Window<K> {
    keys: Vec<K>,
    index: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Window<K> {
    fn new(keys: Vec<K>) -> Self {
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        Window { keys, index }
    }

    fn dim(&self) -> usize {
        self.keys.len()
    }

    /// In-window coordinates and the out-of-window remainder.
    fn split<E: LinearElement<Key = K>>(&self, e: &E) -> (Vec<Rational>, Vec<(K, Rational)>) {
        let mut coords = vec![int(0); self.dim()];
        let mut outside = Vec::new();
        for (k, c) in e.terms() {
            match self.index.get(&k) {
                Some(&i) => coords[i] = c,
                None => outside.push((k, c)),
            }
        }
        (coords, outside)
    }

    fn element<E: LinearElement<Key = K>>(&self, coords: &[Rational]) -> E {
        E::from_terms(
            self.keys
                .iter()
                .zip(coords)
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(k, c)| (k.clone(), c.clone())),
        )
    }
}

/// An image with its in-window coordinates and out-of-window terms.
type SplitImage<K> = (Vec<Rational>, Vec<(K, Rational)>);

/// All combinations of `images` that stay inside the window, as window
/// coordinates. Eliminates the out-of-window columns first.
fn exact_images<K: Ord + Clone>(window: &Window<K>, images: &[SplitImage<K>]) -> Vec<Vec<Rational>> {
    let mut outer: BTreeMap<K, usize> = BTreeMap::new();
    for (_, out) in images {
        for (k, _) in out {
            let next = outer.len();
            outer.entry(k.clone()).or_insert(next);
        }
    }
    let width = outer.len();
    let mut span = Span::new(width + window.dim());
    for (inside, out) in images {
        let mut row = vec![int(0); width];
        for (k, c) in out {
            row[outer[k]] = c.clone();
        }
        row.extend(inside.iter().cloned());
        span.insert(row).expect("consistent width");
    }
    span.basis()
        .filter(|row| row[..width].iter().all(num_traits::Zero::is_zero))
        .map(|row| row[width..].to_vec())
        .collect()
}

fn operators(cfg: &ProbeConfig) -> Vec<Op> {
    let mut ops: Vec<Op> = (-cfg.modes..=cfg.modes).map(Op::D).collect();
    if cfg.operators == OperatorSet::Full {
        ops.extend((-cfg.modes..=cfg.modes).map(Op::X));
    }
    ops
}

/// Grows the span of `seed` under the windowed operators and classifies it.
pub fn generate<M: AvModule>(module: &M, seed: &M::Elem, cfg: &ProbeConfig) -> Result<ProbeVerdict<M::Elem>> {
    let grown = closure_span(module, seed, cfg)?;
    let window_dim = grown.window.dim();
    if grown.span.is_full() {
        return Ok(ProbeVerdict::FullWindowReached { window_dim });
    }
    let basis: Vec<M::Elem> = grown.span.basis().map(|row| grown.window.element(row)).collect();
    if grown.converged && projected_closed(module, &grown.span, &grown.window, &basis, cfg) {
        return Ok(ProbeVerdict::ProperInvariantSubspaceFound { basis, window_dim });
    }
    Ok(ProbeVerdict::Inconclusive {
        profile: grown.profile,
        window_dim,
    })
}

struct Grown<K> {
    window: Window<K>,
    span: Span,
    profile: Vec<usize>,
    converged: bool,
}

fn closure_span<M: AvModule>(
    module: &M,
    seed: &M::Elem,
    cfg: &ProbeConfig,
) -> Result<Grown<<M::Elem as LinearElement>::Key>> {
    cfg.validate()?;
    if seed.is_zero() {
        return Err(Error::ZeroSeed);
    }
    let window = Window::new(module.window_keys(&cfg.caps));
    let (coords, outside) = window.split(seed);
    if !outside.is_empty() {
        return Err(Error::SeedOutsideWindow);
    }
    let mut span = Span::new(window.dim());
    span.insert(coords)?;
    let ops = operators(cfg);
    let mut profile = vec![span.rank()];
    let mut converged = false;
    for _ in 0..cfg.max_rounds {
        let basis: Vec<M::Elem> = span.basis().map(|row| window.element(row)).collect();
        let mut grew = false;
        for &op in &ops {
            let images: Vec<_> = basis.iter().map(|b| window.split(&op.apply(module, b))).collect();
            for v in exact_images(&window, &images) {
                grew |= span.insert(v)?;
            }
        }
        profile.push(span.rank());
        if !grew || span.is_full() {
            converged = true;
            break;
        }
    }
    Ok(Grown {
        window,
        span,
        profile,
        converged,
    })
}

fn projected_closed<M: AvModule>(
    module: &M,
    span: &Span,
    window: &Window<<M::Elem as LinearElement>::Key>,
    basis: &[M::Elem],
    cfg: &ProbeConfig,
) -> bool {
    operators(cfg).into_iter().all(|op| {
        basis.iter().all(|b| {
            let (coords, _) = window.split(&op.apply(module, b));
            span.contains(&coords).unwrap_or(false)
        })
    })
}

/// Whether `target` lies in the span generated from `seed` (exact images
/// only, so membership is never an artifact of truncation).
pub fn in_closure<M: AvModule>(module: &M, seed: &M::Elem, target: &M::Elem, cfg: &ProbeConfig) -> Result<bool> {
    let grown = closure_span(module, seed, cfg)?;
    let (coords, outside) = grown.window.split(target);
    Ok(outside.is_empty() && grown.span.contains(&coords)?)
}

/// Inner seeds for sweeps over `Ω`: `h_0^n` and `h_{-1}^n` for `n ≤ 2`.
pub fn omega_sweep_seeds() -> Vec<Poly> {
    let mut seeds: Vec<Poly> = (0..=2).map(|n| h_poly(0, n)).collect();
    seeds.extend((1..=2).map(|n| h_poly(-1, n)));
    seeds
}

/// Inner seeds for sweeps over `A(α, β)`: `x^n` for `|n| ≤ 2`.
pub fn laurent_sweep_seeds() -> Vec<LaurentVec> {
    (-2..=2).map(|n| LaurentVec::monomial(int(1), n)).collect()
}

/// Pure tensors over carrier basis vectors of degree at most 2.
pub fn f_sweep_seeds<W: AvModule>(f: &FModule<W>, inner: &[W::Elem]) -> Vec<FElement<W::Elem>> {
    f.br()
        .carrier()
        .window_keys(2)
        .into_iter()
        .flat_map(|k| inner.iter().map(move |w| FElement::pure(k.clone(), w.clone())))
        .collect()
}

/// Default sweep seeds for a runtime-typed module, by the shape of its
/// innermost space.
pub fn dyn_sweep_seeds(module: &DynModule) -> Vec<DynElem> {
    match module {
        DynModule::Omega(_) => omega_sweep_seeds().into_iter().map(DynElem::from).collect(),
        DynModule::A(_) | DynModule::Weighted(_) => laurent_sweep_seeds().into_iter().map(DynElem::from).collect(),
        DynModule::F(f) => f_sweep_seeds(f, &dyn_sweep_seeds(f.inner()))
            .into_iter()
            .map(DynElem::from)
            .collect(),
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum SweepVerdict<E> {
    /// Some seed generates a certified proper invariant subspace.
    Reducible { seed: E, basis: Vec<E>, window_dim: usize },
    /// Every seed in the sweep reaches the full window.
    IrreducibleEvidence { seeds: usize },
    Inconclusive { seed: E, profile: Vec<usize> },
}

impl<E> SweepVerdict<E> {
    pub fn is_reducible(&self) -> bool {
        matches!(self, SweepVerdict::Reducible { .. })
    }

    pub fn is_irreducible_evidence(&self) -> bool {
        matches!(self, SweepVerdict::IrreducibleEvidence { .. })
    }
}

/// Runs the probe from every seed; a proper subspace from any seed wins.
pub fn sweep<M: AvModule>(module: &M, seeds: &[M::Elem], cfg: &ProbeConfig) -> Result<SweepVerdict<M::Elem>> {
    let mut first_open = None;
    for seed in seeds {
        match generate(module, seed, cfg)? {
            ProbeVerdict::ProperInvariantSubspaceFound { basis, window_dim } => {
                return Ok(SweepVerdict::Reducible {
                    seed: seed.clone(),
                    basis,
                    window_dim,
                })
            }
            ProbeVerdict::FullWindowReached { .. } => {}
            ProbeVerdict::Inconclusive { profile, .. } => {
                first_open.get_or_insert((seed.clone(), profile));
            }
        }
    }
    Ok(match first_open {
        Some((seed, profile)) => SweepVerdict::Inconclusive { seed, profile },
        None => SweepVerdict::IrreducibleEvidence { seeds: seeds.len() },
    })
}

/// Reducibility of `F(M_γ, Ω(λ, β))` from the default seed sweep.
#[allow(non_snake_case)]
pub fn reducibility_Mgamma(
    gamma: &Rational,
    lambda: &Rational,
    beta: &Rational,
    cfg: &ProbeConfig,
) -> Result<SweepVerdict<FElement<Poly>>> {
    let br = crate::algebra::make_mgamma(gamma.clone(), 1)?;
    let f = FModule::new(br, OmegaModule::new(lambda.clone(), beta.clone())?)?;
    sweep(&f, &f_sweep_seeds(&f, &omega_sweep_seeds()), cfg)
}

/// Evaluates `d_k d_{m-k} u` at each sample `k` (in parallel).
fn double_action_samples<W>(f: &FModule<W>, u: &FElement<W::Elem>, m: i64, ks: &[i64]) -> Vec<FElement<W::Elem>>
where
    W: AvModule + Sync,
    W::Elem: Send + Sync,
{
    ks.par_iter().map(|&k| f.d(k, &f.d(m - k, u))).collect()
}

/// Coefficient of `s^degree` in the coordinate-wise interpolant through
/// `(nodes, values)`. Extra nodes beyond `degree + 1` must agree with a
/// polynomial of that degree.
fn coefficient_in_parameter<E: LinearElement>(nodes: &[i64], values: &[E], degree: usize) -> Result<E> {
    let qs: Vec<Rational> = nodes.iter().map(|&k| int(k)).collect();
    let mut coords: BTreeMap<E::Key, Vec<Rational>> = BTreeMap::new();
    for (s, v) in values.iter().enumerate() {
        for (key, c) in v.terms() {
            coords.entry(key).or_insert_with(|| vec![int(0); values.len()])[s] = c;
        }
    }
    let weights = top_coefficient_weights(&qs, degree)?;
    let mut out = Vec::new();
    for (key, ys) in coords {
        let p = interpolate(&qs, &ys)?;
        if let Some(d) = p.degree() {
            if d > degree {
                return Err(Error::DegreeExceeded(d));
            }
        }
        let c: Rational = weights.iter().zip(&ys).map(|(w, y)| w * y).sum();
        debug_assert_eq!(c, p.coeff(degree));
        out.push((key, c));
    }
    Ok(E::from_terms(out))
}

/// Coefficient of `k^{2r+2}` in `d_k d_{m-k} u`, as a polynomial in `k`
/// interpolated from the samples. Requires `r ≥ 1`; for `r = 0` the top
/// coefficient mixes in terms that do not involve `d̄_r`.
///
/// For `u = Σ_n v_n ⊗ h_0^n` in `F(M, Ω(λ, β))` the result is
/// `λ^m c_r Σ_n (d̄_r² v_n) ⊗ h_m^n` with `c_r = (-1)^{r+1} / ((r+1)!)²`.
pub fn claim1_extract<W>(f: &FModule<W>, u: &FElement<W::Elem>, m: i64, k_samples: &[i64]) -> Result<FElement<W::Elem>>
where
    W: AvModule + Sync,
    W::Elem: Send + Sync,
{
    let r = f.br().rank();
    if r == 0 {
        return Err(Error::Unsupported("coefficient extraction needs rank at least 1".into()));
    }
    let degree = 2 * r + 2;
    if k_samples.len() < degree + 1 {
        return Err(Error::InsufficientSamples {
            need: degree + 1,
            got: k_samples.len(),
        });
    }
    let values = double_action_samples(f, u, m, k_samples);
    coefficient_in_parameter(k_samples, &values, degree)
}

/// Coefficient of `m^l` in the family `m ↦ u(m)`, required to have the form
/// `w ⊗ 1`.
pub fn claim2_leading(family: &[(i64, FElement<Poly>)], l: usize) -> Result<FElement<Poly>> {
    if family.len() < l + 1 {
        return Err(Error::InsufficientSamples {
            need: l + 1,
            got: family.len(),
        });
    }
    let nodes: Vec<i64> = family.iter().map(|(m, _)| *m).collect();
    let values: Vec<FElement<Poly>> = family.iter().map(|(_, u)| u.clone()).collect();
    let lead = coefficient_in_parameter(&nodes, &values, l)?;
    if lead.parts().any(|(_, p)| !p.is_constant()) {
        return Err(Error::Unsupported(format!("leading coefficient {lead} is not of the form w (x) 1")));
    }
    Ok(lead)
}

#[cfg(test)]
mod tests;
