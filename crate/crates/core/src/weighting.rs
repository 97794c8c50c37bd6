//! The weighting functor on `Ω(λ, β)` and on `F(M, Ω(λ, β))`.
//!
//! `𝔚(M) = ⊕_n M/I_n M ⊗ x^n` with `I_n` generated by `d_0 - n`. On `Ω` the
//! action of `d_0` is multiplication by `t`, so `I_n Ω = (t - n) ℚ[t]` and the
//! quotient map is evaluation at `t = n`. Classes are written `v_n`; the
//! rescaled classes `w_n = λ^n v_n` carry a `λ`-free action.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::algebra::{BrElement, BrKey, BrModule};
use crate::av::{AModule, AvModule, Caps, OmegaModule};
use crate::error::Result;
use crate::exact::{int, pow, LaurentVec, LinearElement, Poly, Rational, Span};
use crate::fmod::{f_weight_action, FElement, FModule};

/// Image of `f` in `Ω/I_n Ω`, as the coefficient of `v_n`. Computed as the
/// remainder of division by `t - n`.
pub fn weight_quotient_omega(f: &Poly, n: i64) -> Rational {
    f.div_rem_linear(&int(n)).1
}

/// Rank of the quotient map on `1, t, ..., t^degree`; always 1.
pub fn quotient_dimension(n: i64, degree: usize) -> usize {
    let mut span = Span::new(1);
    for k in 0..=degree {
        let r = weight_quotient_omega(&Poly::monomial(int(1), k), n);
        span.insert(vec![r]).expect("width 1");
    }
    span.rank()
}

/// Coefficient of `v_{n+m}` in `d_m v_n`, from the representative `1` of
/// `v_n`: apply `d_m`, then reduce modulo `I_{n+m}`.
pub fn weighted_action_omega(w: &OmegaModule, m: i64, n: i64) -> Rational {
    weight_quotient_omega(&w.d(m, &Poly::one()), n + m)
}

/// Coefficient of `w_{n+m}` in `d_m w_n` with `w_n = λ^n v_n`.
pub fn rescaled_action_omega(w: &OmegaModule, m: i64, n: i64) -> Rational {
    weighted_action_omega(w, m, n) * pow(w.lambda(), n) / pow(w.lambda(), n + m)
}

/// Coefficient of `w_{n+m}` in `x^m w_n`.
pub fn rescaled_x_omega(w: &OmegaModule, m: i64, n: i64) -> Rational {
    weight_quotient_omega(&w.x(m, &Poly::one()), n + m) * pow(w.lambda(), n) / pow(w.lambda(), n + m)
}

/// `d_m (v ⊗ w_n)` in `𝔚(F(M, Ω))`, written in the coordinates of
/// `F(M, A(0, 1 - β))`: the class of `v ⊗ f` at index `n` is `f(n) v ⊗ x^n`.
pub fn weight_f(f: &FModule<OmegaModule>, m: i64, n: i64, v: &BrElement) -> FElement<LaurentVec> {
    let lambda = f.inner().lambda();
    let image = f.d(m, &FElement::tensor(v, &Poly::one()));
    let rescale = pow(lambda, n) / pow(lambda, n + m);
    let mut out = FElement::zero();
    for (key, p) in image.parts() {
        let c = weight_quotient_omega(p, n + m) * &rescale;
        out = out.plus(&FElement::pure(key.clone(), LaurentVec::monomial(c, n + m)));
    }
    out
}

/// The module `A(0, 1 - β)` the weighting functor is expected to produce.
pub fn expected_image(w: &OmegaModule) -> AModule {
    AModule::new(int(0), int(1) - w.beta())
}

/// Rescaled action table of `𝔚(Ω(λ, β))`: `(m, n) ↦` coefficient of
/// `w_{n+m}` in `d_m w_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightTable {
    pub window: i64,
    pub entries: BTreeMap<(i64, i64), Rational>,
}

impl WeightTable {
    pub fn of_omega(w: &OmegaModule, window: i64) -> Self {
        Self::build(window, |m, n| rescaled_action_omega(w, m, n))
    }

    pub fn of_a(a: &AModule, window: i64) -> Self {
        Self::build(window, |m, n| a.coefficient(m, n))
    }

    fn build(window: i64, coeff: impl Fn(i64, i64) -> Rational + Sync) -> Self {
        let pairs: Vec<(i64, i64)> = (-window..=window)
            .flat_map(|m| (-window..=window).map(move |n| (m, n)))
            .collect();
        let entries = pairs.into_par_iter().map(|(m, n)| ((m, n), coeff(m, n))).collect();
        WeightTable { window, entries }
    }

    /// First `(m, n)` at which the two tables disagree.
    pub fn first_difference(&self, other: &WeightTable) -> Option<(i64, i64)> {
        self.entries
            .iter()
            .find(|(k, v)| other.entries.get(k) != Some(v))
            .map(|(k, _)| *k)
    }
}

impl fmt::Display for WeightTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((m, n), c) in &self.entries {
            writeln!(f, "d_{m} w_{n} = {c} w_{}", n + m)?;
        }
        Ok(())
    }
}

/// Rescaled action table of `𝔚(F(M, Ω(λ, β)))` on carrier basis vectors.
#[derive(Clone, PartialEq, Debug)]
pub struct FWeightTable {
    pub window: i64,
    pub carrier_cap: usize,
    pub entries: BTreeMap<(i64, i64, BrKey), FElement<LaurentVec>>,
}

impl FWeightTable {
    pub fn of_f_omega(f: &FModule<OmegaModule>, window: i64, carrier_cap: usize) -> Self {
        Self::build(f.br(), window, carrier_cap, |m, n, v| weight_f(f, m, n, v))
    }

    /// Table of `F(M, A(α, β))` from the direct weight-module formula.
    pub fn of_f_a(f: &FModule<AModule>, window: i64, carrier_cap: usize) -> Self {
        Self::build(f.br(), window, carrier_cap, |m, n, v| f_weight_action(f, m, v, n))
    }

    fn build(
        br: &BrModule,
        window: i64,
        carrier_cap: usize,
        act: impl Fn(i64, i64, &BrElement) -> FElement<LaurentVec> + Sync,
    ) -> Self {
        let mut cells = Vec::new();
        for m in -window..=window {
            for n in -window..=window {
                for key in br.carrier().window_keys(carrier_cap) {
                    cells.push((m, n, key));
                }
            }
        }
        let entries = cells
            .into_par_iter()
            .map(|(m, n, key)| {
                let v = BrElement::basis(key.clone());
                ((m, n, key), act(m, n, &v))
            })
            .collect();
        FWeightTable {
            window,
            carrier_cap,
            entries,
        }
    }

    pub fn first_difference(&self, other: &FWeightTable) -> Option<(i64, i64, BrKey)> {
        self.entries
            .iter()
            .find(|(k, v)| other.entries.get(k) != Some(v))
            .map(|(k, _)| k.clone())
    }
}

impl fmt::Display for FWeightTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((m, n, key), e) in &self.entries {
            writeln!(f, "d_{m} ({} (x) w_{n}) = {e}", crate::algebra::fmt_key(key))?;
        }
        Ok(())
    }
}

/// Outcome of comparing rescaled weighting tables across `λ` values.
#[derive(Clone, PartialEq, Debug)]
pub struct InvarianceReport {
    pub module: String,
    pub beta: Rational,
    pub lambdas: Vec<Rational>,
    /// `(λ, m, n, key)` where the table first departs from the first `λ`.
    pub first_difference: Option<(Rational, i64, i64, BrKey)>,
}

impl InvarianceReport {
    pub fn identical(&self) -> bool {
        self.first_difference.is_none()
    }
}

pub fn lambda_invariance_report(
    br: &BrModule,
    beta: &Rational,
    lambdas: &[Rational],
    window: i64,
    carrier_cap: usize,
) -> Result<InvarianceReport> {
    let tables = lambdas
        .iter()
        .map(|l| {
            let f = FModule::new(br.clone(), OmegaModule::new(l.clone(), beta.clone())?)?;
            Ok(FWeightTable::of_f_omega(&f, window, carrier_cap))
        })
        .collect::<Result<Vec<_>>>()?;
    let first_difference = tables.split_first().and_then(|(base, rest)| {
        rest.iter().zip(&lambdas[1..]).find_map(|(t, l)| {
            base.first_difference(t).map(|(m, n, k)| (l.clone(), m, n, k))
        })
    });
    Ok(InvarianceReport {
        module: br.name().to_string(),
        beta: beta.clone(),
        lambdas: lambdas.to_vec(),
        first_difference,
    })
}

/// `𝔚(Ω(λ, β))` as an (A,V)-module on the rescaled basis `w_n`, with both
/// actions computed through the quotient maps.
#[derive(Clone, PartialEq, Debug)]
pub struct WeightedOmega {
    source: OmegaModule,
}

impl WeightedOmega {
    pub fn new(source: OmegaModule) -> Self {
        WeightedOmega { source }
    }

    pub fn source(&self) -> &OmegaModule {
        &self.source
    }
}

impl AvModule for WeightedOmega {
    type Elem = LaurentVec;

    fn label(&self) -> String {
        format!("W({})", self.source.label())
    }

    fn d(&self, m: i64, v: &LaurentVec) -> LaurentVec {
        LaurentVec::from_terms(
            v.iter()
                .map(|(n, c)| (n + m, c * rescaled_action_omega(&self.source, m, n))),
        )
    }

    fn x(&self, m: i64, v: &LaurentVec) -> LaurentVec {
        LaurentVec::from_terms(v.iter().map(|(n, c)| (n + m, c * rescaled_x_omega(&self.source, m, n))))
    }

    fn window_keys(&self, caps: &Caps) -> Vec<i64> {
        let n = caps.inner as i64;
        (-n..=n).collect()
    }
}
