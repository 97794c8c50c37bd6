//! Text forms of modules and elements.
//!
//! Module expressions:
//!
//! ```text
//! Omega(λ,β)  A(α,β)  W(Omega(λ,β))  F(<B_r module>, <module>)  <name>
//! Mgamma(γ) Mgamma(γ,r)  shift shift(r)  adjoint(r)  density(r,a,γ)
//! broken_fixture broken_fixture(γ)  mixed_fixture  tensor(M1,M2)  <name>
//! ```
//!
//! Elements are written in the same form they are printed: polynomials in
//! `t` for `Omega`, sums of `c x^n` for `A`, and sums of `c v[i,..] (x) (w)`
//! for `F`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{
    broken_fixture, density_module, make_mgamma, make_shift_module, make_shift_module_b1, mixed_fixture, BrAlgebra,
    BrKey, BrModule, Carrier,
};
use crate::av::{AModule, HBasisCoords, OmegaModule};
use crate::dynamic::{DynElem, DynModule};
use crate::error::{Error, Result};
use crate::exact::{int, parse_rational, LaurentVec, LinearElement, Poly, Rational};
use crate::fmod::FElement;
use crate::weighting::WeightedOmega;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn normalize(s: &str) -> String {
    s.replace('−', "-").replace('⊗', "(x)").trim().to_string()
}

/// `head(arg, arg, ...)` split at top-level commas; a bare word has no args.
fn split_call(s: &str) -> Result<(String, Vec<String>)> {
    let s = s.trim();
    let Some(open) = s.find('(') else {
        return Ok((s.to_string(), Vec::new()));
    };
    if !s.ends_with(')') {
        return Err(parse_err(format!("unbalanced parentheses in `{s}`")));
    }
    let head = s[..open].trim().to_string();
    let body = &s[open + 1..s.len() - 1];
    let mut args = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in body.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(parse_err(format!("unbalanced parentheses in `{s}`")));
        }
        if ch == ',' && depth == 0 {
            args.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if depth != 0 {
        return Err(parse_err(format!("unbalanced parentheses in `{s}`")));
    }
    args.push(cur.trim().to_string());
    Ok((head, args))
}

fn arity(head: &str, args: &[String], allowed: &[usize]) -> Result<()> {
    if allowed.contains(&args.len()) {
        Ok(())
    } else {
        Err(parse_err(format!("{head} takes {allowed:?} arguments, got {}", args.len())))
    }
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| parse_err(format!("expected a nonnegative integer, got `{s}`")))
}

/// Named modules available to expressions, in addition to the built-ins.
#[derive(Clone, Default, Debug)]
pub struct Registry {
    br: BTreeMap<String, BrModule>,
    av: BTreeMap<String, DynModule>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_br(&mut self, name: impl Into<String>, m: BrModule) {
        self.br.insert(name.into(), m);
    }

    pub fn add_module(&mut self, name: impl Into<String>, m: DynModule) {
        self.av.insert(name.into(), m);
    }

    pub fn br_names(&self) -> impl Iterator<Item = &String> {
        self.br.keys()
    }

    /// A `B_r`-module expression.
    pub fn parse_br(&self, expr: &str) -> Result<BrModule> {
        let expr = normalize(expr);
        if let Some(m) = self.br.get(&expr) {
            return Ok(m.clone());
        }
        let (head, args) = split_call(&expr)?;
        let q = |i: usize| parse_rational(&args[i]);
        match head.as_str() {
            "Mgamma" | "M" => {
                arity(&head, &args, &[1, 2])?;
                let r = if args.len() == 2 { parse_usize(&args[1])? } else { 1 };
                make_mgamma(q(0)?, r)
            }
            "shift" => {
                if args.is_empty() {
                    return Ok(make_shift_module_b1());
                }
                arity(&head, &args, &[1])?;
                make_shift_module(parse_usize(&args[0])?)
            }
            "broken_fixture" => {
                arity(&head, &args, &[0, 1])?;
                Ok(broken_fixture(if args.is_empty() { int(0) } else { q(0)? }))
            }
            "mixed_fixture" => {
                arity(&head, &args, &[0])?;
                Ok(mixed_fixture())
            }
            "adjoint" => {
                arity(&head, &args, &[1])?;
                Ok(BrAlgebra::new(parse_usize(&args[0])?)?.adjoint())
            }
            "density" => {
                arity(&head, &args, &[3])?;
                density_module(parse_usize(&args[0])?, q(1)?, q(2)?)
            }
            "tensor" => {
                arity(&head, &args, &[2])?;
                self.parse_br(&args[0])?.tensor(&self.parse_br(&args[1])?)
            }
            _ => Err(parse_err(format!("unknown B_r module `{expr}`"))),
        }
    }

    /// An (A,V)-module expression.
    pub fn parse_module(&self, expr: &str) -> Result<DynModule> {
        let expr = normalize(expr);
        if let Some(m) = self.av.get(&expr) {
            return Ok(m.clone());
        }
        let (head, args) = split_call(&expr)?;
        match head.as_str() {
            "Omega" | "Ω" => {
                arity(&head, &args, &[2])?;
                DynModule::omega(parse_rational(&args[0])?, parse_rational(&args[1])?)
            }
            "A" => {
                arity(&head, &args, &[2])?;
                Ok(DynModule::a(parse_rational(&args[0])?, parse_rational(&args[1])?))
            }
            "W" => {
                arity(&head, &args, &[1])?;
                match self.parse_module(&args[0])? {
                    DynModule::Omega(w) => Ok(DynModule::Weighted(WeightedOmega::new(w))),
                    other => Err(Error::Unsupported(format!(
                        "weighting is implemented for Omega sources only, not {}",
                        crate::av::AvModule::label(&other)
                    ))),
                }
            }
            "F" => {
                arity(&head, &args, &[2])?;
                DynModule::f(self.parse_br(&args[0])?, self.parse_module(&args[1])?)
            }
            _ => Err(parse_err(format!("unknown module `{expr}`"))),
        }
    }
}

/// Splits a sum into signed terms at top-level `+`/`-`, keeping exponent
/// signs (`x^-2`) and fraction signs intact.
fn split_terms(s: &str) -> Result<Vec<String>> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut prev = ' ';
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(parse_err(format!("unbalanced brackets in `{s}`")));
        }
        let splits = depth == 0 && (ch == '+' || ch == '-') && !matches!(prev, '^' | '{' | '/' | '*');
        if splits && !cur.trim().is_empty() && !cur.trim().ends_with(['+', '-']) {
            terms.push(cur.trim().to_string());
            cur.clear();
        }
        cur.push(ch);
        if !ch.is_whitespace() {
            prev = ch;
        }
    }
    if depth != 0 {
        return Err(parse_err(format!("unbalanced brackets in `{s}`")));
    }
    if !cur.trim().is_empty() {
        terms.push(cur.trim().to_string());
    }
    Ok(terms)
}

/// Leading signs and a coefficient (`""` means 1).
fn signed_coefficient(s: &str) -> Result<Rational> {
    let mut rest = s.trim();
    let mut sign = int(1);
    while let Some(c) = rest.chars().next() {
        match c {
            '+' => {}
            '-' => sign = -sign,
            _ => break,
        }
        rest = rest[1..].trim_start();
    }
    let rest = rest.trim_end_matches('*').trim();
    if rest.is_empty() {
        Ok(sign)
    } else {
        Ok(sign * parse_rational(rest)?)
    }
}

/// One monomial `c var^k`; returns `(c, k)` with `k = 0` for constants.
fn parse_monomial(term: &str, var: char) -> Result<(Rational, i64)> {
    let compact: String = term.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.find(var) {
        None => Ok((signed_coefficient(&compact)?, 0)),
        Some(i) => {
            let coeff = signed_coefficient(&compact[..i])?;
            let tail = compact[i + var.len_utf8()..].replace(['{', '}'], "");
            let exp = if tail.is_empty() {
                1
            } else {
                let digits = tail
                    .strip_prefix('^')
                    .ok_or_else(|| parse_err(format!("bad exponent in `{term}`")))?;
                digits.parse().map_err(|_| parse_err(format!("bad exponent in `{term}`")))?
            };
            Ok((coeff, exp))
        }
    }
}

fn is_zero_literal(s: &str) -> bool {
    s.trim().is_empty() || s.trim() == "0"
}

/// Polynomial in `t`: `2t - 6`, `1/2 t^2 + 3`, `-t^3`, `2*t`.
pub fn parse_poly(s: &str) -> Result<Poly> {
    let s = normalize(s);
    if is_zero_literal(&s) {
        return Ok(Poly::zero());
    }
    let mut out = Poly::zero();
    for term in split_terms(&s)? {
        let (c, k) = parse_monomial(&term, 't')?;
        if k < 0 {
            return Err(parse_err(format!("negative power of t in `{term}`")));
        }
        out = &out + &Poly::monomial(c, k as usize);
    }
    Ok(out)
}

/// Laurent sum: `2 x^2 - x^0 + 3/2 x^-1`; a bare constant means `x^0`.
pub fn parse_laurent(s: &str) -> Result<LaurentVec> {
    let s = normalize(s);
    if is_zero_literal(&s) {
        return Ok(LaurentVec::zero());
    }
    let mut out = LaurentVec::zero();
    for term in split_terms(&s)? {
        let (c, n) = parse_monomial(&term, 'x')?;
        out.add_at(n, c);
    }
    Ok(out)
}

fn parse_key(s: &str, carrier: &Carrier) -> Result<BrKey> {
    let key = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| parse_err(format!("bad basis index `{p}`"))))
        .collect::<Result<BrKey>>()?;
    let factors = carrier.factors();
    if key.len() != factors.len() {
        return Err(parse_err(format!(
            "v[{s}] needs {} indices for carrier {carrier}",
            factors.len()
        )));
    }
    for (i, f) in key.iter().zip(factors.iter().copied()) {
        if let Carrier::FiniteDim(n) = f {
            if *i as usize >= *n {
                return Err(parse_err(format!("index {i} out of range for {f}")));
            }
        }
    }
    Ok(key)
}

fn strip_outer_parens(s: &str) -> &str {
    let s = s.trim();
    if !(s.starts_with('(') && s.ends_with(')')) {
        return s;
    }
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i != s.len() - 1 {
                    return s;
                }
            }
            _ => {}
        }
    }
    &s[1..s.len() - 1]
}

fn parse_f(module: &DynModule, s: &str) -> Result<DynElem> {
    let DynModule::F(f) = module else {
        unreachable!()
    };
    let mut out = FElement::zero();
    for term in split_terms(s)? {
        let open = term
            .find("v[")
            .ok_or_else(|| parse_err(format!("expected `v[..] (x) ..` in `{term}`")))?;
        let coeff = signed_coefficient(&term[..open])?;
        let close = term[open..]
            .find(']')
            .map(|i| i + open)
            .ok_or_else(|| parse_err(format!("unclosed `v[` in `{term}`")))?;
        let key = parse_key(&term[open + 2..close], f.br().carrier())?;
        let rest = term[close + 1..].trim();
        let inner = rest
            .strip_prefix("(x)")
            .ok_or_else(|| parse_err(format!("expected `(x)` after v[..] in `{term}`")))?;
        let w = parse_element(f.inner(), strip_outer_parens(inner))?;
        out = out.plus(&FElement::pure(key, w.scaled(&coeff)));
    }
    Ok(out.into())
}

/// Parses an element of `module` in the printed form.
pub fn parse_element(module: &DynModule, s: &str) -> Result<DynElem> {
    let s = normalize(s);
    if is_zero_literal(&s) {
        return Ok(DynElem::Zero);
    }
    match module {
        DynModule::Omega(_) => Ok(parse_poly(&s)?.into()),
        DynModule::A(_) | DynModule::Weighted(_) => Ok(parse_laurent(&s)?.into()),
        DynModule::F(_) => parse_f(module, &s),
    }
}

/// `Σ c_n h_m^n` in print form, e.g. `h_0^1 + 1`.
pub fn fmt_h_basis(c: &HBasisCoords) -> String {
    let terms: Vec<(Rational, String)> = c
        .coords
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, q)| !q.is_zero())
        .map(|(n, q)| (q.clone(), if n == 0 { String::new() } else { format!("h_{}^{n}", c.anchor) }))
        .collect();
    struct Terms(Vec<(Rational, String)>);
    impl std::fmt::Display for Terms {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            crate::exact::write_terms(f, self.0.iter().cloned(), true)
        }
    }
    Terms(terms).to_string()
}

/// The module as it would be written in an expression.
pub fn omega_expr(w: &OmegaModule) -> String {
    format!("Omega({},{})", w.lambda(), w.beta())
}

pub fn a_expr(a: &AModule) -> String {
    format!("A({},{})", a.alpha(), a.beta())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::av::{to_h_basis, AvModule};
    use crate::exact::rat;
    use proptest::prelude::*;

    #[test]
    fn poly_forms() {
        assert_eq!(parse_poly("2t - 6").unwrap(), Poly::from_ints(&[-6, 2]));
        assert_eq!(parse_poly("2 t −6").unwrap(), Poly::from_ints(&[-6, 2]));
        assert_eq!(parse_poly("2*t + -6").unwrap(), Poly::from_ints(&[-6, 2]));
        assert_eq!(parse_poly("-1/2 t^2 + 1/2").unwrap(), Poly::new(vec![rat(1, 2), int(0), rat(-1, 2)]));
        assert_eq!(parse_poly("t + t").unwrap(), Poly::from_ints(&[0, 2]));
        assert_eq!(parse_poly("0").unwrap(), Poly::zero());
        assert!(parse_poly("t^-1").is_err());
        assert!(parse_poly("1.5 t").is_err());
    }

    #[test]
    fn laurent_forms() {
        let v = parse_laurent("2 x^2 - x^0 + 3/2 x^-1").unwrap();
        assert_eq!(v.get(2), int(2));
        assert_eq!(v.get(0), int(-1));
        assert_eq!(v.get(-1), rat(3, 2));
        assert_eq!(parse_laurent("x").unwrap(), LaurentVec::monomial(int(1), 1));
        assert_eq!(parse_laurent("x^{-3}").unwrap(), LaurentVec::monomial(int(1), -3));
        assert_eq!(parse_laurent("5").unwrap(), LaurentVec::monomial(int(5), 0));
        assert_eq!(parse_laurent(&v.to_string()).unwrap(), v);
    }

    #[test]
    fn module_expressions() {
        let reg = Registry::new();
        assert_eq!(reg.parse_module("Omega(2,3)").unwrap().label(), "Omega(2,3)");
        assert_eq!(reg.parse_module("A(0, 1/2)").unwrap().label(), "A(0,1/2)");
        let f = reg.parse_module("F(Mgamma(2),Omega(1,2))").unwrap();
        assert_eq!(f.label(), "F(Mgamma(2),Omega(1,2))");
        let nested = reg.parse_module("F(shift, F(shift, Omega(1,1)))").unwrap();
        assert!(nested.as_nested().is_ok());
        assert_eq!(reg.parse_br("tensor(shift,Mgamma(1))").unwrap().carrier().factor_count(), 2);
        assert_eq!(reg.parse_br("Mgamma(1,3)").unwrap().rank(), 3);
        assert!(reg.parse_module("F(broken_fixture,Omega(1,1))").is_err());
        assert!(reg.parse_module("Omega(0,1)").is_err());
        assert!(reg.parse_module("Omega(1,1").is_err());
        assert!(reg.parse_module("Nope(1)").is_err());
        assert!(reg.parse_module("W(A(0,1))").is_err());
        assert_eq!(reg.parse_module("W(Omega(2,1))").unwrap().label(), "W(Omega(2,1))");
    }

    #[test]
    fn registry_names_resolve() {
        let mut reg = Registry::new();
        reg.add_br("mine", make_mgamma(int(3), 1).unwrap());
        reg.add_module("om", DynModule::omega(int(2), int(1)).unwrap());
        assert_eq!(reg.parse_module("F(mine, om)").unwrap().label(), "F(Mgamma(3),Omega(2,1))");
        assert_eq!(reg.br_names().count(), 1);
    }

    #[test]
    fn f_elements_round_trip() {
        let reg = Registry::new();
        let m = reg.parse_module("F(shift,Omega(1,1))").unwrap();
        let e = parse_element(&m, "v[0] (x) (t) + 1/2 v[2] (x) (t^2 - 1) - v[0] (x) 3").unwrap();
        assert_eq!(e.to_string(), "v[0] (x) (t - 3) + v[2] (x) (1/2 t^2 - 1/2)");
        assert_eq!(parse_element(&m, &e.to_string()).unwrap(), e);
        assert_eq!(parse_element(&m, "v[1] ⊗ t").unwrap().to_string(), "v[1] (x) (t)");

        let d1 = m.d(1, &parse_element(&m, "v[0] (x) (1)").unwrap());
        assert_eq!(parse_element(&m, &d1.to_string()).unwrap(), d1);

        let nested = reg.parse_module("F(Mgamma(1),F(shift,A(0,1)))").unwrap();
        let e = parse_element(&nested, "v[0] (x) (v[3] (x) (2 x^-1 - x))").unwrap();
        assert_eq!(parse_element(&nested, &e.to_string()).unwrap(), e);

        assert!(parse_element(&m, "v[0,1] (x) (t)").is_err());
        assert!(parse_element(&m, "v[0] t").is_err());
        let mg = reg.parse_module("F(Mgamma(1),Omega(1,1))").unwrap();
        assert!(parse_element(&mg, "v[1] (x) (t)").is_err());
    }

    #[test]
    fn h_basis_printing() {
        assert_eq!(fmt_h_basis(&to_h_basis(&Poly::t(), 0)), "h_0^1 + 1");
        assert_eq!(fmt_h_basis(&to_h_basis(&Poly::zero(), 0)), "0");
        assert_eq!(fmt_h_basis(&to_h_basis(&Poly::from_ints(&[0, 0, 2]), -1)), "2 h_-1^2 + 2 h_-1^1");
    }

    proptest! {
        #[test]
        fn poly_round_trip(cs in prop::collection::vec((-20i64..20, 1i64..6), 0..7)) {
            let p = Poly::new(cs.iter().map(|&(n, d)| rat(n, d)).collect());
            prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }

        #[test]
        fn laurent_round_trip(cs in prop::collection::vec((-6i64..6, -20i64..20, 1i64..6), 0..6)) {
            let v = LaurentVec::from_terms(cs.iter().map(|&(k, n, d)| (k, rat(n, d))));
            prop_assert_eq!(parse_laurent(&v.to_string()).unwrap(), v);
        }
    }
}
