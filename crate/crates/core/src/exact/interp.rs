use super::{Poly, Rational};
use crate::error::{Error, Result};

/// Lagrange basis polynomials `L_s` with `L_s(nodes[j]) = δ_sj`.
pub fn lagrange_basis(nodes: &[Rational]) -> Result<Vec<Poly>> {
    for (i, a) in nodes.iter().enumerate() {
        if nodes[..i].contains(a) {
            return Err(Error::RepeatedNode);
        }
    }
    Ok(nodes
        .iter()
        .enumerate()
        .map(|(s, xs)| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != s)
                .fold(Poly::one(), |acc, (_, xj)| {
                    let factor = Poly::linear_root(xj).scale(&(xs - xj).recip());
                    &acc * &factor
                })
        })
        .collect())
}

/// The unique polynomial of degree `< nodes.len()` through the samples.
pub fn interpolate(nodes: &[Rational], values: &[Rational]) -> Result<Poly> {
    if nodes.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: nodes.len(),
            got: values.len(),
        });
    }
    let basis = lagrange_basis(nodes)?;
    Ok(basis
        .iter()
        .zip(values)
        .fold(Poly::zero(), |acc, (l, v)| &acc + &l.scale(v)))
}

/// Weights `w_s` such that the coefficient of `k^degree` in the interpolant
/// equals `Σ_s w_s · value_s`.
pub fn top_coefficient_weights(nodes: &[Rational], degree: usize) -> Result<Vec<Rational>> {
    Ok(lagrange_basis(nodes)?
        .iter()
        .map(|l| l.coeff(degree))
        .collect())
}
