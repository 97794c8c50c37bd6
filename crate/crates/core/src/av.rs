//! Modules that carry both a Virasoro action and a compatible action of the
//! Laurent polynomial algebra, plus the falling-product basis of `ℚ[t]`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, pow, LaurentVec, LinearElement, Poly, Rational};

/// Probe window: how far element bases extend.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Caps {
    /// `t`-degree for `Ω`-type spaces, `|n|` for Laurent-indexed ones.
    pub inner: usize,
    /// `x`-degree for polynomial `B_r` carriers.
    pub carrier: usize,
}

impl Caps {
    pub fn new(inner: usize, carrier: usize) -> Self {
        Caps { inner, carrier }
    }

    pub fn uniform(cap: usize) -> Self {
        Caps::new(cap, cap)
    }
}

/// A module over the Virasoro algebra and the Laurent algebra `A` with
/// `m x^{n+m} v = d_n x^m v - x^m d_n v` and central charge acting as zero.
pub trait AvModule {
    type Elem: LinearElement;

    fn label(&self) -> String;

    /// `d_m v`
    fn d(&self, m: i64, v: &Self::Elem) -> Self::Elem;

    /// `x^m v`
    fn x(&self, m: i64, v: &Self::Elem) -> Self::Elem;

    /// The central element always acts as zero.
    fn c(&self, _v: &Self::Elem) -> Self::Elem {
        Self::Elem::zero()
    }

    /// `g(m) = x^{-m} d_m`, always evaluated as the literal composite.
    fn g(&self, m: i64, v: &Self::Elem) -> Self::Elem {
        self.x(-m, &self.d(m, v))
    }

    /// Basis keys spanning the probe window, in canonical order.
    fn window_keys(&self, caps: &Caps) -> Vec<<Self::Elem as LinearElement>::Key>;

    fn window_basis(&self, caps: &Caps) -> Vec<Self::Elem> {
        self.window_keys(caps)
            .into_iter()
            .map(Self::Elem::basis)
            .collect()
    }
}

/// `Ω(λ, β) = ℚ[t]` with `d_m f = λ^m (t - βm) f(t - m)` and
/// `x^m f = λ^m f(t - m)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OmegaModule {
    lambda: Rational,
    beta: Rational,
}

impl OmegaModule {
    pub fn new(lambda: Rational, beta: Rational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroLambda);
        }
        Ok(OmegaModule { lambda, beta })
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }
}

impl AvModule for OmegaModule {
    type Elem = Poly;

    fn label(&self) -> String {
        format!("Omega({},{})", self.lambda, self.beta)
    }

    fn d(&self, m: i64, f: &Poly) -> Poly {
        let factor = Poly::linear_root(&(&self.beta * int(m)));
        (&factor * &f.shift(m)).scale(&pow(&self.lambda, m))
    }

    fn x(&self, m: i64, f: &Poly) -> Poly {
        f.shift(m).scale(&pow(&self.lambda, m))
    }

    fn window_keys(&self, caps: &Caps) -> Vec<usize> {
        (0..=caps.inner).collect()
    }
}

/// The intermediate series module `A(α, β)`: `d_m x^n = (n + α + βm) x^{n+m}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AModule {
    alpha: Rational,
    beta: Rational,
}

impl AModule {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        AModule { alpha, beta }
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// Coefficient of `x^{n+m}` in `d_m x^n`.
    pub fn coefficient(&self, m: i64, n: i64) -> Rational {
        int(n) + &self.alpha + &self.beta * int(m)
    }
}

impl AvModule for AModule {
    type Elem = LaurentVec;

    fn label(&self) -> String {
        format!("A({},{})", self.alpha, self.beta)
    }

    fn d(&self, m: i64, v: &LaurentVec) -> LaurentVec {
        LaurentVec::from_terms(v.iter().map(|(n, c)| (n + m, c * self.coefficient(m, n))))
    }

    fn x(&self, m: i64, v: &LaurentVec) -> LaurentVec {
        LaurentVec::from_terms(v.iter().map(|(n, c)| (n + m, c.clone())))
    }

    fn window_keys(&self, caps: &Caps) -> Vec<i64> {
        let n = caps.inner as i64;
        (-n..=n).collect()
    }
}

pub fn omega_d(w: &OmegaModule, m: i64, f: &Poly) -> Poly {
    w.d(m, f)
}

pub fn omega_x(w: &OmegaModule, m: i64, f: &Poly) -> Poly {
    w.x(m, f)
}

pub fn a_d(w: &AModule, m: i64, v: &LaurentVec) -> LaurentVec {
    w.d(m, v)
}

pub fn g_of<W: AvModule>(w: &W, m: i64, v: &W::Elem) -> W::Elem {
    w.g(m, v)
}

/// `h_m^n = Π_{j=m+1}^{m+n} (t - j)`, with `h_m^0 = 1`.
pub fn h_poly(m: i64, n: usize) -> Poly {
    (1..=n as i64).fold(Poly::one(), |acc, j| &acc * &Poly::linear_root(&int(m + j)))
}

/// Coordinates of a polynomial in the basis `{h_m^n}` anchored at `m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HBasisCoords {
    pub anchor: i64,
    /// `coords[n]` multiplies `h_anchor^n`.
    pub coords: Vec<Rational>,
}

/// Expands `f` in the `h_m` basis by peeling leading terms; each `h_m^n` is
/// monic of degree `n`.
pub fn to_h_basis(f: &Poly, m: i64) -> HBasisCoords {
    let Some(deg) = f.degree() else {
        return HBasisCoords {
            anchor: m,
            coords: Vec::new(),
        };
    };
    let mut rest = f.clone();
    let mut coords = vec![Rational::zero(); deg + 1];
    for n in (0..=deg).rev() {
        let c = rest.coeff(n);
        if !c.is_zero() {
            rest = &rest - &h_poly(m, n).scale(&c);
            coords[n] = c;
        }
    }
    debug_assert!(rest.is_zero());
    HBasisCoords { anchor: m, coords }
}

pub fn from_h_basis(c: &HBasisCoords) -> Poly {
    c.coords
        .iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (n, a)| &acc + &h_poly(c.anchor, n).scale(a))
}

impl HBasisCoords {
    pub fn unit(anchor: i64, n: usize) -> Self {
        let mut coords = vec![Rational::zero(); n + 1];
        coords[n] = Rational::one();
        HBasisCoords { anchor, coords }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn omega(l: Rational, b: Rational) -> OmegaModule {
        OmegaModule::new(l, b).unwrap()
    }

    #[test]
    fn omega_d_examples() {
        assert_eq!(omega_d(&omega(int(1), int(0)), 0, &Poly::one()), Poly::t());
        assert_eq!(
            omega_d(&omega(int(2), int(3)), 1, &Poly::one()),
            Poly::from_ints(&[-6, 2])
        );
        // 2^{-1} (t + 1)(t + 1)
        assert_eq!(
            omega_d(&omega(int(2), int(1)), -1, &Poly::t()),
            Poly::new(vec![rat(1, 2), int(1), rat(1, 2)])
        );
    }

    #[test]
    fn omega_x_examples() {
        let w = omega(int(2), int(5));
        let f = Poly::from_ints(&[3, 0, 1]);
        assert_eq!(omega_x(&w, 0, &f), f);
        assert_eq!(omega_x(&w, 1, &Poly::t()), Poly::from_ints(&[-2, 2]));
        let w3 = omega(int(3), int(0));
        let g = Poly::from_ints(&[1, 0, 0, 1]);
        assert_eq!(omega_x(&w3, -4, &omega_x(&w3, 4, &g)), g);
    }

    #[test]
    fn zero_lambda_rejected() {
        assert_eq!(OmegaModule::new(int(0), int(1)), Err(Error::ZeroLambda));
    }

    #[test]
    fn a_d_examples() {
        let a01 = AModule::new(int(0), int(1));
        for m in -3..=3 {
            assert_eq!(
                a_d(&a01, m, &LaurentVec::monomial(int(1), 0)),
                LaurentVec::monomial(int(m), m)
            );
        }
        let a00 = AModule::new(int(0), int(0));
        assert_eq!(
            a_d(&a00, 0, &LaurentVec::monomial(int(1), 5)),
            LaurentVec::monomial(int(5), 5)
        );
        let a = AModule::new(rat(1, 2), int(2));
        assert_eq!(
            a_d(&a, -1, &LaurentVec::monomial(int(1), 3)),
            LaurentVec::monomial(rat(3, 2), 2)
        );
    }

    #[test]
    fn g_examples() {
        let w = omega(int(5), int(2));
        // x^{-3} (125 (t - 6)) = (t + 3) - 6
        assert_eq!(g_of(&w, 3, &Poly::one()), Poly::from_ints(&[-3, 1]));
        let f = Poly::from_ints(&[1, 2, 3]);
        assert_eq!(g_of(&w, 0, &f), w.d(0, &f));
        let a = AModule::new(rat(1, 3), rat(-2, 5));
        for m in -3..=3 {
            for n in -3..=3 {
                let v = LaurentVec::monomial(int(1), n);
                assert_eq!(g_of(&a, m, &v), v.scaled(&a.coefficient(m, n)));
            }
        }
    }

    #[test]
    fn h_poly_examples() {
        assert_eq!(h_poly(17, 0), Poly::one());
        assert_eq!(h_poly(0, 2), Poly::from_ints(&[2, -3, 1]));
        assert_eq!(h_poly(-1, 1), Poly::t());
    }

    #[test]
    fn h_basis_examples() {
        assert_eq!(to_h_basis(&Poly::one(), 4).coords, vec![int(1)]);
        assert_eq!(to_h_basis(&Poly::t(), 0).coords, vec![int(1), int(1)]);
        let f = Poly::from_ints(&[5, -2, 0, 1]);
        assert_eq!(from_h_basis(&to_h_basis(&f, -3)), f);
        for n in 0..5 {
            assert_eq!(to_h_basis(&h_poly(2, n), 2), HBasisCoords::unit(2, n));
        }
    }

    proptest! {
        #[test]
        fn h_basis_round_trip(cs in prop::collection::vec(-9i64..9, 0..9), m in -5i64..5) {
            let f = Poly::from_ints(&cs);
            let c = to_h_basis(&f, m);
            prop_assert_eq!(c.coords.len(), f.degree().map_or(0, |d| d + 1));
            prop_assert_eq!(from_h_basis(&c), f);
        }
    }
}
