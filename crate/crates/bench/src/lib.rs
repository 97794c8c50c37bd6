//! Shared inputs for the criterion benches.

use virmod_core::algebra::{make_shift_module_b1, BrElement};
use virmod_core::av::{h_poly, OmegaModule};
use virmod_core::fmod::{FElement, FModule};
use virmod_core::{int, rat, LinearElement, Poly};

/// `F(shift, Ω(3/2, -1/2))`, the most expensive default fixture.
pub fn shift_omega() -> FModule<OmegaModule> {
    FModule::new(make_shift_module_b1(), OmegaModule::new(rat(3, 2), rat(-1, 2)).unwrap()).unwrap()
}

/// `v ⊗ 1 + (x v) ⊗ h_0^1 + (x² v) ⊗ h_0^2`.
pub fn spread_seed() -> FElement<Poly> {
    (0..3).fold(FElement::zero(), |acc, n| {
        let v = BrElement::from_poly(&Poly::monomial(int(1), n));
        acc.plus(&FElement::tensor(&v, &h_poly(0, n)))
    })
}

/// A dense polynomial of the given degree with small rational coefficients.
pub fn dense_poly(degree: usize) -> Poly {
    Poly::new((0..=degree as i64).map(|k| rat(k - 3, k + 1)).collect())
}
