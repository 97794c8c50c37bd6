use super::*;
use crate::algebra::{make_mgamma, make_shift_module, make_shift_module_b1, BrElement, BrModule};
use crate::av::AModule;
use crate::exact::{factorial, rat};

fn omega(l: Rational, b: Rational) -> OmegaModule {
    OmegaModule::new(l, b).unwrap()
}

fn cfg(modes: i64, inner: usize, carrier: usize) -> ProbeConfig {
    ProbeConfig::default().with_modes(modes).with_caps(inner, carrier)
}

#[test]
fn omega_beta_zero_has_proper_submodule() {
    for l in [int(1), int(2), rat(-1, 3)] {
        let v = generate(&omega(l, int(0)), &Poly::t(), &cfg(4, 6, 1)).unwrap();
        let ProbeVerdict::ProperInvariantSubspaceFound { basis, window_dim } = v else {
            panic!("expected proper subspace, got {v:?}");
        };
        assert_eq!(window_dim, 7);
        assert_eq!(basis.len(), 6);
        assert!(basis.iter().all(|b| b.coeff(0) == int(0)));
    }
}

#[test]
fn omega_nonzero_beta_fills_window() {
    let v = generate(&omega(int(1), int(1)), &Poly::one(), &cfg(4, 6, 1)).unwrap();
    assert_eq!(v, ProbeVerdict::FullWindowReached { window_dim: 7 });
    assert_eq!(v.summary(), "FULL WINDOW (dim 7)");
    for b in [rat(1, 2), int(-1), int(3)] {
        for seed in omega_sweep_seeds() {
            assert!(generate(&omega(int(2), b.clone()), &seed, &cfg(4, 5, 1)).unwrap().is_full());
        }
    }
}

#[test]
fn larger_windows_keep_full_verdict() {
    let w = omega(int(1), int(1));
    for modes in 1..=4 {
        for d in 2..=6 {
            assert!(generate(&w, &Poly::one(), &cfg(modes, d, 1)).unwrap().is_full(), "modes {modes} cap {d}");
        }
    }
}

#[test]
fn verdicts_are_deterministic() {
    let w = omega(int(3), int(0));
    let a = generate(&w, &Poly::from_ints(&[0, 2, 1]), &cfg(3, 5, 1)).unwrap();
    let b = generate(&w, &Poly::from_ints(&[0, 2, 1]), &cfg(3, 5, 1)).unwrap();
    assert_eq!(a, b);
    // same span from a different generating seed
    let c = generate(&w, &Poly::t(), &cfg(3, 5, 1)).unwrap();
    assert_eq!(a, c);
}

#[test]
fn matching_scalar_factor_is_reducible() {
    let f = FModule::new(make_mgamma(int(2), 1).unwrap(), omega(int(2), int(2))).unwrap();
    let v = generate(&f, &FElement::pure(vec![0], Poly::t()), &cfg(4, 5, 1)).unwrap();
    assert!(v.is_proper());
    assert_eq!(v.summary(), "PROPER SUBSPACE (dim 5 of 6)");
}

#[test]
fn bad_seeds_rejected() {
    let w = omega(int(1), int(1));
    assert_eq!(generate(&w, &Poly::zero(), &cfg(2, 3, 1)), Err(Error::ZeroSeed));
    assert_eq!(
        generate(&w, &Poly::monomial(int(1), 4), &cfg(2, 3, 1)),
        Err(Error::SeedOutsideWindow)
    );
    assert_eq!(generate(&w, &Poly::one(), &cfg(0, 3, 1)), Err(Error::EmptyWindow));
}

#[test]
fn mgamma_sweep_examples() {
    let c = cfg(4, 5, 1);
    assert!(reducibility_Mgamma(&int(2), &int(1), &int(2), &c).unwrap().is_reducible());
    assert!(reducibility_Mgamma(&int(0), &int(1), &int(1), &c)
        .unwrap()
        .is_irreducible_evidence());
    assert!(reducibility_Mgamma(&int(1), &int(2), &int(0), &c)
        .unwrap()
        .is_irreducible_evidence());
}

#[test]
fn intermediate_series_boundaries() {
    let c = cfg(4, 5, 1);
    let seeds = laurent_sweep_seeds();
    assert!(sweep(&AModule::new(int(0), int(0)), &seeds, &c).unwrap().is_reducible());
    assert!(sweep(&AModule::new(int(1), int(1)), &seeds, &c).unwrap().is_reducible());
    assert!(sweep(&AModule::new(rat(1, 2), int(1)), &seeds, &c)
        .unwrap()
        .is_irreducible_evidence());
    assert!(sweep(&AModule::new(int(0), int(2)), &seeds, &c)
        .unwrap()
        .is_irreducible_evidence());
    // the trivial submodule spanned by x^0
    let v = generate(&AModule::new(int(0), int(0)), &LaurentVec::monomial(int(1), 0), &c).unwrap();
    assert_eq!(v.summary(), "PROPER SUBSPACE (dim 1 of 11)");
}

#[test]
fn full_operator_set_sees_laurent_action() {
    let c = cfg(4, 5, 1).with_operators(OperatorSet::Full);
    assert!(generate(&omega(int(1), int(0)), &Poly::t(), &c).unwrap().is_full());
}

// Oracle for the top k-coefficient: forward differences at k = 0..=deg,
// Δ^deg y / deg!, valid because the samples lie on a polynomial of degree
// at most deg.
fn forward_difference_top(f: &FModule<OmegaModule>, u: &FElement<Poly>, m: i64, deg: usize) -> FElement<Poly> {
    let mut row: Vec<FElement<Poly>> = (0..=deg as i64).map(|k| f.d(k, &f.d(m - k, u))).collect();
    for _ in 0..deg {
        row = row.windows(2).map(|w| w[1].minus(&w[0])).collect();
    }
    row[0].scaled(&factorial(deg).recip())
}

// Σ_n (d̄_r² v_n) ⊗ h_m^n for u = Σ_n v_n ⊗ h_0^n given as (v_n) list.
fn squared_top_sum(br: &BrModule, vs: &[BrElement], m: i64) -> FElement<Poly> {
    let r = br.rank();
    vs.iter().enumerate().fold(FElement::zero(), |acc, (n, v)| {
        acc.plus(&FElement::tensor(&br.act(r, &br.act(r, v)), &h_poly(m, n)))
    })
}

fn seed_from(vs: &[BrElement]) -> FElement<Poly> {
    vs.iter()
        .enumerate()
        .fold(FElement::zero(), |acc, (n, v)| acc.plus(&FElement::tensor(v, &h_poly(0, n))))
}

#[test]
fn extraction_constant_matches_oracle() {
    let cases = [
        (make_shift_module_b1(), vec![BrElement::basis(vec![0]), BrElement::basis(vec![1])]),
        (make_shift_module_b1(), vec![BrElement::from_poly(&Poly::from_ints(&[1, -2, 1]))]),
        (
            make_shift_module(2).unwrap(),
            vec![BrElement::basis(vec![0]), BrElement::basis(vec![1]).scaled(&int(3))],
        ),
        (make_shift_module(2).unwrap(), vec![BrElement::basis(vec![2])]),
    ];
    for (br, vs) in cases {
        let r = br.rank();
        let deg = 2 * r + 2;
        let expected_c = rat(if r % 2 == 1 { 1 } else { -1 }, 1) / (factorial(r + 1) * factorial(r + 1));
        for l in [int(1), rat(2, 3)] {
            let f = FModule::new(br.clone(), omega(l.clone(), int(1))).unwrap();
            let u = seed_from(&vs);
            for m in -2..=2 {
                let oracle = forward_difference_top(&f, &u, m, deg);
                let target = squared_top_sum(&br, &vs, m);
                assert!(!target.is_zero());
                // oracle/target is a single scalar c_r
                let (key, c) = target.terms()[0].clone();
                let ratio = oracle.terms().into_iter().find(|(k, _)| *k == key).unwrap().1 / c;
                assert_eq!(oracle, target.scaled(&ratio));
                // d_k d_{m-k} carries an overall λ^m
                assert_eq!(ratio, &expected_c * crate::exact::pow(&l, m), "{} m={m}", br.name());

                let ks: Vec<i64> = (-2..=2 + deg as i64 - 4).collect();
                let extracted = claim1_extract(&f, &u, m, &ks).unwrap();
                assert_eq!(extracted, oracle);
            }
        }
    }
}

#[test]
fn extraction_on_scalar_module_is_zero() {
    let f = FModule::new(make_mgamma(int(3), 2).unwrap(), omega(int(1), int(1))).unwrap();
    let u = FElement::pure(vec![0], Poly::from_ints(&[1, 1]));
    let ks: Vec<i64> = (-3..=4).collect();
    assert!(claim1_extract(&f, &u, 1, &ks).unwrap().is_zero());
}

#[test]
fn extraction_rejects_bad_input() {
    let f = FModule::new(make_shift_module_b1(), omega(int(1), int(1))).unwrap();
    let u = FElement::pure(vec![0], Poly::one());
    assert_eq!(
        claim1_extract(&f, &u, 0, &[-1, 0, 1, 2]),
        Err(Error::InsufficientSamples { need: 5, got: 4 })
    );
    assert_eq!(claim1_extract(&f, &u, 0, &[0, 0, 1, 2, 3]), Err(Error::RepeatedNode));
    let f0 = FModule::new(make_mgamma(int(1), 0).unwrap(), omega(int(1), int(1))).unwrap();
    assert!(matches!(
        claim1_extract(&f0, &u, 0, &[-2, -1, 0, 1, 2]),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn extraction_m0_is_proportional_to_square() {
    let f = FModule::new(make_shift_module_b1(), omega(int(1), int(1))).unwrap();
    let u = FElement::pure(vec![0], Poly::one());
    let ks: Vec<i64> = (-2..=4).collect();
    let e = claim1_extract(&f, &u, 0, &ks).unwrap();
    // d̄_1² 1 = 1
    assert_eq!(e, FElement::pure(vec![0], Poly::constant(rat(1, 4))));
}

fn shift_seed() -> FElement<Poly> {
    FElement::pure(vec![0], Poly::one()).plus(&FElement::pure(vec![1], h_poly(0, 1)))
}

#[test]
fn extracted_elements_lie_in_closure() {
    let f = FModule::new(make_shift_module_b1(), omega(int(1), int(1))).unwrap();
    let u = shift_seed();
    let c = cfg(4, 3, 3);
    let ks: Vec<i64> = (-2..=2).collect();
    let family: Vec<(i64, FElement<Poly>)> = (-2..=2)
        .map(|m| (m, claim1_extract(&f, &u, m, &ks).unwrap()))
        .collect();
    for (m, e) in &family {
        // 1/4 (1 ⊗ 1 + (x + 2) ⊗ (t - m - 1))
        let expected = FElement::pure(vec![0], Poly::one())
            .plus(&FElement::tensor(&BrElement::from_poly(&Poly::from_ints(&[2, 1])), &h_poly(*m, 1)))
            .scaled(&rat(1, 4));
        assert_eq!(e, &expected);
        assert!(in_closure(&f, &u, e, &c).unwrap());
    }
    let lead = claim2_leading(&family, 1).unwrap();
    let expected = FElement::tensor(&BrElement::from_poly(&Poly::from_ints(&[2, 1])), &Poly::one()).scaled(&rat(-1, 4));
    assert_eq!(lead, expected);
    assert!(in_closure(&f, &u, &lead, &c).unwrap());
}

#[test]
fn leading_coefficient_edge_cases() {
    let u0 = FElement::pure(vec![0], Poly::constant(int(5)));
    let constant: Vec<_> = (-1..=1).map(|m| (m, u0.clone())).collect();
    assert_eq!(claim2_leading(&constant, 0).unwrap(), u0);
    assert_eq!(
        claim2_leading(&constant[..1], 1),
        Err(Error::InsufficientSamples { need: 2, got: 1 })
    );
    // m ↦ 1 ⊗ h_m^1 has m-coefficient -1 ⊗ 1
    let lin: Vec<_> = (-2..=2).map(|m| (m, FElement::pure(vec![0], h_poly(m, 1)))).collect();
    assert_eq!(claim2_leading(&lin, 1).unwrap(), FElement::pure(vec![0], Poly::constant(int(-1))));
    // m ↦ m t is not of the form w ⊗ 1
    let bad: Vec<_> = (-2..=2).map(|m| (m, FElement::pure(vec![0], Poly::monomial(int(m), 1)))).collect();
    assert!(matches!(claim2_leading(&bad, 1), Err(Error::Unsupported(_))));
    // m ↦ m² exceeds degree 1 on five samples
    let quad: Vec<_> = (-2..=2).map(|m| (m, FElement::pure(vec![0], Poly::constant(int(m * m))))).collect();
    assert_eq!(claim2_leading(&quad, 1), Err(Error::DegreeExceeded(2)));
}
