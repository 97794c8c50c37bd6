//! Ready-made `B_r`-module descriptions.

use super::{BrModule, BrOperator, Carrier, DEFAULT_CERT_WINDOW};
use crate::exact::{int, Poly, RatMatrix, Rational};

/// The one-dimensional module `M_γ`: `d̄_0 v = γ v`, `d̄_i v = 0` for `i ≥ 1`.
pub fn make_mgamma(gamma: Rational, r: usize) -> crate::Result<BrModule> {
    let mut ops = vec![BrOperator::Scalar(gamma.clone())];
    ops.extend(std::iter::repeat_n(BrOperator::Zero, r));
    BrModule::new(format!("Mgamma({gamma})"), r, Carrier::FiniteDim(1), ops)?
        .certified(DEFAULT_CERT_WINDOW)
}

/// `B_1`-module on `ℚ[x]` with `d̄_0 = -x·` and `d̄_1 f(x) = f(x + 1)`.
///
/// `d̄_1` is bijective and no proper nonzero ideal of `ℚ[x]` is stable under
/// the shift, so this is an infinite-dimensional simple module.
pub fn make_shift_module_b1() -> BrModule {
    let ops = vec![
        BrOperator::PolyMult(Poly::from_ints(&[0, -1])),
        BrOperator::UnitShift(int(1)),
    ];
    BrModule::new("shift", 1, Carrier::Poly, ops)
        .and_then(|m| m.certified(10))
        .expect("shift module satisfies the B_1 relation")
}

/// `B_r`-module on `ℚ[x]` with `d̄_0 = -x·`, `d̄_r f(x) = f(x + r)` and the
/// middle generators zero, for `r ∈ {1, 2}`. For `r ≥ 3` the relation
/// `[d̄_1, d̄_{r-1}] = (r-2) d̄_r` rules this shape out.
pub fn make_shift_module(r: usize) -> crate::Result<BrModule> {
    if r == 0 || r > 2 {
        return Err(crate::Error::RankOutOfRange(r));
    }
    if r == 1 {
        return Ok(make_shift_module_b1());
    }
    let mut ops = vec![BrOperator::PolyMult(Poly::from_ints(&[0, -1]))];
    ops.extend(std::iter::repeat_n(BrOperator::Zero, r - 1));
    ops.push(BrOperator::UnitShift(int(r as i64)));
    BrModule::new(format!("shift({r})"), r, Carrier::Poly, ops)?.certified(DEFAULT_CERT_WINDOW)
}

/// `d̄_0 = γ·id`, `d̄_1 = id` on `ℚ^2`: violates `[d̄_0, d̄_1] = d̄_1`.
/// Returned uncertified.
pub fn broken_fixture(gamma: Rational) -> BrModule {
    let ops = vec![BrOperator::Scalar(gamma), BrOperator::identity()];
    BrModule::new("broken_fixture", 1, Carrier::FiniteDim(2), ops)
        .expect("operators fit the carrier")
}

/// `B_0`-module on `ℚ^2` with `d̄_0 = diag(1, 0)`: nonzero with a kernel.
pub fn mixed_fixture() -> BrModule {
    let ops = vec![BrOperator::Matrix(RatMatrix::diagonal(&[int(1), int(0)]))];
    BrModule::new("mixed_fixture", 0, Carrier::FiniteDim(2), ops)
        .and_then(|m| m.certified(DEFAULT_CERT_WINDOW))
        .expect("any single operator is a B_0-module")
}

/// Truncated density module: `d̄_i t^k = (k + a(i+1)) t^{k+i}` on
/// `ℚ[t]/(t^N)`, plus `γ` on `d̄_0`.
///
/// `N = r + 1` in general and `N = r + 2` when `a = 0`; in both cases every
/// `d_i` with `i > r` acts as zero, so the `V_+`-action descends to `B_r`.
pub fn density_module(r: usize, a: Rational, gamma: Rational) -> crate::Result<BrModule> {
    let n = if num_traits::Zero::is_zero(&a) { r + 2 } else { r + 1 };
    let ops = (0..=r)
        .map(|i| {
            let mut m = RatMatrix::zeros(n, n);
            for k in 0..n {
                if k + i < n {
                    m.set(k + i, k, int(k as i64) + &a * int(i as i64 + 1));
                }
            }
            if i == 0 {
                for k in 0..n {
                    let cur = m.get(k, k).clone();
                    m.set(k, k, cur + &gamma);
                }
            }
            BrOperator::Matrix(m)
        })
        .collect();
    BrModule::new(format!("density({r},{a},{gamma})"), r, Carrier::FiniteDim(n), ops)?
        .certified(DEFAULT_CERT_WINDOW)
}
