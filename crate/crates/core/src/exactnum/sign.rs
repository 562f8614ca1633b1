//! Sign determination for sums of square roots.
//!
//! `Σ c_n √n` is scaled to integer coefficients and bracketed with
//! `⌊√n · 2^p⌋ ≤ √n · 2^p < ⌊√n · 2^p⌋ + 1`; the precision `p` doubles until
//! the bracket excludes zero. Square roots of distinct squarefree integers are
//! linearly independent over Q, so a nonzero canonical element is a nonzero
//! real and the loop terminates.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub const DEFAULT_PRECISION_BITS: u32 = 128;

static START_PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_BITS);

/// Starting precision (bits) for interval sign evaluation.
pub fn start_precision() -> u32 {
    START_PRECISION.load(Ordering::Relaxed)
}

pub fn set_start_precision(bits: u32) {
    START_PRECISION.store(bits.max(1), Ordering::Relaxed);
}

pub(crate) fn sign_of_radical_sum(terms: &BTreeMap<u64, BigRational>) -> i8 {
    if terms.is_empty() {
        return 0;
    }
    if terms.len() == 1 {
        let c = terms.values().next().unwrap();
        return if c.is_positive() { 1 } else { -1 };
    }
    let den = terms
        .values()
        .fold(BigInt::from(1), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints: Vec<(u64, BigInt)> = terms
        .iter()
        .map(|(&n, c)| (n, (c * BigRational::from_integer(den.clone())).to_integer()))
        .collect();

    let mut p = start_precision();
    loop {
        let (lo, hi) = bracket(&ints, p);
        if lo.is_positive() {
            return 1;
        }
        if hi.is_negative() {
            return -1;
        }
        debug_assert!(!(lo.is_zero() && hi.is_zero()), "nonzero canonical element evaluated to 0");
        p = p.saturating_mul(2);
    }
}

/// Integer bounds on `2^p · Σ a_n √n`.
fn bracket(ints: &[(u64, BigInt)], p: u32) -> (BigInt, BigInt) {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for (n, a) in ints {
        if *n == 1 {
            let v = a << p;
            lo += &v;
            hi += v;
            continue;
        }
        let floor = (BigInt::from(*n) << (2 * p)).sqrt();
        let ceil = &floor + 1;
        if a.is_positive() {
            lo += a * &floor;
            hi += a * &ceil;
        } else {
            lo += a * &ceil;
            hi += a * &floor;
        }
    }
    (lo, hi)
}
