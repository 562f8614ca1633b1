//! Local Hilbert symbols over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exactnum::radical::prime_factors;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// `p^v · unit` decomposition of a nonzero integer.
fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut v = 0;
    let mut u = n.clone();
    while (&u % &p).is_zero() {
        u /= &p;
        v += 1;
    }
    (v, u)
}

/// Legendre symbol `(u/p)` for odd prime `p ∤ u`, by Euler's criterion.
fn legendre(u: &BigInt, p: u64) -> i8 {
    let pb = BigInt::from(p);
    let r = u.mod_floor(&pb).modpow(&BigInt::from((p - 1) / 2), &pb);
    if r.is_one() { 1 } else { -1 }
}

/// `a·b` represents the same square class as `a/b`.
fn square_class(q: &BigRational) -> BigInt {
    q.numer() * q.denom()
}

/// `(a, b)_v` for nonzero rationals `a`, `b`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> i8 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    let (a, b) = (square_class(a), square_class(b));
    match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() { -1 } else { 1 }
        }
        Place::Prime(2) => {
            let (alpha, u) = split_valuation(&a, 2);
            let (beta, v) = split_valuation(&b, 2);
            let eps = |x: &BigInt| -> u32 { ((x - 1u32).mod_floor(&BigInt::from(4)) / 2u32).to_u32().unwrap() };
            let omega = |x: &BigInt| -> u32 {
                let r = x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
                u32::from(r == 3 || r == 5)
            };
            let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
            if e % 2 == 0 { 1 } else { -1 }
        }
        Place::Prime(p) => {
            let (alpha, u) = split_valuation(&a, p);
            let (beta, v) = split_valuation(&b, p);
            let mut s: i8 = if (alpha * beta) % 2 == 1 && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= legendre(&u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(&v, p);
            }
            s
        }
    }
}

/// Infinity, 2, and the odd primes dividing the numerators or denominators.
/// All other symbols are `+1`.
pub fn relevant_places(a: &BigRational, b: &BigRational) -> Vec<Place> {
    let mut primes = vec![2u64];
    for x in [a.numer(), a.denom(), b.numer(), b.denom()] {
        let n = x.abs().to_u64().expect("parameter fits in 64 bits");
        if n > 1 {
            primes.extend(prime_factors(n));
        }
    }
    primes.sort_unstable();
    primes.dedup();
    std::iter::once(Place::Infinity)
        .chain(primes.into_iter().map(Place::Prime))
        .collect()
}

/// Symbols at every relevant place.
pub fn local_symbols(a: &BigRational, b: &BigRational) -> Vec<(Place, i8)> {
    relevant_places(a, b)
        .into_iter()
        .map(|v| (v, hilbert_symbol(a, b, v)))
        .collect()
}
