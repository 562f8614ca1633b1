//! Squarefree radicand bookkeeping.
//!
//! Squarefree integers under `m ⊕ n = kernel(m·n)` form a vector space over
//! GF(2) (exponent vectors mod 2). Products of square roots and the
//! structure of multiquadratic fields both reduce to this.

use num_integer::Integer;

/// Splits `n = outer² · kernel` with `kernel` squarefree.
pub fn squarefree_decompose(mut n: u64) -> (u64, u64) {
    assert!(n > 0, "squarefree_decompose(0)");
    let mut outer = 1u64;
    let mut kernel = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0u32;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        outer *= p.pow(e / 2);
        if e % 2 == 1 {
            kernel *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (outer, kernel * n)
}

pub fn squarefree_kernel(n: u64) -> u64 {
    squarefree_decompose(n).1
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && squarefree_kernel(n) == n
}

/// `√m · √n = outer · √kernel` for squarefree `m`, `n`.
pub fn radical_product(m: u64, n: u64) -> (u64, u64) {
    let g = m.gcd(&n);
    let kernel = (m / g)
        .checked_mul(n / g)
        .expect("radicand overflow in multiquadratic product");
    (g, kernel)
}

/// The GF(2) sum of two squarefree radicands.
pub fn radical_xor(m: u64, n: u64) -> u64 {
    radical_product(m, n).1
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn largest_prime_factor(mut n: u64) -> u64 {
    if n <= 1 {
        return 1;
    }
    let mut largest = 1;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        while n % p == 0 {
            n /= p;
            largest = p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        largest = n;
    }
    largest
}

/// Incremental GF(2) echelon basis of radicands, keyed by largest prime.
#[derive(Debug, Clone, Default)]
pub struct RadicalBasis {
    rows: Vec<(u64, u64)>,
}

impl RadicalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reduce(&self, mut r: u64) -> u64 {
        loop {
            let p = largest_prime_factor(r);
            match self.rows.iter().find(|(pivot, _)| *pivot == p) {
                Some(&(_, row)) if r != 1 => r = radical_xor(r, row),
                _ => return r,
            }
        }
    }

    /// Inserts `r`; returns false if it was already in the span.
    pub fn insert(&mut self, r: u64) -> bool {
        let reduced = self.reduce(r);
        if reduced == 1 {
            return false;
        }
        self.rows.push((largest_prime_factor(reduced), reduced));
        true
    }

    pub fn contains(&self, r: u64) -> bool {
        self.reduce(r) == 1
    }
}
