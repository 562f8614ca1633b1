use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::radical::{largest_prime_factor, radical_product, squarefree_decompose};
use super::sign::sign_of_radical_sum;
use super::FieldError;

/// An element of a real multiquadratic field, stored as a finite sum
/// `Σ c_n · √n` over distinct squarefree radicands `n ≥ 1`.
///
/// The representation is canonical: zero coefficients are never stored, so
/// structural equality is field equality and the zero element has no terms.
/// Elements are not tied to a particular [`MQField`](super::MQField); they
/// live in the compositum of all real multiquadratic fields, and a field is
/// only consulted where embeddings or membership matter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement {
    terms: BTreeMap<u64, BigRational>,
}

impl FieldElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `√n` for a positive integer, reduced to `c·√(squarefree kernel)`.
    pub fn sqrt_of(n: u64) -> Result<Self, FieldError> {
        if n == 0 {
            return Err(FieldError::NonPositiveSqrt(0));
        }
        let (outer, kernel) = squarefree_decompose(n);
        Ok(Self::monomial(
            BigRational::from_integer(BigInt::from(outer)),
            kernel,
        ))
    }

    /// `c · √radicand`; the radicand must already be squarefree.
    pub fn monomial(c: BigRational, radicand: u64) -> Self {
        debug_assert!(radicand >= 1);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(radicand, c);
        }
        Self { terms }
    }

    /// Exact square root of a positive rational, when it lives in the
    /// multiquadratic world (always, since `√(p/q) = √(pq)/q`).
    pub fn sqrt_rational(q: &BigRational) -> Result<Self, FieldError> {
        if !q.is_positive() {
            return Err(FieldError::NonPositiveSqrt(q.to_i64().unwrap_or(0)));
        }
        let pq = q.numer() * q.denom();
        let pq = pq
            .to_u64()
            .ok_or(FieldError::RadicandOverflow)?;
        let root = Self::sqrt_of(pq)?;
        Ok(root.scale(&BigRational::new(BigInt::one(), q.denom().clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&1).is_some_and(|c| c.is_one())
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&n| n == 1)
    }

    /// The rational value, if the element has no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.rational_part())
        } else {
            None
        }
    }

    pub fn rational_part(&self) -> BigRational {
        self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coefficient(&self, radicand: u64) -> BigRational {
        self.terms
            .get(&radicand)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Radicands with nonzero coefficient, ascending.
    pub fn radicands(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> + '_ {
        self.terms.iter().map(|(&n, c)| (n, c))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&n, v)| (n, v * c)).collect(),
        }
    }

    /// Applies `√n ↦ sign(n)·√n` term by term. `sign` must be multiplicative
    /// on radicands for this to be a field automorphism.
    pub fn conjugate_by(&self, mut sign: impl FnMut(u64) -> i8) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&n, c)| if sign(n) < 0 { (n, -c) } else { (n, c.clone()) })
                .collect(),
        }
    }

    /// Exact sign of the real number (all square roots positive).
    pub fn signum(&self) -> i8 {
        sign_of_radical_sum(&self.terms)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&n, c)| c.to_f64().unwrap_or(f64::NAN) * (n as f64).sqrt())
            .sum()
    }

    /// Bit size of the largest numerator or denominator.
    pub fn height_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    /// Multiplicative inverse, by repeatedly multiplying with the conjugate
    /// that flips one prime at a time.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let mut num = Self::one();
        let mut den = self.clone();
        while let Some(p) = den.radicands().map(largest_prime_factor).max().filter(|&p| p > 1) {
            let conj = den.conjugate_by(|n| if n % p == 0 { -1 } else { 1 });
            den = &den * &conj;
            num = &num * &conj;
        }
        let d = den.rational_part();
        Ok(num.scale(&d.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Whether all coefficients are integers (not the same as being an
    /// algebraic integer: `(1+√5)/2` has half-integer coefficients).
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    fn add_term(&mut self, n: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(n).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&n);
        }
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for FieldElement {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> AddAssign<&'a FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &'a FieldElement) {
        for (&n, c) in &rhs.terms {
            self.add_term(n, c.clone());
        }
    }
}

impl<'a> SubAssign<&'a FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &'a FieldElement) {
        for (&n, c) in &rhs.terms {
            self.add_term(n, -c);
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        let mut out = FieldElement::zero();
        for (&m, a) in &self.terms {
            for (&n, b) in &rhs.terms {
                let (outer, kernel) = radical_product(m, n);
                out.add_term(kernel, a * b * BigRational::from_integer(outer.into()));
            }
        }
        out
    }
}

impl<'a> MulAssign<&'a FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &'a FieldElement) {
        *self = &*self * rhs;
    }
}

impl<'a> Div<&'a FieldElement> for &FieldElement {
    type Output = FieldElement;
    /// Panics on division by zero; use [`FieldElement::checked_div`] otherwise.
    fn div(self, rhs: &'a FieldElement) -> FieldElement {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            terms: self.terms.iter().map(|(&n, c)| (n, -c)).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(mut self) -> FieldElement {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl std::iter::Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        let mut acc = FieldElement::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

/// Renders in the expression grammar accepted by [`parse_expr`](super::parse_expr),
/// e.g. `1/4 + 1/4*sqrt(5)`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (&n, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if n == 1 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "sqrt({n})")?;
            } else {
                write!(f, "{mag}*sqrt({n})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl serde::Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_expr(&text).map_err(serde::de::Error::custom)
    }
}
