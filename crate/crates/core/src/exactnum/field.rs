use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use num_rational::BigRational;

use super::radical::{is_squarefree, radical_product, radical_xor, RadicalBasis};
use super::{FieldElement, FieldError};

/// A real multiquadratic field `Q(√d₁, …, √d_r)`.
///
/// Generators are squarefree integers greater than one and independent
/// modulo squares, so the degree is exactly `2^r`. The basis is indexed by
/// squarefree radicand; each basis radicand remembers which subset of
/// generators produces it, which is what embeddings act on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MQField {
    generators: Vec<u64>,
    basis: BTreeMap<u64, u32>,
}

/// A real embedding, given by the image sign of each generator's square root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Embedding {
    pub signs: Vec<i8>,
}

impl Embedding {
    pub fn identity(r: usize) -> Self {
        Self { signs: vec![1; r] }
    }

    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|&s| s > 0)
    }

    /// The `mask`-th sign vector: bit `i` set means generator `i` flips.
    pub fn from_mask(r: usize, mask: u32) -> Self {
        Self {
            signs: (0..r)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect(),
        }
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.signs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *s > 0 { "+" } else { "-" })?;
        }
        f.write_str(")")
    }
}

impl MQField {
    pub fn rationals() -> Self {
        Self {
            generators: Vec::new(),
            basis: BTreeMap::from([(1, 0)]),
        }
    }

    pub fn new(generators: Vec<u64>) -> Result<Self, FieldError> {
        let mut span = RadicalBasis::new();
        for &d in &generators {
            if d <= 1 || !is_squarefree(d) {
                return Err(FieldError::BadGenerator(d));
            }
            if !span.insert(d) {
                return Err(FieldError::DependentGenerators(generators.clone()));
            }
        }
        let r = generators.len();
        if r > 24 {
            return Err(FieldError::TooManyGenerators(r));
        }
        let mut basis = BTreeMap::new();
        for mask in 0u32..(1 << r) {
            let radicand = (0..r)
                .filter(|i| mask >> i & 1 == 1)
                .fold(1, |acc, i| radical_xor(acc, generators[i]));
            basis.insert(radicand, mask);
        }
        Ok(Self { generators, basis })
    }

    /// The smallest multiquadratic field containing all given radicands.
    /// Generators are picked greedily in ascending radicand order.
    pub fn from_radicands(radicands: impl IntoIterator<Item = u64>) -> Self {
        let mut sorted: Vec<u64> = radicands.into_iter().filter(|&n| n > 1).collect();
        sorted.sort_unstable();
        sorted.dedup();
        let mut span = RadicalBasis::new();
        let generators = sorted.into_iter().filter(|&n| span.insert(n)).collect();
        Self::new(generators).expect("greedy generators are independent")
    }

    /// Adjoins further radicands (used by extensible parsing).
    pub fn extended_with(&self, radicands: impl IntoIterator<Item = u64>) -> Self {
        let mut span = RadicalBasis::new();
        let mut generators = self.generators.clone();
        for &g in &generators {
            span.insert(g);
        }
        let mut extra: Vec<u64> = radicands.into_iter().filter(|&n| n > 1).collect();
        extra.sort_unstable();
        for n in extra {
            if span.insert(n) {
                generators.push(n);
            }
        }
        Self::new(generators).expect("extension generators are independent")
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn degree(&self) -> usize {
        1 << self.rank()
    }

    pub fn is_rational(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn basis_radicands(&self) -> impl Iterator<Item = u64> + '_ {
        self.basis.keys().copied()
    }

    pub fn contains_radicand(&self, n: u64) -> bool {
        self.basis.contains_key(&n)
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.radicands().all(|n| self.contains_radicand(n))
    }

    /// Whether every element of `other` lies in `self`.
    pub fn contains_field(&self, other: &MQField) -> bool {
        other.generators.iter().all(|&g| self.contains_radicand(g))
    }

    pub fn check(&self, x: &FieldElement) -> Result<(), FieldError> {
        match x.radicands().find(|&n| !self.contains_radicand(n)) {
            None => Ok(()),
            Some(n) => Err(FieldError::Mismatch {
                radicand: n,
                field: self.to_string(),
            }),
        }
    }

    pub fn identity_embedding(&self) -> Embedding {
        Embedding::identity(self.rank())
    }

    /// All `2^r` embeddings, identity first.
    pub fn embeddings(&self) -> Vec<Embedding> {
        (0u32..(1 << self.rank()))
            .map(|m| Embedding::from_mask(self.rank(), m))
            .collect()
    }

    /// Sign picked up by `√n` under `e`, for a basis radicand `n`.
    pub fn radicand_sign(&self, n: u64, e: &Embedding) -> Result<i8, FieldError> {
        let mask = *self.basis.get(&n).ok_or_else(|| FieldError::Mismatch {
            radicand: n,
            field: self.to_string(),
        })?;
        Ok((0..self.rank())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| e.signs[i])
            .product())
    }

    /// `σ_e(x)` as an element (coefficient-wise sign changes).
    pub fn embed(&self, x: &FieldElement, e: &Embedding) -> Result<FieldElement, FieldError> {
        if e.signs.len() != self.rank() {
            return Err(FieldError::EmbeddingArity {
                expected: self.rank(),
                got: e.signs.len(),
            });
        }
        self.check(x)?;
        Ok(x.conjugate_by(|n| self.radicand_sign(n, e).unwrap_or(1)))
    }

    /// Exact sign of `σ_e(x)` as a real number.
    pub fn embed_sign(&self, x: &FieldElement, e: &Embedding) -> Result<i8, FieldError> {
        Ok(self.embed(x, e)?.signum())
    }

    /// Restriction of an embedding of `self` to a subfield, as a sign vector
    /// on the subfield's generators.
    pub fn restrict(&self, e: &Embedding, sub: &MQField) -> Result<Embedding, FieldError> {
        let signs = sub
            .generators
            .iter()
            .map(|&g| self.radicand_sign(g, e))
            .collect::<Result<_, _>>()?;
        Ok(Embedding { signs })
    }

    /// A square root of `x` inside the field, if one exists.
    ///
    /// Peels off the last generator `g`: writing `x = u + v√g` and
    /// `y = p + q√g` over the smaller field, `y² = x` means
    /// `p² + g·q² = u` and `2pq = v`, so `p² = (u ± √(u² − g·v²))/2`.
    pub fn sqrt(&self, x: &FieldElement) -> Option<FieldElement> {
        if self.check(x).is_err() {
            return None;
        }
        let y = self.sqrt_unchecked(x)?;
        debug_assert_eq!(&(&y * &y), x);
        Some(y)
    }

    pub fn is_square(&self, x: &FieldElement) -> bool {
        self.sqrt(x).is_some()
    }

    fn sqrt_unchecked(&self, x: &FieldElement) -> Option<FieldElement> {
        if x.is_zero() {
            return Some(FieldElement::zero());
        }
        if let Some(q) = x.as_rational() {
            let y = FieldElement::sqrt_rational(&q).ok()?;
            return self.contains(&y).then_some(y);
        }
        let (&g, rest) = self.generators.split_last()?;
        let sub = MQField::new(rest.to_vec()).expect("subset of independent generators");
        let (u, v) = self.split_at_generator(x, g);
        let gg = FieldElement::from_int(g as i64);
        let two = FieldElement::from_int(2);
        if v.is_zero() {
            if let Some(p) = sub.sqrt_unchecked(&u) {
                return Some(p);
            }
            let q = sub.sqrt_unchecked(&(&u / &gg))?;
            return Some(&q * &FieldElement::sqrt_of(g).ok()?);
        }
        let n = sub.sqrt_unchecked(&(&(&u * &u) - &(&gg * &(&v * &v))))?;
        for cand in [&u + &n, &u - &n] {
            if let Some(p) = sub.sqrt_unchecked(&(&cand / &two)) {
                if p.is_zero() {
                    continue;
                }
                let q = &v / &(&two * &p);
                let y = &p + &(&q * &FieldElement::sqrt_of(g).ok()?);
                if &(&y * &y) == x {
                    return Some(y);
                }
            }
        }
        None
    }

    /// `x = u + v·√g` with `u`, `v` free of `√g`.
    fn split_at_generator(&self, x: &FieldElement, g: u64) -> (FieldElement, FieldElement) {
        let gi = self.generators.iter().position(|&h| h == g).expect("generator of the field");
        let mut u = FieldElement::zero();
        let mut v = FieldElement::zero();
        for (r, c) in x.terms() {
            let mask = self.basis[&r];
            if mask >> gi & 1 == 1 {
                let rest = radical_xor(r, g);
                // √rest · √g = outer · √r
                let (outer, _) = radical_product(rest, g);
                let coeff = c / BigRational::from_integer(outer.into());
                v += &FieldElement::monomial(coeff, rest);
            } else {
                u += &FieldElement::monomial(c.clone(), r);
            }
        }
        (u, v)
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x + y)
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x - y)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x * y)
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        self.check(y)?;
        x.checked_div(y)
    }
}

impl fmt::Display for MQField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return f.write_str("Q");
        }
        f.write_str("Q(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "sqrt({g})")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for MQField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MQField({self})")
    }
}

impl Serialize for MQField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.generators.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MQField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let generators = Vec::<u64>::deserialize(d)?;
        MQField::new(generators).map_err(serde::de::Error::custom)
    }
}

/// The smallest multiquadratic field containing every element: the span of
/// all radicands with nonzero coefficient, closed under products.
pub fn subfield_generated<'a>(elems: impl IntoIterator<Item = &'a FieldElement>) -> MQField {
    MQField::from_radicands(elems.into_iter().flat_map(|x| x.radicands().collect::<Vec<_>>()))
}
