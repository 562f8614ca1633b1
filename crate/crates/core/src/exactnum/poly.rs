//! Dense univariate polynomials over Q, just enough for minimal polynomials.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::subfield_generated;
use super::FieldElement;

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::new(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        let d = rhs.degree().expect("polynomial division by zero");
        let lc = rhs.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let top = rem.len() - 1;
            let c = rem[top].clone() / &lc;
            if !c.is_zero() {
                for (j, b) in rhs.coeffs.iter().enumerate() {
                    rem[top - d + j] -= &c * b;
                }
            }
            quot[top - d] = c;
            rem.pop();
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(FieldElement::zero(), |acc, c| {
            &(&acc * x) + &FieldElement::from_rational(c.clone())
        })
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

/// Monic minimal polynomial over Q: the squarefree part of `∏_σ (t − σ(x))`
/// over all embeddings of the field generated by `x`.
pub fn minimal_polynomial(x: &FieldElement) -> RatPoly {
    let field = subfield_generated([x]);
    // Coefficients of the running product, ascending, still in the field.
    let mut acc: Vec<FieldElement> = vec![FieldElement::one()];
    for e in field.embeddings() {
        let root = field.embed(x, &e).expect("x lies in its own field");
        let mut next = vec![FieldElement::zero(); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= &(c * &root);
        }
        acc = next;
    }
    let coeffs = acc
        .into_iter()
        .map(|c| {
            c.as_rational()
                .expect("characteristic polynomial is Galois-invariant")
        })
        .collect();
    RatPoly::new(coeffs).squarefree_part()
}

/// True iff the minimal polynomial has integer coefficients.
pub fn is_algebraic_integer(x: &FieldElement) -> bool {
    if let Some(q) = x.as_rational() {
        return q.is_integer();
    }
    minimal_polynomial(x).has_integer_coefficients()
}
