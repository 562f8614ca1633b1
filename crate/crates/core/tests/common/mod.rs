//! Seeded random inputs shared by the property suites.
#![allow(dead_code)]

use hyplat::exactnum::{FieldElement, MQField};
use hyplat::linalg::Matrix;
use hyplat::quat::{Quaternion, QuaternionAlgebra};
use hyplat::skewherm::{DVector, SkewHermitianForm};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut impl Rng, bound: i64) -> FieldElement {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound.max(1));
    FieldElement::from_ratio(num, den)
}

pub fn integer(rng: &mut impl Rng, bound: i64) -> FieldElement {
    FieldElement::from_int(rng.gen_range(-bound..=bound))
}

/// A random element with rational coefficients on every basis radicand.
pub fn element(rng: &mut impl Rng, field: &MQField, bound: i64) -> FieldElement {
    let mut x = FieldElement::zero();
    for r in field.basis_radicands() {
        let c = rational(rng, bound);
        if r == 1 {
            x += &c;
        } else {
            x += &(&c * &FieldElement::sqrt_of(r).unwrap());
        }
    }
    x
}

pub fn nonzero_element(rng: &mut impl Rng, field: &MQField, bound: i64) -> FieldElement {
    loop {
        let x = element(rng, field, bound);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn quaternion(rng: &mut impl Rng, field: &MQField, bound: i64) -> Quaternion {
    Quaternion::new(
        element(rng, field, bound),
        element(rng, field, bound),
        element(rng, field, bound),
        element(rng, field, bound),
    )
}

pub fn int_quaternion(rng: &mut impl Rng, bound: i64) -> Quaternion {
    Quaternion::new(integer(rng, bound), integer(rng, bound), integer(rng, bound), integer(rng, bound))
}

pub fn pure_int_quaternion(rng: &mut impl Rng, bound: i64) -> Quaternion {
    Quaternion::new(FieldElement::zero(), integer(rng, bound), integer(rng, bound), integer(rng, bound))
}

pub fn int_vector(rng: &mut impl Rng, m: usize, bound: i64) -> DVector {
    DVector::new((0..m).map(|_| int_quaternion(rng, bound)).collect())
}

pub fn nonzero_int_vector(rng: &mut impl Rng, m: usize, bound: i64) -> DVector {
    loop {
        let v = int_vector(rng, m, bound);
        if !v.is_zero() {
            return v;
        }
    }
}

/// A random invertible matrix with small rational entries.
pub fn invertible(rng: &mut impl Rng, n: usize, bound: i64) -> Matrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| rational(rng, bound));
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// A random nondegenerate skew-Hermitian form with integer entries:
/// pure diagonal, `a_ji = −a_ij*` below the diagonal.
#[allow(clippy::needless_range_loop)]
pub fn skew_form(rng: &mut impl Rng, alg: &QuaternionAlgebra, m: usize, bound: i64) -> SkewHermitianForm {
    loop {
        let mut gram = vec![vec![Quaternion::zero(); m]; m];
        for i in 0..m {
            gram[i][i] = pure_int_quaternion(rng, bound);
            for j in i + 1..m {
                let q = int_quaternion(rng, bound);
                gram[j][i] = q.conj().neg();
                gram[i][j] = q;
            }
        }
        if let Ok(f) = SkewHermitianForm::new(alg.clone(), gram) {
            return f;
        }
    }
}

/// `T* A T` for a random invertible `T`: an equivalent form.
pub fn conjugated(rng: &mut impl Rng, f: &SkewHermitianForm, bound: i64) -> SkewHermitianForm {
    let alg = f.algebra();
    let m = f.rank();
    loop {
        let t: Vec<DVector> = (0..m).map(|_| int_vector(rng, m, bound)).collect();
        // Columns of T are the vectors t_s, so (T* A T)_rs = F(t_r, t_s).
        let gram: Vec<Vec<Quaternion>> =
            t.iter().map(|x| t.iter().map(|y| f.evaluate(x, y).unwrap()).collect()).collect();
        if let Ok(g) = SkewHermitianForm::new(alg.clone(), gram) {
            return g;
        }
    }
}

/// A 1×1 form `(q)` over `alg` with the requested signature, found by
/// search over small pure quaternions.
pub fn rank_one_with_signature(alg: &QuaternionAlgebra, positive: usize, negative: usize) -> Quaternion {
    for x in -3i64..=3 {
        for y in -3i64..=3 {
            for z in -3i64..=3 {
                let q = Quaternion::from_ints(0, x, y, z);
                if let Ok(f) = SkewHermitianForm::new(alg.clone(), vec![vec![q.clone()]]) {
                    if let Ok(s) = f.signature() {
                        if s.positive == positive && s.negative == negative {
                            return q;
                        }
                    }
                }
            }
        }
    }
    panic!("no rank-one form with signature ({positive}, {negative}) over {alg}");
}

/// A form equivalent to `diag(q₋, q₊, …, q₊)` of signature `(2m−1, 1)`.
pub fn admissible_form(rng: &mut impl Rng, alg: &QuaternionAlgebra, m: usize) -> SkewHermitianForm {
    let hyp = rank_one_with_signature(alg, 1, 1);
    let pos = rank_one_with_signature(alg, 2, 0);
    let mut gram = vec![vec![Quaternion::zero(); m]; m];
    gram[0][0] = hyp;
    for (i, row) in gram.iter_mut().enumerate().skip(1) {
        row[i] = pos.clone();
    }
    let f = SkewHermitianForm::new(alg.clone(), gram).unwrap();
    conjugated(rng, &f, 2)
}
