mod common;

use hyplat::exactnum::{FieldElement, MQField};
use hyplat::quat::{hilbert_symbol, relevant_places, Place, Quaternion, QuaternionAlgebra};
use num_rational::BigRational;
use rand::Rng;

fn algebras() -> Vec<QuaternionAlgebra> {
    vec![
        QuaternionAlgebra::from_ints(1, 1).unwrap(),
        QuaternionAlgebra::from_ints(-1, -1).unwrap(),
        QuaternionAlgebra::from_ints(2, -5).unwrap(),
        QuaternionAlgebra::new(FieldElement::sqrt_of(2).unwrap(), FieldElement::from_int(-3)).unwrap(),
    ]
}

#[test]
fn norm_is_multiplicative_and_conjugation_reverses_products() {
    let mut rng = common::rng(40);
    let mut pairs = 0;
    for alg in algebras() {
        for _ in 0..300 {
            let p = common::quaternion(&mut rng, alg.field(), 6);
            let q = common::quaternion(&mut rng, alg.field(), 6);
            let pq = alg.mul(&p, &q);
            assert_eq!(alg.norm(&pq), &alg.norm(&p) * &alg.norm(&q));
            assert_eq!(pq.conj(), alg.mul(&q.conj(), &p.conj()));
            assert_eq!(q.trace(), q.conj().trace());
            assert_eq!(alg.mul(&q, &q.conj()), Quaternion::scalar(alg.norm(&q)));
            pairs += 1;
        }
    }
    assert!(pairs >= 1000);
}

#[test]
fn split_representation_is_a_homomorphism() {
    let mut rng = common::rng(41);
    let alg = QuaternionAlgebra::from_ints(1, 1).unwrap();
    let field = MQField::rationals();
    for _ in 0..300 {
        let p = common::quaternion(&mut rng, &field, 8);
        let q = common::quaternion(&mut rng, &field, 8);
        let mp = alg.matrix_rep_split(&p).unwrap();
        let mq = alg.matrix_rep_split(&q).unwrap();
        assert_eq!(alg.matrix_rep_split(&alg.mul(&p, &q)).unwrap(), mp.mul(&mq));
        assert_eq!(mp.determinant(), alg.norm(&p));
        assert_eq!(&mp[(0, 0)] + &mp[(1, 1)], p.trace());
    }
}

#[test]
fn inverses_exist_off_the_null_cone() {
    let mut rng = common::rng(42);
    for alg in algebras() {
        for _ in 0..50 {
            let q = common::quaternion(&mut rng, alg.field(), 5);
            match alg.inverse(&q) {
                Some(inv) => assert_eq!(alg.mul(&q, &inv), Quaternion::one()),
                None => assert!(alg.norm(&q).is_zero()),
            }
        }
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn hilbert_reciprocity() {
    let mut rng = common::rng(43);
    let mut pairs = 0;
    while pairs < 200 {
        let a: i64 = rng.gen_range(-50..=50);
        let b: i64 = rng.gen_range(-50..=50);
        if a == 0 || b == 0 {
            continue;
        }
        let places = relevant_places(&q(a), &q(b));
        assert!(places.contains(&Place::Infinity) && places.contains(&Place::Prime(2)));
        let product: i32 = places.iter().map(|&v| i32::from(hilbert_symbol(&q(a), &q(b), v))).product();
        assert_eq!(product, 1, "({a}, {b})");
        pairs += 1;
    }
}

#[test]
fn hilbert_symbol_is_symmetric_and_bilinear() {
    let mut rng = common::rng(44);
    for _ in 0..100 {
        let [a, b, c] = [0; 3].map(|_| loop {
            let x: i64 = rng.gen_range(-30..=30);
            if x != 0 {
                break x;
            }
        });
        for v in relevant_places(&q(a * b), &q(c)) {
            assert_eq!(hilbert_symbol(&q(a), &q(c), v), hilbert_symbol(&q(c), &q(a), v));
            assert_eq!(
                hilbert_symbol(&q(a * b), &q(c), v),
                hilbert_symbol(&q(a), &q(c), v) * hilbert_symbol(&q(b), &q(c), v)
            );
        }
    }
}
