mod common;

use hyplat::exactnum::{is_algebraic_integer, minimal_polynomial, parse_expr, FieldElement, MQField};
use proptest::prelude::*;

fn fields() -> Vec<MQField> {
    vec![
        MQField::rationals(),
        MQField::new(vec![2]).unwrap(),
        MQField::new(vec![2, 3]).unwrap(),
        MQField::new(vec![2, 3, 5]).unwrap(),
    ]
}

#[test]
fn field_axioms_on_random_triples() {
    let mut rng = common::rng(1);
    let mut count = 0;
    for field in fields() {
        for _ in 0..300 {
            let x = common::element(&mut rng, &field, 9);
            let y = common::element(&mut rng, &field, 9);
            let z = common::element(&mut rng, &field, 9);
            assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            assert_eq!(&x * &y, &y * &x);
            assert_eq!(&(&x - &y) + &y, x);
            if !x.is_zero() {
                assert!((&x * &x.inv().unwrap()).is_one(), "{x}");
            }
            assert!(field.contains(&(&x * &y)));
            count += 1;
        }
    }
    assert!(count >= 1000);
}

#[test]
fn embeddings_are_homomorphisms() {
    let mut rng = common::rng(2);
    for field in fields() {
        for _ in 0..60 {
            let x = common::element(&mut rng, &field, 7);
            let y = common::element(&mut rng, &field, 7);
            for e in field.embeddings() {
                let ex = field.embed(&x, &e).unwrap();
                let ey = field.embed(&y, &e).unwrap();
                assert_eq!(field.embed(&(&x * &y), &e).unwrap(), &ex * &ey);
                assert_eq!(field.embed(&(&x + &y), &e).unwrap(), &ex + &ey);
                let numeric = ex.to_f64() * ey.to_f64();
                let exact = (&ex * &ey).to_f64();
                assert!((numeric - exact).abs() <= 1e-9 * (1.0 + exact.abs()), "{numeric} vs {exact}");
            }
        }
    }
}

#[test]
fn signs_agree_with_floating_point_away_from_zero() {
    let mut rng = common::rng(3);
    let field = MQField::new(vec![2, 3, 5]).unwrap();
    for _ in 0..300 {
        let x = common::element(&mut rng, &field, 20);
        let approx = x.to_f64();
        if approx.abs() > 1e-6 {
            assert_eq!(x.signum(), if approx > 0.0 { 1 } else { -1 }, "{x}");
        }
        assert_eq!(x.signum() == 0, x.is_zero());
    }
}

#[test]
fn sign_of_near_cancellation() {
    let x = parse_expr("sqrt(2) + sqrt(3) - sqrt(10) + 1/1000").unwrap();
    assert_eq!(x.signum(), if x.to_f64() > 0.0 { 1 } else { -1 });
    let y = parse_expr("99/70 - sqrt(2)").unwrap();
    assert_eq!(y.signum(), 1);
    let z = parse_expr("sqrt(2) - 114243/80782").unwrap();
    assert_eq!(z.signum(), -1);
}

#[test]
fn minimal_polynomials_annihilate() {
    let mut rng = common::rng(4);
    for field in fields().into_iter().take(3) {
        for _ in 0..40 {
            let x = common::element(&mut rng, &field, 5);
            let p = minimal_polynomial(&x);
            assert!(p.eval(&x).is_zero(), "{p} at {x}");
        }
    }
}

#[test]
fn algebraic_integers_form_a_ring_on_samples() {
    let mut rng = common::rng(5);
    let field = MQField::new(vec![2, 5]).unwrap();
    let half_golden = parse_expr("(1 + sqrt(5))/2").unwrap();
    assert!(is_algebraic_integer(&half_golden));
    let mut samples = vec![half_golden];
    for _ in 0..8 {
        let mut x = FieldElement::zero();
        for r in field.basis_radicands() {
            let c: i64 = rand::Rng::gen_range(&mut rng, -4..=4);
            x += &FieldElement::monomial(num_rational::BigRational::from_integer(c.into()), r);
        }
        assert!(is_algebraic_integer(&x), "{x}");
        samples.push(x);
    }
    for x in &samples {
        for y in &samples {
            assert!(is_algebraic_integer(&(x + y)), "{x} + {y}");
            assert!(is_algebraic_integer(&(x * y)), "{x} * {y}");
        }
    }
    assert!(!is_algebraic_integer(&parse_expr("sqrt(2)/2").unwrap()));
}

proptest! {
    #[test]
    fn display_parses_back(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in -9i64..9) {
        let x = &FieldElement::from_ratio(a, b) + &(&FieldElement::from_int(c) * &FieldElement::sqrt_of(6).unwrap());
        let x = &x + &(&FieldElement::from_ratio(d, 7) * &FieldElement::sqrt_of(5).unwrap());
        prop_assert_eq!(parse_expr(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn square_roots_are_exact(a in -20i64..20, b in -20i64..20) {
        let field = MQField::new(vec![2, 3]).unwrap();
        let y = &FieldElement::from_int(a) + &(&FieldElement::from_int(b) * &FieldElement::sqrt_of(6).unwrap());
        let sq = &y * &y;
        let r = field.sqrt(&sq).expect("a square has a root");
        prop_assert_eq!(&r * &r, sq);
    }
}
