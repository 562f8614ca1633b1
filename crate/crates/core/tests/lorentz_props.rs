mod common;

use hyplat::exactnum::{FieldElement, MQField};
use hyplat::linalg::{signature, Matrix};
use hyplat::lorentz::{
    check_admissible, fixed_subspace, involution_from_subspace, orthogonal_complement, rational_isotropy,
    restricted_form, FormError, Isotropy, QuadraticSpace, Subspace,
};
use rand::Rng;

/// `Sᵀ D S` for `D = diag(d₁, …, d_n, −c)`, with `c` positive and its
/// conjugates negative over `Q(√2)`, so the form stays admissible.
fn random_admissible(rng: &mut impl Rng, n: usize, over_sqrt2: bool) -> QuadraticSpace {
    let field = if over_sqrt2 { MQField::new(vec![2]).unwrap() } else { MQField::rationals() };
    let mut diag: Vec<FieldElement> =
        (0..n - 1).map(|_| FieldElement::from_ratio(rng.gen_range(1..=5), rng.gen_range(1..=3))).collect();
    let last = if over_sqrt2 {
        // −(1 + √2) has conjugate √2 − 1 > 0.
        -(&FieldElement::one() + &FieldElement::sqrt_of(2).unwrap())
    } else {
        FieldElement::from_int(-rng.gen_range(1..=5))
    };
    diag.push(last);
    let s = common::invertible(rng, n, 3);
    let q = QuadraticSpace::new(field, s.congruent(&Matrix::diagonal(&diag))).unwrap();
    assert!(check_admissible(&q).admissible);
    q
}

fn random_subspace(rng: &mut impl Rng, n: usize, dim: usize) -> Option<Subspace> {
    let basis = (0..dim).map(|_| (0..n).map(|_| common::integer(rng, 3)).collect()).collect();
    Subspace::new(n, basis).ok()
}

#[test]
fn involutions_are_isometric_and_fix_their_subspace() {
    let mut rng = common::rng(20);
    let mut done = 0;
    while done < 120 {
        let n = rng.gen_range(2..=5);
        let q = random_admissible(&mut rng, n, done % 3 == 0);
        let l = rng.gen_range(1..n);
        let Some(v1) = random_subspace(&mut rng, n, l) else { continue };
        let inv = match involution_from_subspace(&q, &v1) {
            Ok(inv) => inv,
            Err(FormError::DegenerateRestriction) => continue,
            Err(e) => panic!("{e}"),
        };
        let m = inv.isometry.matrix();
        assert!(m.mul(m).is_identity());
        assert_eq!(m.congruent(q.form()), *q.form());
        let fix = fixed_subspace(n, std::slice::from_ref(&inv.isometry));
        assert!(fix.same_span(&v1));
        let perp = orthogonal_complement(&q, &v1);
        let total = restricted_form(&q, &v1).signature + restricted_form(&q, &perp).signature;
        assert_eq!(total, q.signature());
        done += 1;
    }
}

#[test]
fn isotropy_witnesses_are_null_vectors() {
    let mut rng = common::rng(21);
    let mut found = 0;
    for _ in 0..60 {
        let n = rng.gen_range(2..=4);
        let diag: Vec<FieldElement> = (0..n)
            .map(|i| {
                let v = rng.gen_range(1..=6);
                FieldElement::from_int(if i == n - 1 { -v } else { v })
            })
            .collect();
        let q = QuadraticSpace::diagonal(MQField::rationals(), &diag).unwrap();
        let report = rational_isotropy(&q, 12);
        if let Isotropy::Isotropic { witness } = report.outcome {
            let w: Vec<FieldElement> = witness.iter().map(|&c| FieldElement::from_int(c)).collect();
            assert!(w.iter().any(|c| !c.is_zero()));
            assert!(q.inner(&w, &w).is_zero(), "{witness:?}");
            assert_eq!(report.uniform, Some(false));
            found += 1;
        }
    }
    assert!(found > 10);
}

#[test]
fn definite_restrictions_have_expected_signature() {
    let q = QuadraticSpace::diagonal(
        MQField::rationals(),
        &[1, 1, 1, -1].map(FieldElement::from_int),
    )
    .unwrap();
    let v = Subspace::coordinate(4, &[0, 1]);
    assert_eq!(signature(&restricted_form(&q, &v).gram), hyplat::linalg::SignatureTriple::new(2, 0, 0));
}
