//! Randomized algebraic laws for the scalar, series, and jet layers.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use dulac::scalars::{FieldElement, NumberField};
use dulac::series::{
    compose, exact_quotient, invert_change, lie_bracket, unit_inverse, CoordinateChange,
    MultiIndex, TruncatedSeries, VectorFieldJet,
};

fn q(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn rat() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn quartic_field() -> Arc<NumberField> {
    NumberField::new(
        vec![q(9), q(0), q(-2), q(0), q(1)],
        Some(vec![q(0), BigRational::new(BigInt::from(1), BigInt::from(6)), q(0), BigRational::new(BigInt::from(1), BigInt::from(6))]),
    )
    .expect("valid quartic field")
}

fn sparse_series(n: usize, cap: u32, min_degree: u32) -> impl Strategy<Value = TruncatedSeries> {
    let field = NumberField::gaussian();
    proptest::collection::vec(
        (
            proptest::collection::vec(0u32..=2u32, n)
                .prop_filter("degree floor", move |v| v.iter().sum::<u32>() >= min_degree),
            -5i64..=5,
            -5i64..=5,
        ),
        0..=5,
    )
    .prop_map(move |terms| {
        let mut s = TruncatedSeries::zero(&field, n, cap);
        for (exps, re, im) in terms {
            let c = FieldElement::new(&field, vec![q(re), q(im)]).expect("two coordinates");
            s.add_coeff(MultiIndex::new(exps), &c);
        }
        s
    })
}

fn origin_fixing_jet(n: usize, cap: u32) -> impl Strategy<Value = VectorFieldJet> {
    proptest::collection::vec(sparse_series(n, cap, 1), n..=n)
        .prop_map(|comps| VectorFieldJet::new(comps).expect("components agree"))
}

fn near_identity_change(n: usize, cap: u32) -> impl Strategy<Value = CoordinateChange> {
    proptest::collection::vec(sparse_series(n, cap, 2), n..=n).prop_map(move |tails| {
        let field = NumberField::gaussian();
        let comps: Vec<TruncatedSeries> = tails
            .into_iter()
            .enumerate()
            .map(|(j, tail)| TruncatedSeries::variable(&field, n, cap, j).add(&tail))
            .collect();
        CoordinateChange::new(comps).expect("identity linear part inverts")
    })
}

proptest! {
    #[test]
    fn rendered_gaussian_scalars_parse_back(re in rat(), im in rat()) {
        let field = NumberField::gaussian();
        let e = FieldElement::new(&field, vec![re, im]).expect("two coordinates");
        let text = e.to_string();
        let back = FieldElement::parse(&field, &text).expect("rendered text parses");
        prop_assert_eq!(back, e);
    }

    #[test]
    fn rendered_quartic_scalars_parse_back(coords in proptest::collection::vec(rat(), 4)) {
        let field = quartic_field();
        let e = FieldElement::new(&field, coords).expect("four coordinates");
        let text = e.to_string();
        let back = FieldElement::parse(&field, &text).expect("rendered text parses");
        prop_assert_eq!(back, e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_divide_back_out(
        (h, g) in (1usize..=3).prop_flat_map(|n| (sparse_series(n, 6, 0), sparse_series(n, 6, 0)))
    ) {
        prop_assume!(!g.is_zero());
        let product = h.mul(&g);
        let quotient = exact_quotient(&product, &g).expect("a genuine product divides");
        let shift = g.order().expect("g is nonzero");
        prop_assert_eq!(quotient, h.truncated(6 - shift));
    }

    #[test]
    fn unit_inverses_multiply_to_one(
        tail in (1usize..=3).prop_flat_map(|n| sparse_series(n, 6, 1))
    ) {
        let field = tail.field().clone();
        let n = tail.nvars();
        let u = TruncatedSeries::constant(&field, n, 6, FieldElement::one(&field)).add(&tail);
        let v = unit_inverse(&u).expect("nonzero constant term");
        let one = TruncatedSeries::constant(&field, n, 6, FieldElement::one(&field));
        prop_assert_eq!(u.mul(&v), one);
    }

    #[test]
    fn brackets_satisfy_the_jacobi_identity(
        (x, y, z) in (1usize..=3).prop_flat_map(|n| {
            (origin_fixing_jet(n, 6), origin_fixing_jet(n, 6), origin_fixing_jet(n, 6))
        })
    ) {
        let xy = lie_bracket(&x, &y).expect("matching dimensions");
        let yz = lie_bracket(&y, &z).expect("matching dimensions");
        let zx = lie_bracket(&z, &x).expect("matching dimensions");
        let total = lie_bracket(&xy, &z)
            .expect("matching dimensions")
            .add(&lie_bracket(&yz, &x).expect("matching dimensions"))
            .add(&lie_bracket(&zx, &y).expect("matching dimensions"));
        prop_assert!(total.is_zero());
    }

    #[test]
    fn coordinate_changes_cancel_their_inverses(
        change in (1usize..=3).prop_flat_map(|n| near_identity_change(n, 5))
    ) {
        let inverse = invert_change(&change);
        let forward = compose(&change, &inverse).expect("matching dimensions");
        let backward = compose(&inverse, &change).expect("matching dimensions");
        prop_assert!(forward.is_identity());
        prop_assert!(backward.is_identity());
    }
}
