mod common;

use isodet_core::blocks::{
    direct_sum, frobenius, gamma, jordan, reciprocal, skew_sum, PolySpec,
};
use isodet_core::{det_poly, Field, Matrix, Poly};
use proptest::prelude::*;

fn int_matrix(field: Field, n: usize, bound: i64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-bound..=bound, n * n)
        .prop_map(move |v| Matrix::from_fn(field, n, n, |i, j| field.from_i64(v[i * n + j])))
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rational),
        Just(Field::Prime(3)),
        Just(Field::Prime(5)),
        Just(Field::Prime(7)),
    ]
}

fn square_pair() -> impl Strategy<Value = (Matrix, Matrix)> {
    (field(), 0..=4usize).prop_flat_map(|(f, n)| (int_matrix(f, n, 4), int_matrix(f, n, 4)))
}

fn rect(field: Field) -> impl Strategy<Value = Matrix> {
    (0..=4usize, 0..=4usize).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-3i64..=3, r * c)
            .prop_map(move |v| Matrix::from_fn(field, r, c, |i, j| field.from_i64(v[i * c + j])))
    })
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(m in field().prop_flat_map(rect)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn inverse_is_two_sided((a, _) in square_pair()) {
        if let Ok(inv) = a.inverse() {
            let id = Matrix::identity(a.field(), a.rows());
            prop_assert_eq!(&(&a * &inv), &id);
            prop_assert_eq!(&(&inv * &a), &id);
        } else {
            prop_assert!(a.rank() < a.rows());
        }
    }

    #[test]
    fn det_is_multiplicative((a, b) in square_pair()) {
        let ab = &a * &b;
        prop_assert_eq!(ab.det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
        prop_assert_eq!(a.det().unwrap().is_zero(), !a.is_nonsingular());
    }

    #[test]
    fn det_poly_evaluates_pointwise((a, b) in square_pair(), t in -6i64..=6) {
        let f = a.field();
        let t = f.from_i64(t);
        let p = det_poly(&a, &b).unwrap();
        prop_assert!(p.degree().map_or(true, |d| d <= a.rows()));
        prop_assert_eq!(p.eval(&t), (&a + &b.scale(&t)).det().unwrap());
    }

    #[test]
    fn rank_sequences_are_weyr_monotone((a, _) in square_pair(), mu in -2i64..=2) {
        let n = a.rows();
        let mu = a.field().from_i64(mu);
        let r = a.power_rank_sequence(&mu, n + 1).unwrap();
        prop_assert_eq!(r[0], n);
        let shifted = &a - &Matrix::identity(a.field(), n).scale(&mu);
        for (k, rk) in r.iter().enumerate() {
            prop_assert_eq!(*rk, shifted.pow(k).unwrap().rank());
        }
        let d: Vec<usize> = r.windows(2).map(|w| w[0] - w[1]).collect();
        prop_assert!(d.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn reciprocal_respects_powers(c in prop::collection::vec(-3i64..=3, 1..4), l in 1usize..4) {
        let f = Field::Rational;
        let mut coeffs = c;
        if coeffs[0] == 0 {
            coeffs[0] = 1;
        }
        coeffs.push(1);
        let p = Poly::from_i64(f, &coeffs);
        let lhs = reciprocal(&p.pow(l)).unwrap();
        let rhs = reciprocal(&p).unwrap().pow(l);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(reciprocal(&reciprocal(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn frobenius_has_the_right_characteristic_polynomial(
        f in field(),
        c in prop::collection::vec(-3i64..=3, 1..3),
        l in 1usize..4,
    ) {
        let mut coeffs = c;
        coeffs.push(1);
        let spec = PolySpec::new(Poly::from_i64(f, &coeffs), l).unwrap();
        let m = frobenius(&spec);
        prop_assert_eq!(m.rows(), spec.size());
        // det(tI - F) as a polynomial in t
        let chi = det_poly(&-&m, &Matrix::identity(f, m.rows())).unwrap();
        prop_assert_eq!(chi, spec.expanded());
    }

    #[test]
    fn direct_sum_is_block_diagonal((a, b) in square_pair()) {
        let s = direct_sum(a.field(), &[a.clone(), b.clone()]).unwrap();
        let n = a.rows();
        let idx: Vec<usize> = (0..n).collect();
        let rest: Vec<usize> = (n..2 * n).collect();
        prop_assert_eq!(s.select(&idx, &idx), a.clone());
        prop_assert_eq!(s.select(&rest, &rest), b);
        prop_assert!(s.select(&idx, &rest).is_zero());
        prop_assert!(s.select(&rest, &idx).is_zero());
    }
}

#[test]
fn gamma_blocks_construct_over_several_fields() {
    for f in [Field::Rational, Field::Prime(3), Field::Prime(5), Field::Prime(7)] {
        for r in 1..=8 {
            let g = gamma(f, r).unwrap();
            assert_eq!(g.rows(), r);
            assert!(g.is_nonsingular());
        }
    }
}

#[test]
fn skew_sum_of_unit_pair_is_congruent_to_nilpotent_jordan() {
    let f = Field::Prime(3);
    let a = skew_sum(&jordan(1, &f.zero()).unwrap(), &Matrix::identity(f, 1)).unwrap();
    let target = jordan(2, &f.zero()).unwrap();
    let witness = common::all_matrices(3, 2)
        .find(|s| s.is_nonsingular() && common::congruence(s, &a) == target);
    let s = witness.expect("a congruence exists");
    assert_eq!(common::congruence(&s, &a), target);
}
