use isodet_cli::document::MatrixDocument;
use isodet_core::{Field, Matrix};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Matrix> {
    let field = prop_oneof![
        Just(Field::Rational),
        Just(Field::Prime(3)),
        Just(Field::Prime(5)),
        Just(Field::Prime(101)),
    ];
    (field, 0..=5usize).prop_flat_map(|(f, n)| {
        prop::collection::vec((-50i64..=50, 1i64..=9), n * n).prop_map(move |v| {
            Matrix::from_fn(f, n, n, |i, j| {
                let (a, b) = v[i * n + j];
                match f {
                    Field::Rational => f.from_ratio(a, b).unwrap(),
                    _ => f.from_i64(a),
                }
            })
        })
    })
}

proptest! {
    #[test]
    fn text_round_trip(m in matrix()) {
        let doc = MatrixDocument::from_matrix(&m);
        let back = MatrixDocument::parse(&doc.to_text()).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn json_round_trip(m in matrix()) {
        let doc = MatrixDocument::from_matrix(&m);
        let back = MatrixDocument::parse(&doc.to_json()).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_matrix().unwrap(), m);
    }
}
