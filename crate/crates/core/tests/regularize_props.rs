mod common;

use isodet_core::blocks::{direct_sum, jordan};
use isodet_core::{regularize, Field, Matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{all_matrices, congruence, random_block_form, random_invertible};

fn sound(m: &Matrix) -> Vec<usize> {
    let r = regularize(m).unwrap();
    let f = m.field();
    let mut parts = vec![r.regular_part.clone()];
    parts.extend(r.singular_sizes.iter().map(|&s| jordan(s, &f.zero()).unwrap()));
    assert_eq!(congruence(&r.transform, m), direct_sum(f, &parts).unwrap());
    assert!(r.regular_part.is_nonsingular());
    assert!(r.singular_sizes.windows(2).all(|w| w[0] <= w[1]));
    r.singular_sizes
}

proptest! {
    #[test]
    fn sizes_are_congruence_invariant(seed in any::<u64>(), prime in prop::bool::ANY) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = if prime { Field::Prime(5) } else { Field::Rational };
        let m = random_block_form(&mut rng, f, 8);
        let t = random_invertible(&mut rng, f, m.rows());
        prop_assert_eq!(sound(&m), sound(&congruence(&t, &m)));
    }

    #[test]
    fn known_singular_parts_are_recovered(sizes in prop::collection::vec(1usize..=4, 0..4), seed in any::<u64>()) {
        let f = Field::Rational;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut parts = vec![Matrix::from_ints(f, &[[2, 1], [0, 3]])];
        parts.extend(sizes.iter().map(|&s| jordan(s, &f.zero()).unwrap()));
        let m = direct_sum(f, &parts).unwrap();
        let t = random_invertible(&mut rng, f, m.rows());
        let mut expected = sizes.clone();
        expected.sort_unstable();
        prop_assert_eq!(sound(&congruence(&t, &m)), expected);
    }
}

#[test]
fn exhaustive_small_f3_sizes_are_invariant() {
    let f = Field::Prime(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        for m in all_matrices(3, n) {
            let t = random_invertible(&mut rng, f, n);
            assert_eq!(sound(&m), sound(&congruence(&t, &m)), "{m}");
        }
    }
}
