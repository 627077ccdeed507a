#![allow(dead_code)]

use isodet_core::blocks::{direct_sum, frobenius, gamma, jordan, skew_sum, symplectic_unit, PolySpec};
use isodet_core::{Field, Matrix, Poly};
use rand::Rng;

/// Every `n×n` matrix over `F_p`, index read base `p` into row-major entries.
pub fn all_matrices(p: u32, n: usize) -> impl Iterator<Item = Matrix> {
    let f = Field::Prime(p);
    let total = (p as u64).pow((n * n) as u32);
    (0..total).map(move |mut idx| {
        let mut entries = vec![0i64; n * n];
        for e in entries.iter_mut() {
            *e = (idx % p as u64) as i64;
            idx /= p as u64;
        }
        Matrix::from_fn(f, n, n, |i, j| f.from_i64(entries[i * n + j]))
    })
}

pub fn random_int_matrix<R: Rng>(rng: &mut R, field: Field, n: usize, bound: i64) -> Matrix {
    Matrix::from_fn(field, n, n, |_, _| field.from_i64(rng.gen_range(-bound..=bound)))
}

/// Random nonsingular matrix with small entries.
pub fn random_invertible<R: Rng>(rng: &mut R, field: Field, n: usize) -> Matrix {
    loop {
        let t = random_int_matrix(rng, field, n, 2);
        if t.is_nonsingular() {
            return t;
        }
    }
}

/// A direct sum of canonical pieces, total size at most `max_n`, hidden by a random congruence.
pub fn random_block_form<R: Rng>(rng: &mut R, field: Field, max_n: usize) -> Matrix {
    let mut parts = Vec::new();
    let mut size = 0;
    let target = rng.gen_range(1..=max_n);
    while size < target {
        let room = target - size;
        let piece = match rng.gen_range(0..6) {
            0 => jordan(rng.gen_range(1..=room), &field.zero()).unwrap(),
            1 => gamma(field, rng.gen_range(1..=room)).unwrap(),
            2 if room >= 2 => symplectic_unit(field, rng.gen_range(1..=room / 2)).unwrap(),
            3 if room >= 2 => {
                let lambda = field.from_i64(rng.gen_range(2..=4));
                skew_sum(
                    &jordan(1, &lambda).unwrap(),
                    &Matrix::identity(field, 1),
                )
                .unwrap()
            }
            4 if room >= 2 => {
                let l = rng.gen_range(1..=(room / 2).min(2));
                let spec = PolySpec::new(Poly::from_i64(field, &[-1, 1]), l).unwrap();
                skew_sum(&frobenius(&spec), &Matrix::identity(field, l)).unwrap()
            }
            _ => Matrix::from_fn(field, 1, 1, |_, _| field.from_i64(rng.gen_range(1..=3))),
        };
        size += piece.rows();
        parts.push(piece);
    }
    let m = direct_sum(field, &parts).unwrap();
    let t = random_invertible(rng, field, m.rows());
    &(&t.transpose() * &m) * &t
}

/// `S^T M S`, written out without library helpers.
pub fn congruence(s: &Matrix, m: &Matrix) -> Matrix {
    &(&s.transpose() * m) * s
}
