//! Brute-force isometry groups over small prime fields.
//!
//! Every `S ∈ M_n(F_p)` is visited as an integer `0 … p^{n²}-1` read in base
//! `p`, digit `i` filling entry `i` in row-major order. A candidate is kept when
//! `S^T M S = M` and `det S ≠ 0`. The congruence test goes first: it fails on
//! the first entry for most candidates, so it is cheaper than elimination.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::decide::Verdict;
use crate::exactmat::{ExactError, Field, Matrix, Scalar};
use crate::regularize::congruent;

/// Largest enumeration the oracle accepts by default: all of `M_4(F_3)`.
pub const MAX_ENUMERATION: u64 = 43_046_721;

/// Largest matrix side the oracle handles.
pub const MAX_SIDE: usize = 4;

const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration of {needed} matrices exceeds the budget of {limit}")]
    BudgetExceeded { needed: u128, limit: u64 },
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Order of the isometry group and how often each determinant occurs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IsometrySummary {
    pub group_order: u64,
    /// Residue of `det S` → number of isometries with that determinant.
    pub det_counts: BTreeMap<u32, u64>,
}

impl IsometrySummary {
    pub fn all_det_one(&self) -> bool {
        self.det_counts.keys().all(|&d| d == 1)
    }

    /// Multiset of determinants, expanded.
    pub fn det_values(&self, field: Field) -> Vec<Scalar> {
        self.det_counts
            .iter()
            .flat_map(|(&d, &c)| std::iter::repeat_n(field.from_i64(d as i64), c as usize))
            .collect()
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.all_det_one())
    }

    fn record(&mut self, det: u32) {
        self.group_order += 1;
        *self.det_counts.entry(det).or_default() += 1;
    }

    pub fn merge(mut self, other: IsometrySummary) -> IsometrySummary {
        self.group_order += other.group_order;
        for (d, c) in other.det_counts {
            *self.det_counts.entry(d).or_default() += c;
        }
        self
    }
}

/// `|GL_n(F_p)| = ∏ (p^n - p^i)`.
pub fn gl_order(p: u32, n: usize) -> u128 {
    let pn = (p as u128).pow(n as u32);
    (0..n).map(|i| pn - (p as u128).pow(i as u32)).product()
}

/// A square matrix over `F_p` with at most [`MAX_SIDE`] rows, entries in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Small {
    n: usize,
    p: u32,
    a: [u32; MAX_SIDE * MAX_SIDE],
}

impl Small {
    fn zero(n: usize, p: u32) -> Small {
        Small {
            n,
            p,
            a: [0; MAX_SIDE * MAX_SIDE],
        }
    }

    fn from_matrix(m: &Matrix, p: u32) -> Small {
        let n = m.rows();
        let mut s = Small::zero(n, p);
        for i in 0..n {
            for j in 0..n {
                s.a[i * n + j] = m.get(i, j).residue().expect("residue entry");
            }
        }
        s
    }

    fn from_index(n: usize, p: u32, mut idx: u64) -> Small {
        let mut s = Small::zero(n, p);
        for e in s.a.iter_mut().take(n * n) {
            *e = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        s
    }

    /// Next matrix in enumeration order (wraps to zero).
    fn increment(&mut self) {
        for e in self.a.iter_mut().take(self.n * self.n) {
            *e += 1;
            if *e < self.p {
                return;
            }
            *e = 0;
        }
    }

    fn at(&self, i: usize, j: usize) -> u32 {
        self.a[i * self.n + j]
    }

    fn to_matrix(self) -> Matrix {
        let f = Field::Prime(self.p);
        Matrix::from_fn(f, self.n, self.n, |i, j| f.from_i64(self.at(i, j) as i64))
    }

    /// `S^T M S = M`, column by column with early exit.
    fn fixes(&self, m: &Small) -> bool {
        let (n, p) = (self.n, self.p as u64);
        let mut col = [0u64; MAX_SIDE];
        for j in 0..n {
            for (k, c) in col.iter_mut().enumerate().take(n) {
                *c = (0..n)
                    .map(|l| m.at(k, l) as u64 * self.at(l, j) as u64)
                    .sum::<u64>()
                    % p;
            }
            for i in 0..n {
                let v = (0..n).map(|k| self.at(k, i) as u64 * col[k]).sum::<u64>() % p;
                if v != m.at(i, j) as u64 {
                    return false;
                }
            }
        }
        true
    }

    fn det(&self) -> u32 {
        let (n, p) = (self.n, self.p as i64);
        let mut a: Vec<i64> = self.a[..n * n].iter().map(|&x| x as i64).collect();
        let mut det = 1i64;
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return 0;
            };
            if r != c {
                for j in 0..n {
                    a.swap(r * n + j, c * n + j);
                }
                det = p - det;
            }
            let piv = a[c * n + c];
            det = det * piv % p;
            let inv = inv_mod(piv, p);
            for r in c + 1..n {
                let f = a[r * n + c] * inv % p;
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    a[r * n + j] = (a[r * n + j] - f * a[c * n + j]).rem_euclid(p);
                }
            }
        }
        det as u32
    }
}

fn inv_mod(a: i64, p: i64) -> i64 {
    let (mut r0, mut r1, mut s0, mut s1) = (p, a, 0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p)
}

fn check_input(m: &Matrix) -> Result<u32, OracleError> {
    if !m.is_square() {
        return Err(ExactError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    let p = match m.field() {
        Field::Prime(p) => p,
        Field::Rational => {
            return Err(OracleError::UnsupportedField(
                "the oracle needs a finite field".to_string(),
            ))
        }
    };
    if m.rows() > MAX_SIDE {
        return Err(OracleError::BudgetExceeded {
            needed: space_size(p, m.rows()),
            limit: MAX_ENUMERATION,
        });
    }
    Ok(p)
}

fn space_size(p: u32, n: usize) -> u128 {
    (p as u128).saturating_pow((n * n) as u32)
}

fn check_budget(p: u32, n: usize, limit: u64) -> Result<u64, OracleError> {
    let needed = space_size(p, n);
    if needed > limit as u128 {
        return Err(OracleError::BudgetExceeded { needed, limit });
    }
    Ok(needed as u64)
}

/// Scans `start..end` and hands every isometry with its determinant to `visit`.
fn scan<F: FnMut(&Small, u32)>(form: &Small, start: u64, end: u64, mut visit: F) {
    let mut s = Small::from_index(form.n, form.p, start);
    for _ in start..end {
        if s.fixes(form) {
            let d = s.det();
            if d != 0 {
                visit(&s, d);
            }
        }
        s.increment();
    }
}

fn chunks(total: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let count = u32::try_from(total.div_ceil(CHUNK)).expect("enumeration budget");
    (0..count).into_par_iter().map(move |c| {
        let c = c as u64;
        (c * CHUNK, ((c + 1) * CHUNK).min(total))
    })
}

/// Isometry group of `M` by exhaustive search over all of `M_n(F_p)`.
pub fn enumerate_isometries(m: &Matrix, limit: u64) -> Result<IsometrySummary, OracleError> {
    let p = check_input(m)?;
    let total = check_budget(p, m.rows(), limit)?;
    let form = Small::from_matrix(m, p);
    let summary = chunks(total)
        .map(|(a, b)| {
            let mut acc = IsometrySummary::default();
            scan(&form, a, b, |_, d| acc.record(d));
            acc
        })
        .reduce(IsometrySummary::default, IsometrySummary::merge);
    debug_assert_eq!(gl_order(p, m.rows()) % summary.group_order as u128, 0);
    Ok(summary)
}

/// `IN_XI` iff every isometry found has determinant 1.
pub fn oracle_verdict(m: &Matrix, limit: u64) -> Result<Verdict, OracleError> {
    Ok(enumerate_isometries(m, limit)?.verdict())
}

/// All isometries of `M`, in enumeration order.
pub fn find_isometries(m: &Matrix, limit: u64) -> Result<Vec<Matrix>, OracleError> {
    let p = check_input(m)?;
    let total = check_budget(p, m.rows(), limit)?;
    let form = Small::from_matrix(m, p);
    let found: Vec<Vec<Small>> = chunks(total)
        .map(|(a, b)| {
            let mut v = Vec::new();
            scan(&form, a, b, |s, _| v.push(*s));
            v
        })
        .collect();
    Ok(found.into_iter().flatten().map(Small::to_matrix).collect())
}

/// First isometry of determinant `-1` in enumeration order, if any.
pub fn find_negative_isometry(m: &Matrix, limit: u64) -> Result<Option<Matrix>, OracleError> {
    let p = check_input(m)?;
    let total = check_budget(p, m.rows(), limit)?;
    let form = Small::from_matrix(m, p);
    let hit = chunks(total).find_map_first(|(a, b)| {
        let mut first = None;
        scan(&form, a, b, |s, d| {
            if first.is_none() && d == p - 1 {
                first = Some(*s);
            }
        });
        first
    });
    Ok(hit.map(Small::to_matrix))
}

/// Precomputed `GL_n(F_p)` with determinants, for running the oracle on many
/// matrices of the same shape.
#[derive(Clone, Debug)]
pub struct GlTable {
    n: usize,
    p: u32,
    elements: Vec<(Small, u32)>,
}

impl GlTable {
    pub fn new(p: u32, n: usize, limit: u64) -> Result<GlTable, OracleError> {
        if n > MAX_SIDE {
            return Err(OracleError::BudgetExceeded {
                needed: space_size(p, n),
                limit,
            });
        }
        Field::prime(p as u64).map_err(|e| OracleError::UnsupportedField(e.to_string()))?;
        let total = check_budget(p, n, limit)?;
        let parts: Vec<Vec<(Small, u32)>> = chunks(total)
            .map(|(a, b)| {
                let mut s = Small::from_index(n, p, a);
                let mut out = Vec::new();
                for _ in a..b {
                    let d = s.det();
                    if d != 0 {
                        out.push((s, d));
                    }
                    s.increment();
                }
                out
            })
            .collect();
        let elements: Vec<_> = parts.into_iter().flatten().collect();
        debug_assert_eq!(elements.len() as u128, gl_order(p, n));
        Ok(GlTable { n, p, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Same result as [`enumerate_isometries`], scanning only the cached group.
    pub fn summarize(&self, m: &Matrix) -> Result<IsometrySummary, OracleError> {
        let p = check_input(m)?;
        if p != self.p || m.rows() != self.n {
            return Err(ExactError::DimensionMismatch(format!(
                "table is GL_{}(F_{}), matrix is {}x{} over {}",
                self.n,
                self.p,
                m.rows(),
                m.cols(),
                m.field()
            ))
            .into());
        }
        let form = Small::from_matrix(m, p);
        let mut acc = IsometrySummary::default();
        for (s, d) in &self.elements {
            if s.fixes(&form) {
                acc.record(*d);
            }
        }
        Ok(acc)
    }
}

/// Deterministic nonsingular `n×n` matrix with entries in `-3..=3`.
pub fn random_transform(field: Field, n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let t = Matrix::from_fn(field, n, n, |_, _| field.from_i64(rng.gen_range(-3..=3)));
        if t.is_nonsingular() {
            return t;
        }
    }
}

/// `T^T M T` for `T = random_transform(field, n, seed)`; returns `(T, T^T M T)`.
pub fn random_congruence(m: &Matrix, seed: u64) -> Result<(Matrix, Matrix), OracleError> {
    if !m.is_square() {
        return Err(ExactError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    let t = random_transform(m.field(), m.rows(), seed);
    let out = congruent(&t, m);
    Ok((t, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{jordan, symplectic_unit};

    const F3: Field = Field::Prime(3);

    #[test]
    fn symplectic_plane_over_f3() {
        let s = enumerate_isometries(&symplectic_unit(F3, 1).unwrap(), MAX_ENUMERATION).unwrap();
        assert_eq!(s.group_order, 24);
        assert!(s.all_det_one());
        assert_eq!(s.verdict(), Verdict::InXi);
    }

    #[test]
    fn identity_over_f3_has_reflections() {
        let s = enumerate_isometries(&Matrix::identity(F3, 2), MAX_ENUMERATION).unwrap();
        assert!(!s.all_det_one());
        assert_eq!(s.group_order, 8);
        assert_eq!(s.det_counts.get(&2), Some(&4));
    }

    #[test]
    fn zero_form_one_by_one() {
        let s = enumerate_isometries(&Matrix::zeros(F3, 1, 1), MAX_ENUMERATION).unwrap();
        assert_eq!(s.group_order, 2);
        assert_eq!(s.det_values(F3), vec![F3.one(), F3.from_i64(2)]);
        assert!(!s.all_det_one());
    }

    #[test]
    fn verdict_examples() {
        let v = |m: Matrix| oracle_verdict(&m, MAX_ENUMERATION).unwrap();
        assert_eq!(v(jordan(2, &F3.zero()).unwrap()), Verdict::InXi);
        assert_eq!(v(Matrix::zeros(F3, 1, 1)), Verdict::NotInXi);
        assert_eq!(v(jordan(3, &F3.zero()).unwrap()), Verdict::NotInXi);
    }

    #[test]
    fn empty_form_has_trivial_group() {
        let s = enumerate_isometries(&Matrix::zeros(F3, 0, 0), MAX_ENUMERATION).unwrap();
        assert_eq!(s.group_order, 1);
        assert!(s.all_det_one());
    }

    #[test]
    fn budget_and_field_errors() {
        assert!(matches!(
            enumerate_isometries(&Matrix::identity(Field::Prime(5), 3), 1000),
            Err(OracleError::BudgetExceeded { needed: 1_953_125, .. })
        ));
        assert!(matches!(
            enumerate_isometries(&Matrix::identity(Field::Prime(3), 5), u64::MAX),
            Err(OracleError::BudgetExceeded { .. })
        ));
        assert!(matches!(
            enumerate_isometries(&Matrix::identity(Field::Rational, 2), MAX_ENUMERATION),
            Err(OracleError::UnsupportedField(_))
        ));
    }

    #[test]
    fn enumeration_order_is_little_endian_row_major() {
        let s = Small::from_index(2, 3, 1 + 2 * 3 + 27);
        assert_eq!(&s.a[..4], &[1, 2, 0, 1]);
        let mut t = Small::from_index(2, 3, 80);
        t.increment();
        assert_eq!(&t.a[..4], &[0, 0, 0, 0]);
    }

    #[test]
    fn small_det_matches_exact_det() {
        for idx in (0..3u64.pow(9)).step_by(37) {
            let s = Small::from_index(3, 3, idx);
            assert_eq!(
                F3.from_i64(s.det() as i64),
                s.to_matrix().det().unwrap(),
                "{idx}"
            );
        }
    }

    #[test]
    fn gl_table_agrees_with_streaming_scan() {
        let table = GlTable::new(3, 2, MAX_ENUMERATION).unwrap();
        assert_eq!(table.len(), 48);
        assert_eq!(gl_order(3, 2), 48);
        for idx in 0..81 {
            let m = Small::from_index(2, 3, idx).to_matrix();
            assert_eq!(
                table.summarize(&m).unwrap(),
                enumerate_isometries(&m, MAX_ENUMERATION).unwrap()
            );
        }
    }

    #[test]
    fn negative_isometry_search() {
        let m = Matrix::identity(F3, 2);
        let s = find_negative_isometry(&m, MAX_ENUMERATION).unwrap().unwrap();
        assert_eq!(s.det().unwrap(), F3.from_i64(-1));
        assert_eq!(congruent(&s, &m), m);
        let z = symplectic_unit(F3, 1).unwrap();
        assert!(find_negative_isometry(&z, MAX_ENUMERATION).unwrap().is_none());
    }

    #[test]
    fn find_isometries_matches_summary() {
        let m = Matrix::identity(F3, 2);
        let all = find_isometries(&m, MAX_ENUMERATION).unwrap();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|s| congruent(s, &m) == m));
    }

    #[test]
    fn random_congruence_is_a_congruence() {
        let q = Field::Rational;
        let m = Matrix::from_ints(q, &[[1, 2], [0, 3]]);
        let (t, out) = random_congruence(&m, 7).unwrap();
        assert!(t.is_nonsingular());
        assert_eq!(congruent(&t, &m), out);
        assert_eq!(random_congruence(&m, 7).unwrap().1, out);
        let t = Matrix::from_ints(q, &[[1, 1], [0, 1]]);
        assert_eq!(
            congruent(&t, &Matrix::identity(q, 2)),
            Matrix::from_ints(q, &[[1, 1], [1, 2]])
        );
    }
}
