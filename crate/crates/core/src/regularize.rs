//! Congruence regularization: `S^T M S = B ⊕ J_{n_1}(0) ⊕ … ⊕ J_{n_p}(0)`
//! with `B` nonsingular and `n_1 ≤ … ≤ n_p`.
//!
//! One reduction step works with the right radical `R = ker M` of the form
//! `f(x, y) = x^T M y`:
//!
//! * `R` splits as `C ⊕ D`, where `C` is also in the left radical (these give
//!   `J_1(0)` summands) and `D` pairs nondegenerately with a complement `P` of
//!   `H = {y : f(R, y) = 0}`, normalized so that `f(d_i, p_j) = δ_ij`.
//! * The form restricted to a complement `H'` of `R` in `H` is reduced
//!   recursively. Every singular chain found there is extended by one `P`
//!   vector and one `D` vector; `P` vectors not attached to a chain give `J_2(0)`.
//! * Shears by `D` and `H'` clear the remaining cross terms exactly.
//!
//! The working matrix shrinks by `dim R + rank f(R, ·)` per step.

use thiserror::Error;

use crate::blocks::{direct_sum, jordan};
use crate::exactmat::{ExactError, Field, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegularizeError {
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Output of [`regularize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularizationResult {
    /// Nonsingular `S` with `S^T M S = B ⊕ J_{n_1}(0) ⊕ …`.
    pub transform: Matrix,
    /// The nonsingular part `B`, possibly 0x0.
    pub regular_part: Matrix,
    /// Sizes `n_1 ≤ … ≤ n_p` of the singular Jordan summands.
    pub singular_sizes: Vec<usize>,
}

impl RegularizationResult {
    /// `B ⊕ J_{n_1}(0) ⊕ … ⊕ J_{n_p}(0)`.
    pub fn canonical_form(&self) -> Matrix {
        canonical(&self.regular_part, &self.singular_sizes)
    }

    pub fn has_odd_block(&self) -> bool {
        self.singular_sizes.iter().any(|s| s % 2 == 1)
    }
}

fn canonical(regular: &Matrix, sizes: &[usize]) -> Matrix {
    let f = regular.field();
    let mut parts = vec![regular.clone()];
    parts.extend(sizes.iter().map(|&s| jordan(s, &f.zero()).expect("sizes are positive")));
    direct_sum(f, &parts).expect("square summands")
}

/// Regularizes `m` by congruence. Deterministic for a fixed input.
///
/// Panics if the computed transform fails the exact identity
/// `S^T M S = B ⊕ J_{n_1}(0) ⊕ …`.
pub fn regularize(m: &Matrix) -> Result<RegularizationResult, RegularizeError> {
    if !m.is_square() {
        return Err(ExactError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    let reduction = reduce(m);
    let image = congruent(&reduction.transform, m);
    let idx: Vec<usize> = (0..reduction.regular).collect();
    let regular_part = image.select(&idx, &idx);
    let result = RegularizationResult {
        transform: reduction.transform,
        regular_part,
        singular_sizes: reduction.sizes,
    };
    assert!(
        verify_congruence(&result.transform, m, &result.canonical_form()),
        "regularization produced an inexact congruence"
    );
    assert!(result.regular_part.is_nonsingular() || result.regular_part.rows() == 0);
    Ok(result)
}

/// True iff `S` is nonsingular and `S^T M S = N` exactly.
pub fn verify_congruence(s: &Matrix, m: &Matrix, n: &Matrix) -> bool {
    if !s.is_square() || !m.is_square() || s.rows() != m.rows() {
        return false;
    }
    if (n.rows(), n.cols()) != (m.rows(), m.cols()) {
        return false;
    }
    if s.field() != m.field() || m.field() != n.field() {
        return false;
    }
    s.is_nonsingular() && congruent(s, m) == *n
}

/// `S^T M S`.
pub fn congruent(s: &Matrix, m: &Matrix) -> Matrix {
    &(&s.transpose() * m) * s
}

struct Reduction {
    transform: Matrix,
    regular: usize,
    sizes: Vec<usize>,
}

fn reduce(m: &Matrix) -> Reduction {
    let n = m.rows();
    let field = m.field();
    let kernel = m.nullspace();
    let k = kernel.cols();
    if k == 0 {
        return Reduction {
            transform: Matrix::identity(field, n),
            regular: n,
            sizes: Vec::new(),
        };
    }

    // Rows f(u, ·) for a kernel basis; put them in echelon form, which splits
    // the kernel into D (nonzero rows) and C (zero rows).
    let functionals = &kernel.transpose() * m;
    let ech = functionals.hstack(&Matrix::identity(field, k)).echelon();
    let t = ech.pivots.iter().filter(|&&p| p < n).count();
    let all: Vec<usize> = (0..k).collect();
    let change = ech.reduced.select(&all, &(n..n + k).collect::<Vec<_>>());
    let kernel = &kernel * &change.transpose();
    let d_rows: Vec<usize> = (0..t).collect();
    let pairing = ech.reduced.select(&d_rows, &(0..n).collect::<Vec<_>>());

    // P picks the pivot coordinates, so f(d_i, p_j) = δ_ij.
    let mut p_cols = Matrix::zeros(field, n, t);
    for (j, &c) in ech.pivots[..t].iter().enumerate() {
        p_cols.set(c, j, field.one());
    }

    // H' completes R to a basis of H = ker(pairing).
    let h = pairing.nullspace();
    let joined = kernel.hstack(&h);
    let h_prime: Vec<usize> = joined
        .echelon()
        .pivots
        .into_iter()
        .filter(|&c| c >= k)
        .collect();
    let hsize = h_prime.len();
    debug_assert_eq!(hsize, n - t - k);

    let rows: Vec<usize> = (0..n).collect();
    let h_cols = joined.select(&rows, &h_prime);
    let c_cols = kernel.select(&rows, &(t..k).collect::<Vec<_>>());
    let d_cols = kernel.select(&rows, &d_rows);
    let mut s = h_cols.hstack(&p_cols).hstack(&c_cols).hstack(&d_cols);
    debug_assert!(s.is_nonsingular());

    // Index ranges of the four groups in the current basis.
    let hr: Vec<usize> = (0..hsize).collect();
    let pr: Vec<usize> = (hsize..hsize + t).collect();
    let dr: Vec<usize> = (hsize + k..n).collect();

    let inner = reduce(&congruent(&s, m).select(&hr, &hr));
    s = &s * &block_diag(field, &[&inner.transform, &Matrix::identity(field, n - hsize)]);

    let mut ends = Vec::with_capacity(inner.sizes.len());
    let mut offset = inner.regular;
    for &size in &inner.sizes {
        ends.push(offset + size - 1);
        offset += size;
    }
    let q = ends.len();

    // Renormalize P (and dually D) so that p_j is the only P vector seeing the
    // end of inner chain j.
    let beta = congruent(&s, m).select(&pr, &hr);
    let at_ends = beta.select(&d_rows, &ends);
    let ech = at_ends.hstack(&Matrix::identity(field, t)).echelon();
    assert!(
        ech.pivots.iter().take(q).copied().eq(0..q),
        "chain ends must pair injectively with P"
    );
    let y = ech.reduced.select(&d_rows, &(q..q + t).collect::<Vec<_>>());
    let y_inv = y.inverse().expect("row operations are invertible");
    s = &s * &block_diag(
        field,
        &[
            &Matrix::identity(field, hsize),
            &y.transpose(),
            &Matrix::identity(field, k - t),
            &y_inv,
        ],
    );

    // β minus the end selector vanishes on rker of the inner form, so it lies in
    // the row space of the inner form; shear P by H' to remove it.
    let image = congruent(&s, m);
    let inner_form = image.select(&hr, &hr);
    let mut residual = image.select(&pr, &hr);
    for (j, &e) in ends.iter().enumerate() {
        let v = residual.get(j, e) - &field.one();
        residual.set(j, e, v);
    }
    let x = inner_form
        .transpose()
        .solve(&(-&residual).transpose())
        .expect("residual lies in the row space of the inner form");
    let mut shear = Matrix::identity(field, n);
    for i in 0..hsize {
        for j in 0..t {
            shear.set(hr[i], pr[j], x.get(i, j).clone());
        }
    }
    s = &s * &shear;

    // Clear f(H', P) and f(P, P) with D, which pairs only with P.
    let image = congruent(&s, m);
    let alpha = image.select(&hr, &pr);
    let pi = image.select(&pr, &pr);
    let mut shear = Matrix::identity(field, n);
    for j in 0..t {
        for i in 0..hsize {
            shear.set(dr[j], hr[i], -alpha.get(i, j));
        }
        for i in 0..t {
            shear.set(dr[j], pr[i], -pi.get(i, j));
        }
    }
    s = &s * &shear;

    // Collect chains: extended inner chains, bare (p, d) pairs, then C vectors.
    let mut chains: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut start = inner.regular;
    for (j, &size) in inner.sizes.iter().enumerate() {
        let mut chain: Vec<usize> = (start..start + size).collect();
        chain.push(pr[j]);
        chain.push(dr[j]);
        chains.push(chain);
        start += size;
    }
    for j in q..t {
        chains.push(vec![pr[j], dr[j]]);
    }
    for c in hsize + t..hsize + k {
        chains.push(vec![c]);
    }
    chains.sort_by_key(Vec::len);

    let mut order: Vec<usize> = (0..inner.regular).collect();
    order.extend(chains.iter().flatten());
    let perm = Matrix::identity(field, n).select(&rows, &order);
    Reduction {
        transform: &s * &perm,
        regular: inner.regular,
        sizes: chains.iter().map(Vec::len).collect(),
    }
}

fn block_diag(field: Field, parts: &[&Matrix]) -> Matrix {
    let owned: Vec<Matrix> = parts.iter().map(|&p| p.clone()).collect();
    direct_sum(field, &owned).expect("square blocks")
}
