//! Canonical matrices used as building blocks for congruence classes:
//! Jordan blocks, the anti-triangular blocks `Γ_r`, Frobenius (companion)
//! blocks, skew sums, direct sums, the symplectic unit and Kronecker pair blocks.
//!
//! Jordan blocks carry their 1s on the first subdiagonal.

use thiserror::Error;

use crate::exactmat::{ExactError, Field, Matrix, Poly, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("block size must be at least 1")]
    EmptyBlock,
    #[error("polynomial must be monic of degree at least 1")]
    NotMonic,
    #[error("power must be at least 1")]
    ZeroPower,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("direct summands must be square")]
    NonSquareSummand,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A power `p(x)^l` of a monic polynomial, the data of a Frobenius block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpec {
    poly: Poly,
    power: usize,
}

impl PolySpec {
    pub fn new(poly: Poly, power: usize) -> Result<PolySpec, BlockError> {
        if !poly.is_monic() || poly.degree() == Some(0) {
            return Err(BlockError::NotMonic);
        }
        if power == 0 {
            return Err(BlockError::ZeroPower);
        }
        Ok(PolySpec { poly, power })
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn power(&self) -> usize {
        self.power
    }

    /// Size `m = deg(p) * l` of the Frobenius block.
    pub fn size(&self) -> usize {
        self.poly.degree().unwrap_or(0) * self.power
    }

    pub fn expanded(&self) -> Poly {
        self.poly.pow(self.power)
    }
}

/// `J_r(λ)`: λ on the diagonal, 1 on the first subdiagonal.
pub fn jordan(r: usize, lambda: &Scalar) -> Result<Matrix, BlockError> {
    if r == 0 {
        return Err(BlockError::EmptyBlock);
    }
    let f = lambda.field();
    Ok(Matrix::from_fn(f, r, r, |i, j| {
        if i == j {
            lambda.clone()
        } else if i == j + 1 {
            f.one()
        } else {
            f.zero()
        }
    }))
}

/// `Γ_r`: entry `(i, j)` (1-based) is `(-1)^(i+1)` when `i + j ∈ {r+1, r+2}`, zero otherwise.
///
/// Panics if the cosquare `Γ_r^{-T} Γ_r` fails to be a single Jordan block at
/// `(-1)^(r+1)`; that identity is what every caller relies on.
pub fn gamma(field: Field, r: usize) -> Result<Matrix, BlockError> {
    if r == 0 {
        return Err(BlockError::EmptyBlock);
    }
    let g = Matrix::from_fn(field, r, r, |i, j| {
        let s = i + j + 2;
        if s == r + 1 || s == r + 2 {
            field.from_i64(if i % 2 == 0 { 1 } else { -1 })
        } else {
            field.zero()
        }
    });
    let cosquare = cosquare(&g)?;
    let eig = field.from_i64(if r % 2 == 1 { 1 } else { -1 });
    let ranks = cosquare.power_rank_sequence(&eig, r)?;
    let chain: Vec<usize> = (0..=r).rev().collect();
    assert_eq!(ranks, chain, "Γ_{r} cosquare is not similar to one Jordan block");
    Ok(g)
}

/// `A^{-T} A` for nonsingular `A`.
pub fn cosquare(a: &Matrix) -> Result<Matrix, ExactError> {
    Ok(&a.inverse()?.transpose() * a)
}

/// Companion matrix of `p(x)^l`: 1s on the subdiagonal and last column
/// `(-c_m, …, -c_1)` top to bottom, where `p^l = x^m + c_1 x^{m-1} + … + c_m`.
pub fn frobenius(spec: &PolySpec) -> Matrix {
    let q = spec.expanded();
    let m = spec.size();
    let f = q.field();
    Matrix::from_fn(f, m, m, |i, j| {
        if j == m - 1 {
            // c_{m-i} is the coefficient of x^i
            -&q.coeff(i)
        } else if i == j + 1 {
            f.one()
        } else {
            f.zero()
        }
    })
}

/// The monic reversal `p(0)^{-1} x^s p(1/x)` of a monic `p` with `p(0) ≠ 0`.
pub fn reciprocal(p: &Poly) -> Result<Poly, BlockError> {
    if !p.is_monic() {
        return Err(BlockError::NotMonic);
    }
    let c0 = p.coeff(0);
    let inv = c0.inv().ok_or(BlockError::ZeroConstantTerm)?;
    let reversed: Vec<Scalar> = p.coeffs().iter().rev().map(|c| c * &inv).collect();
    Ok(Poly::new(p.field(), reversed))
}

/// Whether the Frobenius block of `spec` is a cosquare, assuming `p` irreducible:
/// `p ≠ x`, `p ≠ x + (-1)^(m+1)` and `p` is self-reciprocal.
pub fn is_cosquare_block(spec: &PolySpec) -> bool {
    let p = spec.poly();
    let f = p.field();
    let m = spec.size();
    if *p == Poly::x(f) {
        return false;
    }
    let sign = if m % 2 == 1 { 1 } else { -1 };
    if *p == Poly::from_i64(f, &[sign, 1]) {
        return false;
    }
    match reciprocal(p) {
        Ok(r) => r == *p,
        Err(_) => false,
    }
}

/// `[[0, B], [A, 0]]`.
pub fn skew_sum(a: &Matrix, b: &Matrix) -> Result<Matrix, BlockError> {
    if a.field() != b.field() {
        return Err(ExactError::FieldMismatch.into());
    }
    let f = a.field();
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    Ok(Matrix::from_fn(f, rb + ra, ca + cb, |i, j| {
        if i < rb && j >= ca {
            b.get(i, j - ca).clone()
        } else if i >= rb && j < ca {
            a.get(i - rb, j).clone()
        } else {
            f.zero()
        }
    }))
}

/// Block-diagonal assembly; the empty list gives the 0x0 matrix over `field`.
pub fn direct_sum(field: Field, parts: &[Matrix]) -> Result<Matrix, BlockError> {
    if parts.iter().any(|p| !p.is_square()) {
        return Err(BlockError::NonSquareSummand);
    }
    if parts.iter().any(|p| p.field() != field) {
        return Err(ExactError::FieldMismatch.into());
    }
    let n: usize = parts.iter().map(Matrix::rows).sum();
    let mut out = Matrix::zeros(field, n, n);
    let mut offset = 0;
    for p in parts {
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                out.set(offset + i, offset + j, p.get(i, j).clone());
            }
        }
        offset += p.rows();
    }
    Ok(out)
}

/// `Z_{2m} = [[0, I_m], [-I_m, 0]]`.
pub fn symplectic_unit(field: Field, m: usize) -> Result<Matrix, BlockError> {
    if m == 0 {
        return Err(BlockError::EmptyBlock);
    }
    let id = Matrix::identity(field, m);
    skew_sum(&-&id, &id)
}

/// The `(t-1) x t` pair `(F_t, G_t)`: `F_t` has 1s at `(i, i)`, `G_t` at `(i, i+1)`.
pub fn kronecker_pair_blocks(field: Field, t: usize) -> Result<(Matrix, Matrix), BlockError> {
    if t == 0 {
        return Err(BlockError::EmptyBlock);
    }
    let pick = |shift: usize| {
        Matrix::from_fn(field, t - 1, t, |i, j| {
            if j == i + shift {
                field.one()
            } else {
                field.zero()
            }
        })
    };
    Ok((pick(0), pick(1)))
}
