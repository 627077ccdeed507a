use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{ExactError, Field, Poly, Scalar};

/// Dense row-major matrix over an exact field. Zero-sized matrices are allowed
/// and act as the empty direct summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix, ExactError> {
        if data.len() != rows * cols {
            return Err(ExactError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|s| s.field() != field) {
            return Err(ExactError::FieldMismatch);
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ExactError::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from small integers, reduced into `field`.
    ///
    /// Panics on ragged input; intended for literals in code and tests.
    pub fn from_ints<R: AsRef<[i64]>>(field: Field, rows: &[R]) -> Matrix {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Matrix::from_rows(field, rows).expect("rectangular integer literal")
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                assert_eq!(v.field(), field);
                data.push(v);
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Matrix {
        Matrix::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        Matrix::from_fn(field, n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(field: Field, diag: &[Scalar]) -> Matrix {
        let n = diag.len();
        Matrix::from_fn(field, n, n, |i, j| if i == j { diag[i].clone() } else { field.zero() })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Rows and columns picked by index, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "hstack needs equal row counts");
        assert_eq!(self.field, rhs.field);
        Matrix::from_fn(self.field, self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn pow(&self, k: usize) -> Result<Matrix, ExactError> {
        self.require_square()?;
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        Ok(acc)
    }

    pub(crate) fn require_square(&self) -> Result<(), ExactError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(ExactError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss-Jordan elimination. The pivot in each column is the first nonzero
    /// entry at or below the current row.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis of the right null space `{x : A x = 0}`, one column per basis vector.
    /// Each basis vector has a 1 at its free column and zeros at the other free columns.
    pub fn nullspace(&self) -> Matrix {
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let columns: Vec<Vec<Scalar>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -reduced.get(row, f);
                }
                v
            })
            .collect();
        Matrix::from_columns(self.field, self.cols, &columns)
    }

    pub fn inverse(&self) -> Result<Matrix, ExactError> {
        self.require_square()?;
        let n = self.rows;
        let ech = self.hstack(&Matrix::identity(self.field, n)).echelon();
        if n > 0 && (ech.pivots.len() < n || ech.pivots[n - 1] != n - 1) {
            return Err(ExactError::SingularMatrix);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(ech.reduced.select(&rows, &cols))
    }

    /// Some solution `X` of `self * X = rhs`, with free variables set to zero,
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let Echelon { reduced, pivots } = self.hstack(rhs).echelon();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, reduced.get(row, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Fraction-free (Bareiss) determinant; the 0x0 determinant is 1.
    pub fn det(&self) -> Result<Scalar, ExactError> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.to_rows();
        let mut negate = false;
        let mut prev = self.field.one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != k {
                a.swap(p, k);
                negate = !negate;
            }
            let prev_inv = prev.inv().expect("Bareiss pivots are nonzero");
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = &t * &prev_inv;
                }
                a[i][k] = self.field.zero();
            }
            prev = a[k][k].clone();
        }
        let d = if n == 0 { self.field.one() } else { a[n - 1][n - 1].clone() };
        Ok(if negate { -d } else { d })
    }

    /// `[r_0, …, r_kmax]` with `r_k = rank((A - mu I)^k)`. Stops multiplying once
    /// two consecutive ranks agree and pads with the stable value.
    pub fn power_rank_sequence(&self, mu: &Scalar, kmax: usize) -> Result<Vec<usize>, ExactError> {
        self.require_square()?;
        let n = self.rows;
        let shifted = self - &Matrix::identity(self.field, n).scale(mu);
        let mut ranks = vec![n];
        let mut power = Matrix::identity(self.field, n);
        while ranks.len() <= kmax {
            let last = *ranks.last().unwrap();
            if ranks.len() >= 2 && ranks[ranks.len() - 2] == last {
                ranks.push(last);
                continue;
            }
            power = &power * &shifted;
            ranks.push(power.rank());
        }
        Ok(ranks)
    }
}

/// `det(A + t B)` as a polynomial in `t`, by Bareiss elimination over `F[t]`.
/// The zero polynomial means the pencil is singular.
pub fn det_poly(a: &Matrix, b: &Matrix) -> Result<Poly, ExactError> {
    a.require_square()?;
    if a.rows != b.rows || a.cols != b.cols {
        return Err(ExactError::DimensionMismatch(
            "pencil matrices differ in shape".into(),
        ));
    }
    if a.field != b.field {
        return Err(ExactError::FieldMismatch);
    }
    let field = a.field;
    let n = a.rows;
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Poly::new(field, vec![a.get(i, j).clone(), b.get(i, j).clone()]))
                .collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = Poly::constant(field.one());
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Ok(Poly::zero(field));
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_div(&prev)?;
            }
            m[i][k] = Poly::zero(field);
        }
        prev = m[k][k].clone();
    }
    let d = if n == 0 { Poly::constant(field.one()) } else { m[n - 1][n - 1].clone() };
    Ok(if negate { d.neg() } else { d })
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in addition");
        assert_eq!(self.field, rhs.field);
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        self + &(-rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        assert_eq!(self.field, rhs.field);
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + &(a * rhs.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn empty_matrix_conventions() {
        let e = Matrix::zeros(Q, 0, 0);
        assert_eq!(e.rank(), 0);
        assert_eq!(e.det().unwrap(), Q.one());
        assert_eq!(e.inverse().unwrap(), e);
        assert_eq!(det_poly(&e, &e).unwrap(), Poly::constant(Q.one()));
        assert_eq!(e.power_rank_sequence(&Q.one(), 2).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn rank_of_nilpotent_jordan() {
        assert_eq!(Matrix::from_ints(Q, &[[0, 0], [1, 0]]).rank(), 1);
    }

    #[test]
    fn inverse_examples() {
        let z2 = Matrix::from_ints(Q, &[[0, 1], [-1, 0]]);
        assert_eq!(z2.inverse().unwrap(), Matrix::from_ints(Q, &[[0, -1], [1, 0]]));
        assert_eq!(Matrix::identity(Q, 3).inverse().unwrap(), Matrix::identity(Q, 3));
        assert_eq!(
            Matrix::from_ints(Q, &[[0, 0], [1, 0]]).inverse(),
            Err(ExactError::SingularMatrix)
        );
        assert!(matches!(
            Matrix::zeros(Q, 2, 3).inverse(),
            Err(ExactError::NotSquare { .. })
        ));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(Matrix::identity(Q, 4).det().unwrap(), Q.one());
        let s = Matrix::diagonal(Q, &[Q.from_i64(-1), Q.one(), Q.one()]);
        assert_eq!(s.det().unwrap(), Q.from_i64(-1));
        let g2 = Matrix::from_ints(Q, &[[0, 1], [-1, -1]]);
        assert_eq!(g2.det().unwrap(), Q.one());
        // needs a row swap and fractional intermediate pivots
        let m = Matrix::from_ints(Q, &[[0, 2, 1], [3, 0, 1], [1, 1, 0]]);
        assert_eq!(m.det().unwrap(), Q.from_i64(5));
    }

    #[test]
    fn pencil_determinants() {
        let z = Matrix::zeros(Q, 1, 1);
        assert!(det_poly(&z, &z).unwrap().is_zero());
        let j = Matrix::from_ints(Q, &[[0, 0], [1, 0]]);
        assert_eq!(det_poly(&j.transpose(), &j).unwrap(), Poly::from_i64(Q, &[0, -1]));
        let i2 = Matrix::identity(Q, 2);
        assert_eq!(det_poly(&i2, &i2).unwrap(), Poly::from_i64(Q, &[1, 2, 1]));
    }

    #[test]
    fn power_ranks() {
        let j3 = Matrix::from_ints(Q, &[[1, 0, 0], [1, 1, 0], [0, 1, 1]]);
        assert_eq!(j3.power_rank_sequence(&Q.one(), 4).unwrap(), vec![3, 2, 1, 0, 0]);
        assert_eq!(
            Matrix::identity(Q, 2).power_rank_sequence(&Q.one(), 2).unwrap(),
            vec![2, 0, 0]
        );
        let m = Matrix::from_ints(Q, &[[0, 0, 0], [1, 0, 0], [0, 0, 0]]);
        assert_eq!(m.power_rank_sequence(&Q.zero(), 3).unwrap(), vec![3, 1, 0, 0]);
    }

    #[test]
    fn nullspace_annihilates() {
        let m = Matrix::from_ints(Q, &[[1, 2, 3], [2, 4, 6]]);
        let k = m.nullspace();
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = Matrix::from_ints(Q, &[[1, 1], [2, 2]]);
        let b = Matrix::from_ints(Q, &[[3], [6]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(&a * &x, b);
        assert!(a.solve(&Matrix::from_ints(Q, &[[1], [1]])).is_none());
    }

    #[test]
    fn elimination_over_f3() {
        let f = Field::Prime(3);
        let m = Matrix::from_ints(f, &[[1, 1], [1, -2]]); // second row equals the first mod 3
        assert_eq!(m.rank(), 1);
        assert_eq!(m.det().unwrap(), f.zero());
        let n = Matrix::from_ints(f, &[[2, 1], [1, 1]]);
        assert_eq!(&n * &n.inverse().unwrap(), Matrix::identity(f, 2));
    }
}
