use std::fmt;

use super::{ExactError, Field, Scalar};

/// Univariate polynomial over an exact field, coefficients stored constant term first.
/// Trailing zero coefficients are always trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Poly {
        for c in &coeffs {
            assert_eq!(c.field(), field, "coefficient outside the polynomial's field");
        }
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// The monomial `x`.
    pub fn x(field: Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * t) + c)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Poly {
        match self.leading().and_then(Scalar::inv) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            self.field,
            (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect(),
        )
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }

    /// Repeated multiplication; `p^0 = 1`.
    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::constant(self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), ExactError> {
        assert_eq!(self.field, divisor.field);
        let lead_inv = divisor
            .leading()
            .and_then(Scalar::inv)
            .ok_or(ExactError::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(self.field, quot), Poly::new(self.field, rem)))
    }

    /// Division that must leave no remainder; used by fraction-free elimination.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, ExactError> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(ExactError::InexactDivision);
        }
        Ok(q)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) if self.field == Field::Rational => (true, m.to_string()),
                _ => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag == "1";
            match i {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{mag}x")?,
                _ if unit => write!(f, "x^{i}")?,
                _ => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Poly::from_i64(Field::Rational, &[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Poly::from_i64(Field::Rational, &[0, 0]).is_zero());
        assert_eq!(Poly::zero(Field::Rational).degree(), None);
    }

    #[test]
    fn division_round_trip() {
        let f = Field::Rational;
        let a = Poly::from_i64(f, &[2, 3, 1]); // (x+1)(x+2)
        let b = Poly::from_i64(f, &[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, Poly::from_i64(f, &[2, 1]));
        assert!(r.is_zero());
        assert!(Poly::from_i64(f, &[1, 0, 1]).exact_div(&b).is_err());
    }

    #[test]
    fn binomial_square() {
        let f = Field::Rational;
        let p = Poly::from_i64(f, &[-1, 1]).pow(2);
        assert_eq!(p, Poly::from_i64(f, &[1, -2, 1]));
        assert_eq!(p.to_string(), "x^2 - 2x + 1");
    }

    #[test]
    fn evaluation_over_f3() {
        let f = Field::Prime(3);
        let p = Poly::from_i64(f, &[1, 0, 1]); // x^2 + 1 has no roots mod 3
        for t in f.elements().unwrap() {
            assert!(!p.eval(&t).is_zero());
        }
    }
}
