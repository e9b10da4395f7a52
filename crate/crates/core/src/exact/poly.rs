use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{ExactError, Rational, Result, Var};

/// Dense univariate polynomial over Q. Trailing zero coefficients are
/// always stripped, so the zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
    var: Var,
}

impl Poly {
    pub fn new(var: Var, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, var }
    }

    pub fn zero(var: Var) -> Self {
        Poly { coeffs: Vec::new(), var }
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        Poly::new(var, vec![c])
    }

    pub fn one(var: Var) -> Self {
        Poly::constant(var, Rational::one())
    }

    /// The indeterminate itself.
    pub fn x(var: Var) -> Self {
        Poly::new(var, vec![Rational::zero(), Rational::one()])
    }

    /// `c * x^k`.
    pub fn monomial(var: Var, c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Poly::new(var, v)
    }

    pub fn from_ints(var: Var, coeffs: &[i64]) -> Self {
        Poly::new(var, coeffs.iter().map(|&c| super::int(c)).collect())
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(k.into()))
            .collect();
        Poly::new(self.var.clone(), coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.var.clone(), self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Rational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(self.var.clone(), v)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.var.clone());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    /// Euclidean division, `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.var.check(&d.var)?;
        if d.is_zero() {
            return Err(ExactError::Domain("polynomial division by zero".into()));
        }
        let dd = d.coeffs.len() - 1;
        let lc_inv = d.leading().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(self.var.clone()), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(self.var.clone(), q), Poly::new(self.var.clone(), r)))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.var.check(&other.var)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero(inner.var.clone());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(inner.var.clone(), c.clone());
        }
        acc
    }

    pub fn with_var(&self, var: Var) -> Poly {
        Poly { coeffs: self.coeffs.clone(), var }
    }
}

fn combine(a: &Poly, b: &Poly, f: impl Fn(&Rational, &Rational) -> Rational) -> Poly {
    assert_eq!(a.var, b.var, "polynomial variable mismatch");
    let n = a.coeffs.len().max(b.coeffs.len());
    let z = Rational::zero();
    let coeffs = (0..n)
        .map(|k| f(a.coeffs.get(k).unwrap_or(&z), b.coeffs.get(k).unwrap_or(&z)))
        .collect();
    Poly::new(a.var.clone(), coeffs)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        combine(self, rhs, |x, y| x + y)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        combine(self, rhs, |x, y| x - y)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.var, rhs.var, "polynomial variable mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.var.clone());
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(self.var.clone(), v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.var.clone(), self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*{}", self.var)?,
                _ => write!(f, "({c})*{}^{k}", self.var)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn z() -> Var {
        Var::new("z")
    }

    #[test]
    fn division_identity() {
        let a = Poly::from_ints(z(), &[1, -3, 0, 2, 5]);
        let b = Poly::from_ints(z(), &[2, 0, 3]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(&(&q * &b) + &r, a);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = Poly::from_ints(z(), &[-1, 1]); // z - 1
        let a = &f * &Poly::from_ints(z(), &[3, 0, 1]);
        let b = &f.scale(&int(7)) * &Poly::from_ints(z(), &[0, 2]);
        assert_eq!(a.gcd(&b).unwrap(), f);
    }

    #[test]
    fn compose_and_eval_agree() {
        let p = Poly::from_ints(z(), &[1, 2, 3]);
        let inner = Poly::from_ints(z(), &[-1, 0, 1]);
        let x = rat(5, 3);
        assert_eq!(p.compose(&inner).eval(&x), p.eval(&inner.eval(&x)));
    }

    #[test]
    fn mismatched_division_is_an_error() {
        let a = Poly::x(z());
        let b = Poly::x(Var::new("t"));
        assert!(matches!(a.div_rem(&b), Err(ExactError::VariableMismatch(..))));
        assert!(a.div_rem(&Poly::zero(z())).is_err());
    }
}
