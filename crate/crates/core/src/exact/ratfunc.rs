use std::fmt;

use num_traits::{One, Zero};

use super::{ExactError, Poly, Rational, Result, TruncatedSeries, Var};

/// Quotient of polynomials kept in canonical form: coprime numerator and
/// denominator, denominator monic. Two equal rational functions therefore
/// have identical representations.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        num.var().check(den.var())?;
        if den.is_zero() {
            return Err(ExactError::Domain("zero denominator".into()));
        }
        if num.is_zero() {
            let var = den.var().clone();
            return Ok(RationalFunction { num, den: Poly::one(var) });
        }
        let g = num.gcd(&den)?;
        let (mut n, _) = num.div_rem(&g)?;
        let (mut d, _) = den.div_rem(&g)?;
        let lc = d.leading().recip();
        n = n.scale(&lc);
        d = d.scale(&lc);
        Ok(RationalFunction { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        let var = p.var().clone();
        RationalFunction { num: p, den: Poly::one(var) }
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        Self::from_poly(Poly::constant(var, c))
    }

    pub fn zero(var: Var) -> Self {
        Self::from_poly(Poly::zero(var))
    }

    pub fn one(var: Var) -> Self {
        Self::from_poly(Poly::one(var))
    }

    pub fn x(var: Var) -> Self {
        Self::from_poly(Poly::x(var))
    }

    pub fn var(&self) -> &Var {
        self.num.var()
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_constant().then_some(&self.num)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Self::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.var().check(o.var())?;
        if o.is_zero() {
            return Err(ExactError::Domain("division by the zero rational function".into()));
        }
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.var().clone());
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { Self::one(self.var().clone()).div(self)? } else { self.clone() };
        let (n, d) = (base.num.pow(e.unsigned_abs()), base.den.pow(e.unsigned_abs()));
        Ok(RationalFunction { num: n, den: d })
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den).expect("nonzero denominator")
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(ExactError::Domain(format!("pole at {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    /// `self(inner)`, with `inner` a rational function in a possibly
    /// different variable.
    pub fn compose(&self, inner: &RationalFunction) -> Result<Self> {
        let v = inner.var().clone();
        let horner = |p: &Poly| -> Result<RationalFunction> {
            let mut acc = RationalFunction::zero(v.clone());
            for c in p.coeffs().iter().rev() {
                acc = acc.mul(inner)?.add(&RationalFunction::constant(v.clone(), c.clone()))?;
            }
            Ok(acc)
        };
        horner(&self.num)?.div(&horner(&self.den)?)
    }

    /// Taylor expansion at the origin through `x^order`.
    pub fn to_series(&self, order: usize) -> Result<TruncatedSeries> {
        let pad = |p: &Poly| -> Vec<Rational> { (0..=order).map(|k| p.coeff(k)).collect() };
        let n = TruncatedSeries::new(self.var().clone(), pad(&self.num));
        let d = TruncatedSeries::new(self.var().clone(), pad(&self.den));
        n.div(&d)
    }

    pub fn with_var(&self, var: Var) -> Self {
        RationalFunction { num: self.num.with_var(var.clone()), den: self.den.with_var(var) }
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num.is_constant() && self.num.coeff(0).is_one()
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
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
    fn canonical_form_is_unique() {
        // (2z - 2) / (4z^2 - 4) == 1 / (2z + 2) == (1/2) / (z + 1)
        let a = RationalFunction::new(
            Poly::from_ints(z(), &[-2, 2]),
            Poly::from_ints(z(), &[-4, 0, 4]),
        )
        .unwrap();
        let b = RationalFunction::new(Poly::from_ints(z(), &[1]), Poly::from_ints(z(), &[2, 2]))
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.denom().leading(), int(1));
        assert_eq!(a.numer().coeff(0), rat(1, 2));
    }

    #[test]
    fn derivative_quotient_rule() {
        let f = RationalFunction::new(Poly::from_ints(z(), &[1, 1]), Poly::from_ints(z(), &[1, -1]))
            .unwrap();
        // d/dz (1+z)/(1-z) = 2/(1-z)^2
        let expected =
            RationalFunction::new(Poly::from_ints(z(), &[2]), Poly::from_ints(z(), &[1, -2, 1]))
                .unwrap();
        assert_eq!(f.derivative(), expected);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFunction::new(Poly::x(z()), Poly::zero(z())).is_err());
        let f = RationalFunction::x(z());
        assert!(f.div(&RationalFunction::zero(z())).is_err());
        let g = RationalFunction::new(Poly::one(z()), Poly::x(z())).unwrap();
        assert!(g.eval(&int(0)).is_err());
    }

    #[test]
    fn compose_into_other_variable() {
        let t = Var::new("t");
        // f(z) = 1/(1-z), z = t^4
        let f = RationalFunction::new(Poly::one(z()), Poly::from_ints(z(), &[1, -1])).unwrap();
        let inner = RationalFunction::from_poly(Poly::monomial(t.clone(), int(1), 4));
        let g = f.compose(&inner).unwrap();
        assert_eq!(g.var(), &t);
        assert_eq!(g.eval(&rat(1, 2)).unwrap(), rat(16, 15));
    }
}
