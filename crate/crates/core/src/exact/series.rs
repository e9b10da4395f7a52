use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{int, ExactError, Rational, Result, Var};

/// Power series known exactly through `x^order`.
///
/// The truncation order is a property of each value. Binary operations
/// truncate to the smaller of the two orders, and nothing ever reads a
/// coefficient beyond `order`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    var: Var,
    order: usize,
    #[serde(with = "super::serde_rational::vec")]
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Build from `order + 1` coefficients; the order is `coeffs.len() - 1`.
    pub fn new(var: Var, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncatedSeries { var, order: coeffs.len() - 1, coeffs }
    }

    pub fn from_fn(var: Var, order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        TruncatedSeries::new(var, (0..=order).map(f).collect())
    }

    pub fn zero(var: Var, order: usize) -> Self {
        TruncatedSeries::new(var, vec![Rational::zero(); order + 1])
    }

    pub fn constant(var: Var, order: usize, c: Rational) -> Self {
        let mut s = TruncatedSeries::zero(var, order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(var: Var, order: usize) -> Self {
        TruncatedSeries::constant(var, order, Rational::one())
    }

    /// The series `x` itself.
    pub fn variable(var: Var, order: usize) -> Self {
        let mut s = TruncatedSeries::zero(var, order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`; panics if `k` exceeds the truncation order.
    pub fn coeff(&self, k: usize) -> &Rational {
        assert!(k <= self.order, "coefficient {k} beyond truncation order {}", self.order);
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncatedSeries::new(self.var.clone(), self.coeffs[..=order].to_vec())
    }

    pub fn with_var(&self, var: Var) -> Self {
        TruncatedSeries { var, ..self.clone() }
    }

    fn common(&self, o: &Self) -> Result<usize> {
        self.var.check(&o.var)?;
        Ok(self.order.min(o.order))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let n = self.common(o)?;
        Ok(Self::from_fn(self.var.clone(), n, |k| &self.coeffs[k] + &o.coeffs[k]))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        let n = self.common(o)?;
        Ok(Self::from_fn(self.var.clone(), n, |k| &self.coeffs[k] - &o.coeffs[k]))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let n = self.common(o)?;
        let mut v = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs[..=n - i].iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Ok(TruncatedSeries::new(self.var.clone(), v))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.var.clone(), self.order, |k| -&self.coeffs[k])
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.var.clone(), self.order, |k| &self.coeffs[k] * c)
    }

    /// Multiply by `x^k`. The product is known through `order + k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        TruncatedSeries::new(self.var.clone(), v)
    }

    /// Divide by `x^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(ExactError::Domain(format!("series not divisible by x^{k}")));
        }
        Ok(TruncatedSeries::new(self.var.clone(), self.coeffs[k..].to_vec()))
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(ExactError::Domain("reciprocal of a series with zero constant term".into()));
        }
        let inv = a0.recip();
        let mut b: Vec<Rational> = Vec::with_capacity(self.order + 1);
        b.push(inv.clone());
        for n in 1..=self.order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &b[n - k];
                }
            }
            b.push(-acc * &inv);
        }
        Ok(TruncatedSeries::new(self.var.clone(), b))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.var.check(&o.var)?;
        self.mul(&o.reciprocal()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.var.clone(), self.order);
        for _ in 0..e {
            acc = acc.mul(self).expect("same variable");
        }
        acc
    }

    /// `self(inner(x))`; `inner` must have zero constant term. The result
    /// lives in the variable of `inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(ExactError::Domain("inner series of a composition must vanish at 0".into()));
        }
        let n = self.order.min(inner.order);
        let inner = inner.truncate(n);
        let mut acc = Self::zero(inner.var.clone(), n);
        for c in self.coeffs[..=n].iter().rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        if self.order == 0 {
            return Self::zero(self.var.clone(), 0);
        }
        Self::from_fn(self.var.clone(), self.order - 1, |k| {
            &self.coeffs[k + 1] * int(k as i64 + 1)
        })
    }

    /// Antiderivative with zero constant term, known through `order + 1`.
    pub fn integral(&self) -> Self {
        let mut v = vec![Rational::zero()];
        v.extend(self.coeffs.iter().enumerate().map(|(k, c)| c / int(k as i64 + 1)));
        TruncatedSeries::new(self.var.clone(), v)
    }

    /// Euler operator `x d/dx`; preserves the truncation order.
    pub fn theta(&self) -> Self {
        Self::from_fn(self.var.clone(), self.order, |k| &self.coeffs[k] * int(k as i64))
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(ExactError::Domain("exp needs a zero constant term".into()));
        }
        // n e_n = sum_{k=1}^n k s_k e_{n-k}
        let mut e = vec![Rational::one()];
        for n in 1..=self.order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &e[n - k] * int(k as i64);
                }
            }
            e.push(acc / int(n as i64));
        }
        Ok(TruncatedSeries::new(self.var.clone(), e))
    }

    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(ExactError::Domain("log needs constant term 1".into()));
        }
        // n l_n = n s_n - sum_{k=1}^{n-1} k l_k s_{n-k}
        let mut l = vec![Rational::zero()];
        for n in 1..=self.order {
            let mut acc = &self.coeffs[n] * int(n as i64);
            for k in 1..n {
                if !self.coeffs[n - k].is_zero() {
                    acc -= &l[k] * &self.coeffs[n - k] * int(k as i64);
                }
            }
            l.push(acc / int(n as i64));
        }
        Ok(TruncatedSeries::new(self.var.clone(), l))
    }

    /// Compositional inverse by Lagrange inversion:
    /// `[q^n] r = (1/n) [w^{n-1}] (w / s(w))^n`.
    ///
    /// Requires `s_0 = 0` and `s_1 != 0`. The result is in the variable
    /// `out` and has the same truncation order as `self`.
    pub fn lagrange_invert(&self, out: Var) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(ExactError::Domain("series to invert must vanish at 0".into()));
        }
        if self.order == 0 {
            return Ok(Self::zero(out, 0));
        }
        if self.coeffs[1].is_zero() {
            return Err(ExactError::Domain("series to invert has zero linear coefficient".into()));
        }
        let n = self.order;
        let phi = self.shift_down(1)?.reciprocal()?.truncate(n - 1);
        let mut r = vec![Rational::zero(); n + 1];
        let mut power = Self::one(self.var.clone(), n - 1);
        for (k, rk) in r.iter_mut().enumerate().skip(1) {
            power = power.mul(&phi)?;
            *rk = power.coeffs[k - 1].clone() / int(k as i64);
        }
        Ok(TruncatedSeries::new(out, r))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
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
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn w() -> Var {
        Var::new("w")
    }

    fn ints(v: &[i64]) -> TruncatedSeries {
        TruncatedSeries::new(w(), v.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn reciprocal_is_geometric() {
        let s = ints(&[1, 1, 0, 0, 0, 0]);
        assert_eq!(s.reciprocal().unwrap(), ints(&[1, -1, 1, -1, 1, -1]));
        assert!(ints(&[0, 1]).reciprocal().is_err());
    }

    #[test]
    fn exp_of_zero_is_one() {
        assert_eq!(TruncatedSeries::zero(w(), 4).exp().unwrap(), TruncatedSeries::one(w(), 4));
    }

    /// `[x^n] exp(sum a_k x^k)` summed over partitions of `n`.
    fn bell_exp_coeff(a: &[Rational], n: usize) -> Rational {
        fn go(a: &[Rational], rest: usize, part: usize, acc: Rational, out: &mut Rational) {
            if rest == 0 {
                *out += acc;
                return;
            }
            if part == 0 {
                return;
            }
            // choose multiplicity m of part `part`
            let mut m = 0usize;
            let mut term = acc.clone();
            loop {
                go(a, rest - m * part, part - 1, term.clone(), out);
                m += 1;
                if m * part > rest {
                    break;
                }
                term = term * &a[part] / int(m as i64);
            }
        }
        let mut out = Rational::zero();
        go(a, n, n, Rational::one(), &mut out);
        out
    }

    #[test]
    fn exp_matches_bell_summation() {
        let s = ints(&[0, 104, 9676]);
        let e = s.exp().unwrap();
        assert_eq!(e, ints(&[1, 104, 15084]));
        let a: Vec<Rational> = vec![int(0), rat(3, 2), int(-7), rat(1, 5), int(11), rat(-2, 3)];
        let e = TruncatedSeries::new(w(), a.clone()).exp().unwrap();
        for n in 0..=5 {
            assert_eq!(e.coeff(n), &bell_exp_coeff(&a, n), "n = {n}");
        }
    }

    #[test]
    fn exp_log_roundtrip() {
        let s = TruncatedSeries::new(w(), vec![int(0), rat(1, 3), int(-2), rat(5, 7), int(4)]);
        assert_eq!(s.exp().unwrap().log().unwrap(), s);
        assert!(s.log().is_err());
        assert!(ints(&[1, 1]).exp().is_err());
    }

    #[test]
    fn lagrange_inversion_catalan() {
        let s = ints(&[0, 1, 1, 0, 0, 0, 0, 0, 0]);
        let r = s.lagrange_invert(Var::new("q")).unwrap();
        assert_eq!(r.coeffs()[..5], ints(&[0, 1, -1, 2, -5]).with_var(Var::new("q")).coeffs()[..]);
        // back-substitution through order 8
        let back = s.compose(&r).unwrap();
        assert_eq!(back, TruncatedSeries::variable(Var::new("q"), 8));
        assert!(ints(&[0, 0, 1]).lagrange_invert(w()).is_err());
    }

    #[test]
    fn identity_inverts_to_itself() {
        let s = TruncatedSeries::variable(w(), 6);
        assert_eq!(s.lagrange_invert(w()).unwrap(), s);
    }

    #[test]
    fn mismatched_orders_truncate_to_minimum() {
        let a = ints(&[1, 2, 3, 4]);
        let b = ints(&[1, 1]);
        assert_eq!(a.add(&b).unwrap().order(), 1);
        assert_eq!(a.mul(&b).unwrap().order(), 1);
        let c = TruncatedSeries::one(Var::new("q"), 3);
        assert!(matches!(a.add(&c), Err(ExactError::VariableMismatch(..))));
    }

    #[test]
    fn json_roundtrip() {
        let s = TruncatedSeries::new(w(), vec![rat(1, 2), int(-3), rat(7, 9)]);
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains("\"order\":2"));
        assert!(j.contains("\"7/9\""));
        let back: TruncatedSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
