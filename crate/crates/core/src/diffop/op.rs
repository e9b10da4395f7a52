use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{
    int, ExactError, LogSeries, Poly, Rational, RationalFunction, Result, Var,
};

/// Which basic derivation the coefficient list is written against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    /// `sum a_k(x) theta^k` with `theta = x d/dx`.
    Theta,
    /// `sum a_k(x) d^k/dx^k`.
    Partial,
}

/// Linear differential operator `sum_k a_k(x) D^k` with rational-function
/// coefficients written to the left of the derivation `D`.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    var: Var,
    form: Form,
    coeffs: Vec<RationalFunction>,
}

/// Signed Stirling numbers of the first kind `s(n, k)` for `n, k <= max`.
fn stirling1(max: usize) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; max + 1]; max + 1];
    s[0][0] = 1;
    for n in 1..=max {
        for k in 1..=n {
            s[n][k] = s[n - 1][k - 1] - (n as i64 - 1) * s[n - 1][k];
        }
    }
    s
}

/// Stirling numbers of the second kind `S(n, k)`.
fn stirling2(max: usize) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; max + 1]; max + 1];
    s[0][0] = 1;
    for n in 1..=max {
        for k in 1..=n {
            s[n][k] = s[n - 1][k - 1] + k as i64 * s[n - 1][k];
        }
    }
    s
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

impl DiffOp {
    /// Trailing zero coefficients are dropped; the all-zero operator is
    /// represented by an empty coefficient list.
    pub fn new(var: Var, form: Form, mut coeffs: Vec<RationalFunction>) -> Result<Self> {
        for c in &coeffs {
            var.check(c.var())?;
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(DiffOp { var, form, coeffs })
    }

    pub fn zero(var: Var, form: Form) -> Self {
        DiffOp { var, form, coeffs: Vec::new() }
    }

    /// Multiplication by the function `f`, as an operator of order 0.
    pub fn function(f: RationalFunction, form: Form) -> Self {
        let var = f.var().clone();
        DiffOp::new(var, form, vec![f]).expect("same variable")
    }

    /// The bare derivation `D` of the given form.
    pub fn derivation(var: Var, form: Form) -> Self {
        DiffOp {
            coeffs: vec![RationalFunction::zero(var.clone()), RationalFunction::one(var.clone())],
            var,
            form,
        }
    }

    /// Theta-form operator with polynomial coefficients given as lists
    /// of rationals: `coeffs[k]` multiplies `theta^k`.
    pub fn theta_poly(var: Var, coeffs: Vec<Vec<Rational>>) -> Self {
        let cs = coeffs
            .into_iter()
            .map(|p| RationalFunction::from_poly(Poly::new(var.clone(), p)))
            .collect();
        DiffOp::new(var, Form::Theta, cs).expect("same variable")
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RationalFunction {
        self.coeffs.get(k).cloned().unwrap_or_else(|| RationalFunction::zero(self.var.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order of the operator (`None` for the zero operator).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> RationalFunction {
        self.coeffs.last().cloned().unwrap_or_else(|| RationalFunction::zero(self.var.clone()))
    }

    fn x_pow(&self, e: i32) -> RationalFunction {
        RationalFunction::x(self.var.clone()).pow(e).expect("x is nonzero")
    }

    pub fn to_partial(&self) -> DiffOp {
        if self.form == Form::Partial {
            return self.clone();
        }
        // theta^k = sum_j S(k, j) x^j d^j
        let n = self.coeffs.len();
        let s2 = stirling2(n);
        let mut out = vec![RationalFunction::zero(self.var.clone()); n];
        for (k, a) in self.coeffs.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate().take(k + 1) {
                if s2[k][j] != 0 {
                    let term = a.mul(&self.x_pow(j as i32)).unwrap().scale(&int(s2[k][j]));
                    *o = o.add(&term).unwrap();
                }
            }
        }
        DiffOp::new(self.var.clone(), Form::Partial, out).unwrap()
    }

    pub fn to_theta(&self) -> DiffOp {
        if self.form == Form::Theta {
            return self.clone();
        }
        // d^j = x^{-j} sum_i s(j, i) theta^i
        let n = self.coeffs.len();
        let s1 = stirling1(n);
        let mut out = vec![RationalFunction::zero(self.var.clone()); n];
        for (j, a) in self.coeffs.iter().enumerate() {
            let base = a.mul(&self.x_pow(-(j as i32))).unwrap();
            for (i, o) in out.iter_mut().enumerate().take(j + 1) {
                if s1[j][i] != 0 {
                    *o = o.add(&base.scale(&int(s1[j][i]))).unwrap();
                }
            }
        }
        DiffOp::new(self.var.clone(), Form::Theta, out).unwrap()
    }

    pub fn to_form(&self, form: Form) -> DiffOp {
        match form {
            Form::Theta => self.to_theta(),
            Form::Partial => self.to_partial(),
        }
    }

    fn zip(&self, o: &DiffOp, f: impl Fn(&RationalFunction, &RationalFunction) -> Result<RationalFunction>) -> Result<DiffOp> {
        self.var.check(&o.var)?;
        let o = o.to_form(self.form);
        let n = self.coeffs.len().max(o.coeffs.len());
        let cs = (0..n).map(|k| f(&self.coeff(k), &o.coeff(k))).collect::<Result<Vec<_>>>()?;
        DiffOp::new(self.var.clone(), self.form, cs)
    }

    pub fn add(&self, o: &DiffOp) -> Result<DiffOp> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &DiffOp) -> Result<DiffOp> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        let cs = self.coeffs.iter().map(|a| a.scale(c)).collect();
        DiffOp::new(self.var.clone(), self.form, cs).unwrap()
    }

    /// `f * self`.
    pub fn left_multiply(&self, f: &RationalFunction) -> Result<DiffOp> {
        self.var.check(f.var())?;
        let cs = self.coeffs.iter().map(|a| f.mul(a)).collect::<Result<Vec<_>>>()?;
        DiffOp::new(self.var.clone(), self.form, cs)
    }

    /// `self o f`, i.e. first multiply by `f`, then apply `self`.
    pub fn right_multiply_by_function(&self, f: &RationalFunction) -> Result<DiffOp> {
        self.compose(&DiffOp::function(f.clone(), self.form))
    }

    /// Operator product `self o o` via the Leibniz rule; the result is in
    /// the form of `self`.
    pub fn compose(&self, o: &DiffOp) -> Result<DiffOp> {
        self.var.check(&o.var)?;
        let a = self.to_partial();
        let b = o.to_partial();
        if a.is_zero() || b.is_zero() {
            return Ok(DiffOp::zero(self.var.clone(), self.form));
        }
        let n = a.coeffs.len() + b.coeffs.len() - 1;
        let mut out = vec![RationalFunction::zero(self.var.clone()); n];
        for (j, g) in b.coeffs.iter().enumerate() {
            // derivatives of g up to the order of a
            let mut ders = vec![g.clone()];
            for _ in 1..a.coeffs.len() {
                let d = ders.last().unwrap().derivative();
                ders.push(d);
            }
            for (i, f) in a.coeffs.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                // f d^i g d^j = sum_l C(i,l) f g^{(l)} d^{i-l+j}
                for (l, gl) in ders.iter().enumerate().take(i + 1) {
                    if gl.is_zero() {
                        continue;
                    }
                    let term = f.mul(gl)?.scale(&int(binomial(i, l)));
                    out[i - l + j] = out[i - l + j].add(&term)?;
                }
            }
        }
        Ok(DiffOp::new(self.var.clone(), Form::Partial, out)?.to_form(self.form))
    }

    /// Divide through by the leading coefficient (partial form).
    pub fn monic(&self) -> Result<DiffOp> {
        let p = self.to_partial();
        if p.is_zero() {
            return Ok(p);
        }
        let inv = RationalFunction::one(self.var.clone()).div(&p.leading())?;
        p.left_multiply(&inv)
    }

    /// Same operator, regardless of the form it is written in.
    pub fn same_operator(&self, o: &DiffOp) -> bool {
        self.var == o.var && self.to_partial().coeffs == o.to_partial().coeffs
    }

    /// Equal up to left multiplication by a nonzero rational function.
    pub fn equivalent(&self, o: &DiffOp) -> bool {
        match (self.monic(), o.monic()) {
            (Ok(a), Ok(b)) => a.same_operator(&b),
            _ => false,
        }
    }

    /// Pull back along `x = phi(y)`: the returned operator acts on
    /// `g(y) = f(phi(y))` exactly as `self` acts on `f`.
    pub fn pullback(&self, phi: &RationalFunction) -> Result<DiffOp> {
        let y = phi.var().clone();
        let p = self.to_partial();
        let dphi = phi.derivative();
        if dphi.is_zero() {
            return Err(ExactError::Domain("pullback along a constant map".into()));
        }
        // d/dx = (1 / phi') d/dy
        let dx = DiffOp::new(
            y.clone(),
            Form::Partial,
            vec![RationalFunction::zero(y.clone()), RationalFunction::one(y.clone()).div(&dphi)?],
        )?;
        let mut power = DiffOp::function(RationalFunction::one(y.clone()), Form::Partial);
        let mut acc = DiffOp::zero(y.clone(), Form::Partial);
        for a in &p.coeffs {
            let a_y = a.compose(phi)?;
            acc = acc.add(&power.left_multiply(&a_y)?)?;
            power = dx.compose(&power)?;
        }
        Ok(acc.to_form(self.form))
    }

    /// Rewrite a theta-form operator in `x` along `s = c * x^m`, where all
    /// coefficients are rational functions of `x^|m|`. Uses
    /// `theta_x = m theta_s`.
    pub fn descend_power(&self, s: Var, m: i32, c: &Rational) -> Result<DiffOp> {
        if m == 0 || c.is_zero() {
            return Err(ExactError::Domain("degenerate power substitution".into()));
        }
        let th = self.to_theta();
        let step = m.unsigned_abs() as usize;
        // y = x^|m| as a rational function of s
        let s_over_c = RationalFunction::x(s.clone()).scale(&c.recip());
        let y_of_s = if m > 0 { s_over_c } else { RationalFunction::one(s.clone()).div(&s_over_c)? };
        let squeeze = |p: &Poly| -> Result<Poly> {
            let mut v = Vec::new();
            for (k, a) in p.coeffs().iter().enumerate() {
                if k % step == 0 {
                    v.push(a.clone());
                } else if !a.is_zero() {
                    return Err(ExactError::Domain(format!(
                        "coefficient is not a function of {}^{step}",
                        self.var
                    )));
                }
            }
            Ok(Poly::new(s.clone(), v))
        };
        let mut cs = Vec::new();
        for (k, a) in th.coeffs.iter().enumerate() {
            let g = RationalFunction::new(squeeze(a.numer())?, squeeze(a.denom())?)?;
            cs.push(g.compose(&y_of_s)?.scale(&num_traits::Pow::pow(int(m as i64), k as u32)));
        }
        DiffOp::new(s, Form::Theta, cs)
    }

    /// Left-multiply by the least common multiple of all coefficient
    /// denominators, leaving polynomial coefficients.
    pub fn clear_denominators(&self) -> Result<DiffOp> {
        let mut l = Poly::one(self.var.clone());
        for a in &self.coeffs {
            let g = l.gcd(a.denom())?;
            let (q, _) = a.denom().div_rem(&g)?;
            l = &l * &q;
        }
        self.left_multiply(&RationalFunction::from_poly(l))
    }

    /// Apply to a rational function (partial form semantics).
    pub fn apply_function(&self, f: &RationalFunction) -> Result<RationalFunction> {
        let p = self.to_partial();
        let mut acc = RationalFunction::zero(self.var.clone());
        let mut d = f.clone();
        for a in &p.coeffs {
            acc = acc.add(&a.mul(&d)?)?;
            d = d.derivative();
        }
        Ok(acc)
    }

    /// Apply to a log-series in the same variable. Coefficients are
    /// expanded at the origin, so they must be regular there.
    pub fn apply_log_series(&self, f: &LogSeries) -> Result<LogSeries> {
        self.var.check(f.var())?;
        let th = self.to_theta();
        let n = f.order();
        let mut acc = LogSeries::zero(self.var.clone(), n);
        let mut d = f.clone();
        for a in &th.coeffs {
            if !a.is_zero() {
                acc = acc.add(&d.mul_series(&a.to_series(n)?)?)?;
            }
            d = d.theta();
        }
        Ok(acc)
    }

    /// Hypergeometric operator
    /// `theta prod_j (theta + b_j - 1) - x prod_i (theta + a_i)`.
    pub fn hypergeometric(upper: &[Rational], lower: &[Rational], var: Var) -> DiffOp {
        let mul = |p: &[Rational], shift: &Rational| -> Vec<Rational> {
            // p(theta) * (theta + shift)
            let mut out = vec![Rational::zero(); p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                out[k + 1] += c;
                out[k] += c * shift;
            }
            out
        };
        let mut left = vec![Rational::zero(), Rational::one()];
        for b in lower {
            left = mul(&left, &(b - Rational::one()));
        }
        let mut right = vec![Rational::one()];
        for a in upper {
            right = mul(&right, a);
        }
        let n = left.len().max(right.len());
        let cs = (0..n)
            .map(|k| {
                let l = left.get(k).cloned().unwrap_or_else(Rational::zero);
                let r = right.get(k).cloned().unwrap_or_else(Rational::zero);
                vec![l, -r]
            })
            .collect();
        DiffOp::theta_poly(var, cs)
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let d = match self.form {
            Form::Theta => "theta",
            Form::Partial => "d",
        };
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "[{a}]*{d}_{}^{k}", self.var)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, TruncatedSeries};

    fn t() -> Var {
        Var::new("t")
    }

    fn poly_rf(var: Var, c: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(Poly::from_ints(var, c))
    }

    #[test]
    fn leibniz_rule() {
        let d = DiffOp::derivation(t(), Form::Partial);
        let tt = DiffOp::function(RationalFunction::x(t()), Form::Partial);
        let prod = d.compose(&tt).unwrap();
        let expected = DiffOp::new(
            t(),
            Form::Partial,
            vec![RationalFunction::one(t()), RationalFunction::x(t())],
        )
        .unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn theta_partial_roundtrip() {
        let th = DiffOp::derivation(t(), Form::Theta);
        let p = th.to_partial();
        assert_eq!(p.coeff(1), RationalFunction::x(t()));
        assert!(p.coeff(0).is_zero());
        let op = DiffOp::hypergeometric(&[rat(1, 4), rat(1, 2), rat(3, 4)], &[int(1), int(1)], t());
        assert_eq!(op.to_partial().to_theta(), op);
        let q = DiffOp::new(t(), Form::Partial, vec![poly_rf(t(), &[1, 2]), poly_rf(t(), &[0, 0, 3]), poly_rf(t(), &[5])]).unwrap();
        assert_eq!(q.to_theta().to_partial(), q);
    }

    #[test]
    fn compose_is_associative_on_samples() {
        let a = DiffOp::new(t(), Form::Partial, vec![poly_rf(t(), &[0, 1]), poly_rf(t(), &[2])]).unwrap();
        let b = DiffOp::new(t(), Form::Theta, vec![poly_rf(t(), &[1, 0, 1]), poly_rf(t(), &[0, 3])]).unwrap();
        let c = DiffOp::derivation(t(), Form::Partial);
        let l = a.compose(&b).unwrap().compose(&c).unwrap();
        let r = a.compose(&b.compose(&c).unwrap()).unwrap();
        assert!(l.same_operator(&r));
    }

    #[test]
    fn pullback_of_theta_is_scaled() {
        let z = Var::new("z");
        let phi = RationalFunction::x(t()).pow(-4).unwrap();
        let th = DiffOp::derivation(z.clone(), Form::Theta);
        let pb = th.pullback(&phi).unwrap();
        let expected = DiffOp::derivation(t(), Form::Theta).scale(&rat(-1, 4));
        assert!(pb.same_operator(&expected));
        // d_z applied to z pulls back to d(t^-4)/dt / phi' = 1
        let dz = DiffOp::derivation(z, Form::Partial).pullback(&phi).unwrap();
        assert_eq!(dz.apply_function(&phi).unwrap(), RationalFunction::one(t()));
        // theta_z (t^-4n) = n t^-4n checked on n = 3
        let f = RationalFunction::x(t()).pow(-12).unwrap();
        assert_eq!(pb.apply_function(&f).unwrap(), f.scale(&int(3)));
    }

    #[test]
    fn apply_to_series_matches_recurrence() {
        let w = Var::new("w");
        // (1 - w)^{-1/2} is killed by theta - w (theta + 1/2)
        let op = DiffOp::hypergeometric(&[rat(1, 2)], &[], w.clone());
        let s = crate::hyperseries::hypergeometric_series(&[rat(1, 2)], &[], w.clone(), 10);
        let out = op.apply_log_series(&LogSeries::from_series(s.clone())).unwrap();
        assert!(out.is_zero());
        let bad = TruncatedSeries::one(w, 10).add(&s).unwrap();
        assert!(!op.apply_log_series(&LogSeries::from_series(bad)).unwrap().is_zero());
    }
}
