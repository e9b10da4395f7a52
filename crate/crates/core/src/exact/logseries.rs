use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{int, Rational, Result, TruncatedSeries, Var};

/// `sum_k S_k(x) * (log x)^k` with each `S_k` a truncated series in the
/// same variable. Zero parts are dropped, so the map only holds the log
/// powers that actually occur.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogSeries {
    var: Var,
    order: usize,
    parts: BTreeMap<u32, TruncatedSeries>,
}

impl LogSeries {
    pub fn zero(var: Var, order: usize) -> Self {
        LogSeries { var, order, parts: BTreeMap::new() }
    }

    pub fn from_series(s: TruncatedSeries) -> Self {
        Self::from_parts(s.var().clone(), s.order(), [(0, s)])
    }

    /// `(log x)^k` times the given series.
    pub fn with_log_power(s: TruncatedSeries, k: u32) -> Self {
        Self::from_parts(s.var().clone(), s.order(), [(k, s)])
    }

    /// The formal logarithm `log x` itself.
    pub fn log_var(var: Var, order: usize) -> Self {
        Self::with_log_power(TruncatedSeries::one(var, order), 1)
    }

    /// Collects parts; the resulting order is the minimum of `order` and
    /// all part orders. Panics on a variable mismatch.
    pub fn from_parts(
        var: Var,
        order: usize,
        parts: impl IntoIterator<Item = (u32, TruncatedSeries)>,
    ) -> Self {
        let parts: Vec<_> = parts.into_iter().collect();
        let order = parts.iter().map(|(_, s)| s.order()).fold(order, usize::min);
        let mut map: BTreeMap<u32, TruncatedSeries> = BTreeMap::new();
        for (k, s) in parts {
            assert_eq!(s.var(), &var, "log-series part in the wrong variable");
            let s = s.truncate(order);
            let e = map.entry(k).or_insert_with(|| TruncatedSeries::zero(var.clone(), order));
            *e = e.add(&s).expect("same variable");
        }
        map.retain(|_, s| !s.is_zero());
        LogSeries { var, order, parts: map }
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn parts(&self) -> &BTreeMap<u32, TruncatedSeries> {
        &self.parts
    }

    /// Coefficient series of `(log x)^k` (zero if absent).
    pub fn part(&self, k: u32) -> TruncatedSeries {
        self.parts
            .get(&k)
            .cloned()
            .unwrap_or_else(|| TruncatedSeries::zero(self.var.clone(), self.order))
    }

    pub fn max_log_power(&self) -> Option<u32> {
        self.parts.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.var.check(&o.var)?;
        let all = self.parts.iter().chain(o.parts.iter()).map(|(k, s)| (*k, s.clone()));
        Ok(Self::from_parts(self.var.clone(), self.order.min(o.order), all))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_parts(
            self.var.clone(),
            self.order,
            self.parts.iter().map(|(k, s)| (*k, s.scale(c))),
        )
    }

    /// Distributes over log powers: `(log x)^i * (log x)^j = (log x)^(i+j)`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.var.check(&o.var)?;
        let mut terms = Vec::new();
        for (i, a) in &self.parts {
            for (j, b) in &o.parts {
                terms.push((i + j, a.mul(b)?));
            }
        }
        Ok(Self::from_parts(self.var.clone(), self.order.min(o.order), terms))
    }

    pub fn mul_series(&self, s: &TruncatedSeries) -> Result<Self> {
        self.mul(&Self::from_series(s.clone()))
    }

    /// Multiply by `x^k`; raises the truncation order by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        Self::from_parts(
            self.var.clone(),
            self.order + k,
            self.parts.iter().map(|(p, s)| (*p, s.shift_up(k))),
        )
    }

    /// Euler operator `x d/dx`, using `theta(log x) = 1`.
    pub fn theta(&self) -> Self {
        let mut terms = Vec::new();
        for (k, s) in &self.parts {
            terms.push((*k, s.theta()));
            if *k > 0 {
                terms.push((k - 1, s.scale(&int(*k as i64))));
            }
        }
        Self::from_parts(self.var.clone(), self.order, terms)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_parts(
            self.var.clone(),
            order.min(self.order),
            self.parts.iter().map(|(k, s)| (*k, s.clone())),
        )
    }
}

impl fmt::Debug for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "O({}^{})", self.var, self.order + 1);
        }
        let mut first = true;
        for (k, s) in &self.parts {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "[{s}]")?,
                _ => write!(f, "[{s}]*log({})^{k}", self.var)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Var {
        Var::new("w")
    }

    #[test]
    fn log_powers_collect() {
        let l = LogSeries::log_var(w(), 5);
        let l2 = l.mul(&l).unwrap();
        assert_eq!(l2.max_log_power(), Some(2));
        let l4 = l2.mul(&l2).unwrap();
        assert_eq!(l4.max_log_power(), Some(4));
        assert!(l.sub(&l).unwrap().is_zero());
    }

    #[test]
    fn theta_of_log_square() {
        // theta((log w)^2 * w) = w (log w)^2 + 2 w log w
        let w1 = TruncatedSeries::variable(w(), 4);
        let f = LogSeries::with_log_power(w1.clone(), 2);
        let g = f.theta();
        assert_eq!(g.part(2), w1);
        assert_eq!(g.part(1), w1.scale(&int(2)));
        assert_eq!(g.part(0), TruncatedSeries::zero(w(), 4));
    }

    #[test]
    fn order_is_minimum_of_parts() {
        let a = LogSeries::from_series(TruncatedSeries::one(w(), 7));
        let b = LogSeries::log_var(w(), 3);
        assert_eq!(a.add(&b).unwrap().order(), 3);
        assert_eq!(a.shift_up(2).order(), 9);
    }
}
