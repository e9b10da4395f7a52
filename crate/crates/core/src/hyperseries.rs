//! The hypergeometric periods of the quartic mirror family and the mirror
//! map built from them.
//!
//! Everything here is in the variable `w = z / 256`, where the
//! coefficients of the holomorphic period are the integers
//! `(4n)! / (n!)^4`. The logarithm in `W2` is the formal symbol `log w`;
//! branch choices only appear once values are evaluated numerically.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{harmonic_difference, int, LogSeries, Rational, Result, TruncatedSeries, Var};

pub fn w_var() -> Var {
    Var::new("w")
}

pub fn q_var() -> Var {
    Var::new("q")
}

/// `(4n)! / (n!)^4` for `n = 0..=order`, built incrementally.
pub fn w1_coefficients(order: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(order + 1);
    let mut c = BigInt::one();
    out.push(c.clone());
    for n in 1..=order as u64 {
        let m = 4 * n;
        c = c * BigInt::from(m * (m - 1) * (m - 2) * (m - 3));
        let n4 = BigInt::from(n).pow(4);
        debug_assert!((&c % &n4).is_zero());
        c /= n4;
        out.push(c.clone());
    }
    out
}

/// Holomorphic period `W1(w) = sum (4n)!/(n!)^4 w^n`.
pub fn w1_series(order: usize) -> TruncatedSeries {
    let c = w1_coefficients(order);
    TruncatedSeries::from_fn(w_var(), order, |n| Rational::from_integer(c[n].clone()))
}

/// Analytic part of the logarithmic period,
/// `4 sum (4n)!/(n!)^4 (H_{4n} - H_n) w^n`.
pub fn w2_analytic_part(order: usize) -> TruncatedSeries {
    let c = w1_coefficients(order);
    TruncatedSeries::from_fn(w_var(), order, |n| {
        Rational::from_integer(c[n].clone()) * harmonic_difference(n as u64) * int(4)
    })
}

/// `W2 = log(w) W1 + w2_analytic_part`.
pub fn w2_series(order: usize) -> LogSeries {
    LogSeries::from_parts(
        w_var(),
        order,
        [(1, w1_series(order)), (0, w2_analytic_part(order))],
    )
}

/// Checks `n^3 c_n = 256 (n - 1/4)(n - 1/2)(n - 3/4) c_{n-1}` for all
/// `1 <= n <= order`.
pub fn w1_recurrence_holds(order: usize) -> bool {
    let s = w1_series(order);
    (1..=order as i64).all(|n| {
        let lhs = s.coeff(n as usize) * int(n * n * n);
        let rhs = s.coeff(n as usize - 1)
            * int(256)
            * (int(n) - Rational::new(1.into(), 4.into()))
            * (int(n) - Rational::new(1.into(), 2.into()))
            * (int(n) - Rational::new(3.into(), 4.into()));
        lhs == rhs
    })
}

/// `2 pi i` times the period map, its exponential and the inverse of that.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorExpansion {
    /// `log w + A(w)` with `A = W2a / W1`.
    pub p_series: LogSeries,
    /// `q(w) = w exp(A(w))`.
    pub q_series: TruncatedSeries,
    /// `w(q)`, the compositional inverse of `q_series`.
    pub w_of_q: TruncatedSeries,
}

impl MirrorExpansion {
    /// Analytic part `A(w)` of `p_series`.
    pub fn analytic_part(&self) -> TruncatedSeries {
        self.p_series.part(0)
    }
}

/// Mirror map expansion with `A` exact through `w^order`; `q_series` and
/// `w_of_q` are then exact through order `order + 1`.
pub fn mirror_expansion(order: usize) -> Result<MirrorExpansion> {
    let a = w2_analytic_part(order).div(&w1_series(order))?;
    let p_series = LogSeries::from_parts(
        w_var(),
        order,
        [(1, TruncatedSeries::one(w_var(), order)), (0, a.clone())],
    );
    let q_series = a.exp()?.shift_up(1);
    let w_of_q = q_series.lagrange_invert(q_var())?;
    Ok(MirrorExpansion { p_series, q_series, w_of_q })
}

/// A coefficient that failed to be an integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonIntegral {
    pub series: String,
    pub index: usize,
    #[serde(with = "crate::exact::serde_rational")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralityReport {
    pub order: usize,
    pub coefficients_checked: usize,
    pub non_integral: Vec<NonIntegral>,
}

impl IntegralityReport {
    pub fn all_integral(&self) -> bool {
        self.non_integral.is_empty()
    }
}

/// Lists the non-integral coefficients of `q_series` and `w_of_q`
/// through index `order`.
pub fn integrality_audit(order: usize) -> Result<IntegralityReport> {
    let m = mirror_expansion(order.max(1) - 1)?;
    let mut non_integral = Vec::new();
    let mut checked = 0;
    for (name, s) in [("q_series", &m.q_series), ("w_of_q", &m.w_of_q)] {
        for (index, c) in s.coeffs().iter().enumerate().take(order + 1) {
            checked += 1;
            if !c.is_integer() {
                non_integral.push(NonIntegral {
                    series: name.to_string(),
                    index,
                    value: c.clone(),
                });
            }
        }
    }
    Ok(IntegralityReport { order, coefficients_checked: checked, non_integral })
}

/// Generalized hypergeometric series `pFq(upper; lower; x)` through `x^order`.
pub fn hypergeometric_series(
    upper: &[Rational],
    lower: &[Rational],
    var: Var,
    order: usize,
) -> TruncatedSeries {
    let mut c = Rational::one();
    let mut v = Vec::with_capacity(order + 1);
    v.push(c.clone());
    for n in 0..order {
        let nn = int(n as i64);
        for a in upper {
            c *= a + &nn;
        }
        for b in lower {
            c /= b + &nn;
        }
        c /= int(n as i64 + 1);
        v.push(c.clone());
    }
    TruncatedSeries::new(var, v)
}

/// `2F1(1/8, 3/8; 1; z)^2 == 3F2(1/4, 1/2, 3/4; 1, 1; z)` through `z^order`.
pub fn clausen_check(order: usize) -> bool {
    let z = Var::new("z");
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let f21 = hypergeometric_series(&[q(1, 8), q(3, 8)], &[int(1)], z.clone(), order);
    let f32 = hypergeometric_series(&[q(1, 4), q(1, 2), q(3, 4)], &[int(1), int(1)], z, order);
    f21.mul(&f21).map(|sq| sq == f32).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn factorial(n: u64) -> BigInt {
        (1..=n).map(BigInt::from).product()
    }

    #[test]
    fn w1_matches_factorials() {
        let c = w1_coefficients(12);
        assert_eq!(c[0], BigInt::from(1));
        assert_eq!(c[1], BigInt::from(24));
        assert_eq!(c[2], BigInt::from(2520));
        for n in 0..=12u64 {
            assert_eq!(c[n as usize], factorial(4 * n) / factorial(n).pow(4));
        }
        assert!(w1_recurrence_holds(60));
    }

    #[test]
    fn w2_first_terms() {
        let s = w2_analytic_part(3);
        assert_eq!(s.coeff(0), &int(0));
        assert_eq!(s.coeff(1), &int(104));
        assert_eq!(s.coeff(2), &(int(4 * 2520) * rat(341, 280)));
        assert_eq!(s.coeff(2), &int(12276));
    }

    #[test]
    fn mirror_map_coefficients() {
        let m = mirror_expansion(4).unwrap();
        let a = m.analytic_part();
        assert_eq!(a.coeffs()[1..], [int(104), int(9780), rat(4141760, 3), int(231052570)]);
        let q: Vec<_> = [0, 1, 104, 15188, 2585184, 480222434].iter().map(|&c| int(c)).collect();
        assert_eq!(m.q_series.coeffs(), &q[..]);
        let back = m.q_series.compose(&m.w_of_q).unwrap();
        assert_eq!(back, TruncatedSeries::variable(q_var(), 5));
    }

    #[test]
    fn q_series_is_w_exp_analytic_part() {
        let m = mirror_expansion(8).unwrap();
        let lhs = m.analytic_part().exp().unwrap().shift_up(1);
        assert_eq!(lhs, m.q_series);
        assert_eq!(m.q_series.order(), 9);
    }

    #[test]
    fn integrality_small_orders() {
        assert!(integrality_audit(1).unwrap().all_integral());
        let r = integrality_audit(20).unwrap();
        assert!(r.all_integral(), "{:?}", r.non_integral);
        assert_eq!(r.coefficients_checked, 42);
    }

    #[test]
    fn clausen_identity_low_orders() {
        assert!(clausen_check(0));
        let z = Var::new("z");
        let f32 = hypergeometric_series(
            &[rat(1, 4), rat(1, 2), rat(3, 4)],
            &[int(1), int(1)],
            z,
            1,
        );
        assert_eq!(f32.coeff(1), &rat(3, 32));
        assert!(clausen_check(40));
    }

    #[test]
    fn clausen_fails_for_wrong_lower_parameter() {
        let z = Var::new("z");
        let f21 = hypergeometric_series(&[rat(1, 8), rat(3, 8)], &[rat(1, 2)], z.clone(), 3);
        let f32 =
            hypergeometric_series(&[rat(1, 4), rat(1, 2), rat(3, 4)], &[int(1), int(1)], z, 3);
        assert_ne!(f21.mul(&f21).unwrap(), f32);
    }
}
