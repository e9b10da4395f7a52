//! Frobenius bases at a point of maximal unipotent monodromy.
//!
//! For `theta^r - x prod_i (theta + a_i)` the indicial equation at `0` is
//! `e^r = 0`. Writing `F(x, e) = x^e sum_n A_n(e) x^n` with
//! `A_n(e) = prod_{j<n} prod_i (e + j + a_i) / (e + j + 1)^r`, the
//! derivatives `f_k = d^k F / de^k` at `e = 0` (`k < r`) are solutions:
//! `f_k = sum_j C(k, j) log(x)^j x-series(A^(k-j))`.
//!
//! Continuing once counterclockwise around `0` sends `log x` to
//! `log x + 2 pi i`, so `f_k -> sum_j C(k, j) (2 pi i)^(k-j) f_j`.

use num_traits::{One, Zero};

use super::ball::CBall;
use super::elementary::{log, pi};
use super::eval::log_series_jet;
use super::matrix::CMatrix;
use crate::exact::{int, LogSeries, Rational, Result, TruncatedSeries, Var};

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// `(f_0, ..., f_{r-1})` through `x^order`, where `r` is the number of
/// upper parameters.
pub fn frobenius_basis_at_zero(upper: &[Rational], var: Var, order: usize) -> Result<Vec<LogSeries>> {
    let r = upper.len();
    let e = Var::new("e");
    let eo = r - 1;
    let lin = |c: Rational| -> TruncatedSeries {
        // c + e
        TruncatedSeries::from_fn(e.clone(), eo, |k| match k {
            0 => c.clone(),
            1 => Rational::one(),
            _ => Rational::zero(),
        })
    };
    let mut a_n = TruncatedSeries::one(e.clone(), eo);
    let mut coeffs: Vec<TruncatedSeries> = Vec::with_capacity(order + 1);
    coeffs.push(a_n.clone());
    for n in 0..order {
        let j = int(n as i64);
        let mut num = TruncatedSeries::one(e.clone(), eo);
        for a in upper {
            num = num.mul(&lin(&j + a))?;
        }
        let den = lin(&j + int(1)).pow(r as u32);
        a_n = a_n.mul(&num)?.div(&den)?;
        coeffs.push(a_n.clone());
    }
    // factorials k! for the derivative orders
    let fact = |k: u32| -> Rational { int((1..=k as i64).product::<i64>().max(1)) };
    let mut basis = Vec::with_capacity(r);
    for k in 0..r as u32 {
        let mut parts = Vec::new();
        for j in 0..=k {
            let m = (k - j) as usize;
            let scale = int(binomial(k, j)) * fact(k - j);
            let s = TruncatedSeries::from_fn(var.clone(), order, |n| coeffs[n].coeff(m) * &scale);
            parts.push((j, s));
        }
        basis.push(LogSeries::from_parts(var.clone(), order, parts));
    }
    Ok(basis)
}

/// Exact monodromy of the Frobenius basis around `0` (counterclockwise),
/// in the row convention `(f_0, .., f_{r-1}) -> (f_0, .., f_{r-1}) M`.
pub fn local_monodromy_at_zero(r: usize, prec: u32) -> CMatrix {
    let two_pi_i = CBall::new(super::ball::Ball::zero(prec), pi(prec).mul_int(2));
    CMatrix::from_fn(r, r, |j, k| {
        if j > k {
            return CBall::zero(prec);
        }
        let c = binomial(k as u32, j as u32);
        two_pi_i.pow((k - j) as u32).mul_int(c)
    })
}

/// Number of terms that makes the truncation error at `|x| <= r`
/// negligible at `prec` bits.
pub fn terms_for(r: f64, prec: u32) -> usize {
    let per_term = -r.log2();
    ((prec as f64 + 48.0) / per_term).ceil() as usize + 16
}

/// Jets (rows) of the basis functions (columns) at a positive rational
/// point, with the real logarithm.
pub fn frobenius_jets(basis: &[LogSeries], x: &Rational, len: usize, prec: u32) -> CMatrix {
    let xb = CBall::from_rationals(x, &int(0), prec);
    let lx = CBall::from_real(log(&super::ball::Ball::from_rational(x, prec)));
    let cols: Vec<Vec<CBall>> = basis.iter().map(|f| log_series_jet(f, &xb, &lx, len)).collect();
    CMatrix::from_fn(len, basis.len(), |i, j| cols[j][i].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::f32_operator;
    use crate::exact::rat;
    use crate::hyperseries::hypergeometric_series;

    fn upper() -> Vec<Rational> {
        vec![rat(1, 4), rat(1, 2), rat(3, 4)]
    }

    #[test]
    fn basis_is_killed_by_the_operator() {
        let z = Var::new("z");
        let op = f32_operator(z.clone());
        for f in frobenius_basis_at_zero(&upper(), z, 20).unwrap() {
            assert!(op.apply_log_series(&f).unwrap().is_zero());
        }
    }

    #[test]
    fn holomorphic_member_is_the_hypergeometric_series() {
        let z = Var::new("z");
        let b = frobenius_basis_at_zero(&upper(), z.clone(), 15).unwrap();
        assert_eq!(b[0].part(0), hypergeometric_series(&upper(), &[int(1), int(1)], z, 15));
        assert_eq!(b[0].max_log_power(), Some(0));
        assert_eq!(b[2].max_log_power(), Some(2));
    }

    #[test]
    fn log_member_matches_the_digamma_sum() {
        // f1 = log(z) F + 4 sum c_n (H_4n - H_n) z^n, c_n the 3F2 coefficients
        let z = Var::new("z");
        let b = frobenius_basis_at_zero(&upper(), z.clone(), 10).unwrap();
        let f = hypergeometric_series(&upper(), &[int(1), int(1)], z, 10);
        for n in 0..=10u64 {
            let expect = f.coeff(n as usize) * crate::exact::harmonic_difference(n) * int(4);
            assert_eq!(b[1].part(0).coeff(n as usize), &expect);
        }
    }
}
