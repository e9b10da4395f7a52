//! Evaluation of series at ball points, returning Taylor jets.
//!
//! A jet of length `m` at `x` holds `f(x), f'(x), f''(x)/2, ...,
//! f^(m-1)(x)/(m-1)!`, the first Taylor coefficients of `f` at `x`.

use num_traits::{Signed, ToPrimitive};

use super::ball::{pow2, up, Ball, CBall};
use super::FlowError;
use crate::exact::{int, LogSeries, Rational};

/// Product of two jets, truncated to the shorter length.
pub fn jet_mul(a: &[CBall], b: &[CBall]) -> Vec<CBall> {
    let m = a.len().min(b.len());
    let p = a.iter().chain(b).map(CBall::prec).max().unwrap_or(0);
    (0..m)
        .map(|k| {
            let mut acc = CBall::zero(p);
            for i in 0..=k {
                acc = &acc + &(&a[i] * &b[k - i]);
            }
            acc
        })
        .collect()
}

pub fn jet_add(a: &[CBall], b: &[CBall]) -> Vec<CBall> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn jet_scale(a: &[CBall], c: &CBall) -> Vec<CBall> {
    a.iter().map(|x| x * c).collect()
}

/// Jet of `log` at `x`, given the chosen value `log_x` of the logarithm.
pub fn log_jet(x: &CBall, log_x: &CBall, len: usize) -> Vec<CBall> {
    let mut out = Vec::with_capacity(len);
    out.push(log_x.clone());
    let inv = x.recip();
    let mut pw = inv.clone();
    for m in 1..len {
        let t = pw.div_int(m as i64);
        out.push(if m % 2 == 1 { t } else { -t });
        pw = &pw * &inv;
    }
    out
}

fn binomial(n: usize, k: usize) -> i64 {
    if n < k {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// Jet of the polynomial `sum a_n x^n`.
pub fn polynomial_jet(coeffs: &[Rational], x: &CBall, len: usize, prec: u32) -> Vec<CBall> {
    (0..len)
        .map(|k| {
            let mut acc = CBall::zero(prec);
            for n in (k..coeffs.len()).rev() {
                let c = &coeffs[n] * int(binomial(n, k));
                acc = &(&acc * x) + &CBall::from_real(Ball::from_rational(&c, prec));
            }
            acc
        })
        .collect()
}

/// Heuristic bound for the jets of the omitted tail of a truncated power
/// series with slowly varying coefficients, evaluated at `|x| < 1`.
fn truncation_tail(coeffs: &[Rational], r: f64, len: usize) -> Vec<f64> {
    let n = coeffs.len();
    let tail_window = &coeffs[n.saturating_sub(5)..];
    let b = tail_window
        .iter()
        .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    (0..len)
        .map(|k| {
            if r >= 1.0 {
                return f64::INFINITY;
            }
            let pw = r.powi((n - k.min(n)) as i32);
            up(4.0 * (b.max(1.0)) * binomial(n + 1, k) as f64 * pw
                / (1.0 - r).powi(k as i32 + 1))
        })
        .collect()
}

/// Jet of a log-series `sum_k S_k(x) log(x)^k` at `x`, with the tails of
/// the truncated `S_k` bounded heuristically.
pub fn log_series_jet(s: &LogSeries, x: &CBall, log_x: &CBall, len: usize) -> Vec<CBall> {
    let prec = x.prec();
    let r = x.abs_upper();
    let lj = log_jet(x, log_x, len);
    let mut out = vec![CBall::zero(prec); len];
    let mut lpow = {
        let mut one = vec![CBall::zero(prec); len];
        one[0] = CBall::one(prec);
        one
    };
    let max_k = s.max_log_power().unwrap_or(0);
    for k in 0..=max_k {
        let part = s.part(k);
        if !part.is_zero() {
            let coeffs = part.coeffs();
            let mut sj = polynomial_jet(coeffs, x, len, prec);
            for (v, t) in sj.iter_mut().zip(truncation_tail(coeffs, r, len)) {
                *v = v.add_error(t);
            }
            out = jet_add(&out, &jet_mul(&sj, &lpow));
        }
        lpow = jet_mul(&lpow, &lj);
    }
    out
}

/// Jet of `pFq(upper; lower; x)` (all parameters positive, `p <= q + 1`)
/// with a rigorous tail bound.
pub fn hypergeometric_jet(
    upper: &[Rational],
    lower: &[Rational],
    x: &CBall,
    len: usize,
    prec: u32,
) -> Result<Vec<CBall>, FlowError> {
    if upper.len() > lower.len() + 1
        || upper.iter().chain(lower).any(|a| !a.is_positive())
    {
        return Err(FlowError::Domain("hypergeometric_jet needs positive parameters, p <= q + 1".into()));
    }
    let r = x.abs_upper();
    if upper.len() == lower.len() + 1 && r >= 1.0 {
        return Err(FlowError::Domain(format!("|x| = {r} outside the disc of convergence")));
    }
    let wp = prec + 32;
    let x = x.with_prec(wp);
    // denominators paired with numerators: lower params then the 1 of n!
    let mut dens: Vec<Rational> = lower.to_vec();
    dens.push(int(1));
    let mut out = vec![CBall::zero(wp); len];
    let mut powers: Vec<CBall> = vec![CBall::one(wp)];
    let mut c = Ball::from_int(1, wp);
    let eps = pow2(-(wp as i64));
    let mut n: usize = 0;
    loop {
        // add c_n * C(n,k) x^(n-k) to each jet entry
        for k in 0..len.min(n + 1) {
            let term = powers[n - k].scale(&c).mul_int(binomial(n, k));
            out[k] = &out[k] + &term;
        }
        // ratio c_{n+1}/c_n
        let nn = int(n as i64);
        let mut ratio = Rational::from_integer(1.into());
        for a in upper {
            ratio *= a + &nn;
        }
        for b in &dens {
            ratio /= b + &nn;
        }
        c = c.mul_rational(&ratio);
        let next_pow = &powers[n] * &x;
        powers.push(next_pow);
        n += 1;
        // rigorous ratio bound for every later term
        let nf = n as f64;
        let mut rho = r;
        for (i, a) in upper.iter().enumerate() {
            let af = a.to_f64().unwrap_or(f64::INFINITY);
            let bf = dens.get(i).and_then(|b| b.to_f64()).unwrap_or(0.0);
            rho *= ((nf + af) / (nf + bf)).max(1.0);
        }
        for b in dens.iter().skip(upper.len()) {
            rho /= nf + b.to_f64().unwrap_or(0.0);
        }
        let rho = up(rho * (nf + 1.0) / (nf + 1.0 - len as f64).max(1.0));
        // first omitted term of each jet entry
        let firsts: Vec<f64> = (0..len.min(n + 1))
            .map(|k| c.abs_upper() * powers[n - k].abs_upper() * binomial(n, k) as f64)
            .collect();
        let small = (0..len.min(n + 1)).all(|k| {
            let (pr, pi) = powers[n - k].mid_f64();
            c.mid_f64().abs() * pr.hypot(pi) * (binomial(n, k) as f64) < eps
        });
        if n > len && rho < 1.0 && small {
            for (v, t) in out.iter_mut().zip(&firsts) {
                *v = v.add_error(up(t / (1.0 - rho)));
            }
            break;
        }
        if n > 200_000 {
            return Err(FlowError::Precision { radius: f64::INFINITY, tolerance: eps });
        }
    }
    Ok(out.into_iter().map(|v| v.with_prec(prec)).collect())
}
