//! Constants and elementary functions on balls: `pi`, `ln 2`, `exp`,
//! `log`, `sqrt` of complex balls and the Gamma function on `(0, 1]`.
//!
//! All series are summed at a few guard bits above the requested
//! precision and carry an explicit tail bound in the radius.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ball::{pow2, up, Ball, CBall};
use crate::exact::Rational;

const GUARD: u32 = 24;

/// `sum_{n>=0} s^n / ((2n+1) k^(2n+1))` in fixed point at `p` bits, with
/// `s = -1` for arctan and `s = +1` for artanh. Returns the sum and an
/// error bound in ulps.
fn arc_series_inv(k: u64, p: u32, alternating: bool) -> (BigInt, u64) {
    let k2 = BigInt::from(k * k);
    let mut power = (BigInt::one() << p as usize) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * n + 1);
        if alternating && n % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        power /= &k2;
        n += 1;
    }
    // one ulp per truncated term, plus the (sub-ulp) tail
    (sum, n + 2)
}

/// `pi` by Machin's formula `16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(prec: u32) -> Ball {
    let p = prec + GUARD;
    let (a, ea) = arc_series_inv(5, p, true);
    let (b, eb) = arc_series_inv(239, p, true);
    let mid = a * 16 - b * 4;
    let err = (16 * ea + 4 * eb) as f64 * pow2(-(p as i64));
    Ball::from_parts(mid, p, up(err)).with_prec(prec)
}

/// `ln 2 = 2 artanh(1/3)`.
pub fn ln2(prec: u32) -> Ball {
    let p = prec + GUARD;
    let (a, ea) = arc_series_inv(3, p, false);
    // tail of the positive series is below one ulp times 9/8
    let err = (2 * ea + 3) as f64 * pow2(-(p as i64));
    Ball::from_parts(a * 2, p, up(err)).with_prec(prec)
}

/// `exp(x)` for a real ball.
pub fn exp(x: &Ball) -> Ball {
    let prec = x.prec();
    if !x.is_finite() {
        return Ball::from_parts(BigInt::zero(), prec, f64::INFINITY);
    }
    let xm = x.mid_f64();
    let k = (xm / std::f64::consts::LN_2).round() as i64;
    let s: u32 = 10;
    let wp = prec + GUARD + 2 * s + k.unsigned_abs().min(4096) as u32;
    let xw = x.with_prec(wp);
    let r = &xw - &ln2(wp).mul_int(k);
    let y = r.mul_pow2(-(s as i64));
    // Taylor series of exp(y), |y| < 2^-s
    let ybound = y.abs_upper();
    let mut sum = Ball::from_int(1, wp);
    let mut term = Ball::from_int(1, wp);
    let mut n = 1i64;
    loop {
        term = (&term * &y).div_int(n);
        sum = &sum + &term;
        let t = term.abs_upper();
        if t < pow2(-(wp as i64) - 4) || n > 10_000 {
            // remaining terms bounded by a geometric series of ratio ybound
            let tail = up(t * ybound / (1.0 - ybound));
            sum = sum.add_error(tail);
            break;
        }
        n += 1;
    }
    for _ in 0..s {
        sum = sum.square();
    }
    sum.mul_pow2(k).with_prec(prec)
}

/// `log(x)` for a real ball with `x > 0`.
pub fn log(x: &Ball) -> Ball {
    let prec = x.prec();
    if !x.is_positive() {
        return Ball::from_parts(BigInt::zero(), prec, f64::INFINITY);
    }
    let wp = prec + GUARD;
    let xw = x.with_prec(wp);
    // x = 2^k m with m in [0.75, 1.5)
    let xm = xw.mid_f64();
    let mut k = xm.log2().floor() as i64;
    if xm / pow2(k) >= 1.5 {
        k += 1;
    }
    let m = xw.mul_pow2(-k);
    let one = Ball::from_int(1, wp);
    let u = &(&m - &one) / &(&m + &one);
    let u2 = u.square();
    let ub = u.abs_upper();
    let mut pw = u.clone();
    let mut sum = u.clone();
    let mut n = 1i64;
    loop {
        pw = &pw * &u2;
        let term = pw.div_int(2 * n + 1);
        sum = &sum + &term;
        let t = pw.abs_upper();
        if t < pow2(-(wp as i64) - 4) || n > 100_000 {
            let tail = up(t * ub * ub / (1.0 - ub * ub));
            sum = sum.add_error(tail);
            break;
        }
        n += 1;
    }
    let l = &sum.mul_int(2) + &ln2(wp).mul_int(k);
    l.with_prec(prec)
}

pub fn sqrt(x: &Ball) -> Ball {
    x.sqrt()
}

/// Principal square root of a complex ball (branch cut on the negative
/// real axis). Returns an infinite ball if the input meets the cut.
pub fn csqrt(z: &CBall) -> CBall {
    let p = z.prec();
    if z.im.contains_zero() {
        if z.re.is_positive() {
            // sqrt(x + iy) with y small: use re part formula
            let r = z.norm_sqr().sqrt();
            let s = (&(&r + &z.re).mul_pow2(-1)).sqrt();
            let im = &z.im / &s.mul_int(2);
            return CBall::new(s, im);
        }
        return CBall::new(
            Ball::from_parts(BigInt::zero(), p, f64::INFINITY),
            Ball::from_parts(BigInt::zero(), p, f64::INFINITY),
        );
    }
    let r = z.norm_sqr().sqrt();
    let a = (&(&r + &z.re).mul_pow2(-1)).sqrt();
    let b = (&(&r - &z.re).mul_pow2(-1)).sqrt();
    if z.re.is_positive() {
        let im = &z.im / &a.mul_int(2);
        CBall::new(a, im)
    } else {
        let b = if z.im.is_negative() { -b } else { b };
        let re = &z.im / &b.mul_int(2);
        CBall::new(re, b)
    }
}

/// Logarithm of a positive real ball as a complex ball.
pub fn clog_positive(x: &Ball) -> CBall {
    CBall::from_real(log(x))
}

/// `Gamma(x)` for rational `0 < x <= 1`.
///
/// Splits `Gamma(x) = gamma(x, R) + Gamma(x, R)` with
/// `gamma(x, R) = R^x e^-R sum_n R^n / (x (x+1) ... (x+n))` and the upper
/// part enclosed in `[0, R^(x-1) e^-R]`.
pub fn gamma(x: &Rational, prec: u32) -> Ball {
    assert!(
        x > &Rational::zero() && x <= &Rational::one(),
        "gamma implemented for 0 < x <= 1 only"
    );
    let r_int = ((prec + 30) as f64 * std::f64::consts::LN_2).ceil() as i64 + 10;
    // the series peaks near e^R, so keep that many extra bits
    let wp = prec + GUARD + (r_int as f64 * std::f64::consts::LOG2_E).ceil() as u32 + 16;
    let xb = Ball::from_rational(x, wp);
    let rb = Ball::from_int(r_int, wp);
    let mut term = xb.recip();
    let mut sum = term.clone();
    let mut n = 0i64;
    loop {
        n += 1;
        let denom = &xb + &Ball::from_int(n, wp);
        term = &term.mul_int(r_int) / &denom;
        sum = &sum + &term;
        // the radius of `term` settles at a few ulps, so test the midpoint
        if n > 2 * r_int && term.mid_f64().abs() < pow2(-(wp as i64)) {
            // ratio below 1/2 from here on
            sum = sum.add_error(up(2.0 * term.abs_upper()));
            break;
        }
    }
    let lr = log(&rb);
    let pref = exp(&(&(&xb * &lr) - &rb));
    let lower = &pref * &sum;
    let upper_bound = exp(&(&(&(&xb - &Ball::from_int(1, wp)) * &lr) - &rb)).abs_upper();
    let half = up(upper_bound / 2.0);
    let g = &lower + &Ball::from_f64(half, wp);
    g.add_error(half).with_prec(prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    const PI_50: &str = "3.1415926535897932384626433832795028841971693993751";

    #[test]
    fn pi_digits() {
        let p = pi(256);
        assert!(p.rad() < 1e-75);
        assert_eq!(&p.to_decimal(50)[..50], &PI_50.replace("3.", "3.")[..50]);
    }

    #[test]
    fn ln2_and_exp_log_roundtrip() {
        let l = ln2(200);
        assert_eq!(&l.to_decimal(20)[..20], "6.931471805599453094");
        let e = exp(&Ball::from_int(1, 200));
        assert_eq!(&e.to_decimal(20)[..20], "2.718281828459045235");
        let x = Ball::from_rational(&rat(37, 5), 200);
        let back = exp(&log(&x));
        assert!(back.within(&x, 1e-50), "{back:?}");
        let y = Ball::from_rational(&rat(-13, 3), 200);
        assert!(log(&exp(&y)).within(&y, 1e-50));
    }

    #[test]
    fn gamma_half_squared_is_pi() {
        let g = gamma(&rat(1, 2), 200);
        assert!(g.square().within(&pi(200), 1e-50), "{g:?}");
        assert!(g.rad() < 1e-50);
    }

    #[test]
    fn gamma_reflection_at_one_eighth() {
        // Gamma(1/8) Gamma(7/8) = pi / sin(pi/8), sin(pi/8) = sqrt(2 - sqrt 2) / 2
        let p = 160;
        let g1 = gamma(&rat(1, 8), p);
        let g7 = gamma(&rat(7, 8), p);
        let two = Ball::from_int(2, p);
        let s = (&two - &two.sqrt()).sqrt().mul_pow2(-1);
        let rhs = &pi(p) / &s;
        assert!((&g1 * &g7).within(&rhs, 1e-40));
        assert_eq!(&g1.to_decimal(16)[..16], "7.53394159879761");
        assert!(gamma(&rat(1, 1), p).within(&Ball::from_int(1, p), 1e-40));
    }

    #[test]
    fn complex_sqrt_branches() {
        let p = 128;
        let z = CBall::from_rationals(&rat(-3, 1), &rat(4, 1), p);
        let s = csqrt(&z);
        assert!(s.within(&CBall::from_rationals(&rat(1, 1), &rat(2, 1), p), 1e-30));
        let z = CBall::from_rationals(&rat(-3, 1), &rat(-4, 1), p);
        assert!(csqrt(&z).within(&CBall::from_rationals(&rat(1, 1), &rat(-2, 1), p), 1e-30));
        let z = CBall::from_rationals(&rat(9, 4), &rat(0, 1), p);
        assert!(csqrt(&z).within(&CBall::from_rationals(&rat(3, 2), &rat(0, 1), p), 1e-30));
    }
}
