//! Real and complex balls: a fixed-point midpoint `mid * 2^-prec` plus an
//! absolute radius kept as an `f64` that is always rounded upward.
//!
//! Every operation returns a ball containing all results obtainable from
//! points of the input balls. Division by a ball that contains zero gives
//! an infinite radius rather than an error; callers test
//! [`Ball::is_finite`] where it matters.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact::Rational;

/// Largest supported working precision in bits. Radii are `f64`, so
/// anything finer would underflow.
pub const MAX_PREC: u32 = 960;

/// Upward-rounded `x`, covering one rounding error of an f64 operation.
#[inline]
pub(crate) fn up(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 4.0 * f64::EPSILON) + f64::from_bits(1)
    }
}

#[inline]
fn down(x: f64) -> f64 {
    (x * (1.0 - 4.0 * f64::EPSILON) - f64::from_bits(1)).max(0.0)
}

#[inline]
pub(crate) fn pow2(e: i64) -> f64 {
    2f64.powi(e.clamp(-1074, 1023) as i32)
}

#[derive(Clone)]
pub struct Ball {
    mid: BigInt,
    prec: u32,
    rad: f64,
}

impl Ball {
    pub fn zero(prec: u32) -> Ball {
        Ball { mid: BigInt::zero(), prec: prec.min(MAX_PREC), rad: 0.0 }
    }

    pub fn from_int(n: i64, prec: u32) -> Ball {
        let prec = prec.min(MAX_PREC);
        Ball { mid: BigInt::from(n) << prec, prec, rad: 0.0 }
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Ball {
        let prec = prec.min(MAX_PREC);
        Ball { mid: n << prec, prec, rad: 0.0 }
    }

    /// Nearest ball to `q`; exact when `q` is dyadic at this precision.
    pub fn from_rational(q: &Rational, prec: u32) -> Ball {
        let prec = prec.min(MAX_PREC);
        let num = q.numer() << prec;
        let (quo, rem) = (num.clone() / q.denom(), num % q.denom());
        let rad = if rem.is_zero() { 0.0 } else { pow2(-(prec as i64)) };
        Ball { mid: quo, prec, rad: up(rad) }
    }

    /// Exact conversion of an f64 (rounded at `prec` if necessary).
    pub fn from_f64(x: f64, prec: u32) -> Ball {
        let q = Rational::from_float(x).expect("finite float");
        Ball::from_rational(&q, prec)
    }

    /// Ball with explicit midpoint numerator and radius.
    pub fn from_parts(mid: BigInt, prec: u32, rad: f64) -> Ball {
        Ball { mid, prec, rad }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// The midpoint as an exact ball, radius dropped.
    pub fn midpoint(&self) -> Ball {
        Ball { mid: self.mid.clone(), prec: self.prec, rad: 0.0 }
    }

    pub fn rad(&self) -> f64 {
        self.rad
    }

    pub fn mid_raw(&self) -> &BigInt {
        &self.mid
    }

    pub fn ulp(&self) -> f64 {
        pow2(-(self.prec as i64))
    }

    pub fn is_finite(&self) -> bool {
        self.rad.is_finite()
    }

    /// Nearest f64 to the midpoint.
    pub fn mid_f64(&self) -> f64 {
        let bits = self.mid.bits() as i64;
        if bits > 1000 {
            let shift = bits - 60;
            let m = (&self.mid >> shift as usize).to_f64().unwrap_or(f64::NAN);
            return m * pow2(shift - self.prec as i64);
        }
        self.mid.to_f64().unwrap_or(f64::NAN) * pow2(-(self.prec as i64))
    }

    /// Midpoint as an exact rational.
    pub fn mid_rational(&self) -> Rational {
        Rational::new(self.mid.clone(), BigInt::from(1) << self.prec)
    }

    /// Upper bound for `|x|` over the ball.
    pub fn abs_upper(&self) -> f64 {
        up(up(self.mid_f64().abs()) + self.rad)
    }

    /// Lower bound for `|x|` over the ball (0 if the ball meets zero).
    pub fn abs_lower(&self) -> f64 {
        down(down(self.mid_f64().abs()) - self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower() <= 0.0
    }

    /// `|mid| > rad` and `mid > 0`.
    pub fn is_positive(&self) -> bool {
        self.mid.sign() == Sign::Plus && self.abs_lower() > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.mid.sign() == Sign::Minus && self.abs_lower() > 0.0
    }

    /// Does the ball contain the exact rational `q`?
    pub fn contains_rational(&self, q: &Rational) -> bool {
        let d = (self.mid_rational() - q).abs();
        d.to_f64().map(|x| down(x) <= self.rad).unwrap_or(false)
    }

    /// `|self - other| <= tol` certainly holds.
    pub fn within(&self, other: &Ball, tol: f64) -> bool {
        (self - other).abs_upper() <= tol
    }

    /// Same value, with the radius enlarged by `e`.
    pub fn add_error(&self, e: f64) -> Ball {
        Ball { mid: self.mid.clone(), prec: self.prec, rad: up(self.rad + e) }
    }

    /// Re-express at another precision (rounding down adds one ulp).
    pub fn with_prec(&self, prec: u32) -> Ball {
        let prec = prec.min(MAX_PREC);
        match prec.cmp(&self.prec) {
            std::cmp::Ordering::Equal => self.clone(),
            std::cmp::Ordering::Greater => Ball {
                mid: &self.mid << (prec - self.prec),
                prec,
                rad: self.rad,
            },
            std::cmp::Ordering::Less => Ball {
                mid: &self.mid >> (self.prec - prec),
                prec,
                rad: up(self.rad + pow2(-(prec as i64))),
            },
        }
    }

    fn align(a: &Ball, b: &Ball) -> (BigInt, BigInt, u32) {
        let p = a.prec.max(b.prec);
        (
            &a.mid << (p - a.prec),
            &b.mid << (p - b.prec),
            p,
        )
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Ball {
        if k >= 0 {
            Ball { mid: &self.mid << k as usize, prec: self.prec, rad: up(self.rad * pow2(k)) }
        } else {
            let s = (-k) as usize;
            Ball {
                mid: &self.mid >> s,
                prec: self.prec,
                rad: up(self.rad * pow2(k) + self.ulp()),
            }
        }
    }

    pub fn mul_int(&self, n: i64) -> Ball {
        Ball {
            mid: &self.mid * n,
            prec: self.prec,
            rad: up(self.rad * (n.unsigned_abs() as f64)),
        }
    }

    pub fn div_int(&self, n: i64) -> Ball {
        assert!(n != 0, "division by zero integer");
        let n_abs = n.unsigned_abs() as f64;
        Ball {
            mid: &self.mid / n,
            prec: self.prec,
            rad: up(self.rad / down(n_abs) + self.ulp()),
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Ball {
        self * &Ball::from_rational(q, self.prec)
    }

    pub fn recip(&self) -> Ball {
        let lo = self.abs_lower();
        let p = self.prec;
        if lo <= 0.0 || self.mid.is_zero() {
            return Ball { mid: BigInt::zero(), prec: p, rad: f64::INFINITY };
        }
        let mid = (BigInt::from(1) << (2 * p as usize)) / &self.mid;
        let m = down(self.mid_f64().abs());
        let prop = up(self.rad / down(m * lo));
        Ball { mid, prec: p, rad: up(prop + pow2(-(p as i64))) }
    }

    pub fn sqrt(&self) -> Ball {
        let p = self.prec;
        if self.mid.sign() != Sign::Plus {
            return Ball { mid: BigInt::zero(), prec: p, rad: f64::INFINITY };
        }
        let mid = (&self.mid << p as usize).sqrt();
        let lo = self.abs_lower();
        let prop = if self.rad == 0.0 {
            0.0
        } else if lo <= 0.0 {
            return Ball { mid, prec: p, rad: f64::INFINITY };
        } else {
            up(self.rad / down(lo.sqrt()))
        };
        Ball { mid, prec: p, rad: up(prop + pow2(-(p as i64))) }
    }

    pub fn square(&self) -> Ball {
        self * self
    }

    pub fn abs(&self) -> Ball {
        if self.mid.sign() == Sign::Minus {
            -self
        } else {
            self.clone()
        }
    }
}

impl Add for &Ball {
    type Output = Ball;
    fn add(self, o: &Ball) -> Ball {
        let (a, b, p) = Ball::align(self, o);
        Ball { mid: a + b, prec: p, rad: up(self.rad + o.rad) }
    }
}

impl Sub for &Ball {
    type Output = Ball;
    fn sub(self, o: &Ball) -> Ball {
        let (a, b, p) = Ball::align(self, o);
        Ball { mid: a - b, prec: p, rad: up(self.rad + o.rad) }
    }
}

impl Mul for &Ball {
    type Output = Ball;
    fn mul(self, o: &Ball) -> Ball {
        let (a, b, p) = Ball::align(self, o);
        let mid = (a * b) >> p as usize;
        let (ma, mb) = (up(self.mid_f64().abs()), up(o.mid_f64().abs()));
        let rad = up(up(ma * o.rad) + up(mb * self.rad) + up(self.rad * o.rad) + pow2(-(p as i64)));
        Ball { mid, prec: p, rad }
    }
}

impl Div for &Ball {
    type Output = Ball;
    fn div(self, o: &Ball) -> Ball {
        self * &o.recip()
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball { mid: -&self.mid, prec: self.prec, rad: self.rad }
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, o: &$t) -> $t {
                (&self).$m(o)
            }
        }
    };
}

forward_owned!(Ball, Add, add);
forward_owned!(Ball, Sub, sub);
forward_owned!(Ball, Mul, mul);
forward_owned!(Ball, Div, div);

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        -&self
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {:.3e}]", self.to_decimal(30), self.rad)
    }
}

impl Ball {
    /// Midpoint printed with `digits` significant decimal digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let q = self.mid_rational();
        rational_to_decimal(&q, digits)
    }
}

/// Scientific-notation rendering of a rational, truncated to `digits`.
pub fn rational_to_decimal(q: &Rational, digits: usize) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let neg = q.is_negative();
    let q = q.abs();
    // find exponent e with 10^e <= q < 10^(e+1)
    let approx = q.to_f64().unwrap_or(0.0);
    let mut e = if approx > 0.0 && approx.is_finite() { approx.log10().floor() as i64 } else { 0 };
    let ten = Rational::from_integer(BigInt::from(10));
    let pow = |k: i64| -> Rational {
        if k >= 0 {
            num_traits::Pow::pow(&ten, k as u32)
        } else {
            num_traits::Pow::pow(&ten, (-k) as u32).recip()
        }
    };
    while q >= pow(e + 1) {
        e += 1;
    }
    while q < pow(e) {
        e -= 1;
    }
    let scaled = (q * pow(digits as i64 - 1 - e)).floor().to_integer();
    let s = scaled.to_string();
    let (head, tail) = s.split_at(1);
    format!("{}{}.{}e{}", if neg { "-" } else { "" }, head, tail, e)
}

/// Complex ball as a pair of real balls.
#[derive(Clone)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn new(re: Ball, im: Ball) -> CBall {
        CBall { re, im }
    }

    pub fn zero(prec: u32) -> CBall {
        CBall { re: Ball::zero(prec), im: Ball::zero(prec) }
    }

    pub fn one(prec: u32) -> CBall {
        CBall { re: Ball::from_int(1, prec), im: Ball::zero(prec) }
    }

    pub fn i(prec: u32) -> CBall {
        CBall { re: Ball::zero(prec), im: Ball::from_int(1, prec) }
    }

    pub fn from_real(re: Ball) -> CBall {
        let p = re.prec();
        CBall { re, im: Ball::zero(p) }
    }

    pub fn from_int(n: i64, prec: u32) -> CBall {
        CBall::from_real(Ball::from_int(n, prec))
    }

    pub fn from_rationals(re: &Rational, im: &Rational, prec: u32) -> CBall {
        CBall { re: Ball::from_rational(re, prec), im: Ball::from_rational(im, prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn midpoint(&self) -> CBall {
        CBall { re: self.re.midpoint(), im: self.im.midpoint() }
    }

    /// Radius of the enclosing disc.
    pub fn rad(&self) -> f64 {
        up(self.re.rad().hypot(self.im.rad()))
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn abs_upper(&self) -> f64 {
        up(self.re.abs_upper().hypot(self.im.abs_upper()))
    }

    pub fn abs_lower(&self) -> f64 {
        down(self.re.abs_lower().hypot(self.im.abs_lower()))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn mid_f64(&self) -> (f64, f64) {
        (self.re.mid_f64(), self.im.mid_f64())
    }

    pub fn conj(&self) -> CBall {
        CBall { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Ball {
        &self.re.square() + &self.im.square()
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> CBall {
        CBall { re: -&self.im, im: self.re.clone() }
    }

    pub fn scale(&self, x: &Ball) -> CBall {
        CBall { re: &self.re * x, im: &self.im * x }
    }

    pub fn mul_int(&self, n: i64) -> CBall {
        CBall { re: self.re.mul_int(n), im: self.im.mul_int(n) }
    }

    pub fn div_int(&self, n: i64) -> CBall {
        CBall { re: self.re.div_int(n), im: self.im.div_int(n) }
    }

    pub fn mul_pow2(&self, k: i64) -> CBall {
        CBall { re: self.re.mul_pow2(k), im: self.im.mul_pow2(k) }
    }

    pub fn mul_rational(&self, q: &Rational) -> CBall {
        let b = Ball::from_rational(q, self.prec());
        self.scale(&b)
    }

    pub fn recip(&self) -> CBall {
        let n = self.norm_sqr().recip();
        CBall { re: &self.re * &n, im: -(&self.im * &n) }
    }

    pub fn square(&self) -> CBall {
        self * self
    }

    pub fn pow(&self, e: u32) -> CBall {
        let mut acc = CBall::one(self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn add_error(&self, e: f64) -> CBall {
        CBall { re: self.re.add_error(e), im: self.im.add_error(e) }
    }

    pub fn with_prec(&self, prec: u32) -> CBall {
        CBall { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    /// `|self - other| <= tol` certainly holds.
    pub fn within(&self, other: &CBall, tol: f64) -> bool {
        (self - other).abs_upper() <= tol
    }

    /// Do the two balls intersect (could they be equal)?
    pub fn overlaps(&self, other: &CBall) -> bool {
        (self - other).contains_zero()
    }
}

impl Add for &CBall {
    type Output = CBall;
    fn add(self, o: &CBall) -> CBall {
        CBall { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &CBall {
    type Output = CBall;
    fn sub(self, o: &CBall) -> CBall {
        CBall { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &CBall {
    type Output = CBall;
    fn mul(self, o: &CBall) -> CBall {
        CBall {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

impl Div for &CBall {
    type Output = CBall;
    fn div(self, o: &CBall) -> CBall {
        self * &o.recip()
    }
}

impl Neg for &CBall {
    type Output = CBall;
    fn neg(self) -> CBall {
        CBall { re: -&self.re, im: -&self.im }
    }
}

forward_owned!(CBall, Add, add);
forward_owned!(CBall, Sub, sub);
forward_owned!(CBall, Mul, mul);
forward_owned!(CBall, Div, div);

impl Neg for CBall {
    type Output = CBall;
    fn neg(self) -> CBall {
        -&self
    }
}

impl fmt::Debug for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {} i)", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn arithmetic_encloses_exact_results() {
        let p = 128;
        let a = Ball::from_rational(&rat(1, 3), p);
        let b = Ball::from_rational(&rat(-5, 7), p);
        assert!((&a + &b).contains_rational(&(rat(1, 3) + rat(-5, 7))));
        assert!((&a * &b).contains_rational(&rat(-5, 21)));
        assert!((&a / &b).contains_rational(&rat(-7, 15)));
        assert!(a.recip().contains_rational(&rat(3, 1)));
        assert!((&a * &b).rad() < 1e-37);
    }

    #[test]
    fn sqrt_two_squares_back() {
        let s = Ball::from_int(2, 200).sqrt();
        assert!(s.square().contains_rational(&rat(2, 1)));
        assert!(s.rad() < 1e-58);
        assert_eq!(&s.to_decimal(12)[..12], "1.4142135623");
    }

    #[test]
    fn division_by_zero_ball_is_infinite() {
        let z = Ball::from_int(0, 64).add_error(1e-3);
        assert!(!z.recip().is_finite());
        assert!(!Ball::from_int(-4, 64).sqrt().is_finite());
    }

    #[test]
    fn complex_division() {
        let p = 128;
        let a = CBall::from_rationals(&rat(1, 2), &rat(3, 1), p);
        let b = CBall::from_rationals(&rat(-2, 1), &rat(1, 4), p);
        let q = &a / &b;
        let back = &q * &b;
        assert!(back.overlaps(&a));
        assert!(back.within(&a, 1e-35));
        let i2 = CBall::i(p).square();
        assert!(i2.overlaps(&CBall::from_int(-1, p)));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational_to_decimal(&rat(-1, 8), 3), "-1.25e-1");
        assert_eq!(rational_to_decimal(&rat(12345, 1), 3), "1.23e4");
    }
}
