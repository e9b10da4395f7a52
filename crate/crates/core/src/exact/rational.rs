use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `H_n = 1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: u64) -> Rational {
    let mut h = Rational::zero();
    for k in 1..=n {
        h += Rational::new(BigInt::from(1), BigInt::from(k));
    }
    h
}

/// `H_{4n} - H_n`, the digamma difference `Ψ(4n+1) - Ψ(n+1)`.
pub fn harmonic_difference(n: u64) -> Rational {
    let mut h = Rational::zero();
    for k in (n + 1)..=(4 * n) {
        h += Rational::new(BigInt::from(1), BigInt::from(k));
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_difference_small_values() {
        assert_eq!(harmonic_difference(0), int(0));
        assert_eq!(harmonic_difference(1), rat(13, 12));
        // direct summation 1/3 + ... + 1/8
        let direct: Rational = (3..=8).map(|k| rat(1, k)).sum();
        assert_eq!(harmonic_difference(2), direct);
        assert_eq!(harmonic_difference(2), rat(341, 280));
        assert_eq!(harmonic_difference(7), harmonic(28) - harmonic(7));
    }

    #[test]
    fn rationals_are_reduced() {
        let q = rat(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!("-3/2".parse::<Rational>().unwrap(), q);
    }
}
