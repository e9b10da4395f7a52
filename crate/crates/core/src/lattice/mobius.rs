//! Fractional-linear maps with rational coefficients and their fixed
//! points as exact quadratic irrationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{IntMatrix, RatMatrix};
use super::{LatticeError, Result};
use crate::exact::{serde_rational, Poly, Rational, RationalFunction, Var};

/// `z -> (a z + b) / (c z + d)`, stored with coprime integer entries and
/// the first nonzero entry positive.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoebiusTransform {
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
    #[serde(with = "serde_rational")]
    pub c: Rational,
    #[serde(with = "serde_rational")]
    pub d: Rational,
}

impl MoebiusTransform {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(LatticeError::NotMoebius("ad - bc = 0".into()));
        }
        Ok(Self::canonical(a, b, c, d))
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let q = |x: i64| Rational::from_integer(x.into());
        Self::new(q(a), q(b), q(c), q(d))
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1).expect("nonsingular")
    }

    fn canonical(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        let entries = [a, b, c, d];
        let den = entries.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let ints: Vec<BigInt> = entries.iter().map(|q| (q * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) { -1 } else { 1 };
        let scaled: Vec<Rational> =
            ints.iter().map(|x| Rational::from_integer(x / &g * BigInt::from(sign))).collect();
        MoebiusTransform { a: scaled[0].clone(), b: scaled[1].clone(), c: scaled[2].clone(), d: scaled[3].clone() }
    }

    /// Read off a fractional-linear map from a rational function of
    /// degree at most one in numerator and denominator.
    pub fn from_rational_function(f: &RationalFunction) -> Result<Self> {
        let (n, d) = (f.numer(), f.denom());
        if n.degree().unwrap_or(0) > 1 || d.degree().unwrap_or(0) > 1 {
            return Err(LatticeError::NotMoebius(format!("{f} is not fractional-linear")));
        }
        Self::new(n.coeff(1), n.coeff(0), d.coeff(1), d.coeff(0))
    }

    pub fn to_rational_function(&self, var: Var) -> RationalFunction {
        let num = Poly::new(var.clone(), vec![self.b.clone(), self.a.clone()]);
        let den = Poly::new(var, vec![self.d.clone(), self.c.clone()]);
        RationalFunction::new(num, den).expect("nonzero denominator")
    }

    /// `self` after `other`: `z -> self(other(z))`.
    pub fn compose(&self, other: &Self) -> Self {
        let m = |t: &Self| RatMatrix::from_rows(vec![vec![t.a.clone(), t.b.clone()], vec![t.c.clone(), t.d.clone()]]);
        let p = m(self).mul(&m(other));
        Self::canonical(p.get(0, 0).clone(), p.get(0, 1).clone(), p.get(1, 0).clone(), p.get(1, 1).clone())
    }

    /// Value at a rational point; `None` for the pole.
    pub fn apply(&self, z: &Rational) -> Option<Rational> {
        let den = &self.c * z + &self.d;
        if den.is_zero() {
            None
        } else {
            Some((&self.a * z + &self.b) / den)
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Fixed points: roots of `c z^2 + (d - a) z - b`.
    pub fn fixed_points(&self) -> FixedPoints {
        if self.is_identity() {
            return FixedPoints::Everything;
        }
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        if c.is_zero() {
            if a == d {
                return FixedPoints::OnlyInfinity;
            }
            return FixedPoints::FiniteAndInfinity(b / (d - a));
        }
        // monic z^2 + p z + q
        let p = (d - a) / c;
        let q = -(b / c);
        let x = -(&p / Rational::from_integer(2.into()));
        let disc = &p * &p - Rational::from_integer(4.into()) * &q;
        FixedPoints::Quadratic {
            monic: vec![q, p, Rational::one()],
            roots: QuadraticIrrational::new(x, disc / Rational::from_integer(4.into())),
        }
    }
}

impl fmt::Debug for MoebiusTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z -> ({} z + {}) / ({} z + {})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for MoebiusTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The pair `x +- sqrt(r)`; imaginary when `r < 0`, written
/// `x +- i sqrt(-r)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticIrrational {
    #[serde(with = "serde_rational")]
    pub x: Rational,
    #[serde(with = "serde_rational")]
    pub r: Rational,
}

impl QuadraticIrrational {
    pub fn new(x: Rational, r: Rational) -> Self {
        QuadraticIrrational { x, r }
    }

    pub fn is_imaginary(&self) -> bool {
        self.r.is_negative()
    }

    /// The root with nonnegative imaginary part, as floats.
    pub fn upper_root_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        if r < 0.0 {
            (x, (-r).sqrt())
        } else {
            (x + r.sqrt(), 0.0)
        }
    }
}

impl fmt::Debug for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_imaginary() {
            write!(f, "{} +- i sqrt({})", self.x, -self.r.clone())
        } else {
            write!(f, "{} +- sqrt({})", self.x, self.r)
        }
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixedPoints {
    Everything,
    /// a translation
    OnlyInfinity,
    FiniteAndInfinity(#[serde(with = "serde_rational")] Rational),
    Quadratic {
        /// monic fixed-point polynomial, constant term first
        #[serde(with = "serde_rational::vec")]
        monic: Vec<Rational>,
        roots: QuadraticIrrational,
    },
}

/// The action of an isometry `M` of `T0` (right action, Gram `g`) on the
/// chart `z -> [z h - e + 2 z^2 f]`, read back by `[a : b : c] -> -a/b`:
/// `(a', b', c') = (z, -1, 2 z^2) G M G^-1`.
pub fn mobius_from_monodromy(m: &IntMatrix, g: &IntMatrix) -> Result<MoebiusTransform> {
    let gi = g.to_rational().inverse().ok_or_else(|| LatticeError::Degenerate("G".into()))?;
    let n = g.to_rational().mul(&m.to_rational()).mul(&gi);
    let z = Var::new("z");
    let point = [
        Poly::x(z.clone()),
        Poly::constant(z.clone(), -Rational::one()),
        Poly::monomial(z.clone(), Rational::from_integer(2.into()), 2),
    ];
    let image: Vec<Poly> = (0..3)
        .map(|j| {
            (0..3).fold(Poly::zero(z.clone()), |acc, i| acc + point[i].scale(n.get(i, j)))
        })
        .collect();
    let f = RationalFunction::new(-image[0].clone(), image[1].clone())
        .map_err(|e| LatticeError::NotMoebius(e.to_string()))?;
    MoebiusTransform::from_rational_function(&f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn canonical_form() {
        let m = MoebiusTransform::new(rat(0, 1), rat(-1, 2), rat(1, 1), rat(0, 1)).unwrap();
        assert_eq!(m, MoebiusTransform::from_ints(0, 1, -2, 0).unwrap());
        assert!(MoebiusTransform::from_ints(1, 2, 2, 4).is_err());
    }

    #[test]
    fn translation_and_reflection() {
        let t = MoebiusTransform::from_ints(1, 4, 0, 1).unwrap();
        assert_eq!(t.fixed_points(), FixedPoints::OnlyInfinity);
        let r = MoebiusTransform::from_ints(0, -1, 2, 0).unwrap();
        match r.fixed_points() {
            FixedPoints::Quadratic { roots, .. } => assert_eq!(roots, QuadraticIrrational::new(rat(0, 1), rat(-1, 2))),
            other => panic!("{other:?}"),
        }
        assert!(r.compose(&r).is_identity());
        assert_eq!(MoebiusTransform::identity().fixed_points(), FixedPoints::Everything);
    }

    #[test]
    fn identity_matrix_gives_identity() {
        let g = IntMatrix::from_i64(&[&[4, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
        assert!(mobius_from_monodromy(&IntMatrix::identity(3), &g).unwrap().is_identity());
    }
}
