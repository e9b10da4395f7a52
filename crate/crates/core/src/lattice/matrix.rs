//! Dense matrices over exact rings: `BigInt` for lattice data and
//! `Rational` where inverses are needed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::Rational;

pub trait Scalar:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self> + for<'a> Mul<&'a Self, Output = Self> + fmt::Display
{
}

impl Scalar for BigInt {}
impl Scalar for Rational {}

/// Serialized as rows of decimal strings.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Mat<BigInt>;

impl<T: Scalar> Serialize for Mat<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::exact::serde_str::vec2::serialize(&self.to_rows(), s)
    }
}

impl<'de, T: Scalar + std::str::FromStr> Deserialize<'de> for Mat<T>
where
    T::Err: fmt::Display,
{
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<T>> = crate::exact::serde_str::vec2::deserialize(d)?;
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(Mat::from_rows(rows))
    }
}

pub type RatMatrix = Mat<Rational>;

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shapes do not match");
        Self::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + &(self.get(i, k).clone() * o.get(k, j)))
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() + o.get(i, j))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() - o.get(i, j))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self.get(i, j).clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() * c)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.rows), |acc, _| acc.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).fold(T::zero(), |acc, i| acc + &(v[i].clone() * self.get(i, j))))
            .collect()
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).fold(T::zero(), |acc, j| acc + &(self.get(i, j).clone() * &v[j])))
            .collect()
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[&Self]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Characteristic polynomial `det(x - A)`, constant term first, by
    /// Faddeev-LeVerrier over the rationals.
    pub fn charpoly(&self) -> Vec<Rational>
    where
        T: Into<Rational>,
    {
        let a = self.to_rational();
        let n = a.rows;
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = Rational::one();
        let mut m = RatMatrix::zeros(n, n);
        for k in 1..=n {
            let mut next = a.mul(&m);
            for i in 0..n {
                let v = next.get(i, i).clone() + &c[n - k + 1];
                next.set(i, i, v);
            }
            m = next;
            let am = a.mul(&m);
            let tr = (0..n).fold(Rational::zero(), |acc, i| acc + am.get(i, i));
            c[n - k] = -tr / Rational::from_integer((k as i64).into());
        }
        c
    }

    pub fn to_rational(&self) -> RatMatrix
    where
        T: Into<Rational>,
    {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone().into())
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }
}

impl RatMatrix {
    /// Inverse by Gauss-Jordan; `None` if singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&i| !a.get(i, c).is_zero())?;
            for j in 0..n {
                a.data.swap(c * n + j, p * n + j);
                inv.data.swap(c * n + j, p * n + j);
            }
            let r = a.get(c, c).recip();
            for j in 0..n {
                a.set(c, j, a.get(c, j) * &r);
                inv.set(c, j, inv.get(c, j) * &r);
            }
            for i in 0..n {
                if i != c && !a.get(i, c).is_zero() {
                    let f = a.get(i, c).clone();
                    for j in 0..n {
                        a.set(i, j, a.get(i, j) - &f * a.get(c, j));
                        inv.set(i, j, inv.get(i, j) - &f * inv.get(c, j));
                    }
                }
            }
        }
        Some(inv)
    }

    /// Basis of the right kernel `{v : A v = 0}`, from the reduced row
    /// echelon form.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -rref.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.clone();
        let (n, m) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| !a.get(i, c).is_zero()) else { continue };
            for j in 0..m {
                a.data.swap(r * m + j, p * m + j);
            }
            let inv = a.get(r, c).recip();
            for j in 0..m {
                a.set(r, j, a.get(r, j) * &inv);
            }
            for i in 0..n {
                if i != r && !a.get(i, c).is_zero() {
                    let f = a.get(i, c).clone();
                    for j in 0..m {
                        a.set(i, j, a.get(i, j) - &f * a.get(r, j));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Solve `A v = b` for one particular solution.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        let aug = RatMatrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { b[i].clone() }
        });
        let (rref, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut v = vec![Rational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = rref.get(r, self.cols).clone();
        }
        Some(v)
    }

    /// The matrix as integers, if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|q| q.is_integer()) {
            Some(IntMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_integer()))
        } else {
            None
        }
    }
}

impl<T: Scalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<T: Scalar> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_i64(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(m.det(), BigInt::from(4));
        let z = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(z.det(), BigInt::from(-1));
    }

    #[test]
    fn inverse_and_kernel() {
        let g = IntMatrix::from_i64(&[&[4, 0, 0], &[0, 0, 1], &[0, 1, 0]]).to_rational();
        let gi = g.inverse().unwrap();
        assert_eq!(gi.get(0, 0), &rat(1, 4));
        assert_eq!(g.mul(&gi), RatMatrix::identity(3));
        let k = IntMatrix::from_i64(&[&[1, 1, 0], &[0, 0, 1]]).to_rational().kernel();
        assert_eq!(k, vec![vec![rat(-1, 1), rat(1, 1), rat(0, 1)]]);
    }

    #[test]
    fn charpoly_of_a_reflection() {
        let m = IntMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
        let c: Vec<Rational> = m.charpoly();
        assert_eq!(c, [1, -1, -1, 1].map(|x| rat(x, 1)).to_vec());
    }
}
