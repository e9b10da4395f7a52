//! Small dense matrices of complex balls.

use serde::{Deserialize, Serialize};

use super::ball::{Ball, CBall};
use crate::exact::Rational;

#[derive(Clone, Debug)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CBall>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> CMatrix {
        CMatrix { rows, cols, data: vec![CBall::zero(prec); rows * cols] }
    }

    pub fn identity(n: usize, prec: u32) -> CMatrix {
        let mut m = CMatrix::zeros(n, n, prec);
        for i in 0..n {
            m.set(i, i, CBall::one(prec));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CBall) -> CMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Exact integer or rational matrix, given row by row.
    pub fn from_rationals(entries: &[Vec<Rational>], prec: u32) -> CMatrix {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        CMatrix::from_fn(rows, cols, |i, j| {
            CBall::from_real(Ball::from_rational(&entries[i][j], prec))
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CBall {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CBall) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<CBall> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn prec(&self) -> u32 {
        self.data.iter().map(CBall::prec).max().unwrap_or(0)
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, o.rows, "matrix shapes do not match");
        let p = self.prec().max(o.prec());
        CMatrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = CBall::zero(p);
            for k in 0..self.cols {
                acc = &acc + &(self.get(i, k) * o.get(k, j));
            }
            acc
        })
    }

    pub fn add(&self, o: &CMatrix) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + o.get(i, j))
    }

    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - o.get(i, j))
    }

    pub fn scale(&self, c: &CBall) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn pow(&self, e: u32) -> CMatrix {
        let mut acc = CMatrix::identity(self.rows, self.prec());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> CBall {
        let mut acc = CBall::zero(self.prec());
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// Inverse by Gauss-Jordan elimination; `None` when some pivot ball
    /// cannot be separated from zero.
    pub fn inverse(&self) -> Option<CMatrix> {
        let n = self.rows;
        assert_eq!(n, self.cols, "inverse of a non-square matrix");
        let p = self.prec();
        let mut a = self.clone();
        let mut inv = CMatrix::identity(n, p);
        for c in 0..n {
            let piv = (c..n).max_by(|&x, &y| {
                a.get(x, c).abs_lower().total_cmp(&a.get(y, c).abs_lower())
            })?;
            if a.get(piv, c).contains_zero() {
                return None;
            }
            for j in 0..n {
                a.data.swap(c * n + j, piv * n + j);
                inv.data.swap(c * n + j, piv * n + j);
            }
            let r = a.get(c, c).recip();
            for j in 0..n {
                a.set(c, j, a.get(c, j) * &r);
                inv.set(c, j, inv.get(c, j) * &r);
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - &(&f * a.get(c, j)));
                    inv.set(i, j, inv.get(i, j) - &(&f * inv.get(c, j)));
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> CBall {
        let n = self.rows;
        match n {
            0 => CBall::one(self.prec()),
            1 => self.get(0, 0).clone(),
            _ => {
                // cofactor expansion along the first row; only small sizes occur
                let mut acc = CBall::zero(self.prec());
                for j in 0..n {
                    let minor = CMatrix::from_fn(n - 1, n - 1, |r, c| {
                        self.get(r + 1, if c < j { c } else { c + 1 }).clone()
                    });
                    let term = self.get(0, j) * &minor.det();
                    acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Characteristic polynomial `det(x - A)`, coefficients from the
    /// constant term up, by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> Vec<CBall> {
        let n = self.rows;
        let p = self.prec();
        let mut c = vec![CBall::zero(p); n + 1];
        c[n] = CBall::one(p);
        let mut m = CMatrix::zeros(n, n, p);
        for k in 1..=n {
            let mut next = self.mul(&m);
            for i in 0..n {
                next.set(i, i, next.get(i, i) + &c[n - k + 1]);
            }
            m = next;
            c[n - k] = -self.mul(&m).trace().div_int(k as i64);
        }
        c
    }

    /// Largest radius of any entry.
    pub fn max_rad(&self) -> f64 {
        self.data.iter().map(CBall::rad).fold(0.0, f64::max)
    }

    /// Largest upper bound of `|entry|`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(CBall::abs_upper).fold(0.0, f64::max)
    }

    /// Every entry of `self - o` is certainly within `tol` of zero.
    pub fn within(&self, o: &CMatrix, tol: f64) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.sub(o).max_abs() <= tol
    }

    /// Every entry ball of `self` intersects the corresponding one of `o`.
    pub fn overlaps(&self, o: &CMatrix) -> bool {
        self.data.iter().zip(&o.data).all(|(a, b)| a.overlaps(b))
    }

    pub fn summary(&self, digits: usize) -> MatrixSummary {
        MatrixSummary {
            entries: (0..self.rows)
                .map(|i| (0..self.cols).map(|j| BallSummary::of(self.get(i, j), digits)).collect())
                .collect(),
            max_radius: self.max_rad(),
        }
    }
}

/// Printable form of a complex ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallSummary {
    pub re: String,
    pub im: String,
    pub radius: f64,
}

impl BallSummary {
    pub fn of(z: &CBall, digits: usize) -> BallSummary {
        BallSummary { re: z.re.to_decimal(digits), im: z.im.to_decimal(digits), radius: z.rad() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixSummary {
    pub entries: Vec<Vec<BallSummary>>,
    pub max_radius: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn ints(rows: &[[i64; 3]]) -> CMatrix {
        let v: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        CMatrix::from_rationals(&v, 128)
    }

    #[test]
    fn inverse_and_determinant() {
        let m = ints(&[[5, 1, -3], [-12, -2, 9], [4, 1, -2]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).within(&CMatrix::identity(3, 128), 1e-30));
        assert!(m.det().within(&CBall::from_int(-1, 128), 1e-30));
    }

    #[test]
    fn charpoly_of_unipotent() {
        let m = ints(&[[1, 4, 0], [0, 1, 0], [-16, -32, 1]]);
        let c = m.charpoly();
        let expected = [-1, 3, -3, 1];
        for (a, e) in c.iter().zip(expected) {
            assert!(a.within(&CBall::from_int(e, 128), 1e-30));
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = ints(&[[1, 2, 3], [2, 4, 6], [0, 0, 1]]);
        assert!(m.inverse().is_none());
    }
}
