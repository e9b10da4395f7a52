//! Smith normal form over the integers, with the unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `d = u a v` with `u`, `v` unimodular and `d` diagonal, nonnegative,
/// each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let t = m.get(a, j).clone();
        m.set(a, j, m.get(b, j).clone());
        m.set(b, j, t);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let t = m.get(i, a).clone();
        m.set(i, a, m.get(i, b).clone());
        m.set(i, b, t);
    }
}

/// row_a -= q row_b
fn row_axpy(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    for j in 0..m.cols() {
        let v = m.get(a, j) - q * m.get(b, j);
        m.set(a, j, v);
    }
}

/// col_a -= q col_b
fn col_axpy(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    for i in 0..m.rows() {
        let v = m.get(i, a) - q * m.get(i, b);
        m.set(i, a, v);
    }
}

fn negate_row(m: &mut IntMatrix, a: usize) {
    for j in 0..m.cols() {
        let v = -m.get(a, j).clone();
        m.set(a, j, v);
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (n, m) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(m);
    for t in 0..n.min(m) {
        loop {
            // smallest nonzero entry of the remaining block as pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..m {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(d, u, v);
            };
            swap_rows(&mut d, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..n {
                let q = d.get(i, t).div_floor(d.get(t, t));
                if !q.is_zero() {
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..m {
                let q = d.get(t, j).div_floor(d.get(t, t));
                if !q.is_zero() {
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..n)
                .flat_map(|i| (t + 1..m).map(move |j| (i, j)))
                .find(|&(i, j)| !d.get(i, j).is_multiple_of(d.get(t, t)));
            match bad {
                Some((i, _)) => {
                    // row_t += row_i brings the offending entry into row t
                    let minus_one = BigInt::from(-1);
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    finish(d, u, v)
}

fn finish(mut d: IntMatrix, mut u: IntMatrix, v: IntMatrix) -> Smith {
    for t in 0..d.rows().min(d.cols()) {
        if d.get(t, t).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    Smith { d, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]), "{f:?}");
        }
        assert!(f.iter().all(|x| x.is_positive()));
        // zeros only at the end of the diagonal
        let k = s.rank();
        assert!((0..k).all(|i| !s.d.get(i, i).is_zero()));
    }

    #[test]
    fn small_examples() {
        check(&IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        let s = smith_normal_form(&IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.invariant_factors(), [2, 6, 12].map(BigInt::from).to_vec());
        check(&IntMatrix::from_i64(&[&[0, 0], &[0, 0]]));
        check(&IntMatrix::from_i64(&[&[4]]));
    }

    fn matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c).prop_map(move |v| {
                IntMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j]))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn smith_form_is_a_valid_factorization(a in matrix()) {
            check(&a);
        }
    }
}
