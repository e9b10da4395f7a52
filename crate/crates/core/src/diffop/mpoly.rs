use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exact::{int, Rational};

/// Exponent vector in the four homogeneous coordinates.
pub type Monomial = [u32; 4];

/// Sparse polynomial in `X0..X3` over Q.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = MPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        let mut out = MPoly::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, a) in &self.terms {
            for (m2, b) in &o.terms {
                let m = [m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3]];
                out.add_term(m, a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::term([0; 4], int(1));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in `X_i`.
    pub fn partial(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut d = *m;
                d[i] -= 1;
                out.add_term(d, c * int(m[i] as i64));
            }
        }
        out
    }
}

/// All exponent vectors of total degree `d`, in lexicographic order.
pub fn monomials_of_degree(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            for c in 0..=d - a - b {
                out.push([a, b, c, d - a - b - c]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(0).len(), 1);
        assert_eq!(monomials_of_degree(4).len(), 35);
        assert_eq!(monomials_of_degree(8).len(), 165);
    }

    #[test]
    fn euler_identity() {
        // sum X_i d_i F = 4 F for a quartic
        let mut f = MPoly::zero();
        f.add_term([4, 0, 0, 0], int(1));
        f.add_term([1, 1, 1, 1], int(-3));
        f.add_term([0, 2, 2, 0], int(5));
        let mut lhs = MPoly::zero();
        for i in 0..4 {
            let mut xi = [0; 4];
            xi[i] = 1;
            lhs = lhs.add(&MPoly::term(xi, int(1)).mul(&f.partial(i)));
        }
        assert_eq!(lhs, f.scale(&int(4)));
    }
}
