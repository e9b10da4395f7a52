//! Griffiths-Dwork reduction for the Dwork pencil
//! `F_t = X0^4 + X1^4 + X2^4 + X3^4 - 4t X0 X1 X2 X3` at a fixed rational
//! parameter.
//!
//! Derivatives of the residue form are `Omega^(k) = k! (4m)^k Omega0 / F^(k+1)`
//! with `m = X0 X1 X2 X3`. A numerator in the Jacobian ideal,
//! `P = sum A_i dF/dX_i`, lowers the pole order by one through
//! `P / F^(j+1) = (1/j) sum dA_i/dX_i / F^j` modulo exact forms. Jacobian
//! ideal membership in each degree is decided by exact dense elimination.
//!
//! Only monomials whose exponents are all congruent mod 4 can occur in the
//! reduction of `m^k`: this class is preserved by the diagonal symmetry
//! group of the pencil, and restricting to it keeps each system at a few
//! dozen unknowns.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::mpoly::{monomials_of_degree, MPoly, Monomial};
use crate::exact::{int, ExactError, Rational, Result};

/// Size of one graded linear system that was solved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDims {
    pub degree: u32,
    pub monomials: usize,
    pub generators: usize,
    pub rank: usize,
}

/// Recovered relation `Omega''' = c2 Omega'' + c1 Omega' + c0 Omega`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdReductionCertificate {
    #[serde(with = "crate::exact::serde_rational")]
    pub t: Rational,
    #[serde(with = "crate::exact::serde_rational::vec")]
    pub coefficients: Vec<Rational>,
    /// `6t^3, 7t^2, t` divided by `1 - t^4`.
    #[serde(with = "crate::exact::serde_rational::vec")]
    pub expected: Vec<Rational>,
    pub matches_closed_form: bool,
    pub systems: Vec<SystemDims>,
}

fn in_base_class(m: &Monomial) -> bool {
    m.iter().all(|e| e % 4 == m[0] % 4)
}

/// Exponents of `m - e_i` all congruent mod 4 (with `m_i` allowed to be 0).
fn in_shifted_class(m: &Monomial, i: usize) -> bool {
    let mut s = *m;
    s[i] += 3;
    in_base_class(&s)
}

/// Reduced row echelon form of the degree-`d` slice of the Jacobian
/// ideal, with every row remembered as a combination of generators.
struct JacobianSlice {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// generator `g` is `gens[g].1 * dF/dX_{gens[g].0}`
    gens: Vec<(usize, Monomial)>,
    rows: Vec<(usize, Vec<Rational>, Vec<Rational>)>,
    dims: SystemDims,
}

impl JacobianSlice {
    fn build(d: u32, grad: &[MPoly; 4]) -> Result<Self> {
        let monomials: Vec<Monomial> =
            monomials_of_degree(d).into_iter().filter(in_base_class).collect();
        let index: HashMap<Monomial, usize> =
            monomials.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        let mut gens = Vec::new();
        if d >= 3 {
            for (i, _) in grad.iter().enumerate() {
                for mu in monomials_of_degree(d - 3) {
                    if in_shifted_class(&mu, i) {
                        gens.push((i, mu));
                    }
                }
            }
        }
        let n = monomials.len();
        let g = gens.len();
        let mut pending: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::with_capacity(g);
        for (k, (i, mu)) in gens.iter().enumerate() {
            let p = MPoly::term(*mu, int(1)).mul(&grad[*i]);
            let mut v = vec![Rational::zero(); n];
            for (m, c) in p.terms() {
                let at = index.get(m).ok_or_else(|| {
                    ExactError::Internal("symmetry class not closed".into())
                })?;
                v[*at] = c.clone();
            }
            let mut comb = vec![Rational::zero(); g];
            comb[k] = Rational::one();
            pending.push((v, comb));
        }
        // Gauss-Jordan, pivots taken in monomial order
        let mut rows: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
        for col in 0..n {
            let Some(pos) = pending.iter().position(|(v, _)| !v[col].is_zero()) else {
                continue;
            };
            let (mut v, mut comb) = pending.swap_remove(pos);
            let inv = v[col].recip();
            v.iter_mut().for_each(|x| *x *= &inv);
            comb.iter_mut().for_each(|x| *x *= &inv);
            let eliminate = |w: &mut Vec<Rational>, cw: &mut Vec<Rational>| {
                let f = w[col].clone();
                if f.is_zero() {
                    return;
                }
                for (a, b) in w.iter_mut().zip(&v) {
                    if !b.is_zero() {
                        *a -= &f * b;
                    }
                }
                for (a, b) in cw.iter_mut().zip(&comb) {
                    if !b.is_zero() {
                        *a -= &f * b;
                    }
                }
            };
            for (w, cw) in pending.iter_mut() {
                eliminate(w, cw);
            }
            for (_, w, cw) in rows.iter_mut() {
                eliminate(w, cw);
            }
            rows.push((col, v, comb));
        }
        let dims = SystemDims { degree: d, monomials: n, generators: g, rank: rows.len() };
        Ok(JacobianSlice { monomials, index, gens, rows, dims })
    }

    /// Split `p = r + sum A_i dF/dX_i` with `r` supported off the pivots.
    fn decompose(&self, p: &MPoly) -> Result<(Vec<Rational>, [MPoly; 4])> {
        let mut v = vec![Rational::zero(); self.monomials.len()];
        for (m, c) in p.terms() {
            let at = self.index.get(m).ok_or_else(|| {
                ExactError::Internal("numerator outside its class".into())
            })?;
            v[*at] = c.clone();
        }
        let mut comb = vec![Rational::zero(); self.gens.len()];
        for (col, row, rc) in &self.rows {
            let f = v[*col].clone();
            if f.is_zero() {
                continue;
            }
            for (a, b) in v.iter_mut().zip(row) {
                *a -= &f * b;
            }
            for (a, b) in comb.iter_mut().zip(rc) {
                *a += &f * b;
            }
        }
        let mut a: [MPoly; 4] = Default::default();
        for ((i, mu), c) in self.gens.iter().zip(comb) {
            a[*i].add_term(*mu, c);
        }
        Ok((v, a))
    }
}

fn solve_three(cols: [&[Rational]; 3], rhs: &[Rational]) -> Result<[Rational; 3]> {
    let n = rhs.len();
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|r| vec![cols[0][r].clone(), cols[1][r].clone(), cols[2][r].clone(), rhs[r].clone()])
        .collect();
    let mut pivot_row = 0;
    for c in 0..3 {
        let Some(p) = (pivot_row..n).find(|&r| !m[r][c].is_zero()) else {
            return Err(ExactError::Internal(
                "derivatives of the form are dependent".into(),
            ));
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][c].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != pivot_row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pr = m[pivot_row].clone();
                for (a, b) in m[r].iter_mut().zip(&pr) {
                    *a -= &f * b;
                }
            }
        }
        pivot_row += 1;
    }
    if m[3..].iter().any(|row| !row[3].is_zero()) {
        return Err(ExactError::Internal(
            "no third-order relation".into(),
        ));
    }
    Ok([m[0][3].clone(), m[1][3].clone(), m[2][3].clone()])
}

/// Run the reduction at the parameter `t` and return the coefficients of
/// the third-order relation together with the closed form they should match.
pub fn griffiths_dwork_verify(t: &Rational) -> Result<GdReductionCertificate> {
    let t4 = t * t * t * t;
    if t4.is_one() {
        return Err(ExactError::Domain(format!("singular fibre at t = {t}")));
    }
    let m = MPoly::term([1, 1, 1, 1], int(1));
    let mut f = m.scale(&(-int(4) * t));
    for i in 0..4 {
        let mut e = [0; 4];
        e[i] = 4;
        f.add_term(e, int(1));
    }
    let grad = [f.partial(0), f.partial(1), f.partial(2), f.partial(3)];
    let slices: Vec<JacobianSlice> =
        (0..=3).map(|j| JacobianSlice::build(4 * j, &grad)).collect::<Result<_>>()?;

    // Normal-form coordinates of Omega^(k), levels 0..=2 concatenated.
    let mut vectors: Vec<Vec<Rational>> = Vec::new();
    let mut fact = Rational::one();
    for k in 0..=3u32 {
        if k > 0 {
            fact *= int(4 * k as i64);
        }
        let mut level_parts: Vec<Vec<Rational>> =
            (0..3).map(|j| vec![Rational::zero(); slices[j].monomials.len()]).collect();
        let mut cur = m.pow(k).scale(&fact);
        let mut j = k as usize;
        loop {
            let (r, a) = slices[j].decompose(&cur)?;
            if j == 0 {
                level_parts[0] = r;
                break;
            }
            if j == 3 {
                if r.iter().any(|x| !x.is_zero()) {
                    return Err(ExactError::Internal(
                        "degree 12 not in the Jacobian ideal".into(),
                    ));
                }
            } else {
                level_parts[j] = r;
            }
            let mut next = MPoly::zero();
            for (i, ai) in a.iter().enumerate() {
                next = next.add(&ai.partial(i));
            }
            cur = next.scale(&Rational::new(1.into(), (j as i64).into()));
            j -= 1;
        }
        vectors.push(level_parts.into_iter().rev().flatten().collect());
    }
    let [c2, c1, c0] = solve_three([&vectors[2], &vectors[1], &vectors[0]], &vectors[3])?;
    let den = Rational::one() - &t4;
    let expected = vec![int(6) * t * t * t / &den, int(7) * t * t / &den, t / &den];
    let coefficients = vec![c2, c1, c0];
    Ok(GdReductionCertificate {
        t: t.clone(),
        matches_closed_form: coefficients == expected,
        coefficients,
        expected,
        systems: slices.into_iter().map(|s| s.dims).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn reproduces_closed_form_at_two() {
        let c = griffiths_dwork_verify(&int(2)).unwrap();
        assert_eq!(c.coefficients[0], rat(-16, 5));
        assert!(c.matches_closed_form, "{c:?}");
        // degree 12 lies entirely in the ideal
        assert_eq!(c.systems[3].rank, c.systems[3].monomials);
    }

    #[test]
    fn reproduces_closed_form_at_three() {
        let c = griffiths_dwork_verify(&int(3)).unwrap();
        assert_eq!(c.coefficients[1], rat(-63, 80));
        assert!(c.matches_closed_form);
    }

    #[test]
    fn singular_fibres_rejected() {
        assert!(griffiths_dwork_verify(&int(1)).is_err());
        assert!(griffiths_dwork_verify(&int(-1)).is_err());
    }
}
