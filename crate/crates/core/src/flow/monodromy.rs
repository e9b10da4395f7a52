//! Monodromy of the quartic family: the hypergeometric operator in the
//! `z`-plane around `0`, `1`, `inf`, and the Picard-Fuchs operator in the
//! `t`-plane around the four roots of `t^4 = 1`.
//!
//! Loops are based at `z = 1/4` and at `t = 7i/10`. Matrices use the row
//! convention of [`monodromy`]: continuing `(f_1..f_r)` along the loop
//! gives `(f_1..f_r) M`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::continuation::{cq, monodromy, CRational, FundamentalMatrix, NumericOperator, PathPolyline, Side};
use super::frobenius::{frobenius_basis_at_zero, frobenius_jets, terms_for};
use super::matrix::CMatrix;
use super::{BasisTag, CBall, FlowError};
use crate::diffop::{build_pf_operator, f32_operator, z_var};
use crate::exact::{int, rat, Rational};

/// Base point of the `z`-plane loops.
pub fn z_base() -> Rational {
    rat(1, 4)
}

/// Base point of the `t`-plane loops.
pub fn t_base() -> CRational {
    cq((0, 1), (7, 10))
}

/// A loop in the `z`-plane around one singular point, counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZLoop {
    Zero,
    One,
    Infinity,
}

impl fmt::Display for ZLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZLoop::Zero => "zero",
            ZLoop::One => "one",
            ZLoop::Infinity => "infinity",
        })
    }
}

impl ZLoop {
    pub fn path(self) -> PathPolyline {
        let base = CRational::real(z_base());
        let eighth = rat(1, 8);
        match self {
            ZLoop::Zero => PathPolyline::square_loop(&base, &CRational::zero(), &eighth, Side::Right),
            ZLoop::One => PathPolyline::square_loop(&base, &CRational::one(), &eighth, Side::Left),
            // a large square around both finite singular points
            ZLoop::Infinity => PathPolyline::new(vec![
                base.clone(),
                cq((1, 4), (-1, 1)),
                cq((2, 1), (-1, 1)),
                cq((2, 1), (1, 1)),
                cq((-1, 1), (1, 1)),
                cq((-1, 1), (-1, 1)),
                cq((1, 4), (-1, 1)),
                base,
            ]),
        }
    }

    /// Characteristic polynomial of the local monodromy, constant term
    /// first. At `0` it is unipotent; at `1` it is a reflection; at `inf`
    /// the local exponents `1/4, 1/2, 3/4` give eigenvalues `i, -1, -i`.
    pub fn exact_charpoly(self) -> [i64; 4] {
        match self {
            ZLoop::Zero => [-1, 3, -3, 1],
            ZLoop::One => [1, -1, -1, 1],
            ZLoop::Infinity => [1, 1, 1, 1],
        }
    }
}

/// Concatenate `z`-plane loops written as a word over `0`, `1`, `i`
/// (for infinity), traversed left to right.
pub fn z_word_path(word: &str) -> Result<PathPolyline, FlowError> {
    let mut path: Option<PathPolyline> = None;
    for c in word.chars().filter(|c| !c.is_whitespace()) {
        let l = match c {
            '0' => ZLoop::Zero,
            '1' => ZLoop::One,
            'i' | 'I' => ZLoop::Infinity,
            _ => return Err(FlowError::Domain(format!("unknown loop letter {c:?}; use 0, 1 or i"))),
        };
        path = Some(match path {
            None => l.path(),
            Some(p) => p.then(&l.path()),
        });
    }
    path.ok_or_else(|| FlowError::Domain("empty loop word".into()))
}

/// The hypergeometric operator `theta^3 - z (theta+1/4)(theta+1/2)(theta+3/4)`
/// prepared for continuation.
pub fn z_plane_operator() -> NumericOperator {
    NumericOperator::new(&f32_operator(z_var())).expect("hypergeometric operator has polynomial coefficients")
}

/// The Picard-Fuchs operator in `t`, prepared for continuation.
pub fn t_plane_operator() -> NumericOperator {
    NumericOperator::new(&build_pf_operator()).expect("Picard-Fuchs operator has polynomial coefficients")
}

/// Jets of the Frobenius basis `(f_0, f_1, f_2)` at the base point `1/4`.
pub fn frobenius_fundamental(prec: u32) -> Result<FundamentalMatrix, FlowError> {
    let upper = [rat(1, 4), rat(1, 2), rat(3, 4)];
    let x = z_base();
    let order = terms_for(0.25, prec);
    let basis = frobenius_basis_at_zero(&upper, z_var(), order)?;
    Ok(FundamentalMatrix { entries: frobenius_jets(&basis, &x, 3, prec + 32), basis: BasisTag::FrobeniusAtZero })
}

/// Monodromy of the Frobenius basis along a closed `z`-plane path.
pub fn z_monodromy(path: &PathPolyline, prec: u32) -> Result<CMatrix, FlowError> {
    let op = z_plane_operator();
    let f = frobenius_fundamental(prec)?;
    monodromy(&op, path, &f, prec)
}

/// The four small `t`-plane loops. `gamma_1..gamma_4` go around `i, -1,
/// -i, 1`: a straight spoke from the base to the nearest side of a square
/// of half-side `3/20`, once counterclockwise, and back.
pub fn t_small_loop(k: usize) -> PathPolyline {
    let base = t_base();
    let half = rat(3, 20);
    let (center, side) = match k {
        1 => (cq((0, 1), (1, 1)), Side::Bottom),
        2 => (cq((-1, 1), (0, 1)), Side::Right),
        3 => (cq((0, 1), (-1, 1)), Side::Top),
        4 => (cq((1, 1), (0, 1)), Side::Left),
        _ => panic!("t-plane loops are numbered 1 to 4"),
    };
    PathPolyline::square_loop(&base, &center, &half, side)
}

/// The large square of half-side `2` around all four singular points,
/// reached from the base along the right of `i`. With `clockwise` set it
/// is traversed clockwise, which is the loop around `t = inf` seen from
/// the outside.
pub fn t_big_loop(clockwise: bool) -> PathPolyline {
    let ccw = PathPolyline::new(vec![
        t_base(),
        cq((3, 10), (7, 10)),
        cq((3, 10), (2, 1)),
        cq((-2, 1), (2, 1)),
        cq((-2, 1), (-2, 1)),
        cq((2, 1), (-2, 1)),
        cq((2, 1), (2, 1)),
        cq((3, 10), (2, 1)),
        cq((3, 10), (7, 10)),
        t_base(),
    ]);
    if clockwise {
        ccw.reversed()
    } else {
        ccw
    }
}

/// Monodromy in the `t`-plane with the unit-jet basis at the base.
pub fn t_monodromy(path: &PathPolyline, prec: u32) -> Result<CMatrix, FlowError> {
    let op = t_plane_operator();
    monodromy(&op, path, &FundamentalMatrix::taylor(3, prec + 32), prec)
}

/// Matrix with exact integer entries as balls.
pub fn integer_matrix(rows: &[[i64; 3]; 3], prec: u32) -> CMatrix {
    let v: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    CMatrix::from_rationals(&v, prec)
}

/// Does every coefficient of `charpoly` lie within `tol` of the integers
/// `exact` (constant term first)?
pub fn charpoly_matches(charpoly: &[CBall], exact: &[i64], tol: f64) -> bool {
    charpoly.len() == exact.len()
        && charpoly
            .iter()
            .zip(exact)
            .all(|(c, &e)| c.within(&CBall::from_int(e, c.prec()), tol))
}

/// The two orderings of a composite of loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    /// first loop on the right: `M_last ... M_first`
    LaterOnLeft,
    /// first loop on the left: `M_first ... M_last`
    LaterOnRight,
}

/// Product of matrices of loops traversed in the given order.
pub fn compose(ms: &[CMatrix], ordering: Ordering) -> CMatrix {
    let n = ms[0].rows();
    let prec = ms[0].prec();
    let mut acc = CMatrix::identity(n, prec);
    for m in ms {
        acc = match ordering {
            Ordering::LaterOnLeft => m.mul(&acc),
            Ordering::LaterOnRight => acc.mul(m),
        };
    }
    acc
}

/// Outcome of the numerical monodromy audit.
#[derive(Clone, Debug)]
pub struct MonodromyAudit {
    pub zero: CMatrix,
    pub one: CMatrix,
    pub infinity: CMatrix,
    /// `(M_0 - 1)^3` within tolerance of zero
    pub zero_cube_vanishes: bool,
    /// `(M_0 - 1)^2` certainly nonzero
    pub zero_square_nonzero: bool,
    /// numerical `M_0` agrees with the exact Frobenius monodromy
    pub zero_matches_exact: bool,
    pub one_charpoly_matches: bool,
    pub infinity_charpoly_matches: bool,
    /// orderings under which the loop `0` then `1` matches the product
    pub composite_orderings: Vec<Ordering>,
    pub gammas: Vec<CMatrix>,
    pub gamma_infinity: CMatrix,
    pub gamma_charpolys_match: Vec<bool>,
    pub gamma_infinity_unipotent: bool,
    /// orderings under which `M_inf * (product of M_1..M_4) = 1`
    pub relation_orderings: Vec<Ordering>,
    pub max_radius: f64,
}

/// Run every monodromy computation at `prec` bits, judging equalities at
/// `tol`. The continuation jobs run in parallel.
pub fn audit(prec: u32, tol: f64) -> Result<MonodromyAudit, FlowError> {
    let z_paths = [ZLoop::Zero.path(), ZLoop::One.path(), ZLoop::Infinity.path(), z_word_path("01")?];
    let f = frobenius_fundamental(prec)?;
    let zop = z_plane_operator();
    let z_results: Vec<CMatrix> = z_paths
        .par_iter()
        .map(|p| monodromy(&zop, p, &f, prec))
        .collect::<Result<_, _>>()?;
    let t_paths: Vec<PathPolyline> = (1..=4).map(t_small_loop).chain([t_big_loop(true)]).collect();
    let t_results: Vec<CMatrix> = t_paths.par_iter().map(|p| t_monodromy(p, prec)).collect::<Result<_, _>>()?;

    let [m0, m1, minf, m01]: [CMatrix; 4] = z_results.try_into().expect("four loops");
    let id = CMatrix::identity(3, prec);
    let n0 = m0.sub(&id);
    let sq = n0.mul(&n0);
    let exact0 = super::frobenius::local_monodromy_at_zero(3, prec);
    let composite_orderings = [Ordering::LaterOnLeft, Ordering::LaterOnRight]
        .into_iter()
        .filter(|&o| compose(&[m0.clone(), m1.clone()], o).within(&m01, tol * 1e3))
        .collect();
    let gammas: Vec<CMatrix> = t_results[..4].to_vec();
    let gamma_infinity = t_results[4].clone();
    let relation_orderings = [Ordering::LaterOnLeft, Ordering::LaterOnRight]
        .into_iter()
        .filter(|&o| gamma_infinity.mul(&compose(&gammas, o)).within(&id, tol * 1e3))
        .collect();
    let max_radius = [&m0, &m1, &minf, &m01]
        .into_iter()
        .chain(&t_results)
        .map(CMatrix::max_rad)
        .fold(0.0, f64::max);
    Ok(MonodromyAudit {
        zero_cube_vanishes: sq.mul(&n0).max_abs() <= tol,
        zero_square_nonzero: sq.max_abs() > 0.0 && (0..3).any(|i| (0..3).any(|j| !sq.get(i, j).contains_zero())),
        zero_matches_exact: m0.within(&exact0, tol),
        one_charpoly_matches: charpoly_matches(&m1.charpoly(), &ZLoop::One.exact_charpoly(), tol),
        infinity_charpoly_matches: charpoly_matches(&minf.charpoly(), &ZLoop::Infinity.exact_charpoly(), tol),
        gamma_charpolys_match: gammas
            .iter()
            .map(|g| charpoly_matches(&g.charpoly(), &[1, -1, -1, 1], tol))
            .collect(),
        gamma_infinity_unipotent: charpoly_matches(&gamma_infinity.charpoly(), &[-1, 3, -3, 1], tol),
        composite_orderings,
        relation_orderings,
        zero: m0,
        one: m1,
        infinity: minf,
        gammas,
        gamma_infinity,
        max_radius,
    })
}

/// Smallest `e` with `(M - 1)^e` within `tol` of zero.
pub fn nilpotency_index(m: &CMatrix, tol: f64) -> Option<usize> {
    let n = m.rows();
    let id = CMatrix::identity(n, m.prec());
    let d = m.sub(&id);
    let mut p = d.clone();
    for e in 1..=n + 1 {
        if p.max_abs() <= tol {
            return Some(e);
        }
        p = p.mul(&d);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    const PREC: u32 = 128;
    const TOL: f64 = 1e-25;

    #[test]
    fn loop_around_zero_is_the_exact_unipotent_matrix() {
        let m = z_monodromy(&ZLoop::Zero.path(), PREC).unwrap();
        let exact = super::super::frobenius::local_monodromy_at_zero(3, PREC);
        assert!(m.within(&exact, TOL), "{:?}", m.summary(10));
        assert_eq!(nilpotency_index(&m, TOL), Some(3));
    }

    #[test]
    fn loop_around_one_is_a_reflection() {
        let m = z_monodromy(&ZLoop::One.path(), PREC).unwrap();
        assert!(charpoly_matches(&m.charpoly(), &ZLoop::One.exact_charpoly(), TOL));
    }

    #[test]
    fn reversed_loop_inverts() {
        let p = ZLoop::One.path();
        let a = z_monodromy(&p, PREC).unwrap();
        let b = z_monodromy(&p.reversed(), PREC).unwrap();
        assert!(a.mul(&b).within(&CMatrix::identity(3, PREC), TOL));
    }

    #[test]
    fn small_t_loops_are_reflections() {
        for k in 1..=4 {
            let m = t_monodromy(&t_small_loop(k), PREC).unwrap();
            assert!(charpoly_matches(&m.charpoly(), &[1, -1, -1, 1], TOL), "gamma_{k}");
        }
    }
}
