//! Integer lattices given by Gram matrices, Smith normal forms,
//! discriminant groups, primitive embeddings, Nikulin's embedding
//! criterion, and the monodromy data of the quartic mirror family.
//!
//! Maps act on the right: a map is stored as the matrix whose columns are
//! the images of the source basis, so `(h, e, f) M` lists the images of
//! `h, e, f`, and `M` is an isometry iff `M^T G M = G`.

pub mod matrix;
pub mod mobius;
pub mod quartic;
pub mod smith;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::{IntMatrix, Mat, RatMatrix};
pub use mobius::{FixedPoints, MoebiusTransform, QuadraticIrrational};
pub use smith::{smith_normal_form, Smith};

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("lattice {0} is degenerate")]
    Degenerate(String),
    #[error("map is not injective")]
    NotInjective,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a fractional-linear action: {0}")]
    NotMoebius(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerLattice {
    pub name: String,
    pub gram: IntMatrix,
}

impl IntegerLattice {
    pub fn new(name: &str, gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(IntegerLattice { name: name.to_string(), gram })
    }

    /// The rank-one lattice `<n>`.
    pub fn rank_one(n: i64) -> Self {
        IntegerLattice { name: format!("<{n}>"), gram: IntMatrix::from_i64(&[&[n]]) }
    }

    /// Hyperbolic plane `U`.
    pub fn hyperbolic() -> Self {
        IntegerLattice { name: "U".into(), gram: IntMatrix::from_i64(&[&[0, 1], &[1, 0]]) }
    }

    /// Positive definite `E8` (Cartan matrix of the Dynkin diagram with
    /// the branch at the third node).
    pub fn e8() -> Self {
        let mut g = IntMatrix::from_fn(8, 8, |i, j| BigInt::from(if i == j { 2 } else { 0 }));
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];
        for (a, b) in edges {
            g.set(a, b, BigInt::from(-1));
            g.set(b, a, BigInt::from(-1));
        }
        IntegerLattice { name: "E8".into(), gram: g }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).is_even())
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn direct_sum(parts: &[&IntegerLattice]) -> Self {
        let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(" + ");
        let grams: Vec<&IntMatrix> = parts.iter().map(|p| &p.gram).collect();
        IntegerLattice { name, gram: IntMatrix::block_diag(&grams) }
    }

    /// `L(sign)`: the Gram scaled by `sign`.
    pub fn twist(&self, sign: i64) -> Self {
        IntegerLattice { name: format!("{}({sign})", self.name), gram: self.gram.scale(&BigInt::from(sign)) }
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// `(positive, negative)` inertia by exact symmetric elimination.
    pub fn signature(&self) -> Result<(usize, usize)> {
        if !self.is_nondegenerate() {
            return Err(LatticeError::Degenerate(self.name.clone()));
        }
        Ok(inertia(&self.gram.to_rational()))
    }

    pub fn smith(&self) -> Smith {
        smith_normal_form(&self.gram)
    }

    /// Invariant factors of the discriminant group `L^v / L` (those
    /// different from 1).
    pub fn discriminant_factors(&self) -> Vec<BigInt> {
        self.smith().invariant_factors().into_iter().filter(|d| !d.is_one()).collect()
    }

    /// Minimal number of generators of the discriminant group.
    pub fn l(&self) -> usize {
        self.discriminant_factors().len()
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let gy = self.gram.apply(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }
}

/// Sylvester inertia of a symmetric rational matrix: congruence
/// diagonalization, using `e_i + e_j` when every remaining diagonal entry
/// vanishes.
fn inertia(g: &RatMatrix) -> (usize, usize) {
    let n = g.rows();
    let mut a = g.clone();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let piv = active.iter().copied().find(|&i| !a.get(i, i).is_zero());
        let p = match piv {
            Some(p) => p,
            None => {
                // find an off-diagonal entry and replace e_i by e_i + e_j
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a.get(i, j).is_zero());
                let Some((i, j)) = pair else {
                    // the rest is zero: degenerate, counted as neither
                    break;
                };
                add_congruent(&mut a, i, j, &Rational::one());
                i
            }
        };
        let d = a.get(p, p).clone();
        for &j in &active {
            if j != p && !a.get(p, j).is_zero() {
                let f = a.get(p, j).clone() / &d;
                add_congruent(&mut a, j, p, &-f);
            }
        }
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&x| x != p);
    }
    (pos, neg)
}

/// Replace `e_i` by `e_i + c e_j`: row and column operation.
fn add_congruent(a: &mut RatMatrix, i: usize, j: usize, c: &Rational) {
    let n = a.rows();
    for k in 0..n {
        let v = a.get(i, k).clone() + &(c.clone() * a.get(j, k));
        a.set(i, k, v);
    }
    for k in 0..n {
        let v = a.get(k, i).clone() + &(c.clone() * a.get(k, j));
        a.set(k, i, v);
    }
}

/// The K3 lattice `2 E8(-1) + 3 U`.
pub fn k3_lattice() -> IntegerLattice {
    let e = IntegerLattice::e8().twist(-1);
    let u = IntegerLattice::hyperbolic();
    IntegerLattice::direct_sum(&[&e, &e, &u, &u, &u]).renamed("Lambda")
}

/// The Mukai lattice `Lambda + U`.
pub fn mukai_lattice() -> IntegerLattice {
    IntegerLattice::direct_sum(&[&k3_lattice(), &IntegerLattice::hyperbolic()]).renamed("Lambda~")
}

/// `M2 = 2 E8(-1) + U + <-4>`, the Picard lattice of the mirror family.
pub fn m2_lattice() -> IntegerLattice {
    let e = IntegerLattice::e8().twist(-1);
    IntegerLattice::direct_sum(&[&e, &e, &IntegerLattice::hyperbolic(), &IntegerLattice::rank_one(-4)]).renamed("M2")
}

/// `T0 = <4> + U` with basis `(h, e, f)`.
pub fn t0_lattice() -> IntegerLattice {
    IntegerLattice::direct_sum(&[&IntegerLattice::rank_one(4), &IntegerLattice::hyperbolic()]).renamed("T0")
}

/// A linear map between lattices; column `j` holds the image of source
/// basis vector `j` in target coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeMap {
    pub matrix: IntMatrix,
    pub source: IntegerLattice,
    pub target: IntegerLattice,
}

impl LatticeMap {
    pub fn new(matrix: IntMatrix, source: IntegerLattice, target: IntegerLattice) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(LatticeError::Shape(format!(
                "{}x{} matrix for a map of rank {} to rank {}",
                matrix.rows(),
                matrix.cols(),
                source.rank(),
                target.rank()
            )));
        }
        Ok(LatticeMap { matrix, source, target })
    }

    /// Gram matrix of the source induced by the target: `M^T G M`.
    pub fn pulled_back_gram(&self) -> IntMatrix {
        self.matrix.transpose().mul(&self.target.gram).mul(&self.matrix)
    }

    pub fn is_isometry(&self) -> bool {
        self.pulled_back_gram() == self.source.gram
    }

    /// Injective with torsion-free cokernel: all elementary divisors 1.
    pub fn is_primitive_embedding(&self) -> Result<bool> {
        let s = smith_normal_form(&self.matrix);
        if s.rank() < self.matrix.cols() {
            return Err(LatticeError::NotInjective);
        }
        Ok(s.invariant_factors().iter().all(One::is_one))
    }

    /// Order of the torsion of the cokernel of an injective map.
    pub fn cokernel_torsion(&self) -> Result<BigInt> {
        let s = smith_normal_form(&self.matrix);
        if s.rank() < self.matrix.cols() {
            return Err(LatticeError::NotInjective);
        }
        Ok(s.invariant_factors().iter().product())
    }
}

/// A vector in the basis of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeVector {
    #[serde(with = "crate::exact::serde_str::vec")]
    pub coordinates: Vec<BigInt>,
    pub lattice: String,
}

impl LatticeVector {
    pub fn new(lattice: &IntegerLattice, coordinates: Vec<BigInt>) -> Result<Self> {
        if coordinates.len() != lattice.rank() {
            return Err(LatticeError::Shape("coordinate length differs from the rank".into()));
        }
        Ok(LatticeVector { coordinates, lattice: lattice.name.clone() })
    }

    /// Divisible by no integer greater than 1.
    pub fn is_primitive(&self) -> bool {
        self.coordinates.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).is_one()
    }
}

/// The three inequalities of Nikulin's criterion for a primitive
/// embedding `S -> L` of even lattices to be unique up to `O(L)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NikulinReport {
    pub s_signature: (usize, usize),
    pub l_signature: (usize, usize),
    pub l_of_s: usize,
    pub rank_difference: i64,
    pub positive_strict: bool,
    pub negative_strict: bool,
    pub rank_bound: bool,
    pub holds: bool,
}

pub fn nikulin_criterion(s: &IntegerLattice, l: &IntegerLattice) -> Result<NikulinReport> {
    let ss = s.signature()?;
    let ls = l.signature()?;
    let ld = s.l();
    let rd = l.rank() as i64 - s.rank() as i64;
    let positive_strict = ls.0 > ss.0;
    let negative_strict = ls.1 > ss.1;
    let rank_bound = rd >= ld as i64 + 2;
    Ok(NikulinReport {
        s_signature: ss,
        l_signature: ls,
        l_of_s: ld,
        rank_difference: rd,
        positive_strict,
        negative_strict,
        rank_bound,
        holds: positive_strict && negative_strict && rank_bound && s.is_even() && l.is_even(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_lattices() {
        let u = IntegerLattice::hyperbolic();
        assert_eq!(u.signature().unwrap(), (1, 1));
        assert_eq!(IntegerLattice::direct_sum(&[&u, &u]).rank(), 4);
        let e = IntegerLattice::e8().twist(-1);
        assert_eq!(e.det(), BigInt::one());
        assert!(e.is_even());
        assert_eq!(e.signature().unwrap(), (0, 8));
        assert_eq!(k3_lattice().signature().unwrap(), (3, 19));
        assert_eq!(mukai_lattice().rank(), 24);
        assert_eq!(mukai_lattice().signature().unwrap(), (4, 20));
        assert_eq!(t0_lattice().signature().unwrap(), (2, 1));
        assert!(k3_lattice().is_unimodular());
    }

    #[test]
    fn discriminant_groups() {
        assert_eq!(IntegerLattice::rank_one(4).discriminant_factors(), vec![BigInt::from(4)]);
        assert_eq!(IntegerLattice::hyperbolic().l(), 0);
        assert_eq!(t0_lattice().l(), 1);
        assert_eq!(m2_lattice().l(), 1);
    }

    #[test]
    fn nikulin_examples() {
        assert!(nikulin_criterion(&t0_lattice(), &k3_lattice()).unwrap().holds);
        assert!(!nikulin_criterion(&k3_lattice(), &k3_lattice()).unwrap().holds);
        assert!(nikulin_criterion(&IntegerLattice::rank_one(4), &mukai_lattice()).unwrap().holds);
    }

    #[test]
    fn divisible_vector_is_not_primitive() {
        let u = IntegerLattice::hyperbolic();
        let m = LatticeMap::new(IntMatrix::from_i64(&[&[2], &[0]]), IntegerLattice::rank_one(0), u.clone()).unwrap();
        assert!(!m.is_primitive_embedding().unwrap());
        assert!(!LatticeVector::new(&u, vec![BigInt::from(2), BigInt::zero()]).unwrap().is_primitive());
    }
}
