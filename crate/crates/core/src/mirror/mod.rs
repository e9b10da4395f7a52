//! Period-domain points and the mirror square: the Mukai pairing, the
//! A-model period of the quartic, the chart on `T0`, the isometry `g0`
//! between them and the 22-entry period vector.
//!
//! Symbolic periods are polynomials in one variable over the rationals,
//! so the identities below are checked as polynomial identities.
//! Numeric points are exact complex rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Poly, Rational, Var};
use crate::flow::ns::i_over_sqrt2;
use crate::flow::{CBall, CRational};
use crate::lattice::quartic::{gram_g as gram_t0, induced_embeddings, printed_n_infinity};
use crate::lattice::{k3_lattice, mukai_lattice, IntMatrix, IntegerLattice, LatticeMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MirrorError {
    #[error("{0} is real: not in the period domain chart")]
    RealPoint(String),
    #[error("degree-2 parts live in lattices of ranks {0} and {1}")]
    Shape(usize, usize),
    #[error("chart undefined at this point: {0}")]
    Chart(String),
}

pub type Result<T> = std::result::Result<T, MirrorError>;

/// Coordinates of a period in a named lattice basis. `T` is [`Poly`] for
/// symbolic periods and [`CRational`] for points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodVector<T> {
    pub coordinates: Vec<T>,
    pub lattice: String,
}

/// Basis `(e, H, f)` of `<H> + U`, with `H^2 = 4`.
pub fn gram_a_model() -> IntMatrix {
    IntMatrix::from_i64(&[&[0, 0, 1], &[0, 4, 0], &[1, 0, 0]])
}

pub const A_MODEL: &str = "<H> + U";
pub const T0: &str = "T0";

/// `[e + p H - 2 p^2 f]`, the period of the quartic with complexified
/// Kaehler class `p H`.
pub fn a_period_symbolic(p: &Var) -> PeriodVector<Poly> {
    PeriodVector {
        coordinates: vec![
            Poly::one(p.clone()),
            Poly::x(p.clone()),
            Poly::monomial(p.clone(), Rational::from_integer((-2).into()), 2),
        ],
        lattice: A_MODEL.into(),
    }
}

/// `[z h - e + 2 z^2 f]` in the basis `(h, e, f)` of `T0`.
pub fn tilde_exp_symbolic(z: &Var) -> PeriodVector<Poly> {
    PeriodVector {
        coordinates: vec![
            Poly::x(z.clone()),
            Poly::constant(z.clone(), -Rational::one()),
            Poly::monomial(z.clone(), Rational::from_integer(2.into()), 2),
        ],
        lattice: T0.into(),
    }
}

fn require_nonreal(p: &CRational) -> Result<()> {
    if p.im.is_zero() {
        Err(MirrorError::RealPoint(format!("{p:?}")))
    } else {
        Ok(())
    }
}

pub fn eval_poly(f: &Poly, z: &CRational) -> CRational {
    f.coeffs().iter().rev().fold(CRational::zero(), |acc, c| acc.mul(z).add(&CRational::real(c.clone())))
}

fn eval_vector(v: &PeriodVector<Poly>, z: &CRational) -> PeriodVector<CRational> {
    PeriodVector { coordinates: v.coordinates.iter().map(|f| eval_poly(f, z)).collect(), lattice: v.lattice.clone() }
}

pub fn a_period(p: &CRational) -> Result<PeriodVector<CRational>> {
    require_nonreal(p)?;
    Ok(eval_vector(&a_period_symbolic(&Var::new("p")), p))
}

/// `[a : b : c] -> b / a` in the basis `(e, H, f)`.
pub fn a_period_inverse(v: &PeriodVector<CRational>) -> Result<CRational> {
    div(&v.coordinates[1], &v.coordinates[0])
}

pub fn tilde_exp(z: &CRational) -> Result<PeriodVector<CRational>> {
    require_nonreal(z)?;
    Ok(eval_vector(&tilde_exp_symbolic(&Var::new("z")), z))
}

/// `[a : b : c] -> -a / b` in the basis `(h, e, f)`.
pub fn tilde_exp_inverse(v: &PeriodVector<CRational>) -> Result<CRational> {
    div(&v.coordinates[0].neg(), &v.coordinates[1])
}

fn div(a: &CRational, b: &CRational) -> Result<CRational> {
    let n = &b.re * &b.re + &b.im * &b.im;
    if n.is_zero() {
        return Err(MirrorError::Chart("zero denominator".into()));
    }
    Ok(a.mul(&b.conj()).scale(&n.recip()))
}

/// Bilinear pairing of polynomial coordinate vectors.
pub fn pair_symbolic(gram: &IntMatrix, x: &[Poly], y: &[Poly]) -> Poly {
    let var = x[0].var().clone();
    let mut acc = Poly::zero(var);
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            let g = gram.get(i, j);
            if !g.is_zero() {
                acc = acc + (x[i].clone() * y[j].clone()).scale(&Rational::from_integer(g.clone()));
            }
        }
    }
    acc
}

/// Bilinear (not Hermitian) pairing of complex coordinate vectors.
pub fn pair(gram: &IntMatrix, x: &[CRational], y: &[CRational]) -> CRational {
    let mut acc = CRational::zero();
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            let g = gram.get(i, j);
            if !g.is_zero() {
                acc = acc.add(&x[i].mul(&y[j]).scale(&Rational::from_integer(g.clone())));
            }
        }
    }
    acc
}

/// `<Omega, conj Omega>`, real for a real Gram.
pub fn hermitian_norm(gram: &IntMatrix, x: &[CRational]) -> Rational {
    let xc: Vec<CRational> = x.iter().map(CRational::conj).collect();
    pair(gram, x, &xc).re
}

/// `<Omega, Omega> = 0` and `<Omega, conj Omega> > 0`.
pub fn in_period_domain(gram: &IntMatrix, x: &[CRational]) -> bool {
    pair(gram, x, x).is_zero() && hermitian_norm(gram, x).is_positive()
}

/// A class in total cohomology `H^0 + H^2 + H^4` with complex
/// coefficients; the degree-2 part is in the basis of `Lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MukaiVector {
    pub deg0: CRational,
    pub deg2: Vec<CRational>,
    pub deg4: CRational,
}

impl MukaiVector {
    /// `exp(B) = (1, B, B^2/2)` for `B` in `Lambda (x) C`.
    pub fn exp(b: Vec<CRational>, lambda: &IntegerLattice) -> Self {
        let half = pair(&lambda.gram, &b, &b).scale(&Rational::new(1.into(), 2.into()));
        MukaiVector { deg0: CRational::one(), deg2: b, deg4: half }
    }
}

/// `int a2 b2 - a0 b4 - a4 b0`.
pub fn mukai_pairing(lambda: &IntegerLattice, v: &MukaiVector, w: &MukaiVector) -> Result<CRational> {
    if v.deg2.len() != lambda.rank() || w.deg2.len() != lambda.rank() {
        return Err(MirrorError::Shape(v.deg2.len(), w.deg2.len()));
    }
    Ok(pair(&lambda.gram, &v.deg2, &w.deg2).sub(&v.deg0.mul(&w.deg4)).sub(&v.deg4.mul(&w.deg0)))
}

/// Gram of the Mukai pairing on the standard basis of total cohomology:
/// `Lambda` followed by `(1, or)`.
pub fn mukai_gram() -> IntMatrix {
    let outer = IntMatrix::from_i64(&[&[0, -1], &[-1, 0]]);
    IntMatrix::block_diag(&[&k3_lattice().gram, &outer])
}

/// `h -> H, e -> -e, f -> -f` from `T0 = <h> + U` to `<H> + U`, with the
/// target in the basis `(e, H, f)`.
pub fn g0_isometry() -> LatticeMap {
    let target = IntegerLattice::new(A_MODEL, gram_a_model()).expect("symmetric");
    let m = IntMatrix::from_i64(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, -1]]);
    LatticeMap::new(m, crate::lattice::t0_lattice(), target).expect("3x3")
}

fn apply_symbolic(m: &IntMatrix, v: &[Poly]) -> Vec<Poly> {
    let var = v[0].var().clone();
    (0..m.rows())
        .map(|i| {
            (0..m.cols()).fold(Poly::zero(var.clone()), |acc, j| {
                acc + v[j].scale(&Rational::from_integer(m.get(i, j).clone()))
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramReport {
    pub g0_isometry: bool,
    pub symbolic_identity: bool,
    pub a_isotropic: bool,
    pub t0_isotropic: bool,
    pub numeric_at_fixed_point: bool,
    pub numeric_radius: f64,
    pub passed: bool,
}

/// `g0(tilde_exp(z)) = a_period(z)` as polynomials in `z`, and once more
/// in ball arithmetic at `z = i/sqrt 2`.
pub fn diagram_check(prec: u32) -> DiagramReport {
    let g0 = g0_isometry();
    let z = Var::new("z");
    let t = tilde_exp_symbolic(&z);
    let a = a_period_symbolic(&z);
    let image = apply_symbolic(&g0.matrix, &t.coordinates);
    let symbolic_identity = image == a.coordinates;
    let a_isotropic = pair_symbolic(&gram_a_model(), &a.coordinates, &a.coordinates).is_zero();
    let t0_isotropic = pair_symbolic(&gram_t0(), &t.coordinates, &t.coordinates).is_zero();

    let zb = i_over_sqrt2(prec);
    let z2 = zb.square();
    let lhs: Vec<CBall> = {
        let v = [zb.clone(), CBall::from_int(-1, prec), z2.mul_int(2)];
        (0..3)
            .map(|i| {
                (0..3).fold(CBall::zero(prec), |acc, j| {
                    let c = g0.matrix.get(i, j).to_i64().expect("small");
                    &acc + &v[j].mul_int(c)
                })
            })
            .collect()
    };
    let rhs = [CBall::one(prec), zb.clone(), z2.mul_int(-2)];
    let numeric_at_fixed_point = lhs.iter().zip(&rhs).all(|(l, r)| l.overlaps(r));
    let numeric_radius = lhs.iter().chain(&rhs).map(CBall::rad).fold(0.0, f64::max);
    let g0_isometry = g0.is_isometry();
    DiagramReport {
        g0_isometry,
        symbolic_identity,
        a_isotropic,
        t0_isotropic,
        numeric_at_fixed_point,
        numeric_radius,
        passed: g0_isometry && symbolic_identity && a_isotropic && t0_isotropic && numeric_at_fixed_point,
    }
}

/// `Gamma_1 .. Gamma_22` in the basis of `Lambda`: `h`, `e`, `f`, `f'`
/// followed by the standard basis of `2 E8(-1) + U''`. Here `T0` sits in
/// `Lambda` with `(e, f)` the third copy of `U` and `h = e' + 2 f'` in
/// the fourth.
pub fn gamma_basis() -> Vec<Vec<BigInt>> {
    let t0 = induced_embeddings().1.matrix;
    let mut out: Vec<Vec<BigInt>> = (0..3).map(|j| t0.column(j)).collect();
    let unit = |i: usize| (0..22).map(|k| BigInt::from((k == i) as i64)).collect::<Vec<_>>();
    out.push(unit(21));
    out.extend((0..18).map(unit));
    out
}

/// `tilde_exp(p)` pushed into `Lambda`.
pub fn tilde_exp_in_lambda(p: &Var) -> Vec<Poly> {
    let t0 = induced_embeddings().1.matrix;
    apply_symbolic(&t0, &tilde_exp_symbolic(p).coordinates)
}

/// `<tilde_exp(p), Gamma_i>` for `i = 1..22`.
pub fn period_vector_22_symbolic(p: &Var) -> Vec<Poly> {
    let lam = k3_lattice();
    let omega = tilde_exp_in_lambda(p);
    gamma_basis()
        .iter()
        .map(|g| {
            let gp: Vec<Poly> =
                g.iter().map(|c| Poly::constant(p.clone(), Rational::from_integer(c.clone()))).collect();
            pair_symbolic(&lam.gram, &omega, &gp)
        })
        .collect()
}

/// `(4p, 2p^2, -1, p, 0, .., 0)`.
pub fn expected_period_vector(p: &Var) -> Vec<Poly> {
    let mut v = vec![
        Poly::monomial(p.clone(), Rational::from_integer(4.into()), 1),
        Poly::monomial(p.clone(), Rational::from_integer(2.into()), 2),
        Poly::constant(p.clone(), -Rational::one()),
        Poly::x(p.clone()),
    ];
    v.resize(22, Poly::zero(p.clone()));
    v
}

pub fn period_vector_22(p: &CRational) -> Result<Vec<CRational>> {
    if !p.im.is_positive() {
        return Err(MirrorError::RealPoint(format!("{p:?} (need Im p > 0)")));
    }
    Ok(period_vector_22_symbolic(&Var::new("p")).iter().map(|f| eval_poly(f, p)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodVectorReport {
    pub p: CRational,
    /// `(re, im)` of each entry
    pub entries: Vec<(f64, f64)>,
    pub exact_entries: Vec<CRational>,
    pub gamma_is_basis: bool,
    pub symbolic_identity: bool,
    pub in_period_domain: bool,
    pub passed: bool,
}

pub fn period_vector_report(p: &CRational) -> Result<PeriodVectorReport> {
    let exact = period_vector_22(p)?;
    let var = Var::new("p");
    let symbolic_identity = period_vector_22_symbolic(&var) == expected_period_vector(&var);
    let basis = gamma_basis();
    let gamma_is_basis = IntMatrix::from_fn(22, 22, |i, j| basis[j][i].clone()).is_unimodular();
    let in_domain = in_period_domain(&gram_t0(), &tilde_exp(p)?.coordinates);
    Ok(PeriodVectorReport {
        p: p.clone(),
        entries: exact.iter().map(|c| (c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))).collect(),
        exact_entries: exact,
        gamma_is_basis,
        symbolic_identity,
        in_period_domain: in_domain,
        passed: symbolic_identity && gamma_is_basis && in_domain,
    })
}

/// Linear-algebra skeleton of the uniqueness of the period map near the
/// maximal unipotent point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessReport {
    /// basis of the fixed space of `N_inf`
    #[serde(with = "crate::exact::serde_str::vec2")]
    pub fixed_space: Vec<Vec<BigInt>>,
    /// a solution of `(N_inf - 1) v = -4 e2`
    #[serde(with = "crate::exact::serde_str::vec")]
    pub particular_solution: Vec<BigInt>,
    /// dimension of the affine solution space
    pub affine_dimension: usize,
    /// discriminant of `z^2 + mu z + 1/2` in `mu`, constant term first
    #[serde(with = "crate::exact::serde_rational::vec")]
    pub discriminant: Vec<Rational>,
    /// `mu = 0` is the only root of `disc + 2`
    pub mu_forced_zero: bool,
    pub passed: bool,
}

pub fn uniqueness_structure_check() -> UniquenessReport {
    let n = printed_n_infinity().sub(&IntMatrix::identity(3)).to_rational();
    let kernel = n.kernel();
    let to_int = |v: &[Rational]| v.iter().map(|x| x.to_integer()).collect::<Vec<BigInt>>();
    let fixed_space: Vec<Vec<BigInt>> = kernel.iter().map(|v| to_int(v)).collect();
    let e2_span = kernel.len() == 1 && kernel[0][0].is_zero() && kernel[0][2].is_zero();
    let rhs = [Rational::zero(), Rational::from_integer((-4).into()), Rational::zero()];
    let sol = n.solve(&rhs);
    // normalize the e2 component to zero
    let particular: Option<Vec<Rational>> = sol.map(|mut v| {
        v[1] = Rational::zero();
        v
    });
    let expected = [Rational::one(), Rational::zero(), Rational::zero()];
    let particular_ok = particular.as_deref() == Some(&expected[..]) && n.apply(&expected) == rhs;

    let mu = Var::new("mu");
    // b^2 - 4ac for z^2 + mu z + 1/2
    let disc = Poly::x(mu.clone()).pow(2) + Poly::constant(mu.clone(), Rational::from_integer((-2).into()));
    let shifted = disc.clone() + Poly::constant(mu.clone(), Rational::from_integer(2.into()));
    // mu^2: a single root, at zero
    let mu_forced_zero = shifted == Poly::x(mu).pow(2);
    let discriminant = disc.coeffs().to_vec();
    let passed = e2_span && particular_ok && mu_forced_zero;
    UniquenessReport {
        fixed_space,
        particular_solution: particular.map(|v| to_int(&v)).unwrap_or_default(),
        affine_dimension: kernel.len(),
        discriminant,
        mu_forced_zero,
        passed,
    }
}

/// Signature of the Mukai pairing on the standard basis.
pub fn mukai_signature() -> (usize, usize) {
    let l = IntegerLattice::new("Mukai", mukai_gram()).expect("symmetric");
    l.signature().expect("nondegenerate")
}

/// Check that the Mukai Gram agrees with `Lambda + U` up to the sign of the
/// hyperbolic block, which does not change the isometry class.
pub fn mukai_matches_enlarged_lattice() -> bool {
    mukai_signature() == mukai_lattice().signature().expect("nondegenerate")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::continuation::cq;
    use proptest::prelude::*;

    fn zero_vec(n: usize) -> Vec<CRational> {
        vec![CRational::zero(); n]
    }

    #[test]
    fn mukai_pairing_examples() {
        let lam = k3_lattice();
        let one = MukaiVector { deg0: CRational::one(), deg2: zero_vec(22), deg4: CRational::zero() };
        let or = MukaiVector { deg0: CRational::zero(), deg2: zero_vec(22), deg4: CRational::one() };
        assert_eq!(mukai_pairing(&lam, &one, &or).unwrap(), CRational::real(Rational::from_integer((-1).into())));

        // exp(i omega + beta) is isotropic
        let b: Vec<CRational> = (0..22).map(|k| cq((k as i64 - 7, 3), ((k * k) as i64 % 5, 2))).collect();
        let mho = MukaiVector::exp(b, &lam);
        assert!(mukai_pairing(&lam, &mho, &mho).unwrap().is_zero());
        assert_eq!(mukai_signature(), (4, 20));
        assert!(mukai_matches_enlarged_lattice());
    }

    #[test]
    fn charts_invert() {
        let p = cq((1, 3), (2, 1));
        let a = a_period(&p).unwrap();
        assert_eq!(a.coordinates, vec![CRational::one(), p.clone(), p.mul(&p).scale(&Rational::from_integer((-2).into()))]);
        assert_eq!(a_period_inverse(&a).unwrap(), p);
        assert_eq!(tilde_exp_inverse(&tilde_exp(&p).unwrap()).unwrap(), p);
        let i = cq((0, 1), (1, 1));
        assert_eq!(a_period(&i).unwrap().coordinates[2], CRational::real(Rational::from_integer(2.into())));
        assert!(a_period(&cq((1, 1), (0, 1))).is_err());
    }

    #[test]
    fn diagram_commutes() {
        let r = diagram_check(128);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn period_vector_identity() {
        let r = period_vector_report(&cq((1, 5), (3, 2))).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.exact_entries[2], CRational::real(Rational::from_integer((-1).into())));
        assert!(r.exact_entries[4..].iter().all(CRational::is_zero));
    }

    #[test]
    fn uniqueness_skeleton() {
        let r = uniqueness_structure_check();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.fixed_space.len(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn periods_lie_in_the_period_domain(
            x in -1000i64..1000, xd in 1i64..50, y in 1i64..1000, yd in 1i64..50
        ) {
            let p = cq((x, xd), (y, yd));
            let a = a_period(&p).unwrap();
            let t = tilde_exp(&p).unwrap();
            prop_assert!(in_period_domain(&gram_a_model(), &a.coordinates));
            prop_assert!(in_period_domain(&gram_t0(), &t.coordinates));
            // <Omega, conj Omega> = 8 (Im p)^2
            let eight_y2 = Rational::new(8.into(), 1.into()) * &p.im * &p.im;
            prop_assert_eq!(hermitian_norm(&gram_t0(), &t.coordinates), eight_y2);
        }
    }
}
