//! Monodromy of the mirror quartic family on `T0 = <4> + U`, the
//! fractional-linear maps it induces on the period chart, and the
//! embeddings of `M2` and `T0` into the K3 lattice.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::mobius::{mobius_from_monodromy, FixedPoints, MoebiusTransform, QuadraticIrrational};
use super::{k3_lattice, m2_lattice, t0_lattice, IntMatrix, IntegerLattice, LatticeMap, LatticeVector, Result};
use crate::exact::{rat, Rational};
use crate::flow::monodromy::Ordering;

/// Gram matrix of `T0` in the basis `(h, e, f)`.
pub fn gram_g() -> IntMatrix {
    IntMatrix::from_i64(&[&[4, 0, 0], &[0, 0, 1], &[0, 1, 0]])
}

/// Local monodromies around the four conifold points and around the
/// maximal unipotent point, as integer matrices acting on `(h, e, f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuarticMonodromy {
    pub g: IntMatrix,
    pub m: [IntMatrix; 4],
    pub m_infinity: IntMatrix,
}

pub fn paper_monodromy_matrices() -> QuarticMonodromy {
    QuarticMonodromy {
        g: gram_g(),
        m: [
            IntMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]),
            IntMatrix::from_i64(&[&[5, 1, -3], &[-12, -2, 9], &[4, 1, -2]]),
            IntMatrix::from_i64(&[&[17, 6, -6], &[-24, -8, 9], &[24, 9, -8]]),
            IntMatrix::from_i64(&[&[5, 3, -1], &[-4, -2, 1], &[12, 9, -2]]),
        ],
        m_infinity: IntMatrix::from_i64(&[&[1, 4, 0], &[0, 1, 0], &[-16, -32, 1]]),
    }
}

impl QuarticMonodromy {
    /// `M1, .., M4, M_inf` with labels.
    pub fn labelled(&self) -> Vec<(String, &IntMatrix)> {
        let mut v: Vec<(String, &IntMatrix)> =
            self.m.iter().enumerate().map(|(k, m)| (format!("M{}", k + 1), m)).collect();
        v.push(("M_inf".into(), &self.m_infinity));
        v
    }

    pub fn lattice_map(&self, m: &IntMatrix) -> LatticeMap {
        LatticeMap::new(m.clone(), t0_lattice(), t0_lattice()).expect("3x3 on T0")
    }

    pub fn product(&self, ordering: Ordering) -> IntMatrix {
        let mut acc = IntMatrix::identity(3);
        for m in &self.m {
            acc = match ordering {
                Ordering::LaterOnLeft => m.mul(&acc),
                Ordering::LaterOnRight => acc.mul(m),
            };
        }
        acc
    }

    /// Orderings of `M1 .. M4` whose product has inverse `M_inf`.
    pub fn relation_orderings(&self) -> Vec<Ordering> {
        [Ordering::LaterOnLeft, Ordering::LaterOnRight]
            .into_iter()
            .filter(|&o| self.product(o).mul(&self.m_infinity) == IntMatrix::identity(3))
            .collect()
    }

    /// `N_inf = G M_inf G^-1`, the action on the coordinates `(a, b, c)`.
    pub fn n_infinity(&self) -> IntMatrix {
        let g = self.g.to_rational();
        g.mul(&self.m_infinity.to_rational())
            .mul(&g.inverse().expect("G is nondegenerate"))
            .to_integer()
            .expect("integral")
    }
}

pub fn printed_n_infinity() -> IntMatrix {
    IntMatrix::from_i64(&[&[1, 0, 16], &[-4, 1, -32], &[0, 0, 1]])
}

/// `beta_1, .. beta_4, beta_inf` as printed.
pub fn printed_betas() -> [MoebiusTransform; 5] {
    let m = |a, b, c, d| MoebiusTransform::from_ints(a, b, c, d).expect("nonsingular");
    [
        // -1/(2z)
        m(0, -1, 2, 0),
        // (2z - 1) / (2(3z - 1))
        m(2, -1, 6, -2),
        // (4z - 3) / (2(3z - 2))
        m(4, -3, 6, -4),
        // (2z - 3) / (2(z - 1))
        m(2, -3, 2, -2),
        m(1, 4, 0, 1),
    ]
}

/// Printed fixed points of `beta_1 .. beta_4`: `+- i/sqrt 2`,
/// `(1 +- i/sqrt 2)/3`, `(2 +- i/sqrt 2)/3`, `1 +- i/sqrt 2`.
pub fn printed_fixed_points() -> [QuadraticIrrational; 4] {
    [
        QuadraticIrrational::new(rat(0, 1), rat(-1, 2)),
        QuadraticIrrational::new(rat(1, 3), rat(-1, 18)),
        QuadraticIrrational::new(rat(2, 3), rat(-1, 18)),
        QuadraticIrrational::new(rat(1, 1), rat(-1, 2)),
    ]
}

/// `l -> e - 2f`, `h -> e + 2f` from `<-4> + <4>` into `U`.
pub fn u_embedding() -> LatticeMap {
    let source = IntegerLattice::direct_sum(&[&IntegerLattice::rank_one(-4), &IntegerLattice::rank_one(4)]);
    LatticeMap::new(IntMatrix::from_i64(&[&[1, 1], &[-2, 2]]), source, IntegerLattice::hyperbolic())
        .expect("2x2")
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    (0..n).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }).collect()
}

fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> IntMatrix {
    IntMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
}

/// The embeddings `M2 -> Lambda` and `T0 -> Lambda` induced by the
/// identity on `2 E8(-1) + U` and by [`u_embedding`] on the last copy of
/// `U`; `T0`'s own `U` goes to the second copy.
pub fn induced_embeddings() -> (LatticeMap, LatticeMap) {
    let n = 22;
    let (u2, u3) = (18, 20);
    let mut m2_cols: Vec<Vec<BigInt>> = (0..18).map(|i| unit(n, i)).collect();
    let mut l = vec![BigInt::zero(); n];
    l[u3] = BigInt::from(1);
    l[u3 + 1] = BigInt::from(-2);
    m2_cols.push(l);
    let mut h = vec![BigInt::zero(); n];
    h[u3] = BigInt::from(1);
    h[u3 + 1] = BigInt::from(2);
    let t0_cols = vec![h, unit(n, u2), unit(n, u2 + 1)];
    (
        LatticeMap::new(from_columns(n, &m2_cols), m2_lattice(), k3_lattice()).expect("shape"),
        LatticeMap::new(from_columns(n, &t0_cols), t0_lattice(), k3_lattice()).expect("shape"),
    )
}

/// `M2 + T0 -> Lambda` assembled from the two induced embeddings.
pub fn induced_sum() -> LatticeMap {
    let (a, b) = induced_embeddings();
    let cols: Vec<Vec<BigInt>> =
        (0..a.matrix.cols()).map(|j| a.matrix.column(j)).chain((0..b.matrix.cols()).map(|j| b.matrix.column(j))).collect();
    let source = IntegerLattice::direct_sum(&[&m2_lattice(), &t0_lattice()]);
    LatticeMap::new(from_columns(22, &cols), source, k3_lattice()).expect("shape")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyEntry {
    pub name: String,
    pub matrix: IntMatrix,
    #[serde(with = "crate::exact::serde_str")]
    pub determinant: BigInt,
    pub preserves_gram: bool,
    /// constant term first
    #[serde(with = "crate::exact::serde_rational::vec")]
    pub charpoly: Vec<Rational>,
    pub moebius: Option<MoebiusTransform>,
    pub fixed_points: Option<FixedPoints>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeAudit {
    pub gram: IntMatrix,
    pub monodromy: Vec<MonodromyEntry>,
    pub relation_orderings: Vec<Ordering>,
    pub n_infinity: IntMatrix,
    #[serde(with = "crate::exact::serde_str::vec2")]
    pub n_infinity_fixed_space: Vec<Vec<BigInt>>,
    #[serde(with = "crate::exact::serde_str")]
    pub induced_sum_cokernel_order: BigInt,
    pub checks: Vec<LatticeCheck>,
    pub passed: bool,
}

fn check(checks: &mut Vec<LatticeCheck>, name: &str, passed: bool, detail: String) {
    checks.push(LatticeCheck { name: name.into(), passed, detail });
}

/// Every exact check on the lattices and monodromy data.
pub fn lattice_audit() -> Result<LatticeAudit> {
    let q = paper_monodromy_matrices();
    let g = &q.g;
    let mut checks = Vec::new();

    let lam = k3_lattice();
    let mukai = super::mukai_lattice();
    let t0 = t0_lattice();
    check(&mut checks, "signature Lambda = (3,19)", lam.signature()? == (3, 19), format!("{:?}", lam.signature()?));
    check(&mut checks, "signature Lambda~ = (4,20)", mukai.signature()? == (4, 20), format!("{:?}", mukai.signature()?));
    check(&mut checks, "signature T0 = (2,1)", t0.signature()? == (2, 1), format!("{:?}", t0.signature()?));
    check(&mut checks, "Lambda even unimodular", lam.is_even() && lam.is_unimodular(), format!("det {}", lam.det()));
    check(&mut checks, "l(T0) = 1", t0.l() == 1, format!("{:?}", t0.discriminant_factors()));
    let nik = super::nikulin_criterion(&t0, &lam)?;
    check(&mut checks, "Nikulin criterion for T0 in Lambda", nik.holds, format!("{nik:?}"));

    let ue = u_embedding();
    let diag = IntMatrix::from_i64(&[&[-4, 0], &[0, 4]]);
    // each image vector is primitive; jointly they span index 4 in U
    let columns_primitive = (0..2).all(|j| {
        LatticeVector::new(&IntegerLattice::hyperbolic(), ue.matrix.column(j)).is_ok_and(|v| v.is_primitive())
    });
    check(
        &mut checks,
        "l -> e-2f, h -> e+2f primitive vectors with Gram diag(-4,4)",
        columns_primitive && ue.pulled_back_gram() == diag && ue.cokernel_torsion()? == BigInt::from(4),
        format!("{:?}, joint index {}", ue.pulled_back_gram().to_rows(), ue.cokernel_torsion()?),
    );
    let (em2, et0) = induced_embeddings();
    check(
        &mut checks,
        "M2 -> Lambda primitive isometric embedding",
        em2.is_isometry() && em2.is_primitive_embedding()?,
        String::new(),
    );
    check(
        &mut checks,
        "T0 -> Lambda primitive isometric embedding",
        et0.is_isometry() && et0.is_primitive_embedding()?,
        String::new(),
    );
    let sum = induced_sum();
    let index = sum.cokernel_torsion()?;
    // M2 and T0 are mutual orthogonal complements with discriminant
    // groups Z/4 each, so their sum has index 4 in Lambda
    check(
        &mut checks,
        "M2 + T0 -> Lambda isometric of index 4",
        sum.is_isometry() && index == BigInt::from(4),
        format!("cokernel torsion {index}"),
    );

    let betas = printed_betas();
    let fixed = printed_fixed_points();
    let mut monodromy = Vec::new();
    for (k, (name, m)) in q.labelled().into_iter().enumerate() {
        let map = q.lattice_map(m);
        let moebius = mobius_from_monodromy(m, g).ok();
        let fixed_points = moebius.as_ref().map(MoebiusTransform::fixed_points);
        check(&mut checks, &format!("{name} preserves G"), map.is_isometry(), String::new());
        check(
            &mut checks,
            &format!("{name} induces the printed Moebius map"),
            moebius.as_ref() == Some(&betas[k]),
            format!("{moebius:?}"),
        );
        if k < 4 {
            let ok = matches!(&fixed_points, Some(FixedPoints::Quadratic { roots, .. }) if *roots == fixed[k]);
            check(&mut checks, &format!("{name} fixed points {}", fixed[k]), ok, format!("{fixed_points:?}"));
        }
        monodromy.push(MonodromyEntry {
            name,
            matrix: m.clone(),
            determinant: m.det(),
            preserves_gram: map.is_isometry(),
            charpoly: m.charpoly(),
            moebius,
            fixed_points,
        });
    }
    let id = IntMatrix::identity(3);
    let nil = q.m_infinity.sub(&id);
    check(
        &mut checks,
        "M_inf unipotent of maximal index",
        nil.pow(3).is_zero() && !nil.pow(2).is_zero(),
        format!("(M_inf - I)^2 = {:?}", nil.pow(2).to_rows()),
    );

    let relation_orderings = q.relation_orderings();
    check(
        &mut checks,
        "M_inf inverts the product of M1..M4",
        !relation_orderings.is_empty(),
        format!("{relation_orderings:?}"),
    );

    let n_inf = q.n_infinity();
    check(&mut checks, "N_inf as printed", n_inf == printed_n_infinity(), format!("{:?}", n_inf.to_rows()));
    let kernel = n_inf.sub(&id).to_rational().kernel();
    let fixed_space: Vec<Vec<BigInt>> = kernel
        .iter()
        .map(|v| v.iter().map(|x| x.to_integer()).collect())
        .collect();
    let spanned_by_e2 = kernel.len() == 1
        && kernel[0][0].is_zero()
        && kernel[0][2].is_zero()
        && !kernel[0][1].is_zero();
    check(&mut checks, "fixed space of N_inf spanned by (0,1,0)", spanned_by_e2, format!("{fixed_space:?}"));

    let passed = checks.iter().all(|c| c.passed);
    Ok(LatticeAudit {
        gram: g.clone(),
        monodromy,
        relation_orderings,
        n_infinity: n_inf,
        n_infinity_fixed_space: fixed_space,
        induced_sum_cokernel_order: index,
        checks,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monodromies_are_isometries() {
        let q = paper_monodromy_matrices();
        for (name, m) in q.labelled() {
            assert_eq!(m.transpose().mul(&q.g).mul(m), q.g, "{name}");
        }
        let dets: Vec<BigInt> = q.labelled().iter().map(|(_, m)| m.det()).collect();
        assert_eq!(dets, [-1, -1, -1, -1, 1].map(BigInt::from).to_vec());
    }

    #[test]
    fn betas_match_print() {
        let q = paper_monodromy_matrices();
        for ((name, m), beta) in q.labelled().into_iter().zip(printed_betas()) {
            assert_eq!(mobius_from_monodromy(m, &q.g).unwrap(), beta, "{name}");
        }
    }

    #[test]
    fn relation_ordering_is_later_on_left() {
        assert_eq!(paper_monodromy_matrices().relation_orderings(), vec![Ordering::LaterOnLeft]);
    }

    #[test]
    fn audit_passes() {
        let a = lattice_audit().unwrap();
        for c in &a.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(a.induced_sum_cokernel_order, BigInt::from(4));
    }
}
