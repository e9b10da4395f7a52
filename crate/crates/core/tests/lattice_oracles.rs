use k3mirror::exact::Rational;
use k3mirror::lattice::mobius::mobius_from_monodromy;
use k3mirror::lattice::quartic::{gram_g, induced_sum, paper_monodromy_matrices, printed_betas};
use k3mirror::lattice::{k3_lattice, smith_normal_form, FixedPoints, IntMatrix, IntegerLattice};
use num_complex::Complex64;
use num_traits::ToPrimitive;

fn f(m: &IntMatrix, i: usize, j: usize) -> f64 {
    m.get(i, j).to_f64().unwrap()
}

/// `-a'/b'` for `(a', b', c') = (z, -1, 2z^2) G M G^-1`, in floating point.
fn action(m: &IntMatrix, z: Complex64) -> Complex64 {
    let g = gram_g();
    // G^-1 = diag(1/4, swap)
    let ginv = [[0.25, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]];
    let v = [z, Complex64::new(-1.0, 0.0), 2.0 * z * z];
    let mut vg = [Complex64::default(); 3];
    for j in 0..3 {
        for i in 0..3 {
            vg[j] += v[i] * f(&g, i, j);
        }
    }
    let mut vgm = [Complex64::default(); 3];
    for j in 0..3 {
        for i in 0..3 {
            vgm[j] += vg[i] * f(m, i, j);
        }
    }
    let mut out = [Complex64::default(); 3];
    for j in 0..3 {
        for i in 0..3 {
            out[j] += vgm[i] * ginv[i][j];
        }
    }
    -out[0] / out[1]
}

fn apply(b: &k3mirror::lattice::MoebiusTransform, z: Complex64) -> Complex64 {
    let c = |q: &Rational| q.to_f64().unwrap();
    (c(&b.a) * z + c(&b.b)) / (c(&b.c) * z + c(&b.d))
}

#[test]
fn moebius_actions_agree_with_floating_point() {
    let q = paper_monodromy_matrices();
    let pts = [Complex64::new(0.3, 0.7), Complex64::new(-1.2, 0.25), Complex64::new(2.0, 3.0)];
    for ((name, m), beta) in q.labelled().into_iter().zip(printed_betas()) {
        let derived = mobius_from_monodromy(m, &q.g).unwrap();
        assert_eq!(derived, beta, "{name}");
        for z in pts {
            let d = action(m, z) - apply(&beta, z);
            assert!(d.norm() < 1e-12, "{name} at {z}: {d}");
        }
    }
}

#[test]
fn fixed_points_are_fixed() {
    for beta in &printed_betas()[..4] {
        let FixedPoints::Quadratic { roots, .. } = beta.fixed_points() else { panic!("{beta:?}") };
        let (x, y) = roots.upper_root_f64();
        let z = Complex64::new(x, y);
        assert!((apply(beta, z) - z).norm() < 1e-12, "{beta:?}");
        assert!(y > 0.0);
    }
}

#[test]
fn elementary_divisors_of_known_lattices() {
    // product of invariant factors is |det|
    let g = k3_lattice().gram;
    let s = smith_normal_form(&g);
    assert!(s.invariant_factors().iter().all(|d| *d == 1.into()));
    let sum = induced_sum();
    let f = smith_normal_form(&sum.matrix).invariant_factors();
    let prod: num_bigint::BigInt = f.iter().product();
    assert_eq!(prod, sum.matrix.det().magnitude().clone().into());
    assert_eq!(IntegerLattice::rank_one(-4).discriminant_factors(), vec![4.into()]);
}
