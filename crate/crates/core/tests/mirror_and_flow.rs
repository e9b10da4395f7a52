use k3mirror::exact::rat;
use k3mirror::flow::continuation::cq;
use k3mirror::flow::monodromy::{charpoly_matches, compose, z_monodromy, z_word_path, Ordering, ZLoop};
use k3mirror::lattice::quartic::paper_monodromy_matrices;
use k3mirror::mirror::{period_vector_22, tilde_exp, tilde_exp_inverse};
use num_complex::Complex64;
use num_traits::ToPrimitive;

#[test]
fn period_vector_matches_floating_point_formula() {
    for (re, im) in [((1, 3), (1, 2)), ((-7, 5), (9, 4)), ((0, 1), (1, 1))] {
        let p = cq(re, im);
        let v = period_vector_22(&p).unwrap();
        let pf = Complex64::new(rat(re.0, re.1).to_f64().unwrap(), rat(im.0, im.1).to_f64().unwrap());
        let expect = [4.0 * pf, 2.0 * pf * pf, Complex64::new(-1.0, 0.0), pf];
        for (k, e) in expect.iter().enumerate() {
            assert!((v[k].to_c64() - e).norm() < 1e-12, "entry {k}");
        }
        assert!(v[4..].iter().all(|c| c.is_zero()));
        assert_eq!(tilde_exp_inverse(&tilde_exp(&p).unwrap()).unwrap(), p);
    }
}

#[test]
fn loop_at_one_has_the_lattice_charpoly() {
    let m = z_monodromy(&ZLoop::One.path(), 128).unwrap();
    let q = paper_monodromy_matrices();
    let exact: Vec<i64> = q.m[0].charpoly().iter().map(|c| c.to_integer().to_i64().unwrap()).collect();
    assert_eq!(exact, vec![1, -1, -1, 1]);
    assert!(charpoly_matches(&m.charpoly(), &exact, 1e-25));
}

#[test]
fn composite_loop_is_later_on_left() {
    let prec = 128;
    let m0 = z_monodromy(&ZLoop::Zero.path(), prec).unwrap();
    let m1 = z_monodromy(&ZLoop::One.path(), prec).unwrap();
    let m01 = z_monodromy(&z_word_path("01").unwrap(), prec).unwrap();
    assert!(compose(&[m0.clone(), m1.clone()], Ordering::LaterOnLeft).within(&m01, 1e-22));
    assert!(!compose(&[m0, m1], Ordering::LaterOnRight).within(&m01, 1e-3));
}
