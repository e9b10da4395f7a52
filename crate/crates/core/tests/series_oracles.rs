use k3mirror::exact::{int, rat, Rational, Var};
use k3mirror::hyperseries::{
    clausen_check, hypergeometric_series, integrality_audit, mirror_expansion, w1_coefficients,
};
use num_bigint::BigInt;

fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

#[test]
fn w1_is_the_multinomial_series() {
    let c = w1_coefficients(30);
    for (n, cn) in c.iter().enumerate() {
        let n = n as u64;
        assert_eq!(*cn, factorial(4 * n) / factorial(n).pow(4), "n = {n}");
    }
}

#[test]
fn w1_is_3f2_in_z() {
    // (1/4)_n (1/2)_n (3/4)_n / n!^3 * 256^n = (4n)! / n!^4
    let f = hypergeometric_series(&[rat(1, 4), rat(1, 2), rat(3, 4)], &[int(1), int(1)], Var::new("z"), 25);
    for (n, w) in w1_coefficients(25).iter().enumerate() {
        let scaled = f.coeff(n) * Rational::from_integer(BigInt::from(256).pow(n as u32));
        assert_eq!(scaled, Rational::from_integer(w.clone()));
    }
}

#[test]
fn mirror_map_round_trip() {
    let m = mirror_expansion(12).unwrap();
    let id = m.q_series.compose(&m.w_of_q).unwrap();
    for (k, c) in id.coeffs().iter().enumerate() {
        assert_eq!(*c, if k == 1 { int(1) } else { int(0) }, "k = {k}");
    }
    assert_eq!(m.q_series.coeff(2), &int(104));
}

#[test]
fn integrality_through_forty() {
    let r = integrality_audit(40).unwrap();
    assert!(r.all_integral(), "{:?}", r.non_integral);
    assert_eq!(r.coefficients_checked, 82);
}

#[test]
fn clausen_low_order() {
    assert!(clausen_check(40));
}
