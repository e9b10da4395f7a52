//! Differential operators with rational-function coefficients and the
//! specific operators of the quartic family.

mod griffiths_dwork;
mod mpoly;
mod op;

pub use griffiths_dwork::{griffiths_dwork_verify, GdReductionCertificate};
pub use mpoly::{Monomial, MPoly};
pub use op::{DiffOp, Form};

use serde::{Deserialize, Serialize};

use crate::exact::{int, rat, ExactError, Poly, Rational, RationalFunction, Result, Var};

pub fn t_var() -> Var {
    Var::new("t")
}

pub fn z_var() -> Var {
    Var::new("z")
}

/// `d_t^3 - (6 t^3 d_t^2 + 7 t^2 d_t + t) / (1 - t^4)`.
pub fn build_pf_operator() -> DiffOp {
    let t = t_var();
    let den = Poly::from_ints(t.clone(), &[1, 0, 0, 0, -1]);
    let c = |num: &[i64]| {
        RationalFunction::new(Poly::from_ints(t.clone(), num), den.clone())
            .expect("nonzero denominator")
            .neg()
    };
    DiffOp::new(
        t.clone(),
        Form::Partial,
        vec![c(&[0, 1]), c(&[0, 0, 7]), c(&[0, 0, 0, 6]), RationalFunction::one(t.clone())],
    )
    .expect("same variable")
}

/// `theta^3 - x (theta + 1/4)(theta + 2/4)(theta + 3/4)`.
pub fn f32_operator(var: Var) -> DiffOp {
    DiffOp::hypergeometric(&[rat(1, 4), rat(1, 2), rat(3, 4)], &[int(1), int(1)], var)
}

/// `theta^2 - x (theta + 1/8)(theta + 3/8)`.
pub fn f21_operator(var: Var) -> DiffOp {
    DiffOp::hypergeometric(&[rat(1, 8), rat(3, 8)], &[int(1)], var)
}

/// The substitution `z = t^-4` as a rational function of `t`.
pub fn z_of_t() -> RationalFunction {
    RationalFunction::x(t_var()).pow(-4).expect("t is nonzero")
}

/// Pull back along `z = t^-4`.
pub fn pullback_t4(op: &DiffOp) -> Result<DiffOp> {
    op.pullback(&z_of_t())
}

/// Unique monic third-order operator killing all products of solutions of
/// a second-order operator. For `y'' + p y' + q y` it is
/// `d^3 + 3p d^2 + (2p^2 + p' + 4q) d + (4pq + 2q')`.
pub fn symmetric_square(op: &DiffOp) -> Result<DiffOp> {
    if op.order() != Some(2) {
        return Err(ExactError::Domain(format!(
            "symmetric square needs an operator of order 2, got {:?}",
            op.order()
        )));
    }
    let m = op.monic()?;
    let p = m.coeff(1);
    let q = m.coeff(0);
    let v = op.var().clone();
    let c2 = p.scale(&int(3));
    let c1 = p.mul(&p)?.scale(&int(2)).add(&p.derivative())?.add(&q.scale(&int(4)))?;
    let c0 = p.mul(&q)?.scale(&int(4)).add(&q.derivative().scale(&int(2)))?;
    DiffOp::new(v.clone(), Form::Partial, vec![c0, c1, c2, RationalFunction::one(v)])
        .map(|d| d.to_form(op.form()))
}

/// Outcome of one operator identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    /// Difference of the two sides, printed (`"0"` when it holds).
    pub residual: String,
}

fn identity(name: &str, lhs: &DiffOp, rhs: &DiffOp) -> Result<IdentityCheck> {
    let diff = lhs.sub(rhs)?.to_partial();
    Ok(IdentityCheck { name: name.to_string(), holds: diff.is_zero(), residual: diff.to_string() })
}

/// `64 z^* F32 = (1 - t^4) D t`, with `D` the Picard-Fuchs operator and
/// `t` acting by multiplication on the right.
pub fn pullback_identity_as_printed() -> Result<IdentityCheck> {
    pullback_identity_with_twist(1)
}

/// `64 z^* F32 = (1 - t^4) D t^-1`, the form that holds exactly: a
/// function `W(z)` is killed by the hypergeometric operator iff
/// `t^-1 W(t^-4)` is killed by `D`.
pub fn pullback_identity_corrected() -> Result<IdentityCheck> {
    pullback_identity_with_twist(-1)
}

fn pullback_identity_with_twist(e: i32) -> Result<IdentityCheck> {
    let t = t_var();
    let lhs = pullback_t4(&f32_operator(z_var()))?.scale(&int(64));
    let rhs = build_pf_operator()
        .right_multiply_by_function(&RationalFunction::x(t.clone()).pow(e)?)?
        .left_multiply(&RationalFunction::from_poly(Poly::from_ints(t, &[1, 0, 0, 0, -1])))?;
    let name = if e == 1 { "64 z*F32 = (1-t^4) D t" } else { "64 z*F32 = (1-t^4) D t^-1" };
    identity(name, &lhs, &rhs)
}

/// `Sym^2(F21)` agrees with `F32` up to left multiplication.
pub fn symmetric_square_identity() -> Result<IdentityCheck> {
    let sq = symmetric_square(&f21_operator(z_var()))?;
    let target = f32_operator(z_var());
    let diff = sq.monic()?.sub(&target.monic()?)?;
    Ok(IdentityCheck {
        name: "Sym^2(F21) ~ F32".into(),
        holds: diff.is_zero(),
        residual: diff.to_string(),
    })
}

/// The Picard-Fuchs operator conjugated by `t^-1` and rewritten in
/// `w = t^-4 / 256` with polynomial coefficients, ready to be applied to
/// series in `w`.
pub fn pf_operator_in_w() -> Result<DiffOp> {
    let t = t_var();
    let op = build_pf_operator()
        .right_multiply_by_function(&RationalFunction::x(t.clone()).pow(-1)?)?
        .left_multiply(&RationalFunction::from_poly(Poly::from_ints(t, &[1, 0, 0, 0, -1])))?;
    op.to_theta().descend_power(Var::new("w"), -4, &Rational::new(1.into(), 256.into()))?
        .clear_denominators()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperseries::{w1_series, w2_series};
    use crate::exact::LogSeries;

    #[test]
    fn pf_operator_coefficients() {
        let d = build_pf_operator();
        assert_eq!(d.order(), Some(3));
        assert!(d.coeff(3).is_one());
        let t = t_var();
        let expected = RationalFunction::new(
            Poly::from_ints(t.clone(), &[0, 0, 0, -6]),
            Poly::from_ints(t, &[1, 0, 0, 0, -1]),
        )
        .unwrap();
        assert_eq!(d.coeff(2), expected);
    }

    #[test]
    fn symmetric_square_examples() {
        let x = Var::new("x");
        let d2 = DiffOp::derivation(x.clone(), Form::Partial)
            .compose(&DiffOp::derivation(x.clone(), Form::Partial))
            .unwrap();
        let d3 = d2.compose(&DiffOp::derivation(x.clone(), Form::Partial)).unwrap();
        assert!(symmetric_square(&d2).unwrap().same_operator(&d3));
        let minus_one = DiffOp::function(RationalFunction::one(x.clone()), Form::Partial);
        let sq = symmetric_square(&d2.sub(&minus_one).unwrap()).unwrap();
        let expected = d3
            .sub(&DiffOp::derivation(x.clone(), Form::Partial).scale(&int(4)))
            .unwrap();
        assert!(sq.same_operator(&expected));
        assert!(symmetric_square(&d3).is_err());
    }

    #[test]
    fn operator_identities() {
        assert!(symmetric_square_identity().unwrap().holds);
        assert!(pullback_identity_corrected().unwrap().holds);
        assert!(!pullback_identity_as_printed().unwrap().holds);
    }

    #[test]
    fn hypergeometric_operator_kills_periods() {
        let w = Var::new("w");
        let op = f32_operator(z_var())
            .to_theta()
            .descend_power(w.clone(), 1, &Rational::new(1.into(), 256.into()))
            .unwrap();
        let n = 25;
        assert!(op.apply_log_series(&LogSeries::from_series(w1_series(n))).unwrap().is_zero());
        assert!(op.apply_log_series(&w2_series(n)).unwrap().is_zero());
        let pf = pf_operator_in_w().unwrap();
        assert!(pf.apply_log_series(&w2_series(n)).unwrap().is_zero());
        let bogus = w2_series(n).add(&LogSeries::from_series(crate::exact::TruncatedSeries::variable(w, n))).unwrap();
        assert!(!pf.apply_log_series(&bogus).unwrap().is_zero());
    }
}
