//! The closed form of the period ratio near `t = 1` and its cross-check
//! against continuation of the Frobenius basis.
//!
//! With `u = 1 - t^4` and `k = cot(pi/8) = 1 + sqrt 2`,
//!
//! ```text
//! P = (i / sqrt 2) (U1 + k U2) / (U1 - k U2)
//! U1 = Gamma(1/8)^2 / Gamma(1/2) 2F1(a, b; 1/2; u)
//! U2 = s Gamma(5/8)^2 / Gamma(3/2) (t^4 - 1)^(1/2) 2F1(5/8, 5/8; 3/2; u)
//! ```
//!
//! The Kummer connection of `2F1(1/8, 3/8; 1; z)` at `z = 1`, whose square
//! is the holomorphic period, fixes `(a, b) = (1/8, 1/8)`; the variant with
//! `(a, b) = (1/8, 3/8)` is kept to show that it disagrees with the ODE.
//! The sign `s` of the square root is calibrated against the ODE at one
//! point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ball::{Ball, CBall};
use super::continuation::{CRational, PathPolyline, Side};
use super::elementary::{csqrt, gamma, ln2, pi};
use super::eval::hypergeometric_jet;
use super::matrix::{BallSummary, CMatrix};
use super::monodromy::{frobenius_fundamental, z_base, z_plane_operator};
use super::FlowError;
use crate::exact::{int, rat, Rational};

/// Which hypergeometric parameters enter `U1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NsVariant {
    /// `2F1(1/8, 3/8; 1/2; u)`
    Printed,
    /// `2F1(1/8, 1/8; 1/2; u)`
    Corrected,
}

impl NsVariant {
    fn u1_params(self) -> [Rational; 2] {
        match self {
            NsVariant::Printed => [rat(1, 8), rat(3, 8)],
            NsVariant::Corrected => [rat(1, 8), rat(1, 8)],
        }
    }
}

/// Default sample points in `(1, 1.2)`.
pub fn sample_points() -> Vec<Rational> {
    [102, 105, 108, 111, 114].iter().map(|&n| rat(n, 100)).collect()
}

fn t4(t: &CRational) -> CRational {
    let t2 = t.mul(t);
    t2.mul(&t2)
}

/// `i / sqrt 2`.
pub fn i_over_sqrt2(prec: u32) -> CBall {
    let s = Ball::from_int(2, prec).sqrt().recip();
    CBall::new(Ball::zero(prec), s)
}

/// `U1` and `U2` (with sign `s = +1`) at `t`.
pub fn ns_u(t: &CRational, variant: NsVariant, prec: u32) -> Result<(CBall, CBall), FlowError> {
    let wp = prec + 32;
    let q = t4(t);
    let u = CRational::one().sub(&q);
    let ub = u.to_cball(wp);
    if ub.abs_upper() >= 1.0 {
        return Err(FlowError::Domain(format!("|1 - t^4| = {:.4} is not below 1", ub.abs_lower())));
    }
    let qm1 = q.sub(&CRational::one());
    let root = if qm1.is_zero() { CBall::zero(wp) } else { csqrt(&qm1.to_cball(wp)) };
    if !root.is_finite() {
        return Err(FlowError::Domain("t^4 - 1 meets the branch cut of the square root".into()));
    }
    let g18 = gamma(&rat(1, 8), wp);
    let g58 = gamma(&rat(5, 8), wp);
    let g12 = gamma(&rat(1, 2), wp);
    let g32 = g12.mul_pow2(-1);
    let f1 = &hypergeometric_jet(&variant.u1_params(), &[rat(1, 2)], &ub, 1, wp)?[0];
    let f2 = &hypergeometric_jet(&[rat(5, 8), rat(5, 8)], &[rat(3, 2)], &ub, 1, wp)?[0];
    let u1 = f1.scale(&(&g18.square() / &g12));
    let u2 = (f2 * &root).scale(&(&g58.square() / &g32));
    Ok((u1, u2))
}

/// `P(t)` from the closed form with square-root sign `sign`.
pub fn ns_closed_form(t: &CRational, variant: NsVariant, sign: i64, prec: u32) -> Result<CBall, FlowError> {
    let wp = prec + 32;
    let (u1, u2) = ns_u(t, variant, prec)?;
    let k = &Ball::from_int(2, wp).sqrt() + &Ball::from_int(1, wp);
    let ku2 = u2.scale(&k).mul_int(sign);
    let den = &u1 - &ku2;
    if den.contains_zero() {
        return Err(FlowError::Precision { radius: den.rad(), tolerance: den.abs_upper() });
    }
    let p = &i_over_sqrt2(wp) * &(&(&u1 + &ku2) / &den);
    Ok(CBall::new(p.re.with_prec(prec), p.im.with_prec(prec)))
}

/// Jets of the Frobenius basis at `z`, reached from `1/4` along the real
/// axis; `z` must lie in `(0, 1)`.
fn frobenius_at(z: &Rational, prec: u32) -> Result<CMatrix, FlowError> {
    if *z <= int(0) || *z >= int(1) {
        return Err(FlowError::Domain("the real path from 1/4 must stay inside (0, 1)".into()));
    }
    let f = frobenius_fundamental(prec)?;
    let path = PathPolyline::new(vec![CRational::real(z_base()), CRational::real(z.clone())]);
    Ok(z_plane_operator().transport(&path, prec)?.mul(&f.entries))
}

/// `(f1 - ln 256 f0) / (2 pi i f0)` from the values in row 0 of `jets`.
fn period_ratio(jets: &CMatrix, prec: u32) -> CBall {
    let f0 = jets.get(0, 0);
    let f1 = jets.get(0, 1);
    let ln256 = CBall::from_real(ln2(prec + 32).mul_int(8));
    let w2 = f1 - &(&ln256 * f0);
    let two_pi_i = CBall::new(Ball::zero(prec + 32), pi(prec + 32).mul_int(2));
    &w2 / &(&two_pi_i * f0)
}

/// `P(t) = W2 / (2 pi i W1)` at `z = t^-4` for real rational `t > 1`, by
/// transporting the Frobenius basis from `z = 1/4`.
pub fn ns_ode_value(t: &Rational, prec: u32) -> Result<CBall, FlowError> {
    if *t <= int(1) {
        return Err(FlowError::Domain("the ODE value is taken at real t > 1".into()));
    }
    let z = t.pow(-4);
    Ok(period_ratio(&frobenius_at(&z, prec)?, prec))
}

/// ODE value of `P` after once around `z = 1` (the image of a loop around
/// `t = 1`), starting and ending at `z = t^-4`.
pub fn ns_ode_after_loop(t: &Rational, prec: u32) -> Result<CBall, FlowError> {
    let z = t.pow(-4);
    let jets = frobenius_at(&z, prec)?;
    let half = int(1) - &z;
    let here = CRational::real(z.clone());
    let lp = PathPolyline::square_loop(&here, &CRational::one(), &half, Side::Left);
    let after = z_plane_operator().transport(&lp, prec)?.mul(&jets);
    Ok(period_ratio(&after, prec))
}

/// The sign of the square root for which the closed form matches the ODE
/// at `t`, if exactly one does.
pub fn calibrate_sign(t: &Rational, variant: NsVariant, prec: u32, tol: f64) -> Result<Option<i64>, FlowError> {
    let ode = ns_ode_value(t, prec)?;
    let tc = CRational::real(t.clone());
    let ok: Vec<i64> = [1, -1]
        .into_iter()
        .filter(|&s| ns_closed_form(&tc, variant, s, prec).map(|p| p.within(&ode, tol)).unwrap_or(false))
        .collect();
    Ok(if ok.len() == 1 { Some(ok[0]) } else { None })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NsPoint {
    pub t: String,
    pub closed: BallSummary,
    pub ode: BallSummary,
    /// upper bound of `|closed - ode|`
    pub difference: f64,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NsReport {
    pub variant: NsVariant,
    pub calibration_point: String,
    /// `None` when neither or both signs match at the calibration point
    pub sign: Option<i64>,
    pub points: Vec<NsPoint>,
    /// `|P(1) - i/sqrt 2|` upper bound
    pub value_at_one_error: f64,
    /// worst `|P_after_loop + 1/(2P)|` over the monodromy sample points
    pub monodromy_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Full cross-check at `points` for one variant. The sign is calibrated at
/// the first point; the other points are independent confirmations.
pub fn ns_consistency(variant: NsVariant, points: &[Rational], prec: u32, tol: f64) -> Result<NsReport, FlowError> {
    let cal = points.first().ok_or_else(|| FlowError::Domain("no sample points".into()))?;
    let sign = calibrate_sign(cal, variant, prec, tol)?;
    let s = sign.unwrap_or(1);
    let odes: Vec<CBall> = points.par_iter().map(|t| ns_ode_value(t, prec)).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for (t, ode) in points.iter().zip(&odes) {
        let closed = ns_closed_form(&CRational::real(t.clone()), variant, s, prec)?;
        let difference = (&closed - ode).abs_upper();
        out.push(NsPoint {
            t: t.to_string(),
            closed: BallSummary::of(&closed, 30),
            ode: BallSummary::of(ode, 30),
            difference,
            agrees: difference < tol,
        });
    }
    let at_one = ns_closed_form(&CRational::one(), variant, s, prec)?;
    let value_at_one_error = (&at_one - &i_over_sqrt2(prec)).abs_upper();
    // P continued around t = 1 is -1/(2P)
    let mono_pts = [&points[0], points.last().expect("nonempty")];
    let monodromy_error = mono_pts
        .par_iter()
        .map(|t| -> Result<f64, FlowError> {
            let p = ns_closed_form(&CRational::real((*t).clone()), variant, s, prec)?;
            let after = ns_ode_after_loop(t, prec)?;
            let expect = -(&p.mul_int(2)).recip();
            Ok((&after - &expect).abs_upper())
        })
        .collect::<Result<Vec<f64>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let passed = sign.is_some()
        && out.iter().all(|p| p.agrees)
        && value_at_one_error < tol
        && monodromy_error < tol;
    Ok(NsReport {
        variant,
        calibration_point: cal.to_string(),
        sign,
        points: out,
        value_at_one_error,
        monodromy_error,
        tolerance: tol,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_one() {
        let p = ns_closed_form(&CRational::one(), NsVariant::Corrected, 1, 96).unwrap();
        assert!(p.within(&i_over_sqrt2(96), 1e-25));
    }

    #[test]
    fn closed_form_matches_reference_values() {
        // P(1.05) computed independently to 21 digits
        let p = ns_closed_form(&CRational::real(rat(105, 100)), NsVariant::Corrected, 1, 128).unwrap();
        let expect = CBall::new(
            Ball::zero(128),
            Ball::from_rational(&"826149705597703880409/1000000000000000000000".parse().unwrap(), 128),
        );
        assert!(p.within(&expect, 1e-20), "{p}");
    }

    #[test]
    fn ode_value_matches_reference_values() {
        let p = ns_ode_value(&rat(102, 100), 128).unwrap();
        let expect = CBall::new(
            Ball::zero(128),
            Ball::from_rational(&"780518898653765200629851/1000000000000000000000000".parse().unwrap(), 128),
        );
        assert!(p.within(&expect, 1e-22), "{p}");
    }

    #[test]
    fn outside_the_disc_is_rejected() {
        assert!(ns_closed_form(&CRational::real(rat(3, 2)), NsVariant::Corrected, 1, 64).is_err());
    }
}
