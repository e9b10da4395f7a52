//! The Schwarz triangle map of `theta^2 - z (theta + 1/8)(theta + 3/8)`.
//!
//! With the Frobenius pair `f0 = 2F1(1/8, 3/8; 1; z)` and
//! `f1 = log(z) f0 + ...`, the ratio
//! `D(z) = (f1 / f0 - 8 log 2) / (2 pi i)` equals the period ratio in `z`,
//! since `f0^2` and `f0 f1` are the first two Frobenius solutions of the
//! third-order operator. On the upper half plane `D` is a Schwarz triangle
//! map with vertices `D(0) = i inf`, `D(1) = i / sqrt 2`,
//! `D(inf) = (1 + i) / 2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ball::{Ball, CBall};
use super::continuation::{CRational, NumericOperator, PathPolyline};
use super::elementary::{exp, ln2, log, pi};
use super::eval::hypergeometric_jet;
use super::frobenius::{frobenius_basis_at_zero, frobenius_jets, terms_for};
use super::matrix::CMatrix;
use super::ns::i_over_sqrt2;
use super::FlowError;
use crate::diffop::{f21_operator, z_var};
use crate::exact::{int, rat, Rational};

/// Hypergeometric parameters `(a, b, c)`.
pub fn parameters() -> (Rational, Rational, Rational) {
    (rat(1, 8), rat(3, 8), int(1))
}

/// Angle parameters `(|1 - c|, |c - a - b|, |a - b|)` at `0, 1, inf`;
/// the interior angles are `pi` times these.
pub fn angle_parameters() -> [Rational; 3] {
    let (a, b, c) = parameters();
    let abs = |q: Rational| if q < int(0) { -q } else { q };
    [abs(int(1) - &c), abs(&c - &a - &b), abs(&a - &b)]
}

fn operator() -> NumericOperator {
    NumericOperator::new(&f21_operator(z_var())).expect("polynomial coefficients")
}

fn base() -> Rational {
    rat(1, 4)
}

/// Jets `(value, derivative)` of `(f0, f1)` at `1/4`, as columns.
fn base_jets(prec: u32) -> Result<CMatrix, FlowError> {
    let (a, b, _) = parameters();
    let basis = frobenius_basis_at_zero(&[a, b], z_var(), terms_for(0.25, prec))?;
    Ok(frobenius_jets(&basis, &base(), 2, prec + 32))
}

/// Path from the base to a point `x` of the real axis, approaching from
/// the upper half plane when `x` is outside `(0, 1)`.
pub fn path_to(x: &CRational) -> PathPolyline {
    let b = CRational::real(base());
    let zero = Rational::from_integer(0.into());
    let inside = x.im == zero && x.re > zero && x.re < int(1);
    if inside {
        return PathPolyline::new(vec![b, x.clone()]);
    }
    let lift = rat(1, 2);
    let up_at = |re: Rational| CRational::new(re, lift.clone());
    let mut v = vec![b, CRational::real(rat(1, 2)), up_at(rat(1, 2))];
    let above_x = up_at(x.re.clone());
    if above_x != v[2] {
        v.push(above_x.clone());
    }
    if above_x != *x {
        v.push(x.clone());
    }
    PathPolyline::new(v)
}

fn ratio_from_values(f0: &CBall, f1: &CBall, prec: u32) -> CBall {
    let wp = prec + 32;
    let ln256 = CBall::from_real(ln2(wp).mul_int(8));
    let two_pi_i = CBall::new(Ball::zero(wp), pi(wp).mul_int(2));
    &(&(f1 / f0) - &ln256) / &two_pi_i
}

/// `D(x)` at a point of the closed upper half plane other than `0, 1`,
/// reached along [`path_to`].
pub fn d_value(x: &CRational, prec: u32) -> Result<CBall, FlowError> {
    d_value_with(&operator(), &base_jets(prec)?, x, prec)
}

fn d_value_with(op: &NumericOperator, jets: &CMatrix, x: &CRational, prec: u32) -> Result<CBall, FlowError> {
    let end = op.transport(&path_to(x), prec)?.mul(jets);
    Ok(ratio_from_values(end.get(0, 0), end.get(0, 1), prec))
}

/// Solve `F = V C` for the connection matrix `C`, where the columns of `V`
/// are jets of a local basis at the same point.
fn connect(v: &CMatrix, f: &CMatrix) -> Result<CMatrix, FlowError> {
    let inv = v.inverse().ok_or_else(|| FlowError::Domain("local basis is singular".into()))?;
    Ok(inv.mul(f))
}

/// `D(1)`: connect to the basis `2F1(a, b; 1/2; 1-z)`,
/// `(1-z)^(1/2) 2F1(1-a, 1-b; 3/2; 1-z)` at `z = 1/2`. The second member
/// vanishes at `1`, so `f_j(1)` is the coefficient of the first.
pub fn vertex_at_one(prec: u32) -> Result<CBall, FlowError> {
    let wp = prec + 32;
    let (a, b, c) = parameters();
    let x = rat(1, 2);
    let f = base_jets(prec)?;
    let path = PathPolyline::new(vec![CRational::real(base()), CRational::real(x.clone())]);
    let fx = operator().transport(&path, prec)?.mul(&f);
    let w = CBall::from_rationals(&(int(1) - &x), &int(0), wp);
    let g1 = hypergeometric_jet(&[a.clone(), b.clone()], &[&a + &b - &c + int(1)], &w, 2, wp)?;
    let g2 = hypergeometric_jet(&[&c - &a, &c - &b], &[&c - &a - &b + int(1)], &w, 2, wp)?;
    // s = (1 - z)^(1/2) and d/dz = -d/dw
    let s = Ball::from_rational(&(int(1) - &x), wp).sqrt();
    let ds = -(&s.recip().mul_pow2(-1));
    let v = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => g1[0].clone(),
        (1, 0) => -g1[1].clone(),
        (0, 1) => g2[0].scale(&s),
        _ => &g2[0].scale(&ds) - &g2[1].scale(&s),
    });
    let cm = connect(&v, &fx)?;
    Ok(ratio_from_values(cm.get(0, 0), cm.get(0, 1), prec))
}

/// `D(inf)`: connect at `z = 2`, reached through the upper half plane, to
/// `z^-a 2F1(a, a-c+1; a-b+1; 1/z)` and `z^-b 2F1(b, b-c+1; b-a+1; 1/z)`.
/// The first dominates as `z -> inf` since `a < b`.
pub fn vertex_at_infinity(prec: u32) -> Result<CBall, FlowError> {
    let wp = prec + 32;
    let (a, b, c) = parameters();
    let x = int(2);
    let fx = operator().transport(&path_to(&CRational::real(x.clone())), prec)?.mul(&base_jets(prec)?);
    let w = CBall::from_rationals(&x.recip(), &int(0), wp);
    let lx = log(&Ball::from_rational(&x, wp));
    let xinv = Ball::from_rational(&x.recip(), wp);
    // jet of z^-e G(1/z): (z^-e G, -e z^-e G / z - z^-e G' / z^2)
    let column = |e: &Rational, g: &[CBall]| -> [CBall; 2] {
        let pw = exp(&lx.mul_rational(&-e.clone()));
        let v0 = g[0].scale(&pw);
        let d = &v0.scale(&xinv.mul_rational(&-e.clone())) - &g[1].scale(&(&pw * &xinv.square()));
        [v0, d]
    };
    let g1 = hypergeometric_jet(&[a.clone(), &a - &c + int(1)], &[&a - &b + int(1)], &w, 2, wp)?;
    let g2 = hypergeometric_jet(&[b.clone(), &b - &c + int(1)], &[&b - &a + int(1)], &w, 2, wp)?;
    let c1 = column(&a, &g1);
    let c2 = column(&b, &g2);
    let v = CMatrix::from_fn(2, 2, |i, j| if j == 0 { c1[i].clone() } else { c2[i].clone() });
    let cm = connect(&v, &fx)?;
    Ok(ratio_from_values(cm.get(0, 0), cm.get(0, 1), prec))
}

/// `(1 + i) / 2`.
pub fn expected_vertex_at_infinity(prec: u32) -> CBall {
    let h = Ball::from_rational(&rat(1, 2), prec);
    CBall::new(h.clone(), h)
}

/// Cusp at `0`: `Im D(x)` at `x = 2^-k` for the given `k`, with the
/// leading asymptotic `(8 log 2 - log x) / (2 pi)` for comparison.
pub fn cusp_profile(ks: &[u32], prec: u32) -> Result<Vec<(u32, CBall, Ball)>, FlowError> {
    let op = operator();
    let jets = base_jets(prec)?;
    ks.par_iter()
        .map(|&k| {
            let x = Rational::new(1.into(), num_bigint::BigInt::from(1) << k);
            let d = d_value_with(&op, &jets, &CRational::real(x), prec)?;
            let asym = &ln2(prec).mul_int(8 + k as i64) / &pi(prec).mul_int(2);
            Ok((k, d, asym))
        })
        .collect()
}

/// Which edge of the triangle a boundary point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Edge {
    /// `(0, 1)`, mapped to the imaginary axis above `i / sqrt 2`
    ZeroOne,
    /// `(1, inf)`, mapped to the arc `|D| = 1 / sqrt 2`
    OneInfinity,
    /// `(-inf, 0)`, mapped to the line `Re D = 1/2`
    InfinityZero,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangleSample {
    pub edge: Edge,
    /// boundary point `x` on the real axis
    pub parameter: f64,
    pub re: f64,
    pub im: f64,
    pub radius: f64,
    /// the ball is wider than the requested tolerance
    pub flagged: bool,
}

/// Boundary points: a third of the samples on each edge, avoiding the
/// vertices. Outer edges use `x = 1 + s/(1-s)` and `x = -s/(1-s)`.
pub fn boundary_points(samples: usize) -> Vec<(Edge, Rational)> {
    let per = samples.div_ceil(3).max(1);
    let mut out = Vec::new();
    for e in [Edge::ZeroOne, Edge::OneInfinity, Edge::InfinityZero] {
        for k in 1..=per {
            let s = rat(k as i64, per as i64 + 1);
            let x = match e {
                Edge::ZeroOne => s,
                Edge::OneInfinity => int(1) + &s / (int(1) - &s),
                Edge::InfinityZero => -(&s / (int(1) - &s)),
            };
            out.push((e, x));
        }
    }
    out.truncate(samples);
    out
}

/// Images of boundary points of the upper half plane.
pub fn triangle_sample(samples: usize, prec: u32, tol: f64) -> Result<Vec<TriangleSample>, FlowError> {
    if samples < 3 {
        return Err(FlowError::Domain("at least three samples are needed".into()));
    }
    let op = operator();
    let jets = base_jets(prec)?;
    boundary_points(samples)
        .par_iter()
        .map(|(edge, x)| {
            let d = d_value_with(&op, &jets, &CRational::real(x.clone()), prec)?;
            let (re, im) = d.mid_f64();
            Ok(TriangleSample {
                edge: *edge,
                parameter: num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN),
                re,
                im,
                radius: d.rad(),
                flagged: d.rad() > tol,
            })
        })
        .collect()
}

/// Largest deviation of the samples from their edge's geodesic.
pub fn edge_deviation(samples: &[TriangleSample]) -> f64 {
    samples
        .iter()
        .map(|s| match s.edge {
            Edge::ZeroOne => s.re.abs(),
            Edge::OneInfinity => (s.re * s.re + s.im * s.im - 0.5).abs(),
            Edge::InfinityZero => (s.re - 0.5).abs(),
        })
        .fold(0.0, f64::max)
}

/// CSV with columns `parameter, re, im, ball-radius`.
pub fn write_csv<W: std::io::Write>(samples: &[TriangleSample], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["parameter", "re", "im", "ball-radius"])?;
    for s in samples {
        w.write_record([
            format!("{:e}", s.parameter),
            format!("{:e}", s.re),
            format!("{:e}", s.im),
            format!("{:e}", s.radius),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangleReport {
    pub angle_parameters: [String; 3],
    pub vertex_one: super::matrix::BallSummary,
    pub vertex_one_error: f64,
    pub vertex_infinity: super::matrix::BallSummary,
    pub vertex_infinity_error: f64,
    /// `(k, Im D(2^-k))` for growing `k`
    pub cusp_im: Vec<(u32, f64)>,
    pub cusp_grows: bool,
    pub edge_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Vertex limits, cusp growth, angle parameters and edge geometry.
pub fn triangle_report(samples: &[TriangleSample], prec: u32, tol: f64) -> Result<TriangleReport, FlowError> {
    let (v1, vinf) = rayon::join(|| vertex_at_one(prec), || vertex_at_infinity(prec));
    let (v1, vinf) = (v1?, vinf?);
    let e1 = (&v1 - &i_over_sqrt2(prec)).abs_upper();
    let einf = (&vinf - &expected_vertex_at_infinity(prec)).abs_upper();
    let cusp = cusp_profile(&[4, 8, 12, 16, 20, 24], prec)?;
    let cusp_im: Vec<(u32, f64)> = cusp.iter().map(|(k, d, _)| (*k, d.mid_f64().1)).collect();
    let cusp_grows = cusp.windows(2).all(|w| w[1].1.im.abs_lower() > w[0].1.im.abs_upper())
        && cusp.iter().all(|(_, d, asym)| (&d.im - asym).abs_upper() < 1.0);
    let dev = edge_deviation(samples);
    let angles = angle_parameters();
    let angles_ok = angles == [int(0), rat(1, 2), rat(1, 4)];
    Ok(TriangleReport {
        angle_parameters: angles.map(|q| q.to_string()),
        vertex_one: super::matrix::BallSummary::of(&v1, 20),
        vertex_one_error: e1,
        vertex_infinity: super::matrix::BallSummary::of(&vinf, 20),
        vertex_infinity_error: einf,
        cusp_im,
        cusp_grows,
        edge_deviation: dev,
        tolerance: tol,
        passed: angles_ok && e1 < tol && einf < tol && cusp_grows && dev < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::continuation::cq;

    #[test]
    fn angles() {
        assert_eq!(angle_parameters(), [int(0), rat(1, 2), rat(1, 4)]);
    }

    #[test]
    fn vertices() {
        let v1 = vertex_at_one(96).unwrap();
        assert!(v1.within(&i_over_sqrt2(96), 1e-20), "{v1}");
        let vi = vertex_at_infinity(96).unwrap();
        assert!(vi.within(&expected_vertex_at_infinity(96), 1e-20), "{vi}");
    }

    #[test]
    fn edges_are_geodesics() {
        let s = triangle_sample(9, 64, 1e-10).unwrap();
        assert!(edge_deviation(&s) < 1e-12, "{s:?}");
    }

    #[test]
    fn path_reaches_negative_axis_from_above() {
        let p = path_to(&cq((-3, 1), (0, 1)));
        assert!(p.vertices.iter().all(|v| v.im >= int(0)));
        assert_eq!(p.end(), &cq((-3, 1), (0, 1)));
    }
}
