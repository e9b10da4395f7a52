//! Analytic continuation of solutions of linear ODEs with polynomial
//! coefficients along polygonal paths.
//!
//! Each step re-expands the solutions at the current point `x0` in the
//! scaled variable `u = (x - x0) / h`, where `h` is the (exact, complex
//! rational) step. The scaled Taylor coefficients `b_n = a_n h^n` obey a
//! linear recurrence whose coefficients are `q_k(x0 + h u)` times
//! `h^(r-k)`, so the sum at `u = 1` converges geometrically with ratio
//! `|h| / d`, `d` the distance to the nearest singular point.
//!
//! Intermediate points are rounded to a dyadic grid so the exact step data
//! stays small. Series are summed until the terms fall below the working
//! precision; the truncation error is estimated from the last terms and
//! the known ratio (a heuristic bound, not a majorant).

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ball::{pow2, up, CBall};
use super::matrix::CMatrix;
use super::FlowError;
use crate::diffop::DiffOp;
use crate::exact::{int, Poly, Rational, Var};

/// Exact complex rational, used for path vertices and step data.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CRational {
    #[serde(with = "crate::exact::serde_rational")]
    pub re: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub im: Rational,
}

impl CRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        CRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        CRational { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        CRational::real(Rational::zero())
    }

    pub fn one() -> Self {
        CRational::real(Rational::one())
    }

    pub fn add(&self, o: &Self) -> Self {
        CRational::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        CRational::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        CRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CRational::new(&self.re * c, &self.im * c)
    }

    pub fn neg(&self) -> Self {
        CRational::new(-&self.re, -&self.im)
    }

    pub fn conj(&self) -> Self {
        CRational::new(self.re.clone(), -&self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn to_cball(&self, prec: u32) -> CBall {
        CBall::from_rationals(&self.re, &self.im, prec)
    }

    /// Nearest point of the grid `2^-bits (Z + iZ)`.
    fn snap(z: Complex64, bits: i32) -> CRational {
        let s = 2f64.powi(bits);
        let q = |v: f64| Rational::new(int((v * s).round() as i64).to_integer(), int(1i64 << bits).to_integer());
        CRational::new(q(z.re), q(z.im))
    }
}

impl fmt::Debug for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {} i)", self.re, self.im)
    }
}

/// `a + b i` with rational parts given as small fractions.
pub fn cq(re: (i64, i64), im: (i64, i64)) -> CRational {
    CRational::new(Rational::new(re.0.into(), re.1.into()), Rational::new(im.0.into(), im.1.into()))
}

/// Polygonal path through exact vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathPolyline {
    pub vertices: Vec<CRational>,
}

impl PathPolyline {
    pub fn new(vertices: Vec<CRational>) -> Self {
        assert!(!vertices.is_empty(), "a path needs at least one vertex");
        PathPolyline { vertices }
    }

    pub fn start(&self) -> &CRational {
        &self.vertices[0]
    }

    pub fn end(&self) -> &CRational {
        self.vertices.last().expect("nonempty")
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    pub fn reversed(&self) -> Self {
        PathPolyline { vertices: self.vertices.iter().rev().cloned().collect() }
    }

    /// This path followed by `next`, which must start where this one ends.
    pub fn then(&self, next: &PathPolyline) -> Self {
        assert_eq!(self.end(), next.start(), "paths do not connect");
        let mut v = self.vertices.clone();
        v.extend(next.vertices.iter().skip(1).cloned());
        PathPolyline { vertices: v }
    }

    /// Same path with every segment split into `k` equal pieces.
    pub fn refined(&self, k: usize) -> Self {
        let mut v = vec![self.vertices[0].clone()];
        for w in self.vertices.windows(2) {
            let d = w[1].sub(&w[0]);
            for i in 1..=k {
                v.push(w[0].add(&d.scale(&Rational::new((i as i64).into(), (k as i64).into()))));
            }
        }
        PathPolyline { vertices: v }
    }

    /// `base -> entry`, once counterclockwise around the axis-parallel square
    /// of half-side `half` centred at `center` (starting and ending at
    /// `entry`, which must lie on the square), then back to `base`.
    pub fn square_loop(base: &CRational, center: &CRational, half: &Rational, entry: Side) -> Self {
        let h = half.clone();
        let c = center;
        let corner = |sr: i64, si: i64| c.add(&CRational::new(&h * int(sr), &h * int(si)));
        // midpoints of sides and the ccw corner sequence after each
        let (mid, corners) = match entry {
            Side::Left => (c.sub(&CRational::real(h.clone())), [(-1, -1), (1, -1), (1, 1), (-1, 1)]),
            Side::Bottom => (c.sub(&CRational::new(Rational::zero(), h.clone())), [(1, -1), (1, 1), (-1, 1), (-1, -1)]),
            Side::Right => (c.add(&CRational::real(h.clone())), [(1, 1), (-1, 1), (-1, -1), (1, -1)]),
            Side::Top => (c.add(&CRational::new(Rational::zero(), h.clone())), [(-1, 1), (-1, -1), (1, -1), (1, 1)]),
        };
        let mut v = vec![base.clone(), mid.clone()];
        v.extend(corners.iter().map(|&(a, b)| corner(a, b)));
        v.push(mid);
        v.push(base.clone());
        PathPolyline::new(v)
    }
}

/// Side of a square through which a loop enters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Bottom,
    Right,
    Top,
}

/// A Fuchsian operator prepared for numerics: polynomial coefficients in
/// partial form and the approximate singular points.
#[derive(Clone, Debug)]
pub struct NumericOperator {
    var: Var,
    coeffs: Vec<Poly>,
    singular: Vec<Complex64>,
}

/// Steps never exceed this fraction of the distance to a singular point.
pub const STEP_FRACTION: f64 = 0.5;

impl NumericOperator {
    pub fn new(op: &DiffOp) -> Result<Self, FlowError> {
        let p = op.to_partial().clear_denominators()?;
        let coeffs: Vec<Poly> = p
            .coeffs()
            .iter()
            .map(|c| {
                c.as_poly()
                    .cloned()
                    .ok_or_else(|| FlowError::Domain("coefficient is not a polynomial".into()))
            })
            .collect::<Result<_, _>>()?;
        let lead = coeffs.last().ok_or_else(|| FlowError::Domain("zero operator".into()))?;
        let singular = poly_roots(lead);
        Ok(NumericOperator { var: op.var().clone(), coeffs, singular })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn singular_points(&self) -> &[Complex64] {
        &self.singular
    }

    /// Distance from `x` to the nearest singular point (infinite if none).
    pub fn distance(&self, x: Complex64) -> f64 {
        self.singular.iter().map(|s| (x - s).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Transport matrix along one straight step `x0 -> x0 + h`: maps the jet
    /// (normalized Taylor coefficients) at `x0` to the jet at `x0 + h`.
    fn step_matrix(&self, x0: &CRational, h: &CRational, prec: u32) -> Result<CMatrix, FlowError> {
        let r = self.order();
        let wp = prec + 32;
        // q_k(x0 + h u) h^(r-k), as exact complex polynomials in u
        let scaled: Vec<Vec<CBall>> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, q)| {
                let mut acc: Vec<CRational> = Vec::new();
                // Horner in (x0 + h u)
                for c in q.coeffs().iter().rev() {
                    let mut next = vec![CRational::zero(); acc.len() + 1];
                    for (i, a) in acc.iter().enumerate() {
                        next[i] = next[i].add(&a.mul(x0));
                        next[i + 1] = next[i + 1].add(&a.mul(h));
                    }
                    next[0] = next[0].add(&CRational::real(c.clone()));
                    acc = next;
                }
                let mut hp = CRational::one();
                for _ in 0..(r - k) {
                    hp = hp.mul(h);
                }
                acc.iter().map(|a| a.mul(&hp).to_cball(wp)).collect()
            })
            .collect();
        let lead0 = scaled[r].first().cloned().unwrap_or_else(|| CBall::zero(wp));
        if lead0.contains_zero() {
            return Err(FlowError::Domain(format!("singular point at {x0:?}")));
        }
        let inv_lead = lead0.recip();
        let hb = h.to_cball(wp);
        let ratio = {
            let d = self.distance(x0.to_c64());
            h.to_c64().norm() / d
        };
        let hinv = hb.recip();
        let eps = pow2(-(wp as i64));
        let stop = pow2(-(prec as i64 + 16));
        let n_max = {
            let bits = prec as f64 + 16.0 + 3.0 * (prec as f64).log2();
            if ratio > 0.0 {
                (bits / -ratio.min(0.99).log2()).ceil() as usize + 2 * r + 8
            } else {
                // no singular point: entire solutions, the midpoint test decides
                usize::MAX
            }
        };
        let mut out = CMatrix::zeros(r, r, wp);
        for col in 0..r {
            // scaled coefficients b_n of the col-th unit jet
            let mut b: Vec<CBall> = Vec::new();
            let mut hpow = CBall::one(wp);
            for n in 0..r {
                b.push(if n == col { hpow.clone() } else { CBall::zero(wp) });
                hpow = &hpow * &hb;
            }
            let mut m = 0usize;
            loop {
                // coefficient of u^m in the equation determines b_{m+r}
                let mut acc = CBall::zero(wp);
                for (k, row) in scaled.iter().enumerate() {
                    for (j, q) in row.iter().enumerate() {
                        if k == r && j == 0 {
                            continue;
                        }
                        if j > m + k {
                            continue;
                        }
                        let idx = m + k - j;
                        let ff = falling(idx, k);
                        acc = &acc + &(q * &b[idx]).mul_int(ff);
                    }
                }
                // radii would grow geometrically through the recurrence; the
                // midpoints are accurate, and their error is accounted below
                let next = -(&acc * &inv_lead).div_int(falling(m + r, r));
                b.push(next.midpoint());
                m += 1;
                let n = b.len();
                // the scaled coefficients decay like ratio^n times a power
                // of n; rounding noise near 2^-wp never cancels, so the
                // midpoint test only allows an early exit
                if n >= n_max {
                    break;
                }
                if n > 2 * r + 8 {
                    let scale = b.iter().map(CBall::abs_upper).fold(1.0, f64::max);
                    let window = &b[n - r..];
                    if window.iter().all(|v| {
                        let (a, c) = v.mid_f64();
                        a.hypot(c) < stop * scale
                    }) {
                        break;
                    }
                }
                if n > 50_000 {
                    return Err(FlowError::Precision { radius: f64::INFINITY, tolerance: eps });
                }
            }
            let n = b.len();
            let scale = b.iter().map(CBall::abs_upper).fold(1.0, f64::max);
            let last = b[n - r..].iter().map(CBall::abs_upper).fold(eps * scale, f64::max);
            let rho = ratio.min(0.99);
            // derivative jets at u = 1, then undo the scaling by h^k
            let mut hk = CBall::one(wp);
            for k in 0..r {
                let mut s = CBall::zero(wp);
                for (i, v) in b.iter().enumerate().skip(k) {
                    s = &s + &v.mul_int(binomial(i, k));
                }
                let tail = up(16.0 * last * (n as f64 + 1.0).powi(k as i32 + 1) / (1.0 - rho));
                let val = &s.add_error(tail) * &hk;
                out.set(k, col, val);
                hk = &hk * &hinv;
            }
        }
        Ok(out)
    }

    /// Transport matrix along a polyline: jets at the start to jets at the end.
    pub fn transport(&self, path: &PathPolyline, prec: u32) -> Result<CMatrix, FlowError> {
        let r = self.order();
        let mut total = CMatrix::identity(r, prec + 32);
        for w in path.vertices.windows(2) {
            let seg = self.segment(&w[0], &w[1], prec)?;
            total = seg.mul(&total);
        }
        Ok(total)
    }

    fn segment(&self, a: &CRational, b: &CRational, prec: u32) -> Result<CMatrix, FlowError> {
        let r = self.order();
        let mut total = CMatrix::identity(r, prec + 32);
        let (af, bf) = (a.to_c64(), b.to_c64());
        let len = (bf - af).norm();
        if len == 0.0 {
            return Ok(total);
        }
        // the whole segment must keep away from singular points
        for s in &self.singular {
            let t = ((s - af) * (bf - af).conj()).re / (len * len);
            let closest = af + (bf - af) * t.clamp(0.0, 1.0);
            if (closest - s).norm() < 1e-12 * (1.0 + s.norm()) {
                return Err(FlowError::Domain(format!(
                    "segment {a:?} -> {b:?} meets the singular point {s}"
                )));
            }
        }
        let mut cur = a.clone();
        let mut guard = 0;
        while cur != *b {
            let cf = cur.to_c64();
            let d = self.distance(cf);
            let remaining = (bf - cf).norm();
            let next = if remaining <= STEP_FRACTION * d {
                b.clone()
            } else {
                let target = cf + (bf - cf) * (0.9 * STEP_FRACTION * d / remaining);
                let bits = (60.0 - target.norm().max(1.0).log2()).floor() as i32;
                CRational::snap(target, bits.clamp(8, 60))
            };
            let h = next.sub(&cur);
            let m = self.step_matrix(&cur, &h, prec)?;
            total = m.mul(&total);
            cur = next;
            guard += 1;
            if guard > 100_000 {
                return Err(FlowError::Domain("continuation does not progress".into()));
            }
        }
        Ok(total)
    }
}

fn falling(n: usize, k: usize) -> i64 {
    if n < k {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64)
}

fn binomial(n: usize, k: usize) -> i64 {
    if n < k {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// Roots of a polynomial with rational coefficients, from the companion
/// matrix and polished by Newton steps.
fn poly_roots(p: &Poly) -> Vec<Complex64> {
    let Some(deg) = p.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    // exact roots at zero first, then the deflated polynomial numerically
    let zeros = p.coeffs().iter().take_while(|a| a.is_zero()).count();
    if zeros > 0 {
        let rest = Poly::new(p.var().clone(), p.coeffs()[zeros..].to_vec());
        let mut out = vec![Complex64::new(0.0, 0.0); zeros];
        out.extend(poly_roots(&rest));
        return out;
    }
    let c: Vec<f64> = p.coeffs().iter().map(|a| a.to_f64().unwrap_or(0.0)).collect();
    let lead = c[deg];
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            dv = dv * z + v;
            v = v * z + a;
        }
        (v, dv)
    };
    comp.complex_eigenvalues()
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..20 {
                let (v, dv) = eval(z);
                if dv.norm() == 0.0 {
                    break;
                }
                z -= v / dv;
            }
            z
        })
        .collect()
}

/// Solutions as columns of jets at a point.
#[derive(Clone, Debug)]
pub struct FundamentalMatrix {
    pub entries: CMatrix,
    pub basis: BasisTag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisTag {
    FrobeniusAtZero,
    TaylorAtBase,
    NsBasis,
}

impl FundamentalMatrix {
    /// Unit jets at a regular point.
    pub fn taylor(order: usize, prec: u32) -> Self {
        FundamentalMatrix { entries: CMatrix::identity(order, prec), basis: BasisTag::TaylorAtBase }
    }

    /// The Wronskian ball excludes zero.
    pub fn is_nonsingular(&self) -> bool {
        !self.entries.det().contains_zero()
    }
}

/// Continue the solutions whose jets at the path start are the columns
/// of `initial`; returns their jets at the path end.
pub fn continue_solutions(
    op: &NumericOperator,
    path: &PathPolyline,
    initial: &FundamentalMatrix,
    prec: u32,
) -> Result<FundamentalMatrix, FlowError> {
    let t = op.transport(path, prec)?;
    Ok(FundamentalMatrix { entries: t.mul(&initial.entries), basis: initial.basis })
}

/// Monodromy along a closed path in the row convention:
/// continued `(f_1..f_r) = (f_1..f_r) M`, so `M = F^-1 T F`.
pub fn monodromy(
    op: &NumericOperator,
    path: &PathPolyline,
    basis: &FundamentalMatrix,
    prec: u32,
) -> Result<CMatrix, FlowError> {
    if !path.is_closed() {
        return Err(FlowError::Domain("monodromy needs a closed path".into()));
    }
    let t = op.transport(path, prec)?;
    let inv = basis
        .entries
        .inverse()
        .ok_or_else(|| FlowError::Domain("basis matrix is singular".into()))?;
    Ok(inv.mul(&t).mul(&basis.entries))
}

/// Ensure a ball result is tight enough, or report precision exhaustion.
pub fn require_radius(m: &CMatrix, tol: f64) -> Result<(), FlowError> {
    let r = m.max_rad();
    if r.is_finite() && r <= tol {
        Ok(())
    } else {
        Err(FlowError::Precision { radius: r, tolerance: tol })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::Form;
    use crate::exact::{rat, RationalFunction};
    use crate::flow::elementary::pi;
    use crate::flow::Ball;

    fn harmonic_oscillator() -> NumericOperator {
        let x = Var::new("x");
        let op = DiffOp::new(
            x.clone(),
            Form::Partial,
            vec![RationalFunction::one(x.clone()), RationalFunction::zero(x.clone()), RationalFunction::one(x)],
        )
        .unwrap();
        NumericOperator::new(&op).unwrap()
    }

    #[test]
    fn sine_and_cosine_along_the_real_axis() {
        // y'' + y = 0 from 0 to 355/113, close to pi
        let op = harmonic_oscillator();
        let path = PathPolyline::new(vec![CRational::zero(), CRational::real(rat(355, 113))]);
        let t = op.transport(&path, 128).unwrap();
        let x = Ball::from_rational(&rat(355, 113), 128);
        let d = &x - &pi(128);
        // sin(pi + d) = -sin d, cos(pi + d) = -cos d; column 1 is sin, column 0 cos
        let sin_d = {
            let mut s = d.clone();
            let mut term = d.clone();
            for k in 1..10 {
                term = (&(&term * &d) * &d).div_int(-((2 * k) * (2 * k + 1)));
                s = &s + &term;
            }
            s
        };
        assert!(t.get(0, 1).within(&CBall::from_real(-sin_d), 1e-30), "{:?}", t.get(0, 1));
        assert!(t.get(1, 1).re.contains_zero() == false);
        assert!(t.get(0, 0).re.is_negative());
    }

    #[test]
    fn empty_path_gives_identity() {
        let op = harmonic_oscillator();
        let path = PathPolyline::new(vec![CRational::one()]);
        assert!(op.transport(&path, 96).unwrap().within(&CMatrix::identity(2, 96), 1e-25));
    }
}
