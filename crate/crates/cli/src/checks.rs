//! The individual checks behind `run-all` and the subcommands.

use anyhow::{anyhow, bail, Context};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use k3mirror::diffop::{
    griffiths_dwork_verify, pullback_identity_as_printed, pullback_identity_corrected, symmetric_square_identity,
};
use k3mirror::exact::{int, rat, Rational};
use k3mirror::flow::matrix::{BallSummary, MatrixSummary};
use k3mirror::flow::monodromy::{self, charpoly_matches, nilpotency_index, Ordering, ZLoop};
use k3mirror::flow::ns::{ns_consistency, sample_points, NsReport, NsVariant};
use k3mirror::flow::triangle::{triangle_report, triangle_sample, TriangleReport, TriangleSample};
use k3mirror::flow::{CMatrix, CRational};
use k3mirror::hyperseries::{clausen_check, integrality_audit, mirror_expansion};
use k3mirror::lattice::quartic::{lattice_audit, paper_monodromy_matrices};
use k3mirror::mirror::{diagram_check, period_vector_report, uniqueness_structure_check};

use crate::config::Config;
use crate::report::{Status, VerificationReport};

/// `q(w)` coefficients of `w .. w^5` and the analytic `p`-series
/// coefficients of `w .. w^4`.
pub const Q_EXPECTED: [i64; 5] = [1, 104, 15188, 2585184, 480222434];

pub fn p_expected() -> [Rational; 4] {
    [int(104), int(9780), rat(4141760, 3), int(231052570)]
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(|q| q.to_string()).collect()
}

/// Exact mirror-map coefficients; with a small order only the available
/// prefix is compared.
pub fn mirror_map(order: usize) -> VerificationReport {
    VerificationReport::run("mirror-map", "q(w) = w + 104 w^2 + 15188 w^3 + ... and the period-map coefficients", || {
        let m = mirror_expansion(order)?;
        let q = m.q_series.coeffs();
        let a = m.analytic_part();
        let a = a.coeffs();
        let q_cmp = (q.len() - 1).min(Q_EXPECTED.len());
        let p_cmp = (a.len() - 1).min(4);
        let q_ok = (0..q_cmp).all(|k| q[k + 1] == int(Q_EXPECTED[k]));
        let p_ok = (0..p_cmp).all(|k| a[k + 1] == p_expected()[k]);
        let details = json!({
            "order": order,
            "q_series": strings(q),
            "w_of_q": strings(m.w_of_q.coeffs()),
            "p_analytic": strings(a),
            "q_terms_compared": q_cmp,
            "p_terms_compared": p_cmp,
        });
        Ok((Status::from_bool(q_ok && p_ok && q_cmp > 0), details))
    })
}

pub fn integrality(order: usize) -> VerificationReport {
    VerificationReport::run("integrality", "q(w) and w(q) have integral coefficients", || {
        let r = integrality_audit(order)?;
        Ok((Status::from_bool(r.all_integral()), serde_json::to_value(&r)?))
    })
}

/// Exact operator identities. The pullback relation holds with `t^-1` in
/// place of `t`, so a passing run is reported as calibrated.
pub fn operator_identities(clausen_order: usize) -> VerificationReport {
    VerificationReport::run(
        "operator-identities",
        "64 z*F32 = (1-t^4) D t^{+-1}; Sym^2 F21 ~ F32; Clausen identity",
        || {
            let printed = pullback_identity_as_printed()?;
            let corrected = pullback_identity_corrected()?;
            let sym = symmetric_square_identity()?;
            let clausen = clausen_check(clausen_order);
            let ok = corrected.holds && sym.holds && clausen;
            let status = match (ok, printed.holds) {
                (false, _) => Status::Fail,
                (true, true) => Status::Pass,
                (true, false) => Status::Calibrated,
            };
            Ok((
                status,
                json!({
                    "pullback_as_printed": printed,
                    "pullback_corrected": corrected,
                    "symmetric_square": sym,
                    "clausen_order": clausen_order,
                    "clausen": clausen,
                }),
            ))
        },
    )
}

pub fn griffiths_dwork(points: &[i64]) -> VerificationReport {
    VerificationReport::run(
        "griffiths-dwork",
        "the reduced relation has coefficients 6t^3, 7t^2, t over 1 - t^4",
        || {
            use rayon::prelude::*;
            let certs = points
                .par_iter()
                .map(|&t| griffiths_dwork_verify(&int(t)))
                .collect::<Result<Vec<_>, _>>()?;
            let ok = !certs.is_empty() && certs.iter().all(|c| c.matches_closed_form);
            Ok((Status::from_bool(ok), serde_json::to_value(&certs)?))
        },
    )
}

pub fn lattice() -> VerificationReport {
    VerificationReport::run("lattice-audit", "monodromy isometries, Moebius actions, embeddings, Nikulin", || {
        let a = lattice_audit()?;
        Ok((Status::from_bool(a.passed), serde_json::to_value(&a)?))
    })
}

/// Characteristic polynomial of an integer matrix as small integers.
fn int_charpoly(m: &k3mirror::lattice::IntMatrix) -> anyhow::Result<Vec<i64>> {
    m.charpoly()
        .iter()
        .map(|c| {
            if c.is_integer() {
                c.to_integer().to_i64().ok_or_else(|| anyhow!("coefficient too large"))
            } else {
                bail!("non-integral characteristic polynomial")
            }
        })
        .collect()
}

fn charpoly_summary(m: &CMatrix) -> Vec<BallSummary> {
    m.charpoly().iter().map(|c| BallSummary::of(c, 20)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromySummary {
    pub precision_bits: u32,
    pub tolerance: f64,
    pub zero: MatrixSummary,
    pub one: MatrixSummary,
    pub infinity: MatrixSummary,
    pub zero_nilpotency_index: Option<usize>,
    pub zero_matches_exact: bool,
    pub one_charpoly: Vec<BallSummary>,
    /// the loop around `z = 1` against the lattice matrices `M1` and `M4`
    pub one_charpoly_matches_m1: bool,
    pub one_charpoly_matches_m4: bool,
    pub infinity_charpoly_matches: bool,
    pub gamma_charpolys_match_lattice: Vec<bool>,
    pub gamma_infinity_unipotent: bool,
    pub composite_orderings: Vec<Ordering>,
    pub relation_orderings: Vec<Ordering>,
    pub lattice_relation_orderings: Vec<Ordering>,
    pub max_radius: f64,
}

pub fn monodromy_summary(prec: u32, tol: f64) -> anyhow::Result<(bool, MonodromySummary)> {
    let a = monodromy::audit(prec, tol)?;
    let q = paper_monodromy_matrices();
    let m1 = int_charpoly(&q.m[0])?;
    let m4 = int_charpoly(&q.m[3])?;
    let one_m1 = charpoly_matches(&a.one.charpoly(), &m1, tol);
    let one_m4 = charpoly_matches(&a.one.charpoly(), &m4, tol);
    let gammas: Vec<bool> = a
        .gammas
        .iter()
        .zip(&q.m)
        .map(|(g, m)| Ok(charpoly_matches(&g.charpoly(), &int_charpoly(m)?, tol)))
        .collect::<anyhow::Result<_>>()?;
    let index = nilpotency_index(&a.zero, tol);
    let s = MonodromySummary {
        precision_bits: prec,
        tolerance: tol,
        zero: a.zero.summary(20),
        one: a.one.summary(20),
        infinity: a.infinity.summary(20),
        zero_nilpotency_index: index,
        zero_matches_exact: a.zero_matches_exact,
        one_charpoly: charpoly_summary(&a.one),
        one_charpoly_matches_m1: one_m1,
        one_charpoly_matches_m4: one_m4,
        infinity_charpoly_matches: a.infinity_charpoly_matches,
        gamma_charpolys_match_lattice: gammas.clone(),
        gamma_infinity_unipotent: a.gamma_infinity_unipotent,
        composite_orderings: a.composite_orderings.clone(),
        relation_orderings: a.relation_orderings.clone(),
        lattice_relation_orderings: q.relation_orderings(),
        max_radius: a.max_radius,
    };
    let ok = a.zero_cube_vanishes
        && a.zero_square_nonzero
        && index == Some(3)
        && a.zero_matches_exact
        && one_m1
        && one_m4
        && a.infinity_charpoly_matches
        && gammas.iter().all(|&b| b)
        && a.gamma_infinity_unipotent
        && a.relation_orderings.len() == 1
        && a.max_radius <= tol;
    Ok((ok, s))
}

/// Numerical monodromy; the product relation needs a choice of ordering,
/// so a pass is reported as calibrated.
pub fn monodromy_check(prec: u32, tol: f64) -> VerificationReport {
    VerificationReport::run(
        "monodromy",
        "unipotent of index 3 at z = 0, reflections at z = 1, gamma_inf (gamma_4 .. gamma_1) = 1",
        || {
            let (ok, s) = monodromy_summary(prec, tol)?;
            Ok((if ok { Status::Calibrated } else { Status::Fail }, serde_json::to_value(&s)?))
        },
    )
}

/// Monodromy along a single loop word over `0`, `1`, `i`.
pub fn monodromy_loop(word: &str, prec: u32, tol: f64) -> VerificationReport {
    VerificationReport::run(&format!("monodromy-{word}"), "monodromy along a loop word", || {
        let path = match word {
            "zero" => ZLoop::Zero.path(),
            "one" => ZLoop::One.path(),
            "infinity" => ZLoop::Infinity.path(),
            w => monodromy::z_word_path(w)?,
        };
        let m = monodromy::z_monodromy(&path, prec)?;
        let exact = match word {
            "zero" => Some(ZLoop::Zero.exact_charpoly()),
            "one" => Some(ZLoop::One.exact_charpoly()),
            "infinity" => Some(ZLoop::Infinity.exact_charpoly()),
            _ => None,
        };
        let matches = exact.map(|e| charpoly_matches(&m.charpoly(), &e, tol));
        let details = json!({
            "loop": word,
            "matrix": m.summary(20),
            "charpoly": charpoly_summary(&m),
            "expected_charpoly": exact,
            "charpoly_matches": matches,
            "nilpotency_index": nilpotency_index(&m, tol),
            "max_radius": m.max_rad(),
        });
        let ok = matches.unwrap_or(true) && m.max_rad() <= tol;
        Ok((Status::from_bool(ok), details))
    })
}

pub fn ns_reports(points: &[Rational], prec: u32, tol: f64) -> anyhow::Result<(NsReport, NsReport)> {
    let (printed, corrected) = rayon::join(
        || ns_consistency(NsVariant::Printed, points, prec, tol),
        || ns_consistency(NsVariant::Corrected, points, prec, tol),
    );
    Ok((printed?, corrected?))
}

/// Closed form near `t = 1` against continuation of the differential
/// equation. The closed form needs `2F1(1/8, 1/8; 1/2; u)` in `U1`; a
/// pass with that correction is calibrated.
pub fn ns_check(points: &[Rational], prec: u32, tol: f64) -> VerificationReport {
    VerificationReport::run(
        "ns-consistency",
        "closed form of the period ratio near t = 1 agrees with the ODE, P(1) = i/sqrt 2",
        || {
            let (printed, corrected) = ns_reports(points, prec, tol)?;
            let status = match (corrected.passed, printed.passed) {
                (false, _) => Status::Fail,
                (true, true) => Status::Pass,
                (true, false) => Status::Calibrated,
            };
            Ok((status, json!({ "printed": printed, "corrected": corrected })))
        },
    )
}

pub fn default_ns_points() -> Vec<Rational> {
    sample_points()
}

pub fn triangle(samples: usize, prec: u32, tol: f64) -> anyhow::Result<(Vec<TriangleSample>, TriangleReport)> {
    let s = triangle_sample(samples, prec, tol)?;
    let r = triangle_report(&s, prec, tol)?;
    Ok((s, r))
}

pub fn triangle_check(samples: usize, prec: u32, tol: f64) -> VerificationReport {
    VerificationReport::run(
        "triangle",
        "D maps the upper half plane to the triangle with vertices inf, i/sqrt 2, (1+i)/2",
        || {
            let (s, r) = triangle(samples, prec, tol)?;
            let flagged = s.iter().filter(|x| x.flagged).count();
            let mut v = serde_json::to_value(&r)?;
            v["samples"] = json!(s.len());
            v["flagged_samples"] = json!(flagged);
            Ok((Status::from_bool(r.passed && flagged == 0), v))
        },
    )
}

pub fn diagram(prec: u32) -> VerificationReport {
    VerificationReport::run("diagram", "g0 carries the chart on T0 to the A-model period", || {
        let r = diagram_check(prec);
        Ok((Status::from_bool(r.passed), serde_json::to_value(&r)?))
    })
}

pub fn period_vector(p: &CRational) -> VerificationReport {
    VerificationReport::run("period-vector", "period integrals (4p, 2p^2, -1, p, 0, ..., 0)", || {
        let r = period_vector_report(p).context("period vector")?;
        Ok((Status::from_bool(r.passed), serde_json::to_value(&r)?))
    })
}

pub fn uniqueness() -> VerificationReport {
    VerificationReport::run(
        "uniqueness-structure",
        "fixed space of N_inf is spanned by e2; discriminant -2 + mu^2 forces mu = 0",
        || {
            let r = uniqueness_structure_check();
            Ok((Status::from_bool(r.passed), serde_json::to_value(&r)?))
        },
    )
}

/// The sample point used by `run-all` for the period vector.
pub fn default_p() -> CRational {
    CRational::new(rat(1, 3), rat(5, 4))
}

/// Every check, dispatched concurrently.
pub fn run_all(config: &Config) -> Vec<VerificationReport> {
    let c = config;
    let ns_points = default_ns_points();
    let jobs: Vec<Box<dyn Fn() -> VerificationReport + Send + Sync>> = vec![
        Box::new(|| mirror_map(c.order)),
        Box::new(|| integrality(c.integrality_order)),
        Box::new(|| operator_identities(c.clausen_order)),
        Box::new(|| griffiths_dwork(&c.griffiths_dwork_points)),
        Box::new(lattice),
        Box::new(|| monodromy_check(c.precision_bits, c.tolerance)),
        Box::new(|| ns_check(&ns_points, c.precision_bits, c.ns_tolerance)),
        Box::new(|| triangle_check(c.samples, c.triangle_precision_bits, c.triangle_tolerance)),
        Box::new(|| diagram(c.precision_bits)),
        Box::new(|| period_vector(&default_p())),
        Box::new(uniqueness),
    ];
    use rayon::prelude::*;
    jobs.par_iter().map(|f| f()).collect()
}

/// Parse `1.05`, `-3/4`, `2` or `1e-3` exactly.
pub fn parse_rational(s: &str) -> anyhow::Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        return Ok(Rational::new(n.trim().parse()?, d.trim().parse()?));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().context("exponent")?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() || !(whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        bail!("not a number: {s:?}");
    }
    let all = format!("{whole}{frac}");
    let n: num_bigint::BigInt = if all.is_empty() { 0.into() } else { all.parse()? };
    let scale = exp - frac.len() as i32;
    let ten = Rational::from_integer(10.into());
    let mut q = Rational::from_integer(n) * num_traits::pow::Pow::pow(&ten, scale);
    if neg {
        q = -q;
    }
    Ok(q)
}

/// `RE,IM` as an exact complex number.
pub fn parse_complex(s: &str) -> anyhow::Result<CRational> {
    let (re, im) = s.split_once(',').ok_or_else(|| anyhow!("expected RE,IM, got {s:?}"))?;
    Ok(CRational::new(parse_rational(re)?, parse_rational(im)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("1.05").unwrap(), rat(21, 20));
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("2e-2").unwrap(), rat(1, 50));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert_eq!(parse_complex("0, 1.5").unwrap(), CRational::new(int(0), rat(3, 2)));
    }

    #[test]
    fn small_order_compares_the_linear_term_only() {
        let r = mirror_map(1);
        assert_eq!(r.status, Status::Pass, "{:?}", r.details);
        assert_eq!(r.details["p_terms_compared"], 1);
    }

    #[test]
    fn fast_checks_pass() {
        assert_eq!(mirror_map(20).status, Status::Pass);
        assert_eq!(lattice().status, Status::Pass);
        assert_eq!(diagram(128).status, Status::Pass);
        assert_eq!(period_vector(&default_p()).status, Status::Pass);
        assert_eq!(uniqueness().status, Status::Pass);
        assert_eq!(period_vector(&CRational::new(int(1), int(0))).status, Status::Fail);
    }
}
