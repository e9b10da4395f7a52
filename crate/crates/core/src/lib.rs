//! Verification toolkit for mirror symmetry of the quartic K3 surface.
//!
//! The crate is layered bottom-up:
//!
//! * [`exact`]: rationals, polynomials, rational functions, truncated
//!   series and log-series.
//! * [`hyperseries`]: the hypergeometric periods `W1`, `W2`, the mirror
//!   map and its q-expansion, integrality and Clausen audits.
//! * [`diffop`]: differential operators, pullbacks, symmetric squares and
//!   a Griffiths-Dwork reduction for the Dwork pencil.
//! * [`flow`]: ball arithmetic, analytic continuation, monodromy, the
//!   closed form near `t = 1` and the Schwarz triangle sampler.
//! * [`lattice`]: integer lattices, Smith forms, Nikulin's criterion,
//!   monodromy matrices and their Moebius actions.
//! * [`mirror`]: the mirror diagram, the isometry `g0` and the
//!   22-entry period vector.

pub mod exact;
pub mod hyperseries;
pub mod diffop;
pub mod flow;
pub mod lattice;
pub mod mirror;
