//! Numerical toolkit for differential operators that degenerate at a
//! conical point.
//!
//! Near the tip of a cone, geometric operators take the Fuchs form
//! `t^{-mu} sum_j a_j(t) (-t d/dt)^j` in the distance t to the tip, and
//! the natural transform is the Mellin transform along weight lines.
//! This crate provides the pieces needed to compute with such operators:
//!
//! * [`mellin`]: weighted Mellin transforms on log grids, the Fuchs
//!   derivative, and meromorphic transforms of log-power model functions;
//! * [`cross_section`]: spectra and eigenfunctions of cross-section
//!   Laplacians (intervals, circles, spheres, and discretized
//!   Sturm-Liouville operators);
//! * [`operator`]: cone metrics, Fuchs-form operators, their principal,
//!   rescaled and conormal symbols, singular exponents, and ellipticity
//!   along weight lines;
//! * [`sobolev`]: weighted cone Sobolev membership, norms, embeddings,
//!   and mapping checks;
//! * [`wedge`]: the Dirichlet model problem on a plane wedge, solved by
//!   mode-wise Mellin division;
//! * [`asymptotics`]: meromorphic symbols, residue expansions across
//!   strips, and contour-shift verification;
//! * [`formats`]: JSON and CSV interchange for every public data type.

pub mod asymptotics;
pub mod cross_section;
pub mod cutoff;
pub mod error;
pub mod formats;
pub mod grid;
pub mod mellin;
pub mod operator;
pub mod sobolev;
pub mod wedge;

mod quad;

pub use error::{Error, Result, Warning};
