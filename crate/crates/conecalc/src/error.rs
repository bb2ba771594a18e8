//! Error and warning types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
///
/// Numerical routines return `Err` only for conditions that make the
/// requested value meaningless (degenerate grids, evaluation on top of a
/// pole, weight lines through the spectrum).  Soft conditions that leave
/// the result usable are reported as [`Warning`]s instead.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("grid needs at least {min} points, got {got}")]
    GridTooSmall { min: usize, got: usize },

    #[error("grid endpoints must satisfy s_min < s_max, got [{s_min}, {s_max}]")]
    GridReversed { s_min: f64, s_max: f64 },

    #[error("grid bounds must be finite, got [{s_min}, {s_max}]")]
    GridNotFinite { s_min: f64, s_max: f64 },

    #[error("value array has {got} entries but the grid has {expected} points")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    #[error(
        "grid step {d_s:.3e} too coarse for the line Re z = {beta}; \
         need d_s * max(1, |beta|) <= {bound}"
    )]
    GridTooCoarse { d_s: f64, beta: f64, bound: f64 },

    #[error(
        "target log-range {s_span:.6} exceeds the period {period:.6} resolvable \
         by the frequency grid; inverse transform would alias"
    )]
    Aliasing { s_span: f64, period: f64 },

    #[error(
        "evaluation point within {floor:.1e} of the pole at {location}; \
         principal part has Laurent coefficients {laurent:?} (orders -1, -2, ...)"
    )]
    NearPole {
        location: Complex64,
        /// Coefficients of (z - p)^{-1}, (z - p)^{-2}, ... in that order.
        laurent: Vec<Complex64>,
        floor: f64,
    },

    #[error("cutoff must satisfy 0 < plateau_end < support_end, got ({plateau_end}, {support_end})")]
    BadCutoff { plateau_end: f64, support_end: f64 },

    #[error("cross-section parameter out of range: {0}")]
    BadCrossSection(String),

    #[error("metric coefficient must be strictly positive; sample {index} is {value}")]
    DegenerateCoefficient { index: usize, value: f64 },

    #[error("eigenvalue decomposition failed: {0}")]
    EigenFailure(String),

    #[error(
        "operator spectrum reaches {max_eigenvalue:.3e} above zero, beyond the \
         tolerance {tol:.3e}; not a cross-section Laplacian"
    )]
    PositiveSpectrum { max_eigenvalue: f64, tol: f64 },

    #[error("eigenfunction data unavailable for this geometry: {0}")]
    NoEigenfunctions(String),

    #[error("mode index {index} out of range; spectrum holds {count} distinct eigenvalues")]
    ModeOutOfRange { index: usize, count: usize },

    #[error("symbol evaluation needs t > 0, got t = {t}")]
    BoundaryEvaluation { t: f64 },

    #[error("operator order must be at least 1")]
    ZeroOrder,

    #[error("coefficient family count {got} does not match order {mu} (need mu + 1 families)")]
    CoefficientCount { mu: usize, got: usize },

    #[error("weight range must satisfy lo < hi, got [{lo}, {hi}]")]
    EmptyRange { lo: f64, hi: f64 },

    #[error("integrability index p must lie in (1, inf), got {p}")]
    BadIntegrability { p: f64 },

    #[error("space parameters incompatible: {0}")]
    IncompatibleSpaces(String),

    #[error(
        "weight line Re z = {beta} passes within {dist:.3e} of the singular \
         exponent {exponent} (mode {mode}); choose a line between exponents"
    )]
    LineOnSpectrum { beta: f64, exponent: f64, mode: usize, dist: f64 },

    #[error("mode truncation must retain at least one mode")]
    NoModes,

    #[error("pole at {location} lies on a contour line Re z = {beta}")]
    PoleOnContour { location: Complex64, beta: f64 },

    #[error("Laurent data of the pole at {location} is empty or vanishes at the deepest order")]
    BadLaurent { location: Complex64 },

    #[error("two poles coincide at {location}; merge their Laurent data into one pole")]
    DuplicatePole { location: Complex64 },

    #[error(
        "integrand on the line Re z = {beta} has not decayed at the frequency-grid \
         ends (relative tail {tail:.2e}); the contour argument needs decay"
    )]
    DecayViolation { beta: f64, tail: f64 },

    #[error("datum supplies {got} mode functions but the problem retains {expected} modes")]
    ModeCountMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

/// Soft diagnostic attached to a result that is still usable.
///
/// Transforms check their quadrature preconditions and report violations
/// here rather than failing; callers decide whether the defect matters at
/// their tolerance.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Samples at a grid end exceed the support threshold, so the
    /// truncated quadrature misses mass outside the grid.
    SupportLeak {
        /// "lower" or "upper".
        end: &'static str,
        /// Endpoint magnitude relative to the sup of the weighted samples.
        relative_magnitude: f64,
    },
    /// Frequency samples at the ends of the line exceed the decay
    /// threshold; the truncated inverse integral misses tail mass.
    TailLeak { relative_magnitude: f64 },
    /// Grid step close to the documented resolution bound.
    CoarseStep { d_s: f64, bound: f64 },
    /// An ellipticity margin fell below ten times the decision tolerance,
    /// so the boolean verdict rests on thin numerical evidence.
    ThinMargin { margin: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
