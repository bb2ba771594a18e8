//! Cone metrics, Fuchs-form operators, and their symbols.
//!
//! A metric `dt^2 + t^2 h(t)` on a collar (0, T) x X degenerates at
//! t = 0; its Laplacian and every geometric operator of order mu takes
//! the Fuchs form
//!
//! ```text
//! A = t^{-mu} sum_{j=0}^{mu} a_j(t, x, D_x) (-t d/dt)^j .
//! ```
//!
//! Operators are represented per eigenmode of the cross-section
//! Laplacian at t = 0: each coefficient a_j becomes a scalar family
//! (t, lambda) -> a_j(t; lambda) together with the homogeneous principal
//! symbol of the required degree.  Three symbols govern the analysis:
//! the principal symbol (degenerate at t = 0), its rescaled version
//! (smooth up to t = 0), and the conormal symbol
//! `m(z) = sum_j a_j(0) z^j`, a polynomial pencil in the Mellin
//! covariable z.
//!
//! The conormal symbol of the Laplacian is `z^2 - (n-1) z + lambda_j`
//! per mode; its roots are the singular exponents
//! `q_j^{+-} = (n-1)/2 +- sqrt(((n-1)/2)^2 - lambda_j)`.  Exponents are
//! Mellin-plane quantities: the attached singular functions behave like
//! `t^{-q} ln^k t`, and weight lines Re z = q are exactly where the
//! conormal symbol fails to invert.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cross_section::{spectrum_from_matrix, CrossSectionSpectrum, DiscretizedOperator};
use crate::error::{Error, Result, Warning};
use crate::grid::SampledFunction;
use crate::mellin::{apply_fuchs_derivative, WeightLine};

/// Decision tolerance for ellipticity along weight lines; margins below
/// ten times this are flagged as thin.
pub const ELLIPTICITY_TOL: f64 = 1e-8;

/// Ellipticity probes sample |Im z| up to this height on the weight line.
pub const PROBE_TAU_MAX: f64 = 50.0;

/// Scalar function of t, used for conformal warp factors.
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Coefficient family (t, lambda) -> value on the mode with eigenvalue
/// lambda, or principal-symbol family (t, xi) -> value.
pub type ModeFamily = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// How the cross-section metric h(t) varies along the cone axis.
#[derive(Clone)]
pub enum Warp {
    /// h(t) = h(0): a straight cone.
    Straight,
    /// h(t) = c(t)^2 h(0) with c(0) = 1; `dc` is the derivative of c.
    Conformal { c: TimeFn, dc: TimeFn },
    /// Only det h(t) is known, as a positive table over increasing t > 0.
    TabulatedDeterminant { ts: Vec<f64>, log_det: Vec<f64> },
}

impl fmt::Debug for Warp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warp::Straight => write!(f, "Warp::Straight"),
            Warp::Conformal { .. } => write!(f, "Warp::Conformal"),
            Warp::TabulatedDeterminant { ts, .. } => {
                write!(f, "Warp::TabulatedDeterminant({} samples)", ts.len())
            }
        }
    }
}

/// Where the t = 0 spectrum of a [`ConeMetric`] comes from.
#[derive(Debug, Clone)]
pub enum SpectrumSource {
    Analytic(CrossSectionSpectrum),
    Discretized(DiscretizedOperator),
}

/// Cone metric dt^2 + t^2 h(t) over a fixed cross-section.
#[derive(Debug, Clone)]
pub struct ConeMetric {
    source: SpectrumSource,
    spectrum: CrossSectionSpectrum,
    warp: Warp,
}

impl ConeMetric {
    pub fn new(source: SpectrumSource, warp: Warp) -> Result<Self> {
        if let Warp::Conformal { c, .. } = &warp {
            let c0 = c(0.0);
            if (c0 - 1.0).abs() > 1e-9 {
                return Err(Error::BadCrossSection(format!(
                    "conformal factor must satisfy c(0) = 1 so that h(0) matches the spectrum, got {c0}"
                )));
            }
        }
        if let Warp::TabulatedDeterminant { ts, log_det } = &warp {
            if ts.len() < 2 || ts.len() != log_det.len() {
                return Err(Error::BadCrossSection(
                    "determinant table needs at least two aligned samples".into(),
                ));
            }
            if ts[0] <= 0.0 || ts.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::BadCrossSection(
                    "determinant table abscissae must be positive and increasing".into(),
                ));
            }
            if log_det.iter().any(|v| !v.is_finite()) {
                return Err(Error::BadCrossSection("determinant table must be finite".into()));
            }
        }
        let spectrum = match &source {
            SpectrumSource::Analytic(s) => s.clone(),
            SpectrumSource::Discretized(op) => spectrum_from_matrix(op, None)?,
        };
        Ok(ConeMetric { source, spectrum, warp })
    }

    /// Straight cone over the given cross-section spectrum.
    pub fn straight(spectrum: CrossSectionSpectrum) -> Self {
        ConeMetric { source: SpectrumSource::Analytic(spectrum.clone()), spectrum, warp: Warp::Straight }
    }

    /// Conformally warped cone h(t) = c(t)^2 h(0).
    pub fn conformal<C, D>(spectrum: CrossSectionSpectrum, c: C, dc: D) -> Result<Self>
    where
        C: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ConeMetric::new(
            SpectrumSource::Analytic(spectrum),
            Warp::Conformal { c: Arc::new(c), dc: Arc::new(dc) },
        )
    }

    /// Warped cone known only through samples of det h(t).
    pub fn with_tabulated_determinant(
        spectrum: CrossSectionSpectrum,
        ts: Vec<f64>,
        det: Vec<f64>,
    ) -> Result<Self> {
        if det.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
            return Err(Error::BadCrossSection("det h samples must be positive".into()));
        }
        let log_det = det.iter().map(|d| d.ln()).collect();
        ConeMetric::new(
            SpectrumSource::Analytic(spectrum),
            Warp::TabulatedDeterminant { ts, log_det },
        )
    }

    /// Cross-section dimension n.
    pub fn n(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn spectrum(&self) -> &CrossSectionSpectrum {
        &self.spectrum
    }

    pub fn source(&self) -> &SpectrumSource {
        &self.source
    }

    pub fn warp(&self) -> &Warp {
        &self.warp
    }

    /// Divergence correction F(t) = (1/2) t d/dt ln det h(t) entering the
    /// first-order coefficient of the Laplacian.  Vanishes like O(t) at
    /// the tip; identically zero for straight cones, and equal to
    /// n t c'(t)/c(t) for conformal warps.
    pub fn warp_factor(&self, t: f64) -> f64 {
        match &self.warp {
            Warp::Straight => 0.0,
            Warp::Conformal { c, dc } => self.n() as f64 * t * dc(t) / c(t),
            Warp::TabulatedDeterminant { ts, log_det } => {
                0.5 * t * table_slope(ts, log_det, t)
            }
        }
    }
}

/// Slope of the piecewise-linear interpolant of (ts, values) at t.
fn table_slope(ts: &[f64], values: &[f64], t: f64) -> f64 {
    let n = ts.len();
    let seg = match ts.iter().position(|&x| x > t) {
        Some(0) => 0,
        Some(i) => i - 1,
        None => n - 2,
    };
    let seg = seg.min(n - 2);
    (values[seg + 1] - values[seg]) / (ts[seg + 1] - ts[seg])
}

/// One Fuchs coefficient a_j, per mode, with its homogeneous principal
/// symbol of degree mu - j (identically zero when ord a_j < mu - j).
#[derive(Clone)]
pub struct ModeCoefficient {
    /// (t, lambda) -> a_j(t) acting on the mode with eigenvalue lambda.
    pub value: ModeFamily,
    /// (t, xi) -> principal symbol of degree mu - j at cotangent length xi.
    pub principal: ModeFamily,
}

impl ModeCoefficient {
    pub fn new<V, P>(value: V, principal: P) -> Self
    where
        V: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        P: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        ModeCoefficient { value: Arc::new(value), principal: Arc::new(principal) }
    }
}

/// Fuchs-form operator of order mu, represented per cross-section mode.
#[derive(Clone)]
pub struct ConeOperator {
    mu: u32,
    n: usize,
    lambdas: Vec<f64>,
    labels: Vec<usize>,
    coeffs: Vec<ModeCoefficient>,
    /// Symmetrized matrix of the discretized t = 0 cross-section
    /// operator, when the metric was built from one; enables the matrix
    /// form of the conormal symbol.
    base_matrix: Option<DMatrix<f64>>,
    /// True when the conormal symbol is the model pencil
    /// z^2 - (n-1) z + lambda, which admits exact exponent arithmetic.
    model_quadratic: bool,
}

impl fmt::Debug for ConeOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConeOperator")
            .field("mu", &self.mu)
            .field("n", &self.n)
            .field("modes", &self.lambdas.len())
            .field("model_quadratic", &self.model_quadratic)
            .finish()
    }
}

impl ConeOperator {
    /// General constructor from per-mode coefficient families;
    /// `coeffs[j]` multiplies (-t d/dt)^j, j = 0..=mu.
    pub fn from_mode_coefficients(
        mu: u32,
        n: usize,
        lambdas: Vec<f64>,
        coeffs: Vec<ModeCoefficient>,
    ) -> Result<Self> {
        if mu == 0 {
            return Err(Error::ZeroOrder);
        }
        if coeffs.len() != mu as usize + 1 {
            return Err(Error::CoefficientCount { mu: mu as usize, got: coeffs.len() });
        }
        if lambdas.is_empty() {
            return Err(Error::NoModes);
        }
        let labels = (0..lambdas.len()).collect();
        Ok(ConeOperator {
            mu,
            n,
            lambdas,
            labels,
            coeffs,
            base_matrix: None,
            model_quadratic: false,
        })
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.mu
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn mode_labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn has_matrix_form(&self) -> bool {
        self.base_matrix.is_some()
    }
}

/// Laplace-Beltrami operator of the cone metric in Fuchs form:
///
/// ```text
/// Delta = t^{-2} ( (-t d/dt)^2 - (n - 1 + F(t)) (-t d/dt) + Delta_{h(t)} ),
/// ```
///
/// with F the warp factor of the metric.  Per mode, Delta_{h(t)} acts as
/// lambda_j / c(t)^2 for conformal warps and as lambda_j otherwise (a
/// determinant table fixes only the divergence correction F).
pub fn laplace_beltrami(metric: &ConeMetric) -> ConeOperator {
    let n = metric.n();
    let warp = metric.warp().clone();
    let metric_for_a1 = ConeMetric {
        source: SpectrumSource::Analytic(metric.spectrum.clone()),
        spectrum: metric.spectrum.clone(),
        warp: warp.clone(),
    };

    let tangential: ModeFamily = match &warp {
        Warp::Conformal { c, .. } => {
            let c = c.clone();
            Arc::new(move |t: f64, lambda: f64| lambda / (c(t) * c(t)))
        }
        _ => Arc::new(|_t: f64, lambda: f64| lambda),
    };
    let tangential_symbol: ModeFamily = match &warp {
        Warp::Conformal { c, .. } => {
            let c = c.clone();
            Arc::new(move |t: f64, xi: f64| -(xi * xi) / (c(t) * c(t)))
        }
        _ => Arc::new(|_t: f64, xi: f64| -(xi * xi)),
    };

    let a0 = ModeCoefficient {
        value: tangential,
        principal: tangential_symbol,
    };
    let a1 = ModeCoefficient {
        value: Arc::new(move |t: f64, _| -((n as f64 - 1.0) + metric_for_a1.warp_factor(t))),
        principal: Arc::new(|_, _| 0.0),
    };
    let a2 = ModeCoefficient {
        value: Arc::new(|_, _| 1.0),
        principal: Arc::new(|_, _| 1.0),
    };

    let base_matrix = match metric.source() {
        SpectrumSource::Discretized(op) => Some(op.matrix.clone()),
        SpectrumSource::Analytic(_) => None,
    };

    ConeOperator {
        mu: 2,
        n,
        lambdas: metric.spectrum.lambdas(),
        labels: metric.spectrum.modes().iter().map(|m| m.label).collect(),
        coeffs: vec![a0, a1, a2],
        base_matrix,
        model_quadratic: true,
    }
}

/// Principal symbol t^{-mu} sum_j sigma^{mu-j}(a_j)(t, xi) (-i t tau)^j,
/// homogeneous of degree mu in (tau, xi) and degenerate at t = 0.
pub fn principal_symbol(op: &ConeOperator, t: f64, tau: f64, xi: f64) -> Result<Complex64> {
    if t <= 0.0 {
        return Err(Error::BoundaryEvaluation { t });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let factor = Complex64::new(0.0, -t * tau);
    let mut power = Complex64::new(1.0, 0.0);
    for coeff in &op.coeffs {
        acc += (coeff.principal)(t, xi) * power;
        power *= factor;
    }
    Ok(acc * t.powi(-(op.mu as i32)))
}

/// Rescaled principal symbol sum_j sigma^{mu-j}(a_j)(t, xi) (-i tau)^j,
/// smooth up to t = 0; equals t^mu principal_symbol(t, tau / t, xi).
pub fn rescaled_symbol(op: &ConeOperator, t: f64, tau: f64, xi: f64) -> Result<Complex64> {
    if t < 0.0 {
        return Err(Error::BoundaryEvaluation { t });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let factor = Complex64::new(0.0, -tau);
    let mut power = Complex64::new(1.0, 0.0);
    for coeff in &op.coeffs {
        acc += (coeff.principal)(t, xi) * power;
        power *= factor;
    }
    Ok(acc)
}

/// Conormal symbol m(z; lambda) = sum_j a_j(0; lambda) z^j on one mode.
pub fn conormal_symbol(op: &ConeOperator, z: Complex64, lambda: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for coeff in &op.coeffs {
        acc += (coeff.value)(0.0, lambda) * power;
        power *= z;
    }
    acc
}

/// Conormal symbol in matrix form z^2 I - (n-1) z I + A for operators
/// built over a discretized cross-section; `None` otherwise.
pub fn conormal_symbol_matrix(op: &ConeOperator, z: Complex64) -> Option<DMatrix<Complex64>> {
    let a = op.base_matrix.as_ref()?;
    let dim = a.nrows();
    let shift = z * z - (op.n as f64 - 1.0) * z;
    let mut m = a.map(|v| Complex64::new(v, 0.0));
    for i in 0..dim {
        m[(i, i)] += shift;
    }
    Some(m)
}

/// Sign branch of a singular exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentSign {
    Plus,
    Minus,
    /// Both branches coincide (double root of the conormal symbol).
    Double,
}

/// One root of the conormal symbol, with its mode of origin.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SingularExponent {
    pub q: f64,
    /// Label of the eigenvalue that produced this exponent.  Serialized
    /// under the key "j", the mode index in exponent formulas.
    #[serde(rename = "j")]
    pub mode: usize,
    pub sign: ExponentSign,
    /// Root multiplicity: 2 exactly when both branches coincide.
    pub order: u8,
}

/// All singular exponents of an operator family, sorted increasing in q.
///
/// The attached singular functions behave like t^{-q} ln^k t near the
/// tip; weight lines Re z = q are exactly where the conormal symbol
/// fails to invert.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularExponentSet {
    pub n: usize,
    exponents: Vec<SingularExponent>,
}

impl SingularExponentSet {
    /// Rebuilds a set from serialized exponent entries.  Entries are
    /// re-sorted; a double sign must carry order 2 and vice versa.
    pub fn from_parts(n: usize, mut exponents: Vec<SingularExponent>) -> Result<Self> {
        for e in &exponents {
            let consistent = match e.sign {
                ExponentSign::Double => e.order == 2,
                _ => e.order == 1,
            };
            if !e.q.is_finite() || !consistent {
                return Err(Error::Parse(format!(
                    "exponent entry q = {}, order {} inconsistent with sign {:?}",
                    e.q, e.order, e.sign
                )));
            }
        }
        exponents.sort_by(|a, b| a.q.partial_cmp(&b.q).expect("finite exponents"));
        Ok(SingularExponentSet { n, exponents })
    }

    pub fn exponents(&self) -> &[SingularExponent] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Distance from beta to the closest exponent, with the exponent.
    pub fn nearest(&self, beta: f64) -> (SingularExponent, f64) {
        let best = self
            .exponents
            .iter()
            .min_by(|a, b| {
                (a.q - beta).abs().partial_cmp(&(b.q - beta).abs()).expect("finite exponents")
            })
            .expect("exponent sets are nonempty");
        (*best, (best.q - beta).abs())
    }

    /// True when beta sits on an exponent, up to rounding slack.
    pub fn contains(&self, beta: f64) -> bool {
        let (q, dist) = self.nearest(beta);
        dist <= 1e-12 * q.q.abs().max(1.0)
    }
}

/// Singular exponents q_j^{+-} = (n-1)/2 +- sqrt(((n-1)/2)^2 - lambda_j)
/// of the Laplacian of the metric, over every retained mode.  Both
/// branches merge into one order-2 exponent when the discriminant
/// vanishes (the constant mode in dimension n = 1).
pub fn singular_exponents(metric: &ConeMetric) -> SingularExponentSet {
    exponents_from_modes(
        metric.n(),
        &metric.spectrum.lambdas(),
        &metric.spectrum.modes().iter().map(|m| m.label).collect::<Vec<_>>(),
    )
}

/// Exponent set of the model pencil z^2 - (n-1) z + lambda over an
/// explicit eigenvalue list.
pub fn exponents_from_modes(n: usize, lambdas: &[f64], labels: &[usize]) -> SingularExponentSet {
    let half = (n as f64 - 1.0) / 2.0;
    let mut exponents = Vec::new();
    for (&lambda, &label) in lambdas.iter().zip(labels) {
        let disc = half * half - lambda;
        let root = disc.max(0.0).sqrt();
        if root <= 1e-12 * half.abs().max(1.0) {
            exponents.push(SingularExponent { q: half, mode: label, sign: ExponentSign::Double, order: 2 });
        } else {
            exponents.push(SingularExponent { q: half - root, mode: label, sign: ExponentSign::Minus, order: 1 });
            exponents.push(SingularExponent { q: half + root, mode: label, sign: ExponentSign::Plus, order: 1 });
        }
    }
    exponents.sort_by(|a, b| a.q.partial_cmp(&b.q).expect("finite exponents"));
    SingularExponentSet { n, exponents }
}

/// Maximal open weight interval, with the exponents bounding it.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct WeightInterval {
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    /// Exponent whose line beta = (n+1)/2 - gamma bounds the interval at
    /// gamma_lo; `None` when the requested range does.
    pub exponent_at_gamma_lo: Option<f64>,
    pub exponent_at_gamma_hi: Option<f64>,
}

/// Maximal open intervals of the weight gamma for which the line
/// beta = (n+1)/2 - gamma avoids every exponent, restricted to the
/// beta-range (lo, hi).  Returned sorted increasing in gamma.
pub fn admissible_weight_intervals(
    set: &SingularExponentSet,
    lo: f64,
    hi: f64,
) -> Result<Vec<WeightInterval>> {
    if !(lo < hi) {
        return Err(Error::EmptyRange { lo, hi });
    }
    let coincides = |q: f64, x: f64| (q - x).abs() <= 1e-12 * x.abs().max(1.0);
    let at = |x: f64| set.exponents.iter().map(|e| e.q).find(|&q| coincides(q, x));
    let mut cuts: Vec<f64> = set
        .exponents
        .iter()
        .map(|e| e.q)
        .filter(|&q| q > lo && q < hi && !coincides(q, lo) && !coincides(q, hi))
        .collect();
    cuts.dedup_by(|a, b| (*a - *b).abs() <= f64::EPSILON * a.abs().max(1.0));
    let shift = (set.n as f64 + 1.0) / 2.0;

    // Interval boundaries in beta, each annotated with the exponent
    // sitting on it (range endpoints may coincide with one).
    let mut bounds: Vec<(f64, Option<f64>)> = Vec::with_capacity(cuts.len() + 2);
    bounds.push((lo, at(lo)));
    bounds.extend(cuts.iter().map(|&q| (q, Some(q))));
    bounds.push((hi, at(hi)));

    let mut intervals: Vec<WeightInterval> = bounds
        .windows(2)
        .map(|w| WeightInterval {
            gamma_lo: shift - w[1].0,
            gamma_hi: shift - w[0].0,
            exponent_at_gamma_lo: w[1].1,
            exponent_at_gamma_hi: w[0].1,
        })
        .collect();
    intervals.reverse();
    Ok(intervals)
}

/// Outcome of an ellipticity check along one weight line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticityReport {
    pub elliptic: bool,
    /// Smallest modulus of the rescaled symbol on the unit covariable
    /// circle and of the conormal symbol on the probed stretch of the
    /// line, whichever is smaller.
    pub margin: f64,
    /// Set when the margin rests on thin numerical evidence
    /// (below 10 * tol).
    pub thin_margin: bool,
}

/// Checks ellipticity of the operator with respect to the line
/// Re z = (n+1)/2 - gamma: the rescaled symbol must be invertible on the
/// unit covariable circle uniformly down to t = 0, and the conormal
/// symbol must be invertible along the whole line.
///
/// For the model pencil the line condition is decided exactly against
/// the singular exponent set; the reported margin always comes from the
/// probe grid (tau up to [`PROBE_TAU_MAX`]), so a verdict of
/// "not elliptic" can coexist with a positive probe minimum when the
/// offending height lies off the probe grid.
pub fn is_elliptic_on_line(
    op: &ConeOperator,
    line: WeightLine,
    tol: Option<f64>,
) -> Result<(EllipticityReport, Vec<Warning>)> {
    let tol = tol.unwrap_or(ELLIPTICITY_TOL);
    let beta = line.beta;

    // Interior condition: rescaled symbol on the unit circle of
    // covariables, sampled down to t = 0 across the collar.
    let mut interior_min = f64::INFINITY;
    for it in 0..=32 {
        let t = 2.0 * it as f64 / 32.0;
        for ia in 0..64 {
            let ang = std::f64::consts::PI * ia as f64 / 63.0;
            let value = rescaled_symbol(op, t, ang.cos(), ang.sin())?.norm();
            interior_min = interior_min.min(value);
        }
    }

    // Line condition: conormal symbol along Re z = beta.
    let mut line_min = f64::INFINITY;
    for ip in 0..=128 {
        let tau = PROBE_TAU_MAX * (ip as f64 / 128.0 - 0.5) * 2.0;
        let z = Complex64::new(beta, tau);
        for &lambda in &op.lambdas {
            line_min = line_min.min(conormal_symbol(op, z, lambda).norm());
        }
    }

    let margin = interior_min.min(line_min);
    let elliptic = if op.model_quadratic {
        let set = exponents_from_modes(op.n, &op.lambdas, &op.labels);
        interior_min > tol && !set.contains(beta)
    } else {
        margin > tol
    };
    let mut warnings = Vec::new();
    let thin_margin = elliptic && margin < 10.0 * tol;
    if thin_margin {
        warnings.push(Warning::ThinMargin { margin, tol });
    }
    Ok((EllipticityReport { elliptic, margin, thin_margin }, warnings))
}

/// Line condition through the matrix form of the conormal symbol:
/// smallest singular value of z^2 I - (n-1) z I + A over the probe grid.
/// A polynomial in a symmetric matrix is normal, so singular values are
/// the moduli of the pencil evaluated on the eigenvalues of A; this
/// route goes through the raw (unclustered) eigenvalues.
pub fn matrix_line_margin(op: &ConeOperator, line: WeightLine) -> Result<f64> {
    let a = op
        .base_matrix
        .as_ref()
        .ok_or_else(|| Error::EigenFailure("operator carries no matrix form".into()))?;
    let eigen = a.clone().symmetric_eigen();
    let n1 = op.n as f64 - 1.0;
    let mut min_sv = f64::INFINITY;
    for ip in 0..=128 {
        let tau = PROBE_TAU_MAX * (ip as f64 / 128.0 - 0.5) * 2.0;
        let z = Complex64::new(line.beta, tau);
        for &ev in eigen.eigenvalues.iter() {
            min_sv = min_sv.min((z * z - n1 * z + ev).norm());
        }
    }
    Ok(min_sv)
}

/// Applies the operator to per-mode samples: for each mode i,
/// t^{-mu} sum_j a_j(t; lambda_i) (-t d/dt)^j u_i, with the Fuchs
/// derivative realized by finite differences in ln t.
pub fn apply_cone_operator(
    op: &ConeOperator,
    modes: &[SampledFunction],
) -> Result<(Vec<SampledFunction>, Vec<Warning>)> {
    if modes.len() != op.lambdas.len() {
        return Err(Error::ModeCountMismatch { expected: op.lambdas.len(), got: modes.len() });
    }
    let mut warnings = Vec::new();
    if let Some(first) = modes.first() {
        let d_s = first.grid.d_s();
        if d_s > 0.5 * crate::mellin::RESOLUTION_BOUND {
            warnings.push(Warning::CoarseStep { d_s, bound: crate::mellin::RESOLUTION_BOUND });
        }
    }
    let mut out = Vec::with_capacity(modes.len());
    for (u, &lambda) in modes.iter().zip(&op.lambdas) {
        let grid = u.grid;
        // Iterated Fuchs derivatives (-t d/dt)^j u, j = 0..=mu.
        let mut derivs: Vec<SampledFunction> = vec![u.clone()];
        for _ in 0..op.mu {
            derivs.push(apply_fuchs_derivative(derivs.last().expect("nonempty")));
        }
        let values = (0..u.len())
            .map(|k| {
                let t = grid.t(k);
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, coeff) in op.coeffs.iter().enumerate() {
                    acc += (coeff.value)(t, lambda) * derivs[j].values[k];
                }
                acc * t.powi(-(op.mu as i32))
            })
            .collect();
        out.push(SampledFunction { grid, values });
    }
    Ok((out, warnings))
}
