//! Contour-shift residue calculus for per-mode Mellin symbols.
//!
//! Moving the inversion contour from one weight line to another sweeps
//! across poles of the symbol, and each pole of order k leaves behind
//! asymptotic terms t^{-p} ln^j t with j <= k - 1.  This module computes
//! those terms from the Laurent data of the symbol and the Taylor data of
//! the Mellin datum, and cross-checks them against direct numerical
//! integration along the two lines.
//!
//! Orientation convention: [`residue_terms`] expands the difference
//!
//! ```text
//! (inverse along Re z = beta_from) - (inverse along Re z = beta_to)
//! ```
//!
//! A counterclockwise rectangle traversed up the right line and down the
//! left line encloses the strip, so the difference equals the residue sum
//! when `beta_from > beta_to` and its negative otherwise.
//!
//! Symbols are scalar per mode: the operator-level object is diagonal in
//! the cross-section eigenbasis, and one [`MeromorphicSymbol`] describes
//! one eigenmode.  [`mode_parametrix`] builds the inverse of the model
//! pencil z^2 - (n-1)z + lambda for a single eigenvalue.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result, Warning};
use crate::grid::{LogGrid, SampledFunction};
use crate::mellin::{self, MellinFunction, WeightLine};

/// Scalar symbol evaluator on the Mellin plane.
pub type SymbolFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Absolute distance below which a pole counts as sitting on a contour
/// line.  Residue algebra is exact, so the gate only has to catch
/// floating-point coincidences, not protect quadrature accuracy.
pub const LINE_POLE_TOL: f64 = 1e-9;

/// Radius of the circle used for Cauchy-integral Taylor and residue
/// extraction.
pub const CIRCLE_RADIUS: f64 = 1e-2;

/// Node count on that circle.  Trapezoid sums on a circle converge
/// geometrically for analytic integrands, so 256 nodes reach rounding
/// level long before the radius becomes an issue.
pub const CIRCLE_NODES: usize = 256;

/// Relative tail magnitude above which a line integrand is considered
/// non-decaying and the contour comparison refuses to run.
pub const DECAY_TAIL_TOL: f64 = 1e-3;

/// Fraction of the residue-sum sup below which a grid point is excluded
/// from the pointwise relative comparison in [`contour_shift_check`].
/// The sum can cross zero inside the grid; relative error is meaningless
/// on top of the crossing.
pub const RESIDUE_MASK_FLOOR: f64 = 1e-2;

/// One pole of a per-mode symbol with its principal-part data.
#[derive(Debug, Clone)]
pub struct Pole {
    location: Complex64,
    /// Coefficients of (z - p)^{-1}, (z - p)^{-2}, ... in that order,
    /// matching [`mellin::log_power_laurent`].
    laurent: Vec<Complex64>,
}

impl Pole {
    /// A pole at `location` with the given principal part.  The deepest
    /// coefficient fixes the order and must be nonzero.
    pub fn new(location: Complex64, laurent: Vec<Complex64>) -> Result<Self> {
        let finite = location.re.is_finite()
            && location.im.is_finite()
            && laurent.iter().all(|c| c.re.is_finite() && c.im.is_finite());
        let deepest = laurent.last().map(|c| c.norm()).unwrap_or(0.0);
        if !finite || deepest == 0.0 {
            return Err(Error::BadLaurent { location });
        }
        Ok(Pole { location, laurent })
    }

    pub fn location(&self) -> Complex64 {
        self.location
    }

    /// Pole order, the depth of the deepest nonzero Laurent coefficient.
    pub fn order(&self) -> u32 {
        self.laurent.len() as u32
    }

    /// Laurent coefficients in orders -1, -2, ..., -order.
    pub fn laurent(&self) -> &[Complex64] {
        &self.laurent
    }

    /// Coefficient of (z - p)^{-1}.
    pub fn residue(&self) -> Complex64 {
        self.laurent[0]
    }

    fn principal_part(&self, z: Complex64) -> Complex64 {
        let w = z - self.location;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut w_pow = w;
        for c in &self.laurent {
            sum += c / w_pow;
            w_pow *= w;
        }
        sum
    }
}

/// Meromorphic per-mode symbol: finitely many poles with explicit
/// principal parts plus an entire remainder.
///
/// `decay_order` is the caller's certificate that |g| decays like
/// |Im z|^{-decay_order} along vertical lines, uniformly over compact
/// ranges of Re z.  [`contour_shift_check`] additionally measures the
/// actual tails of its line integrands and rejects the comparison when
/// they have not decayed, so a wrong certificate cannot silently corrupt
/// the result.
#[derive(Clone)]
pub struct MeromorphicSymbol {
    poles: Vec<Pole>,
    regular: Option<SymbolFn>,
    decay_order: u32,
}

impl fmt::Debug for MeromorphicSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeromorphicSymbol")
            .field("poles", &self.poles)
            .field("regular", &self.regular.as_ref().map(|_| "<fn>"))
            .field("decay_order", &self.decay_order)
            .finish()
    }
}

impl MeromorphicSymbol {
    /// Assembles a symbol from poles, an optional entire part, and a
    /// decay certificate.  Pole locations must be pairwise distinct; a
    /// repeated location means the caller split one principal part in
    /// two, which the residue expansion cannot reassemble.
    pub fn new(
        poles: Vec<Pole>,
        regular: Option<SymbolFn>,
        decay_order: u32,
    ) -> Result<Self> {
        for (i, p) in poles.iter().enumerate() {
            for q in poles.iter().skip(i + 1) {
                if (p.location - q.location).norm() < LINE_POLE_TOL {
                    return Err(Error::DuplicatePole { location: p.location });
                }
            }
        }
        let mut poles = poles;
        poles.sort_by(|a, b| {
            (a.location.re, a.location.im)
                .partial_cmp(&(b.location.re, b.location.im))
                .unwrap()
        });
        Ok(MeromorphicSymbol { poles, regular, decay_order })
    }

    /// Poles sorted by real part, then imaginary part.
    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn decay_order(&self) -> u32 {
        self.decay_order
    }

    /// Evaluates the symbol away from its poles.  The value blows up
    /// smoothly as z approaches a pole; callers keep contour points at a
    /// safe distance.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut sum = match &self.regular {
            Some(f) => f(z),
            None => Complex64::new(0.0, 0.0),
        };
        for pole in &self.poles {
            sum += pole.principal_part(z);
        }
        sum
    }

    /// Poles with real part strictly inside the open interval (lo, hi).
    pub fn poles_in_strip(&self, lo: f64, hi: f64) -> Vec<&Pole> {
        self.poles
            .iter()
            .filter(|p| p.location.re > lo && p.location.re < hi)
            .collect()
    }
}

/// One asymptotic term coeff * t^{-p} ln^j t.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticTerm {
    /// Exponent: the term behaves like t^{-p}.
    pub p: Complex64,
    /// Log power.
    pub j: u32,
    pub coeff: Complex64,
}

impl AsymptoticTerm {
    /// Evaluates coeff * t^{-p} ln^j t at t > 0.
    pub fn eval(&self, t: f64) -> Complex64 {
        let s = t.ln();
        self.coeff * (-self.p * s).exp() * s.powi(self.j as i32)
    }
}

/// Sums a term list on a log grid.
pub fn evaluate_terms(terms: &[AsymptoticTerm], grid: &LogGrid) -> SampledFunction {
    let values = (0..grid.len())
        .map(|k| {
            let t = grid.t(k);
            terms.iter().map(|term| term.eval(t)).sum()
        })
        .collect();
    SampledFunction::new(*grid, values).expect("term evaluation is finite on a valid grid")
}

/// Inverse of the model pencil z^2 - (n-1)z + lambda for one eigenvalue.
///
/// Partial fractions give simple poles at q^+- = (n-1)/2 +- root with
/// residues +-1/(q^+ - q^-); when the roots merge the symbol is
/// (z - q)^{-2}, one pole of order 2 with Laurent data (0, 1) in orders
/// (-1, -2).  The pencil has no entire remainder and decays like |z|^{-2}
/// along vertical lines.
pub fn mode_parametrix(lambda: f64, n: usize) -> MeromorphicSymbol {
    let half = (n as f64 - 1.0) / 2.0;
    let disc = half * half - lambda;
    let root = disc.abs().sqrt();
    let poles = if root <= 1e-12 * half.abs().max(1.0) {
        vec![Pole::new(
            Complex64::new(half, 0.0),
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        )
        .expect("double pole data is nonzero")]
    } else {
        let offset = if disc > 0.0 {
            Complex64::new(root, 0.0)
        } else {
            Complex64::new(0.0, root)
        };
        let center = Complex64::new(half, 0.0);
        let res = 1.0 / (2.0 * offset);
        vec![
            Pole::new(center + offset, vec![res]).expect("residue is nonzero"),
            Pole::new(center - offset, vec![-res]).expect("residue is nonzero"),
        ]
    };
    MeromorphicSymbol::new(poles, None, 2).expect("pencil roots are distinct or merged")
}

/// Taylor coefficients f^(d)(center)/d! for d = 0..count, by Cauchy
/// integrals over the circle of radius [`CIRCLE_RADIUS`].
///
/// Stable for entire f of moderate growth: the trapezoid sum on the
/// circle is geometrically accurate, and the worst amplification of
/// rounding error is radius^{-(count-1)}.
pub fn taylor_coeffs<F: Fn(Complex64) -> Complex64>(
    f: &F,
    center: Complex64,
    count: usize,
) -> Vec<Complex64> {
    let samples: Vec<Complex64> = (0..CIRCLE_NODES)
        .map(|m| {
            let ang = 2.0 * std::f64::consts::PI * m as f64 / CIRCLE_NODES as f64;
            f(center + Complex64::from_polar(CIRCLE_RADIUS, ang))
        })
        .collect();
    (0..count)
        .map(|d| {
            let mut sum = Complex64::new(0.0, 0.0);
            for (m, v) in samples.iter().enumerate() {
                let ang = 2.0 * std::f64::consts::PI * (m as f64) * (d as f64)
                    / CIRCLE_NODES as f64;
                sum += v * Complex64::from_polar(1.0, -ang);
            }
            sum / (CIRCLE_NODES as f64 * CIRCLE_RADIUS.powi(d as i32))
        })
        .collect()
}

/// Residue of f at `center` by the same circle integration, for
/// cross-checking term coefficients against direct quadrature.
pub fn circle_residue<F: Fn(Complex64) -> Complex64>(f: &F, center: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..CIRCLE_NODES {
        let ang = 2.0 * std::f64::consts::PI * m as f64 / CIRCLE_NODES as f64;
        let w = Complex64::from_polar(CIRCLE_RADIUS, ang);
        sum += f(center + w) * w;
    }
    sum / CIRCLE_NODES as f64
}

/// Asymptotic terms generated by shifting the inversion contour from
/// `beta_from` to `beta_to`.
///
/// For each pole p of order k strictly between the lines, the residue of
/// t^{-w} g(w) U(w) expands as
///
/// ```text
/// t^{-p} sum_{j=0}^{k-1} ln^j t * (-1)^j / j!
///     * sum_{i=j+1}^{k} c_{-i} U^{(i-1-j)}(p) / (i-1-j)!
/// ```
///
/// by multiplying the Laurent series of g, the Taylor series of U, and
/// t^{-(w-p)} = sum (-ln t)^m (w-p)^m / m!.  The sign follows the
/// orientation convention in the module docs.  Terms are emitted for
/// every j <= k-1, zero coefficients included, sorted by exponent then
/// log power.
pub fn residue_terms<F: Fn(Complex64) -> Complex64>(
    g: &MeromorphicSymbol,
    datum: F,
    beta_from: f64,
    beta_to: f64,
) -> Result<Vec<AsymptoticTerm>> {
    if !(beta_from.is_finite() && beta_to.is_finite()) || beta_from == beta_to {
        return Err(Error::EmptyRange {
            lo: beta_from.min(beta_to),
            hi: beta_from.max(beta_to),
        });
    }
    for pole in g.poles() {
        for &beta in &[beta_from, beta_to] {
            if (pole.location.re - beta).abs() < LINE_POLE_TOL {
                return Err(Error::PoleOnContour { location: pole.location, beta });
            }
        }
    }
    let sign = if beta_from > beta_to { 1.0 } else { -1.0 };
    let lo = beta_from.min(beta_to);
    let hi = beta_from.max(beta_to);
    let mut terms = Vec::new();
    for pole in g.poles_in_strip(lo, hi) {
        let k = pole.order() as usize;
        let taylor = taylor_coeffs(&datum, pole.location, k);
        let mut j_factorial = 1.0;
        for j in 0..k {
            if j > 0 {
                j_factorial *= j as f64;
            }
            let mut inner = Complex64::new(0.0, 0.0);
            for i in (j + 1)..=k {
                inner += pole.laurent[i - 1] * taylor[i - 1 - j];
            }
            let sign_j = if j % 2 == 0 { 1.0 } else { -1.0 };
            terms.push(AsymptoticTerm {
                p: pole.location,
                j: j as u32,
                coeff: inner * (sign * sign_j / j_factorial),
            });
        }
    }
    terms.sort_by(|a, b| {
        (a.p.re, a.p.im, a.j)
            .partial_cmp(&(b.p.re, b.p.im, b.j))
            .unwrap()
    });
    Ok(terms)
}

/// Numerically verifies [`residue_terms`]: inverts g * Mellin(u) along
/// both lines, subtracts, and compares against the evaluated term sum on
/// the datum's own grid.
///
/// Returns the max pointwise relative error over grid points where the
/// term sum exceeds [`RESIDUE_MASK_FLOOR`] times its sup.  With no poles
/// in the strip the difference itself is the error, measured relative to
/// the larger of the two line reconstructions.
///
/// The comparison is meaningful only where the two reconstructions are:
/// each line's inverse carries wraparound from the grid periodization,
/// whose size at the seam is set by the weighted tails at the grid ends,
/// about exp(-d * s_max) on a symmetric grid for a pole at distance d
/// from the line.  Tight tolerances need wide grids and comfortable pole
/// distances.
pub fn contour_shift_check(
    g: &MeromorphicSymbol,
    u: &SampledFunction,
    beta_from: f64,
    beta_to: f64,
) -> Result<(f64, Vec<Warning>)> {
    let terms = residue_terms(g, |z| mellin::transform_at(u, z), beta_from, beta_to)?;
    let mut warnings = Vec::new();
    let mut reconstruct = |beta: f64| -> Result<SampledFunction> {
        let line = WeightLine::new(beta);
        let (transform, mut warn) = mellin::forward(u, line)?;
        warnings.append(&mut warn);
        let values: Vec<Complex64> = (0..transform.tau.len())
            .map(|j| {
                let z = line.at(transform.tau.tau(j));
                g.eval(z) * transform.values[j]
            })
            .collect();
        let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if sup > 0.0 {
            let tail = values[0].norm().max(values[values.len() - 1].norm()) / sup;
            if tail > DECAY_TAIL_TOL {
                return Err(Error::DecayViolation { beta, tail });
            }
        }
        let product = MellinFunction::new(line, transform.tau, values)?;
        let (v, mut warn) = mellin::inverse(&product, &u.grid)?;
        warnings.append(&mut warn);
        Ok(v)
    };
    let v_from = reconstruct(beta_from)?;
    let v_to = reconstruct(beta_to)?;
    let residue_sum = evaluate_terms(&terms, &u.grid);

    let err = if terms.is_empty() {
        let scale = v_from.sup_norm().max(v_to.sup_norm());
        if scale == 0.0 {
            0.0
        } else {
            (0..u.grid.len())
                .map(|k| (v_from.values[k] - v_to.values[k]).norm())
                .fold(0.0, f64::max)
                / scale
        }
    } else {
        let scale = residue_sum.sup_norm();
        let mut worst = 0.0f64;
        for k in 0..u.grid.len() {
            let r = residue_sum.values[k].norm();
            if r >= RESIDUE_MASK_FLOOR * scale {
                let diff = (v_from.values[k] - v_to.values[k] - residue_sum.values[k]).norm();
                worst = worst.max(diff / r);
            }
        }
        worst
    };
    Ok((err, warnings))
}

/// Conjugation bookkeeping for a weight shift by the operator order:
/// pulling t^mu through the Mellin action turns the symbol into its
/// argument shift z -> z - mu acting at weight gamma - mu.  Returns the
/// shifted symbol (poles translated by +mu) and the new weight.
pub fn weight_shift_conjugation(
    g: &MeromorphicSymbol,
    mu: i32,
    gamma: f64,
) -> (MeromorphicSymbol, f64) {
    let shift = Complex64::new(mu as f64, 0.0);
    let poles = g
        .poles
        .iter()
        .map(|p| Pole {
            location: p.location + shift,
            laurent: p.laurent.clone(),
        })
        .collect();
    let regular = g.regular.clone().map(|f| {
        Arc::new(move |z: Complex64| f(z - shift)) as SymbolFn
    });
    let shifted = MeromorphicSymbol {
        poles,
        regular,
        decay_order: g.decay_order,
    };
    (shifted, gamma - mu as f64)
}
