//! Weighted Mellin transforms on the half-line.
//!
//! The transform used throughout is
//!
//! ```text
//! (M u)(z) = integral_0^inf t^z u(t) dt/t ,      z = beta + i tau,
//! ```
//!
//! which after s = ln t becomes the Fourier integral
//! `(M u)(beta + i tau) = integral e^{i tau s} (e^{beta s} u(e^s)) ds`.
//! With this normalization the Plancherel identity on the line
//! Re z = 1/2 reads `||M u||^2_{L^2(d tau)} = 2 pi ||u||^2_{L^2(dt)}`,
//! and multiplication by t^gamma shifts the argument:
//! `M(t^gamma u)(z) = M(u)(z + gamma)`.  The weighted transform on the
//! line Re z = (n+1)/2 - gamma is the plain transform evaluated there;
//! [`WeightLine::from_weight`] performs the bookkeeping.
//!
//! Discretely, a [`crate::grid::LogGrid`] with step d_s carries a dual
//! frequency grid with step `d_tau = 2 pi / (n d_s)`; on that pair the
//! forward and inverse transforms are single FFTs and invert each other
//! to rounding accuracy.  Both directions use trapezoidal quadrature, so
//! the caller must supply samples that decay at the grid ends; leaks are
//! reported as [`Warning`]s.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::cutoff::CutoffSpec;
use crate::error::{Error, Result, Warning};
use crate::grid::{LogGrid, SampledFunction, SUPPORT_DECAY_FACTOR};
use crate::quad;

/// Transforms error out when `d_s * max(1, |beta|)` exceeds this bound;
/// coarser grids cannot resolve the weighted kernel.
pub const RESOLUTION_BOUND: f64 = 0.25;

/// Evaluations of meromorphic transforms closer than this to a pole
/// return the Laurent data of the pole instead of a function value.
pub const NEAR_POLE_FLOOR: f64 = 1e-6;

/// Vertical line Re z = beta in the Mellin plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightLine {
    pub beta: f64,
}

impl WeightLine {
    pub fn new(beta: f64) -> Self {
        WeightLine { beta }
    }

    /// Line attached to the weight gamma in dimension 1 + n:
    /// beta = (n + 1)/2 - gamma.
    pub fn from_weight(gamma: f64, n: usize) -> Self {
        WeightLine { beta: (n as f64 + 1.0) / 2.0 - gamma }
    }

    /// Weight gamma recovered from the line: gamma = (n + 1)/2 - beta.
    pub fn weight(&self, n: usize) -> f64 {
        (n as f64 + 1.0) / 2.0 - self.beta
    }

    /// Point beta + i tau on the line.
    #[inline]
    pub fn at(&self, tau: f64) -> Complex64 {
        Complex64::new(self.beta, tau)
    }
}

/// Uniform frequency grid, symmetric about tau = 0.
///
/// The j-th node is `(j - (n-1)/2) * d_tau`, so the grid is symmetric for
/// every length (even lengths straddle zero at half-step offsets).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauGrid {
    n: usize,
    d_tau: f64,
}

impl TauGrid {
    pub fn new(n: usize, d_tau: f64) -> Result<Self> {
        if n < 8 {
            return Err(Error::GridTooSmall { min: 8, got: n });
        }
        if !(d_tau > 0.0 && d_tau.is_finite()) {
            return Err(Error::GridNotFinite { s_min: 0.0, s_max: d_tau });
        }
        Ok(TauGrid { n, d_tau })
    }

    /// Discrete-Fourier dual of a log grid: same length,
    /// d_tau = 2 pi / (n d_s).
    pub fn dual_of(grid: &LogGrid) -> Self {
        let n = grid.len();
        TauGrid { n, d_tau: 2.0 * std::f64::consts::PI / (n as f64 * grid.d_s()) }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn d_tau(&self) -> f64 {
        self.d_tau
    }

    #[inline]
    pub fn tau(&self, j: usize) -> f64 {
        (j as f64 - (self.n as f64 - 1.0) / 2.0) * self.d_tau
    }

    #[inline]
    pub fn tau_max(&self) -> f64 {
        (self.n as f64 - 1.0) / 2.0 * self.d_tau
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.tau(j)).collect()
    }

    /// Period 2 pi / d_tau of the reconstruction in s; inverse transforms
    /// onto log ranges longer than this alias.
    pub fn s_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.d_tau
    }

    fn is_dual_of(&self, grid: &LogGrid) -> bool {
        self.n == grid.len()
            && (self.d_tau * self.n as f64 * grid.d_s() / (2.0 * std::f64::consts::PI) - 1.0).abs()
                < 1e-9
    }
}

/// Samples of a Mellin transform along one weight line.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinFunction {
    pub line: WeightLine,
    pub tau: TauGrid,
    pub values: Vec<Complex64>,
}

impl MellinFunction {
    pub fn new(line: WeightLine, tau: TauGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != tau.len() {
            return Err(Error::LengthMismatch { expected: tau.len(), got: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(MellinFunction { line, tau, values })
    }

    /// Samples f(beta + i tau_j) over the grid.
    pub fn from_fn<F: FnMut(Complex64) -> Complex64>(
        line: WeightLine,
        tau: TauGrid,
        mut f: F,
    ) -> Result<Self> {
        let values = (0..tau.len()).map(|j| f(line.at(tau.tau(j)))).collect();
        MellinFunction::new(line, tau, values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn resolution_check(d_s: f64, beta: f64) -> Result<()> {
    if d_s * beta.abs().max(1.0) > RESOLUTION_BOUND {
        return Err(Error::GridTooCoarse { d_s, beta, bound: RESOLUTION_BOUND });
    }
    Ok(())
}

/// Forward transform of grid samples along one line, by trapezoidal
/// quadrature in s = ln t realized as a single FFT on the dual grid.
///
/// The quadrature truncates the integral to the grid, so the weighted
/// samples `e^{beta s} u(e^s)` must decay at both ends; a
/// [`Warning::SupportLeak`] reports by how much they fail to.
pub fn forward(u: &SampledFunction, line: WeightLine) -> Result<(MellinFunction, Vec<Warning>)> {
    let grid = u.grid;
    let n = grid.len();
    let d_s = grid.d_s();
    resolution_check(d_s, line.beta)?;

    let mut weighted: Vec<Complex64> = (0..n)
        .map(|k| u.values[k] * (line.beta * grid.s(k)).exp())
        .collect();

    let mut warnings = Vec::new();
    let sup = weighted.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if sup > 0.0 {
        for (end, k) in [("lower", 0), ("upper", n - 1)] {
            let rel = weighted[k].norm() / sup;
            if rel > SUPPORT_DECAY_FACTOR {
                warnings.push(Warning::SupportLeak { end, relative_magnitude: rel });
            }
        }
    }

    let tau = TauGrid::dual_of(&grid);
    // e^{i tau_j s_k} = e^{i tau_j s_min} e^{i k d_s tau_0} e^{2 pi i jk / n},
    // so one inverse FFT of the phase-modulated, trapezoid-weighted samples
    // evaluates the quadrature on every line point at once.
    let tau0 = tau.tau(0);
    for (k, v) in weighted.iter_mut().enumerate() {
        let w = if k == 0 || k == n - 1 { 0.5 * d_s } else { d_s };
        *v *= w * Complex64::from_polar(1.0, k as f64 * d_s * tau0);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut weighted);
    let values: Vec<Complex64> = weighted
        .iter()
        .enumerate()
        .map(|(j, x)| x * Complex64::from_polar(1.0, tau.tau(j) * grid.s_min()))
        .collect();

    Ok((MellinFunction { line, tau, values }, warnings))
}

/// Inverse transform `(1 / 2 pi i) integral_{Re z = beta} t^{-z} F(z) dz`
/// onto a log grid, by trapezoidal quadrature in tau.
///
/// When the frequency grid is the discrete-Fourier dual of the target
/// grid this is a single FFT and inverts [`forward`] to rounding error;
/// otherwise the oscillatory sums are evaluated directly.  Log ranges
/// longer than the reconstruction period of the frequency grid are
/// rejected as aliasing; transform samples that have not decayed at the
/// ends of the line are reported as a [`Warning::TailLeak`].
pub fn inverse(f: &MellinFunction, grid: &LogGrid) -> Result<(SampledFunction, Vec<Warning>)> {
    let beta = f.line.beta;
    resolution_check(grid.d_s(), beta)?;
    let span = grid.s_max() - grid.s_min();
    if span > f.tau.s_period() * (1.0 + 1e-9) {
        return Err(Error::Aliasing { s_span: span, period: f.tau.s_period() });
    }

    let mut warnings = Vec::new();
    let sup = f.sup_norm();
    if sup > 0.0 {
        let edge = f.values[0].norm().max(f.values[f.tau.len() - 1].norm()) / sup;
        if edge > SUPPORT_DECAY_FACTOR {
            warnings.push(Warning::TailLeak { relative_magnitude: edge });
        }
    }

    let m = f.tau.len();
    let n = grid.len();
    let d_tau = f.tau.d_tau();
    let scale = d_tau / (2.0 * std::f64::consts::PI);

    let mut halved: Vec<Complex64> = f.values.clone();
    halved[0] *= 0.5;
    halved[m - 1] *= 0.5;

    let values: Vec<Complex64> = if f.tau.is_dual_of(grid) {
        let tau0 = f.tau.tau(0);
        let mut buf: Vec<Complex64> = halved
            .iter()
            .enumerate()
            .map(|(j, v)| v * Complex64::from_polar(1.0, -f.tau.tau(j) * grid.s_min()))
            .collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        buf.iter()
            .enumerate()
            .map(|(k, y)| {
                let s = grid.s(k);
                y * scale
                    * (-beta * s).exp()
                    * Complex64::from_polar(1.0, -(k as f64) * grid.d_s() * tau0)
            })
            .collect()
    } else {
        (0..n)
            .map(|k| {
                let s = grid.s(k);
                // Rotate e^{-i tau_j s} incrementally across j.
                let step = Complex64::from_polar(1.0, -d_tau * s);
                let mut phase = Complex64::from_polar(1.0, -f.tau.tau(0) * s);
                let mut acc = Complex64::new(0.0, 0.0);
                for v in &halved {
                    acc += v * phase;
                    phase *= step;
                }
                acc * scale * (-beta * s).exp()
            })
            .collect()
    };

    Ok((SampledFunction { grid: *grid, values }, warnings))
}

/// Transform of grid samples at one arbitrary point z, by the same
/// trapezoidal quadrature as [`forward`].  The result is an entire
/// function of z (a finite exponential sum), so it may be evaluated off
/// every weight line, e.g. on small circles for Cauchy integrals.
pub fn transform_at(u: &SampledFunction, z: Complex64) -> Complex64 {
    let grid = u.grid;
    let d_s = grid.d_s();
    let n = grid.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let w = if k == 0 || k == n - 1 { 0.5 * d_s } else { d_s };
        acc += w * u.values[k] * (z * grid.s(k)).exp();
    }
    acc
}

/// The Fuchs derivative `-t d/dt` of grid samples, computed as -d/ds by
/// fourth-order finite differences (one-sided stencils at the ends).
/// Under the transform it multiplies by z: `M(-t u')(z) = z (M u)(z)`.
pub fn apply_fuchs_derivative(u: &SampledFunction) -> SampledFunction {
    let n = u.len();
    let h = u.grid.d_s();
    let v = &u.values;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let inv12h = 1.0 / (12.0 * h);
    for k in 2..n - 2 {
        out[k] = -(v[k - 2] - 8.0 * v[k - 1] + 8.0 * v[k + 1] - v[k + 2]) * inv12h;
    }
    out[0] = -(-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * inv12h;
    out[1] = -(-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * inv12h;
    out[n - 2] = -(3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4]
        - v[n - 5])
        * inv12h;
    out[n - 1] = -(25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4]
        + 3.0 * v[n - 5])
        * inv12h;
    SampledFunction { grid: u.grid, values: out }
}

/// Closed-form principal part of the transform of t^{-p} ln^k t times a
/// cutoff with plateau ending at a: the k-th z-derivative of
/// a^{z-p} / (z-p).  Meromorphic with a single pole of order k + 1 at
/// z = p; Laurent coefficients at the pole are `(-1)^k k!` in order
/// -(k+1) and zero in orders -k..-1.
pub fn log_power_principal_part(p: f64, k: u32, cutoff: &CutoffSpec, z: Complex64) -> Complex64 {
    let w = z - p;
    let ln_a = cutoff.plateau_end().ln();
    // d^k/dw^k [a^w / w] by the product rule:
    // a^w sum_i C(k,i) (ln a)^{k-i} (-1)^i i! / w^{i+1}.
    let mut sum = Complex64::new(0.0, 0.0);
    let mut binom = 1.0;
    let mut sign_fact = 1.0; // (-1)^i i!
    let mut w_pow = w; // w^{i+1}
    for i in 0..=k {
        sum += binom * ln_a.powi((k - i) as i32) * sign_fact / w_pow;
        binom *= (k - i) as f64 / (i + 1) as f64;
        sign_fact *= -((i + 1) as f64);
        w_pow *= w;
    }
    (w * ln_a).exp() * sum
}

/// Laurent coefficients of the principal part at z = p, in orders
/// -1, -2, ..., -(k+1).
pub fn log_power_laurent(k: u32) -> Vec<Complex64> {
    let mut laurent = vec![Complex64::new(0.0, 0.0); k as usize + 1];
    let mut lead = 1.0;
    for i in 1..=k {
        lead *= -(i as f64);
    }
    laurent[k as usize] = Complex64::new(lead, 0.0);
    laurent
}

/// Meromorphic extension of the transform of `t^{-p} ln^k t` times a
/// cutoff: the closed-form principal part plus the entire remainder
/// integral over the transition interval of the cutoff.
///
/// Points within [`NEAR_POLE_FLOOR`] of the pole are rejected with
/// [`Error::NearPole`] carrying the Laurent data.
pub fn log_power_transform(p: f64, k: u32, cutoff: &CutoffSpec, z: Complex64) -> Result<Complex64> {
    let w = z - p;
    if w.norm() < NEAR_POLE_FLOOR {
        return Err(Error::NearPole {
            location: Complex64::new(p, 0.0),
            laurent: log_power_laurent(k),
            floor: NEAR_POLE_FLOOR,
        });
    }
    let a = cutoff.plateau_end();
    let b = cutoff.support_end();
    // Oscillation count of t^{w} across [a, b] sets the panel budget.
    let osc = w.im.abs() * (b / a).ln();
    let panels = 1024 + 32 * (osc.ceil() as usize);
    let remainder = quad::simpson(
        |t| (w * t.ln()).exp() * t.ln().powi(k as i32) * cutoff.eval(t) / t,
        a,
        b,
        panels,
    );
    Ok(log_power_principal_part(p, k, cutoff, z) + remainder)
}

/// Slope-based estimate of the pole order of f at `center`: fits
/// log mean|f| against log r on two circles of radii r0 > r1.  Returns
/// the (fractional) order; round to obtain an integer order.
pub fn estimate_pole_order<F: FnMut(Complex64) -> Complex64>(
    mut f: F,
    center: Complex64,
    r0: f64,
    r1: f64,
) -> f64 {
    let mean_abs = |f: &mut F, r: f64| -> f64 {
        let m = 32;
        (0..m)
            .map(|i| {
                let ang = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                f(center + Complex64::from_polar(r, ang)).norm()
            })
            .sum::<f64>()
            / m as f64
    };
    let m0 = mean_abs(&mut f, r0);
    let m1 = mean_abs(&mut f, r1);
    -(m0.ln() - m1.ln()) / (r0.ln() - r1.ln())
}
