//! Logarithmic grids on the half-line and functions sampled on them.
//!
//! Everything in this crate works in the variable s = ln t, where the
//! half-line (0, inf) becomes the real axis and Mellin transforms become
//! Fourier integrals.  A [`LogGrid`] is a uniform grid in s; a
//! [`SampledFunction`] holds complex samples of u(t) at the grid points
//! t_k = exp(s_k).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fraction of the sup norm below which endpoint samples count as decayed.
pub const SUPPORT_DECAY_FACTOR: f64 = 1e-12;

/// Uniform grid in s = ln t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    s_min: f64,
    s_max: f64,
    n_points: usize,
}

impl LogGrid {
    /// Builds a grid with `n_points` uniform samples of s on [s_min, s_max].
    pub fn new(s_min: f64, s_max: f64, n_points: usize) -> Result<Self> {
        if !s_min.is_finite() || !s_max.is_finite() {
            return Err(Error::GridNotFinite { s_min, s_max });
        }
        if s_min >= s_max {
            return Err(Error::GridReversed { s_min, s_max });
        }
        if n_points < 8 {
            return Err(Error::GridTooSmall { min: 8, got: n_points });
        }
        Ok(LogGrid { s_min, s_max, n_points })
    }

    /// Default collar grid: s in [-12, 6] with 4096 points, i.e.
    /// t from about 6.1e-6 to 4.0e2.  Wide enough that every bump profile
    /// used in this crate decays below [`SUPPORT_DECAY_FACTOR`] at the ends.
    pub fn standard() -> Self {
        LogGrid { s_min: -12.0, s_max: 6.0, n_points: 4096 }
    }

    #[inline]
    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    #[inline]
    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid step in s.
    #[inline]
    pub fn d_s(&self) -> f64 {
        (self.s_max - self.s_min) / (self.n_points - 1) as f64
    }

    #[inline]
    pub fn s(&self, k: usize) -> f64 {
        self.s_min + k as f64 * self.d_s()
    }

    /// t-coordinate of the k-th node.
    #[inline]
    pub fn t(&self, k: usize) -> f64 {
        self.s(k).exp()
    }

    pub fn s_values(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.s(k)).collect()
    }

    pub fn t_values(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.t(k)).collect()
    }

    /// Trapezoidal quadrature weights for integrals in ds (endpoints halved).
    /// Against samples of f(e^s) these discretize the measure dt/t.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let d_s = self.d_s();
        let mut w = vec![d_s; self.n_points];
        w[0] = 0.5 * d_s;
        w[self.n_points - 1] = 0.5 * d_s;
        w
    }

    /// Grid with the same step, extended downward so that s_min decreases
    /// by `extra`.  Used for refinement studies of weighted norms.
    pub fn extended_down(&self, extra: f64) -> Result<Self> {
        let d_s = self.d_s();
        let add = (extra / d_s).ceil() as usize;
        LogGrid::new(self.s_min - add as f64 * d_s, self.s_max, self.n_points + add)
    }
}

/// Complex samples of a function on a [`LogGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: LogGrid,
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: LogGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(SampledFunction { grid, values })
    }

    /// Samples f(t) at the grid nodes.
    pub fn from_fn<F: FnMut(f64) -> Complex64>(grid: LogGrid, mut f: F) -> Result<Self> {
        let values = (0..grid.len()).map(|k| f(grid.t(k))).collect();
        SampledFunction::new(grid, values)
    }

    /// Samples a real-valued f(t).
    pub fn from_real_fn<F: FnMut(f64) -> f64>(grid: LogGrid, mut f: F) -> Result<Self> {
        SampledFunction::from_fn(grid, |t| Complex64::new(f(t), 0.0))
    }

    pub fn zero(grid: LogGrid) -> Self {
        SampledFunction { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Endpoint magnitudes relative to the sup norm: (lower, upper).
    /// A function counts as collar-supported on the grid when both are
    /// below [`SUPPORT_DECAY_FACTOR`].  A zero function trivially passes.
    pub fn endpoint_defect(&self) -> (f64, f64) {
        let sup = self.sup_norm();
        if sup == 0.0 {
            return (0.0, 0.0);
        }
        (self.values[0].norm() / sup, self.values[self.len() - 1].norm() / sup)
    }

    /// Pointwise product with t^gamma.
    pub fn scale_by_power(&self, gamma: f64) -> SampledFunction {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v * (gamma * self.grid.s(k)).exp())
            .collect();
        SampledFunction { grid: self.grid, values }
    }

    /// L2 norm with respect to dt/t (trapezoidal in s).
    pub fn l2_log_norm(&self) -> f64 {
        let w = self.grid.trapezoid_weights();
        self.values
            .iter()
            .zip(&w)
            .map(|(v, wk)| wk * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// L2 norm with respect to dt = e^s ds.
    pub fn l2_norm(&self) -> f64 {
        let w = self.grid.trapezoid_weights();
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| w[k] * self.grid.t(k) * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reversed_and_degenerate_grids() {
        assert!(LogGrid::new(2.0, -1.0, 64).is_err());
        assert!(LogGrid::new(0.0, 0.0, 64).is_err());
        assert!(LogGrid::new(0.0, 1.0, 3).is_err());
        assert!(LogGrid::new(f64::NAN, 1.0, 64).is_err());
    }

    #[test]
    fn nodes_and_step_are_consistent() {
        let g = LogGrid::new(-2.0, 2.0, 101).unwrap();
        assert!((g.d_s() - 0.04).abs() < 1e-15);
        assert!((g.s(0) - -2.0).abs() < 1e-15);
        assert!((g.s(100) - 2.0).abs() < 1e-12);
        assert!((g.t(50) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_weights_integrate_dt_over_t() {
        // integral of t over dt/t on [e^-1, e^1] is e - e^-1.
        let g = LogGrid::new(-1.0, 1.0, 2001).unwrap();
        let f = SampledFunction::from_real_fn(g, |t| t.sqrt()).unwrap();
        // l2_log_norm^2 = integral of t ds = e - 1/e.
        let exact = 1.0_f64.exp() - (-1.0_f64).exp();
        let got = f.l2_log_norm().powi(2);
        assert!((got - exact).abs() < 1e-6, "got {got}, want {exact}");
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let g = LogGrid::new(0.0, 1.0, 16).unwrap();
        assert!(SampledFunction::new(g, vec![Complex64::new(1.0, 0.0); 15]).is_err());
    }

    #[test]
    fn power_scaling_matches_direct_sampling() {
        let g = LogGrid::new(-3.0, 1.0, 257).unwrap();
        let f = SampledFunction::from_real_fn(g, |t| (-t).exp()).unwrap();
        let scaled = f.scale_by_power(1.5);
        let direct = SampledFunction::from_real_fn(g, |t| t.powf(1.5) * (-t).exp()).unwrap();
        for (a, b) in scaled.values.iter().zip(&direct.values) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn endpoint_defect_flags_undecayed_samples() {
        let g = LogGrid::new(-12.0, 6.0, 512).unwrap();
        let bump = SampledFunction::from_real_fn(g, |t| (-(t.ln() + 3.0).powi(2) / 2.0).exp()).unwrap();
        let (lo, hi) = bump.endpoint_defect();
        assert!(lo < SUPPORT_DECAY_FACTOR && hi < SUPPORT_DECAY_FACTOR);

        let flat = SampledFunction::from_real_fn(g, |_| 1.0).unwrap();
        let (lo, hi) = flat.endpoint_defect();
        assert!(lo > 0.5 && hi > 0.5);
    }
}
