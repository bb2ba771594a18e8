//! The planar wedge: the model cone of opening angle alpha.
//!
//! In polar coordinates (t, theta) the Dirichlet Laplacian on the wedge
//! 0 < theta < alpha reduces to t^{-2} ((t d/dt)^2 + d^2/d theta^2), and
//! separation into sine modes turns the bracket into the pencil
//! z^2 - (m pi / alpha)^2 under the Mellin transform.  Everything about
//! the general calculus can be watched explicitly here: the homogeneous
//! singular solutions t^{j pi / alpha} sin(j pi theta / alpha), their
//! square-integrability threshold at alpha = pi, and the dependence of a
//! Mellin solve on the chosen weight line, with solutions on two sides
//! of an exponent differing by a pure power.

use crate::cutoff::CutoffSpec;
use crate::error::{Error, Result, Warning};
use crate::grid::{LogGrid, SampledFunction};
use crate::mellin::{forward, inverse, WeightLine};
use crate::sobolev::{membership, ModelFunction, SpaceParams};
use std::f64::consts::PI;

/// Default sine-mode truncation of wedge problems.
pub const DEFAULT_MODES: usize = 16;

/// Weight lines closer than this to an exponent are rejected by
/// [`mellin_solve`].
pub const NEAR_LINE_TOL: f64 = 1e-6;

/// Dirichlet problem on the wedge of opening alpha, truncated to the
/// first `modes` sine modes, discretized radially on `grid`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeProblem {
    pub alpha: f64,
    pub modes: usize,
    pub grid: LogGrid,
}

impl WedgeProblem {
    pub fn new(alpha: f64, modes: usize, grid: LogGrid) -> Result<Self> {
        check_angle(alpha)?;
        if modes == 0 {
            return Err(Error::NoModes);
        }
        Ok(WedgeProblem { alpha, modes, grid })
    }

    /// Singular exponent m pi / alpha of the m-th sine mode.
    pub fn exponent(&self, m: usize) -> f64 {
        m as f64 * PI / self.alpha
    }

    /// Sine mode shape sin(m pi theta / alpha), vanishing at both walls.
    pub fn mode_shape(&self, m: usize, theta: f64) -> f64 {
        (m as f64 * PI * theta / self.alpha).sin()
    }

    /// Sum of the retained modes at radial index k and angle theta.
    /// An angular raster needs at least 2 * modes + 1 samples across the
    /// opening to keep the highest retained mode alias-free.
    pub fn reconstruct_at(
        &self,
        modes: &[SampledFunction],
        k: usize,
        theta: f64,
    ) -> num_complex::Complex64 {
        modes
            .iter()
            .enumerate()
            .map(|(i, u)| u.values[k] * self.mode_shape(i + 1, theta))
            .sum()
    }
}

fn check_angle(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0 * PI) {
        return Err(Error::BadCrossSection(format!(
            "wedge opening must lie in (0, 2 pi), got {alpha}"
        )));
    }
    Ok(())
}

/// Homogeneous solution t^{j pi / alpha} sin(|j| pi theta / alpha) of
/// the Dirichlet wedge problem; j ranges over nonzero integers, with the
/// sign selecting the radial branch (negative j is unbounded at the tip)
/// and |j| the angular mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularSolution {
    pub alpha: f64,
    pub j: i32,
}

impl SingularSolution {
    pub fn new(alpha: f64, j: i32) -> Result<Self> {
        check_angle(alpha)?;
        if j == 0 {
            return Err(Error::BadCrossSection("mode index j must be nonzero".into()));
        }
        Ok(SingularSolution { alpha, j })
    }

    /// Growth exponent j pi / alpha, carrying the sign of j.
    pub fn exponent(&self) -> f64 {
        self.j as f64 * PI / self.alpha
    }

    /// Angular frequency |j| pi / alpha.
    pub fn frequency(&self) -> f64 {
        self.j.unsigned_abs() as f64 * PI / self.alpha
    }

    pub fn value(&self, t: f64, theta: f64) -> f64 {
        t.powf(self.exponent()) * (self.frequency() * theta).sin()
    }

    /// Radial derivative d/dt.
    pub fn d_t(&self, t: f64, theta: f64) -> f64 {
        let q = self.exponent();
        q * t.powf(q - 1.0) * (self.frequency() * theta).sin()
    }

    /// Second radial derivative d^2/dt^2.
    pub fn d_tt(&self, t: f64, theta: f64) -> f64 {
        let q = self.exponent();
        q * (q - 1.0) * t.powf(q - 2.0) * (self.frequency() * theta).sin()
    }

    pub fn d_theta(&self, t: f64, theta: f64) -> f64 {
        let w = self.frequency();
        w * t.powf(self.exponent()) * (w * theta).cos()
    }

    pub fn d_theta_theta(&self, t: f64, theta: f64) -> f64 {
        let w = self.frequency();
        -w * w * t.powf(self.exponent()) * (w * theta).sin()
    }

    /// The Fuchs derivative (t d/dt) applied twice, in closed form.
    pub fn fuchs_sq(&self, t: f64, theta: f64) -> f64 {
        let q = self.exponent();
        q * q * self.value(t, theta)
    }
}

/// Largest residual of ((t d/dt)^2 + d^2/d theta^2) over the probes,
/// from the closed-form derivatives, normalized by the local magnitude
/// q^2 t^q of the separated terms.  Zero in exact arithmetic
/// (q^2 - q^2); in floating point only rounding survives.
pub fn wedge_residual(sol: &SingularSolution, probes: &[(f64, f64)]) -> f64 {
    let q = sol.exponent();
    probes
        .iter()
        .map(|&(t, theta)| {
            let res = (sol.fuchs_sq(t, theta) + sol.d_theta_theta(t, theta)).abs();
            res / (q * q * t.powf(q)).abs().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

/// Same residual with both second derivatives replaced by centered
/// three-point differences of step h (in ln t radially); converges at
/// second order, so halving h quarters the result.  Works on any
/// evaluator, which makes perturbed negative controls possible.
pub fn fuchs_laplace_residual_fd<F: Fn(f64, f64) -> f64>(
    f: F,
    probes: &[(f64, f64)],
    h: f64,
    scale: impl Fn(f64, f64) -> f64,
) -> f64 {
    probes
        .iter()
        .map(|&(t, theta)| {
            let center = f(t, theta);
            let radial =
                (f(t * h.exp(), theta) - 2.0 * center + f(t * (-h).exp(), theta)) / (h * h);
            let angular = (f(t, theta + h) - 2.0 * center + f(t, theta - h)) / (h * h);
            (radial + angular).abs() / scale(t, theta).abs().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

/// Square-integrability of the singular solution near the tip with
/// respect to t dt d theta: the exponent criterion of the weighted
/// spaces at n = 1, gamma = 0, p = 2, which comes down to
/// j pi / alpha > -1.  For j = -1 this is the opening-angle dichotomy:
/// true exactly when alpha > pi.
pub fn l2_classification(alpha: f64, j: i32) -> Result<bool> {
    let sol = SingularSolution::new(alpha, j)?;
    let model = ModelFunction {
        p_exp: -sol.exponent(),
        k: 0,
        mode: j.unsigned_abs() as usize,
        cutoff: CutoffSpec::standard(),
    };
    let params = SpaceParams::new(0, 0.0, 2.0, 1)?;
    Ok(membership(&model, &params))
}

/// Solves ((t d/dt)^2 + d^2/d theta^2) v = f mode by mode on the weight
/// line Re z = beta: each sine mode m of the right-hand side is
/// transformed, divided by z^2 - (m pi / alpha)^2, and inverted.  The
/// result depends on which window between exponents beta lies in;
/// solutions across one exponent differ by a residue multiple of the
/// corresponding homogeneous solution.
pub fn mellin_solve(
    problem: &WedgeProblem,
    f_modes: &[SampledFunction],
    beta: f64,
) -> Result<(Vec<SampledFunction>, Vec<Warning>)> {
    if f_modes.len() != problem.modes {
        return Err(Error::ModeCountMismatch { expected: problem.modes, got: f_modes.len() });
    }
    for m in 1..=problem.modes {
        let q = problem.exponent(m);
        for exponent in [q, -q] {
            let dist = (beta - exponent).abs();
            if dist < NEAR_LINE_TOL {
                return Err(Error::LineOnSpectrum { beta, exponent, mode: m, dist });
            }
        }
    }

    let line = WeightLine::new(beta);
    let mut warnings = Vec::new();
    let mut solution = Vec::with_capacity(problem.modes);
    for (i, f) in f_modes.iter().enumerate() {
        let q = problem.exponent(i + 1);
        let (mut transform, fw) = forward(f, line)?;
        warnings.extend(fw);
        for (j, value) in transform.values.iter_mut().enumerate() {
            let z = line.at(transform.tau.tau(j));
            *value /= z * z - q * q;
        }
        let (v, iw) = inverse(&transform, &problem.grid)?;
        warnings.extend(iw);
        solution.push(v);
    }
    Ok((solution, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cross_section::interval_dirichlet_spectrum;
    use crate::grid::LogGrid;
    use crate::mellin::{apply_fuchs_derivative, transform_at};
    use crate::operator::{singular_exponents, ConeMetric};
    use num_complex::Complex64;

    fn probes() -> Vec<(f64, f64)> {
        let mut p = Vec::new();
        for it in 1..=5 {
            for ia in 1..=7 {
                p.push((0.3 * it as f64, PI / 2.0 * ia as f64 / 8.0));
            }
        }
        p
    }

    #[test]
    fn closed_forms_and_boundary_values() {
        // alpha = pi/2, j = -1: the unbounded solution t^{-2} sin(2 theta).
        let sol = SingularSolution::new(PI / 2.0, -1).unwrap();
        assert!((sol.exponent() + 2.0).abs() < 1e-15);
        let (t, th) = (0.7, 0.4);
        assert!((sol.value(t, th) - t.powi(-2) * (2.0 * th).sin()).abs() < 1e-14);

        // j = 1, alpha = pi: the harmonic coordinate y = t sin theta.
        let flat = SingularSolution::new(PI, 1).unwrap();
        assert!((flat.value(2.0, 0.3) - 2.0 * 0.3f64.sin()).abs() < 1e-14);

        // Dirichlet walls.
        for j in [-2i32, -1, 1, 3] {
            let s = SingularSolution::new(1.3, j).unwrap();
            for t in [0.2, 1.0, 2.5] {
                assert!(s.value(t, 0.0).abs() <= 1e-12 * t.powf(s.exponent()).abs());
                assert!(s.value(t, 1.3).abs() <= 1e-12 * t.powf(s.exponent()).abs());
            }
        }

        assert!(SingularSolution::new(PI, 0).is_err());
        assert!(SingularSolution::new(2.0 * PI, 1).is_err());
        assert!(WedgeProblem::new(7.0, 4, LogGrid::standard()).is_err());
    }

    #[test]
    fn analytic_residual_vanishes() {
        for (alpha, j) in [(PI / 2.0, -1), (PI / 2.0, 2), (1.9, -3), (4.4, 1)] {
            let sol = SingularSolution::new(alpha, j).unwrap();
            let res = wedge_residual(&sol, &probes());
            assert!(res <= 1e-12, "alpha {alpha}, j {j}: residual {res:.2e}");
        }
    }

    #[test]
    fn finite_difference_residual_converges_at_second_order() {
        let sol = SingularSolution::new(PI / 2.0, -1).unwrap();
        let q = sol.exponent();
        let scale = move |t: f64, _: f64| q * q * t.powf(q);
        let r1 = fuchs_laplace_residual_fd(|t, th| sol.value(t, th), &probes(), 1e-2, scale);
        let r2 = fuchs_laplace_residual_fd(|t, th| sol.value(t, th), &probes(), 5e-3, scale);
        let order = (r1 / r2).log2();
        assert!(order > 1.9 && order < 2.1, "r1 {r1:.3e}, r2 {r2:.3e}, order {order:.3}");

        // Negative control: a perturbed exponent leaves a residual that
        // does not vanish with h.
        let bad = move |t: f64, th: f64| t.powf(q + 0.1) * (q * th).sin();
        let rb1 = fuchs_laplace_residual_fd(bad, &probes(), 1e-2, scale);
        let rb2 = fuchs_laplace_residual_fd(bad, &probes(), 5e-3, scale);
        assert!(rb1 > 1e-3 && rb2 > 1e-3, "perturbed residuals {rb1:.3e}, {rb2:.3e}");
    }

    #[test]
    fn square_integrability_flips_at_alpha_pi() {
        assert!(!l2_classification(PI / 2.0, -1).unwrap());
        assert!(l2_classification(3.0 * PI / 2.0, -1).unwrap());
        // Positive modes are bounded near the tip, always integrable.
        for alpha in [0.4, PI, 5.9] {
            assert!(l2_classification(alpha, 1).unwrap());
            assert!(l2_classification(alpha, 3).unwrap());
        }
    }

    #[test]
    fn exponents_agree_with_the_interval_spectrum() {
        let alpha = 1.1;
        let problem = WedgeProblem::new(alpha, 4, LogGrid::standard()).unwrap();
        let metric = ConeMetric::straight(interval_dirichlet_spectrum(alpha, 4).unwrap());
        let set = singular_exponents(&metric);
        let mut want: Vec<f64> = (1..=4)
            .flat_map(|m| [problem.exponent(m), -problem.exponent(m)])
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let got: Vec<f64> = set.exponents().iter().map(|e| e.q).collect();
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-12 * w.abs().max(1.0), "got {g}, want {w}");
        }
    }

    #[test]
    fn manufactured_solution_is_recovered() {
        // g is a bump in s = ln t; f = ((t d/dt)^2 - q_m^2) g must solve
        // back to g on a line in the window containing g's decay.
        let grid = LogGrid::standard();
        let problem = WedgeProblem::new(PI / 2.0, 2, grid).unwrap();
        let g = SampledFunction::from_real_fn(grid, |t| {
            let s = t.ln();
            (-(s + 3.0f64).powi(2)).exp()
        })
        .unwrap();
        let f_modes: Vec<SampledFunction> = (1..=2)
            .map(|m| {
                let q = problem.exponent(m);
                let dd = apply_fuchs_derivative(&apply_fuchs_derivative(&g));
                SampledFunction::new(
                    grid,
                    (0..g.len()).map(|k| dd.values[k] - q * q * g.values[k]).collect(),
                )
                .unwrap()
            })
            .collect();
        let (v, _) = mellin_solve(&problem, &f_modes, 0.5).unwrap();
        for (m, vm) in v.iter().enumerate() {
            let err = (0..grid.len())
                .map(|k| (vm.values[k] - g.values[k]).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-5, "mode {}: err {err:.2e}", m + 1);
        }

        // f = 0 solves to 0.
        let zeros = vec![SampledFunction::zero(grid), SampledFunction::zero(grid)];
        let (v, _) = mellin_solve(&problem, &zeros, 0.5).unwrap();
        assert!(v.iter().all(|u| u.sup_norm() == 0.0));
    }

    #[test]
    fn weight_line_jump_is_a_residue_multiple_of_the_mode() {
        // Solve the same data on both sides of the exponent q_1 = 2
        // (alpha = pi/2).  The mode-1 solutions differ by
        // t^{-2} M f_1(2) / (2 * 2); mode 2 crosses no exponent and must
        // not move.  The reconstruction aliases at e^{-d P} for a line at
        // distance d = 1/2 from the pole, so the grid must be wide: the
        // span P = 36 puts the alias near 2e-8.
        let grid = LogGrid::new(-18.0, 18.0, 8192).unwrap();
        let problem = WedgeProblem::new(PI / 2.0, 2, grid).unwrap();
        let f: Vec<SampledFunction> = (0..2)
            .map(|i| {
                SampledFunction::from_real_fn(grid, |t| {
                    let s = t.ln();
                    (-(s + 2.0 + 0.3 * i as f64).powi(2) / 1.3).exp()
                })
                .unwrap()
            })
            .collect();
        let q = problem.exponent(1);
        let (above, _) = mellin_solve(&problem, &f, q + 0.5).unwrap();
        let (below, _) = mellin_solve(&problem, &f, q - 0.5).unwrap();

        let residue = transform_at(&f[0], Complex64::new(q, 0.0)) / (2.0 * q);
        let scale = above[0].sup_norm().max(below[0].sup_norm());
        let err = (0..grid.len())
            .map(|k| {
                let jump = above[0].values[k] - below[0].values[k];
                (jump - residue * grid.t(k).powf(-q)).norm()
            })
            .fold(0.0, f64::max);
        assert!(err / scale < 1e-6, "jump mismatch {:.2e}", err / scale);

        // No exponent of mode 2 lies in (1.5, 2.5): its solution is
        // line-independent.  Compared in the e^{beta s}-weighted sup
        // norm, the one the reconstruction controls; near t = 0 the
        // unweighted values sit below the wraparound floor of the
        // periodized inverse and carry no information.
        let weighted = |u: &SampledFunction, k: usize| {
            u.values[k].norm() * ((q + 0.5) * grid.s(k)).exp()
        };
        let wsup = (0..grid.len()).map(|k| weighted(&above[1], k)).fold(0.0, f64::max);
        let wdiff = (0..grid.len())
            .map(|k| {
                (above[1].values[k] - below[1].values[k]).norm()
                    * ((q + 0.5) * grid.s(k)).exp()
            })
            .fold(0.0, f64::max);
        assert!(wdiff / wsup < 1e-6, "mode 2 moved {:.2e}", wdiff / wsup);
    }

    #[test]
    fn lines_on_exponents_are_rejected() {
        let grid = LogGrid::standard();
        let problem = WedgeProblem::new(PI / 2.0, 2, grid).unwrap();
        let zeros = vec![SampledFunction::zero(grid), SampledFunction::zero(grid)];
        for beta in [2.0, -2.0, 4.0, 2.0 + 0.5e-6] {
            assert!(
                matches!(
                    mellin_solve(&problem, &zeros, beta),
                    Err(Error::LineOnSpectrum { .. })
                ),
                "beta = {beta}"
            );
        }
        assert!(matches!(
            mellin_solve(&problem, &zeros[..1], 0.5),
            Err(Error::ModeCountMismatch { .. })
        ));
    }
}
