//! Weighted Sobolev spaces on the cone.
//!
//! A function u on the collar (0, T) x X lies in the space with
//! smoothness s, weight gamma, and integrability p when
//! `t^{(n+1)/2 - gamma} (t d/dt)^j D_x^alpha u` is L^p with respect to
//! dx dt/t for all j + |alpha| <= s.  For the model singular functions
//! `t^{-p_exp} ln^k t (mode) (cutoff)` the criterion collapses to the
//! strict inequality (n+1)/2 - gamma - p_exp > 0: Fuchs derivatives
//! preserve the exponent, log powers only shift k, and equality already
//! diverges at k = 0.
//!
//! Predicates cover every p in (1, inf); numeric norms are computed for
//! p = 2 only, where modes decouple and tangential derivatives act
//! spectrally as |lambda|^{r/2}.  Norms use the collar representation
//! alone (samples supported below the cutoff), so their values depend on
//! the cutoff; only finiteness, scaling, and refinement behavior are
//! asserted, never absolute values across cutoffs.

use serde::{Deserialize, Serialize};

use crate::cross_section::CrossSectionSpectrum;
use crate::cutoff::CutoffSpec;
use crate::error::{Error, Result, Warning};
use crate::grid::{LogGrid, SampledFunction, SUPPORT_DECAY_FACTOR};
use crate::mellin::apply_fuchs_derivative;
use crate::operator::{apply_cone_operator, ConeOperator};

/// Log-units each refinement step extends the grid toward t = 0.
pub const REFINEMENT_STEP: f64 = 1.5;

/// Increment ratio below which a refinement sequence counts as Cauchy.
pub const STABILITY_RATIO: f64 = 0.7;

/// Parameters (s, gamma, p) of a weighted space over an n-dimensional
/// cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    /// Smoothness; non-integer orders are out of numerical scope.
    pub s: u32,
    pub gamma: f64,
    pub p: f64,
    pub n: usize,
}

impl SpaceParams {
    pub fn new(s: u32, gamma: f64, p: f64, n: usize) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::BadIntegrability { p });
        }
        if !gamma.is_finite() {
            return Err(Error::IncompatibleSpaces(format!("weight must be finite, got {gamma}")));
        }
        Ok(SpaceParams { s, gamma, p, n })
    }

    /// Exponent of the weight factor t^{(n+1)/2 - gamma} in the norm;
    /// equal to the attached Mellin line Re z = (n+1)/2 - gamma.
    pub fn weight_exponent(&self) -> f64 {
        (self.n as f64 + 1.0) / 2.0 - self.gamma
    }
}

/// Model singular function t^{-p_exp} ln^k(t) (mode) (cutoff).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelFunction {
    pub p_exp: f64,
    pub k: u32,
    /// Index into the distinct modes of the ambient spectrum.
    pub mode: usize,
    pub cutoff: CutoffSpec,
}

/// Membership verdict with the exponent at which it flips.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub p_exp: f64,
    pub k: u32,
    pub params: SpaceParams,
    pub member: bool,
    /// p_exp value separating members from non-members at these params:
    /// (n+1)/2 - gamma.  Equality counts as non-membership for every k.
    pub critical_exponent: f64,
}

/// Membership of the model function: true iff
/// (n+1)/2 - gamma - p_exp > 0, strictly.  Independent of s, k, and p:
/// Fuchs derivatives preserve the exponent, and at equality the k = 0
/// integral of dt/t over (0, a) already diverges.
pub fn membership(model: &ModelFunction, params: &SpaceParams) -> bool {
    params.weight_exponent() - model.p_exp > 0.0
}

pub fn membership_report(model: &ModelFunction, params: &SpaceParams) -> MembershipReport {
    MembershipReport {
        p_exp: model.p_exp,
        k: model.k,
        params: *params,
        member: membership(model, params),
        critical_exponent: params.weight_exponent(),
    }
}

/// Integrability shift gamma_p = (n+1)(1/2 - 1/p); the weight at which
/// the p-scale space coincides with L^p of the cone measure.  Zero at
/// p = 2.
pub fn gamma_p(n: usize, p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::BadIntegrability { p });
    }
    Ok((n as f64 + 1.0) * (0.5 - 1.0 / p))
}

/// Dual exponent bookkeeping: (s, gamma, p) -> (-s, -gamma, p') with
/// 1/p + 1/p' = 1.  An involution on the parameter level; no norm-level
/// duality is computed.
pub fn dual_exponents(s: i32, gamma: f64, p: f64) -> Result<(i32, f64, f64)> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::BadIntegrability { p });
    }
    Ok((-s, -gamma, p / (p - 1.0)))
}

/// Relation of one space to another with the same p and n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Embedding {
    /// Strictly more smoothness and weight: the inclusion is compact.
    Compact,
    /// At least as much smoothness and weight.
    Continuous,
    /// No inclusion.
    None,
}

/// Embedding relation of `a` into `b`: continuous iff s >= s' and
/// gamma >= gamma', compact iff both are strict.
pub fn embeds(a: &SpaceParams, b: &SpaceParams) -> Result<Embedding> {
    if a.p != b.p {
        return Err(Error::IncompatibleSpaces(format!(
            "embedding compares spaces over one integrability, got p = {} and {}",
            a.p, b.p
        )));
    }
    if a.n != b.n {
        return Err(Error::IncompatibleSpaces(format!(
            "embedding compares spaces over one cross-section dimension, got n = {} and {}",
            a.n, b.n
        )));
    }
    if a.s >= b.s && a.gamma >= b.gamma {
        if a.s > b.s && a.gamma > b.gamma {
            Ok(Embedding::Compact)
        } else {
            Ok(Embedding::Continuous)
        }
    } else {
        Ok(Embedding::None)
    }
}

/// Samples the radial part t^{-p_exp} ln^k(t) cutoff(t) on a log grid.
pub fn sample_model(model: &ModelFunction, grid: LogGrid) -> Result<SampledFunction> {
    SampledFunction::from_real_fn(grid, |t| {
        model.cutoff.eval(t) * t.powf(-model.p_exp) * t.ln().powi(model.k as i32)
    })
}

/// Weighted norm of per-mode samples at p = 2:
///
/// ```text
/// norm^2 = sum_i sum_{j+r <= s} |lambda_i|^r
///          integral |t^{(n+1)/2-gamma} (t d/dt)^j u_i|^2 dt/t ,
/// ```
///
/// with one tangential term per total degree r (the spectral power
/// |lambda|^{r/2} stands in for the derivatives of that degree).  Mode
/// samples align with the distinct modes of the spectrum, one orthonormal
/// eigenfunction each.
///
/// The quadrature truncates to the grid; a [`Warning::SupportLeak`] at
/// the lower end means the weighted integrand has not decayed there and
/// the norm is a truncation of a possibly divergent integral.
pub fn weighted_norm(
    modes: &[SampledFunction],
    params: &SpaceParams,
    spectrum: &CrossSectionSpectrum,
) -> Result<(f64, Vec<Warning>)> {
    if params.p != 2.0 {
        return Err(Error::IncompatibleSpaces(format!(
            "numeric norms are computed at p = 2 (modes decouple); predicates cover p = {}",
            params.p
        )));
    }
    if modes.len() != spectrum.len() {
        return Err(Error::ModeCountMismatch { expected: spectrum.len(), got: modes.len() });
    }
    let beta = params.weight_exponent();
    let mut warnings = Vec::new();
    let mut total = 0.0;
    for (u, mode) in modes.iter().zip(spectrum.modes()) {
        let grid = u.grid;
        let weights = grid.trapezoid_weights();
        let mut derivs: Vec<SampledFunction> = vec![u.clone()];
        for _ in 0..params.s {
            derivs.push(apply_fuchs_derivative(derivs.last().expect("nonempty")));
        }
        // Decay check on the weighted base samples at both grid ends.
        let weighted_sup = (0..u.len())
            .map(|k| u.values[k].norm() * (beta * grid.s(k)).exp())
            .fold(0.0, f64::max);
        if weighted_sup > 0.0 {
            for (end, k) in [("lower", 0usize), ("upper", u.len() - 1)] {
                let rel = u.values[k].norm() * (beta * grid.s(k)).exp() / weighted_sup;
                if rel > SUPPORT_DECAY_FACTOR {
                    warnings.push(Warning::SupportLeak { end, relative_magnitude: rel });
                }
            }
        }
        for j in 0..=params.s {
            let radial: f64 = (0..u.len())
                .map(|k| {
                    let w = (beta * grid.s(k)).exp();
                    weights[k] * (derivs[j as usize].values[k].norm() * w).powi(2)
                })
                .sum();
            for r in 0..=(params.s - j) {
                total += mode.lambda.abs().powi(r as i32) * radial;
            }
        }
    }
    Ok((total.sqrt(), warnings))
}

/// Norm of u in the source space (s + mu, gamma + mu) and of A u in the
/// target space (s, gamma); finiteness of the second is the testable
/// consequence of boundedness of A between them.
pub fn mapping_check(
    op: &ConeOperator,
    modes: &[SampledFunction],
    params: &SpaceParams,
    spectrum: &CrossSectionSpectrum,
) -> Result<((f64, f64), Vec<Warning>)> {
    let mu = op.order();
    let source = SpaceParams::new(params.s + mu, params.gamma + mu as f64, params.p, params.n)?;
    let (norm_in, mut warnings) = weighted_norm(modes, &source, spectrum)?;
    let (image, apply_warnings) = apply_cone_operator(op, modes)?;
    warnings.extend(apply_warnings);
    let (norm_out, out_warnings) = weighted_norm(&image, params, spectrum)?;
    warnings.extend(out_warnings);
    Ok(((norm_in, norm_out), warnings))
}

/// Norms of the model function on grids successively extended toward
/// t = 0 by [`REFINEMENT_STEP`] log-units; the s = 0 single-mode norm at
/// the given weight.  The sequence is Cauchy iff the model function is a
/// member ([`refinement_stable`]).
pub fn refinement_norms(
    model: &ModelFunction,
    params: &SpaceParams,
    base: LogGrid,
    steps: usize,
) -> Result<Vec<f64>> {
    let beta = params.weight_exponent();
    let mut norms = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let grid = base.extended_down(i as f64 * REFINEMENT_STEP)?;
        let u = sample_model(model, grid)?;
        let weights = grid.trapezoid_weights();
        let sq: f64 = (0..u.len())
            .map(|k| weights[k] * (u.values[k].norm() * (beta * grid.s(k)).exp()).powi(2))
            .sum();
        norms.push(sq.sqrt());
    }
    Ok(norms)
}

/// Cauchy verdict on a refinement sequence: increments must have died
/// out entirely or keep shrinking by at least [`STABILITY_RATIO`] per
/// step.  Divergent sequences (non-members) have non-decaying
/// increments; critical cases decay slower than any geometric ratio.
pub fn refinement_stable(norms: &[f64]) -> bool {
    if norms.len() < 3 {
        return false;
    }
    let scale = norms.last().expect("nonempty").max(1.0);
    let d: Vec<f64> = norms.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let last = d[d.len() - 1];
    let prev = d[d.len() - 2];
    if last <= 1e-14 * scale {
        return true;
    }
    last / prev <= STABILITY_RATIO
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cross_section::{circle_spectrum, interval_dirichlet_spectrum};
    use crate::operator::{laplace_beltrami, ConeMetric};
    use crate::quad::simpson_real;
    use std::f64::consts::PI;

    fn model(p_exp: f64, k: u32) -> ModelFunction {
        ModelFunction { p_exp, k, mode: 0, cutoff: CutoffSpec::standard() }
    }

    fn params(s: u32, gamma: f64, n: usize) -> SpaceParams {
        SpaceParams::new(s, gamma, 2.0, n).unwrap()
    }

    #[test]
    fn space_params_reject_bad_integrability() {
        assert!(SpaceParams::new(0, 0.0, 1.0, 1).is_err());
        assert!(SpaceParams::new(0, 0.0, f64::INFINITY, 1).is_err());
        assert!(SpaceParams::new(0, 0.0, 0.5, 1).is_err());
    }

    #[test]
    fn membership_is_the_strict_exponent_criterion() {
        // Wedge solution t^{-pi/alpha} sin: member of L^2 iff alpha > pi.
        for (alpha, want) in [(PI / 2.0, false), (3.0 * PI / 2.0, true)] {
            let m = model(PI / alpha, 0);
            assert_eq!(membership(&m, &params(0, 0.0, 1)), want, "alpha = {alpha}");
        }
        // A plain cutoff is a member for every gamma < (n+1)/2.
        assert!(membership(&model(0.0, 0), &params(0, 0.999, 1)));
        assert!(!membership(&model(0.0, 0), &params(0, 1.0, 1)));
        // Equality is excluded for every log degree.
        for k in 0..3 {
            let m = model(1.0, k);
            assert!(!membership(&m, &params(0, 0.0, 1)), "k = {k}");
        }
        // Criterion is independent of s and p.
        let m = model(0.3, 1);
        let a = SpaceParams::new(3, 0.5, 2.0, 1).unwrap();
        let b = SpaceParams::new(0, 0.5, 7.0, 1).unwrap();
        assert_eq!(membership(&m, &a), membership(&m, &b));
        let report = membership_report(&m, &a);
        assert!((report.critical_exponent - 0.5).abs() < 1e-15);
        assert!(report.member);
    }

    #[test]
    fn membership_is_monotone_in_weight_and_exponent() {
        let gammas = [-2.0, -0.5, 0.0, 0.4, 1.0, 2.5];
        let exps = [-1.0, 0.0, 0.3, 0.9, 1.1, 3.0];
        for n in [1usize, 2] {
            for w in gammas.windows(2) {
                for e in exps.windows(2) {
                    // Decreasing gamma or p_exp never loses membership.
                    let hi = membership(&model(e[1], 0), &params(0, w[1], n));
                    let lo = membership(&model(e[0], 0), &params(0, w[0], n));
                    if hi {
                        assert!(lo, "gamma {} exp {} member but gamma {} exp {} not", w[1], e[1], w[0], e[0]);
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_p_identity() {
        assert_eq!(gamma_p(1, 2.0).unwrap(), 0.0);
        assert_eq!(gamma_p(4, 2.0).unwrap(), 0.0);
        assert!((gamma_p(1, 4.0).unwrap() - 0.5).abs() < 1e-15);
        // Continuous through p = 2.
        assert!(gamma_p(3, 2.0 + 1e-9).unwrap().abs() < 1e-8);
        assert!(gamma_p(1, 1.0).is_err());
    }

    #[test]
    fn duality_bookkeeping_is_an_involution() {
        for (s, gamma, p) in [(2i32, 0.7, 2.0), (0, -1.3, 3.0), (5, 0.0, 1.5)] {
            let (s1, g1, p1) = dual_exponents(s, gamma, p).unwrap();
            assert!((1.0 / p + 1.0 / p1 - 1.0).abs() < 1e-14);
            let (s2, g2, p2) = dual_exponents(s1, g1, p1).unwrap();
            assert_eq!(s2, s);
            assert!((g2 - gamma).abs() < 1e-14);
            assert!((p2 - p).abs() < 1e-14);
        }
    }

    #[test]
    fn embeddings_order_by_smoothness_and_weight() {
        let a = params(2, 1.0, 1);
        let b = params(1, 0.0, 1);
        assert_eq!(embeds(&a, &b).unwrap(), Embedding::Compact);
        assert_eq!(embeds(&a, &a).unwrap(), Embedding::Continuous);
        assert_eq!(embeds(&b, &a).unwrap(), Embedding::None);
        // Gaining smoothness while losing weight embeds in neither direction.
        let c = params(3, -1.0, 1);
        assert_eq!(embeds(&c, &a).unwrap(), Embedding::None);

        // Transitive on a chain.
        let mid = params(1, 0.5, 1);
        let lo = params(0, 0.0, 1);
        assert_eq!(embeds(&a, &mid).unwrap(), Embedding::Compact);
        assert_eq!(embeds(&mid, &lo).unwrap(), Embedding::Compact);
        assert_eq!(embeds(&a, &lo).unwrap(), Embedding::Compact);

        let other_p = SpaceParams::new(1, 0.0, 3.0, 1).unwrap();
        assert!(embeds(&a, &other_p).is_err());
        let other_n = params(1, 0.0, 2);
        assert!(embeds(&a, &other_n).is_err());
    }

    #[test]
    fn cutoff_norm_matches_direct_quadrature() {
        // s = 0, gamma = 0, n = 1: norm^2 = integral t^2 |cutoff|^2 dt/t.
        let spectrum = circle_spectrum(0).unwrap();
        let grid = LogGrid::standard();
        let u = sample_model(&model(0.0, 0), grid).unwrap();
        let (norm, warnings) = weighted_norm(&[u], &params(0, 0.0, 1), &spectrum).unwrap();
        // The weighted trace e^{s} of a plain cutoff decays only like t
        // at the lower end; the leak it reports must stay far below the
        // comparison tolerance.
        for w in &warnings {
            match w {
                Warning::SupportLeak { end: "lower", relative_magnitude } => {
                    assert!(*relative_magnitude < 1e-5)
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        let cutoff = CutoffSpec::standard();
        let oracle = simpson_real(
            |t| t * cutoff.eval(t) * cutoff.eval(t),
            0.0,
            cutoff.support_end(),
            8192,
        )
        .sqrt();
        assert!((norm - oracle).abs() < 1e-8, "norm {norm}, oracle {oracle}");
    }

    #[test]
    fn zero_and_scaling_behave_like_a_norm() {
        let spectrum = circle_spectrum(1).unwrap();
        let grid = LogGrid::standard();
        let zero = SampledFunction::zero(grid);
        let (n0, _) =
            weighted_norm(&[zero.clone(), zero], &params(2, 0.3, 1), &spectrum).unwrap();
        assert_eq!(n0, 0.0);

        let u = sample_model(&model(-1.0, 0), grid).unwrap();
        let mut scaled = u.clone();
        for v in &mut scaled.values {
            *v *= -3.5;
        }
        let zero = SampledFunction::zero(grid);
        let p = params(1, 0.0, 1);
        let (base, _) = weighted_norm(&[u, zero.clone()], &p, &spectrum).unwrap();
        let (big, _) = weighted_norm(&[scaled, zero], &p, &spectrum).unwrap();
        assert!((big - 3.5 * base).abs() < 1e-10 * base);
    }

    #[test]
    fn tangential_derivatives_enter_spectrally() {
        // One unit of tangential smoothness multiplies the mode-1 term
        // by |lambda_1| = 1 on the circle: norm^2 at s = 1 equals
        // (radial j=0 term) * (1 + |lambda|) + (radial j=1 term).
        let spectrum = circle_spectrum(1).unwrap();
        let grid = LogGrid::standard();
        let u = sample_model(&model(-2.0, 0), grid).unwrap();
        let zero = SampledFunction::zero(grid);
        let (s0, _) = weighted_norm(
            &[zero.clone(), u.clone()],
            &params(0, 0.0, 1),
            &spectrum,
        )
        .unwrap();
        let du = apply_fuchs_derivative(&u);
        let (s0_du, _) =
            weighted_norm(&[zero.clone(), du], &params(0, 0.0, 1), &spectrum).unwrap();
        let (s1, _) = weighted_norm(&[zero, u], &params(1, 0.0, 1), &spectrum).unwrap();
        let want = (2.0 * s0 * s0 + s0_du * s0_du).sqrt();
        assert!((s1 - want).abs() < 1e-10 * want, "s1 {s1}, want {want}");
    }

    #[test]
    fn norm_rejects_mismatches() {
        let spectrum = circle_spectrum(1).unwrap();
        let grid = LogGrid::standard();
        let u = SampledFunction::zero(grid);
        assert!(matches!(
            weighted_norm(&[u.clone()], &params(0, 0.0, 1), &spectrum),
            Err(Error::ModeCountMismatch { .. })
        ));
        let p4 = SpaceParams::new(0, 0.0, 4.0, 1).unwrap();
        assert!(matches!(
            weighted_norm(&[u.clone(), u], &p4, &spectrum),
            Err(Error::IncompatibleSpaces(_))
        ));
    }

    #[test]
    fn non_member_norm_warns_about_support() {
        let spectrum = circle_spectrum(0).unwrap();
        let grid = LogGrid::standard();
        // t^{-2} against weight exponent 1: weighted samples grow toward
        // t = 0, so the truncated norm must carry a lower-end warning.
        let u = sample_model(&model(2.0, 0), grid).unwrap();
        let (_, warnings) = weighted_norm(&[u], &params(0, 0.0, 1), &spectrum).unwrap();
        assert!(warnings
            .iter()
            .any(|w| matches!(w, Warning::SupportLeak { end: "lower", .. })));
    }

    #[test]
    fn mapping_check_produces_finite_norms() {
        // Delta_g on u = t^3 cutoff times mode 1, n = 1: u lies in the
        // source space (s+2, gamma+2), and Delta_g u lands in (s, gamma)
        // with finite norm.
        let spectrum = circle_spectrum(1).unwrap();
        let op = laplace_beltrami(&ConeMetric::straight(spectrum.clone()));
        let grid = LogGrid::standard();
        let u = sample_model(&model(-3.0, 0), grid).unwrap();
        let zero = SampledFunction::zero(grid);
        let ((norm_in, norm_out), _) =
            mapping_check(&op, &[zero, u], &params(0, 0.0, 1), &spectrum).unwrap();
        assert!(norm_in.is_finite() && norm_in > 0.0);
        assert!(norm_out.is_finite() && norm_out > 0.0);

        let zeros = vec![SampledFunction::zero(grid), SampledFunction::zero(grid)];
        let ((ni, no), _) =
            mapping_check(&op, &zeros, &params(0, 0.0, 1), &spectrum).unwrap();
        assert_eq!((ni, no), (0.0, 0.0));
    }

    #[test]
    fn refinement_separates_members_from_non_members() {
        let base = LogGrid::standard();
        let p = params(0, 0.0, 1);
        // Member: exponent 0.5 inside the critical exponent 1.
        let norms = refinement_norms(&model(0.5, 0), &p, base, 5).unwrap();
        assert!(refinement_stable(&norms), "member norms {norms:?}");
        // Non-member: exponent beyond critical diverges.
        let norms = refinement_norms(&model(1.5, 0), &p, base, 5).unwrap();
        assert!(!refinement_stable(&norms), "non-member norms {norms:?}");
        // Critical exponent: divergence is only logarithmic, still caught.
        let norms = refinement_norms(&model(1.0, 0), &p, base, 5).unwrap();
        assert!(!refinement_stable(&norms), "critical norms {norms:?}");
        // Critical with a log factor diverges faster.
        let norms = refinement_norms(&model(1.0, 1), &p, base, 5).unwrap();
        assert!(!refinement_stable(&norms), "critical log norms {norms:?}");
    }

    #[test]
    fn interval_spectrum_modes_work_in_norms() {
        // Norms are not circle-specific; a wedge cross-section with two
        // modes goes through the same machinery.
        let spectrum = interval_dirichlet_spectrum(PI / 2.0, 2).unwrap();
        let grid = LogGrid::standard();
        let u0 = sample_model(&model(-1.0, 0), grid).unwrap();
        let u1 = sample_model(&model(-2.0, 1), grid).unwrap();
        let (norm, _) = weighted_norm(&[u0, u1], &params(2, 0.5, 1), &spectrum).unwrap();
        assert!(norm.is_finite() && norm > 0.0);
    }
}
