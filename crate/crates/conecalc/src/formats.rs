//! Serialization of the crate's data objects: validated JSON in both
//! directions, CSV export for plotting, and the key = value config
//! format used by the command line.
//!
//! Readers never bypass the domain constructors: every parse goes
//! through the same validation as in-process construction, so a file
//! can only produce values the library could have built itself.
//! Writers use shortest-round-trip float formatting (the serde_json
//! default), which reproduces every f64 bit-exactly on reparse.
//!
//! Schemas:
//!
//! ```text
//! sampled function   {"grid": {"s_min", "s_max", "n"}, "values": [[re, im], ...]}
//! mellin function    {"beta", "tau": {"n", "d_tau"}, "values": [[re, im], ...]}
//! spectrum           {"geometry", "eigenvalues": [...], "multiplicities": [...]}
//! exponent set       {"n", "exponents": [{"q", "j", "sign", "order"}],
//!                     "gamma_intervals": [{"lo", "hi", "bounded_by": {"lo", "hi"}}]}
//! membership report  {"p_exp", "k", "params", "member", "critical_exponent"}
//! term list          {"strip": [from, to], "terms": [{"p": [re, im], "j", "coeff": [re, im]}]}
//! ```
//!
//! The geometry field is a label: `circle`, `interval(<alpha>)`,
//! `sphere(<dim>)`, or `external(<dim>)`.  Spectra computed from
//! discretized operators export as `external(1)`: eigenfunction samples
//! do not survive serialization, and mode labels are reassigned from the
//! geometry convention on import.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotics::AsymptoticTerm;
use crate::cross_section::{CrossSectionSpectrum, Geometry};
use crate::error::{Error, Result};
use crate::grid::{LogGrid, SampledFunction};
use crate::mellin::{MellinFunction, TauGrid, WeightLine};
use crate::operator::{SingularExponent, SingularExponentSet, WeightInterval};
use crate::sobolev::{MembershipReport, SpaceParams};

/// Version stamp for command-line report envelopes.
pub const SCHEMA_VERSION: u32 = 1;

fn parse_err(err: impl std::fmt::Display) -> Error {
    Error::Parse(err.to_string())
}

fn to_pairs(values: &[Complex64]) -> Vec<(f64, f64)> {
    values.iter().map(|v| (v.re, v.im)).collect()
}

fn from_pairs(pairs: Vec<(f64, f64)>) -> Vec<Complex64> {
    pairs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()
}

#[derive(Serialize, Deserialize)]
struct GridDto {
    s_min: f64,
    s_max: f64,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct SampledDto {
    grid: GridDto,
    values: Vec<(f64, f64)>,
}

pub fn sampled_to_json(u: &SampledFunction) -> String {
    let dto = SampledDto {
        grid: GridDto { s_min: u.grid.s_min(), s_max: u.grid.s_max(), n: u.grid.len() },
        values: to_pairs(&u.values),
    };
    serde_json::to_string_pretty(&dto).expect("serialization of plain data cannot fail")
}

pub fn sampled_from_json(text: &str) -> Result<SampledFunction> {
    let dto: SampledDto = serde_json::from_str(text).map_err(parse_err)?;
    let grid = LogGrid::new(dto.grid.s_min, dto.grid.s_max, dto.grid.n)?;
    SampledFunction::new(grid, from_pairs(dto.values))
}

#[derive(Serialize, Deserialize)]
struct TauDto {
    n: usize,
    d_tau: f64,
}

#[derive(Serialize, Deserialize)]
struct MellinDto {
    beta: f64,
    tau: TauDto,
    values: Vec<(f64, f64)>,
}

pub fn mellin_to_json(f: &MellinFunction) -> String {
    let dto = MellinDto {
        beta: f.line.beta,
        tau: TauDto { n: f.tau.len(), d_tau: f.tau.d_tau() },
        values: to_pairs(&f.values),
    };
    serde_json::to_string_pretty(&dto).expect("serialization of plain data cannot fail")
}

pub fn mellin_from_json(text: &str) -> Result<MellinFunction> {
    let dto: MellinDto = serde_json::from_str(text).map_err(parse_err)?;
    if !dto.beta.is_finite() {
        return Err(Error::Parse(format!("weight line beta must be finite, got {}", dto.beta)));
    }
    let tau = TauGrid::new(dto.tau.n, dto.tau.d_tau)?;
    MellinFunction::new(WeightLine::new(dto.beta), tau, from_pairs(dto.values))
}

#[derive(Serialize, Deserialize)]
struct SpectrumDto {
    geometry: String,
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
}

/// Geometry label used in spectrum JSON.
pub fn geometry_label(geometry: &Geometry) -> String {
    match geometry {
        Geometry::IntervalDirichlet { alpha } => format!("interval({alpha})"),
        Geometry::Circle => "circle".to_string(),
        Geometry::Sphere { dim } => format!("sphere({dim})"),
        Geometry::Discretized { .. } => "external(1)".to_string(),
        Geometry::External { dim } => format!("external({dim})"),
    }
}

/// Parses a geometry label.  Discretized spectra re-enter as external:
/// the label never carries node data.
pub fn parse_geometry(label: &str) -> Result<Geometry> {
    let label = label.trim();
    if label == "circle" {
        return Ok(Geometry::Circle);
    }
    let (kind, argument) = label
        .strip_suffix(')')
        .and_then(|rest| rest.split_once('('))
        .ok_or_else(|| Error::Parse(format!("unrecognized geometry label {label:?}")))?;
    match kind {
        "interval" => {
            let alpha: f64 = argument.parse().map_err(parse_err)?;
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(Error::Parse(format!("interval angle must be positive, got {alpha}")));
            }
            Ok(Geometry::IntervalDirichlet { alpha })
        }
        "sphere" => Ok(Geometry::Sphere { dim: argument.parse().map_err(parse_err)? }),
        "external" => Ok(Geometry::External { dim: argument.parse().map_err(parse_err)? }),
        _ => Err(Error::Parse(format!("unrecognized geometry label {label:?}"))),
    }
}

pub fn spectrum_to_json(spectrum: &CrossSectionSpectrum) -> String {
    let dto = SpectrumDto {
        geometry: geometry_label(spectrum.geometry()),
        eigenvalues: spectrum.lambdas(),
        multiplicities: spectrum.modes().iter().map(|m| m.multiplicity).collect(),
    };
    serde_json::to_string_pretty(&dto).expect("serialization of plain data cannot fail")
}

pub fn spectrum_from_json(text: &str) -> Result<CrossSectionSpectrum> {
    let dto: SpectrumDto = serde_json::from_str(text).map_err(parse_err)?;
    let geometry = parse_geometry(&dto.geometry)?;
    CrossSectionSpectrum::from_eigenvalue_data(geometry, &dto.eigenvalues, &dto.multiplicities)
}

#[derive(Serialize, Deserialize)]
struct BoundsDto {
    lo: Option<f64>,
    hi: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct IntervalDto {
    lo: f64,
    hi: f64,
    /// Exponents whose weight lines bound the interval; None where the
    /// requested range does.
    bounded_by: BoundsDto,
}

#[derive(Serialize, Deserialize)]
struct ExponentSetDto {
    n: usize,
    exponents: Vec<SingularExponent>,
    gamma_intervals: Vec<IntervalDto>,
}

pub fn exponents_to_json(set: &SingularExponentSet, intervals: &[WeightInterval]) -> String {
    let dto = ExponentSetDto {
        n: set.n,
        exponents: set.exponents().to_vec(),
        gamma_intervals: intervals
            .iter()
            .map(|iv| IntervalDto {
                lo: iv.gamma_lo,
                hi: iv.gamma_hi,
                bounded_by: BoundsDto {
                    lo: iv.exponent_at_gamma_lo,
                    hi: iv.exponent_at_gamma_hi,
                },
            })
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("serialization of plain data cannot fail")
}

pub fn exponents_from_json(text: &str) -> Result<(SingularExponentSet, Vec<WeightInterval>)> {
    let dto: ExponentSetDto = serde_json::from_str(text).map_err(parse_err)?;
    let set = SingularExponentSet::from_parts(dto.n, dto.exponents)?;
    let intervals = dto
        .gamma_intervals
        .into_iter()
        .map(|iv| {
            if !(iv.lo.is_finite() && iv.hi.is_finite() && iv.lo < iv.hi) {
                return Err(Error::EmptyRange { lo: iv.lo, hi: iv.hi });
            }
            Ok(WeightInterval {
                gamma_lo: iv.lo,
                gamma_hi: iv.hi,
                exponent_at_gamma_lo: iv.bounded_by.lo,
                exponent_at_gamma_hi: iv.bounded_by.hi,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((set, intervals))
}

pub fn membership_to_json(report: &MembershipReport) -> String {
    serde_json::to_string_pretty(report).expect("serialization of plain data cannot fail")
}

pub fn membership_from_json(text: &str) -> Result<MembershipReport> {
    let report: MembershipReport = serde_json::from_str(text).map_err(parse_err)?;
    // Deserialization bypasses the SpaceParams constructor; re-validate.
    let params =
        SpaceParams::new(report.params.s, report.params.gamma, report.params.p, report.params.n)?;
    if !report.p_exp.is_finite() {
        return Err(Error::Parse(format!("p_exp must be finite, got {}", report.p_exp)));
    }
    let critical = params.weight_exponent();
    if (report.critical_exponent - critical).abs() > 1e-9 * critical.abs().max(1.0) {
        return Err(Error::Parse(format!(
            "critical_exponent {} does not match (n+1)/2 - gamma = {}",
            report.critical_exponent, critical
        )));
    }
    Ok(report)
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    p: (f64, f64),
    j: u32,
    coeff: (f64, f64),
}

#[derive(Serialize, Deserialize)]
struct TermListDto {
    strip: (f64, f64),
    terms: Vec<TermDto>,
}

pub fn terms_to_json(beta_from: f64, beta_to: f64, terms: &[AsymptoticTerm]) -> String {
    let dto = TermListDto {
        strip: (beta_from, beta_to),
        terms: terms
            .iter()
            .map(|t| TermDto { p: (t.p.re, t.p.im), j: t.j, coeff: (t.coeff.re, t.coeff.im) })
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("serialization of plain data cannot fail")
}

pub fn terms_from_json(text: &str) -> Result<(f64, f64, Vec<AsymptoticTerm>)> {
    let dto: TermListDto = serde_json::from_str(text).map_err(parse_err)?;
    let (from, to) = dto.strip;
    if !(from.is_finite() && to.is_finite()) {
        return Err(Error::Parse(format!("strip bounds must be finite, got [{from}, {to}]")));
    }
    let terms = dto
        .terms
        .into_iter()
        .map(|t| {
            let term = AsymptoticTerm {
                p: Complex64::new(t.p.0, t.p.1),
                j: t.j,
                coeff: Complex64::new(t.coeff.0, t.coeff.1),
            };
            if !(term.p.re.is_finite()
                && term.p.im.is_finite()
                && term.coeff.re.is_finite()
                && term.coeff.im.is_finite())
            {
                return Err(Error::Parse("term data must be finite".into()));
            }
            Ok(term)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((from, to, terms))
}

/// CSV rows s, t, re, im, one per grid point.
pub fn sampled_to_csv(u: &SampledFunction) -> String {
    let mut out = String::from("s,t,re,im\n");
    for k in 0..u.grid.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            u.grid.s(k),
            u.grid.t(k),
            u.values[k].re,
            u.values[k].im
        ));
    }
    out
}

/// CSV rows tau, re, im along the weight line; the line itself lives in
/// the JSON header, not the CSV.
pub fn mellin_to_csv(f: &MellinFunction) -> String {
    let mut out = String::from("tau,re,im\n");
    for j in 0..f.tau.len() {
        out.push_str(&format!("{},{},{}\n", f.tau.tau(j), f.values[j].re, f.values[j].im));
    }
    out
}

/// Parses the config format: one `key = value` pair per line, `#` to end
/// of line is a comment, blank lines allowed.  Later occurrences of a
/// key override earlier ones.  Keys and values are trimmed; values may
/// be empty.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (number, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((content, _comment)) => content,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("line {}: expected key = value, got {raw:?}", number + 1))
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Parse(format!("line {}: empty key", number + 1)));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cross_section::{circle_spectrum, sphere_spectrum};
    use crate::operator::{admissible_weight_intervals, exponents_from_modes};
    use crate::sobolev::membership_report;
    use crate::cutoff::CutoffSpec;
    use crate::sobolev::ModelFunction;

    #[test]
    fn sampled_function_round_trips_bit_exactly() {
        let grid = LogGrid::new(-3.0, 2.0, 64).unwrap();
        let u = SampledFunction::from_fn(grid, |t| {
            Complex64::new((t.ln() * 0.7).sin(), 1.0 / (1.0 + t))
        })
        .unwrap();
        let text = sampled_to_json(&u);
        let back = sampled_from_json(&text).unwrap();
        assert_eq!(back.grid, u.grid);
        assert_eq!(back.values, u.values);
    }

    #[test]
    fn sampled_function_rejects_bad_data() {
        assert!(matches!(sampled_from_json("not json"), Err(Error::Parse(_))));
        // Grid with reversed endpoints fails through the constructor.
        let bad = r#"{"grid": {"s_min": 2.0, "s_max": -3.0, "n": 16}, "values": []}"#;
        assert!(matches!(sampled_from_json(bad), Err(Error::GridReversed { .. })));
        // Value count must match the grid.
        let short = r#"{"grid": {"s_min": -1.0, "s_max": 1.0, "n": 16}, "values": [[0.0, 0.0]]}"#;
        assert!(matches!(sampled_from_json(short), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn mellin_function_round_trips() {
        let tau = TauGrid::new(32, 0.25).unwrap();
        let f = MellinFunction::from_fn(WeightLine::new(0.5), tau, |z| {
            1.0 / (z * z + 4.0)
        })
        .unwrap();
        let text = mellin_to_json(&f);
        let back = mellin_from_json(&text).unwrap();
        assert_eq!(back.line, f.line);
        assert_eq!(back.tau, f.tau);
        assert_eq!(back.values, f.values);
    }

    #[test]
    fn spectrum_round_trips_for_model_geometries() {
        for spectrum in [circle_spectrum(3).unwrap(), sphere_spectrum(2, 2).unwrap()] {
            let text = spectrum_to_json(&spectrum);
            let back = spectrum_from_json(&text).unwrap();
            assert_eq!(back.dim(), spectrum.dim());
            assert_eq!(back.lambdas(), spectrum.lambdas());
            let mult: Vec<usize> = back.modes().iter().map(|m| m.multiplicity).collect();
            let want: Vec<usize> = spectrum.modes().iter().map(|m| m.multiplicity).collect();
            assert_eq!(mult, want);
        }
    }

    #[test]
    fn spectrum_parser_rejects_inconsistent_data() {
        let mismatched = r#"{"geometry": "circle", "eigenvalues": [0.0, -1.0], "multiplicities": [1]}"#;
        assert!(matches!(spectrum_from_json(mismatched), Err(Error::LengthMismatch { .. })));
        let positive = r#"{"geometry": "circle", "eigenvalues": [1.0], "multiplicities": [1]}"#;
        assert!(matches!(spectrum_from_json(positive), Err(Error::PositiveSpectrum { .. })));
        let unsorted = r#"{"geometry": "circle", "eigenvalues": [-2.0, -1.0], "multiplicities": [1, 1]}"#;
        assert!(matches!(spectrum_from_json(unsorted), Err(Error::BadCrossSection(_))));
        let label = r#"{"geometry": "torus", "eigenvalues": [0.0], "multiplicities": [1]}"#;
        assert!(matches!(spectrum_from_json(label), Err(Error::Parse(_))));
    }

    #[test]
    fn geometry_labels_round_trip() {
        let alpha = 3.0 * std::f64::consts::FRAC_PI_2;
        for geometry in [
            Geometry::Circle,
            Geometry::IntervalDirichlet { alpha },
            Geometry::Sphere { dim: 3 },
            Geometry::External { dim: 2 },
        ] {
            let label = geometry_label(&geometry);
            let back = parse_geometry(&label).unwrap();
            assert_eq!(geometry_label(&back), label);
        }
        // Interval angles survive exactly through the decimal label.
        match parse_geometry(&geometry_label(&Geometry::IntervalDirichlet { alpha })).unwrap() {
            Geometry::IntervalDirichlet { alpha: parsed } => assert_eq!(parsed, alpha),
            other => panic!("expected interval, got {other:?}"),
        }
    }

    #[test]
    fn exponent_sets_round_trip_with_intervals() {
        // Wedge of angle pi/2: exponents +-2j, gamma intervals between.
        let alpha = std::f64::consts::FRAC_PI_2;
        let lambdas: Vec<f64> = (1..=3)
            .map(|j| {
                let w = j as f64 * std::f64::consts::PI / alpha;
                -(w * w)
            })
            .collect();
        let set = exponents_from_modes(1, &lambdas, &[1, 2, 3]);
        let intervals = admissible_weight_intervals(&set, -3.0, 3.0).unwrap();
        let text = exponents_to_json(&set, &intervals);
        let (set_back, intervals_back) = exponents_from_json(&text).unwrap();
        assert_eq!(set_back, set);
        assert_eq!(intervals_back, intervals);
        assert!(text.contains("\"sign\": \"plus\""), "sign should serialize lowercase");
        assert!(text.contains("\"j\": 1"), "mode label should serialize as j");
    }

    #[test]
    fn exponent_parser_rejects_inconsistent_orders() {
        let bad = r#"{
            "n": 1,
            "exponents": [{"q": 0.0, "j": 0, "sign": "double", "order": 1}],
            "gamma_intervals": []
        }"#;
        assert!(matches!(exponents_from_json(bad), Err(Error::Parse(_))));
    }

    #[test]
    fn membership_report_round_trips_and_revalidates() {
        let params = SpaceParams::new(2, 0.25, 2.0, 1).unwrap();
        let model = ModelFunction {
            p_exp: 0.5,
            k: 1,
            mode: 0,
            cutoff: CutoffSpec::standard(),
        };
        let report = membership_report(&model, &params);
        let text = membership_to_json(&report);
        let back = membership_from_json(&text).unwrap();
        assert_eq!(back, report);

        let tampered = text.replace(
            &format!("\"critical_exponent\": {}", report.critical_exponent),
            "\"critical_exponent\": 99.0",
        );
        assert_ne!(tampered, text, "replacement should hit");
        assert!(matches!(membership_from_json(&tampered), Err(Error::Parse(_))));
    }

    #[test]
    fn term_lists_round_trip() {
        let terms = vec![
            AsymptoticTerm {
                p: Complex64::new(1.0, 0.0),
                j: 0,
                coeff: Complex64::new(0.5, -0.25),
            },
            AsymptoticTerm { p: Complex64::new(1.0, 0.0), j: 1, coeff: Complex64::new(-1.0, 0.0) },
        ];
        let text = terms_to_json(1.5, 0.5, &terms);
        let (from, to, back) = terms_from_json(&text).unwrap();
        assert_eq!((from, to), (1.5, 0.5));
        assert_eq!(back.len(), terms.len());
        for (a, b) in back.iter().zip(&terms) {
            assert_eq!(a.p, b.p);
            assert_eq!(a.j, b.j);
            assert_eq!(a.coeff, b.coeff);
        }
    }

    #[test]
    fn csv_export_shapes() {
        let grid = LogGrid::new(0.0, 1.0, 8).unwrap();
        let u = SampledFunction::from_real_fn(grid, |t| t).unwrap();
        let csv = sampled_to_csv(&u);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("s,t,re,im"));
        assert_eq!(lines.next(), Some("0,1,1,0"));
        assert_eq!(csv.lines().count(), 9);

        let tau = TauGrid::new(8, 1.0).unwrap();
        let f = MellinFunction::from_fn(WeightLine::new(0.0), tau, |_| {
            Complex64::new(1.0, 2.0)
        })
        .unwrap();
        let csv = mellin_to_csv(&f);
        assert_eq!(csv.lines().next(), Some("tau,re,im"));
        assert_eq!(csv.lines().nth(1), Some("-3.5,1,2"));
    }

    #[test]
    fn config_parser_handles_comments_blanks_and_overrides() {
        let text = "\n# full-line comment\n  grid.n = 4096\nbeta = 0.5  # trailing comment\nbeta = 1.5\nempty =\n";
        let map = parse_key_values(text).unwrap();
        assert_eq!(map.get("grid.n").map(String::as_str), Some("4096"));
        assert_eq!(map.get("beta").map(String::as_str), Some("1.5"));
        assert_eq!(map.get("empty").map(String::as_str), Some(""));
        assert_eq!(map.len(), 3);

        assert!(matches!(parse_key_values("not a pair"), Err(Error::Parse(_))));
        assert!(matches!(parse_key_values(" = value"), Err(Error::Parse(_))));
    }
}
