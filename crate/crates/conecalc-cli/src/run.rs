//! Flag resolution and command execution.
//!
//! Every parameter resolves in the same order: command-line flag, then
//! config-file entry under the flag's name, then built-in default.  The
//! resolved values accumulate into the `"config"` object of the JSON
//! report, so identical configuration produces byte-identical output
//! (`serde_json` maps are ordered, floats print shortest round-trip).
//!
//! [`Failure::Usage`] is a parameter problem (exit 2): conflicting or
//! missing flags, unreadable or unparsable inputs, invalid geometry.
//! [`Failure::Numeric`] is a failure of the requested computation
//! itself (exit 1): a contour through a pole, a transform that cannot
//! be formed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use conecalc::asymptotics::{mode_parametrix, residue_terms};
use conecalc::cross_section::{
    circle_spectrum, interval_dirichlet_spectrum, sphere_spectrum, CrossSectionSpectrum,
};
use conecalc::cutoff::CutoffSpec;
use conecalc::formats;
use conecalc::grid::{LogGrid, SampledFunction};
use conecalc::mellin::{forward, inverse, transform_at, WeightLine};
use conecalc::operator::{
    admissible_weight_intervals, conormal_symbol, is_elliptic_on_line, laplace_beltrami,
    principal_symbol, rescaled_symbol, singular_exponents, ConeMetric, ExponentSign,
};
use conecalc::sobolev::{gamma_p, membership_report, ModelFunction, SpaceParams};
use conecalc::wedge::{l2_classification, SingularSolution};
use conecalc::Warning;

use crate::{
    AsymptoticsArgs, Cli, Command, Common, ExponentsArgs, GeometryArgs, MellinArgs, SobolevArgs,
    SymbolArgs, WedgeArgs,
};

pub struct Output {
    pub payload: String,
    /// Destination file; stdout when absent.
    pub path: Option<PathBuf>,
}

pub enum Failure {
    /// Parameter problem, exit code 2.
    Usage(String),
    /// The requested computation failed, exit code 1.
    Numeric(String),
}

type CliResult<T> = Result<T, Failure>;

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(msg.to_string())
}

fn numeric(msg: impl std::fmt::Display) -> Failure {
    Failure::Numeric(msg.to_string())
}

pub fn dispatch(cli: Cli) -> CliResult<Output> {
    match cli.command {
        Command::Exponents(args) => cmd_exponents(args),
        Command::Wedge(args) => cmd_wedge(args),
        Command::Mellin(args) => cmd_mellin(args),
        Command::Sobolev(args) => cmd_sobolev(args),
        Command::Asymptotics(args) => cmd_asymptotics(args),
        Command::Symbol(args) => cmd_symbol(args),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

/// Resolution state: the config-file entries, the common flags, and the
/// resolved values recorded so far.
struct Ctx {
    file: BTreeMap<String, String>,
    common: Common,
    resolved: Map<String, Value>,
}

/// Encodes a float for the report, rejecting non-finite values so the
/// JSON layer never sees them.
fn number(key: &str, v: f64) -> CliResult<Value> {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .ok_or_else(|| usage(format!("{key} must be finite")))
}

fn complex(v: Complex64) -> CliResult<Value> {
    Ok(Value::Array(vec![number("value", v.re)?, number("value", v.im)?]))
}

fn warning_list(warnings: &[Warning]) -> Value {
    Value::Array(warnings.iter().map(|w| Value::String(format!("{w:?}"))).collect())
}

/// Reparses a payload produced by the library's serializers.
fn embed(json_text: &str) -> Value {
    serde_json::from_str(json_text).expect("library serializers emit valid JSON")
}

/// Converts the "config" object of a saved report back into key=value
/// entries, so a report can be replayed with --config.
fn config_from_report(text: &str, path: &Path) -> CliResult<BTreeMap<String, String>> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
    let object = root
        .get("config")
        .and_then(Value::as_object)
        .ok_or_else(|| usage(format!("config {}: no \"config\" object", path.display())))?;
    let mut out = BTreeMap::new();
    for (key, value) in object {
        let rendered = match value {
            Value::String(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
            Value::Number(n) => n.to_string(),
            other => {
                return Err(usage(format!(
                    "config {}: key {key} has non-scalar value {other}",
                    path.display()
                )))
            }
        };
        out.insert(key.clone(), rendered);
    }
    Ok(out)
}

impl Ctx {
    fn new(common: Common) -> CliResult<Self> {
        let file = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
                if text.trim_start().starts_with('{') {
                    config_from_report(&text, path)?
                } else {
                    formats::parse_key_values(&text).map_err(usage)?
                }
            }
            None => BTreeMap::new(),
        };
        Ok(Ctx { file, common, resolved: Map::new() })
    }

    fn lookup<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| usage(format!("config key {key} = {raw:?}: {e}"))),
        }
    }

    fn record(&mut self, key: &str, value: Value) {
        self.resolved.insert(key.to_string(), value);
    }

    fn f64_opt(&mut self, flag: Option<f64>, key: &str) -> CliResult<Option<f64>> {
        let v = match flag {
            Some(v) => Some(v),
            None => self.lookup(key)?,
        };
        if let Some(v) = v {
            let encoded = number(key, v)?;
            self.record(key, encoded);
        }
        Ok(v)
    }

    fn f64(&mut self, flag: Option<f64>, key: &str, default: f64) -> CliResult<f64> {
        match self.f64_opt(flag, key)? {
            Some(v) => Ok(v),
            None => {
                let encoded = number(key, default)?;
                self.record(key, encoded);
                Ok(default)
            }
        }
    }

    fn require_f64(&mut self, flag: Option<f64>, key: &str) -> CliResult<f64> {
        self.f64_opt(flag, key)?.ok_or_else(|| usage(format!("--{key} is required")))
    }

    fn usize_opt(&mut self, flag: Option<usize>, key: &str) -> CliResult<Option<usize>> {
        let v = match flag {
            Some(v) => Some(v),
            None => self.lookup(key)?,
        };
        if let Some(v) = v {
            self.record(key, Value::from(v as u64));
        }
        Ok(v)
    }

    fn usize(&mut self, flag: Option<usize>, key: &str, default: usize) -> CliResult<usize> {
        match self.usize_opt(flag, key)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, Value::from(default as u64));
                Ok(default)
            }
        }
    }

    fn u32(&mut self, flag: Option<u32>, key: &str, default: u32) -> CliResult<u32> {
        let v = match flag {
            Some(v) => Some(v),
            None => self.lookup(key)?,
        };
        let v = v.unwrap_or(default);
        self.record(key, Value::from(v));
        Ok(v)
    }

    fn i32(&mut self, flag: Option<i32>, key: &str, default: i32) -> CliResult<i32> {
        let v = match flag {
            Some(v) => Some(v),
            None => self.lookup(key)?,
        };
        let v = v.unwrap_or(default);
        self.record(key, Value::from(v));
        Ok(v)
    }

    /// Presence flags: the config file can set them to true; a flag on
    /// the command line always wins.  Recorded only when set.
    fn flag(&mut self, flag: bool, key: &str) -> CliResult<bool> {
        let v = flag || self.lookup::<bool>(key)?.unwrap_or(false);
        if v {
            self.record(key, Value::Bool(true));
        }
        Ok(v)
    }

    fn string_opt(&mut self, flag: Option<String>, key: &str) -> CliResult<Option<String>> {
        let v = match flag {
            Some(v) => Some(v),
            None => self.lookup(key)?,
        };
        if let Some(ref v) = v {
            self.record(key, Value::String(v.clone()));
        }
        Ok(v)
    }

    fn path_opt(&mut self, flag: Option<PathBuf>, key: &str) -> CliResult<Option<PathBuf>> {
        let v = match flag {
            Some(v) => Some(v),
            None => self.lookup(key)?,
        };
        if let Some(ref v) = v {
            self.record(key, Value::String(v.display().to_string()));
        }
        Ok(v)
    }

    fn format(&mut self) -> CliResult<Format> {
        let name = match self.common.format.take() {
            Some(name) => name,
            None => self.lookup::<String>("format")?.unwrap_or_else(|| "json".to_string()),
        };
        self.record("format", Value::String(name.clone()));
        match name.as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(usage(format!("unknown format {other:?}; expected json or csv"))),
        }
    }

    fn output(&mut self) -> CliResult<Option<PathBuf>> {
        let flag = self.common.output.take();
        self.path_opt(flag, "output")
    }

    fn grid(&mut self) -> CliResult<LogGrid> {
        let s_min = self.f64(self.common.s_min, "s-min", -12.0)?;
        let s_max = self.f64(self.common.s_max, "s-max", 6.0)?;
        let n = self.usize(self.common.grid_points, "grid-points", 4096)?;
        LogGrid::new(s_min, s_max, n).map_err(usage)
    }

    fn tol(&mut self) -> CliResult<f64> {
        let tol = self.f64(self.common.tol, "tol", 1e-6)?;
        if !(tol > 0.0) {
            return Err(usage("--tol must be positive"));
        }
        Ok(tol)
    }

    /// Assembles the final report around the resolved config.
    fn into_report(self, command: &str, result: Value) -> String {
        let mut top = Map::new();
        top.insert("command".to_string(), Value::String(command.to_string()));
        top.insert("config".to_string(), Value::Object(self.resolved));
        top.insert("result".to_string(), result);
        top.insert("schema_version".to_string(), Value::from(formats::SCHEMA_VERSION));
        let mut text = serde_json::to_string_pretty(&Value::Object(top))
            .expect("report values are plain data");
        text.push('\n');
        text
    }
}

/// Resolves the shared geometry flags to a cross-section spectrum.
/// Exactly one of wedge-angle, circle, sphere, spectrum-file.
fn resolve_spectrum(ctx: &mut Ctx, g: &GeometryArgs) -> CliResult<CrossSectionSpectrum> {
    let wedge = ctx.f64_opt(g.wedge_angle, "wedge-angle")?;
    let circle = ctx.flag(g.circle, "circle")?;
    let sphere = ctx.usize_opt(g.sphere, "sphere")?;
    let file = ctx.path_opt(g.spectrum_file.clone(), "spectrum-file")?;

    let picked = usize::from(wedge.is_some())
        + usize::from(circle)
        + usize::from(sphere.is_some())
        + usize::from(file.is_some());
    if picked != 1 {
        return Err(usage(
            "pick exactly one geometry: --wedge-angle A | --circle | --sphere D | --spectrum-file F",
        ));
    }

    if let Some(path) = file {
        if g.modes.is_some() || ctx.file.contains_key("modes") {
            return Err(usage("--modes does not apply to --spectrum-file"));
        }
        let text = fs::read_to_string(&path)
            .map_err(|e| usage(format!("cannot read spectrum {}: {e}", path.display())))?;
        return formats::spectrum_from_json(&text).map_err(usage);
    }

    let modes = ctx.usize(g.modes, "modes", 8)?;
    if let Some(alpha) = wedge {
        return interval_dirichlet_spectrum(alpha, modes).map_err(usage);
    }
    if circle {
        return circle_spectrum(modes).map_err(usage);
    }
    let dim = sphere.expect("one geometry is set");
    sphere_spectrum(dim, modes).map_err(usage)
}

fn cmd_exponents(args: ExponentsArgs) -> CliResult<Output> {
    let mut ctx = Ctx::new(args.common)?;
    let format = ctx.format()?;
    let path = ctx.output()?;

    let spectrum = resolve_spectrum(&mut ctx, &args.geometry)?;
    let metric = ConeMetric::straight(spectrum);
    let set = singular_exponents(&metric);

    let gamma_lo = ctx.f64(args.gamma_lo, "gamma-lo", -3.0)?;
    let gamma_hi = ctx.f64(args.gamma_hi, "gamma-hi", 3.0)?;
    if !(gamma_lo < gamma_hi) {
        return Err(usage("--gamma-lo must lie below --gamma-hi"));
    }
    // The library's interval scan runs over weight lines; convert the
    // gamma window through beta = (n+1)/2 - gamma.
    let shift = (set.n as f64 + 1.0) / 2.0;
    let intervals =
        admissible_weight_intervals(&set, shift - gamma_hi, shift - gamma_lo).map_err(numeric)?;

    let payload = match format {
        Format::Json => {
            let result = embed(&formats::exponents_to_json(&set, &intervals));
            ctx.into_report("exponents", result)
        }
        Format::Csv => {
            let mut out = String::from("q,j,sign,order\n");
            for e in set.exponents() {
                let sign = match e.sign {
                    ExponentSign::Plus => "plus",
                    ExponentSign::Minus => "minus",
                    ExponentSign::Double => "double",
                };
                writeln!(out, "{},{},{},{}", e.q, e.mode, sign, e.order).expect("string write");
            }
            out
        }
    };
    Ok(Output { payload, path })
}

fn cmd_wedge(args: WedgeArgs) -> CliResult<Output> {
    let mut ctx = Ctx::new(args.common)?;
    let format = ctx.format()?;
    let path = ctx.output()?;

    let alpha = ctx.require_f64(args.angle, "angle")?;
    let j = ctx.i32(args.j, "j", -1)?;
    let t_min = ctx.f64(args.t_min, "t-min", 0.05)?;
    let t_max = ctx.f64(args.t_max, "t-max", 2.0)?;
    let points = ctx.usize(args.raster_points, "raster-points", 65)?;
    let angles = ctx.usize(args.raster_angles, "raster-angles", 17)?;
    if !(t_min > 0.0 && t_min < t_max) {
        return Err(usage("raster needs 0 < --t-min < --t-max"));
    }
    if points < 2 || angles < 1 {
        return Err(usage("raster needs --raster-points >= 2 and --raster-angles >= 1"));
    }

    let sol = SingularSolution::new(alpha, j).map_err(usage)?;
    let l2 = l2_classification(alpha, j).map_err(usage)?;

    // Raster over log-spaced radii and interior angles; the residual is
    // the wedge Laplacian from closed-form derivatives, relative to the
    // q^2 t^q magnitude of the separated terms.
    let q = sol.exponent();
    let log_step = (t_max.ln() - t_min.ln()) / (points - 1) as f64;
    let mut rows = Vec::with_capacity(points * angles);
    let mut residual_max = 0.0f64;
    for it in 0..points {
        let t = (t_min.ln() + it as f64 * log_step).exp();
        for ia in 1..=angles {
            let theta = alpha * ia as f64 / (angles + 1) as f64;
            let value = sol.value(t, theta);
            let residual = (sol.fuchs_sq(t, theta) + sol.d_theta_theta(t, theta)).abs()
                / (q * q * t.powf(q)).abs().max(f64::MIN_POSITIVE);
            residual_max = residual_max.max(residual);
            rows.push((t, theta, value, residual));
        }
    }

    let payload = match format {
        Format::Json => {
            // Classification across openings, at the requested mode.
            let mut table = Vec::with_capacity(17);
            for i in 0..17 {
                let a = std::f64::consts::PI * (0.3 + 1.6 * i as f64 / 16.0);
                let sq = l2_classification(a, j).map_err(numeric)?;
                table.push(json!({ "alpha": a, "l2": sq }));
            }
            let result = json!({
                "exponent": q,
                "frequency": sol.frequency(),
                "l2": l2,
                "l2_table": table,
                "raster_rows": rows.len(),
                "residual_max": residual_max,
            });
            ctx.into_report("wedge", result)
        }
        Format::Csv => {
            let mut out = String::from("t,theta,value,residual\n");
            for (t, theta, value, residual) in rows {
                writeln!(out, "{t},{theta},{value},{residual}").expect("string write");
            }
            out
        }
    };
    Ok(Output { payload, path })
}

/// Named round-trip datums, all supported well inside the default grid
/// so the transform tails stay below the round-trip tolerances on every
/// line beta in [-1, 2].
fn named_datum(name: &str, grid: LogGrid) -> CliResult<SampledFunction> {
    let f: fn(f64) -> f64 = match name {
        "gaussian" => |s| (-(s + 3.0) * (s + 3.0) / 2.0).exp(),
        "modulated" => |s| (-(s + 2.5) * (s + 2.5) / 1.28).exp() * (2.0 * s).cos(),
        "two-bump" => {
            |s| (-(s + 5.0) * (s + 5.0) / 1.62).exp() + 0.5 * (-(s + 2.5) * (s + 2.5) / 0.72).exp()
        }
        other => {
            return Err(usage(format!(
                "unknown datum {other:?}; expected gaussian, modulated, or two-bump"
            )))
        }
    };
    SampledFunction::from_real_fn(grid, |t| f(t.ln())).map_err(numeric)
}

fn cmd_mellin(args: MellinArgs) -> CliResult<Output> {
    let mut ctx = Ctx::new(args.common)?;
    let format = ctx.format()?;
    let path = ctx.output()?;

    let roundtrip = ctx.string_opt(args.roundtrip, "roundtrip")?;
    let forward_file = ctx.path_opt(args.forward, "forward")?;
    let inverse_file = ctx.path_opt(args.inverse, "inverse")?;
    let picked = usize::from(roundtrip.is_some())
        + usize::from(forward_file.is_some())
        + usize::from(inverse_file.is_some());
    if picked != 1 {
        return Err(usage(
            "pick exactly one action: --roundtrip NAME | --forward FILE | --inverse FILE",
        ));
    }

    if let Some(name) = roundtrip {
        if format == Format::Csv {
            return Err(usage("the round-trip report has no CSV form; use --format json"));
        }
        let grid = ctx.grid()?;
        let u = named_datum(&name, grid.clone())?;
        let sup = u.sup_norm();
        let mut errors = Vec::new();
        let mut max_error = 0.0f64;
        for beta in [-1.0, 0.0, 0.5, 2.0] {
            let (f, _) = forward(&u, WeightLine::new(beta)).map_err(numeric)?;
            let (v, _) = inverse(&f, &grid).map_err(numeric)?;
            let err = (0..u.len())
                .map(|k| (v.values[k] - u.values[k]).norm())
                .fold(0.0, f64::max)
                / sup;
            max_error = max_error.max(err);
            errors.push(json!({ "beta": beta, "error": err }));
        }
        let result = json!({ "errors": errors, "max_error": max_error });
        return Ok(Output { payload: ctx.into_report("mellin", result), path });
    }

    if let Some(file) = forward_file {
        let beta = ctx.f64(args.beta, "beta", 0.5)?;
        let text = fs::read_to_string(&file)
            .map_err(|e| usage(format!("cannot read samples {}: {e}", file.display())))?;
        let u = formats::sampled_from_json(&text).map_err(usage)?;
        let (f, warnings) = forward(&u, WeightLine::new(beta)).map_err(numeric)?;
        let payload = match format {
            Format::Json => {
                let result = json!({
                    "transform": embed(&formats::mellin_to_json(&f)),
                    "warnings": warning_list(&warnings),
                });
                ctx.into_report("mellin", result)
            }
            Format::Csv => formats::mellin_to_csv(&f),
        };
        return Ok(Output { payload, path });
    }

    let file = inverse_file.expect("one action is set");
    let text = fs::read_to_string(&file)
        .map_err(|e| usage(format!("cannot read transform {}: {e}", file.display())))?;
    let f = formats::mellin_from_json(&text).map_err(usage)?;
    let grid = ctx.grid()?;
    let (u, warnings) = inverse(&f, &grid).map_err(numeric)?;
    let payload = match format {
        Format::Json => {
            let result = json!({
                "samples": embed(&formats::sampled_to_json(&u)),
                "warnings": warning_list(&warnings),
            });
            ctx.into_report("mellin", result)
        }
        Format::Csv => formats::sampled_to_csv(&u),
    };
    Ok(Output { payload, path })
}

fn cmd_sobolev(args: SobolevArgs) -> CliResult<Output> {
    let mut ctx = Ctx::new(args.common)?;
    let format = ctx.format()?;
    if format == Format::Csv {
        return Err(usage("sobolev has no CSV payload; use --format json"));
    }
    let path = ctx.output()?;

    let shift_only = ctx.flag(args.gamma_p, "gamma-p")?;
    let p_exp = ctx.f64_opt(args.p_exp, "p-exp")?;

    let result = match (shift_only, p_exp) {
        (true, None) => {
            let n = ctx.usize(args.n, "n", 1)?;
            let p = ctx.f64(args.p, "p", 2.0)?;
            let value = gamma_p(n, p).map_err(usage)?;
            json!({ "gamma_p": value })
        }
        (false, Some(p_exp)) => {
            let k = ctx.u32(args.k, "k", 0)?;
            let s = ctx.u32(args.s, "s", 0)?;
            let gamma = ctx.require_f64(args.gamma, "gamma")?;
            let p = ctx.f64(args.p, "p", 2.0)?;
            let n = ctx.usize(args.n, "n", 1)?;
            let params = SpaceParams::new(s, gamma, p, n).map_err(usage)?;
            let model = ModelFunction { p_exp, k, mode: 0, cutoff: CutoffSpec::standard() };
            embed(&formats::membership_to_json(&membership_report(&model, &params)))
        }
        _ => return Err(usage("pick exactly one action: --gamma-p | --p-exp E")),
    };
    Ok(Output { payload: ctx.into_report("sobolev", result), path })
}

fn cmd_asymptotics(args: AsymptoticsArgs) -> CliResult<Output> {
    let mut ctx = Ctx::new(args.common)?;
    let format = ctx.format()?;
    if format == Format::Csv {
        return Err(usage("asymptotics has no CSV payload; use --format json"));
    }
    let path = ctx.output()?;

    let lambda = ctx.require_f64(args.lambda, "lambda")?;
    let n = ctx.usize(args.n, "n", 1)?;
    let from = ctx.require_f64(args.from, "from")?;
    let to = ctx.require_f64(args.to, "to")?;
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }

    let (u, datum) = match ctx.path_opt(args.datum, "datum")? {
        Some(file) => {
            let text = fs::read_to_string(&file)
                .map_err(|e| usage(format!("cannot read datum {}: {e}", file.display())))?;
            (formats::sampled_from_json(&text).map_err(usage)?, file.display().to_string())
        }
        None => {
            let grid = ctx.grid()?;
            let u = SampledFunction::from_real_fn(grid, |t| {
                let s = t.ln();
                (-(s + 3.0) * (s + 3.0) / 2.0).exp()
            })
            .map_err(numeric)?;
            (u, "unit bump at ln t = -3".to_string())
        }
    };

    let symbol = mode_parametrix(lambda, n);
    let terms = residue_terms(&symbol, |z| transform_at(&u, z), from, to).map_err(numeric)?;

    let mut result = match embed(&formats::terms_to_json(from, to, &terms)) {
        Value::Object(map) => map,
        _ => unreachable!("term list serializes as an object"),
    };
    result.insert("datum".to_string(), Value::String(datum));
    Ok(Output { payload: ctx.into_report("asymptotics", Value::Object(result)), path })
}

fn cmd_symbol(args: SymbolArgs) -> CliResult<Output> {
    let mut ctx = Ctx::new(args.common)?;
    let format = ctx.format()?;
    if format == Format::Csv {
        return Err(usage("symbol has no CSV payload; use --format json"));
    }
    let path = ctx.output()?;

    let spectrum = resolve_spectrum(&mut ctx, &args.geometry)?;
    let metric = ConeMetric::straight(spectrum);
    let op = laplace_beltrami(&metric);

    if ctx.flag(args.elliptic, "elliptic")? {
        let beta = ctx.require_f64(args.beta, "beta")?;
        let tol = ctx.tol()?;
        let (report, warnings) =
            is_elliptic_on_line(&op, WeightLine::new(beta), Some(tol)).map_err(numeric)?;
        let result = json!({
            "elliptic": report.elliptic,
            "margin": report.margin,
            "thin_margin": report.thin_margin,
            "warnings": warning_list(&warnings),
        });
        return Ok(Output { payload: ctx.into_report("symbol", result), path });
    }

    let t = ctx.f64(args.t, "t", 1.0)?;
    let tau = ctx.f64(args.tau, "tau", 1.0)?;
    let xi = ctx.f64(args.xi, "xi", 0.0)?;
    let z_re = ctx.f64(args.z_re, "z-re", 0.5)?;
    let z_im = ctx.f64(args.z_im, "z-im", 0.0)?;
    let z = Complex64::new(z_re, z_im);

    let principal = principal_symbol(&op, t, tau, xi).map_err(numeric)?;
    let rescaled = rescaled_symbol(&op, t, tau, xi).map_err(numeric)?;
    let mut conormal = Vec::with_capacity(op.dim());
    for (label, lambda) in op.mode_labels().iter().zip(op.lambdas()) {
        conormal.push(json!({
            "j": label,
            "lambda": lambda,
            "value": complex(conormal_symbol(&op, z, *lambda))?,
        }));
    }
    let result = json!({
        "conormal": conormal,
        "principal": complex(principal)?,
        "rescaled": complex(rescaled)?,
    });
    Ok(Output { payload: ctx.into_report("symbol", result), path })
}
