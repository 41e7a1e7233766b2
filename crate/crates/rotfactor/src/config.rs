//! Run configuration: TOML with sections `[system]`, `[schedule]`,
//! `[analysis]` and `[output]`. Every number may be written as a TOML
//! number or as a string in `"p/q"` syntax.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rotfactor_core::generators::{BlockSubstitution, GeneratorSpec, Schedule, WordSubstitution};
use rotfactor_core::rotation::ScanSpec;
use rotfactor_core::{Point, Scalar, ThetaVector, TorusKind, Window, MAX_DIM};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;

pub const DEFAULT_LEVELS: usize = 6;
pub const DEFAULT_WINDOW_MARGIN: f64 = 3.0;
pub const DEFAULT_Q_MAX: u32 = 8;
pub const DEFAULT_CONVERGENT_DEPTH: usize = 8;
/// Below this many levels no verdict is produced.
pub const MIN_VERDICT_LEVELS: usize = 3;

/// A number as written in the file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Num {
    fn scalar(&self, field: &str) -> Result<Scalar> {
        match self {
            Num::Int(v) => Ok(Scalar::from_int(*v)),
            Num::Float(x) => Ok(Scalar::Float(*x)),
            Num::Text(s) => Scalar::parse(s).map_err(|e| Error::config(field, e.to_string())),
        }
    }

    fn integer(&self, field: &str) -> Result<i64> {
        match self.scalar(field)? {
            Scalar::Exact(r) if r.is_integer() => {
                i64::try_from(*r.numer()).map_err(|_| Error::config(field, "integer out of range"))
            }
            other => Err(Error::config(field, format!("expected an integer, found {other}"))),
        }
    }

    fn count(&self, field: &str) -> Result<usize> {
        let v = self.integer(field)?;
        usize::try_from(v).map_err(|_| Error::config(field, format!("expected a nonnegative integer, found {v}")))
    }

    fn real(&self, field: &str) -> Result<f64> {
        Ok(self.scalar(field)?.to_f64())
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Int(v) => write!(f, "{v}"),
            Num::Float(x) => write!(f, "{x:?}"),
            Num::Text(s) => f.write_str(s),
        }
    }
}

/// A scalar or a per-axis list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerAxis {
    One(Num),
    Many(Vec<Num>),
}

impl PerAxis {
    fn integers(&self, d: usize, field: &str) -> Result<Vec<i64>> {
        match self {
            PerAxis::One(n) => Ok(vec![n.integer(field)?; d]),
            PerAxis::Many(v) => {
                if v.len() != d {
                    return Err(Error::config(field, format!("{} entries for dimension {d}", v.len())));
                }
                v.iter().enumerate().map(|(i, n)| n.integer(&format!("{field}[{i}]"))).collect()
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawWindow {
    pub lo: Vec<Num>,
    pub hi: Vec<Num>,
}

impl RawWindow {
    fn window(&self, d: usize, field: &str) -> Result<Window> {
        let lo = PerAxis::Many(self.lo.clone()).integers(d, &format!("{field}.lo"))?;
        let hi = PerAxis::Many(self.hi.clone()).integers(d, &format!("{field}.hi"))?;
        let pt = |v: &[i64], f: &str| Point::new(v).map_err(|e| Error::config(f, e.to_string()));
        Window::new(pt(&lo, field)?, pt(&hi, field)?).map_err(|e| Error::config(field, e.to_string()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFactor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    pub rules: toml::Table,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSystem {
    pub dimension: Option<Num>,
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<PerAxis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<PerAxis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<toml::Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<RawFactor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points_file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<RawWindow>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSchedule {
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windows: Option<Vec<RawWindow>>,
    pub window_margin: Option<Num>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScan {
    pub q_max: Option<Num>,
    pub adapted: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adapted_max_power: Option<Num>,
    pub reals: Option<Vec<String>>,
    pub convergent_depth: Option<Num>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAnalysis {
    pub levels: Option<Num>,
    pub thetas: Option<Vec<String>>,
    pub k: Option<String>,
    pub strict_well_distributed: Option<bool>,
    pub scan: Option<RawScan>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub timestamp: Option<bool>,
}

/// The file as parsed; after loading, every default is filled in.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub system: RawSystem,
    #[serde(default)]
    pub schedule: RawSchedule,
    #[serde(default)]
    pub analysis: RawAnalysis,
    #[serde(default)]
    pub output: RawOutput,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KChoice {
    One,
    Full,
    Both,
}

impl KChoice {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "1" => Some(KChoice::One),
            "d" => Some(KChoice::Full),
            "both" => Some(KChoice::Both),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            KChoice::One => "1",
            KChoice::Full => "d",
            KChoice::Both => "both",
        }
    }

    pub fn kinds(&self) -> Vec<TorusKind> {
        match self {
            KChoice::One => vec![TorusKind::One],
            KChoice::Full => vec![TorusKind::Full],
            KChoice::Both => vec![TorusKind::One, TorusKind::Full],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputConfig {
    pub format: Format,
    pub path: Option<PathBuf>,
    pub timestamp: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub dimension: usize,
    pub generator: GeneratorSpec,
    pub schedule: Schedule,
    pub window_margin: f64,
    /// Largest reported level `N`.
    pub levels: usize,
    pub thetas: Vec<ThetaVector>,
    pub k: KChoice,
    pub strict_well_distributed: bool,
    pub scan: ScanSpec,
    pub output: OutputConfig,
    /// The materialized configuration, re-loadable as is.
    pub echo: RawConfig,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub levels: Option<usize>,
    /// `"a,b;c,d"`: vectors separated by `;`, components by `,`.
    pub theta: Option<String>,
    pub k: Option<String>,
    pub format: Option<String>,
    pub output: Option<String>,
    pub no_timestamp: bool,
    pub window_margin: Option<String>,
    pub strict_well_distributed: bool,
}

pub fn load_config(path: &Path, overrides: &Overrides) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|source| Error::Read { path: path.to_path_buf(), source })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config(&text, base, overrides)
}

/// Parses and validates; relative paths resolve against `base`.
pub fn parse_config(text: &str, base: &Path, overrides: &Overrides) -> Result<RunConfig> {
    let mut raw: RawConfig = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
    apply_overrides(&mut raw, overrides);
    materialize(&mut raw);
    validate(raw, base)
}

fn apply_overrides(raw: &mut RawConfig, o: &Overrides) {
    if let Some(n) = o.levels {
        raw.analysis.levels = Some(Num::Int(n as i64));
    }
    if let Some(t) = &o.theta {
        raw.analysis.thetas = Some(t.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
    }
    if let Some(k) = &o.k {
        raw.analysis.k = Some(k.clone());
    }
    if let Some(f) = &o.format {
        raw.output.format = Some(f.clone());
    }
    if let Some(p) = &o.output {
        raw.output.path = Some(p.clone());
    }
    if o.no_timestamp {
        raw.output.timestamp = Some(false);
    }
    if let Some(m) = &o.window_margin {
        raw.schedule.window_margin = Some(Num::Text(m.clone()));
    }
    if o.strict_well_distributed {
        raw.analysis.strict_well_distributed = Some(true);
    }
}

fn materialize(raw: &mut RawConfig) {
    let s = &mut raw.schedule;
    s.kind.get_or_insert_with(|| "supertile".into());
    s.window_margin.get_or_insert(Num::Int(DEFAULT_WINDOW_MARGIN as i64));
    let a = &mut raw.analysis;
    a.levels.get_or_insert(Num::Int(DEFAULT_LEVELS as i64));
    a.thetas.get_or_insert_with(Vec::new);
    a.k.get_or_insert_with(|| "1".into());
    a.strict_well_distributed.get_or_insert(false);
    let scan = a.scan.get_or_insert_with(RawScan::default);
    scan.q_max.get_or_insert(Num::Int(DEFAULT_Q_MAX as i64));
    scan.adapted.get_or_insert(true);
    scan.reals.get_or_insert_with(Vec::new);
    scan.convergent_depth.get_or_insert(Num::Int(DEFAULT_CONVERGENT_DEPTH as i64));
    let o = &mut raw.output;
    o.format.get_or_insert_with(|| "json".into());
    o.timestamp.get_or_insert(true);
}

fn validate(raw: RawConfig, base: &Path) -> Result<RunConfig> {
    let sys = &raw.system;
    let dim_num = sys.dimension.as_ref().ok_or_else(|| Error::config("system.dimension", "missing"))?;
    let d = dim_num.integer("system.dimension")?;
    if !(1..=MAX_DIM as i64).contains(&d) {
        return Err(Error::config(
            "system.dimension",
            format!("d = {d} is not supported: exact Voronoi geometry is capped at d <= {MAX_DIM}"),
        ));
    }
    let d = d as usize;
    let generator = generator(sys, d, base)?;
    if generator.dim() != d {
        return Err(Error::config(
            "system.dimension",
            format!("dimension {d} does not match the {}-dimensional generator", generator.dim()),
        ));
    }

    let sch = &raw.schedule;
    let schedule = match sch.kind.as_deref().unwrap_or("supertile") {
        "supertile" => Schedule::Supertile,
        "centered" => Schedule::Centered,
        "cubes" => Schedule::Cubes,
        "windows" => {
            let ws = sch.windows.as_ref().ok_or_else(|| Error::config("schedule.windows", "missing"))?;
            Schedule::Windows(
                ws.iter()
                    .enumerate()
                    .map(|(i, w)| w.window(d, &format!("schedule.windows[{i}]")))
                    .collect::<Result<_>>()?,
            )
        }
        other => {
            return Err(Error::config(
                "schedule.kind",
                format!("unknown schedule '{other}'; expected supertile, centered, cubes or windows"),
            ))
        }
    };
    let window_margin = sch.window_margin.as_ref().expect("materialized").real("schedule.window_margin")?;
    if !(window_margin > 0.0) {
        return Err(Error::config("schedule.window_margin", "must be positive"));
    }

    let an = &raw.analysis;
    let levels = an.levels.as_ref().expect("materialized").count("analysis.levels")?;
    let mut thetas = Vec::new();
    for (i, t) in an.thetas.as_ref().expect("materialized").iter().enumerate() {
        let field = format!("analysis.thetas[{i}]");
        let th = ThetaVector::parse(t).map_err(|e| Error::config(&field, e.to_string()))?;
        if th.dim() != d {
            return Err(Error::config(field, format!("theta has {} components, dimension is {d}", th.dim())));
        }
        thetas.push(th);
    }
    let k_text = an.k.as_deref().expect("materialized");
    let k = KChoice::parse(k_text)
        .ok_or_else(|| Error::config("analysis.k", format!("expected 1, d or both, found '{k_text}'")))?;
    let raw_scan = an.scan.as_ref().expect("materialized");
    let q_max = raw_scan.q_max.as_ref().expect("materialized").count("analysis.scan.q_max")?;
    let q_max = u32::try_from(q_max).map_err(|_| Error::config("analysis.scan.q_max", "too large"))?;
    let mut reals = Vec::new();
    for (i, r) in raw_scan.reals.as_ref().expect("materialized").iter().enumerate() {
        let field = format!("analysis.scan.reals[{i}]");
        let th = ThetaVector::parse(r).map_err(|e| Error::config(&field, e.to_string()))?;
        if th.dim() != d {
            return Err(Error::config(field, format!("vector has {} components, dimension is {d}", th.dim())));
        }
        reals.push(th.components().iter().map(Scalar::to_f64).collect());
    }
    let adapted_max_power = raw_scan
        .adapted_max_power
        .as_ref()
        .map(|n| n.count("analysis.scan.adapted_max_power").map(|v| v as u32))
        .transpose()?;
    let scan = ScanSpec {
        q_max,
        adapted_bases: if raw_scan.adapted == Some(false) { Vec::new() } else { generator.expansions() },
        adapted_max_power,
        reals,
        convergent_depth: raw_scan.convergent_depth.as_ref().expect("materialized").count("analysis.scan.convergent_depth")?,
    };

    let out = &raw.output;
    let fmt_text = out.format.as_deref().expect("materialized");
    let format =
        Format::parse(fmt_text).ok_or_else(|| Error::config("output.format", format!("expected json or csv, found '{fmt_text}'")))?;
    let output = OutputConfig { format, path: out.path.as_ref().map(PathBuf::from), timestamp: out.timestamp.unwrap_or(true) };

    Ok(RunConfig {
        dimension: d,
        generator,
        schedule,
        window_margin,
        levels,
        thetas,
        k,
        strict_well_distributed: an.strict_well_distributed.unwrap_or(false),
        scan,
        output,
        echo: raw,
    })
}

fn generator(sys: &RawSystem, d: usize, base: &Path) -> Result<GeneratorSpec> {
    let kind = sys.generator.as_deref().ok_or_else(|| Error::config("system.generator", "missing"))?;
    fn core(field: &str) -> impl Fn(rotfactor_core::Error) -> Error + '_ {
        move |e| Error::config(field, e.to_string())
    }
    match kind {
        "lattice_model" => {
            let q = sys.q.as_ref().ok_or_else(|| Error::config("system.q", "missing"))?.integers(d, "system.q")?;
            GeneratorSpec::lattice(q).map_err(core("system.q"))
        }
        "block_substitution" => {
            let shape = sys.shape.as_ref().ok_or_else(|| Error::config("system.shape", "missing"))?;
            let shape: Vec<usize> = shape
                .integers(d, "system.shape")?
                .into_iter()
                .map(|q| usize::try_from(q).map_err(|_| Error::config("system.shape", "negative side")))
                .collect::<Result<_>>()?;
            let rules = sys.rules.as_ref().ok_or_else(|| Error::config("system.rules", "missing"))?;
            let alphabet = alphabet_of(sys.alphabet.as_ref(), rules, "system")?;
            let mut images = Vec::new();
            for name in &alphabet {
                let field = format!("system.rules.{name}");
                let value = rules.get(name).ok_or_else(|| Error::config(&field, "missing rule"))?;
                let cells = block_image(value, &alphabet, &shape, name, &field)?;
                images.push(cells);
            }
            BlockSubstitution::new(alphabet, shape, images).map(GeneratorSpec::BlockSubstitution).map_err(core("system.rules"))
        }
        "product_1d" => {
            let factors = sys.factors.as_ref().ok_or_else(|| Error::config("system.factors", "missing"))?;
            if factors.len() != d {
                return Err(Error::config("system.factors", format!("{} factors for dimension {d}", factors.len())));
            }
            let mut words = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                let field = format!("system.factors[{i}]");
                let alphabet = alphabet_of(f.alphabet.as_ref(), &f.rules, &field)?;
                let mut images = Vec::new();
                for name in &alphabet {
                    let rf = format!("{field}.rules.{name}");
                    let word = f
                        .rules
                        .get(name)
                        .and_then(toml::Value::as_str)
                        .ok_or_else(|| Error::config(&rf, "expected a word string"))?;
                    images.push(rotfactor_core::generators::parse_word(&alphabet, word).map_err(core(&rf))?);
                }
                words.push(WordSubstitution::new(alphabet, images).map_err(core(&field))?);
            }
            Ok(GeneratorSpec::Product1d(words))
        }
        "explicit_points" => {
            let window =
                sys.window.as_ref().ok_or_else(|| Error::config("system.window", "missing"))?.window(d, "system.window")?;
            let mut points = Vec::new();
            if let Some(ps) = &sys.points {
                for (i, p) in ps.iter().enumerate() {
                    let field = format!("system.points[{i}]");
                    let v = PerAxis::Many(p.clone()).integers(d, &field)?;
                    points.push(Point::new(&v).map_err(core(&field))?);
                }
            }
            if let Some(file) = &sys.points_file {
                let path = base.join(file);
                let text = fs::read_to_string(&path).map_err(|source| Error::Read { path: path.clone(), source })?;
                let (ps, _) = io::parse_point_set(&text).map_err(|e| Error::config("system.points_file", e.to_string()))?;
                points.extend(ps);
            }
            if let Some(p) = points.iter().find(|p| p.dim() != d || !window.contains(p)) {
                return Err(Error::config("system.points", format!("point {p} is outside the window {window}")));
            }
            if !points.iter().any(Point::is_zero) {
                return Err(Error::config("system.points", "the origin must belong to the point set"));
            }
            Ok(GeneratorSpec::ExplicitPoints { points, window })
        }
        other => Err(Error::config(
            "system.generator",
            format!("unknown generator '{other}'; expected lattice_model, block_substitution, product_1d or explicit_points"),
        )),
    }
}

fn alphabet_of(explicit: Option<&Vec<String>>, rules: &toml::Table, field: &str) -> Result<Vec<String>> {
    let alphabet: Vec<String> = match explicit {
        Some(a) => a.clone(),
        None => rules.keys().cloned().collect(),
    };
    if let Some(extra) = rules.keys().find(|k| !alphabet.contains(k)) {
        return Err(Error::config(format!("{field}.rules.{extra}"), "symbol is not in the alphabet"));
    }
    Ok(alphabet)
}

/// A block image: a word for `d = 1`, a list of rows for `d = 2` (row `i`
/// holds the cells with first coordinate `i`), a list of layers for `d = 3`.
fn block_image(value: &toml::Value, alphabet: &[String], shape: &[usize], name: &str, field: &str) -> Result<Vec<u32>> {
    let bad_shape = |what: String| Error::config(field, format!("rule for symbol '{name}' does not match shape {shape:?}: {what}"));
    match (shape.len(), value) {
        (1, toml::Value::String(w)) => {
            let cells = rotfactor_core::generators::parse_word(alphabet, w).map_err(|e| Error::config(field, e.to_string()))?;
            if cells.len() != shape[0] {
                return Err(bad_shape(format!("{} cells", cells.len())));
            }
            Ok(cells)
        }
        (n, toml::Value::Array(parts)) if n >= 2 => {
            if parts.len() != shape[0] {
                return Err(bad_shape(format!("{} entries along axis 0", parts.len())));
            }
            let mut cells = Vec::new();
            for p in parts {
                cells.extend(block_image(p, alphabet, &shape[1..], name, field)?);
            }
            Ok(cells)
        }
        _ => Err(bad_shape(String::from("expected nested lists of words"))),
    }
}

impl RawConfig {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialize(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        parse_config(text, Path::new("."), &Overrides::default())
    }

    const LATTICE: &str = r#"
        [system]
        dimension = 1
        generator = "lattice_model"
        q = [2]
        [analysis]
        levels = 6
        thetas = ["1/4"]
    "#;

    #[test]
    fn minimal_lattice() {
        let c = parse(LATTICE).unwrap();
        assert_eq!(c.dimension, 1);
        assert_eq!(c.generator, GeneratorSpec::lattice(vec![2]).unwrap());
        assert_eq!(c.levels, 6);
        assert_eq!(c.thetas, vec![ThetaVector::parse("1/4").unwrap()]);
        assert_eq!(c.schedule, Schedule::Supertile);
        assert_eq!(c.window_margin, 3.0);
        assert_eq!(c.k, KChoice::One);
        assert_eq!(c.output.format, Format::Json);
        assert!(c.output.timestamp);
        assert_eq!(c.echo.analysis.scan.as_ref().unwrap().q_max, Some(Num::Int(8)));
    }

    #[test]
    fn echo_reloads_to_the_same_config() {
        let c = parse(LATTICE).unwrap();
        let again = parse(&c.echo.to_toml().unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rational_syntax_everywhere() {
        let c = parse(
            r#"
            [system]
            dimension = "2/2"
            generator = "lattice_model"
            q = ["4/2"]
            [schedule]
            window_margin = "5/2"
            [analysis]
            levels = "12/3"
        "#,
        )
        .unwrap();
        assert_eq!(c.levels, 4);
        assert_eq!(c.window_margin, 2.5);
        let err = parse(&LATTICE.replace("levels = 6", "levels = \"1/2\"")).unwrap_err();
        assert!(err.to_string().contains("analysis.levels"), "{err}");
    }

    #[test]
    fn rejects_four_dimensions() {
        let err = parse(&LATTICE.replace("dimension = 1", "dimension = 4")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("d <= 3"), "{err}");
    }

    #[test]
    fn rejects_inconsistent_rule_shape_by_symbol() {
        let err = parse(
            r#"
            [system]
            dimension = 2
            generator = "block_substitution"
            shape = [2, 2]
            [system.rules]
            a = ["ab", "ba"]
            b = ["ab", "b"]
        "#,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("system.rules.b") && msg.contains("'b'"), "{msg}");
    }

    #[test]
    fn block_rules_in_two_dimensions() {
        let c = parse(
            r#"
            [system]
            dimension = 2
            generator = "block_substitution"
            shape = 2
            [system.rules]
            a = ["ab", "ba"]
            b = ["aa", "ab"]
        "#,
        )
        .unwrap();
        let GeneratorSpec::BlockSubstitution(s) = &c.generator else { panic!("kind") };
        assert_eq!(s.rule(0), &[0, 1, 1, 0]);
        assert_eq!(s.rule(1), &[0, 0, 0, 1]);
    }

    #[test]
    fn product_factors_and_overrides() {
        let text = r#"
            [system]
            dimension = 2
            generator = "product_1d"
            [[system.factors]]
            rules = { a = "ab", b = "aa" }
            [[system.factors]]
            rules = { a = "ab", b = "a" }
        "#;
        let o = Overrides {
            levels: Some(5),
            theta: Some("1/4,1/4; 0.5,0".into()),
            k: Some("both".into()),
            no_timestamp: true,
            window_margin: Some("7/2".into()),
            strict_well_distributed: true,
            ..Overrides::default()
        };
        let c = parse_config(text, Path::new("."), &o).unwrap();
        assert!(matches!(&c.generator, GeneratorSpec::Product1d(f) if f.len() == 2));
        assert_eq!(c.levels, 5);
        assert_eq!(c.thetas.len(), 2);
        assert_eq!(c.k, KChoice::Both);
        assert!(!c.output.timestamp && c.strict_well_distributed);
        assert_eq!(c.window_margin, 3.5);
        assert_eq!(c.scan.adapted_bases, vec![Some(2), None]);
    }

    #[test]
    fn semantic_errors_name_the_field() {
        for (from, to, field) in [
            ("thetas = [\"1/4\"]", "thetas = [\"1/4,1/2\"]", "analysis.thetas[0]"),
            ("q = [2]", "q = [1]", "system.q"),
            ("generator = \"lattice_model\"", "generator = \"tiling\"", "system.generator"),
            ("levels = 6", "levels = 6\nk = \"3\"", "analysis.k"),
        ] {
            let err = parse(&LATTICE.replace(from, to)).unwrap_err();
            assert!(err.to_string().contains(field), "{err}");
        }
        assert!(matches!(parse("[system\n"), Err(Error::ConfigParse(_))));
        assert!(matches!(parse("[sytem]\n"), Err(Error::ConfigParse(_))));
    }
}
