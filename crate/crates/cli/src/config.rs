//! Job configuration: a TOML document with `[presentation]`, `[run]` and
//! `[output]` tables, plus command-line overrides.
//!
//! ```toml
//! [presentation]
//! preset = "projective_space(4)"
//! complete_intersection = [[5]]
//!
//! [run]
//! mode = "lefschetz"
//! max_degree = 3
//!
//! [output]
//! format = "json"
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ifunc_core::gitdata::{presets, GitPresentation};
use ifunc_core::ifunction::{BigISpec, Convexity, Mode, Options};
use ifunc_core::poly::Q;
use serde::Deserialize;

use crate::bigi;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub presentation: RawPresentation,
    #[serde(default)]
    pub run: RawRun,
    #[serde(default)]
    pub output: RawOutput,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPresentation {
    pub preset: Option<String>,
    pub torus_rank: Option<usize>,
    pub weights: Option<Vec<Vec<i64>>>,
    pub theta: Option<Vec<i64>>,
    pub roots: Option<Vec<Vec<i64>>>,
    pub positive_roots: Option<Vec<usize>>,
    pub weyl_generators: Option<Vec<Vec<Vec<i64>>>>,
    pub e_weights: Option<Vec<Vec<i64>>>,
    pub chi_g_basis: Option<Vec<Vec<i64>>>,
    pub equivariant_rank: Option<usize>,
    pub divisor_names: Option<Vec<String>>,
    /// Weights of `E` added to the presentation (torus part only for presets).
    pub complete_intersection: Option<Vec<Vec<i64>>>,
    /// Equivariant column for a preset, one entry per weight.
    pub equivariant_weights: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRun {
    pub mode: Option<String>,
    pub max_degree: Option<RationalValue>,
    pub denominator_bound: Option<u64>,
    pub convexity: Option<String>,
    pub equivariant: Option<bool>,
    pub mixed_presentations: Option<bool>,
    pub big_i: Option<RawBigI>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBigI {
    pub insertions: Vec<String>,
    pub characters: Vec<Vec<i64>>,
    pub t_order: u32,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    pub format: Option<String>,
    pub destination: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Plain,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plain" => Ok(Format::Plain),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{}' (expected plain, latex or json)", s)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub presentation: GitPresentation,
    pub options: Options,
    pub big_i: Option<BigISpec>,
    pub format: Format,
    pub destination: Option<PathBuf>,
    pub warnings: Vec<String>,
}

/// Values given on the command line; each replaces the config entry.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub mode: Option<String>,
    pub max_degree: Option<String>,
    pub denominator_bound: Option<u64>,
    pub convexity: Option<String>,
    pub equivariant: bool,
    pub big_i: Option<String>,
    pub format: Option<String>,
    pub destination: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigDiagnostic {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, "line {}, column {}: ", l, c)?;
        }
        if let Some(field) = &self.field {
            write!(f, "{}: ", field)?;
        }
        f.write_str(&self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    pub diagnostics: Vec<ConfigDiagnostic>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.diagnostics.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join("\n"))
    }
}

fn field_error(field: &str, message: impl Into<String>) -> ConfigDiagnostic {
    ConfigDiagnostic { line: None, column: None, field: Some(field.into()), message: message.into() }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}

pub fn parse_config(text: &str) -> Result<JobConfig, ConfigError> {
    parse_config_with(text, &Overrides::default())
}

pub fn parse_config_with(text: &str, overrides: &Overrides) -> Result<JobConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = match e.span() {
            Some(span) => {
                let (l, c) = line_col(text, span.start);
                (Some(l), Some(c))
            }
            None => (None, None),
        };
        ConfigError { diagnostics: vec![ConfigDiagnostic { line, column, field: None, message: e.message().to_string() }] }
    })?;
    build(raw, overrides).map_err(|diagnostics| ConfigError { diagnostics })
}

/// Parse `name(a, b, ...)` into the name and integer arguments.
fn parse_call(s: &str) -> Option<(String, Vec<i64>)> {
    let s = s.trim();
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    let args: Result<Vec<i64>, _> =
        inner.split(',').filter(|a| !a.trim().is_empty()).map(|a| a.trim().parse::<i64>()).collect();
    Some((s[..open].trim().to_string(), args.ok()?))
}

/// The preset presentation and its default equivariant column.
pub fn preset(spec: &str) -> Result<(GitPresentation, Vec<i64>), String> {
    let (name, args) = parse_call(spec).ok_or_else(|| format!("cannot parse preset '{}'", spec))?;
    match (name.as_str(), args.as_slice()) {
        ("projective_space", [n]) if *n >= 1 && *n <= 40 => {
            Ok((presets::projective_space(*n as usize), (0..=*n).collect()))
        }
        ("weighted_projective", ws) if !ws.is_empty() && ws.iter().all(|&w| w > 0) => {
            Ok((presets::weighted_projective(ws), (0..ws.len() as i64).collect()))
        }
        ("grassmannian", [k, n]) if *k >= 1 && k < n && *n <= 12 => {
            let (k, n) = (*k as usize, *n as usize);
            let column = (0..k).flat_map(|_| 0..n as i64).collect();
            Ok((presets::grassmannian(k, n), column))
        }
        _ => Err(format!(
            "unknown preset '{}' (expected projective_space(n), weighted_projective(w...), grassmannian(k,n))",
            spec
        )),
    }
}

fn parse_rational(field: &str, v: &RationalValue) -> Result<Q, ConfigDiagnostic> {
    match v {
        RationalValue::Int(i) => Ok(Q::from_integer((*i).into())),
        RationalValue::Text(s) => {
            Q::from_str(s.trim()).map_err(|_| field_error(field, format!("'{}' is not a rational number", s)))
        }
    }
}

fn build(raw: RawConfig, ov: &Overrides) -> Result<JobConfig, Vec<ConfigDiagnostic>> {
    let mut errs = Vec::new();
    let mut warnings = Vec::new();
    let equivariant = ov.equivariant || raw.run.equivariant.unwrap_or(false);
    let pr = raw.presentation;

    let presentation = if let Some(spec) = &pr.preset {
        let explicit = [
            ("torus_rank", pr.torus_rank.is_some()),
            ("weights", pr.weights.is_some()),
            ("theta", pr.theta.is_some()),
            ("roots", pr.roots.is_some()),
            ("positive_roots", pr.positive_roots.is_some()),
            ("weyl_generators", pr.weyl_generators.is_some()),
            ("e_weights", pr.e_weights.is_some()),
            ("chi_g_basis", pr.chi_g_basis.is_some()),
            ("equivariant_rank", pr.equivariant_rank.is_some()),
        ];
        for (name, set) in explicit {
            if set {
                errs.push(field_error(&format!("presentation.{}", name), "cannot be combined with a preset"));
            }
        }
        match preset(spec) {
            Err(m) => {
                errs.push(field_error("presentation.preset", m));
                None
            }
            Ok((mut p, column)) => {
                if let Some(ci) = &pr.complete_intersection {
                    p.e_weights = ci.clone();
                }
                if let Some(names) = &pr.divisor_names {
                    p.divisor_names = names.clone();
                }
                if equivariant {
                    let column = pr.equivariant_weights.clone().unwrap_or(column);
                    if column.len() != p.weights.len() {
                        errs.push(field_error(
                            "presentation.equivariant_weights",
                            format!("has {} entries, the preset has {} weights", column.len(), p.weights.len()),
                        ));
                    } else {
                        p = presets::with_equivariant_column(p, &column);
                    }
                } else if pr.equivariant_weights.is_some() {
                    warnings.push("presentation.equivariant_weights ignored: run is not equivariant".into());
                }
                Some(p)
            }
        }
    } else {
        let mut need = |name: &str, present: bool| {
            if !present {
                errs.push(field_error(&format!("presentation.{}", name), "required without a preset"));
            }
        };
        need("torus_rank", pr.torus_rank.is_some());
        need("weights", pr.weights.is_some());
        need("theta", pr.theta.is_some());
        let roots = pr.roots.clone().unwrap_or_default();
        if !roots.is_empty() {
            need("chi_g_basis", pr.chi_g_basis.is_some());
        }
        if pr.equivariant_weights.is_some() {
            errs.push(field_error(
                "presentation.equivariant_weights",
                "only for presets; give equivariant columns in weights and set equivariant_rank",
            ));
        }
        match (pr.torus_rank, pr.weights.clone(), pr.theta.clone()) {
            (Some(r), Some(weights), Some(theta)) => {
                let mut e_weights = pr.e_weights.clone().unwrap_or_default();
                e_weights.extend(pr.complete_intersection.clone().unwrap_or_default());
                Some(GitPresentation {
                    torus_rank: r,
                    weights,
                    theta,
                    roots,
                    positive_roots: pr.positive_roots.clone().unwrap_or_default(),
                    weyl_generators: pr.weyl_generators.clone().unwrap_or_default(),
                    e_weights,
                    chi_g_basis: pr
                        .chi_g_basis
                        .clone()
                        .unwrap_or_else(|| (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect()),
                    equivariant_rank: pr.equivariant_rank.unwrap_or(0),
                    divisor_names: pr.divisor_names.clone().unwrap_or_default(),
                })
            }
            _ => None,
        }
    };

    if let Some(p) = &presentation {
        if let Err(e) = p.check_structure() {
            errs.push(field_error("presentation", e.to_string()));
        } else if equivariant && p.equivariant_rank == 0 {
            errs.push(field_error("run.equivariant", "presentation has no equivariant columns"));
        }
    }

    let run = raw.run;
    let mode_text = ov.mode.clone().or(run.mode.clone());
    let mode = match mode_text.as_deref() {
        None => presentation.as_ref().map(|p| {
            if !p.e_weights.is_empty() {
                Mode::Lefschetz
            } else if p.is_abelian() {
                Mode::Toric
            } else {
                Mode::Nonabelian
            }
        }),
        Some("toric") => Some(Mode::Toric),
        Some("nonabelian") => Some(Mode::Nonabelian),
        Some("lefschetz") => Some(Mode::Lefschetz),
        Some(other) => {
            errs.push(field_error("run.mode", format!("unknown mode '{}' (expected toric, nonabelian, lefschetz)", other)));
            None
        }
    };
    if let (Some(Mode::Lefschetz), Some(p)) = (mode, &presentation) {
        if p.e_weights.is_empty() {
            warnings.push("run.mode: lefschetz with empty e_weights reduces to plain mode".into());
        }
    }
    let max_degree = match (&ov.max_degree, &run.max_degree) {
        (Some(s), _) => parse_rational("run.max_degree", &RationalValue::Text(s.clone())).map_err(|e| errs.push(e)).ok(),
        (None, Some(v)) => parse_rational("run.max_degree", v).map_err(|e| errs.push(e)).ok(),
        (None, None) => Some(Q::from_integer(1.into())),
    };
    let convexity = match ov.convexity.as_deref().or(run.convexity.as_deref()) {
        None | Some("convex-only") => Convexity::ConvexOnly,
        Some("assume-transverse") => Convexity::AssumeTransverse,
        Some(other) => {
            errs.push(field_error(
                "run.convexity",
                format!("unknown convexity mode '{}' (expected convex-only, assume-transverse)", other),
            ));
            Convexity::ConvexOnly
        }
    };
    let denominator_bound = ov.denominator_bound.or(run.denominator_bound);
    if denominator_bound == Some(0) {
        errs.push(field_error("run.denominator_bound", "must be positive"));
    }

    let big_i = match (&ov.big_i, &run.big_i) {
        (Some(s), _) => bigi::parse_spec(s).map_err(|m| errs.push(field_error("--big-i", m))).ok(),
        (None, Some(b)) => {
            let k = b.characters.len();
            let polys: Result<Vec<_>, String> = b.insertions.iter().map(|s| bigi::parse_polynomial(s, k)).collect();
            match polys {
                Ok(ps) => Some(BigISpec {
                    insertions: ps.into_iter().map(|polynomial| ifunc_core::ifunction::Insertion { polynomial }).collect(),
                    characters: b.characters.clone(),
                    t_order: b.t_order,
                }),
                Err(m) => {
                    errs.push(field_error("run.big_i.insertions", m));
                    None
                }
            }
        }
        (None, None) => None,
    };

    let format = match ov.format.as_deref().or(raw.output.format.as_deref()) {
        None => Format::Plain,
        Some(s) => s.parse().unwrap_or_else(|m| {
            errs.push(field_error("output.format", m));
            Format::Plain
        }),
    };
    let destination = ov.destination.clone().or(raw.output.destination).map(PathBuf::from);

    if !errs.is_empty() {
        return Err(errs);
    }
    let mut options = Options::new(mode.expect("mode set"), max_degree.expect("degree set"));
    options.denominator_bound = denominator_bound;
    options.convexity = convexity;
    options.equivariant = equivariant;
    options.mixed_presentations = run.mixed_presentations.unwrap_or(false);
    Ok(JobConfig {
        presentation: presentation.expect("presentation set"),
        options,
        big_i,
        format,
        destination,
        warnings,
    })
}

/// A config reproducing `p` with explicit fields, followed by a `[run]` table.
pub fn reproduction_config(p: &GitPresentation, options: &Options) -> String {
    let mut out = String::from("[presentation]\n");
    out += &format!("torus_rank = {}\n", p.torus_rank);
    out += &format!("weights = {:?}\n", p.weights);
    out += &format!("theta = {:?}\n", p.theta);
    if !p.roots.is_empty() {
        out += &format!("roots = {:?}\n", p.roots);
        out += &format!("positive_roots = {:?}\n", p.positive_roots);
        out += &format!("weyl_generators = {:?}\n", p.weyl_generators);
    }
    if !p.e_weights.is_empty() {
        out += &format!("e_weights = {:?}\n", p.e_weights);
    }
    out += &format!("chi_g_basis = {:?}\n", p.chi_g_basis);
    if p.equivariant_rank > 0 {
        out += &format!("equivariant_rank = {}\n", p.equivariant_rank);
    }
    if !p.divisor_names.is_empty() {
        out += &format!("divisor_names = {:?}\n", p.divisor_names);
    }
    out += "\n[run]\n";
    let mode = match options.mode {
        Mode::Toric => "toric",
        Mode::Nonabelian => "nonabelian",
        Mode::Lefschetz => "lefschetz",
    };
    out += &format!("mode = \"{}\"\n", mode);
    out += &format!("max_degree = \"{}\"\n", options.max_degree);
    if let Some(b) = options.denominator_bound {
        out += &format!("denominator_bound = {}\n", b);
    }
    if options.convexity == Convexity::AssumeTransverse {
        out += "convexity = \"assume-transverse\"\n";
    }
    if options.equivariant {
        out += "equivariant = true\n";
    }
    if options.mixed_presentations {
        out += "mixed_presentations = true\n";
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_with_bound() {
        let cfg = parse_config("[presentation]\npreset = \"projective_space(2)\"\n[run]\nmax_degree = 2\n").unwrap();
        assert_eq!(cfg.presentation, presets::projective_space(2));
        assert_eq!(cfg.options.mode, Mode::Toric);
        assert_eq!(cfg.options.max_degree, Q::from_integer(2.into()));
        assert_eq!(cfg.format, Format::Plain);
    }

    #[test]
    fn wrong_row_length_names_the_row() {
        let text = "[presentation]\ntorus_rank = 1\nweights = [[1], [1, 2], [1]]\ntheta = [1]\n";
        let err = parse_config(text).unwrap_err();
        assert!(err.to_string().contains("row 1"), "{}", err);
    }

    #[test]
    fn lefschetz_without_bundle_warns() {
        let cfg = parse_config("[presentation]\npreset = \"projective_space(2)\"\n[run]\nmode = \"lefschetz\"\n").unwrap();
        assert!(cfg.warnings.iter().any(|w| w.contains("reduces to plain")));
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let err = parse_config("[presentation]\npreset = \"projective_space(2)\"\nbogus = 1\n").unwrap_err();
        let d = &err.diagnostics[0];
        assert_eq!(d.line, Some(3));
        assert!(d.message.contains("bogus"), "{}", d.message);
        let err = parse_config("[presentation\n").unwrap_err();
        assert!(err.diagnostics[0].line.is_some());
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let err = parse_config("[presentation]\npreset = \"projective_space(2)\"\n[run]\nmode = \"abelian\"\n").unwrap_err();
        assert_eq!(err.diagnostics[0].field.as_deref(), Some("run.mode"));
        let err = parse_config("[presentation]\npreset = \"sphere(2)\"\n").unwrap_err();
        assert_eq!(err.diagnostics[0].field.as_deref(), Some("presentation.preset"));
    }

    #[test]
    fn overrides_replace_config_values() {
        let ov = Overrides {
            max_degree: Some("3/2".into()),
            format: Some("json".into()),
            equivariant: true,
            ..Default::default()
        };
        let cfg = parse_config_with("[presentation]\npreset = \"weighted_projective(1,1,2)\"\n", &ov).unwrap();
        assert_eq!(cfg.options.max_degree, Q::new(3.into(), 2.into()));
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.presentation.equivariant_rank, 1);
        assert_eq!(cfg.presentation.weights[2], vec![2, 2]);
    }

    #[test]
    fn grassmannian_complete_intersection() {
        let text = "[presentation]\npreset = \"grassmannian(2,4)\"\ncomplete_intersection = [[1,1],[1,1]]\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.options.mode, Mode::Lefschetz);
        assert_eq!(cfg.presentation.e_weights.len(), 2);
    }

    #[test]
    fn reproduction_config_round_trips() {
        let mut o = Options::new(Mode::Nonabelian, Q::new(3.into(), 2.into()));
        o.denominator_bound = Some(2);
        let g = presets::grassmannian(2, 4);
        let cfg = parse_config(&reproduction_config(&g, &o)).unwrap();
        assert_eq!(cfg.presentation, g);
        assert_eq!(cfg.options, o);
    }
}
