//! Rendering of series as plain text, LaTeX and versioned JSON.

use std::fmt;

use ifunc_core::chowring::RingElement;
use ifunc_core::coeff::CoeffFunction;
use ifunc_core::gitdata::{CurveClass, Sector};
use ifunc_core::ifunction::{
    ClassBasis, Diagnostic, DiagnosticKind, IFunctionSeries, Presentation, ResidueMarker, SectorClass, SeriesTerm,
};
use ifunc_core::poly::{monomial_string, Poly, Q};
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::Format;

pub const SCHEMA_VERSION: u32 = 1;

pub fn render(series: &IFunctionSeries, format: Format) -> String {
    match format {
        Format::Plain => render_plain(series),
        Format::Latex => render_latex(series),
        Format::Json => render_json(series),
    }
}

/// `(z exponent, coefficient)` pairs when `c` is a Laurent polynomial in `z`.
fn laurent(c: &CoeffFunction) -> Option<Vec<(i64, Q)>> {
    if c.nvars() != 1 || !c.has_z_power_denominator() {
        return None;
    }
    let k = c.z_denominator_power() as i64;
    let mut out: Vec<(i64, Q)> = c.numerator().terms().iter().map(|(e, a)| (e[0] as i64 - k, a.clone())).collect();
    out.sort_by_key(|t| std::cmp::Reverse(t.0));
    Some(out)
}

/// One signed monomial: sign, absolute coefficient and named factors.
struct Summand {
    negative: bool,
    coeff: Q,
    factors: Vec<(String, i64)>,
}

fn ring_summands(x: &RingElement, names: &[String]) -> Option<Vec<Summand>> {
    let mut out = Vec::new();
    for (e, c) in x.terms() {
        let base: Vec<(String, i64)> =
            e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (names[i].clone(), k as i64)).collect();
        for (zexp, a) in laurent(c)? {
            let mut factors = base.clone();
            if zexp != 0 {
                factors.push(("z".into(), zexp));
            }
            out.push(Summand { negative: a.is_negative(), coeff: a.abs(), factors });
        }
    }
    Some(out)
}

fn q_plain(x: &Q) -> String {
    x.to_string()
}

fn class_plain(c: &CurveClass) -> String {
    let v: Vec<String> = c.values.iter().map(q_plain).collect();
    format!("q^({})", v.join(", "))
}

fn sector_label(s: &Sector) -> String {
    let v: Vec<String> = s.element.iter().map(q_plain).collect();
    v.join(", ")
}

fn tau_factors(insertion: &[u32]) -> Vec<(String, i64)> {
    insertion.iter().enumerate().filter(|(_, &m)| m > 0).map(|(i, &m)| (format!("tau{}", i + 1), m as i64)).collect()
}

fn residue_text(r: &ResidueMarker) -> String {
    let j = |v: &[usize]| format!("{{{}}}", v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
    format!(
        "Res[vanishing={}, nonnegative={}, offending={}]",
        j(&r.vanishing_coordinates),
        j(&r.nonnegative_e_weights),
        j(&r.offending_e_weights)
    )
}

fn plain_factor(name: &str, k: i64) -> String {
    if k == 1 {
        name.to_string()
    } else {
        format!("{}^{}", name, k)
    }
}

/// Plain rendering of a component: a list of signed summands.
fn plain_component(term: &SeriesTerm, c: &SectorClass, names: &[String], coef_names: &[String]) -> Vec<(bool, String)> {
    let mut prefix: Vec<String> = Vec::new();
    if !term.class.is_zero() {
        prefix.push(class_plain(&term.class));
    }
    prefix.extend(tau_factors(&c.insertion).iter().map(|(n, k)| plain_factor(n, *k)));
    if !c.sector.is_untwisted() {
        prefix.push(format!("1_[{}]", sector_label(&c.sector)));
    }
    if c.presentation == Presentation::Pushforward {
        prefix.push("push".into());
    }
    if let Some(r) = &c.residue {
        prefix.push(residue_text(r));
        return vec![(false, prefix.join("*"))];
    }
    match ring_summands(&c.coefficient, names) {
        Some(summands) => summands
            .into_iter()
            .map(|s| {
                let mut parts = prefix.clone();
                let body: Vec<String> = s.factors.iter().map(|(n, k)| plain_factor(n, *k)).collect();
                if !s.coeff.is_one() || (body.is_empty() && parts.is_empty()) {
                    parts.push(q_plain(&s.coeff));
                }
                parts.extend(body);
                (s.negative, parts.join("*"))
            })
            .collect(),
        None => c
            .coefficient
            .terms()
            .iter()
            .map(|(e, a)| {
                let mut parts = prefix.clone();
                let text = a.display_with(coef_names);
                let bare = a.numerator().terms().len() == 1 && a.denominator_factors().is_empty();
                parts.push(if bare { text } else { format!("({})", text) });
                parts.push(monomial_string(e, names, "^"));
                parts.retain(|s| !s.is_empty());
                (false, parts.join("*"))
            })
            .collect(),
    }
}

/// A formal sum with one summand per line; diagnostics follow as `#` lines.
pub fn render_plain(series: &IFunctionSeries) -> String {
    let names = &series.divisor_names;
    let coef_names = series.coefficient_names();
    let mut lines = Vec::new();
    for t in &series.terms {
        for c in &t.components {
            for (neg, s) in plain_component(t, c, names, &coef_names) {
                let line = match (lines.is_empty(), neg) {
                    (true, false) => s,
                    (true, true) => format!("-{}", s),
                    (false, false) => format!("+ {}", s),
                    (false, true) => format!("- {}", s),
                };
                lines.push(line);
            }
        }
    }
    if lines.is_empty() {
        lines.push("0".into());
    }
    for d in &series.diagnostics {
        lines.push(format!("# {}", d));
    }
    lines.join("\n")
}

fn latex_q(x: &Q) -> String {
    if x.is_integer() {
        x.to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", x.numer(), x.denom())
    }
}

fn latex_factor(name: &str, k: i64) -> String {
    let name = match name.strip_prefix("tau") {
        Some(i) => format!("\\tau_{{{}}}", i),
        None => name.to_string(),
    };
    if k == 1 {
        name
    } else {
        format!("{}^{{{}}}", name, k)
    }
}

fn latex_poly(p: &Poly, names: &[String]) -> String {
    let mut out = String::new();
    for (e, c) in p.terms().iter().rev() {
        let mono: Vec<String> =
            e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| latex_factor(&names[i], k as i64)).collect();
        let neg = c.is_negative();
        let a = c.abs();
        let body = if mono.is_empty() {
            latex_q(&a)
        } else if a.is_one() {
            mono.join(" ")
        } else {
            format!("{} {}", latex_q(&a), mono.join(" "))
        };
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&body),
            (true, true) => out.push_str(&format!("-{}", body)),
            (false, false) => out.push_str(&format!(" + {}", body)),
            (false, true) => out.push_str(&format!(" - {}", body)),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn latex_coeff(c: &CoeffFunction, names: &[String]) -> String {
    if c.denominator_factors().is_empty() {
        return latex_poly(c.numerator(), names);
    }
    let den: Vec<String> = c
        .denominator_factors()
        .iter()
        .map(|(a, m)| {
            let s = latex_poly(a, names);
            let s = if a.terms().len() > 1 { format!("({})", s) } else { s };
            if *m == 1 {
                s
            } else {
                format!("{}^{{{}}}", s, m)
            }
        })
        .collect();
    format!("\\frac{{{}}}{{{}}}", latex_poly(c.numerator(), names), den.join(" "))
}

/// Summand in LaTeX: Laurent monomials in `z` become `\frac{a}{b z^{k}}`.
fn latex_summand(s: &Summand) -> String {
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    for (n, k) in &s.factors {
        if *k < 0 {
            den.push(latex_factor(n, -k));
        } else {
            num.push(latex_factor(n, *k));
        }
    }
    if den.is_empty() {
        let c = if s.coeff.is_one() && !num.is_empty() { String::new() } else { latex_q(&s.coeff) };
        return [c, num.join(" ")].iter().filter(|x| !x.is_empty()).cloned().collect::<Vec<_>>().join(" ");
    }
    let mut top = s.coeff.numer().to_string();
    if !num.is_empty() {
        top = if s.coeff.numer().is_one() { num.join(" ") } else { format!("{} {}", top, num.join(" ")) };
    }
    let d = s.coeff.denom();
    let bottom = if d.is_one() { den.join(" ") } else { format!("{} {}", d, den.join(" ")) };
    format!("\\frac{{{}}}{{{}}}", top, bottom)
}

fn latex_class(c: &CurveClass) -> String {
    if c.values.len() == 1 {
        format!("q^{{{}}}", latex_q(&c.values[0]))
    } else {
        let v: Vec<String> = c.values.iter().map(latex_q).collect();
        format!("q^{{({})}}", v.join(", "))
    }
}

/// LaTeX body (no math delimiters), one summand per line.
pub fn render_latex(series: &IFunctionSeries) -> String {
    let names = &series.divisor_names;
    let mut coef_names = series.coefficient_names();
    for n in coef_names.iter_mut().skip(1) {
        *n = format!("s_{{{}}}", &n[1..]);
    }
    let mut lines: Vec<(bool, String)> = Vec::new();
    for t in &series.terms {
        for c in &t.components {
            let mut prefix: Vec<String> = Vec::new();
            if !t.class.is_zero() {
                prefix.push(latex_class(&t.class));
            }
            prefix.extend(tau_factors(&c.insertion).iter().map(|(n, k)| latex_factor(n, *k)));
            if !c.sector.is_untwisted() {
                let v: Vec<String> = c.sector.element.iter().map(latex_q).collect();
                prefix.push(format!("\\mathbf{{1}}_{{({})}}", v.join(", ")));
            }
            if c.presentation == Presentation::Pushforward {
                prefix.push("\\iota_*".into());
            }
            if let Some(r) = &c.residue {
                prefix.push(format!("\\mathrm{{{}}}", residue_text(r)));
                lines.push((false, prefix.join(" ")));
                continue;
            }
            match ring_summands(&c.coefficient, names) {
                Some(summands) => {
                    for s in summands {
                        let mut parts = prefix.clone();
                        parts.push(latex_summand(&s));
                        lines.push((s.negative, parts.join(" ")));
                    }
                }
                None => {
                    for (e, a) in c.coefficient.terms() {
                        let mut parts = prefix.clone();
                        parts.push(format!("\\left({}\\right)", latex_coeff(a, &coef_names)));
                        parts.extend(
                            e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| latex_factor(&names[i], k as i64)),
                        );
                        lines.push((false, parts.join(" ")));
                    }
                }
            }
        }
    }
    if lines.is_empty() {
        return "0".into();
    }
    let mut out = Vec::new();
    for (i, (neg, s)) in lines.into_iter().enumerate() {
        out.push(match (i == 0, neg) {
            (true, false) => s,
            (true, true) => format!("-{}", s),
            (false, false) => format!("+ {}", s),
            (false, true) => format!("- {}", s),
        });
    }
    out.join("\n")
}

type Rat = [String; 2];

fn rat(x: &Q) -> Rat {
    [x.numer().to_string(), x.denom().to_string()]
}

fn unrat(r: &Rat) -> Result<Q, JsonError> {
    let n = r[0].parse().map_err(|_| JsonError::Value(format!("bad numerator '{}'", r[0])))?;
    let d: num::BigInt = r[1].parse().map_err(|_| JsonError::Value(format!("bad denominator '{}'", r[1])))?;
    if d.is_zero() {
        return Err(JsonError::Value("zero denominator".into()));
    }
    Ok(Q::new(n, d))
}

fn unrats(v: &[Rat]) -> Result<Vec<Q>, JsonError> {
    v.iter().map(unrat).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDoc {
    pub schema_version: u32,
    pub degree_bound: Rat,
    pub class_basis: String,
    pub divisor_names: Vec<String>,
    pub torus_rank: usize,
    pub equivariant_rank: usize,
    pub insertion_count: usize,
    pub terms: Vec<TermDoc>,
    pub diagnostics: Vec<DiagnosticDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub class: Vec<Rat>,
    pub theta_degree: Rat,
    pub components: Vec<ComponentDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorDoc {
    pub element: Vec<Rat>,
    pub fracs: Vec<Rat>,
    pub fixed_support: Vec<usize>,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidueDoc {
    pub vanishing_coordinates: Vec<usize>,
    pub nonnegative_e_weights: Vec<usize>,
    pub offending_e_weights: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub sector: SectorDoc,
    pub representative: Vec<Rat>,
    pub presentation: String,
    pub insertion: Vec<u32>,
    pub residue: Option<ResidueDoc>,
    pub coefficient: Vec<CoefficientTermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTermDoc {
    pub exponent: Vec<u32>,
    pub coefficient: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub factor: Vec<PolyTermDoc>,
    pub multiplicity: u32,
}

/// One monomial of the cohomology ring with its coefficient
/// `numerator / prod(factor^multiplicity)` in `z, s1, ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientTermDoc {
    pub exponent: Vec<u32>,
    pub numerator: Vec<PolyTermDoc>,
    pub denominator_factors: Vec<FactorDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticDoc {
    pub kind: String,
    pub class: Option<Vec<Rat>>,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unsupported schema_version {0}")]
    Version(u32),
    #[error("invalid value: {0}")]
    Value(String),
}

fn poly_doc(p: &Poly) -> Vec<PolyTermDoc> {
    p.terms().iter().map(|(e, c)| PolyTermDoc { exponent: e.clone(), coefficient: rat(c) }).collect()
}

fn poly_from(nvars: usize, v: &[PolyTermDoc]) -> Result<Poly, JsonError> {
    let mut terms = Vec::new();
    for t in v {
        if t.exponent.len() != nvars {
            return Err(JsonError::Value(format!("exponent {:?} should have length {}", t.exponent, nvars)));
        }
        terms.push((t.exponent.clone(), unrat(&t.coefficient)?));
    }
    Ok(Poly::from_terms(nvars, terms))
}

pub fn to_doc(series: &IFunctionSeries) -> SeriesDoc {
    SeriesDoc {
        schema_version: SCHEMA_VERSION,
        degree_bound: rat(&series.degree_bound),
        class_basis: match series.class_basis {
            ClassBasis::Torus => "torus".into(),
            ClassBasis::GCharacters => "g-characters".into(),
        },
        divisor_names: series.divisor_names.clone(),
        torus_rank: series.torus_rank,
        equivariant_rank: series.equivariant_rank,
        insertion_count: series.insertion_count,
        terms: series
            .terms
            .iter()
            .map(|t| TermDoc {
                class: t.class.values.iter().map(rat).collect(),
                theta_degree: rat(&t.theta_degree),
                components: t
                    .components
                    .iter()
                    .map(|c| ComponentDoc {
                        sector: SectorDoc {
                            element: c.sector.element.iter().map(rat).collect(),
                            fracs: c.sector.fracs.iter().map(rat).collect(),
                            fixed_support: c.sector.fixed_support.clone(),
                            order: c.sector.order,
                        },
                        representative: c.representative.values.iter().map(rat).collect(),
                        presentation: c.presentation.as_str().into(),
                        insertion: c.insertion.clone(),
                        residue: c.residue.as_ref().map(|r| ResidueDoc {
                            vanishing_coordinates: r.vanishing_coordinates.clone(),
                            nonnegative_e_weights: r.nonnegative_e_weights.clone(),
                            offending_e_weights: r.offending_e_weights.clone(),
                        }),
                        coefficient: c
                            .coefficient
                            .terms()
                            .iter()
                            .map(|(e, a)| CoefficientTermDoc {
                                exponent: e.clone(),
                                numerator: poly_doc(a.numerator()),
                                denominator_factors: a
                                    .denominator_factors()
                                    .iter()
                                    .map(|(f, m)| FactorDoc { factor: poly_doc(f), multiplicity: *m })
                                    .collect(),
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
        diagnostics: series
            .diagnostics
            .iter()
            .map(|d| DiagnosticDoc {
                kind: d.kind.as_str().into(),
                class: d.class.as_ref().map(|c| c.values.iter().map(rat).collect()),
                message: d.message.clone(),
            })
            .collect(),
    }
}

pub fn from_doc(doc: &SeriesDoc) -> Result<IFunctionSeries, JsonError> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(JsonError::Version(doc.schema_version));
    }
    let r = doc.torus_rank;
    let ncoef = doc.equivariant_rank + 1;
    let class_basis = match doc.class_basis.as_str() {
        "torus" => ClassBasis::Torus,
        "g-characters" => ClassBasis::GCharacters,
        other => return Err(JsonError::Value(format!("unknown class_basis '{}'", other))),
    };
    let mut terms = Vec::new();
    for t in &doc.terms {
        let mut components = Vec::new();
        for c in &t.components {
            let mut coefficient = RingElement::zero(r, ncoef);
            for ct in &c.coefficient {
                if ct.exponent.len() != r {
                    return Err(JsonError::Value(format!("ring exponent {:?} should have length {}", ct.exponent, r)));
                }
                let num = poly_from(ncoef, &ct.numerator)?;
                let factors = ct
                    .denominator_factors
                    .iter()
                    .map(|f| Ok((poly_from(ncoef, &f.factor)?, f.multiplicity)))
                    .collect::<Result<Vec<_>, JsonError>>()?;
                let a = CoeffFunction::from_parts(num, factors).map_err(|e| JsonError::Value(e.to_string()))?;
                coefficient.add_term(ct.exponent.clone(), a);
            }
            components.push(SectorClass {
                sector: Sector {
                    element: unrats(&c.sector.element)?,
                    fracs: unrats(&c.sector.fracs)?,
                    fixed_support: c.sector.fixed_support.clone(),
                    order: c.sector.order,
                },
                representative: CurveClass::new(unrats(&c.representative)?),
                presentation: Presentation::parse(&c.presentation)
                    .ok_or_else(|| JsonError::Value(format!("unknown presentation '{}'", c.presentation)))?,
                coefficient,
                insertion: c.insertion.clone(),
                residue: c.residue.as_ref().map(|r| ResidueMarker {
                    vanishing_coordinates: r.vanishing_coordinates.clone(),
                    nonnegative_e_weights: r.nonnegative_e_weights.clone(),
                    offending_e_weights: r.offending_e_weights.clone(),
                }),
            });
        }
        terms.push(SeriesTerm {
            class: CurveClass::new(unrats(&t.class)?),
            theta_degree: unrat(&t.theta_degree)?,
            components,
        });
    }
    let diagnostics = doc
        .diagnostics
        .iter()
        .map(|d| {
            Ok(Diagnostic {
                kind: DiagnosticKind::parse(&d.kind)
                    .ok_or_else(|| JsonError::Value(format!("unknown diagnostic kind '{}'", d.kind)))?,
                class: d.class.as_ref().map(|v| unrats(v).map(CurveClass::new)).transpose()?,
                message: d.message.clone(),
            })
        })
        .collect::<Result<Vec<_>, JsonError>>()?;
    Ok(IFunctionSeries {
        degree_bound: unrat(&doc.degree_bound)?,
        class_basis,
        divisor_names: doc.divisor_names.clone(),
        torus_rank: r,
        equivariant_rank: doc.equivariant_rank,
        insertion_count: doc.insertion_count,
        terms,
        diagnostics,
    })
}

pub fn render_json(series: &IFunctionSeries) -> String {
    let mut s = serde_json::to_string_pretty(&to_doc(series)).expect("documents serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<IFunctionSeries, JsonError> {
    let doc: SeriesDoc = serde_json::from_str(text)?;
    from_doc(&doc)
}

/// Wrapper used by `Display` callers that want plain text.
pub struct Plain<'a>(pub &'a IFunctionSeries);

impl fmt::Display for Plain<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_plain(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ifunc_core::gitdata::presets::*;
    use ifunc_core::ifunction::{assemble, toric_series, Mode, Options};
    use ifunc_core::poly::{q, qf};

    #[test]
    fn unit_series_is_one() {
        let s = toric_series(&projective_space(2), &q(0)).unwrap();
        assert_eq!(render_plain(&s), "1");
        assert_eq!(render_latex(&s), "1");
    }

    #[test]
    fn projective_plane_degree_one() {
        // (H+z)^{-3} = z^-3 - 3 H z^-4 + 6 H^2 z^-5 in Q[H]/(H^3)
        let s = toric_series(&projective_space(2), &q(1)).unwrap();
        let plain = render_plain(&s);
        assert_eq!(plain, "1\n+ q^(1)*z^-3\n- q^(1)*3*H*z^-4\n+ q^(1)*6*H^2*z^-5");
        let latex = render_latex(&s);
        assert_eq!(latex, "1\n+ q^{1} \\frac{1}{z^{3}}\n- q^{1} \\frac{3 H}{z^{4}}\n+ q^{1} \\frac{6 H^{2}}{z^{5}}");
    }

    #[test]
    fn twisted_sector_labels() {
        let s = toric_series(&weighted_projective(&[1, 1, 2]), &qf(1, 2)).unwrap();
        assert_eq!(render_plain(&s), "1\n+ q^(1/2)*1_[1/2]*4*z^-3");
        assert!(render_latex(&s).contains("q^{\\frac{1}{2}} \\mathbf{1}_{(\\frac{1}{2})} \\frac{4}{z^{3}}"));
    }

    #[test]
    fn json_round_trip() {
        for s in [
            toric_series(&weighted_projective(&[1, 1, 2]), &q(2)).unwrap(),
            assemble(&grassmannian(2, 4), &Options::new(Mode::Nonabelian, q(2))).unwrap(),
        ] {
            let text = render_json(&s);
            assert!(text.contains("\"schema_version\": 1"));
            assert_eq!(from_json(&text).unwrap(), s);
            assert_eq!(render_json(&from_json(&text).unwrap()), text);
        }
        let mut o = Options::new(Mode::Toric, q(1));
        o.equivariant = true;
        let s = assemble(&with_equivariant_column(projective_space(2), &[0, 1, 2]), &o).unwrap();
        let text = render_json(&s);
        assert_eq!(from_json(&text).unwrap(), s);
        assert!(render_plain(&s).contains("(z + s1)"), "{}", render_plain(&s));
    }

    #[test]
    fn json_rejects_other_versions() {
        let s = toric_series(&projective_space(1), &q(1)).unwrap();
        let text = render_json(&s).replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(matches!(from_json(&text), Err(JsonError::Version(7))));
    }
}
