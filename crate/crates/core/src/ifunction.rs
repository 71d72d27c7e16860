//! Assembly of I-function coefficients into a truncated series.
//!
//! Abelian quotients use the closed form `∏_l C(β̃, ξ_l)` in the ring of the
//! involuted sector. Nonabelian quotients sum the abelian terms over a fiber
//! of `Hom(χ(T), Q) → Hom(χ(G), Q)`, multiplied by the Δ-cleared root factor,
//! and divide the anti-invariant result by `Δ`. A bundle `E` twists each term
//! by `∏_j C(β̃, ε_j)⁻¹` when that is defined, and otherwise either skips the
//! term or emits a pushforward representative.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num::{One, Signed};

use crate::chowring::{antisymmetrize, divide_by_delta, RingElement, SectorRing};
use crate::coeff::CoeffFunction;
use crate::error::{Error, Result};
use crate::factors::{c_factor, delta_for, is_i_nonnegative, is_negative_integer, weyl_numerator_factor, Variant};
use crate::gitdata::{
    check_bounded, default_denominator_bound, enumerate_effective, involute, sector_of, validate, CurveClass,
    GitPresentation, Sector, StabilityData, WeylGroup,
};
use crate::poly::{Exponent, Poly, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Toric,
    Nonabelian,
    Lefschetz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convexity {
    /// Only I-nonnegative terms are computed; the others are skipped.
    ConvexOnly,
    /// Non-I-nonnegative terms are emitted as pushforward representatives,
    /// valid when the section is regular and the excess bundle is trivial.
    AssumeTransverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub mode: Mode,
    pub max_degree: Q,
    /// Defaults to the lcm of the sector orders.
    pub denominator_bound: Option<u64>,
    pub convexity: Convexity,
    pub equivariant: bool,
    /// Allow restricted and pushforward coefficients in one series.
    pub mixed_presentations: bool,
}

impl Options {
    pub fn new(mode: Mode, max_degree: Q) -> Self {
        Options {
            mode,
            max_degree,
            denominator_bound: None,
            convexity: Convexity::ConvexOnly,
            equivariant: false,
            mixed_presentations: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Presentation {
    /// A class on the sector of the target itself.
    Restricted,
    /// An ambient representative: the restricted class times the Euler
    /// class of `E` on the sector.
    Pushforward,
    /// No closed form is available; only the data of the term is recorded.
    SymbolicResidue,
}

impl Presentation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Presentation::Restricted => "restricted",
            Presentation::Pushforward => "pushforward",
            Presentation::SymbolicResidue => "symbolic-residue",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "restricted" => Some(Presentation::Restricted),
            "pushforward" => Some(Presentation::Pushforward),
            "symbolic-residue" => Some(Presentation::SymbolicResidue),
            _ => None,
        }
    }
}

/// Data of a term whose value is not computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueMarker {
    /// Indices `l` with `β̃(ξ_l) ∈ Z_{<0}`.
    pub vanishing_coordinates: Vec<usize>,
    /// Indices `j` with `β̃(ε_j) ∈ Z_{≥0}`.
    pub nonnegative_e_weights: Vec<usize>,
    /// Indices `j` with `β̃(ε_j) ∈ Z_{<0}`.
    pub offending_e_weights: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorClass {
    /// The component the coefficient lives on (after the inversion).
    pub sector: Sector,
    /// A torus class contributing to this component.
    pub representative: CurveClass,
    pub presentation: Presentation,
    pub coefficient: RingElement,
    /// Exponents of the insertion parameters of the bigger I-function;
    /// empty for the small series.
    pub insertion: Vec<u32>,
    pub residue: Option<ResidueMarker>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTerm {
    pub class: CurveClass,
    pub theta_degree: Q,
    pub components: Vec<SectorClass>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassBasis {
    /// Values on the standard characters of the torus.
    Torus,
    /// Values on the `chi_g_basis`.
    GCharacters,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiagnosticKind {
    UserAsserted,
    ReducedMode,
    SkippedNonConvex,
    SymbolicResidue,
    PushforwardHypothesis,
}

impl DiagnosticKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagnosticKind::UserAsserted => "user-asserted",
            DiagnosticKind::ReducedMode => "reduced-mode",
            DiagnosticKind::SkippedNonConvex => "skipped-non-convex",
            DiagnosticKind::SymbolicResidue => "symbolic-residue",
            DiagnosticKind::PushforwardHypothesis => "pushforward-hypothesis",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            DiagnosticKind::UserAsserted,
            DiagnosticKind::ReducedMode,
            DiagnosticKind::SkippedNonConvex,
            DiagnosticKind::SymbolicResidue,
            DiagnosticKind::PushforwardHypothesis,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub class: Option<CurveClass>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.class {
            Some(c) => write!(f, "[{}] {}: {}", self.kind.as_str(), c, self.message),
            None => write!(f, "[{}] {}", self.kind.as_str(), self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IFunctionSeries {
    pub degree_bound: Q,
    pub class_basis: ClassBasis,
    pub divisor_names: Vec<String>,
    pub torus_rank: usize,
    /// Number of equivariant parameters in the coefficients.
    pub equivariant_rank: usize,
    /// Number of insertion parameters (zero for the small series).
    pub insertion_count: usize,
    pub terms: Vec<SeriesTerm>,
    pub diagnostics: Vec<Diagnostic>,
}

impl IFunctionSeries {
    pub fn term(&self, class: &CurveClass) -> Option<&SeriesTerm> {
        self.terms.iter().find(|t| &t.class == class)
    }

    /// Names of the coefficient variables: `z`, then `s1..sq`.
    pub fn coefficient_names(&self) -> Vec<String> {
        let mut v = vec!["z".to_string()];
        v.extend((1..=self.equivariant_rank).map(|p| format!("s{}", p)));
        v
    }
}

/// One insertion of the bigger I-function: a polynomial in variables
/// `x_0..x_{k-1}`, one per entry of the character list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Insertion {
    pub polynomial: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigISpec {
    pub insertions: Vec<Insertion>,
    pub characters: Vec<Vec<i64>>,
    pub t_order: u32,
}

/// Shared state of one computation: the validated presentation, its
/// stability data and Weyl group, and a cache of sector rings.
pub struct Engine {
    p: GitPresentation,
    stab: StabilityData,
    weyl: WeylGroup,
    ncoef: usize,
    warnings: Vec<String>,
    rings: Mutex<HashMap<Vec<Q>, Arc<SectorRing>>>,
}

impl Engine {
    /// Validate `p`. An unbounded class region is reported before any
    /// other semantic problem.
    pub fn new(p: GitPresentation, equivariant: bool) -> Result<Self> {
        p.check_structure()?;
        check_bounded(&p)?;
        let warnings = validate(&p)?.into_result()?;
        if equivariant && p.equivariant_rank == 0 {
            return Err(Error::Unsupported("equivariant run requested but the presentation has no equivariant columns".into()));
        }
        let weyl = WeylGroup::generate(&p.weyl_generators, p.torus_rank)?;
        let stab = StabilityData::new(&p);
        let ncoef = if equivariant { 1 + p.equivariant_rank } else { 1 };
        Ok(Engine { p, stab, weyl, ncoef, warnings, rings: Mutex::new(HashMap::new()) })
    }

    pub fn presentation(&self) -> &GitPresentation {
        &self.p
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn ncoef(&self) -> usize {
        self.ncoef
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// The (cached) ring of a sector.
    pub fn ring(&self, s: &Sector) -> Arc<SectorRing> {
        let mut cache = self.rings.lock().expect("ring cache poisoned");
        cache
            .entry(s.element.clone())
            .or_insert_with(|| Arc::new(SectorRing::build_with(s, &self.p, &self.stab, self.ncoef)))
            .clone()
    }

    /// The component receiving the coefficient of `β̃`.
    pub fn landing_sector(&self, beta: &CurveClass) -> Sector {
        involute(&sector_of(&self.p, beta))
    }

    /// `∏_l C(β̃, ξ_l)` in the ring of the involuted sector.
    pub fn toric_coefficient(&self, beta: &CurveClass) -> Result<SectorClass> {
        let sector = self.landing_sector(beta);
        let ring = self.ring(&sector);
        let coefficient = self.ambient_product(&ring, beta)?;
        Ok(SectorClass {
            sector,
            representative: beta.clone(),
            presentation: Presentation::Restricted,
            coefficient,
            insertion: Vec::new(),
            residue: None,
        })
    }

    fn ambient_product(&self, ring: &SectorRing, beta: &CurveClass) -> Result<RingElement> {
        let mut acc = ring.one();
        for w in &self.p.weights {
            acc = ring.mul(&acc, &c_factor(ring, beta, w, Variant::Full, false)?);
        }
        Ok(acc)
    }

    /// How a class is treated in Lefschetz mode.
    fn lefschetz_plan(&self, beta: &CurveClass, opts: &Options) -> TermPlan {
        if opts.mode != Mode::Lefschetz || self.p.e_weights.is_empty() {
            return TermPlan::Plain;
        }
        let nonneg = is_i_nonnegative(beta, &self.p);
        match (opts.convexity, nonneg) {
            (Convexity::ConvexOnly, true) => TermPlan::Convex,
            (Convexity::ConvexOnly, false) => TermPlan::Skip,
            (Convexity::AssumeTransverse, true) if opts.mixed_presentations => TermPlan::Convex,
            (Convexity::AssumeTransverse, _) => TermPlan::Pushforward,
        }
    }

    /// The abelian value of one class in `ring`, without any root factors.
    fn abelian_value(&self, ring: &SectorRing, beta: &CurveClass, plan: TermPlan) -> Result<RingElement> {
        match plan {
            TermPlan::Plain => self.ambient_product(ring, beta),
            TermPlan::Convex => {
                let mut acc = self.ambient_product(ring, beta)?;
                for e in &self.p.e_weights {
                    acc = ring.mul(&acc, &c_factor(ring, beta, e, Variant::Full, true)?);
                }
                Ok(acc)
            }
            TermPlan::Pushforward => {
                let mut acc = ring.one();
                for w in &self.p.weights {
                    if is_negative_integer(&beta.pairing(w)) {
                        acc = ring.mul(&acc, &ring.chern(w));
                    }
                    acc = ring.mul(&acc, &c_factor(ring, beta, w, Variant::Reduced, false)?);
                }
                for e in &self.p.e_weights {
                    let b = beta.pairing(e);
                    if b.is_integer() && !b.is_negative() {
                        acc = ring.mul(&acc, &ring.chern(e));
                    }
                    acc = ring.mul(&acc, &c_factor(ring, beta, e, Variant::Reduced, true)?);
                }
                Ok(acc)
            }
            TermPlan::Skip => Ok(ring.zero()),
        }
    }

    fn residue_marker(&self, beta: &CurveClass) -> ResidueMarker {
        let pick = |ws: &[Vec<i64>], f: &dyn Fn(&Q) -> bool| -> Vec<usize> {
            ws.iter().enumerate().filter(|(_, w)| f(&beta.pairing(w))).map(|(i, _)| i).collect()
        };
        ResidueMarker {
            vanishing_coordinates: pick(&self.p.weights, &|b| is_negative_integer(b)),
            nonnegative_e_weights: pick(&self.p.e_weights, &|b| b.is_integer() && !b.is_negative()),
            offending_e_weights: pick(&self.p.e_weights, &|b| is_negative_integer(b)),
        }
    }

    fn skipped(&self, beta: &CurveClass, diags: &mut Vec<Diagnostic>) -> SectorClass {
        let marker = self.residue_marker(beta);
        diags.push(Diagnostic {
            kind: DiagnosticKind::SkippedNonConvex,
            class: Some(beta.clone()),
            message: format!(
                "not I-nonnegative: e_weights {:?} pair to negative integers; term not computed",
                marker.offending_e_weights
            ),
        });
        diags.push(Diagnostic {
            kind: DiagnosticKind::SymbolicResidue,
            class: Some(beta.clone()),
            message: format!(
                "residue term left symbolic (vanishing coordinates {:?}, nonnegative e_weights {:?})",
                marker.vanishing_coordinates, marker.nonnegative_e_weights
            ),
        });
        let sector = self.landing_sector(beta);
        SectorClass {
            coefficient: RingElement::zero(self.p.torus_rank, self.ncoef),
            sector,
            representative: beta.clone(),
            presentation: Presentation::SymbolicResidue,
            insertion: Vec::new(),
            residue: Some(marker),
        }
    }

    /// Coefficient of an abelian quotient at `β̃`, including the Lefschetz
    /// twist selected by `opts`.
    pub fn abelian_term(&self, beta: &CurveClass, opts: &Options, diags: &mut Vec<Diagnostic>) -> Result<SectorClass> {
        let plan = self.lefschetz_plan(beta, opts);
        if plan == TermPlan::Skip {
            return Ok(self.skipped(beta, diags));
        }
        let sector = self.landing_sector(beta);
        let ring = self.ring(&sector);
        Ok(SectorClass {
            coefficient: self.abelian_value(&ring, beta, plan)?,
            sector,
            representative: beta.clone(),
            presentation: plan.presentation(),
            insertion: Vec::new(),
            residue: None,
        })
    }

    /// The abelianized coefficient for one fiber of classes, one component
    /// per Weyl orbit of landing sectors.
    pub fn nonabelian_components(
        &self,
        fiber: &[CurveClass],
        opts: &Options,
        diags: &mut Vec<Diagnostic>,
    ) -> Result<Vec<SectorClass>> {
        let r = self.p.torus_rank;
        let mut out = Vec::new();
        // group by orbit representative of the landing sector element
        let mut orbits: BTreeMap<Vec<Q>, Vec<CurveClass>> = BTreeMap::new();
        for beta in fiber {
            let s = self.landing_sector(beta);
            let rep = self.orbit_representative(&s.element);
            if rep == s.element {
                orbits.entry(rep).or_default().push(beta.clone());
            } else {
                orbits.entry(rep).or_default();
            }
        }
        for (element, classes) in orbits {
            let sector = Sector::from_element(&self.p, element.clone());
            if classes.is_empty() {
                return Err(Error::Integrity(format!(
                    "no fiber class lands on the orbit representative sector {:?}",
                    sector.fracs
                )));
            }
            let representative = classes.iter().min().cloned().expect("nonempty");
            let plans: Vec<TermPlan> = classes.iter().map(|b| self.lefschetz_plan(b, opts)).collect();
            if plans.iter().all(|p| *p == TermPlan::Skip) {
                out.push(self.skipped(&representative, diags));
                continue;
            }
            if plans.iter().any(|p| *p != plans[0]) {
                return Err(Error::Integrity("Weyl-related classes received different Lefschetz treatment".into()));
            }
            let plan = plans[0];
            let ring = self.ring(&sector);
            let coefficient = match ring.truncation() {
                None => ring.zero(),
                Some(d) => {
                    let delta = delta_for(&representative, &self.p);
                    let free = SectorRing::free(r, self.ncoef, d + delta.degree().unwrap_or(0));
                    let mut n = free.zero();
                    for beta in &classes {
                        if delta_for(beta, &self.p) != delta {
                            return Err(Error::Integrity("Δ differs between classes of one sector".into()));
                        }
                        let (roots, _) = weyl_numerator_factor(&free, beta, &self.p)?;
                        let value = self.abelian_value(&free, beta, plan)?;
                        n = n.add(&free.mul(&roots, &value));
                    }
                    let stabilizer = self.weyl.stabilizer_of_element(&element);
                    self.abelianize(&ring, &free, &n, &delta, &stabilizer)?.1
                }
            };
            if !coefficient.is_zero() || plan != TermPlan::Plain {
                out.push(SectorClass {
                    sector,
                    representative,
                    presentation: plan.presentation(),
                    coefficient,
                    insertion: Vec::new(),
                    residue: None,
                });
            }
        }
        Ok(out)
    }

    fn orbit_representative(&self, element: &[Q]) -> Vec<Q> {
        let c = CurveClass::new(element.to_vec());
        self.weyl
            .elements
            .iter()
            .map(|w| w.act_on_class(&c).values.iter().map(crate::poly::frac).collect::<Vec<Q>>())
            .min()
            .expect("group nonempty")
    }

    /// Check anti-invariance of `n` under the stabilizer, divide by `Δ`, and
    /// check invariance of the quotient. Returns `(numerator, quotient)`.
    pub fn abelianize(
        &self,
        ring: &SectorRing,
        free: &SectorRing,
        n: &RingElement,
        delta: &Poly,
        stabilizer: &[usize],
    ) -> Result<(RingElement, RingElement)> {
        let group: Vec<(&[Vec<i64>], i64)> =
            stabilizer.iter().map(|&i| (self.weyl.elements[i].matrix.as_slice(), self.weyl.elements[i].sign)).collect();
        for (m, sign) in &group {
            if free.act(m, n) != n.scale_q(&Q::from_integer((*sign).into())) {
                return Err(Error::Integrity("pre-division numerator is not anti-invariant".into()));
            }
        }
        if &antisymmetrize(n, &group) != n {
            return Err(Error::Integrity("antisymmetrization changed the numerator".into()));
        }
        let quotient = ring.normal_form(&divide_by_delta(n, delta)?);
        for (m, _) in &group {
            if ring.act(m, &quotient) != quotient {
                return Err(Error::Integrity("Δ-divided coefficient is not Weyl-invariant".into()));
            }
        }
        Ok((n.clone(), quotient))
    }

    /// The Δ-cleared numerator `N` of the sector orbit of `fiber` landing on
    /// `element`, in the free ring of the given truncation. Exposed for
    /// checks of the abelianization steps.
    pub fn numerator(&self, fiber: &[CurveClass], element: &[Q], truncation: u32) -> Result<RingElement> {
        let free = SectorRing::free(self.p.torus_rank, self.ncoef, truncation);
        let mut n = free.zero();
        for beta in fiber {
            if self.landing_sector(beta).element != element {
                continue;
            }
            let (roots, _) = weyl_numerator_factor(&free, beta, &self.p)?;
            n = n.add(&free.mul(&roots, &self.ambient_product(&free, beta)?));
        }
        Ok(n)
    }

    /// Assemble the series up to `opts.max_degree`.
    pub fn series(&self, opts: &Options) -> Result<IFunctionSeries> {
        let p = &self.p;
        match opts.mode {
            Mode::Toric if !p.is_abelian() => {
                return Err(Error::Unsupported("toric mode requires a presentation without roots".into()))
            }
            Mode::Nonabelian if p.is_abelian() => {
                return Err(Error::Unsupported("nonabelian mode requires roots and a Weyl group".into()))
            }
            _ => {}
        }
        if (opts.equivariant && self.ncoef == 1) || (!opts.equivariant && self.ncoef > 1) {
            return Err(Error::Unsupported("equivariant option does not match the engine".into()));
        }
        let denom = opts.denominator_bound.unwrap_or_else(|| default_denominator_bound(p));
        let classes = enumerate_effective(p, &opts.max_degree, denom)?;
        let mut diags: Vec<Diagnostic> = self
            .warnings
            .iter()
            .map(|w| Diagnostic {
                kind: DiagnosticKind::UserAsserted,
                class: None,
                message: w.strip_prefix("user-asserted: ").unwrap_or(w).to_string(),
            })
            .collect();
        if opts.mode == Mode::Lefschetz && p.e_weights.is_empty() {
            diags.push(Diagnostic {
                kind: DiagnosticKind::ReducedMode,
                class: None,
                message: "lefschetz mode with empty e_weights reduces to plain mode".into(),
            });
        }
        let mut terms = Vec::new();
        if p.is_abelian() {
            for beta in &classes {
                let c = self.abelian_term(beta, opts, &mut diags)?;
                if c.coefficient.is_zero() && c.residue.is_none() {
                    continue;
                }
                terms.push(SeriesTerm { theta_degree: beta.theta_degree(p), class: beta.clone(), components: vec![c] });
            }
        } else {
            let mut fibers: BTreeMap<Vec<Q>, Vec<CurveClass>> = BTreeMap::new();
            for beta in &classes {
                fibers.entry(beta.restrict_to_g(p)).or_default().push(beta.clone());
            }
            for (on_g, fiber) in fibers {
                let components = self.nonabelian_components(&fiber, opts, &mut diags)?;
                let components: Vec<SectorClass> =
                    components.into_iter().filter(|c| !c.coefficient.is_zero() || c.residue.is_some()).collect();
                if components.is_empty() {
                    continue;
                }
                terms.push(SeriesTerm {
                    theta_degree: fiber[0].theta_degree(p),
                    class: CurveClass::new(on_g),
                    components,
                });
            }
        }
        terms.sort_by(|a, b| (&a.theta_degree, &a.class).cmp(&(&b.theta_degree, &b.class)));

        let presentations: std::collections::BTreeSet<Presentation> = terms
            .iter()
            .flat_map(|t| t.components.iter().map(|c| c.presentation))
            .filter(|p| *p != Presentation::SymbolicResidue)
            .collect();
        if presentations.len() > 1 && !opts.mixed_presentations {
            return Err(Error::Unsupported(
                "series would mix restricted and pushforward presentations; pass the mixed-presentations flag".into(),
            ));
        }
        if presentations.contains(&Presentation::Pushforward) {
            diags.push(Diagnostic {
                kind: DiagnosticKind::PushforwardHypothesis,
                class: None,
                message: "pushforward coefficients assume a regular section with trivial excess bundle".into(),
            });
        }
        let series = IFunctionSeries {
            degree_bound: opts.max_degree.clone(),
            class_basis: if p.is_abelian() { ClassBasis::Torus } else { ClassBasis::GCharacters },
            divisor_names: p.names(),
            torus_rank: p.torus_rank,
            equivariant_rank: self.ncoef - 1,
            insertion_count: 0,
            terms,
            diagnostics: diags,
        };
        if self.ncoef == 1 {
            check_laurent(&series)?;
        }
        Ok(series)
    }

    /// Multiply every term by `exp(z⁻¹ Σ_i τ_i p_i(c₁(L_η) + β(η) z))`,
    /// truncated at total `τ`-degree `t_order`.
    pub fn big_i_twist(&self, series: &IFunctionSeries, spec: &BigISpec) -> Result<IFunctionSeries> {
        let k = spec.insertions.len();
        for ins in &spec.insertions {
            if ins.polynomial.nvars() != spec.characters.len() {
                return Err(Error::Structure(format!(
                    "insertion polynomial has {} variables but {} characters are given",
                    ins.polynomial.nvars(),
                    spec.characters.len()
                )));
            }
        }
        for eta in &spec.characters {
            if eta.len() != self.p.torus_rank && eta.len() != self.p.torus_rank + self.p.equivariant_rank {
                return Err(Error::Structure(format!("character {:?} has the wrong length", eta)));
            }
            if !self.p.is_abelian() && self.weyl.elements.iter().any(|w| w.act_on_character(eta) != *eta) {
                return Err(Error::Invalid(vec![format!("character {:?} is not Weyl-invariant", eta)]));
            }
        }
        let exps = multi_indices(k, spec.t_order);
        let z_inv = CoeffFunction::z(self.ncoef).inv()?;
        let mut out = series.clone();
        out.insertion_count = k;
        for term in out.terms.iter_mut() {
            let mut comps = Vec::new();
            for c in &term.components {
                if c.presentation == Presentation::SymbolicResidue {
                    let mut c = c.clone();
                    c.insertion = vec![0; k];
                    comps.push(c);
                    continue;
                }
                let ring = self.ring(&c.sector);
                // A_i = z⁻¹ p_i(c₁(L_η) + β(η) z)
                let args: Vec<RingElement> = spec
                    .characters
                    .iter()
                    .map(|eta| {
                        let shift = CoeffFunction::z(self.ncoef).scale(&c.representative.pairing(eta));
                        ring.chern(eta).add(&ring.constant(shift))
                    })
                    .collect();
                let a: Vec<RingElement> = spec
                    .insertions
                    .iter()
                    .map(|ins| evaluate(&ring, &ins.polynomial, &args).scale(&z_inv))
                    .collect();
                for m in &exps {
                    let mut x = c.coefficient.clone();
                    let mut fact = Q::one();
                    for (i, &mi) in m.iter().enumerate() {
                        x = ring.mul(&x, &ring.pow(&a[i], mi));
                        for j in 1..=mi {
                            fact *= Q::from_integer(j.into());
                        }
                    }
                    let x = x.scale_q(&fact.recip());
                    if x.is_zero() {
                        continue;
                    }
                    let mut c2 = c.clone();
                    c2.coefficient = x;
                    c2.insertion = m.clone();
                    comps.push(c2);
                }
            }
            term.components = comps;
        }
        out.terms.retain(|t| !t.components.is_empty());
        if self.ncoef == 1 {
            check_laurent(&out)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TermPlan {
    Plain,
    Convex,
    Pushforward,
    Skip,
}

impl TermPlan {
    fn presentation(self) -> Presentation {
        match self {
            TermPlan::Plain | TermPlan::Convex => Presentation::Restricted,
            TermPlan::Pushforward => Presentation::Pushforward,
            TermPlan::Skip => Presentation::SymbolicResidue,
        }
    }
}

/// Evaluate a polynomial in `x_0..x_{k-1}` at ring elements.
pub fn evaluate(ring: &SectorRing, p: &Poly, args: &[RingElement]) -> RingElement {
    let mut acc = ring.zero();
    for (e, c) in p.terms() {
        let mut m = ring.one();
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                m = ring.mul(&m, &ring.pow(&args[i], k));
            }
        }
        acc = acc.add(&m.scale_q(c));
    }
    acc
}

/// All exponent vectors of length `k` with total degree at most `order`,
/// in graded lexicographic order.
pub fn multi_indices(k: usize, order: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for d in 0..=order {
        let mut block = crate::chowring::monomials_of_degree(k, d);
        block.sort();
        block.reverse();
        out.extend(block);
    }
    if k == 0 {
        out.truncate(1);
    }
    out
}

/// Every coefficient of a non-equivariant series must have a pure power of
/// `z` as denominator.
pub fn check_laurent(series: &IFunctionSeries) -> Result<()> {
    for t in &series.terms {
        for c in &t.components {
            for (e, a) in c.coefficient.terms() {
                if !a.has_z_power_denominator() {
                    return Err(Error::Integrity(format!(
                        "coefficient of {:?} at class {} has denominator {} which is not a power of z",
                        e,
                        t.class,
                        a.denominator()
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Convenience: validate, build an engine, and assemble.
pub fn assemble(p: &GitPresentation, opts: &Options) -> Result<IFunctionSeries> {
    Engine::new(p.clone(), opts.equivariant)?.series(opts)
}

/// The toric series of an abelian presentation.
pub fn toric_series(p: &GitPresentation, bound: &Q) -> Result<IFunctionSeries> {
    assemble(p, &Options::new(Mode::Toric, bound.clone()))
}

/// Substitute `s = 0` in every coefficient, producing a non-equivariant series.
pub fn specialize_to_nonequivariant(series: &IFunctionSeries) -> Result<IFunctionSeries> {
    let mut out = series.clone();
    for t in out.terms.iter_mut() {
        for c in t.components.iter_mut() {
            c.coefficient = c.coefficient.map_coeffs(1, |a| a.restrict_to_z())?;
        }
    }
    out.equivariant_rank = 0;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gitdata::presets::*;
    use crate::poly::{q, qf};

    fn z_inv(k: u32) -> CoeffFunction {
        CoeffFunction::z(1).pow(k).inv().unwrap()
    }

    #[test]
    fn projective_plane_degree_one() {
        let s = toric_series(&projective_space(2), &q(1)).unwrap();
        assert_eq!(s.terms.len(), 2);
        let c = &s.terms[1].components[0];
        assert!(c.sector.is_untwisted());
        let expect = RingElement::from_terms(
            1,
            1,
            [(vec![0], z_inv(3)), (vec![1], z_inv(4).scale(&q(-3))), (vec![2], z_inv(5).scale(&q(6)))],
        );
        assert_eq!(c.coefficient, expect);
        assert!(s.terms[0].components[0].coefficient.constant_term().is_one());
    }

    #[test]
    fn weighted_projective_half_class() {
        let p = weighted_projective(&[1, 1, 2]);
        let s = toric_series(&p, &q(1)).unwrap();
        let classes: Vec<Q> = s.terms.iter().map(|t| t.class.values[0].clone()).collect();
        assert_eq!(classes, vec![q(0), qf(1, 2), q(1)]);
        let half = &s.terms[1].components[0];
        assert_eq!(half.sector.order, 2);
        assert_eq!(half.coefficient, RingElement::from_terms(1, 1, [(vec![0], z_inv(3).scale(&q(4)))]));
        assert!(s.terms[2].components[0].sector.is_untwisted());
    }

    #[test]
    fn zero_bound_gives_unit() {
        let s = toric_series(&projective_space(3), &q(0)).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert!(s.terms[0].class.is_zero());
        assert!(toric_series(&projective_space(1), &q(3)).unwrap().terms.len() == 4);
    }

    #[test]
    fn grassmannian_degree_one() {
        let g = grassmannian(2, 4);
        let s = assemble(&g, &Options::new(Mode::Nonabelian, q(1))).unwrap();
        assert_eq!(s.terms.len(), 2);
        let t1 = &s.terms[1];
        assert_eq!(t1.class, CurveClass::from_ints(&[1]));
        assert_eq!(t1.components.len(), 1);
        // oracle: expand both fiber terms as rational functions, clear Δ, reduce
        let ring = SectorRing::build(&Sector::untwisted(&g), &g, 1);
        let free = SectorRing::free(2, 1, 7);
        let z = CoeffFunction::z(1);
        let lin = |a: i64, b: i64, k: i64| free.chern_t(&[a, b]).add(&free.constant(z.scale(&q(k))));
        let inv4 = |x: &RingElement| free.pow(&free.invert(x).unwrap(), 4);
        let n = free
            .mul(&lin(1, -1, 1), &inv4(&lin(1, 0, 1)))
            .neg()
            .add(&free.mul(&lin(-1, 1, 1), &inv4(&lin(0, 1, 1))));
        let delta = &Poly::var(2, 0) - &Poly::var(2, 1);
        let expect = ring.normal_form(&divide_by_delta(&n, &delta).unwrap());
        assert_eq!(t1.components[0].coefficient, expect);
    }

    #[test]
    fn quintic_degree_one() {
        let p = with_e_weights(projective_space(4), vec![vec![5]]);
        let s = assemble(&p, &Options::new(Mode::Lefschetz, q(1))).unwrap();
        assert_eq!(s.terms.len(), 2);
        let ring = SectorRing::build(&Sector::untwisted(&p), &p, 1);
        let z = CoeffFunction::z(1);
        let mut expect = ring.one();
        for k in 1..=5 {
            expect = ring.mul(&expect, &ring.chern_t(&[5]).add(&ring.constant(z.scale(&q(k)))));
        }
        let h1 = ring.chern_t(&[1]).add(&ring.constant(z.clone()));
        expect = ring.mul(&expect, &ring.pow(&ring.invert(&h1).unwrap(), 5));
        assert_eq!(s.terms[1].components[0].coefficient, expect);
        assert!(s.diagnostics.iter().any(|d| d.kind == DiagnosticKind::UserAsserted));
    }

    #[test]
    fn non_convex_terms_are_skipped_or_pushed_forward() {
        // O(-1) on P^1: every positive degree pairs negatively
        let p = with_e_weights(projective_space(1), vec![vec![-1]]);
        let mut opts = Options::new(Mode::Lefschetz, q(2));
        let s = assemble(&p, &opts).unwrap();
        assert_eq!(s.terms.len(), 3);
        assert_eq!(s.terms[1].components[0].presentation, Presentation::SymbolicResidue);
        assert!(s.diagnostics.iter().any(|d| d.kind == DiagnosticKind::SkippedNonConvex));
        opts.convexity = Convexity::AssumeTransverse;
        let s = assemble(&p, &opts).unwrap();
        assert!(s.terms.iter().all(|t| t.components[0].presentation == Presentation::Pushforward));
        opts.mixed_presentations = true;
        let s = assemble(&p, &opts).unwrap();
        assert_eq!(s.terms[0].components[0].presentation, Presentation::Restricted);
        assert_eq!(s.terms[1].components[0].presentation, Presentation::Pushforward);
    }

    #[test]
    fn big_i_first_order_twist() {
        let p = projective_space(2);
        let engine = Engine::new(p.clone(), false).unwrap();
        let small = engine.series(&Options::new(Mode::Toric, q(2))).unwrap();
        let spec = BigISpec {
            insertions: vec![Insertion { polynomial: Poly::var(1, 0) }],
            characters: vec![vec![1]],
            t_order: 1,
        };
        let big = engine.big_i_twist(&small, &spec).unwrap();
        for (ts, tb) in small.terms.iter().zip(&big.terms) {
            let d = ts.class.values[0].clone();
            let ring = engine.ring(&ts.components[0].sector);
            let c0 = &tb.components[0];
            let c1 = &tb.components[1];
            assert_eq!(c0.insertion, vec![0]);
            assert_eq!(c0.coefficient, ts.components[0].coefficient);
            assert_eq!(c1.insertion, vec![1]);
            let factor = ring.chern_t(&[1]).add(&ring.constant(CoeffFunction::z(1).scale(&d))).scale(&z_inv(1));
            assert_eq!(c1.coefficient, ring.mul(&ts.components[0].coefficient, &factor));
        }
        let spec0 = BigISpec { t_order: 0, ..spec };
        let b0 = engine.big_i_twist(&small, &spec0).unwrap();
        for (ts, tb) in small.terms.iter().zip(&b0.terms) {
            assert_eq!(tb.components.len(), 1);
            assert_eq!(tb.components[0].coefficient, ts.components[0].coefficient);
        }
    }

    #[test]
    fn equivariant_projective_plane_specializes() {
        let p = with_equivariant_column(projective_space(2), &[0, 1, 2]);
        let mut opts = Options::new(Mode::Toric, q(2));
        opts.equivariant = true;
        let eq = assemble(&p, &opts).unwrap();
        assert!(!eq.terms[1].components[0].coefficient.terms().values().all(|c| c.has_z_power_denominator()));
        let spec = specialize_to_nonequivariant(&eq).unwrap();
        let plain = toric_series(&projective_space(2), &q(2)).unwrap();
        for (a, b) in spec.terms.iter().zip(&plain.terms) {
            assert_eq!(a.components[0].coefficient, b.components[0].coefficient);
        }
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        assert!(assemble(&grassmannian(2, 4), &Options::new(Mode::Toric, q(1))).is_err());
        assert!(assemble(&projective_space(2), &Options::new(Mode::Nonabelian, q(1))).is_err());
    }
}
