//! GIT input data and the lattice/sector combinatorics built on it.
//!
//! A [`GitPresentation`] records the torus weights of the vector space `X`,
//! the roots and Weyl group of `G`, the weights of the bundle `E`, the
//! stability character and a basis of the `G`-characters inside the torus
//! characters. Everything downstream is derived from this value.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    cokernel_exponent, inverse, mask_indices, mat_vec, nonnegative_dependency, rank, solve_columns,
    subsets_up_to, to_q, transpose,
};
use crate::poly::{frac, q, Q};

/// Upper bound on the Weyl group order accepted from generators.
const MAX_WEYL_ORDER: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GitPresentation {
    pub torus_rank: usize,
    /// Weights of `X`, each of length `torus_rank + equivariant_rank`.
    pub weights: Vec<Vec<i64>>,
    pub theta: Vec<i64>,
    pub roots: Vec<Vec<i64>>,
    /// Indices into `roots`, one from each `±` pair.
    pub positive_roots: Vec<usize>,
    pub weyl_generators: Vec<Vec<Vec<i64>>>,
    /// Weights of `E`, same length convention as `weights`.
    pub e_weights: Vec<Vec<i64>>,
    pub chi_g_basis: Vec<Vec<i64>>,
    pub equivariant_rank: usize,
    /// Display names of the divisor classes `t_1..t_r`.
    pub divisor_names: Vec<String>,
}

impl GitPresentation {
    pub fn rank(&self) -> usize {
        self.torus_rank
    }

    pub fn num_weights(&self) -> usize {
        self.weights.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.roots.is_empty()
    }

    /// Torus part of weight `l` as rationals.
    pub fn weight_t(&self, l: usize) -> Vec<Q> {
        to_q(&self.weights[l][..self.torus_rank])
    }

    pub fn theta_q(&self) -> Vec<Q> {
        to_q(&self.theta)
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.torus_rank)
            .map(|i| {
                self.divisor_names.get(i).cloned().unwrap_or_else(|| {
                    if self.torus_rank == 1 {
                        "H".to_string()
                    } else {
                        format!("t{}", i + 1)
                    }
                })
            })
            .collect()
    }

    /// Dimension checks that must hold before any semantic question makes sense.
    pub fn check_structure(&self) -> Result<()> {
        let r = self.torus_rank;
        let full = r + self.equivariant_rank;
        if r == 0 {
            return Err(Error::Structure("torus_rank must be positive".into()));
        }
        if self.weights.is_empty() {
            return Err(Error::Structure("weights must be nonempty".into()));
        }
        if self.weights.len() > 63 {
            return Err(Error::Structure("at most 63 weights are supported".into()));
        }
        for (i, w) in self.weights.iter().enumerate() {
            if w.len() != full {
                return Err(Error::Structure(format!(
                    "weights row {} has length {}, expected {}",
                    i,
                    w.len(),
                    full
                )));
            }
        }
        if self.theta.len() != r {
            return Err(Error::Structure(format!("theta has length {}, expected {}", self.theta.len(), r)));
        }
        for (i, w) in self.roots.iter().enumerate() {
            if w.len() != r {
                return Err(Error::Structure(format!("roots row {} has length {}, expected {}", i, w.len(), r)));
            }
        }
        for &p in &self.positive_roots {
            if p >= self.roots.len() {
                return Err(Error::Structure(format!("positive_roots index {} out of range", p)));
            }
        }
        for (i, g) in self.weyl_generators.iter().enumerate() {
            if g.len() != r || g.iter().any(|row| row.len() != r) {
                return Err(Error::Structure(format!("weyl_generators[{}] is not {}x{}", i, r, r)));
            }
        }
        for (i, w) in self.e_weights.iter().enumerate() {
            if w.len() != full {
                return Err(Error::Structure(format!(
                    "e_weights row {} has length {}, expected {}",
                    i,
                    w.len(),
                    full
                )));
            }
        }
        for (i, w) in self.chi_g_basis.iter().enumerate() {
            if w.len() != r {
                return Err(Error::Structure(format!("chi_g_basis row {} has length {}, expected {}", i, w.len(), r)));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Curve classes and sectors

/// A class `β̃ ∈ Hom(χ(T), Q)` given by its values on the standard characters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveClass {
    pub values: Vec<Q>,
}

impl CurveClass {
    pub fn new(values: Vec<Q>) -> Self {
        CurveClass { values }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        CurveClass { values: to_q(v) }
    }

    pub fn zero(r: usize) -> Self {
        CurveClass { values: vec![Q::zero(); r] }
    }

    /// `β̃(ξ)`; extra (equivariant) entries of `ξ` are ignored.
    pub fn pairing(&self, xi: &[i64]) -> Q {
        self.values.iter().zip(xi).map(|(v, &x)| v * Q::from_integer(BigInt::from(x))).sum()
    }

    pub fn pairing_q(&self, xi: &[Q]) -> Q {
        self.values.iter().zip(xi).map(|(v, x)| v * x).sum()
    }

    /// Least positive `a` with `a·β̃` integral.
    pub fn order(&self) -> u64 {
        self.values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
            .to_u64()
            .expect("order fits in u64")
    }

    pub fn theta_degree(&self, p: &GitPresentation) -> Q {
        self.pairing(&p.theta)
    }

    /// Values on the `chi_g_basis`, i.e. the image under restriction to `G`.
    pub fn restrict_to_g(&self, p: &GitPresentation) -> Vec<Q> {
        p.chi_g_basis.iter().map(|c| self.pairing(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A twisted sector, labelled by the torus element `g = exp(2πi·element)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sector {
    /// Values of `g` on the standard characters, in `[0, 1)`.
    pub element: Vec<Q>,
    /// `fracs[l]` is the fractional part of the value of `ξ_l` on `g`.
    pub fracs: Vec<Q>,
    pub fixed_support: Vec<usize>,
    pub order: u64,
}

impl Sector {
    pub fn from_element(p: &GitPresentation, element: Vec<Q>) -> Sector {
        let element: Vec<Q> = element.iter().map(frac).collect();
        let cls = CurveClass::new(element.clone());
        let fracs: Vec<Q> = p.weights.iter().map(|w| frac(&cls.pairing(w))).collect();
        let fixed_support = fracs.iter().enumerate().filter(|(_, f)| f.is_zero()).map(|(i, _)| i).collect();
        Sector { order: cls.order(), element, fracs, fixed_support }
    }

    pub fn untwisted(p: &GitPresentation) -> Sector {
        Sector::from_element(p, vec![Q::zero(); p.torus_rank])
    }

    pub fn is_untwisted(&self) -> bool {
        self.element.iter().all(|v| v.is_zero())
    }

    pub fn fixed_mask(&self) -> u64 {
        self.fixed_support.iter().fold(0, |m, &i| m | (1 << i))
    }
}

/// Sector of the torus element attached to `β̃`.
pub fn sector_of(p: &GitPresentation, beta: &CurveClass) -> Sector {
    Sector::from_element(p, beta.values.clone())
}

/// The inversion `g ↦ g⁻¹` on sectors.
pub fn involute(s: &Sector) -> Sector {
    let neg = |v: &Vec<Q>| v.iter().map(|x| frac(&-x.clone())).collect::<Vec<Q>>();
    Sector {
        element: neg(&s.element),
        fracs: neg(&s.fracs),
        fixed_support: s.fixed_support.clone(),
        order: s.order,
    }
}

// ---------------------------------------------------------------------------
// Cone combinatorics

/// Simplicial decomposition data for `θ` against the weights.
#[derive(Clone, Debug)]
pub struct StabilityData {
    r: usize,
    /// Linearly independent weight subsets (as masks) whose closed cone
    /// contains `θ`, with the coefficients of `θ`.
    closed: Vec<(u64, Vec<Q>)>,
}

impl StabilityData {
    pub fn new(p: &GitPresentation) -> Self {
        let r = p.torus_rank;
        let theta = p.theta_q();
        let mut closed = Vec::new();
        for mask in subsets_up_to(p.num_weights(), r) {
            let idx = mask_indices(mask);
            let cols: Vec<Vec<Q>> = idx.iter().map(|&l| p.weight_t(l)).collect();
            if let Some(lam) = solve_columns(&cols, &theta) {
                if lam.iter().all(|l| !l.is_negative()) {
                    closed.push((mask, lam));
                }
            }
        }
        StabilityData { r, closed }
    }

    /// `θ ∈ Cone{ξ_l : l ∈ mask}`.
    pub fn in_cone(&self, mask: u64) -> bool {
        self.closed.iter().any(|(b, _)| b & !mask == 0)
    }

    /// `θ` in the interior of a full-dimensional simplicial subcone of `mask`.
    pub fn in_interior(&self, mask: u64) -> bool {
        self.good_bases().any(|(b, _)| b & !mask == 0)
    }

    /// Bases of size `r` with `θ` strictly inside their cone.
    pub fn good_bases(&self) -> impl Iterator<Item = (u64, &Vec<Q>)> + '_ {
        self.closed
            .iter()
            .filter(move |(b, lam)| b.count_ones() as usize == self.r && lam.iter().all(|l| l.is_positive()))
            .map(|(b, l)| (*b, l))
    }

    /// Bases of size `r` whose closed cone contains `θ` on its boundary.
    pub fn boundary_bases(&self) -> impl Iterator<Item = (u64, &Vec<Q>)> + '_ {
        self.closed
            .iter()
            .filter(move |(b, lam)| b.count_ones() as usize == self.r && lam.iter().any(|l| l.is_zero()))
            .map(|(b, l)| (*b, l))
    }

    /// Some subset of fewer than `r` weights whose cone contains `θ`.
    pub fn wall(&self) -> Option<u64> {
        self.closed.iter().find(|(b, _)| (b.count_ones() as usize) < self.r).map(|(b, _)| *b)
    }
}

/// All inclusion-minimal `S ⊆ subset` with `θ ∉ Cone{ξ_l : l ∈ subset ∖ S}`.
pub fn unstable_supports(stab: &StabilityData, subset: u64) -> Vec<u64> {
    let idx = mask_indices(subset);
    let k = idx.len();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << k) {
        let s = idx.iter().enumerate().filter(|(j, _)| bits & (1 << j) != 0).fold(0u64, |m, (_, &l)| m | (1 << l));
        if stab.in_cone(subset & !s) {
            continue;
        }
        let minimal = mask_indices(s).into_iter().all(|l| stab.in_cone(subset & !(s & !(1 << l))));
        if minimal {
            out.push(s);
        }
    }
    out.sort_by_key(|m| (m.count_ones(), *m));
    out
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn into_result(self) -> Result<Vec<String>> {
        if self.errors.is_empty() {
            Ok(self.warnings)
        } else {
            Err(Error::Invalid(self.errors))
        }
    }
}

fn multiset(v: &[Vec<i64>]) -> BTreeMap<Vec<i64>, usize> {
    let mut m = BTreeMap::new();
    for x in v {
        *m.entry(x.clone()).or_insert(0) += 1;
    }
    m
}

/// Apply a character-lattice matrix to the torus part of a weight, keeping
/// any equivariant columns unchanged.
fn act_on_weight(m: &[Vec<i64>], w: &[i64]) -> Vec<i64> {
    let r = m.len();
    let mut out: Vec<i64> = (0..r).map(|i| (0..r).map(|j| m[i][j] * w[j]).sum()).collect();
    out.extend_from_slice(&w[r..]);
    out
}

pub fn validate(p: &GitPresentation) -> Result<ValidationReport> {
    p.check_structure()?;
    let r = p.torus_rank;
    let mut rep = ValidationReport::default();

    let tw: Vec<Vec<Q>> = (0..p.num_weights()).map(|l| p.weight_t(l)).collect();
    if rank(&tw) != r {
        rep.errors.push(format!("weights have rank {} < torus rank {}", rank(&tw), r));
    }

    // roots
    let root_set: HashSet<&Vec<i64>> = p.roots.iter().collect();
    for (i, rt) in p.roots.iter().enumerate() {
        if rt.iter().all(|&x| x == 0) {
            rep.errors.push(format!("root {} is zero", i));
        }
        let neg: Vec<i64> = rt.iter().map(|x| -x).collect();
        if !root_set.contains(&neg) {
            rep.errors.push(format!("roots not closed under negation: -{:?} missing", rt));
        }
    }
    if !p.roots.is_empty() {
        let mut covered = BTreeSet::new();
        for &i in &p.positive_roots {
            let rt = p.roots[i].clone();
            let neg: Vec<i64> = rt.iter().map(|x| -x).collect();
            if covered.contains(&rt) || covered.contains(&neg) {
                rep.errors.push(format!("positive_roots selects both {:?} and its negative (or a duplicate)", rt));
            }
            covered.insert(rt);
        }
        if 2 * p.positive_roots.len() != p.roots.len() {
            rep.errors.push("positive_roots must select exactly one root from each ± pair".into());
        }
    } else if !p.positive_roots.is_empty() {
        rep.errors.push("positive_roots given without roots".into());
    }

    // Weyl group
    match WeylGroup::generate(&p.weyl_generators, r) {
        Err(e) => rep.errors.push(e.to_string()),
        Ok(w) => {
            if p.roots.is_empty() && w.order() > 1 {
                rep.errors.push("nontrivial Weyl group but no roots".into());
            }
            if !p.roots.is_empty() && w.order() == 1 {
                rep.errors.push("roots present but the Weyl group is trivial".into());
            }
            let wm = multiset(&p.weights);
            let em = multiset(&p.e_weights);
            for (gi, g) in p.weyl_generators.iter().enumerate() {
                let theta2 = act_on_weight(g, &p.theta);
                if theta2 != p.theta {
                    rep.errors.push(format!("Weyl generator {} does not fix theta", gi));
                }
                for c in &p.chi_g_basis {
                    if act_on_weight(g, c) != *c {
                        rep.errors.push(format!("Weyl generator {} does not fix chi_g_basis vector {:?}", gi, c));
                    }
                }
                let moved: Vec<Vec<i64>> = p.weights.iter().map(|w| act_on_weight(g, w)).collect();
                if multiset(&moved) != wm {
                    rep.errors.push(format!("weights multiset not W-stable under generator {}", gi));
                }
                let moved: Vec<Vec<i64>> = p.e_weights.iter().map(|w| act_on_weight(g, w)).collect();
                if multiset(&moved) != em {
                    rep.errors.push(format!("e_weights multiset not W-stable under generator {}", gi));
                }
                let moved: BTreeSet<Vec<i64>> = p.roots.iter().map(|w| act_on_weight(g, w)).collect();
                if moved != p.roots.iter().cloned().collect::<BTreeSet<_>>() {
                    rep.errors.push(format!("roots not permuted by generator {}", gi));
                }
            }
            // chi_g_basis must be a basis of the W-invariant characters
            let cg: Vec<Vec<Q>> = p.chi_g_basis.iter().map(|c| to_q(c)).collect();
            let inv_dim = w.invariant_dimension();
            if rank(&cg) != cg.len() {
                rep.errors.push("chi_g_basis is linearly dependent".into());
            } else if cg.len() != inv_dim {
                rep.errors.push(format!(
                    "chi_g_basis has {} vectors but the W-invariant characters have dimension {}",
                    cg.len(),
                    inv_dim
                ));
            }
        }
    }

    // stability
    let stab = StabilityData::new(p);
    if let Some(b) = stab.wall() {
        rep.errors.push(format!(
            "theta lies on a wall: it is in the cone of the {} weight(s) {:?}",
            b.count_ones(),
            mask_indices(b)
        ));
    }
    if let Some(dep) = nonnegative_dependency(&tw) {
        let support: Vec<usize> = dep.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect();
        rep.errors.push(format!(
            "weight cone is not strongly convex (weights {:?} have a positive relation): the quotient is not proper",
            support
        ));
    }
    let all = (1u64 << p.num_weights()) - 1;
    if !stab.in_interior(all) {
        rep.errors.push("theta is not in the interior of the weight cone: the stable locus is empty".into());
    }

    if !p.roots.is_empty() {
        rep.warnings.push(
            "user-asserted: elements with fixed points are semisimple with connected centralizers".into(),
        );
    }
    if !p.e_weights.is_empty() {
        rep.warnings.push("user-asserted: the section is regular and its stable zero locus is smooth".into());
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Sector orders and class enumeration

/// Orders of torus elements fixing a point of the stable locus.
pub fn sector_orders(p: &GitPresentation) -> BTreeSet<u64> {
    let stab = StabilityData::new(p);
    let mut out = BTreeSet::new();
    out.insert(1);
    for (b, _) in stab.good_bases() {
        let cols: Vec<Vec<i64>> = mask_indices(b).into_iter().map(|l| p.weights[l][..p.torus_rank].to_vec()).collect();
        if let Some(e) = cokernel_exponent(&cols, p.torus_rank) {
            let e = e.to_u64().expect("exponent fits in u64");
            for d in 1..=e {
                if e % d == 0 {
                    out.insert(d);
                }
            }
        }
    }
    out
}

pub fn default_denominator_bound(p: &GitPresentation) -> u64 {
    sector_orders(p).into_iter().fold(1, |a, b| a.lcm(&b))
}

/// A class is effective when `θ` is interior to the cone of the weights on
/// which it pairs to a nonnegative integer. Other classes have a vanishing
/// coefficient: their factor `∏ c₁(L_ξ)` over negative integral pairings
/// contains an unstable monomial.
pub fn is_effective(p: &GitPresentation, stab: &StabilityData, beta: &CurveClass) -> bool {
    let mut mask = 0u64;
    for (l, w) in p.weights.iter().enumerate() {
        let v = beta.pairing(w);
        if v.is_integer() && !v.is_negative() {
            mask |= 1 << l;
        }
    }
    stab.in_interior(mask)
}

/// Fail if the region of semistable-effective classes of bounded θ-degree
/// inside a fiber of restriction to `χ(G)` is not compact.
pub fn check_bounded(p: &GitPresentation) -> Result<()> {
    let r = p.torus_rank;
    let stab = StabilityData::new(p);
    let ct: Vec<Vec<Q>> = p.chi_g_basis.iter().map(|c| to_q(c)).collect();
    for (b, lam) in stab.boundary_bases() {
        let idx = mask_indices(b);
        let xi: Vec<Vec<Q>> = idx.iter().map(|&l| p.weight_t(l)).collect();
        let Some(xi_inv) = inverse(&xi) else { continue };
        let zeros: Vec<usize> = (0..r).filter(|&k| lam[k].is_zero()).collect();
        // u = xi_inv * e_z has u(ξ_b) = δ_{bz}
        let dirs: Vec<Vec<Q>> = zeros.iter().map(|&z| xi_inv.iter().map(|row| row[z].clone()).collect()).collect();
        let images: Vec<Vec<Q>> = dirs.iter().map(|u| mat_vec(&ct, u)).collect();
        if let Some(w) = nonnegative_dependency(&images) {
            let mut u = vec![Q::zero(); r];
            for (wk, d) in w.iter().zip(&dirs) {
                for (ui, di) in u.iter_mut().zip(d) {
                    *ui += wk * di;
                }
            }
            let cls = CurveClass::new(u);
            return Err(Error::UnboundedFiber { direction: cls.to_string() });
        }
    }
    Ok(())
}

/// All effective classes of θ-degree at most `degree_bound` whose order
/// divides `denom_bound`, sorted by (θ-degree, values).
pub fn enumerate_effective(p: &GitPresentation, degree_bound: &Q, denom_bound: u64) -> Result<Vec<CurveClass>> {
    if degree_bound.is_negative() {
        return Ok(Vec::new());
    }
    if denom_bound == 0 {
        return Err(Error::Structure("denominator bound must be positive".into()));
    }
    let required = default_denominator_bound(p);
    if !denom_bound.is_multiple_of(required) {
        return Err(Error::Structure(format!(
            "denominator bound {} is not a multiple of the sector order lcm {}",
            denom_bound, required
        )));
    }
    check_bounded(p)?;
    let r = p.torus_rank;
    let stab = StabilityData::new(p);
    let mut seen_bases = HashSet::new();
    let mut found = BTreeSet::new();
    for (b, lam) in stab.good_bases() {
        let idx = mask_indices(b);
        let mut rows: Vec<Vec<i64>> = idx.iter().map(|&l| p.weights[l][..r].to_vec()).collect();
        let key = {
            let mut k = rows.clone();
            k.sort();
            k
        };
        if !seen_bases.insert(key) {
            continue;
        }
        // β̃ = Ξ⁻¹ v where Ξ has the basis weights as rows
        let xi: Vec<Vec<Q>> = rows.iter().map(|w| to_q(w)).collect();
        let xi_inv = inverse(&xi).expect("basis is invertible");
        let caps: Vec<i64> =
            lam.iter().map(|l| (degree_bound / l).floor().to_integer().to_i64().expect("bound fits")).collect();
        let mut v = vec![0i64; r];
        rows.clear();
        loop {
            let deg: Q = v.iter().zip(lam.iter()).map(|(&x, l)| l * q(x)).sum();
            if &deg <= degree_bound {
                let beta = CurveClass::new(mat_vec(&xi_inv, &to_q(&v)));
                if denom_bound.is_multiple_of(beta.order()) && is_effective(p, &stab, &beta) {
                    found.insert(beta);
                }
            }
            // odometer
            let mut k = 0;
            loop {
                if k == r {
                    break;
                }
                v[k] += 1;
                if v[k] <= caps[k] {
                    break;
                }
                v[k] = 0;
                k += 1;
            }
            if k == r {
                break;
            }
        }
    }
    let mut out: Vec<CurveClass> = found.into_iter().collect();
    out.sort_by(|a, b| (a.theta_degree(p), &a.values).cmp(&(b.theta_degree(p), &b.values)));
    Ok(out)
}

/// Effective classes restricting to `beta_on_g` on the `chi_g_basis`.
pub fn enumerate_fiber(
    p: &GitPresentation,
    beta_on_g: &[Q],
    degree_bound: &Q,
    denom_bound: u64,
) -> Result<Vec<CurveClass>> {
    if beta_on_g.len() != p.chi_g_basis.len() {
        return Err(Error::Structure(format!(
            "class on G has {} entries, chi_g_basis has {}",
            beta_on_g.len(),
            p.chi_g_basis.len()
        )));
    }
    Ok(enumerate_effective(p, degree_bound, denom_bound)?
        .into_iter()
        .filter(|c| c.restrict_to_g(p) == beta_on_g)
        .collect())
}

// ---------------------------------------------------------------------------
// Weyl group

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on characters.
    pub matrix: Vec<Vec<i64>>,
    /// `M^{-T}`, the action on classes.
    pub class_action: Vec<Vec<Q>>,
    pub sign: i64,
}

impl WeylElement {
    pub fn act_on_class(&self, c: &CurveClass) -> CurveClass {
        CurveClass::new(mat_vec(&self.class_action, &c.values))
    }

    pub fn act_on_character(&self, xi: &[i64]) -> Vec<i64> {
        act_on_weight(&self.matrix, xi)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == (i == j) as i64))
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    r: usize,
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    let qm: Vec<Vec<Q>> = m.iter().map(|r| to_q(r)).collect();
    let n = m.len();
    // fraction-free via elimination over Q
    let mut a = qm;
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return 0 };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let v = &a[c][j] * &f;
                a[i][j] -= v;
            }
        }
    }
    det.to_integer().to_i64().expect("determinant fits")
}

impl WeylGroup {
    pub fn generate(generators: &[Vec<Vec<i64>>], r: usize) -> Result<Self> {
        let id: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
        for (i, g) in generators.iter().enumerate() {
            let d = det_i64(g);
            if d.abs() != 1 {
                return Err(Error::Weyl(format!("generator {} has determinant {}, not ±1", i, d)));
            }
        }
        let mut seen: Vec<Vec<Vec<i64>>> = vec![id.clone()];
        let mut set: HashSet<Vec<Vec<i64>>> = seen.iter().cloned().collect();
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for g in generators {
                let n = mat_mul(g, &m);
                if set.insert(n.clone()) {
                    if set.len() > MAX_WEYL_ORDER {
                        return Err(Error::Weyl("generators do not generate a finite group".into()));
                    }
                    seen.push(n.clone());
                    queue.push_back(n);
                }
            }
        }
        let elements = seen
            .into_iter()
            .map(|m| {
                let qm: Vec<Vec<Q>> = m.iter().map(|r| to_q(r)).collect();
                let inv = inverse(&qm).expect("unimodular");
                WeylElement { sign: det_i64(&m), class_action: transpose(&inv), matrix: m }
            })
            .collect();
        Ok(WeylGroup { elements, r })
    }

    pub fn trivial(r: usize) -> Self {
        Self::generate(&[], r).expect("identity group")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Dimension of the W-fixed subspace of characters.
    pub fn invariant_dimension(&self) -> usize {
        // fixed space = kernel of the stacked (M - I)
        let mut rows = Vec::new();
        for e in &self.elements {
            for (i, row) in e.matrix.iter().enumerate() {
                rows.push(row.iter().enumerate().map(|(j, &x)| q(x - (i == j) as i64)).collect::<Vec<Q>>());
            }
        }
        self.r - rank(&rows)
    }

    /// Elements fixing the torus element with the given values (mod `Z^r`).
    pub fn stabilizer_of_element(&self, element: &[Q]) -> Vec<usize> {
        let c = CurveClass::new(element.to_vec());
        (0..self.elements.len())
            .filter(|&i| {
                let moved = self.elements[i].act_on_class(&c);
                moved.values.iter().zip(element).all(|(a, b)| (a - b).is_integer())
            })
            .collect()
    }
}

/// One orbit of classes under the Weyl group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassOrbit {
    pub representative: CurveClass,
    /// Indices into [`WeylGroup::elements`] fixing the representative.
    pub stabilizer: Vec<usize>,
    pub members: Vec<CurveClass>,
}

pub fn weyl_orbits(w: &WeylGroup, classes: &[CurveClass]) -> Result<Vec<ClassOrbit>> {
    let all: BTreeSet<&CurveClass> = classes.iter().collect();
    let mut done: BTreeSet<CurveClass> = BTreeSet::new();
    let mut out = Vec::new();
    for c in classes {
        if done.contains(c) {
            continue;
        }
        let mut members = BTreeSet::new();
        for e in &w.elements {
            let m = e.act_on_class(c);
            if !all.contains(&m) {
                return Err(Error::Weyl(format!("class set not W-closed: {} maps to {}", c, m)));
            }
            members.insert(m);
        }
        let representative = members.iter().next().cloned().expect("orbit nonempty");
        let stabilizer =
            (0..w.elements.len()).filter(|&i| w.elements[i].act_on_class(&representative) == representative).collect();
        done.extend(members.iter().cloned());
        out.push(ClassOrbit { representative, stabilizer, members: members.into_iter().collect() });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Presets

pub mod presets {
    use super::GitPresentation;

    fn base(weights: Vec<Vec<i64>>, theta: Vec<i64>, names: Vec<String>) -> GitPresentation {
        let r = theta.len();
        GitPresentation {
            torus_rank: r,
            weights,
            chi_g_basis: (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect(),
            theta,
            roots: Vec::new(),
            positive_roots: Vec::new(),
            weyl_generators: Vec::new(),
            e_weights: Vec::new(),
            equivariant_rank: 0,
            divisor_names: names,
        }
    }

    /// `P^n` as `C^{n+1} ⫽ C*`.
    pub fn projective_space(n: usize) -> GitPresentation {
        base(vec![vec![1]; n + 1], vec![1], vec!["H".into()])
    }

    pub fn weighted_projective(ws: &[i64]) -> GitPresentation {
        base(ws.iter().map(|&w| vec![w]).collect(), vec![1], vec!["H".into()])
    }

    /// `G(k, n)` as `Hom(C^k, C^n) ⫽ GL_k` with `θ = det`.
    pub fn grassmannian(k: usize, n: usize) -> GitPresentation {
        let e = |i: usize| -> Vec<i64> { (0..k).map(|j| (i == j) as i64).collect() };
        let mut weights = Vec::new();
        for i in 0..k {
            for _ in 0..n {
                weights.push(e(i));
            }
        }
        let mut roots = Vec::new();
        let mut positive_roots = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    if i < j {
                        positive_roots.push(roots.len());
                    }
                    roots.push((0..k).map(|m| (m == i) as i64 - (m == j) as i64).collect());
                }
            }
        }
        let weyl_generators = (0..k.saturating_sub(1))
            .map(|a| {
                (0..k)
                    .map(|i| {
                        (0..k)
                            .map(|j| {
                                let src = if i == a {
                                    a + 1
                                } else if i == a + 1 {
                                    a
                                } else {
                                    i
                                };
                                (j == src) as i64
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        GitPresentation {
            torus_rank: k,
            weights,
            theta: vec![1; k],
            roots,
            positive_roots,
            weyl_generators,
            e_weights: Vec::new(),
            chi_g_basis: vec![vec![1; k]],
            equivariant_rank: 0,
            divisor_names: if k == 1 { vec!["H".into()] } else { (1..=k).map(|i| format!("t{}", i)).collect() },
        }
    }

    /// Append one equivariant column to the weights of `X` (and zeros to
    /// the weights of `E`).
    pub fn with_equivariant_column(mut p: GitPresentation, column: &[i64]) -> GitPresentation {
        assert_eq!(column.len(), p.weights.len());
        for (w, &c) in p.weights.iter_mut().zip(column) {
            w.push(c);
        }
        for w in p.e_weights.iter_mut() {
            w.push(0);
        }
        p.equivariant_rank += 1;
        p
    }

    pub fn with_e_weights(mut p: GitPresentation, e: Vec<Vec<i64>>) -> GitPresentation {
        p.e_weights = e;
        p
    }
}
