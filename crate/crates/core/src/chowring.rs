//! Truncated graded quotient rings `Q[t_1..t_r]/I` of twisted sectors with
//! coefficients in [`CoeffFunction`].
//!
//! The ideal of a sector is generated by `∏_{l∈S} ξ_l(t)` for every minimal
//! unstable support `S` inside the sector's fixed support, together with all
//! monomials of degree `D + 1`, `D = |fixed support| − r`. All generators are
//! homogeneous, so the ideal is handled degree by degree: in each degree the
//! span of `monomial · generator` is row reduced with columns in descending
//! graded reverse lexicographic order, and the pivots are the leading
//! monomials of a reduced basis.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::coeff::CoeffFunction;
use crate::error::{Error, Result};
use crate::gitdata::{unstable_supports, GitPresentation, Sector, StabilityData};
use crate::lattice::{mask_indices, rref};
use crate::poly::{divides, q, total_degree, Exponent, Poly, Q};

/// A polynomial in `t_1..t_r` with rational-function coefficients. Inside a
/// [`SectorRing`] the keys are normal-form monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    r: usize,
    ncoef: usize,
    terms: BTreeMap<Exponent, CoeffFunction>,
}

impl RingElement {
    pub fn zero(r: usize, ncoef: usize) -> Self {
        RingElement { r, ncoef, terms: BTreeMap::new() }
    }

    pub fn constant(r: usize, c: CoeffFunction) -> Self {
        let ncoef = c.nvars();
        let mut x = Self::zero(r, ncoef);
        x.add_term(vec![0; r], c);
        x
    }

    pub fn one(r: usize, ncoef: usize) -> Self {
        Self::constant(r, CoeffFunction::one(ncoef))
    }

    /// Embed a polynomial in `t` with rational coefficients.
    pub fn from_poly(p: &Poly, ncoef: usize) -> Self {
        let mut x = Self::zero(p.nvars(), ncoef);
        for (e, c) in p.terms() {
            x.add_term(e.clone(), CoeffFunction::constant(ncoef, c.clone()));
        }
        x
    }

    pub fn from_terms(r: usize, ncoef: usize, terms: impl IntoIterator<Item = (Exponent, CoeffFunction)>) -> Self {
        let mut x = Self::zero(r, ncoef);
        for (e, c) in terms {
            x.add_term(e, c);
        }
        x
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn ncoef(&self) -> usize {
        self.ncoef
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, CoeffFunction> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> CoeffFunction {
        self.terms.get(e).cloned().unwrap_or_else(|| CoeffFunction::zero(self.ncoef))
    }

    pub fn constant_term(&self) -> CoeffFunction {
        self.coeff(&vec![0; self.r])
    }

    pub fn add_term(&mut self, e: Exponent, c: CoeffFunction) {
        assert_eq!(e.len(), self.r);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        RingElement { r: self.r, ncoef: self.ncoef, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CoeffFunction) -> Self {
        let mut out = Self::zero(self.r, self.ncoef);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.mul(c));
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        self.scale(&CoeffFunction::constant(self.ncoef, c.clone()))
    }

    /// Product without any reduction, dropping terms above `max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        let mut out = Self::zero(self.r, self.ncoef);
        for (e1, c1) in &self.terms {
            let d1 = total_degree(e1);
            for (e2, c2) in &other.terms {
                if d1 + total_degree(e2) > max_degree {
                    continue;
                }
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    /// Highest total degree of a term.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self::from_terms(
            self.r,
            self.ncoef,
            self.terms.iter().filter(|(e, _)| total_degree(e) == d).map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// Apply `f` to every coefficient.
    pub fn map_coeffs(&self, ncoef: usize, f: impl Fn(&CoeffFunction) -> Result<CoeffFunction>) -> Result<Self> {
        let mut out = Self::zero(self.r, ncoef);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Substitute `t_i ↦ Σ_j matrix[j][i] t_j`, the action of a character
    /// lattice automorphism on first Chern classes.
    pub fn act(&self, matrix: &[Vec<i64>]) -> Self {
        let r = self.r;
        let images: Vec<Poly> =
            (0..r).map(|i| Poly::linear(&(0..r).map(|j| q(matrix[j][i])).collect::<Vec<Q>>())).collect();
        let mut out = Self::zero(r, self.ncoef);
        for (e, c) in &self.terms {
            let mut p = Poly::one(r);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    p = &p * &images[i].pow(k);
                }
            }
            for (e2, a) in p.terms() {
                out.add_term(e2.clone(), c.scale(a));
            }
        }
        out
    }

    /// Format with the given divisor names and coefficient variable names.
    pub fn display_with(&self, t_names: &[String], c_names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono = crate::poly::monomial_string(e, t_names, "^");
                let cs = c.display_with(c_names);
                if mono.is_empty() {
                    cs
                } else if c.is_one() {
                    mono
                } else {
                    format!("({})*{}", cs, mono)
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = (1..=self.r).map(|i| format!("t{}", i)).collect();
        let mut c = vec!["z".to_string()];
        c.extend((1..self.ncoef).map(|p| format!("s{}", p)));
        f.write_str(&self.display_with(&t, &c))
    }
}

/// Descending graded reverse lexicographic comparison.
fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    match total_degree(a).cmp(&total_degree(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// All exponent vectors in `r` variables of total degree `d`.
pub fn monomials_of_degree(r: usize, d: u32) -> Vec<Exponent> {
    fn rec(i: usize, left: u32, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    if r == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; r], &mut out);
    out
}

/// Rewriting rules for one degree: pivot monomial ↦ its negated tail.
type Reducer = BTreeMap<Exponent, Vec<(Exponent, Q)>>;

#[derive(Clone, Debug)]
pub struct SectorRing {
    sector: Option<Sector>,
    r: usize,
    ncoef: usize,
    /// `None` for the zero ring.
    truncation: Option<u32>,
    generators: Vec<Poly>,
    reducers: Vec<Reducer>,
}

impl SectorRing {
    /// The ring of sector `s` of the abelian quotient, with coefficients in
    /// `ncoef` variables (`z` and the equivariant parameters).
    pub fn build(s: &Sector, p: &GitPresentation, ncoef: usize) -> Self {
        let stab = StabilityData::new(p);
        Self::build_with(s, p, &stab, ncoef)
    }

    pub fn build_with(s: &Sector, p: &GitPresentation, stab: &StabilityData, ncoef: usize) -> Self {
        let r = p.torus_rank;
        let d = s.fixed_support.len() as i64 - r as i64;
        let supports = unstable_supports(stab, s.fixed_mask());
        let generators: Vec<Poly> = supports
            .iter()
            .map(|&m| {
                mask_indices(m).into_iter().fold(Poly::one(r), |acc, l| &acc * &Poly::linear(&p.weight_t(l)))
            })
            .collect();
        let zero = d < 0 || supports.contains(&0);
        let truncation = if zero { None } else { Some(d as u32) };
        Self::from_generators(Some(s.clone()), r, ncoef, truncation, generators)
    }

    /// `Q[t_1..t_r]` truncated above degree `truncation`, with no other relations.
    pub fn free(r: usize, ncoef: usize, truncation: u32) -> Self {
        Self::from_generators(None, r, ncoef, Some(truncation), Vec::new())
    }

    fn from_generators(
        sector: Option<Sector>,
        r: usize,
        ncoef: usize,
        truncation: Option<u32>,
        generators: Vec<Poly>,
    ) -> Self {
        let mut reducers = Vec::new();
        if let Some(dmax) = truncation {
            for d in 0..=dmax {
                let mut monos = monomials_of_degree(r, d);
                monos.sort_by(|a, b| grevlex(b, a));
                let col: BTreeMap<&Exponent, usize> = monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
                let mut rows: Vec<Vec<Q>> = Vec::new();
                for g in &generators {
                    let gd = g.degree().unwrap_or(0);
                    if gd > d {
                        continue;
                    }
                    for m in monomials_of_degree(r, d - gd) {
                        let mut row = vec![Q::zero(); monos.len()];
                        for (e, c) in g.terms() {
                            let e2: Exponent = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                            row[col[&e2]] += c;
                        }
                        rows.push(row);
                    }
                }
                let mut red = Reducer::new();
                if !rows.is_empty() {
                    let (m, piv) = rref(rows);
                    for (row, &pc) in m.iter().zip(&piv) {
                        let tail: Vec<(Exponent, Q)> = row
                            .iter()
                            .enumerate()
                            .filter(|(j, c)| *j != pc && !c.is_zero())
                            .map(|(j, c)| (monos[j].clone(), -c.clone()))
                            .collect();
                        red.insert(monos[pc].clone(), tail);
                    }
                }
                reducers.push(red);
            }
        }
        SectorRing { sector, r, ncoef, truncation, generators, reducers }
    }

    pub fn sector(&self) -> Option<&Sector> {
        self.sector.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn ncoef(&self) -> usize {
        self.ncoef
    }

    /// The top degree `D`, `None` for the zero ring.
    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    pub fn is_zero_ring(&self) -> bool {
        self.truncation.is_none()
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Monomials that survive reduction, i.e. a basis over the coefficients.
    pub fn standard_monomials(&self) -> Vec<Exponent> {
        let Some(dmax) = self.truncation else { return Vec::new() };
        let mut out = Vec::new();
        for d in 0..=dmax {
            for m in monomials_of_degree(self.r, d) {
                if !self.reducers[d as usize].contains_key(&m) {
                    out.push(m);
                }
            }
        }
        out
    }

    pub fn zero(&self) -> RingElement {
        RingElement::zero(self.r, self.ncoef)
    }

    pub fn one(&self) -> RingElement {
        self.normal_form(&RingElement::one(self.r, self.ncoef))
    }

    pub fn constant(&self, c: CoeffFunction) -> RingElement {
        self.normal_form(&RingElement::constant(self.r, c))
    }

    pub fn normal_form(&self, x: &RingElement) -> RingElement {
        assert_eq!(x.r, self.r, "ring rank mismatch");
        let Some(dmax) = self.truncation else { return self.zero() };
        let mut out = self.zero();
        for (e, c) in &x.terms {
            let d = total_degree(e);
            if d > dmax {
                continue;
            }
            match self.reducers[d as usize].get(e) {
                None => out.add_term(e.clone(), c.clone()),
                Some(tail) => {
                    for (e2, a) in tail {
                        out.add_term(e2.clone(), c.scale(a));
                    }
                }
            }
        }
        out
    }

    pub fn from_poly(&self, p: &Poly) -> RingElement {
        self.normal_form(&RingElement::from_poly(p, self.ncoef))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let Some(dmax) = self.truncation else { return self.zero() };
        self.normal_form(&a.mul_truncated(b, dmax))
    }

    pub fn pow(&self, a: &RingElement, k: u32) -> RingElement {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn product<'a>(&self, xs: impl IntoIterator<Item = &'a RingElement>) -> RingElement {
        xs.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// The torus part `ξ(t)` of a character as a linear form.
    pub fn chern_t(&self, xi: &[i64]) -> RingElement {
        let lin = Poly::linear(&xi[..self.r].iter().map(|&x| q(x)).collect::<Vec<Q>>());
        self.from_poly(&lin)
    }

    /// Equivariant part `Σ_p ξ_{r+p} s_p` of a character as a coefficient.
    pub fn chern_s(&self, xi: &[i64]) -> CoeffFunction {
        let mut c = CoeffFunction::zero(self.ncoef);
        for (p, &x) in xi.iter().enumerate().skip(self.r) {
            let p = p - self.r + 1;
            if x != 0 && p < self.ncoef {
                c = c.add(&CoeffFunction::s(self.ncoef, p).scale(&q(x)));
            }
        }
        c
    }

    /// `c₁(L_ξ)`: `ξ(t)` plus the equivariant shift.
    pub fn chern(&self, xi: &[i64]) -> RingElement {
        self.chern_t(xi).add(&self.constant(self.chern_s(xi)))
    }

    /// `(u + α)⁻¹ = u⁻¹ Σ_{i=0}^{D} (−α/u)^i` for a coefficient `u ≠ 0` and
    /// `α` without constant term.
    pub fn invert_unit_plus_nilpotent(&self, u: &CoeffFunction, alpha: &RingElement) -> Result<RingElement> {
        if u.is_zero() {
            return Err(Error::DivisionByZero("unit part of an inverted factor is zero".into()));
        }
        let Some(dmax) = self.truncation else { return Ok(self.zero()) };
        let alpha = self.normal_form(alpha);
        if !alpha.constant_term().is_zero() {
            return Err(Error::Integrity("nilpotent part has a constant term".into()));
        }
        let uinv = u.inv()?;
        let step = alpha.scale(&uinv.neg());
        let mut term = self.one();
        let mut acc = self.one();
        for _ in 0..dmax {
            term = self.mul(&term, &step);
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc.scale(&uinv))
    }

    /// Inverse of an element whose constant term is a nonzero coefficient.
    pub fn invert(&self, x: &RingElement) -> Result<RingElement> {
        if self.is_zero_ring() {
            return Ok(self.zero());
        }
        let x = self.normal_form(x);
        let u = x.constant_term();
        let mut alpha = x.clone();
        alpha.terms.remove(&vec![0; self.r]);
        self.invert_unit_plus_nilpotent(&u, &alpha)
    }

    /// `NF(w·x)` for a character lattice automorphism.
    pub fn act(&self, matrix: &[Vec<i64>], x: &RingElement) -> RingElement {
        self.normal_form(&x.act(matrix))
    }
}

/// `(1/|W|) Σ_w sgn(w) w·x` over the given `(matrix, sign)` pairs.
pub fn antisymmetrize(x: &RingElement, group: &[(&[Vec<i64>], i64)]) -> RingElement {
    let mut acc = RingElement::zero(x.r, x.ncoef);
    for (m, sign) in group {
        acc = acc.add(&x.act(m).scale_q(&q(*sign)));
    }
    acc.scale_q(&Q::new(One::one(), (group.len() as i64).into()))
}

/// Exact quotient `N / Δ` by lexicographic division. A nonzero remainder
/// means `N` was not divisible, which is reported as an integrity failure.
pub fn divide_by_delta(n: &RingElement, delta: &Poly) -> Result<RingElement> {
    let (lead_e, lead_c) = delta.leading().ok_or_else(|| Error::DivisionByZero("Δ is zero".into()))?;
    let lead_e = lead_e.clone();
    let lead_inv = lead_c.recip();
    let dl = RingElement::from_poly(delta, n.ncoef);
    let mut rest = n.clone();
    let mut quot = RingElement::zero(n.r, n.ncoef);
    while let Some((e, c)) = rest.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        if !divides(&lead_e, &e) {
            return Err(Error::Integrity(format!(
                "Δ-division leaves a remainder (monomial {:?} not divisible by {:?})",
                e, lead_e
            )));
        }
        let qe: Exponent = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
        let qc = c.scale(&lead_inv);
        let t = RingElement::from_terms(n.r, n.ncoef, [(qe, qc)]);
        rest = rest.sub(&t.mul_truncated(&dl, u32::MAX));
        quot = quot.add(&t);
    }
    Ok(quot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gitdata::presets::*;
    use crate::gitdata::{sector_of, CurveClass};
    use crate::poly::qf;
    use proptest::prelude::*;

    fn t(r: usize, i: usize) -> Poly {
        Poly::var(r, i)
    }

    fn e(v: &[u32]) -> Exponent {
        v.to_vec()
    }

    #[test]
    fn projective_plane_ring() {
        let p = projective_space(2);
        let ring = SectorRing::build(&crate::gitdata::Sector::untwisted(&p), &p, 1);
        assert_eq!(ring.truncation(), Some(2));
        assert_eq!(ring.generators(), &[t(1, 0).pow(3)]);
        let x = &t(1, 0).pow(3) + &t(1, 0).scale(&q(2));
        assert_eq!(ring.from_poly(&x), ring.from_poly(&t(1, 0).scale(&q(2))));
        assert_eq!(ring.standard_monomials(), vec![e(&[0]), e(&[1]), e(&[2])]);
    }

    #[test]
    fn grassmannian_ring() {
        let g = grassmannian(2, 4);
        let ring = SectorRing::build(&crate::gitdata::Sector::untwisted(&g), &g, 1);
        assert_eq!(ring.truncation(), Some(6));
        let x = &t(2, 0).pow(4) * &t(2, 1);
        assert!(ring.from_poly(&x).is_zero());
        assert!(ring.from_poly(&t(2, 1).pow(4)).is_zero());
        assert_eq!(ring.standard_monomials().len(), 16);
        assert!(!ring.from_poly(&(&t(2, 0).pow(3) * &t(2, 1).pow(3))).is_zero());
    }

    #[test]
    fn twisted_sector_of_weighted_projective_line() {
        let p = weighted_projective(&[1, 1, 2]);
        let s = sector_of(&p, &CurveClass::new(vec![qf(1, 2)]));
        let ring = SectorRing::build(&s, &p, 1);
        assert_eq!(ring.truncation(), Some(0));
        assert!(ring.from_poly(&t(1, 0)).is_zero());
        assert!(ring.one().constant_term().is_one());
    }

    #[test]
    fn zero_ring_when_support_unstable() {
        let p = weighted_projective(&[1, 2]);
        // element 1/3: nothing fixed, D < 0
        let s = crate::gitdata::Sector::from_element(&p, vec![qf(1, 3)]);
        let ring = SectorRing::build(&s, &p, 1);
        assert!(ring.is_zero_ring());
        assert!(ring.one().is_zero());
        assert!(ring.from_poly(&Poly::one(1)).is_zero());
    }

    #[test]
    fn chern_classes() {
        let p = projective_space(2);
        let ring = SectorRing::build(&crate::gitdata::Sector::untwisted(&p), &p, 2);
        assert_eq!(ring.chern(&[5]), ring.from_poly(&t(1, 0).scale(&q(5))));
        let c = ring.chern(&[1, 1]);
        let expect = ring.from_poly(&t(1, 0)).add(&ring.constant(CoeffFunction::s(2, 1)));
        assert_eq!(c, expect);
    }

    #[test]
    fn inverse_of_quadratic_factor_in_projective_plane() {
        let p = projective_space(2);
        let ring = SectorRing::build(&crate::gitdata::Sector::untwisted(&p), &p, 1);
        let z = CoeffFunction::z(1);
        let u = z.pow(2).scale(&q(2));
        // α = 3tz + t²
        let alpha = RingElement::from_terms(1, 1, [(e(&[1]), z.scale(&q(3))), (e(&[2]), CoeffFunction::one(1))]);
        let inv = ring.invert_unit_plus_nilpotent(&u, &alpha).unwrap();
        let zinv = |k: u32| z.pow(k).inv().unwrap();
        let expect = RingElement::from_terms(
            1,
            1,
            [
                (e(&[0]), zinv(2).scale(&qf(1, 2))),
                (e(&[1]), zinv(3).scale(&qf(-3, 4))),
                (e(&[2]), zinv(4).scale(&qf(7, 8))),
            ],
        );
        assert_eq!(inv, expect);
        let orig = alpha.add(&ring.constant(u.clone()));
        assert!(ring.mul(&inv, &orig).sub(&ring.one()).is_zero());
        assert_eq!(ring.invert_unit_plus_nilpotent(&u, &ring.zero()).unwrap(), ring.constant(u.inv().unwrap()));
        assert!(ring.invert_unit_plus_nilpotent(&CoeffFunction::zero(1), &alpha).is_err());
    }

    #[test]
    fn antisymmetrizer_examples() {
        let swap: Vec<Vec<i64>> = vec![vec![0, 1], vec![1, 0]];
        let id: Vec<Vec<i64>> = vec![vec![1, 0], vec![0, 1]];
        let group: Vec<(&[Vec<i64>], i64)> = vec![(&id, 1), (&swap, -1)];
        let x = RingElement::from_poly(&t(2, 0), 1);
        let a = antisymmetrize(&x, &group);
        assert_eq!(a, RingElement::from_poly(&(&t(2, 0) - &t(2, 1)).scale(&qf(1, 2)), 1));
        let sym = RingElement::from_poly(&(&t(2, 0) + &t(2, 1)), 1);
        assert!(antisymmetrize(&sym, &group).is_zero());
        let anti = RingElement::from_poly(&(&t(2, 0).pow(3) - &t(2, 1).pow(3)), 1);
        assert_eq!(antisymmetrize(&anti, &group), anti);
    }

    #[test]
    fn delta_division_examples() {
        let d = &t(2, 0) - &t(2, 1);
        let n = RingElement::from_poly(&d, 1);
        assert_eq!(divide_by_delta(&n, &d).unwrap(), RingElement::one(2, 1));
        let n2 = RingElement::from_poly(&(&t(2, 0).pow(2) - &t(2, 1).pow(2)), 1);
        assert_eq!(divide_by_delta(&n2, &d).unwrap(), RingElement::from_poly(&(&t(2, 0) + &t(2, 1)), 1));
        let bad = RingElement::from_poly(&t(2, 0), 1);
        assert!(matches!(divide_by_delta(&bad, &d), Err(Error::Integrity(_))));
    }

    fn small_element(coeffs: Vec<(u32, u32, i64, u32)>) -> RingElement {
        // (exp t1, exp t2, numerator, power of 1/z)
        let z = CoeffFunction::z(1);
        RingElement::from_terms(
            2,
            1,
            coeffs.into_iter().map(|(a, b, c, k)| (vec![a, b], z.pow(k).inv().unwrap().scale(&q(c)))),
        )
    }

    fn element_strategy() -> impl Strategy<Value = RingElement> {
        prop::collection::vec((0u32..4, 0u32..4, -3i64..4, 0u32..3), 0..5).prop_map(small_element)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn ring_axioms_in_grassmannian_ring(a in element_strategy(), b in element_strategy(), c in element_strategy()) {
            let g = grassmannian(2, 4);
            let ring = SectorRing::build(&crate::gitdata::Sector::untwisted(&g), &g, 1);
            let (a, b, c) = (ring.normal_form(&a), ring.normal_form(&b), ring.normal_form(&c));
            prop_assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
            prop_assert_eq!(ring.mul(&a, &b.add(&c)), ring.mul(&a, &b).add(&ring.mul(&a, &c)));
            prop_assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
            prop_assert_eq!(ring.normal_form(&ring.normal_form(&a)), a.clone());
        }

        #[test]
        fn normal_form_respects_products(a in element_strategy(), b in element_strategy()) {
            let g = grassmannian(2, 4);
            let ring = SectorRing::build(&crate::gitdata::Sector::untwisted(&g), &g, 1);
            let raw = a.mul_truncated(&b, u32::MAX);
            prop_assert_eq!(ring.normal_form(&raw), ring.mul(&ring.normal_form(&a), &ring.normal_form(&b)));
        }

        #[test]
        fn truncation_kills_long_products(forms in prop::collection::vec((-3i64..4, -3i64..4), 7..9)) {
            let g = grassmannian(2, 4);
            let ring = SectorRing::build(&crate::gitdata::Sector::untwisted(&g), &g, 1);
            let elems: Vec<RingElement> = forms.iter().map(|&(a, b)| ring.chern_t(&[a, b])).collect();
            prop_assert!(ring.product(elems.iter()).is_zero());
        }

        #[test]
        fn unit_plus_nilpotent_inverse(k in 1i64..5, a in -3i64..4, b in -3i64..4) {
            let g = grassmannian(2, 4);
            let ring = SectorRing::build(&crate::gitdata::Sector::untwisted(&g), &g, 1);
            let u = CoeffFunction::z(1).scale(&q(k));
            let alpha = ring.chern_t(&[a, b]);
            let inv = ring.invert_unit_plus_nilpotent(&u, &alpha).unwrap();
            prop_assert_eq!(ring.mul(&inv, &alpha.add(&ring.constant(u))), ring.one());
        }

        #[test]
        fn delta_division_inverts_multiplication(x in element_strategy()) {
            // symmetric input: x + swap(x)
            let swap = vec![vec![0, 1], vec![1, 0]];
            let sym = x.add(&x.act(&swap));
            let d = &t(2, 0) - &t(2, 1);
            let n = sym.mul_truncated(&RingElement::from_poly(&d, 1), u32::MAX);
            prop_assert_eq!(divide_by_delta(&n, &d).unwrap(), sym);
        }
    }
}
