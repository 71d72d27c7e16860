//! Exact rational functions in `z` and the equivariant parameters `s_1..s_q`.
//!
//! Variable 0 is `z`, variable `p` (for `p >= 1`) is `s_p`. Denominators are
//! kept factored as powers of monic atoms; every atom produced by the I-function
//! calculus is a linear form `k z + sum c_p s_p`, so reduction against the atoms
//! is a full gcd reduction there.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::error::Error;
use crate::poly::{Exponent, Poly, Q};

#[derive(Clone, Debug)]
pub struct CoeffFunction {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

impl CoeffFunction {
    pub fn zero(nvars: usize) -> Self {
        CoeffFunction { num: Poly::zero(nvars), den: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        CoeffFunction { num: Poly::constant(nvars, c), den: BTreeMap::new() }
    }

    pub fn z(nvars: usize) -> Self {
        Self::from_poly(Poly::var(nvars, 0))
    }

    pub fn s(nvars: usize, p: usize) -> Self {
        assert!(p >= 1 && p < nvars);
        Self::from_poly(Poly::var(nvars, p))
    }

    pub fn from_poly(p: Poly) -> Self {
        CoeffFunction { num: p, den: BTreeMap::new() }
    }

    /// Build `num / prod(factor^mult)` and normalize.
    pub fn from_parts(num: Poly, factors: impl IntoIterator<Item = (Poly, u32)>) -> Result<Self, Error> {
        let nvars = num.nvars();
        let mut out = CoeffFunction { num, den: BTreeMap::new() };
        for (f, m) in factors {
            if f.is_zero() {
                return Err(Error::DivisionByZero("zero denominator factor".into()));
            }
            let (scale, atoms) = split_atoms(&f);
            out.num = out.num.scale(&num::pow(scale, m as usize).recip());
            for a in atoms {
                *out.den.entry(a).or_insert(0) += m;
            }
        }
        debug_assert!(out.num.nvars() == nvars);
        out.reduce();
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &BTreeMap<Poly, u32> {
        &self.den
    }

    pub fn denominator(&self) -> Poly {
        let mut d = Poly::one(self.nvars());
        for (a, m) in &self.den {
            d = &d * &a.pow(*m);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num == Poly::one(self.nvars())
    }

    /// The value as a rational number when it is constant.
    pub fn as_constant(&self) -> Option<Q> {
        (self.den.is_empty() && self.num.is_constant()).then(|| self.num.constant_term())
    }

    /// True when the denominator is a pure power of `z`.
    pub fn has_z_power_denominator(&self) -> bool {
        let z = Poly::var(self.nvars(), 0);
        self.den.keys().all(|a| *a == z)
    }

    /// Exponent of `z` in the denominator.
    pub fn z_denominator_power(&self) -> u32 {
        let z = Poly::var(self.nvars(), 0);
        self.den.get(&z).copied().unwrap_or(0)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let atoms: Vec<Poly> = self.den.keys().cloned().collect();
        for a in atoms {
            loop {
                let m = self.den[&a];
                if m == 0 {
                    break;
                }
                match self.num.exact_div(&a) {
                    Some(quot) => {
                        self.num = quot;
                        *self.den.get_mut(&a).unwrap() -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|_, m| *m > 0);
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars());
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut lcm = self.den.clone();
        for (a, m) in &other.den {
            let e = lcm.entry(a.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |x: &Self| {
            let mut n = x.num.clone();
            for (a, m) in &lcm {
                let have = x.den.get(a).copied().unwrap_or(0);
                if *m > have {
                    n = &n * &a.pow(m - have);
                }
            }
            n
        };
        let num = &lift(self) + &lift(other);
        let mut out = CoeffFunction { num, den: lcm };
        out.reduce();
        out
    }

    pub fn neg(&self) -> Self {
        CoeffFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars());
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        let mut den = self.den.clone();
        for (a, m) in &other.den {
            *den.entry(a.clone()).or_insert(0) += m;
        }
        let mut out = CoeffFunction { num: &self.num * &other.num, den };
        out.reduce();
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        CoeffFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero coefficient".into()));
        }
        let num = self.denominator();
        CoeffFunction::from_parts(num, [(self.num.clone(), 1)])
    }

    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute values for some equivariant parameters. Fails if a
    /// denominator atom vanishes under the substitution.
    pub fn substitute(&self, subs: &[(usize, Q)]) -> Result<Self, Error> {
        let num = self.num.substitute(subs);
        let mut factors = Vec::new();
        for (a, m) in &self.den {
            let a2 = a.substitute(subs);
            if a2.is_zero() {
                return Err(Error::DivisionByZero(format!(
                    "denominator factor {} vanishes under specialization",
                    a
                )));
            }
            factors.push((a2, *m));
        }
        CoeffFunction::from_parts(num, factors)
    }

    /// Drop the equivariant variables after substituting them by zero; the
    /// result lives in `Q(z)` with one variable.
    pub fn restrict_to_z(&self) -> Result<Self, Error> {
        let n = self.nvars();
        let subs: Vec<(usize, Q)> = (1..n).map(|p| (p, Q::zero())).collect();
        let s = self.substitute(&subs)?;
        let shrink = |p: &Poly| Poly::from_terms(1, p.terms().iter().map(|(e, c)| (vec![e[0]], c.clone())));
        CoeffFunction::from_parts(shrink(&s.num), s.den.iter().map(|(a, m)| (shrink(a), *m)))
    }

    /// Format with variable names, e.g. `["z", "s1"]`.
    pub fn display_with(&self, names: &[String]) -> String {
        let n = self.num.display_with(names);
        if self.den.is_empty() {
            return n;
        }
        let num = if self.num.terms().len() > 1 { format!("({})", n) } else { n };
        let dens: Vec<String> = self
            .den
            .iter()
            .map(|(a, m)| {
                let s = a.display_with(names);
                let s = if a.terms().len() > 1 { format!("({})", s) } else { s };
                if *m == 1 {
                    s
                } else {
                    format!("{}^{}", s, m)
                }
            })
            .collect();
        format!("{}/({})", num, dens.join("*"))
    }
}

/// Split a nonzero polynomial into `scale * prod(atoms)` where each atom is
/// monic; monomial content is split into single-variable atoms.
fn split_atoms(f: &Poly) -> (Q, Vec<Poly>) {
    let n = f.nvars();
    let content = f.monomial_content();
    let rest = f.shift_down(&content);
    let mut atoms = Vec::new();
    for (i, &k) in content.iter().enumerate() {
        for _ in 0..k {
            atoms.push(Poly::var(n, i));
        }
    }
    let (scale, monic) = rest.make_monic();
    if !monic.is_constant() {
        atoms.push(monic);
    }
    (scale, atoms)
}

impl PartialEq for CoeffFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars() != other.nvars() {
            return false;
        }
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.denominator() == &other.num * &self.denominator()
    }
}

impl Eq for CoeffFunction {}

impl fmt::Display for CoeffFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = vec!["z".to_string()];
        names.extend((1..self.nvars()).map(|p| format!("s{}", p)));
        f.write_str(&self.display_with(&names))
    }
}

/// Exponent helper used by callers constructing `z^k`.
pub fn z_power(nvars: usize, k: u32) -> Exponent {
    let mut e = vec![0; nvars];
    e[0] = k;
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qf};

    #[test]
    fn linear_unit_inverse_normalizes_to_monic_atom() {
        let u = CoeffFunction::z(1).scale(&q(2));
        let inv = u.inv().unwrap();
        assert_eq!(inv.numerator(), &Poly::constant(1, qf(1, 2)));
        assert!(inv.has_z_power_denominator());
        assert_eq!(inv.z_denominator_power(), 1);
        assert!(inv.mul(&u).is_one());
    }

    #[test]
    fn addition_cancels_common_factors() {
        // 1/z - 1/z = 0 and z/(z) = 1
        let a = CoeffFunction::z(1).inv().unwrap();
        assert!(a.sub(&a).is_zero());
        let b = CoeffFunction::z(1).mul(&a);
        assert!(b.is_one());
    }

    #[test]
    fn equivariant_specialization() {
        // 1/(z + s) at s = 0 is 1/z
        let zs = CoeffFunction::z(2).add(&CoeffFunction::s(2, 1));
        let inv = zs.inv().unwrap();
        let r = inv.restrict_to_z().unwrap();
        assert_eq!(r, CoeffFunction::z(1).inv().unwrap());
        assert!(!inv.has_z_power_denominator());
    }

    #[test]
    fn vanishing_denominator_is_an_error() {
        let s = CoeffFunction::s(2, 1);
        let inv = s.inv().unwrap();
        assert!(inv.restrict_to_z().is_err());
        assert!(CoeffFunction::zero(1).inv().is_err());
    }
}
