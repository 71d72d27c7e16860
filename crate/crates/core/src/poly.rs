//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Q = BigRational;

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Polynomial in `nvars` variables. Terms are keyed by exponent vectors and
/// ordered lexicographically, so the last entry is the lex-leading term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn monomial(exp: Exponent, c: Q) -> Self {
        let mut p = Self::zero(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&a| a == 0))
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn leading(&self) -> Option<(&Exponent, &Q)> {
        self.terms.iter().next_back()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| total_degree(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Division by a single divisor using the lex order. Returns `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert_eq!(self.nvars, d.nvars);
        let (lead_e, lead_c) = d.leading().expect("division by zero polynomial");
        let lead_e = lead_e.clone();
        let lead_c = lead_c.clone();
        let mut p = self.clone();
        let mut quot = Poly::zero(self.nvars);
        let mut rem = Poly::zero(self.nvars);
        while let Some((e, c)) = p.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if divides(&lead_e, &e) {
                let qe: Exponent = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
                let qc = &c / &lead_c;
                let t = Poly::monomial(qe.clone(), qc.clone());
                p = &p - &(&t * d);
                quot.add_term(qe, qc);
            } else {
                p.terms.remove(&e);
                rem.add_term(e, c);
            }
        }
        (quot, rem)
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (quot, rem) = self.div_rem(d);
        rem.is_zero().then_some(quot)
    }

    /// Substitute `x_i = value` for every `(i, value)` in `subs`; the variable count is kept.
    pub fn substitute(&self, subs: &[(usize, Q)]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let mut c2 = c.clone();
            for (i, v) in subs {
                let k = e2[*i];
                if k > 0 {
                    c2 *= num::pow(v.clone(), k as usize);
                    e2[*i] = 0;
                }
            }
            out.add_term(e2, c2);
        }
        out
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    pub fn monomial_content(&self) -> Exponent {
        let mut it = self.terms.keys();
        let mut m = match it.next() {
            Some(e) => e.clone(),
            None => return vec![0; self.nvars],
        };
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    /// Divide every exponent by the monomial `m` (which must divide every term).
    pub fn shift_down(&self, m: &[u32]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Scale so that the lex-leading coefficient is 1; returns `(scale, monic)`.
    pub fn make_monic(&self) -> (Q, Poly) {
        let c = self.leading().map(|(_, c)| c.clone()).expect("zero polynomial");
        let inv = c.recip();
        (c, self.scale(&inv))
    }

    /// Homogeneous component of the given total degree.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Format with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = monomial_string(e, names, "^");
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", abs, mono));
            }
        }
        out
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn monomial_string(e: &[u32], names: &[String], pow: &str) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i));
        if k == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{}{}{}", name, pow, k));
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i)).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl<'a> Add for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(2, 0)
    }
    fn y() -> Poly {
        Poly::var(2, 1)
    }

    #[test]
    fn exact_division_of_difference_of_squares() {
        let n = &(&x() * &x()) - &(&y() * &y());
        let d = &x() - &y();
        assert_eq!(n.exact_div(&d), Some(&x() + &y()));
    }

    #[test]
    fn non_divisible_leaves_remainder() {
        let n = &(&x() * &x()) + &y();
        let d = &x() - &y();
        assert!(n.exact_div(&d).is_none());
    }

    #[test]
    fn fractional_part_of_negative_half() {
        assert_eq!(frac(&qf(-1, 2)), qf(1, 2));
        assert_eq!(frac(&qf(-3, 1)), q(0));
    }

    #[test]
    fn substitution_and_monic() {
        let p = &x().scale(&q(3)) + &y().scale(&q(6));
        let p0 = p.substitute(&[(1, q(0))]);
        assert_eq!(p0, x().scale(&q(3)));
        let (c, m) = p.make_monic();
        assert_eq!(c, q(3));
        assert_eq!(m, &x() + &y().scale(&q(2)));
    }
}
