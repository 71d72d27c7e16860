//! The hypergeometric factors `C°(β̃, ξ)` and `C(β̃, ξ)`, their inverses, and
//! the Δ-cleared root factor used for nonabelian quotients.
//!
//! For `b = β̃(ξ)`:
//! * `b ≤ 0`: `C° = ∏ (c₁(L_ξ) + k z)` over `b < k < 0`, `k − b ∈ Z`;
//! * `b > 0`: `C° = [∏ (c₁(L_ξ) + k z)]⁻¹` over `0 < k ≤ b`, `k − b ∈ Z`;
//! * `C = c₁(L_ξ)·C°` when `b ∈ Z_{<0}`, otherwise `C = C°`.

use num::{Integer, One, Signed};

use crate::chowring::{RingElement, SectorRing};
use crate::coeff::CoeffFunction;
use crate::error::{Error, Result};
use crate::gitdata::{CurveClass, GitPresentation};
use crate::poly::{q, Poly, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `C°`
    Reduced,
    /// `C`
    Full,
}

/// The values of `k` in the product defining `C°`, and whether the product
/// sits in the denominator.
pub fn k_range(b: &Q) -> (Vec<Q>, bool) {
    let mut ks = Vec::new();
    if !b.is_positive() {
        let mut k = b + Q::one();
        while k.is_negative() {
            ks.push(k.clone());
            k += Q::one();
        }
        (ks, false)
    } else {
        let mut k = b.clone();
        while k.is_positive() {
            ks.push(k.clone());
            k -= Q::one();
        }
        ks.reverse();
        (ks, true)
    }
}

pub fn is_negative_integer(b: &Q) -> bool {
    b.is_integer() && b.is_negative()
}

/// `(c₁(L_ξ) + k z)` split as unit `k z + s-part` and nilpotent `ξ(t)`.
fn linear_factor(ring: &SectorRing, xi: &[i64], k: &Q) -> (CoeffFunction, RingElement) {
    let u = CoeffFunction::z(ring.ncoef()).scale(k).add(&ring.chern_s(xi));
    (u, ring.chern_t(xi))
}

/// `C°(β̃, ξ)` or `C(β̃, ξ)` in `ring`, optionally inverted.
pub fn c_factor(
    ring: &SectorRing,
    beta: &CurveClass,
    xi: &[i64],
    variant: Variant,
    inverted: bool,
) -> Result<RingElement> {
    let b = beta.pairing(xi);
    let extra = variant == Variant::Full && is_negative_integer(&b);
    if extra && inverted {
        return Err(Error::NonUnitInversion { character: format!("{:?}", xi), pairing: b.to_string() });
    }
    if ring.is_zero_ring() {
        return Ok(ring.zero());
    }
    let (ks, denominator) = k_range(&b);
    let invert_each = denominator != inverted;
    let mut acc = ring.one();
    for k in &ks {
        let (u, alpha) = linear_factor(ring, xi, k);
        let f = if invert_each {
            ring.invert_unit_plus_nilpotent(&u, &alpha)?
        } else {
            alpha.add(&ring.constant(u))
        };
        acc = ring.mul(&acc, &f);
    }
    if extra {
        acc = ring.mul(&acc, &ring.chern(xi));
    }
    Ok(acc)
}

/// No weight of `E` pairs with `β̃` to a negative integer.
pub fn is_i_nonnegative(beta: &CurveClass, p: &GitPresentation) -> bool {
    p.e_weights.iter().all(|e| !is_negative_integer(&beta.pairing(e)))
}

/// `∏ ξ(t)` (with equivariant shifts) over a list of weights.
pub fn euler_class(ring: &SectorRing, weights: &[Vec<i64>]) -> RingElement {
    weights.iter().fold(ring.one(), |acc, w| ring.mul(&acc, &ring.chern(w)))
}

/// The discriminant `Δ_g = ∏ ρ(t)` over positive roots with integral pairing.
pub fn delta_for(beta: &CurveClass, p: &GitPresentation) -> Poly {
    let r = p.torus_rank;
    p.positive_roots
        .iter()
        .map(|&i| &p.roots[i])
        .filter(|rho| beta.pairing(rho).is_integer())
        .fold(Poly::one(r), |acc, rho| &acc * &Poly::linear(&rho.iter().map(|&x| q(x)).collect::<Vec<Q>>()))
}

/// `(Δ_g · ∏_ρ C(β̃, ρ)⁻¹, Δ_g)`. Each `±` pair with integral pairing
/// `d = β̃(ρ)`, `ρ` positive, contributes `(−1)^d (ρ(t) + d z)`; pairs with
/// non-integral pairing contribute `C°(β̃, ρ)⁻¹ C°(β̃, −ρ)⁻¹`.
pub fn weyl_numerator_factor(ring: &SectorRing, beta: &CurveClass, p: &GitPresentation) -> Result<(RingElement, Poly)> {
    let mut acc = ring.one();
    for &i in &p.positive_roots {
        let rho = &p.roots[i];
        let d = beta.pairing(rho);
        if d.is_integer() {
            let di = d.to_integer();
            let sign = if di.is_odd() { -Q::one() } else { Q::one() };
            let u = CoeffFunction::z(ring.ncoef()).scale(&d);
            let f = ring.chern_t(rho).add(&ring.constant(u)).scale_q(&sign);
            acc = ring.mul(&acc, &f);
        } else {
            let neg: Vec<i64> = rho.iter().map(|x| -x).collect();
            let a = c_factor(ring, beta, rho, Variant::Reduced, true)?;
            let b = c_factor(ring, beta, &neg, Variant::Reduced, true)?;
            acc = ring.mul(&acc, &ring.mul(&a, &b));
        }
    }
    Ok((acc, delta_for(beta, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gitdata::presets::*;
    use crate::gitdata::Sector;
    use crate::poly::qf;
    use num::Zero;
    use proptest::prelude::*;

    /// Independent oracle: truncated power series in one nilpotent `H`
    /// (`H^{D+1} = 0`) with `Q(z)` coefficients, as a coefficient vector.
    #[derive(Clone, Debug, PartialEq)]
    struct Series(Vec<CoeffFunction>);

    impl Series {
        fn one(d: usize) -> Self {
            let mut v = vec![CoeffFunction::zero(1); d + 1];
            v[0] = CoeffFunction::one(1);
            Series(v)
        }
        fn mul(&self, o: &Self) -> Self {
            let n = self.0.len();
            let mut v = vec![CoeffFunction::zero(1); n];
            for i in 0..n {
                for j in 0..n - i {
                    v[i + j] = v[i + j].add(&self.0[i].mul(&o.0[j]));
                }
            }
            Series(v)
        }
        /// `a H + k z`
        fn linear(d: usize, a: i64, k: &Q) -> Self {
            let mut v = vec![CoeffFunction::zero(1); d + 1];
            v[0] = CoeffFunction::z(1).scale(k);
            if d >= 1 {
                v[1] = CoeffFunction::constant(1, q(a));
            }
            Series(v)
        }
        /// `(a H + k z)⁻¹ = Σ_i (−a)^i H^i / (k z)^{i+1}`
        fn linear_inv(d: usize, a: i64, k: &Q) -> Self {
            let kz = CoeffFunction::z(1).scale(k);
            Series(
                (0..=d)
                    .map(|i| CoeffFunction::constant(1, num::pow(q(-a), i)).div(&kz.pow(i as u32 + 1)).unwrap())
                    .collect(),
            )
        }
    }

    fn to_series(x: &RingElement, d: usize) -> Series {
        Series((0..=d).map(|i| x.coeff(&[i as u32])).collect())
    }

    /// Straight-line evaluation of `C°` or `C` for `b = β̃(ξ)`, `ξ = a`.
    fn oracle(b: &Q, a: i64, d: usize, full: bool) -> Series {
        let mut acc = Series::one(d);
        if b.is_positive() {
            let mut k = b.clone();
            while k.is_positive() {
                acc = acc.mul(&Series::linear_inv(d, a, &k));
                k -= Q::one();
            }
        } else {
            let mut k = b.clone() + Q::one();
            while k.is_negative() {
                acc = acc.mul(&Series::linear(d, a, &k));
                k += Q::one();
            }
            if full && b.is_integer() && b.is_negative() {
                acc = acc.mul(&Series::linear(d, a, &Q::zero()));
            }
        }
        acc
    }

    fn p2_ring() -> SectorRing {
        let p = projective_space(2);
        SectorRing::build(&Sector::untwisted(&p), &p, 1)
    }

    #[test]
    fn empty_product_is_one() {
        let ring = p2_ring();
        let c = c_factor(&ring, &CurveClass::from_ints(&[0]), &[1], Variant::Full, false).unwrap();
        assert_eq!(c, ring.one());
    }

    #[test]
    fn half_integer_k_range() {
        let (ks, den) = k_range(&qf(-3, 2));
        assert_eq!(ks, vec![qf(-1, 2)]);
        assert!(!den);
        let ring = p2_ring();
        let c = c_factor(&ring, &CurveClass::new(vec![qf(-3, 2)]), &[1], Variant::Reduced, false).unwrap();
        let expect = ring.chern_t(&[1]).add(&ring.constant(CoeffFunction::z(1).scale(&qf(-1, 2))));
        assert_eq!(c, expect);
    }

    #[test]
    fn full_variant_at_negative_integer() {
        let ring = p2_ring();
        let c = c_factor(&ring, &CurveClass::from_ints(&[-2]), &[1], Variant::Full, false).unwrap();
        let h = ring.chern_t(&[1]);
        let expect = ring.mul(&h, &h.sub(&ring.constant(CoeffFunction::z(1))));
        assert_eq!(c, expect);
        let err = c_factor(&ring, &CurveClass::from_ints(&[-2]), &[1], Variant::Full, true).unwrap_err();
        assert!(err.to_string().contains("Δ-clearing required"));
    }

    #[test]
    fn inverted_reduced_factor_at_two() {
        let ring = p2_ring();
        let c = c_factor(&ring, &CurveClass::from_ints(&[-2]), &[-1], Variant::Reduced, true);
        // β̃(ξ) = 2: the inverted C° is (t+z)(t+2z) with ξ = -1 giving (-t+z)(-t+2z)
        let h = ring.chern_t(&[-1]);
        let z = CoeffFunction::z(1);
        let expect = ring.mul(&h.add(&ring.constant(z.clone())), &h.add(&ring.constant(z.scale(&q(2)))));
        assert_eq!(c.unwrap(), expect);
        let inv = c_factor(&ring, &CurveClass::from_ints(&[2]), &[1], Variant::Reduced, false).unwrap();
        let zi = |k: u32| z.pow(k).inv().unwrap();
        let expect = RingElement::from_terms(
            1,
            1,
            [
                (vec![0], zi(2).scale(&qf(1, 2))),
                (vec![1], zi(3).scale(&qf(-3, 4))),
                (vec![2], zi(4).scale(&qf(7, 8))),
            ],
        );
        assert_eq!(inv, expect);
    }

    #[test]
    fn i_nonnegativity() {
        let quintic = with_e_weights(projective_space(4), vec![vec![5]]);
        for d in 0..4 {
            assert!(is_i_nonnegative(&CurveClass::from_ints(&[d]), &quintic));
        }
        assert!(is_i_nonnegative(&CurveClass::from_ints(&[-3]), &projective_space(2)));
        let p = with_e_weights(projective_space(2), vec![vec![1]]);
        assert!(!is_i_nonnegative(&CurveClass::from_ints(&[-1]), &p));
        assert!(is_i_nonnegative(&CurveClass::new(vec![qf(-1, 2)]), &p));
    }

    #[test]
    fn euler_class_examples() {
        let ring = p2_ring();
        assert_eq!(euler_class(&ring, &[]), ring.one());
        assert_eq!(euler_class(&ring, &[vec![5]]), ring.chern_t(&[5]));
        let w = weighted_projective(&[1, 1, 2]);
        let s = crate::gitdata::sector_of(&w, &CurveClass::new(vec![qf(1, 2)]));
        let r0 = SectorRing::build(&s, &w, 1);
        assert!(euler_class(&r0, &[vec![2]]).is_zero());
    }

    #[test]
    fn grassmannian_root_factor() {
        let g = grassmannian(2, 4);
        let ring = SectorRing::free(2, 1, 6);
        let (num, delta) = weyl_numerator_factor(&ring, &CurveClass::from_ints(&[1, 0]), &g).unwrap();
        let c = ring.chern_t(&[1, -1]);
        let expect = c.add(&ring.constant(CoeffFunction::z(1))).neg();
        assert_eq!(num, expect);
        assert_eq!(delta, &Poly::var(2, 0) - &Poly::var(2, 1));
        let (num0, d0) = weyl_numerator_factor(&ring, &CurveClass::from_ints(&[0, 0]), &g).unwrap();
        assert_eq!(num0, c);
        assert_eq!(d0, delta);
        let (num_h, dh) = weyl_numerator_factor(&ring, &CurveClass::new(vec![qf(1, 2), q(0)]), &g).unwrap();
        assert!(dh.is_constant());
        // C°(1/2, ρ)⁻¹ = (c + z/2), C°(−1/2, −ρ)⁻¹ = 1
        assert_eq!(num_h, c.add(&ring.constant(CoeffFunction::z(1).scale(&qf(1, 2)))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn c_factor_matches_straight_line_product(
            den in 1i64..5, num in -24i64..25, a in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
            d in 0usize..7, full in any::<bool>()
        ) {
            let beta = CurveClass::new(vec![Q::new(num.into(), den.into())]);
            let b = beta.pairing(&[a]);
            prop_assume!(b.abs() <= q(6));
            let ring = SectorRing::free(1, 1, d as u32);
            let variant = if full { Variant::Full } else { Variant::Reduced };
            let got = c_factor(&ring, &beta, &[a], variant, false).unwrap();
            prop_assert_eq!(to_series(&got, d), oracle(&b, a, d, full));
            if !(full && is_negative_integer(&b)) {
                let inv = c_factor(&ring, &beta, &[a], variant, true).unwrap();
                prop_assert_eq!(ring.mul(&inv, &got), ring.one());
            }
            let red = c_factor(&ring, &beta, &[a], Variant::Reduced, false).unwrap();
            prop_assert_eq!(got != red, full && is_negative_integer(&b));
        }

        #[test]
        fn root_pair_identity(dval in -6i64..7, c0 in 1i64..6) {
            // ρ = e1 − e2 and β̃ with β̃(ρ) = dval; evaluate at t = (c0, 0)
            let g = grassmannian(2, 2);
            let beta = CurveClass::from_ints(&[dval, 0]);
            let ring = SectorRing::free(2, 1, 3);
            let (num, _) = weyl_numerator_factor(&ring, &beta, &g).unwrap();
            let z = CoeffFunction::z(1);
            let at = |x: &RingElement| {
                x.terms().iter().fold(CoeffFunction::zero(1), |acc, (e, a)| {
                    acc.add(&a.scale(&num::pow(q(c0), e[0] as usize)).scale(&q((e[1] == 0) as i64)))
                })
            };
            // straight-line product of C(β̃, ±ρ)⁻¹ as rational functions in z, times Δ = c0
            let mut brute = CoeffFunction::constant(1, q(c0));
            for (sgn, bb) in [(1i64, q(dval)), (-1, q(-dval))] {
                let c = q(sgn * c0);
                let lin = |k: &Q| z.scale(k).add(&CoeffFunction::constant(1, c.clone()));
                if bb.is_positive() {
                    let mut k = bb.clone();
                    while k.is_positive() {
                        brute = brute.mul(&lin(&k));
                        k -= Q::one();
                    }
                } else {
                    let mut k = bb.clone() + Q::one();
                    while k.is_negative() {
                        brute = brute.div(&lin(&k)).unwrap();
                        k += Q::one();
                    }
                    if bb.is_negative() {
                        brute = brute.div(&CoeffFunction::constant(1, c.clone())).unwrap();
                    }
                }
            }
            let sign = if dval.rem_euclid(2) == 1 { q(-1) } else { q(1) };
            let expect = z.scale(&q(dval)).add(&CoeffFunction::constant(1, q(c0))).scale(&sign);
            prop_assert_eq!(at(&num), expect.clone());
            prop_assert_eq!(brute, expect);
        }
    }
}
