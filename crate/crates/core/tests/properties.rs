use ifunc_core::chowring::{RingElement, SectorRing};
use ifunc_core::coeff::CoeffFunction;
use ifunc_core::factors::euler_class;
use ifunc_core::gitdata::presets::*;
use ifunc_core::gitdata::{enumerate_fiber, CurveClass, Sector};
use ifunc_core::ifunction::{assemble, Convexity, Engine, Mode, Options, Presentation};
use ifunc_core::poly::{q, Q};
use ifunc_core::Error;

fn opts(mode: Mode, d: i64) -> Options {
    Options::new(mode, q(d))
}

#[test]
fn grassmannian_terms_are_weyl_invariant_up_to_degree_three() {
    let g = grassmannian(2, 4);
    let engine = Engine::new(g.clone(), false).unwrap();
    let s = engine.series(&opts(Mode::Nonabelian, 3)).unwrap();
    let degrees: Vec<Q> = s.terms.iter().map(|t| t.class.values[0].clone()).collect();
    assert_eq!(degrees, vec![q(0), q(1), q(2), q(3)]);
    let swap = &g.weyl_generators[0];
    for t in &s.terms {
        for c in &t.components {
            let ring = engine.ring(&c.sector);
            assert_eq!(ring.act(swap, &c.coefficient), c.coefficient);
        }
    }
}

#[test]
fn grassmannian_numerator_is_anti_invariant_before_division() {
    let g = grassmannian(2, 4);
    let engine = Engine::new(g.clone(), false).unwrap();
    let swap = &g.weyl_generators[0];
    for d in 1..=3 {
        let fiber = enumerate_fiber(&g, &[q(d)], &q(d), 1).unwrap();
        assert_eq!(fiber.len() as i64, d + 1);
        let n = engine.numerator(&fiber, &[q(0), q(0)], 7).unwrap();
        assert_eq!(n.act(swap), n.neg());
    }
}

#[test]
fn flipping_a_positive_root_changes_nothing() {
    let g = grassmannian(2, 4);
    let mut flipped = g.clone();
    let pos = flipped.positive_roots[0];
    let neg = flipped.roots.iter().position(|r| r.iter().zip(&g.roots[pos]).all(|(a, b)| *a == -*b)).unwrap();
    flipped.positive_roots = vec![neg];
    let a = assemble(&g, &opts(Mode::Nonabelian, 3)).unwrap();
    let b = assemble(&flipped, &opts(Mode::Nonabelian, 3)).unwrap();
    assert_eq!(a.terms, b.terms);
}

#[test]
fn convex_and_transverse_agree_on_nonnegative_classes() {
    let p = with_e_weights(grassmannian(2, 4), vec![vec![1, 1]; 4]);
    let engine = Engine::new(p.clone(), false).unwrap();
    let mut o = opts(Mode::Lefschetz, 2);
    let convex = engine.series(&o).unwrap();
    o.convexity = Convexity::AssumeTransverse;
    let push = engine.series(&o).unwrap();
    assert_eq!(convex.terms.len(), push.terms.len());
    for (a, b) in convex.terms.iter().zip(&push.terms) {
        for (ca, cb) in a.components.iter().zip(&b.components) {
            assert_eq!(ca.presentation, Presentation::Restricted);
            assert_eq!(cb.presentation, Presentation::Pushforward);
            let ring = engine.ring(&ca.sector);
            let integral: Vec<Vec<i64>> =
                p.e_weights.iter().filter(|e| ca.representative.pairing(e).is_integer()).cloned().collect();
            assert_eq!(ring.mul(&euler_class(&ring, &integral), &ca.coefficient), cb.coefficient);
        }
    }
}

#[test]
fn unbounded_fiber_is_reported_before_validation() {
    let mut p = grassmannian(2, 2);
    p.weights.push(vec![1, 1]);
    match Engine::new(p, false) {
        Err(Error::UnboundedFiber { direction }) => assert!(direction.contains('1')),
        other => panic!("expected unbounded error, got {:?}", other.err()),
    }
}

#[test]
fn lefschetz_without_bundle_matches_plain_mode() {
    let p = projective_space(3);
    let plain = assemble(&p, &opts(Mode::Toric, 3)).unwrap();
    let lef = assemble(&p, &opts(Mode::Lefschetz, 3)).unwrap();
    assert_eq!(plain.terms, lef.terms);
    assert!(lef.diagnostics.iter().any(|d| d.message.contains("reduces to plain")));
}

#[test]
fn equivariant_grassmannian_specializes() {
    let g = grassmannian(2, 4);
    let column: Vec<i64> = (0..8).map(|l| (l % 4) as i64).collect();
    let ge = with_equivariant_column(g.clone(), &column);
    let mut o = opts(Mode::Nonabelian, 2);
    o.equivariant = true;
    let eq = assemble(&ge, &o).unwrap();
    let spec = ifunc_core::ifunction::specialize_to_nonequivariant(&eq).unwrap();
    let plain = assemble(&g, &opts(Mode::Nonabelian, 2)).unwrap();
    assert_eq!(spec.terms, plain.terms);
}

#[test]
fn involution_places_fractional_classes() {
    let p = weighted_projective(&[1, 1, 2]);
    let s = assemble(&p, &opts(Mode::Toric, 3)).unwrap();
    for t in &s.terms {
        let c = &t.components[0];
        let expect: Vec<Q> =
            p.weights.iter().map(|w| ifunc_core::poly::frac(&-t.class.pairing(w))).collect();
        assert_eq!(c.sector.fracs, expect);
        assert_eq!(c.sector.order, if t.class.values[0].is_integer() { 1 } else { 2 });
    }
}

#[test]
fn toric_coefficient_of_zero_class_is_one() {
    let p = weighted_projective(&[1, 2, 3]);
    let engine = Engine::new(p.clone(), false).unwrap();
    let c = engine.toric_coefficient(&CurveClass::zero(1)).unwrap();
    let ring = SectorRing::build(&Sector::untwisted(&p), &p, 1);
    assert_eq!(c.coefficient, ring.one());
    assert_eq!(c.coefficient, RingElement::constant(1, CoeffFunction::one(1)));
}
