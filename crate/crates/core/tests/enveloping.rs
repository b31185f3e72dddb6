mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use common::{straighten, to_pbw};
use horokit_core::enveloping::{
    center_basis, continuity_spotcheck, hc_project, lie_identity_certificate, Limits, PbwAlgebra,
    PbwElement,
};
use horokit_core::lie::{build_split_sl, restricted_root_system, ChamberVector};
use horokit_core::rational::{q, qf, Q};
use num_traits::Zero;
use proptest::prelude::*;

fn word(ws: &[(Vec<usize>, Q)]) -> BTreeMap<Vec<usize>, Q> {
    let mut m: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
    for (w, c) in ws {
        *m.entry(w.clone()).or_insert_with(Q::zero) += c;
    }
    m
}

fn int_words(v: &[(Vec<usize>, i64)]) -> BTreeMap<Vec<usize>, Q> {
    word(
        &v.iter()
            .map(|(w, c)| (w.clone(), q(*c)))
            .collect::<Vec<_>>(),
    )
}

#[test]
fn efef_matches_bruteforce() {
    let lie = build_split_sl(2).unwrap();
    let a = PbwAlgebra::new(lie.clone(), Limits::default());
    let ef = a.mul(&a.generator(0), &a.generator(2)).unwrap();
    let fast = a.mul(&ef, &ef).unwrap();
    let slow = to_pbw(&lie, straighten(&lie, word(&[(vec![0, 2, 0, 2], q(1))])));
    assert_eq!(fast, slow);
}

#[test]
fn casimir_certificate_identity_bruteforce() {
    // h^2/4 - h/2 - C/2 with C = h^2/2 + ef + fe straightens to -ef.
    let lie = build_split_sl(2).unwrap();
    let (e, h, f) = (0, 1, 2);
    let expr = word(&[
        (vec![h, h], qf(1, 4)),
        (vec![h], qf(-1, 2)),
        (vec![h, h], qf(-1, 4)),
        (vec![e, f], qf(-1, 2)),
        (vec![f, e], qf(-1, 2)),
    ]);
    let s = straighten(&lie, expr);
    assert_eq!(s, word(&[(vec![e, f], q(-1))]));
}

fn arb_element(dim: usize) -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..dim, 0..3), -3i64..4), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_bruteforce_sl3(x in arb_element(8), y in arb_element(8)) {
        let lie = build_split_sl(3).unwrap();
        let a = PbwAlgebra::new(lie.clone(), Limits::default());
        let xe = to_pbw(&lie, straighten(&lie, int_words(&x)));
        let ye = to_pbw(&lie, straighten(&lie, int_words(&y)));
        let mut prod: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        for (w1, c1) in &x {
            for (w2, c2) in &y {
                let mut w = w1.clone();
                w.extend(w2);
                *prod.entry(w).or_insert_with(Q::zero) += q(c1 * c2);
            }
        }
        let slow = to_pbw(&lie, straighten(&lie, prod));
        prop_assert_eq!(a.mul(&xe, &ye).unwrap(), slow);
    }

    #[test]
    fn associativity_sl2(x in arb_element(3), y in arb_element(3), z in arb_element(3)) {
        let lie = build_split_sl(2).unwrap();
        let a = PbwAlgebra::new(lie.clone(), Limits::default());
        let el = |v: &Vec<(Vec<usize>, i64)>| to_pbw(&lie, straighten(&lie, int_words(v)));
        let (x, y, z) = (el(&x), el(&y), el(&z));
        let l = a.mul(&a.mul(&x, &y).unwrap(), &z).unwrap();
        let r = a.mul(&x, &a.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        let c = a.commutator(&x, &y).unwrap();
        prop_assert!(c.is_zero() || c.degree() + 1 <= x.degree() + y.degree());
    }
}

#[test]
fn sl3_wall_certificate() {
    let lie = build_split_sl(3).unwrap();
    let rs = restricted_root_system(&lie).unwrap();
    let a = PbwAlgebra::new(lie, Limits::default());
    let t = Instant::now();
    let h = ChamberVector::new(&rs, vec![q(1), q(1), q(-2)]).unwrap();
    let c = lie_identity_certificate(&a, &rs, &h).unwrap();
    assert_eq!(c.w_h, 3);
    assert!(c.center_degree <= 3);
    assert!(c.verified);
    assert!(hc_project(&a, &c.p).is_zero());
    assert!(c.p.terms.keys().all(|m| a.positive_degree(m) > 0));
    // alpha_1 vanishes on H, so U for E12 is zero.
    assert!(c.u[0].is_zero());
    eprintln!("sl3 wall certificate in {:?}", t.elapsed());
}

#[test]
fn sl3_wall_continuity() {
    let lie = build_split_sl(3).unwrap();
    let rs = restricted_root_system(&lie).unwrap();
    let a = PbwAlgebra::new(lie, Limits::default());
    let samples: Vec<ChamberVector> = (1..=5)
        .map(|k| ChamberVector::from_simple_values(&rs, &[q(0), q(k)]).unwrap())
        .collect();
    let r = continuity_spotcheck(&a, &rs, &[0], &samples, &qf(1, 10)).unwrap();
    assert!(r.w_h.iter().all(|&w| w == 3));
    assert!(r.coherent, "{r:?}");
}

#[test]
fn sl3_center_contains_casimir() {
    let lie = build_split_sl(3).unwrap();
    let a = PbwAlgebra::new(lie.clone(), Limits::default());
    let cb = center_basis(&a, 2).unwrap();
    assert_eq!(cb.elements.len(), 2);
    // Casimir from the trace form: sum over the dual basis.
    let mut cas = PbwElement::zero();
    let pairs = [(0usize, 5usize), (1, 6), (2, 7)];
    for (e, f) in pairs {
        cas = cas.add(&a.mul(&a.generator(e), &a.generator(f)).unwrap());
        cas = cas.add(&a.mul(&a.generator(f), &a.generator(e)).unwrap());
    }
    // Cartan part: inverse of the trace Gram matrix [[2,-1],[-1,2]] is (1/3)[[2,1],[1,2]].
    let (h1, h2) = (a.generator(3), a.generator(4));
    let hh = a
        .mul(&h1, &h1)
        .unwrap()
        .scale(&qf(2, 3))
        .add(&a.mul(&h1, &h2).unwrap().scale(&qf(2, 3)))
        .add(&a.mul(&h2, &h2).unwrap().scale(&qf(2, 3)));
    cas = cas.add(&hh);
    for g in 0..lie.dim_g {
        assert!(a.commutator(&a.generator(g), &cas).unwrap().is_zero());
    }
    let gc = horokit_core::enveloping::harish_chandra(&a, &cas).unwrap();
    assert!(cb.gamma_inverse(&gc).is_some());
}

#[test]
fn sl3_generic_certificate() {
    let lie = build_split_sl(3).unwrap();
    let rs = restricted_root_system(&lie).unwrap();
    let a = PbwAlgebra::new(lie, Limits::default());
    let t = Instant::now();
    let h = ChamberVector::new(&rs, vec![q(1), q(0), q(-1)]).unwrap();
    let c = lie_identity_certificate(&a, &rs, &h).unwrap();
    assert_eq!(c.w_h, 6);
    assert!(c.verified);
    eprintln!("generic sl3 certificate in {:?}", t.elapsed());
}
