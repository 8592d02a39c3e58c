use std::collections::BTreeSet;

use partial_symmetry::clopen::{
    canonicalize, carac_c_check, enumerate_base, is_down_closed, is_hereditary_sublattice,
    tilde_truncated,
};
use partial_symmetry::{Clopen, Word};
use proptest::prelude::*;

const PROBE: usize = 8;

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(any::<bool>(), 0..=max_len).prop_map(Word::from_bits)
}

fn clopen() -> impl Strategy<Value = Clopen> {
    proptest::collection::vec(word(5), 0..6).prop_map(|ws| canonicalize(&ws))
}

/// Membership of every depth-8 point, read directly off the words.
fn points(c: &Clopen) -> Vec<bool> {
    (0..1u64 << PROBE)
        .map(|i| {
            let x = Word::from_index(i, PROBE);
            c.words().iter().any(|w| w.is_prefix_of(&x))
        })
        .collect()
}

fn pointwise(a: &Clopen, b: &Clopen, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    points(a).into_iter().zip(points(b)).map(|(x, y)| op(x, y)).collect()
}

proptest! {
    #[test]
    fn boolean_operations_match_points(a in clopen(), b in clopen()) {
        prop_assert_eq!(points(&a.union(&b)), pointwise(&a, &b, |x, y| x || y));
        prop_assert_eq!(points(&a.intersect(&b)), pointwise(&a, &b, |x, y| x && y));
        prop_assert_eq!(points(&a.minus(&b)), pointwise(&a, &b, |x, y| x && !y));
        prop_assert_eq!(points(&a.complement()), pointwise(&a, &a, |x, _| !x));
        let sub = pointwise(&a, &b, |x, y| !x || y).into_iter().all(|p| p);
        prop_assert_eq!(a.is_subset(&b), sub);
        let meet = pointwise(&a, &b, |x, y| x && y).into_iter().any(|p| p);
        prop_assert_eq!(a.intersects(&b), meet);
    }

    #[test]
    fn structural_equality_is_semantic_equality(a in clopen(), b in clopen()) {
        prop_assert_eq!(a == b, points(&a) == points(&b));
    }

    #[test]
    fn de_morgan_and_absorption(a in clopen(), b in clopen()) {
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
        prop_assert_eq!(a.intersect(&b).complement(), a.complement().union(&b.complement()));
        prop_assert_eq!(a.union(&a.intersect(&b)), a.clone());
        prop_assert_eq!(a.intersect(&a.union(&b)), a.clone());
        prop_assert_eq!(a.complement().complement(), a);
    }

    #[test]
    fn canonicalization_is_idempotent(ws in proptest::collection::vec(word(5), 0..8)) {
        let once = canonicalize(&ws);
        prop_assert_eq!(canonicalize(once.words()), once.clone());
        let mut sorted = once.words().to_vec();
        sorted.sort();
        prop_assert_eq!(sorted.as_slice(), once.words());
        for (i, a) in once.words().iter().enumerate() {
            for b in &once.words()[i + 1..] {
                prop_assert!(!a.comparable(b));
            }
        }
    }

    #[test]
    fn masks_round_trip(mask in 0u64..=255) {
        let c = Clopen::from_mask(mask, 3);
        prop_assert_eq!(c.to_mask(3), Some(mask));
        prop_assert!(c.depth() <= 3);
    }

    #[test]
    fn union_closure_and_down_closure_characterize_hereditary_families(choice in 0u32..1 << 16) {
        let base = enumerate_base(2).unwrap();
        let family: Vec<Clopen> = (0..16).filter(|i| choice >> i & 1 == 1).map(|i| base[i].clone()).collect();
        let carac = carac_c_check(&family, 2).unwrap();
        let down = is_down_closed(&family, 2).unwrap();
        prop_assert_eq!(carac && down, is_hereditary_sublattice(&family, 2).unwrap());
    }
}

#[test]
fn subset_is_a_partial_order_on_b2() {
    let base = enumerate_base(2).unwrap();
    for a in &base {
        assert!(a.is_subset(a));
        for b in &base {
            if a.is_subset(b) && b.is_subset(a) {
                assert_eq!(a, b);
            }
            for c in &base {
                if a.is_subset(b) && b.is_subset(c) {
                    assert!(a.is_subset(c));
                }
            }
        }
    }
}

#[test]
fn hereditary_families_at_depth_two_are_exactly_the_tilde_sets() {
    let base = enumerate_base(2).unwrap();
    let mut found = BTreeSet::new();
    for choice in 0u32..1 << 16 {
        let family: Vec<Clopen> = (0..16).filter(|i| choice >> i & 1 == 1).map(|i| base[i].clone()).collect();
        if is_hereditary_sublattice(&family, 2).unwrap() {
            let union = family.iter().fold(Clopen::empty(), |acc, u| acc.union(u));
            let l: BTreeSet<Clopen> = family.into_iter().collect();
            assert_eq!(tilde_truncated(&union, 2).unwrap(), l);
            found.insert(l);
        }
    }
    assert_eq!(found.len(), 16);
}

#[test]
fn depth_limits_are_enforced() {
    assert!(enumerate_base(5).is_err());
    assert!(is_hereditary_sublattice(&[Clopen::parse(&["000"]).unwrap()], 2).is_err());
}
