use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;

use icsp::oracle::gen::{algebra_case, iset_instance, IsetRun, Kind};
use icsp::oracle::relation_holds;
use icsp::{ElementValue, Event, IsetConstraint, IsetId, IsetStore};

fn int(i: i64) -> ElementValue {
    ElementValue::Int(i)
}

fn set(xs: &[i64]) -> BTreeSet<ElementValue> {
    xs.iter().copied().map(int).collect()
}

/// Builds a generated instance and drives it to quiescence in natural order.
fn quiescent(seed: u64) -> Option<IsetStore> {
    let inst = iset_instance(seed);
    let mut store = IsetStore::new();
    for (i, (known, open)) in inst.initial.iter().enumerate() {
        store.new_iset(format!("s{i}"), known.iter().cloned(), *open);
    }
    for c in &inst.constraints {
        store.post(c.clone()).ok()?;
        store.fixpoint().ok()?;
    }
    for (s, e) in &inst.insertions {
        store.ensure_member(*s, e.clone()).ok()?;
        store.fixpoint().ok()?;
    }
    Some(store)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn known_elements_behave_as_a_set(xs in prop::collection::vec(0i64..6, 0..12)) {
        let mut store = IsetStore::new();
        let s = store.new_iset("s", std::iter::empty(), true);
        for &x in &xs {
            store.ensure_member(s, int(x)).unwrap();
        }
        store.fixpoint().unwrap();
        let expected: BTreeSet<ElementValue> = xs.iter().copied().map(int).collect();
        prop_assert_eq!(store.known(s), expected.clone());
        prop_assert_eq!(store.known_len(s), expected.len());
        let inserted: Vec<&Event> = store.history().iter().filter(|e| matches!(e, Event::Inserted(..))).collect();
        prop_assert_eq!(inserted.len(), expected.len());
    }

    #[test]
    fn events_fire_at_most_once(seed in any::<u64>()) {
        if let Some(store) = quiescent(seed) {
            let mut seen = HashSet::new();
            for event in store.history() {
                prop_assert!(seen.insert(event.clone()), "repeated {:?}", event);
                if let Event::Inserted(s, e) = event {
                    prop_assert!(store.contains(*s, e));
                }
            }
        }
    }

    #[test]
    fn closed_sets_never_grow(xs in prop::collection::vec(0i64..6, 0..5), extra in 0i64..6) {
        let mut store = IsetStore::new();
        let s = store.new_iset("s", xs.iter().copied().map(int), true);
        store.close(s);
        store.fixpoint().unwrap();
        let before = store.known(s);
        let result = store.ensure_member(s, int(extra));
        prop_assert_eq!(result.is_ok(), before.contains(&int(extra)));
        prop_assert_eq!(store.known(s), before);
        prop_assert!(store.is_closed(s));
    }

    #[test]
    fn closed_world_posting_matches_set_algebra(seed in any::<u64>(), k in 0usize..5) {
        let case = algebra_case(seed, Kind::ALL[k]);
        let mut store = IsetStore::new();
        for (i, contents) in case.contents.iter().enumerate() {
            store.new_iset(format!("s{i}"), contents.iter().cloned(), false);
        }
        let accepted = store.post(case.constraint.clone()).and_then(|_| store.fixpoint()).is_ok();
        let holds = relation_holds(&case.constraint, |s| case.contents[s.index()].clone());
        prop_assert_eq!(accepted, holds);
    }

    #[test]
    fn quiescent_stores_satisfy_partial_relations(seed in any::<u64>()) {
        let inst = iset_instance(seed);
        if let Some(store) = quiescent(seed) {
            let k = |s: IsetId| store.known(s);
            for c in &inst.constraints {
                match c {
                    IsetConstraint::Member(e, s) => prop_assert!(store.contains(*s, e)),
                    IsetConstraint::Union(a, b, c) => {
                        prop_assert!(k(*a).union(&k(*b)).all(|e| store.contains(*c, e)));
                    }
                    IsetConstraint::Intersection(a, b, c) => {
                        prop_assert!(k(*a).intersection(&k(*b)).all(|e| store.contains(*c, e)));
                        prop_assert!(k(*c).is_subset(&k(*a)) && k(*c).is_subset(&k(*b)));
                    }
                    IsetConstraint::Difference(a, b, c) => {
                        prop_assert!(k(*c).is_subset(&k(*a)));
                        prop_assert!(k(*c).is_disjoint(&k(*b)));
                        if store.is_closed(*b) {
                            prop_assert!(k(*a).difference(&k(*b)).all(|e| store.contains(*c, e)));
                        }
                    }
                    IsetConstraint::Inclusion(a, b) => prop_assert!(k(*a).is_subset(&k(*b))),
                }
                if c.sets().iter().all(|&s| store.is_closed(s)) {
                    prop_assert!(relation_holds(c, |s| store.known(s)), "{:?}", c);
                }
            }
        }
    }

    #[test]
    fn outcome_is_independent_of_order(seed in any::<u64>()) {
        let runs = iset_instance(seed).permuted_runs(seed, 6);
        for run in &runs[1..] {
            prop_assert_eq!(run, &runs[0]);
        }
    }
}

#[test]
fn inclusion_into_closed_set_rejects_foreign_elements() {
    let mut store = IsetStore::new();
    let a = store.new_iset("a", set(&[1]), true);
    let b = store.new_iset("b", set(&[1, 2]), false);
    store.post(IsetConstraint::Inclusion(a, b)).unwrap();
    store.fixpoint().unwrap();
    store.ensure_member(a, int(2)).unwrap();
    store.fixpoint().unwrap();
    assert!(store.ensure_member(a, int(3)).and_then(|_| store.fixpoint()).is_err());
}

#[test]
fn inclusion_pushes_elements_into_open_superset() {
    let mut store = IsetStore::new();
    let a = store.new_iset("a", set(&[1, 2]), true);
    let b = store.new_iset("b", std::iter::empty(), true);
    store.post(IsetConstraint::Inclusion(a, b)).unwrap();
    store.fixpoint().unwrap();
    assert_eq!(store.known(b), set(&[1, 2]));
    store.ensure_member(a, int(5)).unwrap();
    store.fixpoint().unwrap();
    assert_eq!(store.known(b), set(&[1, 2, 5]));
}

#[test]
fn failed_runs_are_reported_as_failed() {
    let mut failed = 0;
    for seed in 0..300 {
        let runs = iset_instance(seed).permuted_runs(seed, 2);
        failed += runs.iter().filter(|r| **r == IsetRun::Failed).count();
    }
    // The generator should exercise both outcomes.
    assert!(failed > 0);
}
