mod common;

use std::collections::BTreeSet;

use monobound::classes::{named_class, NAMED_CLASSES};
use monobound::enumerate::{enumerate, EnumerateError, EnumerateOptions};
use monobound::orientation::{canonical_form, CanonicalForm};
use monobound::polytope::{symmetry_group, Params};

fn d4() -> monobound::enumerate::Enumeration {
    enumerate(4, &EnumerateOptions::default()).unwrap()
}

#[test]
fn d4_has_seven_classes() {
    let e = d4();
    assert_eq!(e.classes.len(), 7);
    assert_eq!(e.group_order, 14);
    assert_eq!(e.orders_up_to_reversal().unwrap(), 98);
}

#[test]
fn d4_matches_brute_force() {
    let (accepted, classes) = common::brute_force_classes(4);
    assert_eq!(accepted, 196);
    let found: BTreeSet<CanonicalForm> = d4().classes.into_iter().collect();
    assert_eq!(found, classes);
}

#[test]
fn raw_start_and_thread_count_do_not_change_the_result() {
    let base = d4().classes;
    let raw = enumerate(4, &EnumerateOptions { raw: true, ..Default::default() }).unwrap();
    let single = enumerate(4, &EnumerateOptions { jobs: Some(1), ..Default::default() }).unwrap();
    assert_eq!(raw.classes, base);
    assert_eq!(single.classes, base);
    assert_eq!(d4().classes, base);
}

#[test]
fn named_d4_classes_are_the_seven_classes() {
    let group = symmetry_group(Params::corank3(4).unwrap()).unwrap();
    let named: BTreeSet<CanonicalForm> = NAMED_CLASSES
        .iter()
        .filter(|c| c.d == 4)
        .map(|c| canonical_form(&c.order().unwrap(), &group).unwrap())
        .collect();
    let found: BTreeSet<CanonicalForm> = d4().classes.into_iter().collect();
    assert_eq!(named, found);
}

#[test]
fn nr2_and_nr3_differ_only_in_one_edge() {
    let a = named_class("NR2_4").unwrap().order().unwrap();
    let b = named_class("NR3_4").unwrap().order().unwrap();
    let differ: Vec<usize> = (0..a.len()).filter(|&i| a.0[i] != b.0[i]).collect();
    assert_eq!(differ, vec![12, 13]);
}

#[test]
fn node_budget_is_reported() {
    match enumerate(4, &EnumerateOptions { node_budget: Some(10), ..Default::default() }) {
        Err(EnumerateError::BudgetExceeded { kind, .. }) => assert_eq!(kind, "node"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn odd_dimension_three_is_small() {
    // C_3(6)^Δ has 8 vertices; the search must run and return canonical forms
    let e = enumerate(3, &EnumerateOptions::default()).unwrap();
    let group = symmetry_group(Params::corank3(3).unwrap()).unwrap();
    for c in &e.classes {
        assert_eq!(&canonical_form(c.order(), &group).unwrap(), c);
    }
}
