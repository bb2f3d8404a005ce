//! The stabiliser-inclusion kernel behind closure under Gödel operations:
//! r_a ⊆ r_{⋃a} and r_a ∩ r_b ⊆ r_{{a,b}}, r_{a\b}, r_{a×b}. The union, pair
//! and product inclusions are theorems for every recursively extended action;
//! the difference inclusion needs injectivity or idempotence, and the last
//! action below breaks it.

use powderset::action::ActionTable;
use powderset::hf::{build_universe, AtomTable, Store, DEFAULT_NODE_CAP};
use powderset::monoid::FinMonoid;
use powderset::symcore::godel_closure_check;

fn check(name: &str, act: &ActionTable, atom_count: usize, rank: usize) {
    let mut store = Store::new(AtomTable::with_count(atom_count));
    let u = build_universe(&mut store, rank, DEFAULT_NODE_CAP).unwrap();
    let report = godel_closure_check(&mut store, act, u.top(), u.rank_bound() as u32)
        .unwrap();
    println!(
        "{name}: {} nodes, {} pairs, overflow skips {}, all inclusions hold: {}",
        report.nodes_checked,
        report.pairs_checked,
        report.rank_overflow_skips,
        report.all_hold()
    );
    if let Some(f) = report.failures.first() {
        println!(
            "   first failure: {} of {} {} — monoid pair ({}, {}) separates the result",
            f.op,
            store.display(f.a),
            f.b.map(|b| store.display(b)).unwrap_or_default(),
            act.monoid().label(f.witness.0),
            act.monoid().label(f.witness.1),
        );
    }
}

fn main() {
    let swap = ActionTable::new(
        FinMonoid::cyclic(2),
        vec!["a".into(), "b".into()],
        vec![vec![0, 1], vec![1, 0]],
    )
    .unwrap();
    check("swap group on V_2({a,b})", &swap, 2, 2);

    let collapse = ActionTable::new(
        FinMonoid::m2(),
        vec!["a".into(), "b".into()],
        vec![vec![0, 1], vec![0, 0]],
    )
    .unwrap();
    check("idempotent collapse on V_2({a,b})", &collapse, 2, 2);

    // a -> b, b -> a, c -> a: neither injective nor idempotent; the
    // difference inclusion genuinely fails for it
    let twisted = ActionTable::new(
        FinMonoid::new(
            vec!["1".into(), "m".into(), "mm".into()],
            vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 1, 2]],
            Some(0),
        )
        .unwrap(),
        vec!["a".into(), "b".into(), "c".into()],
        vec![vec![0, 1, 2], vec![1, 0, 0], vec![0, 1, 1]],
    )
    .unwrap();
    check("twisted collapse on V_1({a,b,c})", &twisted, 3, 1);
}
