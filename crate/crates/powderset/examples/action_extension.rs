//! Extending an atom action through the membership structure, stabiliser
//! relations, and continuity against a monoid topology.

use powderset::action::{extend_action, principal_mset, ActionTable};
use powderset::hf::{build_universe, AtomTable, Store, DEFAULT_NODE_CAP};
use powderset::monoid::{filter_close, FinMonoid, LeftCongruence, MonoidTopology};

fn main() {
    let mut store = Store::new(AtomTable::plain(vec!["a".into(), "b".into()]).unwrap());
    let u = build_universe(&mut store, 2, DEFAULT_NODE_CAP).unwrap();

    // the swap group: s exchanges the atoms, recursion does the rest
    let swap = ActionTable::new(
        FinMonoid::cyclic(2),
        vec!["a".into(), "b".into()],
        vec![vec![0, 1], vec![1, 0]],
    )
    .unwrap();
    let ua = extend_action(&mut store, &swap, &u).unwrap();
    let a = store.atom(0).unwrap();
    let b = store.atom(1).unwrap();
    let sb = store.make_set(&[b]);
    let x = store.make_set(&[a, sb]);
    println!("s · {} = {}", store.display(x), store.display(ua.apply(1, x)));

    // the collapse monoid: e sends both atoms to a, sets dedup on the way
    let collapse = ActionTable::new(
        FinMonoid::m2(),
        vec!["a".into(), "b".into()],
        vec![vec![0, 1], vec![0, 0]],
    )
    .unwrap();
    let uc = extend_action(&mut store, &collapse, &u).unwrap();
    let ab = store.make_set(&[a, b]);
    println!("e · {} = {}", store.display(ab), store.display(uc.apply(1, ab)));

    // stabiliser relations: r_a is full, r_b is the diagonal
    println!(
        "r_a blocks: {:?}, r_b blocks: {:?}",
        uc.stab_rel(a).classes(),
        uc.stab_rel(b).classes()
    );

    // continuity: fine topologies work, the coarse one fails at b
    let coarse = MonoidTopology::from_filter(&filter_close(
        collapse.monoid(),
        &[LeftCongruence::full(2)],
    ));
    match collapse.continuity_check(&coarse) {
        Err(w) => println!(
            "collapse is discontinuous for the coarse topology: witness point {} with class {:?}",
            collapse.points()[w.point],
            w.class
        ),
        Ok(()) => println!("collapse is continuous"),
    }
    assert!(collapse.continuity_check(&MonoidTopology::discrete(2)).is_ok());

    // principal M-sets: M/R for the full congruence is the one-point action
    let one = principal_mset(collapse.monoid(), &LeftCongruence::full(2));
    println!("M/full has {} point(s)", one.num_points());
}
