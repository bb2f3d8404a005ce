//! Symmetric core extraction: the largest transitive part of a universe on
//! which a topologised monoid action is continuous. With the collapse action
//! and the coarse (R0 = full) topology, everything touching the atom b is
//! thrown out, witness attached.

use powderset::action::ActionTable;
use powderset::hf::{build_universe, AtomTable, Store, DEFAULT_NODE_CAP};
use powderset::monoid::{filter_close, FinMonoid, LeftCongruence, MonoidTopology};
use powderset::symcore::{symmetric_core, FiniteStabOracle};

fn main() {
    let mut store = Store::new(AtomTable::plain(vec!["a".into(), "b".into()]).unwrap());
    let u = build_universe(&mut store, 2, DEFAULT_NODE_CAP).unwrap();

    // {1, e} with e collapsing both atoms to a
    let collapse = ActionTable::new(
        FinMonoid::m2(),
        vec!["a".into(), "b".into()],
        vec![vec![0, 1], vec![0, 0]],
    )
    .unwrap();

    // the coarsest powder topology: R0 = full, opens are {} and M
    let coarse = MonoidTopology::from_filter(&filter_close(
        collapse.monoid(),
        &[LeftCongruence::full(2)],
    ));

    let mut oracle = FiniteStabOracle::new(&store, &collapse, &coarse).unwrap();
    let core = symmetric_core(&mut store, &u, &mut oracle).unwrap();
    println!(
        "universe has {} nodes; core keeps {}, excludes {}",
        u.len(),
        core.members.len(),
        core.excluded.len()
    );
    let members: Vec<String> = core.members.iter().map(|&n| store.display(n)).collect();
    println!("core = {{{}}}", members.join(", "));
    let ex = &core.excluded[0];
    println!(
        "first exclusion: {} (witness {} has a non-open stabiliser)",
        store.display(ex.node),
        store.display(ex.witness)
    );

    // refining the topology to discrete rescues everything
    let fine = MonoidTopology::discrete(2);
    let mut oracle = FiniteStabOracle::new(&store, &collapse, &fine).unwrap();
    let full_core = symmetric_core(&mut store, &u, &mut oracle).unwrap();
    println!(
        "under the discrete topology the core grows back to {} nodes",
        full_core.members.len()
    );
}
