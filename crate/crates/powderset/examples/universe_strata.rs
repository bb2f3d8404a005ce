//! Build hereditarily finite universes and look around: strata sizes, ranks,
//! transitive closures, and the size cap that keeps V_6 out of memory.

use powderset::hf::{build_universe, AtomTable, Store, DEFAULT_NODE_CAP};

fn main() {
    // pure sets: V_0 ... V_5 over no atoms
    let mut store = Store::pure();
    let u = build_universe(&mut store, 5, DEFAULT_NODE_CAP).expect("V_5 fits the cap");
    println!("strata sizes of V_0..V_5({{}}): {:?}", u.strata_sizes());

    let e = store.empty_set();
    let se = store.make_set(&[e]);
    let pair = store.make_set(&[e, se]);
    println!("rank {{}} = {}, rank {{{{}}}} = {}", store.rank(e), store.rank(se));
    let tc: Vec<String> = store
        .transitive_closure(pair)
        .into_iter()
        .map(|n| store.display(n))
        .collect();
    println!("trcl {} = {{{}}}", store.display(pair), tc.join(", "));

    // V_6 would need 2^65536 nodes; the builder refuses before enumerating
    let mut fresh = Store::pure();
    match build_universe(&mut fresh, 6, DEFAULT_NODE_CAP) {
        Err(e) => println!("V_6 refused: {e}"),
        Ok(_) => unreachable!("V_6 cannot fit any sane cap"),
    }

    // two atoms: V_1 has the 6 elements a, b, {}, {a}, {b}, {a,b}
    let mut store = Store::new(AtomTable::plain(vec!["a".into(), "b".into()]).unwrap());
    let u = build_universe(&mut store, 2, DEFAULT_NODE_CAP).unwrap();
    let v1: Vec<String> = u.stratum(1).iter().map(|&n| store.display(n)).collect();
    println!("V_1({{a,b}}) = {{{}}}", v1.join(", "));
    println!("|V_2({{a,b}})| = {}", u.len());
}
