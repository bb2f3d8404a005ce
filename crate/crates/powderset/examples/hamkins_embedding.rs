//! The recursive self-embedding j(x) = {j(y) : y in x} ∪ {{0, x}} of the pure
//! universe: injective, fixes nothing, preserves and reflects atomic
//! formulas, and still fails a Delta0 formula — counting members is not
//! preserved.

use std::collections::HashMap;

use powderset::hf::{build_universe, Store, DEFAULT_NODE_CAP};
use powderset::logic::{
    check_preserves_reflects, delta0_family, eval, eval_delta0, Embedding, ParamStrategy,
};

fn main() {
    let mut store = Store::pure();
    let u = build_universe(&mut store, 4, DEFAULT_NODE_CAP).unwrap();
    let mut j = powderset::logic::HamkinsMap::new();

    let e = store.empty_set();
    let se = store.make_set(&[e]);
    let je = j.apply(&mut store, e).unwrap();
    let jse = j.apply(&mut store, se).unwrap();
    println!("j({}) = {}", store.display(e), store.display(je));
    println!("j({}) = {}", store.display(se), store.display(jse));

    // no fixed points, injective on all of V_4
    let mut moved = 0;
    for &x in u.top().to_vec().iter() {
        assert_ne!(j.apply(&mut store, x).unwrap(), x);
        moved += 1;
    }
    println!("j moves every one of the {moved} elements of V_4");

    // atomic elementarity: x in y and x = y transfer both ways
    let atomic: Vec<_> = powderset::logic::atomic_family()
        .into_iter()
        .map(|(_, f)| f)
        .collect();
    let mut emb = Embedding::hamkins();
    let report = check_preserves_reflects(
        &mut store,
        &mut emb,
        &atomic,
        &u,
        None,
        &ParamStrategy::default(),
    )
    .unwrap();
    println!(
        "atomic formulas: {} tuples checked, passed = {}",
        report.tuples_checked,
        report.passed()
    );

    // the Delta0 witness: "x has exactly one member" at x = {0}
    let witness = delta0_family().remove(0).1;
    let mut assign = HashMap::new();
    assign.insert("x".to_string(), se);
    let before = eval(&store, &u, &witness, &assign).unwrap();
    assign.insert("x".to_string(), jse);
    let after = eval_delta0(&store, &witness, &assign).unwrap();
    println!(
        "\"exists m in x . forall z in x . z = m\" at {{0}}: domain={before}, at j({{0}})={after}"
    );
    println!("so j is an atomic embedding that is not Delta0-elementary");
}
