//! Parse, classify and evaluate first-order formulas over ∈ and =. Bounded
//! quantifiers walk the members of a term; ranked (capitalised) quantifiers
//! walk the top stratum of the universe.

use std::collections::HashMap;

use powderset::formula_text::{parse_formula, parse_node, print_formula};
use powderset::hf::{build_universe, Store, DEFAULT_NODE_CAP};
use powderset::logic::{classify, eval};

fn main() {
    let mut store = Store::pure();
    let u = build_universe(&mut store, 3, DEFAULT_NODE_CAP).unwrap();

    let texts = [
        "forall y in x . forall z in y . false",
        "exists m in x . forall z in x . z = m",
        "Exists y . x in y",
        "Forall v . Exists w . v in w or v = w",
        "x in {{}} -> x = {}",
    ];
    let x = parse_node(&mut store, "{}").unwrap();
    for text in texts {
        let f = parse_formula(&mut store, text).unwrap();
        let mut assign = HashMap::new();
        assign.insert("x".to_string(), x);
        let value = eval(&store, &u, &f, &assign).unwrap();
        println!(
            "{:<45} class {:<7} at x = {{}}: {}",
            print_formula(&store, &f),
            classify(&f).to_string(),
            value
        );
    }

    // quantifier shadowing works the usual way: the inner y wins
    let f = parse_formula(&mut store, "forall y in x . exists y in y . true").unwrap();
    let se = store.make_set(&[x]);
    let mut assign = HashMap::new();
    assign.insert("x".to_string(), se);
    println!(
        "{} at x = {{{{}}}}: {}",
        print_formula(&store, &f),
        eval(&store, &u, &f, &assign).unwrap()
    );
}
