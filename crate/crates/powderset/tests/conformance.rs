//! The sample documents under `docs/conformance/` must load through the real
//! parsers, and the canonical renderers must round-trip through them.

use powderset::cli::{
    load_action, load_monoid, load_probes, load_topology, load_universe_spec, load_window_map,
    parse_document, render_document, NamedInput, Value,
};
use powderset::formula_text::{parse_formula, print_formula};
use powderset::hf::{AtomTable, Store};
use powderset::monoid::FinMonoid;

fn doc(name: &str) -> NamedInput {
    let path = format!("{}/docs/conformance/{name}", env!("CARGO_MANIFEST_DIR"));
    NamedInput {
        name: name.to_string(),
        source: format!("file:{path}"),
        text: std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path}: {e}")),
    }
}

#[test]
fn monoid_documents_conform() {
    let m2 = load_monoid(&doc("monoid_m2.txt")).unwrap();
    assert_eq!(m2.size(), 2);
    assert_eq!(m2.label(1), "e");
    let z2 = load_monoid(&doc("monoid_minimal.txt")).unwrap();
    assert_eq!(z2.identity(), 0); // identity scanned for
}

#[test]
fn action_documents_conform() {
    let collapse = load_action(&doc("action_collapse.txt")).unwrap();
    assert_eq!(collapse.apply(1, 1), 0);
    let swap3 = load_action(&doc("action_inline_monoid.txt")).unwrap();
    assert_eq!(swap3.num_points(), 3);
    assert_eq!(swap3.apply(1, 0), 1);
}

#[test]
fn universe_documents_conform() {
    let plain = load_universe_spec(&doc("universe_plain.txt")).unwrap();
    let (_, u) = plain.build(powderset::hf::DEFAULT_NODE_CAP).unwrap();
    assert_eq!(u.len(), 66);
    let orbits = load_universe_spec(&doc("universe_orbits.txt")).unwrap();
    let (store, _) = orbits.build(powderset::hf::DEFAULT_NODE_CAP).unwrap();
    assert_eq!(store.atoms().count(), 6);
}

#[test]
fn topology_documents_conform() {
    let m2 = FinMonoid::m2();
    assert!(load_topology(&doc("topology_discrete.txt"), &m2).unwrap().is_discrete());
    assert!(!load_topology(&doc("topology_filter.txt"), &m2).unwrap().is_t0());
    let basis = load_topology(&doc("topology_basis.txt"), &m2).unwrap();
    assert!(basis.is_t0() && !basis.is_discrete());
}

#[test]
fn map_and_probe_documents_conform() {
    let map = load_window_map(&doc("map_values.txt"), 6).unwrap();
    assert_eq!(map.0, vec![0, 2, 4, 5, 5, 5]);
    let probes = load_probes(&doc("probes.txt")).unwrap();
    assert_eq!(probes.len(), 2);
    assert_eq!(probes[0].xs, vec![0, 1, 2]);
}

#[test]
fn formula_lines_conform_and_round_trip() {
    let text = doc("formulas.txt").text;
    let mut store = Store::new(AtomTable::plain(vec!["a".into()]).unwrap());
    let mut count = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let f = parse_formula(&mut store, line).unwrap_or_else(|e| panic!("`{line}`: {e}"));
        let printed = print_formula(&store, &f);
        let reparsed = parse_formula(&mut store, &printed).unwrap();
        assert_eq!(f, reparsed, "round trip for `{line}`");
        count += 1;
    }
    assert_eq!(count, 7);
}

#[test]
fn value_grammar_round_trips_every_sample() {
    for name in [
        "monoid_m2.txt",
        "monoid_minimal.txt",
        "action_collapse.txt",
        "action_inline_monoid.txt",
        "universe_plain.txt",
        "universe_orbits.txt",
        "topology_discrete.txt",
        "topology_filter.txt",
        "topology_basis.txt",
        "map_values.txt",
        "probes.txt",
    ] {
        let text = doc(name).text;
        let (tag, v): (String, Value) = parse_document(&text).unwrap();
        let rendered = render_document(&tag, &v);
        let (tag2, v2) = parse_document(&rendered).unwrap();
        assert_eq!((tag, v), (tag2, v2), "sample {name}");
    }
}
