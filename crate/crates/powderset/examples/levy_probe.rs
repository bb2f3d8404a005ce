//! Finite shadow of the classical choice failure for ℤ acting on orbit atoms
//! with the arithmetic-progression topology: every finite choice-sequence
//! segment has an open stabiliser lcm(1..k)ℤ, but the moduli diverge, which
//! is exactly why the infinite sequence's stabiliser ⋂ nℤ = {0} is not open.

use powderset::symcore::levy_sequence_probe;

fn main() {
    for k in 1..=6 {
        let (store, segment, report) = levy_sequence_probe(k).unwrap();
        println!(
            "k={k}: stabiliser {}Z, in core: {}, closure nodes checked: {}",
            report.stabiliser_modulus, report.in_core, report.closure_nodes_checked
        );
        if k <= 2 {
            println!("   segment = {}", store.display(segment));
        }
    }
    let (_, _, r6) = levy_sequence_probe(6).unwrap();
    let moduli: Vec<u64> = r6.prefix_moduli.iter().map(|&(_, m)| m).collect();
    println!("prefix stabiliser moduli: {moduli:?}");
    println!(
        "distinct values increase strictly: {} — the finite-level witness that the full sequence is unstable",
        r6.moduli_strictly_increase
    );
}
