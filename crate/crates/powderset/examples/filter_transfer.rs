//! Agreement transfer at finite scale: if two injective structure maps agree
//! on a filter member and push the graph of f to the same set, they agree on
//! f's whole codomain — certified by an agreement point inside each fibre.

use powderset::logic::{agreement_transfer_check, TransferInstance, TransferOutcome};

fn base_instance() -> TransferInstance {
    // X = {0..5}, fibres {0,3}, {1,4}, {2,5} over Y = {p, q, r},
    // filter generated by supersets of {0, 1, 2}
    TransferInstance {
        x_size: 6,
        y_size: 3,
        f: vec![0, 1, 2, 0, 1, 2],
        filter_generators: vec![vec![0, 1, 2, 3], vec![0, 1, 2, 5]],
        j_x: vec![10, 11, 12, 13, 14, 15],
        j_y: vec![20, 21, 22],
        k_x: vec![10, 11, 12, 13, 14, 15],
        k_y: vec![20, 21, 22],
    }
}

fn main() {
    // j and k agree on the base {0,1,2}; on 3,4,5 we swap k within fibres,
    // which keeps the pushed graphs equal as sets
    let mut inst = base_instance();
    inst.j_x = vec![10, 11, 12, 30, 31, 32];
    inst.k_x = vec![10, 11, 12, 30, 31, 32];
    match agreement_transfer_check(&inst).unwrap() {
        TransferOutcome::Certified { witnesses } => {
            println!("certified: j and k agree on Y");
            for (y, alpha) in witnesses {
                println!("  y={y}: agreement point alpha={alpha} in its fibre");
            }
        }
        other => println!("unexpected: {other:?}"),
    }

    // a fibre that misses the filter base is a precondition error
    let mut bad = base_instance();
    bad.filter_generators = vec![vec![0, 1, 3]];
    println!("\nstarved fibre: {:?}", agreement_transfer_check(&bad).unwrap_err());

    // breaking the graph hypothesis is reported, never falsely certified
    let mut bad = base_instance();
    bad.k_y[1] = 99;
    match agreement_transfer_check(&bad).unwrap() {
        TransferOutcome::HypothesisFails(h) => println!("hypothesis fails: {h:?}"),
        other => println!("unexpected: {other:?}"),
    }
}
