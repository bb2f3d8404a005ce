//! Chirality evidence on the window-truncated function monoid: with A the
//! identity and B the clamped doubling on [0, 6), no r solves B∘r = A
//! (checked over all 6^6 maps), yet every probed tuple pair admits witnesses
//! q, r with q = B on x̄ and q(r(v)) = A(v). The closed-image probe shows the
//! pair (B, A) accumulating against the image of (q, r) -> (q, q∘r).

use powderset::powder::{
    chirality_criterion, closed_image_probe, generate_probes, verify_certificate,
    CriterionOutcome, Probe, WindowKind, WindowMonoid, DEFAULT_SEARCH_CAP,
};

fn main() {
    let mw = WindowMonoid::new(6).unwrap();
    let a = mw.identity();
    let b = mw.clamped_doubling();
    println!("window 6, A = {a}, B = {b} (image misses the odd values 1, 3)");

    let mut probes = vec![Probe { xs: vec![0, 1, 2], vs: vec![3] }];
    probes.extend(generate_probes(&mw, 7, 19));
    match chirality_criterion(&mw, &a, &b, &probes, DEFAULT_SEARCH_CAP).unwrap() {
        CriterionOutcome::Certificate(cert) => {
            println!(
                "condition 1: none of the {} maps r solves B∘r = A",
                cert.condition1_candidates
            );
            let w = &cert.witnesses[0];
            println!(
                "condition 2 witness for xs={:?}, vs={:?}: q = {}, r = {}",
                w.probe.xs, w.probe.vs, w.q, w.r
            );
            println!(
                "{} probe witnesses; independent re-verification: {}",
                cert.witnesses.len(),
                verify_certificate(&cert, DEFAULT_SEARCH_CAP).unwrap()
            );
        }
        other => println!("unexpected outcome: {other:?}"),
    }

    // the same pair along growing windows: absent from the image at every
    // level, approximable on every earlier sub-window
    println!("\nclosed-image probe over windows 2, 4, 6 (all maps):");
    for level in closed_image_probe(&[2, 4, 6], WindowKind::AllMaps, DEFAULT_SEARCH_CAP).unwrap() {
        println!(
            "  w={}: (B, A) absent: {}, approximations {:?}, accumulation pair: {}",
            level.window,
            level.pair_absent,
            level.approximations,
            level.accumulation_pair.is_some()
        );
    }

    // permutation windows are groups: r = q^{-1} s always solves, image closed
    println!("\npermutations only:");
    for level in closed_image_probe(&[2, 3], WindowKind::Permutations, DEFAULT_SEARCH_CAP).unwrap()
    {
        println!(
            "  w={}: image {} of {} pairs — closed",
            level.window,
            level.image_pairs.unwrap(),
            level.all_pairs.unwrap()
        );
    }
}
