//! Left and right powder checks on finite monoids. I^U_p sets, the T0
//! obstruction, and the finite rigidity that forces every T0 filter topology
//! to be discrete — which is why no finite monoid here is ever chiral.

use powderset::monoid::{
    all_monoids_up_to_iso, enumerate_left_congruences, filter_close, mask_points, FinMonoid,
    MonoidTopology,
};
use powderset::powder::{i_set, is_chiral, is_left_powder, is_right_powder};

fn main() {
    let m2 = FinMonoid::m2();
    let discrete = MonoidTopology::discrete(2);

    // I^{{e}}_1 over the discrete topology: only the identity keeps the row
    let u = 0b10; // the open set {e}
    let i = i_set(&m2, &discrete, u, 0).unwrap();
    println!("I^{{e}}_1 on m2 = {:?} (element indices)", mask_points(i, 2));

    for (name, tau) in [
        ("discrete", MonoidTopology::discrete(2)),
        ("indiscrete", MonoidTopology::indiscrete(2)),
    ] {
        println!(
            "m2 with {name}: left {:?}, right {:?}",
            is_left_powder(&m2, &tau),
            is_right_powder(&m2, &tau)
        );
    }

    // rigidity sweep: all monoids of size <= 3, all filter topologies
    let mut count = 0;
    let mut discrete_t0 = 0;
    for n in 1..=3 {
        for m in all_monoids_up_to_iso(n) {
            for seed in enumerate_left_congruences(&m) {
                let tau = MonoidTopology::from_filter(&filter_close(&m, &[seed]));
                assert_eq!(tau.is_t0(), tau.is_discrete());
                assert!(!is_chiral(&m, &tau));
                count += 1;
                if tau.is_t0() {
                    discrete_t0 += 1;
                }
            }
        }
    }
    println!(
        "swept {count} filter topologies over the 10 monoids of size <= 3: \
         T0 <=> discrete ({discrete_t0} discrete ones), none chiral"
    );
    println!("chirality therefore needs an infinite monoid; see chirality_window.rs");
}
