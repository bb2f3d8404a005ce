//! Inverse limits over open principal quotients, and left-completeness. In
//! the finite world the limit's threads biject with the blocks of the minimum
//! open congruence R0, so completeness holds exactly when R0 is the diagonal
//! — equivalently, when the topology was discrete all along.

use powderset::completion::{inverse_limit, is_left_complete, open_congruences};
use powderset::monoid::{filter_close, FinMonoid, LeftCongruence, MonoidTopology};

fn main() {
    let m2 = FinMonoid::m2();

    for (name, tau) in [
        ("discrete", MonoidTopology::discrete(2)),
        (
            "R0 = full",
            MonoidTopology::from_filter(&filter_close(&m2, &[LeftCongruence::full(2)])),
        ),
    ] {
        let open = open_congruences(&m2, &tau);
        let limit = inverse_limit(&m2, &open.all).unwrap();
        let report = is_left_complete(&m2, &tau).unwrap();
        println!(
            "m2 with {name}: {} open congruences, |L| = {}, {}",
            open.all.len(),
            limit.size(),
            report.diagnosis()
        );
        for t in &limit.threads {
            println!("   thread {t:?}");
        }
    }

    // threads always biject with M/R0: here R0 has 2 blocks on lz3
    let lz3 = FinMonoid::lz3();
    let seed = LeftCongruence::from_blocks(&lz3, &[0, 1, 1]).unwrap();
    let tau = MonoidTopology::from_filter(&filter_close(&lz3, &[seed]));
    let open = open_congruences(&lz3, &tau);
    let limit = inverse_limit(&lz3, &open.all).unwrap();
    println!(
        "lz3 with R0 = {{{{1}}, {{a, b}}}}: |L| = {} = blocks of R0 = {}",
        limit.size(),
        open.minimum.num_blocks()
    );
}
