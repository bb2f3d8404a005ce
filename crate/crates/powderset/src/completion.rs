//! Open left congruences of a topologised monoid, the inverse limit over its
//! principal quotients, and the left-completeness check.
//!
//! Finitely, every family of open left congruences has a minimum `R0`, so the
//! limit's threads are in canonical bijection with the blocks of `R0`; the
//! explicit thread enumeration here double-checks that against the shortcut.
//! The limit carries the quotient (discrete-on-blocks) topology.

use thiserror::Error;

use crate::monoid::{enumerate_left_congruences, FinMonoid, LeftCongruence, MonoidTopology};

#[derive(Debug, Error)]
pub enum CompletionError {
    #[error("the congruence family is empty")]
    EmptyFamily,
    #[error("family is not closed under intersection: members {i} and {j}")]
    NotIntersectionClosed { i: usize, j: usize },
    #[error("monoid of size {size} exceeds the inverse-limit cap {max}")]
    TooLarge { size: usize, max: usize },
}

pub const MAX_LIMIT_SIZE: usize = 64;

/// The open left congruences of `(M, tau)`: every left congruence whose
/// classes are all open. Their intersection `R0` is itself open, and a left
/// congruence is open exactly when it contains `R0`.
#[derive(Debug, Clone)]
pub struct OpenCongruences {
    pub all: Vec<LeftCongruence>,
    pub minimum: LeftCongruence,
}

pub fn open_congruences(m: &FinMonoid, tau: &MonoidTopology) -> OpenCongruences {
    let all: Vec<LeftCongruence> = enumerate_left_congruences(m)
        .into_iter()
        .filter(|r| tau.congruence_open(r))
        .collect();
    let minimum = all
        .iter()
        .fold(LeftCongruence::full(m.size()), |acc, r| acc.intersect(r));
    debug_assert!(
        all.contains(&minimum),
        "the intersection of open congruences has open classes"
    );
    debug_assert!(all.iter().all(|r| r.contains(&minimum)));
    OpenCongruences { all, minimum }
}

/// Explicit inverse limit of the quotients `M/R` over a directed family:
/// threads are block choices compatible with every quotient map
/// `M/R -> M/R'` for `R ⊆ R'`.
#[derive(Debug, Clone)]
pub struct InverseLimit {
    pub family: Vec<LeftCongruence>,
    /// Each thread assigns a block id to every family member, in family order.
    pub threads: Vec<Vec<usize>>,
    pub minimum: LeftCongruence,
}

impl InverseLimit {
    pub fn size(&self) -> usize {
        self.threads.len()
    }

    /// The constant thread of a monoid element.
    pub fn canonical_thread(&self, elt: usize) -> Vec<usize> {
        self.family.iter().map(|r| r.block(elt)).collect()
    }

    /// Coordinatewise product via first-element representatives. Its
    /// well-definedness is a property to test, not assumed.
    pub fn thread_product(&self, m: &FinMonoid, t: &[usize], s: &[usize]) -> Vec<usize> {
        self.family
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let x = r.classes()[t[i]][0];
                let y = r.classes()[s[i]][0];
                r.block(m.mul(x, y))
            })
            .collect()
    }
}

/// Witness that coordinatewise representative multiplication is ill defined:
/// `x` and `x2` share a block of `family[member]` but `x·y` and `x2·y` do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThreadProductWitness {
    pub member: usize,
    pub x: usize,
    pub x2: usize,
    pub y: usize,
}

/// Thread multiplication via representatives is well defined exactly when
/// every family member is also right-compatible (a two-sided congruence);
/// left compatibility already absorbs representative changes on the right
/// factor.
pub fn thread_product_well_defined(
    m: &FinMonoid,
    family: &[LeftCongruence],
) -> Result<(), ThreadProductWitness> {
    for (member, r) in family.iter().enumerate() {
        for x in m.elements() {
            for x2 in (x + 1)..m.size() {
                if !r.same(x, x2) {
                    continue;
                }
                for y in m.elements() {
                    if !r.same(m.mul(x, y), m.mul(x2, y)) {
                        return Err(ThreadProductWitness { member, x, x2, y });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Enumerate all compatible threads by backtracking over block choices.
pub fn inverse_limit(
    m: &FinMonoid,
    family: &[LeftCongruence],
) -> Result<InverseLimit, CompletionError> {
    if family.is_empty() {
        return Err(CompletionError::EmptyFamily);
    }
    if m.size() > MAX_LIMIT_SIZE {
        return Err(CompletionError::TooLarge {
            size: m.size(),
            max: MAX_LIMIT_SIZE,
        });
    }
    for (i, r) in family.iter().enumerate() {
        for (j, s) in family.iter().enumerate().skip(i + 1) {
            let inter = r.intersect(s);
            if !family.contains(&inter) {
                return Err(CompletionError::NotIntersectionClosed { i, j });
            }
        }
    }
    // containment[i][j]: family[i] ⊆ family[j], i.e. the quotient map
    // M/family[i] -> M/family[j] exists
    let n = family.len();
    let contained: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| family[j].contains(&family[i])).collect())
        .collect();
    let classes: Vec<Vec<Vec<usize>>> = family.iter().map(LeftCongruence::classes).collect();

    let mut threads = Vec::new();
    let mut choice: Vec<usize> = Vec::with_capacity(n);
    fn compatible(
        family: &[LeftCongruence],
        classes: &[Vec<Vec<usize>>],
        contained: &[Vec<bool>],
        choice: &[usize],
        next: usize,
        block: usize,
    ) -> bool {
        for (prev, &b_prev) in choice.iter().enumerate() {
            // quotient map from the finer to the coarser side must match
            if contained[prev][next] {
                let rep = classes[prev][b_prev][0];
                if family[next].block(rep) != block {
                    return false;
                }
            }
            if contained[next][prev] {
                let rep = classes[next][block][0];
                if family[prev].block(rep) != b_prev {
                    return false;
                }
            }
        }
        true
    }
    fn search(
        family: &[LeftCongruence],
        classes: &[Vec<Vec<usize>>],
        contained: &[Vec<bool>],
        choice: &mut Vec<usize>,
        threads: &mut Vec<Vec<usize>>,
    ) {
        let next = choice.len();
        if next == family.len() {
            threads.push(choice.clone());
            return;
        }
        for block in 0..family[next].num_blocks() {
            if compatible(family, classes, contained, choice, next, block) {
                choice.push(block);
                search(family, classes, contained, choice, threads);
                choice.pop();
            }
        }
    }
    search(family, &classes, &contained, &mut choice, &mut threads);
    threads.sort_unstable();

    let minimum = family
        .iter()
        .fold(LeftCongruence::full(m.size()), |acc, r| acc.intersect(r));
    Ok(InverseLimit {
        family: family.to_vec(),
        threads,
        minimum,
    })
}

/// Diagnosis of the canonical map `m -> ([m]_R)_R` into the inverse limit
/// over all open left congruences.
#[derive(Debug, Clone)]
pub struct CompletenessReport {
    pub r0: LeftCongruence,
    pub limit_size: usize,
    pub injective: bool,
    pub non_injective_witness: Option<(usize, usize)>,
    pub surjective: bool,
    /// The topology equals the one pulled back from the block-discrete limit
    /// (opens are exactly the unions of `R0`-classes).
    pub topology_matches: bool,
}

impl CompletenessReport {
    pub fn complete(&self) -> bool {
        self.injective && self.surjective && self.topology_matches
    }

    pub fn diagnosis(&self) -> String {
        if self.complete() {
            return "complete".to_string();
        }
        let mut reasons = Vec::new();
        if !self.injective {
            let (x, y) = self.non_injective_witness.expect("witness accompanies failure");
            reasons.push(format!("not injective: elements {x} and {y} share every open class"));
        }
        if !self.surjective {
            reasons.push("not surjective: a thread has no preimage".to_string());
        }
        if !self.topology_matches {
            reasons.push("topology differs from the quotient topology of R0".to_string());
        }
        reasons.join("; ")
    }
}

/// Left-completeness of `(M, tau)`: the canonical map to the inverse limit of
/// all open principal quotients must be bijective and a homeomorphism.
pub fn is_left_complete(
    m: &FinMonoid,
    tau: &MonoidTopology,
) -> Result<CompletenessReport, CompletionError> {
    let open = open_congruences(m, tau);
    let limit = inverse_limit(m, &open.all)?;
    let r0 = open.minimum.clone();

    let mut non_injective_witness = None;
    'outer: for x in m.elements() {
        for y in (x + 1)..m.size() {
            if limit.canonical_thread(x) == limit.canonical_thread(y) {
                non_injective_witness = Some((x, y));
                break 'outer;
            }
        }
    }
    let injective = non_injective_witness.is_none();
    debug_assert_eq!(injective, r0.is_diagonal());

    let surjective = limit
        .threads
        .iter()
        .all(|t| m.elements().any(|x| limit.canonical_thread(x) == *t));

    // pulled-back opens are unions of R0 classes
    let class_masks: Vec<crate::monoid::Mask> = r0
        .classes()
        .into_iter()
        .map(crate::monoid::mask_of)
        .collect();
    let pullback: std::collections::BTreeSet<crate::monoid::Mask> = (0..(1u64 << class_masks.len()))
        .map(|choice| {
            class_masks
                .iter()
                .enumerate()
                .filter(|(i, _)| choice & (1 << i) != 0)
                .fold(0, |acc, (_, &c)| acc | c)
        })
        .collect();
    let opens: std::collections::BTreeSet<crate::monoid::Mask> = tau.all_opens().into_iter().collect();
    let topology_matches = pullback == opens;

    Ok(CompletenessReport {
        r0,
        limit_size: limit.size(),
        injective,
        non_injective_witness,
        surjective,
        topology_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{filter_close, mask_of};

    #[test]
    fn open_congruence_examples() {
        let m2 = FinMonoid::m2();
        let open = open_congruences(&m2, &MonoidTopology::discrete(2));
        assert!(open.minimum.is_diagonal());
        assert_eq!(open.all.len(), 2); // diagonal and full

        let coarse = MonoidTopology::from_filter(&filter_close(&m2, &[LeftCongruence::full(2)]));
        let open = open_congruences(&m2, &coarse);
        assert!(open.minimum.is_full());
        assert_eq!(open.all.len(), 1);

        let t = FinMonoid::trivial();
        let open = open_congruences(&t, &MonoidTopology::discrete(1));
        assert_eq!(open.all.len(), 1);
    }

    #[test]
    fn open_iff_contains_minimum() {
        for m in [FinMonoid::m2(), FinMonoid::lz3()] {
            for seed in enumerate_left_congruences(&m) {
                let tau = MonoidTopology::from_filter(&filter_close(&m, &[seed]));
                let open = open_congruences(&m, &tau);
                for r in enumerate_left_congruences(&m) {
                    assert_eq!(open.all.contains(&r), r.contains(&open.minimum));
                }
            }
        }
    }

    #[test]
    fn limit_examples() {
        let m2 = FinMonoid::m2();
        // all congruences: threads determined by the diagonal coordinate
        let all = enumerate_left_congruences(&m2);
        let limit = inverse_limit(&m2, &all).unwrap();
        assert_eq!(limit.size(), 2);
        // single coarse congruence
        let limit = inverse_limit(&m2, &[LeftCongruence::full(2)]).unwrap();
        assert_eq!(limit.size(), 1);
        assert!(matches!(
            inverse_limit(&m2, &[]),
            Err(CompletionError::EmptyFamily)
        ));
    }

    #[test]
    fn limit_rejects_unclosed_families() {
        let z6 = FinMonoid::cyclic(6);
        let mod2 = LeftCongruence::from_blocks(&z6, &[0, 1, 0, 1, 0, 1]).unwrap();
        let mod3 = LeftCongruence::from_blocks(&z6, &[0, 1, 2, 0, 1, 2]).unwrap();
        assert!(matches!(
            inverse_limit(&z6, &[mod2, mod3]),
            Err(CompletionError::NotIntersectionClosed { .. })
        ));
    }

    #[test]
    fn threads_biject_with_minimum_blocks() {
        for m in [FinMonoid::m2(), FinMonoid::lz3(), FinMonoid::cyclic(4)] {
            let all = enumerate_left_congruences(&m);
            // family: every congruence containing a chosen seed's closure
            for seed in &all {
                let family: Vec<LeftCongruence> = all
                    .iter()
                    .filter(|r| r.contains(seed))
                    .cloned()
                    .collect();
                let limit = inverse_limit(&m, &family).unwrap();
                assert_eq!(limit.size(), limit.minimum.num_blocks());
                // every thread is a constant thread
                for t in &limit.threads {
                    assert!(m.elements().any(|x| limit.canonical_thread(x) == *t));
                }
            }
        }
    }

    #[test]
    fn canonical_map_is_homomorphism_when_products_are_well_defined() {
        for m in [
            FinMonoid::trivial(),
            FinMonoid::m2(),
            FinMonoid::cyclic(3),
            FinMonoid::lz3(),
            FinMonoid::full_transformation(2),
        ] {
            for seed in enumerate_left_congruences(&m) {
                let tau = MonoidTopology::from_filter(&filter_close(&m, &[seed]));
                let open = open_congruences(&m, &tau);
                if thread_product_well_defined(&m, &open.all).is_err() {
                    continue;
                }
                let limit = inverse_limit(&m, &open.all).unwrap();
                for x in m.elements() {
                    for y in m.elements() {
                        let lhs = limit.thread_product(
                            &m,
                            &limit.canonical_thread(x),
                            &limit.canonical_thread(y),
                        );
                        assert_eq!(lhs, limit.canonical_thread(m.mul(x, y)));
                    }
                }
            }
        }
    }

    #[test]
    fn thread_products_checked_not_assumed() {
        // two-sided everywhere on the commutative and lz3 examples
        for m in [FinMonoid::trivial(), FinMonoid::m2(), FinMonoid::cyclic(3), FinMonoid::lz3()] {
            let all = enumerate_left_congruences(&m);
            assert!(thread_product_well_defined(&m, &all).is_ok());
        }
        // the full transformation monoid carries left congruences that are
        // not right-compatible, so representative products go ill defined
        let t2 = FinMonoid::full_transformation(2);
        let all = enumerate_left_congruences(&t2);
        let witness = thread_product_well_defined(&t2, &all).unwrap_err();
        let r = &all[witness.member];
        assert!(r.same(witness.x, witness.x2));
        assert!(!r.same(t2.mul(witness.x, witness.y), t2.mul(witness.x2, witness.y)));
    }

    #[test]
    fn completeness_examples() {
        let m2 = FinMonoid::m2();
        let report = is_left_complete(&m2, &MonoidTopology::discrete(2)).unwrap();
        assert!(report.complete());
        assert_eq!(report.limit_size, 2);

        let coarse = MonoidTopology::from_filter(&filter_close(&m2, &[LeftCongruence::full(2)]));
        let report = is_left_complete(&m2, &coarse).unwrap();
        assert!(!report.complete());
        assert!(!report.injective);
        assert_eq!(report.non_injective_witness, Some((0, 1)));
        assert_eq!(report.limit_size, 1);
        assert!(report.diagnosis().contains("not injective"));

        let t = FinMonoid::trivial();
        assert!(is_left_complete(&t, &MonoidTopology::discrete(1)).unwrap().complete());
        assert!(is_left_complete(&t, &MonoidTopology::indiscrete(1)).unwrap().complete());
    }

    #[test]
    fn complete_iff_r0_diagonal_iff_discrete() {
        for m in [FinMonoid::m2(), FinMonoid::lz3(), FinMonoid::cyclic(3)] {
            for seed in enumerate_left_congruences(&m) {
                let tau = MonoidTopology::from_filter(&filter_close(&m, &[seed]));
                let report = is_left_complete(&m, &tau).unwrap();
                assert_eq!(report.complete(), report.r0.is_diagonal());
                assert_eq!(report.complete(), tau.is_discrete());
                assert_eq!(report.complete(), tau.is_t0());
            }
        }
    }

    #[test]
    fn sierpinski_topology_mismatch() {
        let m2 = FinMonoid::m2();
        let tau = MonoidTopology::from_basis(2, &[vec![0], vec![0, 1]]).unwrap();
        let report = is_left_complete(&m2, &tau).unwrap();
        assert!(!report.complete());
        assert!(!report.topology_matches);
        // note: {1} is open but is not a union of R0 = full classes
        assert!(report.r0.is_full());
        let _ = mask_of([0usize]);
    }
}
