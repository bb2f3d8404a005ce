//! Monoid actions on finite carriers and their recursive extension to HF
//! universes; stabiliser relations and continuity against a monoid topology.

use std::collections::HashMap;

use thiserror::Error;

use crate::hf::{NodeId, Store, Universe};
use crate::monoid::{mask_of, FinMonoid, LeftCongruence, MonoidTopology};

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("action table has {rows} rows for a monoid of size {size}")]
    RowCountMismatch { rows: usize, size: usize },
    #[error("row {row} has {len} entries for a carrier of size {points}")]
    RowLengthMismatch { row: usize, len: usize, points: usize },
    #[error("table entry ({row}, {col}) is {value}, out of range for carrier size {points}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        points: usize,
    },
    #[error("identity must act as the identity; it moves point {point}")]
    IdentityMoves { point: usize },
    #[error("not an action: ({m}*{n})·{x} differs from {m}·({n}·{x})")]
    NotCompatible { m: usize, n: usize, x: usize },
    #[error("carrier mismatch: action is on {expected} atoms, universe has {got}")]
    CarrierMismatch { expected: usize, got: usize },
}

/// Explicit finite action `M × X -> X`.
#[derive(Debug, Clone)]
pub struct ActionTable {
    monoid: FinMonoid,
    points: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl ActionTable {
    pub fn new(
        monoid: FinMonoid,
        points: Vec<String>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, ActionError> {
        let size = monoid.size();
        let npoints = points.len();
        if table.len() != size {
            return Err(ActionError::RowCountMismatch {
                rows: table.len(),
                size,
            });
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != npoints {
                return Err(ActionError::RowLengthMismatch {
                    row,
                    len: r.len(),
                    points: npoints,
                });
            }
            for (col, &v) in r.iter().enumerate() {
                if v >= npoints {
                    return Err(ActionError::EntryOutOfRange {
                        row,
                        col,
                        value: v,
                        points: npoints,
                    });
                }
            }
        }
        if let Some(x) = (0..npoints).find(|&x| table[monoid.identity()][x] != x) {
            return Err(ActionError::IdentityMoves { point: x });
        }
        for m in 0..size {
            for n in 0..size {
                for x in 0..npoints {
                    if table[monoid.mul(m, n)][x] != table[m][table[n][x]] {
                        return Err(ActionError::NotCompatible { m, n, x });
                    }
                }
            }
        }
        Ok(ActionTable {
            monoid,
            points,
            table,
        })
    }

    /// The trivial action of a monoid on a carrier (every element fixes
    /// every point).
    pub fn trivial(monoid: FinMonoid, points: Vec<String>) -> Self {
        let table = vec![(0..points.len()).collect(); monoid.size()];
        ActionTable {
            monoid,
            points,
            table,
        }
    }

    /// Left regular action of a monoid on itself.
    pub fn left_regular(monoid: FinMonoid) -> Self {
        let n = monoid.size();
        let points = monoid.labels().to_vec();
        let table = (0..n)
            .map(|m| (0..n).map(|x| monoid.mul(m, x)).collect())
            .collect();
        ActionTable {
            monoid,
            points,
            table,
        }
    }

    pub fn monoid(&self) -> &FinMonoid {
        &self.monoid
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn apply(&self, m: usize, x: usize) -> usize {
        self.table[m][x]
    }

    /// The stabiliser relation of `x`: elements grouped by where they send `x`.
    pub fn stab_rel(&self, x: usize) -> StabRel {
        let images: Vec<usize> = self.monoid.elements().map(|m| self.apply(m, x)).collect();
        let rel = partition_by_image(&self.monoid, &images);
        StabRel { point: x, rel }
    }

    /// The orbit `{m·x}` in first-visit order.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = Vec::new();
        for m in self.monoid.elements() {
            let y = self.apply(m, x);
            if !seen.contains(&y) {
                seen.push(y);
            }
        }
        seen
    }

    /// Continuity of the action against `tau`: every stabiliser relation must
    /// have open classes. On failure reports the offending point and class.
    pub fn continuity_check(&self, tau: &MonoidTopology) -> Result<(), ContinuityWitness> {
        for x in 0..self.num_points() {
            let stab = self.stab_rel(x);
            for class in stab.rel.classes() {
                if !tau.is_open(mask_of(class.iter().copied())) {
                    return Err(ContinuityWitness { point: x, class });
                }
            }
        }
        Ok(())
    }
}

/// Stabiliser relation `{(m, m') : m·x = m'·x}` of an action point.
#[derive(Debug, Clone)]
pub struct StabRel {
    pub point: usize,
    pub rel: LeftCongruence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityWitness {
    pub point: usize,
    pub class: Vec<usize>,
}

fn partition_by_image(monoid: &FinMonoid, images: &[usize]) -> LeftCongruence {
    let blocks: Vec<usize> = images.to_vec();
    let rel = LeftCongruence::from_blocks_unchecked(&blocks);
    debug_assert!(
        crate::monoid::is_left_congruence(monoid, &(0..rel.size()).map(|x| rel.block(x)).collect::<Vec<_>>()).is_ok(),
        "stabiliser relations are left congruences"
    );
    rel
}

/// Quotient action `M/R` of a monoid on the blocks of a left congruence:
/// `m · [x] = [m x]`, well defined by left compatibility.
pub fn principal_mset(monoid: &FinMonoid, r: &LeftCongruence) -> ActionTable {
    let classes = r.classes();
    let points: Vec<String> = classes
        .iter()
        .map(|c| format!("[{}]", monoid.label(c[0])))
        .collect();
    let table: Vec<Vec<usize>> = monoid
        .elements()
        .map(|m| classes.iter().map(|c| r.block(monoid.mul(m, c[0]))).collect())
        .collect();
    ActionTable::new(monoid.clone(), points, table).expect("quotient of a left congruence is an action")
}

/// Recursive extension of an atom-level action through the membership
/// structure: `m S = {m x : x ∈ S}`, canonicalized at every step.
pub struct ExtendedAction<'a> {
    atom_action: &'a ActionTable,
    memo: HashMap<(usize, NodeId), NodeId>,
}

impl<'a> ExtendedAction<'a> {
    /// `atom_action`'s carrier must be the store's atom table, point `i`
    /// standing for atom `i`.
    pub fn new(store: &Store, atom_action: &'a ActionTable) -> Result<Self, ActionError> {
        if atom_action.num_points() != store.atoms().count() {
            return Err(ActionError::CarrierMismatch {
                expected: atom_action.num_points(),
                got: store.atoms().count(),
            });
        }
        Ok(ExtendedAction {
            atom_action,
            memo: HashMap::new(),
        })
    }

    pub fn monoid(&self) -> &FinMonoid {
        self.atom_action.monoid()
    }

    /// Apply monoid element `m` to any interned node.
    pub fn apply(&mut self, store: &mut Store, m: usize, node: NodeId) -> NodeId {
        if let Some(&img) = self.memo.get(&(m, node)) {
            return img;
        }
        let img = match store.atom_index(node) {
            Some(i) => store
                .atom(self.atom_action.apply(m, i))
                .expect("atom actions stay within the atom table"),
            None => {
                let children = store.children(node).expect("non-atom is a set").to_vec();
                let images: Vec<NodeId> =
                    children.into_iter().map(|c| self.apply(store, m, c)).collect();
                store.make_set(&images)
            }
        };
        self.memo.insert((m, node), img);
        img
    }

    /// Stabiliser relation of an arbitrary node.
    pub fn stab_rel(&mut self, store: &mut Store, node: NodeId) -> LeftCongruence {
        let monoid = self.atom_action.monoid().clone();
        let images: Vec<NodeId> = monoid
            .elements()
            .map(|m| self.apply(store, m, node))
            .collect();
        let mut ids: Vec<usize> = Vec::with_capacity(images.len());
        let mut seen: Vec<NodeId> = Vec::new();
        for img in images {
            let id = seen.iter().position(|&s| s == img).unwrap_or_else(|| {
                seen.push(img);
                seen.len() - 1
            });
            ids.push(id);
        }
        partition_by_image(&monoid, &ids)
    }
}

/// An atom action materialised over every node of a universe.
pub struct UniverseAction {
    monoid: FinMonoid,
    nodes: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    table: Vec<Vec<usize>>,
}

/// Extend an atom-level action to every node of `universe`. Monoid endomaps of
/// atoms are allowed; images are recomputed through set canonicalization so
/// collapses are handled, and stay inside the universe.
pub fn extend_action(
    store: &mut Store,
    atom_action: &ActionTable,
    universe: &Universe,
) -> Result<UniverseAction, ActionError> {
    let mut ext = ExtendedAction::new(store, atom_action)?;
    let nodes: Vec<NodeId> = universe.top().to_vec();
    let index: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let monoid = atom_action.monoid().clone();
    let mut table = Vec::with_capacity(monoid.size());
    for m in monoid.elements() {
        let row: Vec<usize> = nodes
            .iter()
            .map(|&n| {
                let img = ext.apply(store, m, n);
                *index
                    .get(&img)
                    .expect("extended images of universe nodes stay in the universe")
            })
            .collect();
        table.push(row);
    }
    Ok(UniverseAction {
        monoid,
        nodes,
        index,
        table,
    })
}

impl UniverseAction {
    pub fn monoid(&self) -> &FinMonoid {
        &self.monoid
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn apply(&self, m: usize, node: NodeId) -> NodeId {
        let i = self.index[&node];
        self.nodes[self.table[m][i]]
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.index.contains_key(&node)
    }

    /// Stabiliser relation of a universe node.
    pub fn stab_rel(&self, node: NodeId) -> LeftCongruence {
        let i = self.index[&node];
        let images: Vec<usize> = self.monoid.elements().map(|m| self.table[m][i]).collect();
        partition_by_image(&self.monoid, &images)
    }

    /// View as a plain action table over node display strings.
    pub fn as_action_table(&self, store: &Store) -> ActionTable {
        let points: Vec<String> = self.nodes.iter().map(|&n| store.display(n)).collect();
        ActionTable::new(self.monoid.clone(), points, self.table.clone())
            .expect("a materialised universe action is lawful")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hf::{build_universe, AtomTable, DEFAULT_NODE_CAP};

    pub(crate) fn swap_action() -> ActionTable {
        ActionTable::new(
            FinMonoid::cyclic(2),
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap()
    }

    pub(crate) fn collapse_action() -> ActionTable {
        ActionTable::new(
            FinMonoid::m2(),
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![0, 0]],
        )
        .unwrap()
    }

    fn two_atom_store() -> Store {
        Store::new(AtomTable::plain(vec!["a".into(), "b".into()]).unwrap())
    }

    #[test]
    fn validation_rejects_non_actions() {
        let z2 = FinMonoid::cyclic(2);
        let bad_id = ActionTable::new(
            z2.clone(),
            vec!["p".into(), "q".into()],
            vec![vec![1, 0], vec![0, 1]],
        );
        assert!(matches!(bad_id, Err(ActionError::IdentityMoves { point: 0 })));
        // s·(s·x) must equal x for the z2 swap; constant row breaks it
        let bad = ActionTable::new(
            z2,
            vec!["p".into(), "q".into()],
            vec![vec![0, 1], vec![0, 0]],
        );
        assert!(matches!(bad, Err(ActionError::NotCompatible { .. })));
    }

    #[test]
    fn trivial_extension_is_identity() {
        let mut store = two_atom_store();
        let u = build_universe(&mut store, 2, DEFAULT_NODE_CAP).unwrap();
        let trivial = ActionTable::trivial(FinMonoid::trivial(), vec!["a".into(), "b".into()]);
        let ua = extend_action(&mut store, &trivial, &u).unwrap();
        for &n in u.top() {
            assert_eq!(ua.apply(0, n), n);
        }
    }

    #[test]
    fn swap_extension_example() {
        let mut store = two_atom_store();
        let u = build_universe(&mut store, 2, DEFAULT_NODE_CAP).unwrap();
        let ua = extend_action(&mut store, &swap_action(), &u).unwrap();
        let a = store.atom(0).unwrap();
        let b = store.atom(1).unwrap();
        let sb = store.make_set(&[b]);
        let x = store.make_set(&[a, sb]); // {a, {b}}
        let sa = store.make_set(&[a]);
        let expect = store.make_set(&[b, sa]); // {b, {a}}
        assert_eq!(ua.apply(1, x), expect);
    }

    #[test]
    fn collapse_extension_dedups() {
        let mut store = two_atom_store();
        let u = build_universe(&mut store, 1, DEFAULT_NODE_CAP).unwrap();
        let ua = extend_action(&mut store, &collapse_action(), &u).unwrap();
        let a = store.atom(0).unwrap();
        let b = store.atom(1).unwrap();
        let ab = store.make_set(&[a, b]);
        let sa = store.make_set(&[a]);
        assert_eq!(ua.apply(1, ab), sa);
    }

    #[test]
    fn carrier_mismatch_detected() {
        let mut store = Store::pure();
        let u = build_universe(&mut store, 1, DEFAULT_NODE_CAP).unwrap();
        assert!(matches!(
            extend_action(&mut store, &swap_action(), &u),
            Err(ActionError::CarrierMismatch { .. })
        ));
    }

    #[test]
    fn stab_rel_examples() {
        let collapse = collapse_action();
        // e sends b to a: r_a is full, r_b is the diagonal
        assert!(collapse.stab_rel(0).rel.is_full());
        assert!(collapse.stab_rel(1).rel.is_diagonal());
        // a global fixed point has full stabiliser relation
        let trivial = ActionTable::trivial(FinMonoid::m2(), vec!["p".into()]);
        assert!(trivial.stab_rel(0).rel.is_full());
        // free faithful action: left regular action of a group
        let reg = ActionTable::left_regular(FinMonoid::cyclic(3));
        for x in 0..3 {
            assert!(reg.stab_rel(x).rel.is_diagonal());
        }
    }

    #[test]
    fn stab_rels_are_left_congruences() {
        for act in [swap_action(), collapse_action(), ActionTable::left_regular(FinMonoid::lz3())] {
            for x in 0..act.num_points() {
                let rel = act.stab_rel(x).rel;
                let blocks: Vec<usize> = (0..rel.size()).map(|i| rel.block(i)).collect();
                assert!(crate::monoid::is_left_congruence(act.monoid(), &blocks).is_ok());
            }
        }
    }

    #[test]
    fn continuity_examples() {
        let collapse = collapse_action();
        let discrete = MonoidTopology::discrete(2);
        assert!(collapse.continuity_check(&discrete).is_ok());

        let full_filter = crate::monoid::filter_close(
            collapse.monoid(),
            &[crate::monoid::LeftCongruence::full(2)],
        );
        let indiscrete_like = MonoidTopology::from_filter(&full_filter);
        let err = collapse.continuity_check(&indiscrete_like).unwrap_err();
        assert_eq!(err.point, 1); // witness x = b

        let trivial = ActionTable::trivial(FinMonoid::m2(), vec!["p".into()]);
        assert!(trivial.continuity_check(&MonoidTopology::indiscrete(2)).is_ok());
    }

    #[test]
    fn principal_mset_examples() {
        let m2 = FinMonoid::m2();
        let reg = principal_mset(&m2, &LeftCongruence::diagonal(2));
        assert_eq!(reg.num_points(), 2);
        for m in 0..2 {
            for x in 0..2 {
                assert_eq!(reg.apply(m, x), m2.mul(m, x));
            }
        }
        let one = principal_mset(&m2, &LeftCongruence::full(2));
        assert_eq!(one.num_points(), 1);
        // M/full is continuous for the topology generated by R0 = full
        let tau = MonoidTopology::from_filter(&crate::monoid::filter_close(
            &m2,
            &[LeftCongruence::full(2)],
        ));
        assert!(one.continuity_check(&tau).is_ok());
    }

    #[test]
    fn principal_mset_of_stab_matches_orbit() {
        for act in [swap_action(), collapse_action()] {
            for x in 0..act.num_points() {
                let stab = act.stab_rel(x);
                let quotient = principal_mset(act.monoid(), &stab.rel);
                let orbit = act.orbit(x);
                assert_eq!(quotient.num_points(), orbit.len());
                // the map [m] -> m·x is an isomorphism of M-sets
                let classes = stab.rel.classes();
                let to_orbit: Vec<usize> = classes.iter().map(|c| act.apply(c[0], x)).collect();
                for m in act.monoid().elements() {
                    for (q, &_o) in to_orbit.iter().enumerate() {
                        let via_quotient = to_orbit[quotient.apply(m, q)];
                        let via_orbit = act.apply(m, to_orbit[q]);
                        assert_eq!(via_quotient, via_orbit);
                    }
                }
            }
        }
    }

    #[test]
    fn extension_respects_composition() {
        let mut store = two_atom_store();
        let u = build_universe(&mut store, 2, DEFAULT_NODE_CAP).unwrap();
        for act in [swap_action(), collapse_action()] {
            let ua = extend_action(&mut store, &act, &u).unwrap();
            let m = act.monoid();
            for g in m.elements() {
                for h in m.elements() {
                    for &n in u.top() {
                        assert_eq!(ua.apply(g, ua.apply(h, n)), ua.apply(m.mul(g, h), n));
                    }
                }
            }
        }
    }
}
