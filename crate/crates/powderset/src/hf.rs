//! Hereditarily finite sets over a finite atom table.
//!
//! Nodes are interned in a [`Store`]: two handles are equal iff the trees they
//! stand for are structurally equal, so set equality is handle equality and
//! extensionality holds by construction. Atoms are exempt (they have no
//! elements and are pairwise distinct).
//!
//! Construction requires `&mut Store` and is single-threaded; a finished store
//! is immutable through `&Store` and safe to share read-only across threads.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use thiserror::Error;

/// Default ceiling on the number of interned nodes a universe build may need.
pub const DEFAULT_NODE_CAP: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum HfError {
    #[error("atom index {index} out of range (table has {count} atoms)")]
    AtomIndexOutOfRange { index: usize, count: usize },
    #[error("duplicate atom label `{0}`")]
    DuplicateAtomLabel(String),
    #[error("orbit modulus must be at least 1")]
    ZeroModulus,
    #[error(
        "universe cap exceeded: stratum {stratum} would contain {needed} nodes (cap {cap}); \
         lower the rank or raise the cap"
    )]
    CapExceeded { stratum: usize, needed: u128, cap: u64 },
    #[error("operation `{op}` needs a set, got atom `{atom}`")]
    AtomHasNoElements { op: &'static str, atom: String },
}

/// Finite table of atoms (urelements). Each atom may carry the modulus of its
/// ℤ-orbit, in which case the table also records which orbit and position the
/// atom occupies; plain atoms carry neither.
#[derive(Debug, Clone, Default)]
pub struct AtomTable {
    labels: Vec<String>,
    /// Per atom: `(orbit index, position, modulus)` when the atom belongs to a
    /// ℤ-orbit.
    orbits: Vec<Option<(usize, u64, u64)>>,
}

impl AtomTable {
    /// The empty table: pure-set mode, `A = {}`.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Plain atoms with the given labels.
    pub fn plain(labels: Vec<String>) -> Result<Self, HfError> {
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(HfError::DuplicateAtomLabel(l.clone()));
            }
        }
        let orbits = vec![None; labels.len()];
        Ok(Self { labels, orbits })
    }

    /// `count` plain atoms labelled `a`, `b`, ... (then `u26`, `u27`, ...).
    pub fn with_count(count: usize) -> Self {
        let labels = (0..count)
            .map(|i| {
                if i < 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("u{i}")
                }
            })
            .collect();
        let orbits = vec![None; count];
        Self { labels, orbits }
    }

    /// One full ℤ-orbit per entry of `moduli`: modulus `n` expands to `n`
    /// atoms, the positions `0..n` the shift action cycles through.
    pub fn from_orbit_moduli(moduli: &[u64]) -> Result<Self, HfError> {
        let mut labels = Vec::new();
        let mut orbits = Vec::new();
        let distinct = {
            let mut s = HashSet::new();
            moduli.iter().all(|m| s.insert(*m))
        };
        for (oi, &n) in moduli.iter().enumerate() {
            if n == 0 {
                return Err(HfError::ZeroModulus);
            }
            for p in 0..n {
                let label = if distinct {
                    format!("x{n}_{p}")
                } else {
                    format!("o{oi}x{n}_{p}")
                };
                labels.push(label);
                orbits.push(Some((oi, p, n)));
            }
        }
        Ok(Self { labels, orbits })
    }

    pub fn count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `(orbit, position, modulus)` for ℤ-orbit atoms.
    pub fn orbit_of(&self, index: usize) -> Option<(usize, u64, u64)> {
        self.orbits[index]
    }

    pub fn modulus_of(&self, index: usize) -> Option<u64> {
        self.orbits[index].map(|(_, _, n)| n)
    }

    /// Atom index for `(orbit, position)`, if such an atom exists.
    pub fn atom_at(&self, orbit: usize, position: u64) -> Option<usize> {
        self.orbits
            .iter()
            .position(|o| matches!(o, Some((oi, p, _)) if *oi == orbit && *p == position))
    }
}

/// Handle to an interned node. Equality is structural equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Atom(usize),
    /// Children strictly sorted under the canonical node order, no duplicates.
    Set(Vec<NodeId>),
}

/// Interning store for HF nodes.
pub struct Store {
    atoms: AtomTable,
    kinds: Vec<NodeKind>,
    ranks: Vec<u32>,
    interner: HashMap<NodeKind, NodeId>,
}

impl Store {
    pub fn new(atoms: AtomTable) -> Self {
        let mut store = Store {
            atoms,
            kinds: Vec::new(),
            ranks: Vec::new(),
            interner: HashMap::new(),
        };
        for i in 0..store.atoms.count() {
            store.intern(NodeKind::Atom(i), 0);
        }
        store
    }

    pub fn pure() -> Self {
        Self::new(AtomTable::empty())
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    fn intern(&mut self, kind: NodeKind, rank: u32) -> NodeId {
        if let Some(&id) = self.interner.get(&kind) {
            return id;
        }
        let id = NodeId(self.kinds.len() as u32);
        self.kinds.push(kind.clone());
        self.ranks.push(rank);
        self.interner.insert(kind, id);
        id
    }

    /// The interned node for atom `index`.
    pub fn atom(&self, index: usize) -> Result<NodeId, HfError> {
        if index < self.atoms.count() {
            // Atoms are interned first, in table order.
            Ok(NodeId(index as u32))
        } else {
            Err(HfError::AtomIndexOutOfRange {
                index,
                count: self.atoms.count(),
            })
        }
    }

    /// The set whose members are `children`, canonicalized (sorted, deduped).
    pub fn make_set(&mut self, children: &[NodeId]) -> NodeId {
        let mut cs = children.to_vec();
        cs.sort_by(|&a, &b| self.node_cmp(a, b));
        cs.dedup();
        let rank = 1 + cs.iter().map(|&c| self.rank(c)).max().unwrap_or(0);
        self.intern(NodeKind::Set(cs), rank)
    }

    pub fn empty_set(&mut self) -> NodeId {
        self.make_set(&[])
    }

    pub fn kind(&self, id: NodeId) -> &NodeKind {
        &self.kinds[id.index()]
    }

    pub fn is_atom(&self, id: NodeId) -> bool {
        matches!(self.kind(id), NodeKind::Atom(_))
    }

    pub fn atom_index(&self, id: NodeId) -> Option<usize> {
        match self.kind(id) {
            NodeKind::Atom(i) => Some(*i),
            NodeKind::Set(_) => None,
        }
    }

    /// Members of a set node; `None` for atoms.
    pub fn children(&self, id: NodeId) -> Option<&[NodeId]> {
        match self.kind(id) {
            NodeKind::Atom(_) => None,
            NodeKind::Set(cs) => Some(cs),
        }
    }

    /// Membership `elem ∈ set`; always false when `set` is an atom.
    pub fn has_member(&self, set: NodeId, elem: NodeId) -> bool {
        self.children(set).is_some_and(|cs| cs.contains(&elem))
    }

    /// Atoms rank 0; a set ranks one above its highest member (so `{} ` has
    /// rank 1). With this convention `x ∈ V_n(A)` iff `rank(x) <= n`.
    pub fn rank(&self, id: NodeId) -> u32 {
        self.ranks[id.index()]
    }

    /// Canonical total order: atoms before sets, atoms by index, sets
    /// lexicographically by their sorted child sequences.
    pub fn node_cmp(&self, a: NodeId, b: NodeId) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        match (self.kind(a), self.kind(b)) {
            (NodeKind::Atom(i), NodeKind::Atom(j)) => i.cmp(j),
            (NodeKind::Atom(_), NodeKind::Set(_)) => Ordering::Less,
            (NodeKind::Set(_), NodeKind::Atom(_)) => Ordering::Greater,
            (NodeKind::Set(xs), NodeKind::Set(ys)) => {
                for (&x, &y) in xs.iter().zip(ys.iter()) {
                    match self.node_cmp(x, y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                xs.len().cmp(&ys.len())
            }
        }
    }

    /// `{x} ∪ ⋃ tc(members of x)`, sorted canonically.
    pub fn transitive_closure(&self, id: NodeId) -> Vec<NodeId> {
        let mut seen = HashSet::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            if seen.insert(n) {
                if let Some(cs) = self.children(n) {
                    stack.extend_from_slice(cs);
                }
            }
        }
        let mut out: Vec<NodeId> = seen.into_iter().collect();
        out.sort_by(|&a, &b| self.node_cmp(a, b));
        out
    }

    /// `⋃ x`: members of members. Atoms and `{}` yield `{}`.
    pub fn union_members(&mut self, x: NodeId) -> NodeId {
        let mut elems = Vec::new();
        if let Some(cs) = self.children(x) {
            for &c in cs {
                if let Some(gs) = self.children(c) {
                    elems.extend_from_slice(gs);
                }
            }
        }
        self.make_set(&elems)
    }

    /// Unordered pair `{a, b}`.
    pub fn pair(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.make_set(&[a, b])
    }

    /// Kuratowski pair `{{a}, {a, b}}`.
    pub fn kuratowski(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let s = self.make_set(&[a]);
        let p = self.make_set(&[a, b]);
        self.make_set(&[s, p])
    }

    /// `a \ b`: members of `a` not in `b`. Atoms have no members, so an atom
    /// `a` yields `{}`.
    pub fn difference(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let elems: Vec<NodeId> = self
            .children(a)
            .map(|cs| {
                cs.iter()
                    .copied()
                    .filter(|&c| !self.has_member(b, c))
                    .collect()
            })
            .unwrap_or_default();
        self.make_set(&elems)
    }

    /// Cartesian product `a × b` as a set of Kuratowski pairs; empty when
    /// either side has no members.
    pub fn product(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let xs = self.children(a).map(<[NodeId]>::to_vec).unwrap_or_default();
        let ys = self.children(b).map(<[NodeId]>::to_vec).unwrap_or_default();
        let mut pairs = Vec::with_capacity(xs.len() * ys.len());
        for &x in &xs {
            for &y in &ys {
                pairs.push(self.kuratowski(x, y));
            }
        }
        self.make_set(&pairs)
    }

    /// Von Neumann ordinal `n = {0, 1, ..., n-1}`.
    pub fn ordinal(&mut self, n: u64) -> NodeId {
        let mut prev = Vec::new();
        let mut cur = self.make_set(&[]);
        for _ in 0..n {
            prev.push(cur);
            cur = self.make_set(&prev);
        }
        cur
    }

    /// The graph `{⟨key_i, value_i⟩}` as a set of Kuratowski pairs.
    pub fn code_function(&mut self, graph: &[(NodeId, NodeId)]) -> NodeId {
        let pairs: Vec<NodeId> = graph
            .iter()
            .map(|&(k, v)| self.kuratowski(k, v))
            .collect();
        self.make_set(&pairs)
    }

    /// Render a node: atom label, or `{m1, m2, ...}` in canonical order.
    pub fn display(&self, id: NodeId) -> String {
        match self.kind(id) {
            NodeKind::Atom(i) => self.atoms.label(*i).to_string(),
            NodeKind::Set(cs) => {
                let inner: Vec<String> = cs.iter().map(|&c| self.display(c)).collect();
                format!("{{{}}}", inner.join(", "))
            }
        }
    }
}

/// Strata `V_0(A) ⊆ V_1(A) ⊆ ... ⊆ V_n(A)` over a store's atoms. The top
/// stratum contains every node of the universe.
pub struct Universe {
    rank_bound: usize,
    strata: Vec<Vec<NodeId>>,
    members: HashSet<NodeId>,
}

impl Universe {
    pub fn rank_bound(&self) -> usize {
        self.rank_bound
    }

    pub fn stratum(&self, i: usize) -> &[NodeId] {
        &self.strata[i]
    }

    pub fn strata_sizes(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    /// Top stratum, sorted canonically; this is the whole universe.
    pub fn top(&self) -> &[NodeId] {
        &self.strata[self.rank_bound]
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.members.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.top().len()
    }

    pub fn is_empty(&self) -> bool {
        self.top().is_empty()
    }
}

/// Build `V_0(A), ..., V_n(A)` where `V_0 = A` and `V_{i+1} = A ∪ P(V_i)`.
/// Refuses (before enumerating) any stratum that would exceed `cap` nodes.
pub fn build_universe(store: &mut Store, n: usize, cap: u64) -> Result<Universe, HfError> {
    let atom_nodes: Vec<NodeId> = (0..store.atoms().count())
        .map(|i| store.atom(i).expect("atom indices in range"))
        .collect();
    let mut strata: Vec<Vec<NodeId>> = vec![atom_nodes.clone()];
    for i in 0..n {
        let prev = &strata[i];
        let needed: u128 = if prev.len() >= 64 {
            u128::MAX
        } else {
            (1u128 << prev.len()) + atom_nodes.len() as u128
        };
        if needed > u128::from(cap) {
            return Err(HfError::CapExceeded {
                stratum: i + 1,
                needed,
                cap,
            });
        }
        let prev = prev.clone();
        let mut next: Vec<NodeId> = atom_nodes.clone();
        // Subsets picked along the sorted stratum are already canonical.
        for mask in 0u64..(1u64 << prev.len()) {
            let subset: Vec<NodeId> = prev
                .iter()
                .enumerate()
                .filter(|(j, _)| mask & (1 << j) != 0)
                .map(|(_, &c)| c)
                .collect();
            next.push(store.make_set(&subset));
        }
        next.sort_by(|&a, &b| store.node_cmp(a, b));
        next.dedup();
        strata.push(next);
    }
    let members = strata[n].iter().copied().collect();
    Ok(Universe {
        rank_bound: n,
        strata,
        members,
    })
}
