//! Symmetric core extraction, the symbolic ℤ action on orbit atoms, the
//! choice-sequence probe, and the stabiliser-inclusion kernel behind closure
//! under Gödel operations.
//!
//! The core of a universe under a topologised action keeps exactly the nodes
//! whose entire transitive closure has open stabiliser relations. Openness is
//! decided by a pluggable oracle: class-openness in a finite monoid topology,
//! or the symbolic rule for ℤ (`dℤ` is open for every `d >= 1`; the zero
//! subgroup is not, but cannot occur for finite nodes).

use std::collections::HashMap;

use thiserror::Error;

use crate::action::{ActionTable, ExtendedAction};
use crate::hf::{NodeId, Store, Universe};
use crate::monoid::{mask_of, LeftCongruence, MonoidTopology};

#[derive(Debug, Error)]
pub enum SymError {
    #[error("atom `{0}` carries no orbit modulus; the symbolic ℤ action is undefined on it")]
    AtomWithoutModulus(String),
    #[error("no atom at orbit {orbit} position {position}; orbit tables must be complete")]
    MissingOrbitAtom { orbit: usize, position: u64 },
    #[error("probe length {k} outside the supported range 1..={max}")]
    KOutOfRange { k: u64, max: u64 },
    #[error(transparent)]
    Action(#[from] crate::action::ActionError),
}

/// Decides openness of the stabiliser of a node.
pub trait StabOracle {
    fn stab_open(&mut self, store: &mut Store, node: NodeId) -> Result<bool, SymError>;
    /// Short rendering of the stabiliser for reports.
    fn describe(&mut self, store: &mut Store, node: NodeId) -> Result<String, SymError>;
}

/// Finite-monoid oracle: the stabiliser relation is open when all its classes
/// are open in the given topology.
pub struct FiniteStabOracle<'a> {
    ext: ExtendedAction<'a>,
    topology: &'a MonoidTopology,
}

impl<'a> FiniteStabOracle<'a> {
    pub fn new(
        store: &Store,
        atom_action: &'a ActionTable,
        topology: &'a MonoidTopology,
    ) -> Result<Self, SymError> {
        Ok(FiniteStabOracle {
            ext: ExtendedAction::new(store, atom_action)?,
            topology,
        })
    }

    pub fn stab_rel(&mut self, store: &mut Store, node: NodeId) -> LeftCongruence {
        self.ext.stab_rel(store, node)
    }
}

impl StabOracle for FiniteStabOracle<'_> {
    fn stab_open(&mut self, store: &mut Store, node: NodeId) -> Result<bool, SymError> {
        let rel = self.ext.stab_rel(store, node);
        Ok(rel
            .classes()
            .into_iter()
            .all(|c| self.topology.is_open(mask_of(c))))
    }

    fn describe(&mut self, store: &mut Store, node: NodeId) -> Result<String, SymError> {
        let rel = self.ext.stab_rel(store, node);
        Ok(format!("{} classes", rel.num_blocks()))
    }
}

/// Symbolic ℤ oracle: stabilisers of finite nodes are `dℤ` with `d >= 1`,
/// always open in the arithmetic-progression topology.
pub struct SymbolicZOracle;

impl StabOracle for SymbolicZOracle {
    fn stab_open(&mut self, store: &mut Store, node: NodeId) -> Result<bool, SymError> {
        Ok(z_stabiliser(store, node)?.is_open())
    }

    fn describe(&mut self, store: &mut Store, node: NodeId) -> Result<String, SymError> {
        Ok(z_stabiliser(store, node)?.to_string())
    }
}

/// A node shut out of the core, with the smallest (canonical order) member of
/// its transitive closure whose stabiliser is not open.
#[derive(Debug, Clone)]
pub struct Exclusion {
    pub node: NodeId,
    pub witness: NodeId,
}

#[derive(Debug, Clone)]
pub struct CoreReport {
    pub members: Vec<NodeId>,
    pub excluded: Vec<Exclusion>,
}

impl CoreReport {
    pub fn is_member(&self, node: NodeId) -> bool {
        self.members.contains(&node)
    }
}

/// The symmetric core of `universe`: nodes whose whole transitive closure has
/// open stabilisers according to the oracle. Exclusion witnesses are the
/// smallest failing nodes in canonical order.
pub fn symmetric_core(
    store: &mut Store,
    universe: &Universe,
    oracle: &mut dyn StabOracle,
) -> Result<CoreReport, SymError> {
    let mut open_memo: HashMap<NodeId, bool> = HashMap::new();
    let mut members = Vec::new();
    let mut excluded = Vec::new();
    for &x in universe.top() {
        let mut witness = None;
        for y in store.transitive_closure(x) {
            let open = match open_memo.get(&y) {
                Some(&o) => o,
                None => {
                    let o = oracle.stab_open(store, y)?;
                    open_memo.insert(y, o);
                    o
                }
            };
            if !open {
                witness = Some(y);
                break; // transitive closure is canonically sorted: first hit is smallest
            }
        }
        match witness {
            None => members.push(x),
            Some(w) => excluded.push(Exclusion { node: x, witness: w }),
        }
    }
    let report = CoreReport { members, excluded };
    debug_assert!(core_is_transitive(store, &report));
    Ok(report)
}

/// Every member's members are members: the core is a transitive class.
pub fn core_is_transitive(store: &Store, report: &CoreReport) -> bool {
    report.members.iter().all(|&x| {
        store
            .children(x)
            .map(|cs| cs.iter().all(|c| report.members.contains(c)))
            .unwrap_or(true)
    })
}

// ---------------------------------------------------------------------------
// Symbolic ℤ action
// ---------------------------------------------------------------------------

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Subgroup `dℤ` of the formal group ℤ, by its marker `d`. The arithmetic
/// progression topology makes `dℤ` open for every `d >= 1`; the marker `0`
/// stands for the zero subgroup, which is not open.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZSubgroup(pub u64);

impl ZSubgroup {
    /// `dℤ ∩ eℤ = lcm(d, e)ℤ`.
    pub fn intersect(self, other: ZSubgroup) -> ZSubgroup {
        ZSubgroup(lcm(self.0, other.0))
    }

    pub fn is_open(self) -> bool {
        self.0 >= 1
    }

    pub fn modulus(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for ZSubgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            0 => write!(f, "{{0}}"),
            1 => write!(f, "Z"),
            d => write!(f, "{d}Z"),
        }
    }
}

/// Apply the shift `g` to a node over orbit atoms: atom `(orbit, p)` moves to
/// `(orbit, (p + g) mod modulus)`, sets recursively.
pub fn z_apply(store: &mut Store, g: u64, node: NodeId) -> Result<NodeId, SymError> {
    match store.atom_index(node) {
        Some(i) => {
            let (orbit, p, n) = store
                .atoms()
                .orbit_of(i)
                .ok_or_else(|| SymError::AtomWithoutModulus(store.atoms().label(i).to_string()))?;
            let np = (p + g % n) % n;
            let idx = store
                .atoms()
                .atom_at(orbit, np)
                .ok_or(SymError::MissingOrbitAtom { orbit, position: np })?;
            Ok(store.atom(idx).expect("atom_at returns valid indices"))
        }
        None => {
            let children = store.children(node).expect("non-atom is a set").to_vec();
            let mut images = Vec::with_capacity(children.len());
            for c in children {
                images.push(z_apply(store, g, c)?);
            }
            Ok(store.make_set(&images))
        }
    }
}

/// Moduli of the orbit atoms in the transitive closure of `node`.
fn closure_moduli(store: &Store, node: NodeId) -> Result<Vec<u64>, SymError> {
    let mut moduli = Vec::new();
    for y in store.transitive_closure(node) {
        if let Some(i) = store.atom_index(y) {
            let (_, _, n) = store
                .atoms()
                .orbit_of(i)
                .ok_or_else(|| SymError::AtomWithoutModulus(store.atoms().label(i).to_string()))?;
            if !moduli.contains(&n) {
                moduli.push(n);
            }
        }
    }
    Ok(moduli)
}

/// The exact setwise ℤ-stabiliser of a node: `dℤ` for the least divisor `d`
/// of `L = lcm(moduli in trcl)` with `d·x = x`. Finite nodes always yield an
/// open subgroup (`d >= 1`).
pub fn z_stabiliser(store: &mut Store, node: NodeId) -> Result<ZSubgroup, SymError> {
    let l = closure_moduli(store, node)?
        .into_iter()
        .fold(1u64, lcm);
    let mut divisors: Vec<u64> = (1..=l).filter(|d| l % d == 0).collect();
    divisors.sort_unstable();
    for d in divisors {
        if z_apply(store, d, node)? == node {
            return Ok(ZSubgroup(d));
        }
    }
    unreachable!("L itself fixes every node over its closure moduli");
}

// ---------------------------------------------------------------------------
// Choice-sequence probe
// ---------------------------------------------------------------------------

/// Finite initial segment of the choice sequence over orbits with moduli
/// `1..=k`, coded as a Kuratowski function on the finite ordinals.
#[derive(Debug, Clone)]
pub struct LevyReport {
    pub k: u64,
    /// `(prefix length i, stabiliser modulus of the length-i segment)`.
    pub prefix_moduli: Vec<(u64, u64)>,
    /// Stabiliser modulus of the full segment; equals `lcm(1..=k)`.
    pub stabiliser_modulus: u64,
    /// Every member of the segment's transitive closure had an open (`d >= 1`)
    /// stabiliser.
    pub in_core: bool,
    /// Nodes of the transitive closure inspected for the core certificate.
    pub closure_nodes_checked: usize,
    /// The distinct prefix moduli grow strictly: the finite-level witness that
    /// the whole sequence's stabiliser `⋂ nℤ = {0}` is not open.
    pub moduli_strictly_increase: bool,
}

pub const MAX_LEVY_K: u64 = 24;

/// Build the length-`k` segment and report its stabiliser arithmetic. Returns
/// the store (with orbit atoms for moduli `1..=k`) alongside the report so
/// callers can render nodes.
pub fn levy_sequence_probe(k: u64) -> Result<(Store, NodeId, LevyReport), SymError> {
    if k == 0 || k > MAX_LEVY_K {
        return Err(SymError::KOutOfRange { k, max: MAX_LEVY_K });
    }
    let moduli: Vec<u64> = (1..=k).collect();
    let table = crate::hf::AtomTable::from_orbit_moduli(&moduli)
        .expect("positive moduli build a valid table");
    let mut store = Store::new(table);
    let mut graph: Vec<(NodeId, NodeId)> = Vec::with_capacity(k as usize);
    let mut prefix_moduli = Vec::with_capacity(k as usize);
    let mut segment = store.empty_set();
    for i in 1..=k {
        let ordinal = store.ordinal(i - 1);
        let atom_idx = store
            .atoms()
            .atom_at((i - 1) as usize, 0)
            .expect("orbit tables are complete");
        let x_i = store.atom(atom_idx).expect("valid atom index");
        graph.push((ordinal, x_i));
        segment = store.code_function(&graph);
        prefix_moduli.push((i, z_stabiliser(&mut store, segment)?.modulus()));
    }
    let stabiliser_modulus = prefix_moduli.last().expect("k >= 1").1;

    let closure = store.transitive_closure(segment);
    let mut in_core = true;
    for &y in &closure {
        if !z_stabiliser(&mut store, y)?.is_open() {
            in_core = false;
        }
    }
    let distinct: Vec<u64> = {
        let mut seen = Vec::new();
        for &(_, m) in &prefix_moduli {
            if seen.last() != Some(&m) {
                seen.push(m);
            }
        }
        seen
    };
    let moduli_strictly_increase = distinct.windows(2).all(|p| p[0] < p[1]) && distinct.len() > 1
        || (k == 1 && distinct.len() == 1);
    let report = LevyReport {
        k,
        prefix_moduli,
        stabiliser_modulus,
        in_core,
        closure_nodes_checked: closure.len(),
        moduli_strictly_increase,
    };
    Ok((store, segment, report))
}

// ---------------------------------------------------------------------------
// Gödel-operation closure kernel
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GodelOp {
    Union,
    Pair,
    Difference,
    Product,
}

impl std::fmt::Display for GodelOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GodelOp::Union => "union",
            GodelOp::Pair => "pair",
            GodelOp::Difference => "difference",
            GodelOp::Product => "product",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct GodelFailure {
    pub op: GodelOp,
    pub a: NodeId,
    pub b: Option<NodeId>,
    pub result: NodeId,
    /// Monoid pair related by the operand stabilisers but not by the result's.
    pub witness: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct GodelReport {
    pub nodes_checked: usize,
    pub pairs_checked: u64,
    /// Results whose rank exceeds the universe bound: the inclusion is still
    /// checked but the in-universe closure conclusion is not drawn.
    pub rank_overflow_skips: u64,
    pub failures: Vec<GodelFailure>,
}

impl GodelReport {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

fn inclusion_witness(
    sub: &LeftCongruence,
    sup: &LeftCongruence,
) -> Option<(usize, usize)> {
    let n = sub.size();
    for m in 0..n {
        for m2 in (m + 1)..n {
            if sub.same(m, m2) && !sup.same(m, m2) {
                return Some((m, m2));
            }
        }
    }
    None
}

/// Verify the stabiliser inclusions `𝔯_a ⊆ 𝔯_{⋃a}` and
/// `𝔯_a ∩ 𝔯_b ⊆ 𝔯_{{a,b}}, 𝔯_{a∖b}, 𝔯_{a×b}` over the given nodes.
/// These hold for group actions and idempotent collapses; the report carries
/// concrete witnesses when an action violates one.
pub fn godel_closure_check(
    store: &mut Store,
    atom_action: &ActionTable,
    nodes: &[NodeId],
    rank_bound: u32,
) -> Result<GodelReport, SymError> {
    let mut ext = ExtendedAction::new(store, atom_action)?;
    let mut failures = Vec::new();
    let mut pairs_checked = 0u64;
    let mut rank_overflow_skips = 0u64;
    let mut stab: HashMap<NodeId, LeftCongruence> = HashMap::new();
    let mut stab_of = |store: &mut Store, ext: &mut ExtendedAction, n: NodeId| -> LeftCongruence {
        if let Some(r) = stab.get(&n) {
            return r.clone();
        }
        let r = ext.stab_rel(store, n);
        stab.insert(n, r.clone());
        r
    };

    for &a in nodes {
        let ra = stab_of(store, &mut ext, a);
        let ua = store.union_members(a);
        if store.rank(ua) > rank_bound {
            rank_overflow_skips += 1;
        }
        let rua = stab_of(store, &mut ext, ua);
        if let Some(witness) = inclusion_witness(&ra, &rua) {
            failures.push(GodelFailure {
                op: GodelOp::Union,
                a,
                b: None,
                result: ua,
                witness,
            });
        }
        for &b in nodes {
            pairs_checked += 1;
            let rb = stab_of(store, &mut ext, b);
            let rab = ra.intersect(&rb);
            let ops = [
                (GodelOp::Pair, store.pair(a, b)),
                (GodelOp::Difference, store.difference(a, b)),
                (GodelOp::Product, store.product(a, b)),
            ];
            for (op, result) in ops {
                if store.rank(result) > rank_bound {
                    rank_overflow_skips += 1;
                }
                let rres = stab_of(store, &mut ext, result);
                if let Some(witness) = inclusion_witness(&rab, &rres) {
                    failures.push(GodelFailure {
                        op,
                        a,
                        b: Some(b),
                        result,
                        witness,
                    });
                }
            }
        }
    }
    Ok(GodelReport {
        nodes_checked: nodes.len(),
        pairs_checked,
        rank_overflow_skips,
        failures,
    })
}
