//! First-order formulas over `∈` and `=`, evaluation on finite universes,
//! Δ0/Σn/Πn classification, embedding elementarity checks, and the finite
//! filter-agreement transfer check.
//!
//! Bounded quantifiers range over the members of an interpreted term. Ranked
//! quantifiers range over the top stratum of a designated finite universe, the
//! desk-scale surrogate for unbounded quantification, so Σn verdicts are
//! always relative to the universes supplied.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hf::{NodeId, Store, Universe};

#[derive(Debug, Error)]
pub enum LogicError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("constant `{0}` lies outside the universe")]
    ConstantOutsideUniverse(String),
    #[error("ranked quantifier needs a universe; formula is not Delta0")]
    RankedQuantifierWithoutUniverse,
    #[error("the recursive embedding is defined on pure sets; encountered atom `{0}`")]
    AtomInPureEmbedding(String),
    #[error("parameter sweep of {tuples} tuples exceeds the cap {cap}")]
    ParamCapExceeded { tuples: u128, cap: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Member(Term, Term),
    Equal(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `forall v in bound . body`
    BoundedAll {
        var: String,
        bound: Term,
        body: Box<Formula>,
    },
    /// `exists v in bound . body`
    BoundedEx {
        var: String,
        bound: Term,
        body: Box<Formula>,
    },
    /// `Forall v . body` — v ranges over a universe's top stratum
    RankedAll { var: String, body: Box<Formula> },
    /// `Exists v . body`
    RankedEx { var: String, body: Box<Formula> },
}

impl Formula {
    #[allow(clippy::should_implement_trait)] // constructor family: not/and/or/implies
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn ball(var: &str, bound: Term, body: Formula) -> Formula {
        Formula::BoundedAll {
            var: var.into(),
            bound,
            body: Box::new(body),
        }
    }
    pub fn bex(var: &str, bound: Term, body: Formula) -> Formula {
        Formula::BoundedEx {
            var: var.into(),
            bound,
            body: Box::new(body),
        }
    }
    pub fn rall(var: &str, body: Formula) -> Formula {
        Formula::RankedAll {
            var: var.into(),
            body: Box::new(body),
        }
    }
    pub fn rex(var: &str, body: Formula) -> Formula {
        Formula::RankedEx {
            var: var.into(),
            body: Box::new(body),
        }
    }
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        fn term(t: &Term, bound: &[String], out: &mut Vec<String>) {
            if let Term::Var(v) = t {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Member(a, b) | Formula::Equal(a, b) => {
                    term(a, bound, out);
                    term(b, bound, out);
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::BoundedAll { var, bound: t, body }
                | Formula::BoundedEx { var, bound: t, body } => {
                    term(t, bound, out);
                    bound.push(var.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
                Formula::RankedAll { var, body } | Formula::RankedEx { var, body } => {
                    bound.push(var.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Replace every constant by its image under `map`.
    pub fn map_constants(&self, map: &mut impl FnMut(NodeId) -> NodeId) -> Formula {
        let mt = |t: &Term, map: &mut dyn FnMut(NodeId) -> NodeId| match t {
            Term::Var(v) => Term::Var(v.clone()),
            Term::Const(n) => Term::Const(map(*n)),
        };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Member(a, b) => Formula::Member(mt(a, map), mt(b, map)),
            Formula::Equal(a, b) => Formula::Equal(mt(a, map), mt(b, map)),
            Formula::Not(g) => Formula::not(g.map_constants(map)),
            Formula::And(a, b) => Formula::and(a.map_constants(map), b.map_constants(map)),
            Formula::Or(a, b) => Formula::or(a.map_constants(map), b.map_constants(map)),
            Formula::Implies(a, b) => Formula::implies(a.map_constants(map), b.map_constants(map)),
            Formula::BoundedAll { var, bound, body } => Formula::BoundedAll {
                var: var.clone(),
                bound: mt(bound, map),
                body: Box::new(body.map_constants(map)),
            },
            Formula::BoundedEx { var, bound, body } => Formula::BoundedEx {
                var: var.clone(),
                bound: mt(bound, map),
                body: Box::new(body.map_constants(map)),
            },
            Formula::RankedAll { var, body } => Formula::RankedAll {
                var: var.clone(),
                body: Box::new(body.map_constants(map)),
            },
            Formula::RankedEx { var, body } => Formula::RankedEx {
                var: var.clone(),
                body: Box::new(body.map_constants(map)),
            },
        }
    }
}

/// Syntactic class in the ranked-quantifier hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaClass {
    Delta0,
    Sigma(u32),
    Pi(u32),
}

impl std::fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormulaClass::Delta0 => write!(f, "Delta0"),
            FormulaClass::Sigma(n) => write!(f, "Sigma{n}"),
            FormulaClass::Pi(n) => write!(f, "Pi{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quant {
    Ex,
    All,
}

fn flip_word(w: &[Quant]) -> Vec<Quant> {
    w.iter()
        .map(|q| match q {
            Quant::Ex => Quant::All,
            Quant::All => Quant::Ex,
        })
        .collect()
}

fn prepend(q: Quant, w: &[Quant]) -> Vec<Quant> {
    if w.first() == Some(&q) {
        w.to_vec()
    } else {
        let mut out = vec![q];
        out.extend_from_slice(w);
        out
    }
}

/// Shortest alternating block word containing both operands as subsequences;
/// ties resolved towards Sigma (leading existential block).
fn merge_words(a: &[Quant], b: &[Quant]) -> Vec<Quant> {
    if a.is_empty() {
        return b.to_vec();
    }
    if b.is_empty() {
        return a.to_vec();
    }
    let cost = |first: Quant| -> usize {
        let need = |w: &[Quant]| w.len() + usize::from(w[0] != first);
        need(a).max(need(b))
    };
    let (first, len) = if cost(Quant::Ex) <= cost(Quant::All) {
        (Quant::Ex, cost(Quant::Ex))
    } else {
        (Quant::All, cost(Quant::All))
    };
    let mut out = Vec::with_capacity(len);
    let mut q = first;
    for _ in 0..len {
        out.push(q);
        q = if q == Quant::Ex { Quant::All } else { Quant::Ex };
    }
    out
}

fn class_word(f: &Formula) -> Vec<Quant> {
    match f {
        Formula::True | Formula::False | Formula::Member(..) | Formula::Equal(..) => Vec::new(),
        Formula::Not(g) => flip_word(&class_word(g)),
        Formula::And(a, b) | Formula::Or(a, b) => merge_words(&class_word(a), &class_word(b)),
        Formula::Implies(a, b) => merge_words(&flip_word(&class_word(a)), &class_word(b)),
        // bounded quantifiers are transparent for the hierarchy
        Formula::BoundedAll { body, .. } | Formula::BoundedEx { body, .. } => class_word(body),
        Formula::RankedAll { body, .. } => prepend(Quant::All, &class_word(body)),
        Formula::RankedEx { body, .. } => prepend(Quant::Ex, &class_word(body)),
    }
}

/// Classify by prenex-normalising the ranked quantifiers (minimal interleaving
/// of block words, ties towards Sigma); Delta0 iff no ranked quantifier.
pub fn classify(f: &Formula) -> FormulaClass {
    let w = class_word(f);
    match w.first() {
        None => FormulaClass::Delta0,
        Some(Quant::Ex) => FormulaClass::Sigma(w.len() as u32),
        Some(Quant::All) => FormulaClass::Pi(w.len() as u32),
    }
}

struct Env {
    frames: Vec<(String, NodeId)>,
}

impl Env {
    fn from_assignment(assign: &HashMap<String, NodeId>) -> Env {
        let mut frames: Vec<(String, NodeId)> = assign.iter().map(|(k, &v)| (k.clone(), v)).collect();
        frames.sort_by(|a, b| a.0.cmp(&b.0));
        Env { frames }
    }
    fn lookup(&self, name: &str) -> Option<NodeId> {
        self.frames
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|&(_, v)| v)
    }
    fn push(&mut self, name: &str, value: NodeId) {
        self.frames.push((name.to_string(), value));
    }
    fn pop(&mut self) {
        self.frames.pop();
    }
}

fn resolve(
    store: &Store,
    universe: Option<&Universe>,
    env: &Env,
    t: &Term,
) -> Result<NodeId, LogicError> {
    match t {
        Term::Var(v) => env
            .lookup(v)
            .ok_or_else(|| LogicError::UnboundVariable(v.clone())),
        Term::Const(n) => {
            if let Some(u) = universe {
                if !u.contains(*n) {
                    return Err(LogicError::ConstantOutsideUniverse(store.display(*n)));
                }
            }
            Ok(*n)
        }
    }
}

fn eval_in(
    store: &Store,
    universe: Option<&Universe>,
    f: &Formula,
    env: &mut Env,
) -> Result<bool, LogicError> {
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Member(a, b) => {
            let x = resolve(store, universe, env, a)?;
            let y = resolve(store, universe, env, b)?;
            Ok(store.has_member(y, x))
        }
        Formula::Equal(a, b) => {
            Ok(resolve(store, universe, env, a)? == resolve(store, universe, env, b)?)
        }
        Formula::Not(g) => Ok(!eval_in(store, universe, g, env)?),
        Formula::And(a, b) => Ok(eval_in(store, universe, a, env)? && eval_in(store, universe, b, env)?),
        Formula::Or(a, b) => Ok(eval_in(store, universe, a, env)? || eval_in(store, universe, b, env)?),
        Formula::Implies(a, b) => {
            Ok(!eval_in(store, universe, a, env)? || eval_in(store, universe, b, env)?)
        }
        Formula::BoundedAll { var, bound, body } => {
            let b = resolve(store, universe, env, bound)?;
            let members = store.children(b).map(<[NodeId]>::to_vec).unwrap_or_default();
            for m in members {
                env.push(var, m);
                let holds = eval_in(store, universe, body, env)?;
                env.pop();
                if !holds {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::BoundedEx { var, bound, body } => {
            let b = resolve(store, universe, env, bound)?;
            let members = store.children(b).map(<[NodeId]>::to_vec).unwrap_or_default();
            for m in members {
                env.push(var, m);
                let holds = eval_in(store, universe, body, env)?;
                env.pop();
                if holds {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::RankedAll { var, body } => {
            let u = universe.ok_or(LogicError::RankedQuantifierWithoutUniverse)?;
            for &n in u.top() {
                env.push(var, n);
                let holds = eval_in(store, Some(u), body, env)?;
                env.pop();
                if !holds {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::RankedEx { var, body } => {
            let u = universe.ok_or(LogicError::RankedQuantifierWithoutUniverse)?;
            for &n in u.top() {
                env.push(var, n);
                let holds = eval_in(store, Some(u), body, env)?;
                env.pop();
                if holds {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Tarskian satisfaction over a universe: ranked quantifiers range over its
/// top stratum, constants must lie inside it.
pub fn eval(
    store: &Store,
    universe: &Universe,
    f: &Formula,
    assignment: &HashMap<String, NodeId>,
) -> Result<bool, LogicError> {
    let mut env = Env::from_assignment(assignment);
    eval_in(store, Some(universe), f, &mut env)
}

/// Satisfaction for Delta0 formulas, which never consult a universe.
pub fn eval_delta0(
    store: &Store,
    f: &Formula,
    assignment: &HashMap<String, NodeId>,
) -> Result<bool, LogicError> {
    let mut env = Env::from_assignment(assignment);
    eval_in(store, None, f, &mut env)
}

/// The recursive self-embedding `j(x) = {j(y) : y ∈ x} ∪ {{0, x}}` of the
/// pure universe, memoised; images are interned on demand, so the codomain is
/// the node store rather than a pre-built stratum.
#[derive(Default)]
pub struct HamkinsMap {
    memo: HashMap<NodeId, NodeId>,
}

impl HamkinsMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn apply(&mut self, store: &mut Store, x: NodeId) -> Result<NodeId, LogicError> {
        if let Some(&img) = self.memo.get(&x) {
            return Ok(img);
        }
        let children = match store.kind(x) {
            crate::hf::NodeKind::Atom(i) => {
                return Err(LogicError::AtomInPureEmbedding(
                    store.atoms().label(*i).to_string(),
                ))
            }
            crate::hf::NodeKind::Set(cs) => cs.clone(),
        };
        let mut images = Vec::with_capacity(children.len() + 1);
        for c in children {
            images.push(self.apply(store, c)?);
        }
        let zero = store.empty_set();
        let tag = store.pair(zero, x); // {0, x}
        images.push(tag);
        let img = store.make_set(&images);
        self.memo.insert(x, img);
        Ok(img)
    }
}

/// A structure map whose elementarity can be checked.
pub enum Embedding {
    Identity,
    Hamkins(HamkinsMap),
}

impl Embedding {
    pub fn hamkins() -> Self {
        Embedding::Hamkins(HamkinsMap::new())
    }

    pub fn apply(&mut self, store: &mut Store, x: NodeId) -> Result<NodeId, LogicError> {
        match self {
            Embedding::Identity => Ok(x),
            Embedding::Hamkins(h) => h.apply(store, x),
        }
    }
}

/// How parameter tuples are drawn from the domain universe.
#[derive(Debug, Clone)]
pub enum ParamStrategy {
    /// Every tuple from the domain's top stratum; errors beyond `cap` tuples.
    Exhaustive { cap: u64 },
    /// `samples` seeded draws; the seed is echoed in the report.
    Sampled { seed: u64, samples: u32 },
}

impl Default for ParamStrategy {
    fn default() -> Self {
        ParamStrategy::Exhaustive { cap: 1 << 20 }
    }
}

#[derive(Debug, Clone)]
pub struct ElementarityFailure {
    pub formula_index: usize,
    pub formula: Formula,
    pub params: Vec<(String, NodeId)>,
    pub holds_in_domain: bool,
    pub holds_in_codomain: bool,
}

#[derive(Debug, Clone)]
pub struct ElementarityReport {
    pub formulas_checked: usize,
    pub tuples_checked: u64,
    pub seed: Option<u64>,
    pub failure: Option<ElementarityFailure>,
}

impl ElementarityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// For each formula and parameter tuple, compare satisfaction in the domain
/// with satisfaction of the constant-and-parameter image in the codomain;
/// stops at the first preservation/reflection counterexample.
///
/// A `None` codomain evaluates image formulas absolutely and therefore
/// requires every formula to be Delta0.
pub fn check_preserves_reflects(
    store: &mut Store,
    emb: &mut Embedding,
    formulas: &[Formula],
    domain: &Universe,
    codomain: Option<&Universe>,
    strategy: &ParamStrategy,
) -> Result<ElementarityReport, LogicError> {
    let mut tuples_checked = 0u64;
    let seed = match strategy {
        ParamStrategy::Sampled { seed, .. } => Some(*seed),
        ParamStrategy::Exhaustive { .. } => None,
    };
    for (fi, f) in formulas.iter().enumerate() {
        if codomain.is_none() && classify(f) != FormulaClass::Delta0 {
            return Err(LogicError::RankedQuantifierWithoutUniverse);
        }
        let vars = f.free_vars();
        let domain_nodes = domain.top().to_vec();
        let image_formula = {
            let mut map_err = None;
            let mapped = f.map_constants(&mut |c| match emb.apply(store, c) {
                Ok(img) => img,
                Err(e) => {
                    map_err = Some(e);
                    c
                }
            });
            if let Some(e) = map_err {
                return Err(e);
            }
            mapped
        };
        let run_tuple =
            |store: &mut Store, emb: &mut Embedding, tuple: &[NodeId]| -> Result<Option<ElementarityFailure>, LogicError> {
                let mut assign = HashMap::new();
                let mut image_assign = HashMap::new();
                for (v, &n) in vars.iter().zip(tuple.iter()) {
                    assign.insert(v.clone(), n);
                    image_assign.insert(v.clone(), emb.apply(store, n)?);
                }
                let left = eval(store, domain, f, &assign)?;
                let right = match codomain {
                    Some(u) => eval(store, u, &image_formula, &image_assign)?,
                    None => eval_delta0(store, &image_formula, &image_assign)?,
                };
                if left != right {
                    Ok(Some(ElementarityFailure {
                        formula_index: fi,
                        formula: f.clone(),
                        params: vars
                            .iter()
                            .cloned()
                            .zip(tuple.iter().copied())
                            .collect(),
                        holds_in_domain: left,
                        holds_in_codomain: right,
                    }))
                } else {
                    Ok(None)
                }
            };
        match strategy {
            ParamStrategy::Exhaustive { cap } => {
                let total = (domain_nodes.len() as u128).pow(vars.len() as u32);
                if total > u128::from(*cap) {
                    return Err(LogicError::ParamCapExceeded { tuples: total, cap: *cap });
                }
                if !(domain_nodes.is_empty() && !vars.is_empty()) {
                    let mut idx = vec![0usize; vars.len()];
                    'tuples: loop {
                        let concrete: Vec<NodeId> = idx.iter().map(|&i| domain_nodes[i]).collect();
                        tuples_checked += 1;
                        if let Some(fail) = run_tuple(store, emb, &concrete)? {
                            return Ok(ElementarityReport {
                                formulas_checked: fi + 1,
                                tuples_checked,
                                seed,
                                failure: Some(fail),
                            });
                        }
                        let mut pos = 0;
                        loop {
                            if pos == idx.len() {
                                break 'tuples; // odometer wrapped
                            }
                            idx[pos] += 1;
                            if idx[pos] < domain_nodes.len() {
                                break;
                            }
                            idx[pos] = 0;
                            pos += 1;
                        }
                    }
                }
            }
            ParamStrategy::Sampled { seed, samples } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for _ in 0..*samples {
                    let concrete: Vec<NodeId> = (0..vars.len())
                        .map(|_| domain_nodes[rng.gen_range(0..domain_nodes.len())])
                        .collect();
                    tuples_checked += 1;
                    if let Some(fail) = run_tuple(store, emb, &concrete)? {
                        return Ok(ElementarityReport {
                            formulas_checked: fi + 1,
                            tuples_checked,
                            seed: Some(*seed),
                            failure: Some(fail),
                        });
                    }
                }
            }
        }
    }
    Ok(ElementarityReport {
        formulas_checked: formulas.len(),
        tuples_checked,
        seed,
        failure: None,
    })
}

/// Atomic formula family: `x in y`, `x = y`.
pub fn atomic_family() -> Vec<(String, Formula)> {
    vec![
        (
            "membership".into(),
            Formula::Member(Formula::var("x"), Formula::var("y")),
        ),
        (
            "equality".into(),
            Formula::Equal(Formula::var("x"), Formula::var("y")),
        ),
    ]
}

/// The shipped Delta0 family; `exactly_one_member` is the formula the
/// recursive self-embedding fails.
pub fn delta0_family() -> Vec<(String, Formula)> {
    let x = Formula::var("x");
    let y = Formula::var("y");
    vec![
        (
            "exactly_one_member".into(),
            Formula::bex(
                "m",
                x.clone(),
                Formula::ball(
                    "z",
                    x.clone(),
                    Formula::Equal(Formula::var("z"), Formula::var("m")),
                ),
            ),
        ),
        (
            "nonempty".into(),
            Formula::bex("m", x.clone(), Formula::True),
        ),
        (
            "all_members_empty".into(),
            Formula::ball(
                "m",
                x.clone(),
                Formula::ball("z", Formula::var("m"), Formula::False),
            ),
        ),
        (
            "subset".into(),
            Formula::ball(
                "m",
                x.clone(),
                Formula::Member(Formula::var("m"), y.clone()),
            ),
        ),
        (
            "has_empty_member".into(),
            Formula::bex(
                "m",
                x,
                Formula::ball("z", Formula::var("m"), Formula::False),
            ),
        ),
    ]
}

// ---------------------------------------------------------------------------
// Filter-agreement transfer at finite scale
// ---------------------------------------------------------------------------

/// A finite instance of the agreement-transfer situation: `f : X -> Y` with a
/// filter on `X` given by member generators, and two injective structure maps
/// defined on `X` and `Y` with values in an abstract codomain.
#[derive(Debug, Clone)]
pub struct TransferInstance {
    pub x_size: usize,
    pub y_size: usize,
    /// `f[x]` in `0..y_size`.
    pub f: Vec<usize>,
    /// Filter members generating by intersection and supersets.
    pub filter_generators: Vec<Vec<usize>>,
    pub j_x: Vec<u64>,
    pub j_y: Vec<u64>,
    pub k_x: Vec<u64>,
    pub k_y: Vec<u64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransferError {
    #[error("instance shapes are inconsistent: {0}")]
    Shape(String),
    #[error("the generators intersect to the empty set: not a proper filter")]
    NotAProperFilter,
    #[error("fibre of y={y} does not meet the filter base: not F-positive")]
    FibreNotPositive { y: usize },
    #[error("structure map {which} is not injective on X ∪ Y")]
    NotInjective { which: &'static str },
}

/// Which hypothesis of the transfer implication fails, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransferHypothesisFailure {
    /// `{x : j(x) = k(x)}` is not a filter member (misses a base point).
    AgreementNotLarge { missing_point: usize },
    /// The pointwise graph images of `f` differ; witness pair from one side.
    GraphsDiffer { pair: (u64, u64) },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransferOutcome {
    /// `j|_Y = k|_Y`, certified by an agreement point inside each fibre.
    Certified { witnesses: Vec<(usize, usize)> },
    /// A hypothesis fails; no conclusion is claimed.
    HypothesisFails(TransferHypothesisFailure),
    /// Hypotheses held but the conclusion failed (cannot happen for injective
    /// structure maps; reported rather than hidden).
    Refuted { y: usize },
}

impl TransferOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, TransferOutcome::Certified { .. })
    }
}

/// Verify the finite transfer implication: if `j` and `k` agree on a filter
/// member and `j(f) = k(f)` as pointwise-mapped graphs, then `j|_Y = k|_Y`.
pub fn agreement_transfer_check(inst: &TransferInstance) -> Result<TransferOutcome, TransferError> {
    let TransferInstance {
        x_size,
        y_size,
        f,
        filter_generators,
        j_x,
        j_y,
        k_x,
        k_y,
    } = inst;
    if f.len() != *x_size
        || j_x.len() != *x_size
        || k_x.len() != *x_size
        || j_y.len() != *y_size
        || k_y.len() != *y_size
    {
        return Err(TransferError::Shape("vector lengths disagree with sizes".into()));
    }
    if let Some(&bad) = f.iter().find(|&&y| y >= *y_size) {
        return Err(TransferError::Shape(format!("f value {bad} out of range")));
    }
    for g in filter_generators {
        if let Some(&bad) = g.iter().find(|&&x| x >= *x_size) {
            return Err(TransferError::Shape(format!("generator point {bad} out of range")));
        }
    }
    // base of the generated filter: intersection of the generators
    let mut base: Vec<usize> = (0..*x_size).collect();
    for g in filter_generators {
        base.retain(|x| g.contains(x));
    }
    if base.is_empty() {
        return Err(TransferError::NotAProperFilter);
    }
    for y in 0..*y_size {
        if !base.iter().any(|&x| f[x] == y) {
            return Err(TransferError::FibreNotPositive { y });
        }
    }
    for (which, xs, ys) in [("j", j_x, j_y), ("k", k_x, k_y)] {
        let mut all: Vec<u64> = xs.iter().chain(ys.iter()).copied().collect();
        all.sort_unstable();
        let before = all.len();
        all.dedup();
        if all.len() != before {
            return Err(TransferError::NotInjective { which });
        }
    }

    // hypothesis: agreement set contains the base
    if let Some(&x) = base.iter().find(|&&x| j_x[x] != k_x[x]) {
        return Ok(TransferOutcome::HypothesisFails(
            TransferHypothesisFailure::AgreementNotLarge { missing_point: x },
        ));
    }
    // hypothesis: j(f) = k(f) as graphs
    let graph = |xs: &[u64], ys: &[u64]| -> Vec<(u64, u64)> {
        let mut g: Vec<(u64, u64)> = (0..*x_size).map(|x| (xs[x], ys[f[x]])).collect();
        g.sort_unstable();
        g.dedup();
        g
    };
    let jf = graph(j_x, j_y);
    let kf = graph(k_x, k_y);
    if jf != kf {
        let pair = *jf
            .iter()
            .find(|p| !kf.contains(p))
            .or_else(|| kf.iter().find(|p| !jf.contains(p)))
            .expect("graphs differ on some pair");
        return Ok(TransferOutcome::HypothesisFails(
            TransferHypothesisFailure::GraphsDiffer { pair },
        ));
    }

    // conclusion, via the agreement point in each fibre
    let mut witnesses = Vec::with_capacity(*y_size);
    for y in 0..*y_size {
        let alpha = *base
            .iter()
            .find(|&&x| f[x] == y)
            .expect("fibres verified F-positive");
        if j_y[y] != k_y[y] {
            return Ok(TransferOutcome::Refuted { y });
        }
        witnesses.push((y, alpha));
    }
    Ok(TransferOutcome::Certified { witnesses })
}
