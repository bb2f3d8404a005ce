//! Acceptance suite: each test prints one PASS/FAIL line. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::HashMap;
use std::time::Instant;

use powderset::action::ActionTable;
use powderset::completion::{inverse_limit, is_left_complete, open_congruences};
use powderset::hf::{build_universe, AtomTable, NodeId, Store, DEFAULT_NODE_CAP};
use powderset::logic::{
    agreement_transfer_check, delta0_family, eval,
    eval_delta0, Formula, HamkinsMap, TransferError, TransferInstance,
    TransferOutcome,
};
use powderset::monoid::{
    all_monoids_up_to_iso, enumerate_left_congruences, filter_close, mask_contains, FinMonoid,
    MonoidTopology,
};
use powderset::powder::{
    chirality_criterion, generate_probes, i_set, is_chiral, is_left_powder, is_right_powder,
    verify_certificate, CriterionOutcome, WindowMonoid, DEFAULT_SEARCH_CAP,
};
use powderset::symcore::{godel_closure_check, levy_sequence_probe};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn criterion(name: &str, f: impl FnOnce() -> Result<String, String>) {
    match f() {
        Ok(detail) => println!("PASS {name}: {detail}"),
        Err(msg) => {
            println!("FAIL {name}: {msg}");
            panic!("acceptance criterion failed: {name}: {msg}");
        }
    }
}

fn shipped_monoids() -> Vec<FinMonoid> {
    vec![
        FinMonoid::trivial(),
        FinMonoid::m2(),
        FinMonoid::cyclic(2),
        FinMonoid::cyclic(3),
        FinMonoid::cyclic(4),
        FinMonoid::cyclic(6),
        FinMonoid::lz3(),
        FinMonoid::full_transformation(2),
    ]
}

fn commutative_monoids() -> Vec<FinMonoid> {
    shipped_monoids()
        .into_iter()
        .filter(FinMonoid::is_commutative)
        .collect()
}

/// All distinct filter-generated topologies of a small monoid: closures of
/// every subset of its left congruences.
fn filter_topologies(m: &FinMonoid) -> Vec<MonoidTopology> {
    let congs = enumerate_left_congruences(m);
    let mut seen_r0 = Vec::new();
    let mut out = Vec::new();
    for choice in 0u32..(1 << congs.len().min(12)) {
        let seeds: Vec<_> = congs
            .iter()
            .enumerate()
            .filter(|(i, _)| choice & (1 << i) != 0)
            .map(|(_, r)| r.clone())
            .collect();
        let filter = filter_close(m, &seeds);
        if !seen_r0.contains(filter.r0()) {
            seen_r0.push(filter.r0().clone());
            out.push(MonoidTopology::from_filter(&filter));
        }
    }
    out
}

#[test]
fn acceptance_1_hamkins_embedding() {
    criterion("1 hamkins embedding on V_4", || {
        let started = Instant::now();
        let mut store = Store::pure();
        let u = build_universe(&mut store, 4, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
        if u.len() != 16 {
            return Err(format!("V_4 has {} elements, expected 16", u.len()));
        }
        let mut j = HamkinsMap::new();
        let tops = u.top().to_vec();
        // injective, fixes no point
        let mut images = Vec::new();
        for &x in &tops {
            let jx = j.apply(&mut store, x).map_err(|e| e.to_string())?;
            if jx == x {
                return Err(format!("j fixes {}", store.display(x)));
            }
            if images.contains(&jx) {
                return Err("j is not injective on V_4".into());
            }
            images.push(jx);
        }
        // preserves and reflects atomic membership and equality on all pairs
        let mut pairs = 0;
        for &x in &tops {
            for &y in &tops {
                let jx = j.apply(&mut store, x).map_err(|e| e.to_string())?;
                let jy = j.apply(&mut store, y).map_err(|e| e.to_string())?;
                if store.has_member(y, x) != store.has_member(jy, jx) {
                    return Err("atomic membership not preserved/reflected".into());
                }
                if (x == y) != (jx == jy) {
                    return Err("atomic equality not preserved/reflected".into());
                }
                pairs += 1;
            }
        }
        if pairs != 256 {
            return Err(format!("checked {pairs} pairs, expected 256"));
        }
        // the explicit Delta0 failure: "exists y in x . forall z in x . z = y"
        // at x = {0}: true in the domain, false at j({0})
        let witness = delta0_family()
            .into_iter()
            .find(|(n, _)| n == "exactly_one_member")
            .map(|(_, f)| f)
            .ok_or("missing witness formula")?;
        let e = store.empty_set();
        let se = store.make_set(&[e]);
        let jse = j.apply(&mut store, se).map_err(|e| e.to_string())?;
        // j({0}) = {{{0}}, {0, {0}}} by direct computation
        let jje = {
            let sse = store.make_set(&[se]);
            let e_se = store.make_set(&[e, se]);
            store.make_set(&[sse, e_se])
        };
        if jse != jje {
            return Err("j({0}) differs from {{{0}}, {0,{0}}}".into());
        }
        let mut assign = HashMap::new();
        assign.insert("x".to_string(), se);
        let in_domain = eval(&store, &u, &witness, &assign).map_err(|e| e.to_string())?;
        assign.insert("x".to_string(), jse);
        let at_image = eval_delta0(&store, &witness, &assign).map_err(|e| e.to_string())?;
        if !(in_domain && !at_image) {
            return Err("one-element witness did not separate x={0} from j({0})".into());
        }
        let elapsed = started.elapsed();
        if elapsed.as_secs_f64() >= 1.0 {
            return Err(format!("took {} ms, budget is 1s", elapsed.as_millis()));
        }
        Ok(format!(
            "injective, fixpoint-free, atomic-elementary on 256 pairs; Delta0 fails at x={{0}}; {} ms",
            elapsed.as_millis()
        ))
    });
}

#[test]
fn acceptance_2_levy_probe() {
    criterion("2 levy probe k=1..6", || {
        let started = Instant::now();
        let expected = [1u64, 2, 6, 12, 60, 60];
        let mut moduli = Vec::new();
        for k in 1..=6u64 {
            let (_, _, report) = levy_sequence_probe(k).map_err(|e| e.to_string())?;
            if report.stabiliser_modulus != expected[(k - 1) as usize] {
                return Err(format!(
                    "k={k}: stabiliser {} expected {}",
                    report.stabiliser_modulus,
                    expected[(k - 1) as usize]
                ));
            }
            if !report.in_core {
                return Err(format!("k={k}: segment not certified inside the core"));
            }
            moduli.push(report.stabiliser_modulus);
        }
        // unbounded moduli: the distinct values form a strictly increasing run
        let mut distinct = moduli.clone();
        distinct.dedup();
        if !(distinct.windows(2).all(|p| p[0] < p[1]) && distinct.len() >= 5) {
            return Err(format!("moduli {moduli:?} do not increase strictly"));
        }
        let elapsed = started.elapsed();
        if elapsed.as_secs_f64() >= 5.0 {
            return Err(format!("took {} ms, budget is 5s", elapsed.as_millis()));
        }
        Ok(format!("stabilisers {moduli:?}; {} ms", elapsed.as_millis()))
    });
}

#[test]
fn acceptance_3_finite_rigidity_sweep() {
    criterion("3 finite rigidity sweep (size <= 3)", || {
        let started = Instant::now();
        let mut monoids = Vec::new();
        for n in 1..=3 {
            monoids.extend(all_monoids_up_to_iso(n));
        }
        if monoids.len() != 10 {
            return Err(format!("census {} monoids, expected 10", monoids.len()));
        }
        let mut topologies = 0usize;
        for m in &monoids {
            for tau in filter_topologies(m) {
                topologies += 1;
                if tau.is_t0() && !tau.is_discrete() {
                    return Err(format!(
                        "T0 filter topology on a {}-element monoid is not discrete",
                        m.size()
                    ));
                }
                if is_chiral(m, &tau) {
                    return Err(format!("{}-element monoid flagged chiral", m.size()));
                }
            }
        }
        let elapsed = started.elapsed();
        if elapsed.as_secs() >= 30 {
            return Err(format!("took {} ms, budget is 30s", elapsed.as_millis()));
        }
        Ok(format!(
            "10 monoids, {topologies} filter topologies: T0 <=> discrete, never chiral; {} ms",
            elapsed.as_millis()
        ))
    });
}

#[test]
fn acceptance_4_powder_laws() {
    criterion("4 powder laws", || {
        for m in shipped_monoids() {
            let tau = MonoidTopology::discrete(m.size());
            if !is_left_powder(&m, &tau).is_powder() || !is_right_powder(&m, &tau).is_powder() {
                return Err(format!(
                    "discrete {}-element monoid not two-sided powder",
                    m.size()
                ));
            }
        }
        let mut checked = 0usize;
        for m in commutative_monoids() {
            let mut taus = filter_topologies(&m);
            taus.push(MonoidTopology::indiscrete(m.size()));
            for tau in taus {
                if is_left_powder(&m, &tau) != is_right_powder(&m, &tau) {
                    return Err("commutative monoid with asymmetric powder verdicts".into());
                }
                checked += 1;
            }
        }
        // I^U_p always contains p
        for m in shipped_monoids() {
            for tau in [MonoidTopology::discrete(m.size())]
                .into_iter()
                .chain(filter_topologies(&m))
            {
                for u in tau.all_opens() {
                    for p in m.elements() {
                        let i = i_set(&m, &tau, u, p).map_err(|e| e.to_string())?;
                        if !mask_contains(i, p) {
                            return Err("I^U_p missed its base point".into());
                        }
                    }
                }
            }
        }
        Ok(format!(
            "discrete two-sided on 8 monoids; {checked} commutative topologies agree; I^U_p owns p"
        ))
    });
}

#[test]
fn acceptance_5_chirality_criterion_window_six() {
    criterion("5 chirality criterion on truncated N^N (w=6)", || {
        let started = Instant::now();
        let mw = WindowMonoid::new(6).map_err(|e| e.to_string())?;
        let a = mw.identity();
        let b = mw.clamped_doubling();
        let probes = generate_probes(&mw, 0, 20);
        if probes.len() < 20 {
            return Err("probe family smaller than 20".into());
        }
        let outcome = chirality_criterion(&mw, &a, &b, &probes, DEFAULT_SEARCH_CAP)
            .map_err(|e| e.to_string())?;
        let cert = match outcome {
            CriterionOutcome::Certificate(c) => c,
            other => return Err(format!("criterion did not certify: {other:?}")),
        };
        if cert.condition1_candidates != 46_656 {
            return Err(format!(
                "condition 1 searched {} candidates, expected 6^6 = 46656",
                cert.condition1_candidates
            ));
        }
        if cert.witnesses.len() < 20 {
            return Err("fewer than 20 probe witnesses".into());
        }
        if !verify_certificate(&cert, DEFAULT_SEARCH_CAP).map_err(|e| e.to_string())? {
            return Err("certificate re-verification failed".into());
        }
        let elapsed = started.elapsed();
        if elapsed.as_secs() >= 10 {
            return Err(format!("took {} ms, budget is 10s", elapsed.as_millis()));
        }
        Ok(format!(
            "46656 maps exhausted, {} witnesses, re-verified; {} ms",
            cert.witnesses.len(),
            elapsed.as_millis()
        ))
    });
}

#[test]
fn acceptance_6_completion() {
    criterion("6 inverse-limit completeness", || {
        let mut pairs_checked = 0usize;
        for m in shipped_monoids() {
            let mut taus = filter_topologies(&m);
            taus.push(MonoidTopology::discrete(m.size()));
            taus.push(MonoidTopology::indiscrete(m.size()));
            for tau in taus {
                let report = is_left_complete(&m, &tau).map_err(|e| e.to_string())?;
                if report.complete() != report.r0.is_diagonal() {
                    return Err("complete <=> (R0 = diagonal) violated".into());
                }
                let open = open_congruences(&m, &tau);
                let limit = inverse_limit(&m, &open.all).map_err(|e| e.to_string())?;
                if limit.size() != open.minimum.num_blocks() {
                    return Err("thread enumeration does not biject with M/R0".into());
                }
                pairs_checked += 1;
            }
        }
        // the pinned coarse example: M2 with R0 = full
        let m2 = FinMonoid::m2();
        let coarse = MonoidTopology::from_filter(&filter_close(
            &m2,
            &[powderset::monoid::LeftCongruence::full(2)],
        ));
        let report = is_left_complete(&m2, &coarse).map_err(|e| e.to_string())?;
        if report.limit_size != 1 || report.injective || report.complete() {
            return Err("M2 with R0 = full should give |L| = 1 and a non-injective map".into());
        }
        Ok(format!(
            "{pairs_checked} (M, tau) pairs: complete <=> R0 diagonal, threads ~ M/R0; M2 coarse case |L| = 1"
        ))
    });
}

#[test]
fn acceptance_7_godel_closure_kernel() {
    criterion("7 Godel-closure kernel on V_2(A)", || {
        let swap = ActionTable::new(
            FinMonoid::cyclic(2),
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .map_err(|e| e.to_string())?;
        let collapse = ActionTable::new(
            FinMonoid::m2(),
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![0, 0]],
        )
        .map_err(|e| e.to_string())?;
        let mut total_pairs = 0u64;
        for act in [swap, collapse] {
            let mut store = Store::new(AtomTable::with_count(2));
            let u = build_universe(&mut store, 2, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
            let nodes: Vec<NodeId> = u.top().to_vec();
            let report = godel_closure_check(&mut store, &act, &nodes, u.rank_bound() as u32)
                .map_err(|e| e.to_string())?;
            if !report.all_hold() {
                return Err(format!(
                    "inclusion failed: {:?}",
                    report.failures.first().map(|f| f.op)
                ));
            }
            if report.nodes_checked != 66 {
                return Err(format!("checked {} nodes, expected 66", report.nodes_checked));
            }
            total_pairs += report.pairs_checked;
        }
        Ok(format!(
            "union/pair/difference/product inclusions hold over {total_pairs} pairs (swap and collapse)"
        ))
    });
}

struct TransferCase {
    inst: TransferInstance,
    base: Vec<usize>,
}

fn valid_transfer_instance(rng: &mut ChaCha8Rng) -> TransferCase {
    let y_size = rng.gen_range(2..=4usize);
    let mut f = Vec::new();
    for y in 0..y_size {
        for _ in 0..rng.gen_range(1..=3usize) {
            f.push(y);
        }
    }
    f.shuffle(rng);
    let x_size = f.len();
    // transversal of the fibres, plus noise
    let mut base: Vec<usize> = (0..y_size)
        .map(|y| f.iter().position(|&v| v == y).expect("fibre nonempty"))
        .collect();
    for x in 0..x_size {
        if rng.gen_bool(0.3) && !base.contains(&x) {
            base.push(x);
        }
    }
    base.sort_unstable();
    // two generators whose intersection is the base
    let mut extra1: Vec<usize> = base.clone();
    let mut extra2: Vec<usize> = base.clone();
    for x in 0..x_size {
        if base.contains(&x) {
            continue;
        }
        if rng.gen_bool(0.5) {
            extra1.push(x);
        } else {
            extra2.push(x);
        }
    }
    let j_x: Vec<u64> = (0..x_size).map(|x| 100 + x as u64).collect();
    let j_y: Vec<u64> = (0..y_size).map(|y| 1000 + y as u64).collect();
    // k = j ∘ sigma for a fibre-preserving permutation fixing the base
    let mut sigma: Vec<usize> = (0..x_size).collect();
    for y in 0..y_size {
        let mut movable: Vec<usize> = (0..x_size)
            .filter(|&x| f[x] == y && !base.contains(&x))
            .collect();
        let mut shuffled = movable.clone();
        shuffled.shuffle(rng);
        while let (Some(from), Some(to)) = (movable.pop(), shuffled.pop()) {
            sigma[from] = to;
        }
    }
    let k_x: Vec<u64> = (0..x_size).map(|x| j_x[sigma[x]]).collect();
    let inst = TransferInstance {
        x_size,
        y_size,
        f,
        filter_generators: vec![extra1, extra2],
        j_x,
        j_y: j_y.clone(),
        k_x,
        k_y: j_y,
    };
    TransferCase { inst, base }
}

#[test]
fn acceptance_8_filter_transfer() {
    criterion("8 filter-agreement transfer (100 + 100 seeded cases)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for case in 0..100 {
            let TransferCase { inst, .. } = valid_transfer_instance(&mut rng);
            match agreement_transfer_check(&inst) {
                Ok(TransferOutcome::Certified { witnesses }) => {
                    if witnesses.len() != inst.y_size {
                        return Err(format!("case {case}: certificate misses fibres"));
                    }
                    for &(y, alpha) in &witnesses {
                        if inst.f[alpha] != y || inst.j_x[alpha] != inst.k_x[alpha] {
                            return Err(format!("case {case}: bogus witness"));
                        }
                    }
                }
                other => return Err(format!("case {case}: valid instance not certified: {other:?}")),
            }
        }
        for case in 0..100 {
            let TransferCase { mut inst, base } = valid_transfer_instance(&mut rng);
            let mutation = case % 4;
            match mutation {
                0 => inst.filter_generators = vec![vec![], (0..inst.x_size).collect()],
                1 => {
                    // starve the fibre of y = 0
                    for g in &mut inst.filter_generators {
                        g.retain(|&x| inst.f[x] != 0);
                    }
                }
                2 => {
                    let alpha = base[0];
                    inst.k_x[alpha] = 9_999; // disagree on a base point
                }
                _ => {
                    inst.k_y[0] = 8_888; // break graph equality
                }
            }
            let outcome = agreement_transfer_check(&inst);
            let fine = match (mutation, &outcome) {
                (0, Err(TransferError::NotAProperFilter)) => true,
                (1, Err(TransferError::FibreNotPositive { .. })) => true,
                (2, Ok(TransferOutcome::HypothesisFails(_))) => true,
                (3, Ok(TransferOutcome::HypothesisFails(_))) => true,
                _ => false,
            };
            if !fine {
                return Err(format!(
                    "mutated case {case} (mutation {mutation}) verdict {outcome:?}"
                ));
            }
            if matches!(outcome, Ok(TransferOutcome::Certified { .. })) {
                return Err(format!("mutated case {case} falsely certified"));
            }
        }
        Ok("100 valid certified; 100 mutated flagged, none falsely certified".into())
    });
}

// ---------------------------------------------------------------------------
// Criterion 9: oracle equivalence of the evaluator
// ---------------------------------------------------------------------------

/// Independent structural evaluator: sets as ordered trees, no interning.
mod naive {
    use super::*;
    use std::collections::BTreeSet;

    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
    pub enum Tree {
        Atom(usize),
        Set(BTreeSet<Tree>),
    }

    pub fn to_tree(store: &Store, id: NodeId) -> Tree {
        match store.children(id) {
            None => Tree::Atom(store.atom_index(id).expect("non-set is an atom")),
            Some(cs) => Tree::Set(cs.iter().map(|&c| to_tree(store, c)).collect()),
        }
    }

    fn term(
        t: &powderset::logic::Term,
        env: &[(String, Tree)],
        store: &Store,
    ) -> Result<Tree, String> {
        match t {
            powderset::logic::Term::Var(v) => env
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|(_, tree)| tree.clone())
                .ok_or_else(|| format!("unbound {v}")),
            powderset::logic::Term::Const(n) => Ok(to_tree(store, *n)),
        }
    }

    pub fn eval(
        f: &Formula,
        env: &mut Vec<(String, Tree)>,
        universe: &[Tree],
        store: &Store,
    ) -> Result<bool, String> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Member(a, b) => {
                let x = term(a, env, store)?;
                match term(b, env, store)? {
                    Tree::Atom(_) => false,
                    Tree::Set(members) => members.contains(&x),
                }
            }
            Formula::Equal(a, b) => term(a, env, store)? == term(b, env, store)?,
            Formula::Not(g) => !eval(g, env, universe, store)?,
            Formula::And(a, b) => {
                eval(a, env, universe, store)? && eval(b, env, universe, store)?
            }
            Formula::Or(a, b) => eval(a, env, universe, store)? || eval(b, env, universe, store)?,
            Formula::Implies(a, b) => {
                !eval(a, env, universe, store)? || eval(b, env, universe, store)?
            }
            Formula::BoundedAll { var, bound, body } | Formula::BoundedEx { var, bound, body } => {
                let members: Vec<Tree> = match term(bound, env, store)? {
                    Tree::Atom(_) => Vec::new(),
                    Tree::Set(ms) => ms.into_iter().collect(),
                };
                let forall = matches!(f, Formula::BoundedAll { .. });
                let mut acc = forall;
                for m in members {
                    env.push((var.clone(), m));
                    let v = eval(body, env, universe, store)?;
                    env.pop();
                    if forall && !v {
                        acc = false;
                        break;
                    }
                    if !forall && v {
                        acc = true;
                        break;
                    }
                }
                acc
            }
            Formula::RankedAll { var, body } | Formula::RankedEx { var, body } => {
                let forall = matches!(f, Formula::RankedAll { .. });
                let mut acc = forall;
                for t in universe {
                    env.push((var.clone(), t.clone()));
                    let v = eval(body, env, universe, store)?;
                    env.pop();
                    if forall && !v {
                        acc = false;
                        break;
                    }
                    if !forall && v {
                        acc = true;
                        break;
                    }
                }
                acc
            }
        })
    }
}

type UnaryCtor = Box<dyn Fn(Formula) -> Formula>;
type BinaryCtor = Box<dyn Fn(Formula, Formula) -> Formula>;

/// All formulas of AST depth 1..=depth over the given constructors.
fn enumerate_formulas(
    depth: usize,
    atoms: Vec<Formula>,
    unary: Vec<UnaryCtor>,
    binary: Vec<BinaryCtor>,
) -> Vec<Formula> {
    let mut all = atoms;
    let mut level_start = 0; // first index of the current deepest level
    for _ in 1..depth {
        let level_end = all.len();
        let mut level = Vec::new();
        for u in &unary {
            for f in &all[level_start..level_end] {
                level.push(u(f.clone()));
            }
        }
        for b in &binary {
            for li in 0..level_end {
                for ri in 0..level_end {
                    // at least one side must reach the previous depth
                    if li >= level_start || ri >= level_start {
                        level.push(b(all[li].clone(), all[ri].clone()));
                    }
                }
            }
        }
        level_start = level_end;
        all.extend(level);
    }
    all
}

fn oracle_sweep(formulas: &[Formula], store: &Store, u: &powderset::hf::Universe) -> Result<u64, String> {
    let nodes = u.top().to_vec();
    let trees: Vec<naive::Tree> = nodes.iter().map(|&n| naive::to_tree(store, n)).collect();
    let mut evals = 0u64;
    for f in formulas {
        let vars = f.free_vars();
        let mut idx = vec![0usize; vars.len()];
        loop {
            let mut assign = HashMap::new();
            let mut env = Vec::new();
            for (v, &i) in vars.iter().zip(idx.iter()) {
                assign.insert(v.clone(), nodes[i]);
                env.push((v.clone(), trees[i].clone()));
            }
            let fast = eval(store, u, f, &assign).map_err(|e| e.to_string())?;
            let slow = naive::eval(f, &mut env, &trees, store)?;
            evals += 1;
            if fast != slow {
                return Err(format!("evaluators disagree on {f:?} at {idx:?}"));
            }
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < nodes.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    Ok(evals)
}

#[test]
fn acceptance_9_evaluator_oracle_equivalence() {
    criterion("9 evaluator oracle equivalence over V_3", || {
        let mut store = Store::pure();
        let u = build_universe(&mut store, 3, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;

        // primary sweep, depth <= 4: membership/equality atoms, negation,
        // bounded-forall, ranked-exists, conjunction, implication
        let atoms = vec![
            Formula::Member(Formula::var("x"), Formula::var("y")),
            Formula::Equal(Formula::var("x"), Formula::var("y")),
        ];
        let unary: Vec<UnaryCtor> = vec![
            Box::new(Formula::not),
            Box::new(|f| Formula::ball("y", Formula::var("x"), f)),
            Box::new(|f| Formula::rex("y", f)),
        ];
        let binary: Vec<BinaryCtor> = vec![Box::new(Formula::and)];
        let primary = enumerate_formulas(4, atoms, unary, binary);

        // complementary sweep, depth <= 3: the remaining constructors
        let atoms = vec![
            Formula::True,
            Formula::False,
            Formula::Member(Formula::var("y"), Formula::var("x")),
        ];
        let unary: Vec<UnaryCtor> = vec![
            Box::new(Formula::not),
            Box::new(|f| Formula::bex("z", Formula::var("y"), f)),
            Box::new(|f| Formula::rall("v", f)),
        ];
        let binary: Vec<BinaryCtor> = vec![Box::new(Formula::or), Box::new(Formula::implies)];
        let secondary = enumerate_formulas(3, atoms, unary, binary);

        let n1 = oracle_sweep(&primary, &store, &u)?;
        let n2 = oracle_sweep(&secondary, &store, &u)?;
        Ok(format!(
            "{} depth-4 and {} depth-3 formulas, {} evaluations agree",
            primary.len(),
            secondary.len(),
            n1 + n2
        ))
    });
}
