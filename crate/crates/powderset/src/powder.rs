//! Left/right powder checks on finite topologised monoids, and the chirality
//! criterion on window-truncated function monoids.
//!
//! A monoid is left powder when it is T0 and some clopen basis has every
//! `I^U_p = {q : {r : rq ∈ U} = {r : rp ∈ U}}` open; right powder means the
//! opposite monoid is left powder under the same topology. A chiral monoid is
//! left powder but not right powder. No finite monoid with a filter-generated
//! topology is chiral, so the chirality evidence lives on window truncations
//! of the function monoid on the naturals.

use thiserror::Error;

use crate::monoid::{mask_contains, mask_of, FinMonoid, Mask, MonoidTopology};

#[derive(Debug, Error)]
pub enum PowderError {
    #[error("the set {set:#b} is not open in the given topology")]
    NotOpen { set: Mask },
    #[error("window {w} needs {needed} candidate maps, over the search cap {cap}")]
    WindowTooLarge { w: usize, needed: u128, cap: u64 },
    #[error("window map value {value} outside window of size {w}")]
    MapOutOfWindow { value: usize, w: usize },
    #[error("map has {len} entries for window of size {w}")]
    MapLengthMismatch { len: usize, w: usize },
    #[error("probe point {value} outside window of size {w}")]
    ProbeOutOfWindow { value: usize, w: usize },
    #[error("window sizes must be strictly increasing and at least 1")]
    BadLevelSequence,
}

/// `I^U_p = {q : {r : rq ∈ U} = {r : rp ∈ U}}`, computed exhaustively.
pub fn i_set(
    m: &FinMonoid,
    tau: &MonoidTopology,
    u: Mask,
    p: usize,
) -> Result<Mask, PowderError> {
    if !tau.is_open(u) {
        return Err(PowderError::NotOpen { set: u });
    }
    let row = |q: usize| -> Mask {
        mask_of(m.elements().filter(|&r| mask_contains(u, m.mul(r, q))))
    };
    let base = row(p);
    Ok(mask_of(m.elements().filter(|&q| row(q) == base)))
}

/// Outcome of a powder check, with a witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PowderVerdict {
    Powder,
    /// Two points no open set separates.
    NotT0 { x: usize, y: usize },
    /// The topology has no basis of clopen sets.
    NoClopenBasis,
    /// Some `I^U_p` over the tested clopen basis is not open.
    ISetNotOpen { basis_set: Mask, point: usize, i_set: Mask },
}

impl PowderVerdict {
    pub fn is_powder(&self) -> bool {
        matches!(self, PowderVerdict::Powder)
    }
}

fn is_basis_for(tau: &MonoidTopology, family: &[Mask]) -> bool {
    (0..tau.size()).all(|x| {
        family
            .iter()
            .any(|&c| mask_contains(c, x) && c & !tau.min_open(x) == 0)
    })
}

fn check_basis_i_sets(
    m: &FinMonoid,
    tau: &MonoidTopology,
    basis: &[Mask],
) -> Result<(), PowderVerdict> {
    for &u in basis {
        for p in m.elements() {
            let i = i_set(m, tau, u, p).expect("basis sets are open");
            if !tau.is_open(i) {
                return Err(PowderVerdict::ISetNotOpen {
                    basis_set: u,
                    point: p,
                    i_set: i,
                });
            }
        }
    }
    Ok(())
}

/// Left powder check: T0, plus a clopen basis whose `I^U_p` sets are all open.
/// Tests the presented basis first (refined to the clopen sets it generates
/// when it is not itself clopen), then the basis of minimal opens.
pub fn is_left_powder(m: &FinMonoid, tau: &MonoidTopology) -> PowderVerdict {
    debug_assert_eq!(m.size(), tau.size());
    if let Err((x, y)) = tau.t0_witness() {
        return PowderVerdict::NotT0 { x, y };
    }
    let mut candidates: Vec<Vec<Mask>> = Vec::new();
    let presented: Vec<Mask> = tau.basis().to_vec();
    if presented.iter().all(|&b| tau.is_clopen(b)) {
        candidates.push(presented);
    } else {
        let clopens: Vec<Mask> = tau
            .all_opens()
            .into_iter()
            .filter(|&o| o != 0 && tau.is_clopen(o))
            .collect();
        candidates.push(clopens);
    }
    let minimal = tau.minimal_open_basis();
    if minimal.iter().all(|&b| tau.is_clopen(b)) {
        candidates.push(minimal);
    }
    let mut last_failure = None;
    let mut saw_candidate = false;
    for basis in candidates {
        if basis.is_empty() || !is_basis_for(tau, &basis) {
            continue;
        }
        saw_candidate = true;
        match check_basis_i_sets(m, tau, &basis) {
            Ok(()) => return PowderVerdict::Powder,
            Err(v) => last_failure = Some(v),
        }
    }
    if !saw_candidate {
        return PowderVerdict::NoClopenBasis;
    }
    last_failure.expect("some candidate basis was checked")
}

/// Right powder check: the left check over the opposite monoid, same topology.
pub fn is_right_powder(m: &FinMonoid, tau: &MonoidTopology) -> PowderVerdict {
    is_left_powder(&m.opposite(), tau)
}

/// Left powder but not right powder.
pub fn is_chiral(m: &FinMonoid, tau: &MonoidTopology) -> bool {
    is_left_powder(m, tau).is_powder() && !is_right_powder(m, tau).is_powder()
}

// ---------------------------------------------------------------------------
// Window-truncated function monoids
// ---------------------------------------------------------------------------

/// Total map on the window `[0, w)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WindowMap(pub Vec<usize>);

impl WindowMap {
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn image(&self) -> Vec<usize> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl std::fmt::Display for WindowMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}]",
            self.0
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        )
    }
}

/// The monoid of all total maps on `[0, w)` under composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowMonoid {
    w: usize,
}

impl WindowMonoid {
    pub fn new(w: usize) -> Result<Self, PowderError> {
        if w == 0 {
            return Err(PowderError::BadLevelSequence);
        }
        Ok(WindowMonoid { w })
    }

    pub fn window(&self) -> usize {
        self.w
    }

    /// `w^w`, the number of elements.
    pub fn map_count(&self) -> u128 {
        (self.w as u128).pow(self.w as u32)
    }

    pub fn identity(&self) -> WindowMap {
        WindowMap((0..self.w).collect())
    }

    /// `n -> min(2n, w-1)`: doubling clamped into the window. Its image
    /// misses the odd values below the clamp.
    pub fn clamped_doubling(&self) -> WindowMap {
        WindowMap((0..self.w).map(|n| (2 * n).min(self.w - 1)).collect())
    }

    pub fn validate(&self, map: &WindowMap) -> Result<(), PowderError> {
        if map.0.len() != self.w {
            return Err(PowderError::MapLengthMismatch {
                len: map.0.len(),
                w: self.w,
            });
        }
        if let Some(&v) = map.0.iter().find(|&&v| v >= self.w) {
            return Err(PowderError::MapOutOfWindow { value: v, w: self.w });
        }
        Ok(())
    }

    /// `(f ∘ g)(x) = f(g(x))`.
    pub fn compose(&self, f: &WindowMap, g: &WindowMap) -> WindowMap {
        WindowMap((0..self.w).map(|x| f.0[g.0[x]]).collect())
    }

    /// All `w^w` maps in odometer order.
    pub fn all_maps(&self) -> AllMaps {
        AllMaps {
            w: self.w,
            next: Some(vec![0; self.w]),
        }
    }

    /// All `w!` permutations in lexicographic order.
    pub fn all_permutations(&self) -> Vec<WindowMap> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..self.w).collect();
        loop {
            out.push(WindowMap(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1])
            else {
                return out;
            };
            let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
    }
}

pub struct AllMaps {
    w: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for AllMaps {
    type Item = WindowMap;
    fn next(&mut self) -> Option<WindowMap> {
        let cur = self.next.clone()?;
        let mut advanced = cur.clone();
        let mut pos = 0;
        loop {
            if pos == self.w {
                self.next = None;
                break;
            }
            advanced[pos] += 1;
            if advanced[pos] < self.w {
                self.next = Some(advanced);
                break;
            }
            advanced[pos] = 0;
            pos += 1;
        }
        Some(WindowMap(cur))
    }
}

/// One finite instance of the second chirality condition: tuples `x̄` (where
/// `q` must copy `B`) and `v̄` (where `q ∘ r` must copy `A`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub xs: Vec<usize>,
    pub vs: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ProbeWitness {
    pub probe: Probe,
    pub q: WindowMap,
    pub r: WindowMap,
}

/// Evidence that the pair `(A, B)` behaves chirally on the window: no `r`
/// solves `B ∘ r = A` (exhaustively searched), while every probed tuple pair
/// admits witnesses `q, r` with `q = B` on `x̄` and `q(r(v)) = A(v)` on `v̄`.
#[derive(Debug, Clone)]
pub struct ChiralityCertificate {
    pub window: usize,
    pub a: WindowMap,
    pub b: WindowMap,
    /// Number of candidate maps `r` ruled out by the exhaustive search.
    pub condition1_candidates: u128,
    pub witnesses: Vec<ProbeWitness>,
}

#[derive(Debug, Clone)]
pub enum CriterionOutcome {
    Certificate(ChiralityCertificate),
    /// Condition 1 refuted: this `r` solves `B ∘ r = A`.
    Condition1Refuted { r: WindowMap },
    /// Some probe admits no witness inside the window (a truncation artifact
    /// when the probe pins too much of the window).
    Condition2Fails { probe: Probe },
}

/// Check both chirality conditions for `(A, B)` over the given probes. The
/// exhaustive condition-1 search is the authoritative check and is refused
/// above `search_cap` candidates.
pub fn chirality_criterion(
    mw: &WindowMonoid,
    a: &WindowMap,
    b: &WindowMap,
    probes: &[Probe],
    search_cap: u64,
) -> Result<CriterionOutcome, PowderError> {
    mw.validate(a)?;
    mw.validate(b)?;
    for probe in probes {
        if let Some(&v) = probe.xs.iter().chain(probe.vs.iter()).find(|&&v| v >= mw.window()) {
            return Err(PowderError::ProbeOutOfWindow { value: v, w: mw.window() });
        }
    }
    let needed = mw.map_count();
    if needed > u128::from(search_cap) {
        return Err(PowderError::WindowTooLarge {
            w: mw.window(),
            needed,
            cap: search_cap,
        });
    }
    for r in mw.all_maps() {
        if mw.compose(b, &r) == *a {
            return Ok(CriterionOutcome::Condition1Refuted { r });
        }
    }
    let mut witnesses = Vec::with_capacity(probes.len());
    for probe in probes {
        match probe_witness(mw, a, b, probe) {
            Some(w) => witnesses.push(w),
            None => return Ok(CriterionOutcome::Condition2Fails { probe: probe.clone() }),
        }
    }
    Ok(CriterionOutcome::Certificate(ChiralityCertificate {
        window: mw.window(),
        a: a.clone(),
        b: b.clone(),
        condition1_candidates: needed,
        witnesses,
    }))
}

/// Search for `q, r` satisfying one probe: `q` is pinned to `B` on `x̄`, and
/// each distinct `v` needs a slot `p = r(v)` with `q(p) = A(v)`. Backtracks
/// over slot choices; unconstrained positions default to `B` for `q` and the
/// identity for `r`.
fn probe_witness(
    mw: &WindowMonoid,
    a: &WindowMap,
    b: &WindowMap,
    probe: &Probe,
) -> Option<ProbeWitness> {
    let w = mw.window();
    let mut q_fixed: Vec<Option<usize>> = vec![None; w];
    for &x in &probe.xs {
        q_fixed[x] = Some(b.apply(x));
    }
    let mut distinct_vs: Vec<usize> = probe.vs.clone();
    distinct_vs.dedup();
    distinct_vs.sort_unstable();
    distinct_vs.dedup();

    fn assign(
        w: usize,
        a: &WindowMap,
        q_fixed: &mut Vec<Option<usize>>,
        vs: &[usize],
        slot_of: &mut Vec<(usize, usize)>,
    ) -> bool {
        let Some((&v, rest)) = vs.split_first() else {
            return true;
        };
        let target = a.apply(v);
        for p in 0..w {
            match q_fixed[p] {
                Some(val) if val != target => continue,
                Some(_) => {
                    slot_of.push((v, p));
                    if assign(w, a, q_fixed, rest, slot_of) {
                        return true;
                    }
                    slot_of.pop();
                }
                None => {
                    q_fixed[p] = Some(target);
                    slot_of.push((v, p));
                    if assign(w, a, q_fixed, rest, slot_of) {
                        return true;
                    }
                    slot_of.pop();
                    q_fixed[p] = None;
                }
            }
        }
        false
    }

    let mut slot_of = Vec::new();
    if !assign(w, a, &mut q_fixed, &distinct_vs, &mut slot_of) {
        return None;
    }
    let q = WindowMap(
        (0..w)
            .map(|p| q_fixed[p].unwrap_or_else(|| b.apply(p)))
            .collect(),
    );
    let mut r_vals: Vec<usize> = (0..w).collect();
    for &(v, p) in &slot_of {
        r_vals[v] = p;
    }
    let r = WindowMap(r_vals);
    debug_assert!(verify_probe_witness(
        mw,
        a,
        b,
        &ProbeWitness { probe: probe.clone(), q: q.clone(), r: r.clone() }
    ));
    Some(ProbeWitness {
        probe: probe.clone(),
        q,
        r,
    })
}

/// Re-evaluate the equalities a probe witness claims.
pub fn verify_probe_witness(
    mw: &WindowMonoid,
    a: &WindowMap,
    b: &WindowMap,
    witness: &ProbeWitness,
) -> bool {
    if mw.validate(&witness.q).is_err() || mw.validate(&witness.r).is_err() {
        return false;
    }
    witness.probe.xs.iter().all(|&x| witness.q.apply(x) == b.apply(x))
        && witness
            .probe
            .vs
            .iter()
            .all(|&v| witness.q.apply(witness.r.apply(v)) == a.apply(v))
}

/// Independent re-verification of a whole certificate: the condition-1 search
/// is re-run from scratch and every witness equality is re-evaluated.
pub fn verify_certificate(cert: &ChiralityCertificate, search_cap: u64) -> Result<bool, PowderError> {
    let mw = WindowMonoid::new(cert.window)?;
    if mw.validate(&cert.a).is_err() || mw.validate(&cert.b).is_err() {
        return Ok(false);
    }
    let needed = mw.map_count();
    if needed > u128::from(search_cap) {
        return Err(PowderError::WindowTooLarge {
            w: cert.window,
            needed,
            cap: search_cap,
        });
    }
    if cert.condition1_candidates != needed {
        return Ok(false);
    }
    let mut counted: u128 = 0;
    for r in mw.all_maps() {
        counted += 1;
        if mw.compose(&cert.b, &r) == cert.a {
            return Ok(false);
        }
    }
    if counted != needed {
        return Ok(false);
    }
    Ok(cert
        .witnesses
        .iter()
        .all(|w| verify_probe_witness(&mw, &cert.a, &cert.b, w)))
}

/// Deterministically generate `count` probes for a window: seeded tuples with
/// `|x̄| <= w - 2` so the window keeps free slots for witnesses.
pub fn generate_probes(mw: &WindowMonoid, seed: u64, count: usize) -> Vec<Probe> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let w = mw.window();
    let max_xs = w.saturating_sub(2).max(1);
    (0..count)
        .map(|_| {
            let nx = rng.gen_range(1..=max_xs);
            let nv = rng.gen_range(1..=2.min(w));
            let xs: Vec<usize> = (0..nx).map(|_| rng.gen_range(0..w)).collect();
            let vs: Vec<usize> = (0..nv).map(|_| rng.gen_range(0..w)).collect();
            Probe { xs, vs }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Closed-image probe
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// All total maps on the window.
    AllMaps,
    /// Permutations only (a group).
    Permutations,
}

/// Finite-level shadow of the map `(q, r) -> (q, q ∘ r)` not having closed
/// image, reported per window level for the canonical pair
/// `(B, A) = (clamped doubling, identity)`.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub window: usize,
    pub kind: WindowKind,
    /// No `r` solves `B ∘ r = A` (exhaustive search).
    pub pair_absent: bool,
    /// For each earlier level `t`: witnesses exist matching `(B, A)` on
    /// `[0, t)` (the sub-window approximation).
    pub approximations: Vec<(usize, bool)>,
    /// `(B, A)` when it is absent from the image yet approximated at every
    /// earlier level (needs at least one earlier level).
    pub accumulation_pair: Option<(WindowMap, WindowMap)>,
    /// Image size of `(q, r) -> (q, q ∘ r)`, when exhaustively enumerable.
    pub image_pairs: Option<u128>,
    pub all_pairs: Option<u128>,
}

/// Run the closed-image probe along a strictly increasing level sequence.
pub fn closed_image_probe(
    levels: &[usize],
    kind: WindowKind,
    search_cap: u64,
) -> Result<Vec<LevelReport>, PowderError> {
    if levels.is_empty() || levels.windows(2).any(|p| p[0] >= p[1]) || levels[0] == 0 {
        return Err(PowderError::BadLevelSequence);
    }
    let mut out = Vec::with_capacity(levels.len());
    for (li, &w) in levels.iter().enumerate() {
        let mw = WindowMonoid::new(w)?;
        let a = mw.identity();
        let b = match kind {
            WindowKind::AllMaps => mw.clamped_doubling(),
            WindowKind::Permutations => mw.identity(),
        };
        let needed = mw.map_count();
        if needed > u128::from(search_cap) {
            return Err(PowderError::WindowTooLarge { w, needed, cap: search_cap });
        }
        let (pair_absent, image_pairs, all_pairs) = match kind {
            WindowKind::AllMaps => {
                let absent = mw.all_maps().all(|r| mw.compose(&b, &r) != a);
                // image membership: s = q ∘ r solvable iff im(s) ⊆ im(q)
                let (img, all) = if w <= 4 {
                    let maps: Vec<WindowMap> = mw.all_maps().collect();
                    let mut img: u128 = 0;
                    for q in &maps {
                        let qi = q.image();
                        for s in &maps {
                            if s.image().iter().all(|v| qi.contains(v)) {
                                img += 1;
                            }
                        }
                    }
                    (Some(img), Some((maps.len() as u128) * (maps.len() as u128)))
                } else {
                    (None, None)
                };
                (absent, img, all)
            }
            WindowKind::Permutations => {
                // r = q^{-1} s always solves, so the image is every pair
                let perms = mw.all_permutations();
                let n = perms.len() as u128;
                if w <= 4 {
                    for q in &perms {
                        for s in &perms {
                            debug_assert!(perms.iter().any(|r| mw.compose(q, r) == *s));
                        }
                    }
                }
                (false, Some(n * n), Some(n * n))
            }
        };
        let approximations: Vec<(usize, bool)> = levels[..li]
            .iter()
            .map(|&t| {
                let probe = Probe {
                    xs: (0..t).collect(),
                    vs: (0..t).collect(),
                };
                (t, probe_witness(&mw, &a, &b, &probe).is_some())
            })
            .collect();
        let accumulation_pair = if pair_absent
            && !approximations.is_empty()
            && approximations.iter().all(|&(_, ok)| ok)
        {
            Some((b.clone(), a.clone()))
        } else {
            None
        };
        out.push(LevelReport {
            window: w,
            kind,
            pair_absent,
            approximations,
            accumulation_pair,
            image_pairs,
            all_pairs,
        });
    }
    Ok(out)
}

pub const DEFAULT_SEARCH_CAP: u64 = 10_000_000;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{filter_close, LeftCongruence};

    #[test]
    fn i_set_examples() {
        let m2 = FinMonoid::m2();
        let disc = MonoidTopology::discrete(2);
        // U = {e}: only the identity keeps the row {e}
        assert_eq!(i_set(&m2, &disc, 0b10, 0).unwrap(), 0b01);
        assert_eq!(i_set(&m2, &disc, 0b11, 0).unwrap(), 0b11);
        assert_eq!(i_set(&m2, &disc, 0b00, 0).unwrap(), 0b11);
        assert!(matches!(
            i_set(&m2, &MonoidTopology::indiscrete(2), 0b01, 0),
            Err(PowderError::NotOpen { .. })
        ));
    }

    #[test]
    fn i_set_contains_base_point() {
        for m in [FinMonoid::m2(), FinMonoid::lz3(), FinMonoid::full_transformation(2)] {
            let tau = MonoidTopology::discrete(m.size());
            for u in tau.all_opens() {
                for p in m.elements() {
                    assert!(mask_contains(i_set(&m, &tau, u, p).unwrap(), p));
                }
            }
        }
    }

    #[test]
    fn powder_examples() {
        let m2 = FinMonoid::m2();
        assert!(is_left_powder(&m2, &MonoidTopology::discrete(2)).is_powder());
        assert_eq!(
            is_left_powder(&m2, &MonoidTopology::indiscrete(2)),
            PowderVerdict::NotT0 { x: 0, y: 1 }
        );
        let full_filter = filter_close(&m2, &[LeftCongruence::full(2)]);
        let tau = MonoidTopology::from_filter(&full_filter);
        assert_eq!(is_left_powder(&m2, &tau), PowderVerdict::NotT0 { x: 0, y: 1 });
        assert!(!is_right_powder(&m2, &MonoidTopology::indiscrete(2)).is_powder());
        assert!(is_right_powder(&m2, &MonoidTopology::discrete(2)).is_powder());
    }

    #[test]
    fn discrete_is_two_sided_powder() {
        for m in [
            FinMonoid::trivial(),
            FinMonoid::m2(),
            FinMonoid::cyclic(2),
            FinMonoid::cyclic(3),
            FinMonoid::lz3(),
            FinMonoid::full_transformation(2),
        ] {
            let tau = MonoidTopology::discrete(m.size());
            assert!(is_left_powder(&m, &tau).is_powder());
            assert!(is_right_powder(&m, &tau).is_powder());
            assert!(!is_chiral(&m, &tau));
        }
    }

    #[test]
    fn commutative_monoids_agree_left_right() {
        for m in [FinMonoid::m2(), FinMonoid::cyclic(3)] {
            for seed in crate::monoid::enumerate_left_congruences(&m) {
                let tau = MonoidTopology::from_filter(&filter_close(&m, &[seed]));
                assert_eq!(is_left_powder(&m, &tau), is_right_powder(&m, &tau));
            }
            // plus a non-filter basis: Sierpinski-style
            let mut sets: Vec<Vec<usize>> = vec![(0..m.size()).collect()];
            sets.push(vec![0]);
            let tau = MonoidTopology::from_basis(m.size(), &sets).unwrap();
            assert_eq!(is_left_powder(&m, &tau), is_right_powder(&m, &tau));
        }
    }

    #[test]
    fn sierpinski_topology_has_no_clopen_basis() {
        let m2 = FinMonoid::m2();
        let tau = MonoidTopology::from_basis(2, &[vec![0], vec![0, 1]]).unwrap();
        assert!(tau.is_t0());
        assert_eq!(is_left_powder(&m2, &tau), PowderVerdict::NoClopenBasis);
    }

    #[test]
    fn window_monoid_basics() {
        let mw = WindowMonoid::new(3).unwrap();
        assert_eq!(mw.map_count(), 27);
        assert_eq!(mw.all_maps().count(), 27);
        let id = mw.identity();
        let b = mw.clamped_doubling();
        assert_eq!(b.0, vec![0, 2, 2]);
        assert_eq!(mw.compose(&id, &b), b);
        assert_eq!(mw.compose(&b, &id), b);
        assert_eq!(mw.all_permutations().len(), 6);
    }

    #[test]
    fn criterion_on_window_six() {
        let mw = WindowMonoid::new(6).unwrap();
        let a = mw.identity();
        let b = mw.clamped_doubling();
        let probes = vec![Probe { xs: vec![0, 1, 2], vs: vec![3] }];
        match chirality_criterion(&mw, &a, &b, &probes, DEFAULT_SEARCH_CAP).unwrap() {
            CriterionOutcome::Certificate(cert) => {
                assert_eq!(cert.condition1_candidates, 46_656);
                assert_eq!(cert.witnesses.len(), 1);
                let w = &cert.witnesses[0];
                // q copies B on the probe and q(r(3)) = 3
                assert_eq!(w.q.apply(0), 0);
                assert_eq!(w.q.apply(1), 2);
                assert_eq!(w.q.apply(2), 4);
                assert_eq!(w.q.apply(w.r.apply(3)), 3);
                assert!(verify_certificate(&cert, DEFAULT_SEARCH_CAP).unwrap());
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn criterion_refutes_equal_pair() {
        let mw = WindowMonoid::new(4).unwrap();
        let b = mw.clamped_doubling();
        match chirality_criterion(&mw, &b, &b, &[], DEFAULT_SEARCH_CAP).unwrap() {
            CriterionOutcome::Condition1Refuted { r } => {
                assert_eq!(mw.compose(&b, &r), b);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn criterion_respects_cap() {
        let mw = WindowMonoid::new(6).unwrap();
        let a = mw.identity();
        let b = mw.clamped_doubling();
        assert!(matches!(
            chirality_criterion(&mw, &a, &b, &[], 1000),
            Err(PowderError::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn generated_probes_admit_witnesses() {
        let mw = WindowMonoid::new(6).unwrap();
        let a = mw.identity();
        let b = mw.clamped_doubling();
        let probes = generate_probes(&mw, 42, 25);
        assert_eq!(probes.len(), 25);
        let out = chirality_criterion(&mw, &a, &b, &probes, DEFAULT_SEARCH_CAP).unwrap();
        assert!(matches!(out, CriterionOutcome::Certificate(_)));
    }

    #[test]
    fn closed_image_levels() {
        // trivial window: B = A, image contains the pair
        let reports = closed_image_probe(&[1], WindowKind::AllMaps, DEFAULT_SEARCH_CAP).unwrap();
        assert!(!reports[0].pair_absent);
        assert_eq!(reports[0].image_pairs, reports[0].all_pairs);

        let reports =
            closed_image_probe(&[2, 4, 6], WindowKind::AllMaps, DEFAULT_SEARCH_CAP).unwrap();
        let last = &reports[2];
        assert!(last.pair_absent);
        assert_eq!(last.approximations, vec![(2, true), (4, true)]);
        assert!(last.accumulation_pair.is_some());
        // at level 4 the pair is already absent and approximated at level 2
        assert!(reports[1].pair_absent);
        assert!(reports[1].accumulation_pair.is_some());

        // permutations: image is everything, nothing accumulates
        let reports =
            closed_image_probe(&[2, 3], WindowKind::Permutations, DEFAULT_SEARCH_CAP).unwrap();
        for r in &reports {
            assert!(!r.pair_absent);
            assert_eq!(r.image_pairs, r.all_pairs);
            assert!(r.accumulation_pair.is_none());
        }
    }

    #[test]
    fn image_membership_matches_exhaustive_search() {
        // im(s) ⊆ im(q) iff some r solves q ∘ r = s; cross-check at w = 3
        let mw = WindowMonoid::new(3).unwrap();
        let maps: Vec<WindowMap> = mw.all_maps().collect();
        for q in &maps {
            let qi = q.image();
            for s in &maps {
                let by_image = s.image().iter().all(|v| qi.contains(v));
                let by_search = maps.iter().any(|r| mw.compose(q, r) == *s);
                assert_eq!(by_image, by_search);
            }
        }
    }

    #[test]
    fn approximation_matches_slot_counting() {
        // feasibility of the sub-window probe == |A-values missing from the
        // pinned part| <= free slots
        for w in 2..=6usize {
            let mw = WindowMonoid::new(w).unwrap();
            let a = mw.identity();
            let b = mw.clamped_doubling();
            for t in 1..w {
                let probe = Probe { xs: (0..t).collect(), vs: (0..t).collect() };
                let found = probe_witness(&mw, &a, &b, &probe).is_some();
                let pinned: Vec<usize> = (0..t).map(|x| b.apply(x)).collect();
                let missing = (0..t).filter(|v| !pinned.contains(v)).count();
                assert_eq!(found, missing <= w - t, "w={w} t={t}");
            }
        }
    }
}
