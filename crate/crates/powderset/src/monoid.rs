//! Finite monoids by multiplication table, left congruences, congruence
//! filters, and the topologies they generate.
//!
//! A filter of left congruences on a finite monoid always has a minimum
//! element, so filters are carried by that minimum `R0`; membership is
//! `R ⊇ R0`. Topologies are carried by an explicit basis of subsets (bitmask
//! encoded, so topologised monoids are capped at 128 elements).

use thiserror::Error;

/// Subsets of a monoid as bitmasks.
pub type Mask = u128;

pub const MAX_TOPOLOGY_SIZE: usize = 128;

pub fn mask_of(points: impl IntoIterator<Item = usize>) -> Mask {
    points.into_iter().fold(0, |m, p| m | (1 << p))
}

pub fn mask_contains(mask: Mask, p: usize) -> bool {
    mask & (1 << p) != 0
}

pub fn mask_points(mask: Mask, size: usize) -> Vec<usize> {
    (0..size).filter(|&p| mask_contains(mask, p)).collect()
}

pub fn full_mask(size: usize) -> Mask {
    if size == 128 {
        Mask::MAX
    } else {
        (1 << size) - 1
    }
}

#[derive(Debug, Error)]
pub enum MonoidError {
    #[error("multiplication table is not {size}x{size}: row {row} has length {len}")]
    TableNotSquare { size: usize, row: usize, len: usize },
    #[error("table entry at ({row}, {col}) is {value}, out of range for size {size}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        size: usize,
    },
    #[error("monoid must have at least one element")]
    Empty,
    #[error("label list has {labels} entries for table of size {size}")]
    LabelCountMismatch { labels: usize, size: usize },
    #[error("no two-sided identity element exists")]
    NoIdentity,
    #[error("declared identity {identity} fails: {identity}*{witness} or {witness}*{identity} differs from {witness}")]
    IdentityLawFails { identity: usize, witness: usize },
    #[error("associativity fails at ({a}, {b}, {c}): ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("block assignment has {len} entries for monoid of size {size}")]
    PartitionSizeMismatch { len: usize, size: usize },
    #[error("partition is not left-compatible: multiplier {a} separates {x} and {y}")]
    NotLeftCompatible { a: usize, x: usize, y: usize },
    #[error("topology on {size} elements exceeds the supported maximum {max}")]
    TopologyTooLarge { size: usize, max: usize },
    #[error("basis does not cover point {point}")]
    BasisDoesNotCover { point: usize },
    #[error("basis not intersection-closed at sets {i} and {j}: no member fits point {point} inside their intersection")]
    BasisNotIntersectionClosed { i: usize, j: usize, point: usize },
    #[error("empty basis set is allowed but a basis needs at least one nonempty member")]
    EmptyBasis,
}

/// Finite monoid: labels, flattened multiplication table, identity index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinMonoid {
    labels: Vec<String>,
    table: Vec<usize>,
    identity: usize,
}

impl FinMonoid {
    /// Validate a multiplication table. When `identity` is `None` the table is
    /// scanned for a two-sided identity; errors pinpoint the failing law
    /// instance.
    pub fn new(
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
        identity: Option<usize>,
    ) -> Result<Self, MonoidError> {
        let size = table.len();
        if size == 0 {
            return Err(MonoidError::Empty);
        }
        if !labels.is_empty() && labels.len() != size {
            return Err(MonoidError::LabelCountMismatch {
                labels: labels.len(),
                size,
            });
        }
        let mut flat = Vec::with_capacity(size * size);
        for (row, r) in table.iter().enumerate() {
            if r.len() != size {
                return Err(MonoidError::TableNotSquare {
                    size,
                    row,
                    len: r.len(),
                });
            }
            for (col, &v) in r.iter().enumerate() {
                if v >= size {
                    return Err(MonoidError::EntryOutOfRange {
                        row,
                        col,
                        value: v,
                        size,
                    });
                }
                flat.push(v);
            }
        }
        let labels = if labels.is_empty() {
            default_labels(size)
        } else {
            labels
        };
        let mul = |a: usize, b: usize| flat[a * size + b];
        let identity = match identity {
            Some(e) => {
                if let Some(w) = (0..size).find(|&x| mul(e, x) != x || mul(x, e) != x) {
                    return Err(MonoidError::IdentityLawFails {
                        identity: e,
                        witness: w,
                    });
                }
                e
            }
            None => (0..size)
                .find(|&e| (0..size).all(|x| mul(e, x) == x && mul(x, e) == x))
                .ok_or(MonoidError::NoIdentity)?,
        };
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(MonoidError::NonAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(FinMonoid {
            labels,
            table: flat,
            identity,
        })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size() + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Same carrier, reversed multiplication.
    pub fn opposite(&self) -> FinMonoid {
        let n = self.size();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.mul(b, a);
            }
        }
        FinMonoid {
            labels: self.labels.clone(),
            table,
            identity: self.identity,
        }
    }

    /// One-element monoid.
    pub fn trivial() -> FinMonoid {
        FinMonoid::new(vec!["1".into()], vec![vec![0]], Some(0)).expect("trivial monoid is lawful")
    }

    /// `{1, e}` with `e*e = e`.
    pub fn m2() -> FinMonoid {
        FinMonoid::new(
            vec!["1".into(), "e".into()],
            vec![vec![0, 1], vec![1, 1]],
            Some(0),
        )
        .expect("m2 is lawful")
    }

    /// Cyclic group of order `n`.
    pub fn cyclic(n: usize) -> FinMonoid {
        assert!(n >= 1);
        let labels = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g{i}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FinMonoid::new(labels, table, Some(0)).expect("cyclic group is lawful")
    }

    /// `{1, a, b}` with `x*y = y` on the non-identity part.
    pub fn lz3() -> FinMonoid {
        FinMonoid::new(
            vec!["1".into(), "a".into(), "b".into()],
            vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]],
            Some(0),
        )
        .expect("lz3 is lawful")
    }

    /// Full transformation monoid on `k` points; element `t = d0 d1 ...`
    /// denotes the map `i -> di`, product is composition `(f*g)(x) = f(g(x))`.
    pub fn full_transformation(k: usize) -> FinMonoid {
        assert!((1..=3).contains(&k), "full_transformation supports k <= 3");
        let n = k.pow(k as u32);
        let digits = |t: usize| -> Vec<usize> {
            let mut v = Vec::with_capacity(k);
            let mut t = t;
            for _ in 0..k {
                v.push(t % k);
                t /= k;
            }
            v
        };
        let encode = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &d| acc * k + d) };
        let labels = (0..n)
            .map(|t| {
                let d = digits(t);
                format!("t{}", d.iter().map(ToString::to_string).collect::<String>())
            })
            .collect();
        let mut table = Vec::with_capacity(n);
        for f in 0..n {
            let fd = digits(f);
            let mut row = Vec::with_capacity(n);
            for g in 0..n {
                let gd = digits(g);
                let comp: Vec<usize> = (0..k).map(|x| fd[gd[x]]).collect();
                row.push(encode(&comp));
            }
            table.push(row);
        }
        let id = encode(&(0..k).collect::<Vec<_>>());
        FinMonoid::new(labels, table, Some(id)).expect("transformation monoid is lawful")
    }
}

fn default_labels(size: usize) -> Vec<String> {
    (0..size)
        .map(|i| if i == 0 { "1".to_string() } else { format!("m{i}") })
        .collect()
}

/// All monoids of the given size up to isomorphism, identity normalised to
/// element 0. Exhaustive table enumeration plus relabelling dedup; sizes 1..=3
/// give 1, 2 and 7 classes.
pub fn all_monoids_up_to_iso(size: usize) -> Vec<FinMonoid> {
    assert!((1..=4).contains(&size), "enumeration supports size <= 4");
    let free = (size - 1) * (size - 1);
    let mut canon_seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut assignment = vec![0usize; free];
    loop {
        let mut table = vec![vec![0usize; size]; size];
        for j in 0..size {
            table[0][j] = j;
            table[j][0] = j;
        }
        for (idx, &v) in assignment.iter().enumerate() {
            let a = 1 + idx / (size - 1);
            let b = 1 + idx % (size - 1);
            table[a][b] = v;
        }
        if let Ok(m) = FinMonoid::new(default_labels(size), table.clone(), Some(0)) {
            let canon = canonical_table(&table, size);
            if canon_seen.insert(canon) {
                out.push(m);
            }
        }
        // odometer over the free entries
        let mut pos = 0;
        loop {
            if pos == free {
                return out;
            }
            assignment[pos] += 1;
            if assignment[pos] < size {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

fn canonical_table(table: &[Vec<usize>], size: usize) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut perm: Vec<usize> = (0..size).collect();
    permute_nonidentity(&mut perm, 1, &mut |p| {
        let mut inv = vec![0; size];
        for (i, &pi) in p.iter().enumerate() {
            inv[pi] = i;
        }
        let mut flat = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                flat.push(p[table[inv[a]][inv[b]]]);
            }
        }
        if best.as_ref().is_none_or(|b| flat < *b) {
            best = Some(flat);
        }
    });
    best.expect("at least the identity permutation")
}

fn permute_nonidentity(perm: &mut Vec<usize>, from: usize, visit: &mut impl FnMut(&[usize])) {
    if from >= perm.len() {
        visit(perm);
        return;
    }
    for i in from..perm.len() {
        perm.swap(from, i);
        permute_nonidentity(perm, from + 1, visit);
        perm.swap(from, i);
    }
}

/// Left congruence as a normalised block assignment (block ids by first
/// occurrence), so equal relations compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeftCongruence {
    blocks: Vec<usize>,
    nblocks: usize,
}

impl LeftCongruence {
    pub fn diagonal(size: usize) -> Self {
        LeftCongruence {
            blocks: (0..size).collect(),
            nblocks: size,
        }
    }

    pub fn full(size: usize) -> Self {
        LeftCongruence {
            blocks: vec![0; size],
            nblocks: if size == 0 { 0 } else { 1 },
        }
    }

    /// Validate a block assignment as a left congruence of `m`.
    pub fn from_blocks(m: &FinMonoid, blocks: &[usize]) -> Result<Self, MonoidError> {
        if blocks.len() != m.size() {
            return Err(MonoidError::PartitionSizeMismatch {
                len: blocks.len(),
                size: m.size(),
            });
        }
        check_left_compatible(m, blocks)?;
        Ok(Self::normalise(blocks))
    }

    /// Validate a partition given as explicit classes of element indices.
    pub fn from_classes(m: &FinMonoid, classes: &[Vec<usize>]) -> Result<Self, MonoidError> {
        let mut blocks = vec![usize::MAX; m.size()];
        for (b, class) in classes.iter().enumerate() {
            for &x in class {
                if x >= m.size() || blocks[x] != usize::MAX {
                    return Err(MonoidError::PartitionSizeMismatch {
                        len: classes.iter().map(Vec::len).sum(),
                        size: m.size(),
                    });
                }
                blocks[x] = b;
            }
        }
        if let Some(x) = blocks.iter().position(|&b| b == usize::MAX) {
            return Err(MonoidError::BasisDoesNotCover { point: x });
        }
        Self::from_blocks(m, &blocks)
    }

    /// Normalise a block assignment without any compatibility check. For
    /// relations lawful by construction (stabilisers, translates, quotients).
    pub fn from_blocks_unchecked(blocks: &[usize]) -> Self {
        Self::normalise(blocks)
    }

    fn normalise(blocks: &[usize]) -> Self {
        let mut remap: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut next = 0;
        let mut out = Vec::with_capacity(blocks.len());
        for &b in blocks {
            let id = *remap.entry(b).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            out.push(id);
        }
        LeftCongruence {
            blocks: out,
            nblocks: next,
        }
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.nblocks
    }

    pub fn block(&self, x: usize) -> usize {
        self.blocks[x]
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.blocks[x] == self.blocks[y]
    }

    pub fn is_diagonal(&self) -> bool {
        self.nblocks == self.size()
    }

    pub fn is_full(&self) -> bool {
        self.nblocks <= 1
    }

    /// Classes in block-id order (first occurrence order).
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nblocks];
        for (x, &b) in self.blocks.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn class_of(&self, x: usize) -> Vec<usize> {
        let b = self.blocks[x];
        (0..self.size()).filter(|&y| self.blocks[y] == b).collect()
    }

    /// Relation containment: `self ⊇ other` (other refines self).
    pub fn contains(&self, other: &LeftCongruence) -> bool {
        let n = self.size();
        // other-block -> self-block must be a function
        let mut image = vec![usize::MAX; other.nblocks];
        (0..n).all(|x| {
            let ob = other.blocks[x];
            if image[ob] == usize::MAX {
                image[ob] = self.blocks[x];
                true
            } else {
                image[ob] == self.blocks[x]
            }
        })
    }

    pub fn intersect(&self, other: &LeftCongruence) -> LeftCongruence {
        let n = self.size();
        let paired: Vec<usize> = (0..n)
            .map(|x| self.blocks[x] * other.size() + other.blocks[x])
            .collect();
        Self::normalise(&paired)
    }

    /// `R m^{-1} = {(n, n') : nm R n'm}`.
    pub fn right_translate(&self, m: &FinMonoid, elt: usize) -> LeftCongruence {
        let blocks: Vec<usize> = m.elements().map(|x| self.blocks[m.mul(x, elt)]).collect();
        let t = Self::normalise(&blocks);
        debug_assert!(check_left_compatible(m, &t.blocks).is_ok());
        t
    }

    /// The relation as a pair set (derived view).
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.same(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

fn check_left_compatible(m: &FinMonoid, blocks: &[usize]) -> Result<(), MonoidError> {
    let n = m.size();
    for a in 0..n {
        for x in 0..n {
            for y in (x + 1)..n {
                if blocks[x] == blocks[y] && blocks[m.mul(a, x)] != blocks[m.mul(a, y)] {
                    return Err(MonoidError::NotLeftCompatible { a, x, y });
                }
            }
        }
    }
    Ok(())
}

/// Whether a partition is a left congruence; on failure reports the violating
/// `(a, x, y)`.
pub fn is_left_congruence(m: &FinMonoid, blocks: &[usize]) -> Result<(), (usize, usize, usize)> {
    if blocks.len() != m.size() {
        return Err((0, 0, 0));
    }
    check_left_compatible(m, blocks).map_err(|e| match e {
        MonoidError::NotLeftCompatible { a, x, y } => (a, x, y),
        _ => unreachable!("check_left_compatible only reports compatibility"),
    })
}

/// Smallest left congruence containing the given pairs: least fixed point of
/// equivalence closure plus left translation `(x, y) -> (ax, ay)`.
pub fn left_congruence_closure(m: &FinMonoid, pairs: &[(usize, usize)]) -> LeftCongruence {
    let n = m.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let union = |parent: &mut Vec<usize>, x: usize, y: usize| -> bool {
        let (rx, ry) = (find(parent, x), find(parent, y));
        if rx != ry {
            parent[rx] = ry;
            true
        } else {
            false
        }
    };
    for &(x, y) in pairs {
        union(&mut parent, x, y);
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            for x in 0..n {
                for y in (x + 1)..n {
                    if find(&mut parent, x) == find(&mut parent, y) {
                        changed |= union(&mut parent, m.mul(a, x), m.mul(a, y));
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    LeftCongruence::normalise(&roots)
}

/// All left congruences of a small monoid (set partition sweep filtered by
/// left compatibility).
pub fn enumerate_left_congruences(m: &FinMonoid) -> Vec<LeftCongruence> {
    let n = m.size();
    assert!(n <= 9, "congruence enumeration supports size <= 9");
    let mut out = Vec::new();
    // restricted growth strings enumerate set partitions exactly once
    let mut rgs = vec![0usize; n];
    loop {
        if check_left_compatible(m, &rgs).is_ok() {
            out.push(LeftCongruence::normalise(&rgs));
        }
        let mut pos = n;
        loop {
            if pos == 1 {
                return out;
            }
            pos -= 1;
            let maxed = rgs[..pos].iter().max().copied().unwrap_or(0) + 1;
            if rgs[pos] < maxed {
                rgs[pos] += 1;
                rgs[pos + 1..].iter_mut().for_each(|b| *b = 0);
                break;
            }
        }
    }
}

/// Filter of left congruences, represented by its minimum `R0`: the closure of
/// the seeds under pairwise intersection and all right translates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceFilter {
    generators: Vec<LeftCongruence>,
    r0: LeftCongruence,
}

impl CongruenceFilter {
    pub fn r0(&self) -> &LeftCongruence {
        &self.r0
    }

    pub fn generators(&self) -> &[LeftCongruence] {
        &self.generators
    }

    /// Membership: `R ∈ P` iff `R ⊇ R0`.
    pub fn member(&self, r: &LeftCongruence) -> bool {
        r.contains(&self.r0)
    }
}

/// Close a seed family under intersection and right translation and record the
/// minimum. Empty seeds give the filter `{full}`.
pub fn filter_close(m: &FinMonoid, seeds: &[LeftCongruence]) -> CongruenceFilter {
    let mut r0 = LeftCongruence::full(m.size());
    for s in seeds {
        r0 = r0.intersect(s);
    }
    loop {
        let mut next = r0.clone();
        for elt in m.elements() {
            next = next.intersect(&r0.right_translate(m, elt));
        }
        if next == r0 {
            break;
        }
        r0 = next;
    }
    debug_assert!(check_left_compatible(m, &r0.blocks).is_ok());
    CongruenceFilter {
        generators: seeds.to_vec(),
        r0,
    }
}

/// Topology on a finite monoid carried by an explicit basis of subsets.
/// Opens are exactly the unions of basis sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidTopology {
    size: usize,
    basis: Vec<Mask>,
    min_open: Vec<Mask>,
}

impl MonoidTopology {
    pub fn discrete(size: usize) -> Self {
        Self::from_masks(size, (0..size).map(|x| 1 << x).collect()).expect("singletons are a basis")
    }

    pub fn indiscrete(size: usize) -> Self {
        Self::from_masks(size, vec![full_mask(size)]).expect("the full set is a basis")
    }

    /// Basis = the classes of the filter's minimum congruence (exactly the
    /// minimal opens of the powder topology the filter generates).
    pub fn from_filter(filter: &CongruenceFilter) -> Self {
        let r0 = filter.r0();
        let masks: Vec<Mask> = r0
            .classes()
            .into_iter()
            .map(mask_of)
            .collect();
        Self::from_masks(r0.size(), masks).expect("congruence classes partition the carrier")
    }

    /// Basis from explicit subsets; must cover and satisfy the basis
    /// intersection property.
    pub fn from_basis(size: usize, sets: &[Vec<usize>]) -> Result<Self, MonoidError> {
        let masks: Vec<Mask> = sets.iter().map(|s| mask_of(s.iter().copied())).collect();
        Self::from_masks(size, masks)
    }

    pub fn from_masks(size: usize, mut basis: Vec<Mask>) -> Result<Self, MonoidError> {
        if size > MAX_TOPOLOGY_SIZE {
            return Err(MonoidError::TopologyTooLarge {
                size,
                max: MAX_TOPOLOGY_SIZE,
            });
        }
        basis.retain(|&b| b != 0);
        basis.sort_unstable();
        basis.dedup();
        if basis.is_empty() && size > 0 {
            return Err(MonoidError::EmptyBasis);
        }
        for p in 0..size {
            if !basis.iter().any(|&b| mask_contains(b, p)) {
                return Err(MonoidError::BasisDoesNotCover { point: p });
            }
        }
        for (i, &b1) in basis.iter().enumerate() {
            for (j, &b2) in basis.iter().enumerate().skip(i + 1) {
                let inter = b1 & b2;
                for p in mask_points(inter, size) {
                    if !basis
                        .iter()
                        .any(|&b3| mask_contains(b3, p) && b3 & !inter == 0)
                    {
                        return Err(MonoidError::BasisNotIntersectionClosed { i, j, point: p });
                    }
                }
            }
        }
        let min_open: Vec<Mask> = (0..size)
            .map(|p| {
                basis
                    .iter()
                    .filter(|&&b| mask_contains(b, p))
                    .fold(full_mask(size), |acc, &b| acc & b)
            })
            .collect();
        Ok(MonoidTopology {
            size,
            basis,
            min_open,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn basis(&self) -> &[Mask] {
        &self.basis
    }

    /// Smallest open containing `p`.
    pub fn min_open(&self, p: usize) -> Mask {
        self.min_open[p]
    }

    /// Distinct minimal opens; these always form a basis.
    pub fn minimal_open_basis(&self) -> Vec<Mask> {
        let mut v = self.min_open.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn is_open(&self, set: Mask) -> bool {
        mask_points(set, self.size)
            .into_iter()
            .all(|p| self.min_open[p] & !set == 0)
    }

    pub fn is_clopen(&self, set: Mask) -> bool {
        self.is_open(set) && self.is_open(full_mask(self.size) & !set)
    }

    /// T0: every pair of points is separated by some open. Returns the first
    /// indistinguishable pair otherwise.
    pub fn t0_witness(&self) -> Result<(), (usize, usize)> {
        for x in 0..self.size {
            for y in (x + 1)..self.size {
                if self.min_open[x] == self.min_open[y] {
                    return Err((x, y));
                }
            }
        }
        Ok(())
    }

    pub fn is_t0(&self) -> bool {
        self.t0_witness().is_ok()
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.size).all(|p| self.min_open[p] == 1 << p)
    }

    /// Every open set, as masks in ascending order. Exponential in the number
    /// of distinct minimal opens; guarded for small carriers only.
    pub fn all_opens(&self) -> Vec<Mask> {
        let minimal = self.minimal_open_basis();
        assert!(
            minimal.len() <= 20,
            "open-set enumeration supports at most 20 distinct minimal opens"
        );
        let mut opens = Vec::with_capacity(1 << minimal.len());
        for choice in 0u64..(1 << minimal.len()) {
            let mut u: Mask = 0;
            for (i, &b) in minimal.iter().enumerate() {
                if choice & (1 << i) != 0 {
                    u |= b;
                }
            }
            opens.push(u);
        }
        opens.sort_unstable();
        opens.dedup();
        opens
    }

    /// Whether every class of the congruence is open.
    pub fn congruence_open(&self, r: &LeftCongruence) -> bool {
        r.classes()
            .into_iter()
            .all(|c| self.is_open(mask_of(c)))
    }
}
