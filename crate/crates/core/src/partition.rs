// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Set partitions of `{1, …, n}` and the non-crossing lattice `NC(n)`.
//!
//! Partitions are stored canonically: blocks sorted by their minimum and
//! elements ascending inside each block, so structural equality is partition
//! equality. Every operation is pure and returns a fresh value.
//!
//! Text format is `{1,8,12}{2,6,7}{3,4,5}{9,10,11}`; the JSON format is an
//! array of integer arrays in the same canonical order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A validated partition of `{1, …, n}`, not necessarily non-crossing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Validates that `blocks` are non-empty, disjoint and cover `{1, …, n}`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("ground set must be non-empty".into()));
        }
        let mut seen = vec![false; n];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &e in block.iter() {
                if e == 0 || e > n {
                    return Err(Error::InvalidPartition(format!("element {e} outside 1..={n}")));
                }
                if std::mem::replace(&mut seen[e - 1], true) {
                    return Err(Error::InvalidPartition(format!("element {e} appears twice")));
                }
            }
            block.sort_unstable();
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("element {} not covered", missing + 1)));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    /// Infers `n` as the number of listed elements.
    pub fn from_blocks(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = blocks.iter().map(Vec::len).sum();
        Self::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_noncrossing(&self) -> bool {
        find_crossing(&labels_of(self.n, &self.blocks), self.blocks.len()).is_none()
    }
}

/// Element of `NC(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NoncrossingPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    // 0-based block index per element, blocks numbered by their minimum
    labels: Vec<usize>,
}

impl TryFrom<SetPartition> for NoncrossingPartition {
    type Error = Error;

    fn try_from(p: SetPartition) -> Result<Self> {
        let labels = labels_of(p.n, &p.blocks);
        if let Some((a, b)) = find_crossing(&labels, p.blocks.len()) {
            return Err(Error::Crossing(format!("blocks {:?} and {:?} cross", p.blocks[a.min(b)], p.blocks[a.max(b)])));
        }
        Ok(NoncrossingPartition { n: p.n, blocks: p.blocks, labels })
    }
}

impl From<NoncrossingPartition> for SetPartition {
    fn from(p: NoncrossingPartition) -> Self {
        SetPartition { n: p.n, blocks: p.blocks }
    }
}

impl NoncrossingPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        SetPartition::new(n, blocks)?.try_into()
    }

    pub fn from_blocks(blocks: Vec<Vec<usize>>) -> Result<Self> {
        SetPartition::from_blocks(blocks)?.try_into()
    }

    /// Builds a partition from arbitrary per-element labels, which are
    /// renumbered by first occurrence. Callers guarantee non-crossing.
    pub(crate) fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut canon = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            let next = map.len();
            let b = *map.entry(l).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(i + 1);
            canon.push(b);
        }
        debug_assert!(find_crossing(&canon, blocks.len()).is_none(), "crossing labels {labels:?}");
        NoncrossingPartition { n: labels.len(), blocks, labels: canon }
    }

    /// `0_n`: all singletons.
    pub fn minimum(n: usize) -> Self {
        assert!(n >= 1, "ground set must be non-empty");
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    /// `1_n`: one block.
    pub fn maximum(n: usize) -> Self {
        assert!(n >= 1, "ground set must be non-empty");
        Self::from_labels(&vec![0; n])
    }

    /// `n` consecutive interval blocks of size `k` on `[kn]`.
    pub fn rho(k: usize, n: usize) -> Self {
        assert!(k >= 1 && n >= 1, "rho needs k, n >= 1");
        Self::from_labels(&(0..k * n).map(|i| i / k).collect::<Vec<_>>())
    }

    /// Builds an interval partition from consecutive block sizes.
    pub fn intervals(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::InvalidPartition("interval sizes must be positive".into()));
        }
        let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect();
        Ok(Self::from_labels(&labels))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of blocks `|π|`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Canonical 0-based block index of element `i` (1-based).
    pub fn block_index(&self, i: usize) -> usize {
        self.labels[i - 1]
    }

    /// Restricted growth string of the partition.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn is_minimum(&self) -> bool {
        self.blocks.len() == self.n
    }

    pub fn is_maximum(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_interval_partition(&self) -> bool {
        self.blocks.iter().all(|b| b[b.len() - 1] - b[0] + 1 == b.len())
    }

    fn check_same_ground(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::GroundMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Reverse-refinement order: every block of `self` lies inside a block of
    /// `other`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_same_ground(other)?;
        Ok(self.blocks.iter().all(|b| {
            let target = other.labels[b[0] - 1];
            b.iter().all(|&e| other.labels[e - 1] == target)
        }))
    }

    /// Least upper bound in `NC(n)`.
    ///
    /// Blocks are first merged as in the full partition lattice, then crossing
    /// blocks are merged until none remain.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_same_ground(other)?;
        let mut uf = UnionFind::new(self.n);
        for p in [self, other] {
            for b in &p.blocks {
                for w in b.windows(2) {
                    uf.union(w[0] - 1, w[1] - 1);
                }
            }
        }
        loop {
            let labels = canonical_labels(&(0..self.n).map(|i| uf.find(i)).collect::<Vec<_>>());
            let count = labels.iter().max().map_or(0, |m| m + 1);
            match find_crossing(&labels, count) {
                None => return Ok(Self::from_labels(&labels)),
                Some((a, b)) => {
                    let ea = labels.iter().position(|&l| l == a).unwrap();
                    let eb = labels.iter().position(|&l| l == b).unwrap();
                    uf.union(ea, eb);
                }
            }
        }
    }

    /// Kreweras complement.
    ///
    /// With `π` placed on the odd points of `[2n]` and the complement on the
    /// even points, `i` and `j > i` share a block of `Kr(π)` exactly when
    /// `{i+1, …, j}` is a union of blocks of `π`.
    pub fn kreweras(&self) -> Self {
        let n = self.n;
        let sizes: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        let mut seen = vec![0usize; sizes.len()];
        let mut touched = Vec::with_capacity(n);
        let mut out = vec![usize::MAX; n];
        let mut fresh = 0;
        for i in 0..n {
            if out[i] == usize::MAX {
                out[i] = fresh;
                fresh += 1;
            }
            let mut incomplete = 0usize;
            for j in i + 1..n {
                let b = self.labels[j];
                if seen[b] == 0 {
                    incomplete += 1;
                    touched.push(b);
                }
                seen[b] += 1;
                if seen[b] == sizes[b] {
                    incomplete -= 1;
                }
                if incomplete == 0 {
                    out[j] = out[i];
                    break;
                }
            }
            for b in touched.drain(..) {
                seen[b] = 0;
            }
        }
        Self::from_labels(&out)
    }

    /// Relabels by `i ↦ i + shift (mod n)`.
    pub fn rotate(&self, shift: isize) -> Self {
        let n = self.n as isize;
        let mut labels = vec![0; self.n];
        for (i, &l) in self.labels.iter().enumerate() {
            let j = (i as isize + shift).rem_euclid(n) as usize;
            labels[j] = l;
        }
        Self::from_labels(&labels)
    }

    /// Order-isomorphic restriction to the given increasing 1-based positions.
    pub fn restrict(&self, positions: &[usize]) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        Self::from_labels(&positions.iter().map(|&p| self.labels[p - 1]).collect::<Vec<_>>())
    }

    fn check_divides(&self, k: usize) -> Result<()> {
        if k == 0 || !self.n.is_multiple_of(k) {
            return Err(Error::Domain(format!("k = {k} does not divide ground-set size {}", self.n)));
        }
        Ok(())
    }

    /// Every block size is a multiple of `k`.
    pub fn is_k_divisible(&self, k: usize) -> Result<bool> {
        self.check_divides(k)?;
        Ok(self.blocks.iter().all(|b| b.len() % k == 0))
    }

    /// Every block has size exactly `k`.
    pub fn is_k_equal(&self, k: usize) -> Result<bool> {
        self.check_divides(k)?;
        Ok(self.blocks.iter().all(|b| b.len() == k))
    }

    /// Every block lies in a single residue class mod `k`.
    pub fn is_k_preserving(&self, k: usize) -> Result<bool> {
        self.check_divides(k)?;
        Ok(self.blocks.iter().all(|b| b.iter().all(|&e| (e - b[0]) % k == 0)))
    }

    /// `k`-preserving and joined with `ρ_k^{n/k}` gives `1_n`.
    pub fn is_k_completing(&self, k: usize) -> Result<bool> {
        if !self.is_k_preserving(k)? {
            return Ok(false);
        }
        Ok(self.join(&Self::rho(k, self.n / k))?.is_maximum())
    }

    /// Splits `Kr(π)` of a `k`-divisible `π` into its residue classes.
    ///
    /// Entry `j` (0-based) is the restriction of `Kr(π)` to positions
    /// `j+1, j+1+k, …`, relabeled to `[n/k]`.
    pub fn decompose_kreweras(&self, k: usize) -> Result<Vec<Self>> {
        if !self.is_k_divisible(k)? {
            return Err(Error::Domain(format!("partition is not {k}-divisible")));
        }
        let kr = self.kreweras();
        Ok((1..=k).map(|j| kr.restrict(&(j..=self.n).step_by(k).collect::<Vec<_>>())).collect())
    }

    /// `I_r^k`: duplicate position `r`, keep both copies in one block and put
    /// `k - 1` fresh singletons between them. The result lives on `[n + k]`.
    pub fn insert_dup(&self, r: usize, k: usize) -> Result<Self> {
        if r == 0 || r > self.n {
            return Err(Error::Domain(format!("position {r} outside 1..={}", self.n)));
        }
        if k == 0 {
            return Err(Error::Domain("gap size must be positive".into()));
        }
        let fresh = self.blocks.len();
        let labels: Vec<usize> = (1..=self.n + k)
            .map(|m| match m {
                m if m <= r => self.labels[m - 1],
                m if m < r + k => fresh + m,
                m => self.labels[m - k - 1],
            })
            .collect();
        Ok(Self::from_labels(&labels))
    }

    /// `Ĩ_r^k`: insert an interval block of size `k` occupying positions
    /// `r, …, r + k - 1`, shifting the old elements `≥ r` by `k`.
    pub fn insert_interval(&self, r: usize, k: usize) -> Result<Self> {
        if r == 0 || r > self.n + 1 {
            return Err(Error::Domain(format!("position {r} outside 1..={}", self.n + 1)));
        }
        if k == 0 {
            return Err(Error::Domain("block size must be positive".into()));
        }
        let fresh = self.blocks.len();
        let labels: Vec<usize> = (1..=self.n + k)
            .map(|m| match m {
                m if m < r => self.labels[m - 1],
                m if m < r + k => fresh,
                m => self.labels[m - k - 1],
            })
            .collect();
        Ok(Self::from_labels(&labels))
    }

    /// Writes a `k`-preserving partition as iterated `insert_dup` steps
    /// applied to `0_{base}`.
    ///
    /// Peels greedily: the smallest `r` whose next block-mate `r + sk` has
    /// only singletons in between. Steps are returned in application order.
    pub fn factor_k_preserving(&self, k: usize) -> Result<Factorization> {
        if !self.is_k_preserving(k)? {
            return Err(Error::Domain(format!("partition is not {k}-preserving")));
        }
        let mut current = self.clone();
        let mut peeled = Vec::new();
        while let Some((r, gap)) = current.innermost_pair() {
            let labels: Vec<usize> = current.labels[..r].iter().chain(&current.labels[r + gap..]).copied().collect();
            peeled.push(InsertStep { position: r, multiple: gap / k });
            current = Self::from_labels(&labels);
        }
        debug_assert!(current.is_minimum());
        peeled.reverse();
        Ok(Factorization { k, base: current.n, steps: peeled })
    }

    // Smallest r with r ~ r+gap and only singletons strictly between.
    fn innermost_pair(&self) -> Option<(usize, usize)> {
        let mut next = vec![None; self.n];
        for b in &self.blocks {
            for w in b.windows(2) {
                next[w[0] - 1] = Some(w[1]);
            }
        }
        (1..=self.n).find_map(|r| {
            let s = next[r - 1]?;
            let between_singletons = (r + 1..s).all(|e| self.blocks[self.labels[e - 1]].len() == 1);
            between_singletons.then_some((r, s - r))
        })
    }

    pub fn block_type(&self) -> TypeVector {
        let mut counts = vec![0; self.n];
        for b in &self.blocks {
            counts[b.len() - 1] += 1;
        }
        TypeVector { n: self.n, counts }
    }
}

/// One `insert_dup` step: position `r` and gap `k · multiple`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertStep {
    pub position: usize,
    pub multiple: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub k: usize,
    pub base: usize,
    pub steps: Vec<InsertStep>,
}

impl Factorization {
    /// Replays the steps on `0_{base}`.
    pub fn replay(&self) -> Result<NoncrossingPartition> {
        self.steps.iter().try_fold(NoncrossingPartition::minimum(self.base), |p, step| {
            p.insert_dup(step.position, self.k * step.multiple)
        })
    }
}

/// Block-size multiplicities `(r_1, …, r_n)` with `Σ i·r_i = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeVector {
    n: usize,
    counts: Vec<usize>,
}

impl TypeVector {
    /// `counts[i]` is the number of blocks of size `i + 1`; trailing entries
    /// may be omitted.
    pub fn new(n: usize, counts: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("type vector needs n >= 1".into()));
        }
        if counts.len() > n && counts[n..].iter().any(|&c| c != 0) {
            return Err(Error::Domain(format!("block sizes above {n} in type vector")));
        }
        let total: usize = counts.iter().enumerate().map(|(i, &c)| (i + 1) * c).sum();
        if total != n {
            return Err(Error::Domain(format!("type vector weighs {total}, expected {n}")));
        }
        let mut full = counts.to_vec();
        full.resize(n, 0);
        Ok(TypeVector { n, counts: full })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of blocks of size `size`.
    pub fn count(&self, size: usize) -> usize {
        if size == 0 || size > self.n {
            0
        } else {
            self.counts[size - 1]
        }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total_blocks(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `(size, multiplicity)` pairs with non-zero multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i + 1, c))
    }

    /// All type vectors of weight `n` (integer partitions of `n`).
    pub fn all(n: usize) -> Vec<TypeVector> {
        fn rec(rest: usize, max: usize, counts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest == 0 {
                out.push(counts.clone());
                return;
            }
            for size in (1..=max.min(rest)).rev() {
                counts[size - 1] += 1;
                rec(rest - size, size, counts, out);
                counts[size - 1] -= 1;
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut vec![0; n], &mut out);
        out.into_iter().map(|counts| TypeVector { n, counts }).collect()
    }
}

fn labels_of(n: usize, blocks: &[Vec<usize>]) -> Vec<usize> {
    let mut labels = vec![0; n];
    for (b, block) in blocks.iter().enumerate() {
        for &e in block {
            labels[e - 1] = b;
        }
    }
    labels
}

fn canonical_labels(raw: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    raw.iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

// Scans left to right with a stack of open blocks. A block seen again while
// not on top of the stack crosses the block that is.
fn find_crossing(labels: &[usize], block_count: usize) -> Option<(usize, usize)> {
    let mut last = vec![0; block_count];
    for (i, &b) in labels.iter().enumerate() {
        last[b] = i;
    }
    let mut opened = vec![false; block_count];
    let mut stack: Vec<usize> = Vec::new();
    for (i, &b) in labels.iter().enumerate() {
        if opened[b] {
            let top = *stack.last().expect("open block on stack");
            if top != b {
                return Some((b, top));
            }
        } else {
            opened[b] = true;
            stack.push(b);
        }
        if last[b] == i {
            stack.pop();
        }
    }
    None
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn write_blocks(f: &mut fmt::Formatter<'_>, blocks: &[Vec<usize>]) -> fmt::Result {
    for b in blocks {
        f.write_str("{")?;
        for (i, e) in b.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")?;
    }
    Ok(())
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, &self.blocks)
    }
}

impl fmt::Display for NoncrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, &self.blocks)
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            let blocks: Vec<Vec<usize>> =
                serde_json::from_str(s).map_err(|e| Error::Parse(format!("partition JSON: {e}")))?;
            return Self::from_blocks(blocks);
        }
        let mut blocks = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let body = rest.strip_prefix('{').ok_or_else(|| Error::Parse(format!("expected '{{' at {rest:?}")))?;
            let close = body.find('}').ok_or_else(|| Error::Parse("unterminated block".into()))?;
            let block = body[..close]
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad element {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = body[close + 1..].trim_start();
        }
        if blocks.is_empty() {
            return Err(Error::Parse("no blocks".into()));
        }
        Self::from_blocks(blocks)
    }
}

impl FromStr for NoncrossingPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<SetPartition>()?.try_into()
    }
}

impl Serialize for NoncrossingPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NoncrossingPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        Self::from_blocks(blocks).map_err(serde::de::Error::custom)
    }
}
