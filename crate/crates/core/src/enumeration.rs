// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Generators and closed-form counters for `NC(n)` and its subfamilies.
//!
//! Generation is direct: elements are placed left to right, each either
//! opening a new block or joining a block still visible on the stack of open
//! blocks (which closes everything above it). Nothing is filtered from the
//! full set-partition lattice. For the `k`-equal and `k`-divisible families
//! the generator prunes every prefix that cannot be completed, so each
//! visited node leads to at least one output.
//!
//! Output order is lexicographic in the restricted growth string
//! ([`NoncrossingPartition::labels`]); `1_n` comes first and `0_n` last.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::partition::{NoncrossingPartition, TypeVector};
use crate::rational::from_biguint;
use crate::{Error, Result};

/// Largest ground set accepted by [`iter_nc`].
pub const NC_CEILING: usize = 16;
/// Largest ground set accepted by the pruned family generators.
pub const FAMILY_CEILING: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum BlockRule {
    Any,
    Equal(usize),
    Divisible(usize),
}

impl BlockRule {
    fn deficit(self, size: usize) -> usize {
        match self {
            BlockRule::Any => 0,
            BlockRule::Equal(k) => k.saturating_sub(size),
            BlockRule::Divisible(k) => (k - size % k) % k,
        }
    }

    fn admits(self, size: usize) -> bool {
        match self {
            BlockRule::Equal(k) => size <= k,
            _ => true,
        }
    }
}

/// Stateful depth-first generator over a family of non-crossing partitions.
#[derive(Debug, Clone)]
pub struct NcIter {
    n: usize,
    rule: BlockRule,
    // partitions below this depth are fixed (used for shards)
    floor: usize,
    depth: usize,
    labels: Vec<usize>,
    sizes: Vec<usize>,
    stacks: Vec<Vec<usize>>,
    choice: Vec<usize>,
    done: bool,
}

impl NcIter {
    fn new(n: usize, rule: BlockRule) -> Self {
        let stacks = vec![Vec::new(); n + 1];
        NcIter {
            n,
            rule,
            floor: 0,
            depth: 0,
            labels: vec![0; n],
            sizes: Vec::new(),
            stacks,
            choice: vec![0; n + 1],
            done: false,
        }
    }

    /// Splits the family into independent shards, one per valid placement of
    /// the first `prefix` elements. Every member of the family appears in
    /// exactly one shard.
    pub fn shards(&self, prefix: usize) -> Vec<NcIter> {
        let prefix = prefix.min(self.n);
        if prefix == 0 {
            return vec![NcIter::new(self.n, self.rule)];
        }
        let mut out = Vec::new();
        let mut walker = NcIter::new(self.n, self.rule);
        while walker.advance_to(prefix) {
            let mut shard = walker.clone();
            shard.floor = prefix;
            out.push(shard);
            walker.retreat();
        }
        out
    }

    fn option_is_valid(&self, opt: usize) -> bool {
        let d = self.depth;
        let stack = &self.stacks[d];
        let remaining = self.n - d - 1;
        let mut needed = 0;
        if opt < stack.len() {
            let b = stack[opt];
            if !self.rule.admits(self.sizes[b] + 1) {
                return false;
            }
            // blocks above the chosen one close for good
            if stack[opt + 1..].iter().any(|&c| self.rule.deficit(self.sizes[c]) != 0) {
                return false;
            }
            for &c in &stack[..opt] {
                needed += self.rule.deficit(self.sizes[c]);
            }
            needed += self.rule.deficit(self.sizes[b] + 1);
        } else {
            for &c in stack {
                needed += self.rule.deficit(self.sizes[c]);
            }
            needed += self.rule.deficit(1);
        }
        needed <= remaining
    }

    fn apply(&mut self, opt: usize) {
        let d = self.depth;
        let mut stack = std::mem::take(&mut self.stacks[d + 1]);
        stack.clear();
        let current = &self.stacks[d];
        if opt < current.len() {
            let b = current[opt];
            self.labels[d] = b;
            self.sizes[b] += 1;
            stack.extend_from_slice(&current[..=opt]);
        } else {
            let b = self.sizes.len();
            self.labels[d] = b;
            self.sizes.push(1);
            stack.extend_from_slice(current);
            stack.push(b);
        }
        self.stacks[d + 1] = stack;
        self.depth += 1;
        self.choice[self.depth] = 0;
    }

    // Undo the placement at depth - 1 and move to its next option.
    fn retreat(&mut self) {
        self.depth -= 1;
        let b = self.labels[self.depth];
        self.sizes[b] -= 1;
        if self.sizes[b] == 0 {
            self.sizes.pop();
        }
        self.choice[self.depth] += 1;
    }

    // Walks to the next node at depth `target`; false when exhausted.
    fn advance_to(&mut self, target: usize) -> bool {
        if self.done {
            return false;
        }
        loop {
            if self.depth == target {
                return true;
            }
            let opt = self.choice[self.depth];
            if opt > self.stacks[self.depth].len() {
                if self.depth == self.floor {
                    self.done = true;
                    return false;
                }
                self.retreat();
            } else if self.option_is_valid(opt) {
                self.apply(opt);
            } else {
                self.choice[self.depth] += 1;
            }
        }
    }
}

impl Iterator for NcIter {
    type Item = NoncrossingPartition;

    fn next(&mut self) -> Option<NoncrossingPartition> {
        if !self.advance_to(self.n) {
            return None;
        }
        let out = NoncrossingPartition::from_labels(&self.labels);
        if self.depth == self.floor {
            self.done = true;
        } else {
            self.retreat();
        }
        Some(out)
    }
}

fn check_params(k: usize, n: usize) -> Result<()> {
    if k == 0 || n == 0 {
        return Err(Error::Domain(format!("need k, n >= 1 (got k = {k}, n = {n})")));
    }
    Ok(())
}

fn check_ceiling(ground: usize, ceiling: usize) -> Result<()> {
    if ground > ceiling {
        return Err(Error::ResourceLimit(format!(
            "ground set of size {ground} exceeds the enumeration ceiling {ceiling}"
        )));
    }
    Ok(())
}

/// All of `NC(n)`; `n <= NC_CEILING`.
pub fn iter_nc(n: usize) -> Result<NcIter> {
    check_params(1, n)?;
    check_ceiling(n, NC_CEILING)?;
    Ok(NcIter::new(n, BlockRule::Any))
}

/// `NC_k(n)`: partitions of `[kn]` with all blocks of size `k`.
pub fn iter_k_equal(k: usize, n: usize) -> Result<NcIter> {
    check_params(k, n)?;
    check_ceiling(k * n, FAMILY_CEILING)?;
    Ok(NcIter::new(k * n, BlockRule::Equal(k)))
}

/// `NC^k(n)`: partitions of `[kn]` with all block sizes divisible by `k`.
pub fn iter_k_divisible(k: usize, n: usize) -> Result<NcIter> {
    check_params(k, n)?;
    check_ceiling(k * n, FAMILY_CEILING)?;
    Ok(NcIter::new(k * n, BlockRule::Divisible(k)))
}

/// `k`-equal partitions whose Kreweras complement has only pairs and
/// singletons.
#[derive(Debug, Clone)]
pub struct Nc21Iter {
    inner: NcIter,
}

impl Iterator for Nc21Iter {
    type Item = NoncrossingPartition;

    fn next(&mut self) -> Option<NoncrossingPartition> {
        self.inner.by_ref().find(|p| p.kreweras().blocks().iter().all(|b| b.len() <= 2))
    }
}

pub fn iter_nc21(k: usize, n: usize) -> Result<Nc21Iter> {
    Ok(Nc21Iter { inner: iter_k_equal(k, n)? })
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

// Quotients here are provably integral; a remainder means a transcription bug.
fn exact_div(a: BigUint, b: BigUint) -> BigUint {
    let (q, r) = a.div_rem(&b);
    assert!(r.is_zero(), "inexact integer division");
    q
}

/// Catalan number `C_n = |NC(n)|`.
pub fn count_catalan(n: usize) -> BigUint {
    exact_div(binomial(2 * n, n), BigUint::from(n + 1))
}

/// Fuss–Catalan `|NC_k(n)| = binom(kn, n) / ((k-1)n + 1)`.
pub fn count_k_equal(k: usize, n: usize) -> BigUint {
    assert!(k >= 1, "k must be positive");
    exact_div(binomial(k * n, n), BigUint::from((k - 1) * n + 1))
}

/// `|NC^k(n)| = binom((k+1)n, n) / (kn + 1)`.
pub fn count_k_divisible(k: usize, n: usize) -> BigUint {
    exact_div(binomial((k + 1) * n, n), BigUint::from(k * n + 1))
}

/// `|NC(k,n)_{2,1}| = k ((k-1)n)! / ((n(k-2)+2)! (n-1)!)`.
///
/// For `k = 1` and `n >= 3` the lower factorial argument is negative; there
/// the family is empty (`Kr(0_n) = 1_n` has a block of size `n`).
pub fn count_nc21(k: usize, n: usize) -> BigUint {
    assert!(k >= 1 && n >= 1, "k, n must be positive");
    let singles = (n * k + 2).checked_sub(2 * n);
    match singles {
        None => BigUint::zero(),
        Some(singles) => exact_div(BigUint::from(k) * factorial((k - 1) * n), factorial(singles) * factorial(n - 1)),
    }
}

/// Number of partitions in `NC(n)` of the given type:
/// `n! / ((n + 1 - |π|)! Π r_i!)`.
pub fn count_type(t: &TypeVector) -> BigUint {
    let n = t.n();
    let blocks = t.total_blocks();
    let denom = t.counts().iter().fold(factorial(n + 1 - blocks), |acc, &r| acc * factorial(r));
    exact_div(factorial(n), denom)
}

/// Number of `π ∈ NC(n)` of type `t` whose complement has type `b`:
/// `n (|π|-1)! (|Kr π|-1)! / (Π r_i! Π b_j!)`, zero when the block counts
/// are incompatible (`|π| + |Kr π| != n + 1`).
pub fn count_pair_type(t: &TypeVector, b: &TypeVector) -> BigUint {
    let n = t.n();
    if b.n() != n || t.total_blocks() + b.total_blocks() != n + 1 {
        return BigUint::zero();
    }
    let numer = BigUint::from(n) * factorial(t.total_blocks() - 1) * factorial(b.total_blocks() - 1);
    let denom = t.counts().iter().chain(b.counts()).fold(BigUint::one(), |acc, &r| acc * factorial(r));
    exact_div(numer, denom)
}

/// `|NC(k,n)_{2,1}| / |NC_k(n)|` as an exact rational.
pub fn nc21_ratio(k: usize, n: usize) -> BigRational {
    from_biguint(&count_nc21(k, n)) / from_biguint(&count_k_equal(k, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Nc,
    KEqual,
    KDivisible,
    Nc21,
    Type,
    PairType,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Nc => "nc",
            Family::KEqual => "k-equal",
            Family::KDivisible => "k-divisible",
            Family::Nc21 => "nc21",
            Family::Type => "type",
            Family::PairType => "pair-type",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "nc" => Family::Nc,
            "k-equal" => Family::KEqual,
            "k-divisible" => Family::KDivisible,
            "nc21" => Family::Nc21,
            "type" => Family::Type,
            "pair-type" => Family::PairType,
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        })
    }
}

/// A counted family together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub family: Family,
    pub n: usize,
    pub k: Option<usize>,
    pub types: Vec<TypeVector>,
    pub count: BigUint,
}

impl CountTable {
    /// Counts a size-parameterised family (`nc`, `k-equal`, `k-divisible`,
    /// `nc21`). `k` is ignored for `nc`.
    pub fn family(family: Family, k: usize, n: usize) -> Result<Self> {
        check_params(k, n)?;
        let (count, k) = match family {
            Family::Nc => (count_catalan(n), None),
            Family::KEqual => (count_k_equal(k, n), Some(k)),
            Family::KDivisible => (count_k_divisible(k, n), Some(k)),
            Family::Nc21 => (count_nc21(k, n), Some(k)),
            Family::Type | Family::PairType => {
                return Err(Error::Domain(format!("family {family} is indexed by type vectors")))
            }
        };
        Ok(CountTable { family, n, k, types: Vec::new(), count })
    }

    pub fn of_type(t: &TypeVector) -> Self {
        CountTable { family: Family::Type, n: t.n(), k: None, types: vec![t.clone()], count: count_type(t) }
    }

    pub fn of_pair_type(t: &TypeVector, b: &TypeVector) -> Self {
        CountTable {
            family: Family::PairType,
            n: t.n(),
            k: None,
            types: vec![t.clone(), b.clone()],
            count: count_pair_type(t, b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::SetPartition;
    use std::collections::{BTreeMap, HashSet};

    // Bell-number sized brute force: every restricted growth string.
    fn all_set_partitions(n: usize) -> Vec<SetPartition> {
        fn rec(i: usize, n: usize, labels: &mut Vec<usize>, max: usize, out: &mut Vec<SetPartition>) {
            if i == n {
                let mut blocks = vec![Vec::new(); max];
                for (e, &l) in labels.iter().enumerate() {
                    blocks[l].push(e + 1);
                }
                out.push(SetPartition::new(n, blocks).unwrap());
                return;
            }
            for l in 0..=max {
                labels.push(l);
                rec(i + 1, n, labels, max.max(l + 1), out);
                labels.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, &mut Vec::new(), 0, &mut out);
        out
    }

    #[test]
    fn small_nc_counts() {
        assert_eq!(iter_nc(3).unwrap().count(), 5);
        let one: Vec<_> = iter_nc(1).unwrap().collect();
        assert_eq!(one, vec![NoncrossingPartition::maximum(1)]);
    }

    #[test]
    fn nc_matches_filtered_bell_enumeration() {
        for n in 1..=7 {
            let brute: HashSet<String> =
                all_set_partitions(n).into_iter().filter(SetPartition::is_noncrossing).map(|p| p.to_string()).collect();
            let generated: Vec<String> = iter_nc(n).unwrap().map(|p| p.to_string()).collect();
            let unique: HashSet<String> = generated.iter().cloned().collect();
            assert_eq!(unique.len(), generated.len(), "duplicates at n = {n}");
            assert_eq!(unique, brute, "n = {n}");
        }
        assert_eq!(all_set_partitions(4).len(), 15);
        assert_eq!(iter_nc(4).unwrap().count(), 14);
    }

    #[test]
    fn output_order_is_rgs_lexicographic() {
        let labels: Vec<Vec<usize>> = iter_nc(6).unwrap().map(|p| p.labels().to_vec()).collect();
        assert!(labels.windows(2).all(|w| w[0] < w[1]));
        assert!(labels[0].iter().all(|&l| l == 0));
    }

    #[test]
    fn families_match_filters() {
        for k in 1..=4 {
            for n in 1..=(10 / k) {
                let all: Vec<_> = iter_nc(k * n).unwrap().collect();
                let eq: Vec<_> = all.iter().filter(|p| p.is_k_equal(k).unwrap()).cloned().collect();
                let div: Vec<_> = all.iter().filter(|p| p.is_k_divisible(k).unwrap()).cloned().collect();
                assert_eq!(iter_k_equal(k, n).unwrap().collect::<Vec<_>>(), eq, "k={k} n={n}");
                assert_eq!(iter_k_divisible(k, n).unwrap().collect::<Vec<_>>(), div, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn family_examples() {
        assert_eq!(iter_k_equal(2, 3).unwrap().count(), 5);
        assert_eq!(iter_k_divisible(2, 2).unwrap().count(), 3);
        for k in 1..5 {
            let v: Vec<_> = iter_k_equal(k, 1).unwrap().collect();
            assert_eq!(v, vec![NoncrossingPartition::maximum(k)]);
        }
    }

    #[test]
    fn ceilings_and_domain() {
        assert!(matches!(iter_nc(NC_CEILING + 1), Err(Error::ResourceLimit(_))));
        assert!(matches!(iter_k_equal(5, 5), Err(Error::ResourceLimit(_))));
        assert!(matches!(iter_nc(0), Err(Error::Domain(_))));
        assert!(matches!(iter_k_divisible(0, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn shards_partition_the_stream() {
        for (iter, depth) in [(iter_nc(7).unwrap(), 3), (iter_k_divisible(2, 4).unwrap(), 2), (iter_nc(4).unwrap(), 4)]
        {
            let whole: Vec<_> = iter.clone().collect();
            let mut pieces: Vec<_> = iter.shards(depth).into_iter().flatten().collect();
            assert_eq!(pieces.len(), whole.len());
            pieces.sort();
            let mut sorted = whole.clone();
            sorted.sort();
            assert_eq!(pieces, sorted);
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(count_k_divisible(2, 2), BigUint::from(3u32));
        assert_eq!(count_k_equal(3, 4), BigUint::from(55u32));
        assert_eq!(count_catalan(12), BigUint::from(208_012u32));
        assert_eq!(count_nc21(2, 2), BigUint::from(2u32));
        assert_eq!(count_nc21(1, 1), BigUint::one());
        assert_eq!(count_nc21(1, 2), BigUint::one());
        assert_eq!(count_nc21(1, 3), BigUint::zero());
    }

    #[test]
    fn nc21_formula_matches_enumeration() {
        for k in 1..=6 {
            for n in 1..=(12 / k) {
                let enumerated = iter_nc21(k, n).unwrap().count();
                assert_eq!(count_nc21(k, n), BigUint::from(enumerated), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn type_counts() {
        let pairs = TypeVector::new(4, &[0, 2]).unwrap();
        assert_eq!(count_type(&pairs), BigUint::from(2u32));
        assert_eq!(count_type(&TypeVector::new(5, &[0, 0, 0, 0, 1]).unwrap()), BigUint::one());
        assert_eq!(count_type(&TypeVector::new(5, &[5]).unwrap()), BigUint::one());
        for n in 1..=8 {
            let mut by_type: BTreeMap<TypeVector, usize> = BTreeMap::new();
            for p in iter_nc(n).unwrap() {
                *by_type.entry(p.block_type()).or_default() += 1;
            }
            for t in TypeVector::all(n) {
                let seen = by_type.get(&t).copied().unwrap_or(0);
                assert_eq!(count_type(&t), BigUint::from(seen), "{t:?}");
            }
        }
    }

    #[test]
    fn pair_type_edges() {
        let top = TypeVector::new(4, &[0, 0, 0, 1]).unwrap();
        let bottom = TypeVector::new(4, &[4]).unwrap();
        assert_eq!(count_pair_type(&top, &bottom), BigUint::one());
        assert_eq!(count_pair_type(&top, &top), BigUint::zero());
    }

    #[test]
    fn ratio_examples() {
        for k in 1..10 {
            assert!(nc21_ratio(k, 1).is_one());
        }
        assert!(nc21_ratio(2, 2).is_one());
        assert!(nc21_ratio(100, 3) > BigRational::new(99.into(), 100.into()));
    }

    #[test]
    fn count_table_dispatch() {
        let t = CountTable::family(Family::KDivisible, 2, 2).unwrap();
        assert_eq!(t.count, BigUint::from(3u32));
        assert!(CountTable::family(Family::Type, 2, 2).is_err());
        assert_eq!("nc21".parse::<Family>().unwrap(), Family::Nc21);
    }
}
