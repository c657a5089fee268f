// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Free multiplicative and additive convolution of truncated measures.
//!
//! Two independent engines compute the free cumulants of `μ_1 ⊠ ⋯ ⊠ μ_k`:
//!
//! * **iterated**: fold the pairwise sum
//!   `κ_n(μ ⊠ ν) = Σ_{π ∈ NC(n)} κ_π(μ) κ_{Kr(π)}(ν)` from left to right;
//! * **direct**: sum over `k`-equal partitions `π` of `[kn]` of
//!   `κ_{π_1}(μ_1)⋯κ_{π_k}(μ_k)`, where `π_1 ∪ ⋯ ∪ π_k = Kr(π)` is the residue
//!   decomposition. Summing over `k`-divisible partitions instead gives the
//!   moments.
//!
//! Both engines group partitions by block types first. The grouped tables
//! depend only on `(k, n)` and are cached process-wide behind a `RwLock`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cumulants::{
    boolean_cumulants_from_moments, check_order, free_cumulants_from_moments, moments_from_boolean_cumulants,
    moments_from_free_cumulants, CumulantSequence, Flavor, MomentSequence,
};
use crate::enumeration::{iter_k_divisible, iter_k_equal, iter_nc, FAMILY_CEILING, NC_CEILING};
use crate::partition::TypeVector;
use crate::rational::pow;
use crate::{Error, Result};

/// A compactly supported law, known through a truncated moment sequence.
///
/// Moments and free cumulants are both stored and always agree to the
/// truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureSpec {
    name: Option<String>,
    moments: MomentSequence,
    free: CumulantSequence,
    support_bound: Option<BigRational>,
    mean: Option<BigRational>,
    variance: Option<BigRational>,
}

impl MeasureSpec {
    pub fn from_moments(moments: MomentSequence) -> Self {
        let free = free_cumulants_from_moments(&moments);
        MeasureSpec { name: None, moments, free, support_bound: None, mean: None, variance: None }
    }

    pub fn from_cumulants(c: CumulantSequence) -> Self {
        let moments = match c.flavor() {
            Flavor::Free => moments_from_free_cumulants(&c),
            Flavor::Boolean => moments_from_boolean_cumulants(&c),
        }
        .expect("flavor checked");
        match c.flavor() {
            Flavor::Free => {
                MeasureSpec { name: None, moments, free: c, support_bound: None, mean: None, variance: None }
            }
            Flavor::Boolean => Self::from_moments(moments),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Declares `supp μ ⊆ [0, L]`.
    pub fn with_support_bound(mut self, bound: BigRational) -> Result<Self> {
        if !bound.is_positive() {
            return Err(Error::Domain(format!("support bound must be positive, got {bound}")));
        }
        self.support_bound = Some(bound);
        Ok(self)
    }

    /// Declares mean and/or variance; both must match the sequence data.
    pub fn with_declared(mut self, mean: Option<BigRational>, variance: Option<BigRational>) -> Result<Self> {
        if let Some(m) = &mean {
            if m != &self.moments.get(1) {
                return Err(Error::Domain(format!("declared mean {m} but m_1 = {}", self.moments.get(1))));
            }
        }
        if let Some(v) = &variance {
            let actual = self.variance().ok_or(Error::Truncation { needed: 2, available: self.order() })?;
            if v != &actual {
                return Err(Error::Domain(format!("declared variance {v} but m_2 - m_1^2 = {actual}")));
            }
        }
        self.mean = mean;
        self.variance = variance;
        Ok(self)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.moments.order()
    }

    pub fn moments(&self) -> &MomentSequence {
        &self.moments
    }

    pub fn free_cumulants(&self) -> &CumulantSequence {
        &self.free
    }

    pub fn boolean_cumulants(&self) -> CumulantSequence {
        boolean_cumulants_from_moments(&self.moments)
    }

    pub fn support_bound(&self) -> Option<&BigRational> {
        self.support_bound.as_ref()
    }

    pub fn declared_mean(&self) -> Option<&BigRational> {
        self.mean.as_ref()
    }

    pub fn declared_variance(&self) -> Option<&BigRational> {
        self.variance.as_ref()
    }

    pub fn mean(&self) -> BigRational {
        self.moments.get(1)
    }

    pub fn variance(&self) -> Option<BigRational> {
        (self.order() >= 2).then(|| self.moments.get(2) - pow(&self.moments.get(1), 2))
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        check_order(order, self.order())?;
        Ok(MeasureSpec { moments: self.moments.truncate(order)?, free: self.free.truncate(order)?, ..self.clone() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Direct,
    Iterated,
    /// Direct when `kN` is within the direct ceiling, iterated otherwise.
    #[default]
    Auto,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Direct => "direct",
            Strategy::Iterated => "iterated",
            Strategy::Auto => "auto",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Strategy::Direct),
            "iterated" => Ok(Strategy::Iterated),
            "auto" => Ok(Strategy::Auto),
            other => Err(Error::Parse(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Default limit on `kN` for direct `k`-fold evaluation.
pub const DIRECT_CEILING: usize = 12;

// (type of π, type of Kr π, multiplicity) over NC(n)
type PairTable = Vec<(TypeVector, TypeVector, BigUint)>;
// (types of π_1..π_k, multiplicity) over NC_k(n) or NC^k(n)
type DirectTable = Vec<(Vec<TypeVector>, BigUint)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum DirectFamily {
    Equal,
    Divisible,
}

fn pair_table(n: usize) -> Result<Arc<PairTable>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<PairTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().expect("cache poisoned").get(&n) {
        return Ok(t.clone());
    }
    let mut grouped: HashMap<(TypeVector, TypeVector), BigUint> = HashMap::new();
    for p in iter_nc(n)? {
        *grouped.entry((p.block_type(), p.kreweras().block_type())).or_default() += 1u32;
    }
    let mut table: PairTable = grouped.into_iter().map(|((a, b), c)| (a, b, c)).collect();
    table.sort();
    let table = Arc::new(table);
    cache.write().expect("cache poisoned").insert(n, table.clone());
    Ok(table)
}

type DirectCache = HashMap<(DirectFamily, usize, usize), Arc<DirectTable>>;

fn direct_table(family: DirectFamily, k: usize, n: usize) -> Result<Arc<DirectTable>> {
    static CACHE: OnceLock<RwLock<DirectCache>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (family, k, n);
    if let Some(t) = cache.read().expect("cache poisoned").get(&key) {
        return Ok(t.clone());
    }
    let iter = match family {
        DirectFamily::Equal => iter_k_equal(k, n)?,
        DirectFamily::Divisible => iter_k_divisible(k, n)?,
    };
    let mut grouped: HashMap<Vec<TypeVector>, BigUint> = HashMap::new();
    for p in iter {
        let types = p.decompose_kreweras(k)?.iter().map(|q| q.block_type()).collect();
        *grouped.entry(types).or_default() += 1u32;
    }
    let mut table: DirectTable = grouped.into_iter().collect();
    table.sort();
    let table = Arc::new(table);
    cache.write().expect("cache poisoned").insert(key, table.clone());
    Ok(table)
}

// Π_s c_s^{r_s} for a block type.
fn type_product(c: &CumulantSequence, t: &TypeVector) -> BigRational {
    let mut acc = BigRational::one();
    for (size, mult) in t.iter() {
        let v = c.get(size);
        if v.is_zero() {
            return BigRational::zero();
        }
        acc *= pow(v, mult);
    }
    acc
}

fn weighted(count: &BigUint, value: BigRational) -> BigRational {
    value * BigRational::from_integer(BigInt::from(count.clone()))
}

/// Configurable convolution engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convolver {
    /// Largest `kN` accepted in direct mode.
    pub direct_ceiling: usize,
}

impl Default for Convolver {
    fn default() -> Self {
        Convolver { direct_ceiling: DIRECT_CEILING }
    }
}

impl Convolver {
    pub fn with_direct_ceiling(direct_ceiling: usize) -> Self {
        Convolver { direct_ceiling: direct_ceiling.min(FAMILY_CEILING) }
    }

    fn cumulants_to(specs: &[MeasureSpec], order: usize) -> Result<Vec<CumulantSequence>> {
        if specs.is_empty() {
            return Err(Error::Domain("need at least one measure".into()));
        }
        if order == 0 {
            return Err(Error::Domain("truncation order must be >= 1".into()));
        }
        specs.iter().map(|s| s.free_cumulants().truncate(order)).collect()
    }

    fn pair_cumulants(a: &CumulantSequence, b: &CumulantSequence) -> Result<CumulantSequence> {
        let order = a.order().min(b.order());
        if order > NC_CEILING {
            return Err(Error::ResourceLimit(format!("pairwise engine limited to order {NC_CEILING}")));
        }
        let mut out = Vec::with_capacity(order);
        for n in 1..=order {
            let mut total = BigRational::zero();
            for (ta, tb, count) in pair_table(n)?.iter() {
                let va = type_product(a, ta);
                if va.is_zero() {
                    continue;
                }
                total += weighted(count, va * type_product(b, tb));
            }
            out.push(total);
        }
        CumulantSequence::free(out)
    }

    /// `μ ⊠ ν` to order `order` through the pairwise Kreweras sum.
    pub fn boxtimes_pair(&self, a: &MeasureSpec, b: &MeasureSpec, order: usize) -> Result<MeasureSpec> {
        let cs = Self::cumulants_to(&[a.clone(), b.clone()], order)?;
        Ok(MeasureSpec::from_cumulants(Self::pair_cumulants(&cs[0], &cs[1])?))
    }

    /// Free cumulants of `μ^{⊠1}, …, μ^{⊠k_max}` by repeated pairwise folds.
    pub fn boxtimes_powers(&self, spec: &MeasureSpec, k_max: usize, order: usize) -> Result<Vec<CumulantSequence>> {
        let base = Self::cumulants_to(std::slice::from_ref(spec), order)?.remove(0);
        let mut out = Vec::with_capacity(k_max);
        let mut current = base.clone();
        for k in 1..=k_max {
            if k > 1 {
                current = Self::pair_cumulants(&current, &base)?;
            }
            out.push(current.clone());
        }
        Ok(out)
    }

    fn check_direct(&self, k: usize, order: usize) -> Result<()> {
        if k * order > self.direct_ceiling {
            return Err(Error::ResourceLimit(format!(
                "direct evaluation needs kN = {} <= {}; use the iterated strategy",
                k * order,
                self.direct_ceiling
            )));
        }
        Ok(())
    }

    fn direct_sum(family: DirectFamily, cs: &[CumulantSequence], n: usize) -> Result<BigRational> {
        let mut total = BigRational::zero();
        'rows: for (types, count) in direct_table(family, cs.len(), n)?.iter() {
            let mut term = BigRational::one();
            for (c, t) in cs.iter().zip(types) {
                term *= type_product(c, t);
                if term.is_zero() {
                    continue 'rows;
                }
            }
            total += weighted(count, term);
        }
        Ok(total)
    }

    /// Direct `k`-fold evaluation: `(κ_n, m_n)` from the `k`-equal and
    /// `k`-divisible sums respectively.
    pub fn boxtimes_direct_sequences(
        &self,
        specs: &[MeasureSpec],
        order: usize,
    ) -> Result<(CumulantSequence, MomentSequence)> {
        let cs = Self::cumulants_to(specs, order)?;
        self.check_direct(cs.len(), order)?;
        let mut kappa = Vec::with_capacity(order);
        let mut moments = Vec::with_capacity(order);
        for n in 1..=order {
            kappa.push(Self::direct_sum(DirectFamily::Equal, &cs, n)?);
            moments.push(Self::direct_sum(DirectFamily::Divisible, &cs, n)?);
        }
        Ok((CumulantSequence::free(kappa)?, MomentSequence::new(moments)?))
    }

    /// `μ_1 ⊠ ⋯ ⊠ μ_k` to order `order`.
    pub fn boxtimes_k(&self, specs: &[MeasureSpec], order: usize, strategy: Strategy) -> Result<MeasureSpec> {
        let cs = Self::cumulants_to(specs, order)?;
        let direct = match strategy {
            Strategy::Direct => true,
            Strategy::Iterated => false,
            Strategy::Auto => cs.len() * order <= self.direct_ceiling,
        };
        if direct {
            let (kappa, moments) = self.boxtimes_direct_sequences(specs, order)?;
            let spec = MeasureSpec::from_cumulants(kappa);
            debug_assert_eq!(spec.moments(), &moments);
            Ok(spec)
        } else {
            let mut iter = cs.into_iter();
            let first = iter.next().expect("non-empty");
            let folded = iter.try_fold(first, |acc, c| Self::pair_cumulants(&acc, &c))?;
            Ok(MeasureSpec::from_cumulants(folded))
        }
    }

    /// Boolean cumulants of `μ_1 ⊠ ⋯ ⊠ μ_k` from the `k`-equal sum with
    /// Boolean cumulants of the factors in the functional.
    pub fn boxtimes_k_boolean(&self, specs: &[MeasureSpec], order: usize) -> Result<CumulantSequence> {
        if specs.is_empty() || order == 0 {
            return Err(Error::Domain("need at least one measure and order >= 1".into()));
        }
        let bs: Vec<CumulantSequence> =
            specs.iter().map(|s| s.boolean_cumulants().truncate(order)).collect::<Result<_>>()?;
        self.check_direct(bs.len(), order)?;
        let values = (1..=order).map(|n| Self::direct_sum(DirectFamily::Equal, &bs, n)).collect::<Result<Vec<_>>>()?;
        CumulantSequence::boolean(values)
    }
}

pub fn boxtimes_pair(a: &MeasureSpec, b: &MeasureSpec, order: usize) -> Result<MeasureSpec> {
    Convolver::default().boxtimes_pair(a, b, order)
}

pub fn boxtimes_k(specs: &[MeasureSpec], order: usize, strategy: Strategy) -> Result<MeasureSpec> {
    Convolver::default().boxtimes_k(specs, order, strategy)
}

pub fn boxtimes_k_boolean(specs: &[MeasureSpec], order: usize) -> Result<CumulantSequence> {
    Convolver::default().boxtimes_k_boolean(specs, order)
}

/// `μ_1 ⊞ ⋯ ⊞ μ_k`: free cumulants add.
pub fn boxplus_k(specs: &[MeasureSpec], order: usize) -> Result<MeasureSpec> {
    let cs = Convolver::cumulants_to(specs, order)?;
    let values = (1..=order).map(|n| cs.iter().map(|c| c.get(n).clone()).sum()).collect();
    Ok(MeasureSpec::from_cumulants(CumulantSequence::free(values)?))
}

/// `μ ⊎ ⋯ ⊎ μ` (`copies` times): Boolean cumulants scale by `copies`.
pub fn boolean_power(spec: &MeasureSpec, copies: usize, order: usize) -> Result<MeasureSpec> {
    let b = spec.boolean_cumulants().truncate(order)?;
    let scale = BigRational::from_integer(BigInt::from(copies));
    let values = b.values().iter().map(|x| x * &scale).collect();
    Ok(MeasureSpec::from_cumulants(CumulantSequence::boolean(values)?))
}

/// `D_c μ`, the push-forward under `x ↦ cx`.
pub fn dilate(spec: &MeasureSpec, c: &BigRational, order: usize) -> Result<MeasureSpec> {
    if !c.is_positive() {
        return Err(Error::Domain(format!("dilation factor must be positive, got {c}")));
    }
    let free = spec.free_cumulants().truncate(order)?;
    let values = free.values().iter().enumerate().map(|(i, x)| x * pow(c, i + 1)).collect();
    let mut out = MeasureSpec::from_cumulants(CumulantSequence::free(values)?);
    if let Some(l) = spec.support_bound() {
        out = out.with_support_bound(l * c)?;
    }
    Ok(out)
}
