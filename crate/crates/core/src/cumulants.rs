// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Moment and cumulant sequences, their transforms, and the Möbius function
//! of `NC(n)`.
//!
//! Sequences are truncated: a sequence of order `N` stores `x_1, …, x_N` and
//! every transform is exact up to that order. `m_0 = 1` is implicit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::enumeration::{count_catalan, iter_nc, NC_CEILING};
use crate::partition::NoncrossingPartition;
use crate::rational::from_biguint;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence {
    values: Vec<BigRational>,
}

impl MomentSequence {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("moment sequence needs order >= 1".into()));
        }
        Ok(MomentSequence { values })
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// `m_n`, with `m_0 = 1`. Panics beyond the truncation order.
    pub fn get(&self, n: usize) -> BigRational {
        if n == 0 {
            BigRational::one()
        } else {
            self.values[n - 1].clone()
        }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Truncates to order `n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        check_order(n, self.order())?;
        MomentSequence::new(self.values[..n].to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Free,
    Boolean,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulantSequence {
    flavor: Flavor,
    values: Vec<BigRational>,
}

impl CumulantSequence {
    pub fn new(flavor: Flavor, values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("cumulant sequence needs order >= 1".into()));
        }
        Ok(CumulantSequence { flavor, values })
    }

    pub fn free(values: Vec<BigRational>) -> Result<Self> {
        Self::new(Flavor::Free, values)
    }

    pub fn boolean(values: Vec<BigRational>) -> Result<Self> {
        Self::new(Flavor::Boolean, values)
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// `κ_n` for `1 <= n <= order`.
    pub fn get(&self, n: usize) -> &BigRational {
        &self.values[n - 1]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn truncate(&self, n: usize) -> Result<Self> {
        check_order(n, self.order())?;
        CumulantSequence::new(self.flavor, self.values[..n].to_vec())
    }

    /// `κ_π = Π_V κ_{|V|}`.
    pub fn on_partition(&self, p: &NoncrossingPartition) -> Result<BigRational> {
        let mut acc = BigRational::one();
        for b in p.blocks() {
            check_order(b.len(), self.order())?;
            acc *= self.get(b.len());
        }
        Ok(acc)
    }
}

pub(crate) fn check_order(needed: usize, available: usize) -> Result<()> {
    if needed > available {
        return Err(Error::Truncation { needed, available });
    }
    Ok(())
}

/// Free random variables given by their cumulant sequences; mixed cumulants
/// vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeFamily {
    vars: Vec<CumulantSequence>,
}

impl FreeFamily {
    pub fn new(vars: Vec<CumulantSequence>) -> Result<Self> {
        let first = vars.first().ok_or_else(|| Error::Domain("free family needs a variable".into()))?;
        if vars.iter().any(|v| v.flavor != first.flavor || v.order() != first.order()) {
            return Err(Error::Domain("family members must share flavor and order".into()));
        }
        Ok(FreeFamily { vars })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn order(&self) -> usize {
        self.vars[0].order()
    }

    pub fn var(&self, i: usize) -> &CumulantSequence {
        &self.vars[i - 1]
    }
}

/// `κ_π(a_{ℓ(1)}, …, a_{ℓ(m)})` for the 1-based variable labels `ℓ`; a block
/// with mixed labels contributes zero.
pub fn cumulant_on_partition(family: &FreeFamily, p: &NoncrossingPartition, labels: &[usize]) -> Result<BigRational> {
    if labels.len() != p.n() {
        return Err(Error::GroundMismatch { left: p.n(), right: labels.len() });
    }
    if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l > family.len()) {
        return Err(Error::Domain(format!("label {bad} outside 1..={}", family.len())));
    }
    let mut acc = BigRational::one();
    for b in p.blocks() {
        let var = labels[b[0] - 1];
        if b.iter().any(|&e| labels[e - 1] != var) {
            return Ok(BigRational::zero());
        }
        check_order(b.len(), family.order())?;
        acc *= family.var(var).get(b.len());
    }
    Ok(acc)
}

// Coefficients of z^0..=z^max in (Σ_{i>=0} m_i z^i)^power.
fn series_power(m: &[BigRational], power: usize, max: usize) -> Vec<BigRational> {
    let mut series = vec![BigRational::zero(); max + 1];
    series[0] = BigRational::one();
    for _ in 0..power {
        let mut next = vec![BigRational::zero(); max + 1];
        for (i, a) in series.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for j in 0..=max - i {
                let b = if j == 0 { BigRational::one() } else { m[j - 1].clone() };
                if !b.is_zero() {
                    next[i + j] += a * b;
                }
            }
        }
        series = next;
    }
    series
}

/// `m_n = Σ_{π ∈ NC(n)} κ_π`, via the first-block recursion
/// `m_n = Σ_s κ_s [z^{n-s}] M(z)^s`.
pub fn moments_from_free_cumulants(c: &CumulantSequence) -> Result<MomentSequence> {
    if c.flavor != Flavor::Free {
        return Err(Error::Domain("expected free cumulants".into()));
    }
    let order = c.order();
    let mut m: Vec<BigRational> = Vec::with_capacity(order);
    for n in 1..=order {
        let mut total = BigRational::zero();
        for s in 1..=n {
            let coeff = &series_power(&m, s, n - s)[n - s];
            total += c.get(s) * coeff;
        }
        m.push(total);
    }
    MomentSequence::new(m)
}

/// Inverse of [`moments_from_free_cumulants`], by the triangular recursion
/// `κ_n = m_n - Σ_{π ≠ 1_n} κ_π`.
pub fn free_cumulants_from_moments(m: &MomentSequence) -> CumulantSequence {
    let order = m.order();
    let mut k: Vec<BigRational> = Vec::with_capacity(order);
    for n in 1..=order {
        let mut rest = BigRational::zero();
        for s in 1..n {
            rest += &k[s - 1] * &series_power(&m.values, s, n - s)[n - s];
        }
        k.push(m.get(n) - rest);
    }
    CumulantSequence { flavor: Flavor::Free, values: k }
}

/// `m_n = Σ` over interval partitions of `Π_V b_{|V|}`.
pub fn moments_from_boolean_cumulants(b: &CumulantSequence) -> Result<MomentSequence> {
    if b.flavor != Flavor::Boolean {
        return Err(Error::Domain("expected Boolean cumulants".into()));
    }
    let mut m: Vec<BigRational> = Vec::with_capacity(b.order());
    for n in 1..=b.order() {
        let total = (1..=n).fold(BigRational::zero(), |acc, s| {
            let tail = if s == n { BigRational::one() } else { m[n - s - 1].clone() };
            acc + b.get(s) * tail
        });
        m.push(total);
    }
    MomentSequence::new(m)
}

pub fn boolean_cumulants_from_moments(m: &MomentSequence) -> CumulantSequence {
    let mut b: Vec<BigRational> = Vec::with_capacity(m.order());
    for n in 1..=m.order() {
        let rest = (1..n).fold(BigRational::zero(), |acc, s| acc + &b[s - 1] * m.get(n - s));
        b.push(m.get(n) - rest);
    }
    CumulantSequence { flavor: Flavor::Boolean, values: b }
}

fn signed_catalan(j: usize) -> BigInt {
    let c = BigInt::from(count_catalan(j));
    if j.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// `Mob[π, 1_n]`.
///
/// The interval `[π, 1_n]` is anti-isomorphic to `[0_n, Kr(π)]`, which
/// factors as `Π_V NC(|V|)` over the blocks of `Kr(π)`; on each factor
/// `Mob[0_j, 1_j] = (-1)^{j-1} C_{j-1}`.
pub fn mobius_to_top(p: &NoncrossingPartition) -> BigInt {
    p.kreweras().blocks().iter().map(|b| signed_catalan(b.len() - 1)).product()
}

/// Largest `n` for [`mobius_to_top_by_inversion`].
pub const MOBIUS_INVERSION_CEILING: usize = 10;

/// `Mob[π, 1_n]` by explicit zeta inversion over the enumerated lattice:
/// `Mob[1,1] = 1` and `Mob[σ,1] = -Σ_{σ < τ} Mob[τ,1]`.
pub fn mobius_to_top_by_inversion(p: &NoncrossingPartition) -> Result<BigInt> {
    let n = p.n();
    if n > MOBIUS_INVERSION_CEILING {
        return Err(Error::ResourceLimit(format!("zeta inversion limited to n <= {MOBIUS_INVERSION_CEILING}")));
    }
    // coarser partitions have fewer blocks; process by decreasing coarseness
    let mut lattice: Vec<NoncrossingPartition> = iter_nc(n)?.filter(|q| p.leq(q).unwrap_or(false)).collect();
    lattice.sort_by_key(NoncrossingPartition::len);
    let mut mu: Vec<BigInt> = Vec::with_capacity(lattice.len());
    for (i, sigma) in lattice.iter().enumerate() {
        let value = if sigma.is_maximum() {
            BigInt::one()
        } else {
            let above: BigInt = lattice[..i]
                .iter()
                .zip(&mu)
                .filter(|(tau, _)| tau.len() < sigma.len() && sigma.leq(tau).unwrap_or(false))
                .map(|(_, m)| m.clone())
                .sum();
            -above
        };
        mu.push(value);
    }
    Ok(mu.pop().expect("p itself is in its own upper interval"))
}

/// `κ_n = Σ_{π ∈ NC(n)} m_π Mob[π, 1_n]`, by enumeration.
pub fn free_cumulants_via_mobius(m: &MomentSequence) -> Result<CumulantSequence> {
    if m.order() > NC_CEILING {
        return Err(Error::ResourceLimit(format!("Möbius route limited to order {NC_CEILING}")));
    }
    let mut values = Vec::with_capacity(m.order());
    for n in 1..=m.order() {
        let mut total = BigRational::zero();
        for p in iter_nc(n)? {
            let mob = mobius_to_top(&p);
            let m_pi = p.blocks().iter().fold(BigRational::one(), |acc, b| acc * m.get(b.len()));
            total += m_pi * BigRational::from_integer(mob);
        }
        values.push(total);
    }
    CumulantSequence::free(values)
}

/// `κ_m` of the grouped products `(a_1⋯a_{i(1)}, …)`, where `grouping` is an
/// interval partition of `[n]`: the sum of `κ_π` over `π ∈ NC(n)` with
/// `π ∨ grouping = 1_n`.
pub fn products_as_arguments(
    family: &FreeFamily,
    grouping: &NoncrossingPartition,
    labels: &[usize],
) -> Result<BigRational> {
    if !grouping.is_interval_partition() {
        return Err(Error::Domain(format!("grouping {grouping} is not an interval partition")));
    }
    let mut total = BigRational::zero();
    for p in iter_nc(grouping.n())? {
        if p.join(grouping)?.is_maximum() {
            total += cumulant_on_partition(family, &p, labels)?;
        }
    }
    Ok(total)
}

/// Counts of `NC(n)` as rationals, convenient for comparing with moments.
pub fn catalan_sequence(order: usize) -> Vec<BigRational> {
    (1..=order).map(|n| from_biguint(&count_catalan(n))).collect()
}
