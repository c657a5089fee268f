// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Certified bounds for free cumulants and for the right edge `L_k` of the
//! support of `μ_1 ⊠ ⋯ ⊠ μ_k` when every `μ_i` has mean 1 and lives on
//! `[0, L]`.
//!
//! Upper bounds use a rational over-approximation of `e`, and every root is
//! rounded in the direction that keeps the bound valid.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::convolution::MeasureSpec;
use crate::rational::{int, nth_root_floor, pow, serde_string};
use crate::{Error, Result};

/// `e < E_UPPER_NUMER / E_UPPER_DENOM`, with error below `10^-15`.
pub const E_UPPER_NUMER: u64 = 2_718_281_828_459_046;
pub const E_UPPER_DENOM: u64 = 1_000_000_000_000_000;

pub fn e_upper() -> BigRational {
    BigRational::new(BigInt::from(E_UPPER_NUMER), BigInt::from(E_UPPER_DENOM))
}

/// The universal constant in `supp μ ⊆ [0, C L (k+1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundConstant {
    /// General case.
    #[serde(rename = "26e")]
    TwentySixE,
    /// All factors have non-negative free cumulants.
    #[serde(rename = "e")]
    E,
}

impl BoundConstant {
    pub fn for_cumulant_signs(nonneg_cumulants: bool) -> Self {
        if nonneg_cumulants {
            BoundConstant::E
        } else {
            BoundConstant::TwentySixE
        }
    }

    pub fn value(self) -> BigRational {
        match self {
            BoundConstant::TwentySixE => e_upper() * int(26),
            BoundConstant::E => e_upper(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCertificate {
    pub k: usize,
    #[serde(rename = "L", with = "serde_string")]
    pub support_bound: BigRational,
    #[serde(with = "serde_string")]
    pub sigma2: BigRational,
    #[serde(with = "serde_string")]
    pub lower: BigRational,
    #[serde(with = "serde_string")]
    pub upper: BigRational,
    pub constant: BoundConstant,
    #[serde(with = "serde_string")]
    pub constant_value: BigRational,
    pub nonneg_cumulants: bool,
}

fn check_support_bound(l: &BigRational) -> Result<()> {
    if *l < int(1) {
        return Err(Error::Precondition(format!("a mean-1 law on [0, L] needs L >= 1, got L = {l}")));
    }
    Ok(())
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Precondition("the number of factors k must be >= 1".into()));
    }
    Ok(())
}

/// `(26L)^{n-1}`: for `n >= 2` a strict bound on `|κ_n|` of any mean-1 law on
/// `[0, L]`; for `n = 1` it equals `κ_1 = 1`.
pub fn cumulant_bound(l: &BigRational, n: usize) -> Result<BigRational> {
    check_support_bound(l)?;
    if n == 0 {
        return Err(Error::Domain("cumulant index starts at 1".into()));
    }
    Ok(pow(&(l * int(26)), n - 1))
}

/// `kσ² + 1`.
pub fn support_lower_bound(k: usize, sigma2: &BigRational) -> Result<BigRational> {
    check_k(k)?;
    if sigma2.is_negative() {
        return Err(Error::Precondition(format!("variance must be >= 0, got {sigma2}")));
    }
    Ok(sigma2 * int(k as i64) + int(1))
}

/// `C L (k + 1)` with `C = 26e`, or `C = e` for non-negative free cumulants.
pub fn support_upper_bound(k: usize, l: &BigRational, nonneg_cumulants: bool) -> Result<BigRational> {
    check_k(k)?;
    check_support_bound(l)?;
    Ok(BoundConstant::for_cumulant_signs(nonneg_cumulants).value() * l * int(k as i64 + 1))
}

/// Both edge bounds for `k` mean-1 factors on `[0, L]` with variance floor
/// `σ²`.
pub fn certify(k: usize, l: &BigRational, sigma2: &BigRational, nonneg_cumulants: bool) -> Result<BoundCertificate> {
    check_support_bound(l)?;
    if *sigma2 > l - int(1) {
        return Err(Error::Precondition(format!(
            "variance {sigma2} exceeds L - 1 = {}, impossible for a mean-1 law on [0, L]",
            l - int(1)
        )));
    }
    let constant = BoundConstant::for_cumulant_signs(nonneg_cumulants);
    let cert = BoundCertificate {
        k,
        support_bound: l.clone(),
        sigma2: sigma2.clone(),
        lower: support_lower_bound(k, sigma2)?,
        upper: support_upper_bound(k, l, nonneg_cumulants)?,
        constant,
        constant_value: constant.value(),
        nonneg_cumulants,
    };
    debug_assert!(cert.lower <= cert.upper);
    Ok(cert)
}

/// Certificate for given factor specs. Every spec must declare a support
/// bound and have mean 1; `L` is the largest declared bound and `σ²` the
/// smallest variance.
pub fn certify_specs(specs: &[MeasureSpec], nonneg_cumulants: bool) -> Result<BoundCertificate> {
    if specs.is_empty() {
        return Err(Error::Domain("need at least one factor".into()));
    }
    let mut l = BigRational::zero();
    let mut sigma2: Option<BigRational> = None;
    for (i, s) in specs.iter().enumerate() {
        let bound = s.support_bound().ok_or_else(|| {
            Error::Precondition(format!("factor {} declares no support bound; refusing to infer one", i + 1))
        })?;
        if s.mean() != int(1) {
            return Err(Error::Precondition(format!("factor {} has mean {}, expected 1", i + 1, s.mean())));
        }
        let v = s.variance().ok_or(Error::Truncation { needed: 2, available: s.order() })?;
        if *bound > l {
            l = bound.clone();
        }
        sigma2 = Some(match sigma2 {
            Some(cur) if cur <= v => cur,
            _ => v,
        });
    }
    certify(specs.len(), &l, &sigma2.expect("non-empty"), nonneg_cumulants)
}

/// `m_n^{1/n}` for `n = 1..=order`, each rounded down to `digits` decimals.
///
/// For a law on `[0, ∞)` every term is a lower bound on the support edge and
/// the sequence is non-decreasing.
pub fn estimate_support_edge(spec: &MeasureSpec, order: usize, digits: usize) -> Result<Vec<BigRational>> {
    if order > spec.order() {
        return Err(Error::Truncation { needed: order, available: spec.order() });
    }
    (1..=order)
        .map(|n| {
            let m = spec.moments().get(n);
            if !m.is_positive() {
                return Err(Error::Domain(format!("moment m_{n} = {m} is not positive")));
            }
            Ok(nth_root_floor(&m, n, digits))
        })
        .collect()
}

/// Checks `|κ_n| < (26L)^{n-1}` for `2 <= n <= order` and `κ_1 = 1`.
/// Returns the first violated index.
pub fn check_cumulant_bound(spec: &MeasureSpec, order: usize) -> Result<Option<usize>> {
    let l = spec.support_bound().ok_or_else(|| Error::Precondition("spec declares no support bound".into()))?;
    check_support_bound(l)?;
    let c = spec.free_cumulants().truncate(order)?;
    if *c.get(1) != int(1) {
        return Ok(Some(1));
    }
    for n in 2..=order {
        if c.get(n).abs() >= cumulant_bound(l, n)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
