// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Named laws with closed-form convolution powers, eventual positivity of
//! free cumulants under `⊠`-powers, and the large-`k` limits
//! `D_{1/k}((μ^{⊠k})^{⊞k}) → 𝔥_{σ²}` and `D_{1/k}((μ^{⊠k})^{⊎k}) → 𝔰_{σ²}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::convolution::{Convolver, MeasureSpec};
use crate::cumulants::{boolean_cumulants_from_moments, moments_from_free_cumulants, CumulantSequence, MomentSequence};
use crate::enumeration::{binomial, factorial};
use crate::rational::{exact_nth_root, from_biguint, int, nth_root_ceil, pow, ratio, serde_string};
use crate::{Error, Result};

/// Decimal digits used when `√σ²` is irrational and has to be over-approximated.
const SIGMA_DIGITS: usize = 12;

/// A law that can be materialized to any truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedLaw {
    /// Marchenko–Pastur with parameter 1: every free cumulant is 1, support `[0, 4]`.
    FreePoisson,
    /// Semicircle of variance `σ²` centered at 1; requires `0 < σ² <= 1/4`.
    ShiftedSemicircle { sigma2: BigRational },
    /// `δ_c`.
    PointMass { c: BigRational },
    /// Atoms `a < b` with `0 <= a <= 1 <= b` and weights chosen so the mean is 1.
    TwoPoint { a: BigRational, b: BigRational },
    /// Free cumulants `(σ²n)^{n-1}/n!`.
    SakumaH { sigma2: BigRational },
    /// Boolean cumulants `(σ²n)^{n-1}/n!`.
    SakumaS { sigma2: BigRational },
}

/// `(σ²n)^{n-1}/n!`.
pub fn sakuma_coefficient(sigma2: &BigRational, n: usize) -> BigRational {
    pow(&(sigma2 * int(n as i64)), n - 1) / from_biguint(&factorial(n))
}

fn positive(name: &str, x: &BigRational) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

impl NamedLaw {
    pub fn shifted_semicircle(sigma2: BigRational) -> Result<Self> {
        positive("sigma2", &sigma2)?;
        if sigma2 > ratio(1, 4) {
            return Err(Error::Domain(format!(
                "shifted semicircle needs sigma2 <= 1/4 to live on [0, inf), got {sigma2}"
            )));
        }
        Ok(NamedLaw::ShiftedSemicircle { sigma2 })
    }

    pub fn two_point(a: BigRational, b: BigRational) -> Result<Self> {
        if a.is_negative() || a >= b || a > int(1) || b < int(1) {
            return Err(Error::Domain(format!("two-point law needs 0 <= a <= 1 <= b and a < b, got a = {a}, b = {b}")));
        }
        Ok(NamedLaw::TwoPoint { a, b })
    }

    pub fn sakuma_h(sigma2: BigRational) -> Result<Self> {
        positive("sigma2", &sigma2)?;
        Ok(NamedLaw::SakumaH { sigma2 })
    }

    pub fn sakuma_s(sigma2: BigRational) -> Result<Self> {
        positive("sigma2", &sigma2)?;
        Ok(NamedLaw::SakumaS { sigma2 })
    }

    /// Right end of a support interval inside `[0, L]`, when known.
    pub fn support_bound(&self) -> Option<BigRational> {
        match self {
            NamedLaw::FreePoisson => Some(int(4)),
            NamedLaw::ShiftedSemicircle { sigma2 } => {
                let sigma = exact_nth_root(sigma2, 2).unwrap_or_else(|| nth_root_ceil(sigma2, 2, SIGMA_DIGITS));
                Some(int(1) + sigma * int(2))
            }
            NamedLaw::PointMass { c } if !c.is_negative() => Some(c.clone()),
            NamedLaw::PointMass { .. } => None,
            NamedLaw::TwoPoint { b, .. } => Some(b.clone()),
            NamedLaw::SakumaH { .. } | NamedLaw::SakumaS { .. } => None,
        }
    }

    /// Spec with moments and cumulants to `order`, declared mean and
    /// variance, and the support bound when one is known.
    pub fn spec(&self, order: usize) -> Result<MeasureSpec> {
        if order == 0 {
            return Err(Error::Domain("truncation order must be >= 1".into()));
        }
        let spec = match self {
            NamedLaw::FreePoisson => MeasureSpec::from_cumulants(CumulantSequence::free(vec![int(1); order])?),
            NamedLaw::ShiftedSemicircle { sigma2 } => {
                let mut c = vec![BigRational::zero(); order];
                c[0] = int(1);
                if order > 1 {
                    c[1] = sigma2.clone();
                }
                MeasureSpec::from_cumulants(CumulantSequence::free(c)?)
            }
            NamedLaw::PointMass { c } => {
                MeasureSpec::from_moments(MomentSequence::new((1..=order).map(|n| pow(c, n)).collect())?)
            }
            NamedLaw::TwoPoint { a, b } => {
                let wa = (b - int(1)) / (b - a);
                let wb = BigRational::one() - &wa;
                let m = (1..=order).map(|n| &wa * pow(a, n) + &wb * pow(b, n)).collect();
                MeasureSpec::from_moments(MomentSequence::new(m)?)
            }
            NamedLaw::SakumaH { sigma2 } => MeasureSpec::from_cumulants(CumulantSequence::free(
                (1..=order).map(|n| sakuma_coefficient(sigma2, n)).collect(),
            )?),
            NamedLaw::SakumaS { sigma2 } => MeasureSpec::from_cumulants(CumulantSequence::boolean(
                (1..=order).map(|n| sakuma_coefficient(sigma2, n)).collect(),
            )?),
        };
        let spec = spec.with_name(self.to_string());
        let spec = match self.support_bound() {
            Some(l) if l.is_positive() => spec.with_support_bound(l)?,
            _ => spec,
        };
        let mean = spec.mean();
        let variance = spec.variance();
        spec.with_declared(Some(mean), variance)
    }
}

impl fmt::Display for NamedLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedLaw::FreePoisson => write!(f, "free-poisson"),
            NamedLaw::ShiftedSemicircle { sigma2 } => write!(f, "shifted-semicircle:{sigma2}"),
            NamedLaw::PointMass { c } => write!(f, "point-mass:{c}"),
            NamedLaw::TwoPoint { a, b } => write!(f, "two-point:{a},{b}"),
            NamedLaw::SakumaH { sigma2 } => write!(f, "sakuma-h:{sigma2}"),
            NamedLaw::SakumaS { sigma2 } => write!(f, "sakuma-s:{sigma2}"),
        }
    }
}

/// Parses the `Display` form, e.g. `two-point:0,3/2` or `shifted-semicircle:1/9`.
/// Parameters may be omitted for defaults: σ² = 1/4 (semicircle), 1 (Sakuma
/// laws), c = 1, and atoms `{0, 2}`.
impl FromStr for NamedLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use crate::rational::parse_rational;
        let (kind, params) = match s.split_once(':') {
            Some((k, p)) => (k.trim(), Some(p)),
            None => (s.trim(), None),
        };
        let one_param = |default: BigRational| -> Result<BigRational> {
            match params {
                Some(p) => parse_rational(p),
                None => Ok(default),
            }
        };
        match kind {
            "free-poisson" if params.is_none() => Ok(NamedLaw::FreePoisson),
            "shifted-semicircle" => NamedLaw::shifted_semicircle(one_param(ratio(1, 4))?),
            "point-mass" => Ok(NamedLaw::PointMass { c: one_param(int(1))? }),
            "sakuma-h" => NamedLaw::sakuma_h(one_param(int(1))?),
            "sakuma-s" => NamedLaw::sakuma_s(one_param(int(1))?),
            "two-point" => match params {
                None => NamedLaw::two_point(int(0), int(2)),
                Some(p) => {
                    let (a, b) =
                        p.split_once(',').ok_or_else(|| Error::Parse(format!("two-point expects 'a,b', got '{p}'")))?;
                    NamedLaw::two_point(parse_rational(a)?, parse_rational(b)?)
                }
            },
            _ => Err(Error::Parse(format!("unknown law '{s}'"))),
        }
    }
}

/// `κ_n(m^{⊠k}) = |NC_k(n)| = binom(kn, n)/((k-1)n + 1)`.
pub fn free_poisson_power_cumulant(k: usize, n: usize) -> Result<BigUint> {
    if k == 0 || n == 0 {
        return Err(Error::Domain("k and n must be >= 1".into()));
    }
    Ok(binomial(k * n, n) / BigUint::from((k - 1) * n + 1))
}

/// `m_n(m^{⊠k}) = |NC^k(n)| = binom((k+1)n, n)/(kn + 1)`.
pub fn free_poisson_power_moment(k: usize, n: usize) -> Result<BigUint> {
    if k == 0 || n == 0 {
        return Err(Error::Domain("k and n must be >= 1".into()));
    }
    Ok(binomial((k + 1) * n, n) / BigUint::from(k * n + 1))
}

/// Right edge `(k+1)^{k+1}/k^k` of the support of `m^{⊠k}`.
pub fn free_poisson_power_edge(k: usize) -> BigRational {
    assert!(k >= 1, "k must be >= 1");
    pow(&int(k as i64 + 1), k + 1) / pow(&int(k as i64), k)
}

/// `κ_n(ω^{⊠k}) = k((k-1)n)! (σ²)^{n-1} / ((n-1)! ((k-2)n+2)!)` for the
/// shifted semicircle `ω` of variance `σ²`.
pub fn wigner_product_cumulant(k: usize, n: usize, sigma2: &BigRational) -> Result<BigRational> {
    if k < 2 || n == 0 {
        return Err(Error::Domain(format!("need k >= 2 and n >= 1, got k = {k}, n = {n}")));
    }
    if !sigma2.is_positive() || *sigma2 > ratio(1, 4) {
        return Err(Error::Domain(format!("sigma2 must lie in (0, 1/4], got {sigma2}")));
    }
    let count = BigUint::from(k) * factorial((k - 1) * n) / (factorial(n - 1) * factorial((k - 2) * n + 2));
    Ok(from_biguint(&count) * pow(sigma2, n - 1))
}

/// Table from [`eventual_positivity_scan`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityScan {
    pub order: usize,
    pub k_max: usize,
    /// Smallest `k` whose first `order` free cumulants are all `>= 0`.
    pub threshold: Option<usize>,
    /// Row `k - 1` holds `κ_1..κ_order` of `μ^{⊠k}`.
    #[serde(serialize_with = "serialize_rows")]
    pub cumulants: Vec<Vec<BigRational>>,
}

fn serialize_rows<S: serde::Serializer>(rows: &[Vec<BigRational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for row in rows {
        let strings: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        seq.serialize_element(&strings)?;
    }
    seq.end()
}

impl PositivityScan {
    /// `true` if every `k` in `from..=to` has non-negative cumulants.
    pub fn nonnegative_on(&self, from: usize, to: usize) -> bool {
        (from..=to).all(|k| self.cumulants.get(k - 1).is_some_and(|row| row.iter().all(|x| !x.is_negative())))
    }
}

/// Scans `k = 1..=k_max` with the iterated engine.
pub fn eventual_positivity_scan(spec: &MeasureSpec, order: usize, k_max: usize) -> Result<PositivityScan> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be >= 1".into()));
    }
    let powers = Convolver::default().boxtimes_powers(spec, k_max, order)?;
    let cumulants: Vec<Vec<BigRational>> = powers.into_iter().map(|c| c.values().to_vec()).collect();
    let threshold = cumulants.iter().position(|row| row.iter().all(|x| !x.is_negative())).map(|i| i + 1);
    Ok(PositivityScan { order, k_max, threshold, cumulants })
}

/// A computed value next to its limit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitPoint {
    pub k: usize,
    pub n: usize,
    #[serde(with = "serde_string")]
    pub computed: BigRational,
    #[serde(with = "serde_string")]
    pub target: BigRational,
}

impl LimitPoint {
    /// `|computed - target| / |target|`.
    pub fn relative_error(&self) -> BigRational {
        ((&self.computed - &self.target) / &self.target).abs()
    }
}

fn limit_precondition(spec: &MeasureSpec) -> Result<BigRational> {
    if spec.mean() != int(1) {
        return Err(Error::Precondition(format!("limit check needs mean 1, got {}", spec.mean())));
    }
    spec.variance().ok_or(Error::Truncation { needed: 2, available: spec.order() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LimitKind {
    Free,
    Boolean,
}

fn limit_series(kind: LimitKind, spec: &MeasureSpec, n: usize, ks: &[usize]) -> Result<Vec<LimitPoint>> {
    let sigma2 = limit_precondition(spec)?;
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if ks.contains(&0) {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let k_max = ks.iter().copied().max().unwrap_or(0);
    if k_max == 0 {
        return Ok(Vec::new());
    }
    let powers = Convolver::default().boxtimes_powers(spec, k_max, n)?;
    let target = sakuma_coefficient(&sigma2, n);
    ks.iter()
        .map(|&k| {
            let c = &powers[k - 1];
            let value = match kind {
                LimitKind::Free => c.get(n).clone(),
                LimitKind::Boolean => {
                    let m = moments_from_free_cumulants(c)?;
                    boolean_cumulants_from_moments(&m).get(n).clone()
                }
            };
            // ⊞k or ⊎k multiplies by k, D_{1/k} by k^{-n}.
            let computed = value / pow(&int(k as i64), n - 1);
            Ok(LimitPoint { k, n, computed, target: target.clone() })
        })
        .collect()
}

/// `κ_n(D_{1/k}((μ^{⊠k})^{⊞k})) = k^{1-n} κ_n(μ^{⊠k})` against `(σ²n)^{n-1}/n!`.
pub fn sakuma_limit_check(spec: &MeasureSpec, n: usize, k: usize) -> Result<LimitPoint> {
    Ok(limit_series(LimitKind::Free, spec, n, &[k])?.remove(0))
}

/// Boolean analogue: `k^{1-n} b_n(μ^{⊠k})` against `(σ²n)^{n-1}/n!`.
pub fn sakuma_boolean_limit_check(spec: &MeasureSpec, n: usize, k: usize) -> Result<LimitPoint> {
    Ok(limit_series(LimitKind::Boolean, spec, n, &[k])?.remove(0))
}

/// [`sakuma_limit_check`] over a grid of `k`, sharing one fold.
pub fn sakuma_limit_series(spec: &MeasureSpec, n: usize, ks: &[usize]) -> Result<Vec<LimitPoint>> {
    limit_series(LimitKind::Free, spec, n, ks)
}

/// [`sakuma_boolean_limit_check`] over a grid of `k`, sharing one fold.
pub fn sakuma_boolean_limit_series(spec: &MeasureSpec, n: usize, ks: &[usize]) -> Result<Vec<LimitPoint>> {
    limit_series(LimitKind::Boolean, spec, n, ks)
}
