// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Cross-engine consistency checks at fixed small parameters.
//!
//! Counting formulas are reached through [`Engines`] so that a faulty
//! implementation can be substituted and must be reported by name.

use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convolution::{Convolver, MeasureSpec, Strategy};
use crate::cumulants::{
    free_cumulants_via_mobius, mobius_to_top, mobius_to_top_by_inversion, CumulantSequence, MomentSequence,
};
use crate::enumeration::{self, iter_k_divisible, iter_k_equal, iter_nc, iter_nc21};
use crate::measures::{free_poisson_power_cumulant, free_poisson_power_moment, wigner_product_cumulant, NamedLaw};
use crate::rational::{from_biguint, pow, ratio};
use crate::Result;

/// Counting formulas under test.
#[derive(Debug, Clone, Copy)]
pub struct Engines {
    pub count_catalan: fn(usize) -> BigUint,
    pub count_k_equal: fn(usize, usize) -> BigUint,
    pub count_k_divisible: fn(usize, usize) -> BigUint,
    pub count_nc21: fn(usize, usize) -> BigUint,
}

impl Default for Engines {
    fn default() -> Self {
        Engines {
            count_catalan: enumeration::count_catalan,
            count_k_equal: enumeration::count_k_equal,
            count_k_divisible: enumeration::count_k_divisible,
            count_nc21: enumeration::count_nc21,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// First counterexample, empty on success.
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
    pub elapsed_ms: u128,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

type Check = fn(&Engines) -> Result<Option<String>>;

const CHECKS: &[(&str, Check)] = &[
    ("catalan-count", check_catalan),
    ("k-equal-count", check_k_equal),
    ("k-divisible-count", check_k_divisible),
    ("nc21-count", check_nc21),
    ("kreweras-structure", check_kreweras),
    ("mobius-routes", check_mobius),
    ("direct-vs-iterated", check_direct_vs_iterated),
    ("free-poisson-closed-form", check_free_poisson),
    ("wigner-closed-form", check_wigner),
];

pub fn run() -> SelftestReport {
    run_with(&Engines::default())
}

pub fn run_with(engines: &Engines) -> SelftestReport {
    let start = Instant::now();
    let checks = CHECKS
        .iter()
        .map(|&(name, check)| {
            let (passed, detail) = match check(engines) {
                Ok(None) => (true, String::new()),
                Ok(Some(d)) => (false, d),
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult { name, passed, detail }
        })
        .collect();
    SelftestReport { checks, elapsed_ms: start.elapsed().as_millis() }
}

fn mismatch<T: std::fmt::Display>(what: String, expected: T, got: T) -> Option<String> {
    Some(format!("{what}: enumerated {expected}, formula {got}"))
}

fn check_catalan(e: &Engines) -> Result<Option<String>> {
    for n in 1..=8 {
        let enumerated = BigUint::from(iter_nc(n)?.count());
        let formula = (e.count_catalan)(n);
        if enumerated != formula {
            return Ok(mismatch(format!("|NC({n})|"), enumerated, formula));
        }
    }
    Ok(None)
}

fn family_pairs() -> impl Iterator<Item = (usize, usize)> {
    (1..=12).flat_map(|k| (1..=12 / k).map(move |n| (k, n)))
}

fn check_k_equal(e: &Engines) -> Result<Option<String>> {
    for (k, n) in family_pairs() {
        let enumerated = BigUint::from(iter_k_equal(k, n)?.count());
        let formula = (e.count_k_equal)(k, n);
        if enumerated != formula {
            return Ok(mismatch(format!("|NC_{k}({n})|"), enumerated, formula));
        }
    }
    Ok(None)
}

fn check_k_divisible(e: &Engines) -> Result<Option<String>> {
    for (k, n) in family_pairs() {
        let enumerated = BigUint::from(iter_k_divisible(k, n)?.count());
        let formula = (e.count_k_divisible)(k, n);
        if enumerated != formula {
            return Ok(mismatch(format!("|NC^{k}({n})|"), enumerated, formula));
        }
    }
    Ok(None)
}

fn check_nc21(e: &Engines) -> Result<Option<String>> {
    for (k, n) in family_pairs().filter(|&(k, _)| k >= 2) {
        let enumerated = BigUint::from(iter_nc21(k, n)?.count());
        let formula = (e.count_nc21)(k, n);
        if enumerated != formula {
            return Ok(mismatch(format!("|NC({k},{n})_2,1|"), enumerated, formula));
        }
    }
    Ok(None)
}

fn check_kreweras(_: &Engines) -> Result<Option<String>> {
    for n in 1..=7 {
        for p in iter_nc(n)? {
            let kr = p.kreweras();
            if p.len() + kr.len() != n + 1 {
                return Ok(Some(format!("|p| + |Kr p| != n + 1 for {p}")));
            }
            if kr.kreweras() != p.rotate(-1) {
                return Ok(Some(format!("Kr(Kr p) is not a rotation of {p}")));
            }
        }
    }
    Ok(None)
}

fn check_mobius(_: &Engines) -> Result<Option<String>> {
    for n in 1..=6 {
        for p in iter_nc(n)? {
            if mobius_to_top(&p) != mobius_to_top_by_inversion(&p)? {
                return Ok(Some(format!("Möbius routes differ at {p}")));
            }
        }
    }
    let m = MomentSequence::new((1..=6).map(|n| ratio(n as i64 * n as i64 + 1, n as i64 + 2)).collect())?;
    if free_cumulants_via_mobius(&m)? != crate::cumulants::free_cumulants_from_moments(&m) {
        return Ok(Some("Möbius and recursive moment-cumulant routes differ".into()));
    }
    Ok(None)
}

fn random_spec(rng: &mut ChaCha8Rng, order: usize) -> Result<MeasureSpec> {
    let values = (0..order).map(|_| ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect();
    Ok(MeasureSpec::from_cumulants(CumulantSequence::free(values)?))
}

fn check_direct_vs_iterated(_: &Engines) -> Result<Option<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e63_6672_6565);
    let engine = Convolver::default();
    for trial in 0..24 {
        let k = 2 + trial % 2;
        let order = 4;
        let specs = (0..k).map(|_| random_spec(&mut rng, order)).collect::<Result<Vec<_>>>()?;
        let direct = engine.boxtimes_k(&specs, order, Strategy::Direct)?;
        let iterated = engine.boxtimes_k(&specs, order, Strategy::Iterated)?;
        if direct.free_cumulants() != iterated.free_cumulants() || direct.moments() != iterated.moments() {
            return Ok(Some(format!("trial {trial}, k = {k}: direct and iterated disagree")));
        }
    }
    Ok(None)
}

fn check_free_poisson(_: &Engines) -> Result<Option<String>> {
    let order = 3;
    let m = NamedLaw::FreePoisson.spec(order)?;
    for k in 1..=4 {
        let power = crate::convolution::boxtimes_k(&vec![m.clone(); k], order, Strategy::Direct)?;
        for n in 1..=order {
            if power.free_cumulants().get(n) != &from_biguint(&free_poisson_power_cumulant(k, n)?)
                || power.moments().get(n) != from_biguint(&free_poisson_power_moment(k, n)?)
            {
                return Ok(Some(format!("m^(boxtimes {k}) at n = {n}")));
            }
        }
    }
    Ok(None)
}

fn check_wigner(e: &Engines) -> Result<Option<String>> {
    let order = 4;
    let sigma2 = ratio(1, 7);
    let w = NamedLaw::shifted_semicircle(sigma2.clone())?.spec(order)?;
    for k in 2..=3 {
        let power = crate::convolution::boxtimes_k(&vec![w.clone(); k], order, Strategy::Direct)?;
        for n in 1..=order {
            let closed = wigner_product_cumulant(k, n, &sigma2)?;
            let counted: BigRational = from_biguint(&(e.count_nc21)(k, n)) * pow(&sigma2, n - 1);
            if power.free_cumulants().get(n) != &closed || closed != counted {
                return Ok(Some(format!("shifted semicircle power k = {k}, n = {n}")));
            }
        }
    }
    Ok(None)
}
