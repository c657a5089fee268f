// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails.

use std::collections::{BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ncfree::bounds::{check_cumulant_bound, estimate_support_edge, support_lower_bound, support_upper_bound};
use ncfree::convolution::{dilate, Convolver, MeasureSpec, Strategy};
use ncfree::cumulants::CumulantSequence;
use ncfree::enumeration::{
    binomial, count_catalan, count_k_divisible, count_k_equal, count_nc21, count_pair_type, count_type, factorial,
    iter_k_divisible, iter_k_equal, iter_nc, iter_nc21,
};
use ncfree::measures::{
    eventual_positivity_scan, free_poisson_power_cumulant, free_poisson_power_edge, free_poisson_power_moment,
    sakuma_boolean_limit_series, sakuma_limit_series, wigner_product_cumulant, NamedLaw,
};
use ncfree::rational::{from_biguint, int, pow, ratio, to_decimal, to_f64};
use ncfree::{BigRational, BigUint, NoncrossingPartition, TypeVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nc(n: usize) -> Vec<NoncrossingPartition> {
    iter_nc(n).expect("within ceiling").collect()
}

fn big(n: usize) -> BigUint {
    BigUint::from(n)
}

fn family_grid(max_kn: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=max_kn).flat_map(move |k| (1..=max_kn / k).map(move |n| (k, n)))
}

fn counting_identities() -> Outcome {
    let start = Instant::now();
    for n in 1..=8 {
        let got = iter_nc(n).unwrap().count();
        let want = binomial(2 * n, n) / big(n + 1);
        ensure(big(got) == want && want == count_catalan(n), || format!("|NC({n})| = {got}, expected {want}"))?;
    }
    let mut pairs = 0;
    for (k, n) in family_grid(12) {
        let equal = iter_k_equal(k, n).unwrap().count();
        let divisible = iter_k_divisible(k, n).unwrap().count();
        let want_equal = binomial(k * n, n) / big((k - 1) * n + 1);
        let want_divisible = binomial((k + 1) * n, n) / big(k * n + 1);
        ensure(big(equal) == want_equal && want_equal == count_k_equal(k, n), || {
            format!("|NC_{k}({n})| = {equal}, expected {want_equal}")
        })?;
        ensure(big(divisible) == want_divisible && want_divisible == count_k_divisible(k, n), || {
            format!("|NC^{k}({n})| = {divisible}, expected {want_divisible}")
        })?;
        pairs += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}, limit 30 s"))?;
    Ok(format!("n <= 8 and {pairs} (k, n) pairs with kn <= 12, {elapsed:.2?}"))
}

fn kreweras_structure() -> Outcome {
    let mut checked = 0usize;
    for n in 1..=8 {
        let all = nc(n);
        let krs: Vec<_> = all.iter().map(|p| p.kreweras()).collect();
        let image: BTreeSet<_> = krs.iter().cloned().collect();
        ensure(image.len() == all.len(), || format!("Kr is not a bijection on NC({n})"))?;
        for (p, kr) in all.iter().zip(&krs) {
            ensure(p.len() + kr.len() == n + 1, || format!("|p| + |Kr p| != {} for {p}", n + 1))?;
            ensure(kr.kreweras() == p.rotate(-1), || format!("Kr(Kr {p}) != rotation"))?;
        }
        for (i, p) in all.iter().enumerate() {
            for (j, q) in all.iter().enumerate() {
                if p.leq(q).unwrap() {
                    ensure(krs[j].leq(&krs[i]).unwrap(), || format!("order not reversed for {p} <= {q}"))?;
                    checked += 1;
                }
            }
        }
    }
    let pi: NoncrossingPartition = "{1,8,12}{2,6,7}{3,4,5}{9,10,11}".parse().unwrap();
    let kr = pi.kreweras().to_string();
    ensure(kr == "{1,7}{2,5}{3}{4}{6}{8,11}{9}{10}{12}", || format!("Figure-2 complement printed as {kr}"))?;
    Ok(format!("n <= 8, {checked} comparable pairs, golden case verbatim"))
}

fn type_counting() -> Outcome {
    let mut classes = 0;
    for n in 1..=7 {
        let mut by_type: HashMap<TypeVector, usize> = HashMap::new();
        let mut by_pair: HashMap<(TypeVector, TypeVector), usize> = HashMap::new();
        for p in iter_nc(n).unwrap() {
            *by_type.entry(p.block_type()).or_default() += 1;
            *by_pair.entry((p.block_type(), p.kreweras().block_type())).or_default() += 1;
        }
        let types = TypeVector::all(n);
        for t in &types {
            let seen = by_type.get(t).copied().unwrap_or(0);
            ensure(big(seen) == count_type(t), || format!("type {t:?}: {seen} vs {}", count_type(t)))?;
            for b in &types {
                let seen = by_pair.get(&(t.clone(), b.clone())).copied().unwrap_or(0);
                ensure(big(seen) == count_pair_type(t, b), || {
                    format!("pair type {t:?}/{b:?}: {seen} vs {}", count_pair_type(t, b))
                })?;
                classes += 1;
            }
        }
    }
    // k-equal specialization: k ((k-1)n)! / Π b_j!.
    for (k, n) in family_grid(12) {
        let mut by_kr: HashMap<TypeVector, usize> = HashMap::new();
        for p in iter_k_equal(k, n).unwrap() {
            *by_kr.entry(p.kreweras().block_type()).or_default() += 1;
        }
        let mut t = vec![0; k * n];
        t[k - 1] = n;
        let t = TypeVector::new(k * n, &t).unwrap();
        for (b, seen) in &by_kr {
            let reduced =
                b.counts().iter().fold(BigUint::from(k) * factorial((k - 1) * n), |acc, &r| acc / factorial(r));
            ensure(big(*seen) == reduced && reduced == count_pair_type(&t, b), || {
                format!("k-equal specialization k={k}, n={n}: {seen} vs {reduced}")
            })?;
        }
        let h = iter_nc21(k, n).unwrap().count();
        ensure(big(h) == count_nc21(k, n), || format!("|NC({k},{n})_2,1| = {h} vs {}", count_nc21(k, n)))?;
    }
    Ok(format!("{classes} (type, Kr-type) classes for n <= 7, k-equal and NC(k,n)_2,1 for kn <= 12"))
}

fn insertion_machinery() -> Outcome {
    let mut cases = 0usize;
    for n in 1..=6 {
        for p in iter_nc(n).unwrap() {
            let kr = p.kreweras();
            for k in 1..=3 {
                for r in 1..=n {
                    let lhs = p.insert_dup(r, k).unwrap().kreweras();
                    let rhs = kr.insert_interval(r, k).unwrap();
                    ensure(lhs == rhs, || format!("Kr(I_{r}^{k}({p})) = {lhs} but Ĩ gives {rhs}"))?;
                    cases += 1;
                }
            }
        }
    }
    // Predicate preservation on π ∈ NC(nk), nk <= 6.
    let mut bound_cases = 0usize;
    for (k, n) in family_grid(6).filter(|&(k, _)| k <= 3) {
        for p in iter_nc(k * n).unwrap() {
            for r in 1..=k * n {
                for s in 1..=2 {
                    let dup = p.insert_dup(r, s * k).unwrap();
                    ensure(p.is_k_preserving(k).unwrap() == dup.is_k_preserving(k).unwrap(), || {
                        format!("preservation fails for {p}, r={r}, s={s}, k={k}")
                    })?;
                    let ins = p.insert_interval(r, s * k).unwrap();
                    ensure(p.is_k_divisible(k).unwrap() == ins.is_k_divisible(k).unwrap(), || {
                        format!("divisibility fails for {p}, r={r}, s={s}, k={k}")
                    })?;
                }
                let dup = p.insert_dup(r, k).unwrap();
                ensure(p.is_k_completing(k).unwrap() == dup.is_k_completing(k).unwrap(), || {
                    format!("completing fails for {p}, r={r}, k={k}")
                })?;
                let ins = p.insert_interval(r, k).unwrap();
                ensure(p.is_k_equal(k).unwrap() == ins.is_k_equal(k).unwrap(), || {
                    format!("k-equal fails for {p}, r={r}, k={k}")
                })?;
                bound_cases += 1;
            }
        }
    }
    // Double enumeration: images of k-divisible / k-equal under Kr.
    let mut families = 0;
    let mut cache: HashMap<usize, Vec<NoncrossingPartition>> = HashMap::new();
    for (k, n) in family_grid(12) {
        let all = cache.entry(k * n).or_insert_with(|| nc(k * n));
        let preserving: BTreeSet<_> = all.iter().filter(|p| p.is_k_preserving(k).unwrap()).cloned().collect();
        let completing: BTreeSet<_> = all.iter().filter(|p| p.is_k_completing(k).unwrap()).cloned().collect();
        let from_divisible: BTreeSet<_> = iter_k_divisible(k, n).unwrap().map(|s| s.kreweras()).collect();
        let from_equal: BTreeSet<_> = iter_k_equal(k, n).unwrap().map(|s| s.kreweras()).collect();
        ensure(preserving == from_divisible, || format!("k-preserving != Kr(NC^{k}({n}))"))?;
        ensure(completing == from_equal, || format!("k-completing != Kr(NC_{k}({n}))"))?;
        families += 1;
    }
    let mut replays = 0usize;
    for (k, n) in family_grid(10) {
        for p in iter_nc(k * n).unwrap().filter(|p| p.is_k_preserving(k).unwrap()) {
            let f = p.factor_k_preserving(k).unwrap();
            ensure(f.replay().unwrap() == p, || format!("replay of {p} differs"))?;
            replays += 1;
        }
    }
    Ok(format!(
        "{cases} insertion identities, {bound_cases} cumulant-bound cases, {families} Kr-image families, {replays} replays"
    ))
}

fn random_spec(rng: &mut ChaCha8Rng, order: usize) -> MeasureSpec {
    let values = (0..order).map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect();
    MeasureSpec::from_cumulants(CumulantSequence::free(values).unwrap())
}

fn theorem_oracle() -> Outcome {
    let engine = Convolver::with_direct_ceiling(20);
    let mut rng = ChaCha8Rng::seed_from_u64(20_261_014);
    let tuples = 240;
    for trial in 0..tuples {
        let k = 1 + trial % 4;
        let order = 1 + (trial / 4) % 5;
        let specs: Vec<_> = (0..k).map(|_| random_spec(&mut rng, order)).collect();
        let (kappa, moments) = engine.boxtimes_direct_sequences(&specs, order).map_err(|e| e.to_string())?;
        let iterated = engine.boxtimes_k(&specs, order, Strategy::Iterated).map_err(|e| e.to_string())?;
        ensure(&kappa == iterated.free_cumulants(), || format!("trial {trial} (k={k}, N={order}): cumulants differ"))?;
        ensure(&moments == iterated.moments(), || format!("trial {trial} (k={k}, N={order}): moments differ"))?;
    }
    Ok(format!("{tuples} seeded tuples, k <= 4, N <= 5, exact agreement"))
}

fn closed_forms() -> Outcome {
    let engine = Convolver::with_direct_ceiling(20);
    let m = NamedLaw::FreePoisson.spec(6).unwrap();
    let powers = engine.boxtimes_powers(&m, 5, 6).unwrap();
    for k in 1..=5 {
        let iterated = MeasureSpec::from_cumulants(powers[k - 1].clone());
        let direct_order = (20 / k).min(6);
        let direct = engine.boxtimes_k(&vec![m.clone(); k], direct_order, Strategy::Direct).unwrap();
        for n in 1..=6 {
            let kappa = from_biguint(&free_poisson_power_cumulant(k, n).unwrap());
            let moment = from_biguint(&free_poisson_power_moment(k, n).unwrap());
            ensure(iterated.free_cumulants().get(n) == &kappa && iterated.moments().get(n) == moment, || {
                format!("free Poisson power k={k}, n={n}")
            })?;
            if n <= direct_order {
                ensure(direct.free_cumulants().get(n) == &kappa && direct.moments().get(n) == moment, || {
                    format!("free Poisson power k={k}, n={n} (direct)")
                })?;
            }
        }
    }
    for sigma2 in [ratio(1, 4), ratio(1, 7)] {
        let w = NamedLaw::shifted_semicircle(sigma2.clone()).unwrap().spec(5).unwrap();
        for k in 2..=4 {
            let direct = engine.boxtimes_k(&vec![w.clone(); k], 5, Strategy::Direct).unwrap();
            for n in 1..=5 {
                let closed = wigner_product_cumulant(k, n, &sigma2).unwrap();
                let counted = from_biguint(&count_nc21(k, n)) * pow(&sigma2, n - 1);
                ensure(direct.free_cumulants().get(n) == &closed && closed == counted, || {
                    format!("shifted semicircle power k={k}, n={n}, sigma2={sigma2}")
                })?;
            }
        }
    }
    Ok("free Poisson k <= 5, n <= 6; shifted semicircle k <= 4, n <= 5".into())
}

fn bound_corpus() -> Vec<NamedLaw> {
    let mut corpus = vec![NamedLaw::FreePoisson];
    for s in [ratio(1, 4), ratio(1, 9), ratio(1, 5), ratio(1, 100)] {
        corpus.push(NamedLaw::shifted_semicircle(s).unwrap());
    }
    for (a, b) in [
        (int(0), int(2)),
        (int(0), ratio(3, 2)),
        (ratio(1, 2), int(3)),
        (int(0), int(10)),
        (ratio(9, 10), ratio(11, 10)),
    ] {
        corpus.push(NamedLaw::two_point(a, b).unwrap());
    }
    corpus.push(NamedLaw::PointMass { c: int(1) });
    corpus
}

fn support_bounds() -> Outcome {
    let m = NamedLaw::FreePoisson.spec(12).unwrap();
    let powers = Convolver::default().boxtimes_powers(&m, 3, 12).unwrap();
    let mut report = Vec::new();
    for k in 1..=3 {
        let spec = MeasureSpec::from_cumulants(powers[k - 1].clone());
        let estimates = estimate_support_edge(&spec, 12, 12).unwrap();
        ensure(estimates.windows(2).all(|w| w[0] <= w[1]), || format!("k={k}: estimates not monotone"))?;
        let best = estimates.iter().max().unwrap().clone();
        let lower = support_lower_bound(k, &int(1)).unwrap();
        let upper = support_upper_bound(k, &int(4), true).unwrap();
        let edge = free_poisson_power_edge(k);
        ensure(lower <= best && best <= upper, || format!("k={k}: {lower} <= {best} <= {upper} fails"))?;
        ensure(best <= edge, || format!("k={k}: estimate above the true edge"))?;
        let gap = (&edge - &estimates[11]) / &edge;
        ensure(gap < ratio(2, 5), || format!("k={k}: m_12^(1/12) is {} below the edge", to_decimal(&gap, 4)))?;
        report.push(format!(
            "k={k}: {} vs {} ({}% below)",
            to_decimal(&best, 3),
            to_decimal(&edge, 3),
            to_decimal(&(gap * int(100)), 1)
        ));
    }
    let corpus = bound_corpus();
    for law in &corpus {
        let spec = law.spec(8).unwrap();
        let violation = check_cumulant_bound(&spec, 8).unwrap();
        ensure(violation.is_none(), || format!("{law}: cumulant bound fails at n = {violation:?}"))?;
    }
    Ok(format!("{}; cumulant bound on {} laws, n <= 8", report.join(", "), corpus.len()))
}

fn relative(p: &ncfree::measures::LimitPoint) -> f64 {
    to_f64(&p.relative_error())
}

fn sakuma_limits() -> Outcome {
    let start = Instant::now();
    let grid = [10, 20, 50, 100, 200];
    let m = NamedLaw::FreePoisson.spec(5).unwrap();
    let mut report = Vec::new();
    for n in 1..=5 {
        let free = sakuma_limit_series(&m, n, &grid).unwrap();
        let boolean = sakuma_boolean_limit_series(&m, n, &grid).unwrap();
        if n <= 2 {
            let exact = sakuma_limit_series(&m, n, &(1..=200).collect::<Vec<_>>()).unwrap();
            ensure(exact.iter().all(|p| p.computed == p.target), || format!("n={n}: free value not exact"))?;
            ensure(boolean.iter().all(|p| p.computed == p.target), || format!("n={n}: Boolean value not exact"))?;
            continue;
        }
        for (label, series, tol) in [("free", &free, 0.05), ("boolean", &boolean, 0.08)] {
            let errors: Vec<f64> = series.iter().map(relative).collect();
            ensure(errors.windows(2).all(|w| w[1] <= w[0]), || {
                format!("n={n} {label}: deviation not monotone {errors:?}")
            })?;
            let last = *errors.last().unwrap();
            ensure(last < tol, || format!("n={n} {label}: relative error {last:.4} at k=200"))?;
            report.push(format!("n={n} {label} {:.2}%", 100.0 * last));
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{}; {elapsed:.2?}", report.join(", ")))
}

fn eventual_positivity() -> Outcome {
    let mut report = Vec::new();
    for b in [ratio(3, 2), ratio(5, 4), ratio(7, 4), ratio(4, 3), ratio(9, 5)] {
        let law = NamedLaw::two_point(int(0), b).unwrap();
        let spec = law.spec(4).unwrap();
        ensure(spec.free_cumulants().get(3) < &int(0), || format!("{law}: kappa_3 is not negative"))?;
        let scan = eventual_positivity_scan(&spec, 4, 72).unwrap();
        let k0 = scan.threshold.ok_or_else(|| format!("{law}: no threshold up to 72"))?;
        ensure(k0 > 1 && k0 <= 64, || format!("{law}: threshold {k0}"))?;
        ensure(scan.nonnegative_on(k0, k0 + 8), || format!("{law}: positivity lost after {k0}"))?;
        report.push(format!("{law} -> {k0}"));
    }
    Ok(report.join(", "))
}

fn degenerate_dilation() -> Outcome {
    let m = NamedLaw::FreePoisson.spec(2).unwrap();
    let powers = Convolver::default().boxtimes_powers(&m, 100, 2).unwrap();
    let mut report = Vec::new();
    for (k, limit) in [(10usize, ratio(15, 100)), (100, ratio(2, 100))] {
        let spec = MeasureSpec::from_cumulants(powers[k - 1].clone());
        let nu = dilate(&spec, &ratio(1, k as i64), 2).unwrap();
        let (m1, m2) = (nu.moments().get(1), nu.moments().get(2));
        ensure(m1 == ratio(1, k as i64), || format!("k={k}: m_1 = {m1}"))?;
        ensure(m2 == BigRational::new((k as i64 + 1).into(), (k as i64 * k as i64).into()), || {
            format!("k={k}: m_2 = {m2}")
        })?;
        ensure(m1 < limit && m2 < limit, || format!("k={k}: m_1 = {m1}, m_2 = {m2} not below {limit}"))?;
        report.push(format!("k={k}: m_1 = {m1}, m_2 = {m2}"));
    }
    Ok(report.join(", "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("counting identities", counting_identities),
        ("Kreweras structure", kreweras_structure),
        ("type counting", type_counting),
        ("insertion machinery", insertion_machinery),
        ("direct vs iterated", theorem_oracle),
        ("closed forms", closed_forms),
        ("support bounds", support_bounds),
        ("large-k limits", sakuma_limits),
        ("eventual positivity", eventual_positivity),
        ("dilated powers degenerate", degenerate_dilation),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(run)) {
            Ok(o) => o,
            Err(e) => Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
