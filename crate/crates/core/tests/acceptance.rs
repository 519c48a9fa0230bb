//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.
//!
//! Run with `cargo test -p nice-core --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use nice_core::arith::{crt_combine, factorize};
use nice_core::cli::{run_with, Config};
use nice_core::construct::{
    build_multi_prime_block, case1_blocks, case2_blocks, construct_for_factorization,
    construct_good_set, construct_with_fault, niceness_condition, BlockKind, Fault,
};
use nice_core::model::{divisors_gt1, Congruence, CongruenceAssignment, Factorization};
use nice_core::oracle::{
    admissibility_scan, exists_good_assignment, AdmissibilityOutcome, SearchStatus,
    DEFAULT_NODE_BUDGET,
};
use nice_core::verify::{check_complete, check_good, overlaps, verify_certificate};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{big, fixture_assignment, TARGETS};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn is_nice(f: &Factorization) -> bool {
    f.is_empty() || niceness_condition(f).unwrap().is_nice()
}

fn fixture_criterion(name: &str, limit: Duration) -> Outcome {
    let start = Instant::now();
    let a = fixture_assignment(name);
    let good = check_good(&a.congruences()).unwrap();
    let complete = check_complete(&a).unwrap();
    let elapsed = start.elapsed();
    let witnesses: Vec<String> = good.violations.iter().map(ToString::to_string).collect();
    outcome(
        good.is_good() && complete.is_complete() && within(elapsed, limit),
        format!(
            "n = {}, {} congruences, good: {}, complete: {}, overlaps: [{}], {:.3} s",
            a.n(),
            a.len(),
            good.is_good(),
            complete.is_complete(),
            witnesses.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(
        ["nice", "check", "11025"],
        &Config::default(),
        &mut out,
        &mut err,
    );
    let text = String::from_utf8(out).unwrap();
    outcome(
        code == 1 && text == "not nice (p=3, omega=3)\n",
        format!("exit {code}, output {:?}", text.trim_end()),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut failures = Vec::new();
    let candidates = (1..=100_000u64).chain(TARGETS);
    for n in candidates {
        let f = factorize(&big(n)).unwrap();
        if !is_nice(&f) {
            continue;
        }
        checked += 1;
        let passed = construct_for_factorization(&f)
            .map(|a| verify_certificate(&a).unwrap().passed())
            .unwrap_or(false);
        if !passed {
            failures.push(n);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && within(elapsed, Duration::from_secs(60)),
        format!(
            "{checked} nice n verified, failures: {:?}, {:.1} s",
            &failures[..failures.len().min(10)],
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut disagreements = Vec::new();
    let mut budget_hits = Vec::new();
    let mut nodes = 0u64;
    for n in 2..=200u64 {
        let f = factorize(&big(n)).unwrap();
        let search = exists_good_assignment(&divisors_gt1(&f), DEFAULT_NODE_BUDGET).unwrap();
        nodes += search.nodes_expanded;
        let found = match search.status {
            SearchStatus::Found(set) => {
                if !check_good(&set).unwrap().is_good() {
                    disagreements.push(n);
                }
                true
            }
            SearchStatus::Unsatisfiable => false,
            SearchStatus::BudgetExceeded => {
                budget_hits.push(n);
                continue;
            }
        };
        if found != is_nice(&f) {
            disagreements.push(n);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        disagreements.is_empty() && budget_hits.is_empty() && within(elapsed, Duration::from_secs(300)),
        format!(
            "n in [2, 200], disagreements: {disagreements:?}, budget exceeded: {budget_hits:?}, {nodes} nodes, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut scanned = 0usize;
    let mut good_sets = 0u64;
    let mut bad = Vec::new();
    for n in 2..=64u64 {
        let f = factorize(&big(n)).unwrap();
        if !is_nice(&f) {
            continue;
        }
        scanned += 1;
        match admissibility_scan(&big(n), DEFAULT_NODE_BUDGET).unwrap() {
            AdmissibilityOutcome::NoGoodSetIsCovering { good_sets: g, .. } => good_sets += g,
            other => bad.push(format!("{n}: {other:?}")),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && within(elapsed, Duration::from_secs(300)),
        format!(
            "{scanned} nice n <= 64, {good_sets} good sets enumerated, none covering; exceptions: {bad:?}, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn random_pair(rng: &mut ChaCha8Rng) -> (Congruence, Congruence) {
    let g = rng.gen_range(1u64..=60);
    let m1 = g * rng.gen_range(1u64..=2000);
    let m2 = g * rng.gen_range(1u64..=2000);
    let c1 = Congruence::from_u64(rng.gen_range(0..m1), m1).unwrap();
    let c2 = Congruence::from_u64(rng.gen_range(0..m2), m2).unwrap();
    (c1, c2)
}

/// CRT solvability agrees with the gcd overlap test, and any solution lies
/// in both classes.
fn crt_overlap_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..100_000 {
        let (a, b) = random_pair(rng);
        let crt = crt_combine(&a, &b);
        if crt.is_some() != overlaps(&a, &b) {
            return Err(format!("{a} and {b}"));
        }
        if let Some(x) = crt {
            if !a.contains(&x.residue)
                || !b.contains(&x.residue)
                || x.modulus != a.modulus.lcm(&b.modulus)
            {
                return Err(format!("bad solution {x} for {a} and {b}"));
            }
        }
    }
    Ok(100_000)
}

fn nice_sample(rng: &mut ChaCha8Rng, count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = TARGETS.to_vec();
    while out.len() < count {
        let n = rng.gen_range(2u64..=100_000);
        if is_nice(&factorize(&big(n)).unwrap()) {
            out.push(n);
        }
    }
    out
}

/// Random sub-assignments of verified sets stay good.
fn restriction_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let sets: Vec<CongruenceAssignment> = nice_sample(rng, 50)
        .into_iter()
        .map(|n| construct_good_set(&big(n)).unwrap())
        .collect();
    for _ in 0..1_000 {
        let set = sets.choose(rng).unwrap();
        let keep = rng.gen_range(0.0..1.0);
        let sub: Vec<Congruence> = set
            .congruences()
            .into_iter()
            .filter(|_| rng.gen_bool(keep))
            .collect();
        if !check_good(&sub).unwrap().is_good() {
            return Err(format!("a subset of the set for n = {}", set.n()));
        }
    }
    Ok(1_000)
}

fn residue_mod(c: &Congruence, p: &BigUint) -> u64 {
    (&c.residue % p).to_u64().unwrap()
}

/// Exponents raised the way the dispatcher does before assembling blocks.
fn lifted(f: &Factorization) -> Factorization {
    let case2 = f.pairs()[0].1 == 1;
    let pairs = f
        .pairs()
        .iter()
        .enumerate()
        .map(|(k, (p, e))| (p.clone(), if k == 0 && case2 { *e } else { (*e).max(2) }))
        .collect();
    Factorization::new(pairs).unwrap()
}

/// Pair blocks obey the per-case residue ranges and multi-prime blocks obey
/// their restriction sets, for every block generated for nice `t >= 3`
/// integers up to 30000 and the targets.
fn range_law_suite() -> Result<usize, String> {
    let mut blocks_checked = 0usize;
    let mut seen = std::collections::BTreeSet::new();
    for n in (2..=30_000u64).chain(TARGETS) {
        let f = factorize(&big(n)).unwrap();
        if f.omega() < 3 || !is_nice(&f) {
            continue;
        }
        let f = lifted(&f);
        if !seen.insert(f.value()) {
            continue;
        }
        let case2 = f.pairs()[0].1 == 1;
        let blocks = if case2 {
            case2_blocks(&f)
        } else {
            case1_blocks(&f)
        }
        .map_err(|e| e.to_string())?;
        let primes: Vec<BigUint> = f.primes().cloned().collect();
        let p = |i: usize| &primes[i - 1];
        for block in blocks {
            let (first, rest): (Vec<u64>, Vec<Vec<u64>>) = match &block.kind {
                BlockKind::Singles => continue,
                BlockKind::Pair(1, k) if case2 => {
                    (vec![1, *k as u64 - 1], vec![vec![*k as u64, 2, 3]])
                }
                BlockKind::Pair(i, j) => {
                    let (i, j) = (*i as u64, *j as u64);
                    let (a, centre) = if case2 {
                        (j + 2 * i - 3, 3 * i - 1)
                    } else {
                        (j + 2 * (i - 1), 3 * i)
                    };
                    (vec![i, a], vec![vec![j, centre - 1, centre, centre + 1]])
                }
                BlockKind::Multi(idx) => {
                    let s = idx.len();
                    let first = if case2 {
                        idx[s - 1] + 2 * idx[0] - 3
                    } else {
                        idx[s - 1] + 2 * (idx[0] - 1)
                    } as u64;
                    let rest = (1..s)
                        .map(|k| {
                            let prev = idx[k - 1] as u64;
                            let mut law = vec![idx[k] as u64];
                            if case2 && k == 1 && idx[0] == 1 {
                                law.extend([2, 3]);
                            } else if case2 {
                                law.extend([3 * prev - 2, 3 * prev - 1, 3 * prev]);
                            } else {
                                law.extend([3 * prev - 1, 3 * prev, 3 * prev + 1]);
                            }
                            law
                        })
                        .collect();
                    (vec![idx[0] as u64, first], rest)
                }
            };
            for c in &block.congruences {
                if residue_mod(c, p(first[0] as usize)) != first[1] {
                    return Err(format!(
                        "n = {}: {c} in {:?} breaks the first-prime law",
                        f.value(),
                        block.kind
                    ));
                }
                for law in &rest {
                    if !law[1..].contains(&residue_mod(c, p(law[0] as usize))) {
                        return Err(format!(
                            "n = {}: {c} in {:?} breaks the range law",
                            f.value(),
                            block.kind
                        ));
                    }
                }
            }
            blocks_checked += 1;
        }
    }
    Ok(blocks_checked)
}

const SMALL_PRIMES: [u64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

/// Random multi-prime blocks with random distinct base residues are
/// internally non-overlapping.
fn multi_block_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..100 {
        let t = rng.gen_range(2..=4);
        let mut primes: Vec<u64> = SMALL_PRIMES.choose_multiple(rng, t).copied().collect();
        primes.sort_unstable();
        let alphas: Vec<u32> = (0..t).map(|_| rng.gen_range(1..=3)).collect();
        let radical: u64 = primes.iter().product();
        let needed = 1usize << alphas.iter().filter(|&&a| a >= 2).count();
        let mut pool: Vec<u64> = (0..radical).collect();
        pool.shuffle(rng);
        pool.truncate(needed);
        let primes_big: Vec<BigUint> = primes.iter().copied().map(big).collect();
        let pool_big: Vec<BigUint> = pool.iter().copied().map(big).collect();
        let block =
            build_multi_prime_block(&primes_big, &alphas, &pool_big).map_err(|e| e.to_string())?;
        let expected: usize = alphas.iter().map(|&a| a as usize).product();
        if block.len() != expected {
            return Err(format!(
                "{primes:?} {alphas:?}: {} members, expected {expected}",
                block.len()
            ));
        }
        for (i, a) in block.iter().enumerate() {
            for b in &block[i + 1..] {
                if overlaps(a, b) {
                    return Err(format!("{primes:?} {alphas:?} {pool:?}: {a} overlaps {b}"));
                }
            }
        }
    }
    Ok(100)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e69_6365);
    let results = [
        ("CRT/overlap pairs", crt_overlap_suite(&mut rng)),
        ("restrictions", restriction_suite(&mut rng)),
        ("range-law blocks", range_law_suite()),
        ("multi-prime blocks", multi_block_suite(&mut rng)),
    ];
    let elapsed = start.elapsed();
    let passed =
        results.iter().all(|(_, r)| r.is_ok()) && within(elapsed, Duration::from_secs(120));
    let parts: Vec<String> = results
        .iter()
        .map(|(name, r)| match r {
            Ok(count) => format!("{name}: {count} ok"),
            Err(e) => format!("{name}: FAILED at {e}"),
        })
        .collect();
    outcome(
        passed,
        format!("{}, {:.1} s", parts.join("; "), elapsed.as_secs_f64()),
    )
}

/// Integers on which each injected fault must surface.
fn fault_targets(fault: Fault) -> &'static [u64] {
    match fault {
        Fault::SwappedBC => &[45, 675, 148_225],
        Fault::DroppedP1Branch => &[675, 3 * 3 * 3 * 49 * 11 * 11],
        Fault::DroppedP2Branch => &[1125, 25 * 343 * 121],
        Fault::Case2SharedResidue => &[3675, 5 * 49 * 121 * 169],
        Fault::IgnoredRestrictions => &[3675, 25_050_025],
    }
}

fn criterion_8() -> Outcome {
    let fixture = fixture_assignment("output2.txt");
    let mut rejected = 0usize;
    let mut total = 0usize;
    for c in fixture.congruences() {
        let bumped = (&c.residue + 1u32) % &c.modulus;
        let mutated = CongruenceAssignment::from_congruences(
            fixture.n().clone(),
            fixture.congruences().into_iter().map(|d| {
                if d.modulus == c.modulus {
                    Congruence::new(bumped.clone(), d.modulus).unwrap()
                } else {
                    d
                }
            }),
        )
        .unwrap();
        total += 1;
        if !verify_certificate(&mutated).unwrap().passed() {
            rejected += 1;
        }
    }
    let rate = rejected as f64 / total as f64;

    let mut fault_runs = 0usize;
    let mut missed = Vec::new();
    for fault in Fault::ALL {
        for &n in fault_targets(fault) {
            fault_runs += 1;
            let caught = match construct_with_fault(&big(n), fault) {
                Ok(set) => !verify_certificate(&set).unwrap().passed(),
                Err(_) => true,
            };
            if !caught {
                missed.push(format!("{fault:?} at {n}"));
            }
        }
    }
    outcome(
        rate >= 0.8 && missed.is_empty(),
        format!(
            "mutations rejected {rejected}/{total} ({:.1}%), faults rejected {}/{fault_runs}, missed: {missed:?}",
            100.0 * rate,
            fault_runs - missed.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("fixture output1.txt", || {
            fixture_criterion("output1.txt", Duration::from_secs(1))
        }),
        ("fixture output2.txt", || {
            fixture_criterion("output2.txt", Duration::from_millis(100))
        }),
        ("check 11025", criterion_3),
        ("construction sweep", criterion_4),
        ("oracle agreement", criterion_5),
        ("non-admissibility scan", criterion_6),
        ("property suites", criterion_7),
        ("mutation sensitivity", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let result = run();
        let verdict = if result.passed { "PASS" } else { "FAIL" };
        println!("criterion {} ({name}): {verdict}: {}", k + 1, result.detail);
        if !result.passed {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
