//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Each criterion compares the library against oracles in
//! `common` or against literal values.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use graceful_kit::algebra::{certify_graceful, det_v_check, v_matrix};
use graceful_kit::decomposition::ringel_decompose;
use graceful_kit::enumerate::RootedTrees;
use graceful_kit::expansion::{basis_count_formula, enumerate_bases, expansion_from_labeling, reconstruct};
use graceful_kit::labeling::{
    find_graceful_labeling, grl, max_distinct_labels, min_distinct_labels, path_deletion_stats,
    search_graceful, LabelCountMode,
};
use graceful_kit::monoid::{canonical_pseudoinverse, k_pseudoinverse};
use graceful_kit::theorems::{
    descent_iterate, verify_composition_lemma, verify_cycle_corollaries, verify_main_theorem,
    SweepOptions, Universe,
};
use graceful_kit::Endofunction;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ef(images: &[usize]) -> Endofunction {
    Endofunction::new(images.to_vec()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Basis counts against a filter of `S_n` written from the range condition.
fn bases_count() -> Outcome {
    let started = Instant::now();
    let expected = [1u128, 2, 4, 12, 36, 144, 576];
    for (n, &want) in (3..=9).zip(&expected) {
        let brute = perms(n)
            .into_iter()
            .filter(|g| g[0] == 0 && (1..n).all(|i| g[i] <= i || g[i] <= n - 1 - i))
            .count() as u128;
        let formula = factorial((n - 1) / 2) * factorial(n / 2);
        let listed = enumerate_bases(n).len() as u128;
        ensure(brute == want && formula == want && listed == want && basis_count_formula(n) == want, || {
            format!("n={n}: brute {brute}, formula {formula}, listed {listed}, expected {want}")
        })?;
    }
    within(started.elapsed(), Duration::from_secs(60))?;
    Ok(format!("n=3..9 counts {expected:?} in {:.2?}", started.elapsed()))
}

fn path_round_trip() -> Outcome {
    let f = ef(&[0, 0, 1, 2]);
    let cases = [
        (ef(&[0, 3, 1, 2]), ef(&[0, 2, 1, 3]), vec![0i8, 1, -1, -1]),
        (ef(&[2, 1, 3, 0]), ef(&[3, 1, 0, 2]), vec![1i8, 1, 0, -1]),
    ];
    for (sigma, gamma, sign) in &cases {
        for t in 0..=1 {
            let e = expansion_from_labeling(&f, sigma, t).map_err(|e| e.to_string())?;
            ensure(&e.gamma == gamma && &e.sign == sign, || {
                format!("sigma={sigma} t={t}: got gamma={} sign={:?}", e.gamma, e.sign)
            })?;
            let back = reconstruct(&e).map_err(|e| e.to_string())?;
            ensure(back == f, || format!("sigma={sigma} t={t}: reconstructed {back}"))?;
        }
    }
    Ok("both bases and sign tables reproduced, reconstruction exact for t=0,1".into())
}

fn star_grl() -> Outcome {
    for n in 2..=8 {
        let star = vec![0; n];
        let got: BTreeSet<Vec<usize>> = grl(&ef(&star)).iter().map(|g| g.images().to_vec()).collect();
        let phi: Vec<usize> = (0..n).rev().collect();
        let expected: BTreeSet<Vec<usize>> = [star.clone(), conj(&star, &phi)].into();
        ensure(got == expected && got.len() == 2, || format!("n={n}: {got:?}"))?;
        let brute = graceful_conjugates(&star, &perms(n));
        ensure(brute == expected, || format!("n={n}: brute force gives {brute:?}"))?;
    }
    Ok("size 2 for n=2..8, matches brute force".into())
}

fn shift_down_pseudoinverses() -> Outcome {
    for n in 4..=7 {
        let f: Vec<usize> = (0..n).map(|i: usize| i.saturating_sub(1)).collect();
        // ℓ0 distance between the adjacency matrices of g∘f and id
        let dist = |g: &[usize]| 2 * (0..n).filter(|&i| g[f[i]] != i).count();
        let brute: BTreeSet<Vec<usize>> = maps(n).into_iter().filter(|g| dist(g) <= 2).collect();
        let got: BTreeSet<Vec<usize>> =
            k_pseudoinverse(&ef(&f), 1).map_err(|e| e.to_string())?.iter().map(|g| g.images().to_vec()).collect();
        ensure(got.len() == 2 * n && got == brute, || format!("n={n}: {} members, brute {}", got.len(), brute.len()))?;
        let g1: Vec<usize> = (0..n).map(|i| if i == 0 { 0 } else { i % (n - 1) + 1 }).collect();
        let gn: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let plus: BTreeSet<Vec<usize>> =
            canonical_pseudoinverse(&ef(&f)).map_err(|e| e.to_string())?.iter().map(|g| g.images().to_vec()).collect();
        ensure(plus == [g1.clone(), gn.clone()].into(), || format!("n={n}: f+ = {plus:?}"))?;
    }
    Ok("2n members and f+ = {g_1, g_n} for n=4..7".into())
}

fn certificate_equivalence() -> Outcome {
    let started = Instant::now();
    let mut total = 0;
    for n in 1..=5 {
        let ps = perms(n);
        for f in maps(n) {
            let report = certify_graceful(&ef(&f));
            let brute = max_labels(&f, &ps) == n;
            ensure(report.graceful == brute, || format!("f={f:?}: certificate {}, brute {brute}", report.graceful))?;
            if let Some(w) = &report.witness {
                ensure(distinct_under(&f, w) == n, || format!("f={f:?}: witness {w:?} is not graceful"))?;
            }
            total += 1;
        }
    }
    within(started.elapsed(), Duration::from_secs(600))?;
    Ok(format!("{total} functions, 0 disagreements, {:.2?}", started.elapsed()))
}

/// Cofactor expansion along the first row.
fn laplace(m: &[Vec<BigRational>]) -> BigRational {
    if m.is_empty() {
        return BigRational::one();
    }
    let mut acc = BigRational::zero();
    for c in 0..m.len() {
        let minor: Vec<Vec<BigRational>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, v)| v.clone()).collect()).collect();
        let term = &m[0][c] * laplace(&minor);
        if c % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn determinant_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    for n in 1..=5 {
        for f in maps(n) {
            if cycle_lengths(&f) != [1] {
                continue;
            }
            let mut points = 0;
            while points < 50 {
                let x: Vec<BigRational> = (0..n)
                    .map(|_| BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into()))
                    .collect();
                let Ok(vm) = v_matrix(&ef(&f), &x) else { continue };
                let c: Vec<BigRational> = (0..n).map(|j| (&x[f[j]] - &x[j]) * (&x[f[j]] - &x[j])).collect();
                // Σ_k (x_i c_j)^k, without the geometric-series closed form
                let power_sums: Vec<Vec<BigRational>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let r = &x[i] * &c[j];
                                let mut term = BigRational::one();
                                let mut sum = BigRational::zero();
                                for _ in 0..n {
                                    sum += &term;
                                    term *= &r;
                                }
                                sum
                            })
                            .collect()
                    })
                    .collect();
                let mut product = BigRational::one();
                for j in 0..n {
                    for i in 0..j {
                        product *= (&x[j] - &x[i]) * (&c[j] - &c[i]);
                    }
                }
                let det = laplace(&power_sums);
                ensure(vm == power_sums, || format!("f={f:?}: V differs from the power-sum matrix"))?;
                ensure(det == product, || format!("f={f:?} x={x:?}: det {det} vs {product}"))?;
                let check = det_v_check(&ef(&f), &x).map_err(|e| e.to_string())?;
                ensure(check.equal && check.determinant == det.to_string(), || format!("f={f:?}: library check disagrees"))?;
                points += 1;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} trees x 50 points, exact equality"))
}

fn label_count_bounds() -> Outcome {
    let mut total = 0;
    for n in 1..=5 {
        let ps = perms(n);
        for f in maps(n) {
            let g = ef(&f);
            let stats = path_deletion_stats(&g);
            let loops = (0..n).filter(|&i| f[i] == i).count();
            let fp = usize::from(loops > 0);
            ensure(stats.rho == rho(&f) && stats.delta == rho(&f) + loops, || {
                format!("f={f:?}: rho {} delta {} vs oracle rho {}", stats.rho, stats.delta, rho(&f))
            })?;
            let lo = min_distinct_labels(&g, LabelCountMode::Exhaustive).map_err(|e| e.to_string())?;
            let hi = max_distinct_labels(&g, LabelCountMode::Exhaustive).map_err(|e| e.to_string())?;
            ensure(lo == min_labels(&f, &ps) && hi == max_labels(&f, &ps), || format!("f={f:?}: {lo}..{hi} vs brute"))?;
            ensure(1 <= lo && lo <= 1 + stats.rho + fp, || format!("f={f:?}: min {lo}, rho {}", stats.rho))?;
            ensure(hi <= n && hi + stats.delta >= n + fp, || format!("f={f:?}: max {hi}, delta {}", stats.delta))?;
            total += 1;
        }
    }
    // sharpness: identity and fixed-point-free involutions attain min 1,
    // single spanning cycles attain max = n - delta
    for n in 1..=6 {
        let id: Vec<usize> = (0..n).collect();
        ensure(min_distinct_labels(&ef(&id), LabelCountMode::Exhaustive).ok() == Some(1), || format!("id n={n}"))?;
        if n % 2 == 0 {
            let inv: Vec<usize> = (0..n).map(|i| i ^ 1).collect();
            ensure(min_distinct_labels(&ef(&inv), LabelCountMode::Exhaustive).ok() == Some(1), || format!("involution n={n}"))?;
        }
        if n >= 2 {
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let delta = path_deletion_stats(&ef(&cycle)).delta;
            let hi = max_distinct_labels(&ef(&cycle), LabelCountMode::Exhaustive).map_err(|e| e.to_string())?;
            ensure(delta == 1 && hi == n - delta, || format!("{n}-cycle: max {hi}, delta {delta}"))?;
        }
    }
    Ok(format!("{total} functions within bounds; sharpness confirmed for n<=6"))
}

fn composition_lemma() -> Outcome {
    let mut vacuous = 0;
    let mut checked = 0;
    for n in 1..=5 {
        let ps = perms(n);
        for f in maps(n) {
            let f2 = compose(&f, &f);
            checked += 1;
            if aut_count(&f2, &ps) <= aut_count(&f, &ps) {
                vacuous += 1;
                continue;
            }
            if graceful(&f2, &ps) {
                ensure(graceful(&f, &ps), || format!("f={f:?}: f^2 graceful, f not"))?;
            }
        }
    }
    let opts = SweepOptions::default();
    let mut trees = 0;
    for n in 1..=8 {
        let report = verify_composition_lemma(n, Universe::Trees, &opts).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("trees n={n}: {:?}", report.violations.first()))?;
        trees += report.instances_checked;
    }
    let report = verify_composition_lemma(5, Universe::Endofunctions, &opts).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("library sweep n=5: {:?}", report.violations.first()))?;
    Ok(format!("{checked} endofunctions ({vacuous} vacuous) and {trees} trees, 0 violations"))
}

fn main_theorem() -> Outcome {
    let started = Instant::now();
    let mut checked = 0;
    for n in 1..=5 {
        let ps = perms(n);
        for f in maps(n) {
            let o = cycle_lengths(&f).into_iter().fold(1, |a, b| a / gcd(a, b) * b);
            let g = iterate(&f, o);
            let lhs = n + 1 - components(&g);
            let rhs = max_labels(&g, &ps);
            ensure(lhs == rhs, || format!("f={f:?}: n+1-components {lhs}, max labels {rhs}"))?;
            checked += 1;
        }
    }
    let opts = SweepOptions::default();
    let report = verify_main_theorem(5, Universe::Endofunctions, &opts).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("library sweep: {:?}", report.violations.first()))?;
    let mut trees = 0;
    for n in 1..=9 {
        for t in RootedTrees::new(n).map_err(|e| e.to_string())? {
            let sigma = search_graceful(&t).ok_or_else(|| format!("no graceful labeling for {t}"))?;
            ensure(distinct_under(t.images(), sigma.images()) == n, || format!("{t}: bad labeling {sigma}"))?;
            trees += 1;
        }
        let report = verify_main_theorem(n, Universe::Trees, &opts).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("trees n={n}: {:?}", report.violations.first()))?;
    }
    within(started.elapsed(), Duration::from_secs(1800))?;
    Ok(format!("{checked} endofunctions exact; {trees} trees graceful, {:.2?}", started.elapsed()))
}

fn ringel() -> Outcome {
    let mut trees = 0;
    for n in 1..=8 {
        let m = 2 * n - 1;
        for t in RootedTrees::new(n).map_err(|e| e.to_string())? {
            let sigma = find_graceful_labeling(&t).ok_or_else(|| format!("no graceful labeling for {t}"))?;
            let report = ringel_decompose(&t, &sigma).map_err(|e| e.to_string())?;
            let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for shift in &report.shifts {
                for &(a, b) in shift {
                    *count.entry((a.min(b), a.max(b))).or_default() += 1;
                }
            }
            let total: usize = report.shifts.iter().map(Vec::len).sum();
            ensure(report.shifts.len() == m, || format!("{t}: {} shifts", report.shifts.len()))?;
            ensure(total == m * (n - 1) && count.len() == m * (n - 1) && count.values().all(|&c| c == 1), || {
                format!("{t}: {total} edges, {} distinct", count.len())
            })?;
            ensure(report.is_partition, || format!("{t}: library reports no partition"))?;
            trees += 1;
        }
    }
    Ok(format!("{trees} trees, every K_(2n-1) edge covered exactly once"))
}

fn corollaries() -> Outcome {
    let mut f = vec![0];
    for block in 0..2 {
        let base = 1 + 4 * block;
        f.extend((0..4).map(|k| base + (k + 1) % 4));
    }
    let sigma = search_graceful(&ef(&f)).ok_or("C1 + 2C4 has no graceful labeling")?;
    ensure(distinct_under(&f, sigma.images()) == 9, || format!("bad labeling {sigma}"))?;
    let mut counts = Vec::new();
    for n in 4..=6 {
        let count = perms(n).into_iter().filter(|p| is_labeled_gracefully(p)).count();
        ensure(count % 4 == 0, || format!("n={n}: {count} gracefully labeled permutations"))?;
        counts.push(count);
    }
    let report = verify_cycle_corollaries(9, 1, 2, 6).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("library: {:?}", report.violations.first()))?;
    Ok(format!("C1+2C4 labeled by {sigma}; counts {counts:?} for n=4..6"))
}

fn reattachment_descent() -> Outcome {
    let mut failures: BTreeMap<usize, (usize, usize, String)> = BTreeMap::new();
    for n in 4..=7 {
        for t in RootedTrees::new(n).map_err(|e| e.to_string())? {
            let trace = descent_iterate(&t).map_err(|e| e.to_string())?;
            let mut sizes = vec![t.image_size()];
            sizes.extend(trace.steps.iter().map(|s| s.f_tilde_gh.image_size()));
            let descends = sizes.windows(2).all(|w| w[1] < w[0]);
            let last = trace.steps.last().map_or(t.clone(), |s| s.f_tilde_gh.clone());
            let ok = descends && last.is_constant() && trace.steps.len() <= n - 2;
            let entry = failures.entry(n).or_insert((0, 0, String::new()));
            entry.1 += 1;
            if !ok {
                entry.0 += 1;
                if entry.2.is_empty() {
                    entry.2 = t.to_string();
                }
            }
        }
    }
    let summary: Vec<String> = failures
        .iter()
        .map(|(n, (bad, all, first))| {
            if *bad == 0 {
                format!("n={n}: {all}/{all}")
            } else {
                format!("n={n}: {bad}/{all} stuck (first {first})")
            }
        })
        .collect();
    let summary = summary.join("; ");
    if failures.values().all(|v| v.0 == 0) {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("basis count formula", bases_count),
        ("path expansion round trip", path_round_trip),
        ("star GrL", star_grl),
        ("shift-down pseudoinverses", shift_down_pseudoinverses),
        ("certificate vs brute force", certificate_equivalence),
        ("determinant identity", determinant_identity),
        ("label-count bounds", label_count_bounds),
        ("composition lemma", composition_lemma),
        ("main theorem", main_theorem),
        ("cyclic decomposition", ringel),
        ("cycle corollaries", corollaries),
        ("leaf-reattachment descent", reattachment_descent),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = started.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{took:.1?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} [{took:.1?}]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
