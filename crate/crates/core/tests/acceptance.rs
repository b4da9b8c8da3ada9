//! Acceptance suite: one test per headline claim, each printing a pass line.
//! Run with `cargo test -p cosign-core --test acceptance -- --nocapture`
//! to see the per-criterion lines and measured times.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cosign_core::bounds::verify_prefix_bounds;
use cosign_core::fourier::{pairwise_law_table, PairCache};
use cosign_core::montecarlo;
use cosign_core::search::{
    enumerate_normalized, find_minimum, verify_p3_theorem, verify_power_ladder, SearchOptions,
};
use cosign_core::{
    exact_probability_cells, exact_probability_sweep, Configuration, ExactRational,
};

fn cfg(freqs: &[u64]) -> Configuration {
    Configuration::new(freqs.to_vec()).unwrap()
}

fn rat(num: i64, den: i64) -> ExactRational {
    ExactRational::ratio(num, den)
}

/// Sweep evaluation with the elementary bound 1/(2*a_n) <= P <= 1 enforced
/// on everything the suite touches.
fn checked_probability(config: &Configuration) -> ExactRational {
    let p = exact_probability_sweep(config).unwrap();
    assert!(
        p >= ExactRational::ratio_u128(1, 2 * config.top() as u128),
        "trivial lower bound violated by {config}"
    );
    assert!(p <= ExactRational::one());
    p
}

fn pass(line: &str) {
    println!("[PASS] {line}");
}

#[test]
fn criterion_01_exact_values() {
    let t = Instant::now();
    let cases: [(&[u64], (i64, i64)); 6] = [
        (&[1, 3], (1, 3)),
        (&[1, 3, 9], (1, 9)),
        (&[1, 3, 11], (5, 33)),
        (&[1, 3, 11, 33], (1, 33)),
        (&[1, 3, 9, 27], (1, 27)),
        (&[1, 3, 11, 35, 105], (1, 105)),
    ];
    for (freqs, (num, den)) in cases {
        let c = cfg(freqs);
        let expected = rat(num, den);
        assert_eq!(checked_probability(&c), expected, "sweep on {c}");
        assert_eq!(exact_probability_cells(&c).unwrap(), expected, "cells on {c}");
    }
    assert!(checked_probability(&cfg(&[1, 3, 11, 33])) < checked_probability(&cfg(&[1, 3, 9, 27])));
    pass(&format!(
        "criterion 1: known exact values reproduced by both engines, \
         and P(1,3,11,33) < P(1,3,9,27) ({:.0} ms)",
        t.elapsed().as_secs_f64() * 1e3
    ));
}

#[test]
fn criterion_02_power_ladder() {
    let t = Instant::now();
    let entries = verify_power_ladder(6).unwrap();
    // Rungs n = 2..=6, then the {1,3,11,33,99} extension check.
    assert_eq!(entries.len(), 6);
    let mut expected_den: i64 = 3;
    for entry in &entries[..5] {
        assert!(entry.ok, "{} gave {}", entry.config, entry.value);
        assert_eq!(entry.value, rat(1, expected_den));
        expected_den *= 3;
    }
    assert!(entries[5].ok);
    assert_eq!(entries[5].value, rat(1, 99));
    let elapsed = t.elapsed().as_secs_f64();
    assert!(elapsed < 1.0, "ladder took {elapsed:.2} s");
    pass(&format!(
        "criterion 2: P(1,3,...,3^(n-1)) = 3^-(n-1) for n = 2..6 ({:.0} ms)",
        elapsed * 1e3
    ));
}

#[test]
fn criterion_03_p3_theorem_verifier() {
    let t = Instant::now();
    let verdict = verify_p3_theorem().unwrap();
    assert!(verdict.holds);
    assert_eq!(verdict.attaining, vec![cfg(&[1, 3, 9])]);
    let one_ninth = rat(1, 9);
    for (config, value) in &verdict.swept {
        if *config == cfg(&[1, 3, 9]) {
            assert_eq!(*value, one_ninth);
        } else {
            assert!(*value > one_ninth, "{config} gave {value}");
        }
    }
    // The residual space: {1,b,c} with b in {3,5,7}, b < c <= 12b, c odd,
    // plus the special triple {3,5,15}.
    assert_eq!(verdict.swept.len(), 16 + 27 + 38 + 1);
    pass(&format!(
        "criterion 3: finite verification leaves {{1,3,9}} as the only \
         triple at 1/9 over {} cases ({:.2} s)",
        verdict.swept.len(),
        t.elapsed().as_secs_f64()
    ));
}

#[test]
fn criterion_04_small_searches() {
    let t = Instant::now();
    let options = SearchOptions::default();
    let triples = find_minimum(3, 30, &options).unwrap();
    assert_eq!(triples.minimum, rat(1, 9));
    assert_eq!(triples.argmins, vec![cfg(&[1, 3, 9])]);
    let pairs = find_minimum(2, 50, &options).unwrap();
    assert_eq!(pairs.minimum, rat(1, 3));
    assert_eq!(pairs.argmins, vec![cfg(&[1, 3])]);
    let elapsed = t.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "searches took {elapsed:.1} s");
    pass(&format!(
        "criterion 4: exhaustive searches give unique minimizers \
         {{1,3,9}} (n=3, a<=30) and {{1,3}} (n=2, a<=50) ({:.2} s)",
        elapsed
    ));
}

#[test]
fn criterion_05_n4_search_with_prefilter() {
    let t = Instant::now();
    let options = SearchOptions {
        mc_prefilter: true,
        mc_samples: 1_000,
        mc_margin: 5.0,
        prune: true,
        workers: 0,
        seed: 0,
        progress: false,
    };
    let report = find_minimum(4, 105, &options).unwrap();
    assert_eq!(report.minimum, rat(1, 33));
    assert_eq!(report.argmins, vec![cfg(&[1, 3, 11, 33])]);
    assert_eq!(
        report.total_enumerated(),
        enumerate_normalized(4, 105).count() as u64
    );
    let discarded = report.pruned_by_rule.get("mc_prefilter").copied().unwrap_or(0);
    pass(&format!(
        "criterion 5: n=4 search to 105 with Monte-Carlo prefilter finds \
         1/33 at {{1,3,11,33}}; {} evaluated exactly, {discarded} discarded \
         by the prefilter ({:.1} s wall)",
        report.evaluated,
        t.elapsed().as_secs_f64()
    ));
}

#[test]
fn criterion_06_oracle_equivalence() {
    let t = Instant::now();
    // Exhaustive: every configuration with n <= 4 and entries <= 30.
    let mut all: Vec<Configuration> = Vec::new();
    for n in 1..=4usize {
        let mut state: Vec<u64> = (1..=n as u64).collect();
        'outer: loop {
            all.push(cfg(&state));
            let mut i = n;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                if state[i] < 30 - (n - 1 - i) as u64 {
                    state[i] += 1;
                    for j in i + 1..n {
                        state[j] = state[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    assert_eq!(all.len(), 30 + 435 + 4060 + 27405);
    all.par_iter().for_each(|c| {
        let sweep = checked_probability(c);
        let cells = exact_probability_cells(c).unwrap();
        assert_eq!(sweep, cells, "engines disagree on {c}");
    });

    // Randomized: 1000 configurations with larger entries but lcm <= 1e5.
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let mut random_cases: Vec<Configuration> = Vec::new();
    while random_cases.len() < 1000 {
        let n = rng.random_range(2..=4usize);
        let mut freqs: Vec<u64> = Vec::new();
        let mut cur = 0u64;
        for _ in 0..n {
            cur += rng.random_range(1..=40u64);
            freqs.push(cur);
        }
        let candidate = cfg(&freqs);
        match candidate.lcm() {
            Ok(l) if l <= 100_000 => random_cases.push(candidate),
            _ => continue,
        }
    }
    assert!(random_cases.iter().any(|c| c.top() > 30));
    random_cases.par_iter().for_each(|c| {
        assert_eq!(
            checked_probability(c),
            exact_probability_cells(c).unwrap(),
            "engines disagree on {c}"
        );
    });
    pass(&format!(
        "criterion 6: cell and sweep engines agree on {} exhaustive and \
         1000 randomized configurations ({:.1} s)",
        all.len(),
        t.elapsed().as_secs_f64()
    ));
}

#[test]
fn criterion_07_pairwise_law() {
    let t = Instant::now();
    let records = pairwise_law_table(40).unwrap();
    assert_eq!(records.len(), 780);
    for r in &records {
        assert!(r.law_holds, "law fails for ({}, {})", r.a, r.b);
        if !r.ratio.both_odd() {
            assert_eq!(r.probability, rat(1, 2));
        }
    }
    pass(&format!(
        "criterion 7: pairwise law (P = 1/2 or |2P-1| = 1/pq) holds for all \
         780 pairs up to 40 ({:.2} s)",
        t.elapsed().as_secs_f64()
    ));
}

#[test]
fn criterion_08_triple_identity() {
    let t = Instant::now();
    let cache = PairCache::new();
    let mut count = 0u64;
    for a in 1..=40u64 {
        for b in a + 1..=40 {
            for c in b + 1..=40 {
                let assembled = (cache.probability(a, b).unwrap()
                    + cache.probability(a, c).unwrap()
                    + cache.probability(b, c).unwrap()
                    - ExactRational::one())
                    * rat(1, 2);
                let direct = checked_probability(&cfg(&[a, b, c]));
                assert_eq!(assembled, direct, "identity fails for ({a},{b},{c})");
                count += 1;
            }
        }
    }
    assert_eq!(count, 9880);
    pass(&format!(
        "criterion 8: P(a,b,c) = (P(a,b)+P(a,c)+P(b,c)-1)/2 for all {count} \
         triples up to 40 ({:.1} s)",
        t.elapsed().as_secs_f64()
    ));
}

#[test]
fn criterion_09_prefix_bounds() {
    let t = Instant::now();
    let report = verify_prefix_bounds(200, 17).unwrap();
    assert_eq!(report.checks.len(), 200);
    assert!(report.holds);
    for check in &report.checks {
        assert!(check.lemma_holds, "lemma fails for {}", check.config);
        assert!(check.bound.applicable);
        assert!(check.sandwich_holds, "sandwich fails for {}", check.config);
    }
    pass(&format!(
        "criterion 9: P > P(prefix)/3 and sandwich containment on 200 \
         spread instances ({:.1} s)",
        t.elapsed().as_secs_f64()
    ));
}

#[test]
fn criterion_10_scaling_invariance() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for _ in 0..100 {
        let n = rng.random_range(1..=4usize);
        let mut freqs: Vec<u64> = Vec::new();
        let mut cur = 0u64;
        for _ in 0..n {
            cur += rng.random_range(1..=10u64);
            freqs.push(cur);
        }
        let base = cfg(&freqs);
        let p = checked_probability(&base);
        for k in 2..=8u64 {
            assert_eq!(
                checked_probability(&base.scaled(k).unwrap()),
                p,
                "scaling by {k} changed P({base})"
            );
        }
    }
    pass(&format!(
        "criterion 10: P(k*S) = P(S) for k <= 8 over 100 random \
         configurations ({:.1} s)",
        t.elapsed().as_secs_f64()
    ));
}

#[test]
fn criterion_11_monte_carlo_agreement() {
    let t = Instant::now();
    let known: [&[u64]; 20] = [
        &[7],
        &[1, 2],
        &[1, 3],
        &[1, 4],
        &[1, 5],
        &[1, 6],
        &[2, 3],
        &[1, 2, 3],
        &[1, 3, 5],
        &[1, 3, 7],
        &[1, 3, 9],
        &[1, 3, 11],
        &[2, 3, 7],
        &[2, 5, 9],
        &[3, 5, 15],
        &[4, 6, 9],
        &[5, 7, 9],
        &[1, 3, 9, 27],
        &[1, 3, 11, 33],
        &[1, 3, 11, 35, 105],
    ];
    let mut within = 0;
    for freqs in known {
        let c = cfg(freqs);
        let exact = checked_probability(&c).to_f64();
        let est = montecarlo::estimate(&c, 50_000, 2026);
        let rerun = montecarlo::estimate(&c, 50_000, 2026);
        assert_eq!(est, rerun, "rerun not bit-identical for {c}");
        if (est.estimate - exact).abs() <= 5.0 * est.stderr {
            within += 1;
        } else {
            eprintln!(
                "outside 5 sigma: {c} estimate {} exact {exact} stderr {}",
                est.estimate, est.stderr
            );
        }
    }
    assert!(within >= 19, "only {within}/20 within 5 standard errors");
    pass(&format!(
        "criterion 11: Monte-Carlo within 5 standard errors on {within}/20 \
         known values, reruns bit-identical ({:.1} s)",
        t.elapsed().as_secs_f64()
    ));
}
