//! Pairwise sign-correlation laws and the identity assembling a triple
//! correlation from its three pairs.
//!
//! For a pair a, b with a/b = p/q in lowest terms, the mean of
//! sgn(cos(a t) cos(b t)) over a full period vanishes when p or q is even
//! and has magnitude 1/(p*q) when both are odd. Since that mean equals
//! 2*P(a,b) - 1, the law is testable directly at the level of exact
//! probabilities. Signs are always taken from the exact engine, never from
//! a closed form.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::Serialize;

use crate::arith::gcd;
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exact::exact_probability;
use crate::rational::ExactRational;

/// The lowest-terms ratio p/q of a pair of frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReducedRatio {
    pub p: u64,
    pub q: u64,
}

impl ReducedRatio {
    pub fn both_odd(&self) -> bool {
        self.p % 2 == 1 && self.q % 2 == 1
    }
}

/// The coprime pair (p, q) with a/b = p/q.
pub fn reduced_ratio(a: u64, b: u64) -> ReducedRatio {
    assert!(a >= 1 && b >= 1, "frequencies must be positive");
    let g = gcd(a, b);
    ReducedRatio { p: a / g, q: b / g }
}

/// Magnitude of the period mean of sgn(cos(a t) cos(b t)): zero when the
/// reduced ratio has an even part, 1/(p*q) when both parts are odd.
pub fn pair_integral_magnitude(a: u64, b: u64) -> ExactRational {
    assert!(a != b, "pair must be distinct");
    let r = reduced_ratio(a, b);
    if r.both_odd() {
        ExactRational::unit_fraction(r.p as u128 * r.q as u128)
    } else {
        ExactRational::zero()
    }
}

/// Signed period mean of sgn(cos(a t) cos(b t)), computed as 2*P(a,b) - 1
/// from the exact engine. Its magnitude is checked against
/// [`pair_integral_magnitude`]; a mismatch is an engine bug.
pub fn pair_integral_signed(a: u64, b: u64) -> Result<ExactRational> {
    assert!(a != b, "pair must be distinct");
    let pair = Configuration::new(vec![a.min(b), a.max(b)])?;
    let p = exact_probability(&pair)?;
    let signed = ExactRational::from_integer(2) * p - ExactRational::one();
    if signed.abs() != pair_integral_magnitude(a, b) {
        return Err(Error::Internal(
            "pair integral magnitude disagrees with the exact engine",
        ));
    }
    Ok(signed)
}

/// P(a,b,c) assembled from pairwise correlations:
/// (P(a,b) + P(a,c) + P(b,c) - 1) / 2.
///
/// The identity is pointwise (the triple sign indicator is a linear
/// combination of the three pair sign products), so the result must agree
/// exactly with the exact engine; this is verified on every call.
pub fn triple_from_pairs(a: u64, b: u64, c: u64) -> Result<ExactRational> {
    assert!(a != b && a != c && b != c, "triple must be distinct");
    let pair = |x: u64, y: u64| -> Result<ExactRational> {
        exact_probability(&Configuration::new(vec![x.min(y), x.max(y)])?)
    };
    let sum = pair(a, b)? + pair(a, c)? + pair(b, c)? - ExactRational::one();
    let combined = sum * ExactRational::ratio(1, 2);
    let mut freqs = vec![a, b, c];
    freqs.sort_unstable();
    let direct = exact_probability(&Configuration::new(freqs)?)?;
    if combined != direct {
        return Err(Error::Internal(
            "pairwise assembly disagrees with the exact engine",
        ));
    }
    Ok(combined)
}

/// The score 1/(pq) + 1/(rs) + 1/(uv) over the three reduced ratios of a
/// normalized triple. Any triple with correlation at most 1/9 must score at
/// least 5/9, so a smaller score certifies P > 1/9 without evaluating it.
pub fn even_reduction_score(a: u64, b: u64, c: u64) -> ExactRational {
    assert!(a != b && a != c && b != c, "triple must be distinct");
    assert!(gcd(gcd(a, b), c) == 1, "triple must be normalized");
    let term = |x: u64, y: u64| {
        let r = reduced_ratio(x, y);
        ExactRational::unit_fraction(r.p as u128 * r.q as u128)
    };
    term(a, b) + term(a, c) + term(b, c)
}

/// Memo table for pairwise probabilities keyed by the normalized pair.
/// Pairs repeat heavily inside verification sweeps; the table is meant to
/// live for the duration of one run.
#[derive(Default)]
pub struct PairCache {
    map: RwLock<HashMap<(u64, u64), ExactRational>>,
}

impl PairCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn probability(&self, a: u64, b: u64) -> Result<ExactRational> {
        assert!(a != b, "pair must be distinct");
        let (lo, hi) = (a.min(b), a.max(b));
        let g = gcd(lo, hi);
        let key = (lo / g, hi / g);
        if let Some(hit) = self.map.read().expect("pair cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let value = exact_probability(&Configuration::new(vec![key.0, key.1])?)?;
        self.map
            .write()
            .expect("pair cache poisoned")
            .insert(key, value.clone());
        Ok(value)
    }
}

/// One row of the pairwise-law table: the reduced ratio, the exact
/// probability, and whether the magnitude law holds for it.
#[derive(Debug, Clone, Serialize)]
pub struct PairLawRecord {
    pub a: u64,
    pub b: u64,
    pub ratio: ReducedRatio,
    pub probability: ExactRational,
    pub law_holds: bool,
}

/// Check the pairwise law for every pair a < b <= a_max: P = 1/2 exactly
/// when the reduced ratio has an even part, otherwise |2P - 1| = 1/(pq).
pub fn pairwise_law_table(a_max: u64) -> Result<Vec<PairLawRecord>> {
    assert!(a_max >= 2);
    let cache = PairCache::new();
    let mut records = Vec::new();
    for a in 1..a_max {
        for b in (a + 1)..=a_max {
            let ratio = reduced_ratio(a, b);
            let probability = cache.probability(a, b)?;
            let signed =
                ExactRational::from_integer(2) * probability.clone() - ExactRational::one();
            let law_holds = if ratio.both_odd() {
                signed.abs() == pair_integral_magnitude(a, b)
            } else {
                probability == ExactRational::ratio(1, 2)
            };
            records.push(PairLawRecord {
                a,
                b,
                ratio,
                probability,
                law_holds,
            });
        }
    }
    Ok(records)
}
