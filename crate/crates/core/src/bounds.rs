//! Pruning predicates and sandwich bounds relating P(a_1,...,a_n) to the
//! correlation of its prefix (a_1,...,a_{n-1}).
//!
//! Write l = lcm(a_1,...,a_{n-1}). On every prefix cell where the first
//! n-1 cosines agree, cos(a_n x) completes r = floor(a_n/(4l)) full cycles,
//! each contributing exactly half of its length. Summed over the agreeing
//! cells this gives
//!
//!   (1/2 - 2l/a_n) * P(prefix) <= P(config) <= (1/2 + 4l/a_n) * P(prefix)
//!
//! and in particular P(config) > P(prefix)/3 whenever a_n > 12l.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::lcm_checked;
use crate::config::Configuration;
use crate::error::Result;
use crate::exact::exact_probability;
use crate::rational::ExactRational;

/// Two-sided bracket for P(config) in terms of the prefix correlation.
/// `applicable` is true iff a_n >= 4*lcm(prefix), i.e. the top cosine
/// completes at least one full cycle inside each prefix cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichBound {
    pub lower: ExactRational,
    pub upper: ExactRational,
    pub applicable: bool,
}

/// The elementary bound P >= 1/(2*a_n): all cosines are positive on the
/// window of width pi/(2*a_n) after 0 and before 2*pi combined.
pub fn trivial_lower_bound(config: &Configuration) -> ExactRational {
    ExactRational::unit_fraction(2 * config.top() as u128)
}

/// Whether a_n > 12 * lcm(a_1,...,a_{n-1}), the hypothesis under which
/// P(config) > P(prefix)/3 is guaranteed. Searches use it to discard
/// configurations whose prefix already carries a large correlation.
pub fn lcm_prune_applies(config: &Configuration) -> bool {
    assert!(config.n() >= 2, "needs a prefix");
    let prefix = &config.freqs()[..config.n() - 1];
    match lcm_checked(prefix) {
        Ok(l) => match l.checked_mul(12) {
            Some(twelve_l) => config.top() > twelve_l,
            // 12*l does not even fit in 64 bits, so a_n <= u64::MAX < 12*l.
            None => false,
        },
        // lcm beyond 64 bits dwarfs any representable a_n.
        Err(_) => false,
    }
}

fn big_ratio(num: BigInt, den: BigInt) -> ExactRational {
    ExactRational::from_big(BigRational::new(num, den))
}

/// The sandwich bracket around P(config). The lower factor is clamped at
/// zero where the bound is vacuous.
pub fn sandwich(config: &Configuration) -> Result<SandwichBound> {
    assert!(config.n() >= 2, "needs a prefix");
    let prefix = config.prefix().expect("n >= 2");
    let p_prefix = exact_probability(&prefix)?;
    // Exact lcm of the prefix, unconstrained by machine width.
    let l = prefix
        .freqs()
        .iter()
        .fold(BigUint::from(1u32), |acc, &f| acc.lcm(&BigUint::from(f)));
    let a_n = BigUint::from(config.top());
    let applicable = a_n >= &l * 4u32;
    let half = ExactRational::ratio(1, 2);
    let lower_factor = half.clone()
        - big_ratio(BigInt::from(&l * 2u32), BigInt::from(a_n.clone()));
    let upper_factor = half + big_ratio(BigInt::from(&l * 4u32), BigInt::from(a_n));
    Ok(SandwichBound {
        lower: (lower_factor * p_prefix.clone()).max_zero(),
        upper: upper_factor * p_prefix,
        applicable,
    })
}

/// One randomized bounds check: an instance with a_n > 12*lcm(prefix),
/// its exact correlations, and whether the lemma and sandwich hold for it.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsCheck {
    pub config: Configuration,
    pub prefix_probability: ExactRational,
    pub probability: ExactRational,
    pub bound: SandwichBound,
    pub lemma_holds: bool,
    pub sandwich_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub checks: Vec<BoundsCheck>,
    pub holds: bool,
}

/// Randomized verification of the prefix bounds: draws `instances`
/// configurations with a_n > 12*lcm(prefix) and a_n <= 10^4, and checks
/// P > P(prefix)/3 plus containment in the sandwich bracket.
pub fn verify_prefix_bounds(instances: usize, seed: u64) -> Result<BoundsReport> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::with_capacity(instances);
    while checks.len() < instances {
        let prefix_len = rng.random_range(1..=3usize);
        let mut freqs: Vec<u64> = Vec::new();
        let mut cur = 0u64;
        for _ in 0..prefix_len {
            cur += rng.random_range(1..=8u64);
            freqs.push(cur);
        }
        let l = match lcm_checked(&freqs) {
            Ok(l) if l <= 600 => l,
            _ => continue,
        };
        let low = 12 * l + 1;
        let high = (12 * l + 2500).min(10_000);
        if low > high {
            continue;
        }
        freqs.push(rng.random_range(low..=high));
        let config = Configuration::new(freqs)?;
        let prefix = config.prefix().expect("prefix present");
        let prefix_probability = exact_probability(&prefix)?;
        let probability = exact_probability(&config)?;
        let bound = sandwich(&config)?;
        let lemma_holds =
            probability > prefix_probability.clone() * ExactRational::ratio(1, 3);
        let sandwich_holds =
            !bound.applicable || (bound.lower <= probability && probability <= bound.upper);
        checks.push(BoundsCheck {
            config,
            prefix_probability,
            probability,
            bound,
            lemma_holds,
            sandwich_holds,
        });
    }
    let holds = checks.iter().all(|c| c.lemma_holds && c.sandwich_holds);
    Ok(BoundsReport { checks, holds })
}
