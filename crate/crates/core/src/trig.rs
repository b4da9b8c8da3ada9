//! Sign evaluation of cos(a x) at rational multiples of pi, in pure integer
//! arithmetic.
//!
//! Points are fractions u/v in [0, 2] standing for x = pi*u/v. The sign of
//! cos(pi * a * u / v) depends only on (a*u) mod 2v, which 128-bit integers
//! hold exactly for any 64-bit inputs, so no rounding ever enters.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::gcd;
use crate::error::{Error, Result};

/// Sign of a cosine at a sample point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosSign {
    Positive,
    Negative,
    Zero,
}

/// A point x = pi * num/den in [0, 2*pi], stored as a reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PiFraction {
    num: u64,
    den: u64,
}

impl PiFraction {
    /// Reduce and validate num/den <= 2.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroFrequency);
        }
        if (num as u128) > 2 * den as u128 {
            return Err(Error::Overflow {
                context: "pi-fraction outside [0, 2*pi]",
            });
        }
        let g = gcd(num, den).max(1);
        Ok(PiFraction {
            num: num / g,
            den: den / g,
        })
    }

    pub fn zero() -> Self {
        PiFraction { num: 0, den: 1 }
    }

    /// The right endpoint 2*pi.
    pub fn two_pi() -> Self {
        PiFraction { num: 2, den: 1 }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// The reflection x -> 2*pi - x.
    pub fn reflected(&self) -> Self {
        PiFraction {
            num: 2 * self.den - self.num,
            den: self.den,
        }
    }
}

impl PartialOrd for PiFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PiFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        // Exact comparison by cross-multiplication in 128 bits.
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for PiFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "0"),
            (n, 1) => write!(f, "{n} \u{3c0}"),
            (n, d) => write!(f, "{n}/{d} \u{3c0}"),
        }
    }
}

impl Serialize for PiFraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PiFraction", 2)?;
        s.serialize_field("num", &self.num.to_string())?;
        s.serialize_field("den", &self.den.to_string())?;
        s.end()
    }
}

/// Sign of cos(a * x) for x = pi * u/v.
///
/// With w = (a*u) mod 2v: zero iff 2w = v or 2w = 3v, positive iff 2w < v or
/// 2w > 3v, negative otherwise. The product a*u is formed in 128 bits, which
/// is exact for all 64-bit inputs.
pub fn cos_sign_at(a: u64, x: PiFraction) -> CosSign {
    cos_sign_scaled(a, x.num as u128, x.den as u128)
        .expect("128-bit arithmetic is exact for 64-bit inputs")
}

/// Raw kernel over unreduced 128-bit fractions; rejects inputs whose
/// intermediate product a*u does not fit.
pub(crate) fn cos_sign_scaled(a: u64, num: u128, den: u128) -> Result<CosSign> {
    debug_assert!(den > 0);
    let two_den = den.checked_mul(2).ok_or(Error::Overflow {
        context: "cosine sign denominator",
    })?;
    let w = (a as u128)
        .checked_mul(num)
        .ok_or(Error::Overflow {
            context: "cosine sign product a*u",
        })?
        % two_den;
    let double_w = w.checked_mul(2).ok_or(Error::Overflow {
        context: "cosine sign fold",
    })?;
    let three_den = den.checked_mul(3).ok_or(Error::Overflow {
        context: "cosine sign fold",
    })?;
    Ok(if double_w == den || double_w == three_den {
        CosSign::Zero
    } else if double_w < den || double_w > three_den {
        CosSign::Positive
    } else {
        CosSign::Negative
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frac(num: u64, den: u64) -> PiFraction {
        PiFraction::new(num, den).unwrap()
    }

    #[test]
    fn special_angles() {
        assert_eq!(cos_sign_at(1, frac(0, 1)), CosSign::Positive);
        assert_eq!(cos_sign_at(1, frac(1, 2)), CosSign::Zero);
        assert_eq!(cos_sign_at(3, frac(1, 2)), CosSign::Zero);
        // cos(pi) = -1
        assert_eq!(cos_sign_at(3, frac(1, 3)), CosSign::Negative);
        assert_eq!(cos_sign_at(1, frac(2, 1)), CosSign::Positive);
        assert_eq!(cos_sign_at(2, frac(1, 2)), CosSign::Negative);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(PiFraction::new(5, 2).is_err());
        assert!(PiFraction::new(1, 0).is_err());
        assert_eq!(frac(4, 2), frac(2, 1));
    }

    #[test]
    fn matches_floating_point_away_from_zeros() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        for _ in 0..20_000 {
            let den = rng.random_range(1..=10_000u64);
            let num = rng.random_range(0..=2 * den);
            let a = rng.random_range(1..=10_000u64);
            let x = frac(num, den);
            let approx = (a as f64 * std::f64::consts::PI * num as f64 / den as f64).cos();
            if approx.abs() <= 1e-9 {
                continue;
            }
            checked += 1;
            let expected = if approx > 0.0 {
                CosSign::Positive
            } else {
                CosSign::Negative
            };
            assert_eq!(cos_sign_at(a, x), expected, "a={a} x={num}/{den}");
        }
        assert!(checked > 15_000);
    }

    #[test]
    fn cosine_is_even_on_reduced_fractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..5_000 {
            let den = rng.random_range(1..=5_000u64);
            let num = rng.random_range(0..=2 * den);
            let a = rng.random_range(1..=5_000u64);
            let x = frac(num, den);
            assert_eq!(cos_sign_at(a, x), cos_sign_at(a, x.reflected()));
        }
    }

    #[test]
    fn ordering_is_exact() {
        // 1/3 < 333333334/1000000000 even though floats cannot tell.
        assert!(frac(1, 3) < frac(333_333_334, 1_000_000_000));
        assert!(frac(1, 3) > frac(333_333_333, 1_000_000_000));
        let big = u64::MAX / 2;
        assert!(frac(big, big + 1) < frac(big + 1, big + 2));
    }
}
