//! Small integer helpers used by the hot evaluation loops.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

pub(crate) fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Least common multiple of a non-empty list, with overflow detection.
///
/// Fails loudly when the running lcm no longer fits in 64 bits; the error
/// carries the partial lcm accumulated so far.
pub fn lcm_checked(values: &[u64]) -> Result<u64> {
    if values.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let mut acc: u64 = 1;
    for &v in values {
        if v == 0 {
            return Err(Error::ZeroFrequency);
        }
        let g = gcd(acc, v);
        acc = (acc / g)
            .checked_mul(v)
            .ok_or(Error::LcmOverflow { partial: acc })?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(0, 5), 5);
        assert_eq!(gcd(5, 0), 5);
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(35, 64), 1);
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_checked(&[1, 3, 9]).unwrap(), 9);
        assert_eq!(lcm_checked(&[1, 3, 11]).unwrap(), 33);
        // 1155 = 3 * 5 * 7 * 11, with 105 = 3 * 5 * 7.
        assert_eq!(lcm_checked(&[1, 3, 11, 35, 105]).unwrap(), 1155);
    }

    #[test]
    fn lcm_overflow_carries_partial() {
        // Two coprime values near 2^63 cannot have their lcm in u64.
        let a = (1u64 << 62) + 1;
        let b = 1u64 << 62;
        match lcm_checked(&[a, b]) {
            Err(Error::LcmOverflow { partial }) => assert_eq!(partial, a),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn lcm_rejects_empty_and_zero() {
        assert_eq!(lcm_checked(&[]), Err(Error::EmptyConfiguration));
        assert_eq!(lcm_checked(&[3, 0]), Err(Error::ZeroFrequency));
    }
}
