//! Frequency configurations: strictly increasing tuples of positive integers.

use std::fmt;

use serde::de;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{gcd, lcm_checked};
use crate::error::{Error, Result};

/// A strictly increasing list of positive integer frequencies.
///
/// The canonical form of a configuration has gcd 1; [`Configuration::normalize`]
/// produces it. Duplicate or descending input is rejected at construction
/// rather than silently repaired.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    freqs: Vec<u64>,
}

impl Configuration {
    pub fn new(freqs: impl Into<Vec<u64>>) -> Result<Self> {
        let freqs = freqs.into();
        if freqs.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        for (i, &f) in freqs.iter().enumerate() {
            if f == 0 {
                return Err(Error::ZeroFrequency);
            }
            if i > 0 && freqs[i - 1] >= f {
                return Err(Error::NotStrictlyIncreasing { position: i });
            }
        }
        Ok(Configuration { freqs })
    }

    /// Construction for values that are strictly increasing by construction.
    pub(crate) fn from_sorted_unchecked(freqs: Vec<u64>) -> Self {
        debug_assert!(!freqs.is_empty());
        debug_assert!(freqs.windows(2).all(|w| w[0] < w[1]) && freqs[0] >= 1);
        Configuration { freqs }
    }

    pub fn freqs(&self) -> &[u64] {
        &self.freqs
    }

    pub fn n(&self) -> usize {
        self.freqs.len()
    }

    /// The largest frequency.
    pub fn top(&self) -> u64 {
        *self.freqs.last().unwrap()
    }

    pub fn gcd(&self) -> u64 {
        self.freqs.iter().copied().fold(0, gcd)
    }

    pub fn lcm(&self) -> Result<u64> {
        lcm_checked(&self.freqs)
    }

    pub fn is_normalized(&self) -> bool {
        self.gcd() == 1
    }

    /// Divide every entry by the gcd. Idempotent; the result has gcd 1.
    pub fn normalize(&self) -> Self {
        let g = self.gcd();
        if g == 1 {
            return self.clone();
        }
        Configuration {
            freqs: self.freqs.iter().map(|f| f / g).collect(),
        }
    }

    /// All entries but the largest. `None` for singletons.
    pub fn prefix(&self) -> Option<Self> {
        if self.freqs.len() < 2 {
            return None;
        }
        Some(Configuration {
            freqs: self.freqs[..self.freqs.len() - 1].to_vec(),
        })
    }

    /// The configuration scaled by a positive integer factor.
    pub fn scaled(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroFrequency);
        }
        let freqs = self
            .freqs
            .iter()
            .map(|f| {
                f.checked_mul(k).ok_or(Error::Overflow {
                    context: "scaling a configuration",
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Configuration { freqs })
    }

    /// Append a frequency strictly larger than the current maximum.
    pub fn extended(&self, next: u64) -> Result<Self> {
        let mut freqs = self.freqs.clone();
        freqs.push(next);
        Configuration::new(freqs)
    }

    pub fn all_odd(&self) -> bool {
        self.freqs.iter().all(|f| f % 2 == 1)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.freqs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.freqs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let freqs = Vec::<u64>::deserialize(deserializer)?;
        Configuration::new(freqs).map_err(de::Error::custom)
    }
}
