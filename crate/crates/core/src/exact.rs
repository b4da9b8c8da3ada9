//! Exact evaluation of the cosine sign correlation
//!
//!   P(a_1,...,a_n) = |{x in [0,2*pi] : all cos(a_i x) > 0 or all < 0}| / (2*pi)
//!
//! by two independent routes:
//!
//! * the cell method: with l = lcm(a_1,...,a_n) the indicator of sign
//!   agreement is constant on each of the 4l open cells
//!   (pi*m/(2l), pi*(m+1)/(2l)), so counting agreeing cells at their
//!   midpoints gives P exactly as (agreeing cells)/(4l);
//! * a sweep line over the zeros pi*(2k+1)/(2*a_i) of all n cosines, which
//!   touches only sum(2*a_i) events instead of 4l cells and accumulates the
//!   exact measure of the gaps where all signs agree.
//!
//! The cell engine is the reference oracle; the sweep engine is the fast
//! path and the default behind [`exact_probability`].

use serde::{Serialize, Serializer};

use crate::arith::{gcd, gcd_u128};
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::trig::{cos_sign_scaled, CosSign, PiFraction};

/// Common sign of all cosines on a spectrum interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn symbol(self) -> &'static str {
        match self {
            Polarity::Positive => "+",
            Polarity::Negative => "-",
        }
    }
}

impl Serialize for Polarity {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

/// A maximal open interval of sign agreement, described by its endpoints as
/// multiples of pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpectrumInterval {
    pub start: PiFraction,
    pub end: PiFraction,
    pub polarity: Polarity,
}

/// The decomposition of the sign-agreement set into maximal open intervals,
/// each tagged with the common sign. Boundary points, where some cosine
/// vanishes, carry no measure and are excluded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignSpectrum {
    pub intervals: Vec<SpectrumInterval>,
    /// Total length of the intervals divided by 2*pi; equals the exact
    /// probability of the same configuration.
    pub total_measure: ExactRational,
}

/// Exact probability of common sign. Routes to the sweep engine; the cell
/// engine remains available for cross-validation.
pub fn exact_probability(config: &Configuration) -> Result<ExactRational> {
    exact_probability_sweep(config)
}

/// Sum of gap lengths in units of pi, kept in 128-bit fractions while they
/// fit and promoted to arbitrary precision when they do not.
enum MeasureAcc {
    Small { num: u128, den: u128 },
    Big(ExactRational),
}

impl MeasureAcc {
    fn new() -> Self {
        MeasureAcc::Small { num: 0, den: 1 }
    }

    fn add(&mut self, add_num: u128, add_den: u128) {
        debug_assert!(add_den > 0);
        match self {
            MeasureAcc::Small { num, den } => {
                let try_small = (|| {
                    let left = num.checked_mul(add_den)?;
                    let right = add_num.checked_mul(*den)?;
                    let new_num = left.checked_add(right)?;
                    let new_den = den.checked_mul(add_den)?;
                    let g = gcd_u128(new_num, new_den).max(1);
                    Some((new_num / g, new_den / g))
                })();
                match try_small {
                    Some((n, d)) => {
                        *num = n;
                        *den = d;
                    }
                    None => {
                        let sum = ExactRational::ratio_u128(*num, *den)
                            + ExactRational::ratio_u128(add_num, add_den);
                        *self = MeasureAcc::Big(sum);
                    }
                }
            }
            MeasureAcc::Big(total) => {
                *total = total.clone() + ExactRational::ratio_u128(add_num, add_den);
            }
        }
    }

    /// The accumulated length divided by 2, converting units of pi into a
    /// fraction of the full period 2*pi.
    fn into_probability(self) -> ExactRational {
        match self {
            MeasureAcc::Small { num, den } => match den.checked_mul(2) {
                Some(d) => ExactRational::ratio_u128(num, d),
                None => ExactRational::ratio_u128(num, den) * ExactRational::ratio(1, 2),
            },
            MeasureAcc::Big(total) => total * ExactRational::ratio(1, 2),
        }
    }
}

/// All zeros pi*(2k+1)/(2a) of all cosines in (0, 2*pi), reduced, sorted,
/// and deduplicated.
fn zero_events(config: &Configuration) -> Result<Vec<(u64, u64)>> {
    let mut total: u128 = 0;
    for &a in config.freqs() {
        total += 2 * a as u128;
    }
    let capacity = usize::try_from(total).map_err(|_| Error::Overflow {
        context: "sweep event count",
    })?;
    let mut events: Vec<(u64, u64)> = Vec::with_capacity(capacity);
    for &a in config.freqs() {
        let den = a.checked_mul(2).ok_or(Error::Overflow {
            context: "sweep event denominator 2a",
        })?;
        for k in 0..den {
            // num = 2k+1 < 2*den, which fits because den was checked above.
            let num = match k.checked_mul(2).and_then(|v| v.checked_add(1)) {
                Some(v) => v,
                None => {
                    return Err(Error::Overflow {
                        context: "sweep event numerator 2k+1",
                    })
                }
            };
            let g = gcd(num, den);
            events.push((num / g, den / g));
        }
    }
    events.sort_unstable_by(|a, b| {
        (a.0 as u128 * b.1 as u128).cmp(&(b.0 as u128 * a.1 as u128))
    });
    events.dedup();
    Ok(events)
}

/// Walk the gaps between consecutive zeros, classify each gap by the signs
/// at its midpoint, and accumulate the measure of agreeing gaps. The
/// callback receives every agreeing gap in ascending order.
fn sweep_walk(
    config: &Configuration,
    mut on_agreeing_gap: impl FnMut((u64, u64), (u64, u64), Polarity) -> Result<()>,
) -> Result<ExactRational> {
    let events = zero_events(config)?;
    let freqs = config.freqs();
    let mut acc = MeasureAcc::new();
    let mut prev: (u64, u64) = (0, 1);
    for &event in events.iter().chain(std::iter::once(&(2u64, 1u64))) {
        // Midpoint of the open gap (prev, event), unreduced in 128 bits.
        let mid_num = (prev.0 as u128 * event.1 as u128)
            .checked_add(event.0 as u128 * prev.1 as u128)
            .ok_or(Error::Overflow {
                context: "gap midpoint numerator",
            })?;
        let mid_den = (prev.1 as u128 * event.1 as u128)
            .checked_mul(2)
            .ok_or(Error::Overflow {
                context: "gap midpoint denominator",
            })?;
        let mut polarity: Option<Polarity> = None;
        let mut agree = true;
        for &a in freqs {
            let sign = match cos_sign_scaled(a, mid_num, mid_den)? {
                CosSign::Positive => Polarity::Positive,
                CosSign::Negative => Polarity::Negative,
                CosSign::Zero => {
                    // Midpoints of gaps between consecutive zeros cannot be
                    // zeros themselves.
                    return Err(Error::Internal("cosine zero at a gap midpoint"));
                }
            };
            match polarity {
                None => polarity = Some(sign),
                Some(p) if p != sign => {
                    agree = false;
                    break;
                }
                Some(_) => {}
            }
        }
        if agree {
            let polarity = polarity.expect("configurations are non-empty");
            let len_num = event.0 as u128 * prev.1 as u128 - prev.0 as u128 * event.1 as u128;
            let len_den = prev.1 as u128 * event.1 as u128;
            let g = gcd_u128(len_num, len_den).max(1);
            acc.add(len_num / g, len_den / g);
            on_agreeing_gap(prev, event, polarity)?;
        }
        prev = event;
    }
    Ok(acc.into_probability())
}

/// Sweep-line evaluation of the exact probability.
///
/// Collects the zeros of all n cosines, sorts them exactly, evaluates all
/// signs at each gap midpoint, and sums the agreeing gap lengths. Agrees
/// with [`exact_probability_cells`] on every input both can handle, and
/// additionally handles configurations whose lcm overflows 64 bits, since
/// its intermediates only ever involve products of two denominators.
pub fn exact_probability_sweep(config: &Configuration) -> Result<ExactRational> {
    sweep_walk(config, |_, _, _| Ok(()))
}

/// Reference evaluation by the cell method.
///
/// With l = lcm(a_1,...,a_n), samples the midpoint pi*(2m+1)/(4l) of each of
/// the 4l cells and returns (agreeing cells)/(4l). Midpoint signs are walked
/// incrementally: the sign of cos(a * pi*(2m+1)/(4l)) depends on
/// w_m = a*(2m+1) mod 8l, and w advances by 2a per cell.
pub fn exact_probability_cells(config: &Configuration) -> Result<ExactRational> {
    let l = config.lcm()?;
    let four_l = l
        .checked_mul(4)
        .ok_or(Error::LcmOverflow { partial: l })?;
    let eight_l = l as u128 * 8;
    let two_l = l as u128 * 2;
    let six_l = l as u128 * 6;
    let n = config.n();
    let mut w: Vec<u128> = config
        .freqs()
        .iter()
        .map(|&a| a as u128 % eight_l)
        .collect();
    let step: Vec<u128> = config
        .freqs()
        .iter()
        .map(|&a| (a as u128 * 2) % eight_l)
        .collect();
    let mut agreeing: u64 = 0;
    for _ in 0..four_l {
        let mut pos = 0usize;
        let mut neg = 0usize;
        for (wi, s) in w.iter_mut().zip(step.iter()) {
            if *wi == two_l || *wi == six_l {
                // Midpoint samples never land on zeros (parity of 2m+1).
                return Err(Error::Internal("cosine zero at a cell midpoint"));
            }
            if *wi < two_l || *wi > six_l {
                pos += 1;
            } else {
                neg += 1;
            }
            *wi += s;
            if *wi >= eight_l {
                *wi -= eight_l;
            }
        }
        if pos == n || neg == n {
            agreeing += 1;
        }
    }
    Ok(ExactRational::ratio_u128(agreeing as u128, four_l as u128))
}

/// The maximal sign-agreement intervals of the configuration, with the
/// common polarity of each, produced by the sweep line.
pub fn sign_spectrum(config: &Configuration) -> Result<SignSpectrum> {
    let mut intervals = Vec::new();
    let total_measure = sweep_walk(config, |start, end, polarity| {
        intervals.push(SpectrumInterval {
            start: PiFraction::new(start.0, start.1)?,
            end: PiFraction::new(end.0, end.1)?,
            polarity,
        });
        Ok(())
    })?;
    Ok(SignSpectrum {
        intervals,
        total_measure,
    })
}

/// Whether the configuration is tight: all frequencies odd and
/// P = 1/a_n. A tight configuration's agreement set is exactly the three
/// intervals of half-width pi/(2*a_n) around 0, pi and 2*pi, which this
/// function verifies as an internal consistency check.
pub fn is_tight(config: &Configuration) -> Result<bool> {
    if !config.all_odd() {
        return Ok(false);
    }
    let p = exact_probability_sweep(config)?;
    if p != ExactRational::unit_fraction(config.top() as u128) {
        return Ok(false);
    }
    let spectrum = sign_spectrum(config)?;
    let a_n = config.top();
    let two_a = a_n.checked_mul(2).ok_or(Error::Overflow {
        context: "tight spectrum half-width",
    })?;
    let four_a = a_n.checked_mul(4).ok_or(Error::Overflow {
        context: "tight spectrum half-width",
    })?;
    let expected = vec![
        SpectrumInterval {
            start: PiFraction::zero(),
            end: PiFraction::new(1, two_a)?,
            polarity: Polarity::Positive,
        },
        SpectrumInterval {
            start: PiFraction::new(two_a - 1, two_a)?,
            end: PiFraction::new(two_a + 1, two_a)?,
            polarity: Polarity::Negative,
        },
        SpectrumInterval {
            start: PiFraction::new(four_a - 1, two_a)?,
            end: PiFraction::two_pi(),
            polarity: Polarity::Positive,
        },
    ];
    if spectrum.intervals != expected {
        return Err(Error::Internal(
            "tight configuration without the three-interval spectrum",
        ));
    }
    Ok(true)
}
