//! Exact rational arithmetic. All probabilities in this crate live here;
//! no floating point is involved anywhere in this type.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An arbitrary-precision rational, always stored reduced with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`, reduced. Panics if `den` is zero.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactRational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn ratio_u128(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        ExactRational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// 1/den, the reciprocal of a positive integer.
    pub fn unit_fraction(den: u128) -> Self {
        Self::ratio_u128(1, den)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    /// Clamp below at zero; used for vacuous lower bounds.
    pub fn max_zero(self) -> Self {
        if self.is_negative() {
            Self::zero()
        } else {
            self
        }
    }

    pub fn numer_string(&self) -> String {
        self.0.numer().to_string()
    }

    pub fn denom_string(&self) -> String {
        self.0.denom().to_string()
    }

    /// Advisory floating-point value; exact comparisons must use `Ord`.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal approximation with the given number of fractional digits,
    /// rounded half away from zero. Advisory only.
    pub fn decimal_string(&self, digits: u32) -> String {
        let sign = if self.0.is_negative() { "-" } else { "" };
        let num = self.0.numer().magnitude().clone();
        let den = self.0.denom().magnitude().clone();
        let scale = num_bigint::BigUint::from(10u32).pow(digits);
        // round(num * 10^digits / den)
        let scaled = (&num * &scale * 2u32 + &den) / (&den * 2u32);
        let s = scaled.to_string();
        let digits = digits as usize;
        if digits == 0 {
            return format!("{sign}{s}");
        }
        let (int_part, frac_part) = if s.len() > digits {
            let (i, f) = s.split_at(s.len() - digits);
            (i.to_string(), f.to_string())
        } else {
            ("0".to_string(), format!("{s:0>digits$}"))
        };
        format!("{sign}{int_part}.{frac_part}")
    }

    pub(crate) fn from_big(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($Op:ident, $method:ident) => {
        impl $Op for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((self.0).$method(rhs.0))
            }
        }
        impl $Op<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl $Op<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((self.0).$method(&rhs.0))
            }
        }
        impl $Op<ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero");
        ExactRational(self.0 / rhs.0)
    }
}

impl Div<&ExactRational> for &ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: &ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero");
        ExactRational(&self.0 / &rhs.0)
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

// Rationals travel through JSON as decimal digit strings, never as floats.
impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ExactRational", 2)?;
        s.serialize_field("num", &self.numer_string())?;
        s.serialize_field("den", &self.denom_string())?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RatVisitor;

        impl<'de> Visitor<'de> for RatVisitor {
            type Value = ExactRational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map with decimal string fields `num` and `den`")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut num: Option<String> = None;
                let mut den: Option<String> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "num" => num = Some(map.next_value()?),
                        "den" => den = Some(map.next_value()?),
                        other => {
                            return Err(de::Error::unknown_field(other, &["num", "den"]));
                        }
                    }
                }
                let num = num.ok_or_else(|| de::Error::missing_field("num"))?;
                let den = den.ok_or_else(|| de::Error::missing_field("den"))?;
                let num: BigInt = num
                    .parse()
                    .map_err(|_| de::Error::custom("invalid numerator"))?;
                let den: BigInt = den
                    .parse()
                    .map_err(|_| de::Error::custom("invalid denominator"))?;
                if den.is_zero() {
                    return Err(de::Error::custom("zero denominator"));
                }
                Ok(ExactRational(BigRational::new(num, den)))
            }
        }

        deserializer.deserialize_struct("ExactRational", &["num", "den"], RatVisitor)
    }
}
