use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// An exponent in `(0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_infinite() && value > 0.0 {
            return Ok(Exponent::Infinite);
        }
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "exponent must lie in (0, inf], got {value}"
            )));
        }
        Ok(Exponent::Finite(value))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(v) => Some(v),
            Exponent::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// `1/e`, with `1/∞ = 0`.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(v) => 1.0 / v,
            Exponent::Infinite => 0.0,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(v) => v,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// `min(1, e)`, the exponent of the ρ-power trick.
    pub fn tilde(self) -> f64 {
        match self {
            Exponent::Finite(v) => v.min(1.0),
            Exponent::Infinite => 1.0,
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.as_f64().partial_cmp(&other.as_f64())
    }
}

impl From<f64> for Exponent {
    /// Panics on values outside `(0, ∞]`; use [`Exponent::new`] for fallible input.
    fn from(value: f64) -> Self {
        Exponent::new(value).expect("exponent out of range")
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(Exponent::Infinite);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse exponent '{t}'")))?;
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "write infinite exponents as 'inf', got '{t}'"
            )));
        }
        Exponent::new(v)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(v) => serializer.serialize_f64(*v),
            Exponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) if v == f64::INFINITY => Ok(Exponent::Infinite),
            Raw::Num(v) => Exponent::new(v).map_err(serde::de::Error::custom),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
