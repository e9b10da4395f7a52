//! Exact arithmetic over the rationals.
//!
//! Everything symbolic in the crate sits on top of these types: reduced
//! big rationals, univariate polynomials, reduced rational functions,
//! truncated power series with an explicit truncation order, and series
//! carrying powers of a formal logarithm.

mod logseries;
mod poly;
mod ratfunc;
mod rational;
mod series;

pub use logseries::LogSeries;
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use rational::{harmonic, harmonic_difference, int, rat, Rational};
pub use series::TruncatedSeries;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("variable mismatch: `{0}` vs `{1}`")]
    VariableMismatch(String, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, ExactError>;

/// Name of the indeterminate a polynomial, series or operator lives in.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub(crate) fn check(&self, other: &Var) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(ExactError::VariableMismatch(
                self.name().to_string(),
                other.name().to_string(),
            ))
        }
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Serde helpers writing any `Display + FromStr` value (big integers in
/// particular) as strings, alone, in vectors or in vectors of vectors.
pub mod serde_str {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<T: Display, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.trim().parse().map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
        where
            T: FromStr,
            T::Err: Display,
            D: Deserializer<'de>,
        {
            Vec::<String>::deserialize(d)?.iter().map(|x| x.trim().parse().map_err(D::Error::custom)).collect()
        }
    }

    pub mod vec2 {
        use super::*;

        pub fn serialize<T: Display, S: Serializer>(v: &[Vec<T>], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<Vec<T>>, D::Error>
        where
            T: FromStr,
            T::Err: Display,
            D: Deserializer<'de>,
        {
            Vec::<Vec<String>>::deserialize(d)?
                .iter()
                .map(|r| r.iter().map(|x| x.trim().parse().map_err(D::Error::custom)).collect())
                .collect()
        }
    }
}

/// Serde helpers writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse::<Rational>().map_err(D::Error::custom)
    }

    pub mod vec {
        use super::Rational;
        use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&q.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| s.trim().parse::<Rational>().map_err(D::Error::custom))
                .collect()
        }
    }
}
