//! Min-plus scalars.
//!
//! [`TropScalar`] is an exact rational or `+∞`; `⊕` is `min` and `⊙` is `+`.
//! [`EpsScalar`] adjoins a positive infinitesimal `ε` and is used to realise
//! limits such as stable intersections symbolically.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::{format_rational, parse_rational, ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("infinity raised to non-positive power {0}")]
    InfinitePower(i64),
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
}

/// An element of `(Q ∪ {∞}, min, +)`.
///
/// The derived ordering places every finite value below `Infinity`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TropScalar {
    Finite(Rational),
    Infinity,
}

impl TropScalar {
    pub fn finite(value: Rational) -> Self {
        TropScalar::Finite(value)
    }

    pub fn from_int(value: i64) -> Self {
        TropScalar::Finite(Rational::from_integer(BigInt::from(value)))
    }

    /// The multiplicative unit, classical `0`.
    pub fn unit() -> Self {
        TropScalar::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, TropScalar::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            TropScalar::Finite(v) => Some(v),
            TropScalar::Infinity => None,
        }
    }

    /// Tropical sum: the minimum.
    pub fn oplus(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Tropical product: the classical sum, with `∞` absorbing.
    pub fn otimes(&self, other: &Self) -> Self {
        match (self, other) {
            (TropScalar::Finite(a), TropScalar::Finite(b)) => TropScalar::Finite(a + b),
            _ => TropScalar::Infinity,
        }
    }

    /// `k`-fold tropical power, i.e. `k · a`. Negative `k` is allowed for
    /// finite values; `∞` only admits `k ≥ 1`.
    pub fn pow(&self, k: i64) -> Result<Self, ScalarError> {
        match self {
            TropScalar::Finite(a) => Ok(TropScalar::Finite(a * Rational::from_integer(k.into()))),
            TropScalar::Infinity if k >= 1 => Ok(TropScalar::Infinity),
            TropScalar::Infinity => Err(ScalarError::InfinitePower(k)),
        }
    }
}

impl From<Rational> for TropScalar {
    fn from(value: Rational) -> Self {
        TropScalar::Finite(value)
    }
}

impl fmt::Display for TropScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropScalar::Finite(v) => f.write_str(&format_rational(v)),
            TropScalar::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for TropScalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "Inf" | "infinity" | "Infinity" | "∞" => Ok(TropScalar::Infinity),
            other => Ok(TropScalar::Finite(parse_rational(other)?)),
        }
    }
}

pub fn trop_add(a: &TropScalar, b: &TropScalar) -> TropScalar {
    a.oplus(b)
}

pub fn trop_mul(a: &TropScalar, b: &TropScalar) -> TropScalar {
    a.otimes(b)
}

pub fn trop_pow(a: &TropScalar, k: i64) -> Result<TropScalar, ScalarError> {
    a.pow(k)
}

/// `standard + eps·ε` for an infinitesimal `ε > 0`.
///
/// Ordered lexicographically. When the standard part is `∞` the `ε` part is
/// normalised to zero, so all infinite values compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EpsScalar {
    standard: TropScalar,
    eps: Rational,
}

impl EpsScalar {
    pub fn new(standard: TropScalar, eps: Rational) -> Self {
        let eps = if standard.is_finite() { eps } else { Rational::zero() };
        EpsScalar { standard, eps }
    }

    pub fn infinity() -> Self {
        EpsScalar::new(TropScalar::Infinity, Rational::zero())
    }

    pub fn standard(&self) -> &TropScalar {
        &self.standard
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    pub fn oplus(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn otimes(&self, other: &Self) -> Self {
        EpsScalar::new(self.standard.otimes(&other.standard), &self.eps + &other.eps)
    }
}

impl From<TropScalar> for EpsScalar {
    fn from(value: TropScalar) -> Self {
        EpsScalar::new(value, Rational::zero())
    }
}

impl fmt::Display for EpsScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eps.is_zero() || !self.standard.is_finite() {
            write!(f, "{}", self.standard)
        } else {
            write!(f, "{} + {}ε", self.standard, format_rational(&self.eps))
        }
    }
}
