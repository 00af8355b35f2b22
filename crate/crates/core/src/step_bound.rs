use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;

/// The number of observable steps `K` after a secret visit during which the
/// secret must stay hidden. Finite bounds are arbitrary precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StepBound {
    Finite(BigUint),
    Infinite,
}

impl StepBound {
    pub fn finite(k: u64) -> Self {
        StepBound::Finite(BigUint::from(k))
    }

    pub fn zero() -> Self {
        StepBound::Finite(BigUint::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, StepBound::Infinite)
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            StepBound::Finite(k) => Some(k),
            StepBound::Infinite => None,
        }
    }

    /// `min(K, cap)` as a machine integer; `Infinite` maps to `cap`.
    pub fn clamp(&self, cap: usize) -> usize {
        match self {
            StepBound::Finite(k) => k.to_usize().map_or(cap, |k| k.min(cap)),
            StepBound::Infinite => cap,
        }
    }

    /// Whether `steps` observable steps are still within the bound.
    pub fn admits(&self, steps: usize) -> bool {
        match self {
            StepBound::Finite(k) => BigUint::from(steps) <= *k,
            StepBound::Infinite => true,
        }
    }

    pub fn bit_length(&self) -> Option<u64> {
        self.as_finite().map(|k| k.bits())
    }
}

impl From<u64> for StepBound {
    fn from(k: u64) -> Self {
        StepBound::finite(k)
    }
}

impl FromStr for StepBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(StepBound::Infinite);
        }
        let canonical = !s.is_empty()
            && s.bytes().all(|b| b.is_ascii_digit())
            && (s == "0" || !s.starts_with('0'));
        if !canonical {
            return Err(Error::StepBound(s.to_string()));
        }
        BigUint::from_str(s)
            .map(StepBound::Finite)
            .map_err(|_| Error::StepBound(s.to_string()))
    }
}

impl fmt::Display for StepBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepBound::Finite(k) => write!(f, "{k}"),
            StepBound::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_and_inf() {
        assert_eq!("0".parse::<StepBound>().unwrap(), StepBound::zero());
        assert_eq!("inf".parse::<StepBound>().unwrap(), StepBound::Infinite);
        let big: StepBound = "1000000000000000000000000".parse().unwrap();
        assert_eq!(big.to_string(), "1000000000000000000000000");
        assert_eq!(big.clamp(7), 7);
    }

    #[test]
    fn rejects_non_canonical() {
        for bad in ["", "007", "-1", "1e3", "Inf", " 3"] {
            assert!(bad.parse::<StepBound>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn admits_compares_exactly() {
        let k = StepBound::finite(3);
        assert!(k.admits(3));
        assert!(!k.admits(4));
        assert!(StepBound::Infinite.admits(usize::MAX));
    }
}
