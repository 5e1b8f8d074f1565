use std::cmp::Ordering;
use std::fmt;

/// A radius that is either finite or the `+inf` sentinel.
///
/// The sentinel only supports comparison. Arithmetic goes through
/// [`Scale::map_finite`], which leaves the sentinel untouched.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    Finite(f64),
    Infinite,
}

impl Scale {
    pub fn finite(self) -> Option<f64> {
        match self {
            Scale::Finite(v) => Some(v),
            Scale::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Scale::Infinite)
    }

    pub fn map_finite(self, f: impl FnOnce(f64) -> f64) -> Scale {
        match self {
            Scale::Finite(v) => Scale::Finite(f(v)),
            Scale::Infinite => Scale::Infinite,
        }
    }

    /// `value <= self` under the shared tolerance.
    pub fn admits(self, value: f64) -> bool {
        match self {
            Scale::Finite(v) => crate::tol::leq(value, v),
            Scale::Infinite => true,
        }
    }

    pub fn min(self, other: Scale) -> Scale {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Scale {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scale::Finite(a), Scale::Finite(b)) => a.partial_cmp(b),
            (Scale::Finite(_), Scale::Infinite) => Some(Ordering::Less),
            (Scale::Infinite, Scale::Finite(_)) => Some(Ordering::Greater),
            (Scale::Infinite, Scale::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Finite(v) => write!(f, "{v}"),
            Scale::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinel_compares_above_every_finite_value() {
        assert!(Scale::Finite(f64::MAX) < Scale::Infinite);
        assert_eq!(Scale::Infinite.min(Scale::Finite(3.0)), Scale::Finite(3.0));
        assert!(Scale::Infinite.admits(1e300));
        assert_eq!(Scale::Infinite.map_finite(|v| v * 2.0), Scale::Infinite);
    }
}
