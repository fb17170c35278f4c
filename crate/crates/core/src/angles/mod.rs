//! Exact rational angles on the circle.
//!
//! An angle is stored as a reduced fraction `p/n` of a full turn, i.e.
//! `θ = 2π·p/n`, with `0 ≤ p < n`. All angle arithmetic (sum, difference,
//! circle distance, complement) happens on the integer fraction; floats only
//! appear when an angle is finally converted to radians or to a root of
//! unity, so the multiplicative order of `q = e^{iθ}` and all distances are
//! exact.

mod cf;
mod interval;

pub use cf::{convergents, ContinuedFractionExpansion};
pub use interval::IntervalEstimate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{unit_root, Scalar};
use num_complex::Complex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AngleError {
    #[error("invalid denominator: 0")]
    InvalidDenominator,
    #[error("target {0} outside the open interval (0, 1)")]
    TargetOutOfRange(String),
    #[error("cannot parse {0:?} as a fraction p/n")]
    Parse(String),
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a.abs()
}

/// Reduced fraction `p/n` of a full turn; the angle is `θ = 2π·p/n`.
///
/// Invariants: `n ≥ 1`, `0 ≤ p < n`, `gcd(p, n) = 1`. The multiplicative
/// order of `q = e^{iθ}` is exactly `n` (and 1 when `p = 0`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalAngle {
    p: i64,
    n: i64,
}

impl RationalAngle {
    /// The zero angle `0/1`.
    pub const ZERO: RationalAngle = RationalAngle { p: 0, n: 1 };

    /// Reduce and canonicalize `p/n` into `[0, 1)` of a turn.
    pub fn new(p: i64, n: i64) -> Result<Self, AngleError> {
        if n == 0 {
            return Err(AngleError::InvalidDenominator);
        }
        let n = n.abs();
        let p = p.rem_euclid(n);
        let g = gcd(p, n);
        let (p, n) = (p / g, n / g);
        if p == 0 {
            Ok(RationalAngle { p: 0, n: 1 })
        } else {
            Ok(RationalAngle { p, n })
        }
    }

    pub fn numerator(&self) -> i64 {
        self.p
    }

    pub fn denominator(&self) -> i64 {
        self.n
    }

    /// Multiplicative order of `q = e^{iθ}`: the reduced denominator.
    pub fn order(&self) -> i64 {
        self.n
    }

    /// `θ` in radians.
    pub fn radians<T: Scalar>(&self) -> T {
        T::TAU() * T::from_int(self.p) / T::from_int(self.n)
    }

    /// `p/n` as a float in `[0, 1)`.
    pub fn frequency<T: Scalar>(&self) -> T {
        T::from_int(self.p) / T::from_int(self.n)
    }

    /// `q^k = e^{2πi·pk/n}` with the exponent reduced in integer arithmetic.
    pub fn root_of_unity<T: Scalar>(&self, k: i64) -> Complex<T> {
        // widen so p·k cannot overflow for any representable denominator
        let k = k.rem_euclid(self.n) as i128;
        let reduced = (self.p as i128 * k).rem_euclid(self.n as i128) as i64;
        unit_root(reduced, self.n)
    }

    /// Exact sum of two angles, mod one turn.
    pub fn sum(&self, other: &RationalAngle) -> RationalAngle {
        self.combine(other, 1)
    }

    /// Exact difference `self − other`, mod one turn.
    pub fn difference(&self, other: &RationalAngle) -> RationalAngle {
        self.combine(other, -1)
    }

    fn combine(&self, other: &RationalAngle, sign: i64) -> RationalAngle {
        let n = (self.n / gcd(self.n, other.n))
            .checked_mul(other.n)
            .expect("combined angle denominator overflows i64");
        // widen the numerator arithmetic; it is reduced mod n before narrowing
        let p = (self.p as i128 * (n / self.n) as i128
            + sign as i128 * other.p as i128 * (n / other.n) as i128)
            .rem_euclid(n as i128) as i64;
        RationalAngle::new(p, n).expect("n nonzero")
    }

    /// The conjugate angle `(n−p)/n`, i.e. `2π − θ` mod `2π`.
    pub fn complement(&self) -> RationalAngle {
        RationalAngle::new(self.n - self.p, self.n).expect("n nonzero")
    }

    /// Circle distance to zero in radians, `min(θ, 2π−θ)`.
    pub fn circle_norm<T: Scalar>(&self) -> T {
        let m = self.p.min(self.n - self.p) % self.n;
        T::TAU() * T::from_int(m) / T::from_int(self.n)
    }
}

/// Circle distance `min_k |θ_a − θ_b + 2πk|`, computed on exact fractions;
/// the only float operation is the final scaling by 2π.
pub fn angle_distance<T: Scalar>(a: &RationalAngle, b: &RationalAngle) -> T {
    a.difference(b).circle_norm()
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.n)
    }
}

impl fmt::Debug for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalAngle({}/{})", self.p, self.n)
    }
}

impl FromStr for RationalAngle {
    type Err = AngleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, n) = s.split_once('/').ok_or_else(|| AngleError::Parse(s.to_string()))?;
        let p: i64 = p.trim().parse().map_err(|_| AngleError::Parse(s.to_string()))?;
        let n: i64 = n.trim().parse().map_err(|_| AngleError::Parse(s.to_string()))?;
        if n == 0 {
            return Err(AngleError::InvalidDenominator);
        }
        RationalAngle::new(p, n)
    }
}

/// All reduced fractions `p/n` with `n ≤ max_denominator`, sorted by `(n, p)`.
/// `0/1` is the single entry for `n = 1`.
pub fn farey_sequence(max_denominator: i64) -> Vec<RationalAngle> {
    let mut out = vec![RationalAngle::ZERO];
    for n in 2..=max_denominator {
        for p in 1..n {
            if gcd(p, n) == 1 {
                out.push(RationalAngle { p, n });
            }
        }
    }
    out
}
