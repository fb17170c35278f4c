//! Midpoint–radius interval arithmetic with outward rounding.
//!
//! Every operation widens the result radius by at least one ulp of the
//! quantities involved, so the result interval encloses the exact result for
//! all points of the operand intervals. This is all the rigor the enclosure
//! pipeline needs at its 1e-7 target accuracy; it is not a general interval
//! library.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A value with a rigorous two-sided error radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalEstimate<T: Scalar> {
    pub center: T,
    pub radius: T,
}

/// One-ulp-or-more outward bump covering the rounding of `center` and of the
/// radius arithmetic itself.
fn outward<T: Scalar>(center: T, radius: T) -> T {
    let four = T::from_f64_const(4.0);
    radius + (center.abs() + radius) * T::epsilon() * four + T::min_positive_value()
}

impl<T: Scalar> IntervalEstimate<T> {
    pub fn new(center: T, radius: T) -> Self {
        assert!(radius >= T::zero(), "radius must be nonnegative");
        Self { center, radius }
    }

    /// Degenerate interval `[x, x]`.
    pub fn exact(center: T) -> Self {
        Self { center, radius: T::zero() }
    }

    pub fn lower(&self) -> T {
        self.center - self.radius
    }

    pub fn upper(&self) -> T {
        self.center + self.radius
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.lower() && x <= self.upper()
    }

    pub fn add(&self, other: &Self) -> Self {
        let c = self.center + other.center;
        Self { center: c, radius: outward(c, self.radius + other.radius) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let c = self.center - other.center;
        Self { center: c, radius: outward(c, self.radius + other.radius) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let c = self.center * other.center;
        let r = self.center.abs() * other.radius
            + other.center.abs() * self.radius
            + self.radius * other.radius;
        Self { center: c, radius: outward(c, r) }
    }

    pub fn scale(&self, s: T) -> Self {
        let c = self.center * s;
        Self { center: c, radius: outward(c, self.radius * s.abs()) }
    }

    /// Widen the radius by a nonnegative amount.
    pub fn widen(&self, extra: T) -> Self {
        assert!(extra >= T::zero());
        Self { center: self.center, radius: outward(self.center, self.radius + extra) }
    }
}
