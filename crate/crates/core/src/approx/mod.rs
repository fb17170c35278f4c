//! Rigorous enclosures of `‖h_θ‖` and `c_θ` at irrational angles.
//!
//! A continued-fraction convergent `p/n` of the frequency `θ/2π` pins the
//! angle error; the global Lipschitz constants (1 for the norm, 0.39 for the
//! dilation constant) propagate it to a value error, and the eigensolver
//! tolerance is added on top. All radius arithmetic runs through
//! outward-rounded intervals.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::angles::{convergents, AngleError, IntervalEstimate, RationalAngle};
use crate::mathieu::{dilation_constant, host_norm, MathieuError};
use crate::scalar::Scalar;

/// Lipschitz constant of `θ ↦ ‖h_θ‖`.
pub const NORM_LIPSCHITZ: f64 = 1.0;
/// Lipschitz constant of `θ ↦ c_θ` (4/min‖h‖ ≤ 0.39 via the 2.56769 bound).
pub const CONSTANT_LIPSCHITZ: f64 = 0.39;
/// Error budget of the norm solver, conservative against its 1e-12 residual
/// target plus representation error of the matrix entries.
pub const SOLVER_BUDGET: f64 = 2e-12;
/// No enclosure can beat the solver floor.
pub const TOLERANCE_FLOOR: f64 = 1e-12;

pub const DEFAULT_DENOMINATOR_CAP: i64 = 1_000_000;

#[derive(Debug, Error, Clone)]
pub enum ApproxError<T: Scalar> {
    #[error("tolerance {tol} not above the solver floor {floor}")]
    BelowFloor { tol: T, floor: T },
    #[error("no convergent with denominator ≤ {cap} reaches the tolerance; achievable radius {achievable}")]
    Capacity { cap: i64, achievable: T },
    #[error(transparent)]
    Angle(#[from] AngleError),
    #[error(transparent)]
    Mathieu(#[from] MathieuError<T>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Silver,
    Golden,
    Custom,
}

/// An irrational (or arbitrary) frequency `θ/2π ∈ (0, 1)`.
#[derive(Debug, Clone)]
pub struct IrrationalTarget<T: Scalar> {
    pub kind: TargetKind,
    pub frequency: T,
    pub description: String,
}

impl<T: Scalar> IrrationalTarget<T> {
    /// The silver mean frequency `√2 − 1`; `θ_s = 2π(√2 − 1)`.
    pub fn silver() -> Self {
        Self {
            kind: TargetKind::Silver,
            frequency: T::from_f64_const(2.0).sqrt() - T::one(),
            description: "silver mean".into(),
        }
    }

    /// The golden mean frequency `(√5 − 1)/2`.
    pub fn golden() -> Self {
        Self {
            kind: TargetKind::Golden,
            frequency: (T::from_f64_const(5.0).sqrt() - T::one()) / T::from_f64_const(2.0),
            description: "golden mean".into(),
        }
    }

    pub fn custom(frequency: T) -> Result<Self, ApproxError<T>> {
        if !(frequency > T::zero() && frequency < T::one()) {
            return Err(ApproxError::Angle(AngleError::TargetOutOfRange(format!("{frequency}"))));
        }
        Ok(Self { kind: TargetKind::Custom, frequency, description: format!("custom {frequency}") })
    }
}

/// An enclosure together with the convergent that produced it.
#[derive(Debug, Clone)]
pub struct Enclosure<T: Scalar> {
    pub estimate: IntervalEstimate<T>,
    pub convergent: RationalAngle,
}

impl<T: Scalar + Serialize> Serialize for Enclosure<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Enclosure", 3)?;
        s.serialize_field("center", &self.estimate.center)?;
        s.serialize_field("radius", &self.estimate.radius)?;
        s.serialize_field("convergent", &self.convergent.to_string())?;
        s.end()
    }
}

fn pick_convergent<T: Scalar>(
    target: &IrrationalTarget<T>,
    tol: T,
    lipschitz: T,
    cap: i64,
) -> Result<(RationalAngle, T), ApproxError<T>> {
    let floor = T::from_f64_const(TOLERANCE_FLOOR);
    if tol <= floor {
        return Err(ApproxError::BelowFloor { tol, floor });
    }
    let cf = convergents(target.frequency, cap)?;
    let mut achievable = T::infinity();
    for c in &cf.convergents {
        let radius = propagated_radius(target.frequency, c, lipschitz);
        achievable = achievable.min(radius);
        if radius <= tol {
            return Ok((*c, radius));
        }
    }
    Err(ApproxError::Capacity { cap, achievable })
}

/// `L·2π·|frequency − p/n| + solver budget`, with outward rounding.
fn propagated_radius<T: Scalar>(frequency: T, c: &RationalAngle, lipschitz: T) -> T {
    let err = IntervalEstimate::exact((frequency - c.frequency::<T>()).abs());
    let angle_err = err.scale(T::TAU());
    let value_err = angle_err.scale(lipschitz);
    value_err.widen(T::from_f64_const(SOLVER_BUDGET)).upper()
}

/// Enclose `‖h_θ‖` for an irrational target to within `tol`.
pub fn enclose_norm<T: Scalar>(
    target: &IrrationalTarget<T>,
    tol: T,
) -> Result<Enclosure<T>, ApproxError<T>> {
    enclose_norm_with_cap(target, tol, DEFAULT_DENOMINATOR_CAP)
}

pub fn enclose_norm_with_cap<T: Scalar>(
    target: &IrrationalTarget<T>,
    tol: T,
    cap: i64,
) -> Result<Enclosure<T>, ApproxError<T>> {
    let (conv, radius) = pick_convergent(target, tol, T::from_f64_const(NORM_LIPSCHITZ), cap)?;
    let center = host_norm::<T>(&conv)?;
    Ok(Enclosure { estimate: IntervalEstimate::new(center, radius), convergent: conv })
}

/// Enclose `c_θ = 4/‖h_θ‖` for an irrational target to within `tol`.
pub fn enclose_constant<T: Scalar>(
    target: &IrrationalTarget<T>,
    tol: T,
) -> Result<Enclosure<T>, ApproxError<T>> {
    enclose_constant_with_cap(target, tol, DEFAULT_DENOMINATOR_CAP)
}

pub fn enclose_constant_with_cap<T: Scalar>(
    target: &IrrationalTarget<T>,
    tol: T,
    cap: i64,
) -> Result<Enclosure<T>, ApproxError<T>> {
    let (conv, radius) = pick_convergent(target, tol, T::from_f64_const(CONSTANT_LIPSCHITZ), cap)?;
    let center = dilation_constant::<T>(&conv)?;
    Ok(Enclosure { estimate: IntervalEstimate::new(center, radius), convergent: conv })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn silver_constant_enclosure_matches_reported_value() {
        let enc = enclose_constant(&IrrationalTarget::<f64>::silver(), 1e-7).unwrap();
        assert_eq!(enc.convergent, "2378/5741".parse().unwrap());
        assert!(enc.estimate.radius <= 1e-7);
        assert!((enc.estimate.center - 1.5437772).abs() < 1e-7 + enc.estimate.radius);
        // lower end certifies the global bound max c ≥ 1.543
        assert!(enc.estimate.lower() > 1.543);
    }

    #[test]
    fn silver_norm_enclosure() {
        let enc = enclose_norm(&IrrationalTarget::<f64>::silver(), 1e-6).unwrap();
        assert!(enc.estimate.radius < 1e-6);
        // center ≈ 4/1.5437772
        assert!((enc.estimate.center - 4.0 / 1.5437772).abs() < 1e-5);
    }

    #[test]
    fn rational_custom_target_has_solver_level_radius() {
        let t = IrrationalTarget::custom(1.0f64 / 3.0).unwrap();
        let enc = enclose_norm(&t, 1e-9).unwrap();
        assert_eq!(enc.convergent, "1/3".parse().unwrap());
        assert!(enc.estimate.radius < 1e-11);
        let exact = host_norm::<f64>(&enc.convergent).unwrap();
        assert!(enc.estimate.contains(exact));
    }

    #[test]
    fn golden_enclosures() {
        let t = IrrationalTarget::<f64>::golden();
        let enc = enclose_norm(&t, 1e-4).unwrap();
        assert!(enc.estimate.radius <= 1e-4);
        // Fibonacci denominator
        let fib = [2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987];
        assert!(fib.contains(&enc.convergent.denominator()));

        let encc = enclose_constant(&t, 1e-5).unwrap();
        assert!(encc.estimate.radius <= 1e-5);
        // strictly inside the global range [1, 1.558]
        assert!(encc.estimate.lower() > 1.0);
        assert!(encc.estimate.upper() < 1.558);
    }

    #[test]
    fn consistency_between_norm_and_constant() {
        let t = IrrationalTarget::<f64>::silver();
        let n = enclose_norm(&t, 1e-6).unwrap();
        let c = enclose_constant(&t, 1e-6).unwrap();
        let via_norm = 4.0 / n.estimate.center;
        assert!((via_norm - c.estimate.center).abs() <= n.estimate.radius + c.estimate.radius + 1e-9);
    }

    #[test]
    fn shrinking_tolerance_shrinks_radius() {
        let t = IrrationalTarget::<f64>::silver();
        let mut last = f64::INFINITY;
        for tol in [1e-3, 1e-5, 1e-7] {
            let enc = enclose_constant(&t, tol).unwrap();
            assert!(enc.estimate.radius <= tol);
            assert!(enc.estimate.radius <= last);
            last = enc.estimate.radius;
        }
    }

    #[test]
    fn capacity_error_reports_achievable_radius() {
        let t = IrrationalTarget::<f64>::silver();
        let err = enclose_constant_with_cap(&t, 1e-9, 40).unwrap_err();
        match err {
            ApproxError::Capacity { cap, achievable } => {
                assert_eq!(cap, 40);
                // best convergent under 40 is 12/29
                let expected = 0.39 * std::f64::consts::TAU
                    * (std::f64::consts::SQRT_2 - 1.0 - 12.0 / 29.0).abs();
                assert!((achievable - expected).abs() < 1e-6);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn below_floor_rejected() {
        let t = IrrationalTarget::<f64>::silver();
        assert!(matches!(enclose_norm(&t, 1e-13), Err(ApproxError::BelowFloor { .. })));
    }

    #[test]
    fn enclosure_serializes_with_convergent_string() {
        let t = IrrationalTarget::<f64>::silver();
        let enc = enclose_constant(&t, 1e-5).unwrap();
        let json = serde_json::to_string(&enc).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v["center"].is_number());
        assert!(v["radius"].is_number());
        assert!(v["convergent"].is_string());
    }
}
