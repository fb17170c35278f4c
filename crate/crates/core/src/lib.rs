//! Optimal dilation constants for q-commuting unitary pairs.
//!
//! Two unitaries with `VU = e^{iθ}UV` can be dilated to `c·U₀, c·V₀` for a
//! commuting unitary pair `(U₀, V₀)`, and the least possible scale is
//! `c_θ = 4/‖X + X* + Y + Y*‖` evaluated in the clock-and-shift
//! representation — the largest positive eigenvalue of an almost Mathieu
//! operator. This crate computes those norms and constants exactly at
//! rational angles, encloses them rigorously at irrational ones, constructs
//! the dilations explicitly with re-verifiable certificates, and sweeps the
//! whole family for Hofstadter-butterfly band data.
//!
//! Numerical kernels are generic over the floating-point scalar through
//! [`Scalar`]; the `f64` aliases below are the types to reach for.

pub mod angles;
pub mod approx;
pub mod dilation;
pub mod mathieu;
pub mod rotrep;
pub mod scalar;
pub mod spectral;

pub use angles::{angle_distance, convergents, farey_sequence, AngleError, RationalAngle};
pub use scalar::Scalar;

// the public API speaks `Complex<T>`; callers get the same crate version
pub use num_complex;

/// Default floating-point scalar.
pub type Real = f64;
/// Dense complex matrix over [`Real`].
pub type Matrix = rotrep::ComplexMatrix<Real>;
/// Rectangular matrix over [`Real`] (dilation isometries).
pub type Rect = rotrep::RectMatrix<Real>;
/// A `(U, V, θ)` pair over [`Real`].
pub type Pair = rotrep::PhasePair<Real>;
/// Periodic Jacobi matrix over [`Real`].
pub type Jacobi = spectral::PeriodicJacobiMatrix<Real>;
/// Interval with rigorous radius over [`Real`].
pub type Interval = angles::IntervalEstimate<Real>;
/// Dilation certificate over [`Real`].
pub type Certificate = dilation::DilationCertificate<Real>;
