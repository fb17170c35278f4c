//! Floating-point scalar abstraction for the numerical kernels.
//!
//! Everything that touches floating point (matrices, eigensolvers, interval
//! arithmetic, enclosures) is generic over [`Scalar`]; the crate root exports
//! `f64`-concrete aliases for normal use. Angle arithmetic is exact integer
//! arithmetic and does not go through this trait.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive, NumAssignOps};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssignOps + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Conversion from an `f64` constant (tolerances, reference values).
    fn from_f64_const(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// Conversion from an integer count or index.
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable as float")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `e^{i·2π·num/den}` from the exact reduced residue `num mod den`.
///
/// The argument handed to `cos`/`sin` is always in `[0, 2π)`, so the root of
/// unity is accurate to a couple of ulps regardless of how large the original
/// exponent was. Callers must pass `den >= 1`.
pub fn unit_root<T: Scalar>(num: i64, den: i64) -> Complex<T> {
    debug_assert!(den >= 1);
    let r = num.rem_euclid(den);
    let angle = T::TAU() * T::from_int(r) / T::from_int(den);
    Complex::from_polar(T::one(), angle)
}

/// Squared Euclidean norm of a complex slice.
pub fn norm_sqr<T: Scalar>(x: &[Complex<T>]) -> T {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Euclidean norm of a complex slice.
pub fn norm<T: Scalar>(x: &[Complex<T>]) -> T {
    norm_sqr(x).sqrt()
}

/// Hermitian inner product `⟨x, y⟩`, conjugate-linear in the first slot.
pub fn inner<T: Scalar>(x: &[Complex<T>], y: &[Complex<T>]) -> Complex<T> {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a.conj() * b).fold(Complex::new(T::zero(), T::zero()), |s, t| s + t)
}

/// SplitMix64 stream; used wherever a deterministic pseudo-random vector is
/// needed (Lanczos start vectors, power-iteration starts, test instances).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[-0.5, 0.5)`.
    pub fn next_centered<T: Scalar>(&mut self) -> T {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        T::from_f64_const(u - 0.5)
    }

    /// Fold a slice of floats into the stream state (order-sensitive).
    pub fn absorb<T: Scalar>(mut self, xs: &[T]) -> Self {
        for x in xs {
            self.state ^= x.to_f64().map(f64::to_bits).unwrap_or(0);
            self.next_u64();
        }
        self
    }
}


#[cfg(test)]
mod f32_instantiation {
    //! The kernels genuinely are scalar-generic; exercise the f32 lane at
    //! f32-appropriate tolerances.

    use crate::angles::RationalAngle;
    use crate::spectral::{dense_spectrum, top_eigenpair, PeriodicJacobiMatrix};

    #[test]
    fn norms_work_in_single_precision() {
        let a = RationalAngle::new(1, 3).unwrap();
        let h = crate::mathieu::hamiltonian::<f32>(
            &a,
            num_complex::Complex::new(1.0f32, 0.0),
            num_complex::Complex::new(1.0f32, 0.0),
        )
        .unwrap();
        let spec = dense_spectrum(&h.matrix).unwrap();
        assert!((spec[2] - (1.0 + 3f32.sqrt())).abs() < 1e-5);

        let jac = PeriodicJacobiMatrix::new(vec![2.0f32, -1.0, -1.0]);
        let r = top_eigenpair(&jac, 1e-5f32).unwrap();
        assert!((r.eigenvalue - (1.0 + 3f32.sqrt())).abs() < 1e-5);
    }

    #[test]
    fn intervals_work_in_single_precision() {
        let a = crate::angles::IntervalEstimate::new(1.0f32, 0.25);
        let b = a.scale(3.0);
        assert!(b.contains(3.0 * 1.2));
        assert!(!b.contains(4.0));
    }
}
