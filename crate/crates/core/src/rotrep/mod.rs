//! Finite-dimensional representations of the rotation relation `VU = qUV`.
//!
//! The clock matrix `X = diag(1, q, …, q^{n−1})` and the cyclic shift `Y`
//! satisfy `YX = qXY` when `q` is a primitive n-th root of unity, and every
//! irreducible representation of the relation is `(αX, βY)` for unimodular
//! phases. The modified discrete Fourier matrix `F` implements the symmetry
//! `F*XF = Y*`, `F*YF = X`.
//!
//! Whether a given pair generates the *full* rotation algebra (rather than
//! a proper quotient) is not decidable from finite numerics; this module
//! certifies only the relation defect and unitarity of a pair, which is all
//! downstream constructions need.

mod matrix;

pub use matrix::{ComplexMatrix, RectMatrix, ShapeError};

use num_complex::Complex;
use thiserror::Error;

use crate::angles::RationalAngle;
use crate::scalar::Scalar;
use crate::spectral::operator_norm;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RotRepError {
    #[error("phase is not unimodular: |z| = {0}")]
    NotUnimodular(f64),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// Commutation/unitarity tolerance at dimension `n`: 1e-12 up to n = 10^4,
/// scaling linearly above. Entries are exact roots of unity evaluated once,
/// so the defect is pure accumulation error.
pub fn relation_tolerance<T: Scalar>(n: usize) -> T {
    let base = T::from_f64_const(1e-12);
    if n <= 10_000 {
        base
    } else {
        base * T::from_int(n as i64) / T::from_f64_const(1e4)
    }
}

/// A pair of (scaled) unitaries with the phase angle they are supposed to
/// commute by: `VU = e^{iθ}UV`.
///
/// Construction does not verify the relation (certificate matrices can be
/// large); [`commutation_defect`] and [`PhasePair::unitarity_defect`] measure it.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PhasePair<T: Scalar> {
    pub u: ComplexMatrix<T>,
    pub v: ComplexMatrix<T>,
    pub phase_angle: RationalAngle,
}

impl<T: Scalar> PhasePair<T> {
    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// `max(‖U*U − I‖, ‖V*V − I‖)` in operator norm.
    pub fn unitarity_defect(&self) -> Result<T, RotRepError> {
        let n = self.u.dim();
        let i = ComplexMatrix::identity(n);
        let du = self.u.adjoint().mul(&self.u)?.sub(&i)?;
        let dv = self.v.adjoint().mul(&self.v)?.sub(&i)?;
        Ok(operator_norm(&du).max(operator_norm(&dv)))
    }
}

/// The clock matrix `X = diag(1, q, …, q^{n−1})`, `n = order(a)`.
pub fn clock_matrix<T: Scalar>(a: &RationalAngle) -> ComplexMatrix<T> {
    let n = a.order() as usize;
    let mut m = ComplexMatrix::zeros(n);
    for k in 0..n {
        m[(k, k)] = a.root_of_unity(k as i64);
    }
    m
}

/// The cyclic shift: ones on the superdiagonal and in the lower-left corner.
pub fn shift_matrix<T: Scalar>(n: usize) -> ComplexMatrix<T> {
    assert!(n >= 1);
    let one = Complex::new(T::one(), T::zero());
    let mut m = ComplexMatrix::zeros(n);
    for k in 0..n - 1 {
        m[(k, k + 1)] = one;
    }
    m[(n - 1, 0)] = one;
    m
}

fn check_unimodular<T: Scalar>(z: Complex<T>) -> Result<(), RotRepError> {
    let defect = (z.norm() - T::one()).abs();
    if defect > T::from_f64_const(1e-12) {
        return Err(RotRepError::NotUnimodular(z.norm().to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// The representation `π_{α,β} = (αX, βY)`; `(1, 1)` is the standard one.
pub fn standard_pair<T: Scalar>(
    a: &RationalAngle,
    alpha: Complex<T>,
    beta: Complex<T>,
) -> Result<PhasePair<T>, RotRepError> {
    check_unimodular(alpha)?;
    check_unimodular(beta)?;
    let u = clock_matrix(a).scale(alpha);
    let v = shift_matrix(a.order() as usize).scale(beta);
    Ok(PhasePair { u, v, phase_angle: *a })
}

/// The modified discrete Fourier matrix `F = (e^{iθkℓ}/√n)`; unitary, and
/// conjugation by it maps `X ↦ Y*` and `Y ↦ X`.
pub fn fourier_matrix<T: Scalar>(a: &RationalAngle) -> ComplexMatrix<T> {
    let n = a.order() as usize;
    let scale = T::one() / T::from_int(n as i64).sqrt();
    ComplexMatrix::from_fn(n, |k, l| {
        a.root_of_unity((k as i64) * (l as i64)).scale(scale)
    })
}

///`‖VU − e^{iθ}UV‖` in operator norm.
pub fn commutation_defect<T: Scalar>(pair: &PhasePair<T>) -> Result<T, RotRepError> {
    let q: Complex<T> = pair.phase_angle.root_of_unity(1);
    let vu = pair.v.mul(&pair.u)?;
    let uv = pair.u.mul(&pair.v)?;
    let defect = vu.sub(&uv.scale(q))?;
    Ok(operator_norm(&defect))
}

/// Tensor product of two pairs; phases add (mod a full turn).
pub fn tensor_pair<T: Scalar>(p1: &PhasePair<T>, p2: &PhasePair<T>) -> PhasePair<T> {
    PhasePair {
        u: p1.u.kron(&p2.u),
        v: p1.v.kron(&p2.v),
        phase_angle: p1.phase_angle.sum(&p2.phase_angle),
    }
}
