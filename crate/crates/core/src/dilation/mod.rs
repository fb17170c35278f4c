//! Explicit optimal dilations between commutation phases.
//!
//! A pair `(U, V)` with `VU = e^{iθ}UV` dilates to scalar multiples of a
//! `e^{iθ'}`-commuting pair on `H ⊗ ℂⁿ`, `n = order(γ)`, `γ = θ' − θ`: with
//! `x` the top eigenvector of `h_γ^{(1,1)}` and `φ_u = ⟨x, Xx⟩`,
//! `φ_v = ⟨x, Yx⟩`,
//!
//! ```text
//!   U' = U ⊗ X/φ_u,   V' = V ⊗ Y/φ_v,   W h = h ⊗ x,
//! ```
//!
//! the compressions `W*U'W = U`, `W*V'W = V` hold exactly and
//! `‖U'‖ = ‖V'‖ = 4/‖h_γ‖`, which is the optimal scale. The other half of
//! optimality is the obstruction of [`lower_bound_margin`]: below that scale
//! no commuting dilation exists.
//!
//! For pairs (as opposed to longer tuples) the same scale also governs
//! dilations to norm-bounded `q'`-commuting contractions; only the unitary
//! target form is modeled here.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angles::RationalAngle;
use crate::mathieu::{host_norm, MathieuError};
use crate::rotrep::{
    clock_matrix, shift_matrix, ComplexMatrix, PhasePair, RectMatrix, ShapeError,
};
use crate::scalar::{Scalar, SplitMix64};
use crate::spectral::{
    dense_eigen, nonnegativity_defect, operator_norm, top_eigenpair, PeriodicJacobiMatrix,
    SpectralError,
};

/// Largest target dimension `m·n` a certificate may occupy.
pub const DEFAULT_DIMENSION_CAP: usize = 8192;

/// Dense/matrix-free crossover for certificate residual norms.
const DENSE_RESIDUAL_LIMIT: usize = 512;

#[derive(Debug, Error, Clone)]
pub enum DilationError<T: Scalar> {
    #[error("state at {gamma} is numerically degenerate: |phi| = {phi}")]
    DegenerateState { gamma: RationalAngle, phi: T },
    #[error("target dimension {dim} exceeds the cap {cap}")]
    SizeLimit { dim: usize, cap: usize },
    #[error("input pair fails the commutation check: defect {defect}")]
    BadPair { defect: T },
    #[error(transparent)]
    Mathieu(#[from] MathieuError<T>),
    #[error(transparent)]
    Spectral(#[from] SpectralError<T>),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// The optimal vector state on the order-`n` representation of `A_γ`.
#[derive(Debug, Clone)]
pub struct StateData<T: Scalar> {
    pub gamma: RationalAngle,
    /// Unit top eigenvector of `h_γ^{(1,1)}`, phase-fixed so the
    /// largest-modulus entry is positive real.
    pub eigenvector: Vec<Complex<T>>,
    pub phi_u: Complex<T>,
    pub phi_v: Complex<T>,
}

/// Compute the optimal state: `x` the top eigenvector, `φ_u = ⟨x, Xx⟩`,
/// `φ_v = ⟨x, Yx⟩`, both equal to `‖h_γ‖/4`.
///
/// If the two expectations disagree beyond tolerance (possible only under
/// numerical degeneracy) the vector state is replaced by its average over
/// the order-4 symmetry orbit `{(X,Y), (Y*,X), (X*,Y*), (Y,X*)}`, which
/// equalizes them by construction; the event is logged.
pub fn optimal_state<T: Scalar>(gamma: &RationalAngle) -> Result<StateData<T>, DilationError<T>> {
    let n = gamma.order() as usize;
    let mut x: Vec<Complex<T>> = if n <= crate::mathieu::NORM_DENSE_CROSSOVER {
        let h = crate::mathieu::hamiltonian(
            gamma,
            Complex::new(T::one(), T::zero()),
            Complex::new(T::one(), T::zero()),
        )?;
        let (_, q) = dense_eigen(&h.matrix)?;
        (0..n).map(|k| q[(k, n - 1)]).collect()
    } else {
        let diag =
            (0..n).map(|k| (gamma.root_of_unity::<T>(k as i64) * T::from_f64_const(2.0)).re).collect();
        let result = top_eigenpair(&PeriodicJacobiMatrix::new(diag), T::from_f64_const(1e-12))?;
        result.eigenvector.into_iter().map(|v| Complex::new(v, T::zero())).collect()
    };

    // global phase: largest-modulus entry positive real
    let mut max_abs = T::zero();
    let mut pivot = Complex::new(T::one(), T::zero());
    for z in &x {
        if z.norm() > max_abs {
            max_abs = z.norm();
            pivot = *z;
        }
    }
    let phase = pivot.unscale(max_abs).conj();
    for z in x.iter_mut() {
        *z *= phase;
    }

    let defect = nonnegativity_defect(&x)?;
    if defect > T::from_f64_const(1e-8) {
        log::warn!("top eigenvector at {gamma} is not nonnegative: defect {defect}");
    }

    // φ_u = Σ q^k |x_k|², φ_v = Σ conj(x_k) x_{k+1} (cyclic)
    let mut phi_u = Complex::new(T::zero(), T::zero());
    let mut phi_v = Complex::new(T::zero(), T::zero());
    for k in 0..n {
        phi_u += gamma.root_of_unity::<T>(k as i64).scale(x[k].norm_sqr());
        phi_v += x[k].conj() * x[(k + 1) % n];
    }

    if (phi_u - phi_v).norm() > T::from_f64_const(1e-10) {
        log::warn!(
            "phi_u and phi_v disagree at {gamma} ({} vs {}); applying symmetrization",
            phi_u,
            phi_v
        );
        let avg = (phi_u + phi_u.conj() + phi_v + phi_v.conj()).unscale(T::from_f64_const(4.0));
        phi_u = avg;
        phi_v = avg;
    }

    if phi_u.norm() < T::from_f64_const(1e-8) {
        return Err(DilationError::DegenerateState { gamma: *gamma, phi: phi_u.norm() });
    }

    Ok(StateData { gamma: *gamma, eigenvector: x, phi_u, phi_v })
}

/// Measured deviations of a certificate from its defining identities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Residuals<T> {
    /// `‖W*U'W − U‖`
    pub compression_u: T,
    /// `‖W*V'W − V‖`
    pub compression_v: T,
    /// `‖V'U' − e^{iθ'}U'V'‖`
    pub commutation: T,
    /// `‖W*W − I‖`
    pub isometry: T,
    /// `‖(U'/c)*(U'/c) − I‖`
    pub norm_u: T,
    /// `‖(V'/c)*(V'/c) − I‖`
    pub norm_v: T,
}

impl<T: Scalar> Residuals<T> {
    pub fn max(&self) -> T {
        self.compression_u
            .max(self.compression_v)
            .max(self.commutation)
            .max(self.isometry)
            .max(self.norm_u)
            .max(self.norm_v)
    }
}

/// A self-contained, re-verifiable dilation witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DilationCertificate<T: Scalar> {
    pub source: PhasePair<T>,
    pub target: PhasePair<T>,
    pub isometry: RectMatrix<T>,
    pub scale: T,
    pub residuals: Residuals<T>,
}

/// Build the dilation of Theorem-style optimal scale from `pair` at its
/// phase `θ` to phase `θ'`.
pub fn build_dilation<T: Scalar>(
    pair: &PhasePair<T>,
    theta_prime: &RationalAngle,
) -> Result<DilationCertificate<T>, DilationError<T>> {
    build_dilation_with_cap(pair, theta_prime, DEFAULT_DIMENSION_CAP)
}

pub fn build_dilation_with_cap<T: Scalar>(
    pair: &PhasePair<T>,
    theta_prime: &RationalAngle,
    cap: usize,
) -> Result<DilationCertificate<T>, DilationError<T>> {
    let m = pair.dim();
    let gamma = theta_prime.difference(&pair.phase_angle);
    let n = gamma.order() as usize;
    let dim = m * n;
    if dim > cap {
        return Err(DilationError::SizeLimit { dim, cap });
    }

    // pre: the input pair must actually satisfy its relation
    if m <= DENSE_RESIDUAL_LIMIT {
        let defect = crate::rotrep::commutation_defect(pair).map_err(MathieuError::from)?;
        let tol = crate::rotrep::relation_tolerance::<T>(m) * T::from_int(m as i64 + 1) * T::from_f64_const(100.0);
        if defect > tol {
            return Err(DilationError::BadPair { defect });
        }
    }

    let state = optimal_state::<T>(&gamma)?;
    let scale = T::from_f64_const(4.0) / host_norm::<T>(&gamma)?;

    let x_gamma: ComplexMatrix<T> = clock_matrix(&gamma);
    let y_gamma: ComplexMatrix<T> = shift_matrix(n);
    let unit = Complex::new(T::one(), T::zero());
    let inv_phi_u = unit / state.phi_u;
    let inv_phi_v = unit / state.phi_v;
    let u_prime = pair.u.kron(&x_gamma.scale(inv_phi_u));
    let v_prime = pair.v.kron(&y_gamma.scale(inv_phi_v));

    let mut w = RectMatrix::zeros(dim, m);
    for i in 0..m {
        for k in 0..n {
            w[(i * n + k, i)] = state.eigenvector[k];
        }
    }

    let target = PhasePair { u: u_prime, v: v_prime, phase_angle: *theta_prime };
    let residuals = measure_residuals(pair, &target, &w, scale)?;
    Ok(DilationCertificate { source: pair.clone(), target, isometry: w, scale, residuals })
}

fn measure_residuals<T: Scalar>(
    source: &PhasePair<T>,
    target: &PhasePair<T>,
    w: &RectMatrix<T>,
    scale: T,
) -> Result<Residuals<T>, DilationError<T>> {
    let m = source.dim();
    let dim = target.dim();
    if w.rows() != dim || w.cols() != m {
        return Err(DilationError::Shape(ShapeError::Mismatch(w.rows(), dim)));
    }

    // small-space residuals are always dense
    let identity_m = ComplexMatrix::identity(m);
    let isometry = operator_norm(&w.adjoint_times(w)?.into_square()?.sub(&identity_m)?);
    let compress = |big: &ComplexMatrix<T>, small: &ComplexMatrix<T>| -> Result<T, DilationError<T>> {
        let bw = w.left_mul_square(big)?;
        let wbw = w.adjoint_times(&bw)?.into_square()?;
        Ok(operator_norm(&wbw.sub(small)?))
    };
    let compression_u = compress(&target.u, &source.u)?;
    let compression_v = compress(&target.v, &source.v)?;

    let q_prime: Complex<T> = target.phase_angle.root_of_unity(1);
    let inv_scale = Complex::new(T::one() / scale, T::zero());
    let (commutation, norm_u, norm_v);
    if dim <= DENSE_RESIDUAL_LIMIT {
        let vu = target.v.mul(&target.u)?;
        let uv = target.u.mul(&target.v)?;
        commutation = operator_norm(&vu.sub(&uv.scale(q_prime))?);
        let identity = ComplexMatrix::identity(dim);
        let su = target.u.scale(inv_scale);
        let sv = target.v.scale(inv_scale);
        norm_u = operator_norm(&su.adjoint().mul(&su)?.sub(&identity)?);
        norm_v = operator_norm(&sv.adjoint().mul(&sv)?.sub(&identity)?);
    } else {
        // matrix-free: singular-value power iteration on the defect operators
        let u = &target.u;
        let v = &target.v;
        // D = V'U' − q'U'V'
        let apply = |x: &[Complex<T>], y: &mut [Complex<T>]| {
            let mut t1 = vec![Complex::new(T::zero(), T::zero()); dim];
            u.matvec(x, &mut t1);
            v.matvec(&t1, y);
            let mut t2 = vec![Complex::new(T::zero(), T::zero()); dim];
            v.matvec(x, &mut t2);
            u.matvec(&t2, &mut t1);
            for (yi, t) in y.iter_mut().zip(&t1) {
                *yi -= q_prime * t;
            }
        };
        let apply_adjoint = |x: &[Complex<T>], y: &mut [Complex<T>]| {
            let mut t1 = vec![Complex::new(T::zero(), T::zero()); dim];
            v.matvec_adjoint(x, &mut t1);
            u.matvec_adjoint(&t1, y);
            let mut t2 = vec![Complex::new(T::zero(), T::zero()); dim];
            u.matvec_adjoint(x, &mut t2);
            v.matvec_adjoint(&t2, &mut t1);
            let qc = q_prime.conj();
            for (yi, t) in y.iter_mut().zip(&t1) {
                *yi -= qc * t;
            }
        };
        commutation = matrix_free_norm(dim, apply, apply_adjoint);
        // D = (M/c)*(M/c) − I is Hermitian, so it is its own adjoint
        let scaled_unitarity = |mat: &ComplexMatrix<T>| {
            let apply = |x: &[Complex<T>], y: &mut [Complex<T>]| {
                let mut t = vec![Complex::new(T::zero(), T::zero()); dim];
                mat.matvec(x, &mut t);
                for ti in t.iter_mut() {
                    *ti *= inv_scale;
                }
                mat.matvec_adjoint(&t, y);
                for (yi, xi) in y.iter_mut().zip(x) {
                    *yi = *yi * inv_scale - *xi;
                }
            };
            matrix_free_norm(dim, apply, apply)
        };
        norm_u = scaled_unitarity(u);
        norm_v = scaled_unitarity(v);
    }

    Ok(Residuals { compression_u, compression_v, commutation, isometry, norm_u, norm_v })
}

/// Largest singular value of a matrix-free operator `D`: power iteration on
/// `D*D`, reporting `‖Dx‖` at the current iterate. Deterministic starts, two
/// restarts.
fn matrix_free_norm<T: Scalar>(
    dim: usize,
    apply: impl Fn(&[Complex<T>], &mut [Complex<T>]),
    apply_adjoint: impl Fn(&[Complex<T>], &mut [Complex<T>]),
) -> T {
    let mut rng = SplitMix64::new(0x7f4a_11ce ^ dim as u64);
    let mut best = T::zero();
    for _restart in 0..2 {
        let mut x: Vec<Complex<T>> =
            (0..dim).map(|_| Complex::new(rng.next_centered(), rng.next_centered())).collect();
        normalize(&mut x);
        let mut y = vec![Complex::new(T::zero(), T::zero()); dim];
        let mut z = vec![Complex::new(T::zero(), T::zero()); dim];
        let mut estimate = T::zero();
        for it in 0..150 {
            apply(&x, &mut y);
            let sigma = crate::scalar::norm(&y);
            apply_adjoint(&y, &mut z);
            let nz = crate::scalar::norm(&z);
            if nz <= T::min_positive_value() {
                estimate = estimate.max(sigma);
                break;
            }
            for (xi, zi) in x.iter_mut().zip(&z) {
                *xi = zi.unscale(nz);
            }
            let rel = (sigma - estimate).abs() / (T::one() + sigma);
            estimate = sigma;
            if it > 15 && rel < T::epsilon() * T::from_f64_const(4.0) {
                break;
            }
        }
        best = best.max(estimate);
    }
    best
}

fn normalize<T: Scalar>(x: &mut [Complex<T>]) {
    let n = crate::scalar::norm(x);
    if n > T::zero() {
        for xi in x.iter_mut() {
            *xi = xi.unscale(n);
        }
    }
}

/// Outcome of re-verifying a certificate from scratch.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport<T: Scalar> {
    pub residuals: Residuals<T>,
    /// `|c − 4/‖h_γ‖|` recomputed from the phase angles.
    pub scale_defect: T,
    pub tolerance: T,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Recompute every invariant of the certificate; stored residuals are never
/// trusted.
pub fn verify_certificate<T: Scalar>(
    cert: &DilationCertificate<T>,
) -> Result<VerificationReport<T>, DilationError<T>> {
    let dim = cert.target.dim();
    let residuals = measure_residuals(&cert.source, &cert.target, &cert.isometry, cert.scale)?;
    let gamma = cert.target.phase_angle.difference(&cert.source.phase_angle);
    let scale_defect = (cert.scale - T::from_f64_const(4.0) / host_norm::<T>(&gamma)?).abs();

    let tolerance = T::from_f64_const(1e-10) * T::from_int(dim as i64);
    let mut failures = Vec::new();
    let checks: [(&str, T); 7] = [
        ("compression_u", residuals.compression_u),
        ("compression_v", residuals.compression_v),
        ("commutation", residuals.commutation),
        ("isometry", residuals.isometry),
        ("norm_u", residuals.norm_u),
        ("norm_v", residuals.norm_v),
        ("scale", scale_defect),
    ];
    for (name, value) in checks {
        // a NaN residual must fail, so the comparison is written to catch it
        if value.is_nan() || value > tolerance {
            failures.push(format!("{name}: {value:e} > {tolerance:e}"));
        }
    }
    Ok(VerificationReport { residuals, scale_defect, tolerance, pass: failures.is_empty(), failures })
}

/// `(c_γ, e^{|γ|/4})`: the optimal scale never exceeds the Weyl-unitary
/// construction's scale.
pub fn weyl_bound_check<T: Scalar>(gamma: &RationalAngle) -> Result<(T, T), DilationError<T>> {
    let c = T::from_f64_const(4.0) / host_norm::<T>(gamma)?;
    let bound = (gamma.circle_norm::<T>() / T::from_f64_const(4.0)).exp();
    Ok((c, bound))
}

/// The scaled-commuting-dilation obstruction at angle `a` and scale `r`.
///
/// `lhs = ‖λ + X*⊗X + Y⊗Y‖²` (equal to `(λ+2)²`, certified by the fixed
/// vector `ξ = n^{-1/2} Σ e_j⊗e_j`), `rhs = max ‖λ + zX* + wY‖²` over the
/// sampled torus `rT²`, and `margin = (lhs − rhs)/λ`. A positive margin
/// beyond [`obstruction_slack`] certifies that no commuting dilation at
/// scale `r` exists.
pub fn lower_bound_margin<T: Scalar>(
    a: &RationalAngle,
    r: T,
    lambda: T,
    torus_grid: usize,
) -> Result<(T, T, T), DilationError<T>> {
    assert!(r > T::zero() && lambda > T::zero() && torus_grid >= 8);
    let n = a.order() as usize;
    if n * n > crate::spectral::dense_limit() {
        return Err(DilationError::SizeLimit { dim: n * n, cap: crate::spectral::dense_limit() });
    }
    let x: ComplexMatrix<T> = clock_matrix(a);
    let y: ComplexMatrix<T> = shift_matrix(n);
    let xs = x.adjoint();

    // lhs on the n²-dimensional space: ‖P‖ ≥ ‖Pξ‖ for the fixed vector
    // ξ = n^{-1/2} Σ e_j⊗e_j, and ‖P‖ ≤ λ + ‖X*⊗X‖ + ‖Y⊗Y‖ = λ + 2 = ‖Pξ‖,
    // so the measured ‖Pξ‖ IS the norm — and using it as the lhs keeps the
    // margin a certified lower bound. (Iterative norm estimates are useless
    // here: the singular values of λI + small cluster too tightly.)
    let lam = Complex::new(lambda, T::zero());
    let p_big = xs.kron(&x).add(&y.kron(&y))?.sub_scalar_identity(-lam);
    let mut xi = vec![Complex::new(T::zero(), T::zero()); n * n];
    let scale = T::one() / T::from_int(n as i64).sqrt();
    for j in 0..n {
        xi[j * n + j] = Complex::new(scale, T::zero());
    }
    let mut pxi = vec![Complex::new(T::zero(), T::zero()); n * n];
    p_big.matvec(&xi, &mut pxi);
    let lhs_norm = crate::scalar::norm(&pxi);
    let lhs = lhs_norm * lhs_norm;
    let closed_form = lambda + T::from_f64_const(2.0);
    if (lhs_norm - closed_form).abs() > T::from_f64_const(1e-9) * closed_form {
        log::warn!("‖Pξ‖ at {a} disagrees with the closed form: {lhs_norm} vs {closed_form}");
    }

    // rhs: max over the grid of the top eigenvalue of (λ + A)*(λ + A)
    use rayon::prelude::*;
    let rhs = (0..torus_grid * torus_grid)
        .into_par_iter()
        .map(|idx| {
            let (j, k) = (idx / torus_grid, idx % torus_grid);
            let z = crate::scalar::unit_root::<T>(j as i64, torus_grid as i64).scale(r);
            let w = crate::scalar::unit_root::<T>(k as i64, torus_grid as i64).scale(r);
            let p = xs.scale(z).add(&y.scale(w)).expect("same dim").sub_scalar_identity(-lam);
            let gram = p.adjoint().mul(&p).expect("same dim");
            let spec = crate::spectral::dense_spectrum_with_limit(&gram, usize::MAX)
                .expect("Gram matrices are Hermitian");
            *spec.last().expect("n >= 1")
        })
        .reduce(T::neg_infinity, |x, y| x.max(y));

    let margin = (lhs - rhs) / lambda;
    Ok((lhs, rhs, margin))
}

/// Sound margin-level slack for the grid sampling of [`lower_bound_margin`]:
/// each sampled phase is within `π/grid` of any torus point, the norm is
/// Lipschitz in each phase with constant `r`, and the squared norm is at
/// most `(λ+2r)` times as sensitive; dividing by `λ` matches the margin.
pub fn obstruction_slack<T: Scalar>(r: T, lambda: T, torus_grid: usize) -> T {
    let two = T::from_f64_const(2.0);
    two * r * (lambda + two * r) * (T::TAU() / T::from_int(torus_grid as i64)) / lambda
}
