//! Dense Hermitian eigensolver: complex Householder tridiagonalization
//! followed by implicit-shift QL, with the unitary transform accumulated.
//!
//! This is the oracle behind every spectral claim in the crate, so it keeps a
//! checkable contract: eigenvalues ascending and `‖H − QΛQ*‖ ≤ 1e-10·‖H‖`.

use num_complex::Complex;

use super::tridiag::{tridiag_eigen, ColumnRotator};
use super::SpectralError;
use crate::rotrep::ComplexMatrix;
use crate::scalar::{Scalar, SplitMix64};

/// Default dimension limit for dense eigensolves.
pub const DENSE_LIMIT: usize = 2048;

/// Effective dense limit: `QCDIL_DENSE_LIMIT` when set, else [`DENSE_LIMIT`].
pub fn dense_limit() -> usize {
    static LIMIT: std::sync::OnceLock<usize> = std::sync::OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("QCDIL_DENSE_LIMIT").ok().and_then(|s| s.parse().ok()).unwrap_or(DENSE_LIMIT)
    })
}

/// Dimension up to which operator norms are computed by a dense eigensolve
/// of `M*M`; above it a (deterministic) power iteration takes over.
const OP_NORM_DENSE_LIMIT: usize = 512;

/// Hermitian-ness acceptance threshold for `dense_*`: `‖H − H*‖_F` relative
/// to the matrix scale.
fn hermitian_tolerance<T: Scalar>(h: &ComplexMatrix<T>) -> T {
    T::from_f64_const(1e-10) * (T::one() + h.frobenius_norm())
}

/// Full eigendecomposition of a Hermitian matrix: ascending eigenvalues and
/// a unitary `Q` whose columns are the eigenvectors.
pub fn dense_eigen<T: Scalar>(
    h: &ComplexMatrix<T>,
) -> Result<(Vec<T>, ComplexMatrix<T>), SpectralError<T>> {
    dense_eigen_with_limit(h, DENSE_LIMIT)
}

pub fn dense_eigen_with_limit<T: Scalar>(
    h: &ComplexMatrix<T>,
    limit: usize,
) -> Result<(Vec<T>, ComplexMatrix<T>), SpectralError<T>> {
    let (vals, q) = eigen_impl(h, limit, true)?;
    Ok((vals, q.expect("vectors requested")))
}

/// Shared Householder + QL driver; `want_q` skips the transform accumulation
/// (roughly half the work) for values-only callers.
#[allow(clippy::type_complexity)]
fn eigen_impl<T: Scalar>(
    h: &ComplexMatrix<T>,
    limit: usize,
    want_q: bool,
) -> Result<(Vec<T>, Option<ComplexMatrix<T>>), SpectralError<T>> {
    let n = h.dim();
    if n > limit {
        return Err(SpectralError::DenseLimit { n, limit });
    }
    let defect = h.hermitian_defect();
    if defect > hermitian_tolerance(h) {
        return Err(SpectralError::NotHermitian { defect });
    }

    // work on the Hermitian average so tiny asymmetry cannot bias the sweep
    let mut a = ComplexMatrix::from_fn(n, |i, j| (h[(i, j)] + h[(j, i)].conj()).unscale(T::from_f64_const(2.0)));
    let mut q = if want_q { ComplexMatrix::identity(n) } else { ComplexMatrix::zeros(0) };

    if n == 0 {
        return Ok((vec![], want_q.then_some(q)));
    }

    let zero = Complex::new(T::zero(), T::zero());
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];

    // Householder reduction to Hermitian tridiagonal form.
    for k in 0..n.saturating_sub(2) {
        let xnorm_sqr: T = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum();
        let xnorm = xnorm_sqr.sqrt();
        let head = a[(k + 1, k)];
        let head_abs = head.norm();
        // below-subdiagonal part already negligible?
        let lower_sqr = xnorm_sqr - head_abs * head_abs;
        if lower_sqr <= (T::epsilon() * T::epsilon()) * xnorm_sqr || xnorm == T::zero() {
            continue;
        }
        let phase = if head_abs > T::zero() { head.unscale(head_abs) } else { Complex::new(T::one(), T::zero()) };
        // reflector sends the column to β·e₁ with β = −phase·‖x‖
        let beta = -phase.scale(xnorm);
        let sigma = xnorm_sqr + xnorm * head_abs; // = ‖v‖²/2
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] = head - beta;

        // two-sided rank-2 update of the trailing block:
        //   p = A v / σ,  K = v*p / (2σ),  q = p − K v,  A ← A − v q* − q v*
        for i in k + 1..n {
            let mut acc = zero;
            for j in k + 1..n {
                acc += a[(i, j)] * v[j];
            }
            p[i] = acc.unscale(sigma);
        }
        let mut vp = zero;
        for i in k + 1..n {
            vp += v[i].conj() * p[i];
        }
        let kappa = vp.unscale(T::from_f64_const(2.0) * sigma);
        for i in k + 1..n {
            p[i] -= kappa * v[i];
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                a[(i, j)] -= upd;
            }
        }
        a[(k + 1, k)] = beta;
        a[(k, k + 1)] = beta.conj();
        for i in k + 2..n {
            a[(i, k)] = zero;
            a[(k, i)] = zero;
        }

        // Q ← Q·(I − vv*/σ)
        if want_q {
            for r in 0..n {
                let mut t = zero;
                for j in k + 1..n {
                    t += q[(r, j)] * v[j];
                }
                t = t.unscale(sigma);
                for j in k + 1..n {
                    let delta = t * v[j].conj();
                    q[(r, j)] -= delta;
                }
            }
        }
    }

    // phase-rotate so the off-diagonal becomes real nonnegative
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let mut phi = Complex::new(T::one(), T::zero());
    for k in 0..n {
        d[k] = a[(k, k)].re;
        if k + 1 < n {
            let t = a[(k + 1, k)] * phi;
            let t_abs = t.norm();
            e[k] = t_abs;
            let phi_next = if t_abs > T::zero() { t.unscale(t_abs) } else { phi };
            // fold the phase of column k+1 into Q
            if want_q && phi_next != Complex::new(T::one(), T::zero()) {
                for r in 0..n {
                    q[(r, k + 1)] *= phi_next;
                }
            }
            phi = phi_next;
        }
    }

    let ok = if want_q {
        tridiag_eigen(&mut d, &mut e, &mut ColumnRotator(&mut q))
    } else {
        tridiag_eigen(&mut d, &mut e, &mut ())
    };
    if !ok {
        // does not occur for Hermitian input; surface as non-convergence
        return Err(SpectralError::QlStalled { n });
    }
    Ok((d, want_q.then_some(q)))
}

/// All eigenvalues of a Hermitian matrix, ascending with multiplicity.
pub fn dense_spectrum<T: Scalar>(h: &ComplexMatrix<T>) -> Result<Vec<T>, SpectralError<T>> {
    dense_spectrum_with_limit(h, DENSE_LIMIT)
}

pub fn dense_spectrum_with_limit<T: Scalar>(
    h: &ComplexMatrix<T>,
    limit: usize,
) -> Result<Vec<T>, SpectralError<T>> {
    eigen_impl(h, limit, false).map(|(vals, _)| vals)
}

/// Operator norm (largest singular value).
///
/// Dense route: `√λ_max(M*M)`. Beyond an internal size threshold a deterministic
/// power iteration on `M*M` is used instead; its estimate is driven until the
/// relative change is far below the accuracy any caller asserts at.
pub fn operator_norm<T: Scalar>(m: &ComplexMatrix<T>) -> T {
    let n = m.dim();
    if n == 0 {
        return T::zero();
    }
    if n <= OP_NORM_DENSE_LIMIT {
        let gram = m.adjoint().mul(m).expect("square");
        let (vals, _) = eigen_impl(&gram, usize::MAX, false).expect("Gram matrix is Hermitian");
        return vals.last().copied().unwrap_or(T::zero()).max(T::zero()).sqrt();
    }
    operator_norm_power(m)
}

fn operator_norm_power<T: Scalar>(m: &ComplexMatrix<T>) -> T {
    let n = m.dim();
    let mut rng = SplitMix64::new(0x9d1c_e781_u64 ^ (n as u64)).absorb(&[m.frobenius_norm()]);
    let mut best = T::zero();
    for _restart in 0..2 {
        let mut x: Vec<Complex<T>> =
            (0..n).map(|_| Complex::new(rng.next_centered(), rng.next_centered())).collect();
        let mut y = vec![Complex::new(T::zero(), T::zero()); n];
        let mut z = vec![Complex::new(T::zero(), T::zero()); n];
        normalize(&mut x);
        let mut sigma = T::zero();
        for it in 0..300 {
            m.matvec(&x, &mut y);
            let new_sigma = crate::scalar::norm(&y);
            m.matvec_adjoint(&y, &mut z);
            let zn = crate::scalar::norm(&z);
            if zn == T::zero() {
                break;
            }
            for (xi, zi) in x.iter_mut().zip(&z) {
                *xi = zi.unscale(zn);
            }
            let rel = (new_sigma - sigma).abs() / (T::one() + new_sigma);
            sigma = new_sigma;
            if it > 20 && rel < T::epsilon() * T::from_f64_const(8.0) {
                break;
            }
        }
        best = best.max(sigma);
    }
    best
}

fn normalize<T: Scalar>(x: &mut [Complex<T>]) {
    let n = crate::scalar::norm(x);
    if n > T::zero() {
        for xi in x.iter_mut() {
            *xi = xi.unscale(n);
        }
    } else if let Some(first) = x.first_mut() {
        *first = Complex::new(T::one(), T::zero());
    }
}
