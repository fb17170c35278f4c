//! Periodic Jacobi matrices: `diag(d) + cyclic shift + cyclic shiftᵀ` with
//! unit couplings. The matvec is O(n), which is what makes the matrix-free
//! Lanczos path worthwhile.

use num_complex::Complex;

use crate::rotrep::ComplexMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicJacobiMatrix<T: Scalar> {
    diag: Vec<T>,
}

impl<T: Scalar> PeriodicJacobiMatrix<T> {
    pub fn new(diag: Vec<T>) -> Self {
        assert!(!diag.is_empty());
        Self { diag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diag
    }

    /// `y = Hx` with cyclic neighbor couplings:
    /// `(Hx)_k = d_k x_k + x_{k−1} + x_{k+1}` (indices mod n).
    ///
    /// For `n = 1` the two neighbors coincide with `x_0` itself (`H = d + 2`),
    /// and for `n = 2` the corner and the off-diagonal coincide, so the
    /// neighbor sum is `2x_{1−k}`; the wrap-around formula below produces
    /// both automatically.
    pub fn matvec(&self, x: &[T], y: &mut [T]) {
        let n = self.diag.len();
        debug_assert_eq!(x.len(), n);
        debug_assert_eq!(y.len(), n);
        if n == 1 {
            y[0] = self.diag[0] * x[0] + x[0] + x[0];
            return;
        }
        for k in 0..n {
            let prev = if k == 0 { x[n - 1] } else { x[k - 1] };
            let next = if k + 1 == n { x[0] } else { x[k + 1] };
            y[k] = self.diag[k] * x[k] + prev + next;
        }
    }

    /// Dense realization (for the dense oracle and small-n fallbacks).
    pub fn to_dense(&self) -> ComplexMatrix<T> {
        let n = self.diag.len();
        let mut m = ComplexMatrix::zeros(n);
        let one = Complex::new(T::one(), T::zero());
        for k in 0..n {
            m[(k, k)] = Complex::new(self.diag[k], T::zero());
            let next = (k + 1) % n;
            m[(k, next)] += one;
            m[(next, k)] += one;
        }
        m
    }

    /// Gershgorin-style bound on the spectral radius; used for scale-aware
    /// tolerances.
    pub fn scale_bound(&self) -> T {
        self.diag.iter().fold(T::zero(), |m, &d| m.max(d.abs())) + T::from_f64_const(2.0)
    }

    /// Solve `(σI − H) x = b` in O(n).
    ///
    /// `σI − H` is the tridiagonal matrix `A = tridiag(−1, σ − d_k, −1)`
    /// minus the rank-2 corner coupling `U Vᵀ` with `U = [e₀, e_{n−1}]`,
    /// `V = [e_{n−1}, e₀]`; Woodbury reduces the solve to three tridiagonal
    /// solves and a 2×2 system.
    pub fn solve_shifted(&self, sigma: T, b: &[T]) -> Vec<T> {
        let n = self.diag.len();
        debug_assert_eq!(b.len(), n);
        if n == 1 {
            let denom = sigma - self.diag[0] - T::from_f64_const(2.0);
            let denom = if denom.abs() < T::min_positive_value() { T::epsilon() } else { denom };
            return vec![b[0] / denom];
        }
        let neg_diag: Vec<T> = self.diag.iter().map(|&d| -d).collect();
        let offdiag = vec![-T::one(); n - 1];
        let tri_solve = |rhs: &[T]| -> Vec<T> {
            super::tridiag::tridiag_solve_shifted(&neg_diag, &offdiag, -sigma, rhs)
        };

        let z = tri_solve(b);
        let mut e0 = vec![T::zero(); n];
        e0[0] = T::one();
        let mut en = vec![T::zero(); n];
        en[n - 1] = T::one();
        let w0 = tri_solve(&e0);
        let w1 = tri_solve(&en);

        // s = (I₂ − VᵀW)⁻¹ Vᵀz with Vᵀy = (y_{n−1}, y₀)
        let m00 = T::one() - w0[n - 1];
        let m01 = -w1[n - 1];
        let m10 = -w0[0];
        let m11 = T::one() - w1[0];
        let det = m00 * m11 - m01 * m10;
        let det = if det.abs() < T::min_positive_value() { T::epsilon() } else { det };
        let r0 = z[n - 1];
        let r1 = z[0];
        let s0 = (m11 * r0 - m01 * r1) / det;
        let s1 = (m00 * r1 - m10 * r0) / det;

        let mut x = z;
        for k in 0..n {
            x[k] = x[k] + w0[k] * s0 + w1[k] * s1;
        }
        x
    }
}
