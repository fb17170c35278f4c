//! Implicit-shift QL iteration for real symmetric tridiagonal matrices.
//!
//! This is the classic EISPACK `tql2` sweep. The same kernel serves the dense
//! Hermitian solver (after Householder reduction) and the Lanczos Ritz-value
//! monitor; eigenvector accumulation is abstracted behind [`RotationSink`] so
//! the values-only path costs O(n²) and the dense path rotates complex
//! columns in place.

use crate::rotrep::ComplexMatrix;
use crate::scalar::Scalar;

/// Receives the plane rotations of the QL sweep, in application order.
pub trait RotationSink<T: Scalar> {
    fn rotate(&mut self, i: usize, j: usize, c: T, s: T);
    /// Column swap issued by the final ascending sort.
    fn swap(&mut self, i: usize, j: usize);
}

/// Values-only: ignore the rotations.
impl<T: Scalar> RotationSink<T> for () {
    fn rotate(&mut self, _i: usize, _j: usize, _c: T, _s: T) {}
    fn swap(&mut self, _i: usize, _j: usize) {}
}

/// Rotates the columns of a complex matrix (the accumulated Householder `Q`).
pub struct ColumnRotator<'a, T: Scalar>(pub &'a mut ComplexMatrix<T>);

impl<T: Scalar> RotationSink<T> for ColumnRotator<'_, T> {
    fn rotate(&mut self, i: usize, j: usize, c: T, s: T) {
        let n = self.0.dim();
        for k in 0..n {
            let a = self.0[(k, i)];
            let b = self.0[(k, j)];
            self.0[(k, j)] = a.scale(s) + b.scale(c);
            self.0[(k, i)] = a.scale(c) - b.scale(s);
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        let n = self.0.dim();
        for k in 0..n {
            let a = self.0[(k, i)];
            self.0[(k, i)] = self.0[(k, j)];
            self.0[(k, j)] = a;
        }
    }
}

/// Diagonalize the tridiagonal matrix with diagonal `d` and off-diagonal `e`
/// (`e[i]` couples `i` and `i+1`; `e[n-1]` is workspace). On return `d` holds
/// the eigenvalues in ascending order and the sink has received every
/// rotation and swap. Returns `false` only if some eigenvalue failed to
/// converge in 50 sweeps.
pub fn tridiag_eigen<T: Scalar>(d: &mut [T], e: &mut [T], sink: &mut impl RotationSink<T>) -> bool {
    let n = d.len();
    assert!(e.len() >= n, "off-diagonal needs one slot of workspace");
    if n <= 1 {
        return true;
    }
    e[n - 1] = T::zero();

    let two = T::from_f64_const(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            // look for a negligible off-diagonal element
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return false;
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let sign_r = if g >= T::zero() { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut underflowed = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                sink.rotate(i, i + 1, c, s);
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }

    // selection-sort ascending, mirroring swaps into the sink
    for i in 0..n {
        let mut k = i;
        for j in i + 1..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            sink.swap(i, k);
        }
    }
    true
}

/// Eigenvalues only, ascending.
pub fn tridiag_eigenvalues<T: Scalar>(diag: &[T], offdiag: &[T]) -> Vec<T> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![T::zero(); n];
    let take = offdiag.len().min(n.saturating_sub(1));
    e[..take].copy_from_slice(&offdiag[..take]);
    let ok = tridiag_eigen(&mut d, &mut e, &mut ());
    debug_assert!(ok, "QL failed to converge");
    d
}

/// Solve `(T − σI) y = b` for tridiagonal `T` by Gaussian elimination with
/// partial pivoting (one band of fill-in). A near-singular pivot is
/// regularized, which is exactly what inverse iteration wants.
pub fn tridiag_solve_shifted<T: Scalar>(diag: &[T], offdiag: &[T], sigma: T, b: &[T]) -> Vec<T> {
    let n = diag.len();
    assert!(n >= 1 && b.len() == n);
    let tiny = T::epsilon() * (T::one() + sigma.abs());
    let regularize = |x: T| if x.abs() < tiny { tiny } else { x };

    if n == 1 {
        return vec![b[0] / regularize(diag[0] - sigma)];
    }

    // row k holds columns (k, k+1, k+2) as (main, sup, sup2)
    let mut main: Vec<T> = diag.iter().map(|&x| x - sigma).collect();
    let mut sup: Vec<T> = (0..n).map(|i| if i + 1 < n { offdiag[i] } else { T::zero() }).collect();
    let mut sup2 = vec![T::zero(); n];
    let mut rhs = b.to_vec();

    for k in 0..n - 1 {
        // entry (k+1, k) before elimination
        let mut low = offdiag[k];
        if low.abs() > main[k].abs() {
            // swap rows k and k+1 over columns k..=k+2
            std::mem::swap(&mut main[k], &mut low);
            std::mem::swap(&mut sup[k], &mut main[k + 1]);
            std::mem::swap(&mut sup2[k], &mut sup[k + 1]);
            rhs.swap(k, k + 1);
        }
        let factor = low / regularize(main[k]);
        main[k + 1] -= factor * sup[k];
        sup[k + 1] -= factor * sup2[k];
        rhs[k + 1] = rhs[k + 1] - factor * rhs[k];
    }

    let mut y = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k];
        if k + 1 < n {
            acc -= sup[k] * y[k + 1];
        }
        if k + 2 < n {
            acc -= sup2[k] * y[k + 2];
        }
        y[k] = acc / regularize(main[k]);
    }
    y
}
