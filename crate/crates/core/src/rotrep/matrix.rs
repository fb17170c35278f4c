//! Dense complex matrices, row-major.
//!
//! `ComplexMatrix` is square (all representation and certificate matrices
//! are); `RectMatrix` exists for the dilation isometry. Products skip zero
//! entries of the left factor, which makes multiplication by the clock,
//! shift, and other structured matrices O(n²) instead of O(n³).

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("dimension mismatch: {0} vs {1}")]
    Mismatch(usize, usize),
    #[error("entry buffer of length {0} does not match {1} entries")]
    BadLength(usize, usize),
}

/// Square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Scalar> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::new(T::zero(), T::zero()); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_entries(n: usize, data: Vec<Complex<T>>) -> Result<Self, ShapeError> {
        if data.len() != n * n {
            return Err(ShapeError::BadLength(data.len(), n * n));
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn add(&self, other: &Self) -> Result<Self, ShapeError> {
        self.check_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { n: self.n, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ShapeError> {
        self.check_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { n: self.n, data })
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// `self − λI`.
    pub fn sub_scalar_identity(&self, lambda: Complex<T>) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] -= lambda;
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ShapeError> {
        self.check_dim(other)?;
        let n = self.n;
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = vec![zero; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == zero {
                    continue;
                }
                let src = &other.data[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(Self { n, data: out })
    }

    /// Kronecker product; index convention `(i1·n2 + i2, j1·n2 + j2)`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut out = ComplexMatrix::zeros(n);
        for i1 in 0..n1 {
            for j1 in 0..n1 {
                let a = self[(i1, j1)];
                for i2 in 0..n2 {
                    for j2 in 0..n2 {
                        out[(i1 * n2 + i2, j1 * n2 + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex<T>], y: &mut [Complex<T>]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = Complex::new(T::zero(), T::zero());
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            *yi = acc;
        }
    }

    /// `y = A* x` without forming the adjoint.
    pub fn matvec_adjoint(&self, x: &[Complex<T>], y: &mut [Complex<T>]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        let zero = Complex::new(T::zero(), T::zero());
        y.fill(zero);
        for (i, &xi) in x.iter().enumerate() {
            if xi == zero {
                continue;
            }
            for (j, a) in self.row(i).iter().enumerate() {
                y[j] += a.conj() * xi;
            }
        }
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `‖M − M*‖_F`, cheap Hermitian-ness measure.
    pub fn hermitian_defect(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    fn check_dim(&self, other: &Self) -> Result<(), ShapeError> {
        if self.n != other.n {
            return Err(ShapeError::Mismatch(self.n, other.n));
        }
        Ok(())
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

#[derive(Serialize, Deserialize)]
struct SquareRepr<T> {
    n: usize,
    re: Vec<T>,
    im: Vec<T>,
}

impl<T: Scalar + Serialize> Serialize for ComplexMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SquareRepr {
            n: self.n,
            re: self.data.iter().map(|z| z.re).collect(),
            im: self.data.iter().map(|z| z.im).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for ComplexMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SquareRepr::<T>::deserialize(deserializer)?;
        if repr.re.len() != repr.n * repr.n || repr.im.len() != repr.n * repr.n {
            return Err(serde::de::Error::custom("re/im length must equal n^2"));
        }
        let data = repr.re.into_iter().zip(repr.im).map(|(re, im)| Complex::new(re, im)).collect();
        Ok(Self { n: repr.n, data })
    }
}

/// Rectangular complex matrix (only the dilation isometry needs one).
#[derive(Debug, Clone, PartialEq)]
pub struct RectMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> RectMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// `self* · other` (a `cols_self × cols_other` matrix).
    pub fn adjoint_times(&self, other: &RectMatrix<T>) -> Result<RectMatrix<T>, ShapeError> {
        if self.rows != other.rows {
            return Err(ShapeError::Mismatch(self.rows, other.rows));
        }
        let mut out = RectMatrix::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            for i in 0..self.cols {
                let a = self[(k, i)].conj();
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `A · self` for square `A`.
    pub fn left_mul_square(&self, a: &ComplexMatrix<T>) -> Result<RectMatrix<T>, ShapeError> {
        if a.dim() != self.rows {
            return Err(ShapeError::Mismatch(a.dim(), self.rows));
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = RectMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for k in 0..self.rows {
                let v = a[(i, k)];
                if v == zero {
                    continue;
                }
                for j in 0..self.cols {
                    out[(i, j)] += v * self[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn into_square(self) -> Result<ComplexMatrix<T>, ShapeError> {
        if self.rows != self.cols {
            return Err(ShapeError::Mismatch(self.rows, self.cols));
        }
        ComplexMatrix::from_entries(self.rows, self.data)
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for RectMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for RectMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Serialize, Deserialize)]
struct RectRepr<T> {
    rows: usize,
    cols: usize,
    re: Vec<T>,
    im: Vec<T>,
}

impl<T: Scalar + Serialize> Serialize for RectMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RectRepr {
            rows: self.rows,
            cols: self.cols,
            re: self.data.iter().map(|z| z.re).collect(),
            im: self.data.iter().map(|z| z.im).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for RectMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RectRepr::<T>::deserialize(deserializer)?;
        let len = repr.rows * repr.cols;
        if repr.re.len() != len || repr.im.len() != len {
            return Err(serde::de::Error::custom("re/im length must equal rows*cols"));
        }
        let data = repr.re.into_iter().zip(repr.im).map(|(re, im)| Complex::new(re, im)).collect();
        Ok(Self { rows: repr.rows, cols: repr.cols, data })
    }
}
