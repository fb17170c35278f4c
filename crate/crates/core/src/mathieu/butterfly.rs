//! Butterfly sweep: band data, norms, and dilation constants over every
//! reduced angle up to a denominator cap.
//!
//! Band `j` is the interval swept by the `j`-th ascending eigenvalue of
//! `h^{(α,β)}` over the torus. The characteristic polynomial depends on
//! `(α, β)` only through `cos(n·arg α) + cos(n·arg β)`, and the `j`-th
//! eigenvalue is monotone in that parameter, so the edges are attained where
//! it is extremal: at `(1, 1)` and at `(e^{iπ/n}, e^{iπ/n})`. The four sign
//! pairs `{±1}²` are evaluated as well (for odd `n` they already contain
//! both extremes). Rows are produced in `(n, p)` order regardless of how the
//! work is scheduled, so output files are byte-stable.

use num_complex::Complex;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::Serialize;

use super::{hamiltonian, MathieuError};
use crate::angles::{farey_sequence, RationalAngle};
use crate::scalar::Scalar;
use crate::spectral::dense_spectrum_with_limit;

/// One band of one angle, with the angle-level norm and constant attached.
#[derive(Debug, Clone, PartialEq)]
pub struct BandRecord<T: Scalar> {
    pub angle: RationalAngle,
    /// 1-based band index.
    pub band: usize,
    pub lower: T,
    pub upper: T,
    /// `‖h_θ‖ = max(|lower₁|, upper_n)` over the angle's bands.
    pub norm: T,
    /// `c_θ = 4/norm`.
    pub constant: T,
}

impl<T: Scalar + Serialize> Serialize for BandRecord<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BandRecord", 8)?;
        s.serialize_field("n", &self.angle.denominator())?;
        s.serialize_field("p", &self.angle.numerator())?;
        s.serialize_field("theta", &self.angle.radians::<T>())?;
        s.serialize_field("band", &self.band)?;
        s.serialize_field("lo", &self.lower)?;
        s.serialize_field("hi", &self.upper)?;
        s.serialize_field("norm", &self.norm)?;
        s.serialize_field("c", &self.constant)?;
        s.end()
    }
}

fn bands_for<T: Scalar>(a: &RationalAngle) -> Result<Vec<BandRecord<T>>, MathieuError<T>> {
    let n = a.order() as usize;
    let one = Complex::new(T::one(), T::zero());
    let minus = -one;
    let anti = crate::scalar::unit_root::<T>(1, 2 * n as i64);
    let corners =
        [(one, one), (one, minus), (minus, one), (minus, minus), (anti, anti)];
    let mut spectra = Vec::with_capacity(corners.len());
    for (alpha, beta) in corners {
        let h = hamiltonian(a, alpha, beta)?;
        spectra.push(dense_spectrum_with_limit(&h.matrix, crate::spectral::dense_limit())?);
    }
    let mut records = Vec::with_capacity(n);
    for j in 0..n {
        let mut lower = T::infinity();
        let mut upper = T::neg_infinity();
        for spec in &spectra {
            lower = lower.min(spec[j]);
            upper = upper.max(spec[j]);
        }
        records.push(BandRecord { angle: *a, band: j + 1, lower, upper, norm: T::zero(), constant: T::zero() });
    }
    let norm = records[0].lower.abs().max(records[n - 1].upper);
    let constant = T::from_f64_const(4.0) / norm;
    for r in &mut records {
        r.norm = norm;
        r.constant = constant;
    }
    // bands are ascending and overlap at most at endpoints; a violation
    // would mean the sign-pair shortcut failed, which we refuse to hide
    for w in records.windows(2) {
        let slack = T::from_f64_const(1e-10) * (T::one() + norm);
        if w[1].lower < w[0].upper - slack {
            log::error!("overlapping bands at {a}: band {} and {}", w[0].band, w[1].band);
        }
    }
    Ok(records)
}

/// Band records for every reduced `p/n` with `n ≤ max_denominator`, sorted
/// by `(n, p, band)`.
pub fn butterfly<T: Scalar>(max_denominator: i64) -> Result<Vec<BandRecord<T>>, MathieuError<T>> {
    let angles = farey_sequence(max_denominator.max(1));
    let per_angle: Result<Vec<Vec<BandRecord<T>>>, MathieuError<T>> =
        angles.par_iter().map(|a| bands_for(a)).collect();
    Ok(per_angle?.into_iter().flatten().collect())
}

/// CSV with header `n,p,theta,band,lo,hi,norm,c`; floats carry 17 significant
/// digits so binary64 values round-trip, and the bytes depend only on the
/// records.
pub fn butterfly_csv<T: Scalar>(records: &[BandRecord<T>]) -> String {
    use std::fmt::Write;
    let mut out = String::from("n,p,theta,band,lo,hi,norm,c\n");
    for r in records {
        writeln!(
            out,
            "{},{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.angle.denominator(),
            r.angle.numerator(),
            r.angle.radians::<T>(),
            r.band,
            r.lower,
            r.upper,
            r.norm,
            r.constant
        )
        .expect("write to String");
    }
    out
}

/// The records as a JSON array equivalent to the CSV rows.
pub fn butterfly_json<T: Scalar + Serialize>(records: &[BandRecord<T>]) -> String {
    serde_json::to_string_pretty(records).expect("serializable records")
}
