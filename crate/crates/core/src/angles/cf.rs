//! Continued-fraction convergents: best rational approximations of a
//! frequency in `(0, 1)`.

use super::{AngleError, RationalAngle};
use crate::scalar::Scalar;

/// Continued-fraction expansion of a target in `(0, 1)` truncated at a
/// denominator cap.
///
/// `convergents` holds every convergent `p/n` with `0 < p < n` and
/// `n ≤ max_denominator`, in order of strictly increasing denominator. The
/// leading `0/1` convergent (and the `1/1` one that appears when the target
/// exceeds the golden mean) fall outside `(0, 1)` and are omitted; they carry
/// no information for approximation on the circle. `next_denominator` is the
/// denominator of the first convergent beyond the cap, when the expansion got
/// that far; it gives the sharp error factor `1/(n_k·n_{k+1})` for the last
/// emitted convergent.
#[derive(Debug, Clone)]
pub struct ContinuedFractionExpansion<T: Scalar> {
    pub target: T,
    pub partial_quotients: Vec<i64>,
    pub convergents: Vec<RationalAngle>,
    pub next_denominator: Option<i64>,
}

impl<T: Scalar> ContinuedFractionExpansion<T> {
    /// The best (last) emitted convergent.
    pub fn best(&self) -> Option<RationalAngle> {
        self.convergents.last().copied()
    }
}

/// Expand `target ∈ (0, 1)` and return all convergents with denominator at
/// most `max_denominator`.
pub fn convergents<T: Scalar>(
    target: T,
    max_denominator: i64,
) -> Result<ContinuedFractionExpansion<T>, AngleError> {
    if !(target > T::zero() && target < T::one()) || max_denominator < 1 {
        return Err(AngleError::TargetOutOfRange(format!("{target}")));
    }

    let mut quotients = Vec::new();
    let mut kept = Vec::new();
    let mut next_denominator = None;

    // h/k recurrences with the usual seed values h_{-1}/k_{-1} = 1/0,
    // h_0/k_0 = a_0/1.
    let (mut h_prev, mut k_prev) = (1i64, 0i64);
    let (mut h, mut k) = (0i64, 1i64); // a_0 = 0 since target ∈ (0,1)
    quotients.push(0);

    let mut x = target;
    // 64 partial quotients exceed anything representable in f64.
    for _ in 0..64 {
        let frac = x - x.floor();
        if frac <= T::zero() {
            break;
        }
        x = frac.recip();
        let a_f = x.floor();
        // Guard against overflow from near-rational targets whose next
        // quotient explodes; any quotient this size is past every cap.
        let a = if a_f > T::from_f64_const(4.0e18) { i64::MAX / 4 } else { a_f.to_f64().unwrap() as i64 };
        let (h_next, overflow_h) = match a.checked_mul(h) {
            Some(v) => (v.checked_add(h_prev), false),
            None => (None, true),
        };
        let k_next = a.checked_mul(k).and_then(|v| v.checked_add(k_prev));
        match (h_next, k_next, overflow_h) {
            (Some(hn), Some(kn), false) => {
                quotients.push(a);
                h_prev = h;
                k_prev = k;
                h = hn;
                k = kn;
            }
            _ => {
                next_denominator = Some(i64::MAX);
                break;
            }
        }
        if k > max_denominator {
            next_denominator = Some(k);
            break;
        }
        if h > 0 && h < k {
            kept.push(RationalAngle::new(h, k).expect("k >= 1"));
        }
    }

    Ok(ContinuedFractionExpansion {
        target,
        partial_quotients: quotients,
        convergents: kept,
        next_denominator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SILVER: f64 = std::f64::consts::SQRT_2 - 1.0;
    const GOLDEN_FREQ: f64 = 0.618_033_988_749_894_9; // (√5 − 1)/2

    #[test]
    fn golden_mean_gives_fibonacci_convergents() {
        let cf = convergents(GOLDEN_FREQ, 13).unwrap();
        let expected: Vec<RationalAngle> = ["1/2", "2/3", "3/5", "5/8", "8/13"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(cf.convergents, expected);
    }

    /// Brute-force oracle: a convergent p/n must beat every fraction with a
    /// smaller denominator.
    #[test]
    fn golden_convergents_are_best_approximations() {
        let cf = convergents(GOLDEN_FREQ, 13).unwrap();
        for c in &cf.convergents {
            let err = (GOLDEN_FREQ - c.numerator() as f64 / c.denominator() as f64).abs();
            for den in 1..c.denominator() {
                for num in 0..=den {
                    let other = (GOLDEN_FREQ - num as f64 / den as f64).abs();
                    assert!(
                        other > err,
                        "{}/{} (err {other:.3e}) not beaten by {c} (err {err:.3e})",
                        num,
                        den
                    );
                }
            }
        }
    }

    #[test]
    fn silver_mean_reaches_2378_over_5741() {
        let cf = convergents(SILVER, 6000).unwrap();
        assert_eq!(cf.best().unwrap(), "2378/5741".parse().unwrap());
        // paper-grade error: below 1.1e-8
        let b = cf.best().unwrap();
        let err = (SILVER - b.frequency::<f64>()).abs();
        assert!(err < 1.1e-8, "error {err:.3e}");
        // the next convergent has denominator 13860
        assert_eq!(cf.next_denominator, Some(13860));
    }

    #[test]
    fn near_rational_target_stops_at_the_rational() {
        let cf = convergents(1.0 / 3.0 + 1e-15, 3).unwrap();
        assert_eq!(cf.best().unwrap(), "1/3".parse().unwrap());
    }

    #[test]
    fn denominators_strictly_increase_and_error_bounds_hold() {
        for &t in &[SILVER, GOLDEN_FREQ, 0.123_456_789, 0.941, 1.0 / std::f64::consts::PI] {
            let cf = convergents(t, 10_000).unwrap();
            let mut prev = 1;
            for (i, c) in cf.convergents.iter().enumerate() {
                assert!(c.denominator() > prev);
                prev = c.denominator();
                let err = (t - c.frequency::<f64>()).abs();
                let nk = c.denominator() as f64;
                assert!(err <= 1.0 / (nk * nk) + 1e-18, "1/n^2 bound at {c}");
                let n_next = cf
                    .convergents
                    .get(i + 1)
                    .map(|c| c.denominator())
                    .or(cf.next_denominator)
                    .unwrap_or(i64::MAX);
                if n_next < i64::MAX {
                    assert!(err < 1.0 / (nk * n_next as f64) + 1e-18, "1/(n_k n_k+1) bound at {c}");
                }
            }
        }
    }

    #[test]
    fn convergents_alternate_sides() {
        let cf = convergents(SILVER, 6000).unwrap();
        let signs: Vec<bool> = cf
            .convergents
            .iter()
            .map(|c| c.frequency::<f64>() > SILVER)
            .collect();
        for w in signs.windows(2) {
            assert_ne!(w[0], w[1]);
        }
    }

    #[test]
    fn rejects_out_of_range_targets() {
        assert!(convergents(0.0f64, 10).is_err());
        assert!(convergents(1.0f64, 10).is_err());
        assert!(convergents(1.5f64, 10).is_err());
    }
}
