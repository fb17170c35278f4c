//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS line with the measured numbers.
//!
//! Run with `cargo test -p qcdilation --test acceptance -- --nocapture`.

use std::time::Instant;

use qcdilation::angles::{angle_distance, farey_sequence, RationalAngle};
use qcdilation::approx::{enclose_constant, IrrationalTarget};
use qcdilation::dilation::{build_dilation, lower_bound_margin, verify_certificate, weyl_bound_check};
use qcdilation::mathieu::{butterfly, dilation_constant, hamiltonian, host_norm, spectrum};
use qcdilation::num_complex::Complex;
use qcdilation::rotrep::{clock_matrix, fourier_matrix, shift_matrix, standard_pair, ComplexMatrix};
use qcdilation::scalar::SplitMix64;
use qcdilation::spectral::{dense_spectrum, top_eigenpair, PeriodicJacobiMatrix};
use qcdilation::Real;

const GOLDEN: Real = 1.618_033_988_749_894_9;

fn one() -> Complex<Real> {
    Complex::new(1.0, 0.0)
}

fn angle(p: i64, n: i64) -> RationalAngle {
    RationalAngle::new(p, n).unwrap()
}

/// Criterion 1 — the closed-form worked examples, to 1e-10, in milliseconds.
#[test]
fn criterion_1_exact_examples() {
    let t = Instant::now();

    let norm_third = host_norm::<Real>(&angle(1, 3)).unwrap();
    let c_third = dilation_constant::<Real>(&angle(1, 3)).unwrap();
    assert!((norm_third - (1.0 + 3f64.sqrt())).abs() < 1e-10, "‖h‖ at 1/3: {norm_third}");
    assert!((c_third - (2.0 * 3f64.sqrt() - 2.0)).abs() < 1e-10, "c at 1/3: {c_third}");

    let norm_fifths = host_norm::<Real>(&angle(2, 5)).unwrap();
    let c_fifths = dilation_constant::<Real>(&angle(2, 5)).unwrap();
    assert!((norm_fifths - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10, "‖h‖ at 2/5: {norm_fifths}");
    assert!((c_fifths - 4.0 / (GOLDEN + 1.0)).abs() < 1e-10, "c at 2/5: {c_fifths}");

    // top eigenvector parallel to (2γ, 1, 1, 1, 1)
    let h = hamiltonian::<Real>(&angle(2, 5), one(), one()).unwrap();
    let jac = h.as_periodic_jacobi().unwrap();
    let pair = top_eigenpair(&jac, 1e-12).unwrap();
    let mut reference = [2.0 * GOLDEN, 1.0, 1.0, 1.0, 1.0];
    let nrm: Real = reference.iter().map(|x| x * x).sum::<Real>().sqrt();
    reference.iter_mut().for_each(|x| *x /= nrm);
    let sign = pair.eigenvector[0].signum();
    for (got, want) in pair.eigenvector.iter().zip(&reference) {
        assert!((got * sign - want).abs() < 1e-10, "eigenvector entry {got} vs {want}");
    }

    let elapsed = t.elapsed();
    assert!(elapsed.as_millis() < 1000, "took {elapsed:?}, expected milliseconds");
    println!(
        "[PASS] criterion 1: ‖h‖(1/3) = {norm_third:.12}, c(1/3) = {c_third:.12}, \
         ‖h‖(2/5) = {norm_fifths:.12}, c(2/5) = {c_fifths:.12}, eigenvector ∝ (2γ,1,1,1,1) \
         ({:.1} ms)",
        elapsed.as_secs_f64() * 1e3
    );
}

/// Criterion 2 — silver-mean enclosure at 1e-7 via convergent 2378/5741,
/// under 5 seconds.
#[test]
fn criterion_2_silver_mean() {
    let t = Instant::now();
    let enc = enclose_constant(&IrrationalTarget::<Real>::silver(), 1e-7).unwrap();
    let elapsed = t.elapsed();

    assert_eq!(enc.convergent, angle(2378, 5741), "convergent");
    assert!(enc.estimate.radius <= 1e-7, "radius {}", enc.estimate.radius);
    let reported = 1.543_777_2;
    assert!(
        (enc.estimate.center - reported).abs() <= 1e-7 + enc.estimate.radius,
        "center {} vs reported {reported}",
        enc.estimate.center
    );
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, budget 5 s");
    println!(
        "[PASS] criterion 2: c(silver) = {:.9} ± {:.2e} via {} ({:.2} s)",
        enc.estimate.center,
        enc.estimate.radius,
        enc.convergent,
        elapsed.as_secs_f64()
    );
}

/// Criterion 3 — butterfly sweep at n ≤ 60 with parallelism 4 in under 60 s;
/// max c ≥ 1.543 and every norm ≥ 2.56769.
#[test]
fn criterion_3_butterfly_sweep() {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let t = Instant::now();
    let records = pool.install(|| butterfly::<Real>(60)).unwrap();
    let elapsed = t.elapsed();

    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60 s");
    let max_c = records.iter().map(|r| r.constant).fold(Real::NEG_INFINITY, Real::max);
    let min_norm = records.iter().map(|r| r.norm).fold(Real::INFINITY, Real::min);
    assert!(max_c >= 1.543, "max c {max_c}");
    assert!(min_norm >= 2.56769, "min norm {min_norm}");
    println!(
        "[PASS] criterion 3: {} band rows, max c = {max_c:.7} ≥ 1.543, min ‖h‖ = {min_norm:.7} ≥ 2.56769 ({:.2} s, 4 workers)",
        records.len(),
        elapsed.as_secs_f64()
    );
}

/// Criterion 4 — certificate suite over the n ≤ 12 Farey set (residuals
/// < 1e-9, scale = 4/‖h‖ within 1e-9) and the matching obstruction margins
/// at r = c − 0.01, λ = 100, grid 256: optimality bracketed from both sides.
#[test]
fn criterion_4_certificates_and_obstructions() {
    let t = Instant::now();
    let angles = farey_sequence(12);
    assert_eq!(angles.len(), 46);

    let mut worst_residual: Real = 0.0;
    let mut worst_scale_defect: Real = 0.0;
    let mut worst_margin: Real = Real::INFINITY;

    for a in &angles {
        let pair = standard_pair::<Real>(a, one(), one()).unwrap();
        let cert = build_dilation(&pair, &RationalAngle::ZERO).unwrap();
        let report = verify_certificate(&cert).unwrap();
        let max_res = report.residuals.max();
        worst_residual = worst_residual.max(max_res);
        assert!(max_res < 1e-9, "residual {max_res:.3e} at {a}");

        let c = dilation_constant::<Real>(a).unwrap();
        let scale_defect = (cert.scale - c).abs();
        worst_scale_defect = worst_scale_defect.max(scale_defect);
        assert!(scale_defect < 1e-9, "scale defect {scale_defect:.3e} at {a}");

        let r = c - 0.01;
        let (_, _, margin) = lower_bound_margin::<Real>(a, r, 100.0, 256).unwrap();
        worst_margin = worst_margin.min(margin);
        assert!(margin > 0.0, "margin {margin:.3e} at {a} with r = {r}");
    }

    println!(
        "[PASS] criterion 4: 46 certificates verified (max residual {worst_residual:.2e}, \
         max scale defect {worst_scale_defect:.2e}); all obstruction margins positive \
         (min {worst_margin:.3e}) ({:.1} s)",
        t.elapsed().as_secs_f64()
    );
}

/// Criterion 5 — the inequality web over the n ≤ 40 Farey set:
/// (a) c_γ ≤ e^{|γ|/4}; (b) norm differences ≤ |Δθ|; (c) constant
/// differences ≤ 0.39|Δθ|; (d) Hausdorff spectral distance within the
/// ½-Hölder envelope plus enclosure slack; (e) conjugation symmetry of c.
#[test]
fn criterion_5_inequality_web() {
    use rayon::prelude::*;

    let t = Instant::now();
    let solver_tol = qcdilation::mathieu::solver_tolerance::<Real>();
    let mut angles = farey_sequence(40);
    angles.sort_by(|x, y| {
        (x.numerator() * y.denominator()).cmp(&(y.numerator() * x.denominator()))
    });

    let norms: Vec<Real> =
        angles.par_iter().map(|a| host_norm::<Real>(a).unwrap()).collect();

    // (a) Weyl-scale bound
    for (a, &n) in angles.iter().zip(&norms) {
        let (c, bound) = weyl_bound_check::<Real>(a).unwrap();
        assert!((c - 4.0 / n).abs() < 1e-12);
        assert!(c <= bound + 1e-12, "(a) c {c} > bound {bound} at {a}");
    }

    // (b), (c) over adjacent Farey pairs
    for (pair, ns) in angles.windows(2).zip(norms.windows(2)) {
        let dtheta: Real = angle_distance(&pair[0], &pair[1]);
        let dnorm = (ns[0] - ns[1]).abs();
        assert!(
            dnorm <= dtheta + 2.0 * solver_tol,
            "(b) |Δ‖h‖| = {dnorm} > {dtheta} between {} and {}",
            pair[0],
            pair[1]
        );
        let dc = (4.0 / ns[0] - 4.0 / ns[1]).abs();
        assert!(
            dc <= 0.39 * dtheta + 2.0 * solver_tol,
            "(c) |Δc| = {dc} > 0.39·{dtheta} between {} and {}",
            pair[0],
            pair[1]
        );
    }

    // (d) spectra on a 16-point phase grid; slack 2·(4·2π/16)
    let grid = 16usize;
    let radius = 4.0 * std::f64::consts::TAU / grid as Real;
    let spectra: Vec<_> =
        angles.par_iter().map(|a| spectrum::<Real>(a, grid).unwrap()).collect();
    for i in 0..angles.len() - 1 {
        let dtheta: Real = angle_distance(&angles[i], &angles[i + 1]);
        let bound = 4.0 * 2f64.sqrt() * dtheta.sqrt();
        let d = qcdilation::mathieu::hausdorff_distance(&spectra[i].points, &spectra[i + 1].points);
        assert!(
            d <= bound + 2.0 * radius,
            "(d) Hausdorff {d} > {bound} + {:.3} between {} and {}",
            2.0 * radius,
            angles[i],
            angles[i + 1]
        );
    }

    // (e) conjugation symmetry
    for (a, &n) in angles.iter().zip(&norms) {
        let mirror = a.complement();
        let idx = angles.iter().position(|b| *b == mirror).unwrap();
        assert!(
            (4.0 / n - 4.0 / norms[idx]).abs() < 1e-10,
            "(e) asymmetry at {a} vs {mirror}"
        );
    }

    println!(
        "[PASS] criterion 5: inequality web over {} angles — Weyl bound, Lipschitz 1 and 0.39, \
         ½-Hölder envelope (grid {grid}), conjugation symmetry: zero violations ({:.1} s)",
        angles.len(),
        t.elapsed().as_secs_f64()
    );
}

/// Criterion 6 — solver oracle equivalence on 200 random periodic Jacobi
/// instances (n ∈ [3, 512], |Lanczos − dense| ≤ 1e-9) and the Fourier
/// conjugation identities for every n ≤ 512 at 1e-13.
#[test]
fn criterion_6_solver_oracles() {
    use rayon::prelude::*;

    let t = Instant::now();

    // 200 deterministic random instances
    let seeds: Vec<u64> = (0..200).collect();
    let worst: Real = seeds
        .par_iter()
        .map(|&s| {
            let mut rng = SplitMix64::new(0xace1_u64.wrapping_add(s));
            let n = 3 + (rng.next_u64() % 510) as usize;
            let diag: Vec<Real> = (0..n).map(|_| rng.next_centered::<Real>() * 4.0).collect();
            let h = PeriodicJacobiMatrix::new(diag);
            let iterative = top_eigenpair(&h, 1e-11).unwrap().eigenvalue;
            let dense = *dense_spectrum(&h.to_dense()).unwrap().last().unwrap();
            (iterative - dense).abs()
        })
        .reduce(|| 0.0, Real::max);
    assert!(worst <= 1e-9, "worst |Lanczos − dense| = {worst:.3e}");

    // F*XF = Y* and F*YF = X for all n ≤ 512, via the unitary-invariant
    // forms ‖XF − FY*‖ and ‖YF − FX‖ (O(n²) to build) measured by
    // singular-value power iteration
    let worst_fourier: Real = (1i64..=512)
        .into_par_iter()
        .map(|n| {
            let a = RationalAngle::new(1, n).unwrap();
            let f: ComplexMatrix<Real> = fourier_matrix(&a);
            let x: ComplexMatrix<Real> = clock_matrix(&a);
            let y: ComplexMatrix<Real> = shift_matrix(n as usize);
            let xf = x.mul(&f).unwrap();
            let fys = f.mul(&y.adjoint()).unwrap();
            let d1 = xf.sub(&fys).unwrap();
            let yf = y.mul(&f).unwrap();
            let fx = f.mul(&x).unwrap();
            let d2 = yf.sub(&fx).unwrap();
            power_norm(&d1).max(power_norm(&d2))
        })
        .reduce(|| 0.0, Real::max);
    assert!(worst_fourier < 1e-13, "worst Fourier defect = {worst_fourier:.3e}");

    println!(
        "[PASS] criterion 6: 200 Lanczos/dense instances agree to {worst:.2e} (≤ 1e-9); \
         Fourier conjugation defects ≤ {worst_fourier:.2e} (< 1e-13) for all n ≤ 512 ({:.1} s)",
        t.elapsed().as_secs_f64()
    );
}

/// Criterion 7 — what the suite does *not* claim: irrational values are
/// reported only as enclosures with positive radius, and the conjectured
/// global maximizer is supported by evidence, not asserted. The checks here
/// are consistency checks on that evidence.
#[test]
fn criterion_7_evidence_only_scope() {
    let enc = enclose_constant(&IrrationalTarget::<Real>::silver(), 1e-7).unwrap();
    // an enclosure, never an exact real: the radius is strictly positive
    assert!(enc.estimate.radius > 0.0);

    // evidence consistent with "no rational maximizer": every rational c at
    // n ≤ 60 sits strictly below the silver enclosure's upper end
    let records = butterfly::<Real>(60).unwrap();
    let max_rational_c = records.iter().map(|r| r.constant).fold(Real::NEG_INFINITY, Real::max);
    assert!(
        max_rational_c < enc.estimate.upper(),
        "rational c {max_rational_c} exceeds silver enclosure upper {}",
        enc.estimate.upper()
    );

    println!(
        "[PASS] criterion 7: irrational values reported as enclosures only \
         (silver radius {:.2e} > 0); rational max c = {max_rational_c:.7} < silver upper {:.7}; \
         the global maximizer remains a conjecture, supported but not claimed",
        enc.estimate.radius,
        enc.estimate.upper()
    );
}

/// Deterministic power iteration for the operator norm of a small defect
/// matrix (test-local; independent of the library's norm routines).
fn power_norm(d: &ComplexMatrix<Real>) -> Real {
    let n = d.dim();
    let mut rng = SplitMix64::new(0xfee1 ^ n as u64);
    let mut best: Real = 0.0;
    for _ in 0..2 {
        let mut x: Vec<Complex<Real>> =
            (0..n).map(|_| Complex::new(rng.next_centered(), rng.next_centered())).collect();
        let nx = x.iter().map(|z| z.norm_sqr()).sum::<Real>().sqrt();
        x.iter_mut().for_each(|z| *z = z.unscale(nx));
        let mut y = vec![Complex::new(0.0, 0.0); n];
        let mut z = vec![Complex::new(0.0, 0.0); n];
        let mut sigma: Real = 0.0;
        for _ in 0..80 {
            d.matvec(&x, &mut y);
            sigma = y.iter().map(|v| v.norm_sqr()).sum::<Real>().sqrt();
            d.matvec_adjoint(&y, &mut z);
            let nz = z.iter().map(|v| v.norm_sqr()).sum::<Real>().sqrt();
            if nz == 0.0 {
                break;
            }
            for (xi, zi) in x.iter_mut().zip(&z) {
                *xi = zi.unscale(nz);
            }
        }
        best = best.max(sigma);
    }
    best
}
