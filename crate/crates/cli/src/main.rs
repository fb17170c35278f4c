//! `qcdil`: norms, dilation constants, certificates, butterfly sweeps,
//! enclosures, and obstruction checks from the command line.
//!
//! Exit codes: 0 success/certified, 1 checked-and-failed, 2 usage error,
//! 3 numerical/convergence error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use qcdilation::angles::RationalAngle;
use qcdilation::approx::{
    enclose_constant, enclose_norm, ApproxError, IrrationalTarget, TargetKind,
};
use qcdilation::dilation::{
    build_dilation, lower_bound_margin, obstruction_slack, verify_certificate, weyl_bound_check,
};
use qcdilation::mathieu::{
    butterfly, butterfly_csv, butterfly_json, dilation_constant, host_norm, host_norm_report,
    NormRoute,
};
use qcdilation::rotrep::{commutation_defect, fourier_matrix, standard_pair};
use qcdilation::spectral::operator_norm;
use qcdilation::Real;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "qcdil", version, about = "Dilation constants for q-commuting unitaries")]
struct Cli {
    /// Worker threads for parallel sweeps (default: QCDIL_WORKERS or all cores).
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FileFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print ‖h_θ‖ and c_θ = 4/‖h_θ‖ at a rational angle.
    Norm {
        /// Angle as an exact fraction p/n of a full turn (θ = 2πp/n).
        #[arg(long)]
        angle: RationalAngle,
    },
    /// Sweep all reduced angles with denominator ≤ N; write band data.
    Butterfly {
        #[arg(long)]
        max_denominator: i64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FileFormat::Csv)]
        format: FileFormat,
    },
    /// Build (and optionally verify) the optimal dilation between phases.
    Dilate {
        #[arg(long)]
        from: RationalAngle,
        #[arg(long)]
        to: RationalAngle,
        /// Re-verify the certificate from scratch; exit 1 if it fails.
        #[arg(long)]
        verify: bool,
        /// Write the certificate JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rigorously enclose c_θ at an irrational angle.
    Enclose {
        /// One of: silver, golden, custom:<frequency in (0,1)>.
        #[arg(long)]
        target: TargetSpec,
        #[arg(long)]
        tol: Real,
    },
    /// Certify that no commuting dilation at scale r exists (margin > slack).
    Obstruct {
        #[arg(long)]
        angle: RationalAngle,
        #[arg(long)]
        r: Real,
        #[arg(long, default_value_t = 100.0)]
        lambda: Real,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Run the built-in verification battery.
    Selftest,
}

#[derive(Clone)]
struct TargetSpec(IrrationalTarget<Real>);

impl FromStr for TargetSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "silver" => Ok(TargetSpec(IrrationalTarget::silver())),
            "golden" => Ok(TargetSpec(IrrationalTarget::golden())),
            other => {
                let freq = other
                    .strip_prefix("custom:")
                    .ok_or_else(|| format!("unknown target {other:?}; use silver, golden, or custom:<frequency>"))?;
                let f: Real = freq.parse().map_err(|e| format!("bad frequency {freq:?}: {e}"))?;
                IrrationalTarget::custom(f).map(TargetSpec).map_err(|e| e.to_string())
            }
        }
    }
}

fn metadata(lines: &[(&str, String)]) -> String {
    let mut out = String::new();
    writeln!(out, "# qcdil {}", env!("CARGO_PKG_VERSION")).unwrap();
    for (k, v) in lines {
        writeln!(out, "# {k}: {v}").unwrap();
    }
    out
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();

    let workers = cli
        .parallelism
        .or_else(|| std::env::var("QCDIL_WORKERS").ok().and_then(|s| s.parse().ok()));
    if let Some(k) = workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("warning: could not set worker count: {e}");
        }
    }

    match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Norm { angle } => {
            let t = Instant::now();
            let (norm, route) = host_norm_report::<Real>(&angle).map_err(|e| e.to_string())?;
            let c = 4.0 / norm;
            let route = match route {
                NormRoute::Dense => "dense".to_string(),
                NormRoute::Lanczos { matvecs } => format!("lanczos matvecs={matvecs}"),
            };
            print!(
                "{}",
                metadata(&[
                    ("command", format!("norm angle={angle}")),
                    ("solver_tol", format!("{:e}", qcdilation::mathieu::solver_tolerance::<Real>())),
                    ("solver", route),
                    ("elapsed_ms", format!("{:.3}", t.elapsed().as_secs_f64() * 1e3)),
                ])
            );
            println!("norm {norm:.16e}");
            println!("c {c:.16e}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Butterfly { max_denominator, out, format } => {
            if max_denominator < 1 {
                return Err("max denominator must be at least 1".into());
            }
            let t = Instant::now();
            let records = butterfly::<Real>(max_denominator).map_err(|e| e.to_string())?;
            let body = match format {
                FileFormat::Csv => {
                    let mut s = metadata(&[(
                        "command",
                        format!("butterfly max_denominator={max_denominator}"),
                    )]);
                    s.push_str(&butterfly_csv(&records));
                    s
                }
                FileFormat::Json => butterfly_json(&records),
            };
            std::fs::write(&out, body).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            let max_c = records.iter().map(|r| r.constant).fold(f64::NEG_INFINITY, f64::max);
            let min_norm = records.iter().map(|r| r.norm).fold(f64::INFINITY, f64::min);
            print!(
                "{}",
                metadata(&[
                    ("command", format!("butterfly max_denominator={max_denominator}")),
                    ("rows", records.len().to_string()),
                    ("max_c", format!("{max_c:.16e}")),
                    ("min_norm", format!("{min_norm:.16e}")),
                    ("out", out.display().to_string()),
                    ("elapsed_ms", format!("{:.1}", t.elapsed().as_secs_f64() * 1e3)),
                ])
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Dilate { from, to, verify, out } => {
            let t = Instant::now();
            let one = qcdilation::num_complex::Complex::new(1.0, 0.0);
            let pair = standard_pair::<Real>(&from, one, one).map_err(|e| e.to_string())?;
            let cert = build_dilation(&pair, &to).map_err(|e| e.to_string())?;
            print!(
                "{}",
                metadata(&[
                    ("command", format!("dilate from={from} to={to}")),
                    ("target_dim", cert.target.dim().to_string()),
                    ("elapsed_ms", format!("{:.3}", t.elapsed().as_secs_f64() * 1e3)),
                ])
            );
            println!("scale {:.16e}", cert.scale);
            println!(
                "residuals compression_u={:.3e} compression_v={:.3e} commutation={:.3e} isometry={:.3e} norm_u={:.3e} norm_v={:.3e}",
                cert.residuals.compression_u,
                cert.residuals.compression_v,
                cert.residuals.commutation,
                cert.residuals.isometry,
                cert.residuals.norm_u,
                cert.residuals.norm_v,
            );
            if let Some(path) = out {
                let json = serde_json::to_string(&cert).map_err(|e| e.to_string())?;
                std::fs::write(&path, json)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                println!("certificate {}", path.display());
            }
            if verify {
                let report = verify_certificate(&cert).map_err(|e| e.to_string())?;
                println!(
                    "verify {} (tolerance {:.3e}, max residual {:.3e}, scale defect {:.3e})",
                    if report.pass { "pass" } else { "FAIL" },
                    report.tolerance,
                    report.residuals.max(),
                    report.scale_defect,
                );
                for f in &report.failures {
                    println!("verify-failure {f}");
                }
                if !report.pass {
                    return Ok(ExitCode::from(EXIT_CHECK_FAILED));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Enclose { target, tol } => {
            let t = Instant::now();
            let enclosure = match enclose_constant(&target.0, tol) {
                Ok(e) => e,
                Err(ApproxError::Capacity { cap, achievable }) => {
                    return Err(format!(
                        "denominator cap {cap} reached; achievable radius {achievable:e}"
                    ));
                }
                Err(e) => return Err(e.to_string()),
            };
            let norm_enclosure = enclose_norm(&target.0, tol.max(1e-11)).map_err(|e| e.to_string())?;
            print!(
                "{}",
                metadata(&[
                    ("command", format!("enclose target={} tol={tol:e}", target.0.description)),
                    ("kind", format!("{:?}", target.0.kind).to_lowercase()),
                    ("solver_budget", format!("{:e}", qcdilation::approx::SOLVER_BUDGET)),
                    ("convergent", enclosure.convergent.to_string()),
                    ("norm_center", format!("{:.16e}", norm_enclosure.estimate.center)),
                    ("elapsed_ms", format!("{:.1}", t.elapsed().as_secs_f64() * 1e3)),
                ])
            );
            println!("{}", serde_json::to_string(&enclosure).map_err(|e| e.to_string())?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Obstruct { angle, r, lambda, grid } => {
            if r <= 0.0 || lambda <= 0.0 || grid < 8 {
                return Err("need r > 0, lambda > 0, grid >= 8".into());
            }
            let t = Instant::now();
            let (lhs, rhs, margin) =
                lower_bound_margin::<Real>(&angle, r, lambda, grid).map_err(|e| e.to_string())?;
            let slack = obstruction_slack(r, lambda, grid);
            print!(
                "{}",
                metadata(&[
                    ("command", format!("obstruct angle={angle} r={r} lambda={lambda} grid={grid}")),
                    ("elapsed_ms", format!("{:.1}", t.elapsed().as_secs_f64() * 1e3)),
                ])
            );
            println!("lhs {lhs:.16e}");
            println!("rhs {rhs:.16e}");
            println!("margin {margin:.16e}");
            println!("slack {slack:.16e}");
            if margin > slack {
                println!("obstructed: no commuting dilation at scale {r:.6} exists");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("not obstructed at this grid resolution");
                Ok(ExitCode::from(EXIT_CHECK_FAILED))
            }
        }
        Command::Selftest => Ok(selftest()),
    }
}

fn selftest() -> ExitCode {
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("{} {name}: {detail}", if ok { "[ok]  " } else { "[FAIL]" });
        if !ok {
            failures += 1;
        }
    };
    let one = qcdilation::num_complex::Complex::new(1.0, 0.0);
    let sqrt3 = 3f64.sqrt();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;

    let third: RationalAngle = "1/3".parse().unwrap();
    let two_fifths: RationalAngle = "2/5".parse().unwrap();
    let half: RationalAngle = "1/2".parse().unwrap();
    let zero = RationalAngle::ZERO;

    match host_norm::<Real>(&third) {
        Ok(n) => check("norm at 1/3", (n - (1.0 + sqrt3)).abs() < 1e-10, format!("{n:.12}")),
        Err(e) => check("norm at 1/3", false, e.to_string()),
    }
    match host_norm::<Real>(&two_fifths) {
        Ok(n) => check("norm at 2/5", (n - (golden + 1.0)).abs() < 1e-10, format!("{n:.12}")),
        Err(e) => check("norm at 2/5", false, e.to_string()),
    }
    match dilation_constant::<Real>(&half) {
        Ok(c) => check("constant at 1/2", (c - 2f64.sqrt()).abs() < 1e-10, format!("{c:.12}")),
        Err(e) => check("constant at 1/2", false, e.to_string()),
    }

    {
        let a: RationalAngle = "3/8".parse().unwrap();
        let f = fourier_matrix::<Real>(&a);
        let x = qcdilation::rotrep::clock_matrix::<Real>(&a);
        let y = qcdilation::rotrep::shift_matrix::<Real>(8);
        let lhs = f.adjoint().mul(&x).unwrap().mul(&f).unwrap();
        let d = operator_norm(&lhs.sub(&y.adjoint()).unwrap());
        check("Fourier conjugation at 3/8", d < 1e-13, format!("defect {d:.3e}"));
    }

    match standard_pair::<Real>(&third, one, one) {
        Ok(pair) => {
            let d = commutation_defect(&pair).unwrap_or(f64::NAN);
            check("standard pair relation at 1/3", d < 1e-13, format!("defect {d:.3e}"));
            match build_dilation(&pair, &zero) {
                Ok(cert) => {
                    let scale_ok = (cert.scale - (2.0 * sqrt3 - 2.0)).abs() < 1e-10;
                    check("dilation scale 1/3 → 0", scale_ok, format!("{:.12}", cert.scale));
                    match verify_certificate(&cert) {
                        Ok(rep) => check(
                            "certificate verification",
                            rep.pass,
                            format!("max residual {:.3e}", rep.residuals.max()),
                        ),
                        Err(e) => check("certificate verification", false, e.to_string()),
                    }
                }
                Err(e) => check("dilation scale 1/3 → 0", false, e.to_string()),
            }
        }
        Err(e) => check("standard pair relation at 1/3", false, e.to_string()),
    }

    match weyl_bound_check::<Real>(&third) {
        Ok((c, b)) => check("scale below e^{|θ|/4}", c <= b, format!("{c:.6} ≤ {b:.6}")),
        Err(e) => check("scale below e^{|θ|/4}", false, e.to_string()),
    }

    match lower_bound_margin::<Real>(&third, 1.40, 100.0, 256) {
        Ok((_, _, margin)) => {
            let slack = obstruction_slack(1.40, 100.0, 256);
            check("obstruction at 1/3, r=1.40", margin > slack, format!("margin {margin:.4e}"));
        }
        Err(e) => check("obstruction at 1/3, r=1.40", false, e.to_string()),
    }

    match enclose_constant(&IrrationalTarget::<Real>::golden(), 1e-4) {
        Ok(enc) => {
            let inside = enc.estimate.lower() > 1.0 && enc.estimate.upper() < 1.558;
            check(
                "golden-mean enclosure",
                inside && enc.estimate.radius <= 1e-4,
                format!("{:.8} ± {:.2e}", enc.estimate.center, enc.estimate.radius),
            );
        }
        Err(e) => check("golden-mean enclosure", false, e.to_string()),
    }

    match butterfly::<Real>(6) {
        Ok(records) => {
            let all_above = records.iter().all(|r| r.norm >= 2.56769);
            let symmetric = records.iter().all(|r| {
                records
                    .iter()
                    .find(|s| s.angle == r.angle.complement() && s.band == r.band)
                    .map(|s| (s.constant - r.constant).abs() < 1e-10)
                    .unwrap_or(false)
            });
            check(
                "butterfly n ≤ 6 sanity",
                all_above && symmetric,
                format!("{} rows", records.len()),
            );
        }
        Err(e) => check("butterfly n ≤ 6 sanity", false, e.to_string()),
    }

    if IrrationalTarget::<Real>::custom(0.0).is_err() {
        check("custom target validation", true, "rejects 0.0".into());
    } else {
        check("custom target validation", false, "accepted 0.0".into());
    }

    // the target-kind enum round-trips through serde
    let kind_json = serde_json::to_string(&TargetKind::Silver).unwrap_or_default();
    check("target kind serialization", kind_json == "\"silver\"", kind_json);

    println!();
    if failures == 0 {
        println!("selftest: all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("selftest: {failures} check(s) FAILED");
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}
