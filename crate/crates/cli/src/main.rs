//! `kahler-spin`: verification suites and spectrum reports.
//!
//! Exit status: 0 when every check passes, 1 on a verification failure,
//! 2 on usage or input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kahler_spin::kahler_point::{
    even_ric_threshold, limiting_eigenvalue, ric_threshold, vanishing_check, Direction, RicciProfile, Verdict,
};
use kahler_spin::sphere::SphereModel;
use kahler_spin::torus::TorusModel;
use kahler_spin::verify::{verify_algebra, AlgebraReport};
use kahler_spin::Error;

const SEED: u64 = 0x5eed;
const DEFAULT_M_RANGE: std::ops::RangeInclusive<usize> = 1..=6;
const TORUS_ORACLE_TOL: f64 = 1e-9;
const SPHERE_ORACLE_TOL: f64 = 1e-3;
const PROFILE_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "kahler-spin", version, about = "Spin Kähler algebra checks and Dirac spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the exact spin-module and pointwise Ricci identities.
    VerifyAlgebra {
        /// Complex dimension; all of 1..=6 when omitted.
        #[arg(long)]
        m: Option<usize>,
        /// Override the pass threshold on every residual.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Lowest eigenvalues of D² on a model geometry.
    Spectrum {
        #[arg(value_enum)]
        geometry: Geometry,
        /// Complex dimension of the torus.
        #[arg(long)]
        m: Option<usize>,
        /// Torus Fourier cutoff, |ξ|∞ ≤ N.
        #[arg(long = "N")]
        n: Option<usize>,
        /// Sphere resolution.
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Restrict to S_r-valued fields.
        #[arg(long)]
        r: Option<usize>,
        /// Allowed distance to the analytic oracle.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Evaluate the partial-sum vanishing condition on sampled Ricci profiles.
    Vanishing {
        /// JSON list `[{"R": number, "rho": [numbers]}]`.
        #[arg(long)]
        profiles: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = DirectionArg::Holomorphic)]
        direction: DirectionArg,
        /// Tolerance for recognizing the condition (Ric) profile.
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Geometry {
    Torus,
    Sphere,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Holomorphic,
    Antiholomorphic,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Holomorphic => Direction::Holomorphic,
            DirectionArg::Antiholomorphic => Direction::Antiholomorphic,
        }
    }
}

enum Failure {
    Usage(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Output {
    text: String,
    passed: bool,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn render(format: Format, tsv: String, value: Value) -> String {
    match format {
        Format::Tsv => tsv,
        Format::Json => serde_json::to_string_pretty(&value).expect("report serializes") + "\n",
    }
}

fn check_tol(tol: Option<f64>) -> Result<(), Failure> {
    match tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(usage(format!("--tol must be positive, got {t}"))),
        _ => Ok(()),
    }
}

fn apply_tol(mut rep: AlgebraReport, tol: Option<f64>) -> AlgebraReport {
    if let Some(t) = tol {
        rep.checks.iter_mut().for_each(|c| c.tolerance = t);
    }
    rep
}

fn cmd_verify_algebra(m: Option<usize>, tol: Option<f64>, format: Format) -> Result<Output, Failure> {
    check_tol(tol)?;
    let dims: Vec<usize> = match m {
        Some(0) => return Err(usage("--m must be at least 1")),
        Some(m) => vec![m],
        None => DEFAULT_M_RANGE.collect(),
    };
    let reports = dims
        .into_iter()
        .map(|m| verify_algebra::<f64>(m, SEED).map(|r| apply_tol(r, tol)))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(AlgebraReport::passed);
    let tsv = reports.iter().map(AlgebraReport::to_tsv).collect::<Vec<_>>().join("\n");
    let value = json!({
        "status": if passed { "pass" } else { "fail" },
        "reports": reports.iter().map(AlgebraReport::to_json).collect::<Vec<_>>(),
    });
    Ok(Output { text: render(format, tsv, value), passed })
}

#[allow(clippy::too_many_arguments)]
fn cmd_spectrum(
    geometry: Geometry,
    m: Option<usize>,
    n: Option<usize>,
    l: Option<usize>,
    k: usize,
    r: Option<usize>,
    tol: Option<f64>,
    format: Format,
) -> Result<Output, Failure> {
    check_tol(tol)?;
    if k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    match geometry {
        Geometry::Torus => {
            if l.is_some() {
                return Err(usage("--L applies to the sphere; the torus takes --m and --N"));
            }
            let m = m.ok_or_else(|| usage("spectrum torus needs --m"))?;
            let n = n.ok_or_else(|| usage("spectrum torus needs --N"))?;
            if m == 0 {
                return Err(usage("--m must be at least 1"));
            }
            let tol = tol.unwrap_or(TORUS_ORACLE_TOL);
            let model = TorusModel::<f64>::new(m, n)?;
            let rep = model.spectrum_on(r, k)?;
            let err = rep.max_oracle_error().unwrap_or(f64::INFINITY);
            let passed = rep.passed() && err <= tol;
            let summary = format!("# oracle max_abs_error={err:.3e} tol={tol:.1e} status={}\n", status(passed));
            let value = json!({ "spectrum": rep.to_json(), "oracle_max_abs_error": err, "oracle_tol": tol, "status": status(passed) });
            Ok(Output { text: render(format, rep.to_tsv() + &summary, value), passed })
        }
        Geometry::Sphere => {
            if m.is_some_and(|m| m != 1) || n.is_some() {
                return Err(usage("the sphere has m = 1 and takes --L, not --N"));
            }
            let l = l.ok_or_else(|| usage("spectrum sphere needs --L"))?;
            let tol = tol.unwrap_or(SPHERE_ORACLE_TOL);
            let model = SphereModel::<f64>::new(l).map_err(|e| match e {
                Error::Domain(msg) => usage(format!("{msg}; pass --L 4 or larger")),
                other => other.into(),
            })?;
            let rep = match r {
                Some(r) => model.spectrum_on(r, k)?,
                None => model.spectrum(k)?,
            };
            let err = rep.max_oracle_error().unwrap_or(f64::INFINITY);
            let bound = limiting_eigenvalue(1, 2.0)?;
            let lambda1 = rep.eigenvalues[0];
            let gap = (lambda1 - bound).abs();
            let passed = rep.passed() && err <= tol && (r.is_some() || gap <= tol);
            let mut summary = format!(
                "# oracle max_abs_error={err:.3e} tol={tol:.1e} model_tolerance={:.3e}\n",
                model.tolerance()
            );
            summary.push_str(&format!(
                "# limiting_bound lambda1_squared={lambda1:.12e} bound={bound:.12e} abs_diff={gap:.3e}\n"
            ));
            summary.push_str(&format!("# status={}\n", status(passed)));
            let value = json!({
                "spectrum": rep.to_json(),
                "oracle_max_abs_error": err,
                "oracle_tol": tol,
                "model_tolerance": model.tolerance(),
                "limiting_bound": { "lambda1_squared": lambda1, "bound": bound, "abs_diff": gap },
                "status": status(passed),
            });
            Ok(Output { text: render(format, rep.to_tsv() + &summary, value), passed })
        }
    }
}

fn status(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

fn cmd_vanishing(
    path: &PathBuf,
    r: usize,
    direction: Direction,
    tol: Option<f64>,
    format: Format,
) -> Result<Output, Failure> {
    check_tol(tol)?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let profiles = RicciProfile::<f64>::parse_list(&text)?;
    let verdict = vanishing_check(&profiles, r, direction)?;
    let m = profiles[0].m();
    let ric_tol = tol.unwrap_or(PROFILE_TOL);
    let all_ric = m >= 2 && profiles.iter().all(|p| p.is_condition_ric(ric_tol) && p.scalar_curvature() > 0.0);
    let dir_name = match direction {
        Direction::Holomorphic => "holomorphic",
        Direction::Antiholomorphic => "antiholomorphic",
    };

    let mut tsv = format!("# vanishing m={m} r={r} direction={dir_name} points={}\n", profiles.len());
    tsv.push_str("point\tR\tpartial_sum\tquarter_R\tcondition_met\n");
    for (i, p) in profiles.iter().enumerate() {
        tsv.push_str(&format!(
            "{i}\t{:.12e}\t{:.12e}\t{:.12e}\t{}\n",
            p.scalar_curvature(),
            verdict.partial_sums[i],
            verdict.quarter_r[i],
            verdict.condition_met[i]
        ));
    }
    let verdict_name = match verdict.verdict {
        Verdict::Vanishes => "vanishes",
        Verdict::Inconclusive => "inconclusive",
    };
    tsv.push_str(&format!("# verdict={verdict_name} non_ricci_flat={}\n", verdict.non_ricci_flat));

    let mut passed = true;
    let mut thresholds = Vec::new();
    if all_ric {
        let odd = ric_threshold(m, direction);
        let predicted = odd.contains(&r);
        let agrees = predicted == (verdict.verdict == Verdict::Vanishes);
        passed &= agrees;
        tsv.push_str(&format!(
            "# ric_threshold {dir_name} r_range={}..={} predicted_vanishing={predicted} agrees={agrees}\n",
            odd.start(),
            odd.end()
        ));
        thresholds.push(json!({ "kind": "ric_threshold", "range": [odd.start(), odd.end()], "predicted_vanishing": predicted, "agrees": agrees }));
        if direction == Direction::Holomorphic {
            if let Ok(even) = even_ric_threshold(m) {
                let predicted = even.contains(&r);
                let agrees = predicted == (verdict.verdict == Verdict::Vanishes);
                passed &= agrees;
                tsv.push_str(&format!(
                    "# even_ric_threshold holomorphic r_range={}..={} predicted_vanishing={predicted} agrees={agrees}\n",
                    even.start(),
                    even.end()
                ));
                thresholds.push(json!({ "kind": "even_ric_threshold", "range": [even.start(), even.end()], "predicted_vanishing": predicted, "agrees": agrees }));
            }
        }
    }
    let value = json!({
        "m": m,
        "verdict": verdict,
        "condition_ric_profile": all_ric,
        "thresholds": thresholds,
        "status": status(passed),
    });
    Ok(Output { text: render(format, tsv, value), passed })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::VerifyAlgebra { m, tol } => cmd_verify_algebra(m, tol, cli.format),
        Command::Spectrum { geometry, m, n, l, k, r, tol } => cmd_spectrum(geometry, m, n, l, k, r, tol, cli.format),
        Command::Vanishing { profiles, r, direction, tol } => {
            cmd_vanishing(&profiles, r, direction.into(), tol, cli.format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.out.clone();
    match run(cli) {
        Ok(out) => {
            if let Some(path) = out_path {
                if let Err(e) = fs::write(&path, &out.text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nRun `kahler-spin --help` for usage.");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
