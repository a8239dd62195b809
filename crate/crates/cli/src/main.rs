//! `ncspin`: runs the axiom suites on the catalog spaces and writes reports.
//!
//! Exit status is 0 when every clause passes, 1 when some clause fails (the
//! report is still written) and 2 on malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncspin::algebra::{verify_presentation, PresentationJson};
use ncspin::catalog::{
    build_named, build_r4, build_s3_from, build_t2_from, dtilde_apply, dtilde_expanded, dtilde_rotating_frame,
    nu_tilde_gamma, s3_dirac_closed_form, t2_dirac_closed_form, GammaChoice, SpaceBundle, ThetaMode,
};
use ncspin::report::{Clause, Report};
use ncspin::spectrum::{spectrum_scan, SpectrumReport};
use ncspin::spin::matrix_action;
use ncspin::{AlgebraElement, BasisWord, Error, Presentation, Scalar, TensorElement};

const SPECTRUM_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "ncspin", version, about = "Exact noncommutative spin geometry on the R4 > S3 > T2 chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the metric and spinorial axiom suites.
    Verify(Target),
    /// Certify a hypersurface and compare the induced structures with their closed forms.
    Induce {
        #[command(flatten)]
        target: Target,
        /// Include every induced basis value in the report.
        #[arg(long)]
        emit_structures: bool,
    },
    /// Check the Dirac operator on basis and linear spinors.
    Dirac { space: String },
    /// Torus Dirac spectrum by momentum sectors.
    Spectrum {
        space: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
        mmax: i64,
    },
    /// Every suite on every catalog space, plus the torus spectrum.
    ReportAll {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
        mmax: i64,
        #[arg(long)]
        emit_structures: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Target {
    /// Catalog space (r4 | s3 | t2).
    space: Option<String>,
    /// Presentation file in the JSON schema of the algebra module.
    #[arg(long)]
    presentation: Option<PathBuf>,
}

/// A finished run: `json` and `text` render the same content.
struct Outcome {
    passed: bool,
    json: Value,
    text: String,
}

/// A run that could not produce a report.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Json(_) | Error::InvalidPresentation(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn report_json(r: &Report) -> Value {
    serde_json::to_value(r).expect("report json")
}

fn tensor_json(e: &TensorElement) -> Value {
    serde_json::to_value(e.to_json()).expect("tensor json")
}

fn load_presentation(path: &Path) -> Run<Presentation> {
    let raw = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let doc: PresentationJson =
        serde_json::from_str(&raw).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(Presentation::from_json(&doc)?)
}

fn catalog(name: &str) -> Run<SpaceBundle> {
    match name.to_ascii_lowercase().as_str() {
        "r4" | "s3" | "t2" => Ok(build_named(name)?),
        _ => Err(Failure::input(format!("unknown catalog space {name:?} (expected one of r4, s3, t2)"))),
    }
}

fn reports_outcome(kind: &str, subject: &str, reports: Vec<Report>, extra: Option<(&str, Value)>) -> Outcome {
    let passed = reports.iter().all(Report::passed);
    let mut json = json!({
        "command": kind,
        "space": subject,
        "passed": passed,
        "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
    });
    let mut text: String = reports.iter().map(|r| r.to_string()).collect();
    if let Some((key, value)) = extra {
        if let Value::Object(map) = &value {
            for (k, v) in map {
                text.push_str(&format!("{key}/{k} = {v}\n"));
            }
        }
        json[key] = value;
    }
    Outcome { passed, json, text }
}

fn verify(target: &Target) -> Run<Outcome> {
    if let Some(path) = &target.presentation {
        let pres = std::sync::Arc::new(load_presentation(path)?);
        let name = pres.name().to_string();
        return Ok(reports_outcome("verify", &name, vec![verify_presentation(&pres)], None));
    }
    let bundle = catalog(target.space.as_deref().expect("clap group"))?;
    Ok(reports_outcome("verify", &bundle.name, vec![bundle.verify()], None))
}

fn structures_of(bundle: &SpaceBundle) -> Run<Value> {
    let hs = bundle.hypersurface.as_ref().expect("catalog hypersurface");
    let map = hs.emit_structures(&bundle.structures)?;
    Ok(Value::Object(map.into_iter().collect()))
}

fn induction_reports(bundle: &SpaceBundle) -> Vec<Report> {
    let hs = bundle.hypersurface.as_ref().expect("catalog hypersurface");
    let cert = hs.certificate().cloned().unwrap_or_else(|| hs.check_assumptions());
    vec![cert.report(&hs.name), bundle.golden.clone()]
}

fn induce(target: &Target, emit: bool) -> Run<Outcome> {
    if target.presentation.is_some() {
        return Err(Failure::input(
            "induce needs a catalog hypersurface; a bare presentation carries no level function or metric",
        ));
    }
    let bundle = catalog(target.space.as_deref().expect("clap group"))?;
    if bundle.hypersurface.is_none() {
        return Err(Failure::input(format!("{} is not a hypersurface (use s3 or t2)", bundle.name)));
    }
    let extra = if emit { Some(("structures", structures_of(&bundle)?)) } else { None };
    Ok(reports_outcome("induce", &bundle.name, induction_reports(&bundle), extra))
}

fn check<F>(name: &str, inputs: &[(String, TensorElement)], f: F) -> Clause
where
    F: FnMut(&TensorElement) -> ncspin::Result<TensorElement>,
{
    Clause::over(name, inputs.iter().map(|(l, s)| (l.clone(), s)), f)
}

/// `e_α` and `z^i e_α` for every generator and spinor index.
fn probe_spinors(bundle: &SpaceBundle) -> Vec<(String, TensorElement)> {
    let pres = bundle.presentation();
    let rank = bundle.structures.spin.rank;
    let mut out: Vec<(String, TensorElement)> =
        (0..rank).map(|a| (format!("e{}", a + 1), bundle.structures.spinor(a))).collect();
    for i in 0..pres.n() {
        for a in 0..rank {
            let s = TensorElement::term(&AlgebraElement::generator(pres, i), BasisWord::spinor(&[], a));
            out.push((format!("z{}e{}", i + 1, a + 1), s));
        }
    }
    out
}

fn dirac_report(bundle: &SpaceBundle) -> Run<(Report, Value)> {
    let set = &bundle.structures;
    let probes = probe_spinors(bundle);
    let basis = &probes[..set.spin.rank];
    let minus = |x: ncspin::Result<TensorElement>, y: ncspin::Result<TensorElement>| x?.checked_sub(&y?);
    let mut clauses = Vec::new();
    match bundle.name.as_str() {
        "R4" => {
            let pres = bundle.presentation();
            let pairs = (0..pres.n()).flat_map(|i| (0..set.spin.rank).map(move |a| (format!("z{}e{}", i + 1, a + 1), (i, a))));
            clauses.push(Clause::over("linear_spinors", pairs, |(i, a)| {
                let s = TensorElement::term(&AlgebraElement::generator(pres, i), BasisWord::spinor(&[], a));
                minus(set.dirac(&s), matrix_action(&bundle.gammas[i], &set.spinor(a)))
            }));
        }
        "S3" => {
            let hs = bundle.hypersurface.as_ref().expect("hypersurface");
            clauses.push(check("basis_spinors", basis, |s| {
                minus(set.dirac(s), Ok(s.scale(&Scalar::rational(-3, 2))))
            }));
            clauses.push(check("explicit_route", &probes, |s| minus(set.dirac(s), hs.induced_dirac_explicit(s))));
            clauses.push(check("closed_form", &probes, |s| minus(set.dirac(s), s3_dirac_closed_form(bundle, s))));
        }
        _ => {
            let hs = bundle.hypersurface.as_ref().expect("hypersurface");
            clauses.push(check("explicit_route", &probes, |s| minus(set.dirac(s), hs.induced_dirac_explicit(s))));
            clauses.push(check("closed_form", &probes, |s| minus(set.dirac(s), t2_dirac_closed_form(bundle, s))));
            clauses.push(check("dtilde_expanded", &probes, |s| {
                minus(dtilde_apply(bundle, s), dtilde_expanded(bundle, s))
            }));
            clauses.push(check("dtilde_rotating_frame", &probes, |s| {
                minus(dtilde_apply(bundle, s), dtilde_rotating_frame(bundle, s))
            }));
            clauses.push(check("nu_tilde_square", &probes, |s| {
                nu_tilde_gamma(bundle, &nu_tilde_gamma(bundle, s)?)?.checked_add(s)
            }));
        }
    }
    let mut images = serde_json::Map::new();
    for (label, s) in basis {
        images.insert(label.clone(), tensor_json(&set.dirac(s)?));
    }
    Ok((Report::new(format!("dirac[{}]", bundle.name), clauses), Value::Object(images)))
}

fn dirac(space: &str) -> Run<Outcome> {
    let bundle = catalog(space)?;
    let (report, images) = dirac_report(&bundle)?;
    Ok(reports_outcome("dirac", &bundle.name, vec![report], Some(("images", images))))
}

fn spectrum_of(bundle: &SpaceBundle, theta: f64, mmax: i64) -> Run<SpectrumReport> {
    if mmax < 0 {
        return Err(Failure::input(format!("--mmax must be non-negative, got {mmax}")));
    }
    if !theta.is_finite() {
        return Err(Failure::input("--theta must be finite"));
    }
    Ok(spectrum_scan(bundle, mmax, theta)?)
}

fn spectrum(space: &str, theta: f64, mmax: i64) -> Run<Outcome> {
    if !space.eq_ignore_ascii_case("t2") {
        return Err(Failure::input(format!("spectrum is only available for t2, got {space:?}")));
    }
    let bundle = catalog(space)?;
    let report = spectrum_of(&bundle, theta, mmax)?;
    let passed = report.passed(SPECTRUM_TOL);
    Ok(Outcome {
        passed,
        json: json!({
            "command": "spectrum",
            "space": bundle.name,
            "passed": passed,
            "spectrum": serde_json::to_value(&report).expect("spectrum json"),
        }),
        text: report.table(),
    })
}

fn report_all(theta: f64, mmax: i64, emit: bool) -> Run<Outcome> {
    let r4 = build_r4(ThetaMode::Symbolic, GammaChoice::Deformed)?;
    let s3 = build_s3_from(&r4)?;
    let t2 = build_t2_from(&s3)?;
    let mut passed = true;
    let mut spaces = serde_json::Map::new();
    let mut text = String::new();
    for bundle in [&r4, &s3, &t2] {
        let mut reports = vec![bundle.verify()];
        if bundle.hypersurface.is_some() {
            reports.extend(induction_reports(bundle));
        }
        let (dirac, images) = dirac_report(bundle)?;
        reports.push(dirac);
        passed &= reports.iter().all(Report::passed);
        text.extend(reports.iter().map(|r| r.to_string()));
        let mut entry = json!({
            "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
            "dirac_images": images,
        });
        if emit && bundle.hypersurface.is_some() {
            entry["structures"] = structures_of(bundle)?;
        }
        spaces.insert(bundle.name.clone(), entry);
    }
    let spectrum = spectrum_of(&t2, theta, mmax)?;
    passed &= spectrum.passed(SPECTRUM_TOL);
    text.push_str(&spectrum.table());
    Ok(Outcome {
        passed,
        json: json!({
            "command": "report-all",
            "passed": passed,
            "spaces": spaces,
            "spectrum": serde_json::to_value(&spectrum).expect("spectrum json"),
        }),
        text,
    })
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, body: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(cli: &Cli, body: &str) -> ExitCode {
    match &cli.out {
        Some(path) => {
            if let Err(e) = write_atomic(path, body) {
                eprintln!("ncspin: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::SUCCESS
}

fn render(format: Format, json: &Value, text: &str) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(json).expect("json")),
        Format::Text => text.to_string(),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify(_) => "verify",
        Command::Induce { .. } => "induce",
        Command::Dirac { .. } => "dirac",
        Command::Spectrum { .. } => "spectrum",
        Command::ReportAll { .. } => "report-all",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(target) => verify(target),
        Command::Induce { target, emit_structures } => induce(target, *emit_structures),
        Command::Dirac { space } => dirac(space),
        Command::Spectrum { space, theta, mmax } => spectrum(space, *theta, *mmax),
        Command::ReportAll { theta, mmax, emit_structures } => report_all(*theta, *mmax, *emit_structures),
    };
    match outcome {
        Ok(o) => {
            let code = emit(&cli, &render(cli.format, &o.json, &o.text));
            if code != ExitCode::SUCCESS {
                return code;
            }
            if o.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) if f.code == 1 => {
            // A failed build still leaves a report behind.
            let json = json!({ "command": command_name(&cli.command), "passed": false, "error": f.message });
            let code = emit(&cli, &render(cli.format, &json, &format!("FAIL: {}\n", f.message)));
            eprintln!("ncspin: {}", f.message);
            if code != ExitCode::SUCCESS {
                return code;
            }
            ExitCode::from(1)
        }
        Err(f) => {
            eprintln!("ncspin: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
