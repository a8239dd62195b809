//! Acceptance criteria 1 to 7, one printed verdict per criterion.

mod common;

use std::f64::consts::FRAC_PI_3;
use std::time::{Duration, Instant};

use ncspin::catalog::{
    build_r4, build_s3, build_t2_from, dphi, dtilde_apply, dtilde_expanded, dtilde_rotating_frame, nu_tilde_gamma,
    s3_dirac_closed_form, t2_dirac_closed_form, GammaChoice, SpaceBundle, ThetaMode,
};
use ncspin::spectrum::{closed_form, spectrum_from_sectors, symbolic_sectors};
use ncspin::{AlgebraElement, Scalar};

use common::oracle::{engine_normal_form, Oracle};
use common::{random_element, random_spinor, random_word, rng};

struct Verdict {
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn run(f: impl FnOnce() -> Result<String, String>) -> Verdict {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    match out {
        Ok(detail) => Verdict { pass: true, detail, elapsed },
        Err(detail) => Verdict { pass: false, detail, elapsed },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let r4 = build_r4(ThetaMode::Symbolic, GammaChoice::Deformed).map_err(|e| e.to_string())?;
    let report = r4.verify();
    ensure(report.passed(), || format!("failing clauses: {:?}", report.failures().map(|c| &c.clause).collect::<Vec<_>>()))?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("{} clauses exact", report.clauses.len()))
}

fn criterion_2() -> Result<String, String> {
    let sym = build_r4(ThetaMode::Symbolic, GammaChoice::Undeformed).map_err(|e| e.to_string())?;
    let report = sym.structures.verify_spinorial();
    let clause = report.clause("clifford_relations").ok_or("missing clause")?;
    ensure(!clause.pass && clause.residual.is_some(), || "undeformed gammas passed at symbolic θ".into())?;
    let classical = build_r4(ThetaMode::Classical, GammaChoice::Undeformed).map_err(|e| e.to_string())?;
    let report = classical.structures.verify_spinorial();
    ensure(report.clause("clifford_relations").is_some_and(|c| c.pass), || "undeformed gammas fail at θ=0".into())?;
    Ok("fails at symbolic θ with residual, passes at θ=0".into())
}

fn dirac_routes_s3(s3: &SpaceBundle, samples: usize) -> Result<(), String> {
    let hs = s3.hypersurface.as_ref().ok_or("no hypersurface")?;
    let pres = s3.presentation();
    let mut r = rng(3);
    for _ in 0..samples {
        let s = random_spinor(&mut r, pres, 2);
        let composite = s3.structures.dirac(&s).map_err(|e| e.to_string())?;
        let explicit = hs.induced_dirac_explicit(&s).map_err(|e| e.to_string())?;
        let closed = s3_dirac_closed_form(s3, &s).map_err(|e| e.to_string())?;
        ensure(composite == explicit, || format!("composite vs explicit differ on {s}"))?;
        ensure(composite == closed, || format!("composite vs closed form differ on {s}"))?;
    }
    Ok(())
}

fn criterion_3(s3: &SpaceBundle, build: Duration) -> Result<String, String> {
    let start = Instant::now();
    let hs = s3.hypersurface.as_ref().ok_or("no hypersurface")?;
    ensure(hs.certificate().is_some_and(|c| c.passed()), || "assumption certificate".into())?;
    ensure(s3.golden.passed(), || format!("{}", s3.golden))?;
    dirac_routes_s3(s3, 40)?;
    let verify = s3.verify();
    ensure(verify.passed(), || format!("{verify}"))?;
    let total = build + start.elapsed();
    ensure(total < Duration::from_secs(30), || format!("took {total:?}"))?;
    Ok(format!("{} golden clauses, 40 random spinors, axioms re-verified", s3.golden.clauses.len()))
}

fn criterion_4(t2: &SpaceBundle) -> Result<String, String> {
    let hs = t2.hypersurface.as_ref().ok_or("no hypersurface")?;
    let pres = t2.presentation();
    ensure(hs.certificate().is_some_and(|c| c.passed()), || "assumption certificate".into())?;
    ensure(t2.golden.passed(), || format!("{}", t2.golden))?;
    let verify = t2.verify();
    ensure(verify.passed(), || format!("{verify}"))?;
    let g_inv = &t2.structures.riemann.metric.g_inv;
    for i in 0..2 {
        for j in 0..2 {
            let pair = dphi(t2, i).and_then(|a| a.tensor(&dphi(t2, j)?)).map_err(|e| e.to_string())?;
            let got = g_inv.apply(&pair).and_then(|v| v.to_algebra()).map_err(|e| e.to_string())?;
            let want = AlgebraElement::scalar(pres, Scalar::integer(if i == j { 2 } else { 0 }));
            ensure(got == want, || format!("g⁻¹(dφ{}⊗dφ{}) = {got}", i + 1, j + 1))?;
        }
    }
    let mut r = rng(4);
    for _ in 0..40 {
        let s = random_spinor(&mut r, pres, 2);
        let e = |x: ncspin::Result<ncspin::TensorElement>| x.map_err(|e| e.to_string());
        let d = e(t2.structures.dirac(&s))?;
        ensure(d == e(hs.induced_dirac_explicit(&s))?, || format!("explicit D_C differs on {s}"))?;
        ensure(d == e(t2_dirac_closed_form(t2, &s))?, || format!("closed-form D_C differs on {s}"))?;
        let def = e(dtilde_apply(t2, &s))?;
        ensure(def == e(dtilde_expanded(t2, &s))?, || format!("expanded D̃_C differs on {s}"))?;
        ensure(def == e(dtilde_rotating_frame(t2, &s))?, || format!("rotating-frame D̃_C differs on {s}"))?;
        let sq = e(nu_tilde_gamma(t2, &e(nu_tilde_gamma(t2, &s))?))?;
        ensure((&sq + &s).is_zero(), || format!("γ(ν̃⊗γ(ν̃⊗s)) ≠ −s on {s}"))?;
    }
    Ok(format!("{} golden clauses, 40 random spinors, three D̃_C routes agree", t2.golden.clauses.len()))
}

fn criterion_5(t2: &SpaceBundle) -> Result<String, String> {
    let start = Instant::now();
    let mmax = 5;
    let sectors = symbolic_sectors(t2, mmax).map_err(|e| e.to_string())?;
    let spectra: Vec<_> = [0.0, 0.7, FRAC_PI_3].iter().map(|&th| spectrum_from_sectors(&sectors, mmax, th)).collect();
    let mut worst = 0.0f64;
    for s in &spectra {
        ensure(s.max_deviation < 1e-9, || format!("θ={} deviation {:e}", s.theta, s.max_deviation))?;
        worst = worst.max(s.max_deviation);
        let vals = s.values();
        let mut neg: Vec<f64> = vals.iter().map(|v| -v).collect();
        neg.sort_by(f64::total_cmp);
        ensure(vals.iter().zip(&neg).all(|(a, b)| (a - b).abs() < 1e-9), || "spectrum not symmetric".into())?;
    }
    let base = spectra[0].values();
    for s in &spectra[1..] {
        let drift = base.iter().zip(s.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ensure(drift < 1e-9, || format!("θ={} drifts by {drift:e}", s.theta))?;
    }
    let zero = sectors.iter().find(|s| s.m == 0 && s.n == 0).ok_or("no (0,0) sector")?;
    let ev = zero.eval(0.0).eigenvalues();
    let want = [-1.0, -1.0, 1.0, 1.0];
    ensure(ev.iter().zip(want).all(|(z, w)| (z.re - w).abs() < 1e-10 && z.im.abs() < 1e-10), || format!("(0,0) sector {ev:?}"))?;
    ensure((closed_form(0, 0) - 1.0).abs() < 1e-15, || "closed form at origin".into())?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("{} eigenvalues per θ, max deviation {worst:.1e}", base.len()))
}

fn criterion_6(bundles: &[&SpaceBundle]) -> Result<String, String> {
    let mut checked = 0;
    for (k, b) in bundles.iter().enumerate() {
        let pres = b.presentation();
        let mut words = rng(60 + k as u64);
        let mut oracle = Oracle::new(pres);
        for _ in 0..1000 {
            let w = random_word(&mut words, pres.n(), 6);
            let brute = oracle.normal_form(&w).map_err(|e| format!("{}: {e}", pres.name()))?;
            ensure(brute == engine_normal_form(pres, &w), || format!("{}: oracle disagrees on {w:?}", pres.name()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} words, every rewrite order explored"))
}

fn criterion_7(bundles: &[&SpaceBundle]) -> Result<String, String> {
    for (k, b) in bundles.iter().enumerate() {
        let pres = b.presentation();
        let mut r = rng(70 + k as u64);
        for _ in 0..100 {
            let a = random_element(&mut r, pres, 3, 3);
            let s = random_spinor(&mut r, pres, 3);
            let res = b.structures.derivation_residual(&a, &s).map_err(|e| e.to_string())?;
            ensure(res.is_zero(), || format!("{}: residual {res} for a = {a}, s = {s}", b.name))?;
        }
    }
    Ok("100 pairs on each of R4, S3, T2".into())
}

#[test]
fn acceptance() {
    let r4 = build_r4(ThetaMode::Symbolic, GammaChoice::Deformed).expect("R4");
    let t = Instant::now();
    let s3 = build_s3().expect("S3");
    let s3_build = t.elapsed();
    let t2 = build_t2_from(&s3).expect("T2");
    let all = [&r4, &s3, &t2];

    let verdicts = [
        ("1 R4 axiom suite", run(criterion_1)),
        ("2 undeformed gamma control", run(criterion_2)),
        ("3 S3 induction", run(|| criterion_3(&s3, s3_build))),
        ("4 T2 induction", run(|| criterion_4(&t2))),
        ("5 torus spectrum", run(|| criterion_5(&t2))),
        ("6 oracle equivalence", run(|| criterion_6(&all))),
        ("7 derivation property", run(|| criterion_7(&all))),
    ];
    for (name, v) in &verdicts {
        println!(
            "criterion {name}: {} ({}; {:.2?})",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            v.elapsed
        );
    }
    let failed: Vec<_> = verdicts.iter().filter(|(_, v)| !v.pass).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
