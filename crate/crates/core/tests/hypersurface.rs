mod common;

use std::sync::Arc;

use ncspin::catalog::{
    build_r4, build_s3, build_t2, g_lower, h_lower, sphere_level_function, torus_level_function, GammaChoice, ThetaMode,
};
use ncspin::geometry::{linear_form, Connection, FORM2};
use ncspin::hypersurface::build_hypersurface;
use ncspin::spin::StructureSet;
use ncspin::{AlgebraElement, BasisWord, Error, LeftLinearMap, Scalar, TensorElement};

use common::{random_spinor, rng};

#[test]
fn sphere_normal_is_the_linear_form() {
    let r4 = build_r4(ThetaMode::Symbolic, GammaChoice::Deformed).unwrap();
    let f = sphere_level_function(r4.presentation()).unwrap();
    let hs = build_hypersurface(&r4.structures, &f, "S3").unwrap();
    assert_eq!(hs.nu, linear_form(r4.presentation(), &g_lower()));
    assert_eq!(hs.quotient.rules().len(), 1);
}

#[test]
fn torus_normal_is_the_h_form() {
    let s3 = build_s3().unwrap();
    let f = torus_level_function(s3.presentation()).unwrap();
    let hs = build_hypersurface(&s3.structures, &f, "T2").unwrap();
    let want = s3.structures.riemann.calculus.project(&linear_form(s3.presentation(), &h_lower())).unwrap();
    assert_eq!(hs.nu, want);
    // normalization g_B⁻¹(ν̃ ⊗ ν̃) = 1 in the torus quotient
    let norm = s3.structures.riemann.metric.pairing(&hs.nu.tensor(&hs.nu).unwrap()).unwrap();
    assert_eq!(norm.reduce_into(&hs.quotient).unwrap(), AlgebraElement::one(&hs.quotient));
}

#[test]
fn coordinate_level_function_is_rejected() {
    let classical = build_r4(ThetaMode::Classical, GammaChoice::Deformed).unwrap();
    let z1 = AlgebraElement::generator(classical.presentation(), 0);
    let err = build_hypersurface(&classical.structures, &z1, "plane").unwrap_err();
    assert!(matches!(err, Error::NotNormalized(_)), "{err}");

    let symbolic = build_r4(ThetaMode::Symbolic, GammaChoice::Deformed).unwrap();
    let z1 = AlgebraElement::generator(symbolic.presentation(), 0);
    let err = build_hypersurface(&symbolic.structures, &z1, "plane").unwrap_err();
    assert!(matches!(err, Error::NotCentral(_)), "{err}");
}

#[test]
fn induction_requires_a_certificate() {
    let r4 = build_r4(ThetaMode::Symbolic, GammaChoice::Deformed).unwrap();
    let f = sphere_level_function(r4.presentation()).unwrap();
    let mut hs = build_hypersurface(&r4.structures, &f, "S3").unwrap();
    assert!(hs.certificate().is_none());
    assert!(matches!(hs.induce(), Err(Error::CertificateMissing)));
    assert!(matches!(hs.induced_metric(), Err(Error::CertificateMissing)));
    let s = r4.structures.spinor(0).reduce_into(&hs.quotient).unwrap();
    assert!(matches!(hs.induced_dirac_explicit(&s), Err(Error::CertificateMissing)));
    assert!(hs.certify().passed());
    assert!(hs.induce().is_ok());
}

/// `R4` with `σ` replaced by the plain flip `dz^i ⊗ dz^j ↦ dz^j ⊗ dz^i`.
fn flipped_r4() -> Arc<StructureSet> {
    let r4 = build_r4(ThetaMode::Symbolic, GammaChoice::Deformed).unwrap();
    let pres = r4.presentation().clone();
    let flip = LeftLinearMap::from_fn(&pres, FORM2, FORM2, 0, |w| {
        let f: Vec<usize> = w.form_indices().collect();
        Ok(TensorElement::basis(&pres, BasisWord::forms(&[f[1], f[0]])))
    })
    .unwrap();
    let mut set = (*r4.structures).clone();
    set.riemann.connection = Connection {
        values: set.riemann.connection.values.clone(),
        sigma: flip.clone(),
        sigma_inv: Some(flip),
    };
    Arc::new(set)
}

#[test]
fn trivial_flip_breaks_the_assumptions() {
    let ambient = flipped_r4();
    let report = ambient.verify_metric();
    assert!(report.clause("braiding_bimodule").unwrap().pass);
    assert!(!report.clause("right_leibniz").unwrap().pass);
    let f = sphere_level_function(ambient.presentation()).unwrap();
    let mut hs = build_hypersurface(&ambient, &f, "S3-flip").unwrap();
    let cert = hs.certify().clone();
    // dz¹ ⊗ ν picks up R^{j1} moving dz¹ past z^j; the flip drops that phase.
    let dz1 = ambient.riemann.calculus.form(0).unwrap();
    let flipped = ambient.riemann.connection.sigma.apply(&hs.nu.tensor(&dz1).unwrap()).unwrap();
    assert_ne!(flipped, dz1.tensor(&hs.nu).unwrap());
    assert!(!cert.nu_transparency.pass);
    assert!(!cert.pi_transparency.pass);
    assert!(cert.pi_transparency.residual.is_some());
    assert!(!cert.passed());
    assert!(matches!(hs.induce(), Err(Error::CertificateMissing)));
}

#[test]
fn projector_examples() {
    for bundle in [build_s3().unwrap(), build_t2().unwrap()] {
        let hs = bundle.hypersurface.as_ref().unwrap();
        let calc = &hs.pulled.riemann.calculus;
        assert!(hs.projector(&hs.nu_q).unwrap().is_zero());
        for i in 0..4 {
            let p = hs.pi.image(&BasisWord::forms(&[i])).unwrap();
            assert_eq!(&hs.pi.apply(p).unwrap(), p, "Π² ≠ Π on dz{}", i + 1);
        }
        // Π(dz¹) = dz¹ − z¹ν on both levels: the sign (−1)^1 is −1.
        let z1 = AlgebraElement::generator(&hs.quotient, 0);
        let want = calc.form(0).unwrap().checked_sub(&hs.nu_q.left_mul(&z1)).unwrap();
        assert_eq!(hs.pi.image(&BasisWord::forms(&[0])).unwrap(), &want);
    }
}

#[test]
fn torus_projector_sign_on_even_generators() {
    let t2 = build_t2().unwrap();
    let hs = t2.hypersurface.as_ref().unwrap();
    let z2 = AlgebraElement::generator(&hs.quotient, 1);
    let want = hs.pulled.riemann.calculus.form(1).unwrap().checked_add(&hs.nu_q.left_mul(&z2)).unwrap();
    assert_eq!(hs.pi.image(&BasisWord::forms(&[1])).unwrap(), &want);
}

#[test]
fn certificates_pass_with_corollaries() {
    for bundle in [build_s3().unwrap(), build_t2().unwrap()] {
        let hs = bundle.hypersurface.as_ref().unwrap();
        let cert = hs.check_assumptions();
        let report = cert.report(&hs.name);
        assert!(report.passed(), "{report}");
        for name in ["nu_pairing_vanishes", "nabla_nu_pairing_vanishes", "nabla_nu_central", "projector_idempotent", "projector_kills_nu"] {
            assert!(report.clause(name).is_some_and(|c| c.pass), "{name}");
        }
    }
}

#[test]
fn gauss_route_matches_projected_connection() {
    let s3 = build_s3().unwrap();
    let hs = s3.hypersurface.as_ref().unwrap();
    let gauss = hs.gauss_connection_values().unwrap();
    assert_eq!(gauss, s3.structures.riemann.connection.values);
}

#[test]
fn tensor_connection_on_sphere_matches_term_by_term_expansion() {
    let s3 = build_s3().unwrap();
    let riem = &s3.structures.riemann;
    let calc = &riem.calculus;
    let w = calc.form(0).unwrap().tensor(&calc.form(0).unwrap()).unwrap();
    let got = calc.project(&riem.nabla_tensor(None, &w).unwrap()).unwrap();
    // ∇(x ⊗ y) = ∇x ⊗ y + (σ ⊗ id)(x ⊗ ∇y) with x = y = dz¹, all projected.
    let x = calc.form(0).unwrap();
    let nx = &riem.connection.values[0];
    let first = nx.tensor(&x).unwrap();
    let braided = riem.connection.sigma.apply_at(&x.tensor(nx).unwrap(), 0).unwrap();
    let want = calc.project(&first.checked_add(&braided).unwrap()).unwrap();
    assert_eq!(got, want);
}

#[test]
fn induced_dirac_routes_agree_on_random_spinors() {
    let s3 = build_s3().unwrap();
    let hs = s3.hypersurface.as_ref().unwrap();
    let mut r = rng(11);
    for _ in 0..10 {
        let s = random_spinor(&mut r, s3.presentation(), 2);
        assert_eq!(s3.structures.dirac(&s).unwrap(), hs.induced_dirac_explicit(&s).unwrap());
    }
}

#[test]
fn emitted_structures_contain_golden_connection() {
    let s3 = build_s3().unwrap();
    let hs = s3.hypersurface.as_ref().unwrap();
    let emitted = hs.emit_structures(&s3.structures).unwrap();
    let pres = s3.presentation();
    let calc = &s3.structures.riemann.calculus;
    let mut g2 = TensorElement::zero(pres, 2, false);
    for (k, row) in g_lower().iter().enumerate() {
        for (l, x) in row.iter().enumerate() {
            if !x.is_zero() {
                g2 = &g2 + &TensorElement::basis(pres, BasisWord::forms(&[k, l])).scale(x);
            }
        }
    }
    for i in 0..4 {
        let zi = AlgebraElement::generator(pres, i).scale(&Scalar::integer(-1));
        let want = calc.project(&g2.left_mul(&zi)).unwrap();
        let json = &emitted[&format!("connection/dz{}", i + 1)];
        let got = TensorElement::from_json(pres, &serde_json::from_value(json.clone()).unwrap()).unwrap();
        assert_eq!(got, want);
    }
}
