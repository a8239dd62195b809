mod common;

use num_complex::Complex64;

use ncspin::catalog::{
    build_named, build_r4, build_s3, build_s3_from, build_t2, dphi, dtilde_apply, dtilde_expanded,
    dtilde_rotating_frame, gamma_matrices, nu_tilde_gamma, partial_phi, GammaChoice, SpaceBundle, ThetaMode,
};
use ncspin::spin::matrix_action;
use ncspin::{AlgebraElement, BasisWord, Error, Scalar, TensorElement};

use common::{random_element, rng};

type C4 = [[Complex64; 4]; 4];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Block matrix `[[0, p·top], [m·bottom, 0]]` from 2×2 blocks.
fn block(top: [[Complex64; 2]; 2], bottom: [[Complex64; 2]; 2], p: Complex64, m: Complex64) -> C4 {
    let mut out = [[c(0.0, 0.0); 4]; 4];
    for r in 0..2 {
        for k in 0..2 {
            out[r][k + 2] = p * top[r][k];
            out[r + 2][k] = m * bottom[r][k];
        }
    }
    out
}

/// Deformed gamma matrices assembled from Pauli blocks at angle `θ`.
fn pauli_gammas(theta: f64) -> [C4; 4] {
    let s1 = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
    let s2 = [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
    let s3 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
    let id = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let comb = |a: [[Complex64; 2]; 2], x: Complex64, b: [[Complex64; 2]; 2], y: Complex64| {
        let mut o = [[c(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for k in 0..2 {
                o[r][k] = x * a[r][k] + y * b[r][k];
            }
        }
        o
    };
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    let p = Complex64::from_polar(1.0, theta / 4.0);
    let m = p.conj();
    [
        block(comb(s1, -one, s2, -i), comb(s1, one, s2, i), p, m),
        block(comb(s3, -one, id, -one), comb(s3, one, id, -one), m, p),
        block(comb(s1, -one, s2, i), comb(s1, one, s2, -i), p, m),
        block(comb(s3, -one, id, one), comb(s3, one, id, one), m, p),
    ]
}

#[test]
fn gamma_matrices_match_the_pauli_block_form() {
    for theta in [0.0, 0.7, 2.1] {
        let want = pauli_gammas(theta);
        for (g, w) in gamma_matrices(GammaChoice::Deformed).iter().zip(&want) {
            let got = g.eval(theta);
            for r in 0..4 {
                for k in 0..4 {
                    assert!((got[r][k] - w[r][k]).norm() < 1e-12, "θ={theta} entry ({r},{k})");
                }
            }
        }
    }
}

#[test]
fn flat_dirac_on_linear_spinors_is_a_gamma_matrix() {
    let r4 = build_r4(ThetaMode::Symbolic, GammaChoice::Deformed).unwrap();
    let pres = r4.presentation();
    for i in 0..4 {
        for a in 0..4 {
            let e = r4.structures.spinor(a);
            let s = TensorElement::term(&AlgebraElement::generator(pres, i), BasisWord::spinor(&[], a));
            let want = matrix_action(&r4.gammas[i], &e).unwrap();
            assert_eq!(r4.structures.dirac(&s).unwrap(), want, "D(z{}e{})", i + 1, a + 1);
        }
    }
    // γ¹ annihilates e₁, so D(z¹e₁) vanishes.
    let s = TensorElement::term(&AlgebraElement::generator(pres, 0), BasisWord::spinor(&[], 0));
    assert!(r4.structures.dirac(&s).unwrap().is_zero());
}

#[test]
fn r4_axioms_hold() {
    let r4 = build_r4(ThetaMode::Symbolic, GammaChoice::Deformed).unwrap();
    let report = r4.verify();
    assert!(report.passed(), "{report}");
}

#[test]
fn sphere_goldens_cover_the_listed_structures() {
    let s3 = build_s3().unwrap();
    for name in [
        "metric",
        "inverse_metric",
        "connection",
        "braiding",
        "clifford",
        "spin_connection",
        "connection_gauss_route",
        "projector",
        "dirac_basis_spinors",
    ] {
        assert!(s3.golden.clause(name).is_some_and(|c| c.pass), "{name}");
    }
    for a in 0..4 {
        let e = s3.structures.spinor(a);
        assert_eq!(s3.structures.dirac(&e).unwrap(), e.scale(&Scalar::rational(-3, 2)));
    }
}

#[test]
fn sphere_braiding_is_the_r_matrix_flip() {
    let s3 = build_s3().unwrap();
    let pres = s3.presentation();
    let riem = &s3.structures.riemann;
    for i in 0..4 {
        for j in 0..4 {
            let x = riem.calculus.form(i).unwrap().tensor(&riem.calculus.form(j).unwrap()).unwrap();
            let y = riem.calculus.form(j).unwrap().tensor(&riem.calculus.form(i).unwrap()).unwrap();
            let got = riem.calculus.project(&riem.connection.sigma.apply(&x).unwrap()).unwrap();
            assert_eq!(got, riem.calculus.project(&y.scale(&pres.r(j, i))).unwrap(), "σ(dz{}⊗dz{})", i + 1, j + 1);
        }
    }
}

fn same_terms(a: &TensorElement, b: &TensorElement) -> bool {
    a.terms().collect::<Vec<_>>() == b.terms().collect::<Vec<_>>()
}

#[test]
fn classical_sphere_is_the_symbolic_one_at_theta_zero() {
    let classical_r4 = build_r4(ThetaMode::Classical, GammaChoice::Deformed).unwrap();
    assert_eq!(classical_r4.gammas, gamma_matrices(GammaChoice::Undeformed));
    let classical = build_s3_from(&classical_r4).unwrap();
    assert!(classical.golden.passed(), "{}", classical.golden);
    let symbolic = build_s3().unwrap();

    let (cr, sr) = (&classical.structures.riemann, &symbolic.structures.riemann);
    for (x, y) in sr.connection.values.iter().zip(&cr.connection.values) {
        assert!(same_terms(&x.at_q_one(), y));
    }
    for (w, img) in sr.connection.sigma.images() {
        assert!(same_terms(&img.at_q_one(), cr.connection.sigma.image(w).unwrap()));
    }
    for (w, img) in symbolic.hypersurface.as_ref().unwrap().pi.images() {
        assert!(same_terms(&img.at_q_one(), classical.hypersurface.as_ref().unwrap().pi.image(w).unwrap()));
    }
    for a in 0..4 {
        let s = symbolic.structures.spinor(a);
        let d = symbolic.structures.dirac(&s).unwrap().at_q_one();
        assert!(same_terms(&d, &classical.structures.dirac(&classical.structures.spinor(a)).unwrap()));
    }
}

#[test]
fn torus_differential_in_the_phi_basis() {
    let t2 = build_t2().unwrap();
    let pres = t2.presentation();
    let calc = &t2.structures.riemann.calculus;
    let mut r = rng(21);
    for _ in 0..25 {
        let a = random_element(&mut r, pres, 3, 3);
        let mut want = TensorElement::zero(pres, 1, false);
        for k in 0..2 {
            want = want.checked_add(&dphi(&t2, k).unwrap().left_mul(&partial_phi(&a, k))).unwrap();
        }
        assert_eq!(calc.d(&a).unwrap(), calc.project(&want).unwrap(), "a = {a}");
    }
}

fn dtilde_routes(t2: &SpaceBundle, s: &TensorElement) {
    let def = dtilde_apply(t2, s).unwrap();
    assert_eq!(def, dtilde_expanded(t2, s).unwrap(), "expanded route on {s}");
    assert_eq!(def, dtilde_rotating_frame(t2, s).unwrap(), "rotating frame on {s}");
}

#[test]
fn dtilde_routes_agree_on_basis_and_linear_spinors() {
    let t2 = build_t2().unwrap();
    let z1 = AlgebraElement::generator(t2.presentation(), 0);
    for a in 0..4 {
        let e = t2.structures.spinor(a);
        dtilde_routes(&t2, &e);
        dtilde_routes(&t2, &e.left_mul(&z1));
        let sq = nu_tilde_gamma(&t2, &nu_tilde_gamma(&t2, &e).unwrap()).unwrap();
        assert_eq!(sq, e.scale(&Scalar::integer(-1)));
    }
}

#[test]
fn sphere_and_torus_pass_the_axiom_suites() {
    let s3 = build_s3().unwrap();
    let t2 = ncspin::catalog::build_t2_from(&s3).unwrap();
    for b in [&s3, &t2] {
        let report = b.verify();
        assert!(report.passed(), "{report}");
    }
}

#[test]
fn catalog_names() {
    assert_eq!(build_named("R4").unwrap().name, "R4");
    assert!(matches!(build_named("s4"), Err(Error::Parse(_))));
}
