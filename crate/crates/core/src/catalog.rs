//! The built-in chain `R⁴_θ → S³_θ → T²_θ` and its closed-form cross-checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{AlgebraElement, Monomial, Poly, Presentation};
use crate::error::{Error, Result};
use crate::geometry::{linear_form, Calculus, Connection, Metric, RiemannianStructure};
use crate::hypersurface::{build_hypersurface, HypersurfaceSpec};
use crate::report::{Clause, Report};
use crate::scalars::{GaussianRational, Rational, Scalar};
use crate::spin::{matrix_action, ScalarMatrix, SpinStructure, StructureSet, SPINOR};
use crate::tensormod::{BasisWord, TensorElement};

/// Whether `θ` stays a symbol or is set to zero (all `R^{ij} = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaMode {
    Symbolic,
    Classical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GammaChoice {
    Deformed,
    Undeformed,
}

/// A catalog space with everything it was built from.
#[derive(Clone, Debug)]
pub struct SpaceBundle {
    pub name: String,
    pub structures: Arc<StructureSet>,
    pub hypersurface: Option<HypersurfaceSpec>,
    /// Constant gamma matrices of the flat ambient space.
    pub gammas: Vec<ScalarMatrix>,
    /// Golden comparisons performed at build time.
    pub golden: Report,
}

impl SpaceBundle {
    pub fn presentation(&self) -> &Arc<Presentation> {
        self.structures.presentation()
    }

    pub fn verify(&self) -> Report {
        let (mut metric, spinorial) = rayon::join(
            || self.structures.verify_metric(),
            || self.structures.verify_spinorial(),
        );
        metric.suite = format!("verify[{}]", self.name);
        metric.extend(spinorial);
        metric
    }

    fn hs(&self) -> Result<&HypersurfaceSpec> {
        self.hypersurface
            .as_ref()
            .ok_or_else(|| Error::ShapeMismatch(format!("{} is not a hypersurface", self.name)))
    }
}

fn gr(num: i64, den: i64) -> Scalar {
    Scalar::rational(num, den)
}

fn pairing_matrix(a: Scalar, b: Scalar) -> Vec<Vec<Scalar>> {
    let z = Scalar::zero();
    vec![
        vec![z.clone(), z.clone(), a.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), b.clone()],
        vec![a, z.clone(), z.clone(), z.clone()],
        vec![z.clone(), b, z.clone(), z],
    ]
}

/// `g_ij`.
pub fn g_lower() -> Vec<Vec<Scalar>> {
    pairing_matrix(gr(1, 2), gr(1, 2))
}

/// `g^{ij}`.
pub fn g_upper() -> Vec<Vec<Scalar>> {
    pairing_matrix(Scalar::integer(2), Scalar::integer(2))
}

/// `h_ij`.
pub fn h_lower() -> Vec<Vec<Scalar>> {
    pairing_matrix(gr(1, 2), gr(-1, 2))
}

/// `(−1)^i` for the 1-based index `i + 1`.
pub fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        -1
    } else {
        1
    }
}

pub fn r_matrix(mode: ThetaMode) -> Vec<Vec<Scalar>> {
    let k = match mode {
        ThetaMode::Symbolic => 4,
        ThetaMode::Classical => 0,
    };
    let (one, p, m) = (Scalar::one(), Scalar::q_pow(k), Scalar::q_pow(-k));
    vec![
        vec![one.clone(), m.clone(), one.clone(), p.clone()],
        vec![p.clone(), one.clone(), m.clone(), one.clone()],
        vec![one.clone(), p.clone(), one.clone(), m.clone()],
        vec![m, one.clone(), p, one],
    ]
}

pub fn r4_presentation(mode: ThetaMode) -> Arc<Presentation> {
    let name = match mode {
        ThetaMode::Symbolic => "R4",
        ThetaMode::Classical => "R4[θ=0]",
    };
    Arc::new(Presentation::free(name, &r_matrix(mode)).expect("R-matrix is valid"))
}

/// `γ^1..γ^4` acting by columns: `γ^i e_α = Σ_β (γ^i)_{βα} e_β`.
pub fn gamma_matrices(choice: GammaChoice) -> Vec<ScalarMatrix> {
    let (p, m) = match choice {
        GammaChoice::Deformed => (Scalar::q_pow(1), Scalar::q_pow(-1)),
        GammaChoice::Undeformed => (Scalar::one(), Scalar::one()),
    };
    let two = |s: &Scalar, sign: i64| s.scale(&GaussianRational::from_integer(2 * sign));
    vec![
        ScalarMatrix::sparse(4, &[(1, 4, two(&p, -1)), (3, 2, two(&m, 1))]),
        ScalarMatrix::sparse(4, &[(1, 3, two(&m, -1)), (4, 2, two(&p, -1))]),
        ScalarMatrix::sparse(4, &[(2, 3, two(&p, -1)), (4, 1, two(&m, 1))]),
        ScalarMatrix::sparse(4, &[(2, 4, two(&m, 1)), (3, 1, two(&p, 1))]),
    ]
}

/// Flat `R⁴_θ` with the chosen gamma matrices. At `θ = 0` the deformed
/// matrices are evaluated at `q = 1`.
pub fn build_r4(mode: ThetaMode, choice: GammaChoice) -> Result<SpaceBundle> {
    let pres = r4_presentation(mode);
    let mut gammas = gamma_matrices(choice);
    if mode == ThetaMode::Classical {
        gammas = gammas.iter().map(ScalarMatrix::at_q_one).collect();
    }
    let riemann = RiemannianStructure {
        calculus: Arc::new(Calculus::free(&pres)),
        metric: Metric::constant(&pres, &g_lower(), &g_upper())?,
        connection: Connection::flat(&pres)?,
    };
    let spin = SpinStructure::constant(&pres, gammas.clone())?;
    Ok(SpaceBundle {
        name: pres.name().to_string(),
        structures: Arc::new(StructureSet {
            name: pres.name().to_string(),
            riemann,
            spin,
        }),
        hypersurface: None,
        gammas,
        golden: Report::new("golden[R4]", Vec::new()),
    })
}

fn quadratic(pres: &Arc<Presentation>, c: &[Vec<Scalar>], constant: Scalar) -> Result<AlgebraElement> {
    let n = pres.n();
    let mut p = Poly::constant(n, constant);
    for (i, row) in c.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                p = &p + &pres.normal_form_poly(&[i, j], x)?;
            }
        }
    }
    AlgebraElement::new(pres, &p)
}

/// `f = ½(Σ g_ij z^i z^j − 1)`.
pub fn sphere_level_function(pres: &Arc<Presentation>) -> Result<AlgebraElement> {
    let half: Vec<Vec<Scalar>> = g_lower().iter().map(|r| r.iter().map(|x| x * &gr(1, 2)).collect()).collect();
    quadratic(pres, &half, gr(-1, 2))
}

/// `f̃ = ½ Σ h_ij z^i z^j`.
pub fn torus_level_function(pres: &Arc<Presentation>) -> Result<AlgebraElement> {
    let half: Vec<Vec<Scalar>> = h_lower().iter().map(|r| r.iter().map(|x| x * &gr(1, 2)).collect()).collect();
    quadratic(pres, &half, Scalar::zero())
}

fn induce(ambient: &SpaceBundle, f: &AlgebraElement, name: &str) -> Result<(HypersurfaceSpec, StructureSet)> {
    let mut hs = build_hypersurface(&ambient.structures, f, name)?;
    let cert = hs.certify().clone();
    if !cert.passed() {
        let failed = cert.report(name).failures().next().cloned().expect("a failing clause");
        return Err(Error::GoldenMismatch {
            clause: failed.clause,
            residual: failed.note.unwrap_or_default(),
        });
    }
    let induced = hs.induce()?;
    Ok((hs, induced))
}

fn finish(name: &str, hs: HypersurfaceSpec, induced: StructureSet, gammas: Vec<ScalarMatrix>, golden: Report) -> Result<SpaceBundle> {
    if let Some(bad) = golden.failures().next() {
        return Err(Error::GoldenMismatch {
            clause: bad.clause.clone(),
            residual: bad
                .residual
                .as_ref()
                .map(|r| r.to_string())
                .or_else(|| bad.note.clone())
                .unwrap_or_default(),
        });
    }
    Ok(SpaceBundle {
        name: name.to_string(),
        structures: Arc::new(induced),
        hypersurface: Some(hs),
        gammas,
        golden,
    })
}

/// `S³_θ ⊂ R⁴_θ`, checked against its closed forms.
pub fn build_s3() -> Result<SpaceBundle> {
    let r4 = build_r4(ThetaMode::Symbolic, GammaChoice::Deformed)?;
    build_s3_from(&r4)
}

pub fn build_s3_from(r4: &SpaceBundle) -> Result<SpaceBundle> {
    let f = sphere_level_function(r4.presentation())?;
    let (hs, induced) = induce(r4, &f, "S3")?;
    let golden = golden_s3(&hs, &induced, &r4.gammas);
    finish("S3", hs, induced, r4.gammas.clone(), golden)
}

/// `T²_θ ⊂ S³_θ`, checked against its closed forms.
pub fn build_t2() -> Result<SpaceBundle> {
    build_t2_from(&build_s3()?)
}

pub fn build_t2_from(s3: &SpaceBundle) -> Result<SpaceBundle> {
    let f = torus_level_function(s3.presentation())?;
    let (hs, induced) = induce(s3, &f, "T2")?;
    let golden = golden_t2(&hs, &induced, &s3.gammas);
    finish("T2", hs, induced, s3.gammas.clone(), golden)
}

/// Closed-form builders over one presentation.
struct Closed<'a> {
    pres: &'a Arc<Presentation>,
    gammas: &'a [ScalarMatrix],
}

impl Closed<'_> {
    fn z(&self, i: usize) -> AlgebraElement {
        AlgebraElement::generator(self.pres, i)
    }

    fn c(&self, x: &Scalar) -> AlgebraElement {
        AlgebraElement::scalar(self.pres, x.clone())
    }

    fn zz(&self, i: usize, j: usize) -> AlgebraElement {
        &self.z(i) * &self.z(j)
    }

    fn e(&self, a: usize) -> TensorElement {
        TensorElement::basis(self.pres, BasisWord::spinor(&[], a))
    }

    fn gg(&self, l: usize, i: usize) -> ScalarMatrix {
        &self.gammas[l] * &self.gammas[i]
    }

    /// `Σ_kl c_kl dz^k ⊗ dz^l`.
    fn two_form(&self, c: &[Vec<Scalar>]) -> TensorElement {
        let mut out = TensorElement::zero(self.pres, 2, false);
        for (k, row) in c.iter().enumerate() {
            for (l, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    out = &out + &TensorElement::basis(self.pres, BasisWord::forms(&[k, l])).scale(x);
                }
            }
        }
        out
    }

    fn spin(&self, m: &ScalarMatrix, a: usize) -> TensorElement {
        matrix_action(m, &self.e(a)).expect("spinor")
    }
}

fn compare(name: &str, cases: Vec<(String, Result<TensorElement>, Result<TensorElement>)>) -> Clause {
    Clause::over(name, cases.into_iter().map(|(l, a, b)| (l, (a, b))), |(got, want)| {
        got?.checked_sub(&want?)
    })
}

fn words(n: usize, deg: usize) -> Vec<Vec<usize>> {
    BasisWord::all(n, crate::tensormod::Shape::new(deg, false), 0)
        .into_iter()
        .map(|w| w.form_indices().collect())
        .collect()
}

fn label(w: &[usize]) -> String {
    w.iter().map(|i| format!("dz{}", i + 1)).collect::<Vec<_>>().join("⊗")
}

/// Shared part of the sphere and torus comparisons; `g_inv`, `nabla`,
/// `gamma` and `spin` give the closed forms per basis element.
#[allow(clippy::too_many_arguments)]
fn golden_common(
    suite: &str,
    hs: &HypersurfaceSpec,
    induced: &StructureSet,
    k: &Closed,
    g_inv: impl Fn(usize, usize) -> AlgebraElement,
    nabla: impl Fn(usize) -> TensorElement,
    gamma: impl Fn(usize, usize) -> TensorElement,
    spin: impl Fn(usize) -> TensorElement,
) -> Vec<Clause> {
    let calc = &hs.calculus;
    let pres = &hs.quotient;
    let n = pres.n();
    let metric = &induced.riemann.metric;
    let conn = &induced.riemann.connection;
    let sp = &induced.spin;
    let rank = sp.rank;
    let _ = suite;
    vec![
        compare(
            "metric",
            vec![("g(1)".into(), Ok(metric.g.clone()), calc.project(&k.two_form(&g_lower())))],
        ),
        compare(
            "inverse_metric",
            words(n, 2)
                .into_iter()
                .map(|w| {
                    let got = metric.g_inv.image(&BasisWord::forms(&w)).cloned();
                    (label(&w), got, Ok(TensorElement::from_algebra(&g_inv(w[0], w[1]))))
                })
                .collect(),
        ),
        compare(
            "connection",
            (0..n)
                .map(|i| (label(&[i]), Ok(conn.values[i].clone()), calc.project(&nabla(i))))
                .collect(),
        ),
        compare(
            "braiding",
            words(n, 2)
                .into_iter()
                .map(|w| {
                    let got = conn.sigma.image(&BasisWord::forms(&w)).cloned();
                    let flip = TensorElement::basis(pres, BasisWord::forms(&[w[1], w[0]])).scale(&pres.r(w[1], w[0]));
                    (label(&w), got, calc.project(&flip))
                })
                .collect(),
        ),
        compare(
            "clifford",
            (0..n)
                .flat_map(|i| (0..rank).map(move |a| (i, a)))
                .map(|(i, a)| {
                    let got = sp.gamma.image(&BasisWord::spinor(&[i], a)).cloned();
                    (format!("dz{}⊗e{}", i + 1, a + 1), got, Ok(gamma(i, a)))
                })
                .collect(),
        ),
        compare(
            "spin_connection",
            (0..rank)
                .map(|a| (format!("e{}", a + 1), Ok(sp.connection[a].clone()), calc.project(&spin(a))))
                .collect(),
        ),
        compare(
            "connection_gauss_route",
            match hs.gauss_connection_values() {
                Ok(vals) => vals
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| (label(&[i]), Ok(v), Ok(conn.values[i].clone())))
                    .collect(),
                Err(e) => vec![("all".into(), Err(e), Ok(TensorElement::zero(pres, 2, false)))],
            },
        ),
    ]
}

/// Compares the induced sphere structures with their closed forms.
pub fn golden_s3(hs: &HypersurfaceSpec, induced: &StructureSet, gammas: &[ScalarMatrix]) -> Report {
    let pres = &hs.quotient;
    let k = Closed { pres, gammas };
    let g = g_lower();
    let gu = g_upper();
    let n = pres.n();
    let mut clauses = golden_common(
        "S3",
        hs,
        induced,
        &k,
        |i, j| &k.c(&gu[i][j]) - &k.zz(i, j),
        |i| k.two_form(&g).left_mul(&-&k.z(i)),
        |i, a| {
            let mut acc = TensorElement::zero_of(pres, SPINOR);
            for (kk, row) in g.iter().enumerate() {
                for (l, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        acc = &acc + &k.spin(&k.gg(l, i), a).left_mul(&k.z(kk)).scale(x);
                    }
                }
            }
            -&(&acc + &k.e(a).left_mul(&k.z(i)))
        },
        |a| {
            let mut acc = TensorElement::zero(pres, 1, true);
            for (i, gi) in g.iter().enumerate() {
                for (j, x) in gi.iter().enumerate() {
                    for (kk, gk) in g.iter().enumerate() {
                        for (l, y) in gk.iter().enumerate() {
                            if x.is_zero() || y.is_zero() {
                                continue;
                            }
                            let form = TensorElement::term(&k.z(kk), BasisWord::forms(&[i])).scale(&(x * y));
                            acc = &acc + &form.tensor(&k.spin(&k.gg(j, l), a)).expect("spinor tensor");
                        }
                    }
                }
            }
            acc.scale(&gr(1, 2))
        },
    );
    clauses.push(compare(
        "projector",
        (0..n)
            .map(|i| {
                let want = hs.nu_q.left_mul(&k.z(i));
                let want = TensorElement::basis(pres, BasisWord::forms(&[i])).checked_sub(&want);
                (label(&[i]), hs.pi.image(&BasisWord::forms(&[i])).cloned(), want)
            })
            .collect(),
    ));
    clauses.push(compare(
        "dirac_basis_spinors",
        (0..induced.spin.rank)
            .map(|a| (format!("e{}", a + 1), induced.dirac(&k.e(a)), Ok(k.e(a).scale(&gr(-3, 2)))))
            .collect(),
    ));
    Report::new("golden[S3]", clauses)
}

/// Compares the induced torus structures with their closed forms.
pub fn golden_t2(hs: &HypersurfaceSpec, induced: &StructureSet, gammas: &[ScalarMatrix]) -> Report {
    let pres = &hs.quotient;
    let k = Closed { pres, gammas };
    let g = g_lower();
    let gu = g_upper();
    let h = h_lower();
    let n = pres.n();
    let mut clauses = golden_common(
        "T2",
        hs,
        induced,
        &k,
        |i, j| {
            let c = Scalar::integer(1 + sign(i) * sign(j));
            &k.c(&gu[i][j]) - &k.zz(i, j).scale(&c)
        },
        |i| {
            let s = Scalar::integer(sign(i));
            let mixed: Vec<Vec<Scalar>> = (0..n).map(|a| (0..n).map(|b| &g[a][b] - &(&s * &h[a][b])).collect()).collect();
            k.two_form(&mixed).left_mul(&-&k.z(i))
        },
        |i, a| {
            let mut acc = k.e(a).left_mul(&k.z(i)).scale(&Scalar::integer(sign(i)));
            for (kk, hk) in h.iter().enumerate() {
                for (l, x) in hk.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    acc = &acc - &k.spin(&k.gg(l, i), a).left_mul(&k.z(kk)).scale(x);
                    for (m, gm) in g.iter().enumerate() {
                        for (nn, y) in gm.iter().enumerate() {
                            if y.is_zero() {
                                continue;
                            }
                            let coeff = &(&k.z(i) * &k.z(m)) * &k.z(kk);
                            acc = &acc + &k.spin(&k.gg(l, nn), a).left_mul(&coeff).scale(&(x * y));
                        }
                    }
                }
            }
            acc
        },
        |a| {
            let mut acc = TensorElement::zero(pres, 1, true);
            for (mat, _) in [(&g, 0), (&h, 1)] {
                for (i, mi) in mat.iter().enumerate() {
                    for (j, x) in mi.iter().enumerate() {
                        for (kk, mk) in mat.iter().enumerate() {
                            for (l, y) in mk.iter().enumerate() {
                                if x.is_zero() || y.is_zero() {
                                    continue;
                                }
                                let form = TensorElement::term(&k.z(kk), BasisWord::forms(&[i])).scale(&(x * y));
                                acc = &acc + &form.tensor(&k.spin(&k.gg(j, l), a)).expect("spinor tensor");
                            }
                        }
                    }
                }
            }
            acc.scale(&gr(1, 2))
        },
    );
    let calc_q = &hs.pulled.riemann.calculus;
    clauses.push(compare(
        "projector",
        (0..n)
            .map(|i| {
                let shift = hs.nu_q.left_mul(&k.z(i)).scale(&Scalar::integer(sign(i)));
                let want = calc_q.form(i).and_then(|f| f.checked_add(&shift));
                (label(&[i]), hs.pi.image(&BasisWord::forms(&[i])).cloned(), want)
            })
            .collect(),
    ));
    clauses.push(compare(
        "nabla_level_form",
        vec![("∇ν̃".into(), Ok(hs.nabla_nu.clone()), calc_q.project(&k.two_form(&h)))],
    ));
    Report::new("golden[T2]", clauses)
}

/// `Σ_α ∂_i(s^α) e_α` for every generator `i`.
pub fn spinor_partials(s: &TensorElement) -> Result<Vec<TensorElement>> {
    let pres = s.presentation();
    let mut out = vec![TensorElement::zero_of(pres, SPINOR); pres.n()];
    for (w, c) in s.coefficients() {
        for (i, d) in c.partial_coeffs()?.into_iter().enumerate() {
            out[i] = out[i].checked_add(&TensorElement::term(&d, w.clone()))?;
        }
    }
    Ok(out)
}

/// `z_j = Σ_k g_jk z^k` or `z̃_j = Σ_k h_jk z^k`.
pub fn lowered(pres: &Arc<Presentation>, c: &[Vec<Scalar>], j: usize) -> AlgebraElement {
    let n = pres.n();
    let mut p = Poly::zero();
    for (kk, x) in c[j].iter().enumerate() {
        p.add_term(Monomial::generator(n, kk), x.clone());
    }
    AlgebraElement::new(pres, &p).expect("linear element reduces")
}

/// `−½ Σ [γ^j, γ^i]_θ ∂_i s z_j − 3/2 s`.
pub fn s3_dirac_closed_form(s3: &SpaceBundle, s: &TensorElement) -> Result<TensorElement> {
    let pres = s3.presentation();
    let partials = spinor_partials(s)?;
    let mut acc = s.scale(&gr(-3, 2));
    let brackets = theta_commutators(pres, &s3.gammas);
    for (i, di) in partials.iter().enumerate() {
        for j in 0..pres.n() {
            let zj = lowered(pres, &g_lower(), j);
            let t = apply_matrix(&brackets[j][i], &di.right_mul(&zj)?)?;
            acc = acc.checked_sub(&t.scale(&gr(1, 2)))?;
        }
    }
    Ok(acc)
}

/// `−½ Σ [γ^j, γ^i]_θ (∂_i s z̃_j − Σ_k ∂_k s z^k z_i z̃_j − s z_i z̃_j)`.
pub fn t2_dirac_closed_form(t2: &SpaceBundle, s: &TensorElement) -> Result<TensorElement> {
    let pres = t2.presentation();
    let n = pres.n();
    let partials = spinor_partials(s)?;
    let brackets = theta_commutators(pres, &t2.gammas);
    let mut radial = TensorElement::zero_of(pres, SPINOR);
    for (kk, dk) in partials.iter().enumerate() {
        radial = radial.checked_add(&dk.right_mul(&AlgebraElement::generator(pres, kk))?)?;
    }
    let mut acc = TensorElement::zero_of(pres, SPINOR);
    for i in 0..n {
        let zi = lowered(pres, &g_lower(), i);
        for j in 0..n {
            let zt = lowered(pres, &h_lower(), j);
            let inner = partials[i]
                .right_mul(&zt)?
                .checked_sub(&radial.right_mul(&(&zi * &zt))?)?
                .checked_sub(&s.right_mul(&(&zi * &zt))?)?;
            acc = acc.checked_sub(&apply_matrix(&brackets[j][i], &inner)?.scale(&gr(1, 2)))?;
        }
    }
    Ok(acc)
}

/// `[γ^a, γ^b]_θ = γ^aγ^b − R^{ba} γ^bγ^a`, indexed `[a][b]`.
pub fn theta_commutators(pres: &Presentation, gammas: &[ScalarMatrix]) -> Vec<Vec<ScalarMatrix>> {
    let n = gammas.len();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| &(&gammas[a] * &gammas[b]) - &(&gammas[b] * &gammas[a]).scale(&pres.r(b, a)))
                .collect()
        })
        .collect()
}

fn apply_matrix(m: &ScalarMatrix, s: &TensorElement) -> Result<TensorElement> {
    matrix_action(m, s)
}

/// `dφ¹ = (2/i) z³ dz¹` and `dφ² = (2/i) z⁴ dz²`, projected (`k` is 0 or 1).
pub fn dphi(t2: &SpaceBundle, k: usize) -> Result<TensorElement> {
    let pres = t2.presentation();
    let coeff = Scalar::constant(GaussianRational::new(Rational::from_integer(0), Rational::from_integer(-2)));
    let w = TensorElement::term(&AlgebraElement::generator(pres, k + 2), BasisWord::forms(&[k])).scale(&coeff);
    t2.structures.riemann.calculus.project(&w)
}

/// `∂_{φ^k}` on a torus element: `z^e ↦ i (e_k − e_{k+2}) z^e` on normal forms.
pub fn partial_phi(a: &AlgebraElement, k: usize) -> AlgebraElement {
    let mut p = Poly::zero();
    for (m, c) in a.poly().terms() {
        let e = m.exponents();
        let w = i64::from(e[k]) - i64::from(e[k + 2]);
        p.add_term(m.clone(), c * &Scalar::constant(GaussianRational::new(Rational::from_integer(0), Rational::from_integer(w))));
    }
    AlgebraElement::from_normal(a.presentation(), p)
}

fn spinor_partial_phi(s: &TensorElement, k: usize) -> Result<TensorElement> {
    let mut out = TensorElement::zero_of(s.presentation(), SPINOR);
    for (w, c) in s.coefficients() {
        out = out.checked_add(&TensorElement::term(&partial_phi(&c, k), w.clone()))?;
    }
    Ok(out)
}

/// `γ(ν̃ ⊗ s)` with the flat Clifford map `γ(dz^i ⊗ e_α) = γ^i e_α`; `ν̃` is
/// its projected representative among the ambient 1-forms.
pub fn nu_tilde_gamma(t2: &SpaceBundle, s: &TensorElement) -> Result<TensorElement> {
    let hs = t2.hs()?;
    let flat = SpinStructure::constant(t2.presentation(), t2.gammas.clone())?;
    flat.gamma_apply(&hs.nu_q.tensor(s)?)
}

/// `D̃_C(s) = γ(ν̃ ⊗ D_C(s))`.
pub fn dtilde_apply(t2: &SpaceBundle, s: &TensorElement) -> Result<TensorElement> {
    nu_tilde_gamma(t2, &t2.structures.dirac(s)?)
}

/// `γ̃(dφ^k ⊗ t) = (1/i)(γ^a t z̄^a − γ^{a+2} t z^a)` with `a = k`.
pub fn gamma_tilde(t2: &SpaceBundle, k: usize, t: &TensorElement) -> Result<TensorElement> {
    let pres = t2.presentation();
    let zb = AlgebraElement::generator(pres, k + 2);
    let z = AlgebraElement::generator(pres, k);
    let a = apply_matrix(&t2.gammas[k], &t.right_mul(&zb)?)?;
    let b = apply_matrix(&t2.gammas[k + 2], &t.right_mul(&z)?)?;
    Ok(a.checked_sub(&b)?.scale(&Scalar::i().inverse().expect("unit")))
}

/// Expanded φ-basis form of `D̃_C`.
pub fn dtilde_expanded(t2: &SpaceBundle, s: &TensorElement) -> Result<TensorElement> {
    let pres = t2.presentation();
    let mut acc = TensorElement::zero_of(pres, SPINOR);
    for k in 0..2 {
        let zb = AlgebraElement::generator(pres, k + 2);
        let z = AlgebraElement::generator(pres, k);
        acc = acc.checked_add(&gamma_tilde(t2, k, &spinor_partial_phi(s, k)?)?)?;
        let mass = apply_matrix(&t2.gammas[k], &s.right_mul(&zb)?)?
            .checked_add(&apply_matrix(&t2.gammas[k + 2], &s.right_mul(&z)?)?)?;
        acc = acc.checked_sub(&mass.scale(&gr(1, 2)))?;
    }
    Ok(acc)
}

/// `Σ_k γ̃(dφ^k ⊗ (∂_{φ^k} s + (1/8i)[γ^k, γ^{k+2}]_θ s))`.
pub fn dtilde_rotating_frame(t2: &SpaceBundle, s: &TensorElement) -> Result<TensorElement> {
    let pres = t2.presentation();
    let brackets = theta_commutators(pres, &t2.gammas);
    let eighth_i = Scalar::constant(GaussianRational::new(Rational::from_integer(0), Rational::new(-1, 8)));
    let mut acc = TensorElement::zero_of(pres, SPINOR);
    for k in 0..2 {
        let inner = spinor_partial_phi(s, k)?.checked_add(&apply_matrix(&brackets[k][k + 2], s)?.scale(&eighth_i))?;
        acc = acc.checked_add(&gamma_tilde(t2, k, &inner)?)?;
    }
    Ok(acc)
}

/// Every golden clause of the three catalog spaces, by space name.
pub fn golden_reports(bundles: &[&SpaceBundle]) -> BTreeMap<String, Report> {
    bundles.iter().map(|b| (b.name.clone(), b.golden.clone())).collect()
}

/// Catalog lookup by name (`r4` | `s3` | `t2`).
pub fn build_named(name: &str) -> Result<SpaceBundle> {
    match name.to_ascii_lowercase().as_str() {
        "r4" => build_r4(ThetaMode::Symbolic, GammaChoice::Deformed),
        "s3" => build_s3(),
        "t2" => build_t2(),
        other => Err(Error::Parse(format!("unknown catalog space {other:?} (expected one of r4, s3, t2)"))),
    }
}

/// Builds the ν̃-adapted level form `Σ h_ij z^i dz^j` on a presentation.
pub fn nu_tilde_closed_form(pres: &Arc<Presentation>) -> TensorElement {
    linear_form(pres, &h_lower())
}
