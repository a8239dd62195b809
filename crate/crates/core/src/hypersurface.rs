//! Level-set hypersurfaces and the structures they inherit.
//!
//! Given an ambient [`StructureSet`] and a central level function `f`, the quotient
//! `B = A/(f)` carries two calculi: the pulled-back one `q_!(Ω¹)` (ambient forms
//! with reduced coefficients) and the hypersurface one `Ω¹_B`, realised inside
//! `q_!(Ω¹)` as the image of `Π(ω) = ω − g⁻¹(ω ⊗ ν) ν`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Presentation};
use crate::error::{Error, Result};
use crate::geometry::{Calculus, Connection, Metric, RiemannianStructure, FORM, FORM2};
use crate::report::{Clause, Report};
use crate::scalars::Scalar;
use crate::spin::{SpinStructure, StructureSet, FORM_SPINOR, SPINOR};
use crate::tensormod::{BasisWord, LeftLinearMap, TensorElement};

/// Outcome of the three transparency assumptions plus their stated consequences.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssumptionCertificate {
    pub nu_transparency: Clause,
    pub pi_transparency: Clause,
    pub nabla_nu_transparency: Clause,
    pub corollaries: Vec<Clause>,
}

impl AssumptionCertificate {
    /// The three assumptions; corollaries are reported but do not gate induction.
    pub fn passed(&self) -> bool {
        self.nu_transparency.pass && self.pi_transparency.pass && self.nabla_nu_transparency.pass
    }

    pub fn report(&self, name: &str) -> Report {
        let mut clauses = vec![
            self.nu_transparency.clone(),
            self.pi_transparency.clone(),
            self.nabla_nu_transparency.clone(),
        ];
        clauses.extend(self.corollaries.iter().cloned());
        Report::new(format!("assumptions[{name}]"), clauses)
    }
}

#[derive(Clone, Debug)]
pub struct HypersurfaceSpec {
    pub name: String,
    pub ambient: Arc<StructureSet>,
    /// Level function in the ambient algebra.
    pub f: AlgebraElement,
    /// `ν = df` in the ambient calculus.
    pub nu: TensorElement,
    pub quotient: Arc<Presentation>,
    /// Ambient structures with coefficients reduced into the quotient.
    pub pulled: StructureSet,
    pub nu_q: TensorElement,
    pub nabla_nu: TensorElement,
    /// `Π` on `q_!(Ω¹)`.
    pub pi: LeftLinearMap,
    /// `Ω¹_B`, realised through `Π`.
    pub calculus: Arc<Calculus>,
    certificate: Option<AssumptionCertificate>,
}

/// Checks the level-set conditions and builds the quotient data.
pub fn build_hypersurface(
    ambient: &Arc<StructureSet>,
    f: &AlgebraElement,
    name: impl Into<String>,
) -> Result<HypersurfaceSpec> {
    let name = name.into();
    let pres = ambient.presentation();
    let calc = &ambient.riemann.calculus;
    if !f.is_central()? {
        return Err(Error::NotCentral(format!("level function {f}")));
    }
    let nu = calc.d(f)?;
    for j in 0..pres.n() {
        let z = AlgebraElement::generator(pres, j);
        let diff = calc.project(&nu.right_mul(&z)?.checked_sub(&nu.left_mul(&z))?)?;
        if !diff.is_zero() {
            return Err(Error::NotCentral(format!("ν = {nu} fails to commute with z{}", j + 1)));
        }
    }
    let norm = ambient.riemann.metric.pairing(&nu.tensor(&nu)?)?;
    let quotient = match pres.with_level_rule(name.clone(), f.poly()) {
        Ok(q) => Arc::new(q),
        Err(e) if norm != AlgebraElement::one(pres) => {
            return Err(Error::NotNormalized(format!("g⁻¹(ν ⊗ ν) = {norm}; no quotient rule ({e})")));
        }
        Err(e) => return Err(e),
    };
    let norm = norm.reduce_into(&quotient)?;
    if norm != AlgebraElement::one(&quotient) {
        return Err(Error::NotNormalized(format!("g⁻¹(ν ⊗ ν) = {norm} in the quotient")));
    }

    let calc_q = Arc::new(match calc.projector() {
        Some(p) => Calculus::with_projector(&quotient, p.reduce_into(&quotient)?)?,
        None => Calculus::free(&quotient),
    });
    let pulled = StructureSet {
        name: format!("{}→{}", ambient.name, name),
        riemann: ambient.riemann.reduce_into(&calc_q)?,
        spin: ambient.spin.reduce_into(&quotient)?,
    };
    let nu_q = nu.reduce_into(&quotient)?;
    let nabla_nu = pulled.riemann.nabla(&nu_q)?;
    let g_inv = &pulled.riemann.metric.g_inv;
    let pi = LeftLinearMap::from_fn(&quotient, FORM, FORM, 0, |w| {
        let omega = calc_q.project_word(w)?;
        let a = g_inv.apply(&omega.tensor(&nu_q)?)?.to_algebra()?;
        calc_q.project(&omega.checked_sub(&nu_q.left_mul(&a))?)
    })?;
    let calculus = Arc::new(Calculus::with_projector(&quotient, pi.clone())?);
    Ok(HypersurfaceSpec {
        name,
        ambient: ambient.clone(),
        f: f.clone(),
        nu,
        quotient,
        pulled,
        nu_q,
        nabla_nu,
        pi,
        calculus,
        certificate: None,
    })
}

impl HypersurfaceSpec {
    fn calc_q(&self) -> &Arc<Calculus> {
        &self.pulled.riemann.calculus
    }

    fn sigma(&self) -> &LeftLinearMap {
        &self.pulled.riemann.connection.sigma
    }

    fn g_inv(&self) -> &LeftLinearMap {
        &self.pulled.riemann.metric.g_inv
    }

    fn form(&self, i: usize) -> Result<TensorElement> {
        self.calc_q().form(i)
    }

    /// `Π(e)` for a 1-form of the pulled-back calculus.
    pub fn projector(&self, e: &TensorElement) -> Result<TensorElement> {
        let e = self.calc_q().project(e)?;
        self.pi.apply(&e)
    }

    pub fn certificate(&self) -> Option<&AssumptionCertificate> {
        self.certificate.as_ref()
    }

    /// Runs the assumption checks and stores the certificate.
    pub fn certify(&mut self) -> &AssumptionCertificate {
        let cert = self.check_assumptions();
        self.certificate.insert(cert)
    }

    fn require_certificate(&self) -> Result<()> {
        match &self.certificate {
            Some(c) if c.passed() => Ok(()),
            _ => Err(Error::CertificateMissing),
        }
    }

    pub fn check_assumptions(&self) -> AssumptionCertificate {
        let n = self.quotient.n();
        let forms = || (0..n).map(move |i| (format!("dz{}", i + 1), i));
        let pairs = || (0..n).flat_map(move |i| (0..n).map(move |j| (format!("dz{}⊗dz{}", i + 1, j + 1), (i, j))));
        let calc = self.calc_q();
        let sigma = self.sigma();

        let nu_check = || {
            Clause::over("nu_transparency", forms(), |i| {
                let w = self.form(i)?;
                let a = calc.project(&sigma.apply(&w.tensor(&self.nu_q)?)?)?.checked_sub(&self.nu_q.tensor(&w)?)?;
                if !a.is_zero() {
                    return Ok(a);
                }
                calc.project(&sigma.apply(&self.nu_q.tensor(&w)?)?)?.checked_sub(&w.tensor(&self.nu_q)?)
            })
        };
        let pi_check = || {
            Clause::over("pi_transparency", pairs(), |(i, j)| {
                let (w, z) = (self.form(i)?, self.form(j)?);
                let base = sigma.apply(&w.tensor(&z)?)?;
                let lhs = sigma.apply(&self.pi.apply(&w)?.tensor(&z)?)?;
                let a = calc.project(&lhs.checked_sub(&self.pi.apply_at(&base, 1)?)?)?;
                if !a.is_zero() {
                    return Ok(a);
                }
                let lhs = sigma.apply(&w.tensor(&self.pi.apply(&z)?)?)?;
                calc.project(&lhs.checked_sub(&self.pi.apply_at(&base, 0)?)?)
            })
        };
        let nabla_check = || {
            Clause::over("nabla_nu_transparency", forms(), |i| {
                let pw = self.pi.apply(&self.form(i)?)?;
                let moved = sigma.apply_at(&sigma.apply_at(&pw.tensor(&self.nabla_nu)?, 0)?, 1)?;
                let lhs = self.pi.apply_at(&calc.project(&moved)?, 0)?;
                let rhs = self.pi.apply_at(&self.nabla_nu.tensor(&pw)?, 0)?;
                lhs.checked_sub(&rhs)
            })
        };
        let (nu_transparency, pi_transparency, nabla_nu_transparency) = std::thread::scope(|s| {
            let a = s.spawn(nu_check);
            let b = s.spawn(pi_check);
            let c = nabla_check();
            (a.join().expect("ν check"), b.join().expect("Π check"), c)
        });

        let corollaries = vec![
            Clause::over("nu_pairing_vanishes", forms(), |i| {
                let pw = self.pi.apply(&self.form(i)?)?;
                let a = self.g_inv().apply(&pw.tensor(&self.nu_q)?)?;
                if !a.is_zero() {
                    return Ok(a);
                }
                self.g_inv().apply(&self.nu_q.tensor(&pw)?)
            }),
            Clause::over("nabla_nu_pairing_vanishes", std::iter::once(("∇ν⊗ν".to_string(), ())), |_| {
                let x = self.g_inv().apply_at(&self.nabla_nu.tensor(&self.nu_q)?, 1)?;
                self.pi.apply_at(&x, 0)
            }),
            Clause::over("nabla_nu_central", forms().map(|(_, j)| (format!("z{}", j + 1), j)), |j| {
                let z = AlgebraElement::generator(&self.quotient, j);
                calc.project(&self.nabla_nu.right_mul(&z)?.checked_sub(&self.nabla_nu.left_mul(&z))?)
            }),
            Clause::over("projector_idempotent", forms(), |i| {
                let once = self.pi.apply(&self.form(i)?)?;
                self.pi.apply(&once)?.checked_sub(&once)
            }),
            Clause::over("projector_kills_nu", std::iter::once(("ν".to_string(), ())), |_| self.pi.apply(&self.nu_q)),
        ];
        AssumptionCertificate {
            nu_transparency,
            pi_transparency,
            nabla_nu_transparency,
            corollaries,
        }
    }

    /// `g_B = [g(1)]` and `g_B⁻¹ = g⁻¹ ∘ (Π ⊗ Π)`.
    pub fn induced_metric(&self) -> Result<Metric> {
        self.require_certificate()?;
        let g = self.calculus.project(&self.pulled.riemann.metric.g)?;
        let g_inv = LeftLinearMap::from_fn(&self.quotient, FORM2, crate::geometry::FUNCTION, 0, |w| {
            self.g_inv().apply(&self.calculus.project_word(w)?)
        })?;
        Ok(Metric { g, g_inv })
    }

    fn descend(&self, map: &LeftLinearMap) -> Result<LeftLinearMap> {
        LeftLinearMap::from_fn(&self.quotient, map.domain(), map.codomain(), 0, |w| {
            self.calculus.project(&map.apply(&self.calculus.project_word(w)?)?)
        })
    }

    /// `∇_B = [∇ ∘ Π]` with the descended braiding.
    pub fn induced_connection(&self) -> Result<Connection> {
        self.require_certificate()?;
        let conn = &self.pulled.riemann.connection;
        let values = (0..self.quotient.n())
            .map(|i| {
                let pw = self.calculus.form(i)?;
                self.calculus.project(&self.pulled.riemann.nabla(&pw)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Connection {
            values,
            sigma: self.descend(&conn.sigma)?,
            sigma_inv: conn.sigma_inv.as_ref().map(|s| self.descend(s)).transpose()?,
        })
    }

    /// `[∇(ω) − g⁻¹(ω ⊗ ν) ∇(ν)]` on the basis 1-forms.
    pub fn gauss_connection_values(&self) -> Result<Vec<TensorElement>> {
        self.require_certificate()?;
        (0..self.quotient.n())
            .map(|i| {
                let w = self.form(i)?;
                let a = self.g_inv().apply(&w.tensor(&self.nu_q)?)?.to_algebra()?;
                let raw = self.pulled.riemann.nabla(&w)?.checked_sub(&self.nabla_nu.left_mul(&a))?;
                self.calculus.project(&raw)
            })
            .collect()
    }

    /// `(id ⊗ γ_[2])` on a degree-three spinor-valued element.
    fn inner_gamma2(&self, e: &TensorElement) -> Result<TensorElement> {
        let gamma = &self.pulled.spin.gamma;
        gamma.apply_at(&gamma.apply_at(e, 2)?, 1)
    }

    /// `γ_B([ω] ⊗ s) = γ_[2](Π ω ⊗ ν ⊗ s)` and the spinorial Gauss formula for `∇^sp_B`.
    pub fn induced_spin(&self) -> Result<SpinStructure> {
        self.require_certificate()?;
        let spin = &self.pulled.spin;
        let rank = spin.rank;
        let gamma = LeftLinearMap::from_fn(&self.quotient, FORM_SPINOR, SPINOR, rank, |w| {
            let i = w.form_indices().next().expect("one form");
            let a = w.spinor_index().expect("spinor slot");
            let s = TensorElement::basis(&self.quotient, BasisWord::spinor(&[], a));
            spin.gamma_n(&self.calculus.form(i)?.tensor(&self.nu_q.tensor(&s)?)?, 2)
        })?;
        let half = Scalar::rational(1, 2);
        let connection = (0..rank)
            .map(|a| {
                let s = TensorElement::basis(&self.quotient, BasisWord::spinor(&[], a));
                let flat = spin.nabla_sp(&self.pulled.riemann, &s)?;
                let corr = self.inner_gamma2(&self.nabla_nu.tensor(&self.nu_q.tensor(&s)?)?)?;
                self.calculus.project(&flat.checked_add(&corr.scale(&half))?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpinStructure {
            rank,
            gamma,
            matrices: None,
            connection,
        })
    }

    /// Full induced structure set on the hypersurface.
    pub fn induce(&self) -> Result<StructureSet> {
        Ok(StructureSet {
            name: self.name.clone(),
            riemann: RiemannianStructure {
                calculus: self.calculus.clone(),
                metric: self.induced_metric()?,
                connection: self.induced_connection()?,
            },
            spin: self.induced_spin()?,
        })
    }

    /// `D_B(s) = −½(γ_[2] − γ_[2] σ₁₂)(ν ⊗ ∇^sp s) + ½ γ_[2]((Π ⊗ id)∇(ν) ⊗ s)`,
    /// computed from the pulled-back ambient data only.
    pub fn induced_dirac_explicit(&self, s: &TensorElement) -> Result<TensorElement> {
        self.require_certificate()?;
        if s.shape() != SPINOR {
            return Err(Error::ShapeMismatch(format!("expected a spinor, found {}", s.shape())));
        }
        let spin = &self.pulled.spin;
        let grad = spin.nabla_sp(&self.pulled.riemann, s)?;
        let x = self.nu_q.tensor(&grad)?;
        let braided = self.sigma().apply_at(&x, 0)?;
        let first = spin.gamma_n(&x, 2)?.checked_sub(&spin.gamma_n(&braided, 2)?)?;
        let y = self.pi.apply_at(&self.nabla_nu, 0)?.tensor(s)?;
        let second = spin.gamma_n(&y, 2)?;
        let half = Scalar::rational(1, 2);
        Ok(second.checked_sub(&first)?.scale(&half))
    }

    /// Every induced basis value, keyed for golden-file comparison.
    pub fn emit_structures(&self, induced: &StructureSet) -> Result<BTreeMap<String, serde_json::Value>> {
        let mut out = BTreeMap::new();
        let n = self.quotient.n();
        let json = |e: &TensorElement| serde_json::to_value(e.to_json()).expect("tensor json");
        out.insert("presentation".into(), serde_json::to_value(self.quotient.to_json())?);
        out.insert("nu".into(), json(&self.nu_q));
        out.insert("metric".into(), json(&induced.riemann.metric.g));
        for i in 0..n {
            out.insert(format!("projector/dz{}", i + 1), json(self.pi.image(&BasisWord::forms(&[i]))?));
            out.insert(format!("connection/dz{}", i + 1), json(&induced.riemann.connection.values[i]));
            for j in 0..n {
                let w = BasisWord::forms(&[i, j]);
                out.insert(
                    format!("inverse_metric/dz{}⊗dz{}", i + 1, j + 1),
                    json(induced.riemann.metric.g_inv.image(&w)?),
                );
                out.insert(
                    format!("braiding/dz{}⊗dz{}", i + 1, j + 1),
                    json(induced.riemann.connection.sigma.image(&w)?),
                );
            }
            for a in 0..induced.spin.rank {
                out.insert(
                    format!("clifford/dz{}⊗e{}", i + 1, a + 1),
                    json(induced.spin.gamma.image(&BasisWord::spinor(&[i], a))?),
                );
            }
        }
        for a in 0..induced.spin.rank {
            out.insert(format!("spin_connection/e{}", a + 1), json(&induced.spin.connection[a]));
            out.insert(format!("dirac/e{}", a + 1), json(&induced.dirac(&induced.spinor(a))?));
        }
        Ok(out)
    }
}
