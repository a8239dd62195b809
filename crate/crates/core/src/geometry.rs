//! Metrics, bimodule connections and their axiom checks.
//!
//! A [`Calculus`] is the free module on `dz^1..dz^n` over a presentation,
//! optionally cut down by a projector `P`. With a projector, 1-forms of the
//! quotient calculus are stored as `P`-projected representatives and every form
//! slot of a tensor is projected, so equality of classes is equality of
//! representatives.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::algebra::{check_same, AlgebraElement, Presentation};
use crate::error::{Error, Result};
use crate::report::{Clause, Report};
use crate::scalars::Scalar;
use crate::tensormod::{BasisWord, LeftLinearMap, Shape, TensorElement};

pub const FORM: Shape = Shape::new(1, false);
pub const FORM2: Shape = Shape::new(2, false);
pub const FUNCTION: Shape = Shape::new(0, false);

pub struct Calculus {
    pres: Arc<Presentation>,
    projector: Option<LeftLinearMap>,
    cache: RwLock<HashMap<BasisWord, TensorElement>>,
}

impl std::fmt::Debug for Calculus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Calculus")
            .field("pres", &self.pres.name())
            .field("projected", &self.projector.is_some())
            .finish()
    }
}

impl Calculus {
    pub fn free(pres: &Arc<Presentation>) -> Self {
        Calculus {
            pres: pres.clone(),
            projector: None,
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// `projector` must be idempotent with images already in projected form.
    pub fn with_projector(pres: &Arc<Presentation>, projector: LeftLinearMap) -> Result<Self> {
        check_same(pres, projector.presentation())?;
        if projector.domain() != FORM || projector.codomain() != FORM {
            return Err(Error::ShapeMismatch("projector must act on 1-forms".into()));
        }
        Ok(Calculus {
            pres: pres.clone(),
            projector: Some(projector),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn projector(&self) -> Option<&LeftLinearMap> {
        self.projector.as_ref()
    }

    /// `P ⊗ ... ⊗ P (⊗ id)` on a single basis word.
    pub fn project_word(&self, w: &BasisWord) -> Result<TensorElement> {
        let Some(p) = &self.projector else {
            return Ok(TensorElement::basis(&self.pres, w.clone()));
        };
        if let Some(hit) = self.cache.read().expect("projection cache poisoned").get(w) {
            return Ok(hit.clone());
        }
        let (forms, tail) = w.split_at(w.degree());
        let mut acc = TensorElement::basis(&self.pres, tail);
        for i in forms.form_indices().collect::<Vec<_>>().into_iter().rev() {
            acc = p.image(&BasisWord::forms(&[i]))?.tensor(&acc)?;
        }
        self.cache
            .write()
            .expect("projection cache poisoned")
            .insert(w.clone(), acc.clone());
        Ok(acc)
    }

    /// Projects every form slot.
    pub fn project(&self, e: &TensorElement) -> Result<TensorElement> {
        check_same(&self.pres, e.presentation())?;
        if self.projector.is_none() || e.degree() == 0 {
            return Ok(e.clone());
        }
        let mut out = TensorElement::zero_of(&self.pres, e.shape());
        for (w, c) in e.terms() {
            out.add_left_scaled(c, &self.project_word(w)?)?;
        }
        Ok(out)
    }

    /// Projects only the form slot at position `k`.
    pub fn project_slot(&self, e: &TensorElement, k: usize) -> Result<TensorElement> {
        match &self.projector {
            Some(p) => p.apply_at(e, k),
            None => Ok(e.clone()),
        }
    }

    /// Projected basis 1-form `dz^{i+1}`.
    pub fn form(&self, i: usize) -> Result<TensorElement> {
        self.project_word(&BasisWord::forms(&[i]))
    }

    pub fn basis(&self, shape: Shape, rank: usize) -> Result<Vec<(BasisWord, TensorElement)>> {
        BasisWord::all(self.pres.n(), shape, rank)
            .into_iter()
            .map(|w| Ok((w.clone(), self.project_word(&w)?)))
            .collect()
    }

    /// `d a`, projected.
    pub fn d(&self, a: &AlgebraElement) -> Result<TensorElement> {
        check_same(&self.pres, a.presentation())?;
        self.project(&a.differential()?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    /// The central element `g(1)`.
    pub g: TensorElement,
    pub g_inv: LeftLinearMap,
}

impl Metric {
    /// `g(1) = Σ g_ij dz^i ⊗ dz^j` and `g⁻¹(dz^i ⊗ dz^j) = g^{ij}` from constant matrices.
    pub fn constant(pres: &Arc<Presentation>, g: &[Vec<Scalar>], g_inv: &[Vec<Scalar>]) -> Result<Self> {
        let n = pres.n();
        let mut terms = TensorElement::zero(pres, 2, false);
        for i in 0..n {
            for j in 0..n {
                if !g[i][j].is_zero() {
                    terms = &terms + &TensorElement::basis(pres, BasisWord::forms(&[i, j])).scale(&g[i][j]);
                }
            }
        }
        let map = LeftLinearMap::from_fn(pres, FORM2, FUNCTION, 0, |w| {
            let f: Vec<usize> = w.form_indices().collect();
            Ok(TensorElement::from_algebra(&AlgebraElement::scalar(pres, g_inv[f[0]][f[1]].clone())))
        })?;
        Ok(Metric { g: terms, g_inv: map })
    }

    pub fn pairing(&self, e: &TensorElement) -> Result<AlgebraElement> {
        self.g_inv.apply(e)?.to_algebra()
    }

    pub fn reduce_into(&self, target: &Arc<Presentation>) -> Result<Metric> {
        Ok(Metric {
            g: self.g.reduce_into(target)?,
            g_inv: self.g_inv.reduce_into(target)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    /// `∇(dz^i)`, one per generator.
    pub values: Vec<TensorElement>,
    pub sigma: LeftLinearMap,
    pub sigma_inv: Option<LeftLinearMap>,
}

impl Connection {
    /// Flat connection `∇(dz^i) = 0` with `σ(dz^i ⊗ dz^j) = R^{ji} dz^j ⊗ dz^i`.
    pub fn flat(pres: &Arc<Presentation>) -> Result<Self> {
        let n = pres.n();
        let braid = |inverse: bool| {
            LeftLinearMap::from_fn(pres, FORM2, FORM2, 0, |w| {
                let f: Vec<usize> = w.form_indices().collect();
                let r = pres.r(f[1], f[0]);
                let c = if inverse { pres.r(f[0], f[1]).inverse().expect("unit") } else { r };
                Ok(TensorElement::basis(pres, BasisWord::forms(&[f[1], f[0]])).scale(&c))
            })
        };
        Ok(Connection {
            values: vec![TensorElement::zero(pres, 2, false); n],
            sigma: braid(false)?,
            sigma_inv: Some(braid(true)?),
        })
    }

    pub fn reduce_into(&self, target: &Arc<Presentation>) -> Result<Connection> {
        Ok(Connection {
            values: self
                .values
                .iter()
                .map(|v| v.reduce_into(target))
                .collect::<Result<_>>()?,
            sigma: self.sigma.reduce_into(target)?,
            sigma_inv: self.sigma_inv.as_ref().map(|s| s.reduce_into(target)).transpose()?,
        })
    }
}

/// Metric and bimodule connection over a calculus.
#[derive(Clone, Debug)]
pub struct RiemannianStructure {
    pub calculus: Arc<Calculus>,
    pub metric: Metric,
    pub connection: Connection,
}

impl RiemannianStructure {
    pub fn presentation(&self) -> &Arc<Presentation> {
        self.calculus.presentation()
    }

    fn nabla_word(&self, spin: Option<&[TensorElement]>, w: &BasisWord) -> Result<TensorElement> {
        let pres = self.presentation();
        match (w.degree(), w.spinor_index()) {
            (0, None) => Ok(TensorElement::zero(pres, 1, false)),
            (0, Some(a)) => spin
                .and_then(|s| s.get(a).cloned())
                .ok_or_else(|| Error::ShapeMismatch("spin connection required for spinor slot".into())),
            (1, None) => {
                let i = w.form_indices().next().expect("degree one");
                Ok(self.connection.values[i].clone())
            }
            _ => {
                let (head, rest) = w.split_at(1);
                let first = self.nabla_word(spin, &head)?.tensor(&TensorElement::basis(pres, rest.clone()))?;
                let inner = TensorElement::basis(pres, head).tensor(&self.nabla_word(spin, &rest)?)?;
                let second = self.connection.sigma.apply_at(&inner, 0)?;
                first.checked_add(&second)
            }
        }
    }

    /// Tensor-product connection on any shape:
    /// `∇(x ⊗ r) = ∇(x) ⊗ r + (σ ⊗ id)(x ⊗ ∇(r))`, extended by the left Leibniz rule.
    /// A spinor slot uses the supplied spin connection values.
    pub fn nabla_tensor(&self, spin: Option<&[TensorElement]>, e: &TensorElement) -> Result<TensorElement> {
        let pres = self.presentation();
        check_same(pres, e.presentation())?;
        let shape = Shape::new(e.degree() + 1, e.has_spinor());
        let mut out = TensorElement::zero_of(pres, shape);
        for (w, c) in e.terms() {
            let a = AlgebraElement::from_normal(pres, c.clone());
            let dw = self.calculus.d(&a)?.tensor(&TensorElement::basis(pres, w.clone()))?;
            out = out.checked_add(&dw)?;
            out.add_left_scaled(c, &self.nabla_word(spin, w)?)?;
        }
        self.calculus.project(&out)
    }

    /// `∇` on 1-forms.
    pub fn nabla(&self, e: &TensorElement) -> Result<TensorElement> {
        if e.shape() != FORM {
            return Err(Error::ShapeMismatch(format!("∇ expects a 1-form, found {}", e.shape())));
        }
        self.nabla_tensor(None, e)
    }

    fn sigma(&self, e: &TensorElement) -> Result<TensorElement> {
        self.calculus.project(&self.connection.sigma.apply(e)?)
    }

    /// Checks every clause of a Riemannian structure on projected basis elements.
    pub fn verify_metric(&self) -> Report {
        let pres = self.presentation().clone();
        let calc = &self.calculus;
        let n = pres.n();
        let forms = || -> Vec<(String, TensorElement)> {
            (0..n)
                .map(|i| (format!("dz{}", i + 1), calc.form(i).expect("projected basis form")))
                .collect()
        };
        let pairs = || -> Vec<(String, TensorElement)> {
            calc.basis(FORM2, 0)
                .expect("projected basis pairs")
                .into_iter()
                .map(|(w, e)| (w.to_string(), e))
                .collect()
        };
        let g = &self.metric.g;
        let g_inv = &self.metric.g_inv;
        let gen = |j: usize| AlgebraElement::generator(&pres, j);

        type Check<'a> = Box<dyn Fn() -> Clause + Send + Sync + 'a>;
        let checks: Vec<Check> = vec![
            Box::new(|| {
                let inputs = (0..n).map(|j| (format!("z{}", j + 1), TensorElement::from_algebra(&gen(j))));
                Clause::over("metric_central", inputs, |z| {
                    let a = z.to_algebra()?;
                    calc.project(&g.right_mul(&a)?.checked_sub(&g.checked_left_mul(&a)?)?)
                })
            }),
            Box::new(|| {
                Clause::over("inverse_metric_left", forms(), |w: TensorElement| {
                    let w = &w;
                    let lhs = g_inv.apply_at(&w.tensor(g)?, 0)?;
                    calc.project(&lhs)?.checked_sub(w)
                })
            }),
            Box::new(|| {
                Clause::over("inverse_metric_right", forms(), |w: TensorElement| {
                    let w = &w;
                    let lhs = g_inv.apply_at(&g.tensor(w)?, 1)?;
                    calc.project(&lhs)?.checked_sub(w)
                })
            }),
            Box::new(|| {
                Clause::over("inverse_metric_bimodule", pairs(), |w: TensorElement| {
                    let w = &w;
                    right_linearity_residual(calc, g_inv, w)
                })
            }),
            Box::new(|| {
                Clause::over("braiding_bimodule", pairs(), |w: TensorElement| {
                    let w = &w;
                    right_linearity_residual(calc, &self.connection.sigma, w)
                })
            }),
            Box::new(|| match &self.connection.sigma_inv {
                Some(inv) => Clause::over("braiding_invertible", pairs(), |w: TensorElement| {
                    let w = &w;
                    let there = self.sigma(&calc.project(&inv.apply(w)?)?)?.checked_sub(w)?;
                    if !there.is_zero() {
                        return Ok(there);
                    }
                    calc.project(&inv.apply(&self.sigma(w)?)?)?.checked_sub(w)
                }),
                None => Clause::fail("braiding_invertible", None, "no inverse braiding supplied"),
            }),
            Box::new(|| {
                let inputs = forms()
                    .into_iter()
                    .flat_map(|(l, w)| (0..n).map(move |j| (format!("{l}·z{}", j + 1), (w.clone(), j))));
                Clause::over("right_leibniz", inputs, |(w, j)| {
                    let z = gen(j);
                    let lhs = self.nabla(&w.right_mul(&z)?)?;
                    let rhs = self.nabla(&w)?.right_mul(&z)?;
                    let braid = self.sigma(&w.tensor(&calc.d(&z)?)?)?;
                    calc.project(&lhs.checked_sub(&rhs)?.checked_sub(&braid)?)
                })
            }),
            Box::new(|| {
                Clause::over("symmetry", pairs(), |w: TensorElement| {
                    let w = &w;
                    g_inv.apply(&self.sigma(w)?)?.checked_sub(&g_inv.apply(w)?)
                })
            }),
            Box::new(|| {
                Clause::over("metric_compatibility", pairs(), |w: TensorElement| {
                    let w = &w;
                    let lhs = g_inv.apply_at(&self.nabla_tensor(None, w)?, 1)?;
                    let rhs = calc.d(&g_inv.apply(w)?.to_algebra()?)?;
                    calc.project(&lhs)?.checked_sub(&rhs)
                })
            }),
        ];
        let clauses = checks.par_iter().map(|c| c()).collect();
        Report::new(format!("metric[{}]", pres.name()), clauses)
    }

    pub fn reduce_into(&self, calculus: &Arc<Calculus>) -> Result<RiemannianStructure> {
        let target = calculus.presentation();
        Ok(RiemannianStructure {
            calculus: calculus.clone(),
            metric: self.metric.reduce_into(target)?,
            connection: self.connection.reduce_into(target)?,
        })
    }
}

/// `m(w · z^j) − m(w) · z^j` over all generators, projected; first nonzero one.
fn right_linearity_residual(
    calc: &Calculus,
    map: &LeftLinearMap,
    w: &TensorElement,
) -> Result<TensorElement> {
    let pres = calc.presentation();
    for j in 0..pres.n() {
        let z = AlgebraElement::generator(pres, j);
        let lhs = map.apply(&calc.project(&w.right_mul(&z)?)?)?;
        let rhs = map.apply(w)?.right_mul(&z)?;
        let r = calc.project(&lhs.checked_sub(&rhs)?)?;
        if !r.is_zero() {
            return Ok(r);
        }
    }
    Ok(TensorElement::zero_of(pres, map.codomain()))
}

/// `Σ_ij c_ij z^i dz^j` for a constant matrix `c`.
pub fn linear_form(pres: &Arc<Presentation>, c: &[Vec<Scalar>]) -> TensorElement {
    let n = pres.n();
    let mut terms = BTreeMap::new();
    for j in 0..n {
        let mut coeff = crate::algebra::Poly::zero();
        for (i, row) in c.iter().enumerate() {
            coeff.add_term(crate::algebra::Monomial::generator(n, i), row[j].clone());
        }
        terms.insert(BasisWord::forms(&[j]), coeff);
    }
    let raw = TensorElement::from_terms(pres, 1, false, terms);
    raw.reduce_into(pres).expect("linear coefficients reduce")
}
