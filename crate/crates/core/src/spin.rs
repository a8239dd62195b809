//! Spinor modules, Clifford multiplication, spin connections and Dirac operators.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{check_same, AlgebraElement, Presentation};
use crate::error::{Error, Result};
use crate::geometry::RiemannianStructure;
use crate::report::{Clause, Report};
use crate::scalars::Scalar;
use crate::tensormod::{BasisWord, LeftLinearMap, Shape, TensorElement};

pub const SPINOR: Shape = Shape::new(0, true);
pub const FORM_SPINOR: Shape = Shape::new(1, true);

/// Dense square matrix over [`Scalar`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarMatrix {
    rows: Vec<Vec<Scalar>>,
}

impl ScalarMatrix {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        ScalarMatrix { rows }
    }

    pub fn zero(n: usize) -> Self {
        ScalarMatrix {
            rows: vec![vec![Scalar::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i][i] = Scalar::one();
        }
        m
    }

    /// 1-based `(row, col, value)` entries, the rest zero.
    pub fn sparse(n: usize, entries: &[(usize, usize, Scalar)]) -> Self {
        let mut m = Self::zero(n);
        for (r, c, v) in entries {
            m.rows[r - 1][c - 1] = v.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.rows[r][c]
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        ScalarMatrix {
            rows: self.rows.iter().map(|r| r.iter().map(|x| x * s).collect()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Scalar::is_zero)
    }

    pub fn at_q_one(&self) -> Self {
        ScalarMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| Scalar::constant(x.at_q_one())).collect())
                .collect(),
        }
    }

    pub fn eval(&self, theta: f64) -> Vec<Vec<num_complex::Complex64>> {
        self.rows.iter().map(|r| r.iter().map(|x| x.eval(theta)).collect()).collect()
    }
}

impl Add for &ScalarMatrix {
    type Output = ScalarMatrix;
    fn add(self, rhs: &ScalarMatrix) -> ScalarMatrix {
        ScalarMatrix {
            rows: self
                .rows
                .iter()
                .zip(&rhs.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }
}

impl Sub for &ScalarMatrix {
    type Output = ScalarMatrix;
    fn sub(self, rhs: &ScalarMatrix) -> ScalarMatrix {
        self + &rhs.scale(&Scalar::integer(-1))
    }
}

impl Mul for &ScalarMatrix {
    type Output = ScalarMatrix;
    fn mul(self, rhs: &ScalarMatrix) -> ScalarMatrix {
        let n = self.dim();
        let mut out = ScalarMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !rhs.rows[k][j].is_zero() {
                        out.rows[i][j] += &(&self.rows[i][k] * &rhs.rows[k][j]);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `Σ_α c_α M e_α` for a spinor `s = Σ_α c_α e_α`: the matrix acts on the
/// spinor basis and leaves the algebra coefficients in place.
pub fn matrix_action(m: &ScalarMatrix, s: &TensorElement) -> Result<TensorElement> {
    if s.shape() != SPINOR {
        return Err(Error::ShapeMismatch(format!("matrix acts on spinors, found {}", s.shape())));
    }
    let pres = s.presentation();
    let mut out = TensorElement::zero_of(pres, SPINOR);
    for (w, c) in s.terms() {
        let a = w.spinor_index().expect("spinor slot");
        for b in 0..m.dim() {
            let entry = m.get(b, a);
            if !entry.is_zero() {
                let piece = TensorElement::basis(pres, BasisWord::spinor(&[], b)).scale(entry);
                out.add_left_scaled(c, &piece)?;
            }
        }
    }
    Ok(out)
}

/// Clifford multiplication and spin connection on the free spinor module.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinStructure {
    pub rank: usize,
    /// `γ : Ω¹ ⊗ E → E`.
    pub gamma: LeftLinearMap,
    /// Constant gamma matrices, when `γ(dz^i ⊗ e_α) = Σ_β (γ^i)_{βα} e_β`.
    pub matrices: Option<Vec<ScalarMatrix>>,
    /// `∇^sp(e_α)`.
    pub connection: Vec<TensorElement>,
}

impl SpinStructure {
    /// Constant gamma matrices with flat spin connection `∇^sp(e_α) = 0`.
    pub fn constant(pres: &Arc<Presentation>, matrices: Vec<ScalarMatrix>) -> Result<Self> {
        let rank = matrices.first().map(ScalarMatrix::dim).unwrap_or(0);
        if matrices.len() != pres.n() || matrices.iter().any(|m| m.dim() != rank) {
            return Err(Error::ShapeMismatch("one rank-sized gamma matrix per generator required".into()));
        }
        let gamma = LeftLinearMap::from_fn(pres, FORM_SPINOR, SPINOR, rank, |w| {
            let i = w.form_indices().next().expect("one form");
            let a = w.spinor_index().expect("spinor slot");
            matrix_action(&matrices[i], &TensorElement::basis(pres, BasisWord::spinor(&[], a)))
        })?;
        Ok(SpinStructure {
            rank,
            gamma,
            matrices: Some(matrices),
            connection: vec![TensorElement::zero_of(pres, FORM_SPINOR); rank],
        })
    }

    /// `γ` on the innermost form slot.
    pub fn gamma_apply(&self, e: &TensorElement) -> Result<TensorElement> {
        if !e.has_spinor() || e.degree() == 0 {
            return Err(Error::ShapeMismatch(format!("γ needs a form and a spinor, found {}", e.shape())));
        }
        self.gamma.apply_at(e, e.degree() - 1)
    }

    /// `γ_[n]`: `n` successive contractions, innermost first.
    pub fn gamma_n(&self, e: &TensorElement, n: usize) -> Result<TensorElement> {
        (0..n).try_fold(e.clone(), |acc, _| self.gamma_apply(&acc))
    }

    /// θ-anticommutator `γ^iγ^j + R^{ji} γ^jγ^i` and θ-commutator
    /// `γ^iγ^j − R^{ji} γ^jγ^i` (0-based indices).
    pub fn theta_brackets(&self, pres: &Presentation, i: usize, j: usize) -> Result<(ScalarMatrix, ScalarMatrix)> {
        let m = self
            .matrices
            .as_ref()
            .ok_or_else(|| Error::ShapeMismatch("θ-brackets need constant gamma matrices".into()))?;
        let ij = &m[i] * &m[j];
        let ji = (&m[j] * &m[i]).scale(&pres.r(j, i));
        Ok((&ij + &ji, &ij - &ji))
    }

    pub fn nabla_sp(&self, riem: &RiemannianStructure, s: &TensorElement) -> Result<TensorElement> {
        if s.shape() != SPINOR {
            return Err(Error::ShapeMismatch(format!("∇^sp expects a spinor, found {}", s.shape())));
        }
        riem.nabla_tensor(Some(&self.connection), s)
    }

    /// `D = γ ∘ ∇^sp`.
    pub fn dirac(&self, riem: &RiemannianStructure, s: &TensorElement) -> Result<TensorElement> {
        self.gamma_apply(&self.nabla_sp(riem, s)?)
    }

    /// Clifford relations and Clifford compatibility of `γ`.
    pub fn verify_spinorial(&self, riem: &RiemannianStructure) -> Report {
        let pres = riem.presentation().clone();
        let calc = &riem.calculus;
        let spin_words = |deg: usize| -> Vec<(String, TensorElement)> {
            calc.basis(Shape::new(deg, true), self.rank)
                .expect("projected spinor basis")
                .into_iter()
                .map(|(w, e)| (w.to_string(), e))
                .collect()
        };
        type Check<'a> = Box<dyn Fn() -> Clause + Send + Sync + 'a>;
        let checks: Vec<Check> = vec![
            Box::new(|| {
                Clause::over("clifford_relations", spin_words(2), |w: TensorElement| {
                    let w = &w;
                    let braided = riem.connection.sigma.apply_at(w, 0)?;
                    let lhs = self.gamma_n(w, 2)?.checked_add(&self.gamma_n(&braided, 2)?)?;
                    let rhs = riem.metric.g_inv.apply_at(w, 0)?.scale(&Scalar::integer(-2));
                    lhs.checked_sub(&rhs)
                })
            }),
            Box::new(|| {
                Clause::over("clifford_compatibility", spin_words(1), |w: TensorElement| {
                    let w = &w;
                    let lhs = self.nabla_sp(riem, &self.gamma_apply(w)?)?;
                    let rhs = self.gamma.apply_at(&riem.nabla_tensor(Some(&self.connection), w)?, 1)?;
                    calc.project(&rhs)?.checked_sub(&lhs)
                })
            }),
        ];
        let clauses = checks.par_iter().map(|c| c()).collect();
        Report::new(format!("spinorial[{}]", pres.name()), clauses)
    }

    pub fn reduce_into(&self, target: &Arc<Presentation>) -> Result<SpinStructure> {
        Ok(SpinStructure {
            rank: self.rank,
            gamma: self.gamma.reduce_into(target)?,
            matrices: self.matrices.clone(),
            connection: self
                .connection
                .iter()
                .map(|c| c.reduce_into(target))
                .collect::<Result<_>>()?,
        })
    }
}

/// Everything one space carries: Riemannian and spinorial data.
#[derive(Clone, Debug)]
pub struct StructureSet {
    pub name: String,
    pub riemann: RiemannianStructure,
    pub spin: SpinStructure,
}

impl StructureSet {
    pub fn presentation(&self) -> &Arc<Presentation> {
        self.riemann.presentation()
    }

    pub fn dirac(&self, s: &TensorElement) -> Result<TensorElement> {
        check_same(self.presentation(), s.presentation())?;
        self.spin.dirac(&self.riemann, s)
    }

    pub fn verify_metric(&self) -> Report {
        self.riemann.verify_metric()
    }

    pub fn verify_spinorial(&self) -> Report {
        self.spin.verify_spinorial(&self.riemann)
    }

    /// Basis spinor `e_{α+1}`.
    pub fn spinor(&self, alpha: usize) -> TensorElement {
        TensorElement::basis(self.presentation(), BasisWord::spinor(&[], alpha))
    }

    /// `D(a s) − a D(s) − γ(da ⊗ s)`.
    pub fn derivation_residual(&self, a: &AlgebraElement, s: &TensorElement) -> Result<TensorElement> {
        let lhs = self.dirac(&s.left_mul(a))?;
        let rhs = self.dirac(s)?.left_mul(a);
        let da_s = self.riemann.calculus.d(a)?.tensor(s)?;
        let extra = self.spin.gamma_apply(&da_s)?;
        lhs.checked_sub(&rhs)?.checked_sub(&extra)
    }
}
