//! Free left modules `Ω^{⊗k} (⊗ E)` over a presented algebra.
//!
//! Elements are kept in left-normal form: every algebra coefficient sits to the
//! left of a basis word `dz^{i_1} ⊗ ... ⊗ dz^{i_k} (⊗ e_α)`. Pushing a monomial
//! leftwards through `dz^i` costs the phase `dz^i z^j = R^{ji} z^j dz^i`; spinor
//! basis elements commute with the algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::algebra::{check_same, AlgebraElement, Monomial, Poly, PolyJson, Presentation};
use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// `dz^{i_1} ⊗ ... ⊗ dz^{i_k}`, optionally followed by a spinor basis element.
/// Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisWord {
    forms: SmallVec<[u8; 4]>,
    spinor: Option<u8>,
}

impl BasisWord {
    pub fn new(forms: &[usize], spinor: Option<usize>) -> Self {
        BasisWord {
            forms: forms.iter().map(|&i| u8::try_from(i).expect("form index fits in u8")).collect(),
            spinor: spinor.map(|a| u8::try_from(a).expect("spinor index fits in u8")),
        }
    }

    pub fn forms(forms: &[usize]) -> Self {
        Self::new(forms, None)
    }

    pub fn spinor(forms: &[usize], alpha: usize) -> Self {
        Self::new(forms, Some(alpha))
    }

    pub fn empty() -> Self {
        Self::new(&[], None)
    }

    pub fn degree(&self) -> usize {
        self.forms.len()
    }

    pub fn has_spinor(&self) -> bool {
        self.spinor.is_some()
    }

    pub fn form_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.forms.iter().map(|&i| usize::from(i))
    }

    pub fn spinor_index(&self) -> Option<usize> {
        self.spinor.map(usize::from)
    }

    pub fn shape(&self) -> Shape {
        Shape::new(self.degree(), self.has_spinor())
    }

    pub fn concat(&self, other: &BasisWord) -> BasisWord {
        if other.forms.is_empty() && other.spinor.is_none() {
            return self.clone();
        }
        assert!(self.spinor.is_none(), "spinor slot must be rightmost");
        let mut forms = self.forms.clone();
        forms.extend_from_slice(&other.forms);
        BasisWord {
            forms,
            spinor: other.spinor,
        }
    }

    /// Splits off the first `k` forms; the spinor stays on the right part.
    pub fn split_at(&self, k: usize) -> (BasisWord, BasisWord) {
        (
            BasisWord {
                forms: SmallVec::from_slice(&self.forms[..k]),
                spinor: None,
            },
            BasisWord {
                forms: SmallVec::from_slice(&self.forms[k..]),
                spinor: self.spinor,
            },
        )
    }

    /// Every basis word of the given shape, in canonical order.
    pub fn all(n: usize, shape: Shape, rank: usize) -> Vec<BasisWord> {
        let mut words = vec![Vec::new()];
        for _ in 0..shape.degree {
            words = words
                .into_iter()
                .flat_map(|w| {
                    (0..n).map(move |i| {
                        let mut w = w.clone();
                        w.push(i);
                        w
                    })
                })
                .collect();
        }
        if shape.spinor {
            words
                .iter()
                .flat_map(|w| (0..rank).map(move |a| BasisWord::spinor(w, a)))
                .collect()
        } else {
            words.iter().map(|w| BasisWord::forms(w)).collect()
        }
    }
}

impl fmt::Display for BasisWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.forms.iter().map(|i| format!("dz{}", i + 1)).collect();
        if let Some(a) = self.spinor {
            parts.push(format!("e{}", a + 1));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("⊗"))
        }
    }
}

/// Tensor degree plus presence of the spinor slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub degree: usize,
    pub spinor: bool,
}

impl Shape {
    pub const fn new(degree: usize, spinor: bool) -> Self {
        Shape { degree, spinor }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ω^{}{}", self.degree, if self.spinor { "⊗E" } else { "" })
    }
}

/// `Σ_m c_m q^{k(m)} m` where `forms · m = q^{k(m)} m · forms`.
fn twist_poly(pres: &Presentation, forms: &[u8], p: &Poly) -> Poly {
    if forms.is_empty() {
        return p.clone();
    }
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        out.add_term(m.clone(), c.shift(pres.word_twist_phase(forms, m)));
    }
    out
}

/// Left-normal element of a free module with basis words of one fixed shape.
#[derive(Clone, Debug)]
pub struct TensorElement {
    pres: Arc<Presentation>,
    shape: Shape,
    terms: BTreeMap<BasisWord, Poly>,
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && check_same(&self.pres, &other.pres).is_ok() && self.terms == other.terms
    }
}

impl TensorElement {
    pub fn zero(pres: &Arc<Presentation>, degree: usize, spinor: bool) -> Self {
        TensorElement {
            pres: pres.clone(),
            shape: Shape::new(degree, spinor),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_of(pres: &Arc<Presentation>, shape: Shape) -> Self {
        Self::zero(pres, shape.degree, shape.spinor)
    }

    /// Coefficients must already be in normal form.
    pub(crate) fn from_terms(
        pres: &Arc<Presentation>,
        degree: usize,
        spinor: bool,
        mut terms: BTreeMap<BasisWord, Poly>,
    ) -> Self {
        terms.retain(|w, p| {
            debug_assert_eq!(w.shape(), Shape::new(degree, spinor));
            !p.is_zero()
        });
        TensorElement {
            pres: pres.clone(),
            shape: Shape::new(degree, spinor),
            terms,
        }
    }

    pub fn basis(pres: &Arc<Presentation>, word: BasisWord) -> Self {
        let n = pres.n();
        assert!(word.form_indices().all(|i| i < n), "form index out of range");
        let shape = word.shape();
        let mut terms = BTreeMap::new();
        terms.insert(word, Poly::constant(n, Scalar::one()));
        TensorElement {
            pres: pres.clone(),
            shape,
            terms,
        }
    }

    /// `a · word`.
    pub fn term(a: &AlgebraElement, word: BasisWord) -> Self {
        Self::basis(a.presentation(), word).left_mul(a)
    }

    /// The algebra element as a degree-0 tensor.
    pub fn from_algebra(a: &AlgebraElement) -> Self {
        Self::term(a, BasisWord::empty())
    }

    /// Degree-0 part read back as an algebra element.
    pub fn to_algebra(&self) -> Result<AlgebraElement> {
        if self.shape != Shape::new(0, false) {
            return Err(Error::ShapeMismatch(format!("expected Ω^0, found {}", self.shape)));
        }
        Ok(self.coefficient(&BasisWord::empty()))
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn degree(&self) -> usize {
        self.shape.degree
    }

    pub fn has_spinor(&self) -> bool {
        self.shape.spinor
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisWord, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &BasisWord) -> AlgebraElement {
        AlgebraElement::from_normal(&self.pres, self.terms.get(word).cloned().unwrap_or_default())
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&BasisWord, AlgebraElement)> {
        self.terms
            .iter()
            .map(|(w, p)| (w, AlgebraElement::from_normal(&self.pres, p.clone())))
    }

    fn check_compatible(&self, other: &TensorElement) -> Result<()> {
        check_same(&self.pres, &other.pres)?;
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{} vs {}", self.shape, other.shape)));
        }
        Ok(())
    }

    fn add_word(&mut self, word: BasisWord, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(word).or_default();
        *entry = &*entry + p;
        if entry.is_zero() {
            self.terms.retain(|_, q| !q.is_zero());
        }
    }

    /// `self += c · other` for a normal-form coefficient `c`.
    pub(crate) fn add_left_scaled(&mut self, c: &Poly, other: &TensorElement) -> Result<()> {
        self.check_compatible(other)?;
        for (w, p) in &other.terms {
            let prod = self.pres.mul_poly(c, p)?;
            self.add_word(w.clone(), &prod);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &TensorElement) -> Result<TensorElement> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, p) in &other.terms {
            out.add_word(w.clone(), p);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &TensorElement) -> Result<TensorElement> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        let mut out = TensorElement::zero_of(&self.pres, self.shape);
        for (w, p) in &self.terms {
            out.add_word(w.clone(), &p.scale(c));
        }
        out
    }

    /// `a · self`.
    pub fn checked_left_mul(&self, a: &AlgebraElement) -> Result<TensorElement> {
        check_same(&self.pres, a.presentation())?;
        let mut out = TensorElement::zero_of(&self.pres, self.shape);
        out.add_left_scaled(a.poly(), self)?;
        Ok(out)
    }

    pub fn left_mul(&self, a: &AlgebraElement) -> TensorElement {
        self.checked_left_mul(a).expect("left multiplication")
    }

    /// `self · a`, moving `a` to the left through every basis word.
    pub fn right_mul(&self, a: &AlgebraElement) -> Result<TensorElement> {
        self.tensor(&TensorElement::from_algebra(a))
    }

    /// `self ⊗_A other`; a spinor slot on `self` is only allowed when `other`
    /// is a function, which then acts from the right.
    pub fn tensor(&self, other: &TensorElement) -> Result<TensorElement> {
        check_same(&self.pres, &other.pres)?;
        if self.shape.spinor && (other.shape.degree > 0 || other.shape.spinor) {
            return Err(Error::ShapeMismatch("left tensor factor carries a spinor slot".into()));
        }
        let shape = Shape::new(self.shape.degree + other.shape.degree, self.shape.spinor || other.shape.spinor);
        let mut out = TensorElement::zero_of(&self.pres, shape);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let moved = twist_poly(&self.pres, &w1.forms, c2);
                let prod = self.pres.mul_poly(c1, &moved)?;
                out.add_word(w1.concat(w2), &prod);
            }
        }
        Ok(out)
    }

    /// Re-reduces every coefficient in `target`, which must have the same generators.
    pub fn reduce_into(&self, target: &Arc<Presentation>) -> Result<TensorElement> {
        if target.n() != self.pres.n() {
            return Err(Error::PresentationMismatch(self.pres.name().into(), target.name().into()));
        }
        let mut out = TensorElement::zero_of(target, self.shape);
        for (w, p) in &self.terms {
            out.add_word(w.clone(), &target.reduce(p)?);
        }
        Ok(out)
    }

    /// Substitutes `q = 1` in every coefficient.
    pub fn at_q_one(&self) -> TensorElement {
        let mut out = TensorElement::zero_of(&self.pres, self.shape);
        for (w, p) in &self.terms {
            out.add_word(w.clone(), &p.at_q_one());
        }
        out
    }

    pub fn to_json(&self) -> TensorJson {
        TensorJson {
            degree: self.shape.degree,
            spinor: self.shape.spinor,
            terms: self
                .terms
                .iter()
                .map(|(w, p)| TensorTermJson {
                    word: w.form_indices().map(|i| i + 1).collect(),
                    alpha: w.spinor_index().map(|a| a + 1),
                    coeff: PolyJson::from_poly(p),
                })
                .collect(),
        }
    }

    pub fn from_json(pres: &Arc<Presentation>, doc: &TensorJson) -> Result<TensorElement> {
        let mut out = TensorElement::zero(pres, doc.degree, doc.spinor);
        for t in &doc.terms {
            if t.word.len() != doc.degree || t.alpha.is_some() != doc.spinor {
                return Err(Error::Parse(format!("term {:?} does not match the declared shape", t.word)));
            }
            if t.word.iter().any(|&i| i == 0 || i > pres.n()) || t.alpha == Some(0) {
                return Err(Error::Parse(format!("index out of range in {:?}", t.word)));
            }
            let forms: Vec<usize> = t.word.iter().map(|i| i - 1).collect();
            let word = BasisWord::new(&forms, t.alpha.map(|a| a - 1));
            let coeff = pres.reduce(&t.coeff.to_poly(pres.n())?)?;
            out.add_word(word, &coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})·{w}")?;
        }
        Ok(())
    }
}

impl Add for &TensorElement {
    type Output = TensorElement;
    fn add(self, rhs: &TensorElement) -> TensorElement {
        self.checked_add(rhs).expect("tensor addition")
    }
}

impl Sub for &TensorElement {
    type Output = TensorElement;
    fn sub(self, rhs: &TensorElement) -> TensorElement {
        self.checked_sub(rhs).expect("tensor subtraction")
    }
}

impl Neg for &TensorElement {
    type Output = TensorElement;
    fn neg(self) -> TensorElement {
        self.scale(&Scalar::integer(-1))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TensorTermJson {
    /// 1-based form indices.
    pub word: Vec<usize>,
    /// 1-based spinor index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<usize>,
    pub coeff: PolyJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TensorJson {
    pub degree: usize,
    pub spinor: bool,
    pub terms: Vec<TensorTermJson>,
}

/// Left-linear map given by its values on every basis word of the domain.
#[derive(Clone, Debug, PartialEq)]
pub struct LeftLinearMap {
    pres: Arc<Presentation>,
    domain: Shape,
    codomain: Shape,
    images: BTreeMap<BasisWord, TensorElement>,
}

impl LeftLinearMap {
    pub fn new(
        pres: &Arc<Presentation>,
        domain: Shape,
        codomain: Shape,
        images: BTreeMap<BasisWord, TensorElement>,
    ) -> Result<Self> {
        for (w, img) in &images {
            if w.shape() != domain {
                return Err(Error::ShapeMismatch(format!("basis word {w} is not in {domain}")));
            }
            if img.shape() != codomain {
                return Err(Error::ShapeMismatch(format!("image of {w} is in {}, expected {codomain}", img.shape())));
            }
            check_same(pres, img.presentation())?;
        }
        Ok(LeftLinearMap {
            pres: pres.clone(),
            domain,
            codomain,
            images,
        })
    }

    /// Builds the map from a function on every basis word of `domain`.
    pub fn from_fn(
        pres: &Arc<Presentation>,
        domain: Shape,
        codomain: Shape,
        rank: usize,
        mut f: impl FnMut(&BasisWord) -> Result<TensorElement>,
    ) -> Result<Self> {
        let mut images = BTreeMap::new();
        for w in BasisWord::all(pres.n(), domain, rank) {
            let img = f(&w)?;
            images.insert(w, img);
        }
        Self::new(pres, domain, codomain, images)
    }

    pub fn identity(pres: &Arc<Presentation>, shape: Shape, rank: usize) -> Self {
        Self::from_fn(pres, shape, shape, rank, |w| Ok(TensorElement::basis(pres, w.clone())))
            .expect("identity map")
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn domain(&self) -> Shape {
        self.domain
    }

    pub fn codomain(&self) -> Shape {
        self.codomain
    }

    pub fn images(&self) -> impl Iterator<Item = (&BasisWord, &TensorElement)> {
        self.images.iter()
    }

    pub fn image(&self, w: &BasisWord) -> Result<&TensorElement> {
        self.images
            .get(w)
            .ok_or_else(|| Error::ShapeMismatch(format!("no image for basis word {w}")))
    }

    /// `Σ a_w · m(w)`.
    pub fn apply(&self, e: &TensorElement) -> Result<TensorElement> {
        check_same(&self.pres, e.presentation())?;
        if e.shape() != self.domain {
            return Err(Error::ShapeMismatch(format!("map on {} applied to {}", self.domain, e.shape())));
        }
        let mut out = TensorElement::zero_of(&self.pres, self.codomain);
        for (w, c) in e.terms() {
            out.add_left_scaled(c, self.image(w)?)?;
        }
        Ok(out)
    }

    /// `id^{⊗start} ⊗ m ⊗ id`: applies the map to the slots starting at form
    /// position `start`. Correct for bimodule maps.
    pub fn apply_at(&self, e: &TensorElement, start: usize) -> Result<TensorElement> {
        check_same(&self.pres, e.presentation())?;
        let shape = e.shape();
        let end = start + self.domain.degree;
        let valid = end <= shape.degree
            && (!self.domain.spinor || (shape.spinor && end == shape.degree))
            && (!self.codomain.spinor || self.domain.spinor);
        if !valid {
            return Err(Error::ShapeMismatch(format!(
                "map {} -> {} at slot {start} does not fit {shape}",
                self.domain, self.codomain
            )));
        }
        let out_shape = Shape::new(shape.degree - self.domain.degree + self.codomain.degree, shape.spinor);
        let mut out = TensorElement::zero_of(&self.pres, out_shape);
        for (w, c) in e.terms() {
            let (prefix, rest) = w.split_at(start);
            let (middle, suffix) = if self.domain.spinor {
                (rest, BasisWord::empty())
            } else {
                let (mid, suf) = rest.split_at(self.domain.degree);
                (mid, suf)
            };
            let img = self.image(&middle)?;
            for (w_img, c_img) in img.terms() {
                let moved = twist_poly(&self.pres, &prefix.forms, c_img);
                let coeff = self.pres.mul_poly(c, &moved)?;
                let word = prefix.concat(&w_img.concat(&suffix));
                out.add_word(word, &coeff);
            }
        }
        Ok(out)
    }

    /// Pointwise composite `self ∘ other`.
    pub fn compose(&self, other: &LeftLinearMap) -> Result<LeftLinearMap> {
        if other.codomain != self.domain {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.domain, self.codomain, other.domain, other.codomain
            )));
        }
        let mut images = BTreeMap::new();
        for (w, img) in &other.images {
            images.insert(w.clone(), self.apply(img)?);
        }
        LeftLinearMap::new(&self.pres, other.domain, self.codomain, images)
    }

    /// `true` iff `m(w · z^j) = m(w) · z^j` for every stored basis word and generator.
    pub fn check_right_linearity(&self) -> Result<bool> {
        Ok(self.right_linearity_residual()?.is_none())
    }

    /// First nonzero `m(w · z^j) − m(w) · z^j`, if any.
    pub fn right_linearity_residual(&self) -> Result<Option<TensorElement>> {
        for (w, img) in &self.images {
            let basis = TensorElement::basis(&self.pres, w.clone());
            for j in 0..self.pres.n() {
                let z = AlgebraElement::generator(&self.pres, j);
                let lhs = self.apply(&basis.right_mul(&z)?)?;
                let rhs = img.right_mul(&z)?;
                let diff = lhs.checked_sub(&rhs)?;
                if !diff.is_zero() {
                    return Ok(Some(diff));
                }
            }
        }
        Ok(None)
    }

    pub fn reduce_into(&self, target: &Arc<Presentation>) -> Result<LeftLinearMap> {
        let mut images = BTreeMap::new();
        for (w, img) in &self.images {
            images.insert(w.clone(), img.reduce_into(target)?);
        }
        LeftLinearMap::new(target, self.domain, self.codomain, images)
    }
}

/// Phase of `dz^{forms} · m` relative to `m · dz^{forms}`, as a scalar.
pub fn twist(pres: &Presentation, forms: &[usize], m: &Monomial) -> Scalar {
    let raw: Vec<u8> = forms.iter().map(|&i| i as u8).collect();
    Scalar::q_pow(pres.word_twist_phase(&raw, m))
}
