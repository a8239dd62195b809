//! Finitely presented quasi-commutative algebras.
//!
//! A [`Presentation`] has generators `z^1..z^n` subject to
//! `z^i z^j = R^{ji} z^j z^i`, with every `R^{ij}` a pure phase `q^k`, plus an
//! optional list of quadratic rewrite rules generating a two-sided ideal.
//! Elements are stored as normal forms over ordered (PBW) monomials
//! `(z^1)^{e_1} ... (z^n)^{e_n}`; the free product of two such monomials is again a
//! monomial up to a phase, so reordering never branches.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::report::{Clause, Report};
use crate::scalars::Scalar;
use crate::tensormod::{BasisWord, TensorElement};

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

/// Rewrite budget per normal-form computation; `NCG_STEP_BUDGET` overrides it.
pub fn step_budget() -> usize {
    static BUDGET: OnceLock<usize> = OnceLock::new();
    *BUDGET.get_or_init(|| {
        std::env::var("NCG_STEP_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_STEP_BUDGET)
    })
}

/// Exponent vector of an ordered monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u16; 4]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.0[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// Exponent-wise sum (the commutative shadow of the product).
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// Exponent-wise difference `self - other`, if nonnegative.
    pub fn quotient(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(Monomial)
    }

    /// Generator indices in ascending order, with multiplicity.
    pub fn word(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, usize::from(e)))
            .collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "z{}", i + 1)?;
            } else {
                write!(f, "z{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Rewriting order: total degree first, then exponents compared from the highest
/// generator down.
pub fn monomial_order(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.0.iter().rev().cmp(b.0.iter().rev()))
}

/// Sparse linear combination of monomials with [`Scalar`] coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(BTreeMap<Monomial, Scalar>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        Self::term(Monomial::one(n), c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.0.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.0.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.0 {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut out = Poly::zero();
        out.add_scaled(self, c);
        out
    }

    /// Leading monomial and coefficient under [`monomial_order`].
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.0.iter().max_by(|a, b| monomial_order(a.0, b.0))
    }

    pub fn max_degree(&self) -> u32 {
        self.0.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Substitutes `q = 1` in every coefficient.
    pub fn at_q_one(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            out.add_term(m.clone(), Scalar::constant(c.at_q_one()));
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::integer(-1));
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Scalar::integer(-1))
    }
}

fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (k, (m, c)) in p.0.iter().enumerate() {
        if k > 0 {
            write!(f, " + ")?;
        }
        if m.is_one() {
            write!(f, "[{c}]")?;
        } else if c.is_one() {
            write!(f, "{m}")?;
        } else {
            write!(f, "[{c}]*{m}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self, f)
    }
}

/// Oriented ideal relation `lhs -> rhs`; every monomial of `rhs` is smaller than
/// `lhs` under [`monomial_order`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Monomial,
    pub rhs: Poly,
}

pub struct Presentation {
    name: String,
    n: usize,
    /// `phase[i][j] = k` encodes `R^{ij} = q^k`.
    phase: Vec<Vec<i32>>,
    rules: Vec<RewriteRule>,
    cache: RwLock<HashMap<Monomial, Poly>>,
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presentation")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("phase", &self.phase)
            .field("rules", &self.rules)
            .finish()
    }
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.n == other.n
            && self.phase == other.phase
            && self.rules == other.rules
    }
}

impl Eq for Presentation {}

impl Presentation {
    /// Requires unimodular `R` with `R^{ij} R^{ji} = 1` on and off the diagonal,
    /// and checks the orientation of every rule.
    pub fn new(name: impl Into<String>, r: &[Vec<Scalar>], rules: Vec<RewriteRule>) -> Result<Self> {
        let n = r.len();
        if n == 0 {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        let mut phase = vec![vec![0i32; n]; n];
        for (i, row) in r.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidPresentation(format!("row {} of R has length {}", i + 1, row.len())));
            }
            for (j, entry) in row.iter().enumerate() {
                phase[i][j] = entry.as_unit_phase().ok_or_else(|| {
                    Error::InvalidPresentation(format!("R^{{{}{}}} = {entry} is not a pure phase", i + 1, j + 1))
                })?;
            }
        }
        for i in 0..n {
            if phase[i][i] != 0 {
                return Err(Error::InvalidPresentation(format!("R^{{{0}{0}}} != 1", i + 1)));
            }
            for j in 0..n {
                if phase[i][j] + phase[j][i] != 0 {
                    return Err(Error::InvalidPresentation(format!(
                        "R^{{{0}{1}}} R^{{{1}{0}}} != 1",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        for rule in &rules {
            if rule.lhs.n() != n || rule.rhs.terms().any(|(m, _)| m.n() != n) {
                return Err(Error::InvalidPresentation("rule has wrong number of generators".into()));
            }
            if rule.lhs.degree() != 2 {
                return Err(Error::InvalidPresentation(format!("rule lhs {} is not quadratic", rule.lhs)));
            }
            if let Some((m, _)) = rule.rhs.terms().find(|(m, _)| monomial_order(m, &rule.lhs) != Ordering::Less) {
                return Err(Error::InvalidPresentation(format!(
                    "rule {} -> {} does not decrease ({m} is not smaller)",
                    rule.lhs, rule.rhs
                )));
            }
        }
        Ok(Presentation {
            name: name.into(),
            n,
            phase,
            rules,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn free(name: impl Into<String>, r: &[Vec<Scalar>]) -> Result<Self> {
        Self::new(name, r, Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    /// `R^{ij}` with 0-based indices.
    pub fn r(&self, i: usize, j: usize) -> Scalar {
        Scalar::q_pow(self.phase[i][j])
    }

    pub fn phase(&self, i: usize, j: usize) -> i32 {
        self.phase[i][j]
    }

    pub fn r_matrix(&self) -> Vec<Vec<Scalar>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.r(i, j)).collect()).collect()
    }

    /// Phase `k` with `a * b = q^k (a b)` in the free algebra, where `a b` denotes
    /// the ordered monomial with summed exponents.
    pub fn product_phase(&self, a: &Monomial, b: &Monomial) -> i32 {
        let mut k = 0;
        for x in 0..self.n {
            if a.0[x] == 0 {
                continue;
            }
            for y in 0..x {
                k += i32::from(a.0[x]) * i32::from(b.0[y]) * self.phase[y][x];
            }
        }
        k
    }

    /// Phase `k` with `dz^form * m = q^k m dz^form`.
    pub fn twist_phase(&self, form: usize, m: &Monomial) -> i32 {
        m.0.iter()
            .enumerate()
            .map(|(j, &e)| i32::from(e) * self.phase[j][form])
            .sum()
    }

    /// Phase for pushing `m` leftwards through a whole word of 1-forms.
    pub fn word_twist_phase(&self, forms: &[u8], m: &Monomial) -> i32 {
        forms.iter().map(|&f| self.twist_phase(usize::from(f), m)).sum()
    }

    fn cached(&self, m: &Monomial) -> Option<Poly> {
        self.cache.read().expect("normal form cache poisoned").get(m).cloned()
    }

    fn reduce_monomial_inner(&self, m: &Monomial, steps: &mut usize) -> Result<Poly> {
        if self.rules.is_empty() {
            return Ok(Poly::term(m.clone(), Scalar::one()));
        }
        if let Some(p) = self.cached(m) {
            return Ok(p);
        }
        let Some(rule) = self.rules.iter().find(|r| r.lhs.divides(m)) else {
            return Ok(Poly::term(m.clone(), Scalar::one()));
        };
        *steps += 1;
        if *steps > step_budget() {
            return Err(Error::StepBudgetExceeded(step_budget()));
        }
        let rest = m.quotient(&rule.lhs).expect("lhs divides m");
        let lhs_phase = self.product_phase(&rule.lhs, &rest);
        let mut out = Poly::zero();
        for (rm, rc) in rule.rhs.terms() {
            let k = self.product_phase(rm, &rest) - lhs_phase;
            let sub = self.reduce_monomial_inner(&rm.times(&rest), steps)?;
            out.add_scaled(&sub, &rc.shift(k));
        }
        self.cache
            .write()
            .expect("normal form cache poisoned")
            .insert(m.clone(), out.clone());
        Ok(out)
    }

    pub fn reduce_monomial(&self, m: &Monomial) -> Result<Poly> {
        let mut steps = 0;
        self.reduce_monomial_inner(m, &mut steps)
    }

    /// Normal form of an arbitrary combination of ordered monomials.
    pub fn reduce(&self, p: &Poly) -> Result<Poly> {
        if self.rules.is_empty() {
            return Ok(p.clone());
        }
        let mut steps = 0;
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let r = self.reduce_monomial_inner(m, &mut steps)?;
            out.add_scaled(&r, c);
        }
        Ok(out)
    }

    pub fn is_irreducible(&self, m: &Monomial) -> bool {
        !self.rules.iter().any(|r| r.lhs.divides(m))
    }

    /// Normal form of `coeff * z^{w_1} ... z^{w_k}` (0-based generator indices).
    pub fn normal_form_poly(&self, word: &[usize], coeff: &Scalar) -> Result<Poly> {
        let mut m = Monomial::one(self.n);
        let mut k = 0;
        for &g in word {
            if g >= self.n {
                return Err(Error::ShapeMismatch(format!(
                    "generator index {} out of range for {} generators",
                    g + 1,
                    self.n
                )));
            }
            let z = Monomial::generator(self.n, g);
            k += self.product_phase(&m, &z);
            m = m.times(&z);
        }
        let mut steps = 0;
        Ok(self.reduce_monomial_inner(&m, &mut steps)?.scale(&coeff.shift(k)))
    }

    pub fn mul_poly(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        let mut steps = 0;
        let mut out = Poly::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let c = (ca * cb).shift(self.product_phase(ma, mb));
                let m = ma.times(mb);
                if self.rules.is_empty() {
                    out.add_term(m, c);
                } else {
                    let r = self.reduce_monomial_inner(&m, &mut steps)?;
                    out.add_scaled(&r, &c);
                }
            }
        }
        Ok(out)
    }

    /// Coefficients `(d_1 a, ..., d_n a)` of `da = sum_j d_j a dz^j` computed on the
    /// given representative (not reduced).
    pub fn partials_poly(&self, a: &Poly) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.n];
        for (m, c) in a.terms() {
            for g in 0..self.n {
                let e = m.0[g];
                if e == 0 {
                    continue;
                }
                let mut rest = m.clone();
                rest.0[g] -= 1;
                // Only the generators above g sit to the right of dz^g.
                let k: i32 = (g + 1..self.n).map(|j| i32::from(m.0[j]) * self.phase[j][g]).sum();
                out[g].add_term(rest, c.shift(k).scale(&crate::scalars::GaussianRational::from_integer(i64::from(e))));
            }
        }
        out
    }

    /// Adds the level-set rule obtained by orienting `f` at its leading monomial and
    /// inter-reduces the existing rules against it.
    pub fn with_level_rule(&self, name: impl Into<String>, f: &Poly) -> Result<Presentation> {
        let f = self.reduce(f)?;
        let (lm, lc) = f
            .leading()
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or_else(|| Error::InvalidPresentation("level function is zero".into()))?;
        let inv = lc
            .inverse()
            .ok_or_else(|| Error::InvalidPresentation(format!("leading coefficient {lc} is not invertible")))?;
        let mut tail = f.clone();
        tail.add_term(lm.clone(), -&lc);
        let new_rule = RewriteRule {
            lhs: lm,
            rhs: tail.scale(&-&inv),
        };
        if self.rules.iter().any(|r| new_rule.lhs.divides(&r.lhs)) {
            return Err(Error::InvalidPresentation(format!(
                "new rule {} overlaps an existing left-hand side",
                new_rule.lhs
            )));
        }
        let mut all = self.rules.clone();
        all.push(new_rule);
        let staging = Presentation::new("staging", &self.r_matrix(), all.clone())?;
        let mut rules = Vec::with_capacity(all.len());
        for rule in all {
            let rhs = staging.reduce(&rule.rhs)?;
            rules.push(RewriteRule { lhs: rule.lhs, rhs });
        }
        Presentation::new(name, &self.r_matrix(), rules)
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            name: Some(self.name.clone()),
            generators: self.n,
            r: self.r_matrix(),
            ideal: self
                .rules
                .iter()
                .map(|rule| IdealJson {
                    lhs: rule.lhs.word().into_iter().map(|g| g + 1).collect(),
                    rhs: PolyJson::from_poly(&rule.rhs),
                })
                .collect(),
        }
    }

    pub fn from_json(doc: &PresentationJson) -> Result<Presentation> {
        let n = doc.generators;
        if doc.r.len() != n {
            return Err(Error::InvalidPresentation(format!(
                "R has {} rows for {} generators",
                doc.r.len(),
                n
            )));
        }
        let free = Presentation::free("parse", &doc.r)?;
        let mut rules = Vec::with_capacity(doc.ideal.len());
        for rel in &doc.ideal {
            if rel.lhs.iter().any(|&g| g == 0 || g > n) {
                return Err(Error::InvalidPresentation(format!("lhs {:?} out of range", rel.lhs)));
            }
            let word: Vec<usize> = rel.lhs.iter().map(|g| g - 1).collect();
            // word = q^k * ordered monomial, so the monomial rewrites to q^-k rhs.
            let ordered = free.normal_form_poly(&word, &Scalar::one())?;
            let (lhs, c) = ordered.terms().next().map(|(m, c)| (m.clone(), c.clone())).expect("nonzero");
            let rhs = rel.rhs.to_poly(n)?;
            rules.push(RewriteRule {
                lhs,
                rhs: rhs.scale(&c.inverse().expect("unit phase")),
            });
        }
        Presentation::new(doc.name.clone().unwrap_or_else(|| "user".into()), &doc.r, rules)
    }
}

/// JSON form of a monomial combination: `{"terms": [{"exponents": [...], "coeff": ...}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exponents: Vec<u16>,
    pub coeff: Scalar,
}

impl PolyJson {
    pub fn from_poly(p: &Poly) -> Self {
        PolyJson {
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    exponents: m.exponents().to_vec(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self, n: usize) -> Result<Poly> {
        let mut p = Poly::zero();
        for t in &self.terms {
            if t.exponents.len() != n {
                return Err(Error::Parse(format!(
                    "monomial {:?} does not have {n} exponents",
                    t.exponents
                )));
            }
            p.add_term(Monomial::from_exponents(&t.exponents), t.coeff.clone());
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IdealJson {
    /// 1-based generator word of length 2.
    pub lhs: Vec<usize>,
    pub rhs: PolyJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PresentationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub generators: usize,
    #[serde(rename = "R")]
    pub r: Vec<Vec<Scalar>>,
    #[serde(default)]
    pub ideal: Vec<IdealJson>,
}

pub(crate) fn check_same(a: &Arc<Presentation>, b: &Arc<Presentation>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::PresentationMismatch(a.name.clone(), b.name.clone()))
    }
}

/// Element of a presented algebra in normal form.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    pres: Arc<Presentation>,
    poly: Poly,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        check_same(&self.pres, &other.pres).is_ok() && self.poly == other.poly
    }
}

impl AlgebraElement {
    /// Reduces `poly` to normal form.
    pub fn new(pres: &Arc<Presentation>, poly: &Poly) -> Result<Self> {
        Ok(AlgebraElement {
            pres: pres.clone(),
            poly: pres.reduce(poly)?,
        })
    }

    pub(crate) fn from_normal(pres: &Arc<Presentation>, poly: Poly) -> Self {
        AlgebraElement { pres: pres.clone(), poly }
    }

    pub fn zero(pres: &Arc<Presentation>) -> Self {
        Self::from_normal(pres, Poly::zero())
    }

    pub fn one(pres: &Arc<Presentation>) -> Self {
        Self::scalar(pres, Scalar::one())
    }

    pub fn scalar(pres: &Arc<Presentation>, c: Scalar) -> Self {
        Self::from_normal(pres, Poly::constant(pres.n(), c))
    }

    /// `z^{i+1}`; panics if `i` is out of range.
    pub fn generator(pres: &Arc<Presentation>, i: usize) -> Self {
        assert!(i < pres.n(), "generator index out of range");
        let m = Monomial::generator(pres.n(), i);
        Self::from_normal(pres, pres.reduce_monomial(&m).expect("single generator reduces"))
    }

    pub fn normal_form(pres: &Arc<Presentation>, word: &[usize], coeff: &Scalar) -> Result<Self> {
        Ok(Self::from_normal(pres, pres.normal_form_poly(word, coeff)?))
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_normal(&self.pres, self.poly.scale(c))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_same(&self.pres, &other.pres)?;
        Ok(Self::from_normal(&self.pres, &self.poly + &other.poly))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        check_same(&self.pres, &other.pres)?;
        Ok(Self::from_normal(&self.pres, &self.poly - &other.poly))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_same(&self.pres, &other.pres)?;
        Ok(Self::from_normal(&self.pres, self.pres.mul_poly(&self.poly, &other.poly)?))
    }

    /// `true` iff the element commutes with every generator.
    pub fn is_central(&self) -> Result<bool> {
        for j in 0..self.pres.n() {
            let z = Self::generator(&self.pres, j);
            if self.checked_mul(&z)? != z.checked_mul(self)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Re-reduces the representative in another presentation with the same
    /// generators, e.g. an ambient element pushed into a quotient.
    pub fn reduce_into(&self, target: &Arc<Presentation>) -> Result<Self> {
        if target.n() != self.pres.n() {
            return Err(Error::PresentationMismatch(self.pres.name.clone(), target.name.clone()));
        }
        Self::new(target, &self.poly)
    }

    /// `d_i a` with `da = sum_i d_i a dz^i`, read off the normal-form representative.
    pub fn partial_coeffs(&self) -> Result<Vec<AlgebraElement>> {
        self.pres
            .partials_poly(&self.poly)
            .into_iter()
            .map(|p| Self::new(&self.pres, &p))
            .collect()
    }

    /// `da` as a degree-1 element in left-normal form.
    pub fn differential(&self) -> Result<TensorElement> {
        let mut terms = BTreeMap::new();
        for (i, p) in self.partial_coeffs()?.into_iter().enumerate() {
            if !p.is_zero() {
                terms.insert(BasisWord::forms(&[i]), p.into_poly());
            }
        }
        Ok(TensorElement::from_terms(&self.pres, 1, false, terms))
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson::from_poly(&self.poly)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(&self.poly, f)
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_add(rhs).expect("algebra addition")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_sub(rhs).expect("algebra subtraction")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_mul(rhs).expect("algebra multiplication")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&Scalar::integer(-1))
    }
}

/// Algebra-level checks for a bare presentation: the defining commutation
/// relations and associativity of normal-form multiplication on generators.
pub fn verify_presentation(pres: &Arc<Presentation>) -> Report {
    let n = pres.n();
    let z = |i: usize| AlgebraElement::generator(pres, i);
    let pairs = (0..n).flat_map(|i| (0..n).map(move |j| (format!("z{}z{}", i + 1, j + 1), (i, j))));
    let commutation = Clause::over("commutation", pairs, |(i, j)| {
        let lhs = z(i).checked_mul(&z(j))?;
        let rhs = z(j).checked_mul(&z(i))?.scale(&pres.r(j, i));
        Ok(TensorElement::from_algebra(&lhs.checked_sub(&rhs)?))
    });
    let triples = (0..n).flat_map(|a| {
        (0..n).flat_map(move |b| (0..n).map(move |c| (format!("z{}z{}z{}", a + 1, b + 1, c + 1), (a, b, c))))
    });
    let associativity = Clause::over("associativity", triples, |(a, b, c)| {
        let left = z(a).checked_mul(&z(b))?.checked_mul(&z(c))?;
        let right = z(a).checked_mul(&z(b).checked_mul(&z(c))?)?;
        Ok(TensorElement::from_algebra(&left.checked_sub(&right)?))
    });
    Report::new(format!("presentation[{}]", pres.name()), vec![commutation, associativity])
}
