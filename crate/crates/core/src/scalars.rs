//! Exact coefficients in `Q(i)[q, q^-1]`, where `q` stands for `e^{i theta / 4}`.
//!
//! Every constant the geometric layers need (`1/2`, `i`, `-3/2`, the R-matrix
//! phases `e^{+-i theta}` and the gamma-matrix phases `e^{+-i theta/4}`) lives in
//! this ring, so symbolic computations never touch floating point. Numeric values
//! only appear through [`Scalar::eval`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

fn checked_add(a: &Rational, b: &Rational) -> Rational {
    a.checked_add(b)
        .expect("rational overflow in exact arithmetic")
}

fn checked_mul(a: &Rational, b: &Rational) -> Rational {
    a.checked_mul(b)
        .expect("rational overflow in exact arithmetic")
}

/// Rational complex number `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(Rational::from_integer(n), Rational::zero())
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = checked_add(&checked_mul(&self.re, &self.re), &checked_mul(&self.im, &self.im));
        Some(Self::new(self.re / norm, -self.im / norm))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(checked_add(&self.re, &rhs.re), checked_add(&self.im, &rhs.im))
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        let rr = checked_mul(&self.re, &rhs.re);
        let ii = checked_mul(&self.im, &rhs.im);
        let ri = checked_mul(&self.re, &rhs.im);
        let ir = checked_mul(&self.im, &rhs.re);
        GaussianRational::new(checked_add(&rr, &-ii), checked_add(&ri, &ir))
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "({} {} {}i)", self.re, sign, self.im.abs())
            }
        }
    }
}

/// Sparse Laurent polynomial `sum_k c_k q^k` with Gaussian-rational coefficients.
///
/// Terms are kept sorted by exponent with no zero coefficients, so derived
/// equality is ring equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    terms: Vec<(i32, GaussianRational)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(GaussianRational::from_integer(n))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::constant(GaussianRational::new(Rational::new(num, den), Rational::zero()))
    }

    /// `c q^k`
    pub fn monomial(k: i32, c: GaussianRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(k, c)] }
        }
    }

    /// `q^k`
    pub fn q_pow(k: i32) -> Self {
        Self::monomial(k, GaussianRational::one())
    }

    /// Builds a scalar from arbitrary `(exponent, coefficient)` pairs, merging
    /// duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i32, GaussianRational)>>(terms: I) -> Self {
        let mut v: Vec<(i32, GaussianRational)> = terms.into_iter().collect();
        v.sort_by_key(|(k, _)| *k);
        let mut out: Vec<(i32, GaussianRational)> = Vec::with_capacity(v.len());
        for (k, c) in v {
            match out.last_mut() {
                Some((lk, lc)) if *lk == k => *lc = &*lc + &c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(i32, GaussianRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Exponent `k` if the scalar is exactly `q^k`.
    pub fn as_unit_phase(&self) -> Option<i32> {
        match self.terms.as_slice() {
            [(k, c)] if c.is_one() => Some(*k),
            _ => None,
        }
    }

    /// Inverse of a single-term scalar `c q^k`; general Laurent polynomials are
    /// not units of the ring.
    pub fn inverse(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [(k, c)] => Some(Scalar::monomial(-k, c.inverse()?)),
            _ => None,
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        if k == 0 {
            return self.clone();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Complex conjugation at real theta: `q -> q^-1`, `i -> -i`.
    pub fn conjugate(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (-k, c.conj())))
    }

    /// Substitutes `q = e^{i theta / 4}`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, c)| c.to_complex() * Complex64::from_polar(1.0, theta * f64::from(*k) / 4.0))
            .sum()
    }

    /// Exact value at `theta = 0`, i.e. `q = 1`.
    pub fn at_q_one(&self) -> GaussianRational {
        self.terms
            .iter()
            .fold(GaussianRational::zero(), |acc, (_, c)| &acc + c)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::integer(n)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Scalar { terms: out }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    // q-exponents add under multiplication.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if let [(k, c)] = self.terms.as_slice() {
            return rhs.scale(c).shift(*k);
        }
        if let [(k, c)] = rhs.terms.as_slice() {
            return self.scale(c).shift(*k);
        }
        Scalar::from_terms(
            self.terms
                .iter()
                .flat_map(|(ka, ca)| rhs.terms.iter().map(move |(kb, cb)| (ka + kb, ca * cb))),
        )
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*q")?,
                _ => write!(f, "{c}*q^{k}")?,
            }
        }
        Ok(())
    }
}

fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

// Wire format: {"terms": [[k, "re", "im"], ...]} with "p/q" rationals.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            terms: Vec<(i32, String, String)>,
        }
        Wire {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, rational_to_string(&c.re), rational_to_string(&c.im)))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            terms: Vec<(i32, String, String)>,
        }
        let wire = Wire::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(wire.terms.len());
        for (k, re, im) in wire.terms {
            let re = parse_rational(&re).map_err(D::Error::custom)?;
            let im = parse_rational(&im).map_err(D::Error::custom)?;
            terms.push((k, GaussianRational::new(re, im)));
        }
        Ok(Scalar::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn half() -> Scalar {
        Scalar::rational(1, 2)
    }

    #[test]
    fn arithmetic_examples() {
        assert!((Scalar::q_pow(2) * Scalar::q_pow(-2)).is_one());
        assert_eq!(Scalar::q_pow(4) * Scalar::q_pow(4), Scalar::q_pow(8));
        assert!((half() + half()).is_one());
        assert!((Scalar::i() * Scalar::i() + Scalar::one()).is_zero());
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(Scalar::q_pow(4).conjugate(), Scalar::q_pow(-4));
        let iq = Scalar::i() * Scalar::q_pow(1);
        assert_eq!(iq.conjugate(), -(Scalar::i() * Scalar::q_pow(-1)));
    }

    #[test]
    fn eval_examples() {
        let one = Scalar::q_pow(4).eval(0.0);
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let minus_one = Scalar::q_pow(4).eval(std::f64::consts::PI);
        assert!((minus_one - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn unit_phase_detection() {
        assert_eq!(Scalar::q_pow(-4).as_unit_phase(), Some(-4));
        assert_eq!(Scalar::one().as_unit_phase(), Some(0));
        assert_eq!(Scalar::integer(2).as_unit_phase(), None);
        assert_eq!((Scalar::q_pow(1) + Scalar::q_pow(2)).as_unit_phase(), None);
    }

    #[test]
    fn json_wire_format() {
        let s = Scalar::rational(1, 2) + Scalar::i() * Scalar::q_pow(-4);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"terms":[[-4,"0/1","1/1"],[0,"1/2","0/1"]]}"#);
        let back: Scalar = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let loose: Scalar = serde_json::from_str(r#"{"terms":[[1,"3","0"],[1,"-3","0"]]}"#).unwrap();
        assert!(loose.is_zero());
        assert!(serde_json::from_str::<Scalar>(r#"{"terms":[[0,"1/0","0"]]}"#).is_err());
    }

    fn arb_gauss() -> impl Strategy<Value = GaussianRational> {
        (-6i64..6, 1i64..5, -6i64..6, 1i64..5)
            .prop_map(|(a, b, c, d)| GaussianRational::new(Rational::new(a, b), Rational::new(c, d)))
    }

    pub(crate) fn arb_scalar() -> impl Strategy<Value = Scalar> {
        proptest::collection::vec((-6i32..6, arb_gauss()), 0..4).prop_map(Scalar::from_terms)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn conjugate_is_involutive_automorphism(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
            prop_assert_eq!((&a + &b).conjugate(), &a.conjugate() + &b.conjugate());
        }

        #[test]
        fn eval_is_homomorphism(a in arb_scalar(), b in arb_scalar(), t in 0usize..3) {
            let theta = [0.0, 0.7, 2.3][t];
            let sum = (&a + &b).eval(theta) - (a.eval(theta) + b.eval(theta));
            let prod = (&a * &b).eval(theta) - a.eval(theta) * b.eval(theta);
            prop_assert!(sum.norm() < 1e-12);
            prop_assert!(prod.norm() < 1e-12);
        }
    }
}
