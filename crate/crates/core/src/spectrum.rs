//! Numeric spectrum of the torus Dirac operator `D̃_C` by momentum sectors.
//!
//! A torus monomial has momentum `(p, r)`: `z¹` and `z³` carry `(±1, 0)`,
//! `z²` and `z⁴` carry `(0, ±1)`. Sector `(m, n)` is spanned by four spinors
//! whose coefficient momenta are shifted so that every Clifford term stays
//! inside the sector.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Monomial, Poly};
use crate::catalog::{dtilde_apply, SpaceBundle};
use crate::error::{Error, Result};
use crate::scalars::Scalar;
use crate::tensormod::{BasisWord, TensorElement};

/// Imaginary parts above this are reported as deviations.
const IMAG_TOL: f64 = 1e-9;

/// Coefficient momenta of the four spinor components in sector `(m, n)`.
pub fn sector_momenta(m: i64, n: i64) -> [(i64, i64); 4] {
    [(m, n), (m + 1, n + 1), (m, n + 1), (m + 1, n)]
}

/// The unique irreducible torus monomial of momentum `(p, r)`.
pub fn momentum_monomial(p: i64, r: i64) -> Monomial {
    let e = |x: i64| u16::try_from(x.max(0)).expect("momentum fits u16");
    Monomial::from_exponents(&[e(p), e(r), e(-p), e(-r)])
}

/// The momentum of a monomial.
pub fn momentum(m: &Monomial) -> (i64, i64) {
    let e = m.exponents();
    (i64::from(e[0]) - i64::from(e[2]), i64::from(e[1]) - i64::from(e[3]))
}

/// The spinor `z^{(p,r)} e_α`.
pub fn momentum_spinor(t2: &SpaceBundle, p: i64, r: i64, alpha: usize) -> TensorElement {
    let pres = t2.presentation();
    let a = AlgebraElement::new(pres, &Poly::term(momentum_monomial(p, r), Scalar::one())).expect("monomial reduces");
    TensorElement::term(&a, BasisWord::spinor(&[], alpha))
}

/// Exact sector matrix: entry `[β][α]` is the scalar with
/// `D̃_C(z^{k_α} e_α) = Σ_β entry · z^{k_β} e_β`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicSector {
    pub m: i64,
    pub n: i64,
    pub entries: [[Scalar; 4]; 4],
}

impl SymbolicSector {
    pub fn eval(&self, theta: f64) -> SectorMatrix {
        SectorMatrix {
            m: self.m,
            n: self.n,
            theta,
            entries: Matrix4::from_fn(|r, c| self.entries[r][c].eval(theta)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectorMatrix {
    pub m: i64,
    pub n: i64,
    pub theta: f64,
    pub entries: Matrix4<Complex64>,
}

impl SectorMatrix {
    /// Eigenvalues as complex numbers, sorted by real part.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let mut ev: Vec<Complex64> = self
            .entries
            .schur()
            .eigenvalues()
            .expect("4x4 complex Schur form is triangular")
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        ev
    }
}

/// `√2 √((m+½)² + (n+½)²)`.
pub fn closed_form(m: i64, n: i64) -> f64 {
    let (a, b) = (m as f64 + 0.5, n as f64 + 0.5);
    (2.0 * (a * a + b * b)).sqrt()
}

/// Applies `D̃_C` to the sector basis and factors the momentum monomials back out.
pub fn symbolic_sector(t2: &SpaceBundle, m: i64, n: i64) -> Result<SymbolicSector> {
    let momenta = sector_momenta(m, n);
    let mut entries: [[Scalar; 4]; 4] = Default::default();
    for (alpha, &(p, r)) in momenta.iter().enumerate() {
        let image = dtilde_apply(t2, &momentum_spinor(t2, p, r, alpha))?;
        for (w, c) in image.terms() {
            let beta = w.spinor_index().expect("spinor output");
            let want = momentum_monomial(momenta[beta].0, momenta[beta].1);
            for (mono, x) in c.terms() {
                if *mono != want {
                    return Err(Error::SectorEscape { m, n });
                }
                entries[beta][alpha] = x.clone();
            }
        }
    }
    Ok(SymbolicSector { m, n, entries })
}

pub fn sector_matrix(t2: &SpaceBundle, m: i64, n: i64, theta: f64) -> Result<SectorMatrix> {
    Ok(symbolic_sector(t2, m, n)?.eval(theta))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: f64,
    pub m: i64,
    pub n: i64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub theta: f64,
    pub mmax: i64,
    pub eigenvalues: Vec<Eigenvalue>,
    pub max_deviation: f64,
    #[serde(default)]
    pub fallback_used: bool,
}

impl SpectrumReport {
    pub fn passed(&self, tol: f64) -> bool {
        !self.fallback_used && self.max_deviation < tol
    }

    pub fn values(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.value).collect()
    }

    /// Plain-text table, one eigenvalue per line.
    pub fn table(&self) -> String {
        let mut out = format!("theta = {}  mmax = {}\n{:>5} {:>5} {:>22} {:>12}\n", self.theta, self.mmax, "m", "n", "value", "deviation");
        for e in &self.eigenvalues {
            out.push_str(&format!("{:>5} {:>5} {:>22.15} {:>12.3e}\n", e.m, e.n, e.value, e.deviation));
        }
        out.push_str(&format!("max deviation {:.3e}{}\n", self.max_deviation, if self.fallback_used { " (fallback)" } else { "" }));
        out
    }
}

fn deviation(z: Complex64, target: f64) -> f64 {
    let d = (z.re.abs() - target).abs();
    if z.im.abs() > IMAG_TOL {
        d.max(z.im.abs())
    } else {
        d
    }
}

fn sorted(mut eigenvalues: Vec<Eigenvalue>, theta: f64, mmax: i64, fallback_used: bool) -> SpectrumReport {
    eigenvalues.sort_by(|a, b| a.value.total_cmp(&b.value).then((a.m, a.n).cmp(&(b.m, b.n))));
    let max_deviation = eigenvalues.iter().map(|e| e.deviation).fold(0.0, f64::max);
    SpectrumReport {
        theta,
        mmax,
        eigenvalues,
        max_deviation,
        fallback_used,
    }
}

fn sectors(mmax: i64) -> Vec<(i64, i64)> {
    (-mmax..=mmax).flat_map(|m| (-mmax..=mmax).map(move |n| (m, n))).collect()
}

/// Exact sector matrices for `|m|, |n| ≤ mmax`, computed once and reusable for any `θ`.
pub fn symbolic_sectors(t2: &SpaceBundle, mmax: i64) -> Result<Vec<SymbolicSector>> {
    sectors(mmax).into_par_iter().map(|(m, n)| symbolic_sector(t2, m, n)).collect()
}

/// Numeric spectrum from precomputed sectors.
pub fn spectrum_from_sectors(sectors: &[SymbolicSector], mmax: i64, theta: f64) -> SpectrumReport {
    let eigenvalues = sectors
        .par_iter()
        .flat_map_iter(|s| {
            let target = closed_form(s.m, s.n);
            s.eval(theta).eigenvalues().into_iter().map(move |z| Eigenvalue {
                value: z.re,
                m: s.m,
                n: s.n,
                deviation: deviation(z, target),
            })
        })
        .collect();
    sorted(eigenvalues, theta, mmax, false)
}

/// Union of sector spectra for `|m|, |n| ≤ mmax`, each matched to the closed
/// form. Falls back to a truncated operator if some sector is not preserved.
pub fn spectrum_scan(t2: &SpaceBundle, mmax: i64, theta: f64) -> Result<SpectrumReport> {
    if mmax < 0 {
        return Err(Error::ShapeMismatch(format!("mmax must be non-negative, got {mmax}")));
    }
    match symbolic_sectors(t2, mmax) {
        Ok(s) => Ok(spectrum_from_sectors(&s, mmax, theta)),
        Err(Error::SectorEscape { .. }) => truncated_spectrum(t2, mmax, theta),
        Err(e) => Err(e),
    }
}

/// Dense operator on all momentum spinors with `|p|, |r| ≤ mmax + 1`. Output
/// terms outside the window are dropped; eigenvalues far from every closed-form
/// value in range are treated as edge effects and discarded.
pub fn truncated_spectrum(t2: &SpaceBundle, mmax: i64, theta: f64) -> Result<SpectrumReport> {
    let w = mmax + 1;
    let basis: Vec<(i64, i64, usize)> = (-w..=w)
        .flat_map(|p| (-w..=w).flat_map(move |r| (0..4).map(move |a| (p, r, a))))
        .collect();
    let index = |p: i64, r: i64, a: usize| -> Option<usize> {
        (p.abs() <= w && r.abs() <= w).then(|| (((p + w) * (2 * w + 1) + (r + w)) * 4) as usize + a)
    };
    let columns: Vec<Vec<(usize, Complex64)>> = basis
        .par_iter()
        .map(|&(p, r, a)| -> Result<Vec<(usize, Complex64)>> {
            let image = dtilde_apply(t2, &momentum_spinor(t2, p, r, a))?;
            let mut col = Vec::new();
            for (word, c) in image.terms() {
                let beta = word.spinor_index().expect("spinor output");
                for (mono, x) in c.terms() {
                    let (pp, rr) = momentum(mono);
                    if let Some(row) = index(pp, rr, beta) {
                        col.push((row, x.eval(theta)));
                    }
                }
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let dim = basis.len();
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for (c, col) in columns.into_iter().enumerate() {
        for (r, x) in col {
            mat[(r, c)] += x;
        }
    }
    let targets: Vec<(i64, i64, f64)> = sectors(mmax).into_iter().map(|(m, n)| (m, n, closed_form(m, n))).collect();
    let ev = mat.schur().eigenvalues().ok_or_else(|| Error::ShapeMismatch("Schur decomposition failed".into()))?;
    let edge = 1e-6;
    let eigenvalues = ev
        .iter()
        .filter_map(|&z| {
            let (m, n, t) = *targets
                .iter()
                .min_by(|a, b| deviation(z, a.2).total_cmp(&deviation(z, b.2)))
                .expect("nonempty range");
            let d = deviation(z, t);
            (d < edge).then_some(Eigenvalue { value: z.re, m, n, deviation: d })
        })
        .collect();
    Ok(sorted(eigenvalues, theta, mmax, true))
}
