//! Exact symbolic engine for noncommutative Riemannian spin geometry on
//! quasi-commutative algebras, together with the hypersurface construction that
//! induces metrics, connections, Clifford actions and Dirac operators on level-set
//! quotients.
//!
//! The layers build on each other bottom-up:
//!
//! * [`scalars`]: the coefficient ring `Q(i)[q, q^-1]` with `q = e^{i theta/4}`.
//! * [`algebra`]: presented quasi-commutative algebras and their normal forms.
//! * [`tensormod`]: free left modules of forms and spinors with the twisted right action.
//! * [`geometry`] and [`spin`]: Riemannian and spinorial structures plus verifiers.
//! * [`hypersurface`]: the induction of all structures onto a level-set quotient.
//! * [`catalog`]: the built-in chain `R4 -> S3 -> T2`.
//! * [`spectrum`]: numeric sector spectra of the torus Dirac operator.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod geometry;
pub mod hypersurface;
pub mod report;
pub mod scalars;
pub mod spectrum;
pub mod spin;
pub mod tensormod;

#[cfg(test)]
mod testing;

pub use algebra::{AlgebraElement, Monomial, Poly, Presentation, RewriteRule};
pub use error::{Error, Result};
pub use scalars::{GaussianRational, Scalar};
pub use tensormod::{BasisWord, LeftLinearMap, TensorElement};
