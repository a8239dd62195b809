//! Shared proptest strategies for unit tests.

use proptest::prelude::*;

use crate::algebra::{Monomial, Poly};
use crate::scalars::Scalar;

/// Small polynomial with integer coefficients and q-phases, exponents below 3.
pub(crate) fn arb_poly(n: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u16..3, n), -4i32..5, -3i64..4), 0..4).prop_map(|terms| {
        let mut p = Poly::zero();
        for (e, k, c) in terms {
            p.add_term(Monomial::from_exponents(&e), Scalar::integer(c).shift(k));
        }
        p
    })
}

/// Random generator word of length below `max_len`.
pub(crate) fn arb_word(n: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n, 0..max_len)
}
