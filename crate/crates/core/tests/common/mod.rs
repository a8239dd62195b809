#![allow(dead_code)]

pub mod oracle;

use std::sync::Arc;

use ncspin::{AlgebraElement, BasisWord, Monomial, Poly, Presentation, Scalar, TensorElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let c = loop {
        let c = rng.random_range(-3i64..=3);
        if c != 0 {
            break c;
        }
    };
    Scalar::integer(c).shift(rng.random_range(-4..=4))
}

/// Sum of up to `max_terms` monomials of total degree at most `max_deg`.
pub fn random_element(rng: &mut ChaCha8Rng, pres: &Arc<Presentation>, max_deg: usize, max_terms: usize) -> AlgebraElement {
    let n = pres.n();
    let mut p = Poly::zero();
    for _ in 0..rng.random_range(1..=max_terms) {
        let deg = rng.random_range(0..=max_deg);
        let mut e = vec![0u16; n];
        for _ in 0..deg {
            e[rng.random_range(0..n)] += 1;
        }
        p.add_term(Monomial::from_exponents(&e), random_scalar(rng));
    }
    AlgebraElement::new(pres, &p).expect("random element reduces")
}

pub fn random_spinor(rng: &mut ChaCha8Rng, pres: &Arc<Presentation>, max_deg: usize) -> TensorElement {
    let mut s = TensorElement::zero(pres, 0, true);
    for alpha in 0..4 {
        if rng.random_bool(0.7) {
            let a = random_element(rng, pres, max_deg, 2);
            s = &s + &TensorElement::term(&a, BasisWord::spinor(&[], alpha));
        }
    }
    s
}

pub fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Vec<usize> {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| rng.random_range(0..n)).collect()
}
