//! Brute-force normal forms by exhaustive one-step rewriting of words.
//!
//! A step is one of: a descending adjacent pair `z^i z^j` (i > j) becomes
//! `R^{ji} z^j z^i`; an adjacent pair matching a rule's generators (in either
//! order) is replaced by the rule's right-hand side; in a word with no adjacent
//! redex, an occurrence of one rule generator is walked next to an occurrence
//! of the other, one transposition at a time, and the rule is applied. Every
//! applicable step is tried at every reachable word and all of them must lead
//! to the same result.

use std::collections::{BTreeMap, HashMap};

use ncspin::{Monomial, Presentation, Scalar};

pub type Form = BTreeMap<Vec<usize>, Scalar>;

struct Rule {
    a: usize,
    b: usize,
    rhs: Vec<(Vec<usize>, Scalar)>,
}

fn rules(pres: &Presentation) -> Vec<Rule> {
    pres.rules()
        .iter()
        .map(|r| {
            let w = r.lhs.word();
            Rule {
                a: w[0],
                b: w[1],
                rhs: r.rhs.terms().map(|(m, c)| (m.word(), c.clone())).collect(),
            }
        })
        .collect()
}

/// Every one-step successor of `word` as a linear combination of words.
fn steps(pres: &Presentation, word: &[usize], rules: &[Rule]) -> Vec<Vec<(Vec<usize>, Scalar)>> {
    let mut out = Vec::new();
    for k in 0..word.len().saturating_sub(1) {
        let (x, y) = (word[k], word[k + 1]);
        if x > y {
            let mut w = word.to_vec();
            w.swap(k, k + 1);
            out.push(vec![(w, pres.r(y, x))]);
        }
        for rule in rules {
            if (x, y) == (rule.a, rule.b) || (x, y) == (rule.b, rule.a) {
                out.push(apply_rule(pres, word, k, rule, Scalar::one()));
            }
        }
    }
    if out.is_empty() {
        for rule in rules {
            for (pa, _) in word.iter().enumerate().filter(|(_, &g)| g == rule.a) {
                for (pb, _) in word.iter().enumerate().filter(|(_, &g)| g == rule.b) {
                    if pa.abs_diff(pb) > 1 {
                        let (lo, hi) = (pa.min(pb), pa.max(pb));
                        let (w, phase) = bridge(pres, word, lo, hi);
                        out.push(apply_rule(pres, &w, lo, rule, phase));
                    }
                }
            }
        }
    }
    out
}

/// Replaces the rule's generator pair at `k` by the right-hand side.
fn apply_rule(pres: &Presentation, word: &[usize], k: usize, rule: &Rule, phase: Scalar) -> Vec<(Vec<usize>, Scalar)> {
    let lead = if word[k] == rule.a { phase } else { &phase * &pres.r(rule.a, rule.b) };
    rule.rhs
        .iter()
        .map(|(rw, rc)| {
            let mut next = word[..k].to_vec();
            next.extend_from_slice(rw);
            next.extend_from_slice(&word[k + 2..]);
            (next, &lead * rc)
        })
        .collect()
}

/// Walks `word[hi]` leftwards until it sits at `lo + 1`.
fn bridge(pres: &Presentation, word: &[usize], lo: usize, hi: usize) -> (Vec<usize>, Scalar) {
    let mut w = word.to_vec();
    let mut phase = Scalar::one();
    for k in (lo + 1..hi).rev() {
        // w[k] w[k+1] = R^{w[k+1], w[k]} w[k+1] w[k]
        phase = &phase * &pres.r(w[k + 1], w[k]);
        w.swap(k, k + 1);
    }
    (w, phase)
}

/// Memoized exhaustive rewriting; `Err` names a word whose steps disagree.
pub struct Oracle<'a> {
    pres: &'a Presentation,
    rules: Vec<Rule>,
    memo: HashMap<Vec<usize>, Form>,
}

impl<'a> Oracle<'a> {
    pub fn new(pres: &'a Presentation) -> Self {
        Oracle {
            pres,
            rules: rules(pres),
            memo: HashMap::new(),
        }
    }

    pub fn normal_form(&mut self, word: &[usize]) -> Result<Form, String> {
        if let Some(f) = self.memo.get(word) {
            return Ok(f.clone());
        }
        let options = steps(self.pres, word, &self.rules);
        let mut result: Option<Form> = None;
        if options.is_empty() {
            result = Some(BTreeMap::from([(word.to_vec(), Scalar::one())]));
        }
        for succ in options {
            let mut acc = Form::new();
            for (w, c) in succ {
                for (m, x) in self.normal_form(&w)? {
                    *acc.entry(m).or_insert_with(Scalar::zero) += &(&c * &x);
                }
            }
            acc.retain(|_, c| !c.is_zero());
            match &result {
                Some(r) if *r != acc => return Err(format!("rewrite orders disagree on {word:?}")),
                Some(_) => {}
                None => result = Some(acc),
            }
        }
        let result = result.expect("at least one outcome");
        self.memo.insert(word.to_vec(), result.clone());
        Ok(result)
    }
}

/// The engine's normal form in the same shape.
pub fn engine_normal_form(pres: &Presentation, word: &[usize]) -> Form {
    pres.normal_form_poly(word, &Scalar::one())
        .expect("normal form")
        .terms()
        .map(|(m, c): (&Monomial, &Scalar)| (m.word(), c.clone()))
        .collect()
}
