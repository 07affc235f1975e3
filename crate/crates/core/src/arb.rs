//! Proptest strategies for the unit tests.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::harness::gen_labeling;
use crate::labeled::{label_initial, LTerm};
use crate::names::{Barrier, NameSet};
use crate::term::Term;

const FREE: &[&str] = &["x", "y", "z", "w"];
const BOUND: &[&str] = &["x", "y", "f", "g"];

/// Small plain terms, biased towards redexes, in Barendregt form.
pub fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop::sample::select(FREE).prop_map(Term::var);
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (prop::sample::select(BOUND), inner.clone()).prop_map(|(x, b)| Term::abs(x, b)),
            (prop::sample::select(BOUND), inner.clone(), inner).prop_map(|(x, b, a)| Term::app(Term::abs(x, b), a)),
        ]
    })
    .prop_map(|t| t.normalized(&NameSet::new()))
}

pub fn arb_barrier() -> impl Strategy<Value = Barrier> {
    prop::sample::subsequence(FREE, 0..=2).prop_map(Barrier::new)
}

/// The initial labeling or a random one.
pub fn arb_labeled() -> impl Strategy<Value = LTerm> {
    (arb_term(), any::<Option<u64>>()).prop_map(|(m, seed)| match seed {
        None => label_initial(&m),
        Some(seed) => gen_labeling(&m, &mut ChaCha8Rng::seed_from_u64(seed)),
    })
}
