//! Entry points for supersteps on plain and labeled terms, the complete
//! superstep, lifting plain derivations to labeled ones, diamond joins and
//! joins of weak-reduction peaks.

use crate::engine::{self, Derivation, Rule, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::labeled::{label_initial, LTerm, Label, LabelSupply};
use crate::lambda::Lambda;
use crate::names::{Barrier, NameSet};
use crate::term::Term;

/// `{ N : M ⇛{S,k} N }`
pub fn enumerate_supersteps(m: &Term, s: &Barrier, k: usize) -> Result<Vec<Term>> {
    engine::enumerate(m, s, k, DEFAULT_CAP)
}

pub fn derive_superstep(m: &Term, n: &Term, s: &Barrier, k: usize) -> Result<Option<Derivation<Term>>> {
    engine::derive(m, n, s, k, DEFAULT_CAP)
}

/// `{ B : A ⇛ℓ{S,k} B }`
pub fn enumerate_labeled_supersteps(a: &LTerm, s: &Barrier, k: usize) -> Result<Vec<LTerm>> {
    engine::enumerate(a, s, k, DEFAULT_CAP)
}

pub fn derive_labeled_superstep(a: &LTerm, b: &LTerm, s: &Barrier, k: usize) -> Result<Option<Derivation<LTerm>>> {
    engine::derive(a, b, s, k, DEFAULT_CAP)
}

/// `A⇓{S,k}`; always defined at `k = 0`.
pub fn full_superdev(a: &LTerm, s: &Barrier, k: usize) -> Option<LTerm> {
    engine::full(a, s, k)
}

/// The complete superstep of `m`, computed on its initial labeling.
pub fn complete_superstep(m: &Term, s: &Barrier) -> Term {
    full_superdev(&label_initial(m), s, 0)
        .expect("the k = 0 superdevelopment is total")
        .erase()
        .normalized(&s.set())
}

/// The complete superstep computed directly on the plain term, where every
/// application matches every abstraction.
pub fn plain_complete_superstep(m: &Term, s: &Barrier) -> Term {
    engine::full(m, s, 0).expect("the k = 0 superdevelopment is total")
}

/// A labeled derivation that erases to `d`. Abstractions get pairwise
/// distinct labels; an application fired by `App2` takes the label of the
/// abstraction its function side produces, every other one a fresh label.
pub fn lift_derivation(d: &Derivation<Term>) -> Result<Derivation<LTerm>> {
    let mut supply = LabelSupply::new(NameSet::new());
    lift(d, &mut supply)
}

fn lift(d: &Derivation<Term>, supply: &mut LabelSupply) -> Result<Derivation<LTerm>> {
    let premises = d
        .premises
        .iter()
        .map(|p| lift(p, supply))
        .collect::<Result<Vec<_>>>()?;
    let (source, target) = match (&d.source, d.rule, &premises[..]) {
        (Term::Var(x), Rule::Var, []) => (LTerm::Var(x.clone()), LTerm::Var(x.clone())),
        (Term::Abs(x, _), Rule::Abs1 | Rule::Abs2, [p]) => {
            let l = Label::Name(supply.fresh());
            (
                LTerm::Abs(l.clone(), x.clone(), Box::new(p.source.clone())),
                LTerm::Abs(l, x.clone(), Box::new(p.target.clone())),
            )
        }
        (Term::App(..), Rule::App1, [pf, pa]) => {
            let c = supply.fresh();
            (
                LTerm::App(c.clone(), Box::new(pf.source.clone()), Box::new(pa.source.clone())),
                LTerm::App(c, Box::new(pf.target.clone()), Box::new(pa.target.clone())),
            )
        }
        (Term::App(..), Rule::App2 { .. }, [pf, pa]) => {
            let LTerm::Abs(Label::Name(a), x, body) = &pf.target else {
                return Err(Error::Internal(format!("cannot label the head of {}", pf.target)));
            };
            let l = Label::Name(a.clone());
            let target = LTerm::fire(&l, &l, x, body, &pa.target, &d.barrier.set())
                .expect("labels match")
                .normalized(&d.barrier.set());
            (
                LTerm::App(a.clone(), Box::new(pf.source.clone()), Box::new(pa.source.clone())),
                target,
            )
        }
        _ => return Err(Error::Internal(format!("malformed derivation node {}", d.rule))),
    };
    Ok(Derivation {
        rule: d.rule,
        barrier: d.barrier.clone(),
        k: d.k,
        source,
        target,
        premises,
    })
}

/// A peak `B1 ⇚ A ⇛ B2` at `k = 0` closed by `A⇓{S,0}`.
#[derive(Clone, Debug)]
pub struct DiamondJoin {
    pub join: LTerm,
    pub left: Option<Derivation<LTerm>>,
    pub right: Option<Derivation<LTerm>>,
}

impl DiamondJoin {
    /// Both legs into the join are supersteps.
    pub fn verified(&self) -> bool {
        self.left.is_some() && self.right.is_some()
    }
}

pub fn diamond_join(a: &LTerm, b1: &LTerm, b2: &LTerm, s: &Barrier) -> Result<DiamondJoin> {
    for (which, b) in [("left", b1), ("right", b2)] {
        if derive_labeled_superstep(a, b, s, 0)?.is_none() {
            return Err(Error::PremisesNotDerivable(format!("{which}: {a} does not superstep to {b}")));
        }
    }
    let join = full_superdev(a, s, 0).expect("the k = 0 superdevelopment is total");
    Ok(DiamondJoin {
        left: derive_labeled_superstep(b1, &join, s, 0)?,
        right: derive_labeled_superstep(b2, &join, s, 0)?,
        join,
    })
}

/// Iterates complete supersteps from both terms for up to `rounds` rounds
/// each and returns the first common term with the rounds spent on each side.
pub fn join_peak(n1: &Term, n2: &Term, s: &Barrier, rounds: usize) -> Option<(Term, usize, usize)> {
    let orbit = |t: &Term| {
        let mut out = vec![t.clone()];
        for _ in 0..rounds {
            let next = complete_superstep(out.last().unwrap(), s);
            out.push(next);
        }
        out
    };
    let o1 = orbit(n1);
    let o2 = orbit(n2);
    for total in 0..=2 * rounds {
        for i in 0..=total.min(rounds) {
            let j = total - i;
            if j <= rounds && o1[i] == o2[j] {
                return Some((o1[i].clone(), i, j));
            }
        }
    }
    None
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::arb::{arb_barrier, arb_term};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn both_routes_agree(m in arb_term(), s in arb_barrier()) {
            prop_assert_eq!(complete_superstep(&m, &s), plain_complete_superstep(&m, &s));
        }

        #[test]
        fn single_peaks_close(m in arb_term(), s in arb_barrier()) {
            let a = label_initial(&m);
            let Ok(targets) = enumerate_labeled_supersteps(&a, &s, 0) else { return Ok(()) };
            for b in targets.iter().take(4) {
                prop_assert!(diamond_join(&a, b, &a, &s).unwrap().verified());
            }
        }
    }
}
