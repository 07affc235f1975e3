//! Weak reduction: a redex may be contracted only when its free variables
//! avoid every binder above it and the barrier.

use crate::error::{Error, Result};
use crate::lambda;
use crate::names::Barrier;
use crate::term::{Position, Term};
use crate::trace::{Normalization, ReductionStep, ReductionTrace, TraceStatus};

/// Weak redex positions under `s`, leftmost-outermost first.
pub fn weak_redexes(m: &Term, s: &Barrier) -> Vec<Position> {
    lambda::redexes(m, s)
}

pub fn weak_contract(m: &Term, p: &Position, s: &Barrier) -> Result<Term> {
    lambda::contract(m, p, s).ok_or_else(|| Error::NotAWeakRedex(p.clone()))
}

/// Leftmost-outermost normalization, at most `fuel` steps.
pub fn weak_normalize(m: &Term, s: &Barrier, fuel: usize) -> Normalization<Term> {
    let mut trace = ReductionTrace::new(s.clone(), m.normalized(&s.set()));
    loop {
        let cur = trace.end().clone();
        let Some(p) = weak_redexes(&cur, s).into_iter().next() else {
            return Normalization {
                trace,
                status: TraceStatus::Normal,
            };
        };
        if trace.len() >= fuel {
            return Normalization {
                trace,
                status: TraceStatus::FuelExhausted,
            };
        }
        let after = weak_contract(&cur, &p, s).expect("listed redex contracts");
        trace.steps.push(ReductionStep {
            before: cur,
            redex: p,
            after,
        });
    }
}

/// True iff every step of `t` is a weak step under the trace's barrier.
pub fn check_weak_trace(t: &ReductionTrace<Term>) -> bool {
    let mut cur = &t.start;
    for s in &t.steps {
        if s.before != *cur {
            return false;
        }
        match weak_contract(&s.before, &s.redex, &t.barrier) {
            Ok(after) if after == s.after => {}
            _ => return false,
        }
        cur = &s.after;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    /// Independent oracle: scan every position and apply the side condition directly.
    fn scan(m: &Term, s: &Barrier) -> Vec<Position> {
        m.positions()
            .into_iter()
            .filter(|p| {
                let sub = m.subterm_at(p).unwrap();
                sub.is_redex() && sub.away_from(&m.binding_path(p).unwrap().concat(s))
            })
            .collect()
    }

    #[test]
    fn redex_examples() {
        let e = Barrier::empty();
        assert!(weak_redexes(&t("\\x. (\\y. y) x"), &e).is_empty());
        assert_eq!(weak_redexes(&t("(\\x. x) y"), &e), vec![Position::root()]);
        let m = t("\\x. (\\y. y) z");
        assert_eq!(weak_redexes(&m, &e), vec![Position(vec![1])]);
        assert_eq!(weak_redexes(&m, &e), scan(&m, &e));
    }

    #[test]
    fn contract_examples() {
        let e = Barrier::empty();
        assert_eq!(weak_contract(&t("(\\x. x) y"), &Position::root(), &e).unwrap(), t("y"));
        assert_eq!(
            weak_contract(&t("(\\x. (\\z. z) x) y"), &Position::root(), &e).unwrap(),
            t("(\\z. z) y")
        );
        assert_eq!(
            weak_contract(&t("(\\x. (\\y. y) x) w"), &Position(vec![0, 1]), &e),
            Err(Error::NotAWeakRedex(Position(vec![0, 1])))
        );
        assert!(weak_contract(&t("x"), &Position(vec![0]), &e).is_err());
    }

    #[test]
    fn normalize_examples() {
        let e = Barrier::empty();
        let n = weak_normalize(&t("(\\z. z) (\\x. (\\w. w) x) y"), &e, 10);
        assert_eq!(n.status, TraceStatus::Normal);
        assert_eq!(n.trace.len(), 3);
        assert_eq!(*n.result(), t("y"));
        assert!(check_weak_trace(&n.trace));

        let n = weak_normalize(&t("x y"), &e, 10);
        assert!(n.trace.is_empty());
        assert_eq!(*n.result(), t("x y"));

        let n = weak_normalize(&t("(\\x. x x) (\\x. x x)"), &e, 5);
        assert_eq!(n.status, TraceStatus::FuelExhausted);
        assert_eq!(n.trace.len(), 5);
    }

    #[test]
    fn trace_json_shape() {
        let n = weak_normalize(&t("(\\x. x) y"), &Barrier::parse("w"), 10);
        let j = n.trace.to_json(Some(n.status));
        let arr = j.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr[0]["term"], "(\\x. x) y");
        assert_eq!(arr[0]["redex"], serde_json::json!([]));
        assert_eq!(arr[0]["barrier"], serde_json::json!(["w"]));
        assert_eq!(arr[1]["term"], "y");
        assert_eq!(arr[1]["status"], "normal");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::arb::{arb_barrier, arb_term};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn steps_keep_free_variables(m in arb_term(), s in arb_barrier()) {
            let keep = |t: &Term| t.free_vars().intersection(&s.set()).cloned().collect::<crate::names::NameSet>();
            for p in weak_redexes(&m, &s) {
                let r = weak_contract(&m, &p, &s).unwrap();
                prop_assert!(r.free_vars().is_subset(&m.free_vars()));
                prop_assert_eq!(keep(&r), keep(&m));
            }
        }

        #[test]
        fn smaller_barriers_allow_more(m in arb_term(), s in arb_barrier(), keep in any::<[bool; 2]>()) {
            let t = Barrier::new(s.vars().iter().zip(keep).filter(|(_, k)| *k).map(|(x, _)| x.clone()));
            let small = weak_redexes(&m, &t);
            prop_assert!(weak_redexes(&m, &s).iter().all(|p| small.contains(p)));
        }

        #[test]
        fn normalization_traces_check(m in arb_term(), s in arb_barrier()) {
            let n = weak_normalize(&m, &s, 20);
            prop_assert!(check_weak_trace(&n.trace));
            if n.status == TraceStatus::Normal {
                prop_assert!(weak_redexes(n.result(), &s).is_empty());
            }
        }
    }
}
