//! Chain reduction: labeled traces interleaved with peeling of leading
//! abstractions. `A ⇝{S,0} B` is `A →→w^S B`; `A ⇝{S,k+1} λᵃx.A₂` needs a
//! trace `A →→w^S λᵃx.A₁` and `A₁ ⇝{S,k} A₂`.
//!
//! Witnesses are built bottom-up from superstep derivations by the
//! congruence constructors below.

use serde_json::{json, Value};

use crate::engine::{Derivation, Rule};
use crate::error::{Error, Result};
use crate::labeled::{labeled_contract, LTerm, Label};
use crate::lambda::Lambda;
use crate::names::{fresh, Barrier, Name, NameSet};
use crate::term::Position;
use crate::trace::{ReductionStep, ReductionTrace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub trace: ReductionTrace<LTerm>,
    /// The leading abstraction removed after the trace, with the variable
    /// its body is opened with.
    pub peel: Option<(Label, Name)>,
}

/// Exactly the last segment has no peel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDerivation {
    pub barrier: Barrier,
    pub segments: Vec<Segment>,
}

impl ChainDerivation {
    /// The zero-step chain from `a`.
    pub fn empty(a: &LTerm, s: &Barrier) -> ChainDerivation {
        ChainDerivation::from_trace(ReductionTrace::new(s.clone(), a.clone()))
    }

    pub fn from_trace(trace: ReductionTrace<LTerm>) -> ChainDerivation {
        ChainDerivation {
            barrier: trace.barrier.clone(),
            segments: vec![Segment { trace, peel: None }],
        }
    }

    pub fn k(&self) -> usize {
        self.segments.len() - 1
    }

    pub fn start(&self) -> &LTerm {
        &self.segments[0].trace.start
    }

    /// The right-hand side: the last trace's end under the peeled abstractions.
    pub fn end(&self) -> LTerm {
        let last = self.segments.last().expect("chains have a segment");
        let mut t = last.trace.end().clone();
        for seg in self.segments.iter().rev().skip(1) {
            let (l, x) = seg.peel.as_ref().expect("inner segments peel");
            t = LTerm::Abs(l.clone(), x.clone(), Box::new(t));
        }
        t
    }

    /// Total number of reduction steps.
    pub fn steps(&self) -> usize {
        self.segments.iter().map(|s| s.trace.len()).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k(),
            "segments": self.segments.iter().map(|s| json!({
                "trace": s.trace.to_json(None),
                "peel": s.peel.as_ref().map(|(l, x)| json!({"label": l.to_string(), "var": x.to_string()})),
            })).collect::<Vec<_>>(),
        })
    }
}

/// True iff every step of `t` is a labeled step under `s`.
pub fn check_labeled_trace(t: &ReductionTrace<LTerm>, s: &Barrier) -> bool {
    if t.barrier.set() != s.set() {
        return false;
    }
    let mut cur = &t.start;
    for step in &t.steps {
        if step.before != *cur {
            return false;
        }
        match labeled_contract(&step.before, &step.redex, s) {
            Ok(after) if after == step.after => {}
            _ => return false,
        }
        cur = &step.after;
    }
    true
}

/// True iff `w` witnesses `a ⇝{S,k} b`.
pub fn check_chain(a: &LTerm, b: &LTerm, s: &Barrier, k: usize, w: &ChainDerivation) -> bool {
    if w.segments.len() != k + 1 || w.barrier.set() != s.set() {
        return false;
    }
    let mut cur = a.clone();
    for (i, seg) in w.segments.iter().enumerate() {
        if seg.trace.start != cur || !check_labeled_trace(&seg.trace, s) {
            return false;
        }
        match (&seg.peel, i == k) {
            (None, true) => {}
            (Some((l, x)), false) => {
                if s.contains(x) {
                    return false;
                }
                match seg.trace.end().open_abs(l, x) {
                    Some(body) => cur = body,
                    None => return false,
                }
            }
            _ => return false,
        }
    }
    w.end() == *b
}

fn violated(lemma: &'static str, hypothesis: impl Into<String>) -> Error {
    Error::SideConditionViolated {
        lemma,
        hypothesis: hypothesis.into(),
    }
}

fn require_k(w: &ChainDerivation, k: usize, lemma: &'static str, which: &str) -> Result<()> {
    if w.k() == k {
        Ok(())
    } else {
        Err(violated(lemma, format!("{which} chain has index {} instead of {k}", w.k())))
    }
}

fn require_barrier(w: &ChainDerivation, s: &Barrier, lemma: &'static str, which: &str) -> Result<()> {
    if w.barrier.set() == s.set() {
        Ok(())
    } else {
        Err(violated(lemma, format!("{which} chain is under {} instead of {s}", w.barrier)))
    }
}

fn concat(mut t: ReductionTrace<LTerm>, more: ReductionTrace<LTerm>) -> ReductionTrace<LTerm> {
    t.steps.extend(more.steps);
    t
}

/// Capture-avoiding substitution, binders kept apart from `s`.
fn subst(t: &LTerm, x: &Name, n: &LTerm, s: &Barrier) -> LTerm {
    let reserved = s.set();
    t.subst_raw(x, n, &reserved).normalized(&reserved)
}

/// Abstraction, first item: `B ⇝{x·S,0} B'` gives `λᵃx.B ⇝{S,0} λᵃx.B'`.
pub fn lift_chain_abs1(label: &Label, x: &Name, w: &ChainDerivation, s: &Barrier) -> Result<ChainDerivation> {
    const LEMMA: &str = "Abstraction (1)";
    require_k(w, 0, LEMMA, "body")?;
    require_barrier(w, &s.cons(x), LEMMA, "body")?;
    let wrap = |t: &LTerm| LTerm::Abs(label.clone(), x.clone(), Box::new(t.clone()));
    let mut trace = w.segments[0].trace.in_context(&Position::root().child(1), wrap);
    trace.barrier = s.clone();
    Ok(ChainDerivation::from_trace(trace))
}

/// Abstraction, second item: `B ⇝{S,k} B'` gives `λᵃx.B ⇝{S,k+1} λᵃx.B'`.
pub fn lift_chain_abs2(label: &Label, x: &Name, w: &ChainDerivation) -> Result<ChainDerivation> {
    if w.barrier.contains(x) {
        return Err(violated("Abstraction (2)", format!("binder {x} is a barrier variable")));
    }
    let start = LTerm::Abs(label.clone(), x.clone(), Box::new(w.start().clone()));
    let mut segments = vec![Segment {
        trace: ReductionTrace::new(w.barrier.clone(), start),
        peel: Some((label.clone(), x.clone())),
    }];
    segments.extend(w.segments.iter().cloned());
    Ok(ChainDerivation {
        barrier: w.barrier.clone(),
        segments,
    })
}

/// Application I: `A ⇝{S,0} A'` and `B ⇝{S,0} B'` give `A @c B ⇝{S,0} A' @c B'`.
pub fn lift_chain_app1(c: &Name, wa: &ChainDerivation, wb: &ChainDerivation) -> Result<ChainDerivation> {
    const LEMMA: &str = "Application I";
    require_k(wa, 0, LEMMA, "function")?;
    require_k(wb, 0, LEMMA, "argument")?;
    require_barrier(wb, &wa.barrier, LEMMA, "argument")?;
    let b = wb.start().clone();
    let fun = wa.segments[0]
        .trace
        .in_context(&Position::root().child(0), |t| LTerm::App(c.clone(), Box::new(t.clone()), Box::new(b.clone())));
    let a2 = fun.end().clone();
    let mut arg = wb.segments[0].trace.in_context(&Position::root().child(1), |t| match &a2 {
        LTerm::App(c, f, _) => LTerm::App(c.clone(), f.clone(), Box::new(t.clone())),
        _ => unreachable!("wrapped in an application"),
    });
    arg.barrier = wa.barrier.clone();
    Ok(ChainDerivation::from_trace(concat(fun, arg)))
}

/// Application II. With `wa : A ⇝{S,n+1} λᵃx.A'` and `wb : B ⇝{S,m} B₁`,
/// builds a chain for `A @a B` of index `n + m` ending in the contractum.
/// For `m > 0` the body `A'` must be `λx̄ⁿ.x`.
pub fn lift_chain_app2(a: &Name, wa: &ChainDerivation, wb: &ChainDerivation) -> Result<ChainDerivation> {
    const LEMMA: &str = "Application II";
    if wa.k() == 0 {
        return Err(violated(LEMMA, "function chain peels nothing"));
    }
    require_barrier(wb, &wa.barrier, LEMMA, "argument")?;
    let s = wa.barrier.clone();
    let (l, x) = wa.segments[0].peel.clone().expect("k > 0");
    if l != Label::Name(a.clone()) {
        return Err(violated(LEMMA, format!("application label {a} differs from abstraction label {l}")));
    }
    let fun_end = wa.end();
    if !fun_end.away_from(&s) {
        return Err(violated(LEMMA, format!("{fun_end} is not away from {s}")));
    }
    let n = wa.k() - 1;
    let m = wb.k();
    let reserved = s.set();

    // The argument as it is substituted: reduced first when m = 0, as is otherwise.
    let (prefix, arg) = if m == 0 {
        let b_end = wb.end();
        if !b_end.away_from(&s) {
            return Err(violated(LEMMA, format!("argument result {b_end} is not away from {s}")));
        }
        let a0 = wa.start().clone();
        let t = wb.segments[0].trace.in_context(&Position::root().child(1), |t| {
            LTerm::App(a.clone(), Box::new(a0.clone()), Box::new(t.clone()))
        });
        (t, b_end)
    } else {
        let body = wa.segments.last().expect("segments").trace.end();
        if body != &LTerm::Var(x.clone()) {
            return Err(violated(LEMMA, format!("function body {body} is not the bound variable under {n} binders")));
        }
        let b0 = wb.start().clone();
        if !b0.away_from(&s) {
            return Err(violated(LEMMA, format!("argument {b0} is not away from {s}")));
        }
        let inner = wb.segments.last().expect("segments").trace.end();
        if !inner.away_from(&s) {
            return Err(violated(LEMMA, format!("argument body {inner} is not away from {s}")));
        }
        (ReductionTrace::new(s.clone(), LTerm::App(a.clone(), Box::new(wa.start().clone()), Box::new(b0.clone()))), b0)
    };

    // The function side up to its first peel, still applied to `arg`.
    let seg0 = wa.segments[0].trace.in_context(&Position::root().child(0), |t| {
        LTerm::App(a.clone(), Box::new(t.clone()), Box::new(arg.clone()))
    });
    let mut head = concat(prefix, seg0);
    let redex = head.end().clone();
    let contractum = labeled_contract(&redex, &Position::root(), &s)
        .map_err(|_| violated(LEMMA, format!("head {redex} is not a redex away from {s}")))?;
    head.steps.push(ReductionStep {
        before: redex,
        redex: Position::root(),
        after: contractum.clone(),
    });

    // Peel variables of the remaining function segments are renamed away
    // from everything the substituted argument or later segments mention.
    let mut taken: NameSet = arg.free_vars();
    taken.extend(reserved.iter().cloned());
    taken.insert(x.clone());
    let mut mentioned = NameSet::new();
    for seg in wa.segments.iter().skip(1).chain(&wb.segments) {
        for t in seg.trace.terms() {
            mentioned.extend(t.free_vars());
        }
    }
    let mut renames: Vec<(Name, Name)> = Vec::new();
    let sigma = |t: &LTerm, renames: &[(Name, Name)]| {
        let mut t = t.clone();
        for (from, to) in renames {
            if from != to {
                t = subst(&t, from, &LTerm::Var(to.clone()), &s);
            }
        }
        subst(&t.label_subst_star(a), &x, &arg, &s)
    };

    let mut segments: Vec<Segment> = Vec::new();
    let mut current = head;
    for (i, seg) in wa.segments.iter().enumerate().skip(1) {
        let mapped = seg.trace.map(|t| sigma(t, &renames));
        if i == 1 && mapped.start != contractum {
            return Err(Error::Internal(format!(
                "head contraction gives {contractum}, expected {}",
                mapped.start
            )));
        }
        current = concat(current, mapped);
        match &seg.peel {
            Some((_, xi)) => {
                let xi2 = fresh(xi, |c| taken.contains(c) || (c != xi && mentioned.contains(c)));
                taken.insert(xi2.clone());
                renames.push((xi.clone(), xi2.clone()));
                let LTerm::Abs(li, _, _) = current.end() else {
                    return Err(Error::Internal("peeled segment does not end in an abstraction".into()));
                };
                let peel = Some((li.clone(), xi2));
                let next = ReductionTrace::new(s.clone(), current.end().clone());
                segments.push(Segment {
                    trace: std::mem::replace(&mut current, next),
                    peel,
                });
                // the next segment starts from the opened body
                let (li, xi2) = segments.last().unwrap().peel.clone().unwrap();
                current.start = current
                    .start
                    .open_abs(&li, &xi2)
                    .ok_or_else(|| Error::Internal("cannot open peeled abstraction".into()))?;
            }
            None => {}
        }
    }
    if m > 0 {
        // the function side has become `arg`; continue with the argument chain
        let mut rest = wb.segments.clone();
        let first = rest.remove(0);
        current = concat(current, first.trace);
        let mut peel = first.peel;
        for seg in rest {
            segments.push(Segment {
                trace: std::mem::replace(&mut current, seg.trace),
                peel,
            });
            peel = seg.peel;
        }
        debug_assert!(peel.is_none());
    }
    segments.push(Segment {
        trace: current,
        peel: None,
    });
    let w = ChainDerivation { barrier: s, segments };
    debug_assert_eq!(w.k(), n + m);
    Ok(w)
}

/// A chain witness for the judgement proved by a labeled superstep derivation.
pub fn chain_from_superstep(d: &Derivation<LTerm>) -> Result<ChainDerivation> {
    let s = &d.barrier;
    match (d.rule, &d.source, &d.premises[..]) {
        (Rule::Var, _, []) => Ok(ChainDerivation::empty(&d.source, s)),
        (Rule::Abs1, LTerm::Abs(l, x, _), [p]) => lift_chain_abs1(l, x, &chain_from_superstep(p)?, s),
        (Rule::Abs2, LTerm::Abs(l, x, _), [p]) => lift_chain_abs2(l, x, &chain_from_superstep(p)?),
        (Rule::App1, LTerm::App(c, _, _), [pf, pa]) => {
            lift_chain_app1(c, &chain_from_superstep(pf)?, &chain_from_superstep(pa)?)
        }
        (Rule::App2 { .. }, LTerm::App(c, _, _), [pf, pa]) => {
            lift_chain_app2(c, &chain_from_superstep(pf)?, &chain_from_superstep(pa)?)
        }
        _ => Err(Error::Internal(format!("malformed derivation node {}", d.rule))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::derive;
    use crate::engine::DEFAULT_CAP;
    use crate::labeled::labeled_normalize;
    use crate::parse::parse_labeled;

    fn l(s: &str) -> LTerm {
        parse_labeled(s).unwrap()
    }

    fn e() -> Barrier {
        Barrier::empty()
    }

    fn single_step(a: &LTerm, p: &[u8], s: &Barrier) -> ReductionTrace<LTerm> {
        let mut t = ReductionTrace::new(s.clone(), a.clone());
        let after = labeled_contract(a, &Position(p.to_vec()), s).unwrap();
        t.steps.push(ReductionStep {
            before: a.clone(),
            redex: Position(p.to_vec()),
            after,
        });
        t
    }

    #[test]
    fn reflexive_zero_chain() {
        let a = l("\\x^a. x @b y");
        assert!(check_chain(&a, &a, &e(), 0, &ChainDerivation::empty(&a, &e())));
    }

    #[test]
    fn one_peel_chain_reaches_identity() {
        let a = l("\\x^a. (\\y^b. y) @b x");
        let b = l("\\x^a. x");
        let inner = l("(\\y^b. y) @b x");
        let w = ChainDerivation {
            barrier: e(),
            segments: vec![
                Segment {
                    trace: ReductionTrace::new(e(), a.clone()),
                    peel: Some((Label::name("a"), Name::new("x"))),
                },
                Segment {
                    trace: single_step(&inner, &[], &e()),
                    peel: None,
                },
            ],
        };
        assert!(check_chain(&a, &b, &e(), 1, &w));
        // no plain trace does it: the redex mentions the bound x
        assert!(labeled_contract(&a, &Position(vec![1]), &e()).is_err());
        assert!(!check_chain(&a, &b, &e(), 0, &ChainDerivation::empty(&a, &e())));
        let mut w0 = w.clone();
        w0.segments.remove(0);
        assert!(!check_chain(&a, &b, &e(), 0, &w0));
    }

    #[test]
    fn peel_variable_must_avoid_the_barrier() {
        let a = l("\\x^a. x");
        let w = lift_chain_abs2(&Label::name("a"), &Name::new("x"), &ChainDerivation::empty(&l("x"), &e())).unwrap();
        assert!(check_chain(&a, &a, &e(), 1, &w));
        let s = Barrier::parse("x");
        let mut ws = w.clone();
        ws.barrier = s.clone();
        for seg in &mut ws.segments {
            seg.trace.barrier = s.clone();
        }
        assert!(!check_chain(&a, &a, &s, 1, &ws));
    }

    #[test]
    fn abstraction_item_two() {
        let inner = l("(\\y^b. y) @b x");
        let w0 = ChainDerivation::from_trace(single_step(&inner, &[], &e()));
        assert!(check_chain(&inner, &l("x"), &e(), 0, &w0));
        let w1 = lift_chain_abs2(&Label::name("a"), &Name::new("x"), &w0).unwrap();
        assert!(check_chain(&l("\\x^a. (\\y^b. y) @b x"), &l("\\x^a. x"), &e(), 1, &w1));
    }

    #[test]
    fn abstraction_item_one_needs_the_extended_barrier() {
        let inner = l("(\\y^b. y) @b z");
        let s = Barrier::parse("x");
        let w0 = ChainDerivation::from_trace(single_step(&inner, &[], &s));
        let w = lift_chain_abs1(&Label::name("a"), &Name::new("x"), &w0, &e()).unwrap();
        assert!(check_chain(&l("\\x^a. (\\y^b. y) @b z"), &l("\\x^a. z"), &e(), 0, &w));
        let wrong = ChainDerivation::from_trace(single_step(&inner, &[], &e()));
        assert!(matches!(
            lift_chain_abs1(&Label::name("a"), &Name::new("x"), &wrong, &e()),
            Err(Error::SideConditionViolated { .. })
        ));
    }

    #[test]
    fn application_one_on_empty_traces() {
        let f = l("x");
        let a = l("y");
        let w = lift_chain_app1(&Name::new("c"), &ChainDerivation::empty(&f, &e()), &ChainDerivation::empty(&a, &e())).unwrap();
        assert_eq!(w.steps(), 0);
        assert!(check_chain(&l("x @c y"), &l("x @c y"), &e(), 0, &w));
    }

    #[test]
    fn application_two_second_item() {
        let fun = l("\\x^a. (\\y^b. y) @b x");
        let inner = l("(\\y^b. y) @b x");
        let wa = lift_chain_abs2(
            &Label::name("a"),
            &Name::new("x"),
            &ChainDerivation::from_trace(single_step(&inner, &[], &e())),
        )
        .unwrap();
        let wb = ChainDerivation::empty(&l("w"), &e());
        let w = lift_chain_app2(&Name::new("a"), &wa, &wb).unwrap();
        let whole = LTerm::App(Name::new("a"), Box::new(fun), Box::new(l("w")));
        assert_eq!(w.k(), 0);
        assert_eq!(w.steps(), 2);
        assert!(check_chain(&whole, &l("w"), &e(), 0, &w));
        assert_eq!(w.segments[0].trace.terms().nth(1).unwrap(), &l("(\\y^b. y) @b w"));
    }

    #[test]
    fn application_two_checks_labels_and_barrier() {
        let wa = lift_chain_abs2(&Label::name("a"), &Name::new("x"), &ChainDerivation::empty(&l("x"), &e())).unwrap();
        let wb = ChainDerivation::empty(&l("w"), &e());
        assert!(matches!(
            lift_chain_app2(&Name::new("c"), &wa, &wb),
            Err(Error::SideConditionViolated { lemma: "Application II", .. })
        ));
        let s = Barrier::parse("w");
        let wa = lift_chain_abs2(&Label::name("a"), &Name::new("x"), &ChainDerivation::empty(&l("x"), &s)).unwrap();
        let wb = ChainDerivation::empty(&l("w"), &s);
        assert!(matches!(
            lift_chain_app2(&Name::new("a"), &wa, &wb),
            Err(Error::SideConditionViolated { .. })
        ));
    }

    fn roundtrip(src: &str, s: &Barrier, k: usize) -> usize {
        let a = l(src);
        let mut n = 0;
        for b in crate::engine::enumerate(&a, s, k, DEFAULT_CAP).unwrap() {
            let d = derive(&a, &b, s, k, DEFAULT_CAP).unwrap().expect("enumerated targets derive");
            let w = chain_from_superstep(&d).unwrap();
            assert!(check_chain(&d.source, &b, s, k, &w), "{src} => {b}\n{d}\n{:#}", w.to_json());
            n += 1;
        }
        n
    }

    #[test]
    fn chains_from_supersteps() {
        assert!(roundtrip("\\x^a. (\\y^b. y) @b x", &e(), 1) >= 1);
        assert!(roundtrip("(\\x^a. (\\y^b. y) @b x) @a w", &e(), 0) >= 2);
        assert!(roundtrip("(\\x^a. x @b x) @a ((\\z^c. z) @c w)", &e(), 0) >= 4);
        assert!(roundtrip("(\\x^a. \\u^d. x) @a ((\\z^c. \\v^e. z) @c w)", &e(), 1) >= 1);
        assert!(roundtrip("(\\x^a. \\u^d. x) @a (\\v^e. (\\z^c. z) @c v)", &e(), 2) >= 1);
        assert!(roundtrip("(\\x^a. x @b y) @a (\\z^c. z)", &Barrier::parse("y"), 0) >= 1);
    }

    #[test]
    fn superstep_chain_of_the_head_redex_is_a_two_step_trace() {
        let a = l("(\\x^a. (\\y^b. y) @b x) @a w");
        let d = derive(&a, &l("w"), &e(), 0, DEFAULT_CAP).unwrap().unwrap();
        let w = chain_from_superstep(&d).unwrap();
        assert_eq!((w.k(), w.steps()), (0, 2));
        assert_eq!(labeled_normalize(&a, &e()).result(), &l("w"));
    }

    #[test]
    fn json_shape() {
        let w = lift_chain_abs2(&Label::name("a"), &Name::new("x"), &ChainDerivation::empty(&l("x"), &e())).unwrap();
        let j = w.to_json();
        assert_eq!(j["k"], 1);
        assert_eq!(j["segments"][0]["peel"], json!({"label": "a", "var": "x"}));
        assert_eq!(j["segments"][1]["peel"], Value::Null);
        assert_eq!(j["segments"][1]["trace"][0]["term"], "x");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::arb::{arb_barrier, arb_labeled};
    use crate::engine::Engine;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn derivations_give_accepted_chains(a in arb_labeled(), s in arb_barrier(), k in 0usize..3) {
            let mut eng = Engine::with_reserved(&a, &s.set());
            let Ok(targets) = eng.enumerate(&s, k) else { return Ok(()) };
            for b in &targets {
                let d = eng.derive(b, &s, k).unwrap().unwrap();
                let w = chain_from_superstep(&d).unwrap();
                prop_assert!(check_chain(&a, b, &s, k, &w));
            }
        }
    }
}
