//! The superstep judgement `M ⇛{S,k} N` and the full weak superdevelopment
//! `A⇓{S,k}`, over any [`Lambda`] term type.
//!
//! Recursion always descends into subterms of the (normalized) source, so
//! memo tables are keyed by subterm address, the barrier set and `k`.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use indexmap::IndexSet;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lambda::{is_projection, Lambda, View};
use crate::names::{Barrier, Name, NameSet};

/// Default bound on the size of any intermediate result set.
pub const DEFAULT_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Var,
    Abs1,
    Abs2,
    App1,
    App2 { n: usize, m: usize },
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Var => f.write_str("Var"),
            Rule::Abs1 => f.write_str("Abs1"),
            Rule::Abs2 => f.write_str("Abs2"),
            Rule::App1 => f.write_str("App1"),
            Rule::App2 { n, m } => write!(f, "App2(n={n}, m={m})"),
        }
    }
}

/// A derivation tree of the superstep judgement. For `App2` the first
/// premise is the function side and the second the argument side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation<T> {
    pub rule: Rule,
    pub barrier: Barrier,
    pub k: usize,
    pub source: T,
    pub target: T,
    pub premises: Vec<Derivation<T>>,
}

type Key = (usize, Vec<Name>, usize);

pub struct Engine<T: Lambda> {
    source: Rc<T>,
    reserved: NameSet,
    cap: usize,
    enum_memo: HashMap<Key, Rc<IndexSet<T>>>,
    full_memo: HashMap<Key, Option<T>>,
    derive_memo: HashMap<(usize, T, Vec<Name>, usize), Option<Derivation<T>>>,
}

fn addr<T>(t: &T) -> usize {
    t as *const T as usize
}

impl<T: Lambda> Engine<T> {
    /// An engine for `t`, whose binders are renamed apart from `reserved`
    /// (normally the barrier variables).
    pub fn new(t: &T) -> Engine<T> {
        Engine::with_reserved(t, &NameSet::new())
    }

    pub fn with_reserved(t: &T, reserved: &NameSet) -> Engine<T> {
        Engine {
            source: Rc::new(t.normalized(reserved)),
            reserved: reserved.clone(),
            cap: DEFAULT_CAP,
            enum_memo: HashMap::new(),
            full_memo: HashMap::new(),
            derive_memo: HashMap::new(),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Engine<T> {
        self.cap = cap;
        self
    }

    pub fn source(&self) -> &T {
        &self.source
    }

    /// `{ N : source ⇛{S,k} N }`
    pub fn enumerate(&mut self, s: &Barrier, k: usize) -> Result<Vec<T>> {
        let src = self.source.clone();
        let set = self.enumerate_at(&src, s, k)?;
        let reserved = self.reserved.clone();
        let mut out: IndexSet<T> = IndexSet::new();
        for t in set.iter() {
            out.insert(t.normalized(&reserved));
        }
        Ok(out.into_iter().collect())
    }

    /// A derivation of `source ⇛{S,k} target`, if there is one.
    pub fn derive(&mut self, target: &T, s: &Barrier, k: usize) -> Result<Option<Derivation<T>>> {
        let src = self.source.clone();
        self.derive_at(&src, target, s, k)
    }

    /// `source⇓{S,k}`
    pub fn full(&mut self, s: &Barrier, k: usize) -> Option<T> {
        let src = self.source.clone();
        let reserved = self.reserved.clone();
        self.full_at(&src, s, k).map(|t| t.normalized(&reserved))
    }

    /// Every split `(n, m)` satisfying the side condition at the root
    /// application, with the result it yields.
    pub fn full_branches(&mut self, s: &Barrier, k: usize) -> Vec<(usize, usize, T)> {
        let src = self.source.clone();
        let View::App(l, f, a) = src.view() else {
            return Vec::new();
        };
        let reserved = self.reserved.clone();
        (0..=k)
            .filter_map(|m| {
                self.full_branch(&l, f, a, s, k - m, m)
                    .map(|r| (k - m, m, r.normalized(&reserved)))
            })
            .collect()
    }

    fn insert(&self, out: &mut IndexSet<T>, t: T) -> Result<()> {
        out.insert(t);
        if out.len() > self.cap {
            return Err(Error::SizeCapExceeded(self.cap));
        }
        Ok(())
    }

    fn enumerate_at(&mut self, t: &T, s: &Barrier, k: usize) -> Result<Rc<IndexSet<T>>> {
        let key = (addr(t), s.key(), k);
        if let Some(hit) = self.enum_memo.get(&key) {
            return Ok(hit.clone());
        }
        let mut out = IndexSet::new();
        match t.view() {
            View::Var(_) => {
                if k == 0 {
                    out.insert(t.clone());
                }
            }
            View::Abs(l, x, b) => {
                let inner = if k == 0 {
                    self.enumerate_at(b, &s.cons(x), 0)?
                } else {
                    self.enumerate_at(b, s, k - 1)?
                };
                for b2 in inner.iter() {
                    self.insert(&mut out, T::mk_abs(l.clone(), x.clone(), b2.clone()))?;
                }
            }
            View::App(l, f, a) => {
                if k == 0 {
                    let fs = self.enumerate_at(f, s, 0)?;
                    let args = self.enumerate_at(a, s, 0)?;
                    for f2 in fs.iter() {
                        for a2 in args.iter() {
                            self.insert(&mut out, T::mk_app(l.clone(), f2.clone(), a2.clone()))?;
                        }
                    }
                }
                for m in 0..=k {
                    let n = k - m;
                    let fs = self.enumerate_at(f, s, n + 1)?;
                    if fs.is_empty() {
                        continue;
                    }
                    let args = self.enumerate_at(a, s, m)?;
                    for f2 in fs.iter() {
                        let View::Abs(l2, x, body) = f2.view() else {
                            continue;
                        };
                        if (m > 0 && !is_projection(body, x, n)) || !f2.away_from(s) {
                            continue;
                        }
                        for a2 in args.iter().filter(|a2| a2.away_from(s)) {
                            if let Some(r) = T::fire(&l, &l2, x, body, a2, &self.reserved) {
                                self.insert(&mut out, r)?;
                            }
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.enum_memo.insert(key, out.clone());
        Ok(out)
    }

    fn derive_at(&mut self, t: &T, target: &T, s: &Barrier, k: usize) -> Result<Option<Derivation<T>>> {
        let key = (addr(t), target.clone(), s.key(), k);
        if let Some(hit) = self.derive_memo.get(&key) {
            return Ok(hit.clone());
        }
        let d = self.derive_uncached(t, target, s, k)?;
        self.derive_memo.insert(key, d.clone());
        Ok(d)
    }

    fn derive_uncached(&mut self, t: &T, target: &T, s: &Barrier, k: usize) -> Result<Option<Derivation<T>>> {
        let node = |rule, premises| Derivation {
            rule,
            barrier: s.clone(),
            k,
            source: t.clone(),
            target: target.clone(),
            premises,
        };
        match t.view() {
            View::Var(_) => Ok((k == 0 && target == t).then(|| node(Rule::Var, Vec::new()))),
            View::Abs(l, x, b) => {
                let Some(tb) = target.open_abs(&l, x) else {
                    return Ok(None);
                };
                if k == 0 {
                    let p = self.derive_at(b, &tb, &s.cons(x), 0)?;
                    Ok(p.map(|p| node(Rule::Abs1, vec![p])))
                } else {
                    let p = self.derive_at(b, &tb, s, k - 1)?;
                    Ok(p.map(|p| node(Rule::Abs2, vec![p])))
                }
            }
            View::App(l, f, a) => {
                if k == 0 {
                    if let Some((tf, ta)) = target.split_app(&l) {
                        if let Some(df) = self.derive_at(f, &tf, s, 0)? {
                            if let Some(da) = self.derive_at(a, &ta, s, 0)? {
                                return Ok(Some(node(Rule::App1, vec![df, da])));
                            }
                        }
                    }
                }
                for m in 0..=k {
                    let n = k - m;
                    let fs = self.enumerate_at(f, s, n + 1)?;
                    if fs.is_empty() {
                        continue;
                    }
                    let args = self.enumerate_at(a, s, m)?;
                    for f2 in fs.iter() {
                        let View::Abs(l2, x, body) = f2.view() else {
                            continue;
                        };
                        if (m > 0 && !is_projection(body, x, n)) || !f2.away_from(s) {
                            continue;
                        }
                        for a2 in args.iter().filter(|a2| a2.away_from(s)) {
                            let Some(r) = T::fire(&l, &l2, x, body, a2, &self.reserved) else {
                                continue;
                            };
                            if r != *target {
                                continue;
                            }
                            let df = self.derive_at(f, f2, s, n + 1)?;
                            let da = self.derive_at(a, a2, s, m)?;
                            match (df, da) {
                                (Some(df), Some(da)) => {
                                    return Ok(Some(node(Rule::App2 { n, m }, vec![df, da])));
                                }
                                _ => {
                                    return Err(Error::Internal(format!(
                                        "enumerated superstep of {t} has no derivation"
                                    )))
                                }
                            }
                        }
                    }
                }
                Ok(None)
            }
        }
    }

    fn full_at(&mut self, t: &T, s: &Barrier, k: usize) -> Option<T> {
        let key = (addr(t), s.key(), k);
        if let Some(hit) = self.full_memo.get(&key) {
            return hit.clone();
        }
        let r = match t.view() {
            View::Var(_) => (k == 0).then(|| t.clone()),
            View::Abs(l, x, b) => {
                let inner = if k == 0 {
                    self.full_at(b, &s.cons(x), 0)
                } else {
                    self.full_at(b, s, k - 1)
                };
                inner.map(|b2| T::mk_abs(l.clone(), x.clone(), b2))
            }
            View::App(l, f, a) => {
                let mut r = None;
                for m in 0..=k {
                    r = self.full_branch(&l, f, a, s, k - m, m);
                    if r.is_some() {
                        break;
                    }
                }
                if r.is_none() && k == 0 {
                    let f2 = self.full_at(f, s, 0);
                    let a2 = self.full_at(a, s, 0);
                    r = Some(T::mk_app(l.clone(), f2?, a2?));
                }
                r
            }
        };
        self.full_memo.insert(key, r.clone());
        r
    }

    /// Condition (⋆) for one split.
    fn full_branch(&mut self, l: &T::Label, f: &T, a: &T, s: &Barrier, n: usize, m: usize) -> Option<T> {
        let f2 = self.full_at(f, s, n + 1)?;
        let View::Abs(l2, x, body) = f2.view() else {
            return None;
        };
        if m > 0 && !is_projection(body, x, n) {
            return None;
        }
        let a2 = self.full_at(a, s, m)?;
        if !f2.away_from(s) || !a2.away_from(s) {
            return None;
        }
        T::fire(l, &l2, x, body, &a2, &self.reserved)
    }
}

/// `{ N : M ⇛{S,k} N }`
pub fn enumerate<T: Lambda>(m: &T, s: &Barrier, k: usize, cap: usize) -> Result<Vec<T>> {
    Engine::with_reserved(m, &s.set()).with_cap(cap).enumerate(s, k)
}

pub fn derive<T: Lambda>(m: &T, n: &T, s: &Barrier, k: usize, cap: usize) -> Result<Option<Derivation<T>>> {
    Engine::with_reserved(m, &s.set()).with_cap(cap).derive(n, s, k)
}

pub fn full<T: Lambda>(a: &T, s: &Barrier, k: usize) -> Option<T> {
    Engine::with_reserved(a, &s.set()).full(s, k)
}

impl<T: Lambda> Derivation<T> {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Rules used anywhere in the tree.
    pub fn rules(&self) -> Vec<Rule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    /// Re-checks every rule instance, including its side conditions.
    pub fn validate(&self) -> std::result::Result<(), String> {
        for p in &self.premises {
            p.validate()?;
        }
        let fail = |why: &str| Err(format!("{} at {} ⇛ {}: {why}", self.rule, self.source, self.target));
        let s = &self.barrier;
        let same_barrier = |d: &Derivation<T>, b: &Barrier| d.barrier.key() == b.key();
        match (self.rule, self.source.view(), &self.premises[..]) {
            (Rule::Var, View::Var(_), []) => {
                if self.k != 0 || self.target != self.source {
                    return fail("variables only step to themselves at k = 0");
                }
            }
            (Rule::Abs1 | Rule::Abs2, View::Abs(l, x, b), [p]) => {
                let (want_k, want_s) = if self.rule == Rule::Abs1 {
                    if self.k != 0 {
                        return fail("Abs1 requires k = 0");
                    }
                    (0, s.cons(x))
                } else {
                    if self.k == 0 {
                        return fail("Abs2 requires k > 0");
                    }
                    (self.k - 1, s.clone())
                };
                if p.source != *b || p.k != want_k || !same_barrier(p, &want_s) {
                    return fail("premise does not match");
                }
                if T::mk_abs(l.clone(), x.clone(), p.target.clone()) != self.target {
                    return fail("conclusion does not match premise");
                }
            }
            (Rule::App1, View::App(l, f, a), [pf, pa]) => {
                if self.k != 0 {
                    return fail("App1 requires k = 0");
                }
                if pf.source != *f || pa.source != *a || pf.k != 0 || pa.k != 0 {
                    return fail("premises do not match");
                }
                if !same_barrier(pf, s) || !same_barrier(pa, s) {
                    return fail("premise barrier differs");
                }
                if T::mk_app(l.clone(), pf.target.clone(), pa.target.clone()) != self.target {
                    return fail("conclusion does not match premises");
                }
            }
            (Rule::App2 { n, m }, View::App(l, f, a), [pf, pa]) => {
                if n + m != self.k || pf.k != n + 1 || pa.k != m {
                    return fail("indices do not add up");
                }
                if pf.source != *f || pa.source != *a || !same_barrier(pf, s) || !same_barrier(pa, s) {
                    return fail("premises do not match");
                }
                let View::Abs(l2, x, body) = pf.target.view() else {
                    return fail("function premise does not yield an abstraction");
                };
                if !pf.target.away_from(s) || !pa.target.away_from(s) {
                    return fail("redex pattern is not away from the barrier");
                }
                if m > 0 && !is_projection(body, x, n) {
                    return fail("m > 0 but the body is not a projection");
                }
                match T::fire(&l, &l2, x, body, &pa.target, &NameSet::new()) {
                    Some(r) if r == self.target => {}
                    Some(_) => return fail("conclusion is not the contractum"),
                    None => return fail("labels do not match"),
                }
            }
            _ => return fail("rule does not fit the source term"),
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rule": self.rule.to_string(),
            "barrier": self.barrier.vars().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "k": self.k,
            "source": self.source.to_string(),
            "target": self.target.to_string(),
            "premises": self.premises.iter().map(Derivation::to_json).collect::<Vec<_>>(),
        })
    }

    fn fmt_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(
            f,
            "{:indent$}{}  {} ⇛{{{}, {}}} {}",
            "",
            self.rule,
            self.source,
            self.barrier,
            self.k,
            self.target,
            indent = depth * 2
        )?;
        for p in &self.premises {
            p.fmt_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl<T: Lambda> fmt::Display for Derivation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_indented(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeled::LTerm;
    use crate::parse::{parse_labeled, parse_term};
    use crate::term::Term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn l(s: &str) -> LTerm {
        parse_labeled(s).unwrap()
    }

    const I: &str = "(\\z. z)";

    #[test]
    fn running_example_supersteps_to_y() {
        let m = t(&format!("{I} (\\x. {I} x) y"));
        let e = Barrier::empty();
        let set = enumerate(&m, &e, 0, DEFAULT_CAP).unwrap();
        assert!(set.contains(&t("y")));
        assert!(set.contains(&m));
        let d = derive(&m, &t("y"), &e, 0, DEFAULT_CAP).unwrap().unwrap();
        d.validate().unwrap();
    }

    #[test]
    fn variable_steps_only_to_itself() {
        let e = Barrier::parse("x");
        assert_eq!(enumerate(&t("x"), &e, 0, DEFAULT_CAP).unwrap(), vec![t("x")]);
        assert!(enumerate(&t("x"), &e, 1, DEFAULT_CAP).unwrap().is_empty());
    }

    #[test]
    fn downward_creation_is_not_contracted() {
        let set = enumerate(&t("(\\x. x y) (\\z. z)"), &Barrier::empty(), 0, DEFAULT_CAP).unwrap();
        assert!(set.contains(&t("(\\z. z) y")));
        assert!(!set.contains(&t("y")));
    }

    #[test]
    fn abs2_allows_contraction_under_the_binder() {
        let m = t("\\x. (\\y. y) x");
        let e = Barrier::empty();
        let d = derive(&m, &t("\\x. x"), &e, 1, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(d.rule, Rule::Abs2);
        assert_eq!(d.premises[0].rule, Rule::App2 { n: 0, m: 0 });
        d.validate().unwrap();
        assert!(derive(&m, &t("\\x. x"), &e, 0, DEFAULT_CAP).unwrap().is_none());
    }

    #[test]
    fn reflexive_derivation_at_k0_uses_congruence_rules() {
        let m = t("\\x. (\\y. y x) w");
        let d = derive(&m, &m, &Barrier::parse("w"), 0, DEFAULT_CAP).unwrap().unwrap();
        assert!(d
            .rules()
            .iter()
            .all(|r| matches!(r, Rule::Var | Rule::Abs1 | Rule::App1)));
    }

    #[test]
    fn cap_overflow_is_reported() {
        let m = t("(\\x. x) ((\\x. x) ((\\x. x) ((\\x. x) y)))");
        assert_eq!(
            enumerate(&m, &Barrier::empty(), 0, 2),
            Err(Error::SizeCapExceeded(2))
        );
    }

    #[test]
    fn labeled_examples() {
        let e = Barrier::empty();
        let a = l("(\\x^a. x @b x) @a ((\\z^c. z) @c w)");
        let set = enumerate(&a, &e, 0, DEFAULT_CAP).unwrap();
        assert!(set.contains(&l("w @b w")));
        assert_eq!(full(&a, &e, 0), Some(l("w @b w")));

        let a = l("\\x^a. (\\y^b. y) @b x");
        assert!(enumerate(&a, &e, 1, DEFAULT_CAP).unwrap().contains(&l("\\x^a. x")));

        let a = l("(\\x^b. x @a y) @b (\\z^a. z)");
        let set = enumerate(&a, &e, 0, DEFAULT_CAP).unwrap();
        assert!(set.contains(&l("(\\z^a. z) @c y")));
        assert!(!set.contains(&l("y")));
        assert_eq!(full(&a, &e, 0), Some(l("(\\z^a. z) @c y")));
    }

    #[test]
    fn full_superdev_is_partial_above_zero() {
        let a = l("x @a y");
        assert_eq!(full(&a, &Barrier::empty(), 1), None);
        assert_eq!(full(&a, &Barrier::parse("x"), 1), None);
        assert_eq!(full(&a, &Barrier::empty(), 0), Some(a));
    }

    #[test]
    fn validate_rejects_tampered_derivations() {
        let m = t("(\\x. x) y");
        let mut d = derive(&m, &t("y"), &Barrier::empty(), 0, DEFAULT_CAP).unwrap().unwrap();
        d.validate().unwrap();
        d.target = t("z");
        assert!(d.validate().is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::arb::{arb_barrier, arb_labeled};
    use crate::labeled::LTerm;
    use crate::lambda::leading_abstractions;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn targets_derive_and_have_the_right_shape(a in arb_labeled(), s in arb_barrier(), k in 0usize..3) {
            let mut eng = Engine::with_reserved(&a, &s.set());
            let Ok(targets) = eng.enumerate(&s, k) else { return Ok(()) };
            let plain: Vec<_> = enumerate(&a.erase(), &s, k, DEFAULT_CAP).unwrap();
            for b in &targets {
                prop_assert!(leading_abstractions(b) >= k);
                prop_assert!(b.free_vars().is_subset(&a.free_vars()));
                prop_assert!(plain.contains(&b.erase()));
                let d = eng.derive(b, &s, k).unwrap().unwrap();
                prop_assert_eq!(d.validate(), Ok(()));
            }
            if let Some(r) = full(&a, &s, k) {
                prop_assert!(targets.contains(&r));
            }
        }

        #[test]
        fn full_is_total_at_zero(a in arb_labeled(), s in arb_barrier()) {
            prop_assert!(full::<LTerm>(&a, &s, 0).is_some());
        }
    }
}
