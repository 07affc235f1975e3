//! Labeled terms. Abstractions and applications carry labels; the label of
//! an application binds the occurrences of that label in its function part.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::lambda::{self, Lambda, View};
use crate::names::{fresh, Barrier, Name, NameSet};
use crate::term::{hash_var, vars_match, Position, Slot, Term};
use crate::trace::{Normalization, ReductionStep, ReductionTrace, TraceStatus};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Star,
    Name(Name),
}

impl Label {
    pub fn name(s: &str) -> Label {
        Label::Name(Name::new(s))
    }

    pub fn as_name(&self) -> Option<&Name> {
        match self {
            Label::Star => None,
            Label::Name(n) => Some(n),
        }
    }

    fn is(&self, a: &Name) -> bool {
        matches!(self, Label::Name(n) if n == a)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Star => f.write_str("*"),
            Label::Name(n) => write!(f, "{n}"),
        }
    }
}

/// An application label is never the star, so it is stored as a plain name.
#[derive(Clone, Debug)]
pub enum LTerm {
    Var(Name),
    Abs(Label, Name, Box<LTerm>),
    App(Name, Box<LTerm>, Box<LTerm>),
}

impl LTerm {
    pub fn var(x: &str) -> LTerm {
        LTerm::Var(Name::new(x))
    }

    pub fn abs(label: &str, x: &str, body: LTerm) -> LTerm {
        let l = if label == "*" { Label::Star } else { Label::name(label) };
        LTerm::Abs(l, Name::new(x), Box::new(body))
    }

    pub fn app(label: &str, f: LTerm, a: LTerm) -> LTerm {
        LTerm::App(Name::new(label), Box::new(f), Box::new(a))
    }

    pub fn size(&self) -> usize {
        Lambda::size(self)
    }

    /// `|A|`
    pub fn erase(&self) -> Term {
        match self {
            LTerm::Var(x) => Term::Var(x.clone()),
            LTerm::Abs(_, x, b) => Term::Abs(x.clone(), Box::new(b.erase())),
            LTerm::App(_, f, a) => Term::app(f.erase(), a.erase()),
        }
    }

    pub fn free_vars(&self) -> NameSet {
        self.erase().free_vars()
    }

    pub fn is_free(&self, x: &Name) -> bool {
        match self {
            LTerm::Var(y) => x == y,
            LTerm::App(_, f, a) => f.is_free(x) || a.is_free(x),
            LTerm::Abs(_, y, b) => x != y && b.is_free(x),
        }
    }

    pub fn away_from(&self, s: &Barrier) -> bool {
        s.is_disjoint(&self.free_vars())
    }

    /// `fl(A)`; may contain the star.
    pub fn free_labels(&self) -> BTreeSet<Label> {
        match self {
            LTerm::Var(_) => BTreeSet::new(),
            LTerm::Abs(l, _, b) => {
                let mut s = b.free_labels();
                s.insert(l.clone());
                s
            }
            LTerm::App(c, f, a) => {
                let mut s = f.free_labels();
                s.remove(&Label::Name(c.clone()));
                s.extend(a.free_labels());
                s
            }
        }
    }

    fn free_label_names(&self) -> NameSet {
        self.free_labels()
            .into_iter()
            .filter_map(|l| l.as_name().cloned())
            .collect()
    }

    fn has_free_label(&self, a: &Name) -> bool {
        match self {
            LTerm::Var(_) => false,
            LTerm::Abs(l, _, b) => l.is(a) || b.has_free_label(a),
            LTerm::App(c, f, x) => (c != a && f.has_free_label(a)) || x.has_free_label(a),
        }
    }

    /// Every label name occurring anywhere, bound or free.
    pub fn all_labels(&self) -> NameSet {
        let mut out = NameSet::new();
        fn go(t: &LTerm, out: &mut NameSet) {
            match t {
                LTerm::Var(_) => {}
                LTerm::Abs(l, _, b) => {
                    if let Label::Name(n) = l {
                        out.insert(n.clone());
                    }
                    go(b, out);
                }
                LTerm::App(c, f, a) => {
                    out.insert(c.clone());
                    go(f, out);
                    go(a, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// Abstraction labels in pre-order.
    pub fn abstraction_labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        fn go(t: &LTerm, out: &mut Vec<Label>) {
            match t {
                LTerm::Var(_) => {}
                LTerm::Abs(l, _, b) => {
                    out.push(l.clone());
                    go(b, out);
                }
                LTerm::App(_, f, a) => {
                    go(f, out);
                    go(a, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// `A[a:=★]`: free occurrences only.
    pub fn label_subst_star(&self, a: &Name) -> LTerm {
        match self {
            LTerm::Var(_) => self.clone(),
            LTerm::Abs(l, x, b) => {
                let l2 = if l.is(a) { Label::Star } else { l.clone() };
                LTerm::Abs(l2, x.clone(), Box::new(b.label_subst_star(a)))
            }
            LTerm::App(c, f, x) => {
                let f2 = if c == a { (**f).clone() } else { f.label_subst_star(a) };
                LTerm::App(c.clone(), Box::new(f2), Box::new(x.label_subst_star(a)))
            }
        }
    }

    /// Renames free occurrences of label `from` to `to`; `to` must not be
    /// bound anywhere in the term.
    pub(crate) fn rename_free_label(&self, from: &Name, to: &Name) -> LTerm {
        match self {
            LTerm::Var(_) => self.clone(),
            LTerm::Abs(l, x, b) => {
                let l2 = if l.is(from) { Label::Name(to.clone()) } else { l.clone() };
                LTerm::Abs(l2, x.clone(), Box::new(b.rename_free_label(from, to)))
            }
            LTerm::App(c, f, a) => {
                let f2 = if c == from { (**f).clone() } else { f.rename_free_label(from, to) };
                LTerm::App(c.clone(), Box::new(f2), Box::new(a.rename_free_label(from, to)))
            }
        }
    }

    /// Capture-avoiding `A[x := B]` for both variables and labels, in Barendregt form.
    pub fn subst(&self, x: &Name, n: &LTerm) -> LTerm {
        self.subst_raw(x, n, &NameSet::new()).normalized(&NameSet::new())
    }

    pub(crate) fn subst_raw(&self, x: &Name, n: &LTerm, reserved: &NameSet) -> LTerm {
        let fv_n = n.free_vars();
        let fl_n = n.free_label_names();
        self.subst_go(x, n, &fv_n, &fl_n, reserved)
    }

    fn subst_go(&self, x: &Name, n: &LTerm, fv_n: &NameSet, fl_n: &NameSet, reserved: &NameSet) -> LTerm {
        match self {
            LTerm::Var(y) => {
                if y == x {
                    n.clone()
                } else {
                    self.clone()
                }
            }
            LTerm::Abs(l, y, b) => {
                if y == x || !b.is_free(x) {
                    return self.clone();
                }
                if fv_n.contains(y) {
                    let names = b.erase().all_names();
                    let y2 = fresh(y, |c| {
                        fv_n.contains(c) || names.contains(c) || reserved.contains(c) || c == x
                    });
                    let b2 = b.subst_go(y, &LTerm::Var(y2.clone()), &NameSet::new(), &NameSet::new(), reserved);
                    LTerm::Abs(l.clone(), y2, Box::new(b2.subst_go(x, n, fv_n, fl_n, reserved)))
                } else {
                    LTerm::Abs(l.clone(), y.clone(), Box::new(b.subst_go(x, n, fv_n, fl_n, reserved)))
                }
            }
            LTerm::App(c, f, a) => {
                let a2 = a.subst_go(x, n, fv_n, fl_n, reserved);
                if fl_n.contains(c) && f.is_free(x) {
                    let taken = f.all_labels();
                    let c2 = fresh(c, |d| taken.contains(d) || fl_n.contains(d));
                    let f2 = f.rename_free_label(c, &c2);
                    LTerm::App(c2, Box::new(f2.subst_go(x, n, fv_n, fl_n, reserved)), Box::new(a2))
                } else {
                    LTerm::App(c.clone(), Box::new(f.subst_go(x, n, fv_n, fl_n, reserved)), Box::new(a2))
                }
            }
        }
    }

    /// Renames variable binders apart (Barendregt form), keeping names where possible.
    pub fn normalized(&self, reserved: &NameSet) -> LTerm {
        let mut used = self.free_vars();
        used.extend(reserved.iter().cloned());
        self.normalize_go(&mut used, &mut Vec::new())
    }

    fn normalize_go(&self, used: &mut NameSet, env: &mut Vec<(Name, Name)>) -> LTerm {
        match self {
            LTerm::Var(x) => match env.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => LTerm::Var(new.clone()),
                None => self.clone(),
            },
            LTerm::App(c, f, a) => LTerm::App(
                c.clone(),
                Box::new(f.normalize_go(used, env)),
                Box::new(a.normalize_go(used, env)),
            ),
            LTerm::Abs(l, x, b) => {
                let x2 = fresh(x, |c| used.contains(c));
                used.insert(x2.clone());
                env.push((x.clone(), x2.clone()));
                let b2 = b.normalize_go(used, env);
                env.pop();
                LTerm::Abs(l.clone(), x2, Box::new(b2))
            }
        }
    }

    pub fn positions(&self) -> Vec<Position> {
        lambda::positions(self)
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&LTerm> {
        lambda::subterm_at(self, p)
    }

    pub fn replace_at(&self, p: &Position, n: LTerm) -> Result<LTerm> {
        lambda::replace_at(self, p, n)
    }

    pub fn binding_path(&self, p: &Position) -> Result<Barrier> {
        lambda::binding_path(self, p)
    }

    /// True iff all abstractions carry pairwise distinct labels.
    pub fn is_initially_labeled(&self) -> bool {
        self.duplicate_abstraction_label().is_none()
    }

    pub fn duplicate_abstraction_label(&self) -> Option<Label> {
        let mut seen = BTreeSet::new();
        self.abstraction_labels().into_iter().find(|l| !seen.insert(l.clone()))
    }

    pub fn validate_initially_labeled(&self) -> Result<()> {
        match self.duplicate_abstraction_label() {
            Some(l) => Err(Error::NotInitiallyLabeled(l.to_string())),
            None => Ok(()),
        }
    }
}

type Env<'a> = Vec<(&'a Name, &'a Name)>;

fn alpha_eq<'a>(a: &'a LTerm, b: &'a LTerm, vars: &mut Env<'a>, labels: &mut Env<'a>) -> bool {
    match (a, b) {
        (LTerm::Var(x), LTerm::Var(y)) => vars_match(x, y, vars),
        (LTerm::Abs(l1, x1, b1), LTerm::Abs(l2, x2, b2)) => {
            let labels_ok = match (l1, l2) {
                (Label::Star, Label::Star) => true,
                (Label::Name(m), Label::Name(n)) => vars_match(m, n, labels),
                _ => false,
            };
            if !labels_ok {
                return false;
            }
            vars.push((x1, x2));
            let r = alpha_eq(b1, b2, vars, labels);
            vars.pop();
            r
        }
        (LTerm::App(c1, f1, a1), LTerm::App(c2, f2, a2)) => {
            labels.push((c1, c2));
            let r = alpha_eq(f1, f2, vars, labels);
            labels.pop();
            r && alpha_eq(a1, a2, vars, labels)
        }
        _ => false,
    }
}

fn hash_term<'a, H: Hasher>(t: &'a LTerm, vars: &mut Vec<&'a Name>, labels: &mut Vec<&'a Name>, state: &mut H) {
    match t {
        LTerm::Var(x) => hash_var(x, vars, state),
        LTerm::Abs(l, x, b) => {
            3u8.hash(state);
            match l {
                Label::Star => 4u8.hash(state),
                Label::Name(n) => hash_var(n, labels, state),
            }
            vars.push(x);
            hash_term(b, vars, labels, state);
            vars.pop();
        }
        LTerm::App(c, f, a) => {
            2u8.hash(state);
            labels.push(c);
            hash_term(f, vars, labels, state);
            labels.pop();
            hash_term(a, vars, labels, state);
        }
    }
}

impl PartialEq for LTerm {
    fn eq(&self, other: &LTerm) -> bool {
        alpha_eq(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

impl Eq for LTerm {}

impl Hash for LTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        hash_term(self, &mut Vec::new(), &mut Vec::new(), state)
    }
}

impl LTerm {
    fn fmt_in(&self, f: &mut fmt::Formatter<'_>, slot: Slot) -> fmt::Result {
        match self {
            LTerm::Var(x) => write!(f, "{x}"),
            LTerm::Abs(l, x, b) => {
                if slot != Slot::Top {
                    f.write_str("(")?;
                }
                write!(f, "\\{x}^{l}. ")?;
                b.fmt_in(f, Slot::Top)?;
                if slot != Slot::Top {
                    f.write_str(")")?;
                }
                Ok(())
            }
            LTerm::App(c, fun, arg) => {
                if slot == Slot::Arg {
                    f.write_str("(")?;
                }
                fun.fmt_in(f, Slot::Fun)?;
                write!(f, " @{c} ")?;
                arg.fmt_in(f, Slot::Arg)?;
                if slot == Slot::Arg {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f, Slot::Top)
    }
}

impl Lambda for LTerm {
    type Label = Label;

    fn view(&self) -> View<'_, LTerm> {
        match self {
            LTerm::Var(x) => View::Var(x),
            LTerm::Abs(l, x, b) => View::Abs(l.clone(), x, b),
            LTerm::App(c, f, a) => View::App(Label::Name(c.clone()), f, a),
        }
    }

    fn mk_var(x: Name) -> LTerm {
        LTerm::Var(x)
    }

    fn mk_abs(label: Label, x: Name, body: LTerm) -> LTerm {
        LTerm::Abs(label, x, Box::new(body))
    }

    fn mk_app(label: Label, fun: LTerm, arg: LTerm) -> LTerm {
        let c = label.as_name().cloned().expect("applications cannot carry the star label");
        LTerm::App(c, Box::new(fun), Box::new(arg))
    }

    fn free_vars(&self) -> NameSet {
        LTerm::free_vars(self)
    }

    fn is_free(&self, x: &Name) -> bool {
        LTerm::is_free(self, x)
    }

    fn normalized(&self, reserved: &NameSet) -> LTerm {
        LTerm::normalized(self, reserved)
    }

    fn fire(app: &Label, abs: &Label, x: &Name, body: &LTerm, arg: &LTerm, reserved: &NameSet) -> Option<LTerm> {
        let a = app.as_name()?;
        if !abs.is(a) {
            return None;
        }
        Some(body.label_subst_star(a).subst_raw(x, arg, reserved))
    }

    fn split_app(&self, label: &Label) -> Option<(LTerm, LTerm)> {
        let LTerm::App(c, f, a) = self else {
            return None;
        };
        let want = label.as_name()?;
        if c == want {
            return Some(((**f).clone(), (**a).clone()));
        }
        if f.has_free_label(want) {
            return None;
        }
        let renamed = if f.all_labels().contains(want) {
            // `want` is bound somewhere inside; rename via a fresh intermediate.
            let taken = f.all_labels();
            let tmp = fresh(want, |d| taken.contains(d));
            f.rename_bound_label(want, &tmp).rename_free_label(c, want)
        } else {
            f.rename_free_label(c, want)
        };
        Some((renamed, (**a).clone()))
    }

    fn open_abs(&self, label: &Label, x: &Name) -> Option<LTerm> {
        match self {
            LTerm::Abs(l, y, b) if l == label => {
                if y == x {
                    Some((**b).clone())
                } else if self.is_free(x) {
                    None
                } else {
                    Some(b.subst_raw(y, &LTerm::Var(x.clone()), &NameSet::new()))
                }
            }
            _ => None,
        }
    }
}

impl LTerm {
    /// Renames every application binder labeled `from` (and what it binds) to `to`.
    fn rename_bound_label(&self, from: &Name, to: &Name) -> LTerm {
        match self {
            LTerm::Var(_) => self.clone(),
            LTerm::Abs(l, x, b) => LTerm::Abs(l.clone(), x.clone(), Box::new(b.rename_bound_label(from, to))),
            LTerm::App(c, f, a) => {
                let f2 = f.rename_bound_label(from, to);
                let a2 = a.rename_bound_label(from, to);
                if c == from {
                    LTerm::App(to.clone(), Box::new(f2.rename_free_label(from, to)), Box::new(a2))
                } else {
                    LTerm::App(c.clone(), Box::new(f2), Box::new(a2))
                }
            }
        }
    }
}

/// Labeled redex positions under `s`, in pre-order.
pub fn labeled_redexes(a: &LTerm, s: &Barrier) -> Vec<Position> {
    lambda::redexes(a, s)
}

pub fn labeled_contract(a: &LTerm, p: &Position, s: &Barrier) -> Result<LTerm> {
    lambda::contract(a, p, s).ok_or_else(|| Error::NotALabeledRedex(p.clone()))
}

/// Default step ceiling for [`labeled_normalize`]; finiteness of
/// superdevelopments means it is never reached.
pub const NORMALIZE_CEILING: usize = 1_000_000;

/// Leftmost-innermost normalization.
pub fn labeled_normalize(a: &LTerm, s: &Barrier) -> Normalization<LTerm> {
    labeled_normalize_bounded(a, s, NORMALIZE_CEILING)
}

pub fn labeled_normalize_bounded(a: &LTerm, s: &Barrier, ceiling: usize) -> Normalization<LTerm> {
    let reserved = s.set();
    let mut trace = ReductionTrace::new(s.clone(), a.normalized(&reserved));
    loop {
        let cur = trace.end().clone();
        let Some(p) = innermost(&cur, s) else {
            return Normalization {
                trace,
                status: TraceStatus::Normal,
            };
        };
        if trace.len() >= ceiling {
            return Normalization {
                trace,
                status: TraceStatus::FuelExhausted,
            };
        }
        let after = lambda::contract(&cur, &p, s).expect("selected position is a redex");
        trace.steps.push(ReductionStep {
            before: cur,
            redex: p,
            after,
        });
    }
}

/// The leftmost redex containing no other redex: the first one in post-order.
fn innermost(a: &LTerm, s: &Barrier) -> Option<Position> {
    let all = labeled_redexes(a, s);
    all.iter()
        .find(|p| !all.iter().any(|q| q != *p && p.is_prefix_of(q)))
        .cloned()
}

/// Sequential label supply that avoids a set of taken names.
pub struct LabelSupply {
    next: usize,
    taken: NameSet,
}

impl LabelSupply {
    pub fn new(taken: NameSet) -> LabelSupply {
        LabelSupply { next: 0, taken }
    }

    pub fn fresh(&mut self) -> Name {
        loop {
            let n = self.next;
            self.next += 1;
            let name = Name::new(&label_name(n));
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// a, b, ..., z, a1, b1, ...
fn label_name(n: usize) -> String {
    let letter = (b'a' + (n % 26) as u8) as char;
    if n < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", n / 26)
    }
}

/// An initial labeling of `m`: abstractions get pairwise distinct labels.
///
/// An application is labeled like the head abstraction its function part
/// superdevelops to, so that every redex the function can expose (directly
/// or after contracting upward-created redexes) is a labeled redex.
/// Applications whose function never yields an abstraction get a fresh label.
pub fn label_initial(m: &Term) -> LTerm {
    let mut supply = LabelSupply::new(NameSet::new());
    let raw = label_abstractions(m, &mut supply);
    label_applications(&raw, &mut supply).normalized(&NameSet::new())
}

/// First pass: fresh abstraction labels in pre-order; applications get placeholders.
fn label_abstractions(m: &Term, supply: &mut LabelSupply) -> LTerm {
    match m {
        Term::Var(x) => LTerm::Var(x.clone()),
        Term::Abs(x, b) => {
            let l = supply.fresh();
            LTerm::Abs(Label::Name(l), x.clone(), Box::new(label_abstractions(b, supply)))
        }
        Term::App(f, a) => {
            let f2 = label_abstractions(f, supply);
            let a2 = label_abstractions(a, supply);
            LTerm::App(Name::new("_"), Box::new(f2), Box::new(a2))
        }
    }
}

fn label_applications(t: &LTerm, supply: &mut LabelSupply) -> LTerm {
    match t {
        LTerm::Var(_) => t.clone(),
        LTerm::Abs(l, x, b) => LTerm::Abs(l.clone(), x.clone(), Box::new(label_applications(b, supply))),
        LTerm::App(_, f, a) => {
            let f2 = label_applications(f, supply);
            let a2 = label_applications(a, supply);
            let c = head_label(&f2).unwrap_or_else(|| supply.fresh());
            LTerm::App(c, Box::new(f2), Box::new(a2))
        }
    }
}

/// Label of the head abstraction of `f⇓{⟨⟩,j}` for the least `j ≥ 1` at
/// which it is defined and not the star.
fn head_label(f: &LTerm) -> Option<Name> {
    let f = f.normalized(&NameSet::new());
    let mut engine = Engine::new(&f);
    let empty = Barrier::empty();
    for j in 1..=f.size() + 1 {
        if let Some(LTerm::Abs(Label::Name(l), _, _)) = engine.full(&empty, j) {
            if f.has_free_label(&l) {
                return Some(l);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_labeled, parse_term};

    fn l(s: &str) -> LTerm {
        parse_labeled(s).unwrap()
    }

    fn labels(xs: &[&str]) -> BTreeSet<Label> {
        xs.iter()
            .map(|s| if *s == "*" { Label::Star } else { Label::name(s) })
            .collect()
    }

    #[test]
    fn free_labels_follow_the_equations() {
        assert_eq!(l("\\x^a. x").free_labels(), labels(&["a"]));
        assert_eq!(l("(\\z^a. z) @a y").free_labels(), labels(&[]));
        assert_eq!(l("(\\z^b. z) @a y").free_labels(), labels(&["b"]));
        assert_eq!(l("x @a (\\y^a. y)").free_labels(), labels(&["a"]));
    }

    #[test]
    fn erase_examples() {
        assert_eq!(l("\\x^a. x @b y").erase(), parse_term("\\x. x y").unwrap());
        assert_eq!(l("x").erase(), parse_term("x").unwrap());
        assert_eq!(
            l("(\\x^a. x) @a (\\y^b. y)").erase(),
            parse_term("(\\x. x) (\\y. y)").unwrap()
        );
    }

    #[test]
    fn star_substitution_respects_binding() {
        let a = Name::new("a");
        assert_eq!(l("\\x^a. x").label_subst_star(&a), l("\\x^*. x"));
        let t = l("(\\z^a. z) @a y");
        assert_eq!(t.label_subst_star(&a), t);
        assert_eq!(l("x @a (\\y^a. y)").label_subst_star(&a), l("x @a (\\y^*. y)"));
    }

    #[test]
    fn label_alpha_equality() {
        assert_eq!(l("(\\z^a. z) @a y"), l("(\\z^c. z) @c y"));
        assert_ne!(l("(\\z^a. z) @a y"), l("(\\z^a. z) @c y"));
        assert_ne!(l("\\x^a. x"), l("\\x^b. x"));
        assert_ne!(l("\\x^a. x"), l("\\x^*. x"));
    }

    #[test]
    fn substitution_does_not_capture_labels() {
        // (x @a x)[x := λᵃy.y] renames the binding a first
        let r = l("x @a x").subst(&Name::new("x"), &l("\\y^a. y"));
        assert_eq!(r, l("(\\y^a. y) @b (\\y^a. y)"));
        assert_ne!(r, l("(\\y^a. y) @a (\\y^a. y)"));
        assert_eq!(r.free_labels(), labels(&["a"]));
    }

    #[test]
    fn labeled_redex_examples() {
        let e = Barrier::empty();
        assert_eq!(labeled_redexes(&l("(\\x^a. x) @a y"), &e), vec![Position::root()]);
        assert!(labeled_redexes(&l("(\\z^a. z) @c y"), &e).is_empty());
        assert!(labeled_redexes(&l("(\\x^a. x) @a y"), &Barrier::parse("y")).is_empty());
    }

    #[test]
    fn contraction_stars_the_fired_label() {
        let e = Barrier::empty();
        let r = labeled_contract(&l("(\\x^a. \\y^b. y) @a w"), &Position::root(), &e).unwrap();
        assert_eq!(r, l("\\y^b. y"));
        let r = labeled_contract(&l("(\\x^a. \\y^a. y) @a w"), &Position::root(), &e).unwrap();
        assert_eq!(r, l("\\y^*. y"));
        let r = labeled_contract(&l("(\\x^a. x @b x) @a (\\z^b. z)"), &Position::root(), &e).unwrap();
        assert_eq!(r, l("(\\z^b. z) @c (\\z^b. z)"));
        assert!(labeled_redexes(&r, &e).is_empty());
    }

    #[test]
    fn binding_labels_block_the_counterexample() {
        let e = Barrier::empty();
        let a = l("(\\x^b. x @a y) @b (\\z^a. z)");
        let n = labeled_normalize(&a, &e);
        assert_eq!(n.trace.len(), 1);
        assert_eq!(n.status, TraceStatus::Normal);
        assert_eq!(*n.result(), l("(\\z^a. z) @c y"));
        assert_eq!(n.result().erase(), parse_term("(\\z. z) y").unwrap());
    }

    #[test]
    fn initial_labeling_of_the_running_example() {
        let m = parse_term("(\\z. z) (\\x. (\\w. w) x) y").unwrap();
        let a = label_initial(&m);
        assert!(a.is_initially_labeled());
        assert_eq!(a.erase(), m);
        let n = labeled_normalize(&a, &Barrier::empty());
        assert_eq!(n.result().erase(), parse_term("y").unwrap());
        assert_eq!(n.trace.len(), 3);
    }

    #[test]
    fn initial_labeling_examples() {
        let a = label_initial(&parse_term("\\x. \\y. x").unwrap());
        assert!(a.is_initially_labeled());
        let a = label_initial(&parse_term("x y").unwrap());
        assert!(matches!(a, LTerm::App(..)));
        let a = label_initial(&parse_term("(\\x. x) (\\y. y)").unwrap());
        assert_eq!(labeled_redexes(&a, &Barrier::empty()), vec![Position::root()]);
        assert!(l("(\\x^a. x) @c (\\y^a. y)").validate_initially_labeled().is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::arb::{arb_barrier, arb_labeled, arb_term};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn initial_labeling_is_initial(m in arb_term()) {
            let a = label_initial(&m);
            prop_assert!(a.is_initially_labeled());
            prop_assert_eq!(a.erase(), m);
        }

        #[test]
        fn weakening_and_monotonicity(a in arb_labeled(), s in arb_barrier()) {
            let fresh = Barrier::new([Name::new("v")]);
            for p in labeled_redexes(&a, &s) {
                let b = labeled_contract(&a, &p, &s).unwrap();
                prop_assert_eq!(labeled_contract(&a, &p, &Barrier::empty()).unwrap(), b.clone());
                prop_assert_eq!(labeled_contract(&a, &p, &s.concat(&fresh)).unwrap(), b);
            }
        }

        #[test]
        fn starring_commutes_with_substitution(a in arb_labeled(), b in arb_labeled(), x in prop::sample::select(vec!["x", "y", "z"])) {
            let x = Name::new(x);
            for l in a.all_labels() {
                if b.free_labels().contains(&Label::Name(l.clone())) {
                    continue;
                }
                prop_assert_eq!(a.label_subst_star(&l).subst(&x, &b), a.subst(&x, &b).label_subst_star(&l));
            }
        }

        #[test]
        fn normalization_terminates(a in arb_labeled(), s in arb_barrier()) {
            let n = labeled_normalize(&a, &s);
            prop_assert_eq!(n.status, TraceStatus::Normal);
            prop_assert!(labeled_redexes(n.result(), &s).is_empty());
        }
    }
}
