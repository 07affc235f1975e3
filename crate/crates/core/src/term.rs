//! Plain weak-calculus terms, positions, contexts and substitution.
//!
//! Equality and hashing are up to alpha-equivalence. Every public operation
//! that builds a term returns it in Barendregt form: binder names are
//! pairwise distinct and distinct from the free variables.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::names::{fresh, Barrier, Name, NameSet};

#[derive(Clone, Debug)]
pub enum Term {
    Var(Name),
    App(Box<Term>, Box<Term>),
    Abs(Name, Box<Term>),
}

/// A path from the root: 0 selects an application's function, 1 its argument
/// or an abstraction's body. The empty path is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<u8>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn child(&self, dir: u8) -> Position {
        let mut v = self.0.clone();
        v.push(dir);
        Position(v)
    }

    pub fn then(&self, other: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Position(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `other` with this prefix removed, if this is a prefix of it.
    pub fn strip_from(&self, other: &Position) -> Option<Position> {
        other.0.strip_prefix(self.0.as_slice()).map(|s| Position(s.to_vec()))
    }

    pub fn dirs(&self) -> &[u8] {
        &self.0
    }

    /// Accepts `1,0,1`, `1.0.1`, `101`, and `e`/`ε`/empty for the root.
    pub fn parse(text: &str) -> Option<Position> {
        let t = text.trim();
        if t.is_empty() || t == "e" || t == "ε" || t == "[]" {
            return Some(Position::root());
        }
        let t = t.trim_start_matches('[').trim_end_matches(']');
        let mut v = Vec::new();
        for c in t.chars() {
            match c {
                '0' => v.push(0),
                '1' => v.push(1),
                ',' | '.' | ' ' | '·' => {}
                _ => return None,
            }
        }
        Some(Position(v))
    }
}

impl From<Vec<u8>> for Position {
    fn from(v: Vec<u8>) -> Position {
        Position(v)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(Name::new(x))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn abs(x: &str, body: Term) -> Term {
        Term::Abs(Name::new(x), Box::new(body))
    }

    /// `f a1 a2 ...`, left associated.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn is_redex(&self) -> bool {
        matches!(self, Term::App(f, _) if matches!(**f, Term::Abs(..)))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Abs(_, b) => 1 + b.size(),
        }
    }

    pub fn free_vars(&self) -> NameSet {
        let mut out = NameSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Name>, out: &mut NameSet) {
        match self {
            Term::Var(x) => {
                if !bound.contains(&x) {
                    out.insert(x.clone());
                }
            }
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Term::Abs(x, b) => {
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, x: &Name) -> bool {
        match self {
            Term::Var(y) => x == y,
            Term::App(f, a) => f.is_free(x) || a.is_free(x),
            Term::Abs(y, b) => x != y && b.is_free(x),
        }
    }

    /// Every name occurring in the term, bound or free.
    pub fn all_names(&self) -> NameSet {
        let mut out = NameSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut NameSet) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(f, a) => {
                f.collect_names(out);
                a.collect_names(out);
            }
            Term::Abs(x, b) => {
                out.insert(x.clone());
                b.collect_names(out);
            }
        }
    }

    /// Binder names in pre-order.
    pub fn binders(&self) -> Vec<Name> {
        let mut out = Vec::new();
        fn go(t: &Term, out: &mut Vec<Name>) {
            match t {
                Term::Var(_) => {}
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                Term::Abs(x, b) => {
                    out.push(x.clone());
                    go(b, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// True iff the term satisfies the Barendregt convention.
    pub fn is_barendregt(&self) -> bool {
        let binders = self.binders();
        let fv = self.free_vars();
        let distinct: NameSet = binders.iter().cloned().collect();
        distinct.len() == binders.len() && binders.iter().all(|b| !fv.contains(b))
    }

    /// `M ↑ S`
    pub fn away_from(&self, s: &Barrier) -> bool {
        s.is_disjoint(&self.free_vars())
    }

    /// All positions in pre-order (leftmost-outermost first), root included.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        fn go(t: &Term, here: &mut Vec<u8>, out: &mut Vec<Position>) {
            out.push(Position(here.clone()));
            match t {
                Term::Var(_) => {}
                Term::App(f, a) => {
                    here.push(0);
                    go(f, here, out);
                    here.pop();
                    here.push(1);
                    go(a, here, out);
                    here.pop();
                }
                Term::Abs(_, b) => {
                    here.push(1);
                    go(b, here, out);
                    here.pop();
                }
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&Term> {
        let mut t = self;
        for &d in p.dirs() {
            t = match (t, d) {
                (Term::App(f, _), 0) => f,
                (Term::App(_, a), 1) => a,
                (Term::Abs(_, b), 1) => b,
                _ => return Err(Error::InvalidPosition(p.clone())),
            };
        }
        Ok(t)
    }

    /// `M[N]_p`. Free variables of `N` may become bound by the context.
    pub fn replace_at(&self, p: &Position, n: Term) -> Result<Term> {
        let (ctx, _) = Context::split(self, p)?;
        Ok(ctx.plug(n))
    }

    /// The variables bound above `p`, innermost first.
    pub fn binding_path(&self, p: &Position) -> Result<Barrier> {
        Ok(Context::split(self, p)?.0.binding_path())
    }

    /// Capture-avoiding `M[x := N]`, returned in Barendregt form.
    pub fn subst(&self, x: &Name, n: &Term) -> Term {
        self.subst_raw(x, n, &NameSet::new()).normalized(&NameSet::new())
    }

    /// Capture-avoiding substitution without re-establishing the convention.
    /// Binders that must be renamed receive names outside `reserved`.
    pub(crate) fn subst_raw(&self, x: &Name, n: &Term, reserved: &NameSet) -> Term {
        let fv_n = n.free_vars();
        self.subst_go(x, n, &fv_n, reserved)
    }

    fn subst_go(&self, x: &Name, n: &Term, fv_n: &NameSet, reserved: &NameSet) -> Term {
        match self {
            Term::Var(y) => {
                if y == x {
                    n.clone()
                } else {
                    self.clone()
                }
            }
            Term::App(f, a) => Term::app(
                f.subst_go(x, n, fv_n, reserved),
                a.subst_go(x, n, fv_n, reserved),
            ),
            Term::Abs(y, b) => {
                if y == x || !b.is_free(x) {
                    return self.clone();
                }
                if fv_n.contains(y) {
                    let names = b.all_names();
                    let y2 = fresh(y, |c| {
                        fv_n.contains(c) || names.contains(c) || reserved.contains(c) || c == x
                    });
                    let b2 = b.subst_go(y, &Term::Var(y2.clone()), &NameSet::new(), reserved);
                    Term::Abs(y2, Box::new(b2.subst_go(x, n, fv_n, reserved)))
                } else {
                    Term::Abs(y.clone(), Box::new(b.subst_go(x, n, fv_n, reserved)))
                }
            }
        }
    }

    /// Renames binders so that they are pairwise distinct, distinct from the
    /// free variables and outside `reserved`. Names are kept where possible.
    pub fn normalized(&self, reserved: &NameSet) -> Term {
        let mut used = self.free_vars();
        used.extend(reserved.iter().cloned());
        self.normalize_go(&mut used, &mut Vec::new())
    }

    fn normalize_go(&self, used: &mut NameSet, env: &mut Vec<(Name, Name)>) -> Term {
        match self {
            Term::Var(x) => match env.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => Term::Var(new.clone()),
                None => self.clone(),
            },
            Term::App(f, a) => Term::app(f.normalize_go(used, env), a.normalize_go(used, env)),
            Term::Abs(x, b) => {
                let x2 = fresh(x, |c| used.contains(c));
                used.insert(x2.clone());
                env.push((x.clone(), x2.clone()));
                let b2 = b.normalize_go(used, env);
                env.pop();
                Term::Abs(x2, Box::new(b2))
            }
        }
    }

    /// Structural equality modulo renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha_eq(self, other, &mut Vec::new())
    }
}

fn alpha_eq<'a>(a: &'a Term, b: &'a Term, env: &mut Vec<(&'a Name, &'a Name)>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => vars_match(x, y, env),
        (Term::App(f1, a1), Term::App(f2, a2)) => alpha_eq(f1, f2, env) && alpha_eq(a1, a2, env),
        (Term::Abs(x, b1), Term::Abs(y, b2)) => {
            env.push((x, y));
            let r = alpha_eq(b1, b2, env);
            env.pop();
            r
        }
        _ => false,
    }
}

/// Bound occurrences must refer to the same binder pair; free ones must coincide.
pub(crate) fn vars_match(x: &Name, y: &Name, env: &[(&Name, &Name)]) -> bool {
    match env.iter().rev().find(|(l, r)| *l == x || *r == y) {
        Some((l, r)) => *l == x && *r == y,
        None => x == y,
    }
}

pub(crate) fn hash_var<H: Hasher>(x: &Name, env: &[&Name], state: &mut H) {
    match env.iter().rev().position(|b| *b == x) {
        Some(i) => {
            0u8.hash(state);
            i.hash(state);
        }
        None => {
            1u8.hash(state);
            x.hash(state);
        }
    }
}

fn hash_term<'a, H: Hasher>(t: &'a Term, env: &mut Vec<&'a Name>, state: &mut H) {
    match t {
        Term::Var(x) => hash_var(x, env, state),
        Term::App(f, a) => {
            2u8.hash(state);
            hash_term(f, env, state);
            hash_term(a, env, state);
        }
        Term::Abs(x, b) => {
            3u8.hash(state);
            env.push(x);
            hash_term(b, env, state);
            env.pop();
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.alpha_eq(other)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        hash_term(self, &mut Vec::new(), state);
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    Top,
    Fun,
    Arg,
}

impl Term {
    fn fmt_in(&self, f: &mut fmt::Formatter<'_>, slot: Slot) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Abs(x, b) => {
                if slot != Slot::Top {
                    f.write_str("(")?;
                }
                write!(f, "\\{x}. ")?;
                b.fmt_in(f, Slot::Top)?;
                if slot != Slot::Top {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Term::App(fun, arg) => {
                if slot == Slot::Arg {
                    f.write_str("(")?;
                }
                fun.fmt_in(f, Slot::Fun)?;
                f.write_str(" ")?;
                arg.fmt_in(f, Slot::Arg)?;
                if slot == Slot::Arg {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f, Slot::Top)
    }
}

#[derive(Clone, Debug)]
enum Frame {
    /// Hole in the function part; holds the argument.
    Fun(Term),
    /// Hole in the argument; holds the function.
    Arg(Term),
    Body(Name),
}

/// A term with exactly one hole, stored as the path of frames from the root.
#[derive(Clone, Debug)]
pub struct Context {
    frames: Vec<Frame>,
}

impl Context {
    pub fn hole() -> Context {
        Context { frames: Vec::new() }
    }

    /// Punches a hole at `p`, returning the context and the removed subterm.
    pub fn split(m: &Term, p: &Position) -> Result<(Context, Term)> {
        let mut frames = Vec::with_capacity(p.dirs().len());
        let mut t = m;
        for &d in p.dirs() {
            t = match (t, d) {
                (Term::App(f, a), 0) => {
                    frames.push(Frame::Fun((**a).clone()));
                    f
                }
                (Term::App(f, a), 1) => {
                    frames.push(Frame::Arg((**f).clone()));
                    a
                }
                (Term::Abs(x, b), 1) => {
                    frames.push(Frame::Body(x.clone()));
                    b
                }
                _ => return Err(Error::InvalidPosition(p.clone())),
            };
        }
        Ok((Context { frames }, t.clone()))
    }

    /// `C[N]`; may bind free variables of `N`.
    pub fn plug(&self, n: Term) -> Term {
        self.frames.iter().rev().fold(n, |acc, fr| match fr {
            Frame::Fun(a) => Term::app(acc, a.clone()),
            Frame::Arg(f) => Term::app(f.clone(), acc),
            Frame::Body(x) => Term::Abs(x.clone(), Box::new(acc)),
        })
    }

    pub fn hole_position(&self) -> Position {
        Position(
            self.frames
                .iter()
                .map(|fr| match fr {
                    Frame::Fun(_) => 0,
                    Frame::Arg(_) | Frame::Body(_) => 1,
                })
                .collect(),
        )
    }

    /// `bp(C)`: bp(λx.C) = bp(C)·x, so the innermost binder comes first.
    pub fn binding_path(&self) -> Barrier {
        Barrier::new(self.frames.iter().rev().filter_map(|fr| match fr {
            Frame::Body(x) => Some(x.clone()),
            _ => None,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn n(s: &str) -> Name {
        Name::new(s)
    }

    fn set(xs: &[&str]) -> NameSet {
        xs.iter().map(|s| n(s)).collect()
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(t("\\x. x y").free_vars(), set(&["y"]));
        assert_eq!(t("x").free_vars(), set(&["x"]));
        assert_eq!(t("(\\x. x) (\\y. y)").free_vars(), set(&[]));
    }

    #[test]
    fn subst_examples() {
        assert_eq!(t("x y").subst(&n("x"), &t("\\z. z")), t("(\\z. z) y"));
        let r = t("\\y. x y").subst(&n("x"), &t("y"));
        assert_eq!(r, t("\\q. y q"));
        assert_eq!(r.to_string(), "\\y1. y y1");
        let id = t("\\y. y");
        assert_eq!(id.subst(&n("x"), &t("w z")), id);
    }

    #[test]
    fn subterm_examples() {
        let m = t("(\\x. x) y");
        assert_eq!(*m.subterm_at(&Position(vec![0])).unwrap(), t("\\x. x"));
        assert_eq!(*t("\\x. x y").subterm_at(&Position(vec![1, 1])).unwrap(), t("y"));
        assert_eq!(*t("x").subterm_at(&Position::root()).unwrap(), t("x"));
        assert_eq!(
            t("x").subterm_at(&Position(vec![0])),
            Err(Error::InvalidPosition(Position(vec![0])))
        );
    }

    #[test]
    fn replace_examples() {
        let m = t("(\\x. x) y");
        assert_eq!(m.replace_at(&Position(vec![1]), t("z")).unwrap(), t("(\\x. x) z"));
        // the replaced variable becomes bound
        let r = t("\\x. w").replace_at(&Position(vec![1]), t("x")).unwrap();
        assert_eq!(r, t("\\q. q"));
        assert_eq!(m.replace_at(&Position::root(), t("u v")).unwrap(), t("u v"));
        assert!(t("x").replace_at(&Position(vec![1]), t("y")).is_err());
    }

    #[test]
    fn binding_path_examples() {
        let bp = t("\\x. \\y. x y").binding_path(&Position(vec![1, 1])).unwrap();
        assert_eq!(bp, Barrier::new(["y", "x"]));
        assert_eq!(bp.set(), set(&["x", "y"]));
        assert_eq!(t("m n").binding_path(&Position(vec![1])).unwrap(), Barrier::empty());
        let bp = t("(\\x. (\\y. y) x) z").binding_path(&Position(vec![0, 1, 0])).unwrap();
        assert_eq!(bp, Barrier::new(["x"]));
    }

    #[test]
    fn away_from_examples() {
        assert!(t("\\z. z").away_from(&Barrier::new(["x"])));
        assert!(!t("x y").away_from(&Barrier::new(["x"])));
        assert!(t("x y").away_from(&Barrier::empty()));
    }

    #[test]
    fn alpha_equality_and_hash_agree() {
        use std::collections::hash_map::DefaultHasher;
        let a = t("\\x. \\y. x y");
        let b = t("\\u. \\v. u v");
        let c = t("\\u. \\v. v u");
        assert_eq!(a, b);
        assert_ne!(a, c);
        let h = |t: &Term| {
            let mut s = DefaultHasher::new();
            t.hash(&mut s);
            s.finish()
        };
        assert_eq!(h(&a), h(&b));
        // free variables are not renamable
        assert_ne!(t("\\x. y"), t("\\x. z"));
        // shadowing is resolved to the nearest binder
        assert_eq!(
            Term::abs("x", Term::abs("x", Term::var("x"))),
            Term::abs("a", Term::abs("b", Term::var("b")))
        );
        assert_ne!(
            Term::abs("x", Term::abs("x", Term::var("x"))),
            Term::abs("a", Term::abs("b", Term::var("a")))
        );
    }

    #[test]
    fn normalization_renames_apart() {
        let raw = Term::app(
            Term::abs("x", Term::var("x")),
            Term::abs("x", Term::app(Term::var("x"), Term::var("x"))),
        );
        let m = raw.normalized(&NameSet::new());
        assert!(m.is_barendregt());
        assert_eq!(m, raw);
        assert_eq!(m.to_string(), "(\\x. x) (\\x1. x1 x1)");
        let reserved = set(&["x"]);
        assert_eq!(t("\\x. x").normalized(&reserved).to_string(), "\\x1. x1");
    }

    #[test]
    fn context_roundtrip() {
        let m = t("\\x. (\\y. y x) z");
        for p in m.positions() {
            let (c, s) = Context::split(&m, &p).unwrap();
            assert_eq!(c.hole_position(), p);
            assert_eq!(c.plug(s), m);
        }
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::arb::arb_term;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn replacing_a_subterm_by_itself(m in arb_term()) {
            for p in m.positions() {
                let sub = m.subterm_at(&p).unwrap().clone();
                prop_assert_eq!(m.replace_at(&p, sub).unwrap(), m.clone());
            }
        }

        #[test]
        fn substituting_an_absent_variable(m in arb_term(), n in arb_term()) {
            let x = Name::new("v");
            prop_assert_eq!(m.subst(&x, &n), m);
        }

        #[test]
        fn free_variables_of_a_substitution(m in arb_term(), n in arb_term(), x in prop::sample::select(vec!["x", "y", "z"])) {
            let x = Name::new(x);
            let r = m.subst(&x, &n);
            let mut bound = m.free_vars();
            bound.remove(&x);
            if m.is_free(&x) {
                bound.extend(n.free_vars());
                prop_assert_eq!(r.free_vars(), bound);
            } else {
                prop_assert!(r.free_vars().is_subset(&bound));
            }
            prop_assert!(r.is_barendregt());
        }

        #[test]
        fn root_is_always_a_position(m in arb_term()) {
            prop_assert!(m.positions().contains(&Position::root()));
            prop_assert_eq!(m.positions().len(), m.size());
        }
    }
}
