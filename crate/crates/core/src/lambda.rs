//! A common view of plain and labeled terms, used by the superstep engine
//! and the generic position helpers.

use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::names::{Barrier, Name, NameSet};
use crate::term::{Position, Term};

pub enum View<'a, T: Lambda> {
    Var(&'a Name),
    Abs(T::Label, &'a Name, &'a T),
    App(T::Label, &'a T, &'a T),
}

pub trait Lambda: Clone + Eq + Hash + fmt::Display + fmt::Debug + Send + Sync + 'static {
    type Label: Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync;

    fn view(&self) -> View<'_, Self>;
    fn mk_var(x: Name) -> Self;
    fn mk_abs(label: Self::Label, x: Name, body: Self) -> Self;
    fn mk_app(label: Self::Label, fun: Self, arg: Self) -> Self;

    fn free_vars(&self) -> NameSet;
    fn is_free(&self, x: &Name) -> bool;
    fn normalized(&self, reserved: &NameSet) -> Self;

    /// Contractum of `(λ^abs x. body) @app arg`, or `None` if the labels do not match.
    fn fire(
        app: &Self::Label,
        abs: &Self::Label,
        x: &Name,
        body: &Self,
        arg: &Self,
        reserved: &NameSet,
    ) -> Option<Self>;

    /// Views `self` as an application labeled `label` and returns its parts,
    /// renaming the bound application label if needed.
    fn split_app(&self, label: &Self::Label) -> Option<(Self, Self)>;

    /// Views `self` as an abstraction labeled `label` binding `x` and returns its body.
    fn open_abs(&self, label: &Self::Label, x: &Name) -> Option<Self>;

    fn size(&self) -> usize {
        match self.view() {
            View::Var(_) => 1,
            View::Abs(_, _, b) => 1 + b.size(),
            View::App(_, f, a) => 1 + f.size() + a.size(),
        }
    }

    fn away_from(&self, s: &Barrier) -> bool {
        s.is_disjoint(&self.free_vars())
    }
}

/// The plain calculus has a single, implicit label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct NoLabel;

impl fmt::Display for NoLabel {
    fn fmt(&self, _: &mut fmt::Formatter<'_>) -> fmt::Result {
        Ok(())
    }
}

impl Lambda for Term {
    type Label = NoLabel;

    fn view(&self) -> View<'_, Term> {
        match self {
            Term::Var(x) => View::Var(x),
            Term::Abs(x, b) => View::Abs(NoLabel, x, b),
            Term::App(f, a) => View::App(NoLabel, f, a),
        }
    }

    fn mk_var(x: Name) -> Term {
        Term::Var(x)
    }

    fn mk_abs(_: NoLabel, x: Name, body: Term) -> Term {
        Term::Abs(x, Box::new(body))
    }

    fn mk_app(_: NoLabel, fun: Term, arg: Term) -> Term {
        Term::app(fun, arg)
    }

    fn free_vars(&self) -> NameSet {
        Term::free_vars(self)
    }

    fn is_free(&self, x: &Name) -> bool {
        Term::is_free(self, x)
    }

    fn normalized(&self, reserved: &NameSet) -> Term {
        Term::normalized(self, reserved)
    }

    fn fire(_: &NoLabel, _: &NoLabel, x: &Name, body: &Term, arg: &Term, reserved: &NameSet) -> Option<Term> {
        Some(body.subst_raw(x, arg, reserved))
    }

    fn split_app(&self, _: &NoLabel) -> Option<(Term, Term)> {
        match self {
            Term::App(f, a) => Some(((**f).clone(), (**a).clone())),
            _ => None,
        }
    }

    fn open_abs(&self, _: &NoLabel, x: &Name) -> Option<Term> {
        match self {
            Term::Abs(y, b) if y == x => Some((**b).clone()),
            Term::Abs(y, b) if !self.is_free(x) => {
                Some(b.subst_raw(y, &Term::Var(x.clone()), &NameSet::new()))
            }
            _ => None,
        }
    }
}

/// True iff `t` is `λx1...xn. x` with `x` distinct from every `xi`.
pub fn is_projection<T: Lambda>(t: &T, x: &Name, n: usize) -> bool {
    let mut cur = t;
    for _ in 0..n {
        match cur.view() {
            View::Abs(_, y, b) => {
                if y == x {
                    return false;
                }
                cur = b;
            }
            _ => return false,
        }
    }
    matches!(cur.view(), View::Var(y) if y == x)
}

/// Number of leading abstractions.
pub fn leading_abstractions<T: Lambda>(t: &T) -> usize {
    let mut n = 0;
    let mut cur = t;
    while let View::Abs(_, _, b) = cur.view() {
        n += 1;
        cur = b;
    }
    n
}

pub fn subterm_at<'a, T: Lambda>(t: &'a T, p: &Position) -> Result<&'a T> {
    let mut cur = t;
    for &d in p.dirs() {
        cur = match (cur.view(), d) {
            (View::App(_, f, _), 0) => f,
            (View::App(_, _, a), 1) => a,
            (View::Abs(_, _, b), 1) => b,
            _ => return Err(Error::InvalidPosition(p.clone())),
        };
    }
    Ok(cur)
}

/// `t[n]_p`; free variables of `n` may become bound.
pub fn replace_at<T: Lambda>(t: &T, p: &Position, n: T) -> Result<T> {
    fn go<T: Lambda>(t: &T, dirs: &[u8], n: T, p: &Position) -> Result<T> {
        let Some((&d, rest)) = dirs.split_first() else {
            return Ok(n);
        };
        match (t.view(), d) {
            (View::App(l, f, a), 0) => Ok(T::mk_app(l.clone(), go(f, rest, n, p)?, a.clone())),
            (View::App(l, f, a), 1) => Ok(T::mk_app(l.clone(), f.clone(), go(a, rest, n, p)?)),
            (View::Abs(l, x, b), 1) => Ok(T::mk_abs(l.clone(), x.clone(), go(b, rest, n, p)?)),
            _ => Err(Error::InvalidPosition(p.clone())),
        }
    }
    go(t, p.dirs(), n, p)
}

/// Binders above `p`, innermost first.
pub fn binding_path<T: Lambda>(t: &T, p: &Position) -> Result<Barrier> {
    let mut cur = t;
    let mut outer_first = Vec::new();
    for &d in p.dirs() {
        cur = match (cur.view(), d) {
            (View::App(_, f, _), 0) => f,
            (View::App(_, _, a), 1) => a,
            (View::Abs(_, x, b), 1) => {
                outer_first.push(x.clone());
                b
            }
            _ => return Err(Error::InvalidPosition(p.clone())),
        };
    }
    outer_first.reverse();
    Ok(Barrier::new(outer_first))
}

/// All positions in pre-order.
pub fn positions<T: Lambda>(t: &T) -> Vec<Position> {
    fn go<T: Lambda>(t: &T, here: &mut Vec<u8>, out: &mut Vec<Position>) {
        out.push(Position(here.clone()));
        match t.view() {
            View::Var(_) => {}
            View::App(_, f, a) => {
                here.push(0);
                go(f, here, out);
                here.pop();
                here.push(1);
                go(a, here, out);
                here.pop();
            }
            View::Abs(_, _, b) => {
                here.push(1);
                go(b, here, out);
                here.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Positions of subterms `(λx.P) Q` (labels matching) that are away from
/// their binding path extended with `s`, in pre-order.
pub fn redexes<T: Lambda>(t: &T, s: &Barrier) -> Vec<Position> {
    fn go<T: Lambda>(t: &T, here: &mut Vec<u8>, bound: &mut Vec<Name>, s: &Barrier, out: &mut Vec<Position>) {
        match t.view() {
            View::Var(_) => {}
            View::App(l, f, a) => {
                if let View::Abs(l2, _, _) = f.view() {
                    if l == l2 {
                        let fv = t.free_vars();
                        if s.is_disjoint(&fv) && !bound.iter().any(|b| fv.contains(b)) {
                            out.push(Position(here.clone()));
                        }
                    }
                }
                here.push(0);
                go(f, here, bound, s, out);
                here.pop();
                here.push(1);
                go(a, here, bound, s, out);
                here.pop();
            }
            View::Abs(_, x, b) => {
                here.push(1);
                bound.push(x.clone());
                go(b, here, bound, s, out);
                bound.pop();
                here.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut Vec::new(), s, &mut out);
    out
}

/// Contracts the redex at `p`, checking that it is one under `s`.
/// The result is in Barendregt form with binders kept apart from `s`.
pub fn contract<T: Lambda>(t: &T, p: &Position, s: &Barrier) -> Option<T> {
    let sub = subterm_at(t, p).ok()?;
    let View::App(l, f, a) = sub.view() else {
        return None;
    };
    let View::Abs(l2, x, body) = f.view() else {
        return None;
    };
    let fv = sub.free_vars();
    let bp = binding_path(t, p).ok()?;
    if !bp.concat(s).is_disjoint(&fv) {
        return None;
    }
    let reserved = s.set();
    let contractum = T::fire(&l, &l2, x, body, a, &reserved)?;
    Some(replace_at(t, p, contractum).ok()?.normalized(&reserved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    #[test]
    fn projection_shape() {
        let t = parse_term("\\a. \\b. x").unwrap();
        assert!(is_projection(&t, &Name::new("x"), 2));
        assert!(!is_projection(&t, &Name::new("x"), 1));
        assert!(!is_projection(&parse_term("\\x. x").unwrap(), &Name::new("x"), 1));
        assert_eq!(leading_abstractions(&t), 2);
    }

    #[test]
    fn generic_helpers_agree_with_term_methods() {
        let m = parse_term("\\x. (\\y. y x) (\\z. z) w").unwrap();
        assert_eq!(positions(&m), m.positions());
        for p in m.positions() {
            assert_eq!(subterm_at(&m, &p).unwrap(), m.subterm_at(&p).unwrap());
            assert_eq!(binding_path(&m, &p).unwrap(), m.binding_path(&p).unwrap());
            assert_eq!(
                replace_at(&m, &p, Term::var("q")).unwrap(),
                m.replace_at(&p, Term::var("q")).unwrap()
            );
        }
    }
}
