//! Marked terms: only starred redexes `(λ⋆x.M) N` may be contracted.
//! Used to classify the redexes a single contraction creates.
//!
//! Positions inside a marked redex at `p`: `p·0·1` is the body, `p·1` the
//! argument; `p·0` (the starred abstraction) is not a term on its own.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::names::{fresh, Barrier, Name, NameSet};
use crate::term::{hash_var, vars_match, Position, Slot, Term};

#[derive(Clone, Debug)]
pub enum MTerm {
    Var(Name),
    App(Box<MTerm>, Box<MTerm>),
    Abs(Name, Box<MTerm>),
    /// `(λ⋆x.body) arg`
    Marked(Name, Box<MTerm>, Box<MTerm>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Case {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
            Case::IV => "IV",
        })
    }
}

/// A redex created at `created` (in the contractum term) by contracting the
/// marked redex at `contracted` (in the source term).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CreationCase {
    pub case: Case,
    pub created: Position,
    pub contracted: Position,
}

impl CreationCase {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "case": self.case.to_string(),
            "created": self.created.dirs(),
            "contracted": self.contracted.dirs(),
        })
    }
}

impl MTerm {
    pub fn var(x: &str) -> MTerm {
        MTerm::Var(Name::new(x))
    }

    pub fn app(f: MTerm, a: MTerm) -> MTerm {
        MTerm::App(Box::new(f), Box::new(a))
    }

    pub fn abs(x: &str, b: MTerm) -> MTerm {
        MTerm::Abs(Name::new(x), Box::new(b))
    }

    pub fn marked(x: &str, b: MTerm, a: MTerm) -> MTerm {
        MTerm::Marked(Name::new(x), Box::new(b), Box::new(a))
    }

    /// Every marked redex becomes an ordinary one.
    pub fn erase_stars(&self) -> Term {
        match self {
            MTerm::Var(x) => Term::Var(x.clone()),
            MTerm::App(f, a) => Term::app(f.erase_stars(), a.erase_stars()),
            MTerm::Abs(x, b) => Term::Abs(x.clone(), Box::new(b.erase_stars())),
            MTerm::Marked(x, b, a) => Term::app(Term::Abs(x.clone(), Box::new(b.erase_stars())), a.erase_stars()),
        }
    }

    pub fn size(&self) -> usize {
        self.erase_stars().size()
    }

    pub fn free_vars(&self) -> NameSet {
        self.erase_stars().free_vars()
    }

    pub fn is_free(&self, x: &Name) -> bool {
        match self {
            MTerm::Var(y) => x == y,
            MTerm::App(f, a) => f.is_free(x) || a.is_free(x),
            MTerm::Abs(y, b) => x != y && b.is_free(x),
            MTerm::Marked(y, b, a) => (x != y && b.is_free(x)) || a.is_free(x),
        }
    }

    pub fn away_from(&self, s: &Barrier) -> bool {
        s.is_disjoint(&self.free_vars())
    }

    /// Capture-avoiding `M[x := N]` in Barendregt form.
    pub fn subst(&self, x: &Name, n: &MTerm) -> MTerm {
        let fv_n = n.free_vars();
        self.subst_go(x, n, &fv_n).normalized(&NameSet::new())
    }

    fn subst_go(&self, x: &Name, n: &MTerm, fv_n: &NameSet) -> MTerm {
        let under = |y: &Name, b: &MTerm| -> (Name, MTerm) {
            if y == x || !b.is_free(x) {
                return (y.clone(), b.clone());
            }
            if fv_n.contains(y) {
                let names = b.erase_stars().all_names();
                let y2 = fresh(y, |c| fv_n.contains(c) || names.contains(c) || c == x);
                let b2 = b.subst_go(y, &MTerm::Var(y2.clone()), &NameSet::new());
                (y2, b2.subst_go(x, n, fv_n))
            } else {
                (y.clone(), b.subst_go(x, n, fv_n))
            }
        };
        match self {
            MTerm::Var(y) => {
                if y == x {
                    n.clone()
                } else {
                    self.clone()
                }
            }
            MTerm::App(f, a) => MTerm::app(f.subst_go(x, n, fv_n), a.subst_go(x, n, fv_n)),
            MTerm::Abs(y, b) => {
                let (y2, b2) = under(y, b);
                MTerm::Abs(y2, Box::new(b2))
            }
            MTerm::Marked(y, b, a) => {
                let (y2, b2) = under(y, b);
                MTerm::Marked(y2, Box::new(b2), Box::new(a.subst_go(x, n, fv_n)))
            }
        }
    }

    pub fn normalized(&self, reserved: &NameSet) -> MTerm {
        let mut used = self.free_vars();
        used.extend(reserved.iter().cloned());
        self.normalize_go(&mut used, &mut Vec::new())
    }

    fn normalize_go(&self, used: &mut NameSet, env: &mut Vec<(Name, Name)>) -> MTerm {
        let bind = |x: &Name, b: &MTerm, used: &mut NameSet, env: &mut Vec<(Name, Name)>| {
            let x2 = fresh(x, |c| used.contains(c));
            used.insert(x2.clone());
            env.push((x.clone(), x2.clone()));
            let b2 = b.normalize_go(used, env);
            env.pop();
            (x2, b2)
        };
        match self {
            MTerm::Var(x) => match env.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => MTerm::Var(new.clone()),
                None => self.clone(),
            },
            MTerm::App(f, a) => MTerm::app(f.normalize_go(used, env), a.normalize_go(used, env)),
            MTerm::Abs(x, b) => {
                let (x2, b2) = bind(x, b, used, env);
                MTerm::Abs(x2, Box::new(b2))
            }
            MTerm::Marked(x, b, a) => {
                let (x2, b2) = bind(x, b, used, env);
                let a2 = a.normalize_go(used, env);
                MTerm::Marked(x2, Box::new(b2), Box::new(a2))
            }
        }
    }

    /// Addressable positions in pre-order; starred abstractions are skipped.
    pub fn positions(&self) -> Vec<Position> {
        fn go(t: &MTerm, here: &mut Vec<u8>, out: &mut Vec<Position>) {
            out.push(Position(here.clone()));
            let child = |dirs: &[u8], c: &MTerm, here: &mut Vec<u8>, out: &mut Vec<Position>| {
                here.extend_from_slice(dirs);
                go(c, here, out);
                here.truncate(here.len() - dirs.len());
            };
            match t {
                MTerm::Var(_) => {}
                MTerm::App(f, a) => {
                    child(&[0], f, here, out);
                    child(&[1], a, here, out);
                }
                MTerm::Abs(_, b) => child(&[1], b, here, out),
                MTerm::Marked(_, b, a) => {
                    child(&[0, 1], b, here, out);
                    child(&[1], a, here, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Follows `p`, returning the subterm and the binders passed (outermost first).
    fn walk(&self, p: &Position) -> Result<(&MTerm, Vec<Name>)> {
        let mut cur = self;
        let mut bound = Vec::new();
        let dirs = p.dirs();
        let mut i = 0;
        while i < dirs.len() {
            cur = match (cur, dirs[i]) {
                (MTerm::App(f, _), 0) => f,
                (MTerm::App(_, a), 1) | (MTerm::Marked(_, _, a), 1) => a,
                (MTerm::Abs(x, b), 1) => {
                    bound.push(x.clone());
                    b
                }
                (MTerm::Marked(x, b, _), 0) if dirs.get(i + 1) == Some(&1) => {
                    i += 1;
                    bound.push(x.clone());
                    b
                }
                _ => return Err(Error::InvalidPosition(p.clone())),
            };
            i += 1;
        }
        Ok((cur, bound))
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&MTerm> {
        Ok(self.walk(p)?.0)
    }

    pub fn binding_path(&self, p: &Position) -> Result<Barrier> {
        let mut bound = self.walk(p)?.1;
        bound.reverse();
        Ok(Barrier::new(bound))
    }

    pub fn replace_at(&self, p: &Position, n: MTerm) -> Result<MTerm> {
        fn go(t: &MTerm, dirs: &[u8], n: MTerm, p: &Position) -> Result<MTerm> {
            let Some((&d, rest)) = dirs.split_first() else {
                return Ok(n);
            };
            match (t, d) {
                (MTerm::App(f, a), 0) => Ok(MTerm::app(go(f, rest, n, p)?, (**a).clone())),
                (MTerm::App(f, a), 1) => Ok(MTerm::app((**f).clone(), go(a, rest, n, p)?)),
                (MTerm::Abs(x, b), 1) => Ok(MTerm::Abs(x.clone(), Box::new(go(b, rest, n, p)?))),
                (MTerm::Marked(x, b, a), 1) => Ok(MTerm::Marked(x.clone(), b.clone(), Box::new(go(a, rest, n, p)?))),
                (MTerm::Marked(x, b, a), 0) if rest.first() == Some(&1) => Ok(MTerm::Marked(
                    x.clone(),
                    Box::new(go(b, &rest[1..], n, p)?),
                    a.clone(),
                )),
                _ => Err(Error::InvalidPosition(p.clone())),
            }
        }
        go(self, p.dirs(), n, p)
    }

    fn is_plain_redex(&self) -> bool {
        matches!(self, MTerm::App(f, _) if matches!(**f, MTerm::Abs(..)))
    }
}

fn alpha_eq<'a>(a: &'a MTerm, b: &'a MTerm, env: &mut Vec<(&'a Name, &'a Name)>) -> bool {
    match (a, b) {
        (MTerm::Var(x), MTerm::Var(y)) => vars_match(x, y, env),
        (MTerm::App(f1, a1), MTerm::App(f2, a2)) => alpha_eq(f1, f2, env) && alpha_eq(a1, a2, env),
        (MTerm::Abs(x, b1), MTerm::Abs(y, b2)) => {
            env.push((x, y));
            let r = alpha_eq(b1, b2, env);
            env.pop();
            r
        }
        (MTerm::Marked(x, b1, a1), MTerm::Marked(y, b2, a2)) => {
            env.push((x, y));
            let r = alpha_eq(b1, b2, env);
            env.pop();
            r && alpha_eq(a1, a2, env)
        }
        _ => false,
    }
}

fn hash_term<'a, H: Hasher>(t: &'a MTerm, env: &mut Vec<&'a Name>, state: &mut H) {
    match t {
        MTerm::Var(x) => hash_var(x, env, state),
        MTerm::App(f, a) => {
            2u8.hash(state);
            hash_term(f, env, state);
            hash_term(a, env, state);
        }
        MTerm::Abs(x, b) => {
            3u8.hash(state);
            env.push(x);
            hash_term(b, env, state);
            env.pop();
        }
        MTerm::Marked(x, b, a) => {
            5u8.hash(state);
            env.push(x);
            hash_term(b, env, state);
            env.pop();
            hash_term(a, env, state);
        }
    }
}

impl PartialEq for MTerm {
    fn eq(&self, other: &MTerm) -> bool {
        alpha_eq(self, other, &mut Vec::new())
    }
}

impl Eq for MTerm {}

impl Hash for MTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        hash_term(self, &mut Vec::new(), state)
    }
}

impl MTerm {
    fn fmt_in(&self, f: &mut fmt::Formatter<'_>, slot: Slot) -> fmt::Result {
        match self {
            MTerm::Var(x) => write!(f, "{x}"),
            MTerm::Abs(x, b) => {
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
            MTerm::App(fun, arg) => {
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
            MTerm::Marked(x, b, arg) => {
                if slot == Slot::Arg {
                    f.write_str("(")?;
                }
                write!(f, "(\\*{x}. ")?;
                b.fmt_in(f, Slot::Top)?;
                f.write_str(") ")?;
                arg.fmt_in(f, Slot::Arg)?;
                if slot == Slot::Arg {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for MTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f, Slot::Top)
    }
}

/// Stars exactly the weak redexes of `m`.
pub fn mark_initial(m: &Term) -> MTerm {
    fn go(t: &Term, bound: &mut Vec<Name>) -> MTerm {
        match t {
            Term::Var(x) => MTerm::Var(x.clone()),
            Term::Abs(x, b) => {
                bound.push(x.clone());
                let b2 = go(b, bound);
                bound.pop();
                MTerm::Abs(x.clone(), Box::new(b2))
            }
            Term::App(f, a) => {
                if let Term::Abs(x, body) = &**f {
                    let fv = t.free_vars();
                    if !bound.iter().any(|b| fv.contains(b)) {
                        bound.push(x.clone());
                        let body2 = go(body, bound);
                        bound.pop();
                        return MTerm::Marked(x.clone(), Box::new(body2), Box::new(go(a, bound)));
                    }
                }
                MTerm::app(go(f, bound), go(a, bound))
            }
        }
    }
    go(&m.normalized(&NameSet::new()), &mut Vec::new())
}

/// Marked redexes are exactly the weak redexes: every marked redex is away
/// from its binding path and no unmarked redex is.
pub fn is_initially_marked(a: &MTerm) -> bool {
    a.positions().iter().all(|p| {
        let sub = a.subterm_at(p).expect("listed position");
        let away = || sub.away_from(&a.binding_path(p).expect("listed position"));
        match sub {
            MTerm::Marked(..) => away(),
            _ if sub.is_plain_redex() => !away(),
            _ => true,
        }
    })
}

/// Positions of marked redexes that may be contracted.
pub fn marked_redexes(a: &MTerm) -> Vec<Position> {
    a.positions()
        .into_iter()
        .filter(|p| {
            let sub = a.subterm_at(p).expect("listed position");
            matches!(sub, MTerm::Marked(..)) && sub.away_from(&a.binding_path(p).expect("listed position"))
        })
        .collect()
}

pub fn marked_contract(a: &MTerm, p: &Position) -> Result<MTerm> {
    let sub = a.subterm_at(p).map_err(|_| Error::NotAMarkedRedex(p.clone()))?;
    let MTerm::Marked(x, body, arg) = sub else {
        return Err(Error::NotAMarkedRedex(p.clone()));
    };
    if !sub.away_from(&a.binding_path(p)?) {
        return Err(Error::BarrierViolated(p.clone()));
    }
    let fv = arg.free_vars();
    let contractum = body.subst_go(x, arg, &fv);
    Ok(a.replace_at(p, contractum)?.normalized(&NameSet::new()))
}

/// Unmarked weak redexes of `b`.
fn unmarked_weak_redexes(b: &MTerm) -> Vec<Position> {
    b.positions()
        .into_iter()
        .filter(|q| {
            let sub = b.subterm_at(q).expect("listed position");
            sub.is_plain_redex() && sub.away_from(&b.binding_path(q).expect("listed position"))
        })
        .collect()
}

/// Matches the situation `(a, p, q)` against the four creation shapes.
/// With `strict` unset, the fourth shape drops its free-variable condition.
fn classify(a: &MTerm, p: &Position, q: &Position, strict: bool) -> Vec<Case> {
    let Ok(MTerm::Marked(x, body, arg)) = a.subterm_at(p) else {
        return Vec::new();
    };
    let arg_is_abs = matches!(**arg, MTerm::Abs(..));
    let mut out = Vec::new();
    if q.child(0) == *p {
        if matches!(&**body, MTerm::Var(y) if y == x) && arg_is_abs {
            out.push(Case::I);
        }
        if matches!(**body, MTerm::Abs(..)) {
            out.push(Case::II);
        }
    }
    if let Some(rest) = p.strip_from(q) {
        if let Some(sub) = follow_outside_var(body, &rest, x) {
            if let MTerm::App(f, _) = sub {
                if matches!(&**f, MTerm::Var(y) if y == x) && arg_is_abs {
                    out.push(Case::III);
                }
                if matches!(**f, MTerm::Abs(..)) && (!strict || sub.is_free(x)) {
                    out.push(Case::IV);
                }
            }
        }
    }
    out
}

/// The subterm of `body` at `rest`, unless the path enters a substituted
/// occurrence of `x` (then the position lies inside a copy of the argument).
fn follow_outside_var<'a>(body: &'a MTerm, rest: &Position, x: &Name) -> Option<&'a MTerm> {
    let dirs = rest.dirs();
    for i in 0..dirs.len() {
        let prefix = Position(dirs[..i].to_vec());
        if let Ok(MTerm::Var(y)) = body.subterm_at(&prefix) {
            if y == x {
                return None;
            }
        }
    }
    body.subterm_at(rest).ok()
}

/// Every unmarked weak redex of the contractum with all the case tags that fit it.
/// The creation proposition says each list has exactly one element.
pub fn created_redexes(a: &MTerm, p: &Position) -> Result<(MTerm, Vec<(Position, Vec<Case>)>)> {
    if !is_initially_marked(a) {
        return Err(Error::NotInitiallyMarked);
    }
    let b = marked_contract(a, p)?;
    let found = unmarked_weak_redexes(&b)
        .into_iter()
        .map(|q| {
            let tags = classify(a, p, &q, true);
            (q, tags)
        })
        .collect();
    Ok((b, found))
}

/// One case per created redex.
pub fn detect_creations(a: &MTerm, p: &Position) -> Result<Vec<CreationCase>> {
    let (_, found) = created_redexes(a, p)?;
    found
        .into_iter()
        .map(|(q, tags)| match tags[..] {
            [case] => Ok(CreationCase {
                case,
                created: q,
                contracted: p.clone(),
            }),
            _ => Err(Error::Internal(format!(
                "created redex at {q} matches {} creation shapes",
                tags.len()
            ))),
        })
        .collect()
}

/// Classification without the free-variable condition of the fourth shape,
/// applied to every unmarked weak redex of the contractum. Exposed so that
/// the condition can be shown to matter.
pub fn classify_loose(a: &MTerm, p: &Position) -> Result<Vec<(Position, Vec<Case>)>> {
    let b = marked_contract(a, p)?;
    Ok(unmarked_weak_redexes(&b)
        .into_iter()
        .map(|q| {
            let tags = classify(a, p, &q, false);
            (q, tags)
        })
        .collect())
}

/// Strict classification on any marked term, initially marked or not.
pub fn classify_strict(a: &MTerm, p: &Position) -> Result<Vec<(Position, Vec<Case>)>> {
    let b = marked_contract(a, p)?;
    Ok(unmarked_weak_redexes(&b)
        .into_iter()
        .map(|q| {
            let tags = classify(a, p, &q, true);
            (q, tags)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_marked, parse_term};

    fn m(s: &str) -> MTerm {
        parse_marked(s).unwrap()
    }

    fn pos(v: &[u8]) -> Position {
        Position(v.to_vec())
    }

    #[test]
    fn mark_initial_examples() {
        assert_eq!(mark_initial(&parse_term("(\\x. x) y").unwrap()), m("(\\*x. x) y"));
        let t = parse_term("\\x. (\\y. y) x").unwrap();
        assert_eq!(mark_initial(&t), m("\\x. (\\y. y) x"));
        assert_eq!(
            mark_initial(&parse_term("(\\x. x) ((\\y. y) z)").unwrap()),
            m("(\\*x. x) ((\\*y. y) z)")
        );
    }

    #[test]
    fn initially_marked_examples() {
        assert!(is_initially_marked(&m("(\\*x. x) y")));
        assert!(!is_initially_marked(&m("\\x. (\\*y. y) x")));
        assert!(!is_initially_marked(&m("(\\x. x) y")));
    }

    #[test]
    fn marked_positions() {
        let t = m("(\\*x. x w) y");
        assert_eq!(t.positions(), vec![pos(&[]), pos(&[0, 1]), pos(&[0, 1, 0]), pos(&[0, 1, 1]), pos(&[1])]);
        assert!(t.subterm_at(&pos(&[0])).is_err());
        assert_eq!(t.binding_path(&pos(&[0, 1, 0])).unwrap(), Barrier::parse("x"));
        assert_eq!(t.replace_at(&pos(&[0, 1]), MTerm::var("x")).unwrap(), m("(\\*x. x) y"));
    }

    #[test]
    fn contract_examples() {
        assert_eq!(
            marked_contract(&m("(\\*x. x) (\\y. p) q"), &pos(&[0])).unwrap(),
            m("(\\y. p) q")
        );
        assert_eq!(
            marked_contract(&m("(\\*x. \\y. x) r q"), &pos(&[0])).unwrap(),
            m("(\\y. r) q")
        );
        assert_eq!(
            marked_contract(&m("\\x. (\\*y. y) x"), &pos(&[1])),
            Err(Error::BarrierViolated(pos(&[1])))
        );
        assert_eq!(
            marked_contract(&m("(\\x. x) y"), &pos(&[])),
            Err(Error::NotAMarkedRedex(pos(&[])))
        );
    }

    #[test]
    fn creation_examples() {
        let c = detect_creations(&m("(\\*x. x) (\\y. y) z"), &pos(&[0])).unwrap();
        assert_eq!(
            c,
            vec![CreationCase {
                case: Case::I,
                created: pos(&[]),
                contracted: pos(&[0])
            }]
        );
        let c = detect_creations(&m("(\\*x. (\\z. z) x) y"), &pos(&[])).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].case, c[0].created.clone()), (Case::IV, pos(&[])));
        let c = detect_creations(&m("(\\*x. x w) (\\y. y)"), &pos(&[])).unwrap();
        assert_eq!(c.iter().map(|c| c.case).collect::<Vec<_>>(), vec![Case::III]);
        let c = detect_creations(&m("(\\*x. \\y. x) r q"), &pos(&[0])).unwrap();
        assert_eq!(c.iter().map(|c| c.case).collect::<Vec<_>>(), vec![Case::II]);
    }

    #[test]
    fn duplication_creates_several_redexes() {
        // both copies of the argument get applied
        let a = m("(\\*x. \\u. x u (x u)) (\\y. y)");
        assert!(is_initially_marked(&a));
        let c = detect_creations(&a, &pos(&[])).unwrap();
        assert_eq!(c.len(), 0, "x u is not away from u");
        let a = m("(\\*x. x w (x v)) (\\y. y)");
        let c = detect_creations(&a, &pos(&[])).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|c| c.case == Case::III));
    }

    #[test]
    fn creations_require_initial_marking() {
        assert_eq!(
            detect_creations(&m("(\\x. x) ((\\*y. y) z)"), &pos(&[1])),
            Err(Error::NotInitiallyMarked)
        );
    }

    #[test]
    fn loose_fourth_shape_tags_preexisting_redexes() {
        // (λz.z) w inside the body does not mention x and was never marked
        let a = m("(\\*x. (\\z. z) w) y");
        assert!(!is_initially_marked(&a));
        assert_eq!(classify_strict(&a, &pos(&[])).unwrap(), vec![(pos(&[]), vec![])]);
        assert_eq!(classify_loose(&a, &pos(&[])).unwrap(), vec![(pos(&[]), vec![Case::IV])]);
    }

    #[test]
    fn erase_of_mark_is_identity() {
        let t = parse_term("(\\x. x) ((\\y. \\z. y z) w)").unwrap();
        assert_eq!(mark_initial(&t).erase_stars(), t);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::arb::arb_term;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn initial_marking(m in arb_term()) {
            let a = mark_initial(&m);
            prop_assert!(is_initially_marked(&a));
            prop_assert_eq!(a.erase_stars(), m);
        }

        #[test]
        fn every_creation_has_one_case(m in arb_term()) {
            let a = mark_initial(&m);
            for p in marked_redexes(&a) {
                let (_, found) = created_redexes(&a, &p).unwrap();
                for (_, tags) in found {
                    prop_assert_eq!(tags.len(), 1);
                }
                prop_assert_eq!(classify_loose(&a, &p).unwrap(), classify_strict(&a, &p).unwrap());
            }
        }
    }
}
