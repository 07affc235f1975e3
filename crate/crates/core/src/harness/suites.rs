//! The registered property suites.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{gen_labeling, gen_term, Ctx, Input, Outcome, BINDER_POOL, FREE_POOL};
use crate::chain::{chain_from_superstep, check_chain, ChainDerivation};
use crate::engine::{Derivation, Engine};
use crate::error::Error;
use crate::labeled::{label_initial, labeled_contract, labeled_normalize, labeled_normalize_bounded, labeled_redexes, LTerm, Label, LabelSupply};
use crate::lambda::{self, is_projection, leading_abstractions, Lambda};
use crate::marked::{classify_loose, classify_strict, created_redexes, is_initially_marked, mark_initial, marked_redexes, MTerm};
use crate::names::{Barrier, Name, NameSet};
use crate::parse::{parse_labeled, parse_marked, parse_term};
use crate::superstep::{complete_superstep, diamond_join, join_peak, lift_derivation, plain_complete_superstep};
use crate::term::{Position, Term};
use crate::trace::{ReductionStep, ReductionTrace};
use crate::weak::{weak_contract, weak_redexes};

#[derive(Clone, Copy)]
pub struct Suite {
    pub name: &'static str,
    pub description: &'static str,
    /// The suite only passes if some case exhibits the phenomenon it looks for.
    pub needs_witness: bool,
    pub check: fn(&Input, &mut Ctx) -> Outcome,
}

const fn suite_(name: &'static str, description: &'static str, check: fn(&Input, &mut Ctx) -> Outcome) -> Suite {
    Suite {
        name,
        description,
        needs_witness: false,
        check,
    }
}

static SUITES: &[Suite] = &[
    suite_(
        "replace-subterm-identity",
        "putting a subterm back at its own position gives the same term",
        replace_subterm_identity,
    ),
    suite_(
        "subst-unused-var",
        "substituting for a variable that does not occur free changes nothing",
        subst_unused_var,
    ),
    suite_(
        "subst-free-vars",
        "free variables of M[x:=N] are those of M without x plus those of N, exactly when x occurs",
        subst_free_vars,
    ),
    suite_(
        "parse-print-roundtrip",
        "printing then parsing plain, labeled and marked terms gives an alpha-equal term",
        parse_print_roundtrip,
    ),
    suite_(
        "contract-no-new-free-vars",
        "a weak step does not create free variables",
        contract_no_new_free_vars,
    ),
    suite_(
        "barrier-vars-preserved",
        "weak reduction under S keeps the free variables that lie in S",
        barrier_vars_preserved,
    ),
    suite_(
        "weak-barrier-monotonicity",
        "shrinking the barrier never removes weak redexes",
        weak_barrier_monotonicity,
    ),
    suite_(
        "confluence",
        "two weak reduction sequences of length at most 4 are joined by at most 4 complete supersteps on each side",
        confluence,
    ),
    suite_(
        "creation-taxonomy-total",
        "every redex created by a marked step on an initially marked term matches exactly one of the four creation shapes",
        creation_taxonomy_total,
    ),
    Suite {
        name: "creation-case-iv-condition",
        description: "without the free-variable condition the fourth creation shape also claims redexes that already existed",
        needs_witness: true,
        check: creation_case_iv_condition,
    },
    suite_(
        "mark-initial-erases",
        "erasing the stars of the initial marking gives back the term",
        mark_initial_erases,
    ),
    suite_(
        "mark-initial-is-initial",
        "the initial marking stars exactly the weak redexes",
        mark_initial_is_initial,
    ),
    suite_(
        "labeled-barrier-monotonicity",
        "a labeled step under S is also a step under every subset of S",
        labeled_barrier_monotonicity,
    ),
    suite_(
        "weakening",
        "a labeled step under S is also a step under S extended with a variable not free in the term",
        weakening,
    ),
    suite_(
        "context-equivalence",
        "contracting inside C1[C2] under S is contracting inside C2 under S extended with the binders of C1",
        context_equivalence,
    ),
    suite_(
        "label-subst-commutation",
        "starring a label commutes with substituting a term in which that label is not free",
        label_subst_commutation,
    ),
    suite_(
        "subst-preserves-reduction",
        "substituting a term away from S into both ends of a labeled reduction keeps it a reduction",
        subst_preserves_reduction,
    ),
    suite_(
        "labeled-barrier-vars-preserved",
        "labeled reduction under S keeps the free variables that lie in S",
        labeled_barrier_vars_preserved,
    ),
    suite_(
        "termination",
        "labeled normalization terminates on arbitrary labelings",
        termination,
    ),
    suite_(
        "label-binding-copies",
        "duplicating a labeled term yields copies whose bound labels are independent",
        label_binding_copies,
    ),
    suite_(
        "chain-zero-is-trace",
        "a chain of index 0 is accepted exactly when its trace is a labeled reduction",
        chain_zero_is_trace,
    ),
    suite_(
        "chain-leading-abstractions",
        "the end of a chain of index k has k leading abstractions, one per peel",
        chain_leading_abstractions,
    ),
    suite_(
        "shape-lemma",
        "every labeled superstep target at index k has at least k leading abstractions",
        shape_lemma,
    ),
    suite_(
        "projection",
        "erasing labels maps labeled supersteps to plain supersteps",
        projection,
    ),
    suite_(
        "lifting",
        "every plain superstep derivation lifts to a valid labeled one with the same erasure",
        lifting,
    ),
    suite_(
        "free-vars-shrink",
        "labeled superstep targets have no new free variables",
        free_vars_shrink,
    ),
    suite_(
        "sandwich",
        "single labeled steps are supersteps at index 0, and supersteps at index 0 are labeled reductions",
        sandwich,
    ),
    suite_(
        "head-implies-chain",
        "every labeled superstep derivation yields an accepted chain witness",
        head_implies_chain,
    ),
    suite_(
        "full-superdev-correct",
        "A supersteps to its full superdevelopment whenever defined, and reduces to it at index 0",
        full_superdev_correct,
    ),
    suite_(
        "full-superdev-unique",
        "all splits satisfying the application condition give the same full superdevelopment",
        full_superdev_unique,
    ),
    suite_(
        "full-superdev-substitution",
        "the full superdevelopment of A[x:=B] exists iff some split works, and is then assembled from those of A and B",
        full_superdev_substitution,
    ),
    suite_(
        "full-superdev-invariance",
        "a superstep under a larger barrier and smaller index preserves full superdevelopments",
        full_superdev_invariance,
    ),
    suite_(
        "cofinality",
        "every reduct of A reduces to the full superdevelopment of A at index 0",
        cofinality,
    ),
    suite_(
        "equivalence-thm-1",
        "every plain superstep at index 0 lifts to a labeled reduction between labelings of its ends",
        equivalence_thm_1,
    ),
    suite_(
        "equivalence-thm-2",
        "the erased labeled normal form of the initial labeling is a superstep target at index 0",
        equivalence_thm_2,
    ),
    suite_(
        "complete-superstep-labeling-independent",
        "the complete superstep does not depend on label names and agrees with the unlabeled computation",
        complete_superstep_labeling_independent,
    ),
    suite_(
        "diamond",
        "two labeled supersteps at index 0 are joined by the full superdevelopment of their source",
        diamond,
    ),
];

pub fn suites() -> &'static [Suite] {
    SUITES
}

pub fn suite(name: &str) -> Option<Suite> {
    SUITES.iter().find(|s| s.name == name).copied()
}

macro_rules! ensure {
    ($cond:expr, $clause:expr, $($detail:tt)+) => {
        if !$cond {
            return Outcome::fail($clause, format!($($detail)+));
        }
    };
}

/// Skips the case when an enumeration outgrows its cap.
macro_rules! capped {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(Error::SizeCapExceeded(_)) => return Outcome::Skip,
            Err(e) => return Outcome::fail("engine error", e.to_string()),
        }
    };
}

fn plain(i: &Input) -> Term {
    i.term.normalized(&i.barrier.set())
}

/// The initial labeling or, half of the time, an arbitrary one.
fn labeled(i: &Input, ctx: &mut Ctx) -> LTerm {
    let t = if ctx.rng.gen_bool(0.5) {
        label_initial(&i.term)
    } else {
        gen_labeling(&i.term, &mut ctx.rng)
    };
    t.normalized(&i.barrier.set())
}

fn other_term(ctx: &mut Ctx) -> Term {
    let mut cfg = ctx.cfg.clone();
    cfg.max_size = cfg.max_size.min(6);
    gen_term(&cfg, &mut ctx.rng)
}

fn sub_barrier(s: &Barrier, rng: &mut impl Rng) -> Barrier {
    Barrier::new(s.vars().iter().filter(|_| rng.gen_bool(0.5)).cloned())
}

fn random_trace<T: Lambda>(t: &T, s: &Barrier, max_len: usize, rng: &mut impl Rng) -> ReductionTrace<T> {
    let mut trace = ReductionTrace::new(s.clone(), t.clone());
    let len = rng.gen_range(0..=max_len);
    for _ in 0..len {
        let cur = trace.end().clone();
        let Some(p) = lambda::redexes(&cur, s).choose(rng).cloned() else {
            break;
        };
        let after = lambda::contract(&cur, &p, s).expect("listed redex contracts");
        trace.steps.push(ReductionStep {
            before: cur,
            redex: p,
            after,
        });
    }
    trace
}

fn replace_subterm_identity(i: &Input, _: &mut Ctx) -> Outcome {
    let m = plain(i);
    for p in m.positions() {
        let sub = m.subterm_at(&p).unwrap().clone();
        let back = m.replace_at(&p, sub).unwrap();
        ensure!(back == m, "replace_at(M, p, M|p) = M", "p = {p}: {back}");
    }
    Outcome::Pass
}

fn subst_unused_var(i: &Input, ctx: &mut Ctx) -> Outcome {
    let m = plain(i);
    let fv = m.free_vars();
    let candidates: Vec<Name> = FREE_POOL
        .iter()
        .chain(BINDER_POOL.iter())
        .map(|x| Name::new(x))
        .filter(|x| !fv.contains(x))
        .collect();
    let x = candidates.choose(&mut ctx.rng).unwrap().clone();
    let n = other_term(ctx);
    let r = m.subst(&x, &n);
    ensure!(r == m, "M[x:=N] = M when x is not free", "x = {x}, N = {n}: {r}");
    Outcome::Pass
}

fn subst_free_vars(i: &Input, ctx: &mut Ctx) -> Outcome {
    let m = plain(i);
    let mut names: Vec<Name> = m.free_vars().into_iter().collect();
    names.push(Name::new(FREE_POOL.choose(&mut ctx.rng).unwrap()));
    let x = names.choose(&mut ctx.rng).unwrap().clone();
    let n = other_term(ctx);
    let r = m.subst(&x, &n);
    let mut bound: NameSet = m.free_vars();
    bound.remove(&x);
    let occurs = m.is_free(&x);
    if occurs {
        bound.extend(n.free_vars());
    }
    let got = r.free_vars();
    ensure!(got.is_subset(&bound), "fv(M[x:=N]) ⊆ fv(M)∖x ∪ fv(N)", "x = {x}, N = {n}: {r}");
    ensure!(!occurs || got == bound, "equality when x is free in M", "x = {x}, N = {n}: {r}");
    Outcome::Pass
}

fn parse_print_roundtrip(i: &Input, ctx: &mut Ctx) -> Outcome {
    let m = plain(i);
    ensure!(parse_term(&m.to_string()).as_ref() == Ok(&m), "plain round trip", "{m}");
    for a in [label_initial(&m), gen_labeling(&m, &mut ctx.rng)] {
        ensure!(parse_labeled(&a.to_string()).as_ref() == Ok(&a), "labeled round trip", "{a}");
    }
    let mk = mark_initial(&m);
    ensure!(parse_marked(&mk.to_string()).as_ref() == Ok(&mk), "marked round trip", "{mk}");
    Outcome::Pass
}

fn contract_no_new_free_vars(i: &Input, _: &mut Ctx) -> Outcome {
    let m = plain(i);
    let ps = weak_redexes(&m, &i.barrier);
    if ps.is_empty() {
        return Outcome::Skip;
    }
    for p in ps {
        let r = weak_contract(&m, &p, &i.barrier).unwrap();
        ensure!(r.free_vars().is_subset(&m.free_vars()), "fv(M') ⊆ fv(M)", "at {p}: {r}");
    }
    Outcome::Pass
}

fn check_barrier_vars<T: Lambda>(t: &ReductionTrace<T>, s: &Barrier) -> Outcome {
    let keep = |t: &T| t.free_vars().intersection(&s.set()).cloned().collect::<NameSet>();
    let want = keep(&t.start);
    for step in &t.steps {
        ensure!(keep(&step.after) == want, "fv ∩ S is preserved", "step at {}: {} → {}", step.redex, step.before, step.after);
    }
    Outcome::Pass
}

fn barrier_vars_preserved(i: &Input, ctx: &mut Ctx) -> Outcome {
    let t = random_trace(&plain(i), &i.barrier, 4, &mut ctx.rng);
    if t.is_empty() {
        return Outcome::Skip;
    }
    check_barrier_vars(&t, &i.barrier)
}

fn labeled_barrier_vars_preserved(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let t = random_trace(&a, &i.barrier, 4, &mut ctx.rng);
    if t.is_empty() {
        return Outcome::Skip;
    }
    check_barrier_vars(&t, &i.barrier)
}

fn weak_barrier_monotonicity(i: &Input, ctx: &mut Ctx) -> Outcome {
    let m = plain(i);
    let t = sub_barrier(&i.barrier, &mut ctx.rng);
    let big = weak_redexes(&m, &i.barrier);
    let small = weak_redexes(&m, &t);
    ensure!(big.iter().all(|p| small.contains(p)), "redexes under S are redexes under T ⊆ S", "T = {t}: {big:?} vs {small:?}");
    Outcome::Pass
}

fn confluence(i: &Input, ctx: &mut Ctx) -> Outcome {
    let m = plain(i);
    let s = &i.barrier;
    let t1 = random_trace(&m, s, 4, &mut ctx.rng);
    let t2 = random_trace(&m, s, 4, &mut ctx.rng);
    let (n1, n2) = (t1.end(), t2.end());
    ensure!(join_peak(n1, n2, s, 4).is_some(), "peak joins within 4 rounds", "{n1} and {n2}");
    Outcome::Pass
}

fn creation_taxonomy_total(i: &Input, _: &mut Ctx) -> Outcome {
    let a = mark_initial(&plain(i));
    let ps = marked_redexes(&a);
    if ps.is_empty() {
        return Outcome::Skip;
    }
    let mut created = false;
    for p in ps {
        let (b, found) = match created_redexes(&a, &p) {
            Ok(r) => r,
            Err(e) => return Outcome::fail("contraction of a listed marked redex", format!("{a} at {p}: {e}")),
        };
        for (q, tags) in found {
            created = true;
            ensure!(
                tags.len() == 1,
                "exactly one creation case",
                "{a} at {p} gives {b}; redex at {q} matches {tags:?}"
            );
        }
    }
    if created {
        Outcome::Witness
    } else {
        Outcome::Pass
    }
}

/// Stars each weak redex with probability one half.
fn mark_some(m: &Term, rng: &mut impl Rng) -> MTerm {
    fn go(t: &Term, bound: &mut Vec<Name>, rng: &mut impl Rng) -> MTerm {
        match t {
            Term::Var(x) => MTerm::Var(x.clone()),
            Term::Abs(x, b) => {
                bound.push(x.clone());
                let b2 = go(b, bound, rng);
                bound.pop();
                MTerm::Abs(x.clone(), Box::new(b2))
            }
            Term::App(f, a) => {
                if let Term::Abs(x, body) = &**f {
                    let fv = t.free_vars();
                    if !bound.iter().any(|b| fv.contains(b)) && rng.gen_bool(0.5) {
                        bound.push(x.clone());
                        let body2 = go(body, bound, rng);
                        bound.pop();
                        return MTerm::Marked(x.clone(), Box::new(body2), Box::new(go(a, bound, rng)));
                    }
                }
                MTerm::app(go(f, bound, rng), go(a, bound, rng))
            }
        }
    }
    go(m, &mut Vec::new(), rng)
}

fn creation_case_iv_condition(i: &Input, ctx: &mut Ctx) -> Outcome {
    let m = plain(i);
    let full = mark_initial(&m);
    for p in marked_redexes(&full) {
        let strict = classify_strict(&full, &p).unwrap();
        let loose = classify_loose(&full, &p).unwrap();
        ensure!(strict == loose, "on initially marked terms the condition is implied", "{full} at {p}");
    }
    let a = mark_some(&m, &mut ctx.rng);
    let ps = marked_redexes(&a);
    if ps.is_empty() {
        return Outcome::Skip;
    }
    let mut witness = false;
    for p in ps {
        let strict = classify_strict(&a, &p).unwrap();
        let loose = classify_loose(&a, &p).unwrap();
        for ((q, s), (_, l)) in strict.iter().zip(&loose) {
            ensure!(s.iter().all(|c| l.contains(c)), "loose classification extends the strict one", "{a} at {p}, {q}");
            if s != l {
                witness = true;
            }
        }
    }
    if witness {
        Outcome::Witness
    } else {
        Outcome::Pass
    }
}

fn mark_initial_erases(i: &Input, _: &mut Ctx) -> Outcome {
    let m = plain(i);
    let e = mark_initial(&m).erase_stars();
    ensure!(e == m, "erase_stars(mark_initial(M)) = M", "{e}");
    Outcome::Pass
}

fn mark_initial_is_initial(i: &Input, _: &mut Ctx) -> Outcome {
    let a = mark_initial(&plain(i));
    ensure!(is_initially_marked(&a), "mark_initial(M) is initially marked", "{a}");
    ensure!(
        marked_redexes(&a).len() == weak_redexes(&plain(i), &Barrier::empty()).len(),
        "one star per weak redex",
        "{a}"
    );
    Outcome::Pass
}

fn labeled_barrier_monotonicity(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let t = sub_barrier(&i.barrier, &mut ctx.rng);
    let ps = labeled_redexes(&a, &i.barrier);
    if ps.is_empty() {
        return Outcome::Skip;
    }
    for p in ps {
        let b = labeled_contract(&a, &p, &i.barrier).unwrap();
        ensure!(labeled_contract(&a, &p, &t).as_ref() == Ok(&b), "A →S B implies A →T B for T ⊆ S", "T = {t}, {a} at {p}");
    }
    Outcome::Pass
}

fn weakening(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let fv = a.free_vars();
    let Some(x) = FREE_POOL.iter().map(|x| Name::new(x)).filter(|x| !fv.contains(x)).collect::<Vec<_>>().choose(&mut ctx.rng).cloned() else {
        return Outcome::Skip;
    };
    let ps = labeled_redexes(&a, &i.barrier);
    if ps.is_empty() {
        return Outcome::Skip;
    }
    let bigger = i.barrier.concat(&Barrier::new([x.clone()]));
    for p in ps {
        let b = labeled_contract(&a, &p, &i.barrier).unwrap();
        ensure!(labeled_contract(&a, &p, &bigger).as_ref() == Ok(&b), "A →S B implies A →S⊕x B for x ∉ fv(A)", "x = {x}, {a} at {p}");
    }
    Outcome::Pass
}

fn context_equivalence(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let s = &i.barrier;
    let shaped: Vec<Position> = a
        .positions()
        .into_iter()
        .filter(|p| matches!(a.subterm_at(p), Ok(LTerm::App(_, f, _)) if matches!(**f, LTerm::Abs(..))))
        .collect();
    if shaped.is_empty() {
        return Outcome::Skip;
    }
    for p in shaped {
        let cut = ctx.rng.gen_range(0..=p.dirs().len());
        let p1 = Position(p.dirs()[..cut].to_vec());
        let p2 = Position(p.dirs()[cut..].to_vec());
        let inner = a.subterm_at(&p1).unwrap();
        let s2 = s.concat(&a.binding_path(&p1).unwrap());
        let whole = labeled_contract(&a, &p, s).ok();
        let part = labeled_contract(inner, &p2, &s2).ok().map(|r| a.replace_at(&p1, r).unwrap());
        ensure!(whole == part, "contraction in C1[C2] under S equals contraction in C2 under S ⊕ bp(C1)", "{a} at {p1}·{p2}: {whole:?} vs {part:?}");
    }
    Outcome::Pass
}

fn label_subst_commutation(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let mut labels: Vec<Name> = a.all_labels().into_iter().collect();
    labels.push(Name::new("a"));
    let l = labels.choose(&mut ctx.rng).unwrap().clone();
    let mut vars: Vec<Name> = a.free_vars().into_iter().collect();
    vars.push(Name::new(FREE_POOL[0]));
    let x = vars.choose(&mut ctx.rng).unwrap().clone();
    let n = other_term(ctx);
    let b = gen_labeling(&n, &mut ctx.rng);
    if b.free_labels().contains(&Label::Name(l.clone())) {
        return Outcome::Skip;
    }
    let left = a.label_subst_star(&l).subst(&x, &b);
    let right = a.subst(&x, &b).label_subst_star(&l);
    ensure!(left == right, "A[a:=★][x:=B] = A[x:=B][a:=★] when a ∉ fl(B)", "a = {l}, x = {x}, A = {a}, B = {b}: {left} vs {right}");
    Outcome::Pass
}

fn subst_preserves_reduction(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let s = &i.barrier;
    let t = random_trace(&a, s, 3, &mut ctx.rng);
    if t.is_empty() {
        return Outcome::Skip;
    }
    let n = other_term(ctx);
    let b = gen_labeling(&n, &mut ctx.rng);
    let mut vars: Vec<Name> = a.free_vars().into_iter().filter(|x| !s.contains(x)).collect();
    vars.extend(FREE_POOL.iter().map(|x| Name::new(x)).filter(|x| !s.contains(x)));
    let Some(x) = vars.choose(&mut ctx.rng).cloned() else {
        return Outcome::Skip;
    };
    if !b.away_from(s) {
        return Outcome::Skip;
    }
    let sigma = |t: &LTerm| t.subst(&x, &b);
    for step in &t.steps {
        let got = labeled_contract(&sigma(&step.before), &step.redex, s);
        ensure!(
            got.as_ref() == Ok(&sigma(&step.after)),
            "A → A' implies A[x:=B] → A'[x:=B]",
            "x = {x}, B = {b}, step at {}: {} → {}; got {got:?}",
            step.redex,
            step.before,
            step.after
        );
    }
    Outcome::Pass
}

fn termination(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let n = labeled_normalize_bounded(&a, &i.barrier, 100_000);
    ensure!(n.status == crate::trace::TraceStatus::Normal, "labeled normalization terminates", "{a} still reducing after {} steps", n.trace.len());
    Outcome::Pass
}

/// Renames every application label bound in `t` to a fresh one.
fn rename_bound_labels(t: &LTerm, supply: &mut LabelSupply) -> LTerm {
    match t {
        LTerm::Var(_) => t.clone(),
        LTerm::Abs(l, x, b) => LTerm::Abs(l.clone(), x.clone(), Box::new(rename_bound_labels(b, supply))),
        LTerm::App(c, f, a) => {
            let c2 = supply.fresh();
            let f2 = rename_bound_labels(&f.rename_free_label(c, &c2), supply);
            LTerm::App(c2, Box::new(f2), Box::new(rename_bound_labels(a, supply)))
        }
    }
}

fn label_binding_copies(i: &Input, _: &mut Ctx) -> Outcome {
    let a = label_initial(&plain(i));
    let mut supply = LabelSupply::new(a.all_labels());
    let b = supply.fresh();
    let c = supply.fresh();
    let fv = a.free_vars();
    let x = crate::names::fresh(&Name::new("x"), |n| fv.contains(n));
    let dup = LTerm::Abs(
        Label::Name(c.clone()),
        x.clone(),
        Box::new(LTerm::App(b.clone(), Box::new(LTerm::Var(x.clone())), Box::new(LTerm::Var(x)))),
    );
    let t = LTerm::App(c, Box::new(dup), Box::new(a.clone()));
    let r = match labeled_contract(&t, &Position::root(), &Barrier::empty()) {
        Ok(r) => r,
        Err(e) => return Outcome::fail("the duplicating redex contracts", format!("{t}: {e}")),
    };
    let plain_copies = LTerm::App(b.clone(), Box::new(a.clone()), Box::new(a.clone()));
    ensure!(r == plain_copies, "duplication gives A @b A", "{t} → {r}");
    let apart = LTerm::App(b, Box::new(a.clone()), Box::new(rename_bound_labels(&a, &mut supply)));
    ensure!(r == apart, "the copies' bound labels can be renamed independently", "{r} vs {apart}");
    Outcome::Pass
}

fn chain_zero_is_trace(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let s = &i.barrier;
    let t = random_trace(&a, s, 4, &mut ctx.rng);
    let end = t.end().clone();
    let w = ChainDerivation::from_trace(t.clone());
    ensure!(check_chain(&a, &end, s, 0, &w), "a labeled trace is a chain of index 0", "{t}");
    if t.is_empty() {
        return Outcome::Pass;
    }
    let j = ctx.rng.gen_range(0..t.len());
    let before = &t.steps[j].before;
    let redexes = labeled_redexes(before, s);
    let Some(q) = before.positions().into_iter().find(|q| !redexes.contains(q)) else {
        return Outcome::Pass;
    };
    let mut bad = t.clone();
    bad.steps[j].redex = q.clone();
    ensure!(!check_chain(&a, &end, s, 0, &ChainDerivation::from_trace(bad)), "a non-step is rejected", "step {j} moved to {q}");
    Outcome::Pass
}

/// The engine for `a` and every labeled superstep target of `a` at `(s, k)`.
fn labeled_targets(a: &LTerm, s: &Barrier, k: usize) -> crate::error::Result<(Engine<LTerm>, Vec<LTerm>)> {
    let mut engine = Engine::with_reserved(a, &s.set());
    let targets = engine.enumerate(s, k)?;
    Ok((engine, targets))
}

fn derivation(engine: &mut Engine<LTerm>, b: &LTerm, s: &Barrier, k: usize) -> std::result::Result<Derivation<LTerm>, Outcome> {
    match engine.derive(b, s, k) {
        Ok(Some(d)) => Ok(d),
        Ok(None) => Err(Outcome::fail("enumerated targets have derivations", format!("{} ⇛ {b}", engine.source()))),
        Err(Error::SizeCapExceeded(_)) => Err(Outcome::Skip),
        Err(e) => Err(Outcome::fail("engine error", e.to_string())),
    }
}

fn chain_leading_abstractions(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let (s, k) = (&i.barrier, i.k);
    let (mut engine, targets) = capped!(labeled_targets(&a, s, k));
    let Some(b) = targets.choose(&mut ctx.rng).cloned() else {
        return Outcome::Skip;
    };
    let d = match derivation(&mut engine, &b, s, k) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let w = match chain_from_superstep(&d) {
        Ok(w) => w,
        Err(e) => return Outcome::fail("chain extraction", format!("{d}\n{e}")),
    };
    ensure!(w.k() == k, "one peel per index", "{}", w.to_json());
    for seg in &w.segments[..k] {
        let (l, _) = seg.peel.as_ref().unwrap();
        ensure!(
            matches!(seg.trace.end(), LTerm::Abs(l2, _, _) if l2 == l),
            "each peel removes a leading abstraction with its label",
            "{}",
            w.to_json()
        );
    }
    ensure!(leading_abstractions(&w.end()) >= k, "the end has k leading abstractions", "{}", w.end());
    Outcome::Pass
}

/// Counts a case as a witness when a positive index produced targets.
fn exercised(k: usize, targets: usize) -> Outcome {
    if k > 0 && targets > 0 {
        Outcome::Witness
    } else {
        Outcome::Pass
    }
}

fn shape_lemma(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let (_, targets) = capped!(labeled_targets(&a, &i.barrier, i.k));
    let n = targets.len();
    for b in targets {
        ensure!(leading_abstractions(&b) >= i.k, "targets at index k have k leading abstractions", "{a} ⇛ {b}");
    }
    exercised(i.k, n)
}

fn projection(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let (_, targets) = capped!(labeled_targets(&a, &i.barrier, i.k));
    let plain_targets: HashSet<Term> = capped!(crate::engine::enumerate(&a.erase(), &i.barrier, i.k, crate::engine::DEFAULT_CAP))
        .into_iter()
        .collect();
    let n = targets.len();
    for b in targets {
        ensure!(plain_targets.contains(&b.erase()), "erase(A) ⇛ erase(B)", "{a} ⇛ {b}");
    }
    exercised(i.k, n)
}

fn lifting(i: &Input, _: &mut Ctx) -> Outcome {
    let m = plain(i);
    let (s, k) = (&i.barrier, i.k);
    let mut engine = Engine::with_reserved(&m, &s.set());
    for n in capped!(engine.enumerate(s, k)) {
        let d = capped!(engine.derive(&n, s, k)).expect("enumerated targets derive");
        let ld = match lift_derivation(&d) {
            Ok(ld) => ld,
            Err(e) => return Outcome::fail("plain derivations lift", format!("{d}\n{e}")),
        };
        if let Err(why) = ld.validate() {
            return Outcome::fail("lifted derivation is valid", format!("{ld}\n{why}"));
        }
        ensure!(ld.source.erase() == m && ld.target.erase() == n, "lifting preserves erasures", "{ld}");
    }
    Outcome::Pass
}

fn free_vars_shrink(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let fv = a.free_vars();
    let (_, targets) = capped!(labeled_targets(&a, &i.barrier, i.k));
    let n = targets.len();
    for b in targets {
        ensure!(b.free_vars().is_subset(&fv), "fv(B) ⊆ fv(A)", "{a} ⇛ {b}");
    }
    exercised(i.k, n)
}

fn sandwich(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let s = &i.barrier;
    let (mut engine, targets) = capped!(labeled_targets(&a, s, 0));
    let set: HashSet<&LTerm> = targets.iter().collect();
    for p in labeled_redexes(&a, s) {
        let b = labeled_contract(&a, &p, s).unwrap();
        ensure!(set.contains(&b), "a labeled step is a superstep at index 0", "{a} at {p} gives {b}");
    }
    for b in &targets {
        let d = match derivation(&mut engine, b, s, 0) {
            Ok(d) => d,
            Err(o) => return o,
        };
        match chain_from_superstep(&d) {
            Ok(w) => ensure!(check_chain(&a, b, s, 0, &w), "a superstep at index 0 is a labeled reduction", "{}", w.to_json()),
            Err(e) => return Outcome::fail("chain extraction", format!("{d}\n{e}")),
        }
    }
    Outcome::Pass
}

fn head_implies_chain(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let (s, k) = (&i.barrier, i.k);
    let (mut engine, targets) = capped!(labeled_targets(&a, s, k));
    let n = targets.len();
    for b in &targets {
        let d = match derivation(&mut engine, b, s, k) {
            Ok(d) => d,
            Err(o) => return o,
        };
        match chain_from_superstep(&d) {
            Ok(w) => ensure!(check_chain(&a, b, s, k, &w), "the extracted chain is accepted", "{d}\n{}", w.to_json()),
            Err(e) => return Outcome::fail("chain extraction succeeds", format!("{d}\n{e}")),
        }
    }
    exercised(i.k, n)
}

fn full_superdev_correct(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let s = &i.barrier;
    let mut engine = Engine::with_reserved(&a, &s.set());
    for k in [i.k, 0] {
        let Some(r) = engine.full(s, k) else {
            ensure!(k > 0, "⇓ at index 0 is total", "{a}");
            continue;
        };
        let d = match capped!(engine.derive(&r, s, k)) {
            Some(d) => d,
            None => return Outcome::fail("A ⇛ A⇓", format!("{a} ⇓{{{s}, {k}}} = {r}")),
        };
        if k == 0 {
            match chain_from_superstep(&d) {
                Ok(w) => ensure!(check_chain(&a, &r, s, 0, &w), "A reduces to A⇓ at index 0", "{}", w.to_json()),
                Err(e) => return Outcome::fail("chain extraction", format!("{d}\n{e}")),
            }
        }
    }
    Outcome::Pass
}

fn full_superdev_unique(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let s = &i.barrier;
    let mut several = false;
    for p in a.positions() {
        let sub = a.subterm_at(&p).unwrap();
        if !matches!(sub, LTerm::App(..)) {
            continue;
        }
        let branches = Engine::with_reserved(sub, &s.set()).full_branches(s, i.k);
        several |= branches.len() > 1;
        if let Some((_, _, first)) = branches.first() {
            for (n, m, r) in &branches {
                ensure!(r == first, "every split gives the same result", "{sub} split ({n}, {m}) gives {r}, first gives {first}");
            }
        }
    }
    if several {
        Outcome::Witness
    } else {
        Outcome::Pass
    }
}

fn full_superdev_substitution(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let (s, k) = (&i.barrier, i.k);
    let xs: Vec<Name> = a.free_vars().into_iter().filter(|x| !s.contains(x)).collect();
    let Some(x) = xs.choose(&mut ctx.rng).cloned() else {
        return Outcome::Skip;
    };
    let n = other_term(ctx);
    let b = if ctx.rng.gen_bool(0.5) {
        label_initial(&n)
    } else {
        gen_labeling(&n, &mut ctx.rng)
    };
    if b.is_free(&x) || !b.away_from(s) {
        return Outcome::Skip;
    }
    let whole = crate::engine::full(&a.subst(&x, &b), s, k);
    let mut splits = Vec::new();
    for m in 0..=k {
        let n = k - m;
        let (Some(an), Some(bm)) = (crate::engine::full(&a, s, n), crate::engine::full(&b, s, m)) else {
            continue;
        };
        if m > 0 && !is_projection(&an, &x, n) {
            continue;
        }
        splits.push((n, m, an.subst(&x, &bm)));
    }
    ensure!(
        whole.is_some() == !splits.is_empty(),
        "(A[x:=B])⇓ exists iff some split satisfies the conditions",
        "x = {x}, A = {a}, B = {b}: {whole:?}, splits {splits:?}"
    );
    if let Some(w) = &whole {
        for (n, m, r) in &splits {
            ensure!(r == w, "(A[x:=B])⇓{{S,k}} = A⇓{{S,n}}[x:=B⇓{{S,m}}]", "x = {x}, A = {a}, B = {b}, split ({n}, {m}): {r} vs {w}");
        }
        if splits.iter().any(|(_, m, _)| *m > 0) {
            return Outcome::Witness;
        }
    }
    Outcome::Pass
}

fn full_superdev_invariance(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let s1 = &i.barrier;
    let s2 = sub_barrier(s1, &mut ctx.rng);
    let k2 = i.k;
    let k1 = ctx.rng.gen_range(0..=k2);
    let (_, targets) = capped!(labeled_targets(&a, s1, k1));
    let Some(b) = targets.choose(&mut ctx.rng).cloned() else {
        return Outcome::Skip;
    };
    let fa = crate::engine::full(&a, &s2, k2);
    let fb = crate::engine::full(&b, &s2, k2);
    ensure!(fa == fb, "A ⇛{S1,k1} B implies A⇓{S2,k2} = B⇓{S2,k2}", "{a} ⇛{{{s1}, {k1}}} {b}; ⇓{{{s2}, {k2}}}: {fa:?} vs {fb:?}");
    Outcome::Pass
}

fn cofinality(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let s = &i.barrier;
    let t = random_trace(&a, s, 4, &mut ctx.rng);
    let b = t.end().clone();
    let goal = crate::engine::full(&a, s, 0).expect("total at index 0");
    let mut seen: HashSet<LTerm> = HashSet::new();
    let mut queue = VecDeque::from([b.clone()]);
    seen.insert(b.clone());
    while let Some(c) = queue.pop_front() {
        if c == goal {
            return Outcome::Pass;
        }
        for p in labeled_redexes(&c, s) {
            let next = labeled_contract(&c, &p, s).unwrap();
            if seen.insert(next.clone()) {
                if seen.len() > 5_000 {
                    return Outcome::Skip;
                }
                queue.push_back(next);
            }
        }
    }
    Outcome::fail("B →→ A⇓{S,0}", format!("{a} →→ {b}, A⇓ = {goal}, {} reducts of B searched", seen.len()))
}

fn equivalence_thm_1(i: &Input, _: &mut Ctx) -> Outcome {
    let m = plain(i);
    let s = &i.barrier;
    let mut engine = Engine::with_reserved(&m, &s.set());
    for n in capped!(engine.enumerate(s, 0)) {
        let d = capped!(engine.derive(&n, s, 0)).expect("enumerated targets derive");
        let ld = match lift_derivation(&d) {
            Ok(ld) => ld,
            Err(e) => return Outcome::fail("plain derivations lift", format!("{d}\n{e}")),
        };
        let w = match chain_from_superstep(&ld) {
            Ok(w) => w,
            Err(e) => return Outcome::fail("chain extraction", format!("{ld}\n{e}")),
        };
        ensure!(check_chain(&ld.source, &ld.target, s, 0, &w), "the lifted chain is a labeled reduction", "{ld}\n{}", w.to_json());
        ensure!(ld.source.erase() == m && ld.target.erase() == n, "the labelings erase to M and N", "{ld}");
    }
    Outcome::Pass
}

fn equivalence_thm_2(i: &Input, _: &mut Ctx) -> Outcome {
    let m = plain(i);
    let s = &i.barrier;
    let a = label_initial(&m);
    let nf = labeled_normalize(&a, s);
    let n = nf.result().erase();
    let d = capped!(crate::engine::derive(&m, &n, s, 0, crate::engine::DEFAULT_CAP));
    ensure!(d.is_some(), "M ⇛{S,0} erase(nf(label_initial(M)))", "{a} normalizes to {}", nf.result());
    let full = crate::engine::full(&a, s, 0).expect("total at index 0");
    ensure!(&full == nf.result(), "the normal form is the full superdevelopment", "{} vs {full}", nf.result());
    Outcome::Pass
}

/// Renames labels by a random permutation of the ones that occur.
fn permute_labels(t: &LTerm, rng: &mut impl Rng) -> LTerm {
    let names: Vec<Name> = t.all_labels().into_iter().collect();
    let mut image = names.clone();
    image.shuffle(rng);
    let map = |c: &Name| names.iter().position(|n| n == c).map_or(c.clone(), |i| image[i].clone());
    fn go(t: &LTerm, map: &dyn Fn(&Name) -> Name) -> LTerm {
        match t {
            LTerm::Var(_) => t.clone(),
            LTerm::Abs(l, x, b) => {
                let l2 = match l {
                    Label::Name(c) => Label::Name(map(c)),
                    Label::Star => Label::Star,
                };
                LTerm::Abs(l2, x.clone(), Box::new(go(b, map)))
            }
            LTerm::App(c, f, a) => LTerm::App(map(c), Box::new(go(f, map)), Box::new(go(a, map))),
        }
    }
    go(t, &map)
}

fn complete_superstep_labeling_independent(i: &Input, ctx: &mut Ctx) -> Outcome {
    let m = plain(i);
    let s = &i.barrier;
    let c = complete_superstep(&m, s);
    let p = plain_complete_superstep(&m, s);
    ensure!(c == p, "labeled and unlabeled complete supersteps agree", "{} gives {c}, unlabeled {p}", label_initial(&m));
    let relabeled = permute_labels(&label_initial(&m), &mut ctx.rng);
    let r = crate::engine::full(&relabeled, s, 0).expect("total at index 0").erase();
    ensure!(r == c, "renaming labels does not change the result", "{relabeled} gives {r}");
    Outcome::Pass
}

fn diamond(i: &Input, ctx: &mut Ctx) -> Outcome {
    let a = labeled(i, ctx);
    let s = &i.barrier;
    let (_, targets) = capped!(labeled_targets(&a, s, 0));
    let b1 = targets.choose(&mut ctx.rng).unwrap().clone();
    let b2 = targets.choose(&mut ctx.rng).unwrap().clone();
    match diamond_join(&a, &b1, &b2, s) {
        Ok(j) => ensure!(j.verified(), "both legs superstep into the join", "{a}: {b1} / {b2} → {}", j.join),
        Err(Error::SizeCapExceeded(_)) => return Outcome::Skip,
        Err(e) => return Outcome::fail("diamond_join", e.to_string()),
    }
    Outcome::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_suite, GenConfig};

    #[test]
    fn suite_names_are_unique() {
        let mut names: Vec<&str> = suites().iter().map(|s| s.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), suites().len());
    }

    #[test]
    fn every_suite_passes_a_small_run() {
        let cfg = GenConfig {
            count: 60,
            max_k: 2,
            max_size: 10,
            ..GenConfig::default()
        };
        for s in suites() {
            let r = run_suite(s.name, &cfg).unwrap();
            assert!(r.failures.is_empty(), "{}", r.to_text(false));
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = GenConfig {
            count: 40,
            ..GenConfig::default()
        };
        let a = run_suite("diamond", &cfg).unwrap().to_json(false).to_string();
        let b = run_suite("diamond", &cfg).unwrap().to_json(false).to_string();
        assert_eq!(a, b);
    }

    #[test]
    fn mark_some_only_stars_weak_redexes() {
        let m = parse_term("(\\f. f) ((\\g. g) x) (\\h. (\\k. k) h)").unwrap();
        let mut rng = GenConfig::default().rng(3);
        for _ in 0..20 {
            let a = mark_some(&m, &mut rng);
            assert_eq!(a.erase_stars(), m);
            assert!(marked_redexes(&a).len() <= 2);
        }
    }

    #[test]
    fn duplicated_copies_carry_distinct_labels() {
        let t = parse_labeled("(\\x^c. x @b x) @c ((\\y^a. y) @a z)").unwrap();
        let r = labeled_contract(&t, &Position::root(), &Barrier::empty()).unwrap();
        assert_eq!(r, parse_labeled("((\\y^a. y) @a z) @b ((\\y^d. y) @d z)").unwrap());
    }
}
