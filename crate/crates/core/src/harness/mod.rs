//! Seeded term generation and the property suite runner.

mod suites;

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::labeled::{label_initial, LTerm, Label};
use crate::marked::mark_initial;
use crate::names::{Barrier, Name};
use crate::term::Term;

pub use suites::{suite, suites, Suite};

/// Free variables are drawn from the front of this pool.
pub const FREE_POOL: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
/// Binder names; repeats are fine since terms are renamed apart afterwards.
pub const BINDER_POOL: [&str; 10] = ["f", "g", "h", "k", "m", "n", "p", "q", "r", "s"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub max_size: usize,
    pub max_free_vars: usize,
    pub max_barrier: usize,
    pub max_k: usize,
    pub seed: u64,
    pub count: usize,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            max_size: 12,
            max_free_vars: 3,
            max_barrier: 3,
            max_k: 3,
            seed: 1,
            count: 1000,
        }
    }
}

impl GenConfig {
    fn free_pool(&self) -> Vec<Name> {
        FREE_POOL[..self.max_free_vars.min(FREE_POOL.len())]
            .iter()
            .map(|x| Name::new(x))
            .collect()
    }

    /// The generator for case `index`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// One random term of at most `cfg.max_size` nodes, biased towards the upper half.
pub fn gen_term(cfg: &GenConfig, rng: &mut impl Rng) -> Term {
    let max = cfg.max_size.max(1);
    let n = rng.gen_range(1..=max).max(rng.gen_range(1..=max));
    gen_sized(n, &cfg.free_pool(), rng)
}

/// A term of exactly `n` nodes (or `n + 1` when `n = 1` and no variable is available).
pub fn gen_sized(n: usize, free: &[Name], rng: &mut impl Rng) -> Term {
    fn go(n: usize, free: &[Name], bound: &mut Vec<Name>, rng: &mut impl Rng) -> Term {
        let no_vars = free.is_empty() && bound.is_empty();
        if n <= 1 && !no_vars {
            let x = if !bound.is_empty() && (free.is_empty() || rng.gen_bool(0.7)) {
                bound.choose(rng).unwrap().clone()
            } else {
                free.choose(rng).unwrap().clone()
            };
            return Term::Var(x);
        }
        if n <= 2 || no_vars || rng.gen_bool(0.35) {
            let x = Name::new(BINDER_POOL.choose(rng).unwrap());
            bound.push(x.clone());
            let body = go(n.saturating_sub(1).max(1), free, bound, rng);
            bound.pop();
            return Term::Abs(x, Box::new(body));
        }
        let n1 = rng.gen_range(1..=n - 2);
        let n2 = n - 1 - n1;
        // favour redexes
        let f = if n1 >= 2 && rng.gen_bool(0.5) {
            let x = Name::new(BINDER_POOL.choose(rng).unwrap());
            bound.push(x.clone());
            let body = go(n1 - 1, free, bound, rng);
            bound.pop();
            Term::Abs(x, Box::new(body))
        } else {
            go(n1, free, bound, rng)
        };
        let a = go(n2, free, bound, rng);
        Term::app(f, a)
    }
    go(n, free, &mut Vec::new(), rng).normalized(&Default::default())
}

/// The first `cfg.count` generated terms.
pub fn term_stream(cfg: &GenConfig) -> impl Iterator<Item = Term> + '_ {
    (0..cfg.count as u64).map(move |i| gen_term(cfg, &mut cfg.rng(i)))
}

pub fn gen_barrier(cfg: &GenConfig, rng: &mut impl Rng) -> Barrier {
    let mut pool = cfg.free_pool();
    pool.shuffle(rng);
    let n = rng.gen_range(0..=cfg.max_barrier.min(pool.len()));
    Barrier::new(pool.into_iter().take(n))
}

/// Labels drawn from a small pool, so that labels collide and mismatch.
pub fn gen_labeling(m: &Term, rng: &mut impl Rng) -> LTerm {
    const POOL: [&str; 3] = ["a", "b", "c"];
    match m {
        Term::Var(x) => LTerm::Var(x.clone()),
        Term::Abs(x, b) => {
            let l = if rng.gen_bool(0.1) {
                Label::Star
            } else {
                Label::name(POOL.choose(rng).unwrap())
            };
            LTerm::Abs(l, x.clone(), Box::new(gen_labeling(b, rng)))
        }
        Term::App(f, a) => {
            let c = Name::new(POOL.choose(rng).unwrap());
            LTerm::App(c, Box::new(gen_labeling(f, rng)), Box::new(gen_labeling(a, rng)))
        }
    }
}

/// The generated input of one case.
#[derive(Clone, Debug)]
pub struct Input {
    pub term: Term,
    pub barrier: Barrier,
    pub k: usize,
}

impl Input {
    fn generate(cfg: &GenConfig, rng: &mut impl Rng) -> Input {
        let term = gen_term(cfg, rng);
        let barrier = gen_barrier(cfg, rng);
        let k = rng.gen_range(0..=cfg.max_k);
        Input { term, barrier, k }
    }
}

/// What a check concluded about one input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Preconditions do not hold.
    Skip,
    Pass,
    /// Passed, and exhibited the phenomenon the suite looks for.
    Witness,
    Fail { clause: String, detail: String },
}

impl Outcome {
    pub fn fail(clause: impl Into<String>, detail: impl Into<String>) -> Outcome {
        Outcome::Fail {
            clause: clause.into(),
            detail: detail.into(),
        }
    }

    fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail { .. })
    }
}

/// Extra randomness and settings available to a check.
pub struct Ctx<'a> {
    pub cfg: &'a GenConfig,
    pub rng: ChaCha8Rng,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub case: u64,
    pub clause: String,
    pub term: String,
    pub labeled: String,
    pub marked: String,
    pub barrier: Vec<String>,
    pub k: usize,
    pub original: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub description: String,
    pub cases: usize,
    pub skipped: usize,
    pub witnesses: usize,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
    #[serde(skip)]
    pub elapsed_ms: u128,
    #[serde(skip)]
    pub needs_witness: bool,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && (!self.needs_witness || self.witnesses > 0)
    }

    pub fn to_json(&self, timings: bool) -> serde_json::Value {
        let mut r = self.clone();
        r.wall_time_ms = timings.then_some(self.elapsed_ms);
        let mut v = serde_json::to_value(&r).expect("serializable");
        v["passed"] = serde_json::json!(self.passed());
        v
    }

    pub fn to_text(&self, timings: bool) -> String {
        let mut out = format!(
            "{} {}: {} cases, {} skipped",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.cases,
            self.skipped
        );
        if self.needs_witness || self.witnesses > 0 {
            out.push_str(&format!(", {} witnesses", self.witnesses));
        }
        if timings {
            out.push_str(&format!(" ({} ms)", self.elapsed_ms));
        }
        out.push('\n');
        for f in &self.failures {
            out.push_str(&format!(
                "  case {}: {}\n    term:    {}\n    labeled: {}\n    marked:  {}\n    barrier: ⟨{}⟩  k = {}\n    before shrinking: {}\n",
                f.case,
                f.clause,
                f.term,
                f.labeled,
                f.marked,
                f.barrier.join(", "),
                f.k,
                f.original
            ));
            for line in f.detail.lines() {
                out.push_str(&format!("    | {line}\n"));
            }
        }
        if self.needs_witness && self.witnesses == 0 {
            out.push_str("  no case exhibited the expected phenomenon\n");
        }
        out
    }
}

fn run_check(s: &Suite, input: &Input, cfg: &GenConfig, index: u64) -> Outcome {
    let mut rng = cfg.rng(index);
    // skip past the draws used for the input itself
    let _ = Input::generate(cfg, &mut rng);
    let mut ctx = Ctx { cfg, rng };
    (s.check)(input, &mut ctx)
}

/// Smaller variants of `input`: subterms, subterms replaced by a variable,
/// a smaller barrier and a smaller index.
fn shrink_candidates(input: &Input) -> Vec<Input> {
    let mut out = Vec::new();
    let t = &input.term;
    let var = t
        .free_vars()
        .into_iter()
        .next()
        .unwrap_or_else(|| Name::new(FREE_POOL[0]));
    for p in t.positions().into_iter().filter(|p| !p.is_root()) {
        let sub = t.subterm_at(&p).expect("listed position").clone();
        out.push(Input {
            term: sub.normalized(&Default::default()),
            ..input.clone()
        });
        if !matches!(sub, Term::Var(_)) {
            let bp = t.binding_path(&p).expect("listed position");
            let x = bp.vars().first().cloned().unwrap_or_else(|| var.clone());
            let smaller = t.replace_at(&p, Term::Var(x)).expect("listed position");
            out.push(Input {
                term: smaller.normalized(&Default::default()),
                ..input.clone()
            });
        }
    }
    for i in 0..input.barrier.vars().len() {
        let mut vars = input.barrier.vars().to_vec();
        vars.remove(i);
        out.push(Input {
            barrier: Barrier::new(vars),
            ..input.clone()
        });
    }
    if input.k > 0 {
        out.push(Input {
            k: input.k - 1,
            ..input.clone()
        });
    }
    out.sort_by_key(|c| (c.term.size(), c.barrier.vars().len(), c.k));
    out
}

fn shrink(s: &Suite, input: Input, cfg: &GenConfig, index: u64) -> (Input, Outcome) {
    let mut best = input;
    let mut outcome = run_check(s, &best, cfg, index);
    for _ in 0..100 {
        let next = shrink_candidates(&best).into_iter().find_map(|c| {
            let o = run_check(s, &c, cfg, index);
            o.is_fail().then_some((c, o))
        });
        match next {
            Some((c, o)) => {
                best = c;
                outcome = o;
            }
            None => break,
        }
    }
    (best, outcome)
}

/// Runs `cfg.count` cases whose preconditions hold, drawing at most
/// `20 * cfg.count` inputs. Cases run in parallel; results are ordered by
/// case index, so the report depends only on the configuration.
pub fn run_suite(name: &str, cfg: &GenConfig) -> Result<SuiteReport> {
    let s = suite(name).ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    let started = Instant::now();
    let limit = 20 * cfg.count as u64;
    let mut cases = 0;
    let mut skipped = 0;
    let mut witnesses = 0;
    let mut failing: Vec<(u64, Input)> = Vec::new();
    let mut next = 0u64;
    let batch = (cfg.count as u64).max(64);
    while cases < cfg.count && next < limit {
        let end = (next + batch).min(limit);
        let results: Vec<(u64, Input, Outcome)> = (next..end)
            .into_par_iter()
            .map(|i| {
                let input = Input::generate(cfg, &mut cfg.rng(i));
                let o = run_check(&s, &input, cfg, i);
                (i, input, o)
            })
            .collect();
        for (i, input, o) in results {
            if cases == cfg.count {
                break;
            }
            match o {
                Outcome::Skip => skipped += 1,
                Outcome::Pass => cases += 1,
                Outcome::Witness => {
                    cases += 1;
                    witnesses += 1;
                }
                Outcome::Fail { .. } => {
                    cases += 1;
                    failing.push((i, input));
                }
            }
        }
        next = end;
    }
    let failures = failing
        .into_par_iter()
        .map(|(i, input)| {
            let original = input.term.to_string();
            let (small, o) = shrink(&s, input, cfg, i);
            let Outcome::Fail { clause, detail } = o else {
                unreachable!("shrinking keeps failing inputs")
            };
            Failure {
                case: i,
                clause,
                term: small.term.to_string(),
                labeled: label_initial(&small.term).to_string(),
                marked: mark_initial(&small.term).to_string(),
                barrier: small.barrier.vars().iter().map(|x| x.to_string()).collect(),
                k: small.k,
                original,
                detail,
            }
        })
        .collect();
    Ok(SuiteReport {
        suite: s.name.to_string(),
        description: s.description.to_string(),
        cases,
        skipped,
        witnesses,
        failures,
        wall_time_ms: None,
        elapsed_ms: started.elapsed().as_millis(),
        needs_witness: s.needs_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_one_gives_variables() {
        let cfg = GenConfig {
            max_size: 1,
            ..GenConfig::default()
        };
        for t in term_stream(&GenConfig { count: 50, ..cfg }) {
            assert!(matches!(t, Term::Var(_)), "{t}");
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let cfg = GenConfig {
            count: 100,
            ..GenConfig::default()
        };
        let a: Vec<Term> = term_stream(&cfg).collect();
        let b: Vec<Term> = term_stream(&cfg).collect();
        assert_eq!(a.iter().map(|t| t.to_string()).collect::<Vec<_>>(), b.iter().map(|t| t.to_string()).collect::<Vec<_>>());
        let c: Vec<Term> = term_stream(&GenConfig { seed: 2, ..cfg.clone() }).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn no_free_pool_gives_closed_terms() {
        let cfg = GenConfig {
            max_free_vars: 0,
            count: 200,
            ..GenConfig::default()
        };
        for t in term_stream(&cfg) {
            assert!(t.free_vars().is_empty(), "{t}");
            assert!(t.size() <= cfg.max_size + 1);
        }
    }

    #[test]
    fn sizes_respect_the_budget() {
        let cfg = GenConfig {
            count: 300,
            ..GenConfig::default()
        };
        let sizes: Vec<usize> = term_stream(&cfg).map(|t| t.size()).collect();
        assert!(sizes.iter().all(|&n| n <= 12));
        assert!(sizes.iter().any(|&n| n >= 10));
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert_eq!(
            run_suite("no-such-suite", &GenConfig::default()).map(|r| r.suite),
            Err(Error::UnknownSuite("no-such-suite".into()))
        );
    }

    #[test]
    fn shrinking_finds_a_small_counterexample() {
        let s = Suite {
            name: "toy",
            description: "terms have fewer than five nodes",
            needs_witness: false,
            check: |i, _| {
                if i.term.size() < 5 {
                    Outcome::Pass
                } else {
                    Outcome::fail("too big", "")
                }
            },
        };
        let cfg = GenConfig::default();
        let big = Input {
            term: crate::parse::parse_term("\\f. (\\g. g f) (x y) (z w)").unwrap(),
            barrier: Barrier::parse("x"),
            k: 2,
        };
        let (small, o) = shrink(&s, big, &cfg, 0);
        assert!(o.is_fail());
        assert_eq!(small.term.size(), 5);
        assert!(small.barrier.is_empty());
        assert_eq!(small.k, 0);
    }
}
