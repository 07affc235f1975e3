//! Reduction steps and traces shared by the plain and labeled calculi.

use std::fmt;

use serde_json::{json, Value};

use crate::names::Barrier;
use crate::term::Position;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep<T> {
    pub before: T,
    pub redex: Position,
    pub after: T,
}

/// A sequence of steps under one barrier. `start` is kept so that empty
/// traces still know their term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace<T> {
    pub barrier: Barrier,
    pub start: T,
    pub steps: Vec<ReductionStep<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceStatus {
    Normal,
    FuelExhausted,
}

impl TraceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceStatus::Normal => "normal",
            TraceStatus::FuelExhausted => "fuel-exhausted",
        }
    }
}

impl fmt::Display for TraceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization<T> {
    pub trace: ReductionTrace<T>,
    pub status: TraceStatus,
}

impl<T> Normalization<T> {
    pub fn result(&self) -> &T {
        self.trace.end()
    }
}

impl<T> ReductionTrace<T> {
    pub fn new(barrier: Barrier, start: T) -> ReductionTrace<T> {
        ReductionTrace {
            barrier,
            start,
            steps: Vec::new(),
        }
    }

    pub fn end(&self) -> &T {
        self.steps.last().map_or(&self.start, |s| &s.after)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The terms visited, starting with `start`.
    pub fn terms(&self) -> impl Iterator<Item = &T> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.after))
    }

    /// Applies `f` to every term, keeping positions.
    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> ReductionTrace<U> {
        ReductionTrace {
            barrier: self.barrier.clone(),
            start: f(&self.start),
            steps: self
                .steps
                .iter()
                .map(|s| ReductionStep {
                    before: f(&s.before),
                    redex: s.redex.clone(),
                    after: f(&s.after),
                })
                .collect(),
        }
    }

    /// Prefixes every redex position with `prefix` and wraps every term with `wrap`.
    pub fn in_context<U>(&self, prefix: &Position, mut wrap: impl FnMut(&T) -> U) -> ReductionTrace<U> {
        ReductionTrace {
            barrier: self.barrier.clone(),
            start: wrap(&self.start),
            steps: self
                .steps
                .iter()
                .map(|s| ReductionStep {
                    before: wrap(&s.before),
                    redex: prefix.then(&s.redex),
                    after: wrap(&s.after),
                })
                .collect(),
        }
    }
}

impl<T: fmt::Display> ReductionTrace<T> {
    /// One object per visited term. The last one has a null redex and,
    /// when `status` is given, carries it.
    pub fn to_json(&self, status: Option<TraceStatus>) -> Value {
        let barrier: Vec<String> = self.barrier.vars().iter().map(|x| x.to_string()).collect();
        let mut out: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                json!({
                    "term": s.before.to_string(),
                    "redex": s.redex.dirs(),
                    "barrier": barrier,
                })
            })
            .collect();
        let mut last = json!({
            "term": self.end().to_string(),
            "redex": Value::Null,
            "barrier": barrier,
        });
        if let Some(st) = status {
            last["status"] = json!(st.as_str());
        }
        out.push(last);
        Value::Array(out)
    }
}

impl<T: fmt::Display> fmt::Display for ReductionTrace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.start)?;
        for s in &self.steps {
            writeln!(f, "  -> {}    [at {}]", s.after, s.redex)?;
        }
        Ok(())
    }
}
