//! Weak lambda calculus: weak reduction, marked and labeled variants, and
//! superdevelopments computed by superstep derivations.

#[cfg(test)]
mod arb;
pub mod chain;
pub mod engine;
pub mod error;
pub mod harness;
pub mod labeled;
pub mod lambda;
pub mod marked;
pub mod names;
pub mod parse;
pub mod term;
pub mod superstep;
pub mod trace;
pub mod weak;

pub use chain::{check_chain, chain_from_superstep, ChainDerivation, Segment};
pub use engine::{Derivation, Engine, Rule, DEFAULT_CAP};
pub use error::{Error, ParseError, Result};
pub use labeled::{label_initial, labeled_contract, labeled_normalize, labeled_redexes, LTerm, Label};
pub use marked::{detect_creations, is_initially_marked, mark_initial, marked_contract, Case, CreationCase, MTerm};
pub use names::{Barrier, Name, NameSet};
pub use parse::{parse, parse_labeled, parse_marked, parse_term, AnyTerm, Grammar};
pub use superstep::{
    complete_superstep, derive_labeled_superstep, derive_superstep, diamond_join, enumerate_labeled_supersteps,
    enumerate_supersteps, full_superdev, lift_derivation,
};
pub use term::{Position, Term};
pub use trace::{Normalization, ReductionStep, ReductionTrace, TraceStatus};
pub use weak::{weak_contract, weak_normalize, weak_redexes};
