//! Variable names, fresh-name supply and barriers.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A variable (or label) identifier.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

pub type NameSet = BTreeSet<Name>;

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The name with any trailing digits removed (`x12` -> `x`).
    pub fn base(&self) -> &str {
        let trimmed = self.0.trim_end_matches(|c: char| c.is_ascii_digit());
        if trimmed.is_empty() {
            &self.0
        } else {
            trimmed
        }
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Returns `hint` if it is not taken, otherwise the first `base<N>` (N = 1, 2, ...)
/// that is not taken.
pub fn fresh(hint: &Name, taken: impl Fn(&Name) -> bool) -> Name {
    if !taken(hint) {
        return hint.clone();
    }
    let base = hint.base();
    (1..)
        .map(|i| Name::new(&format!("{base}{i}")))
        .find(|c| !taken(c))
        .expect("unbounded name supply")
}

/// A sequence of variables under which redexes mentioning them may not be
/// contracted. Order is kept for display; every semantic test uses the
/// underlying set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Barrier(Vec<Name>);

impl Barrier {
    pub fn empty() -> Barrier {
        Barrier(Vec::new())
    }

    pub fn new<I, N>(vars: I) -> Barrier
    where
        I: IntoIterator<Item = N>,
        N: Into<Name>,
    {
        Barrier(vars.into_iter().map(Into::into).collect())
    }

    /// Parses a comma separated list such as `x,y,z`. Empty input is the empty barrier.
    pub fn parse(text: &str) -> Barrier {
        Barrier(
            text.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(Name::new)
                .collect(),
        )
    }

    pub fn vars(&self) -> &[Name] {
        &self.0
    }

    pub fn set(&self) -> NameSet {
        self.0.iter().cloned().collect()
    }

    pub fn contains(&self, x: &Name) -> bool {
        self.0.contains(x)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x · S`: the barrier extended at the front with `x`.
    pub fn cons(&self, x: &Name) -> Barrier {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(x.clone());
        v.extend(self.0.iter().cloned());
        Barrier(v)
    }

    /// `S ⊕ T`
    pub fn concat(&self, other: &Barrier) -> Barrier {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Barrier(v)
    }

    /// Set inclusion of the underlying sets.
    pub fn is_subset(&self, other: &Barrier) -> bool {
        self.0.iter().all(|x| other.contains(x))
    }

    /// Sorted, deduplicated key for memo tables.
    pub fn key(&self) -> Vec<Name> {
        self.set().into_iter().collect()
    }

    /// True iff no variable of `vars` is in this barrier.
    pub fn is_disjoint(&self, vars: &NameSet) -> bool {
        !self.0.iter().any(|x| vars.contains(x))
    }
}

impl fmt::Display for Barrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "⟩")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_keeps_untaken_hint() {
        let x = Name::new("x");
        assert_eq!(fresh(&x, |_| false), x);
    }

    #[test]
    fn fresh_appends_suffix_to_base() {
        let taken: NameSet = ["x", "x1", "x2"].into_iter().map(Name::new).collect();
        assert_eq!(fresh(&Name::new("x1"), |c| taken.contains(c)).as_str(), "x3");
    }

    #[test]
    fn barrier_ops_are_set_based() {
        let s = Barrier::parse("x, y,x");
        assert_eq!(s.vars().len(), 3);
        assert_eq!(s.key().len(), 2);
        assert!(Barrier::parse("y").is_subset(&s));
        assert!(!Barrier::parse("z").is_subset(&s));
        assert_eq!(s.cons(&Name::new("w")).vars()[0].as_str(), "w");
        assert_eq!(Barrier::parse("").vars().len(), 0);
    }
}
