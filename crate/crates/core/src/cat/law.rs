use std::fmt;

use serde::Serialize;

/// Which law a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Identity,
    Composition,
    Associativity,
    Grade,
    FunctorIdentity,
    FunctorTyping,
    FunctorComposition,
    ComponentTyping,
    Naturality,
    Triangle,
    HomBijection,
    MonadUnit,
    MonadAssociativity,
}

impl Law {
    pub fn name(self) -> &'static str {
        match self {
            Law::Identity => "identity law",
            Law::Composition => "composition",
            Law::Associativity => "associativity",
            Law::Grade => "grade",
            Law::FunctorIdentity => "functor identity",
            Law::FunctorTyping => "functor typing",
            Law::FunctorComposition => "functor composition",
            Law::ComponentTyping => "component typing",
            Law::Naturality => "naturality",
            Law::Triangle => "triangle identity",
            Law::HomBijection => "hom bijection",
            Law::MonadUnit => "monad unit law",
            Law::MonadAssociativity => "monad associativity",
        }
    }
}

/// A single failed law instance, naming the offending ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub law: Law,
    pub ids: Vec<String>,
    pub detail: String,
}

impl Violation {
    pub fn new<I, S>(law: Law, ids: I, detail: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Violation {
            law,
            ids: ids.into_iter().map(Into::into).collect(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.law.name(), self.ids.join(", "))?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Outcome of a law check; empty means every law held.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub fn new(mut violations: Vec<Violation>) -> Self {
        violations.sort();
        violations.dedup();
        LawReport { violations }
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(mut self, other: LawReport) -> Self {
        self.violations.extend(other.violations);
        LawReport::new(self.violations)
    }

    pub fn has(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub fn first(&self, law: Law) -> Option<&Violation> {
        self.violations.iter().find(|v| v.law == law)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
