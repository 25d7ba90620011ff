use std::fmt;

use serde::Serialize;

use crate::lattice::Elem;

/// Outcome of checking one property exhaustively.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails { witness: Vec<Elem> },
    NotApplicable,
}

impl Verdict {
    pub fn fails(witness: impl Into<Vec<Elem>>) -> Self {
        Verdict::Fails {
            witness: witness.into(),
        }
    }

    /// `Holds` when no witness was found.
    pub fn from_witness<W: Into<Vec<Elem>>>(w: Option<W>) -> Self {
        match w {
            None => Verdict::Holds,
            Some(w) => Verdict::fails(w),
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn is_applicable(&self) -> bool {
        !matches!(self, Verdict::NotApplicable)
    }

    pub fn witness(&self) -> Option<&[Elem]> {
        match self {
            Verdict::Fails { witness } => Some(witness),
            _ => None,
        }
    }

    /// Conjunction that keeps the first failing witness.
    pub fn and(self, other: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Holds => other(),
            v => v,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "true"),
            Verdict::Fails { witness } => write!(f, "false {witness:?}"),
            Verdict::NotApplicable => write!(f, "n/a"),
        }
    }
}
