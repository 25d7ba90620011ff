use std::fmt;

use serde::Serialize;

use crate::lattice::Elem;

/// A law that failed, together with the first violating tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub witness: Vec<Elem>,
}

impl Violation {
    pub fn new(law: impl Into<String>, witness: impl Into<Vec<Elem>>) -> Self {
        Self {
            law: law.into(),
            witness: witness.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {:?}", self.law, self.witness)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("lattice must have at least one element")]
    EmptyCarrier,
    #[error("order relation has a cycle through {0} and {1}")]
    NotAPoset(Elem, Elem),
    #[error("elements {0} and {1} have no {2}")]
    NotALattice(Elem, Elem, &'static str),
    #[error("element index {index} out of range for a carrier of size {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("table `{table}` has {found} entries, expected {expected}")]
    TableShape {
        table: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix shapes {0:?} and {1:?} are incompatible")]
    ShapeMismatch((usize, usize), (usize, usize)),
    #[error("matrices are over different quantales")]
    QuantaleMismatch,
    #[error("not an involutive quantale: {0}")]
    InvalidQuantale(Violation),
    #[error("quantale has no unit")]
    NotUnital,
    #[error("quantale is not stably supported: {0}")]
    NotStablySupported(Violation),
    #[error("quantale is not stably Gelfand (element {0})")]
    NotStablyGelfand(Elem),
    #[error("base locale fails b∧c = bc at ({0}, {1})")]
    BNotLocale(Elem, Elem),
    #[error("not a Q-set: {0}")]
    NotAQSet(Violation),
    #[error("not a relation: {0}")]
    NotARelation(Violation),
    #[error("not a map: {0}")]
    NotAMap(Violation),
    #[error("not a Hilbert basis: reconstruction fails at {0}")]
    NotABasis(Elem),
    #[error("module does not have enough sections (reconstruction fails at {0})")]
    NotEnoughSections(Elem),
    #[error("adjoint identity fails at ({0}, {1})")]
    AdjointIdentityFails(Elem, Elem),
    #[error("not a module homomorphism: {0}")]
    NotAHom(Violation),
    #[error("module carrier exceeds the cap of {0} elements")]
    CarrierTooLarge(usize),
    #[error("support axiom fails: {0}")]
    SupportAxiomFails(Violation),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("module is not étale: {0}")]
    NotEtale(Violation),
    #[error("search budget of {budget} candidates exceeded after {found} models")]
    BudgetExceeded { budget: u64, found: usize },
    #[error("a property that holds by construction failed: {0}")]
    Theorem(Violation),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
