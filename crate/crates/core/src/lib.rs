//! Finite involutive quantales and the structures built over them:
//! quantale-valued sets, Hilbert modules, supported modules, and the
//! modules of finite groupoid actions.

pub mod catalog;
pub mod error;
pub mod groupoid;
pub mod hilbert;
pub mod io;
pub mod lattice;
pub mod modelsearch;
pub mod qmatrix;
pub mod quantale;
pub mod report;

pub use error::{Error, Result, Violation};
pub use lattice::{Elem, SupLattice};
pub use quantale::{Flag, PropertyReport, Quantale, Requirement};
pub use report::Verdict;
