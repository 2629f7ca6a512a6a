//! Lie algebras, differential crossed modules and invariant pairings.

pub mod builtin;
mod crossed;
mod invpoly;
mod lie;
mod parse;
mod report;

pub use crossed::DifferentialCrossedModule;
pub use invpoly::InvariantPolynomial;
pub use lie::LieAlgebra;
pub use parse::{parse_crossed_module, parse_pairing, write_crossed_module};
pub use report::{AxiomCheck, ValidationReport, Witness};
