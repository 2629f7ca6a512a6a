//! Exact symbolic computation of higher gauge theory objects over
//! differential crossed modules: 2-connections, their curvatures,
//! invariant forms, transgressions and homotopy formulas.

pub mod algebra;
pub mod error;
pub mod forms;
pub mod gauge;
pub mod homotopy;
pub mod matrix;
pub mod poly;
pub mod random;
pub mod rational;

pub use error::{Error, Result};
pub use poly::{parse_poly, Poly, Registry, VarRegistry};
pub use rational::Rational;
