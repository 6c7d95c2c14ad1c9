//! Finite o-algebras recognizing languages of countable words.

pub mod algebra;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod green;
pub mod quotient;
pub mod small;
pub mod synth;
pub mod term;
pub mod varieties;

pub use algebra::{AxiomViolation, Elem, Identity, OAlgebra, Subset};
pub use error::{Error, Result};
