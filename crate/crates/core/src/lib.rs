//! Hierarchical Craig interpolation for local theory extensions.
//!
//! Ground conjunctions `A` and `B` over a base theory extended with axiom
//! schemas are purified, instantiated, separated into A- and B-parts and
//! interpolated in the base theory.

pub mod error;
pub mod kernel;
pub mod linear;
pub mod prop;
pub mod base;
pub mod lattice;
pub mod interp;
pub mod preprocess;
pub mod axioms;
pub mod separation;
pub mod driver;
pub mod problem;
pub mod oracle;
pub mod testgen;

pub use error::{Error, Result};
