//! Mod-2 cellular homology of a 244-cell complex together with exact
//! certification of the jet conditions that define each cell.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf2`] has bit-packed vectors and matrices over the two-element field.
//! * [`cells`] enumerates the cells and their names.
//! * [`conditions`] turns a cell plus parameters into jet functionals.
//! * [`rank`] computes exact ranks of those functionals over ℚ.
//! * [`ingest`] reads the boundary data and its errata ledger.
//! * [`complex`] builds the chain complex and computes homology.
//! * [`report`] wires everything into batch commands and a JSON dossier.

pub mod cells;
pub mod complex;
pub mod conditions;
pub mod gf2;
pub mod ingest;
pub mod rank;
pub mod report;

pub use cells::{Cell, Family};
pub use complex::{Chain, ChainComplex, ValidatedComplex};
pub use conditions::{instantiate, ConditionSystem, Moduli, Rational};
pub use gf2::{BitMatrix, BitVector};
pub use ingest::Dataset;
pub use rank::{codimension, FunctionBasis};
pub use report::RunConfig;
