//! Queen domination as propositional satisfiability.
//!
//! This crate holds everything that is a pure function of its inputs: board
//! geometry and symmetries, CNF construction and DIMACS/iCNF text, literal
//! orderings, AtMost-k encoders, lex-leader symmetry breaking, an embedded
//! CDCL solver, the brute-force oracle, blocking-clause enumeration up to
//! isomorphism and the cube splitter. It only needs `alloc`; process and
//! file handling live in the `qdom` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod board;
pub mod cardinality;
pub mod cnf;
pub mod cube;
pub mod encode;
pub mod enumerate;
mod error;
pub mod oracle;
pub mod ordering;
pub mod sat;
pub mod symmetry;

pub use board::{Board, SquareSet, Symmetry};
pub use cardinality::{CardinalityEncoder, CardinalityKind};
pub use cnf::{CnfFormula, CubeSet, Lit};
pub use encode::EncodingConfig;
pub use enumerate::{FrequencyMatrix, SolutionClass};
pub use error::Error;
pub use ordering::OrderingStrategy;
pub use sat::{Backend, SolveResult, SolveStatus, Solver};

pub type Result<T, E = Error> = core::result::Result<T, E>;
