//! Standard-library companion to `qdom-core`: external solvers, parallel
//! cube conquest, file formats, the benchmark driver and the CLI.

pub mod backend;
pub mod bench;
pub mod cli;
pub mod conquer;
pub mod external;
pub mod files;

pub use backend::{AnyBackend, SolverChoice, TimedSolver};
pub use external::{run_external, ExternalBackend, ExternalSolverConfig};
