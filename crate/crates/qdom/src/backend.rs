//! Runtime backend selection: the embedded solver with an optional wall
//! clock limit, or an external process.

use std::time::{Duration, Instant};

use qdom_core::sat::{Backend, IntegrityError, SolveResult};
use qdom_core::{Lit, Solver};

use crate::external::{ExternalBackend, ExternalSolverConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverChoice {
    Embedded { timeout: Option<Duration> },
    External(ExternalSolverConfig),
}

impl SolverChoice {
    pub fn embedded() -> Self {
        SolverChoice::Embedded { timeout: None }
    }

    pub fn make(&self) -> AnyBackend {
        match self {
            SolverChoice::Embedded { timeout } => {
                AnyBackend::Embedded(Box::new(TimedSolver::new(*timeout)))
            }
            SolverChoice::External(cfg) => AnyBackend::External(ExternalBackend::new(cfg.clone())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            SolverChoice::Embedded { .. } => "embedded".into(),
            SolverChoice::External(cfg) => cfg.executable.display().to_string(),
        }
    }
}

/// Embedded solver whose every `solve` call is limited to `timeout`.
pub struct TimedSolver {
    solver: Solver,
    timeout: Option<Duration>,
}

impl TimedSolver {
    pub fn new(timeout: Option<Duration>) -> Self {
        TimedSolver {
            solver: Solver::new(),
            timeout,
        }
    }
}

impl Backend for TimedSolver {
    fn add_clause(&mut self, lits: &[Lit]) {
        self.solver.add_clause(lits);
    }

    fn reserve_vars(&mut self, num_vars: u32) {
        self.solver.ensure_vars(num_vars as usize);
    }

    fn solve(&mut self, assumptions: &[Lit]) -> Result<SolveResult, IntegrityError> {
        if let Some(t) = self.timeout {
            let deadline = Instant::now() + t;
            self.solver
                .set_terminate(Some(Box::new(move || Instant::now() >= deadline)));
        }
        let r = self.solver.solve_checked(assumptions);
        self.solver.set_terminate(None);
        r
    }
}

pub enum AnyBackend {
    Embedded(Box<TimedSolver>),
    External(ExternalBackend),
}

impl Backend for AnyBackend {
    fn add_clause(&mut self, lits: &[Lit]) {
        match self {
            AnyBackend::Embedded(s) => s.add_clause(lits),
            AnyBackend::External(s) => s.add_clause(lits),
        }
    }

    fn reserve_vars(&mut self, num_vars: u32) {
        match self {
            AnyBackend::Embedded(s) => s.reserve_vars(num_vars),
            AnyBackend::External(s) => s.reserve_vars(num_vars),
        }
    }

    fn solve(&mut self, assumptions: &[Lit]) -> Result<SolveResult, IntegrityError> {
        match self {
            AnyBackend::Embedded(s) => s.solve(assumptions),
            AnyBackend::External(s) => s.solve(assumptions),
        }
    }
}
