//! Static cube splitter and result merging for cube-and-conquer.
//!
//! Branch variables are the first `depth` queen variables of the occurrence
//! ordering; the cubes are all `2^depth` sign combinations over them, so
//! they are pairwise contradictory and jointly exhaustive by construction.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::board::{Board, SquareSet};
use crate::cnf::{CnfFormula, CubeSet, Lit};
use crate::enumerate::{enumerate_formula, EnumerateError, Enumeration, SolutionClass};
use crate::ordering::{order_literals, OrderingStrategy};
use crate::sat::{Backend, IntegrityError, SolveResult, SolveStatus, Solver};
use crate::{Error, Result};

pub const MAX_DEPTH: usize = 16;

/// Queen variables used for branching, most frequent first.
pub fn branch_variables(board: &Board, depth: usize) -> Result<Vec<u32>> {
    let max = MAX_DEPTH.min(board.num_squares());
    if depth == 0 || depth > max {
        return Err(Error::InvalidDepth { depth, max });
    }
    Ok(order_literals(board, OrderingStrategy::Occurrence)
        .into_iter()
        .take(depth)
        .map(|s| s as u32)
        .collect())
}

/// Full binary split over `depth` branch variables. Cube `i` sets branch
/// variable `j` negative when bit `depth - 1 - j` of `i` is one.
pub fn split(f: &CnfFormula, board: &Board, depth: usize) -> Result<CubeSet> {
    let vars = branch_variables(board, depth)?;
    if let Some(&v) = vars.iter().find(|&&v| v > f.num_vars()) {
        return Err(Error::CubeVariableOutOfRange {
            var: v,
            num_vars: f.num_vars(),
        });
    }
    let cubes = (0u32..1 << depth)
        .map(|mask| {
            vars.iter()
                .enumerate()
                .map(|(j, &v)| Lit::new(v, mask >> (depth - 1 - j) & 1 == 0))
                .collect()
        })
        .collect();
    CubeSet::new(cubes)
}

/// Outcome of one cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeReport {
    pub index: usize,
    pub cube: Vec<Lit>,
    pub status: SolveStatus,
    /// Classes found in this cube (enumeration mode).
    pub classes: usize,
    pub conflicts: u64,
    pub millis: u128,
    pub diagnostic: Option<alloc::string::String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub status: SolveStatus,
    /// A verified model when some cube was satisfiable.
    pub model: Option<Vec<bool>>,
}

/// Overall decision: sat if any cube is sat, unsat iff every cube is
/// unsat, otherwise unknown.
pub fn merge_decisions(results: &[SolveResult]) -> Decision {
    if let Some(r) = results.iter().find(|r| r.is_sat()) {
        return Decision {
            status: SolveStatus::Sat,
            model: r.model.clone(),
        };
    }
    let status = if results.iter().all(|r| r.is_unsat()) {
        SolveStatus::Unsat
    } else {
        SolveStatus::Unknown
    };
    Decision {
        status,
        model: None,
    }
}

/// Union of per-cube class lists, deduplicated by canonical form.
pub fn merge_classes<'a>(
    parts: impl IntoIterator<Item = &'a [SolutionClass]>,
) -> Vec<SolutionClass> {
    let mut all: BTreeMap<SquareSet, SolutionClass> = BTreeMap::new();
    for part in parts {
        for c in part {
            all.entry(c.canonical.clone()).or_insert_with(|| c.clone());
        }
    }
    all.into_values().collect()
}

/// Decides one cube on a fresh embedded solver.
pub fn solve_cube(
    f: &CnfFormula,
    cube: &[Lit],
) -> core::result::Result<SolveResult, IntegrityError> {
    let mut s = Solver::from_formula(f);
    s.solve_checked(cube)
}

/// Enumerates the classes whose blocked models fall inside one cube.
pub fn enumerate_cube<B: Backend>(
    board: &Board,
    gamma: usize,
    f: &CnfFormula,
    cube: &[Lit],
    backend: &mut B,
) -> core::result::Result<Enumeration, EnumerateError> {
    enumerate_formula(board, gamma, f, cube, backend)
}

/// Sequential conquest on the embedded solver; the `qdom` crate provides
/// the multi-threaded runner.
pub fn conquer_enumerate_sequential(
    board: &Board,
    gamma: usize,
    f: &CnfFormula,
    cubes: &CubeSet,
) -> core::result::Result<Vec<SolutionClass>, EnumerateError> {
    let mut parts = Vec::with_capacity(cubes.len());
    for cube in cubes.cubes() {
        parts.push(enumerate_cube(board, gamma, f, cube, &mut Solver::new())?.classes);
    }
    Ok(merge_classes(parts.iter().map(|p| p.as_slice())))
}
