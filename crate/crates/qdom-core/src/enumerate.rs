//! Enumeration of minimum dominating sets up to isomorphism.
//!
//! Each model is decoded to its queen squares, checked independently for
//! domination, expanded to its orbit, and every orbit member is blocked
//! with `¬Q(m_1) ∨ … ∨ ¬Q(m_γ)`. Orbit blocking is applied whether or not
//! the encoding carries symmetry-breaking clauses, so the class list does
//! not depend on the lex constraints being right.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::board::{Board, SquareSet, Symmetry};
use crate::cnf::{CnfFormula, Lit};
use crate::encode::{decode_queens, encode_domination, EncodingConfig};
use crate::oracle::is_dominating;
use crate::sat::{Backend, IntegrityError, SolveStats, SolveStatus, Solver};
use crate::{Error, Result};

/// Lexicographically smallest sorted index sequence among the eight images.
pub fn canonical_form(board: &Board, set: &SquareSet) -> Result<SquareSet> {
    Ok(board
        .orbit(set)?
        .into_iter()
        .next()
        .expect("orbit contains the set itself"))
}

/// One isomorphism class of placements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SolutionClass {
    pub canonical: SquareSet,
    /// The orbit, ascending; `members[0] == canonical`.
    pub members: Vec<SquareSet>,
}

impl SolutionClass {
    pub fn from_set(board: &Board, set: &SquareSet) -> Result<Self> {
        let members: Vec<SquareSet> = board.orbit(set)?.into_iter().collect();
        Ok(SolutionClass {
            canonical: members[0].clone(),
            members,
        })
    }

    pub fn orbit_size(&self) -> usize {
        self.members.len()
    }
}

/// All labeled placements covered by `classes`.
pub fn labeled_solutions(classes: &[SolutionClass]) -> BTreeSet<SquareSet> {
    classes
        .iter()
        .flat_map(|c| c.members.iter().cloned())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error(transparent)]
    Encoding(#[from] Error),
    #[error("decoded placement {set} is not a valid {gamma}-queen dominating set")]
    Integrity { set: SquareSet, gamma: usize },
    #[error(transparent)]
    Backend(#[from] IntegrityError),
    #[error("placement {found} dominates with fewer than {gamma} queens; {gamma} is not the domination number")]
    BelowGamma { found: SquareSet, gamma: usize },
    #[error("backend returned unknown after {} classes: {diagnostic}", .classes.len())]
    Partial {
        classes: Vec<SolutionClass>,
        diagnostic: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Enumeration {
    /// Sorted by canonical form.
    pub classes: Vec<SolutionClass>,
    /// Raw placements in the order the backend produced them.
    pub models: Vec<SquareSet>,
    pub stats: SolveStats,
}

fn add_stats(total: &mut SolveStats, s: SolveStats) {
    total.decisions += s.decisions;
    total.conflicts += s.conflicts;
    total.propagations += s.propagations;
}

/// Runs the blocking loop over a formula already fed to `backend`.
/// `assumptions` restrict the search (used for cubes).
pub fn enumerate_loaded<B: Backend + ?Sized>(
    board: &Board,
    gamma: usize,
    assumptions: &[Lit],
    backend: &mut B,
) -> Result<Enumeration, EnumerateError> {
    let mut found: BTreeMap<SquareSet, SolutionClass> = BTreeMap::new();
    let mut out = Enumeration::default();
    loop {
        let r = backend.solve(assumptions)?;
        add_stats(&mut out.stats, r.stats);
        match r.status {
            SolveStatus::Unsat => break,
            SolveStatus::Unknown => {
                return Err(EnumerateError::Partial {
                    classes: found.into_values().collect(),
                    diagnostic: r.diagnostic.unwrap_or_default(),
                })
            }
            SolveStatus::Sat => {}
        }
        let model = r.model.expect("sat result carries a model");
        let set = SquareSet::new(board, decode_queens(board, &model))?;
        if !is_dominating(board, &set) || set.len() > gamma {
            return Err(EnumerateError::Integrity { set, gamma });
        }
        if set.len() < gamma {
            return Err(EnumerateError::BelowGamma { found: set, gamma });
        }
        let class = SolutionClass::from_set(board, &set)?;
        for member in &class.members {
            let block: Vec<Lit> = member.iter().map(|s| Lit::neg(s as u32)).collect();
            backend.add_clause(&block);
        }
        out.models.push(set);
        found.insert(class.canonical.clone(), class);
    }
    out.classes = found.into_values().collect();
    Ok(out)
}

/// Loads `formula` into `backend` and enumerates under `assumptions`.
pub fn enumerate_formula<B: Backend + ?Sized>(
    board: &Board,
    gamma: usize,
    formula: &CnfFormula,
    assumptions: &[Lit],
    backend: &mut B,
) -> Result<Enumeration, EnumerateError> {
    backend.add_formula(formula);
    enumerate_loaded(board, gamma, assumptions, backend)
}

/// Encodes `(board, gamma)` with `cfg` and enumerates every class of
/// `gamma`-queen dominating sets on `backend`.
pub fn enumerate_classes<B: Backend + ?Sized>(
    board: &Board,
    gamma: usize,
    cfg: &EncodingConfig,
    backend: &mut B,
) -> Result<Enumeration, EnumerateError> {
    let f = encode_domination(board, gamma, cfg)?;
    enumerate_formula(board, gamma, &f, &[], backend)
}

/// [`enumerate_classes`] on a fresh embedded solver.
pub fn enumerate_embedded(
    board: &Board,
    gamma: usize,
    cfg: &EncodingConfig,
) -> Result<Enumeration, EnumerateError> {
    enumerate_classes(board, gamma, cfg, &mut Solver::new())
}

/// Base encoding without symmetry breaking plus one blocking clause per
/// labeled solution. Unsatisfiable exactly when `classes` is complete.
pub fn completeness_formula(
    board: &Board,
    gamma: usize,
    classes: &[SolutionClass],
    cfg: &EncodingConfig,
) -> Result<CnfFormula> {
    let mut f = encode_domination(board, gamma, &cfg.without_symmetry())?;
    for class in classes {
        for member in &class.members {
            let block: Vec<Lit> = member.iter().map(|s| Lit::neg(s as u32)).collect();
            f.add_clause(&block)?;
        }
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbeError {
    #[error(transparent)]
    Encoding(#[from] Error),
    #[error(transparent)]
    Backend(#[from] IntegrityError),
    #[error("upper bound {0} is not satisfiable")]
    UpperBoundUnsat(usize),
    #[error("backend returned unknown while probing {gamma} queens")]
    Unknown { gamma: usize },
}

/// Domination number by descending SAT probes from `upper`, stopping at
/// the first unsatisfiable bound or at the `ceil((n-1)/2)` lower bound.
/// `make_backend` supplies a fresh backend per probe.
pub fn probe_domination_number<B, F>(
    board: &Board,
    upper: usize,
    cfg: &EncodingConfig,
    mut make_backend: F,
) -> Result<usize, ProbeError>
where
    B: Backend,
    F: FnMut() -> B,
{
    let lower = crate::oracle::lower_bound(board.n()).max(1);
    let cfg = cfg.without_symmetry();
    let mut best = None;
    let mut k = upper;
    loop {
        let f = encode_domination(board, k, &cfg)?;
        let mut backend = make_backend();
        backend.add_formula(&f);
        match backend.solve(&[])?.status {
            SolveStatus::Sat => best = Some(k),
            SolveStatus::Unsat => break,
            SolveStatus::Unknown => return Err(ProbeError::Unknown { gamma: k }),
        }
        if k <= lower {
            break;
        }
        k -= 1;
    }
    best.ok_or(ProbeError::UpperBoundUnsat(upper))
}

/// Per-square queen counts over all labeled solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyMatrix {
    n: usize,
    counts: Vec<u64>,
    total: u64,
}

/// First square whose count differs from its image under some symmetry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryViolation {
    pub transform: Symmetry,
    pub square: usize,
    pub count: u64,
    pub image: usize,
    pub image_count: u64,
}

impl fmt::Display for SymmetryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: square {} has count {} but its image {} has {}",
            self.transform, self.square, self.count, self.image, self.image_count
        )
    }
}

impl FrequencyMatrix {
    pub fn zeros(board: &Board) -> Self {
        FrequencyMatrix {
            n: board.n(),
            counts: alloc::vec![0; board.num_squares()],
            total: 0,
        }
    }

    /// Builds a matrix from raw counts (row-major) and a solution total.
    pub fn from_counts(board: &Board, counts: Vec<u64>, total: u64) -> Result<Self> {
        if counts.len() != board.num_squares() {
            return Err(Error::LengthMismatch {
                x: counts.len(),
                y: board.num_squares(),
            });
        }
        Ok(FrequencyMatrix {
            n: board.n(),
            counts,
            total,
        })
    }

    pub fn add_solution(&mut self, set: &SquareSet) {
        for s in set.iter() {
            self.counts[s - 1] += 1;
        }
        self.total += 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Count for `square` (1-based).
    pub fn count(&self, square: usize) -> u64 {
        self.counts[square - 1]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.counts.chunks(self.n)
    }

    /// Exact comparison of every square against its image under all
    /// eight symmetries.
    pub fn check_symmetry(&self) -> Result<(), SymmetryViolation> {
        let board = Board::new(self.n).expect("matrix has a positive side");
        for transform in Symmetry::ALL {
            for square in board.squares() {
                let image = board
                    .apply_symmetry(transform, square)
                    .expect("valid square");
                let (count, image_count) = (self.count(square), self.count(image));
                if count != image_count {
                    return Err(SymmetryViolation {
                        transform,
                        square,
                        count,
                        image,
                        image_count,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Counts over every orbit member of every class.
pub fn frequency_matrix(board: &Board, classes: &[SolutionClass]) -> FrequencyMatrix {
    let mut m = FrequencyMatrix::zeros(board);
    for class in classes {
        for member in &class.members {
            m.add_solution(member);
        }
    }
    m
}

pub fn check_frequency_symmetry(m: &FrequencyMatrix) -> Result<(), SymmetryViolation> {
    m.check_symmetry()
}
