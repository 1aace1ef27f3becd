//! Brute-force ground truth for boards up to 8x8.
//!
//! Shares nothing with the SAT path except [`Board`]: coverage is tracked
//! with one `u64` bit per square and candidate sets are walked as
//! lexicographic combinations.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::board::{Board, SquareSet};
use crate::{Error, Result};

pub const MAX_ORACLE_N: usize = 8;

/// `ceil((n - 1) / 2)`, the classical lower bound on the domination number.
pub fn lower_bound(n: usize) -> usize {
    n.saturating_sub(1).div_ceil(2)
}

/// `true` iff the inclusive neighborhoods of `set` cover every square.
pub fn is_dominating(board: &Board, set: &SquareSet) -> bool {
    let mut covered = alloc::vec![false; board.num_squares()];
    for q in set.iter() {
        for s in board.squares() {
            if board.covers(q, s).unwrap_or(false) {
                covered[s - 1] = true;
            }
        }
    }
    covered.iter().all(|&c| c)
}

struct Masks {
    cover: Vec<u64>,
    full: u64,
    max_cover: u32,
}

fn masks(board: &Board) -> Result<Masks> {
    if board.n() > MAX_ORACLE_N {
        return Err(Error::OracleBoardTooLarge(board.n()));
    }
    let cover: Vec<u64> = board
        .squares()
        .map(|q| {
            board
                .squares()
                .filter(|&s| board.covers(q, s).unwrap_or(false))
                .fold(0u64, |m, s| m | 1 << (s - 1))
        })
        .collect();
    let full = if board.num_squares() == 64 {
        u64::MAX
    } else {
        (1u64 << board.num_squares()) - 1
    };
    let max_cover = cover.iter().map(|m| m.count_ones()).max().unwrap_or(0);
    Ok(Masks {
        cover,
        full,
        max_cover,
    })
}

/// Depth-first walk over k-combinations in lexicographic order, calling
/// `found` for each dominating one. Stops early when `found` returns false.
fn walk(m: &Masks, k: usize, found: &mut dyn FnMut(&[usize]) -> bool) {
    let squares = m.cover.len();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    fn rec(
        m: &Masks,
        k: usize,
        squares: usize,
        start: usize,
        covered: u64,
        chosen: &mut Vec<usize>,
        found: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let remaining = k - chosen.len();
        let uncovered = (m.full & !covered).count_ones();
        if remaining == 0 {
            return if uncovered == 0 { found(chosen) } else { true };
        }
        if uncovered > remaining as u32 * m.max_cover {
            return true;
        }
        for q in start..=squares - remaining {
            chosen.push(q + 1);
            let keep_going = rec(m, k, squares, q + 1, covered | m.cover[q], chosen, found);
            chosen.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
    if k <= squares {
        rec(m, k, squares, 0, 0, &mut chosen, found);
    }
}

fn exists_cover(m: &Masks, k: usize) -> bool {
    let mut hit = false;
    walk(m, k, &mut |_| {
        hit = true;
        false
    });
    hit
}

/// Smallest `k <= max_k` admitting a dominating set, searching upward from
/// the lower bound.
pub fn min_domination_number(board: &Board, max_k: usize) -> Result<usize> {
    let m = masks(board)?;
    (lower_bound(board.n())..=max_k)
        .find(|&k| exists_cover(&m, k))
        .ok_or(Error::NoDominatingSet { max_k })
}

/// Every dominating set of exactly `k` squares (labeled, not up to symmetry).
pub fn all_dominating_sets(board: &Board, k: usize) -> Result<BTreeSet<SquareSet>> {
    let m = masks(board)?;
    let mut out = BTreeSet::new();
    walk(&m, k, &mut |c| {
        out.insert(SquareSet::new(board, c.to_vec()).expect("combination is sorted"));
        true
    });
    Ok(out)
}

/// Every minimum dominating set.
pub fn all_min_sets(board: &Board) -> Result<BTreeSet<SquareSet>> {
    let gamma = min_domination_number(board, board.n())?;
    all_dominating_sets(board, gamma)
}

/// Summary produced by `qdom oracle`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub n: usize,
    pub gamma: usize,
    pub labeled: usize,
    pub classes: usize,
}

/// Counts orbits by collecting one representative per orbit.
pub fn report(board: &Board) -> Result<OracleReport> {
    let gamma = min_domination_number(board, board.n())?;
    let sets = all_dominating_sets(board, gamma)?;
    let mut reps = BTreeSet::new();
    for s in &sets {
        let orbit = board.orbit(s)?;
        reps.insert(orbit.into_iter().next().expect("orbit contains the set"));
    }
    Ok(OracleReport {
        n: board.n(),
        gamma,
        labeled: sets.len(),
        classes: reps.len(),
    })
}
