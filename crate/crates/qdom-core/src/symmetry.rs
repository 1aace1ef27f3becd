//! Lex-leader symmetry breaking with Harvey's ternary-clause encoding.
//!
//! For each nontrivial board symmetry `t`, the row-major queen vector `X`
//! is constrained to be lexicographically `<=` the vector `Y_t` with
//! `Y_t[i] = Q(t(i))`. A surviving placement is therefore the
//! lexicographically smallest bit vector (row-major reading, `0 < 1`) of
//! its orbit.

use alloc::vec::Vec;

use crate::board::{Board, SquareSet, Symmetry};
use crate::cnf::{CnfFormula, Lit};
use crate::{Error, Result};

/// Variables allocated for one `X <= Y` constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexConstraint {
    pub x: Vec<Lit>,
    pub y: Vec<Lit>,
    /// `a_0`; the chain is `aux_start ..= aux_start + N`.
    pub aux_start: u32,
}

/// Adds `x <=_lex y` using `N + 1` fresh auxiliaries `a_0..a_N`, where `a_i`
/// stands for "the suffix from position `i + 1` satisfies `<=`".
/// Emits `3N` ternary clauses followed by the units `a_0` and `a_N`.
pub fn encode_lex_leq(f: &mut CnfFormula, x: &[Lit], y: &[Lit]) -> Result<LexConstraint> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            x: x.len(),
            y: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyLexVector);
    }
    let n = x.len();
    let aux: Vec<Lit> = f.fresh_vars(n + 1).into_iter().map(Lit::pos).collect();
    for i in 0..n {
        let (a, a_next, xi, yi) = (aux[i], aux[i + 1], x[i], y[i]);
        f.add_clause(&[a_next, yi, !a])?;
        f.add_clause(&[a_next, !xi, !a])?;
        f.add_clause(&[yi, !xi, !a])?;
    }
    f.add_clause(&[aux[0]])?;
    f.add_clause(&[aux[n]])?;
    Ok(LexConstraint {
        x: x.to_vec(),
        y: y.to_vec(),
        aux_start: aux[0].var(),
    })
}

/// Adds one lex-leader constraint per nontrivial symmetry (7 in total).
pub fn add_symmetry_breaking(f: &mut CnfFormula, board: &Board) -> Result<Vec<LexConstraint>> {
    let x: Vec<Lit> = board.squares().map(|s| Lit::pos(s as u32)).collect();
    Symmetry::NONTRIVIAL
        .iter()
        .map(|&t| {
            let y = board
                .squares()
                .map(|s| Ok(Lit::pos(board.apply_symmetry(t, s)? as u32)))
                .collect::<Result<Vec<_>>>()?;
            encode_lex_leq(f, &x, &y)
        })
        .collect()
}

/// Row-major occupancy vector of a placement.
pub fn occupancy(board: &Board, set: &SquareSet) -> Vec<bool> {
    let mut bits = alloc::vec![false; board.num_squares()];
    for s in set.iter() {
        bits[s - 1] = true;
    }
    bits
}

/// `true` when the placement's occupancy vector is lexicographically
/// `<=` that of every symmetric image, i.e. it satisfies all seven
/// lex-leader constraints.
pub fn is_lex_leader(board: &Board, set: &SquareSet) -> Result<bool> {
    let own = occupancy(board, set);
    for t in Symmetry::NONTRIVIAL {
        let image = occupancy(board, &board.transform_set(t, set)?);
        if own > image {
            return Ok(false);
        }
    }
    Ok(true)
}
