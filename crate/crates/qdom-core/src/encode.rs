//! Full queen-domination encoding: one domination clause per square,
//! an AtMost-γ constraint over the ordered queen variables and optional
//! lex-leader symmetry breaking, emitted in that order.

use alloc::vec::Vec;

use crate::board::Board;
use crate::cardinality::{encode_at_most_k, CardinalityEncoder, CardinalityKind};
use crate::cnf::{CnfFormula, Lit};
use crate::ordering::{order_literals, OrderingStrategy};
use crate::symmetry::add_symmetry_breaking;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingConfig {
    pub card: CardinalityKind,
    pub modulus: Option<u32>,
    pub order: OrderingStrategy,
    pub symmetry: bool,
}

impl Default for EncodingConfig {
    fn default() -> Self {
        EncodingConfig {
            card: CardinalityKind::MTotalizer,
            modulus: None,
            order: OrderingStrategy::Hilbert,
            symmetry: true,
        }
    }
}

impl EncodingConfig {
    pub fn new(card: CardinalityKind, order: OrderingStrategy, symmetry: bool) -> Self {
        EncodingConfig {
            card,
            modulus: None,
            order,
            symmetry,
        }
    }

    pub fn without_symmetry(mut self) -> Self {
        self.symmetry = false;
        self
    }
}

/// `Q(j)` for every `j` in `N(i)`, ascending.
pub fn add_domination_clauses(f: &mut CnfFormula, board: &Board) -> Result<()> {
    for i in board.squares() {
        let clause: Vec<Lit> = board
            .neighborhood(i)?
            .iter()
            .map(|j| Lit::pos(j as u32))
            .collect();
        f.add_clause(&clause)?;
    }
    Ok(())
}

/// Encodes "at most `gamma` queens dominate the `n x n` board".
pub fn encode_domination(board: &Board, gamma: usize, cfg: &EncodingConfig) -> Result<CnfFormula> {
    let mut f = CnfFormula::new(board.num_squares() as u32);
    add_domination_clauses(&mut f, board)?;
    let ordered: Vec<Lit> = order_literals(board, cfg.order)
        .into_iter()
        .map(|s| Lit::pos(s as u32))
        .collect();
    let enc = CardinalityEncoder::new(cfg.card, gamma).with_modulus(cfg.modulus);
    encode_at_most_k(&mut f, &ordered, &enc)?;
    if cfg.symmetry {
        add_symmetry_breaking(&mut f, board)?;
    }
    Ok(f)
}

/// Queen squares set to true in a model.
pub fn decode_queens(board: &Board, model: &[bool]) -> Vec<usize> {
    board
        .squares()
        .filter(|&s| model.get(s).copied().unwrap_or(false))
        .collect()
}
