//! Encoder x ordering benchmark on the unsatisfiable `gamma - 1` instance,
//! without symmetry breaking or cubes.

use std::fmt::Write as _;
use std::time::Instant;

use qdom_core::encode::{encode_domination, EncodingConfig};
use qdom_core::sat::Backend;
use qdom_core::{Board, CardinalityKind, OrderingStrategy, SolveStatus};

use crate::backend::SolverChoice;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub queens: usize,
    pub card: CardinalityKind,
    pub order: OrderingStrategy,
    pub status: SolveStatus,
    pub seconds: f64,
    pub vars: u32,
    pub clauses: usize,
    pub diagnostic: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("gamma must be at least 1")]
    ZeroGamma,
    #[error(transparent)]
    Encoding(#[from] qdom_core::Error),
    #[error(transparent)]
    Integrity(#[from] qdom_core::sat::IntegrityError),
}

/// Times one `(card, order)` cell on `gamma - 1` queens.
pub fn bench_one(
    board: &Board,
    gamma: usize,
    card: CardinalityKind,
    order: OrderingStrategy,
    modulus: Option<u32>,
    solver: &SolverChoice,
) -> Result<BenchRow, BenchError> {
    if gamma == 0 {
        return Err(BenchError::ZeroGamma);
    }
    let queens = gamma - 1;
    let mut cfg = EncodingConfig::new(card, order, false);
    cfg.modulus = modulus;
    let f = encode_domination(board, queens, &cfg)?;
    let start = Instant::now();
    let mut b = solver.make();
    b.add_formula(&f);
    let r = b.solve(&[])?;
    Ok(BenchRow {
        n: board.n(),
        queens,
        card,
        order,
        status: r.status,
        seconds: start.elapsed().as_secs_f64(),
        vars: f.num_vars(),
        clauses: f.num_clauses(),
        diagnostic: r.diagnostic,
    })
}

/// Every combination of `cards` and `orders` for one board.
pub fn bench_grid(
    board: &Board,
    gamma: usize,
    cards: &[CardinalityKind],
    orders: &[OrderingStrategy],
    modulus: Option<u32>,
    solver: &SolverChoice,
) -> Result<Vec<BenchRow>, BenchError> {
    let mut rows = Vec::with_capacity(cards.len() * orders.len());
    for &card in cards {
        for &order in orders {
            rows.push(bench_one(board, gamma, card, order, modulus, solver)?);
        }
    }
    Ok(rows)
}

pub const BENCH_HEADER: &str = "n\tqueens\tcard\torder\tstatus\tseconds\tvars\tclauses\n";

pub fn bench_tsv_row(r: &BenchRow) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}\t{:.3}\t{}\t{}",
        r.n,
        r.queens,
        r.card.name(),
        r.order.name(),
        r.status,
        r.seconds,
        r.vars,
        r.clauses
    );
    out
}

pub fn bench_tsv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_HEADER);
    for r in rows {
        out.push_str(&bench_tsv_row(r));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_by_five_grid_is_unsat() {
        let b = Board::new(5).unwrap();
        let orders = [OrderingStrategy::Default, OrderingStrategy::Hilbert];
        let rows = bench_grid(
            &b,
            3,
            &CardinalityKind::ALL,
            &orders,
            None,
            &SolverChoice::embedded(),
        )
        .unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows
            .iter()
            .all(|r| r.status == SolveStatus::Unsat && r.queens == 2));
        let tsv = bench_tsv(&rows);
        assert_eq!(tsv.lines().count(), 7);
        assert!(tsv
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("5\t2\tseqcard\tdefault\tunsat\t"));
    }

    #[test]
    fn zero_gamma_rejected() {
        let b = Board::new(3).unwrap();
        let r = bench_one(
            &b,
            0,
            CardinalityKind::SeqCard,
            OrderingStrategy::Default,
            None,
            &SolverChoice::embedded(),
        );
        assert!(matches!(r, Err(BenchError::ZeroGamma)));
    }
}
