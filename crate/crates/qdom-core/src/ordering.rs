//! Literal orderings: permutations of the squares `1..=n*n` that fix the
//! sequence in which queen variables are fed to a cardinality encoder.
//! Variable numbering is never changed.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::board::Board;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderingStrategy {
    /// Row-major declaration order.
    Default,
    /// Fisher-Yates shuffle driven by ChaCha8 seeded via `seed_from_u64`.
    Random { seed: u64 },
    /// Decreasing clause frequency, i.e. `|N(i)|` descending.
    Occurrence,
    /// Ascending Hilbert-curve rank.
    Hilbert,
}

impl OrderingStrategy {
    pub fn order(&self, board: &Board) -> Vec<usize> {
        order_literals(board, *self)
    }

    pub fn name(&self) -> &'static str {
        match self {
            OrderingStrategy::Default => "default",
            OrderingStrategy::Random { .. } => "random",
            OrderingStrategy::Occurrence => "occurrence",
            OrderingStrategy::Hilbert => "hilbert",
        }
    }
}

impl fmt::Display for OrderingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrderingStrategy {
    type Err = &'static str;

    /// Parses the CLI value names; `random` gets seed 0 until overridden.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "default" => Ok(OrderingStrategy::Default),
            "random" => Ok(OrderingStrategy::Random { seed: 0 }),
            "occurrence" => Ok(OrderingStrategy::Occurrence),
            "hilbert" => Ok(OrderingStrategy::Hilbert),
            _ => Err("expected one of default, random, occurrence, hilbert"),
        }
    }
}

/// Permutation of `1..=n*n` produced by `strategy`. Ties always break by
/// ascending square index.
pub fn order_literals(board: &Board, strategy: OrderingStrategy) -> Vec<usize> {
    let mut squares: Vec<usize> = board.squares().collect();
    match strategy {
        OrderingStrategy::Default => {}
        OrderingStrategy::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            squares.shuffle(&mut rng);
        }
        OrderingStrategy::Occurrence => {
            let freq = occurrence_counts(board);
            squares.sort_by_key(|&s| (core::cmp::Reverse(freq[s - 1]), s));
        }
        OrderingStrategy::Hilbert => {
            squares.sort_by_cached_key(|&s| (board.hilbert_rank(s).expect("valid square"), s));
        }
    }
    squares
}

/// Number of domination clauses mentioning each square, which equals
/// `|N(i)|` since attack is symmetric. Indexed by `square - 1`.
pub fn occurrence_counts(board: &Board) -> Vec<usize> {
    board
        .squares()
        .map(|s| board.neighborhood(s).expect("valid square").len())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Symmetry;
    use proptest::prelude::*;

    #[test]
    fn default_is_identity() {
        let b = Board::new(3).unwrap();
        assert_eq!(
            order_literals(&b, OrderingStrategy::Default),
            (1..=9).collect::<Vec<_>>()
        );
    }

    #[test]
    fn occurrence_center_first_on_five() {
        let b = Board::new(5).unwrap();
        let counts = occurrence_counts(&b);
        let max = *counts.iter().max().unwrap();
        assert_eq!(counts.iter().filter(|&&c| c == max).count(), 1);
        assert_eq!(counts[12], max);
        assert_eq!(order_literals(&b, OrderingStrategy::Occurrence)[0], 13);
    }

    #[test]
    fn occurrence_is_non_increasing() {
        for n in 1..=10 {
            let b = Board::new(n).unwrap();
            let counts = occurrence_counts(&b);
            let order = order_literals(&b, OrderingStrategy::Occurrence);
            for w in order.windows(2) {
                let (a, c) = (counts[w[0] - 1], counts[w[1] - 1]);
                assert!(a > c || (a == c && w[0] < w[1]));
            }
            // neighborhood size is a symmetry invariant
            for s in b.squares() {
                for t in Symmetry::ALL {
                    assert_eq!(counts[s - 1], counts[b.apply_symmetry(t, s).unwrap() - 1]);
                }
            }
        }
    }

    #[test]
    fn hilbert_consecutive_are_adjacent_on_four() {
        let b = Board::new(4).unwrap();
        let order = order_literals(&b, OrderingStrategy::Hilbert);
        assert_eq!(order[0], 1);
        for w in order.windows(2) {
            let (r0, c0) = b.coords(w[0]).unwrap();
            let (r1, c1) = b.coords(w[1]).unwrap();
            assert_eq!(r0.abs_diff(r1) + c0.abs_diff(c1), 1);
        }
    }

    #[test]
    fn random_is_seeded() {
        let b = Board::new(6).unwrap();
        let a = order_literals(&b, OrderingStrategy::Random { seed: 7 });
        assert_eq!(a, order_literals(&b, OrderingStrategy::Random { seed: 7 }));
        assert_ne!(a, order_literals(&b, OrderingStrategy::Random { seed: 8 }));
    }

    #[test]
    fn parse_names() {
        assert_eq!("hilbert".parse(), Ok(OrderingStrategy::Hilbert));
        assert!("zorder".parse::<OrderingStrategy>().is_err());
    }

    proptest! {
        #[test]
        fn always_a_permutation(n in 1usize..14, kind in 0usize..4, seed: u64) {
            let b = Board::new(n).unwrap();
            let strategy = [
                OrderingStrategy::Default,
                OrderingStrategy::Random { seed },
                OrderingStrategy::Occurrence,
                OrderingStrategy::Hilbert,
            ][kind];
            let mut order = order_literals(&b, strategy);
            order.sort_unstable();
            prop_assert_eq!(order, (1..=n * n).collect::<Vec<_>>());
        }
    }
}
