//! Board geometry: square indexing, queen neighborhoods, the dihedral
//! symmetry group of the square and Hilbert-curve ranks.
//!
//! Squares are numbered `1..=n*n` in row-major order with 0-based
//! coordinates, so `(r, c)` is square `r * n + c + 1`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Board {
    n: usize,
}

impl Board {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyBoard);
        }
        Ok(Board { n })
    }

    /// Side length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_squares(&self) -> usize {
        self.n * self.n
    }

    pub fn squares(&self) -> core::ops::RangeInclusive<usize> {
        1..=self.num_squares()
    }

    pub fn check(&self, square: usize) -> Result<()> {
        if square == 0 || square > self.num_squares() {
            return Err(Error::SquareOutOfRange {
                square,
                max: self.num_squares(),
            });
        }
        Ok(())
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.n && col < self.n);
        row * self.n + col + 1
    }

    pub fn coords(&self, square: usize) -> Result<(usize, usize)> {
        self.check(square)?;
        Ok(((square - 1) / self.n, (square - 1) % self.n))
    }

    /// `true` when a queen on `a` attacks `b` or `a == b`.
    pub fn covers(&self, a: usize, b: usize) -> Result<bool> {
        let (ra, ca) = self.coords(a)?;
        let (rb, cb) = self.coords(b)?;
        Ok(ra == rb || ca == cb || ra + cb == rb + ca || ra + ca == rb + cb)
    }

    /// Inclusive queen neighborhood `N(i)`: the square itself plus every
    /// square sharing its row, column, diagonal or anti-diagonal.
    pub fn neighborhood(&self, square: usize) -> Result<SquareSet> {
        self.check(square)?;
        let mut out = Vec::new();
        for other in self.squares() {
            if self.covers(square, other)? {
                out.push(other);
            }
        }
        Ok(SquareSet(out))
    }

    /// Image of `square` under `t`.
    pub fn apply_symmetry(&self, t: Symmetry, square: usize) -> Result<usize> {
        let (r, c) = self.coords(square)?;
        let (r, c) = t.map_coords(self.n, r, c);
        Ok(self.index(r, c))
    }

    /// Image of a whole placement under `t`.
    pub fn transform_set(&self, t: Symmetry, set: &SquareSet) -> Result<SquareSet> {
        let mut out = set
            .iter()
            .map(|s| self.apply_symmetry(t, s))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        Ok(SquareSet(out))
    }

    /// Distinct images of `set` under the eight symmetries.
    pub fn orbit(&self, set: &SquareSet) -> Result<BTreeSet<SquareSet>> {
        Symmetry::ALL
            .iter()
            .map(|&t| self.transform_set(t, set))
            .collect()
    }

    /// Side of the smallest power-of-two grid containing the board.
    pub fn hilbert_side(&self) -> usize {
        self.n.next_power_of_two()
    }

    /// Position of `square` along the Hilbert curve covering the enclosing
    /// power-of-two grid. Rank 0 sits at `(0, 0)`.
    pub fn hilbert_rank(&self, square: usize) -> Result<u64> {
        let (r, c) = self.coords(square)?;
        Ok(hilbert_xy_to_rank(
            self.hilbert_side() as u64,
            c as u64,
            r as u64,
        ))
    }
}

/// Classic iterative `(x, y) -> d` conversion with quadrant rotation.
/// `side` must be a power of two.
pub fn hilbert_xy_to_rank(side: u64, mut x: u64, mut y: u64) -> u64 {
    let mut d = 0;
    let mut s = side / 2;
    while s > 0 {
        let rx = u64::from(x & s > 0);
        let ry = u64::from(y & s > 0);
        d += s * s * ((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = side - 1 - x;
                y = side - 1 - y;
            }
            core::mem::swap(&mut x, &mut y);
        }
        s /= 2;
    }
    d
}

/// A placement of queens: strictly increasing square indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareSet(Vec<usize>);

impl SquareSet {
    /// Validates sortedness and range against `board`.
    pub fn new(board: &Board, squares: Vec<usize>) -> Result<Self> {
        if squares.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedSquares);
        }
        for &s in &squares {
            board.check(s)?;
        }
        Ok(SquareSet(squares))
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(board: &Board, mut squares: Vec<usize>) -> Result<Self> {
        squares.sort_unstable();
        squares.dedup();
        Self::new(board, squares)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, square: usize) -> bool {
        self.0.binary_search(&square).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for SquareSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

/// The eight symmetries of the square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symmetry {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    /// Reflection across the horizontal axis (rows reversed).
    FlipH,
    /// Reflection across the vertical axis (columns reversed).
    FlipV,
    FlipMainDiag,
    FlipAntiDiag,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rot90,
        Symmetry::Rot180,
        Symmetry::Rot270,
        Symmetry::FlipH,
        Symmetry::FlipV,
        Symmetry::FlipMainDiag,
        Symmetry::FlipAntiDiag,
    ];

    pub const NONTRIVIAL: [Symmetry; 7] = [
        Symmetry::Rot90,
        Symmetry::Rot180,
        Symmetry::Rot270,
        Symmetry::FlipH,
        Symmetry::FlipV,
        Symmetry::FlipMainDiag,
        Symmetry::FlipAntiDiag,
    ];

    pub fn map_coords(self, n: usize, r: usize, c: usize) -> (usize, usize) {
        let m = n - 1;
        match self {
            Symmetry::Identity => (r, c),
            Symmetry::Rot90 => (c, m - r),
            Symmetry::Rot180 => (m - r, m - c),
            Symmetry::Rot270 => (m - c, r),
            Symmetry::FlipH => (m - r, c),
            Symmetry::FlipV => (r, m - c),
            Symmetry::FlipMainDiag => (c, r),
            Symmetry::FlipAntiDiag => (m - c, m - r),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Symmetry) -> Symmetry {
        // (0, 1) on a 5x5 board has a trivial stabilizer, so its image
        // identifies the group element.
        let (r, c) = other.map_coords(5, 0, 1);
        let target = self.map_coords(5, r, c);
        Symmetry::ALL
            .into_iter()
            .find(|t| t.map_coords(5, 0, 1) == target)
            .expect("dihedral group is closed")
    }

    pub fn inverse(self) -> Symmetry {
        match self {
            Symmetry::Rot90 => Symmetry::Rot270,
            Symmetry::Rot270 => Symmetry::Rot90,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Identity => "identity",
            Symmetry::Rot90 => "rot90",
            Symmetry::Rot180 => "rot180",
            Symmetry::Rot270 => "rot270",
            Symmetry::FlipH => "flipH",
            Symmetry::FlipV => "flipV",
            Symmetry::FlipMainDiag => "flipMainDiag",
            Symmetry::FlipAntiDiag => "flipAntiDiag",
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
