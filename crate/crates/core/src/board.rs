//! Board geometry: squares, knight moves and the dihedral symmetries of a
//! square board.
//!
//! Squares are addressed as `(file, rank)` with both coordinates zero-based.
//! Internally a square also has a dense index `file * side + rank`, which is
//! what the bitboard tables use. Boards are limited to `side <= 8` so that a
//! set of squares fits in one `u64`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest supported board edge.
pub const MIN_SIDE: usize = 3;
/// Largest supported board edge (one bit per square in a `u64`).
pub const MAX_SIDE: usize = 8;

const KNIGHT_OFFSETS: [(i32, i32); 8] = [
    (-2, -1),
    (-2, 1),
    (-1, -2),
    (-1, 2),
    (1, -2),
    (1, 2),
    (2, -1),
    (2, 1),
];

/// A square given by zero-based file and rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Square {
    pub file: u8,
    pub rank: u8,
}

impl Square {
    pub const fn new(file: u8, rank: u8) -> Self {
        Square { file, rank }
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.file, self.rank)
    }
}

impl std::str::FromStr for Square {
    type Err = Error;

    /// Parses `"f,r"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSquare(s.to_string());
        let (f, r) = s.split_once(',').ok_or_else(bad)?;
        let file = f.trim().parse().map_err(|_| bad())?;
        let rank = r.trim().parse().map_err(|_| bad())?;
        Ok(Square { file, rank })
    }
}

/// A set of squares of one board, one bit per dense square index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct SquareSet(pub u64);

impl SquareSet {
    pub const EMPTY: SquareSet = SquareSet(0);

    #[inline]
    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    #[inline]
    pub fn remove(&mut self, index: usize) {
        self.0 &= !(1 << index);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Dense indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// An `n x n` board with its knight graph precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Board {
    side: usize,
    /// Knight-move mask per dense index.
    adjacency: Vec<u64>,
    /// Knight-move targets per dense index, sorted by (file, rank).
    neighbors: Vec<Vec<u8>>,
}

impl Board {
    pub fn new(side: usize) -> Result<Self> {
        if !(MIN_SIDE..=MAX_SIDE).contains(&side) {
            return Err(Error::InvalidSide(side));
        }
        let cells = side * side;
        let mut adjacency = vec![0u64; cells];
        let mut neighbors = vec![Vec::with_capacity(8); cells];
        for file in 0..side {
            for rank in 0..side {
                let from = file * side + rank;
                // Offsets are listed in (file, rank) order, so the pushes
                // come out sorted.
                for (df, dr) in KNIGHT_OFFSETS {
                    let (f, r) = (file as i32 + df, rank as i32 + dr);
                    if f >= 0 && r >= 0 && (f as usize) < side && (r as usize) < side {
                        let to = f as usize * side + r as usize;
                        adjacency[from] |= 1 << to;
                        neighbors[from].push(to as u8);
                    }
                }
            }
        }
        Ok(Board {
            side,
            adjacency,
            neighbors,
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn square_count(&self) -> usize {
        self.side * self.side
    }

    /// Every square of the board.
    pub fn full(&self) -> SquareSet {
        let n = self.square_count();
        SquareSet(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn contains(&self, sq: Square) -> bool {
        (sq.file as usize) < self.side && (sq.rank as usize) < self.side
    }

    pub fn check(&self, sq: Square) -> Result<()> {
        if self.contains(sq) {
            Ok(())
        } else {
            Err(Error::OffBoard {
                square: sq,
                side: self.side,
            })
        }
    }

    #[inline]
    pub fn index(&self, sq: Square) -> usize {
        sq.file as usize * self.side + sq.rank as usize
    }

    #[inline]
    pub fn square(&self, index: usize) -> Square {
        Square::new((index / self.side) as u8, (index % self.side) as u8)
    }

    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        (0..self.square_count()).map(move |i| self.square(i))
    }

    /// Knight-move mask of the square with dense index `index`.
    #[inline]
    pub fn adjacency(&self, index: usize) -> u64 {
        self.adjacency[index]
    }

    #[inline]
    pub fn neighbor_indices(&self, index: usize) -> &[u8] {
        &self.neighbors[index]
    }

    /// Squares a knight reaches from `from`, sorted by file then rank.
    pub fn knight_moves(&self, from: Square) -> Result<Vec<Square>> {
        self.check(from)?;
        Ok(self.neighbors[self.index(from)]
            .iter()
            .map(|&i| self.square(i as usize))
            .collect())
    }

    pub fn apply(&self, t: Symmetry, sq: Square) -> Square {
        t.apply(self.side, sq)
    }

    /// One class per orbit of the symmetry group, ordered by representative.
    pub fn start_classes(&self) -> Vec<StartClass> {
        let mut seen = SquareSet::EMPTY;
        let mut classes = Vec::new();
        for sq in self.squares() {
            if seen.contains(self.index(sq)) {
                continue;
            }
            let mut orbit = SquareSet::EMPTY;
            for t in Symmetry::ALL {
                orbit.insert(self.index(self.apply(t, sq)));
            }
            seen.0 |= orbit.0;
            // Squares are visited in (file, rank) order, so the first unseen
            // member of an orbit is its smallest.
            classes.push(StartClass {
                representative: sq,
                multiplicity: orbit.len() as u32,
            });
        }
        classes
    }
}

/// An orbit of squares under the board symmetries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StartClass {
    pub representative: Square,
    pub multiplicity: u32,
}

/// The eight symmetries of a square board.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symmetry {
    Identity,
    Rotate90,
    Rotate180,
    Rotate270,
    /// `(f, r) -> (n-1-f, r)`
    MirrorFiles,
    /// `(f, r) -> (f, n-1-r)`
    MirrorRanks,
    /// `(f, r) -> (r, f)`
    Diagonal,
    /// `(f, r) -> (n-1-r, n-1-f)`
    AntiDiagonal,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rotate90,
        Symmetry::Rotate180,
        Symmetry::Rotate270,
        Symmetry::MirrorFiles,
        Symmetry::MirrorRanks,
        Symmetry::Diagonal,
        Symmetry::AntiDiagonal,
    ];

    /// Action on centred coordinates `(2f - (n-1), 2r - (n-1))` as an
    /// orthogonal integer matrix `[[a, b], [c, d]]`.
    const fn matrix(self) -> [[i32; 2]; 2] {
        match self {
            Symmetry::Identity => [[1, 0], [0, 1]],
            Symmetry::Rotate90 => [[0, 1], [-1, 0]],
            Symmetry::Rotate180 => [[-1, 0], [0, -1]],
            Symmetry::Rotate270 => [[0, -1], [1, 0]],
            Symmetry::MirrorFiles => [[-1, 0], [0, 1]],
            Symmetry::MirrorRanks => [[1, 0], [0, -1]],
            Symmetry::Diagonal => [[0, 1], [1, 0]],
            Symmetry::AntiDiagonal => [[0, -1], [-1, 0]],
        }
    }

    fn from_matrix(m: [[i32; 2]; 2]) -> Symmetry {
        Symmetry::ALL
            .into_iter()
            .find(|t| t.matrix() == m)
            .expect("orthogonal signed permutation matrices are exactly the 8 symmetries")
    }

    pub fn apply(self, side: usize, sq: Square) -> Square {
        let n = side as i32 - 1;
        let x = 2 * sq.file as i32 - n;
        let y = 2 * sq.rank as i32 - n;
        let [[a, b], [c, d]] = self.matrix();
        let (x2, y2) = (a * x + b * y, c * x + d * y);
        Square::new(((x2 + n) / 2) as u8, ((y2 + n) / 2) as u8)
    }

    /// `self.then(other)` applies `self` first, then `other`.
    pub fn then(self, other: Symmetry) -> Symmetry {
        let p = other.matrix();
        let q = self.matrix();
        let mut m = [[0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = p[i][0] * q[0][j] + p[i][1] * q[1][j];
            }
        }
        Symmetry::from_matrix(m)
    }

    pub fn inverse(self) -> Symmetry {
        let [[a, b], [c, d]] = self.matrix();
        Symmetry::from_matrix([[a, c], [b, d]])
    }
}
