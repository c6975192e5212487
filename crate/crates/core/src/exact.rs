//! Exact tour counts by backtracking, for boards small enough to enumerate.
//!
//! Searches use two pruning rules that never discard a completion: an
//! unvisited square that can no longer be entered and left is fatal, and an
//! open path may strand at most one square as its final endpoint.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::board::{Board, Square, SquareSet};
use crate::error::{Error, Result};
use crate::sampler::ViolationMin;

pub const DEFAULT_EXACT_LIMIT: usize = 6;

/// Largest side for which the violation histogram is enumerated.
pub const HISTOGRAM_LIMIT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TourKind {
    /// Directed Hamiltonian paths.
    OpenNumbering,
    /// Directed Hamiltonian paths whose ends are a knight move apart.
    ClosedNumbering,
    /// Undirected Hamiltonian cycles.
    ClosedDiagram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCount {
    pub board_side: usize,
    pub kind: TourKind,
    pub start: Option<Square>,
    pub value: u64,
}

#[derive(Debug, Clone)]
pub struct ExactEnumerator<'a> {
    board: &'a Board,
    limit: usize,
}

impl<'a> ExactEnumerator<'a> {
    pub fn new(board: &'a Board) -> Self {
        ExactEnumerator {
            board,
            limit: DEFAULT_EXACT_LIMIT,
        }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    fn guard(&self, limit: usize) -> Result<()> {
        if self.board.side() > limit {
            Err(Error::ExactInfeasible {
                side: self.board.side(),
                limit,
            })
        } else {
            Ok(())
        }
    }

    fn start_state(&self, start: Square) -> Result<(usize, u64)> {
        self.board.check(start)?;
        let head = self.board.index(start);
        let mut free = self.board.full();
        free.remove(head);
        Ok((head, free.0))
    }

    /// Directed open tours beginning at `start`.
    pub fn count_open_numberings_from(&self, start: Square) -> Result<u64> {
        self.guard(self.limit)?;
        let (head, free) = self.start_state(start)?;
        Ok(self.split_first_move(head, free, None))
    }

    /// Directed open tours over all start squares.
    pub fn count_open_numberings(&self) -> Result<u64> {
        self.guard(self.limit)?;
        self.board
            .start_classes()
            .par_iter()
            .map(|c| {
                self.count_open_numberings_from(c.representative)
                    .map(|n| n * c.multiplicity as u64)
            })
            .sum()
    }

    /// Directed open tours from `start` that end a knight move from `start`.
    pub fn count_closed_numberings_from(&self, start: Square) -> Result<u64> {
        self.guard(self.limit)?;
        let (head, free) = self.start_state(start)?;
        Ok(self.split_first_move(head, free, Some(head)))
    }

    /// Undirected knight cycles. Every cycle passes through the corner in
    /// both directions, so this is half the closed numberings from (0, 0).
    pub fn count_closed_diagrams(&self) -> Result<u64> {
        Ok(self.count_closed_numberings_from(Square::new(0, 0))? / 2)
    }

    pub fn count(&self, kind: TourKind, start: Option<Square>) -> Result<ExactCount> {
        let value = match (kind, start) {
            (TourKind::OpenNumbering, Some(s)) => self.count_open_numberings_from(s)?,
            (TourKind::OpenNumbering, None) => self.count_open_numberings()?,
            (TourKind::ClosedNumbering, s) => {
                self.count_closed_numberings_from(s.unwrap_or(Square::new(0, 0)))?
            }
            (TourKind::ClosedDiagram, _) => self.count_closed_diagrams()?,
        };
        Ok(ExactCount {
            board_side: self.board.side(),
            kind,
            start,
            value,
        })
    }

    /// Number of open numberings per count of Warnsdorff-rule violations.
    ///
    /// A step violates the rule when the chosen square has more free
    /// continuations than the fewest among the candidates (all legal
    /// candidates, or only the viable ones, per `min_over`).
    pub fn violation_histogram(&self, min_over: ViolationMin) -> Result<BTreeMap<u32, u64>> {
        self.guard(self.limit.min(HISTOGRAM_LIMIT))?;
        let mut hist = BTreeMap::new();
        for sq in self.board.squares() {
            let (head, free) = self.start_state(sq)?;
            self.histogram_walk(head, free, 0, min_over, &mut hist);
        }
        Ok(hist)
    }

    fn split_first_move(&self, head: usize, free: u64, target: Option<usize>) -> u64 {
        if free == 0 {
            return 1;
        }
        let moves = SquareSet(self.board.adjacency(head) & free);
        moves
            .indices()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|j| self.search(j, free & !(1 << j), target))
            .sum()
    }

    fn search(&self, head: usize, free: u64, target: Option<usize>) -> u64 {
        if free == 0 {
            return match target {
                Some(t) => self.board.adjacency(head) >> t & 1,
                None => 1,
            };
        }
        if !self.feasible(head, free, target) {
            return 0;
        }
        let mut moves = self.board.adjacency(head) & free;
        let mut total = 0;
        while moves != 0 {
            let j = moves.trailing_zeros() as usize;
            moves &= moves - 1;
            total += self.search(j, free & !(1 << j), target);
        }
        total
    }

    /// Necessary conditions for `free` (non-empty) to be covered by a path
    /// leaving `head`, and ending next to `target` when one is given.
    fn feasible(&self, head: usize, free: u64, target: Option<usize>) -> bool {
        let head_adj = self.board.adjacency(head);
        let target_bit = target.map_or(0, |t| 1u64 << t);
        if let Some(t) = target {
            if self.board.adjacency(t) & free == 0 {
                return false;
            }
        }
        let avail = free | target_bit;
        let single = free.count_ones() == 1;
        let mut stranded = 0;
        for u in SquareSet(free).indices() {
            let degree = (self.board.adjacency(u) & avail).count_ones();
            let near_head = head_adj >> u & 1 == 1;
            if target.is_some() {
                if degree < if near_head { 1 } else { 2 } {
                    return false;
                }
            } else if near_head {
                if degree == 0 && !single {
                    return false;
                }
            } else {
                match degree {
                    0 => return false,
                    1 => {
                        stranded += 1;
                        if stranded > 1 {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn histogram_walk(
        &self,
        head: usize,
        free: u64,
        violations: u32,
        min_over: ViolationMin,
        hist: &mut BTreeMap<u32, u64>,
    ) {
        if free == 0 {
            *hist.entry(violations).or_insert(0) += 1;
            return;
        }
        let last_step = free.count_ones() == 1;
        let candidates: Vec<(usize, u32)> = SquareSet(self.board.adjacency(head) & free)
            .indices()
            .map(|j| (j, (self.board.adjacency(j) & free).count_ones()))
            .collect();
        let min_degree = candidates
            .iter()
            .filter(|&&(_, d)| min_over == ViolationMin::All || d >= 1 || last_step)
            .map(|&(_, d)| d)
            .min();
        for &(j, d) in &candidates {
            let extra = min_degree.is_some_and(|m| d > m) as u32;
            self.histogram_walk(j, free & !(1 << j), violations + extra, min_over, hist);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Unpruned depth-first count, the reference for the pruned search.
    fn brute_force(board: &Board, head: usize, free: u64, target: Option<usize>) -> u64 {
        if free == 0 {
            return target.map_or(1, |t| board.adjacency(head) >> t & 1);
        }
        SquareSet(board.adjacency(head) & free)
            .indices()
            .map(|j| brute_force(board, j, free & !(1 << j), target))
            .sum()
    }

    fn brute_from(board: &Board, start: Square, closed: bool) -> u64 {
        let head = board.index(start);
        let mut free = board.full();
        free.remove(head);
        brute_force(board, head, free.0, closed.then_some(head))
    }

    #[test]
    fn three_by_three_has_no_tours() {
        let b = Board::new(3).unwrap();
        let e = ExactEnumerator::new(&b);
        assert_eq!(e.count_open_numberings_from(Square::new(0, 0)).unwrap(), 0);
        assert_eq!(e.count_open_numberings().unwrap(), 0);
        assert!(e.violation_histogram(ViolationMin::All).unwrap().is_empty());
    }

    #[test]
    fn four_by_four_matches_brute_force_zero() {
        let b = Board::new(4).unwrap();
        let e = ExactEnumerator::new(&b);
        for s in b.squares() {
            assert_eq!(brute_from(&b, s, false), 0);
            assert_eq!(e.count_open_numberings_from(s).unwrap(), 0);
        }
        assert_eq!(e.count_open_numberings().unwrap(), 0);
        assert_eq!(e.count_closed_diagrams().unwrap(), 0);
    }

    #[test]
    fn pruned_search_matches_brute_force_on_five() {
        let b = Board::new(5).unwrap();
        let e = ExactEnumerator::new(&b);
        let mut total = 0;
        for s in b.squares() {
            let expected = brute_from(&b, s, false);
            assert_eq!(e.count_open_numberings_from(s).unwrap(), expected, "{s}");
            assert_eq!(e.count_closed_numberings_from(s).unwrap(), brute_from(&b, s, true));
            total += expected;
        }
        assert_eq!(total, 1728);
        assert_eq!(e.count_open_numberings().unwrap(), 1728);
    }

    #[test]
    fn odd_boards_have_no_closed_tours() {
        for side in [3, 5] {
            let b = Board::new(side).unwrap();
            assert_eq!(ExactEnumerator::new(&b).count_closed_diagrams().unwrap(), 0);
        }
    }

    #[test]
    fn guard_refuses_large_boards() {
        let b = Board::new(7).unwrap();
        let e = ExactEnumerator::new(&b);
        assert!(matches!(
            e.count_open_numberings(),
            Err(Error::ExactInfeasible { side: 7, limit: 6 })
        ));
        let b6 = Board::new(6).unwrap();
        assert!(ExactEnumerator::new(&b6)
            .with_limit(5)
            .count_closed_diagrams()
            .is_err());
        assert!(ExactEnumerator::new(&b6)
            .violation_histogram(ViolationMin::All)
            .is_err());
    }

    #[test]
    fn histogram_partitions_numberings() {
        let b = Board::new(5).unwrap();
        let e = ExactEnumerator::new(&b);
        for mode in [ViolationMin::All, ViolationMin::Viable] {
            let hist = e.violation_histogram(mode).unwrap();
            assert_eq!(hist.values().sum::<u64>(), 1728);
            assert!(hist.get(&0).copied().unwrap_or(0) >= 1);
            assert!(hist.keys().all(|&k| k <= 23));
        }
    }

    #[test]
    fn closed_count_independent_of_start_on_six_corner_and_center() {
        // Light check; the full 6x6 oracle lives in the acceptance suite.
        let b = Board::new(6).unwrap();
        let e = ExactEnumerator::new(&b);
        let corner = e.count_closed_numberings_from(Square::new(0, 0)).unwrap();
        let inner = e.count_closed_numberings_from(Square::new(2, 3)).unwrap();
        assert_eq!(corner, inner);
    }
}
