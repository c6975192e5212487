//! Shared fixtures for the benchmarks.

use ktour_core::{Alpha, Board, Sampler, ViolationMin};

/// The calibrated sampler on a board of the given side.
pub fn sampler(side: usize, alpha: f64) -> Sampler {
    let board = Board::new(side).expect("benchmark boards are valid");
    Sampler::new(board, Alpha::Finite(alpha), ViolationMin::All)
}
