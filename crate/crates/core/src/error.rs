use thiserror::Error;

use crate::board::Square;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("board side {0} is outside the supported range 3..=8")]
    InvalidSide(usize),
    #[error("square {square} is not on a {side}x{side} board")]
    OffBoard { square: Square, side: usize },
    #[error("cannot parse square {0:?}, expected \"file,rank\"")]
    InvalidSquare(String),
    #[error("exact enumeration infeasible: side {side} exceeds the limit {limit}")]
    ExactInfeasible { side: usize, limit: usize },
    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),
    #[error("batches disagree on {0}")]
    MismatchedBatches(&'static str),
    #[error("conversion to geometric tours on a {0}x{0} board needs an explicit trivial-stabilizer assumption")]
    StabilizerAssumption(usize),
}
