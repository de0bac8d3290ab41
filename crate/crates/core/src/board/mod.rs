//! Chess rules: positions, FEN, legal move generation and perft.

mod attacks;
mod fen;
mod movegen;
mod position;
mod random;
mod types;

use thiserror::Error;

pub use attacks::{bishop as bishop_attacks, king as king_attacks, knight as knight_attacks};
pub use attacks::{pawn as pawn_attacks, queen as queen_attacks, rook as rook_attacks};
pub use fen::STARTPOS_FEN;
pub use position::Position;
pub use random::{random_position, random_position_with};
pub use types::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    /// `field` is 1-based; 0 means the field count itself was wrong.
    #[error("FEN field {field}: {reason}")]
    Fen { field: usize, reason: String },
    #[error("illegal move {mv}: {reason}")]
    IllegalMove { mv: String, reason: String },
}
