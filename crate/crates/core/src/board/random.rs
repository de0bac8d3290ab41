use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::position::Position;
use super::types::GameStatus;

/// A position reached from the start by uniformly random legal moves.
///
/// The ply count is drawn uniformly from `min_plies..=max_plies`. Playouts that
/// end in a terminal position are discarded and redrawn from the same
/// generator, so the result is always ongoing and depends only on `seed`.
pub fn random_position(seed: u64, min_plies: u32, max_plies: u32) -> Position {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_position_with(&mut rng, min_plies, max_plies)
}

pub fn random_position_with<R: Rng>(rng: &mut R, min_plies: u32, max_plies: u32) -> Position {
    assert!(
        min_plies <= max_plies,
        "min_plies must not exceed max_plies"
    );
    'attempt: loop {
        let plies = rng.gen_range(min_plies..=max_plies);
        let mut pos = Position::startpos();
        for _ in 0..plies {
            let moves = pos.legal_moves();
            if moves.is_empty() {
                continue 'attempt;
            }
            let m = moves[rng.gen_range(0..moves.len())];
            pos = pos.make_move_unchecked(m);
        }
        if pos.status() == GameStatus::Ongoing {
            return pos;
        }
    }
}
