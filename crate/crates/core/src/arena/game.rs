//! Fixed-depth games between two parameter sets.

use std::collections::HashMap;

use super::ArenaError;
use crate::board::{Color, GameStatus, Move, Position};
use crate::eval::EvalParams;
use crate::search::alphabeta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameResult {
    WhiteWin,
    BlackWin,
    Draw,
}

impl GameResult {
    pub fn as_str(self) -> &'static str {
        match self {
            GameResult::WhiteWin => "1-0",
            GameResult::BlackWin => "0-1",
            GameResult::Draw => "1/2-1/2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameRecord {
    pub opening: Position,
    pub moves: Vec<Move>,
    pub result: GameResult,
    pub termination: GameStatus,
}

impl GameRecord {
    pub fn plies(&self) -> usize {
        self.moves.len()
    }

    /// Replays the moves legally and returns the final position.
    pub fn replay(&self) -> Result<Position, ArenaError> {
        let mut p = self.opening;
        for m in &self.moves {
            p = p.apply_move(*m)?;
        }
        Ok(p)
    }
}

/// Plays one game. Both sides pick `alphabeta` moves at `depth`; the game
/// ends on mate, stalemate, insufficient material, the fifty-move rule,
/// threefold repetition or after `max_plies` plies.
pub fn play_game(
    white: &EvalParams,
    black: &EvalParams,
    depth: u32,
    opening: &Position,
    max_plies: usize,
) -> Result<GameRecord, ArenaError> {
    if depth == 0 {
        return Err(ArenaError::Depth);
    }
    let status = opening.status();
    if status.is_terminal() {
        return Err(ArenaError::Opening(status.as_str().to_string()));
    }
    let mut p = *opening;
    let mut seen: HashMap<Position, u32> = HashMap::new();
    seen.insert(p.without_clocks(), 1);
    let mut moves = Vec::new();
    let termination = loop {
        if moves.len() >= max_plies {
            break GameStatus::DrawMoveLimit;
        }
        let params = match p.side_to_move() {
            Color::White => white,
            Color::Black => black,
        };
        let m = alphabeta(&p, depth, params)
            .best_move
            .expect("ongoing position has a move");
        p = p.make_move_unchecked(m);
        moves.push(m);
        let status = p.status();
        if status.is_terminal() {
            break status;
        }
        let count = seen.entry(p.without_clocks()).or_insert(0);
        *count += 1;
        if *count >= 3 {
            break GameStatus::DrawRepetition;
        }
    };
    let result = match termination {
        // The side to move has been mated.
        GameStatus::Checkmate => match p.side_to_move() {
            Color::White => GameResult::BlackWin,
            Color::Black => GameResult::WhiteWin,
        },
        _ => GameResult::Draw,
    };
    Ok(GameRecord {
        opening: *opening,
        moves,
        result,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mate_in_one_ends_game() {
        let p = Position::from_fen("6k1/5ppp/8/8/8/8/8/R5K1 w - - 0 1").unwrap();
        let r = EvalParams::reference();
        let g = play_game(&r, &r, 1, &p, 100).unwrap();
        assert_eq!(g.plies(), 1);
        assert_eq!(g.result, GameResult::WhiteWin);
        assert_eq!(g.termination, GameStatus::Checkmate);
    }

    #[test]
    fn move_limit() {
        let r = EvalParams::reference();
        let g = play_game(&r, &r, 1, &Position::startpos(), 2).unwrap();
        assert_eq!(g.plies(), 2);
        assert_eq!(g.result, GameResult::Draw);
        assert_eq!(g.termination, GameStatus::DrawMoveLimit);
    }

    #[test]
    fn deterministic_and_replayable() {
        let r = EvalParams::reference();
        let z = EvalParams::zero();
        let a = play_game(&r, &z, 2, &Position::startpos(), 120).unwrap();
        let b = play_game(&r, &z, 2, &Position::startpos(), 120).unwrap();
        assert_eq!(a, b);
        let end = a.replay().unwrap();
        if a.termination != GameStatus::DrawMoveLimit && a.termination != GameStatus::DrawRepetition
        {
            assert_eq!(end.status(), a.termination);
        }
    }

    #[test]
    fn repetition_detected() {
        // Zero weights make every move equal, so both sides shuffle the
        // first legal move back and forth.
        let p = Position::from_fen("k7/8/8/8/8/8/8/K6R w - - 0 1").unwrap();
        let z = EvalParams::zero();
        let g = play_game(&z, &z, 1, &p, 200).unwrap();
        assert_eq!(g.termination, GameStatus::DrawRepetition);
    }

    #[test]
    fn bad_inputs() {
        let r = EvalParams::reference();
        let mated = Position::from_fen("R5k1/5ppp/8/8/8/8/8/6K1 b - - 0 1").unwrap();
        assert!(matches!(
            play_game(&r, &r, 2, &mated, 10),
            Err(ArenaError::Opening(_))
        ));
        assert!(matches!(
            play_game(&r, &r, 0, &Position::startpos(), 10),
            Err(ArenaError::Depth)
        ));
    }
}
