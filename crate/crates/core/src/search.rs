//! Fixed-depth negamax with alpha-beta pruning, and an unpruned minimax used
//! as its reference.
//!
//! Scores are centipawns for the side to move. A side with no legal moves
//! scores `-(MATE_SCORE - ply)` when in check and 0 otherwise; the fifty-move
//! rule and insufficient material score 0. Repetition is left to the caller.

use thiserror::Error;

use crate::board::{Move, PieceKind, Position};
use crate::eval::{evaluate, EvalParams};

pub const MATE_SCORE: i32 = 30000;
const INFINITY: i32 = 32000;

/// Largest depth [`minimax_oracle`] accepts.
pub const ORACLE_MAX_DEPTH: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchResult {
    pub score: i32,
    pub best_move: Option<Move>,
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleResult {
    pub score: i32,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("oracle depth {0} exceeds the limit of {ORACLE_MAX_DEPTH}")]
    DepthTooLarge(u32),
}

pub fn is_mate_score(score: i32) -> bool {
    score.abs() > MATE_SCORE - 1000
}

/// Value of a node before searching its children, if it is terminal.
#[inline]
fn terminal_score(p: &Position, has_moves: bool, ply: u32) -> Option<i32> {
    if !has_moves {
        return Some(if p.in_check() {
            -(MATE_SCORE - ply as i32)
        } else {
            0
        });
    }
    if p.halfmove_clock() >= 100 || p.is_insufficient_material() {
        return Some(0);
    }
    None
}

fn victim_value(p: &Position, m: &Move) -> i32 {
    if !m.kind.is_capture() {
        return -1;
    }
    match p.piece_at(m.to).map(|pc| pc.kind) {
        Some(PieceKind::Queen) => 5,
        Some(PieceKind::Rook) => 4,
        Some(PieceKind::Bishop) => 3,
        Some(PieceKind::Knight) => 2,
        _ => 1,
    }
}

/// Captures first, most valuable victim first; otherwise legal-move order.
fn ordered(p: &Position, moves: Vec<Move>) -> Vec<(usize, Move)> {
    let mut indexed: Vec<(usize, Move)> = moves.into_iter().enumerate().collect();
    indexed.sort_by_key(|(_, m)| -victim_value(p, m));
    indexed
}

fn negamax(
    p: &Position,
    depth: u32,
    ply: u32,
    mut alpha: i32,
    beta: i32,
    params: &EvalParams,
    nodes: &mut u64,
) -> i32 {
    *nodes += 1;
    if depth == 0 {
        let has_moves = p.has_legal_move();
        return terminal_score(p, has_moves, ply).unwrap_or_else(|| evaluate(p, params));
    }
    let moves = p.legal_moves();
    if let Some(s) = terminal_score(p, !moves.is_empty(), ply) {
        return s;
    }
    let mut best = -INFINITY;
    for (_, m) in ordered(p, moves) {
        let child = p.make_move_unchecked(m);
        let v = -negamax(&child, depth - 1, ply + 1, -beta, -alpha, params, nodes);
        if v > best {
            best = v;
            if v > alpha {
                alpha = v;
                if alpha >= beta {
                    break;
                }
            }
        }
    }
    best
}

/// Exact negamax value at `depth` with alpha-beta pruning. Among moves of
/// equal value the earliest in legal-move order is returned.
pub fn alphabeta(p: &Position, depth: u32, params: &EvalParams) -> SearchResult {
    let mut nodes = 1;
    let moves = p.legal_moves();
    if let Some(score) = terminal_score(p, !moves.is_empty(), 0) {
        return SearchResult {
            score,
            best_move: None,
            nodes,
        };
    }
    if depth == 0 {
        return SearchResult {
            score: evaluate(p, params),
            best_move: None,
            nodes,
        };
    }

    let mut best = -INFINITY;
    let mut best_idx = usize::MAX;
    let mut best_move = None;
    for (idx, m) in ordered(p, moves) {
        let child = p.make_move_unchecked(m);
        // Searching with alpha one below the best resolves exact ties.
        let alpha = if best_move.is_none() {
            -INFINITY
        } else {
            best - 1
        };
        let v = -negamax(&child, depth - 1, 1, -INFINITY, -alpha, params, &mut nodes);
        if v > best || (v == best && idx < best_idx) {
            best = v;
            best_idx = idx;
            best_move = Some(m);
        }
    }
    SearchResult {
        score: best,
        best_move,
        nodes,
    }
}

fn minimax(p: &Position, depth: u32, ply: u32, params: &EvalParams, nodes: &mut u64) -> i32 {
    *nodes += 1;
    let moves = p.legal_moves();
    if let Some(s) = terminal_score(p, !moves.is_empty(), ply) {
        return s;
    }
    if depth == 0 {
        return evaluate(p, params);
    }
    moves
        .into_iter()
        .map(|m| -minimax(&p.make_move_unchecked(m), depth - 1, ply + 1, params, nodes))
        .max()
        .expect("non-terminal node has moves")
}

/// Exhaustive negamax without pruning, for checking [`alphabeta`].
pub fn minimax_oracle(
    p: &Position,
    depth: u32,
    params: &EvalParams,
) -> Result<OracleResult, SearchError> {
    if depth > ORACLE_MAX_DEPTH {
        return Err(SearchError::DepthTooLarge(depth));
    }
    let mut nodes = 0;
    let score = minimax(p, depth, 0, params, &mut nodes);
    Ok(OracleResult { score, nodes })
}
