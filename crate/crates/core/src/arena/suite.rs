//! Best-move test suites: EPD records with `bm` (and optionally `id`).

use super::ArenaError;
use crate::board::{Move, MoveKind, PieceKind, Position, Square};
use crate::epd::EpdRecord;
use crate::eval::EvalParams;
use crate::par::Pool;
use crate::search::alphabeta;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteEntry {
    pub id: String,
    pub position: Position,
    pub best_moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub id: String,
    pub chosen: Option<Move>,
    pub solved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub solved: usize,
    pub total: usize,
    pub results: Vec<SuiteResult>,
}

/// Resolves a move written as coordinates (`e2e4`, `e7e8q`), castling
/// (`O-O`, `O-O-O`) or short algebraic (`Nf3`, `exd5`, `Rad1`, `e8=Q+`).
pub fn resolve_move(p: &Position, text: &str) -> Result<Move, String> {
    let t = text.trim_end_matches(['+', '#', '!', '?']);
    let b = t.as_bytes();
    let is_coord = (b.len() == 4 || b.len() == 5)
        && (b'a'..=b'h').contains(&b[0])
        && (b'1'..=b'8').contains(&b[1])
        && (b'a'..=b'h').contains(&b[2])
        && (b'1'..=b'8').contains(&b[3]);
    if is_coord {
        return p.parse_uci_move(t).map_err(|e| e.to_string());
    }
    let legal = p.legal_moves();
    let pick = |found: Vec<&Move>| match found.as_slice() {
        [m] => Ok(**m),
        [] => Err(format!("no legal move matches {text:?}")),
        _ => Err(format!("{text:?} is ambiguous")),
    };
    match t {
        "O-O" | "0-0" => {
            return pick(
                legal
                    .iter()
                    .filter(|m| m.kind == MoveKind::CastleKingside)
                    .collect(),
            );
        }
        "O-O-O" | "0-0-0" => {
            return pick(
                legal
                    .iter()
                    .filter(|m| m.kind == MoveKind::CastleQueenside)
                    .collect(),
            );
        }
        _ => {}
    }

    let mut rest = t;
    let kind = match rest.chars().next() {
        Some(c @ ('N' | 'B' | 'R' | 'Q' | 'K')) => {
            rest = &rest[1..];
            PieceKind::from_letter(c.to_ascii_lowercase()).expect("piece letter")
        }
        _ => PieceKind::Pawn,
    };
    let mut promotion = None;
    if let Some((head, promo)) = rest.split_once('=') {
        promotion = Some(promo);
        rest = head;
    } else if kind == PieceKind::Pawn && rest.len() >= 3 {
        let last = &rest[rest.len() - 1..];
        if matches!(last, "N" | "B" | "R" | "Q") {
            promotion = Some(last);
            rest = &rest[..rest.len() - 1];
        }
    }
    let promotion = match promotion {
        None => None,
        Some(s) => {
            let c = s
                .chars()
                .next()
                .ok_or_else(|| format!("bad promotion in {text:?}"))?;
            Some(
                PieceKind::from_letter(c.to_ascii_lowercase())
                    .filter(|k| PieceKind::PROMOTIONS.contains(k))
                    .ok_or_else(|| format!("bad promotion in {text:?}"))?,
            )
        }
    };
    if rest.len() < 2 || !rest.is_char_boundary(rest.len() - 2) {
        return Err(format!("cannot read move {text:?}"));
    }
    let target: Square = rest[rest.len() - 2..]
        .parse()
        .map_err(|_| format!("cannot read move {text:?}"))?;
    let mut from_file = None;
    let mut from_rank = None;
    for c in rest[..rest.len() - 2].chars() {
        match c {
            'a'..='h' => from_file = Some(c as u8 - b'a'),
            '1'..='8' => from_rank = Some(c as u8 - b'1'),
            'x' | ':' => {}
            _ => return Err(format!("cannot read move {text:?}")),
        }
    }
    pick(
        legal
            .iter()
            .filter(|m| {
                m.to == target
                    && m.promotion == promotion
                    && p.piece_at(m.from).map(|pc| pc.kind) == Some(kind)
                    && from_file.is_none_or(|f| m.from.file() == f)
                    && from_rank.is_none_or(|r| m.from.rank() == r)
            })
            .collect(),
    )
}

/// Parses a suite; every record needs at least one `bm` move.
pub fn parse_suite(text: &str) -> Result<Vec<SuiteEntry>, ArenaError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let line = i + 1;
        let rec = EpdRecord::parse(t, line)?;
        let id = rec
            .id()
            .map(str::to_string)
            .unwrap_or_else(|| format!("line {line}"));
        let err = |reason: String| ArenaError::Suite {
            line,
            id: id.clone(),
            reason,
        };
        let bm = rec
            .get("bm")
            .filter(|b| !b.is_empty())
            .ok_or_else(|| err("missing `bm`".into()))?;
        let best_moves = bm
            .iter()
            .map(|s| resolve_move(&rec.position, s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        out.push(SuiteEntry {
            id,
            position: rec.position,
            best_moves,
        });
    }
    Ok(out)
}

/// Counts entries whose search move at `depth` is one of the best moves.
pub fn run_testsuite(
    suite: &[SuiteEntry],
    params: &EvalParams,
    depth: u32,
    pool: &Pool,
) -> SuiteOutcome {
    let results: Vec<SuiteResult> = pool.map(suite, |e| {
        let chosen = alphabeta(&e.position, depth, params).best_move;
        SuiteResult {
            id: e.id.clone(),
            chosen,
            solved: chosen.is_some_and(|m| e.best_moves.contains(&m)),
        }
    });
    SuiteOutcome {
        solved: results.iter().filter(|r| r.solved).count(),
        total: results.len(),
        results,
    }
}
