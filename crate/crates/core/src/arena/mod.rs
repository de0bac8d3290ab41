//! Matches between parameter sets, Elo statistics and best-move suites.

mod elo;
mod game;
mod suite;

use std::fmt::Write as _;

use thiserror::Error;

use crate::board::{BoardError, Color, Position};
use crate::epd::{parse_epd, EpdError};
use crate::eval::EvalParams;
use crate::par::Pool;

pub use elo::{
    elo_estimate, expected_winning_rate, mean_score, rating_difference, score_stddev, EloEstimate,
    Tally, EPSILON,
};
pub use game::{play_game, GameRecord, GameResult};
pub use suite::{parse_suite, resolve_move, run_testsuite, SuiteEntry, SuiteOutcome, SuiteResult};

/// Default ply cap for match games.
pub const DEFAULT_MAX_PLIES: usize = 300;

const BUNDLED_OPENINGS: &str = include_str!("../../data/openings.epd");

#[derive(Debug, Error)]
pub enum ArenaError {
    #[error("winning rate {0} is outside (0, 1); the rating difference is infinite")]
    EloDomain(f64),
    #[error("{games} games played, at least {needed} needed")]
    TooFewGames { games: u32, needed: u32 },
    #[error("search depth must be at least 1")]
    Depth,
    #[error("opening is already decided ({0})")]
    Opening(String),
    #[error("no openings given")]
    NoOpenings,
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error(transparent)]
    Epd(#[from] EpdError),
    #[error("line {line} ({id}): {reason}")]
    Suite {
        line: usize,
        id: String,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Opening {
    pub id: String,
    pub position: Position,
}

/// Reads openings from EPD; records without `id` are named by line.
pub fn parse_openings(text: &str) -> Result<Vec<Opening>, ArenaError> {
    let records = parse_epd(text)?;
    let mut out = Vec::with_capacity(records.len());
    for (i, r) in records.into_iter().enumerate() {
        let status = r.position.status();
        if status.is_terminal() {
            return Err(ArenaError::Opening(status.as_str().to_string()));
        }
        out.push(Opening {
            id: r
                .id()
                .map(str::to_string)
                .unwrap_or_else(|| format!("opening {}", i + 1)),
            position: r.position,
        });
    }
    Ok(out)
}

/// The 50 bundled openings.
pub fn bundled_openings() -> Vec<Opening> {
    parse_openings(BUNDLED_OPENINGS).expect("bundled openings are valid")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchGame {
    pub opening_id: String,
    /// Color played by the first parameter set.
    pub a_color: Color,
    pub record: GameRecord,
}

impl MatchGame {
    /// 1, 0.5 or 0 for the first parameter set, doubled to stay integral.
    fn a_half_points(&self) -> u32 {
        match (self.record.result, self.a_color) {
            (GameResult::Draw, _) => 1,
            (GameResult::WhiteWin, Color::White) | (GameResult::BlackWin, Color::Black) => 2,
            _ => 0,
        }
    }

    pub fn a_outcome(&self) -> &'static str {
        match self.a_half_points() {
            2 => "win",
            1 => "draw",
            _ => "loss",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub tally: Tally,
    pub games: Vec<MatchGame>,
}

/// Plays every opening twice with colors swapped; tallies are from `a`'s
/// side.
pub fn run_match(
    a: &EvalParams,
    b: &EvalParams,
    openings: &[Opening],
    depth: u32,
    max_plies: usize,
    pool: &Pool,
) -> Result<MatchResult, ArenaError> {
    if openings.is_empty() {
        return Err(ArenaError::NoOpenings);
    }
    let jobs: Vec<(&Opening, Color)> = openings
        .iter()
        .flat_map(|o| [(o, Color::White), (o, Color::Black)])
        .collect();
    let games = pool.try_map(&jobs, |&(o, a_color)| {
        let (white, black) = match a_color {
            Color::White => (a, b),
            Color::Black => (b, a),
        };
        Ok::<_, ArenaError>(MatchGame {
            opening_id: o.id.clone(),
            a_color,
            record: play_game(white, black, depth, &o.position, max_plies)?,
        })
    })?;
    let mut tally = Tally::default();
    for g in &games {
        match g.a_half_points() {
            2 => tally.wins += 1,
            1 => tally.draws += 1,
            _ => tally.losses += 1,
        }
    }
    Ok(MatchResult { tally, games })
}

pub const MATCH_REPORT_HEADER: &str = "opening_id,color,result,termination,plies";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per game; color and result are the first parameter set's.
pub fn match_report_csv(m: &MatchResult) -> String {
    let mut out = format!("{MATCH_REPORT_HEADER}\n");
    for g in &m.games {
        let color = match g.a_color {
            Color::White => "white",
            Color::Black => "black",
        };
        writeln!(
            out,
            "{},{color},{},{},{}",
            csv_field(&g.opening_id),
            g.a_outcome(),
            g.record.termination.as_str(),
            g.record.plies()
        )
        .ok();
    }
    out
}

/// Text block with W/D/L, mean score, deviation and the k = 2 and k = 3
/// rating intervals.
pub fn summary(t: &Tally) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "games {}  W {}  D {}  L {}",
        t.games(),
        t.wins,
        t.draws,
        t.losses
    )
    .ok();
    writeln!(
        out,
        "points {:.1} - {:.1}",
        t.points(),
        t.games() as f64 - t.points()
    )
    .ok();
    if let Ok(x) = mean_score(t) {
        writeln!(out, "mean score {:.4} ({:.1}%)", x, 100.0 * x).ok();
    }
    if let Ok(s) = score_stddev(t) {
        writeln!(out, "stddev {s:.4}").ok();
    }
    for k in [2.0, 3.0] {
        match elo_estimate(t, k) {
            Ok(e) => {
                writeln!(
                    out,
                    "k={k}: RD {:+.1} +/- {:.1}  [{:+.1}, {:+.1}]",
                    e.rd,
                    e.half_width(),
                    e.rd_lo,
                    e.rd_hi
                )
                .ok();
            }
            Err(e) => {
                writeln!(out, "k={k}: {e}").ok();
            }
        }
    }
    out
}
