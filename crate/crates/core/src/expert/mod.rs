//! Expert scorers: the hidden-parameter oracle (static or two plies), a
//! lookup backend over pre-scored EPD, and a UCI subprocess client. Every
//! backend reports centipawns from the side to move's point of view.

mod uci;

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::board::{random_position_with, Position};
use crate::epd::{parse_epd, EpdError, EpdRecord};
use crate::eval::{evaluate, EvalParams, NUM_PARAMS};
use crate::par::Pool;
use crate::search::alphabeta;

pub use uci::{UciEngine, UciError, UciPool, DEFAULT_TIMEOUT};

/// Largest magnitude a stored score may have.
pub const SCORE_LIMIT: i32 = 32000;

#[derive(Debug, Error)]
pub enum ExpertError {
    #[error("position is already decided ({0}); it has no expert score")]
    Terminal(String),
    #[error(transparent)]
    Epd(#[from] EpdError),
    #[error("line {line}: missing `ce` opcode")]
    MissingCe { line: usize },
    #[error("line {line}: invalid `ce` operand {value:?}")]
    BadCe { line: usize, value: String },
    #[error("position {0} is not in the score file")]
    NotScored(String),
    #[error("only {found} distinct positions found, {wanted} requested")]
    InsufficientPositions { wanted: usize, found: usize },
    #[error("position count must be even, got {0}")]
    OddCount(usize),
    #[error(transparent)]
    Uci(#[from] UciError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredPosition {
    pub position: Position,
    pub score: i32,
    pub source: String,
}

impl ScoredPosition {
    /// Clamps the score into `[-SCORE_LIMIT, SCORE_LIMIT]`.
    pub fn new(position: Position, score: i32, source: impl Into<String>) -> ScoredPosition {
        ScoredPosition {
            position,
            score: score.clamp(-SCORE_LIMIT, SCORE_LIMIT),
            source: source.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingSet {
    pub train: Vec<ScoredPosition>,
    pub test: Vec<ScoredPosition>,
    pub split_seed: u64,
}

pub fn score_static(p: &Position, hidden: &EvalParams) -> i32 {
    evaluate(p, hidden)
}

pub fn score_depth2(p: &Position, hidden: &EvalParams) -> Result<i32, ExpertError> {
    let status = p.status();
    if status.is_terminal() {
        return Err(ExpertError::Terminal(status.as_str().to_string()));
    }
    Ok(alphabeta(p, 2, hidden).score)
}

pub trait Scorer {
    /// Short tag stored with every scored position.
    fn tag(&self) -> String;

    fn score(&mut self, p: &Position) -> Result<i32, ExpertError>;

    fn score_batch(&mut self, ps: &[Position], _pool: &Pool) -> Result<Vec<i32>, ExpertError> {
        ps.iter().map(|p| self.score(p)).collect()
    }
}

/// Built-in oracle with known parameters.
#[derive(Debug, Clone)]
pub struct HiddenExpert {
    pub params: EvalParams,
    pub depth2: bool,
}

impl HiddenExpert {
    pub fn static_eval(params: EvalParams) -> HiddenExpert {
        HiddenExpert {
            params,
            depth2: false,
        }
    }

    pub fn depth2(params: EvalParams) -> HiddenExpert {
        HiddenExpert {
            params,
            depth2: true,
        }
    }

    fn eval(&self, p: &Position) -> Result<i32, ExpertError> {
        if self.depth2 {
            score_depth2(p, &self.params)
        } else {
            Ok(score_static(p, &self.params))
        }
    }
}

impl Scorer for HiddenExpert {
    fn tag(&self) -> String {
        if self.depth2 {
            "depth2-hidden".into()
        } else {
            "static-hidden".into()
        }
    }

    fn score(&mut self, p: &Position) -> Result<i32, ExpertError> {
        self.eval(p)
    }

    fn score_batch(&mut self, ps: &[Position], pool: &Pool) -> Result<Vec<i32>, ExpertError> {
        let this = &*self;
        pool.try_map(ps, |p| this.eval(p))
    }
}

/// Looks scores up by the first four FEN fields.
#[derive(Debug, Clone, Default)]
pub struct EpdFileExpert {
    scores: HashMap<String, i32>,
}

impl EpdFileExpert {
    pub fn new(entries: &[ScoredPosition]) -> EpdFileExpert {
        EpdFileExpert {
            scores: entries
                .iter()
                .map(|s| (s.position.epd_fields(), s.score))
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<EpdFileExpert, ExpertError> {
        Ok(EpdFileExpert::new(&load_scored_epd(path)?))
    }
}

impl Scorer for EpdFileExpert {
    fn tag(&self) -> String {
        "epd-file".into()
    }

    fn score(&mut self, p: &Position) -> Result<i32, ExpertError> {
        let key = p.epd_fields();
        self.scores
            .get(&key)
            .copied()
            .ok_or(ExpertError::NotScored(key))
    }
}

/// Where candidate positions come from.
#[derive(Debug, Clone)]
pub enum PositionSource {
    /// Random playouts of `min_plies..=max_plies` from the start position,
    /// optionally keeping only quiet ones (see [`is_quiet`]).
    Random {
        seed: u64,
        min_plies: u32,
        max_plies: u32,
        quiet: bool,
    },
    /// A fixed list, taken in order.
    List(Vec<Position>),
}

/// Conventional piece values used only to judge quietness.
pub const MATERIAL_GUIDE: [i32; 5] = [100, 300, 300, 500, 900];

fn material_guide() -> EvalParams {
    let mut v = [0; NUM_PARAMS];
    v[..5].copy_from_slice(&MATERIAL_GUIDE);
    EvalParams::new(v).expect("guide values fit")
}

/// Not in check, and a two-ply material-only search finds no change in the
/// material balance.
pub fn is_quiet(p: &Position) -> bool {
    let guide = material_guide();
    !p.in_check() && alphabeta(p, 2, &guide).score == evaluate(p, &guide)
}

/// Collects `n` ongoing positions distinct by FEN. Random sources get a
/// budget of `50 * n + 1000` playouts; the quiet check runs on `pool`.
pub fn collect_positions(
    source: &PositionSource,
    n: usize,
    pool: &Pool,
) -> Result<Vec<Position>, ExpertError> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    let mut push = |p: Position, out: &mut Vec<Position>| {
        if out.len() < n && !p.status().is_terminal() && seen.insert(p.to_fen()) {
            out.push(p);
        }
    };
    match source {
        &PositionSource::Random {
            seed,
            min_plies,
            max_plies,
            quiet,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut budget = 50 * n + 1000;
            while out.len() < n && budget > 0 {
                // Batch sizes depend only on counts, so the result does not
                // depend on the thread count.
                let batch = (2 * (n - out.len()) + 16).min(budget);
                budget -= batch;
                let candidates: Vec<Position> = (0..batch)
                    .map(|_| random_position_with(&mut rng, min_plies, max_plies))
                    .collect();
                let keep = if quiet {
                    pool.map(&candidates, is_quiet)
                } else {
                    vec![true; batch]
                };
                for (p, k) in candidates.into_iter().zip(keep) {
                    if k {
                        push(p, &mut out);
                    }
                }
            }
        }
        PositionSource::List(list) => {
            for p in list {
                push(*p, &mut out);
            }
        }
    }
    if out.len() < n {
        return Err(ExpertError::InsufficientPositions {
            wanted: n,
            found: out.len(),
        });
    }
    Ok(out)
}

/// Scores `n_total` distinct positions and splits them into equal train and
/// test halves after a shuffle seeded by `split_seed`.
pub fn build_training_set(
    source: &PositionSource,
    scorer: &mut dyn Scorer,
    n_total: usize,
    split_seed: u64,
    pool: &Pool,
) -> Result<TrainingSet, ExpertError> {
    if !n_total.is_multiple_of(2) {
        return Err(ExpertError::OddCount(n_total));
    }
    let positions = collect_positions(source, n_total, pool)?;
    let scores = scorer.score_batch(&positions, pool)?;
    let tag = scorer.tag();
    let mut all: Vec<ScoredPosition> = positions
        .into_iter()
        .zip(scores)
        .map(|(p, s)| ScoredPosition::new(p, s, tag.clone()))
        .collect();
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(split_seed));
    let test = all.split_off(n_total / 2);
    Ok(TrainingSet {
        train: all,
        test,
        split_seed,
    })
}

fn read_text(path: &Path) -> Result<String, ExpertError> {
    fs::read_to_string(path).map_err(|source| ExpertError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses EPD text where every record carries a `ce` opcode.
pub fn parse_scored_epd(text: &str, source: &str) -> Result<Vec<ScoredPosition>, ExpertError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let line = i + 1;
        let rec = EpdRecord::parse(t, line)?;
        let ce = rec
            .get("ce")
            .and_then(|o| o.first())
            .ok_or(ExpertError::MissingCe { line })?;
        let score: i32 = ce.parse().map_err(|_| ExpertError::BadCe {
            line,
            value: ce.clone(),
        })?;
        out.push(ScoredPosition::new(rec.position, score, source));
    }
    Ok(out)
}

pub fn load_scored_epd(path: &Path) -> Result<Vec<ScoredPosition>, ExpertError> {
    parse_scored_epd(&read_text(path)?, "epd-file")
}

pub fn format_scored_epd(list: &[ScoredPosition]) -> String {
    let mut out = String::new();
    for s in list {
        let mut rec = EpdRecord::new(s.position);
        rec.set("ce", vec![s.score.to_string()]);
        out.push_str(&rec.to_line());
        out.push('\n');
    }
    out
}

pub fn save_scored_epd(path: &Path, list: &[ScoredPosition]) -> Result<(), ExpertError> {
    fs::write(path, format_scored_epd(list)).map_err(|source| ExpertError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads unscored positions from EPD text.
pub fn load_positions(path: &Path) -> Result<Vec<EpdRecord>, ExpertError> {
    Ok(parse_epd(&read_text(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::random_position;
    use crate::search::minimax_oracle;

    #[test]
    fn static_matches_evaluate() {
        let hidden = EvalParams::reference();
        assert_eq!(score_static(&Position::startpos(), &hidden), 0);
        for seed in 0..200 {
            let p = random_position(seed, 2, 80);
            assert_eq!(score_static(&p, &hidden), evaluate(&p, &hidden));
            // Side-to-move relative, so the color swap leaves it unchanged.
            assert_eq!(
                score_static(&p, &hidden),
                score_static(&p.mirror(), &hidden)
            );
        }
    }

    #[test]
    fn depth2_equals_oracle() {
        let hidden = EvalParams::reference();
        for seed in 0..30 {
            let p = random_position(seed, 2, 60);
            let want = minimax_oracle(&p, 2, &hidden).unwrap().score;
            assert_eq!(score_depth2(&p, &hidden).unwrap(), want);
        }
    }

    #[test]
    fn depth2_hanging_queen() {
        // White rook takes the undefended black queen on d8.
        let p = Position::from_fen("3q3k/8/8/8/8/8/8/3R2K1 w - - 0 1").unwrap();
        let hidden = EvalParams::reference();
        let d2 = score_depth2(&p, &hidden).unwrap();
        assert_eq!(d2, minimax_oracle(&p, 2, &hidden).unwrap().score);
        assert!(d2 - score_static(&p, &hidden) >= 954 - 200, "{d2}");
    }

    #[test]
    fn depth2_mate_in_one_and_terminal() {
        let hidden = EvalParams::reference();
        let p = Position::from_fen("6k1/5ppp/8/8/8/8/8/R5K1 w - - 0 1").unwrap();
        assert_eq!(score_depth2(&p, &hidden).unwrap(), 29999);
        let mated = Position::from_fen("R5k1/5ppp/8/8/8/8/8/6K1 b - - 0 1").unwrap();
        assert!(matches!(
            score_depth2(&mated, &hidden),
            Err(ExpertError::Terminal(_))
        ));
    }

    #[test]
    fn training_set_split() {
        let mut scorer = HiddenExpert::static_eval(EvalParams::reference());
        let src = PositionSource::Random {
            seed: 1,
            min_plies: 4,
            max_plies: 40,
            quiet: false,
        };
        let pool = Pool::new(2);
        let ts = build_training_set(&src, &mut scorer, 200, 7, &pool).unwrap();
        assert_eq!(ts.train.len(), 100);
        assert_eq!(ts.test.len(), 100);
        let fens: HashSet<String> = ts
            .train
            .iter()
            .chain(&ts.test)
            .map(|s| s.position.to_fen())
            .collect();
        assert_eq!(fens.len(), 200);
        let again = build_training_set(&src, &mut scorer, 200, 7, &Pool::sequential()).unwrap();
        assert_eq!(ts, again);

        let two = build_training_set(&src, &mut scorer, 2, 7, &pool).unwrap();
        assert_eq!((two.train.len(), two.test.len()), (1, 1));
        assert!(matches!(
            build_training_set(&src, &mut scorer, 3, 7, &pool),
            Err(ExpertError::OddCount(3))
        ));
    }

    #[test]
    fn quiet_filter() {
        assert!(is_quiet(&Position::startpos()));
        // White can win the undefended queen.
        assert!(!is_quiet(
            &Position::from_fen("3q3k/8/8/8/8/8/8/3R2K1 w - - 0 1").unwrap()
        ));
        let src = PositionSource::Random {
            seed: 5,
            min_plies: 4,
            max_plies: 60,
            quiet: true,
        };
        let a = collect_positions(&src, 100, &Pool::sequential()).unwrap();
        let b = collect_positions(&src, 100, &Pool::new(4)).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(is_quiet));
    }

    #[test]
    fn insufficient_positions() {
        let src = PositionSource::List(vec![Position::startpos(); 5]);
        let mut scorer = HiddenExpert::static_eval(EvalParams::reference());
        let err = build_training_set(&src, &mut scorer, 2, 0, &Pool::sequential()).unwrap_err();
        assert!(matches!(
            err,
            ExpertError::InsufficientPositions {
                wanted: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn scored_epd() {
        let list =
            parse_scored_epd(r#"4k3/8/8/8/8/8/4P3/4K3 w - - ce 83; id "ex1";"#, "t").unwrap();
        assert_eq!(list[0].score, 83);
        let err = parse_scored_epd("4k3/8/8/8/8/8/4P3/4K3 w - - id \"x\";", "t").unwrap_err();
        assert!(err.to_string().contains("ce"), "{err}");

        let hidden = EvalParams::reference();
        let entries: Vec<ScoredPosition> = (0..1000)
            .map(|s| {
                let p = random_position(s, 1, 120);
                ScoredPosition::new(p, score_static(&p, &hidden), "epd-file")
            })
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.epd");
        save_scored_epd(&path, &entries).unwrap();
        assert_eq!(load_scored_epd(&path).unwrap(), entries);

        let extremes = vec![
            ScoredPosition::new(Position::startpos(), 32000, "epd-file"),
            ScoredPosition::new(Position::startpos(), -32000, "epd-file"),
        ];
        assert_eq!(
            parse_scored_epd(&format_scored_epd(&extremes), "epd-file").unwrap(),
            extremes
        );
    }

    #[test]
    fn epd_file_backend() {
        let p = random_position(3, 5, 30);
        let mut e = EpdFileExpert::new(&[ScoredPosition::new(p, -17, "x")]);
        assert_eq!(e.score(&p).unwrap(), -17);
        assert!(matches!(
            e.score(&Position::startpos()),
            Err(ExpertError::NotScored(_))
        ));
    }

    #[test]
    fn clamping() {
        assert_eq!(
            ScoredPosition::new(Position::startpos(), 40000, "x").score,
            32000
        );
    }
}
