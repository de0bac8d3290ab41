//! Logistic Elo model and match statistics.

use super::ArenaError;

/// Winning-rate bounds are clamped into `(EPSILON, 1 - EPSILON)`.
pub const EPSILON: f64 = 1e-6;

pub fn expected_winning_rate(rd: f64) -> f64 {
    1.0 / (10f64.powf(-rd / 400.0) + 1.0)
}

pub fn rating_difference(w: f64) -> Result<f64, ArenaError> {
    if !(w > 0.0 && w < 1.0) {
        return Err(ArenaError::EloDomain(w));
    }
    Ok(-400.0 * (1.0 / w - 1.0).log10())
}

/// Win/draw/loss tallies from the first player's side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub wins: u32,
    pub draws: u32,
    pub losses: u32,
}

impl Tally {
    pub fn new(wins: u32, draws: u32, losses: u32) -> Tally {
        Tally {
            wins,
            draws,
            losses,
        }
    }

    pub fn games(&self) -> u32 {
        self.wins + self.draws + self.losses
    }

    /// Points with draws counted as one half.
    pub fn points(&self) -> f64 {
        self.wins as f64 + self.draws as f64 / 2.0
    }
}

pub fn mean_score(t: &Tally) -> Result<f64, ArenaError> {
    if t.games() == 0 {
        return Err(ArenaError::TooFewGames {
            games: 0,
            needed: 1,
        });
    }
    Ok(t.points() / t.games() as f64)
}

/// Sample standard deviation of the per-game score.
pub fn score_stddev(t: &Tally) -> Result<f64, ArenaError> {
    let n = t.games();
    if n < 2 {
        return Err(ArenaError::TooFewGames {
            games: n,
            needed: 2,
        });
    }
    let x = mean_score(t)?;
    let ss = t.wins as f64 * (1.0 - x).powi(2)
        + t.draws as f64 * (0.5 - x).powi(2)
        + t.losses as f64 * x * x;
    Ok((ss / (n - 1) as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EloEstimate {
    pub mean: f64,
    pub stddev: f64,
    pub k: f64,
    pub w_lo: f64,
    pub w_hi: f64,
    pub rd: f64,
    pub rd_lo: f64,
    pub rd_hi: f64,
}

impl EloEstimate {
    pub fn half_width(&self) -> f64 {
        (self.rd_hi - self.rd_lo) / 2.0
    }
}

/// Rating difference with a `k`-standard-error interval on the mean score.
pub fn elo_estimate(t: &Tally, k: f64) -> Result<EloEstimate, ArenaError> {
    let stddev = score_stddev(t)?;
    let mean = mean_score(t)?;
    if mean <= 0.0 || mean >= 1.0 {
        return Err(ArenaError::EloDomain(mean));
    }
    let se = stddev / (t.games() as f64).sqrt();
    let w_lo = (mean - k * se).clamp(EPSILON, 1.0 - EPSILON);
    let w_hi = (mean + k * se).clamp(EPSILON, 1.0 - EPSILON);
    Ok(EloEstimate {
        mean,
        stddev,
        k,
        w_lo,
        w_hi,
        rd: rating_difference(mean)?,
        rd_lo: rating_difference(w_lo)?,
        rd_hi: rating_difference(w_hi)?,
    })
}
