//! Genetic algorithm that fits a chromosome to an expert's scores.
//!
//! Random draws happen on the control thread in a fixed order: the position
//! sample, then for each offspring pair parent A, parent B, the crossover
//! coin, the cut point (only when crossing over), and 230 mutation draws for
//! each child. Organism evaluation may run in parallel without affecting the
//! result.

mod checkpoint;

use std::fmt::Write as _;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::eval::{evaluate, extract_features, NUM_PARAMS};
use crate::expert::ScoredPosition;
use crate::genome::{
    crossover_at, decode, point_mutate, random_chromosome, Chromosome, CHROMOSOME_BITS,
};
use crate::par::Pool;

pub use checkpoint::Checkpoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot measure error on an empty position list")]
    EmptySample,
    #[error("selection weights must be non-empty and positive")]
    BadWeights,
    #[error("checkpoint line {line}: {reason}")]
    Checkpoint { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub generations: usize,
    pub sample_size: usize,
    pub resample_each_generation: bool,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 1000,
            crossover_rate: 0.75,
            mutation_rate: 0.002,
            generations: 300,
            sample_size: 1000,
            resample_each_generation: true,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self, train_len: usize) -> Result<(), GaError> {
        let err = |s: String| Err(GaError::Config(s));
        if self.population_size < 2 {
            return err(format!(
                "population size {} is below 2",
                self.population_size
            ));
        }
        for (name, r) in [
            ("crossover", self.crossover_rate),
            ("mutation", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return err(format!("{name} rate {r} is outside [0, 1]"));
            }
        }
        if self.sample_size == 0 {
            return err("sample size must be positive".into());
        }
        if self.sample_size > train_len {
            return err(format!(
                "sample size {} exceeds the {train_len} training positions",
                self.sample_size
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Organism {
    pub chromosome: Chromosome,
    /// Mean absolute error in centipawns, once evaluated.
    pub error: Option<f64>,
}

impl Organism {
    pub fn new(chromosome: Chromosome) -> Organism {
        Organism {
            chromosome,
            error: None,
        }
    }

    pub fn fitness(&self) -> Option<f64> {
        self.error.map(fitness_from_error)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_error: f64,
    pub mean_error: f64,
    pub best: Chromosome,
}

/// Selection weight `1 / (1 + e)`.
pub fn fitness_from_error(e: f64) -> f64 {
    debug_assert!(e >= 0.0);
    1.0 / (1.0 + e)
}

/// Mean absolute difference between the expert's scores and the organism's
/// static evaluation.
pub fn organism_error(c: &Chromosome, sample: &[ScoredPosition]) -> Result<f64, GaError> {
    if sample.is_empty() {
        return Err(GaError::EmptySample);
    }
    let params = decode(c);
    let total: i64 = sample
        .iter()
        .map(|s| (s.score as i64 - evaluate(&s.position, &params) as i64).abs())
        .sum();
    Ok(total as f64 / sample.len() as f64)
}

pub fn evaluate_holdout(o: &Organism, test: &[ScoredPosition]) -> Result<f64, GaError> {
    organism_error(&o.chromosome, test)
}

/// Fitness-proportional sampler built from prefix sums.
#[derive(Debug, Clone)]
pub struct Roulette {
    prefix: Vec<f64>,
}

impl Roulette {
    pub fn new(weights: &[f64]) -> Result<Roulette, GaError> {
        if weights.is_empty() || weights.iter().any(|&w| !w.is_finite() || w <= 0.0) {
            return Err(GaError::BadWeights);
        }
        let mut acc = 0.0;
        let prefix = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Ok(Roulette { prefix })
    }

    pub fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.prefix.last().expect("non-empty");
        let u = rng.gen::<f64>() * total;
        self.prefix
            .partition_point(|&p| p <= u)
            .min(self.prefix.len() - 1)
    }
}

/// One index with probability `weights[i] / sum(weights)`.
pub fn select_parent<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<usize, GaError> {
    Ok(Roulette::new(weights)?.pick(rng))
}

/// Training positions reduced to side-to-move feature rows and targets.
#[derive(Debug, Clone)]
pub struct TrainData {
    rows: Vec<[i32; NUM_PARAMS]>,
    targets: Vec<i32>,
}

impl TrainData {
    pub fn new(positions: &[ScoredPosition]) -> TrainData {
        let rows = positions
            .iter()
            .map(|s| {
                let f = extract_features(&s.position);
                let sign = s.position.side_to_move().sign();
                f.0.map(|x| sign * x)
            })
            .collect();
        TrainData {
            rows,
            targets: positions.iter().map(|s| s.score).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn abs_error(&self, i: usize, values: &[i32; NUM_PARAMS]) -> i64 {
        let s: i32 = self.rows[i].iter().zip(values).map(|(a, b)| a * b).sum();
        (self.targets[i] as i64 - s as i64).abs()
    }

    /// Sum of absolute errors over the chosen rows.
    pub fn total_error(&self, c: &Chromosome, indices: &[usize]) -> i64 {
        let params = decode(c);
        indices
            .iter()
            .map(|&i| self.abs_error(i, params.values()))
            .sum()
    }

    /// Same value as [`organism_error`] over the chosen rows.
    pub fn error(&self, c: &Chromosome, indices: &[usize]) -> f64 {
        self.total_error(c, indices) as f64 / indices.len() as f64
    }

    pub fn full_error(&self, c: &Chromosome) -> f64 {
        let params = decode(c);
        let total: i64 = (0..self.len())
            .map(|i| self.abs_error(i, params.values()))
            .sum();
        total as f64 / self.len() as f64
    }
}

fn draw_sample(rng: &mut ChaCha8Rng, train_len: usize, n: usize) -> Vec<usize> {
    index::sample(rng, train_len, n).into_vec()
}

/// Scores every organism on `sample` and summarizes the generation.
pub fn assess(
    pop: &[Organism],
    data: &TrainData,
    sample: &[usize],
    generation: usize,
    pool: &Pool,
) -> (Vec<Organism>, GenerationStats) {
    // Integer totals keep the mean exact up to one final rounding.
    let totals = pool.map(pop, |o| data.total_error(&o.chromosome, sample));
    let n = sample.len() as f64;
    let evaluated: Vec<Organism> = pop
        .iter()
        .zip(&totals)
        .map(|(o, &t)| Organism {
            chromosome: o.chromosome,
            error: Some(t as f64 / n),
        })
        .collect();
    let best = (0..totals.len())
        .min_by_key(|&i| totals[i])
        .expect("non-empty population");
    let sum: i64 = totals.iter().sum();
    let stats = GenerationStats {
        generation,
        best_error: totals[best] as f64 / n,
        mean_error: sum as f64 / (n * totals.len() as f64),
        best: pop[best].chromosome,
    };
    (evaluated, stats)
}

/// First index of the minimum.
fn best_index(errors: &[f64]) -> usize {
    let mut best = 0;
    for (i, &e) in errors.iter().enumerate() {
        if e < errors[best] {
            best = i;
        }
    }
    best
}

/// Next generation from an evaluated one: the best organism twice, then
/// offspring of roulette-selected pairs.
pub fn breed(
    evaluated: &[Organism],
    cfg: &GaConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Organism>, GaError> {
    let errors: Vec<f64> = evaluated
        .iter()
        .map(|o| {
            o.error
                .ok_or_else(|| GaError::Config("organism not evaluated".into()))
        })
        .collect::<Result<_, _>>()?;
    let n = cfg.population_size;
    let elite = evaluated[best_index(&errors)].chromosome;
    let mut next = vec![Organism::new(elite); 2.min(n)];
    let weights: Vec<f64> = errors.iter().map(|&e| fitness_from_error(e)).collect();
    let wheel = Roulette::new(&weights)?;
    while next.len() < n {
        let a = evaluated[wheel.pick(rng)].chromosome;
        let b = evaluated[wheel.pick(rng)].chromosome;
        let (c1, c2) = if rng.gen::<f64>() < cfg.crossover_rate {
            crossover_at(&a, &b, rng.gen_range(1..CHROMOSOME_BITS))
        } else {
            (a, b)
        };
        let c1 = point_mutate(&c1, cfg.mutation_rate, rng);
        let c2 = point_mutate(&c2, cfg.mutation_rate, rng);
        next.push(Organism::new(c1));
        if next.len() < n {
            next.push(Organism::new(c2));
        }
    }
    Ok(next)
}

/// Draws (or reuses) the sample, evaluates `pop`, and breeds the next
/// generation.
pub fn evolve_generation(
    pop: &[Organism],
    data: &TrainData,
    cfg: &GaConfig,
    rng: &mut ChaCha8Rng,
    fixed_sample: Option<&[usize]>,
    generation: usize,
    pool: &Pool,
) -> Result<(Vec<Organism>, GenerationStats), GaError> {
    cfg.validate(data.len())?;
    if pop.len() != cfg.population_size {
        return Err(GaError::Config(format!(
            "population has {} organisms, expected {}",
            pop.len(),
            cfg.population_size
        )));
    }
    let drawn;
    let sample = match fixed_sample {
        Some(s) => s,
        None => {
            drawn = draw_sample(rng, data.len(), cfg.sample_size);
            &drawn
        }
    };
    let (evaluated, stats) = assess(pop, data, sample, generation, pool);
    Ok((breed(&evaluated, cfg, rng)?, stats))
}

/// Generation loop state, resumable from a [`Checkpoint`].
pub struct Evolution {
    cfg: GaConfig,
    data: TrainData,
    population: Vec<Organism>,
    rng: ChaCha8Rng,
    fixed_sample: Option<Vec<usize>>,
    generation: usize,
    pool: Pool,
}

impl Evolution {
    pub fn new(cfg: GaConfig, train: &[ScoredPosition], pool: Pool) -> Result<Evolution, GaError> {
        cfg.validate(train.len())?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let population = (0..cfg.population_size)
            .map(|_| Organism::new(random_chromosome(&mut rng)))
            .collect();
        let fixed_sample = (!cfg.resample_each_generation)
            .then(|| draw_sample(&mut rng, train.len(), cfg.sample_size));
        Ok(Evolution {
            data: TrainData::new(train),
            cfg,
            population,
            rng,
            fixed_sample,
            generation: 0,
            pool,
        })
    }

    pub fn resume(
        cfg: GaConfig,
        train: &[ScoredPosition],
        ckpt: &Checkpoint,
        pool: Pool,
    ) -> Result<Evolution, GaError> {
        cfg.validate(train.len())?;
        if ckpt.population.len() != cfg.population_size {
            return Err(GaError::Config(format!(
                "checkpoint holds {} organisms, configuration expects {}",
                ckpt.population.len(),
                cfg.population_size
            )));
        }
        if let Some(s) = &ckpt.fixed_sample {
            if s.iter().any(|&i| i >= train.len()) {
                return Err(GaError::Config(
                    "checkpoint sample indexes past the training set".into(),
                ));
            }
        }
        Ok(Evolution {
            data: TrainData::new(train),
            cfg,
            population: ckpt.population.iter().map(|&c| Organism::new(c)).collect(),
            rng: ckpt.rng(),
            fixed_sample: ckpt.fixed_sample.clone(),
            generation: ckpt.generation,
            pool,
        })
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn population(&self) -> &[Organism] {
        &self.population
    }

    pub fn data(&self) -> &TrainData {
        &self.data
    }

    /// Evaluates the current generation, replaces it with the next one and
    /// returns the stats of the evaluated generation.
    pub fn step(&mut self) -> Result<GenerationStats, GaError> {
        let (next, stats) = evolve_generation(
            &self.population,
            &self.data,
            &self.cfg,
            &mut self.rng,
            self.fixed_sample.as_deref(),
            self.generation,
            &self.pool,
        )?;
        self.population = next;
        self.generation += 1;
        Ok(stats)
    }

    /// Evaluates the current generation without breeding.
    pub fn assess_current(&mut self) -> GenerationStats {
        let drawn;
        let sample = match &self.fixed_sample {
            Some(s) => s.as_slice(),
            None => {
                drawn = draw_sample(&mut self.rng, self.data.len(), self.cfg.sample_size);
                &drawn
            }
        };
        assess(
            &self.population,
            &self.data,
            sample,
            self.generation,
            &self.pool,
        )
        .1
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint::capture(
            self.generation,
            self.population.iter().map(|o| o.chromosome).collect(),
            &self.rng,
            self.fixed_sample.clone(),
        )
    }

    /// Picks the candidate with the lowest error on the whole training set;
    /// ties go to the earliest.
    pub fn best_of(&self, candidates: &[Chromosome]) -> Organism {
        let errors = self.pool.map(candidates, |c| self.data.full_error(c));
        let i = best_index(&errors);
        Organism {
            chromosome: candidates[i],
            error: Some(errors[i]),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionOutcome {
    /// Best generation leader, measured on the full training set.
    pub best: Organism,
    /// One row per generation, including the final one.
    pub history: Vec<GenerationStats>,
}

/// Runs `cfg.generations` generations from a random population and returns
/// `cfg.generations + 1` stats rows.
pub fn run_evolution(
    cfg: &GaConfig,
    train: &[ScoredPosition],
    pool: &Pool,
) -> Result<EvolutionOutcome, GaError> {
    let mut evo = Evolution::new(cfg.clone(), train, pool.clone())?;
    let mut history = Vec::with_capacity(cfg.generations + 1);
    for _ in 0..cfg.generations {
        history.push(evo.step()?);
    }
    history.push(evo.assess_current());
    let leaders: Vec<Chromosome> = history.iter().map(|s| s.best).collect();
    Ok(EvolutionOutcome {
        best: evo.best_of(&leaders),
        history,
    })
}

pub const LEARNING_CURVE_HEADER: &str = "generation,best_error,mean_error";

pub fn learning_curve_row(s: &GenerationStats) -> String {
    format!("{},{:.3},{:.3}", s.generation, s.best_error, s.mean_error)
}

pub fn learning_curve_csv(history: &[GenerationStats]) -> String {
    let mut out = format!("{LEARNING_CURVE_HEADER}\n");
    for s in history {
        writeln!(out, "{}", learning_curve_row(s)).ok();
    }
    out
}
