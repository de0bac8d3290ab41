//! Plain-text checkpoint: generation index, generator state, optional fixed
//! sample, and the population as bit strings.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::GaError;
use crate::genome::Chromosome;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub generation: usize,
    pub population: Vec<Chromosome>,
    pub rng_seed: [u8; 32],
    pub rng_stream: u64,
    pub rng_word_pos: u128,
    pub fixed_sample: Option<Vec<usize>>,
}

impl Checkpoint {
    pub(crate) fn capture(
        generation: usize,
        population: Vec<Chromosome>,
        rng: &ChaCha8Rng,
        fixed_sample: Option<Vec<usize>>,
    ) -> Checkpoint {
        Checkpoint {
            generation,
            population,
            rng_seed: rng.get_seed(),
            rng_stream: rng.get_stream(),
            rng_word_pos: rng.get_word_pos(),
            fixed_sample,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.rng_seed);
        rng.set_stream(self.rng_stream);
        rng.set_word_pos(self.rng_word_pos);
        rng
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "generation {}", self.generation).ok();
        let seed: String = self.rng_seed.iter().map(|b| format!("{b:02x}")).collect();
        writeln!(out, "rng_seed {seed}").ok();
        writeln!(out, "rng_stream {}", self.rng_stream).ok();
        writeln!(out, "rng_word_pos {}", self.rng_word_pos).ok();
        match &self.fixed_sample {
            Some(s) => {
                let idx: Vec<String> = s.iter().map(usize::to_string).collect();
                writeln!(out, "fixed_sample {}", idx.join(" ")).ok();
            }
            None => out.push_str("fixed_sample none\n"),
        }
        writeln!(out, "population {}", self.population.len()).ok();
        for c in &self.population {
            writeln!(out, "{c}").ok();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Checkpoint, GaError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let mut field = |key: &str| -> Result<(usize, String), GaError> {
            let (line, l) = lines.next().ok_or(GaError::Checkpoint {
                line: 0,
                reason: format!("missing {key}"),
            })?;
            let rest = l.strip_prefix(key).and_then(|r| r.strip_prefix(' '));
            rest.map(|r| (line, r.to_string()))
                .ok_or(GaError::Checkpoint {
                    line,
                    reason: format!("expected `{key} ...`"),
                })
        };
        let bad = |line: usize, what: &str| GaError::Checkpoint {
            line,
            reason: format!("invalid {what}"),
        };

        let (l, v) = field("generation")?;
        let generation = v.parse().map_err(|_| bad(l, "generation"))?;
        let (l, v) = field("rng_seed")?;
        if v.len() != 64 {
            return Err(bad(l, "seed"));
        }
        let mut rng_seed = [0u8; 32];
        for (i, b) in rng_seed.iter_mut().enumerate() {
            *b = u8::from_str_radix(&v[2 * i..2 * i + 2], 16).map_err(|_| bad(l, "seed"))?;
        }
        let (l, v) = field("rng_stream")?;
        let rng_stream = v.parse().map_err(|_| bad(l, "stream"))?;
        let (l, v) = field("rng_word_pos")?;
        let rng_word_pos = v.parse().map_err(|_| bad(l, "word position"))?;
        let (l, v) = field("fixed_sample")?;
        let fixed_sample = if v == "none" {
            None
        } else {
            Some(
                v.split_whitespace()
                    .map(|t| t.parse().map_err(|_| bad(l, "sample index")))
                    .collect::<Result<Vec<usize>, _>>()?,
            )
        };
        let (l, v) = field("population")?;
        let n: usize = v.parse().map_err(|_| bad(l, "population size"))?;
        let mut population = Vec::with_capacity(n);
        for _ in 0..n {
            let (line, s) = lines.next().ok_or(GaError::Checkpoint {
                line: 0,
                reason: format!("expected {n} chromosomes"),
            })?;
            population.push(s.parse().map_err(|e| GaError::Checkpoint {
                line,
                reason: format!("{e}"),
            })?);
        }
        Ok(Checkpoint {
            generation,
            population,
            rng_seed,
            rng_stream,
            rng_word_pos,
            fixed_sample,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::board::random_position;
    use crate::eval::EvalParams;
    use crate::expert::score_static;

    #[test]
    fn resume_reproduces_uninterrupted_run() {
        let hidden = EvalParams::reference();
        let sample: Vec<ScoredPosition> = (0..80)
            .map(|s| {
                let p = random_position(s, 4, 60);
                ScoredPosition::new(p, score_static(&p, &hidden), "t")
            })
            .collect();
        for resample in [true, false] {
            let cfg = GaConfig {
                population_size: 12,
                sample_size: 30,
                resample_each_generation: resample,
                seed: 9,
                ..GaConfig::default()
            };
            let mut a = Evolution::new(cfg.clone(), &sample, Pool::sequential()).unwrap();
            let mut full = Vec::new();
            for _ in 0..6 {
                full.push(a.step().unwrap());
            }

            let mut b = Evolution::new(cfg.clone(), &sample, Pool::sequential()).unwrap();
            let mut resumed = Vec::new();
            for _ in 0..3 {
                resumed.push(b.step().unwrap());
            }
            let text = b.checkpoint().to_text();
            let ckpt = Checkpoint::parse(&text).unwrap();
            assert_eq!(ckpt, b.checkpoint());
            let mut c = Evolution::resume(cfg, &sample, &ckpt, Pool::new(2)).unwrap();
            assert_eq!(c.generation(), 3);
            for _ in 0..3 {
                resumed.push(c.step().unwrap());
            }
            assert_eq!(full, resumed);
        }
    }

    #[test]
    fn malformed() {
        assert!(Checkpoint::parse("").is_err());
        let err = Checkpoint::parse("generation x\n").unwrap_err();
        assert_eq!(
            err,
            GaError::Checkpoint {
                line: 1,
                reason: "invalid generation".into()
            }
        );
    }
}
