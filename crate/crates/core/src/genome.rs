//! 230-bit chromosome encoding of [`EvalParams`] and the genetic operators.
//!
//! Layout: the 5 material parameters take 10 bits each, followed by the 30
//! positional parameters at 6 bits each, in [`Param`] order. Each field is an
//! unsigned integer, most significant bit first. Every bit string decodes to
//! an in-bounds parameter set, so the codec is a bijection.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::eval::{EvalParams, Param, ParamError, NUM_PARAMS};

pub const CHROMOSOME_BITS: usize = 230;
const WORDS: usize = CHROMOSOME_BITS.div_ceil(64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenomeError {
    #[error("chromosome must have {CHROMOSOME_BITS} bits, got {0}")]
    WrongLength(usize),
    #[error("invalid chromosome character {0:?} at position {1}")]
    BadChar(char, usize),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Exactly 230 bits, packed.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Chromosome([u64; WORDS]);

/// Start bit of each parameter's field.
fn field_start(p: Param) -> usize {
    Param::ALL[..p.index()]
        .iter()
        .map(|q| q.bits() as usize)
        .sum()
}

impl Chromosome {
    pub fn zeros() -> Chromosome {
        Chromosome([0; WORDS])
    }

    pub fn ones() -> Chromosome {
        let mut c = Chromosome([!0; WORDS]);
        c.clear_padding();
        c
    }

    fn clear_padding(&mut self) {
        let used = CHROMOSOME_BITS % 64;
        if used != 0 {
            self.0[WORDS - 1] &= (1u64 << used) - 1;
        }
    }

    pub fn len(&self) -> usize {
        CHROMOSOME_BITS
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < CHROMOSOME_BITS);
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set_bit(&mut self, i: usize, value: bool) {
        assert!(i < CHROMOSOME_BITS);
        let mask = 1u64 << (i % 64);
        if value {
            self.0[i / 64] |= mask;
        } else {
            self.0[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip_bit(&mut self, i: usize) {
        assert!(i < CHROMOSOME_BITS);
        self.0[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn from_bits(bits: &[bool]) -> Result<Chromosome, GenomeError> {
        if bits.len() != CHROMOSOME_BITS {
            return Err(GenomeError::WrongLength(bits.len()));
        }
        let mut c = Chromosome::zeros();
        for (i, &b) in bits.iter().enumerate() {
            c.set_bit(i, b);
        }
        Ok(c)
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..CHROMOSOME_BITS).map(|i| self.bit(i)).collect()
    }

    pub fn count_ones(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    /// Bitwise complement.
    pub fn complement(&self) -> Chromosome {
        let mut c = Chromosome(self.0.map(|w| !w));
        c.clear_padding();
        c
    }

    fn read_field(&self, start: usize, width: usize) -> i32 {
        (0..width).fold(0, |acc, j| (acc << 1) | self.bit(start + j) as i32)
    }

    fn write_field(&mut self, start: usize, width: usize, value: i32) {
        for j in 0..width {
            self.set_bit(start + j, (value >> (width - 1 - j)) & 1 == 1);
        }
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..CHROMOSOME_BITS)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chromosome({self})")
    }
}

impl FromStr for Chromosome {
    type Err = GenomeError;

    /// Parses a 230-character string of `0` and `1`.
    fn from_str(s: &str) -> Result<Chromosome, GenomeError> {
        let s = s.trim();
        let n = s.chars().count();
        if n != CHROMOSOME_BITS {
            return Err(GenomeError::WrongLength(n));
        }
        let mut c = Chromosome::zeros();
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => c.set_bit(i, true),
                other => return Err(GenomeError::BadChar(other, i)),
            }
        }
        Ok(c)
    }
}

pub fn encode(params: &EvalParams) -> Chromosome {
    let mut c = Chromosome::zeros();
    for p in Param::ALL {
        c.write_field(field_start(p), p.bits() as usize, params.get(p));
    }
    c
}

/// Encodes raw values, rejecting any outside its field width.
pub fn encode_values(values: [i32; NUM_PARAMS]) -> Result<Chromosome, GenomeError> {
    Ok(encode(&EvalParams::new(values)?))
}

pub fn decode(c: &Chromosome) -> EvalParams {
    let mut v = [0; NUM_PARAMS];
    for p in Param::ALL {
        v[p.index()] = c.read_field(field_start(p), p.bits() as usize);
    }
    EvalParams::new(v).expect("every field value fits its bound")
}

/// Decodes an unpacked bit string, which must be exactly 230 long.
pub fn decode_bits(bits: &[bool]) -> Result<EvalParams, GenomeError> {
    Ok(decode(&Chromosome::from_bits(bits)?))
}

/// 230 independent fair bits.
pub fn random_chromosome<R: Rng + ?Sized>(rng: &mut R) -> Chromosome {
    let mut c = Chromosome([0; WORDS]);
    for w in c.0.iter_mut() {
        *w = rng.gen();
    }
    c.clear_padding();
    c
}

/// The chromosome drawn by a generator seeded with `seed`.
pub fn seeded_chromosome(seed: u64) -> Chromosome {
    random_chromosome(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
}

/// Children take `a[..cut] + b[cut..]` and `b[..cut] + a[cut..]`.
pub fn crossover_at(a: &Chromosome, b: &Chromosome, cut: usize) -> (Chromosome, Chromosome) {
    assert!(cut <= CHROMOSOME_BITS);
    let mut c1 = *a;
    let mut c2 = *b;
    for i in cut..CHROMOSOME_BITS {
        c1.set_bit(i, b.bit(i));
        c2.set_bit(i, a.bit(i));
    }
    (c1, c2)
}

/// Single-point crossover with the cut drawn uniformly from `1..=229`.
pub fn single_point_crossover<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    let cut = rng.gen_range(1..CHROMOSOME_BITS);
    crossover_at(a, b, cut)
}

/// Flips each bit independently with probability `rate`. One uniform draw is
/// consumed per bit regardless of the rate.
pub fn point_mutate<R: Rng + ?Sized>(c: &Chromosome, rate: f64, rng: &mut R) -> Chromosome {
    assert!(
        (0.0..=1.0).contains(&rate),
        "mutation rate must lie in [0, 1]"
    );
    let mut out = *c;
    for i in 0..CHROMOSOME_BITS {
        let u: f64 = rng.gen();
        if u < rate {
            out.flip_bit(i);
        }
    }
    out
}
