use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const NUM_PARAMS: usize = 35;
pub const NUM_MATERIAL: usize = 5;

/// Bit width of each parameter's field: 10 for material, 6 for the rest.
pub const MATERIAL_BITS: u32 = 10;
pub const POSITIONAL_BITS: u32 = 6;

macro_rules! params {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// One evaluation term. The discriminant is the term's index in
        /// [`EvalParams`] and in the chromosome layout.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        #[repr(usize)]
        pub enum Param {
            $($variant),*
        }

        impl Param {
            pub const ALL: [Param; NUM_PARAMS] = [$(Param::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Param::$variant => $name),*
                }
            }
        }
    };
}

params! {
    PawnValue => "PAWN_VALUE",
    KnightValue => "KNIGHT_VALUE",
    BishopValue => "BISHOP_VALUE",
    RookValue => "ROOK_VALUE",
    QueenValue => "QUEEN_VALUE",
    PawnAdvanceA => "PAWN_ADVANCE_A",
    PawnAdvanceB => "PAWN_ADVANCE_B",
    PassedPawnMult => "PASSED_PAWN_MULT",
    DoubledPawnPenalty => "DOUBLED_PAWN_PENALTY",
    IsolatedPawnPenalty => "ISOLATED_PAWN_PENALTY",
    BackwardPawnPenalty => "BACKWARD_PAWN_PENALTY",
    WeakSquarePenalty => "WEAK_SQUARE_PENALTY",
    PassedPawnEnemyKingDist => "PASSED_PAWN_ENEMY_KING_DIST",
    KnightSqMult => "KNIGHT_SQ_MULT",
    KnightOutpostMult => "KNIGHT_OUTPOST_MULT",
    BishopMobility => "BISHOP_MOBILITY",
    BishopPair => "BISHOP_PAIR",
    RookAttackKingFile => "ROOK_ATTACK_KING_FILE",
    RookAttackKingAdjFile => "ROOK_ATTACK_KING_ADJ_FILE",
    RookAttackKingAdjFileAbgh => "ROOK_ATTACK_KING_ADJ_FILE_ABGH",
    Rook7thRank => "ROOK_7TH_RANK",
    RookConnected => "ROOK_CONNECTED",
    RookMobility => "ROOK_MOBILITY",
    RookBehindPassedPawn => "ROOK_BEHIND_PASSED_PAWN",
    RookOpenFile => "ROOK_OPEN_FILE",
    RookSemiOpenFile => "ROOK_SEMI_OPEN_FILE",
    RookAtckWeakPawnOpenColumn => "ROOK_ATCK_WEAK_PAWN_OPEN_COLUMN",
    RookColumnMult => "ROOK_COLUMN_MULT",
    QueenMobility => "QUEEN_MOBILITY",
    KingNoFriendlyPawn => "KING_NO_FRIENDLY_PAWN",
    KingNoFriendlyPawnAdj => "KING_NO_FRIENDLY_PAWN_ADJ",
    KingFriendlyPawnAdvanced1 => "KING_FRIENDLY_PAWN_ADVANCED1",
    KingNoEnemyPawn => "KING_NO_ENEMY_PAWN",
    KingNoEnemyPawnAdj => "KING_NO_ENEMY_PAWN_ADJ",
    KingPressureMult => "KING_PRESSURE_MULT",
}

impl Param {
    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn bits(self) -> u32 {
        if self.index() < NUM_MATERIAL {
            MATERIAL_BITS
        } else {
            POSITIONAL_BITS
        }
    }

    /// Largest value representable in the parameter's bit field.
    pub fn max_value(self) -> i32 {
        (1 << self.bits()) - 1
    }

    pub fn from_name(name: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("{param} = {value} is outside 0..={max}")]
    OutOfRange { param: Param, value: i64, max: i32 },
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("missing parameter {0}")]
    Missing(Param),
}

/// The 35 evaluation weights, each within its bit-width bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EvalParams([i32; NUM_PARAMS]);

impl EvalParams {
    /// Reference weights; the default hidden target for recovery runs.
    pub const REFERENCE: [i32; NUM_PARAMS] = [
        83, 322, 323, 478, 954, 2, 4, 5, 21, 10, 3, 7, 5, 7, 8, 5, 44, 30, 1, 21, 32, 2, 2, 48, 12,
        6, 7, 3, 0, 27, 17, 12, 11, 3, 8,
    ];

    pub fn new(values: [i32; NUM_PARAMS]) -> Result<EvalParams, ParamError> {
        for p in Param::ALL {
            let v = values[p.index()];
            if v < 0 || v > p.max_value() {
                return Err(ParamError::OutOfRange {
                    param: p,
                    value: v as i64,
                    max: p.max_value(),
                });
            }
        }
        Ok(EvalParams(values))
    }

    pub fn zero() -> EvalParams {
        EvalParams([0; NUM_PARAMS])
    }

    pub fn reference() -> EvalParams {
        EvalParams(Self::REFERENCE)
    }

    /// Every parameter at its field maximum.
    pub fn max() -> EvalParams {
        let mut v = [0; NUM_PARAMS];
        for p in Param::ALL {
            v[p.index()] = p.max_value();
        }
        EvalParams(v)
    }

    #[inline]
    pub fn get(&self, p: Param) -> i32 {
        self.0[p.index()]
    }

    pub fn set(&mut self, p: Param, value: i32) -> Result<(), ParamError> {
        if value < 0 || value > p.max_value() {
            return Err(ParamError::OutOfRange {
                param: p,
                value: value as i64,
                max: p.max_value(),
            });
        }
        self.0[p.index()] = value;
        Ok(())
    }

    #[inline]
    pub fn values(&self) -> &[i32; NUM_PARAMS] {
        &self.0
    }

    /// Parses the `NAME value` text format. Lines may appear in any order;
    /// `#` starts a comment. Every parameter must be present exactly once.
    pub fn parse(text: &str) -> Result<EvalParams, ParamError> {
        let mut values: [Option<i32>; NUM_PARAMS] = [None; NUM_PARAMS];
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |reason: String| ParamError::Syntax {
                line: line_no,
                reason,
            };
            let mut parts = line.split_whitespace();
            let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(syntax(format!("expected `NAME value`, got {line:?}")));
            };
            let param = Param::from_name(name)
                .ok_or_else(|| syntax(format!("unknown parameter {name:?}")))?;
            let value: i64 = value
                .parse()
                .map_err(|_| syntax(format!("invalid value {value:?} for {name}")))?;
            if value < 0 || value > param.max_value() as i64 {
                return Err(ParamError::OutOfRange {
                    param,
                    value,
                    max: param.max_value(),
                });
            }
            if values[param.index()].replace(value as i32).is_some() {
                return Err(syntax(format!("duplicate parameter {name}")));
            }
        }
        let mut out = [0; NUM_PARAMS];
        for p in Param::ALL {
            out[p.index()] = values[p.index()].ok_or(ParamError::Missing(p))?;
        }
        Ok(EvalParams(out))
    }
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams::zero()
    }
}

impl fmt::Display for EvalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in Param::ALL {
            writeln!(f, "{:<32} {:>4}", p.name(), self.get(p))?;
        }
        Ok(())
    }
}

impl FromStr for EvalParams {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EvalParams::parse(s)
    }
}
