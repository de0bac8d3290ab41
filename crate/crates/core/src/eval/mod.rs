//! Linear evaluation: integer feature counts dotted with 35 parameters.

mod features;
#[cfg(test)]
mod naive;
mod params;

pub use features::{extract_features, FeatureVector, FEATURE_BOUNDS};
pub use params::{
    EvalParams, Param, ParamError, MATERIAL_BITS, NUM_MATERIAL, NUM_PARAMS, POSITIONAL_BITS,
};

use crate::board::Position;

/// Score in centipawns from the side to move's point of view.
#[inline]
pub fn evaluate(p: &Position, params: &EvalParams) -> i32 {
    score_features(&extract_features(p), p.side_to_move().sign(), params)
}

/// Score in centipawns from white's point of view. Unlike [`evaluate`], this
/// changes sign under [`Position::mirror`].
#[inline]
pub fn evaluate_white(p: &Position, params: &EvalParams) -> i32 {
    score_features(&extract_features(p), 1, params)
}

/// `sign` is +1 when white is to move, -1 otherwise.
#[inline]
pub fn score_features(f: &FeatureVector, sign: i32, params: &EvalParams) -> i32 {
    sign * f.dot(params.values())
}

/// Largest `|evaluate|` any position can produce under `params`.
pub fn score_bound(params: &EvalParams) -> i64 {
    FEATURE_BOUNDS
        .iter()
        .zip(params.values())
        .map(|(&b, &v)| b as i64 * v as i64)
        .sum()
}
