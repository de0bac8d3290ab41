//! Integer feature counts behind each evaluation parameter.
//!
//! Each feature is counted per side and stored as white minus black, so the
//! evaluation is an exact dot product of features and parameters. Terms
//! named `*_PENALTY`, and the three friendly-pawn king-shelter terms, are
//! counted with a negative sign for the owning side.
//!
//! Ranks are counted 1..=8 from the owning side's back rank. A pawn is
//! passed when no enemy pawn stands ahead of it on its own or an adjacent
//! file.

use std::ops::{Index, Neg};

use super::params::{Param, NUM_PARAMS};
use crate::board::*;

/// White-minus-black feature counts, one per parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FeatureVector(pub [i32; NUM_PARAMS]);

impl FeatureVector {
    pub fn zero() -> FeatureVector {
        FeatureVector([0; NUM_PARAMS])
    }

    #[inline]
    pub fn get(&self, p: Param) -> i32 {
        self.0[p.index()]
    }

    /// Dot product with a weight vector.
    #[inline]
    pub fn dot(&self, weights: &[i32; NUM_PARAMS]) -> i32 {
        self.0.iter().zip(weights).map(|(f, w)| f * w).sum()
    }
}

impl Index<Param> for FeatureVector {
    type Output = i32;

    fn index(&self, p: Param) -> &i32 {
        &self.0[p.index()]
    }
}

impl Neg for FeatureVector {
    type Output = FeatureVector;

    fn neg(self) -> FeatureVector {
        FeatureVector(self.0.map(|v| -v))
    }
}

/// Upper bound on the per-side magnitude of each feature over all legal
/// positions, so `|feature| ≤ FEATURE_BOUNDS[k]` for the white-minus-black
/// difference too.
pub const FEATURE_BOUNDS: [i32; NUM_PARAMS] = [
    8,   // pawns
    10,  // knights (2 + 8 promotions)
    10,  // bishops
    10,  // rooks
    9,   // queens
    48,  // 8 pawns, at most 6 ranks advanced
    48,  //
    56,  // 8 passed pawns on rank 7
    7,   // doubled: 8 pawns on one file
    8,   // isolated
    8,   // backward
    16,  // weak squares: 4 files x 4 ranks
    56,  // 8 passed pawns x distance 7
    30,  // 10 knights x ring 3
    30,  //
    130, // 10 bishops x 13 squares
    1,   //
    10,  // rooks
    10,  //
    10,  //
    10,  //
    1,   //
    140, // 10 rooks x 14 squares
    10,  //
    10,  //
    10,  //
    10,  //
    30,  // 10 rooks x file index 3
    243, // 9 queens x 27 squares
    1,   //
    2,   // two adjacent files
    3,   // one pawn per shelter file on the third rank
    1,   //
    2,   //
    128, // 16 pieces x 8 king-zone squares
];

#[inline]
fn adjacent_files(file: u8) -> Bitboard {
    let mut m = 0;
    if file > 0 {
        m |= file_mask(file - 1);
    }
    if file < 7 {
        m |= file_mask(file + 1);
    }
    m
}

/// Squares on `rank`-relative ranks strictly ahead of `sq` for `color`.
#[inline]
fn ranks_ahead(color: Color, sq: Square) -> Bitboard {
    match color {
        Color::White => {
            if sq.rank() == 7 {
                0
            } else {
                !0u64 << (8 * (sq.rank() + 1))
            }
        }
        Color::Black => (1u64 << (8 * sq.rank())) - 1,
    }
}

/// Squares on ranks at or behind `sq` for `color` (including its own rank).
#[inline]
fn ranks_at_or_behind(color: Color, sq: Square) -> Bitboard {
    !ranks_ahead(color, sq)
}

#[inline]
pub(crate) fn is_passed(p: &Position, color: Color, sq: Square) -> bool {
    let span = (file_mask(sq.file()) | adjacent_files(sq.file())) & ranks_ahead(color, sq);
    p.pieces(color.opponent(), PieceKind::Pawn) & span == 0
}

/// 0 on the edge ring up to 3 on the four centre squares.
#[inline]
fn ring(sq: Square) -> i32 {
    let f = sq.file().min(7 - sq.file());
    let r = sq.rank().min(7 - sq.rank());
    f.min(r) as i32
}

#[inline]
fn file_centrality(file: u8) -> i32 {
    file.min(7 - file) as i32
}

fn side_features(p: &Position, us: Color) -> [i32; NUM_PARAMS] {
    use Param::*;
    let them = us.opponent();
    let mut f = [0i32; NUM_PARAMS];
    let own_pawns = p.pieces(us, PieceKind::Pawn);
    let enemy_pawns = p.pieces(them, PieceKind::Pawn);
    let own = p.occupancy(us);
    let occ = p.occupied();
    let enemy_king = p.king_square(them);
    let own_king = p.king_square(us);
    let zone = king_attacks(enemy_king);

    for (i, kind) in PieceKind::ALL[..5].iter().enumerate() {
        f[i] = p.pieces(us, *kind).count_ones() as i32;
    }

    let mut passed_pawns = 0u64;
    for sq in squares(own_pawns) {
        let r = sq.relative_rank(us) as i32;
        if is_passed(p, us, sq) {
            passed_pawns |= sq.bb();
            f[PawnAdvanceB as usize] += r - 1;
            f[PassedPawnMult as usize] += r;
            f[PassedPawnEnemyKingDist as usize] += enemy_king.chebyshev(sq) as i32;
        } else {
            f[PawnAdvanceA as usize] += r - 1;
        }
        let adj = adjacent_files(sq.file());
        if own_pawns & adj == 0 {
            f[IsolatedPawnPenalty as usize] -= 1;
        }
        let stop = match us {
            Color::White => Square(sq.0 + 8),
            Color::Black => Square(sq.0 - 8),
        };
        let stop_attacked = pawn_attacks(us, stop) & enemy_pawns != 0;
        let supportable = own_pawns & adj & ranks_at_or_behind(us, sq) != 0;
        if stop_attacked && !supportable {
            f[BackwardPawnPenalty as usize] -= 1;
        }
        f[KingPressureMult as usize] += (pawn_attacks(us, sq) & zone).count_ones() as i32;
    }
    for file in 0..8 {
        let n = (own_pawns & file_mask(file)).count_ones() as i32;
        if n > 1 {
            f[DoubledPawnPenalty as usize] -= n - 1;
        }
    }
    // Own half, files c..f: weak if no own pawn on an adjacent file stands
    // behind the square.
    for rel in 1..=4u8 {
        let rank = match us {
            Color::White => rel - 1,
            Color::Black => 8 - rel,
        };
        for file in 2..=5u8 {
            let sq = Square::new(file, rank);
            let coverers = own_pawns & adjacent_files(file) & ranks_ahead(them, sq);
            if coverers == 0 {
                f[WeakSquarePenalty as usize] -= 1;
            }
        }
    }

    for sq in squares(p.pieces(us, PieceKind::Knight)) {
        let ring = ring(sq);
        f[KnightSqMult as usize] += ring;
        let defended = pawn_attacks(them, sq) & own_pawns != 0;
        let attackable = enemy_pawns & adjacent_files(sq.file()) & ranks_ahead(us, sq) != 0;
        if sq.relative_rank(us) >= 5 && defended && !attackable {
            f[KnightOutpostMult as usize] += ring;
        }
        f[KingPressureMult as usize] += (knight_attacks(sq) & zone).count_ones() as i32;
    }

    let bishops = p.pieces(us, PieceKind::Bishop);
    for sq in squares(bishops) {
        let att = bishop_attacks(sq, occ);
        f[BishopMobility as usize] += (att & !own).count_ones() as i32;
        f[KingPressureMult as usize] += (att & zone).count_ones() as i32;
    }
    if bishops.count_ones() >= 2 {
        f[BishopPair as usize] = 1;
    }

    let rooks = p.pieces(us, PieceKind::Rook);
    let ek_file = enemy_king.file();
    for sq in squares(rooks) {
        let file = sq.file();
        let file_bb = file_mask(file);
        let att = rook_attacks(sq, occ);
        if file == ek_file {
            f[RookAttackKingFile as usize] += 1;
        }
        if file.abs_diff(ek_file) == 1 {
            f[RookAttackKingAdjFile as usize] += 1;
            if matches!(ek_file, 0 | 1 | 6 | 7) {
                f[RookAttackKingAdjFileAbgh as usize] += 1;
            }
        }
        if sq.relative_rank(us) == 7 {
            f[Rook7thRank as usize] += 1;
        }
        if att & rooks != 0 {
            f[RookConnected as usize] = 1;
        }
        f[RookMobility as usize] += (att & !own).count_ones() as i32;
        if passed_pawns & file_bb & ranks_ahead(us, sq) != 0 {
            f[RookBehindPassedPawn as usize] += 1;
        }
        let own_on_file = own_pawns & file_bb;
        let enemy_on_file = enemy_pawns & file_bb;
        if own_on_file == 0 && enemy_on_file == 0 {
            f[RookOpenFile as usize] += 1;
        }
        if own_on_file == 0 && enemy_on_file != 0 {
            f[RookSemiOpenFile as usize] += 1;
            let weak = squares(enemy_on_file).any(|e| pawn_attacks(us, e) & enemy_pawns == 0);
            if weak {
                f[RookAtckWeakPawnOpenColumn as usize] += 1;
            }
        }
        f[RookColumnMult as usize] += file_centrality(file);
        f[KingPressureMult as usize] += (att & zone).count_ones() as i32;
    }

    for sq in squares(p.pieces(us, PieceKind::Queen)) {
        let att = queen_attacks(sq, occ);
        f[QueenMobility as usize] += (att & !own).count_ones() as i32;
        f[KingPressureMult as usize] += (att & zone).count_ones() as i32;
    }
    f[KingPressureMult as usize] += (king_attacks(own_king) & zone).count_ones() as i32;

    let kf = own_king.file();
    if own_pawns & file_mask(kf) == 0 {
        f[KingNoFriendlyPawn as usize] = -1;
    }
    if enemy_pawns & file_mask(kf) == 0 {
        f[KingNoEnemyPawn as usize] = 1;
    }
    for adj in [kf.checked_sub(1), (kf < 7).then_some(kf + 1)]
        .into_iter()
        .flatten()
    {
        if own_pawns & file_mask(adj) == 0 {
            f[KingNoFriendlyPawnAdj as usize] -= 1;
        }
        if enemy_pawns & file_mask(adj) == 0 {
            f[KingNoEnemyPawnAdj as usize] += 1;
        }
    }
    let shelter_files = file_mask(kf) | adjacent_files(kf);
    let third = match us {
        Color::White => rank_mask(2),
        Color::Black => rank_mask(5),
    };
    f[KingFriendlyPawnAdvanced1 as usize] =
        -((own_pawns & shelter_files & third).count_ones() as i32);

    f
}

/// Feature counts for `p`, white minus black. Independent of side to move.
pub fn extract_features(p: &Position) -> FeatureVector {
    let w = side_features(p, Color::White);
    let b = side_features(p, Color::Black);
    let mut out = [0; NUM_PARAMS];
    for k in 0..NUM_PARAMS {
        out[k] = w[k] - b[k];
    }
    FeatureVector(out)
}
