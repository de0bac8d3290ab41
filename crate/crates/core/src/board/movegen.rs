use super::attacks;
use super::position::{king_origin, rook_origins, Position};
use super::types::*;

impl Position {
    /// All legal moves in canonical order (origin, destination, promotion).
    pub fn legal_moves(&self) -> Vec<Move> {
        let us = self.side_to_move;
        let them = us.opponent();
        let mut moves = Vec::with_capacity(48);
        self.pseudo_legal(&mut moves);
        moves.retain(|&m| {
            let next = self.make_move_unchecked(m);
            !next.is_attacked(next.king_square(us), them)
        });
        moves.sort_unstable_by_key(Move::order_key);
        moves
    }

    /// True if the side to move has at least one legal move.
    pub fn has_legal_move(&self) -> bool {
        let us = self.side_to_move;
        let them = us.opponent();
        let mut moves = Vec::with_capacity(48);
        self.pseudo_legal(&mut moves);
        moves.into_iter().any(|m| {
            let next = self.make_move_unchecked(m);
            !next.is_attacked(next.king_square(us), them)
        })
    }

    /// Number of leaves of the legal move tree at `depth` plies.
    pub fn perft(&self, depth: u32) -> u64 {
        if depth == 0 {
            return 1;
        }
        let moves = self.legal_moves();
        if depth == 1 {
            return moves.len() as u64;
        }
        moves
            .into_iter()
            .map(|m| self.make_move_unchecked(m).perft(depth - 1))
            .sum()
    }

    fn pseudo_legal(&self, out: &mut Vec<Move>) {
        let us = self.side_to_move;
        let them = us.opponent();
        let own = self.occupancy(us);
        let enemy = self.occupancy(them);
        let occ = own | enemy;

        self.pawn_moves(out, enemy, occ);

        let mut push_targets = |from: Square, targets: Bitboard| {
            for to in squares(targets & !own) {
                let kind = if enemy & to.bb() != 0 {
                    MoveKind::Capture
                } else {
                    MoveKind::Normal
                };
                out.push(Move::new(from, to, kind));
            }
        };
        for from in squares(self.pieces(us, PieceKind::Knight)) {
            push_targets(from, attacks::knight(from));
        }
        for from in squares(self.pieces(us, PieceKind::Bishop)) {
            push_targets(from, attacks::bishop(from, occ));
        }
        for from in squares(self.pieces(us, PieceKind::Rook)) {
            push_targets(from, attacks::rook(from, occ));
        }
        for from in squares(self.pieces(us, PieceKind::Queen)) {
            push_targets(from, attacks::queen(from, occ));
        }
        let king = self.king_square(us);
        push_targets(king, attacks::king(king));

        self.castle_moves(out, occ);
    }

    fn pawn_moves(&self, out: &mut Vec<Move>, enemy: Bitboard, occ: Bitboard) {
        let us = self.side_to_move;
        let (forward, start_rank, promo_rank): (i8, u8, u8) = match us {
            Color::White => (1, 1, 7),
            Color::Black => (-1, 6, 0),
        };
        let push = |out: &mut Vec<Move>, from: Square, to: Square, capture: bool| {
            if to.rank() == promo_rank {
                let kind = if capture {
                    MoveKind::PromotionCapture
                } else {
                    MoveKind::Promotion
                };
                for promo in PieceKind::PROMOTIONS {
                    out.push(Move {
                        from,
                        to,
                        promotion: Some(promo),
                        kind,
                    });
                }
            } else {
                let kind = if capture {
                    MoveKind::Capture
                } else {
                    MoveKind::Normal
                };
                out.push(Move::new(from, to, kind));
            }
        };

        for from in squares(self.pieces(us, PieceKind::Pawn)) {
            if let Some(one) = from.offset(0, forward) {
                if occ & one.bb() == 0 {
                    push(out, from, one, false);
                    if from.rank() == start_rank {
                        let two = one.offset(0, forward).expect("double push stays on board");
                        if occ & two.bb() == 0 {
                            out.push(Move::new(from, two, MoveKind::DoublePawnPush));
                        }
                    }
                }
            }
            let att = attacks::pawn(us, from);
            for to in squares(att & enemy) {
                push(out, from, to, true);
            }
            if let Some(ep) = self.en_passant {
                if att & ep.bb() != 0 {
                    out.push(Move::new(from, ep, MoveKind::EnPassant));
                }
            }
        }
    }

    fn castle_moves(&self, out: &mut Vec<Move>, occ: Bitboard) {
        let us = self.side_to_move;
        let them = us.opponent();
        let king = king_origin(us);
        if self.pieces(us, PieceKind::King) & king.bb() == 0 {
            return;
        }
        let (rook_k, rook_q) = rook_origins(us);
        let rooks = self.pieces(us, PieceKind::Rook);
        let attacked = |sq: Square| self.is_attacked(sq, them);

        if self.castling.kingside(us) && rooks & rook_k.bb() != 0 {
            let f = Square(king.0 + 1);
            let g = Square(king.0 + 2);
            if occ & (f.bb() | g.bb()) == 0 && !attacked(king) && !attacked(f) {
                out.push(Move::new(king, g, MoveKind::CastleKingside));
            }
        }
        if self.castling.queenside(us) && rooks & rook_q.bb() != 0 {
            let d = Square(king.0 - 1);
            let c = Square(king.0 - 2);
            let b = Square(king.0 - 3);
            if occ & (d.bb() | c.bb() | b.bb()) == 0 && !attacked(king) && !attacked(d) {
                out.push(Move::new(king, c, MoveKind::CastleQueenside));
            }
        }
    }
}
