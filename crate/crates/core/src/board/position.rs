use super::attacks;
use super::types::*;
use super::BoardError;

/// Full game state. A plain value: every operation returns a new position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    pub(crate) pieces: [[Bitboard; 6]; 2],
    pub(crate) side_to_move: Color,
    pub(crate) castling: CastlingRights,
    pub(crate) en_passant: Option<Square>,
    pub(crate) halfmove_clock: u32,
    pub(crate) fullmove_number: u32,
}

pub(crate) const WHITE_KING_ORIGIN: Square = Square(4);
pub(crate) const BLACK_KING_ORIGIN: Square = Square(60);

pub(crate) fn king_origin(color: Color) -> Square {
    match color {
        Color::White => WHITE_KING_ORIGIN,
        Color::Black => BLACK_KING_ORIGIN,
    }
}

/// Origin squares of the (kingside, queenside) rooks.
pub(crate) fn rook_origins(color: Color) -> (Square, Square) {
    match color {
        Color::White => (Square(7), Square(0)),
        Color::Black => (Square(63), Square(56)),
    }
}

impl Default for Position {
    fn default() -> Self {
        Position::startpos()
    }
}

impl Position {
    pub fn startpos() -> Position {
        let mut pieces = [[0u64; 6]; 2];
        pieces[0][PieceKind::Pawn.index()] = rank_mask(1);
        pieces[1][PieceKind::Pawn.index()] = rank_mask(6);
        let back = [
            (PieceKind::Rook, 0x81u64),
            (PieceKind::Knight, 0x42),
            (PieceKind::Bishop, 0x24),
            (PieceKind::Queen, 0x08),
            (PieceKind::King, 0x10),
        ];
        for (kind, mask) in back {
            pieces[0][kind.index()] = mask;
            pieces[1][kind.index()] = mask << 56;
        }
        Position {
            pieces,
            side_to_move: Color::White,
            castling: CastlingRights::ALL,
            en_passant: None,
            halfmove_clock: 0,
            fullmove_number: 1,
        }
    }

    /// An empty board with white to move; used by the FEN parser.
    pub(crate) fn empty() -> Position {
        Position {
            pieces: [[0; 6]; 2],
            side_to_move: Color::White,
            castling: CastlingRights::NONE,
            en_passant: None,
            halfmove_clock: 0,
            fullmove_number: 1,
        }
    }

    #[inline]
    pub fn side_to_move(&self) -> Color {
        self.side_to_move
    }

    #[inline]
    pub fn castling_rights(&self) -> CastlingRights {
        self.castling
    }

    #[inline]
    pub fn en_passant(&self) -> Option<Square> {
        self.en_passant
    }

    #[inline]
    pub fn halfmove_clock(&self) -> u32 {
        self.halfmove_clock
    }

    #[inline]
    pub fn fullmove_number(&self) -> u32 {
        self.fullmove_number
    }

    #[inline]
    pub fn pieces(&self, color: Color, kind: PieceKind) -> Bitboard {
        self.pieces[color.index()][kind.index()]
    }

    #[inline]
    pub fn occupancy(&self, color: Color) -> Bitboard {
        self.pieces[color.index()].iter().fold(0, |a, b| a | b)
    }

    #[inline]
    pub fn occupied(&self) -> Bitboard {
        self.occupancy(Color::White) | self.occupancy(Color::Black)
    }

    #[inline]
    pub fn pawns(&self) -> Bitboard {
        self.pieces(Color::White, PieceKind::Pawn) | self.pieces(Color::Black, PieceKind::Pawn)
    }

    pub fn piece_at(&self, sq: Square) -> Option<Piece> {
        let bit = sq.bb();
        for color in Color::ALL {
            for kind in PieceKind::ALL {
                if self.pieces(color, kind) & bit != 0 {
                    return Some(Piece { color, kind });
                }
            }
        }
        None
    }

    /// Square of `color`'s king. Valid positions always have exactly one.
    #[inline]
    pub fn king_square(&self, color: Color) -> Square {
        Square(self.pieces(color, PieceKind::King).trailing_zeros() as u8)
    }

    /// All pieces of `by` attacking `sq` with the given occupancy.
    pub fn attackers(&self, sq: Square, by: Color, occupied: Bitboard) -> Bitboard {
        let p = |k| self.pieces(by, k);
        let diag = p(PieceKind::Bishop) | p(PieceKind::Queen);
        let straight = p(PieceKind::Rook) | p(PieceKind::Queen);
        (attacks::pawn(by.opponent(), sq) & p(PieceKind::Pawn))
            | (attacks::knight(sq) & p(PieceKind::Knight))
            | (attacks::king(sq) & p(PieceKind::King))
            | (attacks::bishop(sq, occupied) & diag)
            | (attacks::rook(sq, occupied) & straight)
    }

    #[inline]
    pub fn is_attacked(&self, sq: Square, by: Color) -> bool {
        self.attackers(sq, by, self.occupied()) != 0
    }

    pub fn in_check(&self) -> bool {
        let us = self.side_to_move;
        self.is_attacked(self.king_square(us), us.opponent())
    }

    pub(crate) fn put(&mut self, sq: Square, piece: Piece) {
        self.pieces[piece.color.index()][piece.kind.index()] |= sq.bb();
    }

    fn remove_any(&mut self, color: Color, sq: Square) {
        let mask = !sq.bb();
        for bb in self.pieces[color.index()].iter_mut() {
            *bb &= mask;
        }
    }

    fn kind_at(&self, color: Color, sq: Square) -> Option<PieceKind> {
        PieceKind::ALL
            .into_iter()
            .find(|&k| self.pieces(color, k) & sq.bb() != 0)
    }

    /// Plays `m` without checking legality. `m` must come from the move
    /// generator for this position.
    pub(crate) fn make_move_unchecked(&self, m: Move) -> Position {
        let mut next = *self;
        let us = self.side_to_move;
        let them = us.opponent();
        let moving = self
            .kind_at(us, m.from)
            .expect("move origin holds a piece of the side to move");

        match m.kind {
            MoveKind::EnPassant => {
                let victim = match us {
                    Color::White => Square(m.to.0 - 8),
                    Color::Black => Square(m.to.0 + 8),
                };
                next.remove_any(them, victim);
            }
            k if k.is_capture() => next.remove_any(them, m.to),
            _ => {}
        }

        let from_to = m.from.bb() | m.to.bb();
        next.pieces[us.index()][moving.index()] ^= from_to;
        if let Some(promo) = m.promotion {
            next.pieces[us.index()][PieceKind::Pawn.index()] &= !m.to.bb();
            next.pieces[us.index()][promo.index()] |= m.to.bb();
        }

        let (rook_k, rook_q) = rook_origins(us);
        match m.kind {
            MoveKind::CastleKingside => {
                let rook_to = Square(rook_k.0 - 2);
                next.pieces[us.index()][PieceKind::Rook.index()] ^= rook_k.bb() | rook_to.bb();
            }
            MoveKind::CastleQueenside => {
                let rook_to = Square(rook_q.0 + 3);
                next.pieces[us.index()][PieceKind::Rook.index()] ^= rook_q.bb() | rook_to.bb();
            }
            _ => {}
        }

        if moving == PieceKind::King {
            next.castling
                .remove(CastlingRights::kingside_flag(us) | CastlingRights::queenside_flag(us));
        }
        for color in Color::ALL {
            let (k, q) = rook_origins(color);
            if from_to & k.bb() != 0 {
                next.castling.remove(CastlingRights::kingside_flag(color));
            }
            if from_to & q.bb() != 0 {
                next.castling.remove(CastlingRights::queenside_flag(color));
            }
        }

        next.en_passant = if m.kind == MoveKind::DoublePawnPush {
            Some(Square((m.from.0 + m.to.0) / 2))
        } else {
            None
        };
        next.halfmove_clock = if moving == PieceKind::Pawn || m.kind.is_capture() {
            0
        } else {
            self.halfmove_clock + 1
        };
        if us == Color::Black {
            next.fullmove_number += 1;
        }
        next.side_to_move = them;
        next
    }

    /// Plays a legal move. The move is matched against the legal move list by
    /// origin, destination and promotion piece.
    pub fn apply_move(&self, m: Move) -> Result<Position, BoardError> {
        let legal = self.legal_moves();
        let found = legal
            .iter()
            .find(|l| l.from == m.from && l.to == m.to && l.promotion == m.promotion)
            .ok_or_else(|| BoardError::IllegalMove {
                mv: m.uci(),
                reason: self.illegal_reason(m),
            })?;
        Ok(self.make_move_unchecked(*found))
    }

    fn illegal_reason(&self, m: Move) -> String {
        match self.piece_at(m.from) {
            None => format!("no piece on {}", m.from),
            Some(p) if p.color != self.side_to_move => {
                format!("piece on {} belongs to the side not to move", m.from)
            }
            Some(_) if m.from == m.to => "origin equals destination".to_string(),
            Some(_) => "not a legal move in this position".to_string(),
        }
    }

    /// Parses a coordinate move (`e2e4`, `e7e8q`) and resolves it against the
    /// legal moves.
    pub fn parse_uci_move(&self, text: &str) -> Result<Move, BoardError> {
        let bad = |reason: &str| BoardError::IllegalMove {
            mv: text.to_string(),
            reason: reason.to_string(),
        };
        if !(4..=5).contains(&text.len()) || !text.is_ascii() {
            return Err(bad("expected coordinate notation"));
        }
        let from: Square = text[0..2].parse().map_err(|_| bad("bad origin square"))?;
        let to: Square = text[2..4]
            .parse()
            .map_err(|_| bad("bad destination square"))?;
        let promotion = match text.chars().nth(4) {
            None => None,
            Some(c) => match PieceKind::from_letter(c) {
                Some(k) if PieceKind::PROMOTIONS.contains(&k) => Some(k),
                _ => return Err(bad("bad promotion piece")),
            },
        };
        let probe = Move {
            from,
            to,
            promotion,
            kind: MoveKind::Normal,
        };
        self.legal_moves()
            .into_iter()
            .find(|l| l.from == from && l.to == to && l.promotion == promotion)
            .ok_or_else(|| BoardError::IllegalMove {
                mv: text.to_string(),
                reason: self.illegal_reason(probe),
            })
    }

    /// Copy with the clocks reset, for repetition checks.
    pub fn without_clocks(&self) -> Position {
        Position {
            halfmove_clock: 0,
            fullmove_number: 1,
            ..*self
        }
    }

    /// Vertical flip with colors exchanged; an involution.
    pub fn mirror(&self) -> Position {
        let mut pieces = [[0u64; 6]; 2];
        for kind in PieceKind::ALL {
            pieces[0][kind.index()] = self.pieces(Color::Black, kind).swap_bytes();
            pieces[1][kind.index()] = self.pieces(Color::White, kind).swap_bytes();
        }
        Position {
            pieces,
            side_to_move: self.side_to_move.opponent(),
            castling: self.castling.swapped(),
            en_passant: self.en_passant.map(Square::flip),
            halfmove_clock: self.halfmove_clock,
            fullmove_number: self.fullmove_number,
        }
    }

    /// Neither side can possibly deliver mate: bare kings, or kings plus a
    /// single minor piece, or kings plus bishops all on one square color.
    pub fn is_insufficient_material(&self) -> bool {
        let heavy = self.pawns()
            | self.pieces(Color::White, PieceKind::Rook)
            | self.pieces(Color::Black, PieceKind::Rook)
            | self.pieces(Color::White, PieceKind::Queen)
            | self.pieces(Color::Black, PieceKind::Queen);
        if heavy != 0 {
            return false;
        }
        let knights = self.pieces(Color::White, PieceKind::Knight)
            | self.pieces(Color::Black, PieceKind::Knight);
        let bishops = self.pieces(Color::White, PieceKind::Bishop)
            | self.pieces(Color::Black, PieceKind::Bishop);
        let minors = (knights | bishops).count_ones();
        if minors <= 1 {
            return true;
        }
        const LIGHT: Bitboard = 0x55aa_55aa_55aa_55aa;
        knights == 0 && (bishops & LIGHT == 0 || bishops & !LIGHT == 0)
    }

    /// Status decidable from the position alone (repetition and move limits
    /// need game history and are tracked by the caller).
    pub fn status(&self) -> GameStatus {
        let has_moves = !self.legal_moves().is_empty();
        self.status_with(has_moves)
    }

    pub(crate) fn status_with(&self, has_moves: bool) -> GameStatus {
        if !has_moves {
            if self.in_check() {
                GameStatus::Checkmate
            } else {
                GameStatus::Stalemate
            }
        } else if self.halfmove_clock >= 100 {
            GameStatus::DrawFiftyMove
        } else if self.is_insufficient_material() {
            GameStatus::DrawInsufficientMaterial
        } else {
            GameStatus::Ongoing
        }
    }

    /// Checks every structural invariant. Errors name the FEN field the
    /// problem belongs to (1 placement, 2 side, 3 castling, 4 en passant).
    pub fn validate(&self) -> Result<(), BoardError> {
        let err = |field: usize, reason: String| Err(BoardError::Fen { field, reason });

        let mut seen = 0u64;
        for color in Color::ALL {
            for kind in PieceKind::ALL {
                let bb = self.pieces(color, kind);
                if seen & bb != 0 {
                    return err(1, "two pieces on one square".into());
                }
                seen |= bb;
            }
        }
        for color in Color::ALL {
            let kings = self.pieces(color, PieceKind::King).count_ones();
            if kings != 1 {
                return err(
                    1,
                    format!("{color:?} has {kings} kings, expected exactly one"),
                );
            }
        }
        if self.pawns() & (rank_mask(0) | rank_mask(7)) != 0 {
            return err(1, "pawn on the first or last rank".into());
        }

        let them = self.side_to_move.opponent();
        if self.is_attacked(self.king_square(them), self.side_to_move) {
            return err(2, "the side not to move is in check".into());
        }

        for color in Color::ALL {
            let (k, q) = rook_origins(color);
            let king_home = self.pieces(color, PieceKind::King) & king_origin(color).bb() != 0;
            let rooks = self.pieces(color, PieceKind::Rook);
            if self.castling.kingside(color) && !(king_home && rooks & k.bb() != 0) {
                return err(
                    3,
                    format!("{color:?} kingside right without king and rook at home"),
                );
            }
            if self.castling.queenside(color) && !(king_home && rooks & q.bb() != 0) {
                return err(
                    3,
                    format!("{color:?} queenside right without king and rook at home"),
                );
            }
        }

        if let Some(ep) = self.en_passant {
            let us = self.side_to_move;
            let (ep_rank, pawn_sq, origin) = match us {
                Color::White => (5, ep.offset(0, -1), ep.offset(0, 1)),
                Color::Black => (2, ep.offset(0, 1), ep.offset(0, -1)),
            };
            if ep.rank() != ep_rank {
                return err(4, format!("en-passant square {ep} on the wrong rank"));
            }
            let occ = self.occupied();
            let pawn_ok = pawn_sq.is_some_and(|s| self.pieces(them, PieceKind::Pawn) & s.bb() != 0);
            let empty_ok = occ & ep.bb() == 0 && origin.is_some_and(|s| occ & s.bb() == 0);
            if !pawn_ok || !empty_ok {
                return err(
                    4,
                    format!("en-passant square {ep} not behind a double-stepped pawn"),
                );
            }
        }
        if self.fullmove_number == 0 {
            return err(6, "fullmove number must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fen(s: &str) -> Position {
        Position::from_fen(s).unwrap()
    }

    #[test]
    fn e2e4_sets_en_passant() {
        let p = Position::startpos();
        let m = p.parse_uci_move("e2e4").unwrap();
        assert_eq!(m.kind, MoveKind::DoublePawnPush);
        let q = p.apply_move(m).unwrap();
        assert_eq!(
            q.to_fen(),
            "rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b KQkq e3 0 1"
        );
    }

    #[test]
    fn capture_resets_clock() {
        let p = fen("4k3/8/8/3p4/4N3/8/8/4K3 w - - 17 40");
        let q = p.apply_move(p.parse_uci_move("e4d6").unwrap()).unwrap();
        assert_eq!(q.halfmove_clock(), 18);
        let r = p.apply_move(p.parse_uci_move("e4f6").unwrap()).unwrap();
        assert_eq!(r.halfmove_clock(), 18);
        let p = fen("4k3/8/8/3p4/8/4N3/8/4K3 w - - 17 40");
        let c = p.apply_move(p.parse_uci_move("e3d5").unwrap()).unwrap();
        assert_eq!(c.halfmove_clock(), 0);
        assert_eq!(c.to_fen(), "4k3/8/8/3N4/8/8/8/4K3 b - - 0 40");
    }

    #[test]
    fn kingside_castle_moves_rook_and_clears_rights() {
        let p = fen("r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 3 10");
        let m = p.parse_uci_move("e1g1").unwrap();
        assert_eq!(m.kind, MoveKind::CastleKingside);
        let q = p.apply_move(m).unwrap();
        assert_eq!(q.to_fen(), "r3k2r/8/8/8/8/8/8/R4RK1 b kq - 4 10");
        let m = q.parse_uci_move("e8c8").unwrap();
        let r = q.apply_move(m).unwrap();
        assert_eq!(r.to_fen(), "2kr3r/8/8/8/8/8/8/R4RK1 w - - 5 11");
    }

    #[test]
    fn rook_capture_revokes_right() {
        let p = fen("r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 0 1");
        let q = p.apply_move(p.parse_uci_move("a1a8").unwrap()).unwrap();
        assert_eq!(
            q.castling_rights().bits(),
            CastlingRights::WHITE_KINGSIDE | CastlingRights::BLACK_KINGSIDE
        );
    }

    #[test]
    fn en_passant_capture_removes_pawn() {
        let p = fen("4k3/8/8/3Pp3/8/8/8/4K3 w - e6 0 2");
        let m = p.parse_uci_move("d5e6").unwrap();
        assert_eq!(m.kind, MoveKind::EnPassant);
        let q = p.apply_move(m).unwrap();
        assert_eq!(q.to_fen(), "4k3/8/4P3/8/8/8/8/4K3 b - - 0 2");
    }

    #[test]
    fn promotion() {
        let p = fen("1n2k3/P7/8/8/8/8/8/4K3 w - - 0 1");
        let q = p.apply_move(p.parse_uci_move("a7b8n").unwrap()).unwrap();
        assert_eq!(q.to_fen(), "1N2k3/8/8/8/8/8/8/4K3 b - - 0 1");
    }

    #[test]
    fn illegal_move_rejected_with_reason() {
        let p = Position::startpos();
        let m = Move::new(Square(12), Square(36), MoveKind::Normal);
        match p.apply_move(m) {
            Err(BoardError::IllegalMove { mv, .. }) => assert_eq!(mv, "e2e5"),
            other => panic!("expected illegal move, got {other:?}"),
        }
        assert!(p.parse_uci_move("e7e5").is_err());
    }

    #[test]
    fn mirror_startpos() {
        let s = Position::startpos();
        let m = s.mirror();
        assert_eq!(m.side_to_move(), Color::Black);
        let mut back = m;
        back.side_to_move = Color::White;
        assert_eq!(back, s);
        assert_eq!(s.mirror().mirror(), s);
    }

    #[test]
    fn mirror_pawn() {
        let p = fen("4k3/8/8/8/8/8/4P3/4K3 w - - 0 1");
        let m = p.mirror();
        assert_eq!(m.to_fen(), "4k3/4p3/8/8/8/8/8/4K3 b - - 0 1");
    }

    #[test]
    fn insufficient_material() {
        assert!(fen("4k3/8/8/8/8/8/8/4K3 w - - 0 1").is_insufficient_material());
        assert!(fen("4k3/8/8/8/8/8/8/4KN2 w - - 0 1").is_insufficient_material());
        assert!(fen("2b1k3/8/8/8/8/8/8/4KB2 w - - 0 1").is_insufficient_material());
        assert!(!fen("3bk3/8/8/8/8/8/8/4KB2 w - - 0 1").is_insufficient_material());
        assert!(!fen("4k3/8/8/8/8/8/8/3NKN2 w - - 0 1").is_insufficient_material());
    }

    #[test]
    fn statuses() {
        assert_eq!(
            fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1").status(),
            GameStatus::Stalemate
        );
        assert_eq!(
            fen("7k/6Q1/6K1/8/8/8/8/8 b - - 0 1").status(),
            GameStatus::Checkmate
        );
        assert_eq!(
            fen("4k3/8/8/8/8/8/4P3/4K3 w - - 100 80").status(),
            GameStatus::DrawFiftyMove
        );
        assert_eq!(Position::startpos().status(), GameStatus::Ongoing);
    }
}
