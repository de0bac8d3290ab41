use super::position::Position;
use super::types::*;
use super::BoardError;

pub const STARTPOS_FEN: &str = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

fn fen_err(field: usize, reason: impl Into<String>) -> BoardError {
    BoardError::Fen {
        field,
        reason: reason.into(),
    }
}

impl Position {
    /// Parses a FEN with 4 to 6 fields. Missing clocks default to 0 and 1.
    pub fn from_fen(text: &str) -> Result<Position, BoardError> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if !(4..=6).contains(&fields.len()) {
            return Err(fen_err(
                0,
                format!("expected 4 to 6 fields, found {}", fields.len()),
            ));
        }
        let mut pos = Position::empty();
        parse_placement(&mut pos, fields[0])?;

        pos.side_to_move = match fields[1] {
            "w" => Color::White,
            "b" => Color::Black,
            other => {
                return Err(fen_err(
                    2,
                    format!("side to move must be w or b, got {other:?}"),
                ))
            }
        };

        if fields[2] != "-" {
            for c in fields[2].chars() {
                let flag = match c {
                    'K' => CastlingRights::WHITE_KINGSIDE,
                    'Q' => CastlingRights::WHITE_QUEENSIDE,
                    'k' => CastlingRights::BLACK_KINGSIDE,
                    'q' => CastlingRights::BLACK_QUEENSIDE,
                    _ => return Err(fen_err(3, format!("invalid castling character {c:?}"))),
                };
                if pos.castling.has(flag) {
                    return Err(fen_err(3, format!("duplicate castling character {c:?}")));
                }
                pos.castling.insert(flag);
            }
        }

        pos.en_passant = match fields[3] {
            "-" => None,
            s => Some(
                s.parse::<Square>()
                    .map_err(|_| fen_err(4, format!("invalid en-passant square {s:?}")))?,
            ),
        };

        if let Some(s) = fields.get(4) {
            pos.halfmove_clock = s
                .parse()
                .map_err(|_| fen_err(5, format!("invalid halfmove clock {s:?}")))?;
        }
        if let Some(s) = fields.get(5) {
            pos.fullmove_number = s
                .parse()
                .map_err(|_| fen_err(6, format!("invalid fullmove number {s:?}")))?;
        }

        pos.validate()?;
        Ok(pos)
    }

    pub fn to_fen(&self) -> String {
        format!(
            "{} {} {}",
            self.epd_fields(),
            self.halfmove_clock,
            self.fullmove_number
        )
    }

    /// The first four FEN fields (placement, side, castling, en passant).
    pub fn epd_fields(&self) -> String {
        let mut out = String::with_capacity(64);
        for rank in (0..8).rev() {
            let mut empty = 0;
            for file in 0..8 {
                match self.piece_at(Square::new(file, rank)) {
                    Some(p) => {
                        if empty > 0 {
                            out.push((b'0' + empty) as char);
                            empty = 0;
                        }
                        out.push(p.fen_char());
                    }
                    None => empty += 1,
                }
            }
            if empty > 0 {
                out.push((b'0' + empty) as char);
            }
            if rank > 0 {
                out.push('/');
            }
        }
        out.push(' ');
        out.push(match self.side_to_move {
            Color::White => 'w',
            Color::Black => 'b',
        });
        out.push(' ');
        let flags = [
            (CastlingRights::WHITE_KINGSIDE, 'K'),
            (CastlingRights::WHITE_QUEENSIDE, 'Q'),
            (CastlingRights::BLACK_KINGSIDE, 'k'),
            (CastlingRights::BLACK_QUEENSIDE, 'q'),
        ];
        let before = out.len();
        for (flag, c) in flags {
            if self.castling.has(flag) {
                out.push(c);
            }
        }
        if out.len() == before {
            out.push('-');
        }
        out.push(' ');
        match self.en_passant {
            Some(sq) => out.push_str(&sq.to_string()),
            None => out.push('-'),
        }
        out
    }
}

fn parse_placement(pos: &mut Position, text: &str) -> Result<(), BoardError> {
    let ranks: Vec<&str> = text.split('/').collect();
    if ranks.len() != 8 {
        return Err(fen_err(
            1,
            format!("expected 8 ranks, found {}", ranks.len()),
        ));
    }
    for (i, row) in ranks.iter().enumerate() {
        let rank = 7 - i as u8;
        let mut file = 0u8;
        for c in row.chars() {
            if let Some(d) = c.to_digit(10) {
                if !(1..=8).contains(&d) {
                    return Err(fen_err(1, format!("invalid empty-square count {c:?}")));
                }
                file += d as u8;
            } else {
                let piece = Piece::from_fen_char(c)
                    .ok_or_else(|| fen_err(1, format!("invalid piece character {c:?}")))?;
                if file >= 8 {
                    return Err(fen_err(1, format!("rank {} overflows", rank + 1)));
                }
                pos.put(Square::new(file, rank), piece);
                file += 1;
            }
            if file > 8 {
                return Err(fen_err(1, format!("rank {} overflows", rank + 1)));
            }
        }
        if file != 8 {
            return Err(fen_err(1, format!("rank {} has {file} squares", rank + 1)));
        }
    }
    Ok(())
}

impl std::str::FromStr for Position {
    type Err = BoardError;

    fn from_str(s: &str) -> Result<Position, BoardError> {
        Position::from_fen(s)
    }
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_fen())
    }
}
