//! Slow reference feature counter: plain loops over a 64-square mailbox,
//! sharing nothing with the bitboard implementation.

use crate::board::{Color, PieceKind, Position, Square};

type Board = [Option<(Color, PieceKind)>; 64];

fn mailbox(p: &Position) -> Board {
    let mut b = [None; 64];
    for (i, slot) in b.iter_mut().enumerate() {
        *slot = p.piece_at(Square(i as u8)).map(|pc| (pc.color, pc.kind));
    }
    b
}

fn at(b: &Board, f: i32, r: i32) -> Option<(Color, PieceKind)> {
    if (0..8).contains(&f) && (0..8).contains(&r) {
        b[(r * 8 + f) as usize]
    } else {
        None
    }
}

fn on_board(f: i32, r: i32) -> bool {
    (0..8).contains(&f) && (0..8).contains(&r)
}

fn fwd(c: Color) -> i32 {
    if c == Color::White {
        1
    } else {
        -1
    }
}

fn rel_rank(c: Color, r: i32) -> i32 {
    if c == Color::White {
        r + 1
    } else {
        8 - r
    }
}

fn is(b: &Board, f: i32, r: i32, c: Color, k: PieceKind) -> bool {
    at(b, f, r) == Some((c, k))
}

/// Squares attacked by the piece on (f, r).
fn attacks_from(b: &Board, f: i32, r: i32) -> Vec<(i32, i32)> {
    let Some((c, k)) = at(b, f, r) else {
        return vec![];
    };
    let mut out = vec![];
    let steps: &[(i32, i32)] = match k {
        PieceKind::Pawn => {
            for df in [-1, 1] {
                if on_board(f + df, r + fwd(c)) {
                    out.push((f + df, r + fwd(c)));
                }
            }
            return out;
        }
        PieceKind::Knight => &[
            (1, 2),
            (2, 1),
            (2, -1),
            (1, -2),
            (-1, -2),
            (-2, -1),
            (-2, 1),
            (-1, 2),
        ],
        PieceKind::King => &[
            (1, 0),
            (1, 1),
            (0, 1),
            (-1, 1),
            (-1, 0),
            (-1, -1),
            (0, -1),
            (1, -1),
        ],
        _ => &[],
    };
    for &(df, dr) in steps {
        if on_board(f + df, r + dr) {
            out.push((f + df, r + dr));
        }
    }
    let mut dirs = vec![];
    if matches!(k, PieceKind::Bishop | PieceKind::Queen) {
        dirs.extend([(1, 1), (1, -1), (-1, 1), (-1, -1)]);
    }
    if matches!(k, PieceKind::Rook | PieceKind::Queen) {
        dirs.extend([(1, 0), (-1, 0), (0, 1), (0, -1)]);
    }
    for (df, dr) in dirs {
        let (mut x, mut y) = (f + df, r + dr);
        while on_board(x, y) {
            out.push((x, y));
            if at(b, x, y).is_some() {
                break;
            }
            x += df;
            y += dr;
        }
    }
    out
}

fn pawns_on_file(b: &Board, c: Color, f: i32) -> Vec<i32> {
    (0..8)
        .filter(|&r| is(b, f, r, c, PieceKind::Pawn))
        .collect()
}

fn passed(b: &Board, c: Color, f: i32, r: i32) -> bool {
    for df in -1..=1 {
        for y in 0..8 {
            let ahead = (y - r) * fwd(c) > 0;
            if ahead && is(b, f + df, y, c.opponent(), PieceKind::Pawn) {
                return false;
            }
        }
    }
    true
}

fn king(b: &Board, c: Color) -> (i32, i32) {
    for (i, sq) in b.iter().enumerate() {
        if *sq == Some((c, PieceKind::King)) {
            return ((i % 8) as i32, (i / 8) as i32);
        }
    }
    unreachable!()
}

fn side(b: &Board, us: Color) -> [i32; 35] {
    let them = us.opponent();
    let mut v = [0i32; 35];
    let (ekf, ekr) = king(b, them);
    let (kf, kr) = king(b, us);
    let _ = kr;

    for r in 0..8 {
        for f in 0..8 {
            let Some((c, k)) = at(b, f, r) else { continue };
            if c != us {
                continue;
            }
            if k != PieceKind::King {
                v[k.index()] += 1;
            }
            for (x, y) in attacks_from(b, f, r) {
                if (x - ekf).abs() <= 1 && (y - ekr).abs() <= 1 && (x, y) != (ekf, ekr) {
                    v[34] += 1;
                }
            }
            let rr = rel_rank(us, r);
            match k {
                PieceKind::Pawn => {
                    if passed(b, us, f, r) {
                        v[6] += rr - 1;
                        v[7] += rr;
                        v[12] += (f - ekf).abs().max((r - ekr).abs());
                    } else {
                        v[5] += rr - 1;
                    }
                    let neighbours: Vec<(i32, i32)> = [f - 1, f + 1]
                        .into_iter()
                        .flat_map(|x| pawns_on_file(b, us, x).into_iter().map(move |y| (x, y)))
                        .collect();
                    if neighbours.is_empty() {
                        v[9] -= 1;
                    }
                    let stop = r + fwd(us);
                    let stop_hit = [f - 1, f + 1]
                        .into_iter()
                        .any(|x| is(b, x, stop + fwd(us), them, PieceKind::Pawn));
                    let support = neighbours.iter().any(|&(_, y)| (y - r) * fwd(us) <= 0);
                    if stop_hit && !support {
                        v[10] -= 1;
                    }
                }
                PieceKind::Knight => {
                    let ring = f.min(7 - f).min(r).min(7 - r);
                    v[13] += ring;
                    let defended = [f - 1, f + 1]
                        .into_iter()
                        .any(|x| is(b, x, r - fwd(us), us, PieceKind::Pawn));
                    let attackable = [f - 1, f + 1].into_iter().any(|x| {
                        pawns_on_file(b, them, x)
                            .into_iter()
                            .any(|y| (y - r) * fwd(us) > 0)
                    });
                    if rr >= 5 && defended && !attackable {
                        v[14] += ring;
                    }
                }
                PieceKind::Bishop => {
                    v[15] += attacks_from(b, f, r)
                        .into_iter()
                        .filter(|&(x, y)| at(b, x, y).is_none_or(|(c2, _)| c2 != us))
                        .count() as i32;
                }
                PieceKind::Rook => {
                    if f == ekf {
                        v[17] += 1;
                    }
                    if (f - ekf).abs() == 1 {
                        v[18] += 1;
                        if [0, 1, 6, 7].contains(&ekf) {
                            v[19] += 1;
                        }
                    }
                    if rr == 7 {
                        v[20] += 1;
                    }
                    let att = attacks_from(b, f, r);
                    if att.iter().any(|&(x, y)| is(b, x, y, us, PieceKind::Rook)) {
                        v[21] = 1;
                    }
                    v[22] += att
                        .iter()
                        .filter(|&&(x, y)| at(b, x, y).is_none_or(|(c2, _)| c2 != us))
                        .count() as i32;
                    let behind = pawns_on_file(b, us, f)
                        .into_iter()
                        .any(|y| passed(b, us, f, y) && (y - r) * fwd(us) > 0);
                    if behind {
                        v[23] += 1;
                    }
                    let own = pawns_on_file(b, us, f);
                    let enemy = pawns_on_file(b, them, f);
                    if own.is_empty() && enemy.is_empty() {
                        v[24] += 1;
                    }
                    if own.is_empty() && !enemy.is_empty() {
                        v[25] += 1;
                        let weak = enemy.iter().any(|&y| {
                            ![f - 1, f + 1]
                                .into_iter()
                                .any(|x| is(b, x, y - fwd(them), them, PieceKind::Pawn))
                        });
                        if weak {
                            v[26] += 1;
                        }
                    }
                    v[27] += f.min(7 - f);
                }
                PieceKind::Queen => {
                    v[28] += attacks_from(b, f, r)
                        .into_iter()
                        .filter(|&(x, y)| at(b, x, y).is_none_or(|(c2, _)| c2 != us))
                        .count() as i32;
                }
                PieceKind::King => {}
            }
        }
    }

    let bishops = b
        .iter()
        .filter(|&&sq| sq == Some((us, PieceKind::Bishop)))
        .count();
    if bishops >= 2 {
        v[16] = 1;
    }

    for f in 0..8 {
        let n = pawns_on_file(b, us, f).len() as i32;
        if n > 1 {
            v[8] -= n - 1;
        }
    }

    for rel in 1..=4 {
        let r = if us == Color::White { rel - 1 } else { 8 - rel };
        for f in 2..=5 {
            let covered = [f - 1, f + 1].into_iter().any(|x| {
                pawns_on_file(b, us, x)
                    .into_iter()
                    .any(|y| (r - y) * fwd(us) > 0)
            });
            if !covered {
                v[11] -= 1;
            }
        }
    }

    if pawns_on_file(b, us, kf).is_empty() {
        v[29] = -1;
    }
    if pawns_on_file(b, them, kf).is_empty() {
        v[32] = 1;
    }
    for x in [kf - 1, kf + 1] {
        if !(0..8).contains(&x) {
            continue;
        }
        if pawns_on_file(b, us, x).is_empty() {
            v[30] -= 1;
        }
        if pawns_on_file(b, them, x).is_empty() {
            v[33] += 1;
        }
    }
    for x in kf - 1..=kf + 1 {
        for y in 0..8 {
            if is(b, x, y, us, PieceKind::Pawn) && rel_rank(us, y) == 3 {
                v[31] -= 1;
            }
        }
    }
    v
}

pub fn features(p: &Position) -> [i32; 35] {
    let b = mailbox(p);
    let w = side(&b, Color::White);
    let bl = side(&b, Color::Black);
    let mut out = [0; 35];
    for k in 0..35 {
        out[k] = w[k] - bl[k];
    }
    out
}
