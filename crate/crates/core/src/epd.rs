//! EPD records: the first four FEN fields followed by `opcode operands;`
//! operations. Two bare integers right after the fields are read as FEN
//! clocks; the `hmvc` and `fmvn` opcodes set them too.

use std::fmt::Write as _;

use thiserror::Error;

use crate::board::{BoardError, Position};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct EpdError {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    pub opcode: String,
    pub operands: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpdRecord {
    pub position: Position,
    pub operations: Vec<Operation>,
}

fn tokenize(rest: &str) -> Result<Vec<(String, bool)>, String> {
    // (token, is_semicolon)
    let mut out = Vec::new();
    let mut chars = rest.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == ';' {
            chars.next();
            out.push((";".to_string(), true));
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some(e) => s.push(e),
                        None => return Err("unterminated string".into()),
                    },
                    Some(ch) => s.push(ch),
                    None => return Err("unterminated string".into()),
                }
            }
            out.push((s, false));
        } else {
            let mut s = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_whitespace() || ch == ';' {
                    break;
                }
                s.push(ch);
                chars.next();
            }
            out.push((s, false));
        }
    }
    Ok(out)
}

impl EpdRecord {
    pub fn new(position: Position) -> EpdRecord {
        EpdRecord {
            position,
            operations: Vec::new(),
        }
    }

    /// Parses one line; `line` is only used in error messages.
    pub fn parse(text: &str, line: usize) -> Result<EpdRecord, EpdError> {
        let err = |reason: String| EpdError { line, reason };
        let mut fields = Vec::with_capacity(4);
        let mut rest = text.trim_start();
        for _ in 0..4 {
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            if end == 0 {
                return Err(err("expected four position fields".into()));
            }
            fields.push(&rest[..end]);
            rest = rest[end..].trim_start();
        }

        let mut tokens = tokenize(rest).map_err(err)?.into_iter().peekable();
        let mut clocks: Vec<String> = Vec::new();
        while clocks.len() < 2 {
            match tokens.peek() {
                Some((t, false)) if t.parse::<u32>().is_ok() => {
                    clocks.push(tokens.next().unwrap().0);
                }
                _ => break,
            }
        }

        let mut operations = Vec::new();
        while let Some((opcode, semi)) = tokens.next() {
            if semi {
                continue;
            }
            let mut operands = Vec::new();
            let mut closed = false;
            for (t, semi) in tokens.by_ref() {
                if semi {
                    closed = true;
                    break;
                }
                operands.push(t);
            }
            if !closed {
                return Err(err(format!(
                    "operation {opcode:?} is not terminated by ';'"
                )));
            }
            operations.push(Operation { opcode, operands });
        }

        let mut fen = fields.join(" ");
        let op_value = |name: &str| {
            operations
                .iter()
                .find(|o| o.opcode == name)
                .and_then(|o| o.operands.first().cloned())
        };
        let half = clocks.first().cloned().or_else(|| op_value("hmvc"));
        let full = clocks.get(1).cloned().or_else(|| op_value("fmvn"));
        write!(
            fen,
            " {} {}",
            half.as_deref().unwrap_or("0"),
            full.as_deref().unwrap_or("1")
        )
        .ok();
        let position = Position::from_fen(&fen).map_err(|e| match e {
            BoardError::Fen { field, reason } => err(format!("position field {field}: {reason}")),
            other => err(other.to_string()),
        })?;
        Ok(EpdRecord {
            position,
            operations,
        })
    }

    pub fn get(&self, opcode: &str) -> Option<&[String]> {
        self.operations
            .iter()
            .find(|o| o.opcode == opcode)
            .map(|o| o.operands.as_slice())
    }

    pub fn id(&self) -> Option<&str> {
        self.get("id").and_then(|o| o.first()).map(String::as_str)
    }

    /// Replaces an existing operation or appends a new one.
    pub fn set(&mut self, opcode: &str, operands: Vec<String>) {
        match self.operations.iter_mut().find(|o| o.opcode == opcode) {
            Some(o) => o.operands = operands,
            None => self.operations.push(Operation {
                opcode: opcode.to_string(),
                operands,
            }),
        }
    }

    pub fn remove(&mut self, opcode: &str) {
        self.operations.retain(|o| o.opcode != opcode);
    }

    /// Serializes with clocks carried as `hmvc`/`fmvn` when not at their
    /// defaults.
    pub fn to_line(&self) -> String {
        let mut out = self.position.epd_fields();
        let mut ops: Vec<Operation> = self
            .operations
            .iter()
            .filter(|o| o.opcode != "hmvc" && o.opcode != "fmvn")
            .cloned()
            .collect();
        if self.position.halfmove_clock() != 0 {
            ops.push(Operation {
                opcode: "hmvc".into(),
                operands: vec![self.position.halfmove_clock().to_string()],
            });
        }
        if self.position.fullmove_number() != 1 {
            ops.push(Operation {
                opcode: "fmvn".into(),
                operands: vec![self.position.fullmove_number().to_string()],
            });
        }
        for op in ops {
            out.push(' ');
            out.push_str(&op.opcode);
            let always_quote = op.opcode == "id"
                || (op.opcode.len() == 2
                    && op.opcode.starts_with('c')
                    && op.opcode.as_bytes()[1].is_ascii_digit());
            for operand in &op.operands {
                out.push(' ');
                let needs = always_quote
                    || operand.is_empty()
                    || operand.contains(|c: char| c.is_whitespace() || c == ';' || c == '"');
                if needs {
                    out.push('"');
                    for c in operand.chars() {
                        if c == '"' || c == '\\' {
                            out.push('\\');
                        }
                        out.push(c);
                    }
                    out.push('"');
                } else {
                    out.push_str(operand);
                }
            }
            out.push(';');
        }
        out
    }
}

/// Parses every non-blank, non-`#` line.
pub fn parse_epd(text: &str) -> Result<Vec<EpdRecord>, EpdError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| EpdRecord::parse(l, i + 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ce_and_id() {
        let r = EpdRecord::parse(r#"4k3/8/8/8/8/8/4P3/4K3 w - - ce 83; id "ex1";"#, 1).unwrap();
        assert_eq!(r.get("ce"), Some(&["83".to_string()][..]));
        assert_eq!(r.id(), Some("ex1"));
        assert_eq!(r.position.to_fen(), "4k3/8/8/8/8/8/4P3/4K3 w - - 0 1");
        assert_eq!(
            r.to_line(),
            r#"4k3/8/8/8/8/8/4P3/4K3 w - - ce 83; id "ex1";"#
        );
    }

    #[test]
    fn quoted_semicolons_and_multiple_operands() {
        let r = EpdRecord::parse(r#"4k3/8/8/8/8/8/4P3/4K3 w - - bm e3 e4; id "a; b";"#, 1).unwrap();
        assert_eq!(r.get("bm").unwrap(), ["e3", "e4"]);
        assert_eq!(r.id(), Some("a; b"));
        let back = EpdRecord::parse(&r.to_line(), 1).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn clocks() {
        let r = EpdRecord::parse("4k3/8/8/8/8/8/4P3/4K3 b - - 12 40 id \"x\";", 1).unwrap();
        assert_eq!(r.position.halfmove_clock(), 12);
        assert_eq!(r.position.fullmove_number(), 40);
        let line = r.to_line();
        assert!(line.contains("hmvc 12;"));
        assert_eq!(EpdRecord::parse(&line, 1).unwrap().position, r.position);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "4k3/8/8/8/8/8/4P3/4K3 w - - ce 1;\n\n# c\n4k3/8/8/8/8/8/4P3/4K3 w - - ce 1\n";
        assert_eq!(parse_epd(text).unwrap_err().line, 4);
        let text = "4k3/8/8/8/8/8/4P3/4KK2 w - - ce 1;\n";
        assert_eq!(parse_epd(text).unwrap_err().line, 1);
        assert!(EpdRecord::parse("4k3/8/8", 7).is_err());
    }
}
