//! Minimal UCI client: handshake, `position fen`, `go depth`, and the score
//! from the last `info` line before `bestmove`.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use thiserror::Error;

use super::{ExpertError, Scorer};
use crate::board::Position;
use crate::par::Pool;
use crate::search::MATE_SCORE;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Debug, Error)]
pub enum UciError {
    #[error("failed to start engine {command:?}: {source}")]
    Spawn {
        command: String,
        source: std::io::Error,
    },
    #[error("engine did not answer with {expecting} within {waited:?}")]
    Timeout {
        expecting: &'static str,
        waited: Duration,
    },
    #[error("engine protocol violation: {0}")]
    Protocol(String),
    #[error("engine exited while waiting for {0}")]
    Exited(&'static str),
    #[error("writing to engine: {0}")]
    Write(std::io::Error),
}

/// One engine subprocess with at most one request in flight.
pub struct UciEngine {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<String>,
    timeout: Duration,
    depth: u32,
    command: String,
}

impl UciEngine {
    /// Runs `command` through `sh -c` and performs the handshake.
    pub fn spawn(command: &str, depth: u32, timeout: Duration) -> Result<UciEngine, UciError> {
        let spawn_err = |source| UciError::Spawn {
            command: command.to_string(),
            source,
        };
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(spawn_err)?;
        let stdin = child.stdin.take().expect("stdin is piped");
        let stdout = child.stdout.take().expect("stdout is piped");
        let (tx, lines) = mpsc::channel();
        // The reader thread ends when the engine closes stdout.
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let Ok(line) = line else { break };
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        let mut engine = UciEngine {
            child,
            stdin,
            lines,
            timeout,
            depth,
            command: command.to_string(),
        };
        engine.send("uci")?;
        engine.wait_for("uciok")?;
        engine.send("isready")?;
        engine.wait_for("readyok")?;
        Ok(engine)
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    fn send(&mut self, line: &str) -> Result<(), UciError> {
        writeln!(self.stdin, "{line}")
            .and_then(|_| self.stdin.flush())
            .map_err(UciError::Write)
    }

    fn next_line(&self, expecting: &'static str) -> Result<String, UciError> {
        match self.lines.recv_timeout(self.timeout) {
            Ok(l) => Ok(l),
            Err(RecvTimeoutError::Timeout) => Err(UciError::Timeout {
                expecting,
                waited: self.timeout,
            }),
            Err(RecvTimeoutError::Disconnected) => Err(UciError::Exited(expecting)),
        }
    }

    fn wait_for(&self, token: &'static str) -> Result<(), UciError> {
        loop {
            if self.next_line(token)?.trim() == token {
                return Ok(());
            }
        }
    }

    /// Score of `p` for the side to move at the configured depth.
    pub fn score(&mut self, p: &Position) -> Result<i32, UciError> {
        self.send(&format!("position fen {}", p.to_fen()))?;
        self.send(&format!("go depth {}", self.depth))?;
        let mut last = None;
        loop {
            let line = self.next_line("bestmove")?;
            let mut words = line.split_whitespace();
            match words.next() {
                Some("bestmove") => break,
                Some("info") => {
                    if let Some(s) = parse_info_score(&line)? {
                        last = Some(s);
                    }
                }
                _ => {}
            }
        }
        last.ok_or_else(|| UciError::Protocol("bestmove without a preceding score".into()))
    }
}

impl Drop for UciEngine {
    fn drop(&mut self) {
        let _ = self.send("quit");
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Reads `score cp X` or `score mate M` out of an `info` line.
fn parse_info_score(line: &str) -> Result<Option<i32>, UciError> {
    let words: Vec<&str> = line.split_whitespace().collect();
    let Some(i) = words.iter().position(|w| *w == "score") else {
        return Ok(None);
    };
    let kind = words.get(i + 1).copied();
    let value = words.get(i + 2).and_then(|v| v.parse::<i32>().ok());
    match (kind, value) {
        (Some("cp"), Some(v)) => Ok(Some(v)),
        (Some("mate"), Some(m)) => {
            let s = MATE_SCORE - m.abs();
            Ok(Some(if m < 0 { -s } else { s }))
        }
        _ => Err(UciError::Protocol(format!("unreadable score in {line:?}"))),
    }
}

/// Independent engine processes; batches are split across them.
pub struct UciPool {
    engines: Vec<UciEngine>,
}

impl UciPool {
    pub fn spawn(
        command: &str,
        depth: u32,
        timeout: Duration,
        count: usize,
    ) -> Result<UciPool, UciError> {
        let engines = (0..count.max(1))
            .map(|_| UciEngine::spawn(command, depth, timeout))
            .collect::<Result<_, _>>()?;
        Ok(UciPool { engines })
    }

    pub fn len(&self) -> usize {
        self.engines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.engines.is_empty()
    }
}

impl Scorer for UciPool {
    fn tag(&self) -> String {
        format!("uci:{}", self.engines[0].command())
    }

    fn score(&mut self, p: &Position) -> Result<i32, ExpertError> {
        Ok(self.engines[0].score(p)?)
    }

    fn score_batch(&mut self, ps: &[Position], _pool: &Pool) -> Result<Vec<i32>, ExpertError> {
        if ps.is_empty() {
            return Ok(Vec::new());
        }
        let chunk = ps.len().div_ceil(self.engines.len());
        let results: Vec<Result<Vec<i32>, UciError>> = thread::scope(|s| {
            let handles: Vec<_> = self
                .engines
                .iter_mut()
                .zip(ps.chunks(chunk))
                .map(|(e, part)| s.spawn(move || part.iter().map(|p| e.score(p)).collect()))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("scoring thread panicked"))
                .collect()
        });
        let mut out = Vec::with_capacity(ps.len());
        for r in results {
            out.extend(r?);
        }
        Ok(out)
    }
}
