//! Trace files and replay. A trace records every move of one reduction;
//! replaying it forward from the initial state, or backward from the final
//! state, must reproduce the other end exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::chains::Chain;
use crate::curve::{CurveError, CurveSystem, GeneratorWord, Letter};
use crate::surface::{FaceId, Surface};
use crate::text::{self, Line, ParseError};

use super::moves::{apply_loop, apply_strands, undo_loop, undo_strands};
use super::{Factor, Move};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceMode {
    /// Whole curve system, moves addressed by strand start face.
    Strands,
    /// One loop at `base`, moves addressed by factor index.
    Loop { base: FaceId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceMove {
    pub mv: Move,
    pub emit: Vec<Letter>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub mode: TraceMode,
    pub initial: CurveSystem,
    pub moves: Vec<TraceMove>,
    pub final_state: CurveSystem,
    /// Output word in letter blocks; a single block in strand mode, the
    /// final factor list in loop mode.
    pub blocks: Vec<Vec<Letter>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("syntax error at {0}")]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("divergence at move {index}: {message}")]
    Divergence { index: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

fn letters_text(ls: &[Letter]) -> String {
    ls.iter().map(Letter::to_string).collect::<Vec<_>>().join(" ")
}

impl Trace {
    pub fn surface(&self) -> &Arc<Surface> {
        self.initial.surface_arc()
    }

    pub fn word(&self) -> GeneratorWord {
        GeneratorWord::new(self.blocks.concat())
    }

    pub fn serialize(&self) -> String {
        let s = self.surface();
        let mut out = format!("trace {}\n", s.name());
        match self.mode {
            TraceMode::Strands => out.push_str("mode strands\n"),
            TraceMode::Loop { base } => writeln!(out, "mode loop {base}").unwrap(),
        }
        out.push_str(&self.initial.serialize());
        for tm in &self.moves {
            out.push_str("move ");
            out.push_str(tm.mv.kind());
            for (k, v) in tm.mv.fields(s) {
                write!(out, " {k}={v}").unwrap();
            }
            out.push_str(" emit");
            for l in &tm.emit {
                write!(out, " {l}").unwrap();
            }
            out.push('\n');
            if let Move::BalancePrepend { chain, .. } = &tm.mv {
                writeln!(out, "{chain}").unwrap();
            }
        }
        out.push_str(&self.final_state.serialize());
        for b in &self.blocks {
            let t = letters_text(b);
            if t.is_empty() {
                out.push_str("letters\n");
            } else {
                writeln!(out, "letters {t}").unwrap();
            }
        }
        out.push_str("end\n");
        out
    }
}

fn curve_block<'a>(
    s: &Arc<Surface>,
    lines: &'a [Line<'a>],
    pos: &mut usize,
) -> Result<CurveSystem, TraceError> {
    let start = *pos;
    let len = lines[start..]
        .iter()
        .position(|l| l.keyword() == "end")
        .ok_or_else(|| text::end_of_input(lines, "`end` of curve block"))?;
    *pos = start + len + 1;
    Ok(CurveSystem::parse_lines(s, &lines[start..*pos], false)?)
}

fn parse_move(s: &Surface, line: &Line<'_>, chain: Option<Chain>) -> Result<TraceMove, ParseError> {
    let kind = line.tokens.get(1).ok_or_else(|| line.error(0, "expected move kind"))?.text;
    let mut fields = BTreeMap::new();
    let mut i = 2;
    while i < line.tokens.len() && line.tokens[i].text != "emit" {
        let (k, v) = line.tokens[i]
            .text
            .split_once('=')
            .ok_or_else(|| line.error(i, "expected key=value"))?;
        if fields.insert(k.to_string(), v.to_string()).is_some() {
            return Err(line.error(i, format!("duplicate field `{k}`")));
        }
        i += 1;
    }
    if i == line.tokens.len() {
        return Err(line.error(i - 1, "missing `emit`"));
    }
    let mut emit = Vec::new();
    for j in i + 1..line.tokens.len() {
        let t = line.tokens[j].text;
        emit.push(Letter::parse(t).ok_or_else(|| line.error(j, format!("bad letter `{t}`")))?);
    }
    let mv = Move::from_fields(s, kind, &fields, chain).map_err(|m| line.error(1, m))?;
    Ok(TraceMove { mv, emit })
}

/// Parses a trace file recorded on surface `s`.
pub fn parse_trace(s: &Arc<Surface>, input: &str) -> Result<Trace, TraceError> {
    let lines = text::lines(input);
    let header = lines.first().ok_or_else(|| text::end_of_input(&lines, "`trace` header"))?;
    if header.keyword() != "trace" {
        return Err(header.error(0, "expected `trace <surface-name>`").into());
    }
    header.expect_len(2)?;
    if header.tokens[1].text != s.name() {
        return Err(CurveError::SurfaceMismatch { expected: s.name().into(), found: header.tokens[1].text.into() }.into());
    }
    let mode_line = lines.get(1).ok_or_else(|| text::end_of_input(&lines, "`mode` line"))?;
    let mode = match (mode_line.keyword(), mode_line.tokens.get(1).map(|t| t.text)) {
        ("mode", Some("strands")) => {
            mode_line.expect_len(2)?;
            TraceMode::Strands
        }
        ("mode", Some("loop")) => {
            mode_line.expect_len(3)?;
            let base = mode_line.usize_at(2)?;
            if base >= s.face_count() {
                return Err(mode_line.error(2, format!("face {base} out of range")).into());
            }
            TraceMode::Loop { base }
        }
        _ => return Err(mode_line.error(0, "expected `mode strands` or `mode loop <face>`").into()),
    };
    let mut pos = 2;
    let initial = curve_block(s, &lines, &mut pos)?;
    let mut moves = Vec::new();
    while let Some(line) = lines.get(pos).filter(|l| l.keyword() == "move") {
        pos += 1;
        let chain = if line.tokens.get(1).map(|t| t.text) == Some("BalancePrepend") {
            let cl = lines.get(pos).ok_or_else(|| text::end_of_input(&lines, "`chain` line"))?;
            if cl.keyword() != "chain" {
                return Err(cl.error(0, "expected `chain` after BalancePrepend").into());
            }
            pos += 1;
            let fields: Vec<&str> = cl.tokens[1..].iter().map(|t| t.text).collect();
            Some(Chain::parse_fields(&fields).map_err(|m| cl.error(1, m))?)
        } else {
            None
        };
        moves.push(parse_move(s, line, chain)?);
    }
    if pos >= lines.len() {
        return Err(text::end_of_input(&lines, "final curve block").into());
    }
    let final_state = curve_block(s, &lines, &mut pos)?;
    let mut blocks = Vec::new();
    while let Some(line) = lines.get(pos).filter(|l| l.keyword() == "letters") {
        blocks.push(GeneratorWord::parse_letters_line(line)?.letters);
        pos += 1;
    }
    let end = lines.get(pos).ok_or_else(|| text::end_of_input(&lines, "`end`"))?;
    if end.keyword() != "end" {
        return Err(end.error(0, format!("unexpected keyword `{}`", end.keyword())).into());
    }
    end.expect_len(1)?;
    if let Some(extra) = lines.get(pos + 1) {
        return Err(extra.error(0, "content after `end`").into());
    }
    if mode == TraceMode::Strands && blocks.len() != 1 {
        return Err(end.error(0, "strand-mode trace needs exactly one `letters` line").into());
    }
    Ok(Trace { mode, initial, moves, final_state, blocks })
}

fn diverge(index: usize, message: impl Into<String>) -> ReplayError {
    ReplayError::Divergence { index, message: message.into() }
}

fn states_differ(index: usize, what: &str, expected: &CurveSystem, found: &CurveSystem) -> ReplayError {
    diverge(
        index,
        format!("{what} differs\n--- expected\n{}--- found\n{}", expected.serialize(), found.serialize()),
    )
}

/// The loop held by a loop-mode initial state; every other strand must be
/// stationary.
fn initial_loop(t: &Trace, base: FaceId) -> Result<Factor, ReplayError> {
    for (j, st) in t.initial.strands().iter().enumerate() {
        if j != base && (st.faces().len() != 1 || st.winds()[0] != 0) {
            return Err(diverge(0, format!("loop-mode initial state moves strand {j}")));
        }
    }
    Ok(Factor::Loop(t.initial.strand(base).clone()))
}

/// Replays `t`. Forward returns the final state and word it reproduces;
/// backward returns the initial state it reproduces and the word it
/// consumed. Either way the result matches the stored data, or an error
/// names the first move that does not.
pub fn replay(t: &Trace, direction: Direction) -> Result<(CurveSystem, GeneratorWord), ReplayError> {
    let s = t.surface().clone();
    let n = t.moves.len();
    match (t.mode, direction) {
        (TraceMode::Strands, Direction::Forward) => {
            let mut state = t.initial.clone();
            let mut letters: Vec<Letter> = Vec::new();
            for (i, tm) in t.moves.iter().enumerate() {
                let emit = apply_strands(&mut state, &tm.mv).map_err(|e| diverge(i, e.to_string()))?;
                if emit != tm.emit {
                    return Err(diverge(i, format!("emits `{}`, trace records `{}`", letters_text(&emit), letters_text(&tm.emit))));
                }
                letters.splice(0..0, emit);
            }
            if state != t.final_state {
                return Err(states_differ(n, "final state", &t.final_state, &state));
            }
            let word = GeneratorWord::new(letters);
            if word != t.word() {
                return Err(diverge(n, format!("word `{}` differs from recorded `{}`", word.letters_line(), t.word().letters_line())));
            }
            Ok((state, word))
        }
        (TraceMode::Strands, Direction::Backward) => {
            let mut state = t.final_state.clone();
            let word = t.word();
            let mut rest: &[Letter] = &word.letters;
            for (i, tm) in t.moves.iter().enumerate().rev() {
                let k = tm.emit.len();
                if rest.len() < k || rest[..k] != tm.emit[..] || tm.mv.emitted(&s) != tm.emit {
                    return Err(diverge(i, "word does not begin with this move's letters"));
                }
                rest = &rest[k..];
                undo_strands(&mut state, &tm.mv).map_err(|e| diverge(i, e.to_string()))?;
            }
            if !rest.is_empty() {
                return Err(diverge(0, format!("{} letters left over", rest.len())));
            }
            if state != t.initial {
                return Err(states_differ(0, "initial state", &t.initial, &state));
            }
            Ok((state, word))
        }
        (TraceMode::Loop { base }, Direction::Forward) => {
            let mut factors = vec![initial_loop(t, base)?];
            for (i, tm) in t.moves.iter().enumerate() {
                apply_loop(&s, &mut factors, &tm.mv).map_err(|e| diverge(i, e.to_string()))?;
                let emit = tm.mv.emitted(&s);
                if emit != tm.emit {
                    return Err(diverge(i, format!("emits `{}`, trace records `{}`", letters_text(&emit), letters_text(&tm.emit))));
                }
            }
            let mut blocks = Vec::new();
            for f in factors {
                match f {
                    Factor::Letters(l) => blocks.push(l),
                    Factor::Loop(_) => return Err(diverge(n, "a loop factor remains")),
                }
            }
            if blocks != t.blocks {
                return Err(diverge(n, "letter blocks differ from the recorded word"));
            }
            let identity = CurveSystem::identity(s.clone());
            if t.final_state != identity {
                return Err(states_differ(n, "final state", &identity, &t.final_state));
            }
            Ok((identity, t.word()))
        }
        (TraceMode::Loop { base }, Direction::Backward) => {
            let identity = CurveSystem::identity(s.clone());
            if t.final_state != identity {
                return Err(states_differ(n, "final state", &identity, &t.final_state));
            }
            let mut factors: Vec<Factor> = t.blocks.iter().cloned().map(Factor::Letters).collect();
            for (i, tm) in t.moves.iter().enumerate().rev() {
                if tm.mv.emitted(&s) != tm.emit {
                    return Err(diverge(i, "recorded letters do not match the move"));
                }
                undo_loop(&s, &mut factors, &tm.mv).map_err(|e| diverge(i, e.to_string()))?;
            }
            let expected = initial_loop(t, base)?;
            if factors != [expected] {
                return Err(diverge(0, "undoing every move does not give back the initial loop"));
            }
            Ok((t.initial.clone(), t.word()))
        }
    }
}
