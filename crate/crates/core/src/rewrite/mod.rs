//! Reduction of curve systems to generator words.
//!
//! Two engines share one move vocabulary. The multi-strand engine works on a
//! whole [`CurveSystem`] (balance, then cancel crossings two at a time). The
//! loop engine works on a single based loop held as a product of factors and
//! peels palindromes down to edge twists.

mod disk;
mod loops;
mod moves;
mod palindrome;
mod strands;
mod trace;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::chains::{Chain, ChainError};
use crate::curve::{power, CurveError, Letter, StrandWord};
use crate::surface::{EdgeId, FaceId, Sign, Surface};

pub use disk::{factor_disk_loop, validate_disk, PunctureLoop};
pub use palindrome::{drag_conjugate, slide, split_palindrome, split_palindrome_at, split_point, undrag, unslide, unsplit, Drag, Split};
pub use strands::{balance, balancing_loop, cancel_prefix, move_first_letter, reduce_main, vertex_loop, Reduction};
pub use moves::{
    apply_loop as apply_move_loop, apply_strands as apply_move_strands, undo_loop as undo_move_loop,
    undo_strands as undo_move_strands,
};
pub use loops::{reduce_disk_loop, reduce_palindrome};
pub use trace::{parse_trace, replay, Direction, ReplayError, Trace, TraceError, TraceMode, TraceMove};


/// Default cap on the number of moves in one reduction.
pub const DEFAULT_MOVE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("edge chain is not a boundary: {chain}")]
    NotNullHomologous { chain: Chain },
    #[error("move limit {limit} exceeded")]
    MoveLimitExceeded { limit: usize },
    #[error("loop is not a palindrome: {0}")]
    NotPalindrome(String),
    #[error("not a disk: {0}")]
    NotDisk(String),
    #[error("loop leaves the disk at face {face}")]
    LeavesDisk { face: FaceId },
    #[error("move precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub move_limit: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { move_limit: DEFAULT_MOVE_LIMIT }
    }
}

impl EngineConfig {
    /// Default config, with the limit overridden by `BRAIDCELL_MOVE_LIMIT`.
    pub fn from_env() -> Self {
        let move_limit = std::env::var("BRAIDCELL_MOVE_LIMIT")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MOVE_LIMIT);
        EngineConfig { move_limit }
    }
}

/// One rewrite step. Multi-strand moves name a strand by its start face;
/// loop moves name a factor by its index `at`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// Appends the inverse balancing loop of `chain` to strand `word`.
    BalancePrepend { word: FaceId, chain: Chain },
    /// `(a b a …) → (a …)`, emitting `σ_e^{2·wind}`.
    CancelPrefix { word: FaceId, edge: EdgeId, pivot: FaceId, wind: i64, split: i64 },
    /// Hands the first crossing of strand `word` to the strand at `to`.
    MoveFirstLetter { word: FaceId, edge: EdgeId, to: FaceId },
    /// Turns a leftover winding of a stationary strand into `σ_e^{2·wind}`.
    ResidualWind { word: FaceId, edge: EdgeId, wind: i64 },
    SplitPalindrome { at: usize, pivot: usize },
    DragConjugate { at: usize, edge: EdgeId, a: i64, b: i64, first: i64, last: i64 },
    /// `(… y B y …) → (… y …)` at the top of a loop whose top face is its base.
    SlideX2X1X2 { at: usize, face: FaceId, wind: i64, split: i64 },
    /// Drops a loop that never leaves its (vacant) base face.
    Contract { at: usize, face: FaceId, wind: i64 },
    /// Replaces a loop inside a disk by `count` palindromic puncture loops.
    DiskFactor { at: usize, disk: Vec<FaceId>, original: StrandWord, count: usize },
}

impl Move {
    pub fn kind(&self) -> &'static str {
        match self {
            Move::BalancePrepend { .. } => "BalancePrepend",
            Move::CancelPrefix { .. } => "CancelPrefix",
            Move::MoveFirstLetter { .. } => "MoveFirstLetter",
            Move::ResidualWind { .. } => "ResidualWind",
            Move::SplitPalindrome { .. } => "SplitPalindrome",
            Move::DragConjugate { .. } => "DragConjugate",
            Move::SlideX2X1X2 { .. } => "SlideX2X1X2",
            Move::Contract { .. } => "Contract",
            Move::DiskFactor { .. } => "DiskFactor",
        }
    }

    /// Letters this move contributes to the output word.
    pub fn emitted(&self, s: &Surface) -> Vec<Letter> {
        match *self {
            Move::CancelPrefix { edge, wind, .. } | Move::ResidualWind { edge, wind, .. } => power(edge, 2 * wind),
            // the sign of the crossing made by the receiving strand, so that
            // reducing the datum of `σ_e` gives back `σ_e`
            Move::MoveFirstLetter { word, edge, .. } => match s.edges().get(edge) {
                Some(e) => vec![Letter::new(edge, if e.head == word { Sign::Plus } else { Sign::Minus })],
                None => Vec::new(),
            },
            Move::DragConjugate { edge, a, b, .. } => {
                let mut out = power(edge, -(2 * b + 1));
                out.extend(power(edge, 1 - 2 * a));
                out
            }
            _ => Vec::new(),
        }
    }

    /// Factor addressed by a loop-mode move.
    pub fn factor_index(&self) -> Option<usize> {
        match *self {
            Move::SplitPalindrome { at, .. }
            | Move::DragConjugate { at, .. }
            | Move::SlideX2X1X2 { at, .. }
            | Move::Contract { at, .. }
            | Move::DiskFactor { at, .. } => Some(at),
            Move::CancelPrefix { word, .. } => Some(word),
            _ => None,
        }
    }

    /// `key=value` fields in file order.
    pub(crate) fn fields(&self, s: &Surface) -> Vec<(&'static str, String)> {
        let join = |v: &[FaceId]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        match self {
            Move::BalancePrepend { word, .. } => vec![("word", word.to_string())],
            Move::CancelPrefix { word, edge, pivot, wind, split } => vec![
                ("word", word.to_string()),
                ("edge", edge.to_string()),
                ("pivot", pivot.to_string()),
                ("wind", wind.to_string()),
                ("split", split.to_string()),
            ],
            Move::MoveFirstLetter { word, edge, to } => {
                vec![("word", word.to_string()), ("edge", edge.to_string()), ("to", to.to_string())]
            }
            Move::ResidualWind { word, edge, wind } => {
                vec![("word", word.to_string()), ("edge", edge.to_string()), ("wind", wind.to_string())]
            }
            Move::SplitPalindrome { at, pivot } => vec![("at", at.to_string()), ("pivot", pivot.to_string())],
            Move::DragConjugate { at, edge, a, b, first, last } => vec![
                ("at", at.to_string()),
                ("edge", edge.to_string()),
                ("a", a.to_string()),
                ("b", b.to_string()),
                ("first", first.to_string()),
                ("last", last.to_string()),
            ],
            Move::SlideX2X1X2 { at, face, wind, split } => vec![
                ("at", at.to_string()),
                ("face", face.to_string()),
                ("wind", wind.to_string()),
                ("split", split.to_string()),
            ],
            Move::Contract { at, face, wind } => {
                vec![("at", at.to_string()), ("face", face.to_string()), ("wind", wind.to_string())]
            }
            Move::DiskFactor { at, disk, original, count } => vec![
                ("at", at.to_string()),
                ("disk", join(disk)),
                ("loop", original.compact(s)),
                ("count", count.to_string()),
            ],
        }
    }

    /// Inverse of [`Move::fields`]; `chain` is the body of the line that
    /// follows a `BalancePrepend`.
    pub(crate) fn from_fields(
        s: &Surface,
        kind: &str,
        fields: &BTreeMap<String, String>,
        chain: Option<Chain>,
    ) -> Result<Move, String> {
        let get = |k: &str| fields.get(k).ok_or_else(|| format!("{kind}: missing field `{k}`"));
        let uint = |k: &str| -> Result<usize, String> {
            get(k)?.parse().map_err(|_| format!("{kind}: field `{k}` is not a non-negative integer"))
        };
        let int = |k: &str| -> Result<i64, String> {
            crate::text::parse_signed(get(k)?).ok_or_else(|| format!("{kind}: field `{k}` is not an integer"))
        };
        let expected: &[&str] = match kind {
            "BalancePrepend" => &["word"],
            "CancelPrefix" => &["word", "edge", "pivot", "wind", "split"],
            "MoveFirstLetter" => &["word", "edge", "to"],
            "ResidualWind" => &["word", "edge", "wind"],
            "SplitPalindrome" => &["at", "pivot"],
            "DragConjugate" => &["at", "edge", "a", "b", "first", "last"],
            "SlideX2X1X2" => &["at", "face", "wind", "split"],
            "Contract" => &["at", "face", "wind"],
            "DiskFactor" => &["at", "disk", "loop", "count"],
            other => return Err(format!("unknown move kind `{other}`")),
        };
        if let Some(extra) = fields.keys().find(|k| !expected.contains(&k.as_str())) {
            return Err(format!("{kind}: unexpected field `{extra}`"));
        }
        Ok(match kind {
            "BalancePrepend" => Move::BalancePrepend {
                word: uint("word")?,
                chain: chain.ok_or("BalancePrepend: missing `chain` line")?,
            },
            "CancelPrefix" => Move::CancelPrefix {
                word: uint("word")?,
                edge: uint("edge")?,
                pivot: uint("pivot")?,
                wind: int("wind")?,
                split: int("split")?,
            },
            "MoveFirstLetter" => Move::MoveFirstLetter { word: uint("word")?, edge: uint("edge")?, to: uint("to")? },
            "ResidualWind" => Move::ResidualWind { word: uint("word")?, edge: uint("edge")?, wind: int("wind")? },
            "SplitPalindrome" => Move::SplitPalindrome { at: uint("at")?, pivot: uint("pivot")? },
            "DragConjugate" => Move::DragConjugate {
                at: uint("at")?,
                edge: uint("edge")?,
                a: int("a")?,
                b: int("b")?,
                first: int("first")?,
                last: int("last")?,
            },
            "SlideX2X1X2" => Move::SlideX2X1X2 {
                at: uint("at")?,
                face: uint("face")?,
                wind: int("wind")?,
                split: int("split")?,
            },
            "Contract" => Move::Contract { at: uint("at")?, face: uint("face")?, wind: int("wind")? },
            _ => {
                let disk = get("disk")?
                    .split(',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| format!("DiskFactor: bad face `{t}`")))
                    .collect::<Result<Vec<_>, _>>()?;
                Move::DiskFactor {
                    at: uint("at")?,
                    disk,
                    original: StrandWord::parse_compact(s, get("loop")?)?,
                    count: uint("count")?,
                }
            }
        })
    }
}

/// A factor of a loop-mode product. The list `[f1, f2, …, fr]` means
/// `f1 · f2 ⋯ fr`, with `fr` acting first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Letters(Vec<Letter>),
    Loop(StrandWord),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Letters(ls) => {
                let v: Vec<String> = ls.iter().map(Letter::to_string).collect();
                write!(f, "[{}]", v.join(" "))
            }
            Factor::Loop(w) => write!(f, "loop{:?}/{:?}", w.faces(), w.winds()),
        }
    }
}
