//! Loop engine: reduces one based loop, held as a product of factors, until
//! only edge twists remain.

use std::sync::Arc;

use crate::curve::{CurveSystem, GeneratorWord, StrandWord};
use crate::surface::{FaceId, Surface};

use super::moves::apply_loop;
use super::palindrome::{drag_conjugate, split_point};
use super::trace::{Trace, TraceMode, TraceMove};
use super::{EngineConfig, EngineError, Factor, Move};

/// The move the engine applies to the loop at factor `at`.
fn choose(s: &Surface, at: usize, lp: &StrandWord) -> Result<Move, EngineError> {
    let (x, w) = (lp.faces(), lp.winds());
    if x.len() == 1 {
        return Ok(Move::Contract { at, face: x[0], wind: w[0] });
    }
    if !lp.is_palindrome() {
        return Err(EngineError::NotPalindrome(format!("{x:?}")));
    }
    if lp.height() == 2 {
        let (edge, _) = s.edge_between(x[0], x[1]).expect("consecutive faces are adjacent");
        return Ok(Move::CancelPrefix { word: at, edge, pivot: x[1], wind: w[1], split: w[2] });
    }
    if let Some(pivot) = split_point(lp) {
        return Ok(Move::SplitPalindrome { at, pivot });
    }
    let c = x.len() / 2;
    if x[c] == x[0] {
        return Ok(Move::SlideX2X1X2 { at, face: x[0], wind: w[c], split: w[c + 1] });
    }
    let d = drag_conjugate(s, lp)?;
    Ok(Move::DragConjugate { at, edge: d.edge, a: d.a, b: d.b, first: d.first, last: d.last })
}

struct LoopRun {
    surface: Arc<Surface>,
    factors: Vec<Factor>,
    moves: Vec<TraceMove>,
    limit: usize,
}

impl LoopRun {
    fn push(&mut self, mv: Move) -> Result<(), EngineError> {
        if self.moves.len() >= self.limit {
            return Err(EngineError::MoveLimitExceeded { limit: self.limit });
        }
        apply_loop(&self.surface, &mut self.factors, &mv)?;
        let emit = mv.emitted(&self.surface);
        self.moves.push(TraceMove { mv, emit });
        Ok(())
    }

    fn run(&mut self) -> Result<(), EngineError> {
        while let Some((at, lp)) = self.factors.iter().enumerate().find_map(|(i, f)| match f {
            Factor::Loop(l) => Some((i, l)),
            Factor::Letters(_) => None,
        }) {
            let mv = choose(&self.surface, at, lp)?;
            self.push(mv)?;
        }
        Ok(())
    }

    fn finish(self, base: FaceId, lp: &StrandWord) -> Result<(GeneratorWord, Trace), EngineError> {
        let mut strands: Vec<StrandWord> = (0..self.surface.face_count()).map(StrandWord::stationary).collect();
        strands[base] = lp.clone();
        let initial = CurveSystem::new(self.surface.clone(), strands)?;
        let blocks: Vec<_> = self
            .factors
            .into_iter()
            .map(|f| match f {
                Factor::Letters(l) => l,
                Factor::Loop(_) => unreachable!("run leaves no loops"),
            })
            .collect();
        let trace = Trace {
            mode: TraceMode::Loop { base },
            initial,
            moves: self.moves,
            final_state: CurveSystem::identity(self.surface.clone()),
            blocks,
        };
        Ok((trace.word(), trace))
    }
}

fn check_loop(s: &Surface, lp: &StrandWord) -> Result<FaceId, EngineError> {
    StrandWord::from_parts(s, lp.faces().to_vec(), lp.winds().to_vec())?;
    if lp.start_face() != lp.end_face() {
        return Err(EngineError::Precondition(format!(
            "loop starts at {} but ends at {}",
            lp.start_face(),
            lp.end_face()
        )));
    }
    Ok(lp.start_face())
}

/// Reduces a palindromic loop based at its start face.
pub fn reduce_palindrome(
    s: &Arc<Surface>,
    lp: &StrandWord,
    config: &EngineConfig,
) -> Result<(GeneratorWord, Trace), EngineError> {
    let base = check_loop(s, lp)?;
    if !lp.is_palindrome() {
        return Err(EngineError::NotPalindrome(format!("{:?}", lp.faces())));
    }
    let mut run = LoopRun {
        surface: s.clone(),
        factors: vec![Factor::Loop(lp.clone())],
        moves: Vec::new(),
        limit: config.move_limit,
    };
    run.run()?;
    run.finish(base, lp)
}

/// Factors a loop inside `disk` into puncture loops and reduces each.
pub fn reduce_disk_loop(
    s: &Arc<Surface>,
    disk: &[FaceId],
    lp: &StrandWord,
    config: &EngineConfig,
) -> Result<(GeneratorWord, Trace), EngineError> {
    let base = check_loop(s, lp)?;
    let pieces = super::disk::factor_disk_loop(s, disk, lp)?;
    let mut run = LoopRun {
        surface: s.clone(),
        factors: vec![Factor::Loop(lp.clone())],
        moves: Vec::new(),
        limit: config.move_limit,
    };
    let mut sorted = disk.to_vec();
    sorted.sort_unstable();
    run.push(Move::DiskFactor { at: 0, disk: sorted, original: lp.clone(), count: pieces.len() })?;
    run.run()?;
    run.finish(base, lp)
}
