//! Forward and inverse application of single moves. The engines and the
//! replay checker both go through these functions, so a trace that replays
//! is exactly a sequence of valid moves.

use crate::curve::{power, CurveSystem, Letter, StrandWord};
use crate::surface::{EdgeId, FaceId, Surface};

use super::disk::factor_disk_loop;
use super::palindrome::{drag_conjugate, slide, split_palindrome_at, undrag, unslide, unsplit, Drag, Split};
use super::strands::balancing_loop;
use super::{EngineError, Factor, Move};

fn fail(msg: impl Into<String>) -> EngineError {
    EngineError::Precondition(msg.into())
}

fn expect_edge(s: &Surface, a: FaceId, b: FaceId, edge: EdgeId) -> Result<(), EngineError> {
    match s.edge_between(a, b) {
        Some((e, _)) if e == edge => Ok(()),
        _ => Err(fail(format!("edge {edge} does not join faces {a} and {b}"))),
    }
}

fn check_strand(state: &CurveSystem, j: FaceId) -> Result<(), EngineError> {
    if j < state.strands().len() {
        Ok(())
    } else {
        Err(fail(format!("no strand starts at face {j}")))
    }
}

/// Hands the first crossing of strand `x` to the strand starting at `y`.
/// Applying it twice restores the state.
fn swap_first_letter(state: &mut CurveSystem, x: FaceId, edge: EdgeId, y: FaceId) -> Result<(), EngineError> {
    check_strand(state, x)?;
    check_strand(state, y)?;
    let sx = state.strand(x);
    if sx.faces().len() < 2 || sx.faces()[1] != y {
        return Err(fail(format!("strand {x} does not cross into face {y} first")));
    }
    expect_edge(state.surface(), x, y, edge)?;
    let old_x = sx.clone();
    let old_y = state.strand(y).clone();
    let new_y = StrandWord::from_raw(old_x.faces()[1..].to_vec(), old_x.winds()[1..].to_vec());
    let mut faces = vec![x];
    faces.extend_from_slice(old_y.faces());
    let mut winds = vec![old_x.winds()[0]];
    winds.extend_from_slice(old_y.winds());
    let strands = state.strands_mut();
    strands[x] = StrandWord::from_raw(faces, winds);
    strands[y] = new_y;
    Ok(())
}

/// Applies a multi-strand move and returns the letters it emits.
pub fn apply_strands(state: &mut CurveSystem, mv: &Move) -> Result<Vec<Letter>, EngineError> {
    let s = state.surface_arc().clone();
    match *mv {
        Move::BalancePrepend { word, ref chain } => {
            check_strand(state, word)?;
            let inv = balancing_loop(&s, chain)?.reversed();
            let st = &mut state.strands_mut()[word];
            if st.end_face() != inv.start_face() {
                return Err(fail(format!("strand {word} does not end at the balancing base face")));
            }
            *st = st.then(&inv);
        }
        Move::CancelPrefix { word, edge, pivot, wind, split } => {
            check_strand(state, word)?;
            expect_edge(&s, word, pivot, edge)?;
            let st = &mut state.strands_mut()[word];
            let (faces, winds) = st.parts_mut();
            if faces.len() < 3 || faces[1] != pivot || faces[2] != word {
                return Err(fail(format!("strand {word} does not begin with {word} {pivot} {word}")));
            }
            if winds[1] != wind || winds[2] != split {
                return Err(fail(format!("strand {word}: windings ({}, {}) differ from ({wind}, {split})", winds[1], winds[2])));
            }
            faces.drain(1..3);
            winds.drain(1..3);
            winds[0] += split;
        }
        Move::MoveFirstLetter { word, edge, to } => swap_first_letter(state, word, edge, to)?,
        Move::ResidualWind { word, edge, wind } => {
            check_strand(state, word)?;
            if s.first_edge_at(word) != Some(edge) {
                return Err(fail(format!("edge {edge} is not the lowest edge at face {word}")));
            }
            let (faces, winds) = state.strands_mut()[word].parts_mut();
            if faces.len() != 1 || winds[0] != wind {
                return Err(fail(format!("strand {word} is not stationary with winding {wind}")));
            }
            winds[0] = 0;
        }
        _ => return Err(fail(format!("{} is not a multi-strand move", mv.kind()))),
    }
    Ok(mv.emitted(&s))
}

/// Inverse of [`apply_strands`] (the emitted letters are the caller's business).
pub fn undo_strands(state: &mut CurveSystem, mv: &Move) -> Result<(), EngineError> {
    let s = state.surface_arc().clone();
    match *mv {
        Move::BalancePrepend { word, ref chain } => {
            check_strand(state, word)?;
            let inv = balancing_loop(&s, chain)?.reversed();
            let k = inv.faces().len() - 1;
            let (faces, winds) = state.strands_mut()[word].parts_mut();
            let n = faces.len();
            if n <= k || faces[n - k - 1..] != *inv.faces() || winds[n - k..] != inv.winds()[1..] {
                return Err(fail(format!("strand {word} does not end with the balancing loop")));
            }
            faces.truncate(n - k);
            winds.truncate(n - k);
            winds[n - k - 1] -= inv.winds()[0];
        }
        Move::CancelPrefix { word, edge, pivot, wind, split } => {
            check_strand(state, word)?;
            expect_edge(&s, word, pivot, edge)?;
            let (faces, winds) = state.strands_mut()[word].parts_mut();
            winds[0] -= split;
            faces.splice(1..1, [pivot, word]);
            winds.splice(1..1, [wind, split]);
        }
        Move::MoveFirstLetter { word, edge, to } => swap_first_letter(state, word, edge, to)?,
        Move::ResidualWind { word, edge, wind } => {
            check_strand(state, word)?;
            if s.first_edge_at(word) != Some(edge) {
                return Err(fail(format!("edge {edge} is not the lowest edge at face {word}")));
            }
            let (faces, winds) = state.strands_mut()[word].parts_mut();
            if faces.len() != 1 || winds[0] != 0 {
                return Err(fail(format!("strand {word} is not stationary and unwound")));
            }
            winds[0] = wind;
        }
        _ => return Err(fail(format!("{} is not a multi-strand move", mv.kind()))),
    }
    Ok(())
}

fn loop_at(factors: &[Factor], at: usize) -> Result<&StrandWord, EngineError> {
    match factors.get(at) {
        Some(Factor::Loop(l)) => Ok(l),
        _ => Err(fail(format!("factor {at} is not a loop"))),
    }
}

fn letters_at(factors: &[Factor], at: usize) -> Result<&[Letter], EngineError> {
    match factors.get(at) {
        Some(Factor::Letters(l)) => Ok(l),
        _ => Err(fail(format!("factor {at} is not a letter block"))),
    }
}

/// Applies a loop-mode move to the factor list.
pub fn apply_loop(s: &Surface, factors: &mut Vec<Factor>, mv: &Move) -> Result<(), EngineError> {
    match *mv {
        Move::CancelPrefix { word: at, edge, pivot, wind, split } => {
            let l = loop_at(factors, at)?;
            let (x, w) = (l.faces(), l.winds());
            if x.len() < 3 || x[1] != pivot || x[2] != x[0] || w[1] != wind || w[2] != split {
                return Err(fail(format!("loop {at} does not begin with the cancelled pair")));
            }
            expect_edge(s, x[0], pivot, edge)?;
            let mut faces = x.to_vec();
            let mut winds = w.to_vec();
            faces.drain(1..3);
            winds.drain(1..3);
            winds[0] += split;
            let repl = [Factor::Loop(StrandWord::from_raw(faces, winds)), Factor::Letters(power(edge, 2 * wind))];
            factors.splice(at..=at, repl);
        }
        Move::Contract { at, face, wind } => {
            let l = loop_at(factors, at)?;
            if l.faces() != [face] || l.winds() != [wind] {
                return Err(fail(format!("loop {at} is not stationary at face {face} with winding {wind}")));
            }
            factors.remove(at);
        }
        Move::SplitPalindrome { at, pivot } => {
            let sp = split_palindrome_at(loop_at(factors, at)?, pivot)?;
            factors.splice(at..=at, [Factor::Loop(sp.last), Factor::Loop(sp.middle), Factor::Loop(sp.first)]);
        }
        Move::DragConjugate { at, edge, a, b, first, last } => {
            let d = drag_conjugate(s, loop_at(factors, at)?)?;
            if (d.edge, d.a, d.b, d.first, d.last) != (edge, a, b, first, last) {
                return Err(fail(format!("drag parameters of loop {at} differ")));
            }
            let repl = [Factor::Letters(d.left()), Factor::Loop(d.middle.clone()), Factor::Letters(d.right())];
            factors.splice(at..=at, repl);
        }
        Move::SlideX2X1X2 { at, face, wind, split } => {
            let l = loop_at(factors, at)?;
            if l.start_face() != face {
                return Err(fail(format!("loop {at} is not based at face {face}")));
            }
            let (short, w, sp) = slide(l)?;
            if (w, sp) != (wind, split) {
                return Err(fail(format!("slide windings of loop {at} differ")));
            }
            factors[at] = Factor::Loop(short);
        }
        Move::DiskFactor { at, ref disk, ref original, count } => {
            if loop_at(factors, at)? != original {
                return Err(fail(format!("loop {at} differs from the recorded loop")));
            }
            let pieces = factor_disk_loop(s, disk, original)?;
            if pieces.len() != count {
                return Err(fail(format!("disk factorization has {} pieces, not {count}", pieces.len())));
            }
            factors.splice(at..=at, pieces.into_iter().rev().map(|p| Factor::Loop(p.word)));
        }
        _ => return Err(fail(format!("{} is not a loop move", mv.kind()))),
    }
    Ok(())
}

/// Inverse of [`apply_loop`].
pub fn undo_loop(s: &Surface, factors: &mut Vec<Factor>, mv: &Move) -> Result<(), EngineError> {
    match *mv {
        Move::CancelPrefix { word: at, edge, pivot, wind, split } => {
            let l = loop_at(factors, at)?.clone();
            if letters_at(factors, at + 1)? != power(edge, 2 * wind).as_slice() {
                return Err(fail(format!("factor {} is not the cancelled twist", at + 1)));
            }
            expect_edge(s, l.start_face(), pivot, edge)?;
            let mut faces = l.faces().to_vec();
            let mut winds = l.winds().to_vec();
            winds[0] -= split;
            faces.splice(1..1, [pivot, l.start_face()]);
            winds.splice(1..1, [wind, split]);
            factors.splice(at..at + 2, [Factor::Loop(StrandWord::from_raw(faces, winds))]);
        }
        Move::Contract { at, face, wind } => {
            if at > factors.len() || face >= s.face_count() {
                return Err(fail(format!("cannot restore a loop at factor {at}")));
            }
            factors.insert(at, Factor::Loop(StrandWord::from_raw(vec![face], vec![wind])));
        }
        Move::SplitPalindrome { at, pivot } => {
            let sp = Split {
                last: loop_at(factors, at)?.clone(),
                middle: loop_at(factors, at + 1)?.clone(),
                first: loop_at(factors, at + 2)?.clone(),
            };
            let whole = unsplit(&sp, pivot)?;
            factors.splice(at..at + 3, [Factor::Loop(whole)]);
        }
        Move::DragConjugate { at, edge, a, b, first, last } => {
            let d = Drag { edge, a, b, first, last, middle: loop_at(factors, at + 1)?.clone() };
            if letters_at(factors, at)? != d.left().as_slice() || letters_at(factors, at + 2)? != d.right().as_slice() {
                return Err(fail(format!("factors around loop {} are not the drag conjugators", at + 1)));
            }
            let whole = undrag(s, &d)?;
            factors.splice(at..at + 3, [Factor::Loop(whole)]);
        }
        Move::SlideX2X1X2 { at, face, wind, split } => {
            let short = loop_at(factors, at)?.clone();
            if short.start_face() != face {
                return Err(fail(format!("loop {at} is not based at face {face}")));
            }
            let whole = unslide(&short, wind, split)?;
            match slide(&whole) {
                Ok((again, w, sp)) if again == short && (w, sp) == (wind, split) => {}
                _ => return Err(fail(format!("loop {at} cannot be slid back"))),
            }
            factors[at] = Factor::Loop(whole);
        }
        Move::DiskFactor { at, ref disk, ref original, count } => {
            let pieces = factor_disk_loop(s, disk, original)?;
            if pieces.len() != count || at + count > factors.len() {
                return Err(fail(format!("disk factorization at {at} has the wrong length")));
            }
            for (i, p) in pieces.iter().rev().enumerate() {
                if loop_at(factors, at + i)? != &p.word {
                    return Err(fail(format!("factor {} is not the expected puncture loop", at + i)));
                }
            }
            factors.splice(at..at + count, [Factor::Loop(original.clone())]);
        }
        _ => return Err(fail(format!("{} is not a loop move", mv.kind()))),
    }
    Ok(())
}
