//! Multi-strand engine: balancing by vertex loops, then cancelling crossing
//! pairs one phase at a time until every strand is stationary.

use crate::chains::{edge_chain_of, solve_preimage, Chain, ChainError, Grade};
use crate::curve::{CurveSystem, GeneratorWord, Letter, StrandWord};
use crate::surface::{FaceId, Surface, VertexId};

use super::moves::apply_strands;
use super::trace::{Trace, TraceMode, TraceMove};
use super::{EngineConfig, EngineError, Move};

/// Output of [`reduce_main`]: `[γ] = word`, with the trace that proves it.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub word: GeneratorWord,
    pub trace: Trace,
}

/// Loop based at face 0: along the shortest dual path to the nearest face
/// around `v`, once around `v` in stored cycle order, and back.
pub fn vertex_loop(s: &Surface, v: VertexId) -> StrandWord {
    let around = s.vertex_faces(v);
    let path = s
        .dual_path_within(0, |f| around.contains(&f), |_| true)
        .expect("dual graph is connected");
    let t = *path.last().unwrap();
    let i = around.iter().position(|&f| f == t).unwrap();
    let n = around.len();
    let mut faces = path.clone();
    faces.extend((1..=n).map(|k| around[(i + k) % n]));
    faces.extend(path.iter().rev().skip(1));
    let len = faces.len();
    StrandWord::from_raw(faces, vec![0; len])
}

/// Product of vertex loops with edge chain `∂chain`: for each vertex in
/// ascending order, `|c|` copies of its loop (reversed when `c < 0`).
pub fn balancing_loop(s: &Surface, chain: &Chain) -> Result<StrandWord, EngineError> {
    if chain.grade() != Grade::V {
        return Err(ChainError::WrongGrade { expected: Grade::V, found: chain.grade() }.into());
    }
    chain.check_ids(s)?;
    let mut out = StrandWord::stationary(0);
    for (v, c) in chain.iter() {
        let lp = vertex_loop(s, v);
        let lp = if c < 0 { lp.reversed() } else { lp };
        for _ in 0..c.unsigned_abs() {
            out = out.then(&lp);
        }
    }
    Ok(out)
}

struct Run {
    state: CurveSystem,
    moves: Vec<TraceMove>,
    limit: usize,
}

impl Run {
    fn push(&mut self, mv: Move) -> Result<(), EngineError> {
        if self.moves.len() >= self.limit {
            return Err(EngineError::MoveLimitExceeded { limit: self.limit });
        }
        let emit = apply_strands(&mut self.state, &mv)?;
        self.moves.push(TraceMove { mv, emit });
        Ok(())
    }

    fn faces(&self, j: FaceId) -> &[FaceId] {
        self.state.strand(j).faces()
    }

    /// Moves the first letter of `j` on; returns the start face of the
    /// strand now holding the rest of `j`.
    fn pass_on(&mut self, j: FaceId) -> Result<FaceId, EngineError> {
        let mv = first_letter_move(&self.state, j)?;
        let Move::MoveFirstLetter { to, .. } = mv else { unreachable!() };
        self.push(mv)?;
        Ok(to)
    }

    fn cancel(&mut self, j: FaceId) -> Result<(), EngineError> {
        let mv = cancel_move(&self.state, j)?;
        self.push(mv)
    }

    fn into_trace(self, initial: CurveSystem) -> Trace {
        let letters: Vec<Letter> = self.moves.iter().rev().flat_map(|m| m.emit.iter().copied()).collect();
        Trace {
            mode: TraceMode::Strands,
            initial,
            moves: self.moves,
            final_state: self.state,
            blocks: vec![letters],
        }
    }
}

fn first_letter_move(state: &CurveSystem, j: FaceId) -> Result<Move, EngineError> {
    let faces = state.strand(j).faces();
    if faces.len() < 2 {
        return Err(EngineError::Precondition(format!("strand {j} has no crossing to move")));
    }
    let (edge, _) = state.surface().edge_between(j, faces[1]).expect("consecutive faces are adjacent");
    Ok(Move::MoveFirstLetter { word: j, edge, to: faces[1] })
}

fn cancel_move(state: &CurveSystem, j: FaceId) -> Result<Move, EngineError> {
    let st = state.strand(j);
    let (faces, winds) = (st.faces(), st.winds());
    if faces.len() < 3 || faces[2] != j {
        return Err(EngineError::Precondition(format!("strand {j} does not begin with a returning crossing pair")));
    }
    let (edge, _) = state.surface().edge_between(j, faces[1]).expect("consecutive faces are adjacent");
    Ok(Move::CancelPrefix { word: j, edge, pivot: faces[1], wind: winds[1], split: winds[2] })
}

/// Hands the first crossing of strand `j` to its neighbour; returns the new
/// state and the emitted letter.
pub fn move_first_letter(state: &CurveSystem, j: FaceId) -> Result<(CurveSystem, Letter), EngineError> {
    let mv = first_letter_move(state, j)?;
    let mut next = state.clone();
    let emit = apply_strands(&mut next, &mv)?;
    Ok((next, emit[0]))
}

/// Removes the leading `(j b j)` of strand `j`; returns the new state and
/// the emitted twist.
pub fn cancel_prefix(state: &CurveSystem, j: FaceId) -> Result<(CurveSystem, Vec<Letter>), EngineError> {
    let mv = cancel_move(state, j)?;
    let mut next = state.clone();
    let emit = apply_strands(&mut next, &mv)?;
    Ok((next, emit))
}

fn balance_into(run: &mut Run) -> Result<(), EngineError> {
    let target = edge_chain_of(&run.state);
    if target.is_zero() {
        return Ok(());
    }
    let chain = solve_preimage(run.state.surface(), &target)?
        .ok_or_else(|| EngineError::NotNullHomologous { chain: target.clone() })?;
    let word = run
        .state
        .strands()
        .iter()
        .position(|st| st.end_face() == 0)
        .expect("strand ends form a permutation");
    run.push(Move::BalancePrepend { word, chain })
}

/// Appends the inverse balancing loop so that every edge is crossed equally
/// often in both directions.
pub fn balance(gamma: &CurveSystem) -> Result<(CurveSystem, Trace), EngineError> {
    let mut run = Run { state: gamma.clone(), moves: Vec::new(), limit: usize::MAX };
    balance_into(&mut run)?;
    let trace = run.into_trace(gamma.clone());
    Ok((trace.final_state.clone(), trace))
}

/// Reduces `gamma` to a word in the edge transpositions.
pub fn reduce_main(gamma: &CurveSystem, config: &EngineConfig) -> Result<Reduction, EngineError> {
    let mut run = Run { state: gamma.clone(), moves: Vec::new(), limit: config.move_limit };
    balance_into(&mut run)?;
    let n = gamma.strands().len();
    while let Some(w1) = (0..n).find(|&j| run.faces(j).len() >= 2) {
        let mut a = w1;
        while run.faces(a).len() > 2 {
            a = run.pass_on(a)?;
        }
        let b = run.faces(a)[1];
        let mut s = (0..n)
            .find(|&j| j != a && run.faces(j).windows(2).any(|p| p == [b, a]))
            .ok_or_else(|| EngineError::Precondition(format!("no strand crosses back from {b} to {a}")))?;
        loop {
            while run.faces(s)[1] != a {
                s = run.pass_on(s)?;
            }
            let xj = s;
            run.pass_on(xj)?;
            if xj == b {
                run.cancel(b)?;
                break;
            }
            let xk = *run
                .faces(a)
                .get(1)
                .ok_or_else(|| EngineError::Precondition(format!("strand {a} ended early")))?;
            run.pass_on(a)?;
            if xk == xj {
                run.cancel(a)?;
                break;
            }
            run.pass_on(xj)?;
            s = xk;
        }
    }
    for j in 0..n {
        let wind = run.state.strand(j).winds()[0];
        if wind != 0 {
            let edge = gamma.surface().first_edge_at(j).expect("every face has an edge");
            run.push(Move::ResidualWind { word: j, edge, wind })?;
        }
    }
    let trace = run.into_trace(gamma.clone());
    Ok(Reduction { word: trace.word(), trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::Canonical;
    use crate::chains::boundary;
    use std::sync::Arc;

    fn surface(kind: Canonical) -> Arc<Surface> {
        Arc::new(kind.build().unwrap())
    }

    #[test]
    fn vertex_loop_bounds_its_vertex() {
        for kind in [Canonical::Cube, Canonical::TorusGrid { rows: 3, cols: 3 }] {
            let s = surface(kind);
            for v in 0..s.vertex_count() {
                let mut gamma = CurveSystem::identity(s.clone());
                gamma.strands_mut()[0] = vertex_loop(&s, v);
                let expected = boundary(&s, &Chain::unit(Grade::V, v)).unwrap();
                assert_eq!(edge_chain_of(&gamma), expected, "{kind} vertex {v}");
            }
        }
    }

    #[test]
    fn reduce_sigma_gives_one_letter() {
        let s = surface(Canonical::Cube);
        let e = s.neighbors(0)[0].1;
        let word = GeneratorWord::new(vec![Letter::new(e, crate::surface::Sign::Plus)]);
        let gamma = CurveSystem::of_word(s.clone(), &word).unwrap();
        let red = reduce_main(&gamma, &EngineConfig::default()).unwrap();
        assert_eq!(red.word.len(), 1);
        assert_eq!(red.word.letters[0].edge, e);
        assert!(red.trace.final_state.is_identity());
    }

    #[test]
    fn identity_needs_no_moves() {
        let s = surface(Canonical::Tetrahedron);
        let red = reduce_main(&CurveSystem::identity(s), &EngineConfig::default()).unwrap();
        assert!(red.word.is_empty());
        assert!(red.trace.moves.is_empty());
    }

    #[test]
    fn move_limit_is_enforced() {
        let s = surface(Canonical::Cube);
        let e = s.neighbors(0)[0].1;
        let word = GeneratorWord::new(vec![Letter::new(e, crate::surface::Sign::Plus); 3]);
        let gamma = CurveSystem::of_word(s.clone(), &word).unwrap();
        let err = reduce_main(&gamma, &EngineConfig { move_limit: 1 }).unwrap_err();
        assert_eq!(err, EngineError::MoveLimitExceeded { limit: 1 });
    }

    #[test]
    fn single_crossing_is_rejected() {
        let s = surface(Canonical::Cube);
        let mut strands: Vec<StrandWord> = (0..6).map(StrandWord::stationary).collect();
        let b = s.neighbors(0)[0].0;
        strands[0] = StrandWord::from_faces(&s, vec![0, b]).unwrap();
        let gamma = CurveSystem::new_relaxed(s, strands).unwrap();
        let err = reduce_main(&gamma, &EngineConfig::default()).unwrap_err();
        assert!(matches!(err, EngineError::NotNullHomologous { .. }), "{err}");
    }

    #[test]
    fn torus_meridian_is_rejected() {
        let s = surface(Canonical::TorusGrid { rows: 3, cols: 3 });
        let mut strands: Vec<StrandWord> = (0..9).map(StrandWord::stationary).collect();
        strands[0] = StrandWord::from_faces(&s, vec![0, 1, 2, 0]).unwrap();
        let gamma = CurveSystem::new(s, strands).unwrap();
        assert!(matches!(balance(&gamma), Err(EngineError::NotNullHomologous { .. })));
    }

    fn system(s: &Arc<Surface>, faces: &[&[FaceId]]) -> CurveSystem {
        let strands = faces.iter().map(|f| StrandWord::from_faces(s, f.to_vec()).unwrap()).collect();
        CurveSystem::new(s.clone(), strands).unwrap()
    }

    fn faces_of(g: &CurveSystem) -> Vec<Vec<FaceId>> {
        g.strands().iter().map(|st| st.faces().to_vec()).collect()
    }

    #[test]
    fn first_letter_switch() {
        // {(x y z), (y w), ...} -> {(x y w), (y z), ...} with x, y, z, w = 0, 1, 2, 3
        let s = surface(Canonical::Tetrahedron);
        let g = system(&s, &[&[0, 1, 2], &[1, 3], &[2, 0], &[3, 1]]);
        let (h, letter) = move_first_letter(&g, 0).unwrap();
        assert_eq!(faces_of(&h), [vec![0, 1, 3], vec![1, 2], vec![2, 0], vec![3, 1]]);
        assert_eq!(Some(letter.edge), s.incident_edge(0, 1).unwrap().map(|(e, _)| e));
        assert_eq!(h.measure(), g.measure());
        // the emitted letter carries the swap of the two start faces
        let swap = crate::curve::Permutation::transposition(4, 0, 1);
        assert_eq!(h.permutation(), g.permutation().compose(&swap));
    }

    #[test]
    fn two_switches_pass_a_prefix_along() {
        // (x_j x1 x2), (x1 x_k ...), (x_k ...) with x_j, x1, x2, x_k = 0, 1, 2, 3
        let s = surface(Canonical::Tetrahedron);
        let g = system(&s, &[&[0, 1, 2], &[1, 3, 0], &[2, 3], &[3, 1]]);
        let (g, _) = move_first_letter(&g, 1).unwrap();
        let (g, _) = move_first_letter(&g, 0).unwrap();
        assert_eq!(faces_of(&g), [vec![0, 1, 3, 1], vec![1, 2], vec![2, 3], vec![3, 0]]);
    }

    #[test]
    fn backtrack_without_winding_cancels_silently() {
        // (x1 x_j x1 x2) -> (x1 x2)
        let s = surface(Canonical::Tetrahedron);
        let g = system(&s, &[&[0, 1, 0, 2], &[1], &[2, 0], &[3]]);
        let (h, emitted) = cancel_prefix(&g, 0).unwrap();
        assert!(emitted.is_empty());
        assert_eq!(h.strand(0).faces(), &[0, 2]);
        assert_eq!(h.measure() + 2, g.measure());
    }

    #[test]
    fn balancing_one_vertex_records_it() {
        let s = surface(Canonical::Cube);
        for v in [0, 5] {
            let mut g = CurveSystem::identity(s.clone());
            g.strands_mut()[0] = vertex_loop(&s, v);
            let (out, trace) = balance(&g).unwrap();
            assert!(out.is_balanced());
            let chains: Vec<&Chain> = trace
                .moves
                .iter()
                .filter_map(|m| match &m.mv {
                    Move::BalancePrepend { chain, .. } => Some(chain),
                    _ => None,
                })
                .collect();
            assert_eq!(chains, [&Chain::unit(Grade::V, v)]);
        }
    }
}
