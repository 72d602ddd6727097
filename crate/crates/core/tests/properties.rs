//! Property tests for the algebraic invariants.

use std::sync::Arc;

use proptest::prelude::*;

use braidcell::chains::solve_preimage;
use braidcell::curve::{parse_curve, parse_word};
use braidcell::verify::loop_measure_audit;
use braidcell::rewrite::{
    apply_move_strands, balancing_loop, drag_conjugate, parse_trace, reduce_palindrome, replay, slide,
    split_palindrome, undo_move_strands, undrag, unslide, unsplit, Direction,
};
use braidcell::{
    boundary, edge_chain_of, reduce_main, Canonical, Chain, CurveSystem, EngineConfig, GeneratorWord, Grade, Letter,
    Sign, StrandWord, Surface,
};

const KINDS: [Canonical; 4] = [
    Canonical::Tetrahedron,
    Canonical::Cube,
    Canonical::TorusGrid { rows: 3, cols: 3 },
    Canonical::TorusGrid { rows: 4, cols: 5 },
];

fn surface(i: usize) -> Arc<Surface> {
    Arc::new(KINDS[i % KINDS.len()].build().unwrap())
}

fn word_on(s: &Surface, raw: &[(usize, bool)]) -> GeneratorWord {
    GeneratorWord::new(
        raw.iter()
            .map(|&(e, plus)| Letter::new(e % s.edge_count(), if plus { Sign::Plus } else { Sign::Minus }))
            .collect(),
    )
}

fn vertex_chain(s: &Surface, raw: &[i64]) -> Chain {
    Chain::from_pairs(Grade::V, (0..s.vertex_count()).map(|v| (v, raw.get(v).copied().unwrap_or(0))))
}

/// A palindrome that climbs along `steps` (neighbor choices) from `base`.
fn palindrome(s: &Surface, base: usize, steps: &[usize], winds: &[i64]) -> StrandWord {
    let mut asc = vec![base % s.face_count()];
    for &k in steps {
        let nbrs = s.neighbors(*asc.last().unwrap());
        asc.push(nbrs[k % nbrs.len()].0);
    }
    let mut faces = asc.clone();
    faces.extend(asc.iter().rev().skip(1));
    let w = (0..faces.len()).map(|i| winds.get(i).copied().unwrap_or(0)).collect();
    StrandWord::from_parts(s, faces, w).unwrap()
}

fn raw_word() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..64, any::<bool>()), 0..16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn boundary_of_boundary_vanishes(k in 0usize..4, raw in prop::collection::vec(-9i64..=9, 20)) {
        let s = surface(k);
        let c = vertex_chain(&s, &raw);
        let e = boundary(&s, &c).unwrap();
        prop_assert!(boundary(&s, &e).unwrap().is_zero());
    }

    #[test]
    fn preimage_differs_by_a_constant(k in 0usize..4, raw in prop::collection::vec(-5i64..=5, 20)) {
        let s = surface(k);
        let v = vertex_chain(&s, &raw);
        let target = boundary(&s, &v).unwrap();
        let u = solve_preimage(&s, &target).unwrap().unwrap();
        prop_assert_eq!(boundary(&s, &u).unwrap(), target);
        let diffs: Vec<i64> = (0..s.vertex_count()).map(|i| u.get(i) - v.get(i)).collect();
        prop_assert!(diffs.windows(2).all(|p| p[0] == p[1]), "{:?}", diffs);
        prop_assert_eq!((0..s.vertex_count()).map(|i| u.get(i)).min(), Some(0));
    }

    #[test]
    fn words_act_as_a_homomorphism(k in 0usize..4, a in raw_word(), b in raw_word()) {
        let s = surface(k);
        let (wa, wb) = (word_on(&s, &a), word_on(&s, &b));
        let mut ab = wa.letters.clone();
        ab.extend(wb.letters.iter().copied());
        let wab = GeneratorWord::new(ab);
        prop_assert_eq!(wab.permutation(&s), wa.permutation(&s).compose(&wb.permutation(&s)));
        let ca = CurveSystem::of_word(s.clone(), &wa).unwrap();
        let cb = CurveSystem::of_word(s.clone(), &wb).unwrap();
        let cab = CurveSystem::of_word(s.clone(), &wab).unwrap();
        prop_assert_eq!(&cab, &ca.compose(&cb).unwrap());
        prop_assert_eq!(cab.permutation(), wab.permutation(&s));
    }

    #[test]
    fn invert_is_an_involution(k in 0usize..4, a in raw_word()) {
        let s = surface(k);
        let w = word_on(&s, &a);
        let c = CurveSystem::of_word(s.clone(), &w).unwrap();
        prop_assert_eq!(&c.invert().invert(), &c);
        prop_assert_eq!(&c.invert(), &CurveSystem::of_word(s.clone(), &w.inverse()).unwrap());
        prop_assert_eq!(c.invert().permutation(), c.permutation().inverse());
    }

    #[test]
    fn edge_chain_is_additive(k in 0usize..4, raw in prop::collection::vec(-2i64..=2, 20), a in raw_word()) {
        let s = surface(k);
        let mut strands = CurveSystem::identity(s.clone()).strands().to_vec();
        strands[0] = balancing_loop(&s, &vertex_chain(&s, &raw)).unwrap();
        let loops = CurveSystem::new(s.clone(), strands).unwrap();
        let w = CurveSystem::of_word(s.clone(), &word_on(&s, &a)).unwrap();
        let (cl, cw) = (edge_chain_of(&loops), edge_chain_of(&w));
        prop_assert_eq!(edge_chain_of(&loops.compose(&w).unwrap()), cl.plus(&cw));
        prop_assert_eq!(edge_chain_of(&w.compose(&loops).unwrap()), cl.plus(&cw));
        prop_assert_eq!(edge_chain_of(&loops.invert()), cl.scaled(-1));
        prop_assert_eq!(cl, boundary(&s, &vertex_chain(&s, &raw)).unwrap());
    }

    #[test]
    fn text_formats_round_trip(k in 0usize..4, a in raw_word()) {
        let s = surface(k);
        let w = word_on(&s, &a);
        prop_assert_eq!(&parse_word(&s, &w.serialize(&s)).unwrap(), &w);
        let c = CurveSystem::of_word(s.clone(), &w).unwrap();
        prop_assert_eq!(&parse_curve(&s, &c.serialize()).unwrap(), &c);
        let red = reduce_main(&c, &EngineConfig::default()).unwrap();
        let text = red.trace.serialize();
        let t = parse_trace(&s, &text).unwrap();
        prop_assert_eq!(&t, &red.trace);
        prop_assert_eq!(t.serialize(), text);
        prop_assert_eq!(&braidcell::parse_surface(&s.serialize()).unwrap(), &*s);
    }

    #[test]
    fn moves_undo_exactly(k in 0usize..4, a in raw_word()) {
        let s = surface(k);
        let c = CurveSystem::of_word(s.clone(), &word_on(&s, &a)).unwrap();
        let red = reduce_main(&c, &EngineConfig::default()).unwrap();
        let mut state = c.clone();
        for tm in &red.trace.moves {
            let before = state.clone();
            let emit = apply_move_strands(&mut state, &tm.mv).unwrap();
            prop_assert_eq!(&emit, &tm.emit);
            let mut back = state.clone();
            undo_move_strands(&mut back, &tm.mv).unwrap();
            prop_assert_eq!(&back, &before);
        }
        prop_assert_eq!(&replay(&red.trace, Direction::Backward).unwrap().0, &c);
        prop_assert_eq!(replay(&red.trace, Direction::Forward).unwrap().1, red.word.clone());
        // the output word and the input have the same curve permutation
        prop_assert_eq!(red.word.permutation(&s), c.permutation());
    }

    #[test]
    fn palindrome_moves_invert(
        k in 0usize..4,
        base in 0usize..20,
        steps in prop::collection::vec(0usize..4, 0..5),
        winds in prop::collection::vec(-2i64..=2, 11),
    ) {
        let s = surface(k);
        let lp = palindrome(&s, base, &steps, &winds);
        if let Ok((p, split)) = split_palindrome(&lp) {
            prop_assert_eq!(&unsplit(&split, p).unwrap(), &lp);
            for piece in [&split.first, &split.middle, &split.last] {
                prop_assert!(piece.is_palindrome() && piece.height() < lp.height());
            }
        }
        if lp.height() >= 3 {
            let d = drag_conjugate(&s, &lp).unwrap();
            prop_assert_eq!(&undrag(&s, &d).unwrap(), &lp);
        }
        if let Ok((short, wind, merged)) = slide(&lp) {
            prop_assert_eq!(&unslide(&short, wind, merged).unwrap(), &lp);
        }
        let (word, t) = reduce_palindrome(&s, &lp, &EngineConfig::default()).unwrap();
        prop_assert!(edge_chain_of(&CurveSystem::of_word(s.clone(), &word).unwrap()).is_zero());
        prop_assert!(replay(&t, Direction::Forward).is_ok() && replay(&t, Direction::Backward).is_ok());
        if let Err(e) = loop_measure_audit(&t) {
            prop_assert!(false, "{}: {}", s.name(), e);
        }
    }
}
