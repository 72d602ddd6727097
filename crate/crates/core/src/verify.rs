//! Independent checks of reductions: replay in both directions, invariant
//! audits along the trace, and seeded random inputs for round-trip suites.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::{boundary, edge_chain_of, Chain, Grade};
use crate::curve::{CurveSystem, GeneratorWord, Letter, StrandWord};
use crate::rewrite::{factor_disk_loop, replay, Direction, Factor, Move, Reduction, Trace, TraceMode};
use crate::surface::{FaceId, Sign, Surface};

pub use crate::curve::crossing_counts;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub millis: u128,
    pub detail: String,
}

/// Outcome of a batch of named checks. A failing report carries the trace
/// (or curve) that reproduces the failure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
    pub counterexample: Option<String>,
    /// Informational lines, e.g. crossing counts.
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<(), String>) {
        let t = Instant::now();
        let res = f();
        self.entries.push(CheckEntry {
            name: name.into(),
            passed: res.is_ok(),
            millis: t.elapsed().as_millis(),
            detail: res.err().unwrap_or_default(),
        });
    }

    /// `check <name> <pass|fail> <ms>` per entry; failure details and the
    /// counterexample follow the entry lines.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            writeln!(out, "check {} {} {}", e.name, if e.passed { "pass" } else { "fail" }, e.millis).unwrap();
        }
        for n in &self.notes {
            writeln!(out, "# {n}").unwrap();
        }
        for e in self.failures() {
            for line in e.detail.lines() {
                writeln!(out, "# {}: {line}", e.name).unwrap();
            }
        }
        if let (false, Some(cx)) = (self.passed(), &self.counterexample) {
            out.push_str("--- counterexample\n");
            out.push_str(cx);
            out.push_str("--- end counterexample\n");
        }
        out
    }
}

/// Multi-strand audit: every intermediate state is a valid curve system
/// (one strand per start face, ends a permutation); the measure is unchanged
/// except that each CancelPrefix lowers it by exactly 2; it ends at 0.
fn audit_strands(t: &Trace) -> (Result<(), String>, Result<(), String>) {
    let mut state = t.initial.clone();
    let mut bijection = Ok(());
    let mut measure = Ok(());
    for (i, tm) in t.moves.iter().enumerate() {
        let before = state.measure();
        if crate::rewrite::apply_move_strands(&mut state, &tm.mv).is_err() {
            return (Err(format!("move {i} does not apply")), Err(format!("move {i} does not apply")));
        }
        if bijection.is_ok() {
            if let Err(e) = CurveSystem::new(state.surface_arc().clone(), state.strands().to_vec()) {
                bijection = Err(format!("after move {i}: {e}"));
            }
        }
        let after = state.measure();
        let ok = match tm.mv {
            Move::CancelPrefix { .. } => after + 2 == before,
            Move::BalancePrepend { .. } => true,
            _ => after == before,
        };
        if !ok && measure.is_ok() {
            measure = Err(format!("move {i} ({}) takes the measure from {before} to {after}", tm.mv.kind()));
        }
    }
    if measure.is_ok() && (state.measure() != 0 || !state.is_identity()) {
        measure = Err(format!("measure ends at {} instead of 0 with every strand unwound", state.measure()));
    }
    (bijection, measure)
}

/// Recursion key of a loop: (height, same-height drags still allowed).
type Key = (usize, u8);

const FRESH_STAGE: u8 = 2;

fn fresh(lp: &StrandWord) -> Key {
    (lp.height(), FRESH_STAGE)
}

/// Loop-mode audit: each loop carries a key, every move replaces a loop by
/// loops of strictly smaller key (disk factoring excepted). A drag that keeps the height spends one
/// stage; anything else must lower the height.
pub fn loop_measure_audit(t: &Trace) -> Result<(), String> {
    let TraceMode::Loop { base } = t.mode else {
        return Err("not a loop-mode trace".into());
    };
    let s = t.surface().clone();
    let first = t.initial.strand(base).clone();
    let mut factors = vec![Factor::Loop(first.clone())];
    let mut keys: Vec<Option<Key>> = vec![if first.is_palindrome() { Some(fresh(&first)) } else { None }];
    for (i, tm) in t.moves.iter().enumerate() {
        let at = tm.mv.factor_index().ok_or_else(|| format!("move {i} is not a loop move"))?;
        let parent = keys.get(at).copied().flatten();
        let old_len = factors.len();
        crate::rewrite::apply_move_loop(&s, &mut factors, &tm.mv).map_err(|e| format!("move {i}: {e}"))?;
        let produced = factors.len() + 1 - old_len;
        let mut new_keys = Vec::with_capacity(produced);
        for f in &factors[at..at + produced] {
            let key = match f {
                Factor::Letters(_) => None,
                Factor::Loop(lp) => {
                    let h = lp.height();
                    Some(match (parent, &tm.mv) {
                        (Some((ph, st)), Move::DragConjugate { .. }) if h == ph => {
                            if st == 0 {
                                return Err(format!("move {i}: drag keeps height {h} with no stage left"));
                            }
                            (h, st - 1)
                        }
                        _ => fresh(lp),
                    })
                }
            };
            // disk factoring happens before the recursion: its pieces start fresh
            let factoring = matches!(tm.mv, Move::DiskFactor { .. });
            if let (Some(p), Some(k), false) = (parent, key, factoring) {
                if k >= p {
                    return Err(format!("move {i} ({}): key {k:?} does not drop below {p:?}", tm.mv.kind()));
                }
            }
            new_keys.push(key);
        }
        keys.splice(at..at + 1, new_keys);
    }
    Ok(())
}

fn word_curve(s: &std::sync::Arc<Surface>, w: &GeneratorWord) -> Result<CurveSystem, String> {
    CurveSystem::of_word(s.clone(), w).map_err(|e| e.to_string())
}

/// Replays and audits a trace on its own.
pub fn check_trace(t: &Trace) -> CheckReport {
    let mut r = CheckReport::default();
    let s = t.surface().clone();
    let word = t.word();
    r.run("replay_forward", || replay(t, Direction::Forward).map(|_| ()).map_err(|e| e.to_string()));
    r.run("replay_backward", || replay(t, Direction::Backward).map(|_| ()).map_err(|e| e.to_string()));
    r.run("permutation", || {
        let (wp, cp) = (word.permutation(&s), t.initial.permutation());
        if wp == cp {
            Ok(())
        } else {
            Err(format!("word permutation {wp}, curve permutation {cp}"))
        }
    });
    r.run("edge_chain", || {
        let c = edge_chain_of(&word_curve(&s, &word)?);
        if c.is_zero() {
            Ok(())
        } else {
            Err(format!("emitted word has edge chain {c}"))
        }
    });
    match t.mode {
        TraceMode::Strands => {
            let (bijection, measure) = audit_strands(t);
            r.run("measure", || measure);
            r.run("bijection", || bijection);
        }
        TraceMode::Loop { .. } => r.run("measure", || loop_measure_audit(t)),
    }
    for ((p, q), k) in crossing_counts(&word, &s) {
        if k != 0 {
            r.notes.push(format!("crossing {p} {q} {k}"));
        }
    }
    if !r.passed() {
        r.counterexample = Some(t.serialize());
    }
    r
}

/// Checks a result of `reduce_main(gamma)`.
pub fn check_reduction(gamma: &CurveSystem, result: &Reduction) -> CheckReport {
    let mut r = check_trace(&result.trace);
    let t = &result.trace;
    let mut extra = CheckReport::default();
    extra.run("input", || {
        if t.initial == *gamma && t.mode == TraceMode::Strands && result.word == t.word() {
            Ok(())
        } else {
            Err("trace does not start from the input or records another word".into())
        }
    });
    r.entries.extend(extra.entries);
    if !r.passed() && r.counterexample.is_none() {
        r.counterexample = Some(t.serialize());
    }
    r
}

/// `length` letters drawn uniformly from edges × {±1}.
pub fn random_word(s: &Surface, length: usize, seed: u64) -> GeneratorWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_word_with(s, length, &mut rng)
}

pub(crate) fn random_word_with(s: &Surface, length: usize, rng: &mut impl Rng) -> GeneratorWord {
    let letters = (0..length)
        .map(|_| {
            let edge = rng.gen_range(0..s.edge_count());
            let exp = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
            Letter::new(edge, exp)
        })
        .collect();
    GeneratorWord::new(letters)
}

/// Random vertex chain with coefficients in `[-bound, bound]`.
pub fn random_vertex_chain(s: &Surface, bound: i64, seed: u64) -> Chain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Chain::from_pairs(Grade::V, (0..s.vertex_count()).map(|v| (v, rng.gen_range(-bound..=bound))))
}

/// Boundary of a random vertex chain: exact by construction.
pub fn random_exact_chain(s: &Surface, bound: i64, seed: u64) -> Chain {
    boundary(s, &random_vertex_chain(s, bound, seed)).expect("vertex chains have a boundary")
}

/// A null-homotopic loop at `disk[0]` inside `disk`: a product of
/// `generators` random puncture loops, with `detours` random back-and-forth
/// excursions inserted afterwards. Returns the loop and the generator
/// sequence (in time order) it was built from.
pub fn random_disk_loop(
    s: &Surface,
    disk: &[FaceId],
    generators: usize,
    detours: usize,
    seed: u64,
) -> (StrandWord, Vec<(FaceId, Sign)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let set: BTreeSet<FaceId> = disk.iter().copied().collect();
    let base = *set.iter().next().expect("non-empty disk");
    let others: Vec<FaceId> = set.iter().copied().filter(|&f| f != base).collect();
    let mut gens = Vec::new();
    let mut faces = vec![base];
    let mut winds = vec![0i64];
    for _ in 0..generators {
        let f = others[rng.gen_range(0..others.len())];
        let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        gens.push((f, sign));
        // factoring any loop with this single winding yields the tree-path generator
        let piece = factor_disk_loop(s, disk, &probe_loop(s, &set, base, f, sign)).expect("valid disk")[0].word.clone();
        faces.extend_from_slice(&piece.faces()[1..]);
        winds.extend_from_slice(&piece.winds()[1..]);
    }
    for _ in 0..detours {
        let i = rng.gen_range(0..faces.len());
        let nbrs: Vec<FaceId> = s.neighbors(faces[i]).iter().map(|&(g, _)| g).filter(|g| set.contains(g)).collect();
        let g = nbrs[rng.gen_range(0..nbrs.len())];
        faces.splice(i + 1..i + 1, [g, faces[i]]);
        winds.splice(i + 1..i + 1, [0, 0]);
    }
    (StrandWord::from_raw(faces, winds), gens)
}

/// Some loop at `base` whose only winding is `sign` at `f`: along a dual
/// path inside the disk and straight back.
fn probe_loop(s: &Surface, set: &BTreeSet<FaceId>, base: FaceId, f: FaceId, sign: Sign) -> StrandWord {
    let path = s
        .dual_path_within(base, |g| g == f, |g| set.contains(&g))
        .expect("disk is connected");
    let k = path.len();
    let mut faces = path.clone();
    faces.extend(path.iter().rev().skip(1));
    let mut winds = vec![0; 2 * k - 1];
    winds[k - 1] = sign.as_i64();
    StrandWord::from_raw(faces, winds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::Canonical;
    use crate::chains::solve_preimage;
    use crate::rewrite::{reduce_main, EngineConfig};
    use std::sync::Arc;

    fn cube() -> Arc<Surface> {
        Arc::new(Canonical::Cube.build().unwrap())
    }

    #[test]
    fn random_generation_is_deterministic() {
        let s = cube();
        assert!(random_word(&s, 0, 1).is_empty());
        assert_eq!(random_word(&s, 20, 9), random_word(&s, 20, 9));
        assert_ne!(random_word(&s, 20, 9), random_word(&s, 20, 10));
        assert_eq!(random_exact_chain(&s, 5, 3), random_exact_chain(&s, 5, 3));
    }

    #[test]
    fn random_exact_chains_are_exact() {
        let s = cube();
        for seed in 0..20 {
            let c = random_exact_chain(&s, 5, seed);
            let v = solve_preimage(&s, &c).unwrap().unwrap();
            assert_eq!(boundary(&s, &v).unwrap(), c);
        }
    }

    #[test]
    fn identity_passes_vacuously() {
        let s = cube();
        let gamma = CurveSystem::identity(s);
        let red = reduce_main(&gamma, &EngineConfig::default()).unwrap();
        let report = check_reduction(&gamma, &red);
        assert!(report.passed(), "{}", report.render());
    }

    #[test]
    fn random_reductions_pass() {
        let s = cube();
        for seed in 0..10 {
            let gamma = CurveSystem::of_word(s.clone(), &random_word(&s, 12, seed)).unwrap();
            let red = reduce_main(&gamma, &EngineConfig::default()).unwrap();
            let report = check_reduction(&gamma, &red);
            assert!(report.passed(), "{}", report.render());
        }
    }

    #[test]
    fn unreduced_trace_fails_the_measure_check() {
        let s = cube();
        let gamma = CurveSystem::sigma(s.clone(), 0, Sign::Plus).unwrap();
        let t = Trace {
            mode: TraceMode::Strands,
            initial: gamma.clone(),
            moves: Vec::new(),
            final_state: gamma,
            blocks: vec![Vec::new()],
        };
        let report = check_trace(&t);
        assert!(!report.passed());
        let failed: Vec<&str> = report.failures().map(|e| e.name.as_str()).collect();
        assert!(failed.contains(&"measure"), "{failed:?}");
        assert!(report.render().contains("--- counterexample"));
    }

    #[test]
    fn disk_loops_are_null_homotopic_products() {
        let (s, disk) = crate::canonical::refined_cube_disk();
        let (lp, gens) = random_disk_loop(&s, &disk, 5, 4, 11);
        assert_eq!(lp.start_face(), disk[0]);
        assert_eq!(lp.end_face(), disk[0]);
        StrandWord::from_parts(&s, lp.faces().to_vec(), lp.winds().to_vec()).unwrap();
        assert_eq!(gens.len(), 5);
    }
}
