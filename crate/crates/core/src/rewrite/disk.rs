//! Factorization of a loop confined to a disk of faces into palindromic
//! puncture loops, via a spanning tree of the restricted dual graph.

use std::collections::{BTreeSet, VecDeque};

use crate::curve::StrandWord;
use crate::surface::{FaceId, Sign, Surface};

use super::EngineError;

/// One free generator occurrence: go out along the tree path to `puncture`,
/// wind once around it, come back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PunctureLoop {
    /// Tree path from the base face to the puncture, both included.
    pub path: Vec<FaceId>,
    pub puncture: FaceId,
    pub exponent: Sign,
    /// The palindromic loop realizing this generator.
    pub word: StrandWord,
}

/// Checks that `disk` is a connected set of faces whose restricted dual
/// complex has Euler characteristic 1. Returns the faces sorted.
pub fn validate_disk(s: &Surface, disk: &[FaceId]) -> Result<Vec<FaceId>, EngineError> {
    let set: BTreeSet<FaceId> = disk.iter().copied().collect();
    if set.is_empty() {
        return Err(EngineError::NotDisk("empty face set".into()));
    }
    if set.len() != disk.len() {
        return Err(EngineError::NotDisk("repeated face".into()));
    }
    if let Some(&f) = set.iter().find(|&&f| f >= s.face_count()) {
        return Err(EngineError::NotDisk(format!("unknown face {f}")));
    }
    let first = *set.iter().next().unwrap();
    let reached = spanning_tree(s, &set, first);
    if reached.iter().flatten().count() + 1 != set.len() {
        return Err(EngineError::NotDisk("restricted dual graph is disconnected".into()));
    }
    let edges = s.edges().iter().filter(|e| set.contains(&e.tail) && set.contains(&e.head)).count();
    let vertices = (0..s.vertex_count())
        .filter(|&v| s.vertex_faces(v).iter().all(|f| set.contains(f)))
        .count();
    let chi = set.len() as i64 - edges as i64 + vertices as i64;
    if chi != 1 {
        return Err(EngineError::NotDisk(format!("Euler characteristic {chi}, expected 1")));
    }
    Ok(set.into_iter().collect())
}

/// Breadth-first tree from `root` inside `set`, exploring neighbours by
/// ascending edge id. Entry `f` holds the parent of `f`.
fn spanning_tree(s: &Surface, set: &BTreeSet<FaceId>, root: FaceId) -> Vec<Option<FaceId>> {
    let mut parent = vec![None; s.face_count()];
    let mut seen = vec![false; s.face_count()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        for &(g, _) in s.neighbors(f) {
            if !seen[g] && set.contains(&g) {
                seen[g] = true;
                parent[g] = Some(f);
                queue.push_back(g);
            }
        }
    }
    parent
}

/// Writes the class of `lp` (based at its start face, inside `disk`) as a
/// product of puncture loops, listed in time order: the first entry acts
/// first.
///
/// Windings at the base face are dropped: the base is vacant while the loop
/// runs. Every other winding `w` at face `f` contributes `|w|` copies of the
/// generator at `f`; adjacent inverse pairs cancel.
pub fn factor_disk_loop(s: &Surface, disk: &[FaceId], lp: &StrandWord) -> Result<Vec<PunctureLoop>, EngineError> {
    let faces = validate_disk(s, disk)?;
    let set: BTreeSet<FaceId> = faces.into_iter().collect();
    let base = lp.start_face();
    if lp.end_face() != base {
        return Err(EngineError::Precondition(format!("loop starts at {base} but ends at {}", lp.end_face())));
    }
    if let Some(&face) = lp.faces().iter().find(|f| !set.contains(f)) {
        return Err(EngineError::LeavesDisk { face });
    }
    let parent = spanning_tree(s, &set, base);

    let mut stack: Vec<(FaceId, Sign)> = Vec::new();
    for (&f, &w) in lp.faces().iter().zip(lp.winds()) {
        if f == base || w == 0 {
            continue;
        }
        let sign = if w > 0 { Sign::Plus } else { Sign::Minus };
        for _ in 0..w.unsigned_abs() {
            if stack.last() == Some(&(f, -sign)) {
                stack.pop();
            } else {
                stack.push((f, sign));
            }
        }
    }

    Ok(stack
        .into_iter()
        .map(|(puncture, exponent)| {
            let mut path = vec![puncture];
            while let Some(p) = parent[*path.last().unwrap()] {
                path.push(p);
            }
            path.reverse();
            let k = path.len();
            let mut wf = path.clone();
            wf.extend(path.iter().rev().skip(1));
            let mut ww = vec![0; 2 * k - 1];
            ww[k - 1] = exponent.as_i64();
            PunctureLoop { path, puncture, exponent, word: StrandWord::from_raw(wf, ww) }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{refined_cube_disk, Canonical};

    #[test]
    fn fixture_disk_is_valid() {
        let (s, disk) = refined_cube_disk();
        assert_eq!(validate_disk(&s, &disk).unwrap(), disk);
    }

    #[test]
    fn whole_sphere_is_not_a_disk() {
        let s = Canonical::Cube.build().unwrap();
        let all: Vec<usize> = (0..6).collect();
        assert!(matches!(validate_disk(&s, &all), Err(EngineError::NotDisk(_))));
        // the four faces around the axis through face 0 and its opposite form an annulus
        let ring: Vec<usize> = s.neighbors(0).iter().map(|&(g, _)| g).collect();
        assert_eq!(ring.len(), 4);
        assert!(matches!(validate_disk(&s, &ring), Err(EngineError::NotDisk(_))));
    }

    #[test]
    fn windings_become_free_generators() {
        let (s, disk) = refined_cube_disk();
        let base = disk[0];
        let f = s.neighbors(base).iter().map(|&(g, _)| g).find(|g| disk.contains(g)).unwrap();
        let lp = StrandWord::from_parts(&s, vec![base, f, base, f, base], vec![0, 2, 0, -1, 0]).unwrap();
        let pieces = factor_disk_loop(&s, &disk, &lp).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].word.faces(), &[base, f, base]);
        assert_eq!(pieces[0].word.winds(), &[0, 1, 0]);
    }

    #[test]
    fn loop_outside_disk_is_rejected() {
        let (s, disk) = refined_cube_disk();
        let base = disk[0];
        let out = s.neighbors(base).iter().map(|&(g, _)| g).find(|g| !disk.contains(g)).unwrap();
        let lp = StrandWord::from_faces(&s, vec![base, out, base]).unwrap();
        assert_eq!(factor_disk_loop(&s, &disk, &lp), Err(EngineError::LeavesDisk { face: out }));
    }
}
