//! One-particle moves on palindromic loops: splitting off shorter
//! palindromes, conjugating by the first edge, and sliding through the
//! vacated base face.
//!
//! A loop is a [`StrandWord`] that starts and ends at its base face. Only the
//! moving particle leaves its face, so the base face holds no marked point
//! while the loop runs; windings made there are homotopically trivial.

use crate::curve::{power, Letter, StrandWord};
use crate::surface::{EdgeId, FaceId, Surface};

use super::EngineError;

/// `[γ] = [last][middle][first]`, each a palindrome of smaller height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub first: StrandWord,
    pub middle: StrandWord,
    pub last: StrandWord,
}

/// Result of conjugating a loop by the edge joining its first two faces:
/// `[γ] = left · [middle] · right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Drag {
    pub edge: EdgeId,
    /// Winding at the second visit, absorbed into `right`.
    pub a: i64,
    /// Winding at the second-to-last visit, absorbed into `left`.
    pub b: i64,
    /// Windings at the two base visits (trivial, recorded for inversion).
    pub first: i64,
    pub last: i64,
    pub middle: StrandWord,
}

impl Drag {
    /// `σ^{-(2b+1)}`
    pub fn left(&self) -> Vec<Letter> {
        power(self.edge, -(2 * self.b + 1))
    }

    /// `σ^{1-2a}`
    pub fn right(&self) -> Vec<Letter> {
        power(self.edge, 1 - 2 * self.a)
    }
}

fn require_palindrome(lp: &StrandWord) -> Result<(), EngineError> {
    if !lp.is_palindrome() {
        return Err(EngineError::NotPalindrome(format!("{:?}", lp.faces())));
    }
    Ok(())
}

/// Smallest ascent index `p` with `1 <= p <= height - 2` and equal faces on
/// both sides of `p`.
pub fn split_point(lp: &StrandWord) -> Option<usize> {
    let x = lp.faces();
    let m = lp.height();
    (1..m.saturating_sub(1)).find(|&p| x[p - 1] == x[p + 1])
}

/// Splits at ascent index `p`: `first` follows the loop up to `x_p` and
/// retraces, `last` does the same from the end, and `middle` is the loop
/// with both detours `x_{p-1} x_p` removed.
pub fn split_palindrome_at(lp: &StrandWord, p: usize) -> Result<Split, EngineError> {
    require_palindrome(lp)?;
    let (x, w) = (lp.faces(), lp.winds());
    let m = lp.height();
    if p == 0 || p + 2 > m || x[p - 1] != x[p + 1] {
        return Err(EngineError::Precondition(format!("no split at ascent index {p} of {x:?}")));
    }
    let d = x.len() - 1;
    let (a, b, c) = (p - 1, p, p + 1);
    let (c2, b2, a2) = (d - p - 1, d - p, d - p + 1);

    let mut ff: Vec<FaceId> = x[..=b].to_vec();
    ff.extend(x[..=a].iter().rev());
    let mut fw: Vec<i64> = w[..=b].to_vec();
    fw.extend(w[..=a].iter().rev().map(|v| -v));

    let mut lf: Vec<FaceId> = x[a2..].iter().rev().copied().collect();
    lf.push(x[b2]);
    lf.extend_from_slice(&x[a2..]);
    let mut lw: Vec<i64> = w[a2..].iter().rev().map(|v| -v).collect();
    lw.push(w[b2]);
    lw.extend_from_slice(&w[a2..]);

    let mut mf: Vec<FaceId> = x[..a].to_vec();
    let mut mw: Vec<i64> = w[..a].to_vec();
    mf.push(x[a]);
    if c < c2 {
        mw.push(w[a] + w[c]);
        mf.extend_from_slice(&x[c + 1..c2]);
        mw.extend_from_slice(&w[c + 1..c2]);
        mf.push(x[c2]);
        mw.push(w[c2] + w[a2]);
    } else {
        mw.push(w[a] + w[c] + w[a2]);
    }
    mf.extend_from_slice(&x[a2 + 1..]);
    mw.extend_from_slice(&w[a2 + 1..]);

    Ok(Split {
        first: StrandWord::from_raw(ff, fw),
        middle: StrandWord::from_raw(mf, mw),
        last: StrandWord::from_raw(lf, lw),
    })
}

/// Split at the smallest available ascent index.
pub fn split_palindrome(lp: &StrandWord) -> Result<(usize, Split), EngineError> {
    require_palindrome(lp)?;
    let p = split_point(lp)
        .ok_or_else(|| EngineError::Precondition(format!("no split point in {:?}", lp.faces())))?;
    Ok((p, split_palindrome_at(lp, p)?))
}

/// Rebuilds the loop split at `p`; fails unless splitting the result gives
/// back exactly `split`.
pub fn unsplit(split: &Split, p: usize) -> Result<StrandWord, EngineError> {
    let bad = || EngineError::Precondition(format!("pieces are not a split at ascent index {p}"));
    let (first, middle, last) = (&split.first, &split.middle, &split.last);
    if p == 0 || first.faces().len() != 2 * p + 1 || last.faces().len() != 2 * p + 1 {
        return Err(bad());
    }
    let m = middle.height() + 2;
    let d = 2 * m - 2;
    if p + 2 > m {
        return Err(bad());
    }
    let (a, c) = (p - 1, p + 1);
    let (c2, a2) = (d - p - 1, d - p + 1);
    let mut x = vec![0; d + 1];
    let mut w = vec![0; d + 1];
    x[..=p].copy_from_slice(&first.faces()[..=p]);
    w[..=p].copy_from_slice(&first.winds()[..=p]);
    x[c] = x[a];
    let tail = &last.faces()[p..];
    x[d - p..].copy_from_slice(tail);
    w[d - p..].copy_from_slice(&last.winds()[p..]);
    x[c2] = x[a2];
    let (mf, mw) = (middle.faces(), middle.winds());
    if mf.len() < a + 1 {
        return Err(bad());
    }
    x[..a].copy_from_slice(&mf[..a]);
    if c < c2 {
        w[c] = mw[a] - w[a];
        x[c + 1..c2].copy_from_slice(&mf[a + 1..a + c2 - c]);
        w[c + 1..c2].copy_from_slice(&mw[a + 1..a + c2 - c]);
        w[c2] = mw[a + c2 - c] - w[a2];
    } else {
        w[c] = mw[a] - w[a] - w[a2];
    }
    let rebuilt = StrandWord::from_raw(x, w);
    if !rebuilt.is_palindrome() {
        return Err(bad());
    }
    match split_palindrome_at(&rebuilt, p) {
        Ok(again) if again == *split => Ok(rebuilt),
        _ => Err(bad()),
    }
}

/// Conjugation by the first edge: strip both base visits and replace every
/// interior visit of the second face `x2` by `x2 x1 x2`, moving its winding
/// to the new `x1` visit.
pub fn drag_conjugate(s: &Surface, lp: &StrandWord) -> Result<Drag, EngineError> {
    require_palindrome(lp)?;
    if lp.height() < 3 {
        return Err(EngineError::Precondition(format!("drag needs height >= 3, got {:?}", lp.faces())));
    }
    let (x, w) = (lp.faces(), lp.winds());
    let d = x.len() - 1;
    let (x1, x2) = (x[0], x[1]);
    let (edge, _) = s
        .edge_between(x1, x2)
        .ok_or_else(|| EngineError::Precondition(format!("faces {x1} and {x2} are not adjacent")))?;
    let mut faces = vec![x2];
    let mut winds = vec![0];
    for i in 2..d - 1 {
        if x[i] == x2 {
            faces.extend([x2, x1, x2]);
            winds.extend([0, w[i], 0]);
        } else {
            faces.push(x[i]);
            winds.push(w[i]);
        }
    }
    faces.push(x2);
    winds.push(0);
    Ok(Drag {
        edge,
        a: w[1],
        b: w[d - 1],
        first: w[0],
        last: w[d],
        middle: StrandWord::from_raw(faces, winds),
    })
}

/// Inverse of [`drag_conjugate`]; fails unless dragging the result gives
/// back exactly `drag`.
pub fn undrag(s: &Surface, drag: &Drag) -> Result<StrandWord, EngineError> {
    let bad = |why: &str| EngineError::Precondition(format!("not a drag result: {why}"));
    let e = s.edge(drag.edge).map_err(|_| bad("unknown edge"))?;
    let (mf, mw) = (drag.middle.faces(), drag.middle.winds());
    let x2 = mf[0];
    let x1 = if e.tail == x2 { e.head } else if e.head == x2 { e.tail } else { return Err(bad("edge misses base")) };
    let n = mf.len();
    if n < 2 || mf[n - 1] != x2 || mw[0] != 0 || mw[n - 1] != 0 {
        return Err(bad("endpoints"));
    }
    let mut faces = vec![x1, x2];
    let mut winds = vec![drag.first, drag.a];
    let mut i = 1;
    while i < n - 1 {
        if mf[i] == x2 {
            if i + 2 >= n || mf[i + 1] != x1 || mf[i + 2] != x2 {
                return Err(bad("unpaired interior visit"));
            }
            faces.push(x2);
            winds.push(mw[i + 1]);
            i += 3;
        } else {
            faces.push(mf[i]);
            winds.push(mw[i]);
            i += 1;
        }
    }
    faces.extend([x2, x1]);
    winds.extend([drag.b, drag.last]);
    let rebuilt = StrandWord::from_raw(faces, winds);
    match drag_conjugate(s, &rebuilt) {
        Ok(again) if again == *drag => Ok(rebuilt),
        _ => Err(bad("round trip")),
    }
}

/// Central `y x1 y` collapses to `y` when the top face is the (vacant) base.
/// Returns the shorter loop and the consumed and merged windings.
pub fn slide(lp: &StrandWord) -> Result<(StrandWord, i64, i64), EngineError> {
    require_palindrome(lp)?;
    let (x, w) = (lp.faces(), lp.winds());
    let c = x.len() / 2;
    if c == 0 || x[c] != x[0] {
        return Err(EngineError::Precondition(format!("top of {x:?} is not the base face")));
    }
    let (wind, split) = (w[c], w[c + 1]);
    let mut faces = x.to_vec();
    let mut winds = w.to_vec();
    faces.drain(c..c + 2);
    winds.drain(c..c + 2);
    winds[c - 1] += split;
    Ok((StrandWord::from_raw(faces, winds), wind, split))
}

pub fn unslide(lp: &StrandWord, wind: i64, split: i64) -> Result<StrandWord, EngineError> {
    require_palindrome(lp)?;
    let c = lp.faces().len() / 2;
    let mut faces = lp.faces().to_vec();
    let mut winds = lp.winds().to_vec();
    winds[c] -= split;
    faces.splice(c + 1..c + 1, [lp.start_face(), faces[c]]);
    winds.splice(c + 1..c + 1, [wind, split]);
    Ok(StrandWord::from_raw(faces, winds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::Canonical;

    fn tetra() -> Surface {
        Canonical::Tetrahedron.build().unwrap()
    }

    fn word(faces: &[usize], winds: &[i64]) -> StrandWord {
        StrandWord::from_parts(&tetra(), faces.to_vec(), winds.to_vec()).unwrap()
    }

    fn flat(faces: &[usize]) -> StrandWord {
        word(faces, &vec![0; faces.len()])
    }

    #[test]
    fn split_of_double_loop() {
        let lp = flat(&[1, 2, 1, 2, 1]);
        let (p, sp) = split_palindrome(&lp).unwrap();
        assert_eq!(p, 1);
        assert_eq!(sp.first.faces(), &[1, 2, 1]);
        assert_eq!(sp.last.faces(), &[1, 2, 1]);
        assert_eq!(sp.middle.faces(), &[1]);
        assert_eq!(unsplit(&sp, p).unwrap(), lp);
    }

    #[test]
    fn split_keeps_windings_recoverable() {
        let lp = word(&[0, 1, 2, 1, 3, 1, 2, 1, 0], &[1, -1, 2, 0, 1, 1, -1, 0, 1]);
        let (p, sp) = split_palindrome(&lp).unwrap();
        assert_eq!(p, 2);
        assert_eq!(sp.first.faces(), &[0, 1, 2, 1, 0]);
        assert_eq!(sp.middle.faces(), &[0, 1, 3, 1, 0]);
        for piece in [&sp.first, &sp.middle, &sp.last] {
            assert!(piece.is_palindrome());
            assert!(piece.height() < lp.height());
        }
        assert_eq!(unsplit(&sp, p).unwrap(), lp);
    }

    #[test]
    fn strictly_rising_palindrome_has_no_split() {
        assert!(split_palindrome(&flat(&[1, 2, 3, 2, 1])).is_err());
    }

    #[test]
    fn drag_examples() {
        let s = tetra();
        let d = drag_conjugate(&s, &flat(&[1, 2, 3, 2, 1])).unwrap();
        assert_eq!(d.middle.faces(), &[2, 3, 2]);
        let d = drag_conjugate(&s, &flat(&[1, 2, 1, 2, 1])).unwrap();
        assert_eq!(d.middle.faces(), &[2, 1, 2]);
        let lp = word(&[0, 1, 2, 3, 1, 3, 2, 1, 0], &[1, 2, 0, 0, -3, 0, 0, 4, -1]);
        let d = drag_conjugate(&s, &lp).unwrap();
        assert_eq!(d.middle.faces(), &[1, 2, 3, 1, 0, 1, 3, 2, 1]);
        assert_eq!(d.middle.winds(), &[0, 0, 0, 0, -3, 0, 0, 0, 0]);
        assert_eq!((d.a, d.b), (2, 4));
        assert_eq!(d.left().len(), 9);
        assert_eq!(d.right().len(), 3);
        assert_eq!(undrag(&s, &d).unwrap(), lp);
    }

    #[test]
    fn drag_rejects_non_palindromes() {
        let s = tetra();
        assert!(drag_conjugate(&s, &flat(&[1, 2, 3, 2, 1, 2, 3, 2])).is_err());
        assert!(drag_conjugate(&s, &flat(&[1, 2, 1])).is_err());
    }

    #[test]
    fn slide_through_base() {
        let lp = word(&[0, 1, 2, 0, 2, 1, 0], &[0, 1, 2, 5, -2, 0, 0]);
        let (short, wind, split) = slide(&lp).unwrap();
        assert_eq!(short.faces(), &[0, 1, 2, 1, 0]);
        assert_eq!(short.winds(), &[0, 1, 0, 0, 0]);
        assert_eq!((wind, split), (5, -2));
        assert_eq!(unslide(&short, wind, split).unwrap(), lp);
        assert!(slide(&flat(&[0, 1, 2, 1, 0])).is_err());
    }
}
