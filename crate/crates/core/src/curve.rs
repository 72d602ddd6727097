//! Enumerable curve systems, generator words and permutations.
//!
//! A strand is stored as its face set together with one winding integer per
//! visit: `winds[i]` counts counterclockwise loops around the marked point of
//! `faces[i]` made during that visit. The token form (`x+3 w-2 x-3`) used by
//! the file format is derived from this and back.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::chains::edge_chain_of;
use crate::surface::{EdgeId, FaceId, Sign, Surface};
use crate::text::{self, parse_signed, Line, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    Cross(EdgeId, Sign),
    Wind(i64),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Cross(e, s) => write!(f, "x{}{}", s.symbol(), e),
            Token::Wind(k) => write!(f, "w{k}"),
        }
    }
}

impl Token {
    pub fn parse(text: &str) -> Option<Token> {
        if let Some(rest) = text.strip_prefix('x') {
            let sign = match rest.chars().next()? {
                '+' => Sign::Plus,
                '-' => Sign::Minus,
                _ => return None,
            };
            let edge = rest[1..].parse().ok()?;
            Some(Token::Cross(edge, sign))
        } else if let Some(rest) = text.strip_prefix('w') {
            parse_signed(rest).map(Token::Wind)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("syntax error at {0}")]
    Syntax(#[from] ParseError),
    #[error("strand {strand}, token {token}: edge {edge} does not leave current face {face}")]
    Crossing { strand: FaceId, token: usize, edge: EdgeId, face: FaceId },
    #[error("unknown edge {edge}")]
    UnknownEdge { edge: EdgeId },
    #[error("unknown face {face}")]
    UnknownFace { face: FaceId },
    #[error("faces {a} and {b} are not adjacent")]
    NotAdjacent { a: FaceId, b: FaceId },
    #[error("surface mismatch: expected `{expected}`, found `{found}`")]
    SurfaceMismatch { expected: String, found: String },
    #[error("strand {index} starts at face {start}")]
    StrandStart { index: usize, start: FaceId },
    #[error("expected {expected} strands, found {found}")]
    StrandCount { expected: usize, found: usize },
    #[error("end faces do not form a permutation: face {face} is reached twice")]
    NotPermutation { face: FaceId },
    #[error("winding list has {winds} entries for {faces} visits")]
    WindLength { faces: usize, winds: usize },
}

/// One strand: visited faces and the winding made during each visit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrandWord {
    faces: Vec<FaceId>,
    winds: Vec<i64>,
}

impl StrandWord {
    pub fn stationary(face: FaceId) -> StrandWord {
        StrandWord { faces: vec![face], winds: vec![0] }
    }

    /// Validated construction from a face set and per-visit windings.
    pub fn from_parts(s: &Surface, faces: Vec<FaceId>, winds: Vec<i64>) -> Result<StrandWord, CurveError> {
        if faces.is_empty() || faces.len() != winds.len() {
            return Err(CurveError::WindLength { faces: faces.len(), winds: winds.len() });
        }
        for &f in &faces {
            if f >= s.face_count() {
                return Err(CurveError::UnknownFace { face: f });
            }
        }
        for w in faces.windows(2) {
            if s.edge_between(w[0], w[1]).is_none() {
                return Err(CurveError::NotAdjacent { a: w[0], b: w[1] });
            }
        }
        Ok(StrandWord { faces, winds })
    }

    /// Face set without windings.
    pub fn from_faces(s: &Surface, faces: Vec<FaceId>) -> Result<StrandWord, CurveError> {
        let winds = vec![0; faces.len()];
        StrandWord::from_parts(s, faces, winds)
    }

    pub(crate) fn from_raw(faces: Vec<FaceId>, winds: Vec<i64>) -> StrandWord {
        debug_assert!(!faces.is_empty() && faces.len() == winds.len());
        StrandWord { faces, winds }
    }

    /// Simulates tokens from `start`. On a crossing that does not leave the
    /// current face, returns the token index and the current face.
    pub fn from_tokens(s: &Surface, start: FaceId, tokens: &[Token]) -> Result<StrandWord, CurveError> {
        if start >= s.face_count() {
            return Err(CurveError::UnknownFace { face: start });
        }
        let mut faces = vec![start];
        let mut winds = vec![0];
        for (i, tok) in tokens.iter().enumerate() {
            match *tok {
                Token::Cross(edge, sign) => {
                    let e = s.edge(edge).map_err(|_| CurveError::UnknownEdge { edge })?;
                    let cur = *faces.last().unwrap();
                    if e.source(sign) != cur {
                        return Err(CurveError::Crossing { strand: start, token: i, edge, face: cur });
                    }
                    faces.push(e.target(sign));
                    winds.push(0);
                }
                Token::Wind(k) => *winds.last_mut().unwrap() += k,
            }
        }
        Ok(StrandWord { faces, winds })
    }

    pub fn faces(&self) -> &[FaceId] {
        &self.faces
    }

    pub fn winds(&self) -> &[i64] {
        &self.winds
    }

    pub fn start_face(&self) -> FaceId {
        self.faces[0]
    }

    pub fn end_face(&self) -> FaceId {
        *self.faces.last().unwrap()
    }

    /// Number of edge crossings, `|X| - 1`.
    pub fn crossing_count(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn has_winds(&self) -> bool {
        self.winds.iter().any(|&w| w != 0)
    }

    /// Signed edge set.
    pub fn crossings(&self, s: &Surface) -> Vec<(EdgeId, Sign)> {
        self.faces
            .windows(2)
            .map(|w| s.edge_between(w[0], w[1]).expect("strand faces are adjacent"))
            .collect()
    }

    /// Canonical token form: zero windings omitted, one wind per visit.
    pub fn tokens(&self, s: &Surface) -> Vec<Token> {
        let mut out = Vec::new();
        for (i, &w) in self.winds.iter().enumerate() {
            if i > 0 {
                let (e, sign) = s.edge_between(self.faces[i - 1], self.faces[i]).expect("adjacent");
                out.push(Token::Cross(e, sign));
            }
            if w != 0 {
                out.push(Token::Wind(w));
            }
        }
        out
    }

    /// Time reversal: faces reversed, windings reversed and negated.
    pub fn reversed(&self) -> StrandWord {
        StrandWord {
            faces: self.faces.iter().rev().copied().collect(),
            winds: self.winds.iter().rev().map(|w| -w).collect(),
        }
    }

    /// Runs `self` then `next`; the junction visit merges windings.
    pub fn then(&self, next: &StrandWord) -> StrandWord {
        assert_eq!(self.end_face(), next.start_face(), "strands do not meet");
        let mut out = self.clone();
        *out.winds.last_mut().unwrap() += next.winds[0];
        out.faces.extend_from_slice(&next.faces[1..]);
        out.winds.extend_from_slice(&next.winds[1..]);
        out
    }

    pub fn is_palindrome(&self) -> bool {
        is_palindrome(&self.faces)
    }

    /// Height of a palindromic face set: the length of its ascent.
    pub fn height(&self) -> usize {
        self.faces.len().div_ceil(2)
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<FaceId>, &mut Vec<i64>) {
        (&mut self.faces, &mut self.winds)
    }

    /// `start:tok,tok,...` used inside trace parameters.
    pub fn compact(&self, s: &Surface) -> String {
        let toks: Vec<String> = self.tokens(s).iter().map(Token::to_string).collect();
        format!("{}:{}", self.start_face(), toks.join(","))
    }

    pub fn parse_compact(s: &Surface, text: &str) -> Result<StrandWord, String> {
        let (start, rest) = text.split_once(':').ok_or_else(|| format!("expected start:tokens, found `{text}`"))?;
        let start = start.parse::<usize>().map_err(|_| format!("bad start face in `{text}`"))?;
        let mut tokens = Vec::new();
        for t in rest.split(',').filter(|t| !t.is_empty()) {
            tokens.push(Token::parse(t).ok_or_else(|| format!("bad token `{t}`"))?);
        }
        StrandWord::from_tokens(s, start, &tokens).map_err(|e| e.to_string())
    }
}

/// `p` even and `x_k = x_{p-k}` for all `k`, where the face set is `x_0..x_p`.
pub fn is_palindrome(faces: &[FaceId]) -> bool {
    !faces.is_empty() && faces.len() % 2 == 1 && faces.iter().eq(faces.iter().rev())
}

/// `σ_e^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub edge: EdgeId,
    pub exp: Sign,
}

impl Letter {
    pub fn new(edge: EdgeId, exp: Sign) -> Letter {
        Letter { edge, exp }
    }

    pub fn inverse(self) -> Letter {
        Letter { edge: self.edge, exp: -self.exp }
    }

    pub fn parse(text: &str) -> Option<Letter> {
        let rest = text.strip_prefix('e')?;
        let (edge, exp) = rest.split_once('^')?;
        let edge = edge.parse().ok()?;
        let exp = match exp {
            "+1" | "1" => Sign::Plus,
            "-1" => Sign::Minus,
            _ => return None,
        };
        Some(Letter { edge, exp })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}^{}1", self.edge, self.exp.symbol())
    }
}

/// `σ_e^k` spelled out as `|k|` letters.
pub fn power(edge: EdgeId, k: i64) -> Vec<Letter> {
    let exp = if k >= 0 { Sign::Plus } else { Sign::Minus };
    vec![Letter::new(edge, exp); k.unsigned_abs() as usize]
}

/// Word in edge transpositions. Reads right to left: the last letter acts first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GeneratorWord {
    pub letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<Letter>) -> GeneratorWord {
        GeneratorWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> GeneratorWord {
        GeneratorWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn check(&self, s: &Surface) -> Result<(), CurveError> {
        match self.letters.iter().find(|l| l.edge >= s.edge_count()) {
            Some(l) => Err(CurveError::UnknownEdge { edge: l.edge }),
            None => Ok(()),
        }
    }

    /// Permutation of marked points, composed right to left.
    pub fn permutation(&self, s: &Surface) -> Permutation {
        let mut p = Permutation::identity(s.face_count());
        for l in self.letters.iter().rev() {
            let e = s.edges()[l.edge];
            p = Permutation::transposition(s.face_count(), e.tail, e.head).compose(&p);
        }
        p
    }

    pub fn letters_line(&self) -> String {
        let mut out = String::from("letters");
        for l in &self.letters {
            out.push_str(&format!(" {l}"));
        }
        out
    }

    pub fn serialize(&self, s: &Surface) -> String {
        format!("word {}\n{}\nend\n", s.name(), self.letters_line())
    }

    pub(crate) fn parse_letters_line(line: &Line<'_>) -> Result<GeneratorWord, ParseError> {
        if line.keyword() != "letters" {
            return Err(line.error(0, "expected `letters`"));
        }
        let mut letters = Vec::new();
        for (i, tok) in line.tokens.iter().enumerate().skip(1) {
            letters.push(
                Letter::parse(tok.text)
                    .ok_or_else(|| line.error(i, format!("expected letter e<id>^<±1>, found `{}`", tok.text)))?,
            );
        }
        Ok(GeneratorWord { letters })
    }
}

/// Parses a word file for surface `s`.
pub fn parse_word(s: &Surface, text: &str) -> Result<GeneratorWord, CurveError> {
    let lines = text::lines(text);
    let header = lines.first().ok_or_else(|| text::end_of_input(&lines, "`word` header"))?;
    if header.keyword() != "word" {
        return Err(header.error(0, "expected `word <surface-name>`").into());
    }
    header.expect_len(2)?;
    check_name(s, header.tokens[1].text)?;
    let body = lines.get(1).ok_or_else(|| text::end_of_input(&lines, "`letters` line"))?;
    let word = GeneratorWord::parse_letters_line(body)?;
    let end = lines.get(2).ok_or_else(|| text::end_of_input(&lines, "`end`"))?;
    if end.keyword() != "end" || end.tokens.len() != 1 {
        return Err(end.error(0, "expected `end`").into());
    }
    if let Some(extra) = lines.get(3) {
        return Err(extra.error(0, "content after `end`").into());
    }
    word.check(s)?;
    Ok(word)
}

fn check_name(s: &Surface, name: &str) -> Result<(), CurveError> {
    if name != s.name() {
        return Err(CurveError::SurfaceMismatch { expected: s.name().into(), found: name.into() });
    }
    Ok(())
}

/// Bijection on face ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { map: (0..n).collect() }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Permutation {
        let mut p = Permutation::identity(n);
        p.map.swap(a, b);
        p
    }

    pub fn from_map(map: Vec<usize>) -> Option<Permutation> {
        let mut seen = vec![false; map.len()];
        for &i in &map {
            if i >= map.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation { map })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { map: other.map.iter().map(|&i| self.map[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, fixed points omitted; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.map.len()];
        let mut any = false;
        for start in 0..self.map.len() {
            if seen[start] || self.map[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.map[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// One strand per face; strand `j` starts at face `j`.
#[derive(Debug, Clone)]
pub struct CurveSystem {
    surface: Arc<Surface>,
    strands: Vec<StrandWord>,
}

impl PartialEq for CurveSystem {
    fn eq(&self, other: &Self) -> bool {
        self.surface.name() == other.surface.name() && self.strands == other.strands
    }
}

impl Eq for CurveSystem {}

impl CurveSystem {
    pub fn new(surface: Arc<Surface>, strands: Vec<StrandWord>) -> Result<CurveSystem, CurveError> {
        Self::build(surface, strands, true)
    }

    /// Like [`CurveSystem::new`] but without the permutation check. Such a
    /// system is still worth holding: its edge chain is never exact, so the
    /// engines reject it as not null-homologous.
    pub fn new_relaxed(surface: Arc<Surface>, strands: Vec<StrandWord>) -> Result<CurveSystem, CurveError> {
        Self::build(surface, strands, false)
    }

    fn build(surface: Arc<Surface>, strands: Vec<StrandWord>, permutation: bool) -> Result<CurveSystem, CurveError> {
        let n = surface.face_count();
        if strands.len() != n {
            return Err(CurveError::StrandCount { expected: n, found: strands.len() });
        }
        let mut reached = vec![false; n];
        for (index, st) in strands.iter().enumerate() {
            if st.start_face() != index {
                return Err(CurveError::StrandStart { index, start: st.start_face() });
            }
            StrandWord::from_parts(&surface, st.faces.clone(), st.winds.clone())?;
            let end = st.end_face();
            if std::mem::replace(&mut reached[end], true) && permutation {
                return Err(CurveError::NotPermutation { face: end });
            }
        }
        Ok(CurveSystem { surface, strands })
    }

    pub fn identity(surface: Arc<Surface>) -> CurveSystem {
        let strands = (0..surface.face_count()).map(StrandWord::stationary).collect();
        CurveSystem { surface, strands }
    }

    /// Curve datum of `σ_e^{exponent}`. The crossing datum does not depend
    /// on the exponent.
    pub fn sigma(surface: Arc<Surface>, edge: EdgeId, _exponent: Sign) -> Result<CurveSystem, CurveError> {
        let e = surface.edge(edge).map_err(|_| CurveError::UnknownEdge { edge })?;
        let mut gamma = CurveSystem::identity(surface);
        gamma.strands[e.tail] = StrandWord::from_raw(vec![e.tail, e.head], vec![0, 0]);
        gamma.strands[e.head] = StrandWord::from_raw(vec![e.head, e.tail], vec![0, 0]);
        Ok(gamma)
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn surface_arc(&self) -> &Arc<Surface> {
        &self.surface
    }

    pub fn strands(&self) -> &[StrandWord] {
        &self.strands
    }

    pub fn strand(&self, j: FaceId) -> &StrandWord {
        &self.strands[j]
    }

    pub(crate) fn strands_mut(&mut self) -> &mut Vec<StrandWord> {
        &mut self.strands
    }

    /// `j ↦` end face of strand `j`.
    pub fn permutation(&self) -> Permutation {
        Permutation { map: self.strands.iter().map(StrandWord::end_face).collect() }
    }

    /// Total crossing count `Σ (|X_j| - 1)`.
    pub fn measure(&self) -> usize {
        self.strands.iter().map(StrandWord::crossing_count).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.strands.iter().all(|s| s.faces.len() == 1 && s.winds[0] == 0)
    }

    pub fn is_balanced(&self) -> bool {
        edge_chain_of(self).is_zero()
    }

    fn same_surface(&self, other: &CurveSystem) -> Result<(), CurveError> {
        if self.surface.name() != other.surface.name() || *self.surface != *other.surface {
            return Err(CurveError::SurfaceMismatch {
                expected: self.surface.name().into(),
                found: other.surface.name().into(),
            });
        }
        Ok(())
    }

    /// `self · first`: `first` runs, then `self` continues each strand from
    /// where `first` left it.
    pub fn compose(&self, first: &CurveSystem) -> Result<CurveSystem, CurveError> {
        self.same_surface(first)?;
        let strands = first
            .strands
            .iter()
            .map(|st| st.then(&self.strands[st.end_face()]))
            .collect();
        Ok(CurveSystem { surface: self.surface.clone(), strands })
    }

    pub fn invert(&self) -> CurveSystem {
        let mut strands = vec![StrandWord::stationary(0); self.strands.len()];
        for st in &self.strands {
            strands[st.end_face()] = st.reversed();
        }
        CurveSystem { surface: self.surface.clone(), strands }
    }

    /// Folds `sigma` over the letters, rightmost first.
    pub fn of_word(surface: Arc<Surface>, word: &GeneratorWord) -> Result<CurveSystem, CurveError> {
        word.check(&surface)?;
        let mut gamma = CurveSystem::identity(surface.clone());
        for l in word.letters.iter().rev() {
            let sigma = CurveSystem::sigma(surface.clone(), l.edge, l.exp)?;
            gamma = sigma.compose(&gamma)?;
        }
        Ok(gamma)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("curve {}\n", self.surface.name());
        for (j, st) in self.strands.iter().enumerate() {
            out.push_str(&format!("strand {j} :"));
            for t in st.tokens(&self.surface) {
                out.push_str(&format!(" {t}"));
            }
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }

    /// Parses a curve block (`curve` header through `end`). Missing strands
    /// are stationary.
    pub(crate) fn parse_lines(surface: &Arc<Surface>, lines: &[Line<'_>], relaxed: bool) -> Result<CurveSystem, CurveError> {
        let header = lines.first().ok_or_else(|| text::end_of_input(lines, "`curve` header"))?;
        if header.keyword() != "curve" {
            return Err(header.error(0, "expected `curve <surface-name>`").into());
        }
        header.expect_len(2)?;
        check_name(surface, header.tokens[1].text)?;
        let n = surface.face_count();
        let mut strands: Vec<Option<StrandWord>> = vec![None; n];
        let mut ended = false;
        for line in &lines[1..] {
            if ended {
                return Err(line.error(0, "content after `end`").into());
            }
            match line.keyword() {
                "strand" => {
                    let j = line.usize_at(1)?;
                    if j >= n {
                        return Err(line.error(1, format!("strand {j} out of range 0..{n}")).into());
                    }
                    if line.tokens.get(2).map(|t| t.text) != Some(":") {
                        return Err(line.error(2, "expected `:`").into());
                    }
                    let mut tokens = Vec::new();
                    for (i, tok) in line.tokens.iter().enumerate().skip(3) {
                        let t = Token::parse(tok.text)
                            .ok_or_else(|| line.error(i, format!("expected token x<±eid> or w<k>, found `{}`", tok.text)))?;
                        tokens.push(t);
                    }
                    let word = StrandWord::from_tokens(surface, j, &tokens)?;
                    if strands[j].replace(word).is_some() {
                        return Err(line.error(1, format!("duplicate strand {j}")).into());
                    }
                }
                "end" => {
                    line.expect_len(1)?;
                    ended = true;
                }
                other => return Err(line.error(0, format!("unexpected keyword `{other}`")).into()),
            }
        }
        if !ended {
            return Err(text::end_of_input(lines, "`end`").into());
        }
        let strands = strands
            .into_iter()
            .enumerate()
            .map(|(j, s)| s.unwrap_or_else(|| StrandWord::stationary(j)))
            .collect();
        CurveSystem::build(surface.clone(), strands, !relaxed)
    }
}

/// Parses a curve file for surface `s`.
pub fn parse_curve(s: &Arc<Surface>, text: &str) -> Result<CurveSystem, CurveError> {
    CurveSystem::parse_lines(s, &text::lines(text), false)
}

/// Parses a curve file without requiring the end faces to form a permutation.
pub fn parse_curve_relaxed(s: &Arc<Surface>, text: &str) -> Result<CurveSystem, CurveError> {
    CurveSystem::parse_lines(s, &text::lines(text), true)
}

/// Number of strand pairs swapped by each letter, simulated in time order.
pub fn crossing_counts(word: &GeneratorWord, s: &Surface) -> std::collections::BTreeMap<(FaceId, FaceId), i64> {
    let mut occupant: Vec<usize> = (0..s.face_count()).collect();
    let mut counts = std::collections::BTreeMap::new();
    for l in word.letters.iter().rev() {
        let e = s.edges()[l.edge];
        let (p, q) = (occupant[e.tail], occupant[e.head]);
        *counts.entry((p.min(q), p.max(q))).or_insert(0) += l.exp.as_i64();
        occupant.swap(e.tail, e.head);
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::Canonical;

    fn cube() -> Arc<Surface> {
        Arc::new(Canonical::Cube.build().unwrap())
    }

    #[test]
    fn identity_file_round_trip() {
        let s = cube();
        let text = CurveSystem::identity(s.clone()).serialize();
        assert!(text.contains("strand 5 :\n"));
        let parsed = parse_curve(&s, &text).unwrap();
        assert!(parsed.is_identity());
        assert_eq!(parsed.serialize(), text);
    }

    #[test]
    fn non_incident_crossing_reports_position() {
        let s = cube();
        let e = s.edges()[0];
        // strand tail crosses e, then tries to cross e again in the same direction
        let text = format!("curve cube\nstrand {} : x+0 w1 x+0\nend\n", e.tail);
        match parse_curve(&s, &text).unwrap_err() {
            CurveError::Crossing { token, face, .. } => {
                assert_eq!(token, 2);
                assert_eq!(face, e.head);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sigma_datum() {
        let s = cube();
        let e = s.edges()[0];
        let g = CurveSystem::sigma(s.clone(), 0, Sign::Plus).unwrap();
        assert_eq!(g.strand(e.tail).faces(), &[e.tail, e.head]);
        assert_eq!(g.strand(e.head).faces(), &[e.head, e.tail]);
        assert!(g.is_balanced());
        assert_eq!(g.permutation(), Permutation::transposition(6, e.tail, e.head));
        assert!(CurveSystem::sigma(s, 99, Sign::Plus).is_err());
    }

    #[test]
    fn sigma_squared_face_sets() {
        let s = cube();
        let e = s.edges()[0];
        let g = CurveSystem::sigma(s.clone(), 0, Sign::Plus).unwrap();
        let sq = g.compose(&g).unwrap();
        assert_eq!(sq.strand(e.tail).faces(), &[e.tail, e.head, e.tail]);
        assert_eq!(sq.strand(e.head).faces(), &[e.head, e.tail, e.head]);
        assert!(sq.permutation().is_identity());
    }

    #[test]
    fn compose_with_identity_and_inverse() {
        let s = cube();
        let w = GeneratorWord::new(vec![Letter::new(3, Sign::Plus), Letter::new(7, Sign::Minus)]);
        let g = CurveSystem::of_word(s.clone(), &w).unwrap();
        let id = CurveSystem::identity(s);
        assert_eq!(g.compose(&id).unwrap(), g);
        assert_eq!(id.compose(&g).unwrap(), g);
        assert!(edge_chain_of(&g.invert().compose(&g).unwrap()).is_zero());
        assert_eq!(g.invert().invert(), g);
    }

    #[test]
    fn single_crossing_is_unbalanced() {
        let s = cube();
        let e = s.edges()[0];
        let text = format!("curve cube\nstrand {} : x+0\nstrand {} : x-0\nend\n", e.tail, e.head);
        let g = parse_curve(&s, &text).unwrap();
        assert!(g.is_balanced());
        let text = format!("curve cube\nstrand {} : x+0\nstrand {} : x+4 x-4\nend\n", e.tail, e.head);
        assert!(matches!(parse_curve(&s, &text), Err(CurveError::NotPermutation { .. }) | Err(CurveError::Crossing { .. })));
    }

    #[test]
    fn word_of_two_letters_sharing_a_face() {
        let s = Arc::new(Canonical::Tetrahedron.build().unwrap());
        // e: 0-1, f: 1-2 on the tetrahedron
        let (e, _) = s.edge_between(0, 1).unwrap();
        let (f, _) = s.edge_between(1, 2).unwrap();
        let w = GeneratorWord::new(vec![Letter::new(f, Sign::Plus), Letter::new(e, Sign::Plus)]);
        let g = CurveSystem::of_word(s.clone(), &w).unwrap();
        // σ_e first: 0->1, 1->0; then σ_f moves whoever is on 1 to 2.
        assert_eq!(g.strand(0).faces(), &[0, 1, 2]);
        assert_eq!(g.strand(1).faces(), &[1, 0]);
        assert_eq!(g.strand(2).faces(), &[2, 1]);
        let expected = Permutation::transposition(4, 1, 2).compose(&Permutation::transposition(4, 0, 1));
        assert_eq!(g.permutation(), expected);
        assert_eq!(w.permutation(&s), expected);
    }

    #[test]
    fn palindromes() {
        assert!(is_palindrome(&[1, 2, 1]));
        assert!(!is_palindrome(&[1, 2]));
        assert!(is_palindrome(&[1, 2, 3, 2, 1]));
        assert!(is_palindrome(&[4]));
        assert!(!is_palindrome(&[]));
    }

    #[test]
    fn word_file_round_trip() {
        let s = cube();
        let w = GeneratorWord::new(vec![Letter::new(3, Sign::Plus), Letter::new(11, Sign::Minus)]);
        let text = w.serialize(&s);
        assert_eq!(text, "word cube\nletters e3^+1 e11^-1\nend\n");
        assert_eq!(parse_word(&s, &text).unwrap(), w);
        assert!(parse_word(&s, "word cube\nletters e12^+1\nend\n").is_err());
        assert!(parse_word(&s, "word tetrahedron\nletters\nend\n").is_err());
    }

    #[test]
    fn crossing_count_examples() {
        let s = cube();
        let e = s.edges()[0];
        let key = (e.tail.min(e.head), e.tail.max(e.head));
        let one = GeneratorWord::new(vec![Letter::new(0, Sign::Plus)]);
        assert_eq!(crossing_counts(&one, &s)[&key], 1);
        let cancel = GeneratorWord::new(vec![Letter::new(0, Sign::Plus), Letter::new(0, Sign::Minus)]);
        assert!(crossing_counts(&cancel, &s).values().all(|&v| v == 0));
        let sq = GeneratorWord::new(vec![Letter::new(0, Sign::Plus); 2]);
        assert_eq!(crossing_counts(&sq, &s)[&key], 2);
    }

    #[test]
    fn permutation_display() {
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert_eq!(Permutation::transposition(4, 1, 3).to_string(), "(1 3)");
    }
}
