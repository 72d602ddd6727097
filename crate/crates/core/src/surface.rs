//! Polyhedral decompositions of closed oriented surfaces and their dual graphs.
//!
//! Faces are the vertices of the dual graph; each face carries one marked
//! point. Every edge of the decomposition is stored as a dual edge with a
//! fixed orientation `tail -> head`. Each vertex of the decomposition is
//! stored as the cyclic sequence of signed dual edges bounding its dual cell.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::ops::Neg;

use thiserror::Error;

use crate::text::{self, Line, ParseError};

pub type FaceId = usize;
pub type EdgeId = usize;
pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(value: i64) -> Option<Sign> {
        match value {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A dual edge with its stored orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: FaceId,
    pub head: FaceId,
}

impl Edge {
    /// Face reached by crossing the edge with the given sign.
    pub fn target(&self, sign: Sign) -> FaceId {
        match sign {
            Sign::Plus => self.head,
            Sign::Minus => self.tail,
        }
    }

    /// Face a crossing with the given sign starts from.
    pub fn source(&self, sign: Sign) -> FaceId {
        match sign {
            Sign::Plus => self.tail,
            Sign::Minus => self.head,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedEdge {
    pub edge: EdgeId,
    pub sign: Sign,
}

impl fmt::Display for SignedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign.symbol(), self.edge)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("syntax error at {0}")]
    Syntax(#[from] ParseError),
    #[error("face self-neighbor: edge {edge} joins face {face} to itself")]
    SelfNeighbor { edge: EdgeId, face: FaceId },
    #[error("double adjacency: faces {faces:?} share edges {first} and {second}")]
    DoubleAdjacency { faces: (FaceId, FaceId), first: EdgeId, second: EdgeId },
    #[error("edge sign multiplicity: edge {edge} occurs {plus} times with + and {minus} times with - in vertex cycles")]
    SignMultiplicity { edge: EdgeId, plus: usize, minus: usize },
    #[error("broken cycle: vertex {vertex} entry {position} does not continue from the previous entry")]
    BrokenCycle { vertex: VertexId, position: usize },
    #[error("empty cycle: vertex {vertex} has no edges")]
    EmptyCycle { vertex: VertexId },
    #[error("disconnected dual graph: face {face} is unreachable from face 0")]
    Disconnected { face: FaceId },
    #[error("euler characteristic {chi} is not that of a closed oriented surface")]
    EulerCharacteristic { chi: i64 },
    #[error("unknown face {face} (surface has {count} faces)")]
    UnknownFace { face: FaceId, count: usize },
    #[error("unknown edge {edge} (surface has {count} edges)")]
    UnknownEdge { edge: EdgeId, count: usize },
    #[error("{kind} ids are not contiguous: expected {expected}, found {found}")]
    IdGap { kind: &'static str, expected: usize, found: usize },
    #[error("surface has no faces")]
    NoFaces,
    #[error("parameter out of range: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surface {
    name: String,
    face_count: usize,
    edges: Vec<Edge>,
    vertex_cycles: Vec<Vec<SignedEdge>>,
    pair_index: HashMap<(FaceId, FaceId), EdgeId>,
    neighbors: Vec<Vec<(FaceId, EdgeId)>>,
}

impl Surface {
    /// Builds and validates a surface from raw parts.
    pub fn new(
        name: impl Into<String>,
        face_count: usize,
        edges: Vec<Edge>,
        vertex_cycles: Vec<Vec<SignedEdge>>,
    ) -> Result<Surface, SurfaceError> {
        if face_count == 0 {
            return Err(SurfaceError::NoFaces);
        }
        let mut pair_index = HashMap::new();
        let mut neighbors = vec![Vec::new(); face_count];
        for (id, e) in edges.iter().enumerate() {
            for face in [e.tail, e.head] {
                if face >= face_count {
                    return Err(SurfaceError::UnknownFace { face, count: face_count });
                }
            }
            if e.tail == e.head {
                return Err(SurfaceError::SelfNeighbor { edge: id, face: e.tail });
            }
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if let Some(&first) = pair_index.get(&key) {
                return Err(SurfaceError::DoubleAdjacency { faces: key, first, second: id });
            }
            pair_index.insert(key, id);
            neighbors[e.tail].push((e.head, id));
            neighbors[e.head].push((e.tail, id));
        }

        let mut plus = vec![0usize; edges.len()];
        let mut minus = vec![0usize; edges.len()];
        for (v, cycle) in vertex_cycles.iter().enumerate() {
            if cycle.is_empty() {
                return Err(SurfaceError::EmptyCycle { vertex: v });
            }
            for se in cycle {
                if se.edge >= edges.len() {
                    return Err(SurfaceError::UnknownEdge { edge: se.edge, count: edges.len() });
                }
                match se.sign {
                    Sign::Plus => plus[se.edge] += 1,
                    Sign::Minus => minus[se.edge] += 1,
                }
            }
            for position in 0..cycle.len() {
                let prev = cycle[(position + cycle.len() - 1) % cycle.len()];
                let cur = cycle[position];
                if edges[prev.edge].target(prev.sign) != edges[cur.edge].source(cur.sign) {
                    return Err(SurfaceError::BrokenCycle { vertex: v, position });
                }
            }
        }
        for edge in 0..edges.len() {
            if plus[edge] != 1 || minus[edge] != 1 {
                return Err(SurfaceError::SignMultiplicity { edge, plus: plus[edge], minus: minus[edge] });
            }
        }

        let mut seen = vec![false; face_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(f) = queue.pop_front() {
            for &(g, _) in &neighbors[f] {
                if !seen[g] {
                    seen[g] = true;
                    queue.push_back(g);
                }
            }
        }
        if let Some(face) = seen.iter().position(|s| !s) {
            return Err(SurfaceError::Disconnected { face });
        }

        let chi = vertex_cycles.len() as i64 - edges.len() as i64 + face_count as i64;
        if chi > 2 || chi % 2 != 0 {
            return Err(SurfaceError::EulerCharacteristic { chi });
        }

        for list in &mut neighbors {
            list.sort_by_key(|&(_, e)| e);
        }
        Ok(Surface {
            name: name.into(),
            face_count,
            edges,
            vertex_cycles,
            pair_index,
            neighbors,
        })
    }

    /// Builds a surface from polygons given as vertex lists, counterclockwise
    /// when seen from outside. Dual edges are oriented from the lower to the
    /// higher face id.
    pub fn from_polygons(name: impl Into<String>, polygons: &[Vec<usize>]) -> Result<Surface, SurfaceError> {
        let mut directed: HashMap<(usize, usize), FaceId> = HashMap::new();
        let mut successor: Vec<HashMap<usize, usize>> = Vec::with_capacity(polygons.len());
        let mut vertex_count = 0;
        for (f, poly) in polygons.iter().enumerate() {
            let mut succ = HashMap::new();
            for i in 0..poly.len() {
                let (u, v) = (poly[i], poly[(i + 1) % poly.len()]);
                vertex_count = vertex_count.max(u + 1);
                if directed.insert((u, v), f).is_some() {
                    return Err(SurfaceError::Parameter(format!(
                        "polygons are not coherently oriented at directed edge {u}->{v}"
                    )));
                }
                succ.insert(u, v);
            }
            successor.push(succ);
        }

        let mut edge_ids: HashMap<(usize, usize), EdgeId> = HashMap::new();
        let mut edges = Vec::new();
        for (f, poly) in polygons.iter().enumerate() {
            for i in 0..poly.len() {
                let (u, v) = (poly[i], poly[(i + 1) % poly.len()]);
                let key = (u.min(v), u.max(v));
                if edge_ids.contains_key(&key) {
                    continue;
                }
                let other = *directed.get(&(v, u)).ok_or_else(|| {
                    SurfaceError::Parameter(format!("edge {u}-{v} lies on only one polygon"))
                })?;
                edge_ids.insert(key, edges.len());
                edges.push(Edge { tail: f.min(other), head: f.max(other) });
            }
        }

        let mut first_face: Vec<Option<FaceId>> = vec![None; vertex_count];
        for (f, poly) in polygons.iter().enumerate() {
            for &u in poly {
                first_face[u].get_or_insert(f);
            }
        }
        let mut vertex_cycles = Vec::with_capacity(vertex_count);
        for (v, start) in first_face.iter().enumerate() {
            let start = start.ok_or_else(|| SurfaceError::Parameter(format!("vertex {v} is on no polygon")))?;
            let mut cycle = Vec::new();
            let mut face = start;
            loop {
                let q = successor[face][&v];
                let next = directed[&(q, v)];
                let edge = edge_ids[&(v.min(q), v.max(q))];
                let sign = if edges[edge].tail == face { Sign::Plus } else { Sign::Minus };
                cycle.push(SignedEdge { edge, sign });
                face = next;
                if face == start {
                    break;
                }
                if cycle.len() > edges.len() {
                    return Err(SurfaceError::Parameter(format!("vertex {v} has no closed link")));
                }
            }
            vertex_cycles.push(cycle);
        }
        Surface::new(name, polygons.len(), edges, vertex_cycles)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_cycles.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<Edge, SurfaceError> {
        self.edges
            .get(id)
            .copied()
            .ok_or(SurfaceError::UnknownEdge { edge: id, count: self.edges.len() })
    }

    pub fn vertex_cycles(&self) -> &[Vec<SignedEdge>] {
        &self.vertex_cycles
    }

    pub fn vertex_cycle(&self, v: VertexId) -> &[SignedEdge] {
        &self.vertex_cycles[v]
    }

    /// Neighboring faces of `face` with the joining edge, sorted by edge id.
    pub fn neighbors(&self, face: FaceId) -> &[(FaceId, EdgeId)] {
        &self.neighbors[face]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count as i64
    }

    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    pub fn check_face(&self, face: FaceId) -> Result<(), SurfaceError> {
        if face < self.face_count {
            Ok(())
        } else {
            Err(SurfaceError::UnknownFace { face, count: self.face_count })
        }
    }

    /// The edge joining `a` and `b`, with the sign of crossing it from `a` to `b`.
    pub fn incident_edge(&self, a: FaceId, b: FaceId) -> Result<Option<(EdgeId, Sign)>, SurfaceError> {
        self.check_face(a)?;
        self.check_face(b)?;
        Ok(self.edge_between(a, b))
    }

    pub(crate) fn edge_between(&self, a: FaceId, b: FaceId) -> Option<(EdgeId, Sign)> {
        let id = *self.pair_index.get(&(a.min(b), a.max(b)))?;
        let sign = if self.edges[id].tail == a { Sign::Plus } else { Sign::Minus };
        Some((id, sign))
    }

    /// Lowest-id edge incident to `face`.
    pub(crate) fn first_edge_at(&self, face: FaceId) -> Option<EdgeId> {
        self.neighbors[face].first().map(|&(_, e)| e)
    }

    /// Faces visited when walking once around the dual cell of `v`, starting
    /// from the source of the first cycle entry (closing face not repeated).
    pub fn vertex_faces(&self, v: VertexId) -> Vec<FaceId> {
        self.vertex_cycles[v]
            .iter()
            .map(|se| self.edges[se.edge].source(se.sign))
            .collect()
    }

    /// Shortest dual path from `from` to `to` (breadth first, lowest edge id first).
    pub fn dual_path(&self, from: FaceId, to: FaceId) -> Vec<FaceId> {
        self.dual_path_within(from, |f| f == to, |_| true).unwrap_or_default()
    }

    /// Shortest dual path from `from` to the first face satisfying `goal`,
    /// using only faces accepted by `allowed`.
    pub(crate) fn dual_path_within(
        &self,
        from: FaceId,
        goal: impl Fn(FaceId) -> bool,
        allowed: impl Fn(FaceId) -> bool,
    ) -> Option<Vec<FaceId>> {
        let mut parent: Vec<Option<FaceId>> = vec![None; self.face_count];
        let mut seen = vec![false; self.face_count];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(f) = queue.pop_front() {
            if goal(f) {
                let mut path = vec![f];
                let mut cur = f;
                while let Some(p) = parent[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &(g, _) in &self.neighbors[f] {
                if !seen[g] && allowed(g) {
                    seen[g] = true;
                    parent[g] = Some(f);
                    queue.push_back(g);
                }
            }
        }
        None
    }

    /// Canonical text form: edges and vertices sorted by id.
    pub fn serialize(&self) -> String {
        let mut out = format!("surface {}\nfaces {}\n", self.name, self.face_count);
        for (id, e) in self.edges.iter().enumerate() {
            out.push_str(&format!("edge {id} {} {}\n", e.tail, e.head));
        }
        for (id, cycle) in self.vertex_cycles.iter().enumerate() {
            out.push_str(&format!("vertex {id}"));
            for se in cycle {
                out.push_str(&format!(" {se}"));
            }
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }
}

/// Parses and validates a surface file.
pub fn parse_surface(text: &str) -> Result<Surface, SurfaceError> {
    let lines = text::lines(text);
    let mut iter = lines.iter();
    let header = iter.next().ok_or_else(|| text::end_of_input(&lines, "`surface` header"))?;
    if header.keyword() != "surface" {
        return Err(header.error(0, "expected `surface <name>`").into());
    }
    header.expect_len(2)?;
    let name = header.tokens[1].text.to_string();

    let faces_line = iter.next().ok_or_else(|| text::end_of_input(&lines, "`faces` line"))?;
    if faces_line.keyword() != "faces" {
        return Err(faces_line.error(0, "expected `faces <n>`").into());
    }
    faces_line.expect_len(2)?;
    let face_count = faces_line.usize_at(1)?;

    let mut edges: BTreeMap<EdgeId, (Edge, &Line<'_>)> = BTreeMap::new();
    let mut vertices: BTreeMap<VertexId, Vec<SignedEdge>> = BTreeMap::new();
    let mut ended = false;
    for line in iter.by_ref() {
        match line.keyword() {
            "edge" => {
                line.expect_len(4)?;
                let id = line.usize_at(1)?;
                let tail = line.usize_at(2)?;
                let head = line.usize_at(3)?;
                if edges.insert(id, (Edge { tail, head }, line)).is_some() {
                    return Err(line.error(1, format!("duplicate edge id {id}")).into());
                }
            }
            "vertex" => {
                if line.tokens.len() < 3 {
                    return Err(line.error(line.tokens.len(), "vertex needs an id and at least one signed edge").into());
                }
                let id = line.usize_at(1)?;
                let mut cycle = Vec::new();
                for (i, tok) in line.tokens.iter().enumerate().skip(2) {
                    let (sign, rest) = match tok.text.split_at(1) {
                        ("+", rest) => (Sign::Plus, rest),
                        ("-", rest) => (Sign::Minus, rest),
                        _ => return Err(line.error(i, format!("expected signed edge id, found `{}`", tok.text)).into()),
                    };
                    let edge = rest
                        .parse::<usize>()
                        .map_err(|_| line.error(i, format!("expected signed edge id, found `{}`", tok.text)))?;
                    cycle.push(SignedEdge { edge, sign });
                }
                if vertices.insert(id, cycle).is_some() {
                    return Err(line.error(1, format!("duplicate vertex id {id}")).into());
                }
            }
            "end" => {
                line.expect_len(1)?;
                ended = true;
                break;
            }
            other => return Err(line.error(0, format!("unexpected keyword `{other}`")).into()),
        }
    }
    if !ended {
        return Err(text::end_of_input(&lines, "`end`").into());
    }
    if let Some(extra) = iter.next() {
        return Err(extra.error(0, "content after `end`").into());
    }
    for (expected, &found) in edges.keys().enumerate() {
        if expected != found {
            return Err(SurfaceError::IdGap { kind: "edge", expected, found });
        }
    }
    for (expected, &found) in vertices.keys().enumerate() {
        if expected != found {
            return Err(SurfaceError::IdGap { kind: "vertex", expected, found });
        }
    }
    for (e, line) in edges.values() {
        for (i, face) in [(2, e.tail), (3, e.head)] {
            if face >= face_count {
                return Err(line.error(i, format!("face {face} out of range 0..{face_count}")).into());
            }
        }
    }
    Surface::new(
        name,
        face_count,
        edges.into_values().map(|(e, _)| e).collect(),
        vertices.into_values().collect(),
    )
}
