//! Integer chain complex `0 -> ZV -> ZE -> ZX -> 0` of the dual graph.
//!
//! A vertex maps to the signed sum of the dual edges around it, and a dual
//! edge maps to `head - tail`. A curve system lies in the kernel of the
//! homology map exactly when its edge chain is in the image of `ZV -> ZE`;
//! [`solve_preimage`] decides that membership by exact elimination over the
//! integers.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::curve::CurveSystem;
use crate::surface::Surface;
use crate::text::{parse_signed, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grade {
    /// Vertices of the decomposition (cells of the dual complex).
    V,
    /// Edges.
    E,
    /// Faces, i.e. marked points.
    X,
}

impl Grade {
    fn letter(self) -> &'static str {
        match self {
            Grade::V => "V",
            Grade::E => "E",
            Grade::X => "X",
        }
    }

    fn size(self, s: &Surface) -> usize {
        match self {
            Grade::V => s.vertex_count(),
            Grade::E => s.edge_count(),
            Grade::X => s.face_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("grade {0:?} has no boundary")]
    NoBoundary(Grade),
    #[error("expected a chain of grade {expected:?}, got {found:?}")]
    WrongGrade { expected: Grade, found: Grade },
    #[error("id {id} out of range for grade {grade:?} (size {size})")]
    IdOutOfRange { grade: Grade, id: usize, size: usize },
    #[error("integer overflow during elimination")]
    Overflow,
}

/// Sparse integer chain; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    grade: Grade,
    coeffs: BTreeMap<usize, i64>,
}

impl Chain {
    pub fn zero(grade: Grade) -> Chain {
        Chain { grade, coeffs: BTreeMap::new() }
    }

    pub fn unit(grade: Grade, id: usize) -> Chain {
        let mut c = Chain::zero(grade);
        c.add_to(id, 1);
        c
    }

    pub fn from_pairs(grade: Grade, pairs: impl IntoIterator<Item = (usize, i64)>) -> Chain {
        let mut c = Chain::zero(grade);
        for (id, k) in pairs {
            c.add_to(id, k);
        }
        c
    }

    pub fn grade(&self) -> Grade {
        self.grade
    }

    pub fn get(&self, id: usize) -> i64 {
        self.coeffs.get(&id).copied().unwrap_or(0)
    }

    pub fn add_to(&mut self, id: usize, k: i64) {
        if k == 0 {
            return;
        }
        let entry = self.coeffs.entry(id).or_insert(0);
        *entry += k;
        if *entry == 0 {
            self.coeffs.remove(&id);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero `(id, coefficient)` pairs in id order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&id, &k)| (id, k))
    }

    pub fn plus(&self, other: &Chain) -> Chain {
        assert_eq!(self.grade, other.grade, "adding chains of different grades");
        let mut out = self.clone();
        for (id, k) in other.iter() {
            out.add_to(id, k);
        }
        out
    }

    pub fn scaled(&self, k: i64) -> Chain {
        Chain::from_pairs(self.grade, self.iter().map(|(id, c)| (id, c * k)))
    }

    pub fn check_ids(&self, s: &Surface) -> Result<(), ChainError> {
        let size = self.grade.size(s);
        match self.coeffs.keys().next_back() {
            Some(&id) if id >= size => Err(ChainError::IdOutOfRange { grade: self.grade, id, size }),
            _ => Ok(()),
        }
    }

    /// Parses the body of a `chain` line: a grade letter and `id:coef` pairs.
    pub fn parse_fields(fields: &[&str]) -> Result<Chain, String> {
        let grade = match fields.first().copied() {
            Some("V") => Grade::V,
            Some("E") => Grade::E,
            Some("X") => Grade::X,
            other => return Err(format!("expected chain grade V, E or X, found {other:?}")),
        };
        let mut c = Chain::zero(grade);
        for f in &fields[1..] {
            let (id, k) = f.split_once(':').ok_or_else(|| format!("expected id:coef, found `{f}`"))?;
            let id = id.parse::<usize>().map_err(|_| format!("bad chain id in `{f}`"))?;
            let k = parse_signed(k).ok_or_else(|| format!("bad chain coefficient in `{f}`"))?;
            if k == 0 || c.get(id) != 0 {
                return Err(format!("chain entry `{f}` is zero or repeated"));
            }
            c.add_to(id, k);
        }
        Ok(c)
    }

    pub fn parse_line(line: &str) -> Result<Chain, ParseError> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.first() != Some(&"chain") {
            return Err(ParseError::new(1, 1, "expected `chain`"));
        }
        Chain::parse_fields(&fields[1..]).map_err(|m| ParseError::new(1, 1, m))
    }
}

impl fmt::Display for Chain {
    /// `chain <grade> <id>:<coef> ...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chain {}", self.grade.letter())?;
        for (id, k) in self.iter() {
            write!(f, " {id}:{k}")?;
        }
        Ok(())
    }
}

/// Boundary map `ZV -> ZE` or `ZE -> ZX`.
pub fn boundary(s: &Surface, c: &Chain) -> Result<Chain, ChainError> {
    c.check_ids(s)?;
    match c.grade {
        Grade::V => {
            let mut out = Chain::zero(Grade::E);
            for (v, k) in c.iter() {
                for se in s.vertex_cycle(v) {
                    out.add_to(se.edge, k * se.sign.as_i64());
                }
            }
            Ok(out)
        }
        Grade::E => {
            let mut out = Chain::zero(Grade::X);
            for (e, k) in c.iter() {
                let edge = s.edges()[e];
                out.add_to(edge.head, k);
                out.add_to(edge.tail, -k);
            }
            Ok(out)
        }
        Grade::X => Err(ChainError::NoBoundary(Grade::X)),
    }
}

/// Signed crossing count of every edge, summed over all strands.
pub fn edge_chain_of(gamma: &CurveSystem) -> Chain {
    let s = gamma.surface();
    let mut out = Chain::zero(Grade::E);
    for strand in gamma.strands() {
        for (edge, sign) in strand.crossings(s) {
            out.add_to(edge, sign.as_i64());
        }
    }
    out
}

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

/// Column Hermite form `H = A U` with `U` unimodular. The first `rank`
/// columns of `H` have strictly increasing pivot rows with positive pivots
/// and zeros above; the remaining columns of `H` vanish, so the matching
/// columns of `U` span the integer kernel of `A`.
#[derive(Debug, Clone)]
pub(crate) struct ColumnEchelon {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub pivots: Vec<usize>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Replaces columns `(i, j)` by `(a*ci + b*cj, c*ci + d*cj)`.
    fn combine_columns(&mut self, i: usize, j: usize, [a, b, c, d]: [i64; 4]) -> Result<(), ChainError> {
        for r in 0..self.rows {
            let (x, y) = (self.get(r, i), self.get(r, j));
            let ni = lin(a, x, b, y)?;
            let nj = lin(c, x, d, y)?;
            self.set(r, i, ni);
            self.set(r, j, nj);
        }
        Ok(())
    }

    fn negate_column(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = self.get(r, c);
            self.set(r, c, -v);
        }
    }

    pub fn column_echelon(&self) -> Result<ColumnEchelon, ChainError> {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.cols);
        let mut pivots = Vec::new();
        let mut next = 0;
        for row in 0..self.rows {
            if next == self.cols {
                break;
            }
            for j in next + 1..self.cols {
                let b = h.get(row, j);
                if b == 0 {
                    continue;
                }
                let a = h.get(row, next);
                let (g, x, y) = ext_gcd(a, b);
                let ops = [x, y, -b / g, a / g];
                h.combine_columns(next, j, ops)?;
                u.combine_columns(next, j, ops)?;
            }
            let p = h.get(row, next);
            if p == 0 {
                continue;
            }
            if p < 0 {
                h.negate_column(next);
                u.negate_column(next);
            }
            pivots.push(row);
            next += 1;
        }
        Ok(ColumnEchelon { h, u, pivots })
    }
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Integer kernel basis of the original matrix.
    pub fn kernel(&self) -> Vec<Vec<i64>> {
        (self.rank()..self.u.cols).map(|c| self.u.column(c)).collect()
    }

    /// Some integer `x` with `A x = target`, if one exists.
    pub fn solve(&self, target: &[i64]) -> Result<Option<Vec<i64>>, ChainError> {
        let rank = self.rank();
        let mut y = vec![0i64; self.u.cols];
        for (k, &row) in self.pivots.iter().enumerate() {
            let mut rest = target[row];
            for (l, yl) in y.iter().enumerate().take(k) {
                rest = rest.checked_sub(mul(self.h.get(row, l), *yl)?).ok_or(ChainError::Overflow)?;
            }
            let p = self.h.get(row, k);
            if rest % p != 0 {
                return Ok(None);
            }
            y[k] = rest / p;
        }
        for (row, &t) in target.iter().enumerate() {
            let mut acc = 0i64;
            for (l, yl) in y.iter().enumerate().take(rank) {
                acc = acc.checked_add(mul(self.h.get(row, l), *yl)?).ok_or(ChainError::Overflow)?;
            }
            if acc != t {
                return Ok(None);
            }
        }
        let mut x = vec![0i64; self.u.rows];
        for (r, xr) in x.iter_mut().enumerate() {
            for (c, yc) in y.iter().enumerate().take(rank) {
                *xr = xr.checked_add(mul(self.u.get(r, c), *yc)?).ok_or(ChainError::Overflow)?;
            }
        }
        Ok(Some(x))
    }
}

fn mul(a: i64, b: i64) -> Result<i64, ChainError> {
    a.checked_mul(b).ok_or(ChainError::Overflow)
}

fn lin(a: i64, x: i64, b: i64, y: i64) -> Result<i64, ChainError> {
    mul(a, x)?.checked_add(mul(b, y)?).ok_or(ChainError::Overflow)
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b) > 0`, for `b != 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Matrix of `ZV -> ZE` (rows: edges, columns: vertices).
pub(crate) fn vertex_boundary_matrix(s: &Surface) -> IntMatrix {
    let mut m = IntMatrix::zeros(s.edge_count(), s.vertex_count());
    for (v, cycle) in s.vertex_cycles().iter().enumerate() {
        for se in cycle {
            let cur = m.get(se.edge, v);
            m.set(se.edge, v, cur + se.sign.as_i64());
        }
    }
    m
}

/// Integer kernel basis of `ZV -> ZE`.
pub fn vertex_kernel(s: &Surface) -> Result<Vec<Chain>, ChainError> {
    let ech = vertex_boundary_matrix(s).column_echelon()?;
    Ok(ech
        .kernel()
        .into_iter()
        .map(|col| Chain::from_pairs(Grade::V, col.into_iter().enumerate()))
        .collect())
}

/// A vertex chain whose boundary is `target`, or `None` when `target` is not
/// exact. Solutions differ by multiples of the all-vertices chain; the one
/// returned has minimum coefficient 0.
pub fn solve_preimage(s: &Surface, target: &Chain) -> Result<Option<Chain>, ChainError> {
    if target.grade != Grade::E {
        return Err(ChainError::WrongGrade { expected: Grade::E, found: target.grade });
    }
    target.check_ids(s)?;
    let dense: Vec<i64> = (0..s.edge_count()).map(|e| target.get(e)).collect();
    let ech = vertex_boundary_matrix(s).column_echelon()?;
    let Some(x) = ech.solve(&dense)? else {
        return Ok(None);
    };
    let min = x.iter().copied().min().unwrap_or(0);
    Ok(Some(Chain::from_pairs(Grade::V, x.into_iter().map(|k| k - min).enumerate())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::Canonical;

    fn surfaces() -> Vec<Surface> {
        [
            Canonical::Tetrahedron,
            Canonical::Cube,
            Canonical::TorusGrid { rows: 3, cols: 3 },
            Canonical::TorusGrid { rows: 4, cols: 5 },
        ]
        .into_iter()
        .map(|k| k.build().unwrap())
        .collect()
    }

    #[test]
    fn boundary_of_edge_is_head_minus_tail() {
        let s = Canonical::Cube.build().unwrap();
        for (id, e) in s.edges().iter().enumerate() {
            let b = boundary(&s, &Chain::unit(Grade::E, id)).unwrap();
            assert_eq!(b, Chain::from_pairs(Grade::X, [(e.head, 1), (e.tail, -1)]));
        }
    }

    #[test]
    fn cube_vertex_boundary_has_three_edges() {
        let s = Canonical::Cube.build().unwrap();
        for v in 0..s.vertex_count() {
            let b = boundary(&s, &Chain::unit(Grade::V, v)).unwrap();
            assert_eq!(b.iter().count(), 3);
            for se in s.vertex_cycle(v) {
                assert_eq!(b.get(se.edge), se.sign.as_i64());
            }
        }
    }

    #[test]
    fn boundary_squares_to_zero() {
        for s in surfaces() {
            for v in 0..s.vertex_count() {
                let bb = boundary(&s, &boundary(&s, &Chain::unit(Grade::V, v)).unwrap()).unwrap();
                assert!(bb.is_zero(), "{} vertex {v}", s.name());
            }
        }
    }

    #[test]
    fn grade_x_has_no_boundary() {
        let s = Canonical::Cube.build().unwrap();
        assert_eq!(
            boundary(&s, &Chain::unit(Grade::X, 0)),
            Err(ChainError::NoBoundary(Grade::X))
        );
    }

    #[test]
    fn kernel_is_all_ones() {
        for s in surfaces() {
            let kernel = vertex_kernel(&s).unwrap();
            assert_eq!(kernel.len(), 1, "{}", s.name());
            let k = &kernel[0];
            let first = k.get(0);
            assert!(first == 1 || first == -1);
            assert!((0..s.vertex_count()).all(|v| k.get(v) == first));
        }
    }

    #[test]
    fn preimage_of_vertex_boundary_is_normalized() {
        let s = Canonical::Cube.build().unwrap();
        for v in 0..s.vertex_count() {
            let target = boundary(&s, &Chain::unit(Grade::V, v)).unwrap();
            assert_eq!(solve_preimage(&s, &target).unwrap(), Some(Chain::unit(Grade::V, v)));
        }
        assert_eq!(solve_preimage(&s, &Chain::zero(Grade::E)).unwrap(), Some(Chain::zero(Grade::V)));
    }

    /// Exhaustive search over vertex chains with coefficients in -2..=2.
    fn brute_force_preimage(s: &Surface, target: &Chain) -> bool {
        let n = s.vertex_count();
        let mut coeffs = vec![-2i64; n];
        loop {
            let c = Chain::from_pairs(Grade::V, coeffs.iter().copied().enumerate());
            if boundary(s, &c).unwrap() == *target {
                return true;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return false;
                }
                coeffs[i] += 1;
                if coeffs[i] <= 2 {
                    break;
                }
                coeffs[i] = -2;
                i += 1;
            }
        }
    }

    #[test]
    fn single_cube_edge_is_not_exact() {
        let s = Canonical::Cube.build().unwrap();
        let target = Chain::unit(Grade::E, 0);
        assert!(!brute_force_preimage(&s, &target));
        assert_eq!(solve_preimage(&s, &target).unwrap(), None);
    }

    #[test]
    fn solver_rejects_other_grades() {
        let s = Canonical::Cube.build().unwrap();
        assert!(matches!(
            solve_preimage(&s, &Chain::zero(Grade::V)),
            Err(ChainError::WrongGrade { .. })
        ));
        assert!(matches!(
            solve_preimage(&s, &Chain::unit(Grade::E, 99)),
            Err(ChainError::IdOutOfRange { .. })
        ));
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(0, 5), (4, 6), (-4, 6), (7, -3), (-1, 1), (12, 18)] {
            let (g, x, y) = ext_gcd(a, b);
            assert!(g > 0);
            assert_eq!(a * x + b * y, g);
        }
    }

    #[test]
    fn chain_text_round_trip() {
        let c = Chain::from_pairs(Grade::V, [(3, 1), (5, -2)]);
        assert_eq!(c.to_string(), "chain V 3:1 5:-2");
        assert_eq!(Chain::parse_line(&c.to_string()).unwrap(), c);
        assert!(Chain::parse_line("chain Q 1:1").is_err());
    }
}
