//! Built-in test surfaces.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::surface::{FaceId, Surface, SurfaceError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Canonical {
    Tetrahedron,
    Cube,
    /// Square grid on a torus; needs at least 3 rows and 3 columns.
    TorusGrid { rows: usize, cols: usize },
    /// Cube with every side cut into an `n` by `n` grid of squares.
    RefinedCube { n: usize },
}

impl Canonical {
    pub fn build(self) -> Result<Surface, SurfaceError> {
        match self {
            Canonical::Tetrahedron => Surface::from_polygons(
                self.to_string(),
                &[vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]],
            ),
            Canonical::Cube => refined_cube(self.to_string(), 1),
            Canonical::TorusGrid { rows, cols } => {
                if rows < 3 || cols < 3 {
                    return Err(SurfaceError::Parameter(format!(
                        "torus_grid needs rows >= 3 and cols >= 3, got {rows}x{cols}"
                    )));
                }
                Surface::from_polygons(self.to_string(), &torus_polygons(rows, cols))
            }
            Canonical::RefinedCube { n } => {
                if n == 0 {
                    return Err(SurfaceError::Parameter("refined_cube needs n >= 1".into()));
                }
                refined_cube(self.to_string(), n)
            }
        }
    }
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Canonical::Tetrahedron => write!(f, "tetrahedron"),
            Canonical::Cube => write!(f, "cube"),
            Canonical::TorusGrid { rows, cols } => write!(f, "torus_grid_{rows}x{cols}"),
            Canonical::RefinedCube { n } => write!(f, "refined_cube_{n}"),
        }
    }
}

impl FromStr for Canonical {
    type Err = SurfaceError;

    /// Accepts `tetrahedron`, `cube`, `torus_grid(r,c)`, `torus_grid_RxC`,
    /// `refined_cube(n)` and `refined_cube_N`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SurfaceError::Parameter(format!("unknown canonical surface `{s}`"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match s {
            "tetrahedron" => return Ok(Canonical::Tetrahedron),
            "cube" => return Ok(Canonical::Cube),
            _ => {}
        }
        let args = |prefix: &str| -> Option<String> {
            if let Some(rest) = s.strip_prefix(&format!("{prefix}(")) {
                rest.strip_suffix(')').map(|r| r.replace(',', "x"))
            } else {
                s.strip_prefix(&format!("{prefix}_")).map(str::to_string)
            }
        };
        if let Some(a) = args("torus_grid") {
            let (r, c) = a.split_once('x').ok_or_else(bad)?;
            return Ok(Canonical::TorusGrid { rows: num(r)?, cols: num(c)? });
        }
        if let Some(a) = args("refined_cube") {
            return Ok(Canonical::RefinedCube { n: num(&a)? });
        }
        Err(bad())
    }
}

fn torus_polygons(rows: usize, cols: usize) -> Vec<Vec<usize>> {
    let v = |r: usize, c: usize| (r % rows) * cols + (c % cols);
    let mut polys = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            polys.push(vec![v(r, c), v(r, c + 1), v(r + 1, c + 1), v(r + 1, c)]);
        }
    }
    polys
}

/// Side `(axis, high)` of a square plus its lower corner on that side.
type SquareTag = (usize, bool, usize, usize);

/// Unit squares on the surface of `[0,n]^3`, oriented outward. Returns the
/// polygons together with, for each polygon, its side `(axis, high)` and
/// lower corner in the side's own coordinates.
fn refined_cube_polygons(n: usize) -> (Vec<Vec<usize>>, Vec<SquareTag>) {
    let mut ids: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    let mut polys = Vec::new();
    let mut tags = Vec::new();
    for axis in 0..3 {
        let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
        for high in [false, true] {
            for i in 0..n {
                for j in 0..n {
                    let mut poly: Vec<usize> = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
                        .iter()
                        .map(|&(pb, pc)| {
                            let mut p = [0; 3];
                            p[axis] = if high { n } else { 0 };
                            p[b] = pb;
                            p[c] = pc;
                            let next = ids.len();
                            *ids.entry(p).or_insert(next)
                        })
                        .collect();
                    if !high {
                        poly.reverse();
                    }
                    polys.push(poly);
                    tags.push((axis, high, i, j));
                }
            }
        }
    }
    (polys, tags)
}

fn refined_cube(name: String, n: usize) -> Result<Surface, SurfaceError> {
    Surface::from_polygons(name, &refined_cube_polygons(n).0)
}

/// The refined cube with `n = 2` and a six-face disk on it: the four squares
/// of the top side (`z = 2`) plus the two squares of the `x = 2` side that
/// touch the top. Returns the surface, the disk faces, and a base face.
pub fn refined_cube_disk() -> (Surface, Vec<FaceId>) {
    let (polys, tags) = refined_cube_polygons(2);
    let surface = Surface::from_polygons(Canonical::RefinedCube { n: 2 }.to_string(), &polys)
        .expect("refined cube is valid");
    let mut disk: Vec<FaceId> = tags
        .iter()
        .enumerate()
        .filter(|(_, &(axis, high, _, j))| high && (axis == 2 || (axis == 0 && j == 1)))
        .map(|(f, _)| f)
        .collect();
    disk.sort_unstable();
    (surface, disk)
}
