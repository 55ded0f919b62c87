//! Corners, contours and the transformations between contours on Z^2.
//!
//! The contour of P at a corner c is the set of cells x of P whose
//! translate xc⁻¹S does not fit in P. All contours of a pattern have the
//! same size and lie in one solitaire orbit; `sweep_swap` and
//! `parallel_edge_exchange` build the connecting traces.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::group::{div, mul, Elem};
use crate::hull::{convex_hull, HalfPlanes};
use crate::fill::is_filling_closed;
use crate::moves::{apply_move, candidate_translates, MoveRecord, MoveTrace};
use crate::pattern::{Pattern, Shape};

/// Order on Z^2 by a cascade of dot products. Ties left after all stages
/// fall back to (x, y) lexicographic, itself two more stages, so the order
/// is total and translation invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiInvariantOrder {
    pub stages: Vec<(i64, i64)>,
}

impl Default for BiInvariantOrder {
    fn default() -> Self {
        BiInvariantOrder { stages: vec![(1, 0), (0, 1)] }
    }
}

impl BiInvariantOrder {
    pub fn new(stages: Vec<(i64, i64)>) -> BiInvariantOrder {
        BiInvariantOrder { stages }
    }

    pub fn cmp(&self, a: (i64, i64), b: (i64, i64)) -> Ordering {
        for &(u, v) in &self.stages {
            match (u * a.0 + v * a.1).cmp(&(u * b.0 + v * b.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        a.cmp(&b)
    }

    pub fn min_of(&self, pts: &[(i64, i64)]) -> Option<(i64, i64)> {
        pts.iter().copied().min_by(|a, b| self.cmp(*a, *b))
    }

    pub fn max_of(&self, pts: &[(i64, i64)]) -> Option<(i64, i64)> {
        pts.iter().copied().max_by(|a, b| self.cmp(*a, *b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contour {
    pub cells: Pattern,
    pub corner: Elem,
}

fn xy_of(e: &Elem) -> Result<(i64, i64), CoreError> {
    e.as_xy().ok_or_else(|| CoreError::Contract(format!("{e} is not a point of Z^2")))
}

fn shape_xy(shape: &Shape) -> Result<Vec<(i64, i64)>, CoreError> {
    shape.s().iter().map(xy_of).collect()
}

/// Corners are the vertices of the convex hull of S: each is the maximum of
/// S for some order whose first stage points outwards there.
pub fn corners(s: &[Elem]) -> Result<Vec<Elem>, CoreError> {
    if s.is_empty() {
        return Err(CoreError::Contract("corners of an empty set".into()));
    }
    let pts: Vec<(i64, i64)> = s.iter().map(xy_of).collect::<Result<_, _>>()?;
    let mut out: Vec<Elem> = convex_hull(&pts).into_iter().map(|(x, y)| Elem::xy(x, y)).collect();
    out.sort();
    Ok(out)
}

fn check_corner(shape: &Shape, c: &Elem) -> Result<(), CoreError> {
    if !corners(shape.s())?.contains(c) {
        return Err(CoreError::Contract(format!("{c} is not a corner of S")));
    }
    Ok(())
}

fn fits(shape: &Shape, p: &Pattern, g: &Elem) -> bool {
    shape.s().iter().all(|s| p.contains(&mul(g, s)))
}

/// Translates g with gS ⊆ P.
fn full_translates(shape: &Shape, p: &Pattern) -> Vec<(i64, i64)> {
    candidate_translates(shape, p)
        .into_iter()
        .filter(|g| fits(shape, p, g))
        .map(|g| g.as_xy().unwrap())
        .collect()
}

pub fn contour(shape: &Shape, p: &Pattern, c: &Elem) -> Result<Contour, CoreError> {
    check_corner(shape, c)?;
    let cells = p.iter().filter(|x| !fits(shape, p, &div(x, c))).cloned().collect();
    Ok(Contour { cells, corner: c.clone() })
}

fn need_in_c(shape: &Shape, cs: &[(i64, i64)]) -> Result<(), CoreError> {
    for &(x, y) in cs {
        if !shape.in_c(&Elem::xy(x, y)) {
            return Err(CoreError::Contract(format!("corner ({x},{y}) must be in C")));
        }
    }
    Ok(())
}

fn need_closed(shape: &Shape, p: &Pattern) -> Result<(), CoreError> {
    if !is_filling_closed(shape, p) {
        return Err(CoreError::Contract("pattern must be filling-closed".into()));
    }
    Ok(())
}

fn run(shape: &Shape, start: Pattern, moves: Vec<MoveRecord>, target: &Pattern) -> Result<MoveTrace, CoreError> {
    let mut cur = start;
    for m in &moves {
        cur = apply_move(shape, &cur, m).map_err(|e| CoreError::Internal(format!("contour trace broke: {e}")))?;
    }
    if !target.is_subset(&cur) {
        return Err(CoreError::Internal("contour trace missed its target".into()));
    }
    Ok(moves)
}

/// Takes the contour at `c_min` to the contour at `c_max`, where the order
/// makes them the least and greatest elements of S. Full translates are
/// visited from the greatest down; at each, the marble at g·c_max jumps to
/// g·c_min.
pub fn sweep_swap(
    shape: &Shape,
    p: &Pattern,
    c_min: &Elem,
    c_max: &Elem,
    order: &BiInvariantOrder,
) -> Result<MoveTrace, CoreError> {
    let s = shape_xy(shape)?;
    let (lo, hi) = (xy_of(c_min)?, xy_of(c_max)?);
    if order.min_of(&s) != Some(lo) || order.max_of(&s) != Some(hi) || lo == hi {
        return Err(CoreError::Contract("not sweep swappable under this order".into()));
    }
    need_in_c(shape, &[lo, hi])?;
    need_closed(shape, p)?;
    let mut gs = full_translates(shape, p);
    gs.sort_by(|a, b| order.cmp(*b, *a));
    let moves = gs
        .into_iter()
        .map(|g| MoveRecord::xy(g, (g.0 + hi.0, g.1 + hi.1), (g.0 + lo.0, g.1 + lo.1)))
        .collect();
    let start = contour(shape, p, c_min)?.cells;
    let target = contour(shape, p, c_max)?.cells;
    run(shape, start, moves, &target)
}

fn primitive(v: (i64, i64)) -> (i64, i64) {
    let g = gcd(v.0, v.1).max(1);
    (v.0 / g, v.1 / g)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Edges [c, b] and [c', b'] of conv(S) with b - c and b' - c' pointing the
/// same way: then c and c' sit on the same side of the two parallel edges.
fn parallel_partners(s: &[(i64, i64)], c: (i64, i64), c2: (i64, i64)) -> Option<((i64, i64), (i64, i64))> {
    let h = convex_hull(s);
    let k = h.len();
    if k < 3 {
        return None;
    }
    let nbrs = |x: (i64, i64)| -> Vec<(i64, i64)> {
        let i = h.iter().position(|&y| y == x).unwrap();
        vec![h[(i + 1) % k], h[(i + k - 1) % k]]
    };
    for b in nbrs(c) {
        for b2 in nbrs(c2) {
            if b != c2 && b2 != c && primitive((b.0 - c.0, b.1 - c.1)) == primitive((b2.0 - c2.0, b2.1 - c2.1)) {
                return Some((b, b2));
            }
        }
    }
    None
}

/// Takes the contour at `c` to the contour at `c2` when they are ends of two
/// parallel edges on the same side. Full translates are grouped into lines
/// along the edges, starting with the line farthest towards c2. On each
/// line the marble at g·b' jumps to g·c walking from the b' end, then the
/// marble at g·c' jumps to g·b' walking back.
pub fn parallel_edge_exchange(shape: &Shape, p: &Pattern, c: &Elem, c2: &Elem) -> Result<MoveTrace, CoreError> {
    let s = shape_xy(shape)?;
    check_corner(shape, c)?;
    check_corner(shape, c2)?;
    let (c, c2) = (xy_of(c)?, xy_of(c2)?);
    let Some((b, b2)) = parallel_partners(&s, c, c2) else {
        return Err(CoreError::Contract("corners are not ends of parallel edges on the same side".into()));
    };
    need_in_c(shape, &[c, b, c2, b2])?;
    need_closed(shape, p)?;
    let d = primitive((b.0 - c.0, b.1 - c.1));
    let mut n = (-d.1, d.0);
    if n.0 * (c2.0 - c.0) + n.1 * (c2.1 - c.1) < 0 {
        n = (-n.0, -n.1);
    }
    let mut gs = full_translates(shape, p);
    gs.sort_by_key(|g| (-(n.0 * g.0 + n.1 * g.1), d.0 * g.0 + d.1 * g.1));
    let mut moves = Vec::new();
    let at = |g: (i64, i64), o: (i64, i64)| (g.0 + o.0, g.1 + o.1);
    for line in gs.chunk_by(|a, b| n.0 * a.0 + n.1 * a.1 == n.0 * b.0 + n.1 * b.1) {
        for &g in line.iter().rev() {
            moves.push(MoveRecord::xy(g, at(g, b2), at(g, c)));
        }
        for &g in line {
            moves.push(MoveRecord::xy(g, at(g, c2), at(g, b2)));
        }
    }
    let start = contour(shape, p, &Elem::xy(c.0, c.1))?.cells;
    let target = contour(shape, p, &Elem::xy(c2.0, c2.1))?.cells;
    run(shape, start, moves, &target)
}

/// H_S(P): lattice points of the smallest polygon with the edge directions
/// of S containing P. Contains φ(P).
pub fn s_hull(shape: &Shape, p: &Pattern) -> Result<Pattern, CoreError> {
    let s = shape_xy(shape)?;
    let pts: Vec<(i64, i64)> = p.iter().map(xy_of).collect::<Result<_, _>>()?;
    let h = HalfPlanes::slid_to(&s, &pts);
    if h.planes.is_empty() {
        return Err(CoreError::Contract("S-hull needs S spanning the plane".into()));
    }
    Ok(Pattern::from_xy(h.lattice_points(&pts)))
}
