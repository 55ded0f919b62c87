//! Square solitaire on Z^2 with S = C = {0,1}^2.
//!
//! Closures are unions of rectangles no two of which share an edge. A
//! rectangle is filled by any cross (one full row plus one full column), and
//! an orbit is named by its rectangles and the number of marbles in each.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::lattice::{add, sub, Affine, Board, Owner, Pt};
use crate::moves::MoveTrace;
use crate::pattern::Pattern;

const SIDES: [Pt; 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// v + [0,w) x [0,h).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub v: Pt,
    pub w: i64,
    pub h: i64,
}

impl Rect {
    pub fn contains(&self, p: Pt) -> bool {
        let (x, y) = sub(p, self.v);
        (0..self.w).contains(&x) && (0..self.h).contains(&y)
    }

    pub fn cells(&self) -> Vec<Pt> {
        let mut out = Vec::new();
        for y in 0..self.h {
            for x in 0..self.w {
                out.push(add(self.v, (x, y)));
            }
        }
        out
    }

    /// Outside cells sharing an edge with the rectangle.
    pub fn beside(&self, p: Pt) -> bool {
        !self.contains(p) && SIDES.iter().any(|&d| self.contains(add(p, d)))
    }

    /// Overlap or a shared edge: the closure of the union is one rectangle.
    pub fn meets(&self, o: &Rect) -> bool {
        self.cells().into_iter().any(|c| o.contains(c) || o.beside(c))
    }
}

/// The 2x2 block containing both cells whose other two cells satisfy
/// `present`; returns its corner.
pub fn block_for(a: Pt, b: Pt, present: impl Fn(Pt) -> bool) -> Option<Pt> {
    if a == b || (a.0 - b.0).abs() > 1 || (a.1 - b.1).abs() > 1 {
        return None;
    }
    let xs: Vec<i64> = if a.0 != b.0 { vec![a.0.min(b.0)] } else { vec![a.0 - 1, a.0] };
    let ys: Vec<i64> = if a.1 != b.1 { vec![a.1.min(b.1)] } else { vec![a.1 - 1, a.1] };
    for &gx in &xs {
        for &gy in &ys {
            let blk = [(gx, gy), (gx + 1, gy), (gx, gy + 1), (gx + 1, gy + 1)];
            if blk.iter().filter(|&&c| c != a && c != b).all(|&c| present(c)) {
                return Some((gx, gy));
            }
        }
    }
    None
}

/// A cell is a neighbour of a pattern when two edge-adjacent pattern cells
/// lie among its eight surrounding cells, which is exactly when a filling
/// move could add it.
pub fn is_neighbour(p: &HashSet<Pt>, x: Pt) -> bool {
    if p.contains(&x) {
        return false;
    }
    for gx in [x.0 - 1, x.0] {
        for gy in [x.1 - 1, x.1] {
            let blk = [(gx, gy), (gx + 1, gy), (gx, gy + 1), (gx + 1, gy + 1)];
            if blk.iter().filter(|c| **c != x && p.contains(c)).count() >= 2 {
                return true;
            }
        }
    }
    false
}

pub fn closure(p: &[Pt]) -> HashSet<Pt> {
    let mut set: HashSet<Pt> = p.iter().copied().collect();
    let mut work: Vec<Pt> = p.to_vec();
    while let Some(c) = work.pop() {
        for gx in [c.0 - 1, c.0] {
            for gy in [c.1 - 1, c.1] {
                let blk = [(gx, gy), (gx + 1, gy), (gx, gy + 1), (gx + 1, gy + 1)];
                let missing: Vec<Pt> = blk.iter().copied().filter(|x| !set.contains(x)).collect();
                if missing.len() == 1 {
                    set.insert(missing[0]);
                    work.push(missing[0]);
                }
            }
        }
    }
    set
}

fn rects_of(closed: &HashSet<Pt>) -> Result<Vec<Rect>, CoreError> {
    let mut seen: HashSet<Pt> = HashSet::new();
    let mut out = Vec::new();
    let mut cells: Vec<Pt> = closed.iter().copied().collect();
    cells.sort();
    for &c in &cells {
        if !seen.insert(c) {
            continue;
        }
        let mut comp = vec![c];
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for d in SIDES {
                let y = add(x, d);
                if closed.contains(&y) && seen.insert(y) {
                    comp.push(y);
                }
            }
        }
        let x0 = comp.iter().map(|p| p.0).min().unwrap();
        let x1 = comp.iter().map(|p| p.0).max().unwrap();
        let y0 = comp.iter().map(|p| p.1).min().unwrap();
        let y1 = comp.iter().map(|p| p.1).max().unwrap();
        let r = Rect { v: (x0, y0), w: x1 - x0 + 1, h: y1 - y0 + 1 };
        if (r.w * r.h) as usize != comp.len() {
            return Err(CoreError::Internal(format!("closed component at {:?} is not a rectangle", r.v)));
        }
        out.push(r);
    }
    out.sort();
    Ok(out)
}

fn planar(p: &Pattern) -> Result<Vec<Pt>, CoreError> {
    p.iter()
        .map(|e| e.as_xy().ok_or_else(|| CoreError::Contract(format!("{e} is not a point of Z^2"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RectComponent {
    pub v: [i64; 2],
    pub w: i64,
    pub h: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectDecomposition {
    pub components: Vec<RectComponent>,
}

pub fn rect_decomposition(p: &Pattern) -> Result<RectDecomposition, CoreError> {
    let rects = rects_of(&closure(&planar(p)?))?;
    Ok(RectDecomposition { components: rects.iter().map(|r| RectComponent { v: [r.v.0, r.v.1], w: r.w, h: r.h }).collect() })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LComponent {
    pub v: [i64; 2],
    pub a: i64,
    pub b: i64,
    pub k: i64,
}

/// ⋃ v_i + L_{a_i, b_i, k_i}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareNormalForm {
    pub components: Vec<LComponent>,
}

/// L_{a,b,k}: bottom row of length a, left column of height b, and k cells
/// of the interior filled left to right, bottom to top.
pub fn l_abk(a: i64, b: i64, k: i64) -> Vec<Pt> {
    let mut out: Vec<Pt> = (0..a).map(|x| (x, 0)).chain((1..b).map(|y| (0, y))).collect();
    let mut left = k;
    'rows: for y in 1..b {
        for x in 1..a {
            if left == 0 {
                break 'rows;
            }
            out.push((x, y));
            left -= 1;
        }
    }
    out
}

impl SquareNormalForm {
    pub fn pattern(&self) -> Pattern {
        Pattern::from_xy(
            self.components
                .iter()
                .flat_map(|c| l_abk(c.a, c.b, c.k).into_iter().map(move |p| add(p, (c.v[0], c.v[1])))),
        )
    }
}

pub fn square_identify_orbit(p: &Pattern) -> Result<SquareNormalForm, CoreError> {
    let pts = planar(p)?;
    let rects = rects_of(&closure(&pts))?;
    let components = rects
        .iter()
        .map(|r| {
            let inside = pts.iter().filter(|&&q| r.contains(q)).count() as i64;
            LComponent { v: [r.v.0, r.v.1], a: r.w, b: r.h, k: inside - (r.w + r.h - 1) }
        })
        .collect();
    Ok(SquareNormalForm { components })
}

/// Whether P is in the orbit of a cross: one rectangle, no excess.
pub fn cross_orbit_member(p: &Pattern) -> Result<bool, CoreError> {
    let nf = square_identify_orbit(p)?;
    Ok(nf.components.len() == 1 && nf.components[0].k == 0)
}

// ---------------------------------------------------------------------------
// Constructive paths.

type Local = HashSet<Pt>;
type Moves = Vec<(Pt, Pt)>;

fn local_move(r: &mut Local, f: Pt, t: Pt, out: &mut Moves) -> Result<(), CoreError> {
    let ok = r.contains(&f) && !r.contains(&t) && block_for(f, t, |c| r.contains(&c)).is_some();
    if !ok {
        return Err(CoreError::Internal(format!("local move {f:?} -> {t:?} is illegal")));
    }
    r.remove(&f);
    r.insert(t);
    out.push((f, t));
    Ok(())
}

fn pretend(r: &mut Local, moves: &[(Pt, Pt)], out: &mut Moves) -> Result<(), CoreError> {
    for &(f, t) in moves {
        if !r.contains(&t) {
            local_move(r, f, t, out)?;
        }
    }
    Ok(())
}

fn rev(m: &[(Pt, Pt)]) -> Moves {
    m.iter().rev().map(|&(a, b)| (b, a)).collect()
}

/// Moves the part of a vertical line at column c above the row at height
/// `row` (up to `top`) one column left. One marble climbs the free column,
/// the top marble steps over, and the rest slide down diagonally.
fn column_left_upper(c: i64, row: i64, top: i64) -> Moves {
    let u = top - row;
    let mut m = Vec::new();
    if u <= 0 {
        return m;
    }
    if u == 1 {
        m.push(((c, row + 1), (c - 1, row + 1)));
        return m;
    }
    for y in row..top - 1 {
        m.push(((c - 1, y), (c - 1, y + 1)));
    }
    m.push(((c, top), (c - 1, top)));
    for y in (row + 1..top).rev() {
        m.push(((c, y), (c - 1, y - 1)));
    }
    m
}

/// The cross with its row at `row` and its column at `c` over rows 0..h:
/// moves the column to c - 1. The lower half is the upper half mirrored.
fn column_left(c: i64, row: i64, h: i64) -> Moves {
    let mut m = column_left_upper(c, row, h - 1);
    let mirror = |p: Pt| (p.0, 2 * row - p.1);
    m.extend(column_left_upper(c, row, 2 * row).into_iter().map(|(a, b)| (mirror(a), mirror(b))));
    m
}

fn column_moves(from: i64, to: i64, row: i64, h: i64) -> Moves {
    let mut m = Vec::new();
    if to < from {
        for c in (to + 1..=from).rev() {
            m.extend(column_left(c, row, h));
        }
    } else {
        for c in from..to {
            m.extend(rev(&column_left(c + 1, row, h)));
        }
    }
    m
}

const TRANSPOSE: Affine = Affine { a: [[0, 1], [1, 0]], t: (0, 0) };

fn in_frame(
    r: &mut Local,
    frame: Affine,
    out: &mut Moves,
    op: impl FnOnce(&mut Local, &mut Moves) -> Result<(), CoreError>,
) -> Result<(), CoreError> {
    let inv = frame.inverse();
    let mut loc: Local = r.iter().map(|&p| inv.apply(p)).collect();
    let mut o = Vec::new();
    op(&mut loc, &mut o)?;
    out.extend(o.iter().map(|&(a, b)| (frame.apply(a), frame.apply(b))));
    *r = loc.iter().map(|&p| frame.apply(p)).collect();
    Ok(())
}

/// The cross of a w x h rectangle at the origin, as (row height, column).
#[derive(Clone, Copy, Debug)]
struct Cross {
    row: i64,
    col: i64,
}

fn move_column(r: &mut Local, x: Cross, h: i64, to: i64, out: &mut Moves) -> Result<(), CoreError> {
    pretend(r, &column_moves(x.col, to, x.row, h), out)
}

fn move_row(r: &mut Local, x: Cross, w: i64, to: i64, out: &mut Moves) -> Result<(), CoreError> {
    in_frame(r, TRANSPOSE, out, |t, o| pretend(t, &column_moves(x.row, to, x.col, w), o))
}

/// With the column at x0 (rows b..=top) and the row at b, carries the column
/// right to the last column, letting marbles left of it fall onto row b+1,
/// then carries it back.
fn drop_down(r: &mut Local, x0: i64, b: i64, a: i64, top: i64, out: &mut Moves) -> Result<(), CoreError> {
    for c in x0..x0 + a - 1 {
        pretend(r, &rev(&column_left_upper(c + 1, b, top)), out)?;
        for y in b + 2..=top {
            if !r.contains(&(c, y)) {
                continue;
            }
            let mut yy = y;
            while yy > b + 1 && !r.contains(&(c, yy - 1)) {
                local_move(r, (c, yy), (c, yy - 1), out)?;
                yy -= 1;
            }
        }
    }
    for c in (x0 + 1..x0 + a).rev() {
        pretend(r, &column_left_upper(c, b, top), out)?;
    }
    Ok(())
}

/// Gathers the interior excess of an L-shaped cross (row 0, column 0) of an
/// a x b rectangle into L_{a,b,k}: gravity down and left, then either accept
/// a full row, stop, or slide the partial row right so that higher marbles
/// fall into it.
fn gather_excess(r: &mut Local, a: i64, b: i64, out: &mut Moves) -> Result<(), CoreError> {
    let mut base = 0;
    let mut guard = 0;
    while base < b - 1 {
        drop_down(r, 0, base, a, b - 1, out)?;
        // the same in the transposed frame around the corner (0, base)
        let f = Affine { a: [[0, 1], [1, 0]], t: (-base, base) };
        in_frame(r, f, out, |t, o| drop_down(t, 0, base, b - base, base + a - 1, o))?;
        let row = base + 1;
        let filled = (1..a).filter(|&x| r.contains(&(x, row))).count() as i64;
        if filled == a - 1 {
            base += 1;
            continue;
        }
        if !r.iter().any(|p| p.1 > row && p.0 > 0) {
            break;
        }
        let mut xs: Vec<i64> = (1..a).filter(|&x| r.contains(&(x, row))).collect();
        xs.reverse();
        let mut end = a - 1;
        for mut x in xs {
            while x < end && !r.contains(&(x + 1, row)) {
                local_move(r, (x, row), (x + 1, row), out)?;
                x += 1;
            }
            end = x - 1;
        }
        guard += 1;
        if guard > 4 * a * b + 16 {
            return Err(CoreError::Internal("excess gathering did not settle".into()));
        }
    }
    Ok(())
}

fn board_legal(f: Pt, t: Pt, cells: &HashMap<Pt, Owner>) -> Option<Pt> {
    block_for(f, t, |c| cells.contains_key(&c))
}

#[derive(Clone, Copy, Debug)]
struct Comp {
    rect: Rect,
    cross: Cross,
}

fn run_on(
    board: &mut Board,
    cid: usize,
    v: Pt,
    op: impl FnOnce(&mut Local, &mut Moves) -> Result<(), CoreError>,
) -> Result<(), CoreError> {
    let mut loc: Local = board.owned_by(cid).into_iter().map(|p| sub(p, v)).collect();
    let mut o = Vec::new();
    op(&mut loc, &mut o)?;
    for (a, b) in o {
        board.play(cid, add(a, v), add(b, v))?;
    }
    Ok(())
}

fn set_row(board: &mut Board, comps: &mut [Option<Comp>], cid: usize, to: i64) -> Result<(), CoreError> {
    let c = comps[cid].unwrap();
    run_on(board, cid, c.rect.v, |r, o| move_row(r, c.cross, c.rect.w, to, o))?;
    comps[cid].as_mut().unwrap().cross.row = to;
    Ok(())
}

fn set_col(board: &mut Board, comps: &mut [Option<Comp>], cid: usize, to: i64) -> Result<(), CoreError> {
    let c = comps[cid].unwrap();
    run_on(board, cid, c.rect.v, |r, o| move_column(r, c.cross, c.rect.h, to, o))?;
    comps[cid].as_mut().unwrap().cross.col = to;
    Ok(())
}

/// Adds a pending marble sharing an edge with the rectangle: line the cross
/// up with it so that it extends the row or the column.
fn extend(board: &mut Board, comps: &mut [Option<Comp>], cid: usize, x: Pt) -> Result<(), CoreError> {
    let c = comps[cid].unwrap();
    let r = sub(x, c.rect.v);
    let (w, h) = (c.rect.w, c.rect.h);
    if r.0 == w || r.0 == -1 {
        set_row(board, comps, cid, r.1)?;
    } else {
        set_col(board, comps, cid, r.0)?;
    }
    board.set_owner(x, Owner::Comp(cid));
    let c = comps[cid].as_mut().unwrap();
    match r {
        (x, _) if x == w => c.rect.w += 1,
        (-1, _) => {
            c.rect.w += 1;
            c.rect.v.0 -= 1;
            c.cross.col += 1;
        }
        (_, y) if y == h => c.rect.h += 1,
        _ => {
            c.rect.h += 1;
            c.rect.v.1 -= 1;
            c.cross.row += 1;
        }
    }
    Ok(())
}

fn dissolve(board: &mut Board, comps: &mut [Option<Comp>], x: usize, y: usize) -> Result<(), CoreError> {
    let cx = comps[x].unwrap();
    let ry = comps[y].unwrap().rect;
    let b = cx
        .rect
        .cells()
        .into_iter()
        .find(|&c| ry.beside(c))
        .ok_or_else(|| CoreError::Internal("dissolved rectangle does not face its partner".into()))?;
    set_row(board, comps, x, b.1 - cx.rect.v.1)?;
    for p in board.owned_by(x) {
        board.set_owner(p, Owner::Pending);
    }
    comps[x] = None;
    Ok(())
}

/// A legal trace from P to the pattern of its normal form.
///
/// Marbles are inserted one at a time. Each component is a rectangle whose
/// marbles contain a cross; a marble beside the rectangle is absorbed by
/// moving the cross's row or column onto it, and when two rectangles come
/// to share an edge the smaller one is released and re-inserted. Finally
/// each cross is moved to the bottom-left L and the excess is gathered.
pub fn square_canonical_path(p: &Pattern) -> Result<MoveTrace, CoreError> {
    let pts = planar(p)?;
    let nf = square_identify_orbit(p)?;
    if nf.pattern() == *p {
        return Ok(Vec::new());
    }
    let rects = rects_of(&closure(&pts))?;
    let legal = board_legal;
    let mut board = Board::new(pts.iter().copied(), &legal);
    let mut comps: Vec<Option<Comp>> = Vec::new();
    build_components(&mut board, &mut comps, pts.len())?;
    let mut got: Vec<Rect> = comps.iter().flatten().map(|c| c.rect).collect();
    got.sort();
    if got != rects {
        return Err(CoreError::Internal("component building ended away from the rectangle decomposition".into()));
    }
    for cid in 0..comps.len() {
        if comps[cid].is_none() {
            continue;
        }
        set_col(&mut board, &mut comps, cid, 0)?;
        set_row(&mut board, &mut comps, cid, 0)?;
        let rect = comps[cid].unwrap().rect;
        run_on(&mut board, cid, rect.v, |r, o| gather_excess(r, rect.w, rect.h, o))?;
    }
    Ok(board.trace())
}

fn build_components(board: &mut Board, comps: &mut Vec<Option<Comp>>, size: usize) -> Result<(), CoreError> {
    let cap = 64 * size * size + 64;
    for _ in 0..cap {
        let alive: Vec<usize> = (0..comps.len()).filter(|&i| comps[i].is_some()).collect();
        let mut pair = None;
        'outer: for (a, &i) in alive.iter().enumerate() {
            for &j in &alive[a + 1..] {
                if comps[i].unwrap().rect.meets(&comps[j].unwrap().rect) {
                    pair = Some((i, j));
                    break 'outer;
                }
            }
        }
        if let Some((i, j)) = pair {
            let (ri, rj) = (comps[i].unwrap().rect, comps[j].unwrap().rect);
            let (x, y) = if ri.w * ri.h <= rj.w * rj.h { (i, j) } else { (j, i) };
            dissolve(board, comps, x, y)?;
            continue;
        }
        let pending = board.pending();
        if pending.is_empty() {
            return Ok(());
        }
        let rect = |c: usize| comps[c].unwrap().rect;
        if let Some((&p, cid)) =
            pending.iter().find_map(|q| alive.iter().find(|&&c| rect(c).contains(*q)).map(|&c| (q, c)))
        {
            board.set_owner(p, Owner::Comp(cid));
            continue;
        }
        if let Some((&p, cid)) =
            pending.iter().find_map(|q| alive.iter().find(|&&c| rect(c).beside(*q)).map(|&c| (q, c)))
        {
            extend(board, comps, cid, p)?;
            continue;
        }
        let p = pending[0];
        comps.push(Some(Comp { rect: Rect { v: p, w: 1, h: 1 }, cross: Cross { row: 0, col: 0 } }));
        board.set_owner(p, Owner::Comp(comps.len() - 1));
    }
    Err(CoreError::Internal("component building did not terminate".into()))
}
