//! Triangle solitaire on Z^2 with S = C = {(0,0), (1,0), (0,1)}.
//!
//! The closure of any pattern is a union of pairwise non-touching
//! triangles v + T_n. Two patterns are in the same orbit iff they have the
//! same triangles and the same number of marbles in each, so the orbit is
//! named by the list (v, n, k) with k = marbles beyond n.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::lattice::{add, sub, Affine, Board, Owner, Pt};
use crate::moves::MoveTrace;
use crate::pattern::Pattern;

/// Cells x + d adjacent to x in the triangular lattice.
pub const NEIGHBOURS: [Pt; 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// v + T_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tri {
    pub v: Pt,
    pub n: i64,
}

impl Tri {
    pub fn contains(&self, p: Pt) -> bool {
        let (x, y) = sub(p, self.v);
        x >= 0 && y >= 0 && x + y < self.n
    }

    pub fn cells(&self) -> Vec<Pt> {
        let mut v = Vec::new();
        for y in 0..self.n {
            for x in 0..self.n - y {
                v.push(add(self.v, (x, y)));
            }
        }
        v
    }

    /// Outside cells adjacent to the triangle.
    pub fn touches_cell(&self, p: Pt) -> bool {
        !self.contains(p) && NEIGHBOURS.iter().any(|&d| self.contains(add(p, d)))
    }

    /// Whether the two triangles overlap or have adjacent cells.
    pub fn meets(&self, other: &Tri) -> bool {
        self.cells().into_iter().any(|c| other.contains(c) || other.touches_cell(c))
    }
}

pub fn t_n(n: i64) -> Vec<Pt> {
    Tri { v: (0, 0), n }.cells()
}

/// The up-triangle containing two adjacent cells: (translate, third cell).
pub fn third(a: Pt, b: Pt) -> Option<(Pt, Pt)> {
    for g in [a, (a.0 - 1, a.1), (a.0, a.1 - 1)] {
        let s = [g, (g.0 + 1, g.1), (g.0, g.1 + 1)];
        if s.contains(&a) && s.contains(&b) && a != b {
            let t = *s.iter().find(|&&c| c != a && c != b).unwrap();
            return Some((g, t));
        }
    }
    None
}

/// Triangle closure of a planar set.
pub fn closure(p: &[Pt]) -> HashSet<Pt> {
    let mut set: HashSet<Pt> = p.iter().copied().collect();
    let mut work: Vec<Pt> = p.to_vec();
    while let Some(c) = work.pop() {
        for g in [c, (c.0 - 1, c.1), (c.0, c.1 - 1)] {
            let s = [g, (g.0 + 1, g.1), (g.0, g.1 + 1)];
            let missing: Vec<Pt> = s.iter().copied().filter(|x| !set.contains(x)).collect();
            if missing.len() == 1 {
                set.insert(missing[0]);
                work.push(missing[0]);
            }
        }
    }
    set
}

/// Splits a filling-closed set into its triangles, sorted by anchor.
fn triangles_of(closed: &HashSet<Pt>) -> Result<Vec<Tri>, CoreError> {
    let mut seen: HashSet<Pt> = HashSet::new();
    let mut out = Vec::new();
    let mut cells: Vec<Pt> = closed.iter().copied().collect();
    cells.sort();
    for &c in &cells {
        if seen.contains(&c) {
            continue;
        }
        let mut comp = vec![c];
        seen.insert(c);
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for d in NEIGHBOURS {
                let y = add(x, d);
                if closed.contains(&y) && seen.insert(y) {
                    comp.push(y);
                }
            }
        }
        let x0 = comp.iter().map(|p| p.0).min().unwrap();
        let y0 = comp.iter().map(|p| p.1).min().unwrap();
        let s = comp.iter().map(|p| p.0 + p.1).max().unwrap();
        let t = Tri { v: (x0, y0), n: s - x0 - y0 + 1 };
        if (t.n * (t.n + 1) / 2) as usize != comp.len() || comp.iter().any(|&p| !t.contains(p)) {
            return Err(CoreError::Internal(format!("closed component at {:?} is not a triangle", t.v)));
        }
        out.push(t);
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FillComponent {
    pub v: [i64; 2],
    pub k: i64,
}

/// φ(P) as a union of triangles v + T_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FillDecomposition {
    pub components: Vec<FillComponent>,
}

fn planar(p: &Pattern) -> Result<Vec<Pt>, CoreError> {
    p.iter()
        .map(|e| e.as_xy().ok_or_else(|| CoreError::Contract(format!("{e} is not a point of Z^2"))))
        .collect()
}

fn decompose(pts: &[Pt]) -> Result<Vec<Tri>, CoreError> {
    triangles_of(&closure(pts))
}

pub fn fill_decomposition(p: &Pattern) -> Result<FillDecomposition, CoreError> {
    let tris = decompose(&planar(p)?)?;
    Ok(FillDecomposition { components: tris.iter().map(|t| FillComponent { v: [t.v.0, t.v.1], k: t.n }).collect() })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalComponent {
    pub v: [i64; 2],
    pub n: i64,
    pub k: i64,
}

/// ⋃ v_i + P_{n_i, k_i}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriangleNormalForm {
    pub components: Vec<NormalComponent>,
}

/// P_{n,k}: the bottom line of T_n plus k cells filling row 1 from the
/// left, then row 2, and so on.
pub fn p_nk(n: i64, k: i64) -> Vec<Pt> {
    let mut out: Vec<Pt> = (0..n).map(|x| (x, 0)).collect();
    let mut left = k;
    let mut y = 1;
    while left > 0 && y < n {
        for x in 0..n - y {
            if left == 0 {
                break;
            }
            out.push((x, y));
            left -= 1;
        }
        y += 1;
    }
    out
}

impl TriangleNormalForm {
    pub fn pattern(&self) -> Pattern {
        Pattern::from_xy(
            self.components.iter().flat_map(|c| p_nk(c.n, c.k).into_iter().map(move |p| add(p, (c.v[0], c.v[1])))),
        )
    }

    /// Total excess, the sum of the k_i.
    pub fn excess(&self) -> i64 {
        self.components.iter().map(|c| c.k).sum()
    }
}

pub fn identify_orbit(p: &Pattern) -> Result<TriangleNormalForm, CoreError> {
    let pts = planar(p)?;
    let tris = decompose(&pts)?;
    let components = tris
        .iter()
        .map(|t| {
            let inside = pts.iter().filter(|&&q| t.contains(q)).count() as i64;
            NormalComponent { v: [t.v.0, t.v.1], n: t.n, k: inside - t.n }
        })
        .collect();
    Ok(TriangleNormalForm { components })
}

/// e(P) = |P| - Σ n_i.
pub fn triangle_excess(p: &Pattern) -> Result<i64, CoreError> {
    Ok(identify_orbit(p)?.excess())
}

/// φ(P) is a single triangle T_{|P|} and P has no excess.
pub fn line_orbit_member(p: &Pattern) -> Result<bool, CoreError> {
    let nf = identify_orbit(p)?;
    Ok(nf.components.len() == 1 && nf.components[0].k == 0 && nf.components[0].n == p.len() as i64)
}

/// Every j right-most columns of T_n hold at most j points.
pub fn a_n_condition(p: &Pattern, n: i64) -> Result<bool, CoreError> {
    let pts = planar(p)?;
    if pts.iter().any(|&q| !Tri { v: (0, 0), n }.contains(q)) {
        return Err(CoreError::Contract("pattern must lie in T_n".into()));
    }
    Ok((1..=n).all(|j| pts.iter().filter(|q| q.0 >= n - j).count() as i64 <= j))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StackKind {
    /// One point per row.
    Horizontal,
    /// One point per column.
    Vertical,
    /// One point per anti-diagonal x + y = d.
    Diagonal,
}

/// All n! stacks of one kind in T_n.
pub fn stacks(n: i64, kind: StackKind) -> Vec<Pattern> {
    // Line i has n - i cells; pick an index on each.
    let mut out = Vec::new();
    let mut choice = vec![0i64; n as usize];
    loop {
        let pts = (0..n).map(|i| {
            let c = choice[i as usize];
            match kind {
                StackKind::Horizontal => (c, i),
                StackKind::Vertical => (i, c),
                StackKind::Diagonal => (c, n - 1 - i - c),
            }
        });
        out.push(Pattern::from_xy(pts));
        let mut i = 0usize;
        loop {
            if i == n as usize {
                return out;
            }
            choice[i] += 1;
            if choice[i] < n - i as i64 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Constructive paths. Local operations act on the marbles of one triangle
// in its own coordinates, where it is T_N at the origin; frames map those
// coordinates to the board.

type Local = HashSet<Pt>;
type Moves = Vec<(Pt, Pt)>;

fn local_move(r: &mut Local, f: Pt, t: Pt, out: &mut Moves) -> Result<(), CoreError> {
    let ok = r.contains(&f) && !r.contains(&t) && third(f, t).is_some_and(|(_, c)| r.contains(&c));
    if !ok {
        return Err(CoreError::Internal(format!("local move {f:?} -> {t:?} is illegal")));
    }
    r.remove(&f);
    r.insert(t);
    out.push((f, t));
    Ok(())
}

/// Replays moves planned for a sub-pattern, skipping those whose target is
/// already occupied.
fn pretend(r: &mut Local, moves: &[(Pt, Pt)], out: &mut Moves) -> Result<(), CoreError> {
    for &(f, t) in moves {
        if r.contains(&t) {
            continue;
        }
        local_move(r, f, t, out)?;
    }
    Ok(())
}

/// Left edge to bottom edge of T_n, column by column.
fn sweep_lb(n: i64) -> Moves {
    let mut m = Vec::new();
    for s in 0..n - 1 {
        for j in (1..n - s).rev() {
            m.push(((s, j), (s + 1, j - 1)));
        }
    }
    m
}

fn rev(m: &[(Pt, Pt)]) -> Moves {
    m.iter().rev().map(|&(a, b)| (b, a)).collect()
}

/// The left-to-bottom sweep that also drops loose marbles of each finished
/// column down onto the marbles below them.
fn gravity_lb(r: &mut Local, n: i64, out: &mut Moves) -> Result<(), CoreError> {
    for s in 0..n - 1 {
        for j in (1..n - s).rev() {
            pretend(r, &[((s, j), (s + 1, j - 1))], out)?;
        }
        for y in 2..n {
            if !r.contains(&(s, y)) {
                continue;
            }
            let mut yy = y;
            while yy >= 2 && !r.contains(&(s, yy - 1)) {
                local_move(r, (s, yy), (s, yy - 1), out)?;
                yy -= 1;
            }
        }
    }
    Ok(())
}

/// Grows T_m (sitting on row 1 of T_{m+1}, its line on row 1) by the point
/// (k, 0) into T_{m+1} with its line on row 0.
fn extend_bottom(r: &mut Local, m: i64, k: i64, out: &mut Moves) -> Result<(), CoreError> {
    for j in k..m {
        local_move(r, (j, 1), (j + 1, 0), out)?;
    }
    for j in (0..k).rev() {
        local_move(r, (j, 1), (j, 0), out)?;
    }
    Ok(())
}

/// Rotation by a third of a turn mapping T_n onto itself: left edge to
/// bottom edge, bottom to hypotenuse.
fn frame_m(n: i64) -> Affine {
    Affine { a: [[-1, -1], [1, 0]], t: (n - 1, 0) }
}

fn frame_t() -> Affine {
    Affine { a: [[0, 1], [1, 0]], t: (0, 0) }
}

/// Runs `op` on a set seen through `frame` (local -> set coordinates).
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

/// Gathers the excess of a superline T_n (line on row 0) into P_{n,k}.
///
/// Works on the sub-triangle above the completed rows: sweeps the line to
/// the left edge and back with gravity in two directions, then either
/// accepts a full row, stops when nothing lies above the first partial row,
/// or slides that row to the right to let higher marbles fall into it.
fn gather_excess(r: &mut Local, n: i64, out: &mut Moves) -> Result<(), CoreError> {
    let mut b = 0;
    let mut size = n;
    let mut guard = 0;
    while size > 1 {
        let shift = Affine::translate((0, b));
        let w = size;
        in_frame(r, shift, out, |loc, o| {
            // Rows below b lie outside the sub-triangle and are left alone.
            let (inside, below): (Local, Local) = loc.iter().partition(|p| p.1 >= 0);
            let mut s = inside;
            pretend(&mut s, &rev(&sweep_lb(w)), o)?;
            gravity_lb(&mut s, w, o)?;
            in_frame(&mut s, frame_t(), o, |t, oo| gravity_lb(t, w, oo))?;
            pretend(&mut s, &sweep_lb(w), o)?;
            *loc = s.union(&below).copied().collect();
            Ok(())
        })?;
        let row = b + 1;
        let filled = (0..size - 1).filter(|&x| r.contains(&(x, row))).count() as i64;
        if filled == size - 1 {
            b += 1;
            size -= 1;
            continue;
        }
        if !r.iter().any(|p| p.1 > row) {
            break;
        }
        slide_right(r, row, size - 1, out)?;
        guard += 1;
        if guard > 4 * n * n + 16 {
            return Err(CoreError::Internal("excess gathering did not settle".into()));
        }
    }
    Ok(())
}

/// Pushes the marbles of `row` (cells 0..len) to its right end, using the
/// full row beneath as a track: two moves per step.
fn slide_right(r: &mut Local, row: i64, len: i64, out: &mut Moves) -> Result<(), CoreError> {
    let mut xs: Vec<i64> = (0..len).filter(|&x| r.contains(&(x, row))).collect();
    xs.reverse();
    let mut end = len - 1;
    for mut x in xs {
        while x < end && !r.contains(&(x + 1, row)) {
            local_move(r, (x + 1, row - 1), (x + 1, row), out)?;
            local_move(r, (x, row), (x + 1, row - 1), out)?;
            x += 1;
        }
        end = x - 1;
    }
    Ok(())
}

fn board_legal(f: Pt, t: Pt, cells: &HashMap<Pt, Owner>) -> Option<Pt> {
    third(f, t).filter(|(_, c)| cells.contains_key(c)).map(|(g, _)| g)
}

struct Comps {
    tris: Vec<Option<Tri>>,
}

/// Runs a local operation on component `cid`, whose marbles are seen in the
/// triangle `region` through `frame`.
fn run_on(
    board: &mut Board,
    cid: usize,
    region: Tri,
    frame: Affine,
    op: impl FnOnce(&mut Local, &mut Moves) -> Result<(), CoreError>,
) -> Result<(), CoreError> {
    let g = Affine::translate(region.v).then_after(&frame);
    let ginv = g.inverse();
    let mut loc: Local = board.owned_by(cid).into_iter().map(|p| ginv.apply(p)).collect();
    let mut o = Vec::new();
    op(&mut loc, &mut o)?;
    for (a, b) in o {
        board.play(cid, g.apply(a), g.apply(b))?;
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Edge {
    Bottom,
    Left,
    Diagonal,
}

fn edge_cells(t: Tri, e: Edge) -> Vec<Pt> {
    (0..t.n)
        .map(|i| {
            add(
                t.v,
                match e {
                    Edge::Bottom => (i, 0),
                    Edge::Left => (0, i),
                    Edge::Diagonal => (i, t.n - 1 - i),
                },
            )
        })
        .collect()
}

/// Moves a component's line from the bottom edge to `e`.
fn orient_from_bottom(board: &mut Board, cid: usize, t: Tri, e: Edge) -> Result<(), CoreError> {
    let n = t.n;
    match e {
        Edge::Bottom => Ok(()),
        Edge::Left => run_on(board, cid, t, Affine::ID, |r, o| pretend(r, &rev(&sweep_lb(n)), o)),
        Edge::Diagonal => run_on(board, cid, t, frame_m(n), |r, o| pretend(r, &sweep_lb(n), o)),
    }
}

/// Moves a component's line from `e` to the bottom edge.
fn orient_to_bottom(board: &mut Board, cid: usize, t: Tri, e: Edge) -> Result<(), CoreError> {
    let n = t.n;
    match e {
        Edge::Bottom => Ok(()),
        Edge::Left => run_on(board, cid, t, Affine::ID, |r, o| pretend(r, &sweep_lb(n), o)),
        Edge::Diagonal => run_on(board, cid, t, frame_m(n), |r, o| pretend(r, &rev(&sweep_lb(n)), o)),
    }
}

/// Adds the pending marble x, adjacent to component `cid`, growing its
/// triangle by one.
fn extend(board: &mut Board, comps: &mut Comps, cid: usize, x: Pt) -> Result<(), CoreError> {
    let t = comps.tris[cid].unwrap();
    let n = t.n;
    let r = sub(x, t.v);
    let (edge, new, frame, k) = if r.1 == -1 && (0..=n).contains(&r.0) {
        (Edge::Bottom, Tri { v: add(t.v, (0, -1)), n: n + 1 }, Affine::ID, r.0)
    } else if r.0 == -1 && (0..=n).contains(&r.1) {
        (Edge::Left, Tri { v: add(t.v, (-1, 0)), n: n + 1 }, frame_t(), r.1)
    } else if r.0 >= 0 && r.1 >= 0 && r.0 + r.1 == n {
        (Edge::Diagonal, Tri { v: t.v, n: n + 1 }, frame_m(n + 1), n - r.0)
    } else {
        return Err(CoreError::Internal(format!("{x:?} does not touch the triangle at {:?}", t.v)));
    };
    orient_from_bottom(board, cid, t, edge)?;
    board.set_owner(x, Owner::Comp(cid));
    comps.tris[cid] = Some(new);
    run_on(board, cid, new, frame, |loc, o| extend_bottom(loc, n, k, o))?;
    orient_to_bottom(board, cid, new, edge)
}

/// Releases component `x`, first turning its line towards `y` so that the
/// released marbles can be re-attached to `y` one at a time.
fn dissolve(board: &mut Board, comps: &mut Comps, x: usize, y: usize) -> Result<(), CoreError> {
    let tx = comps.tris[x].unwrap();
    let ty = comps.tris[y].unwrap();
    let edge = [Edge::Bottom, Edge::Left, Edge::Diagonal]
        .into_iter()
        .find(|&e| edge_cells(tx, e).iter().any(|&c| ty.contains(c) || ty.touches_cell(c)))
        .ok_or_else(|| CoreError::Internal("dissolved triangle does not face its partner".into()))?;
    orient_from_bottom(board, x, tx, edge)?;
    for p in board.owned_by(x) {
        board.set_owner(p, Owner::Pending);
    }
    comps.tris[x] = None;
    Ok(())
}

/// Whether each closure triangle already holds one of its edges, in which
/// case that edge is returned per triangle.
fn superline_edges(pts: &[Pt], tris: &[Tri]) -> Option<Vec<Edge>> {
    let set: HashSet<Pt> = pts.iter().copied().collect();
    tris.iter()
        .map(|&t| {
            [Edge::Bottom, Edge::Left, Edge::Diagonal]
                .into_iter()
                .find(|&e| edge_cells(t, e).iter().all(|c| set.contains(c)))
        })
        .collect()
}

/// A legal trace from P to the pattern of its normal form.
///
/// Components are built by inserting marbles one at a time: a marble inside
/// a component's triangle is excess, a marble next to it extends the
/// triangle by one row in a rotated frame, and when two triangles come to
/// touch the smaller one is released and re-inserted into the larger. Each
/// component keeps a full bottom line throughout. Then the excess of each
/// component is gathered into P_{n,k}.
///
/// When every closure triangle already contains one of its edges the
/// insertion stage is skipped and the path has O(n^2 + nk) moves.
pub fn canonical_path(p: &Pattern) -> Result<MoveTrace, CoreError> {
    let pts = planar(p)?;
    let nf = identify_orbit(p)?;
    if nf.pattern() == *p {
        return Ok(Vec::new());
    }
    let tris = decompose(&pts)?;
    let legal = board_legal;
    let mut board = Board::new(pts.iter().copied(), &legal);
    let mut comps = Comps { tris: Vec::new() };

    if let Some(edges) = superline_edges(&pts, &tris) {
        for (i, &t) in tris.iter().enumerate() {
            comps.tris.push(Some(t));
            for c in t.cells() {
                if board.owner.contains_key(&c) {
                    board.set_owner(c, Owner::Comp(i));
                }
            }
            orient_to_bottom(&mut board, i, t, edges[i])?;
        }
    } else {
        build_components(&mut board, &mut comps, pts.len())?;
        let mut got: Vec<Tri> = comps.tris.iter().flatten().copied().collect();
        got.sort();
        if got != tris {
            return Err(CoreError::Internal("component building ended away from the fill decomposition".into()));
        }
    }

    for (cid, t) in comps.tris.clone().iter().enumerate() {
        let Some(t) = *t else { continue };
        run_on(&mut board, cid, t, Affine::ID, |loc, o| gather_excess(loc, t.n, o))?;
    }
    Ok(board.trace())
}

fn build_components(board: &mut Board, comps: &mut Comps, size: usize) -> Result<(), CoreError> {
    let cap = 64 * size * size + 64;
    for _ in 0..cap {
        let alive: Vec<usize> = (0..comps.tris.len()).filter(|&i| comps.tris[i].is_some()).collect();
        let mut pair = None;
        'outer: for (a, &i) in alive.iter().enumerate() {
            for &j in &alive[a + 1..] {
                if comps.tris[i].unwrap().meets(&comps.tris[j].unwrap()) {
                    pair = Some((i, j));
                    break 'outer;
                }
            }
        }
        if let Some((i, j)) = pair {
            let (ti, tj) = (comps.tris[i].unwrap(), comps.tris[j].unwrap());
            let (x, y) = if ti.n <= tj.n { (i, j) } else { (j, i) };
            dissolve(board, comps, x, y)?;
            continue;
        }
        let pending = board.pending();
        if pending.is_empty() {
            return Ok(());
        }
        if let Some((&p, cid)) =
            pending.iter().find_map(|q| alive.iter().find(|&&c| comps.tris[c].unwrap().contains(*q)).map(|&c| (q, c)))
        {
            board.set_owner(p, Owner::Comp(cid));
            continue;
        }
        if let Some((&p, cid)) = pending
            .iter()
            .find_map(|q| alive.iter().find(|&&c| comps.tris[c].unwrap().touches_cell(*q)).map(|&c| (q, c)))
        {
            extend(board, comps, cid, p)?;
            continue;
        }
        let p = pending[0];
        comps.tris.push(Some(Tri { v: p, n: 1 }));
        board.set_owner(p, Owner::Comp(comps.tris.len() - 1));
    }
    Err(CoreError::Internal("component building did not terminate".into()))
}

/// Orders a planar set for display and tests.
pub fn sorted(pts: impl IntoIterator<Item = Pt>) -> Vec<Pt> {
    pts.into_iter().collect::<BTreeSet<Pt>>().into_iter().collect()
}
