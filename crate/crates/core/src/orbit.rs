//! Orbit graphs by breadth-first search, exact diameters, the line orbit of
//! the triangle on the free group, and the matching distance Δ.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::fill::is_filling_closed;
use crate::group::{mul, Elem, GroupCtx};
use crate::moves::{candidate_translates, legal_moves};
use crate::pattern::{Pattern, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitLimits {
    pub max_vertices: usize,
    /// Patterns with a cell farther than this from the identity are not
    /// expanded (sup norm on Z^d, word length on free groups).
    pub max_radius: Option<i64>,
}

impl Default for OrbitLimits {
    fn default() -> Self {
        OrbitLimits { max_vertices: 1 << 20, max_radius: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitStats {
    pub size: usize,
    /// Eccentricity of the root, i.e. the BFS depth.
    pub root_eccentricity: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitGraph {
    pub vertices: Vec<Pattern>,
    /// Unordered pairs of vertex indices, each listed once.
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
    pub truncated: bool,
    pub stats: OrbitStats,
}

fn radius(x: &Elem) -> i64 {
    match x {
        Elem::Lat(c) => c.iter().map(|v| v.abs()).max().unwrap_or(0),
        Elem::Word(w) => w.len() as i64,
    }
}

pub fn orbit_bfs(ctx: &GroupCtx, shape: &Shape, p: &Pattern, limits: OrbitLimits) -> Result<OrbitGraph, CoreError> {
    let mut index: HashMap<Pattern, usize> = HashMap::new();
    let mut vertices = vec![p.clone()];
    let mut depth = vec![0usize];
    index.insert(p.clone(), 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut truncated = false;
    while let Some(i) = queue.pop_front() {
        let here = vertices[i].clone();
        if let Some(r) = limits.max_radius {
            if here.iter().any(|x| radius(x) > r) {
                truncated = true;
                continue;
            }
        }
        for m in legal_moves(ctx, shape, &here)? {
            let mut q = here.clone();
            q.remove(&m.vacated);
            q.insert(m.filled.clone());
            let j = match index.get(&q) {
                Some(&j) => j,
                None => {
                    if vertices.len() >= limits.max_vertices {
                        truncated = true;
                        continue;
                    }
                    let j = vertices.len();
                    index.insert(q.clone(), j);
                    vertices.push(q);
                    depth.push(depth[i] + 1);
                    queue.push_back(j);
                    j
                }
            };
            if i < j {
                edges.push((i, j));
            }
        }
    }
    edges.sort();
    edges.dedup();
    let stats = OrbitStats { size: vertices.len(), root_eccentricity: depth.iter().copied().max().unwrap_or(0) };
    Ok(OrbitGraph { vertices, edges, root: 0, truncated, stats })
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

fn eccentricity(adj: &[Vec<usize>], from: usize) -> usize {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    let mut far = 0;
    while let Some(v) = queue.pop_front() {
        far = far.max(dist[v]);
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    far
}

/// Exact diameter by a BFS from every vertex.
pub fn diameter(graph: &OrbitGraph) -> Result<usize, CoreError> {
    if graph.truncated {
        return Err(CoreError::Contract("diameter of a truncated orbit".into()));
    }
    let adj = adjacency(graph.vertices.len(), &graph.edges);
    Ok((0..adj.len()).map(|v| eccentricity(&adj, v)).max().unwrap_or(0))
}

/// Patterns inside a fixed filling-closed region of at most 64 cells, as bit
/// masks. Orbits of patterns in the region never leave it, so moves only
/// need the translates lying wholly inside.
pub struct MaskSpace {
    cells: Vec<Elem>,
    index: HashMap<Elem, usize>,
    translates: Vec<(u64, u64)>,
}

impl MaskSpace {
    pub fn new(shape: &Shape, region: &Pattern) -> Result<MaskSpace, CoreError> {
        if region.len() > 64 {
            return Err(CoreError::SizeLimit { what: "mask region", size: region.len(), limit: 64 });
        }
        if !is_filling_closed(shape, region) {
            return Err(CoreError::Contract("mask region must be filling-closed".into()));
        }
        let cells: Vec<Elem> = region.iter().cloned().collect();
        let index: HashMap<Elem, usize> = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut translates = Vec::new();
        for g in candidate_translates(shape, region) {
            let bit = |x: &Elem| index.get(&mul(&g, x)).map(|&i| 1u64 << i);
            let Some(s) = shape.s().iter().map(bit).collect::<Option<Vec<u64>>>() else { continue };
            let c: u64 = shape.c().iter().map(|x| bit(x).unwrap()).fold(0, |a, b| a | b);
            translates.push((s.iter().fold(0, |a, b| a | b), c));
        }
        Ok(MaskSpace { cells, index, translates })
    }

    pub fn cells(&self) -> &[Elem] {
        &self.cells
    }

    pub fn to_mask(&self, p: &Pattern) -> Option<u64> {
        p.iter().try_fold(0u64, |m, x| self.index.get(x).map(|&i| m | 1 << i))
    }

    pub fn to_pattern(&self, m: u64) -> Pattern {
        (0..self.cells.len()).filter(|i| m >> i & 1 == 1).map(|i| self.cells[i].clone()).collect()
    }

    pub fn for_each_neighbour(&self, m: u64, mut f: impl FnMut(u64)) {
        for &(s, c) in &self.translates {
            let hole = s & !m;
            if hole.count_ones() != 1 || hole & c == 0 {
                continue;
            }
            let mut rest = c & m;
            while rest != 0 {
                let b = rest & rest.wrapping_neg();
                rest ^= b;
                f(m ^ b ^ hole);
            }
        }
    }

    /// The whole orbit of `m`, or `None` past `limit` vertices.
    pub fn orbit(&self, m: u64, limit: usize) -> Option<Vec<u64>> {
        let mut seen = std::collections::HashSet::from([m]);
        let mut out = vec![m];
        let mut i = 0;
        while i < out.len() {
            let v = out[i];
            i += 1;
            let mut fresh = Vec::new();
            self.for_each_neighbour(v, |w| {
                if seen.insert(w) {
                    fresh.push(w);
                }
            });
            out.extend(fresh);
            if out.len() > limit {
                return None;
            }
        }
        Some(out)
    }

    /// Orbit classes of every pattern with at most `max_size` cells: the
    /// returned map sends each mask to the least mask of its orbit.
    pub fn partition(&self, max_size: u32) -> HashMap<u64, u64> {
        let n = self.cells.len() as u32;
        let mut class: HashMap<u64, u64> = HashMap::new();
        for k in 0..=max_size.min(n) {
            for m in subsets(n, k) {
                if class.contains_key(&m) {
                    continue;
                }
                let orb = self.orbit(m, usize::MAX).unwrap();
                let least = *orb.iter().min().unwrap();
                for v in orb {
                    class.insert(v, least);
                }
            }
        }
        class
    }
}

/// All k-subsets of n bits, in increasing order (Gosper's hack).
pub fn subsets(n: u32, k: u32) -> impl Iterator<Item = u64> {
    let mut cur = match k {
        _ if k > n => None,
        0 => Some(0),
        64 => Some(u64::MAX),
        _ => Some((1u64 << k) - 1),
    };
    std::iter::from_fn(move || {
        let v = cur?;
        cur = (v != 0)
            .then(|| {
                let c = v & v.wrapping_neg();
                let r = v.checked_add(c)?;
                let next = (((r ^ v) >> 2) / c) | r;
                (n == 64 || next >> n == 0).then_some(next)
            })
            .flatten();
        Some(v)
    })
}

fn power_a(i: usize) -> Elem {
    Elem::word(&vec![1; i])
}

fn power_a_then_b(i: usize) -> Elem {
    let mut w = vec![1; i];
    w.push(2);
    Elem::word(&w)
}

/// The line {e, a, ..., a^(n-1)} of F_2.
pub fn free_line(n: usize) -> Pattern {
    (0..n).map(power_a).collect()
}

/// Letters of the E/A/B encoding of a pattern in the orbit of the free
/// line: marble i stayed at a^i (E), went up to a^i b (B) or up-left to
/// a^(i-1) b (A). `None` if the pattern has no such encoding.
pub fn free_line_encoding(p: &Pattern, n: usize) -> Option<String> {
    if p.len() != n {
        return None;
    }
    let mut word = vec![' '; n];
    let mut tops = Vec::new();
    for x in p {
        match (0..n).find(|&i| *x == power_a(i)) {
            Some(i) => word[i] = 'E',
            None => tops.push((0..n.saturating_sub(1)).find(|&j| *x == power_a_then_b(j))?),
        }
    }
    tops.sort();
    let moved: Vec<usize> = (0..n).filter(|&i| word[i] == ' ').collect();
    // The only order-preserving way to pair moved marbles with top cells.
    for (&i, &j) in moved.iter().zip(&tops) {
        word[i] = if j == i { 'B' } else if j + 1 == i { 'A' } else { return None };
    }
    Some(word.into_iter().collect())
}

pub fn free_line_orbit_membership(p: &Pattern, n: usize) -> bool {
    free_line_encoding(p, n).is_some()
}

/// |O(L_n)| for the triangle {e, a, b} on F_2: u_1 = 1, u_2 = 3,
/// u_{n+1} = 3u_n - u_{n-1}.
pub fn free_line_orbit_count(n: usize) -> u128 {
    let (mut prev, mut cur) = (0u128, 1u128);
    if n == 0 {
        return 1;
    }
    for _ in 1..n {
        (prev, cur) = (cur, 3 * cur - prev);
    }
    cur
}

fn points(p: &Pattern) -> Result<Vec<Vec<f64>>, CoreError> {
    p.iter()
        .map(|x| {
            x.coords()
                .map(|c| c.iter().map(|&v| v as f64).collect())
                .ok_or_else(|| CoreError::Contract("Δ needs lattice points".into()))
        })
        .collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Least total Euclidean distance over bijections A -> B (Hungarian
/// method with potentials).
pub fn delta_metric(a: &Pattern, b: &Pattern) -> Result<f64, CoreError> {
    if a.len() != b.len() {
        return Err(CoreError::Contract(format!("Δ needs equal sizes, got {} and {}", a.len(), b.len())));
    }
    let (pa, pb) = (points(a)?, points(b)?);
    let n = pa.len();
    if n == 0 {
        return Ok(0.0);
    }
    let cost = |i: usize, j: usize| dist(&pa[i - 1], &pb[j - 1]);
    let (mut u, mut v) = (vec![0.0; n + 1], vec![0.0; n + 1]);
    let mut way = vec![0usize; n + 1];
    let mut row_of = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let (mut delta, mut j1) = (f64::INFINITY, 0);
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    Ok((1..=n).map(|j| cost(row_of[j], j)).sum())
}

/// Euclidean diameter of S: no move carries a marble farther.
pub fn shape_diameter(shape: &Shape) -> Result<f64, CoreError> {
    let s = points(&shape.s().iter().cloned().collect())?;
    Ok(s.iter().flat_map(|a| s.iter().map(move |b| dist(a, b))).fold(0.0, f64::max))
}

/// Δ(A, B)/diam(S): no trace from A to B is shorter.
pub fn move_lower_bound(shape: &Shape, a: &Pattern, b: &Pattern) -> Result<f64, CoreError> {
    Ok(delta_metric(a, b)? / shape_diameter(shape)?)
}

/// Graph export in DOT.
pub fn to_dot(graph: &OrbitGraph) -> String {
    let mut s = String::from("graph orbit {\n");
    for (i, v) in graph.vertices.iter().enumerate() {
        let label: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        s.push_str(&format!("  {i} [label=\"{}\"];\n", label.join(" ")));
    }
    for (a, b) in &graph.edges {
        s.push_str(&format!("  {a} -- {b};\n"));
    }
    s.push_str("}\n");
    s
}
