//! Planar convex hulls and the S-hull: the smallest polygon whose edges
//! are parallel to edges of S and which contains a pattern.

/// Convex hull vertices in counter-clockwise order, collinear points dropped.
pub fn convex_hull(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut p: Vec<(i64, i64)> = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Outward primitive normals of the edges of conv(S). Empty when S is
/// degenerate (fewer than three non-collinear points).
pub fn edge_normals(shape: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let h = convex_hull(shape);
    if h.len() < 3 {
        return Vec::new();
    }
    (0..h.len())
        .map(|i| {
            let (a, b) = (h[i], h[(i + 1) % h.len()]);
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let g = gcd(dx, dy);
            (dy / g, -dx / g)
        })
        .collect()
}

/// Intersection of half-planes n·x <= h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlanes {
    pub planes: Vec<((i64, i64), i64)>,
}

impl HalfPlanes {
    /// The S-hull of `p`: each edge normal of S slid until it touches p.
    pub fn slid_to(shape: &[(i64, i64)], p: &[(i64, i64)]) -> HalfPlanes {
        let planes = edge_normals(shape)
            .into_iter()
            .map(|n| (n, p.iter().map(|q| n.0 * q.0 + n.1 * q.1).max().unwrap_or(i64::MIN)))
            .collect();
        HalfPlanes { planes }
    }

    pub fn contains(&self, x: (i64, i64)) -> bool {
        self.planes.iter().all(|&(n, h)| n.0 * x.0 + n.1 * x.1 <= h)
    }

    /// Lattice points inside, scanning the bounding box of `p`'s hull. The
    /// S-hull of a nonempty pattern is bounded whenever S spans the plane,
    /// and then lies within the box of p extended by the hull's slack.
    pub fn lattice_points(&self, p: &[(i64, i64)]) -> Vec<(i64, i64)> {
        if p.is_empty() || self.planes.is_empty() {
            return Vec::new();
        }
        // Bound each coordinate by a generous box and filter; the polygon's
        // vertices are intersections of pairs of lines, found exactly below.
        let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        let k = self.planes.len();
        for i in 0..k {
            for j in 0..k {
                let ((a, b), h) = self.planes[i];
                let ((c, d), g) = self.planes[j];
                let det = a * d - b * c;
                if det == 0 {
                    continue;
                }
                let nx = h * d - b * g;
                let ny = a * g - h * c;
                let (fx, cx) = (div_floor(nx, det), div_ceil(nx, det));
                let (fy, cy) = (div_floor(ny, det), div_ceil(ny, det));
                x0 = x0.min(fx);
                x1 = x1.max(cx);
                y0 = y0.min(fy);
                y1 = y1.max(cy);
            }
        }
        let mut out = Vec::new();
        for y in y0..=y1 {
            for x in x0..=x1 {
                if self.contains((x, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    let (q, r) = (a / b, a % b);
    if r != 0 && ((r < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}
