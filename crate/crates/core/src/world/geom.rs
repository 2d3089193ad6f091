//! Planar convex primitives: points, segments and convex polygons, with an
//! optional inflation radius. Contact (touching) counts as collision.

pub type P2 = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: P2,
    pub max: P2,
}

impl Rect {
    pub fn of_points(pts: &[P2]) -> Rect {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in pts {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        Rect { min, max }
    }

    pub fn inflate(self, r: f64) -> Rect {
        Rect {
            min: [self.min[0] - r, self.min[1] - r],
            max: [self.max[0] + r, self.max[1] + r],
        }
    }

    /// Closed-interval overlap test.
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.min[0] <= other.max[0]
            && other.min[0] <= self.max[0]
            && self.min[1] <= other.max[1]
            && other.min[1] <= self.max[1]
    }

    pub fn corners(&self) -> [P2; 4] {
        [
            self.min,
            [self.max[0], self.min[1]],
            self.max,
            [self.min[0], self.max[1]],
        ]
    }
}

#[inline]
fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// True when the polygon (≥3 vertices) is strictly convex and counterclockwise.
pub fn is_convex_ccw(verts: &[P2]) -> bool {
    let n = verts.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| cross(verts[i], verts[(i + 1) % n], verts[(i + 2) % n]) > 0.0)
}

fn project(verts: &[P2], axis: P2) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in verts {
        let p = dot(v, axis);
        lo = lo.min(p);
        hi = hi.max(p);
    }
    (lo, hi)
}

fn separated_along_edges(a: &[P2], b: &[P2]) -> bool {
    let n = a.len();
    let edges = match n {
        0 | 1 => 0,
        2 => 1,
        _ => n,
    };
    for i in 0..edges {
        let e = sub(a[(i + 1) % n], a[i]);
        let axis = [-e[1], e[0]];
        if axis == [0.0, 0.0] {
            continue;
        }
        let (alo, ahi) = project(a, axis);
        let (blo, bhi) = project(b, axis);
        if ahi < blo || bhi < alo {
            return true;
        }
    }
    false
}

/// Separating-axis intersection test for convex vertex sets (point, segment or
/// polygon). Touching shapes intersect.
pub fn intersects(a: &[P2], b: &[P2]) -> bool {
    if separated_along_edges(a, b) || separated_along_edges(b, a) {
        return false;
    }
    // Two collinear segments (or points) have no usable normal; fall back on
    // their bounding boxes along the shared line.
    if a.len() <= 2 && b.len() <= 2 {
        let ra = Rect::of_points(a);
        let rb = Rect::of_points(b);
        if !ra.overlaps(&rb) {
            return false;
        }
        if a.len() == 1 && b.len() == 1 {
            return a[0] == b[0];
        }
    }
    true
}

pub fn point_segment_distance(p: P2, a: P2, b: P2) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    let t = if len2 == 0.0 {
        0.0
    } else {
        (dot(sub(p, a), ab) / len2).clamp(0.0, 1.0)
    };
    let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
    let d = sub(p, q);
    dot(d, d).sqrt()
}

fn vertices_to_edges(pts: &[P2], shape: &[P2]) -> f64 {
    let n = shape.len();
    let mut best = f64::INFINITY;
    for &p in pts {
        if n == 1 {
            let d = sub(p, shape[0]);
            best = best.min(dot(d, d).sqrt());
            continue;
        }
        let edges = if n == 2 { 1 } else { n };
        for i in 0..edges {
            best = best.min(point_segment_distance(p, shape[i], shape[(i + 1) % n]));
        }
    }
    best
}

/// Euclidean distance between two convex vertex sets; zero when they intersect.
pub fn distance(a: &[P2], b: &[P2]) -> f64 {
    if intersects(a, b) {
        return 0.0;
    }
    vertices_to_edges(a, b).min(vertices_to_edges(b, a))
}

/// Collision between a convex primitive inflated by `radius` and a convex set.
#[inline]
pub fn collides(shape: &[P2], radius: f64, other: &[P2]) -> bool {
    if radius <= 0.0 {
        intersects(shape, other)
    } else {
        distance(shape, other) <= radius
    }
}
