//! Distances and intersections between sampled curves.

use std::collections::HashMap;

use crate::geometry::PlanePoint;

/// Euclidean distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: PlanePoint, a: PlanePoint, b: PlanePoint) -> f64 {
    let d = b - a;
    let len2 = d.norm_sq();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let s = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.distance(a + d * s)
}

/// Whether closed segments `[a, b]` and `[c, d]` share a point.
pub fn segments_intersect(a: PlanePoint, b: PlanePoint, c: PlanePoint, d: PlanePoint) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    let on = |p: PlanePoint, q: PlanePoint, x: PlanePoint, o: f64| {
        o == 0.0 && x.x >= p.x.min(q.x) && x.x <= p.x.max(q.x) && x.y >= p.y.min(q.y) && x.y <= p.y.max(q.y)
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

/// Uniform-grid index over the segments of a set of polylines.
pub struct SegmentIndex<'a> {
    lines: &'a [Vec<PlanePoint>],
    cell: f64,
    grid: HashMap<(i64, i64), Vec<(usize, usize)>>,
}

impl<'a> SegmentIndex<'a> {
    pub fn new(lines: &'a [Vec<PlanePoint>], cell: f64) -> Self {
        let mut grid: HashMap<(i64, i64), Vec<(usize, usize)>> = HashMap::new();
        for (li, line) in lines.iter().enumerate() {
            for si in 0..line.len().saturating_sub(1) {
                let (a, b) = (line[si], line[si + 1]);
                let (x0, x1) = (a.x.min(b.x), a.x.max(b.x));
                let (y0, y1) = (a.y.min(b.y), a.y.max(b.y));
                for i in (x0 / cell).floor() as i64..=(x1 / cell).floor() as i64 {
                    for j in (y0 / cell).floor() as i64..=(y1 / cell).floor() as i64 {
                        grid.entry((i, j)).or_default().push((li, si));
                    }
                }
            }
        }
        Self { lines, cell, grid }
    }

    fn segment(&self, (li, si): (usize, usize)) -> (PlanePoint, PlanePoint) {
        (self.lines[li][si], self.lines[li][si + 1])
    }

    /// Distance from `p` to the nearest indexed segment (or lone point).
    pub fn distance(&self, p: PlanePoint) -> f64 {
        let (ci, cj) = ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64);
        let mut best = f64::INFINITY;
        let mut ring = 0i64;
        loop {
            for i in ci - ring..=ci + ring {
                for j in cj - ring..=cj + ring {
                    if (i - ci).abs() != ring && (j - cj).abs() != ring {
                        continue;
                    }
                    if let Some(segs) = self.grid.get(&(i, j)) {
                        for &s in segs {
                            let (a, b) = self.segment(s);
                            best = best.min(point_segment_distance(p, a, b));
                        }
                    }
                }
            }
            // Everything outside the searched square is at least `ring · cell` away.
            if best <= ring as f64 * self.cell || ring > 64 {
                break;
            }
            ring += 1;
        }
        if best.is_finite() {
            return best;
        }
        self.lines
            .iter()
            .flat_map(|l| l.windows(2).map(|w| point_segment_distance(p, w[0], w[1])).chain(single(l, p)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Pairs of segments from different polylines (or non-adjacent segments of
    /// one polyline) that intersect, excluding those `allow` accepts.
    pub fn crossings<F>(&self, allow: F) -> Vec<((usize, usize), (usize, usize))>
    where
        F: Fn((usize, usize), (usize, usize)) -> bool,
    {
        let mut out = Vec::new();
        for segs in self.grid.values() {
            for (i, &s) in segs.iter().enumerate() {
                for &t in &segs[i + 1..] {
                    let (s, t) = if s < t { (s, t) } else { (t, s) };
                    if s.0 == t.0 && t.1 <= s.1 + 1 {
                        continue;
                    }
                    if allow(s, t) {
                        continue;
                    }
                    let (a, b) = self.segment(s);
                    let (c, d) = self.segment(t);
                    if segments_intersect(a, b, c, d) {
                        out.push((s, t));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn single(line: &[PlanePoint], p: PlanePoint) -> Option<f64> {
    (line.len() == 1).then(|| line[0].distance(p))
}

/// Largest distance from a sample of `from` to the polylines `to`.
pub fn directed_hausdorff(from: &[Vec<PlanePoint>], to: &[Vec<PlanePoint>], cell: f64) -> f64 {
    let index = SegmentIndex::new(to, cell);
    from.iter().flatten().map(|&p| index.distance(p)).fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two sets of polylines, measured from
/// vertices to segments.
pub fn hausdorff(a: &[Vec<PlanePoint>], b: &[Vec<PlanePoint>], cell: f64) -> f64 {
    directed_hausdorff(a, b, cell).max(directed_hausdorff(b, a, cell))
}
