//! Planar geometry helpers on projected (metric) coordinates.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }

    pub fn scaled(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::new(x, y)
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Closest point on segment `a`–`b` to `p`, as the clamped parameter `t` in
/// [0, 1] and the distance.
pub fn project_on_segment(p: Point, a: Point, b: Point) -> (f64, f64) {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    (t, p.dist(a.lerp(b, t)))
}

pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    project_on_segment(p, a, b).1
}

pub fn polyline_length(points: &[Point]) -> f64 {
    points.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Splits a polyline at the given increasing arclength offsets, returning
/// `offsets.len() + 1` pieces. Offsets must lie strictly inside (0, length).
pub fn split_polyline(points: &[Point], offsets: &[f64]) -> Vec<Vec<Point>> {
    let mut pieces = Vec::with_capacity(offsets.len() + 1);
    let mut current = vec![points[0]];
    let mut walked = 0.0;
    let mut cuts = offsets.iter().copied().peekable();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let seg = a.dist(b);
        while let Some(&cut) = cuts.peek() {
            if cut > walked + seg || seg == 0.0 {
                break;
            }
            let p = a.lerp(b, (cut - walked) / seg);
            current.push(p);
            pieces.push(std::mem::replace(&mut current, vec![p]));
            cuts.next();
        }
        walked += seg;
        current.push(b);
    }
    pieces.push(current);
    for piece in &mut pieces {
        piece.dedup();
    }
    pieces
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn of(points: impl IntoIterator<Item = Point>) -> Option<BBox> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut bb = BBox { min: first, max: first };
        for p in it {
            bb.min.x = bb.min.x.min(p.x);
            bb.min.y = bb.min.y.min(p.y);
            bb.max.x = bb.max.x.max(p.x);
            bb.max.y = bb.max.y.max(p.y);
        }
        Some(bb)
    }

    pub fn expanded(self, by: f64) -> BBox {
        BBox {
            min: Point::new(self.min.x - by, self.min.y - by),
            max: Point::new(self.max.x + by, self.max.y + by),
        }
    }

    pub fn intersects(&self, other: &BBox) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_clamps_to_endpoints() {
        let (t, d) = project_on_segment(Point::new(-3.0, 4.0), Point::new(0.0, 0.0), Point::new(10.0, 0.0));
        assert_eq!(t, 0.0);
        assert_eq!(d, 5.0);
        let (t, d) = project_on_segment(Point::new(4.0, 2.0), Point::new(0.0, 0.0), Point::new(10.0, 0.0));
        assert!((t - 0.4).abs() < 1e-15);
        assert_eq!(d, 2.0);
    }

    #[test]
    fn split_preserves_length() {
        let line = vec![Point::new(0.0, 0.0), Point::new(30.0, 0.0), Point::new(30.0, 40.0)];
        let pieces = split_polyline(&line, &[10.0, 30.0, 50.0]);
        assert_eq!(pieces.len(), 4);
        let lens: Vec<f64> = pieces.iter().map(|p| polyline_length(p)).collect();
        for (got, want) in lens.iter().zip([10.0, 20.0, 20.0, 20.0]) {
            assert!((got - want).abs() < 1e-12, "{lens:?}");
        }
        assert_eq!(*pieces[1].last().unwrap(), Point::new(30.0, 0.0));
        assert_eq!(pieces[2][0], Point::new(30.0, 0.0));
    }
}
