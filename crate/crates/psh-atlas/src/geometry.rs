//! Planar geometry primitives.
//!
//! Everything in the engine operates in a single projected coordinate system
//! in meters; all distances are Euclidean in that plane.

use serde::{Deserialize, Serialize};

/// A point in the working projected coordinate system, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Minimum distance from `p` to the segment `a`..`b` (projection clamped to
/// the endpoints).
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let vx = b.x - a.x;
    let vy = b.y - a.y;
    let len_sq = vx * vx + vy * vy;
    if len_sq == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * vx + (p.y - a.y) * vy) / len_sq).clamp(0.0, 1.0);
    p.distance(Point::new(a.x + t * vx, a.y + t * vy))
}

/// True when `p` lies exactly on the segment `a`..`b`.
pub fn point_on_segment(p: Point, a: Point, b: Point) -> bool {
    let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if cross != 0.0 {
        return false;
    }
    let dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
    dot >= 0.0 && dot <= (b.x - a.x).powi(2) + (b.y - a.y).powi(2)
}

/// Signed shoelace area of a closed ring (first vertex equals last);
/// positive for counter-clockwise winding.
pub fn ring_signed_area(ring: &[Point]) -> f64 {
    let mut acc = 0.0;
    for w in ring.windows(2) {
        acc += w[0].x * w[1].y - w[1].x * w[0].y;
    }
    acc / 2.0
}

/// Area centroid of a closed ring; `None` when the ring has zero area.
pub fn ring_centroid(ring: &[Point]) -> Option<Point> {
    let area = ring_signed_area(ring);
    if area == 0.0 {
        return None;
    }
    let mut cx = 0.0;
    let mut cy = 0.0;
    for w in ring.windows(2) {
        let f = w[0].x * w[1].y - w[1].x * w[0].y;
        cx += (w[0].x + w[1].x) * f;
        cy += (w[0].y + w[1].y) * f;
    }
    Some(Point::new(cx / (6.0 * area), cy / (6.0 * area)))
}

/// Polygon area: absolute area of the first (exterior) ring minus the areas
/// of any remaining rings (holes). Never negative.
pub fn polygon_area(rings: &[Vec<Point>]) -> f64 {
    let mut it = rings.iter();
    let Some(ext) = it.next() else { return 0.0 };
    let mut area = ring_signed_area(ext).abs();
    for hole in it {
        area -= ring_signed_area(hole).abs();
    }
    area.max(0.0)
}

/// Area-weighted polygon centroid (holes subtract); `None` when the net
/// area is zero.
pub fn polygon_centroid(rings: &[Vec<Point>]) -> Option<Point> {
    let mut total = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for (i, ring) in rings.iter().enumerate() {
        let a = ring_signed_area(ring).abs();
        let Some(c) = ring_centroid(ring) else {
            continue;
        };
        let w = if i == 0 { a } else { -a };
        total += w;
        cx += w * c.x;
        cy += w * c.y;
    }
    if total > 0.0 {
        Some(Point::new(cx / total, cy / total))
    } else {
        None
    }
}

/// Even-odd ray-casting membership test over all rings of a polygon.
/// Points exactly on an edge count as inside.
pub fn point_in_rings(p: Point, rings: &[Vec<Point>]) -> bool {
    let mut inside = false;
    for ring in rings {
        for w in ring.windows(2) {
            let (a, b) = (w[0], w[1]);
            if point_on_segment(p, a, b) {
                return true;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x0: f64, y0: f64, side: f64) -> Vec<Point> {
        vec![
            Point::new(x0, y0),
            Point::new(x0 + side, y0),
            Point::new(x0 + side, y0 + side),
            Point::new(x0, y0 + side),
            Point::new(x0, y0),
        ]
    }

    #[test]
    fn segment_distance_perpendicular_foot() {
        let d = point_segment_distance(
            Point::new(0.0, 100.0),
            Point::new(-50.0, 0.0),
            Point::new(50.0, 0.0),
        );
        assert_eq!(d, 100.0);
    }

    #[test]
    fn segment_distance_clamps_to_endpoint() {
        let d = point_segment_distance(
            Point::new(150.0, 0.0),
            Point::new(-50.0, 0.0),
            Point::new(50.0, 0.0),
        );
        assert_eq!(d, 100.0);
    }

    #[test]
    fn segment_distance_on_segment_is_zero() {
        let d = point_segment_distance(
            Point::new(10.0, 0.0),
            Point::new(-50.0, 0.0),
            Point::new(50.0, 0.0),
        );
        assert_eq!(d, 0.0);
    }

    #[test]
    fn square_area_and_centroid() {
        let ring = square(0.0, 0.0, 100.0);
        assert_eq!(ring_signed_area(&ring).abs(), 10_000.0);
        let c = ring_centroid(&ring).unwrap();
        assert_eq!((c.x, c.y), (50.0, 50.0));
    }

    #[test]
    fn hole_subtracts_from_area_and_centroid() {
        let rings = vec![square(0.0, 0.0, 100.0), square(10.0, 10.0, 20.0)];
        assert_eq!(polygon_area(&rings), 10_000.0 - 400.0);
        let c = polygon_centroid(&rings).unwrap();
        // Exterior centroid (50,50) weighted 10000 minus hole centroid (20,20)
        // weighted 400.
        assert!((c.x - (50.0 * 10_000.0 - 20.0 * 400.0) / 9_600.0).abs() < 1e-9);
    }

    #[test]
    fn point_in_rings_interior_exterior_edge() {
        let rings = vec![square(0.0, 0.0, 100.0)];
        assert!(point_in_rings(Point::new(50.0, 50.0), &rings));
        assert!(!point_in_rings(Point::new(150.0, 50.0), &rings));
        assert!(point_in_rings(Point::new(0.0, 50.0), &rings));
        assert!(point_in_rings(Point::new(100.0, 100.0), &rings));
    }

    #[test]
    fn point_in_rings_respects_holes() {
        let rings = vec![square(0.0, 0.0, 100.0), square(40.0, 40.0, 20.0)];
        assert!(!point_in_rings(Point::new(50.0, 50.0), &rings));
        assert!(point_in_rings(Point::new(10.0, 10.0), &rings));
    }
}
