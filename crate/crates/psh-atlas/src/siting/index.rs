//! Uniform bucket-grid spatial index for radius queries.
//!
//! Buckets are keyed by `floor(coordinate / cell)`. A query with radius at
//! most the bucket edge inspects only the 3x3 neighborhood around the query
//! point's bucket; larger radii widen the neighborhood accordingly. Results
//! always equal the brute-force scan.

use std::collections::HashMap;

use crate::geometry::Point;

#[derive(Debug, Clone)]
pub struct SpatialIndex {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<(u32, Point)>>,
}

impl SpatialIndex {
    /// Indexes `points` with bucket edge `cell` (normally the search
    /// radius). Entry `i` keeps index `i` as its handle.
    pub fn build(points: impl IntoIterator<Item = Point>, cell: f64) -> Self {
        assert!(cell > 0.0, "bucket edge must be positive");
        let mut buckets: HashMap<(i64, i64), Vec<(u32, Point)>> = HashMap::new();
        for (i, p) in points.into_iter().enumerate() {
            buckets.entry(Self::key(p, cell)).or_default().push((i as u32, p));
        }
        SpatialIndex { cell, buckets }
    }

    fn key(p: Point, cell: f64) -> (i64, i64) {
        ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
    }

    /// Indices of all points within `radius` of `center` (inclusive),
    /// sorted ascending.
    pub fn query_within(&self, center: Point, radius: f64) -> Vec<u32> {
        let (kx, ky) = Self::key(center, self.cell);
        let span = (radius / self.cell).ceil().max(1.0) as i64;
        let mut out = Vec::new();
        for dx in -span..=span {
            for dy in -span..=span {
                if let Some(entries) = self.buckets.get(&(kx + dx, ky + dy)) {
                    for &(i, p) in entries {
                        if center.distance(p) <= radius {
                            out.push(i);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(points: &[Point], center: Point, radius: f64) -> Vec<u32> {
        points
            .iter()
            .enumerate()
            .filter(|(_, p)| center.distance(**p) <= radius)
            .map(|(i, _)| i as u32)
            .collect()
    }

    #[test]
    fn radius_boundary_inclusive() {
        let points = vec![Point::new(9_999.0, 0.0), Point::new(10_001.0, 0.0)];
        let idx = SpatialIndex::build(points, 10_000.0);
        assert_eq!(idx.query_within(Point::new(0.0, 0.0), 10_000.0), vec![0]);
    }

    #[test]
    fn matches_brute_force_on_scattered_points() {
        // Deterministic pseudo-random scatter, including negatives.
        let mut points = Vec::new();
        let mut state = 42u64;
        for _ in 0..500 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let x = ((state >> 16) % 60_000) as f64 - 30_000.0;
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let y = ((state >> 16) % 60_000) as f64 - 30_000.0;
            points.push(Point::new(x, y));
        }
        let idx = SpatialIndex::build(points.iter().copied(), 10_000.0);
        for center in [&points[0], &points[123], &points[499]] {
            for radius in [500.0, 5_000.0, 10_000.0] {
                assert_eq!(idx.query_within(*center, radius), brute(&points, *center, radius));
            }
        }
    }
}
