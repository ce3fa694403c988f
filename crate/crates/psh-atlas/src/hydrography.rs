//! Lake and river-point candidate construction from vector layers.
//!
//! Lakes become candidates when their planar area and mean elevation pass
//! the screening thresholds. Rivers are densified into points at a fixed
//! chainage interval measured along each polyline from its first stored
//! vertex.

use crate::error::{Error, Result};
use crate::geodata::config::SchemeConfig;
use crate::geodata::raster::RasterGrid;
use crate::geodata::vector::{Geometry, VectorKind, VectorLayer};
use crate::geometry::{polygon_area, polygon_centroid, Point};
use crate::terrain::{
    mean_polygon_elevation, sample_elevation, CandidateKind, Discard, DiscardReason,
    ReservoirCandidate,
};

/// Builds Lake candidates from a polygon layer. Polygons failing the area or
/// elevation screens (or falling off the DEM) are reported as discards;
/// zero-area polygons are a hard error. Candidate ids are the source feature
/// ids; features are processed in ascending id order.
pub fn lake_candidates(
    lakes: &VectorLayer,
    dem: &RasterGrid,
    cfg: &SchemeConfig,
) -> Result<(Vec<ReservoirCandidate>, Vec<Discard>)> {
    if lakes.kind != VectorKind::Polygon {
        return Err(Error::Domain(format!(
            "lake layer must contain polygons, got {}",
            lakes.kind
        )));
    }
    let mut features: Vec<_> = lakes.features.iter().collect();
    features.sort_by_key(|f| f.id);

    let mut candidates = Vec::new();
    let mut discards = Vec::new();
    for feature in features {
        let Geometry::Polygon(rings) = &feature.geometry else {
            unreachable!("layer kind validated")
        };
        let area = polygon_area(rings);
        if area == 0.0 {
            return Err(Error::Domain(format!("zero-area polygon (feature {})", feature.id)));
        }
        if area < cfg.min_area_m2 {
            discards.push(Discard {
                kind: CandidateKind::Lake,
                id: feature.id,
                reason: DiscardReason::Area,
                detail: format!("area_m2={area}"),
            });
            continue;
        }
        let elevation = match mean_polygon_elevation(dem, rings) {
            Ok(e) => e,
            Err(_) => {
                discards.push(Discard {
                    kind: CandidateKind::Lake,
                    id: feature.id,
                    reason: DiscardReason::NoData,
                    detail: "no usable DEM cells under polygon".into(),
                });
                continue;
            }
        };
        if elevation > cfg.elevation_cap_m {
            discards.push(Discard {
                kind: CandidateKind::Lake,
                id: feature.id,
                reason: DiscardReason::Elevation,
                detail: format!("elevation_m={elevation}"),
            });
            continue;
        }
        let centroid = polygon_centroid(rings).ok_or_else(|| {
            Error::Invariant(format!("polygon {} has area but no centroid", feature.id))
        })?;
        if dem.cell_at(centroid).is_none() {
            discards.push(Discard {
                kind: CandidateKind::Lake,
                id: feature.id,
                reason: DiscardReason::OutsideDem,
                detail: "centroid outside DEM extent".into(),
            });
            continue;
        }
        candidates.push(ReservoirCandidate {
            id: feature.id,
            kind: CandidateKind::Lake,
            centroid,
            surface_area_m2: Some(area),
            elevation_m: elevation,
        });
    }
    Ok((candidates, discards))
}

/// Position at arc length `s` along `verts`, interpolating linearly within
/// segments. `s` must not exceed the total length.
fn point_at_chainage(verts: &[Point], s: f64) -> Point {
    let mut remaining = s;
    for w in verts.windows(2) {
        let seg = w[0].distance(w[1]);
        if seg == 0.0 {
            continue;
        }
        if remaining <= seg {
            let t = remaining / seg;
            return Point::new(w[0].x + t * (w[1].x - w[0].x), w[0].y + t * (w[1].y - w[0].y));
        }
        remaining -= seg;
    }
    *verts.last().expect("polyline has vertices")
}

fn polyline_length(verts: &[Point]) -> f64 {
    verts.windows(2).map(|w| w[0].distance(w[1])).sum()
}

/// Densifies river polylines into RiverPoint candidates at chainages
/// 0, interval, 2*interval, ... from each polyline's first vertex. Points on
/// NODATA, off the DEM, or above the elevation cap are reported as discards.
///
/// Ids are 1-based ordinals over all generated points, ordered by feature id
/// then chainage, and are assigned before elevation screening, so they
/// depend only on the river layer and the interval.
pub fn densify_river_points(
    rivers: &VectorLayer,
    dem: &RasterGrid,
    cfg: &SchemeConfig,
) -> Result<(Vec<ReservoirCandidate>, Vec<Discard>)> {
    if rivers.kind != VectorKind::Polyline {
        return Err(Error::Domain(format!(
            "river layer must contain polylines, got {}",
            rivers.kind
        )));
    }
    let mut features: Vec<_> = rivers.features.iter().collect();
    features.sort_by_key(|f| f.id);

    let interval = cfg.river_interval_m;
    let mut candidates = Vec::new();
    let mut discards = Vec::new();
    let mut next_id = 0i64;
    for feature in features {
        let Geometry::Polyline(verts) = &feature.geometry else {
            unreachable!("layer kind validated")
        };
        let total = polyline_length(verts);
        // Tolerate cumulative rounding when the line ends exactly on a mark.
        let eps = 1e-9 * total.max(1.0);
        let mut k = 0u64;
        loop {
            let s = k as f64 * interval;
            if s > total + eps {
                break;
            }
            next_id += 1;
            let p = point_at_chainage(verts, s.min(total));
            match sample_elevation(dem, p) {
                Ok(elevation) if elevation > cfg.elevation_cap_m => {
                    discards.push(Discard {
                        kind: CandidateKind::RiverPoint,
                        id: next_id,
                        reason: DiscardReason::Elevation,
                        detail: format!("river={} chainage_m={s} elevation_m={elevation}", feature.id),
                    });
                }
                Ok(elevation) => {
                    candidates.push(ReservoirCandidate {
                        id: next_id,
                        kind: CandidateKind::RiverPoint,
                        centroid: p,
                        surface_area_m2: None,
                        elevation_m: elevation,
                    });
                }
                Err(e) => {
                    let reason = if e.to_string().contains("outside DEM") {
                        DiscardReason::OutsideDem
                    } else {
                        DiscardReason::NoData
                    };
                    discards.push(Discard {
                        kind: CandidateKind::RiverPoint,
                        id: next_id,
                        reason,
                        detail: format!("river={} chainage_m={s}", feature.id),
                    });
                }
            }
            k += 1;
        }
    }
    Ok((candidates, discards))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodata::vector::Feature;

    fn dem_1500() -> RasterGrid {
        RasterGrid::new(60, 60, 0.0, 0.0, 100.0, -9999.0, vec![1500.0; 3600]).unwrap()
    }

    fn square_ring(x0: f64, y0: f64, side: f64) -> Vec<Point> {
        vec![
            Point::new(x0, y0),
            Point::new(x0 + side, y0),
            Point::new(x0 + side, y0 + side),
            Point::new(x0, y0 + side),
            Point::new(x0, y0),
        ]
    }

    fn polygon_layer(polys: Vec<(i64, Vec<Vec<Point>>)>) -> VectorLayer {
        let features = polys
            .into_iter()
            .map(|(id, rings)| Feature { id, name: None, geometry: Geometry::Polygon(rings) })
            .collect();
        VectorLayer::new(VectorKind::Polygon, features).unwrap()
    }

    fn polyline_layer(lines: Vec<(i64, Vec<Point>)>) -> VectorLayer {
        let features = lines
            .into_iter()
            .map(|(id, verts)| Feature { id, name: None, geometry: Geometry::Polyline(verts) })
            .collect();
        VectorLayer::new(VectorKind::Polyline, features).unwrap()
    }

    #[test]
    fn large_low_lake_kept() {
        let layer = polygon_layer(vec![(1, vec![square_ring(1000.0, 1000.0, 300.0)])]);
        let (cands, discards) =
            lake_candidates(&layer, &dem_1500(), &SchemeConfig::default()).unwrap();
        assert_eq!(cands.len(), 1);
        assert!(discards.is_empty());
        assert_eq!(cands[0].surface_area_m2.unwrap(), 90_000.0);
        assert_eq!(cands[0].elevation_m, 1500.0);
        assert_eq!((cands[0].centroid.x, cands[0].centroid.y), (1150.0, 1150.0));
    }

    #[test]
    fn small_lake_discarded_for_area() {
        let layer = polygon_layer(vec![(4, vec![square_ring(1000.0, 1000.0, 200.0)])]);
        let (cands, discards) =
            lake_candidates(&layer, &dem_1500(), &SchemeConfig::default()).unwrap();
        assert!(cands.is_empty());
        assert_eq!(discards[0].reason, DiscardReason::Area);
        assert_eq!(discards[0].id, 4);
    }

    #[test]
    fn high_lake_discarded_for_elevation() {
        let dem = RasterGrid::new(60, 60, 0.0, 0.0, 100.0, -9999.0, vec![5200.0; 3600]).unwrap();
        let layer = polygon_layer(vec![(2, vec![square_ring(1000.0, 1000.0, 300.0)])]);
        let (cands, discards) = lake_candidates(&layer, &dem, &SchemeConfig::default()).unwrap();
        assert!(cands.is_empty());
        assert_eq!(discards[0].reason, DiscardReason::Elevation);
    }

    #[test]
    fn zero_area_polygon_is_hard_error() {
        let degenerate = vec![
            Point::new(0.0, 0.0),
            Point::new(100.0, 0.0),
            Point::new(0.0, 0.0),
            Point::new(0.0, 0.0),
        ];
        let layer = polygon_layer(vec![(9, vec![degenerate])]);
        let err = lake_candidates(&layer, &dem_1500(), &SchemeConfig::default()).unwrap_err();
        assert!(err.to_string().contains("zero-area polygon (feature 9)"));
    }

    #[test]
    fn straight_line_densifies_at_interval() {
        let layer =
            polyline_layer(vec![(1, vec![Point::new(100.0, 100.0), Point::new(3600.0, 100.0)])]);
        let (cands, _) =
            densify_river_points(&layer, &dem_1500(), &SchemeConfig::default()).unwrap();
        assert_eq!(cands.len(), 4);
        let xs: Vec<f64> = cands.iter().map(|c| c.centroid.x).collect();
        assert_eq!(xs, vec![100.0, 1100.0, 2100.0, 3100.0]);
        assert_eq!(cands.iter().map(|c| c.id).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn exact_kilometer_line_keeps_terminal_point() {
        let layer =
            polyline_layer(vec![(1, vec![Point::new(0.0, 100.0), Point::new(1000.0, 100.0)])]);
        let (cands, _) =
            densify_river_points(&layer, &dem_1500(), &SchemeConfig::default()).unwrap();
        assert_eq!(cands.len(), 2);
        assert_eq!(cands[1].centroid.x, 1000.0);
    }

    #[test]
    fn short_line_gets_origin_point_only() {
        let layer =
            polyline_layer(vec![(1, vec![Point::new(0.0, 100.0), Point::new(999.0, 100.0)])]);
        let (cands, _) =
            densify_river_points(&layer, &dem_1500(), &SchemeConfig::default()).unwrap();
        assert_eq!(cands.len(), 1);
        assert_eq!(cands[0].centroid.x, 0.0);
    }

    #[test]
    fn bent_line_measures_arc_length() {
        // Two 500 m legs: the 1000 m mark is the far end of the second leg.
        let layer = polyline_layer(vec![(
            1,
            vec![Point::new(0.0, 0.5), Point::new(500.0, 0.5), Point::new(500.0, 500.5)],
        )]);
        let (cands, _) =
            densify_river_points(&layer, &dem_1500(), &SchemeConfig::default()).unwrap();
        assert_eq!(cands.len(), 2);
        assert_eq!((cands[1].centroid.x, cands[1].centroid.y), (500.0, 500.5));
    }

    #[test]
    fn offgrid_points_discarded_with_ids_consumed() {
        // Line starts inside and runs off the eastern edge (extent 6000 m).
        let layer =
            polyline_layer(vec![(1, vec![Point::new(4500.0, 100.0), Point::new(8500.0, 100.0)])]);
        let (cands, discards) =
            densify_river_points(&layer, &dem_1500(), &SchemeConfig::default()).unwrap();
        assert_eq!(cands.len(), 2); // chainage 0 and 1000
        assert_eq!(discards.len(), 3); // 2000, 3000, 4000 beyond the extent
        assert!(discards.iter().all(|d| d.reason == DiscardReason::OutsideDem));
        assert_eq!(cands.iter().map(|c| c.id).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(discards.iter().map(|d| d.id).collect::<Vec<_>>(), vec![3, 4, 5]);
    }

    #[test]
    fn reversal_preserves_point_count() {
        let verts = vec![
            Point::new(0.0, 0.5),
            Point::new(1234.0, 77.5),
            Point::new(2500.0, 900.5),
            Point::new(4000.0, 1500.5),
        ];
        let mut rev = verts.clone();
        rev.reverse();
        let cfg = SchemeConfig::default();
        let (fwd, _) =
            densify_river_points(&polyline_layer(vec![(1, verts)]), &dem_1500(), &cfg).unwrap();
        let (bwd, _) =
            densify_river_points(&polyline_layer(vec![(1, rev)]), &dem_1500(), &cfg).unwrap();
        assert_eq!(fwd.len(), bwd.len());
    }
}
