//! Feature-collection (GeoJSON-style) vector layers in planar meters.
//!
//! A layer declares one geometry kind; documents mixing geometry types are
//! rejected. Every feature needs an integer `id` property, unique within the
//! layer.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorKind {
    Point,
    Polyline,
    Polygon,
}

impl fmt::Display for VectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VectorKind::Point => "Point",
            VectorKind::Polyline => "Polyline",
            VectorKind::Polygon => "Polygon",
        })
    }
}

#[derive(Debug, Clone)]
pub enum Geometry {
    Point(Point),
    /// Ordered vertices; at least two.
    Polyline(Vec<Point>),
    /// Rings: the first is the exterior, the rest are holes. Each ring is
    /// closed (first vertex equals last) with at least four vertices.
    Polygon(Vec<Vec<Point>>),
}

impl Geometry {
    pub fn kind(&self) -> VectorKind {
        match self {
            Geometry::Point(_) => VectorKind::Point,
            Geometry::Polyline(_) => VectorKind::Polyline,
            Geometry::Polygon(_) => VectorKind::Polygon,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Feature {
    pub id: i64,
    pub name: Option<String>,
    pub geometry: Geometry,
}

#[derive(Debug, Clone)]
pub struct VectorLayer {
    pub kind: VectorKind,
    pub features: Vec<Feature>,
}

impl VectorLayer {
    /// Builds a layer and validates all invariants: geometry kinds match the
    /// declared kind, feature ids are unique, polylines have at least two
    /// vertices, and polygon rings are closed with at least four vertices.
    pub fn new(kind: VectorKind, features: Vec<Feature>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for feature in &features {
            if feature.geometry.kind() != kind {
                return Err(Error::VectorParse(format!(
                    "geometry type '{}' does not match declared layer kind '{}' (feature {})",
                    feature.geometry.kind(),
                    kind,
                    feature.id
                )));
            }
            if !seen.insert(feature.id) {
                return Err(Error::VectorParse(format!("duplicate feature id {}", feature.id)));
            }
            match &feature.geometry {
                Geometry::Point(p) => {
                    if !p.x.is_finite() || !p.y.is_finite() {
                        return Err(Error::VectorParse(format!(
                            "non-finite coordinate in feature {}",
                            feature.id
                        )));
                    }
                }
                Geometry::Polyline(verts) => {
                    if verts.len() < 2 {
                        return Err(Error::VectorParse(format!(
                            "degenerate polyline in feature {}",
                            feature.id
                        )));
                    }
                    check_finite(verts, feature.id)?;
                }
                Geometry::Polygon(rings) => {
                    if rings.is_empty() {
                        return Err(Error::VectorParse(format!(
                            "polygon with no rings in feature {}",
                            feature.id
                        )));
                    }
                    for ring in rings {
                        if ring.len() < 4 {
                            return Err(Error::VectorParse(format!(
                                "degenerate ring in feature {}",
                                feature.id
                            )));
                        }
                        if ring.first().map(|p| (p.x, p.y)) != ring.last().map(|p| (p.x, p.y)) {
                            return Err(Error::VectorParse(format!(
                                "unclosed ring in feature {}",
                                feature.id
                            )));
                        }
                        check_finite(ring, feature.id)?;
                    }
                }
            }
        }
        Ok(VectorLayer { kind, features })
    }

    pub fn empty(kind: VectorKind) -> Self {
        VectorLayer { kind, features: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

fn check_finite(points: &[Point], id: i64) -> Result<()> {
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::VectorParse(format!("non-finite coordinate in feature {id}")));
    }
    Ok(())
}

#[derive(Deserialize)]
struct DocRoot {
    #[serde(rename = "type")]
    doc_type: String,
    features: Vec<DocFeature>,
}

#[derive(Deserialize)]
struct DocFeature {
    #[serde(rename = "type")]
    feature_type: Option<String>,
    properties: Option<serde_json::Map<String, Value>>,
    geometry: Option<DocGeometry>,
}

#[derive(Deserialize)]
struct DocGeometry {
    #[serde(rename = "type")]
    geom_type: String,
    coordinates: Value,
}

fn value_to_point(v: &Value, ctx: &str) -> Result<Point> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::VectorParse(format!("expected a coordinate pair in {ctx}")))?;
    if arr.len() < 2 {
        return Err(Error::VectorParse(format!("coordinate with fewer than 2 values in {ctx}")));
    }
    let x = arr[0]
        .as_f64()
        .ok_or_else(|| Error::VectorParse(format!("non-numeric coordinate in {ctx}")))?;
    let y = arr[1]
        .as_f64()
        .ok_or_else(|| Error::VectorParse(format!("non-numeric coordinate in {ctx}")))?;
    Ok(Point::new(x, y))
}

fn value_to_points(v: &Value, ctx: &str) -> Result<Vec<Point>> {
    v.as_array()
        .ok_or_else(|| Error::VectorParse(format!("expected a coordinate array in {ctx}")))?
        .iter()
        .map(|p| value_to_point(p, ctx))
        .collect()
}

/// Parses a feature-collection document whose geometries must all match the
/// declared `kind`.
pub fn parse_vector_layer(text: &str, kind: VectorKind) -> Result<VectorLayer> {
    let doc: DocRoot = serde_json::from_str(text)
        .map_err(|e| Error::VectorParse(format!("invalid feature collection: {e}")))?;
    if doc.doc_type != "FeatureCollection" {
        return Err(Error::VectorParse(format!(
            "expected a FeatureCollection document, got '{}'",
            doc.doc_type
        )));
    }
    let mut features = Vec::with_capacity(doc.features.len());
    for (index, feat) in doc.features.into_iter().enumerate() {
        if let Some(t) = &feat.feature_type {
            if t != "Feature" {
                return Err(Error::VectorParse(format!(
                    "feature {index}: expected type 'Feature', got '{t}'"
                )));
            }
        }
        let props = feat
            .properties
            .ok_or_else(|| Error::VectorParse(format!("feature {index}: missing properties")))?;
        let id = props
            .get("id")
            .and_then(Value::as_i64)
            .ok_or_else(|| {
                Error::VectorParse(format!("feature {index}: missing integer property 'id'"))
            })?;
        let name = props.get("name").and_then(Value::as_str).map(str::to_owned);
        let geom = feat
            .geometry
            .ok_or_else(|| Error::VectorParse(format!("feature {id}: missing geometry")))?;
        let ctx = format!("feature {id}");
        let geometry = match geom.geom_type.as_str() {
            "Point" => Geometry::Point(value_to_point(&geom.coordinates, &ctx)?),
            "LineString" => Geometry::Polyline(value_to_points(&geom.coordinates, &ctx)?),
            "Polygon" => {
                let rings = geom
                    .coordinates
                    .as_array()
                    .ok_or_else(|| Error::VectorParse(format!("expected ring array in {ctx}")))?
                    .iter()
                    .map(|r| value_to_points(r, &ctx))
                    .collect::<Result<Vec<_>>>()?;
                Geometry::Polygon(rings)
            }
            other => {
                return Err(Error::VectorParse(format!(
                    "unsupported geometry type '{other}' in {ctx}"
                )))
            }
        };
        features.push(Feature { id, name, geometry });
    }
    VectorLayer::new(kind, features)
}

pub fn read_vector_layer_file(path: &Path, kind: VectorKind) -> Result<VectorLayer> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_vector_layer(&text, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fc(features: &str) -> String {
        format!(r#"{{"type":"FeatureCollection","features":[{features}]}}"#)
    }

    #[test]
    fn square_polygon_parses() {
        let text = fc(
            r#"{"type":"Feature","properties":{"id":1},"geometry":{"type":"Polygon","coordinates":[[[0,0],[100,0],[100,100],[0,100],[0,0]]]}}"#,
        );
        let layer = parse_vector_layer(&text, VectorKind::Polygon).unwrap();
        assert_eq!(layer.features.len(), 1);
        assert_eq!(layer.features[0].id, 1);
    }

    #[test]
    fn single_vertex_polyline_rejected() {
        let text = fc(
            r#"{"type":"Feature","properties":{"id":1},"geometry":{"type":"LineString","coordinates":[[0,0]]}}"#,
        );
        let err = parse_vector_layer(&text, VectorKind::Polyline).unwrap_err();
        assert!(err.to_string().contains("degenerate polyline"));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let text = fc(
            r#"{"type":"Feature","properties":{"id":7},"geometry":{"type":"Point","coordinates":[0,0]}},
               {"type":"Feature","properties":{"id":7},"geometry":{"type":"Point","coordinates":[1,1]}}"#,
        );
        let err = parse_vector_layer(&text, VectorKind::Point).unwrap_err();
        assert!(err.to_string().contains("duplicate feature id 7"));
    }

    #[test]
    fn unclosed_ring_rejected() {
        let text = fc(
            r#"{"type":"Feature","properties":{"id":1},"geometry":{"type":"Polygon","coordinates":[[[0,0],[100,0],[100,100],[0,100]]]}}"#,
        );
        let err = parse_vector_layer(&text, VectorKind::Polygon).unwrap_err();
        assert!(err.to_string().contains("unclosed ring"));
    }

    #[test]
    fn mixed_geometry_types_rejected() {
        let text = fc(
            r#"{"type":"Feature","properties":{"id":1},"geometry":{"type":"Point","coordinates":[0,0]}},
               {"type":"Feature","properties":{"id":2},"geometry":{"type":"LineString","coordinates":[[0,0],[1,1]]}}"#,
        );
        let err = parse_vector_layer(&text, VectorKind::Point).unwrap_err();
        assert!(err.to_string().contains("does not match declared layer kind"));
    }

    #[test]
    fn missing_id_rejected() {
        let text = fc(
            r#"{"type":"Feature","properties":{"name":"x"},"geometry":{"type":"Point","coordinates":[0,0]}}"#,
        );
        let err = parse_vector_layer(&text, VectorKind::Point).unwrap_err();
        assert!(err.to_string().contains("missing integer property 'id'"));
    }
}
