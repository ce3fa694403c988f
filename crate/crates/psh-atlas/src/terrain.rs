//! Slope derivation, flat-land extraction, and elevation sampling on the DEM.
//!
//! Slope uses Horn's 3x3 weighted finite-difference gradient and is reported
//! as percent slope (100 * tan of the slope angle). Cells on the border or
//! adjacent to NODATA get NODATA rather than a one-sided estimate. Flat lands
//! are 8-connected components of cells under the slope threshold and at or
//! below the elevation cap.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geodata::config::SchemeConfig;
use crate::geodata::raster::RasterGrid;
use crate::geometry::{point_in_rings, Point};

/// What a candidate reservoir is made of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CandidateKind {
    Lake,
    FlatLand,
    RiverPoint,
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateKind::Lake => "Lake",
            CandidateKind::FlatLand => "FlatLand",
            CandidateKind::RiverPoint => "RiverPoint",
        })
    }
}

/// A lake, flat-land polygon, or river point eligible for pairing.
///
/// Ids are unique within each kind: lakes carry their source feature id,
/// flat lands their component discovery ordinal, river points their
/// densification ordinal.
#[derive(Debug, Clone)]
pub struct ReservoirCandidate {
    pub id: i64,
    pub kind: CandidateKind,
    pub centroid: Point,
    /// Absent for river points; their volume comes from the partner.
    pub surface_area_m2: Option<f64>,
    pub elevation_m: f64,
}

/// Why a would-be candidate was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscardReason {
    Area,
    Elevation,
    NoData,
    OutsideDem,
}

impl fmt::Display for DiscardReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiscardReason::Area => "area",
            DiscardReason::Elevation => "elevation",
            DiscardReason::NoData => "nodata",
            DiscardReason::OutsideDem => "outside_dem",
        })
    }
}

/// Audit record for a dropped candidate.
#[derive(Debug, Clone)]
pub struct Discard {
    pub kind: CandidateKind,
    pub id: i64,
    pub reason: DiscardReason,
    pub detail: String,
}

/// Computes percent slope with Horn's 3x3 kernel. Interior cells with a full
/// neighborhood of data get `100 * sqrt((dz/dx)^2 + (dz/dy)^2)`; everything
/// else is NODATA.
pub fn compute_slope(dem: &RasterGrid) -> Result<RasterGrid> {
    let (ncols, nrows) = (dem.ncols(), dem.nrows());
    if ncols < 3 || nrows < 3 {
        return Err(Error::Domain("grid too small for slope".into()));
    }
    let nodata = dem.nodata();
    let cellsize = dem.cellsize();
    let mut out = vec![nodata; ncols * nrows];

    // Row blocks are independent, so the parallel fill is byte-identical to
    // the sequential one.
    out.par_chunks_mut(ncols).enumerate().for_each(|(row, out_row)| {
        if row == 0 || row == nrows - 1 {
            return;
        }
        for col in 1..ncols - 1 {
            let mut z = [[0.0f64; 3]; 3];
            let mut any_nodata = false;
            for (dr, zrow) in z.iter_mut().enumerate() {
                for (dc, zv) in zrow.iter_mut().enumerate() {
                    let v = dem.value(col + dc - 1, row + dr - 1);
                    if v == nodata {
                        any_nodata = true;
                    }
                    *zv = v;
                }
            }
            if any_nodata {
                continue;
            }
            // z[dr][dc]: dr = 0 south row, 2 north row; dc = 0 west, 2 east.
            let dzdx = ((z[0][2] + 2.0 * z[1][2] + z[2][2])
                - (z[0][0] + 2.0 * z[1][0] + z[2][0]))
                / (8.0 * cellsize);
            let dzdy = ((z[2][0] + 2.0 * z[2][1] + z[2][2])
                - (z[0][0] + 2.0 * z[0][1] + z[0][2]))
                / (8.0 * cellsize);
            out_row[col] = 100.0 * (dzdx * dzdx + dzdy * dzdy).sqrt();
        }
    });

    RasterGrid::new(ncols, nrows, dem.x_origin(), dem.y_origin(), cellsize, nodata, out)
}

/// Extracts flat-land candidates: 8-connected components of cells with
/// slope strictly below the threshold and elevation at or below the cap.
/// Components smaller than the minimum area are reported as discards.
/// Candidate ids are 1-based component discovery ordinals in row-major scan
/// order (discarded components consume ids too).
pub fn extract_flatlands(
    slope: &RasterGrid,
    dem: &RasterGrid,
    cfg: &SchemeConfig,
) -> Result<(Vec<ReservoirCandidate>, Vec<Discard>)> {
    if !slope.same_geometry(dem) {
        return Err(Error::Domain(
            "slope and DEM grids are not co-registered".into(),
        ));
    }
    let (ncols, nrows) = (dem.ncols(), dem.nrows());
    let mask: Vec<bool> = (0..ncols * nrows)
        .map(|i| {
            let (col, row) = (i % ncols, i / ncols);
            !slope.is_nodata(col, row)
                && slope.value(col, row) < cfg.slope_threshold_pct
                && !dem.is_nodata(col, row)
                && dem.value(col, row) <= cfg.elevation_cap_m
        })
        .collect();

    let cell_area = dem.cellsize() * dem.cellsize();
    let mut visited = vec![false; ncols * nrows];
    let mut candidates = Vec::new();
    let mut discards = Vec::new();
    let mut next_id = 0i64;
    let mut stack = Vec::new();

    for start in 0..ncols * nrows {
        if !mask[start] || visited[start] {
            continue;
        }
        next_id += 1;
        let mut count = 0usize;
        let mut elev_sum = 0.0f64;
        let mut cx_sum = 0.0f64;
        let mut cy_sum = 0.0f64;
        visited[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (col, row) = (idx % ncols, idx / ncols);
            count += 1;
            elev_sum += dem.value(col, row);
            let c = dem.cell_center(col, row);
            cx_sum += c.x;
            cy_sum += c.y;
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (nc, nr) = (col as i64 + dc, row as i64 + dr);
                    if nc < 0 || nr < 0 || nc >= ncols as i64 || nr >= nrows as i64 {
                        continue;
                    }
                    let nidx = nr as usize * ncols + nc as usize;
                    if mask[nidx] && !visited[nidx] {
                        visited[nidx] = true;
                        stack.push(nidx);
                    }
                }
            }
        }
        let area = count as f64 * cell_area;
        if area < cfg.min_area_m2 {
            discards.push(Discard {
                kind: CandidateKind::FlatLand,
                id: next_id,
                reason: DiscardReason::Area,
                detail: format!("area_m2={area}"),
            });
            continue;
        }
        candidates.push(ReservoirCandidate {
            id: next_id,
            kind: CandidateKind::FlatLand,
            centroid: Point::new(cx_sum / count as f64, cy_sum / count as f64),
            surface_area_m2: Some(area),
            elevation_m: elev_sum / count as f64,
        });
    }

    Ok((candidates, discards))
}

/// Nearest-cell elevation at `p`: the value of the cell containing the
/// point, with no interpolation.
pub fn sample_elevation(dem: &RasterGrid, p: Point) -> Result<f64> {
    let (col, row) = dem.cell_at(p).ok_or_else(|| {
        Error::Domain(format!("point ({}, {}) outside DEM", p.x, p.y))
    })?;
    if dem.is_nodata(col, row) {
        return Err(Error::Domain(format!(
            "point ({}, {}) falls on a NODATA cell",
            p.x, p.y
        )));
    }
    Ok(dem.value(col, row))
}

/// Arithmetic mean of DEM values at the cell centers inside the polygon
/// (even-odd rule). Errors when no non-NODATA cell center is covered.
pub fn mean_polygon_elevation(dem: &RasterGrid, rings: &[Vec<Point>]) -> Result<f64> {
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for ring in rings {
        for p in ring {
            min_x = min_x.min(p.x);
            min_y = min_y.min(p.y);
            max_x = max_x.max(p.x);
            max_y = max_y.max(p.y);
        }
    }
    if !min_x.is_finite() {
        return Err(Error::Domain("polygon has no vertices".into()));
    }

    let cellsize = dem.cellsize();
    let col_lo = (((min_x - dem.x_origin()) / cellsize).floor().max(0.0)) as usize;
    let row_lo = (((min_y - dem.y_origin()) / cellsize).floor().max(0.0)) as usize;
    let col_hi_f = ((max_x - dem.x_origin()) / cellsize).floor();
    let row_hi_f = ((max_y - dem.y_origin()) / cellsize).floor();
    if col_hi_f < 0.0 || row_hi_f < 0.0 || col_lo >= dem.ncols() || row_lo >= dem.nrows() {
        return Err(Error::Domain("polygon covers no usable DEM cells".into()));
    }
    let col_hi = (col_hi_f as usize).min(dem.ncols() - 1);
    let row_hi = (row_hi_f as usize).min(dem.nrows() - 1);

    let mut sum = 0.0;
    let mut count = 0usize;
    for row in row_lo..=row_hi {
        for col in col_lo..=col_hi {
            if dem.is_nodata(col, row) {
                continue;
            }
            if point_in_rings(dem.cell_center(col, row), rings) {
                sum += dem.value(col, row);
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::Domain("polygon covers no usable DEM cells".into()));
    }
    Ok(sum / count as f64)
}
