//! ESRI ASCII grid reading and writing.
//!
//! Grids are stored row-major with row 0 at the grid's southern edge (the
//! `YLLCORNER` row); the first data row of the text format is the
//! northernmost row. Header keys are case-insensitive and may appear in any
//! order; all six (`NCOLS`, `NROWS`, `XLLCORNER`, `YLLCORNER`, `CELLSIZE`,
//! `NODATA_VALUE`) are required.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point;

/// A regular grid of cell values in a projected planar coordinate system.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid {
    ncols: usize,
    nrows: usize,
    x_origin: f64,
    y_origin: f64,
    cellsize: f64,
    nodata: f64,
    values: Vec<f64>,
}

impl RasterGrid {
    /// Builds a grid, enforcing the type invariants: positive dimensions and
    /// cellsize, value count `ncols * nrows`, and every non-nodata value
    /// finite.
    pub fn new(
        ncols: usize,
        nrows: usize,
        x_origin: f64,
        y_origin: f64,
        cellsize: f64,
        nodata: f64,
        values: Vec<f64>,
    ) -> Result<Self> {
        if ncols == 0 || nrows == 0 {
            return Err(Error::Domain("raster dimensions must be at least 1x1".into()));
        }
        if !(cellsize > 0.0) || !cellsize.is_finite() {
            return Err(Error::Domain("raster cellsize must be positive".into()));
        }
        if !x_origin.is_finite() || !y_origin.is_finite() {
            return Err(Error::Domain("raster origin must be finite".into()));
        }
        if !nodata.is_finite() {
            return Err(Error::Domain("raster nodata sentinel must be finite".into()));
        }
        if values.len() != ncols * nrows {
            return Err(Error::Domain(format!(
                "raster value count {} does not match {}x{}",
                values.len(),
                ncols,
                nrows
            )));
        }
        if values.iter().any(|v| !v.is_finite() && *v != nodata) {
            return Err(Error::Domain("raster contains a non-finite value".into()));
        }
        Ok(RasterGrid { ncols, nrows, x_origin, y_origin, cellsize, nodata, values })
    }

    /// Builds a grid by evaluating `f` at every cell center.
    pub fn from_fn(
        ncols: usize,
        nrows: usize,
        x_origin: f64,
        y_origin: f64,
        cellsize: f64,
        nodata: f64,
        f: impl Fn(Point) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(ncols * nrows);
        for row in 0..nrows {
            for col in 0..ncols {
                let cx = x_origin + (col as f64 + 0.5) * cellsize;
                let cy = y_origin + (row as f64 + 0.5) * cellsize;
                values.push(f(Point::new(cx, cy)));
            }
        }
        Self::new(ncols, nrows, x_origin, y_origin, cellsize, nodata, values)
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn x_origin(&self) -> f64 {
        self.x_origin
    }

    pub fn y_origin(&self) -> f64 {
        self.y_origin
    }

    pub fn cellsize(&self) -> f64 {
        self.cellsize
    }

    pub fn nodata(&self) -> f64 {
        self.nodata
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at (col, row); row 0 is the southernmost row.
    pub fn value(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.ncols + col]
    }

    pub fn set(&mut self, col: usize, row: usize, v: f64) {
        self.values[row * self.ncols + col] = v;
    }

    pub fn is_nodata(&self, col: usize, row: usize) -> bool {
        self.value(col, row) == self.nodata
    }

    /// Center of cell (col, row) in world coordinates.
    pub fn cell_center(&self, col: usize, row: usize) -> Point {
        Point::new(
            self.x_origin + (col as f64 + 0.5) * self.cellsize,
            self.y_origin + (row as f64 + 0.5) * self.cellsize,
        )
    }

    /// Cell containing `p`, or `None` when `p` falls outside the grid
    /// extent. Points exactly on the top or right extent edge are outside.
    pub fn cell_at(&self, p: Point) -> Option<(usize, usize)> {
        let fx = (p.x - self.x_origin) / self.cellsize;
        let fy = (p.y - self.y_origin) / self.cellsize;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let col = fx.floor() as usize;
        let row = fy.floor() as usize;
        if col >= self.ncols || row >= self.nrows {
            return None;
        }
        Some((col, row))
    }

    pub fn x_max(&self) -> f64 {
        self.x_origin + self.ncols as f64 * self.cellsize
    }

    pub fn y_max(&self) -> f64 {
        self.y_origin + self.nrows as f64 * self.cellsize
    }

    /// True when the two grids share dimensions, origin, and cellsize.
    pub fn same_geometry(&self, other: &RasterGrid) -> bool {
        self.ncols == other.ncols
            && self.nrows == other.nrows
            && self.x_origin == other.x_origin
            && self.y_origin == other.y_origin
            && self.cellsize == other.cellsize
    }
}

const HEADER_KEYS: [&str; 6] =
    ["ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"];

fn header_int(header: &BTreeMap<String, (f64, usize)>, key: &str) -> Result<usize> {
    let (v, line) = header[key];
    if v.fract() != 0.0 || v < 1.0 || v > usize::MAX as f64 {
        return Err(Error::RasterParse {
            line,
            msg: format!("invalid value {v} for header key '{key}'"),
        });
    }
    Ok(v as usize)
}

/// Parses an ESRI ASCII grid. Every malformed input yields a diagnostic with
/// a 1-based line number; a partial grid is never returned.
pub fn parse_ascii_grid(text: &str) -> Result<RasterGrid> {
    let mut header: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut last_line = 0usize;

    while header.len() < HEADER_KEYS.len() {
        let Some((idx, line)) = lines.next() else {
            let missing = HEADER_KEYS
                .iter()
                .find(|k| !header.contains_key(**k))
                .expect("some key missing");
            return Err(Error::RasterParse {
                line: last_line + 1,
                msg: format!("missing header key '{missing}'"),
            });
        };
        let line_no = idx + 1;
        last_line = line_no;
        let mut tokens = line.split_whitespace();
        let key = tokens.next().expect("non-empty line").to_ascii_lowercase();
        if !HEADER_KEYS.contains(&key.as_str()) {
            return Err(Error::RasterParse {
                line: line_no,
                msg: format!("malformed header key '{key}'"),
            });
        }
        if header.contains_key(&key) {
            return Err(Error::RasterParse {
                line: line_no,
                msg: format!("duplicate header key '{key}'"),
            });
        }
        let Some(value_tok) = tokens.next() else {
            return Err(Error::RasterParse {
                line: line_no,
                msg: format!("missing value for header key '{key}'"),
            });
        };
        if tokens.next().is_some() {
            return Err(Error::RasterParse {
                line: line_no,
                msg: format!("unexpected extra tokens after header key '{key}'"),
            });
        }
        let value: f64 = value_tok.parse().map_err(|_| Error::RasterParse {
            line: line_no,
            msg: format!("non-numeric token '{value_tok}'"),
        })?;
        header.insert(key, (value, line_no));
    }

    let ncols = header_int(&header, "ncols")?;
    let nrows = header_int(&header, "nrows")?;
    let (cellsize, cs_line) = header["cellsize"];
    if !(cellsize > 0.0) || !cellsize.is_finite() {
        return Err(Error::RasterParse {
            line: cs_line,
            msg: format!("invalid value {cellsize} for header key 'cellsize'"),
        });
    }
    let (nodata, nd_line) = header["nodata_value"];
    if !nodata.is_finite() {
        return Err(Error::RasterParse {
            line: nd_line,
            msg: "nodata sentinel must be finite".into(),
        });
    }
    let x_origin = header["xllcorner"].0;
    let y_origin = header["yllcorner"].0;

    // Data rows arrive north-first; store them south-first.
    let mut values = vec![0.0f64; ncols * nrows];
    let mut rows_read = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        last_line = line_no;
        if rows_read == nrows {
            return Err(Error::RasterParse {
                line: line_no,
                msg: format!("count mismatch: expected {nrows} data rows, found extra data"),
            });
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != ncols {
            return Err(Error::RasterParse {
                line: line_no,
                msg: "row length mismatch".into(),
            });
        }
        let target_row = nrows - 1 - rows_read;
        for (col, tok) in tokens.iter().enumerate() {
            let v: f64 = tok.parse().map_err(|_| Error::RasterParse {
                line: line_no,
                msg: format!("non-numeric token '{tok}'"),
            })?;
            if !v.is_finite() {
                return Err(Error::RasterParse {
                    line: line_no,
                    msg: format!("non-finite value '{tok}'"),
                });
            }
            values[target_row * ncols + col] = v;
        }
        rows_read += 1;
    }
    if rows_read < nrows {
        return Err(Error::RasterParse {
            line: last_line,
            msg: format!("count mismatch: expected {nrows} data rows, found {rows_read}"),
        });
    }

    RasterGrid::new(ncols, nrows, x_origin, y_origin, cellsize, nodata, values)
}

/// Renders a grid back to ASCII text. Values use the shortest decimal
/// representation that round-trips, so `parse_ascii_grid(write_ascii_grid(g))`
/// reproduces `g` exactly.
pub fn write_ascii_grid(grid: &RasterGrid) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NCOLS {}", grid.ncols);
    let _ = writeln!(out, "NROWS {}", grid.nrows);
    let _ = writeln!(out, "XLLCORNER {}", grid.x_origin);
    let _ = writeln!(out, "YLLCORNER {}", grid.y_origin);
    let _ = writeln!(out, "CELLSIZE {}", grid.cellsize);
    let _ = writeln!(out, "NODATA_VALUE {}", grid.nodata);
    for row in (0..grid.nrows).rev() {
        for col in 0..grid.ncols {
            if col > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", grid.value(col, row));
        }
        out.push('\n');
    }
    out
}

pub fn read_ascii_grid_file(path: &Path) -> Result<RasterGrid> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_ascii_grid(&text)
}

pub fn write_ascii_grid_file(path: &Path, grid: &RasterGrid) -> Result<()> {
    std::fs::write(path, write_ascii_grid(grid))
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_orientation() {
        let text = "NCOLS 2\nNROWS 2\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 10\nNODATA_VALUE -9999\n1 2\n3 4\n";
        let g = parse_ascii_grid(text).unwrap();
        // Top input row (1 2) is the northern row; row 0 sits at y_origin.
        assert_eq!(g.value(0, 0), 3.0);
        assert_eq!(g.value(1, 0), 4.0);
        assert_eq!(g.value(0, 1), 1.0);
        assert_eq!(g.value(1, 1), 2.0);
    }

    #[test]
    fn row_length_mismatch_reports_line() {
        let text = "NCOLS 3\nNROWS 2\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 10\nNODATA_VALUE -9999\n1 2 3\n4 5\n";
        let err = parse_ascii_grid(text).unwrap_err();
        assert_eq!(err.to_string(), "raster parse error: row length mismatch at line 8");
    }

    #[test]
    fn all_nodata_grid_is_valid() {
        let text = "NCOLS 2\nNROWS 2\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 10\nNODATA_VALUE -9999\n-9999 -9999\n-9999 -9999\n";
        let g = parse_ascii_grid(text).unwrap();
        assert!((0..2).all(|r| (0..2).all(|c| g.is_nodata(c, r))));
    }

    #[test]
    fn malformed_header_key_reports_line() {
        let text = "NCOLS 2\nNROWZ 2\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 10\nNODATA_VALUE -9999\n1 2\n3 4\n";
        let err = parse_ascii_grid(text).unwrap_err();
        assert!(err.to_string().contains("malformed header key 'nrowz'"));
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn non_numeric_token_reports_line() {
        let text = "NCOLS 2\nNROWS 2\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 10\nNODATA_VALUE -9999\n1 2\n3 x\n";
        let err = parse_ascii_grid(text).unwrap_err();
        assert!(err.to_string().contains("non-numeric token 'x'"));
        assert!(err.to_string().contains("line 8"));
    }

    #[test]
    fn missing_rows_is_count_mismatch() {
        let text = "NCOLS 2\nNROWS 3\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 10\nNODATA_VALUE -9999\n1 2\n3 4\n";
        let err = parse_ascii_grid(text).unwrap_err();
        assert!(err.to_string().contains("expected 3 data rows, found 2"));
    }

    #[test]
    fn header_keys_case_insensitive_any_order() {
        let text = "cellsize 5\nnodata_value -1\nncols 1\nNROWS 1\nxllcorner 100\nYllCorner 200\n7\n";
        let g = parse_ascii_grid(text).unwrap();
        assert_eq!(g.cellsize(), 5.0);
        assert_eq!(g.value(0, 0), 7.0);
        assert_eq!((g.x_origin(), g.y_origin()), (100.0, 200.0));
    }

    #[test]
    fn cell_at_boundaries() {
        let g = RasterGrid::new(2, 2, 0.0, 0.0, 10.0, -9999.0, vec![1.0; 4]).unwrap();
        assert_eq!(g.cell_at(Point::new(0.0, 0.0)), Some((0, 0)));
        assert_eq!(g.cell_at(Point::new(19.99, 19.99)), Some((1, 1)));
        assert_eq!(g.cell_at(Point::new(20.0, 10.0)), None);
        assert_eq!(g.cell_at(Point::new(-0.01, 10.0)), None);
    }
}
