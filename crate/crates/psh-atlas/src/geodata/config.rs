//! Run configuration: screening constants plus input layer paths.
//!
//! The config document is a single JSON object. Screening constants use the
//! `SchemeConfig` field names at the top level and default to the standard
//! values when absent; input paths live under a `layers` object and are
//! resolved relative to the config file's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Screening and pairing constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    /// Minimum head difference between the two reservoirs, meters.
    pub min_head_m: f64,
    /// Maximum horizontal separation of a selected pair, meters.
    pub max_separation_m: f64,
    /// Radius searched around each prospective reservoir, meters.
    pub search_radius_m: f64,
    /// Minimum reservoir surface area, square meters.
    pub min_area_m2: f64,
    /// Utilizable water depth applied to every reservoir, meters.
    pub usable_depth_m: f64,
    /// Flat land is any cell below this percent slope.
    pub slope_threshold_pct: f64,
    /// Candidates above this elevation are excluded, meters asl.
    pub elevation_cap_m: f64,
    /// Technical pairs must keep separation/head strictly below this ratio.
    pub max_l_over_h: f64,
    /// Efficiency used for theoretical potential.
    pub eta_theoretical: f64,
    /// Efficiency used for technical potential.
    pub eta_technical: f64,
    /// Minimum energy storage capacity of a site, GWh.
    pub energy_threshold_gwh: f64,
    /// Chainage interval for river densification, meters.
    pub river_interval_m: f64,
    /// Infrastructure proximity buffer, meters.
    pub infra_buffer_m: f64,
    /// Density of water, kg/m3.
    pub water_density: f64,
    /// Gravitational acceleration, m/s2.
    pub gravity: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            min_head_m: 50.0,
            max_separation_m: 5_000.0,
            search_radius_m: 10_000.0,
            min_area_m2: 50_000.0,
            usable_depth_m: 2.0,
            slope_threshold_pct: 5.0,
            elevation_cap_m: 5_000.0,
            max_l_over_h: 10.0,
            eta_theoretical: 1.0,
            eta_technical: 0.8,
            energy_threshold_gwh: 0.01,
            river_interval_m: 1_000.0,
            infra_buffer_m: 20_000.0,
            water_density: 1_000.0,
            gravity: 9.8,
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("min_head_m", self.min_head_m),
            ("max_separation_m", self.max_separation_m),
            ("search_radius_m", self.search_radius_m),
            ("min_area_m2", self.min_area_m2),
            ("usable_depth_m", self.usable_depth_m),
            ("slope_threshold_pct", self.slope_threshold_pct),
            ("elevation_cap_m", self.elevation_cap_m),
            ("max_l_over_h", self.max_l_over_h),
            ("energy_threshold_gwh", self.energy_threshold_gwh),
            ("river_interval_m", self.river_interval_m),
            ("infra_buffer_m", self.infra_buffer_m),
            ("water_density", self.water_density),
            ("gravity", self.gravity),
        ];
        for (name, v) in positives {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be strictly positive, got {v}")));
            }
        }
        for (name, eta) in [
            ("eta_theoretical", self.eta_theoretical),
            ("eta_technical", self.eta_technical),
        ] {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::Config(format!("{name} must be in (0, 1], got {eta}")));
            }
        }
        Ok(())
    }
}

/// Paths to the input layers. Only the DEM is mandatory; schemes whose
/// layers are absent are skipped.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LayerPaths {
    pub dem: PathBuf,
    pub lakes: Option<PathBuf>,
    pub rivers: Option<PathBuf>,
    pub roads: Option<PathBuf>,
    pub planned_substations: Option<PathBuf>,
    pub operational_substations: Option<PathBuf>,
    pub protected_areas: Option<PathBuf>,
    pub precip_dir: Option<PathBuf>,
    pub temp_dir: Option<PathBuf>,
    pub flows: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scheme: SchemeConfig,
    pub layers: LayerPaths,
    /// Names of scheme fields explicitly set by the config document.
    pub overrides: Vec<String>,
}

const SCHEME_KEYS: [&str; 15] = [
    "min_head_m",
    "max_separation_m",
    "search_radius_m",
    "min_area_m2",
    "usable_depth_m",
    "slope_threshold_pct",
    "elevation_cap_m",
    "max_l_over_h",
    "eta_theoretical",
    "eta_technical",
    "energy_threshold_gwh",
    "river_interval_m",
    "infra_buffer_m",
    "water_density",
    "gravity",
];

const LAYER_KEYS: [&str; 10] = [
    "dem",
    "lakes",
    "rivers",
    "roads",
    "planned_substations",
    "operational_substations",
    "protected_areas",
    "precip_dir",
    "temp_dir",
    "flows",
];

fn set_scheme_field(cfg: &mut SchemeConfig, key: &str, v: f64) {
    match key {
        "min_head_m" => cfg.min_head_m = v,
        "max_separation_m" => cfg.max_separation_m = v,
        "search_radius_m" => cfg.search_radius_m = v,
        "min_area_m2" => cfg.min_area_m2 = v,
        "usable_depth_m" => cfg.usable_depth_m = v,
        "slope_threshold_pct" => cfg.slope_threshold_pct = v,
        "elevation_cap_m" => cfg.elevation_cap_m = v,
        "max_l_over_h" => cfg.max_l_over_h = v,
        "eta_theoretical" => cfg.eta_theoretical = v,
        "eta_technical" => cfg.eta_technical = v,
        "energy_threshold_gwh" => cfg.energy_threshold_gwh = v,
        "river_interval_m" => cfg.river_interval_m = v,
        "infra_buffer_m" => cfg.infra_buffer_m = v,
        "water_density" => cfg.water_density = v,
        "gravity" => cfg.gravity = v,
        _ => unreachable!("unknown scheme key {key}"),
    }
}

/// Parses a config document. Unknown keys are rejected so typos cannot
/// silently fall back to defaults.
pub fn parse_run_config(text: &str) -> Result<RunConfig> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::Config("config document must be a JSON object".into()))?;

    let mut scheme = SchemeConfig::default();
    let mut overrides = Vec::new();
    let mut layers_value: Option<&Value> = None;
    for (key, value) in obj {
        if key == "layers" {
            layers_value = Some(value);
        } else if SCHEME_KEYS.contains(&key.as_str()) {
            let v = value
                .as_f64()
                .ok_or_else(|| Error::Config(format!("'{key}' must be a number")))?;
            set_scheme_field(&mut scheme, key, v);
            overrides.push(key.clone());
        } else {
            return Err(Error::Config(format!("unknown config key '{key}'")));
        }
    }
    scheme.validate()?;

    let layers_value =
        layers_value.ok_or_else(|| Error::Config("missing 'layers' object".into()))?;
    let layers_obj = layers_value
        .as_object()
        .ok_or_else(|| Error::Config("'layers' must be a JSON object".into()))?;
    for key in layers_obj.keys() {
        if !LAYER_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown layer key '{key}'")));
        }
    }
    let layers: LayerPaths = serde_json::from_value(layers_value.clone())
        .map_err(|e| Error::Config(format!("invalid 'layers' object: {e}")))?;
    if layers.dem.as_os_str().is_empty() {
        return Err(Error::Config("'layers.dem' is required".into()));
    }
    if layers.precip_dir.is_some() != layers.temp_dir.is_some() {
        return Err(Error::Config(
            "'precip_dir' and 'temp_dir' must be provided together".into(),
        ));
    }

    Ok(RunConfig { scheme, layers, overrides })
}

/// Loads a config file and resolves every relative layer path against the
/// config file's directory.
pub fn load_run_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut cfg = parse_run_config(&text)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let resolve = |p: &mut PathBuf| {
        if p.is_relative() {
            *p = base.join(&p);
        }
    };
    resolve(&mut cfg.layers.dem);
    for opt in [
        &mut cfg.layers.lakes,
        &mut cfg.layers.rivers,
        &mut cfg.layers.roads,
        &mut cfg.layers.planned_substations,
        &mut cfg.layers.operational_substations,
        &mut cfg.layers.protected_areas,
        &mut cfg.layers.precip_dir,
        &mut cfg.layers.temp_dir,
        &mut cfg.layers.flows,
    ] {
        if let Some(p) = opt.as_mut() {
            resolve(p);
        }
    }
    Ok(cfg)
}
