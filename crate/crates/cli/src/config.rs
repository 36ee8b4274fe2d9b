//! Run configuration: a sectioned key-value file (TOML) with optional
//! `[scenario]`, `[hardware]`, and `[output]` tables. Every key is
//! optional; unspecified hardware falls back to the baseline parameter
//! set. Unknown keys are rejected so typos surface as errors.

use std::path::{Path, PathBuf};

use pearlchain_core::orbits::{OrbitConfig, OrbitDirection};
use pearlchain_core::params::{
    BottleneckRule, HardwareParams, NoiseEnvironment, Scenario, Scheme, SkyPreset,
};
use serde::Deserialize;

/// Serialization format of sweep output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("must be one of csv|json, got `{other}`")),
        }
    }
}

/// A fully validated run description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub schemes: Vec<Scheme>,
    pub distances_km: Vec<f64>,
    pub nesting_levels: Vec<u32>,
    /// Altitudes swept by the `flyby` subcommand, km.
    pub flyby_altitudes_km: Vec<f64>,
    /// Scenario carrying hardware, orbit, sky, and sampling choices;
    /// scheme, distance, and nesting level are overwritten per sweep cell.
    pub template: Scenario,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    /// The full comparison grid: all three schemes, L from 1000 km to
    /// 20000 km in 500 km steps, n from 0 to 3, baseline hardware,
    /// full-Moon sky, 500 km prograde orbit.
    fn default() -> Self {
        Self {
            schemes: Scheme::ALL.to_vec(),
            distances_km: (0..39).map(|i| 1000.0 + 500.0 * i as f64).collect(),
            nesting_levels: vec![0, 1, 2, 3],
            flyby_altitudes_km: vec![500.0, 1000.0],
            template: Scenario::new(Scheme::GG, 1000.0, 0).expect("baseline scenario is valid"),
            output_path: None,
            format: OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    scenario: ScenarioSection,
    #[serde(default)]
    hardware: HardwareSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioSection {
    schemes: Option<Vec<String>>,
    l_min_km: Option<f64>,
    l_max_km: Option<f64>,
    l_step_km: Option<f64>,
    nesting_levels: Option<Vec<u32>>,
    altitude_km: Option<f64>,
    orbit_direction: Option<String>,
    noise_preset: Option<String>,
    passes_per_day: Option<f64>,
    time_step_s: Option<f64>,
    bottleneck: Option<String>,
    flyby_altitudes_km: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct HardwareSection {
    p_qnd: Option<f64>,
    p_w: Option<f64>,
    p_r: Option<f64>,
    eta_d: Option<f64>,
    p_dark: Option<f64>,
    source_rate_hz: Option<f64>,
    direct_source_rate_hz: Option<f64>,
    initial_fidelity: Option<f64>,
    fibre_loss_db_per_km: Option<f64>,
    beam_waist_m: Option<f64>,
    beam_quality_factor: Option<f64>,
    wavelength_nm: Option<f64>,
    receiver_radius_m: Option<f64>,
    sat_receiver_radius_m: Option<f64>,
    receiver_fov_sr: Option<f64>,
    filter_bandwidth_nm: Option<f64>,
    extinction_beta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    path: Option<String>,
    format: Option<String>,
}

/// Loads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config `{}`: {e}", path.display()))?;
    parse_config(&text)
}

/// Parses and validates configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, String> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| format!("config parse error: {e}"))?;
    resolve(file)
}

fn resolve(file: ConfigFile) -> Result<RunConfig, String> {
    let mut config = RunConfig::default();
    let sc = file.scenario;

    if let Some(names) = sc.schemes {
        if names.is_empty() {
            return Err("[scenario] schemes: at least one scheme is required".into());
        }
        config.schemes = names
            .iter()
            .map(|s| s.parse::<Scheme>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("[scenario] schemes: {e}"))?;
    }

    let l_min = sc.l_min_km.unwrap_or(1000.0);
    let l_max = sc.l_max_km.unwrap_or(20000.0);
    let l_step = sc.l_step_km.unwrap_or(500.0);
    if l_min <= 0.0 || !l_min.is_finite() {
        return Err(format!(
            "[scenario] l_min_km: must be positive, got {l_min}"
        ));
    }
    if l_max < l_min {
        return Err(format!(
            "[scenario] l_max_km: must be at least l_min_km ({l_min}), got {l_max}"
        ));
    }
    if l_step <= 0.0 || !l_step.is_finite() {
        return Err(format!(
            "[scenario] l_step_km: must be positive, got {l_step}"
        ));
    }
    let points = ((l_max - l_min) / l_step + 1e-9).floor() as usize + 1;
    config.distances_km = (0..points).map(|i| l_min + i as f64 * l_step).collect();

    if let Some(levels) = sc.nesting_levels {
        if levels.is_empty() {
            return Err("[scenario] nesting_levels: at least one level is required".into());
        }
        config.nesting_levels = levels;
    }
    if let Some(alts) = sc.flyby_altitudes_km {
        if alts.is_empty() {
            return Err("[scenario] flyby_altitudes_km: at least one altitude is required".into());
        }
        config.flyby_altitudes_km = alts;
    }

    let mut hardware = HardwareParams::default();
    let hw = file.hardware;
    if let Some(v) = hw.p_qnd {
        hardware.p_qnd = v;
    }
    if let Some(v) = hw.p_w {
        hardware.p_w = v;
    }
    if let Some(v) = hw.p_r {
        hardware.p_r = v;
    }
    if let Some(v) = hw.eta_d {
        hardware.eta_d = v;
    }
    if let Some(v) = hw.p_dark {
        hardware.p_dark = v;
    }
    if let Some(v) = hw.source_rate_hz {
        hardware.source_rate_hz = v;
    }
    if let Some(v) = hw.direct_source_rate_hz {
        hardware.direct_source_rate_hz = v;
    }
    if let Some(v) = hw.initial_fidelity {
        hardware.initial_fidelity = v;
    }
    if let Some(v) = hw.fibre_loss_db_per_km {
        hardware.atmosphere.fibre_loss_db_per_km = v;
    }
    if let Some(v) = hw.beam_waist_m {
        hardware.beam.waist_m = v;
    }
    if let Some(v) = hw.beam_quality_factor {
        hardware.beam.quality_factor = v;
    }
    if let Some(v) = hw.wavelength_nm {
        hardware.beam.wavelength_m = v * 1e-9;
    }
    if let Some(v) = hw.receiver_radius_m {
        hardware.receiver.radius_m = v;
    }
    if let Some(v) = hw.sat_receiver_radius_m {
        hardware.sat_receiver_radius_m = v;
    }
    if let Some(v) = hw.receiver_fov_sr {
        hardware.receiver.field_of_view_sr = v;
    }
    if let Some(v) = hw.filter_bandwidth_nm {
        hardware.receiver.filter_bandwidth_m = v * 1e-9;
    }
    if let Some(v) = hw.extinction_beta {
        hardware.atmosphere.extinction_beta = v;
    }

    let sky: SkyPreset = sc
        .noise_preset
        .as_deref()
        .unwrap_or("full-moon")
        .parse()
        .map_err(|e| format!("[scenario] noise_preset: {e}"))?;
    let direction = match sc
        .orbit_direction
        .as_deref()
        .unwrap_or("prograde")
        .trim()
        .to_ascii_lowercase()
        .as_str()
    {
        "prograde" => OrbitDirection::Prograde,
        "retrograde" => OrbitDirection::Retrograde,
        other => {
            return Err(format!(
                "[scenario] orbit_direction: must be prograde|retrograde, got `{other}`"
            ))
        }
    };
    let altitude_m = sc.altitude_km.unwrap_or(500.0) * 1e3;
    let orbit = OrbitConfig::new(altitude_m, direction, 0.0)
        .map_err(|e| format!("[scenario] altitude_km: {e}"))?;

    let bottleneck: BottleneckRule = sc
        .bottleneck
        .as_deref()
        .unwrap_or("min-then-average")
        .parse()
        .map_err(|e| format!("[scenario] bottleneck: {e}"))?;

    config.template = Scenario {
        scheme: config.schemes[0],
        total_distance_km: config.distances_km[0],
        nesting_level: config.nesting_levels[0],
        orbit,
        environment: NoiseEnvironment::from_preset(sky, &hardware),
        hardware,
        time_step_s: sc.time_step_s.unwrap_or(1.0),
        bottleneck_rule: bottleneck,
        passes_per_day: sc.passes_per_day.unwrap_or(1.0),
    };
    config
        .template
        .validate()
        .map_err(|e| format!("[hardware/scenario] {e}"))?;

    if let Some(path) = file.output.path {
        config.output_path = Some(PathBuf::from(path));
    }
    if let Some(format) = file.output.format {
        config.format = format
            .parse()
            .map_err(|e| format!("[output] format: {e}"))?;
    }
    Ok(config)
}
