//! Scenario configuration: chain architecture, hardware, sky conditions.

use crate::error::{check_positive, check_probability, Error, Result};
use crate::linkbudget::{AtmosphereParams, BeamParams, ReceiverParams};
use crate::orbits::{OrbitConfig, OrbitDirection};

/// Chain architecture.
///
/// `OO`: sources and repeaters on satellites, down-links only at the two
/// end points. `GG`: sources and repeaters on the ground, fibre links.
/// `OG`: sources on satellites, repeaters on the ground, every elementary
/// link a double down-link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Scheme {
    OO,
    GG,
    OG,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::OO, Scheme::GG, Scheme::OG];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::OO => "OO",
            Scheme::GG => "GG",
            Scheme::OG => "OG",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "OO" => Ok(Scheme::OO),
            "GG" => Ok(Scheme::GG),
            "OG" => Ok(Scheme::OG),
            other => Err(format!("unknown scheme `{other}`, expected OO, GG or OG")),
        }
    }
}

/// Named sky-background presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkyPreset {
    /// Night sky under a full Moon; the default.
    FullMoon,
    /// Clear sky in day-time.
    Daytime,
    /// No background light at all.
    Dark,
}

impl SkyPreset {
    /// Spectral radiance of the sky background, W·m⁻²·sr⁻¹ per metre of
    /// wavelength.
    pub fn brightness_w_m2_sr_m(&self) -> f64 {
        match self {
            // 1.5 µW·m⁻²·sr⁻¹·nm⁻¹
            SkyPreset::FullMoon => 1.5e3,
            // 1 W·m⁻²·sr⁻¹·µm⁻¹
            SkyPreset::Daytime => 1.0e6,
            SkyPreset::Dark => 0.0,
        }
    }
}

impl std::str::FromStr for SkyPreset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full-moon" | "fullmoon" => Ok(SkyPreset::FullMoon),
            "daytime" | "day" => Ok(SkyPreset::Daytime),
            "dark" => Ok(SkyPreset::Dark),
            other => Err(format!(
                "unknown noise preset `{other}`, expected full-moon, daytime or dark"
            )),
        }
    }
}

/// Detector, memory, source, and optics parameters of the chain hardware.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HardwareParams {
    /// Heralding (non-demolition detection) efficiency per photon.
    pub p_qnd: f64,
    /// Memory write efficiency.
    pub p_w: f64,
    /// Memory read efficiency.
    pub p_r: f64,
    /// Detector efficiency.
    pub eta_d: f64,
    /// Detector dark-click probability per gate.
    pub p_dark: f64,
    /// Source repetition rate when memories are involved, Hz.
    pub source_rate_hz: f64,
    /// Source repetition rate for direct transmission (no memories), Hz.
    pub direct_source_rate_hz: f64,
    /// Fidelity of freshly produced pairs.
    pub initial_fidelity: f64,
    /// Transmitter beam.
    pub beam: BeamParams,
    /// Ground receiving telescope.
    pub receiver: ReceiverParams,
    /// Aperture radius of receivers on repeater satellites, metres.
    /// Defaults to the ground value; enlarging it relieves the
    /// inter-satellite bottleneck on long chains.
    pub sat_receiver_radius_m: f64,
    /// Atmosphere and fibre attenuation.
    pub atmosphere: AtmosphereParams,
}

impl Default for HardwareParams {
    /// Baseline parameter set used throughout the simulations:
    /// 90% detectors with 1e-5 dark clicks, 90% memory read/write, 50%
    /// heralding, 20 MHz memory-bound sources (1 GHz direct), 0.17 dB/km
    /// fibre, 25 cm transmit / 50 cm receive optics, M² = 3 at 580 nm,
    /// zenith extinction exponent 1.1, pair fidelity 0.98.
    fn default() -> Self {
        Self {
            p_qnd: 0.5,
            p_w: 0.9,
            p_r: 0.9,
            eta_d: 0.9,
            p_dark: 1e-5,
            source_rate_hz: 20e6,
            direct_source_rate_hz: 1e9,
            initial_fidelity: 0.98,
            beam: BeamParams {
                waist_m: 0.25,
                quality_factor: 3.0,
                wavelength_m: 580e-9,
            },
            receiver: ReceiverParams {
                radius_m: 0.5,
                field_of_view_sr: (20e-6) * (20e-6),
                filter_bandwidth_m: 0.5e-9,
            },
            sat_receiver_radius_m: 0.5,
            atmosphere: AtmosphereParams {
                extinction_beta: 1.1,
                fibre_loss_db_per_km: 0.17,
            },
        }
    }
}

impl HardwareParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("p_qnd", self.p_qnd),
            ("p_w", self.p_w),
            ("p_r", self.p_r),
            ("eta_d", self.eta_d),
        ] {
            check_probability(name, value)?;
            if value == 0.0 {
                return Err(Error::not_positive(name, value));
            }
        }
        check_probability("p_dark", self.p_dark)?;
        check_positive("source_rate_hz", self.source_rate_hz)?;
        check_positive("direct_source_rate_hz", self.direct_source_rate_hz)?;
        check_positive("sat_receiver_radius_m", self.sat_receiver_radius_m)?;
        if !self.initial_fidelity.is_finite()
            || self.initial_fidelity <= 0.25
            || self.initial_fidelity > 1.0
        {
            return Err(Error::Invalid {
                name: "initial_fidelity",
                requirement: "in (0.25, 1]",
                value: self.initial_fidelity,
            });
        }
        BeamParams::new(
            self.beam.waist_m,
            self.beam.quality_factor,
            self.beam.wavelength_m,
        )?;
        ReceiverParams::new(
            self.receiver.radius_m,
            self.receiver.field_of_view_sr,
            self.receiver.filter_bandwidth_m,
        )?;
        AtmosphereParams::new(
            self.atmosphere.extinction_beta,
            self.atmosphere.fibre_loss_db_per_km,
        )?;
        Ok(())
    }

    /// Receiver description of a repeater satellite: the ground receiver
    /// with the satellite aperture radius substituted in.
    pub fn sat_receiver(&self) -> ReceiverParams {
        ReceiverParams {
            radius_m: self.sat_receiver_radius_m,
            ..self.receiver
        }
    }
}

/// Background light and detector imperfections at the receivers.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NoiseEnvironment {
    /// Sky spectral radiance, W·m⁻²·sr⁻¹ per metre of wavelength.
    pub sky_brightness_w_m2_sr_m: f64,
    /// Frequency of signal and background photons, Hz.
    pub photon_frequency_hz: f64,
    /// Detector dark-click probability per gate.
    pub dark_count_prob: f64,
    /// Detector efficiency.
    pub detector_efficiency: f64,
}

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

impl NoiseEnvironment {
    /// Environment for a sky preset, with photon frequency and detector
    /// figures taken from the hardware description.
    pub fn from_preset(sky: SkyPreset, hardware: &HardwareParams) -> Self {
        Self {
            sky_brightness_w_m2_sr_m: sky.brightness_w_m2_sr_m(),
            photon_frequency_hz: SPEED_OF_LIGHT_M_S / hardware.beam.wavelength_m,
            dark_count_prob: hardware.p_dark,
            detector_efficiency: hardware.eta_d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        crate::error::check_non_negative("sky_brightness", self.sky_brightness_w_m2_sr_m)?;
        check_positive("photon_frequency_hz", self.photon_frequency_hz)?;
        check_probability("dark_count_prob", self.dark_count_prob)?;
        check_probability("detector_efficiency", self.detector_efficiency)?;
        if self.detector_efficiency == 0.0 {
            return Err(Error::not_positive("detector_efficiency", 0.0));
        }
        Ok(())
    }
}

/// How the bottleneck transmittance is reduced over the fly-by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BottleneckRule {
    /// Take the worst elementary link at each instant, then average over
    /// the window. Conservative lower bound; the default.
    #[default]
    MinThenAverage,
    /// Average each elementary link over the window, then take the worst.
    AverageThenMin,
}

impl std::str::FromStr for BottleneckRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "min-then-average" => Ok(BottleneckRule::MinThenAverage),
            "average-then-min" => Ok(BottleneckRule::AverageThenMin),
            other => Err(format!(
                "unknown bottleneck rule `{other}`, expected min-then-average or average-then-min"
            )),
        }
    }
}

/// A complete simulation input: architecture, geometry, hardware, noise.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub scheme: Scheme,
    /// Ground distance between the two parties, km.
    pub total_distance_km: f64,
    /// Maximal nesting level; the chain has `2^n` elementary links.
    pub nesting_level: u32,
    /// Orbit shared by all satellites (ignored by `GG`).
    pub orbit: OrbitConfig,
    pub hardware: HardwareParams,
    pub environment: NoiseEnvironment,
    /// Sampling step for window search and fly-by averages, seconds.
    pub time_step_s: f64,
    pub bottleneck_rule: BottleneckRule,
    /// Usable satellite passes per day, for daily-key accounting.
    pub passes_per_day: f64,
}

impl Scenario {
    /// Scenario with baseline hardware, full-Moon sky, a prograde 500 km
    /// orbit, and 1 s sampling.
    pub fn new(scheme: Scheme, total_distance_km: f64, nesting_level: u32) -> Result<Self> {
        let hardware = HardwareParams::default();
        let environment = NoiseEnvironment::from_preset(SkyPreset::FullMoon, &hardware);
        let scenario = Self {
            scheme,
            total_distance_km,
            nesting_level,
            orbit: OrbitConfig::new(500e3, OrbitDirection::Prograde, 0.0)?,
            hardware,
            environment,
            time_step_s: 1.0,
            bottleneck_rule: BottleneckRule::default(),
            passes_per_day: 1.0,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Same scenario with a different sky preset.
    pub fn with_sky(mut self, sky: SkyPreset) -> Self {
        self.environment = NoiseEnvironment::from_preset(sky, &self.hardware);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("total_distance_km", self.total_distance_km)?;
        check_positive("time_step_s", self.time_step_s)?;
        check_positive("passes_per_day", self.passes_per_day)?;
        if self.nesting_level > 20 {
            return Err(Error::Invalid {
                name: "nesting_level",
                requirement: "at most 20",
                value: self.nesting_level as f64,
            });
        }
        self.hardware.validate()?;
        self.environment.validate()?;
        self.orbit.validate()?;
        Ok(())
    }

    /// Number of elementary links, `2^n`.
    pub fn link_count(&self) -> u64 {
        1u64 << self.nesting_level
    }

    /// Length of one elementary link along the ground, km.
    pub fn elementary_length_km(&self) -> f64 {
        self.total_distance_km / self.link_count() as f64
    }
}

/// Everything the pipeline knows about one scenario evaluation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct KeyRateResult {
    /// Fly-by averaged bottleneck transmittance of the elementary links.
    pub p0: f64,
    /// Entanglement distribution rate of the chain, Hz.
    pub repeater_rate_hz: f64,
    /// X-basis error rate of the final shared pair.
    pub e_x: f64,
    /// Z-basis error rate of the final shared pair.
    pub e_z: f64,
    /// Asymptotic secret fraction, clamped to `[0, 1]`.
    pub secret_fraction: f64,
    /// Secret key rate while the chain is running, Hz.
    pub key_rate_hz: f64,
    /// Seconds per day (fibre) or per pass (satellite schemes) during
    /// which the chain can run.
    pub flyby_duration_s: f64,
    /// Secret key per day, bits.
    pub daily_key_bits: f64,
}

impl KeyRateResult {
    /// An all-zero result for geometrically infeasible scenarios.
    pub fn infeasible() -> Self {
        Self {
            p0: 0.0,
            repeater_rate_hz: 0.0,
            e_x: 0.5,
            e_z: 0.5,
            secret_fraction: 0.0,
            key_rate_hz: 0.0,
            flyby_duration_s: 0.0,
            daily_key_bits: 0.0,
        }
    }
}
