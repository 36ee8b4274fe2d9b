//! Circular equatorial orbit kinematics and chain geometry.
//!
//! Satellites share one circular orbit of altitude `h` in the equatorial
//! plane and move rigidly at the common angular rate (a string of
//! pearls). Ground stations sit on the equator and co-rotate with the
//! Earth. Everything reduces to one angular coordinate per body, so
//! slant ranges, elevations, and inter-satellite distances are closed
//! forms of angle differences.
//!
//! The fly-by is the period during which the chain's down-links satisfy
//! the elevation threshold: for `OG`, every source must see both of its
//! adjacent ground stations; for `OO` with `n ≥ 1`, only the two
//! end-of-chain sources must see their party's station. Inter-satellite
//! feasibility (Earth-limb clearance) is tracked per link in the
//! geometry snapshots, not in the window definition.

use crate::error::{Error, Result};
use crate::linkbudget::LinkPath;
use crate::params::{Scenario, Scheme};

/// Mean Earth radius, metres.
pub const EARTH_RADIUS_M: f64 = 6.371e6;

/// Geocentric gravitational constant, m³/s².
pub const GM_EARTH_M3_S2: f64 = 3.986004418e14;

/// Earth rotation rate, rad/s.
pub const EARTH_ROTATION_RAD_S: f64 = 7.2921159e-5;

/// Minimum elevation for a usable down-link.
pub const MIN_ELEVATION_RAD: f64 = 15.0 * std::f64::consts::PI / 180.0;

/// Inter-satellite lines of sight must clear the Earth limb by this much.
pub const LIMB_CLEARANCE_M: f64 = 10e3;

/// LEO altitude band accepted by [`OrbitConfig`].
pub const MIN_ALTITUDE_M: f64 = 200e3;
pub const MAX_ALTITUDE_M: f64 = 2000e3;

/// Orbital direction relative to the Earth's rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum OrbitDirection {
    Prograde,
    Retrograde,
}

/// A circular equatorial orbit shared by the whole constellation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OrbitConfig {
    /// Altitude above the surface, metres.
    pub altitude_m: f64,
    pub direction: OrbitDirection,
    /// Angular offset of the chain centre at `t = 0`, radians.
    pub phase0_rad: f64,
}

impl OrbitConfig {
    pub fn new(altitude_m: f64, direction: OrbitDirection, phase0_rad: f64) -> Result<Self> {
        let config = Self {
            altitude_m,
            direction,
            phase0_rad,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.altitude_m.is_finite()
            || !(MIN_ALTITUDE_M..=MAX_ALTITUDE_M).contains(&self.altitude_m)
        {
            return Err(Error::OutOfRange {
                name: "orbit altitude",
                min: MIN_ALTITUDE_M,
                max: MAX_ALTITUDE_M,
                value: self.altitude_m,
            });
        }
        if !self.phase0_rad.is_finite() || !(0.0..std::f64::consts::TAU).contains(&self.phase0_rad)
        {
            return Err(Error::OutOfRange {
                name: "orbit phase",
                min: 0.0,
                max: std::f64::consts::TAU,
                value: self.phase0_rad,
            });
        }
        Ok(())
    }

    /// Signed angular rate: positive for prograde, negative for retrograde.
    pub fn signed_rate_rad_s(&self) -> f64 {
        match self.direction {
            OrbitDirection::Prograde => angular_rate_rad_s(self.altitude_m),
            OrbitDirection::Retrograde => -angular_rate_rad_s(self.altitude_m),
        }
    }
}

/// Keplerian angular rate of a circular orbit, `ω = √(μ/(R_E+h)³)`.
pub fn angular_rate_rad_s(altitude_m: f64) -> f64 {
    let r = EARTH_RADIUS_M + altitude_m;
    (GM_EARTH_M3_S2 / (r * r * r)).sqrt()
}

/// Orbital period `2π/ω`, seconds.
pub fn orbital_period_s(altitude_m: f64) -> f64 {
    std::f64::consts::TAU / angular_rate_rad_s(altitude_m)
}

/// Instantaneous orbital angle of a satellite with the given phase offset.
pub fn satellite_angle_rad(config: &OrbitConfig, phase_rad: f64, t_s: f64) -> f64 {
    config.phase0_rad + phase_rad + config.signed_rate_rad_s() * t_s
}

/// Position of a satellite in the equatorial plane, metres.
pub fn satellite_position_m(config: &OrbitConfig, phase_rad: f64, t_s: f64) -> [f64; 2] {
    let angle = satellite_angle_rad(config, phase_rad, t_s);
    let r = EARTH_RADIUS_M + config.altitude_m;
    [r * angle.cos(), r * angle.sin()]
}

/// Wraps an angle into `(−π, π]`.
fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(std::f64::consts::TAU);
    if y > std::f64::consts::PI {
        y - std::f64::consts::TAU
    } else {
        y
    }
}

/// Central angle between a satellite and a ground station, `[0, π]`.
fn central_angle(sat_angle_rad: f64, gs_angle_rad: f64) -> f64 {
    wrap_angle(sat_angle_rad - gs_angle_rad).abs()
}

/// Straight-line distance from a ground station to a satellite at
/// altitude `h`, metres. Uses `d² = h² + 4·R_E·(R_E+h)·sin²(Δ/2)`,
/// which is exact at zenith.
pub fn slant_range_m(sat_angle_rad: f64, altitude_m: f64, gs_angle_rad: f64) -> f64 {
    let delta = central_angle(sat_angle_rad, gs_angle_rad);
    let r = EARTH_RADIUS_M + altitude_m;
    let s = (delta / 2.0).sin();
    (altitude_m * altitude_m + 4.0 * EARTH_RADIUS_M * r * s * s).sqrt()
}

/// Elevation of the satellite in the station's local frame, radians.
/// Negative below the geometric horizon.
pub fn elevation_rad(sat_angle_rad: f64, altitude_m: f64, gs_angle_rad: f64) -> f64 {
    let delta = central_angle(sat_angle_rad, gs_angle_rad);
    let r = EARTH_RADIUS_M + altitude_m;
    let d = slant_range_m(sat_angle_rad, altitude_m, gs_angle_rad);
    let sin_elev = (r * delta.cos() - EARTH_RADIUS_M) / d;
    sin_elev.clamp(-1.0, 1.0).asin()
}

/// Chord between two satellites of the same orbit, metres:
/// `2(R_E+h)·sin(|Δφ|/2)`.
pub fn inter_satellite_distance_m(phase_a_rad: f64, phase_b_rad: f64, altitude_m: f64) -> f64 {
    let gamma = wrap_angle(phase_a_rad - phase_b_rad).abs();
    2.0 * (EARTH_RADIUS_M + altitude_m) * (gamma / 2.0).sin()
}

/// True when the chord between two orbital angles passes too close to
/// the Earth.
fn limb_occluded(angle_a: f64, angle_b: f64, altitude_m: f64) -> bool {
    let gamma = wrap_angle(angle_a - angle_b).abs();
    (EARTH_RADIUS_M + altitude_m) * (gamma / 2.0).cos() < EARTH_RADIUS_M + LIMB_CLEARANCE_M
}

/// Function of a satellite within the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatelliteRole {
    Source,
    Repeater,
}

/// One satellite slot: its angular offset within the rigid chain
/// (relative to the chain centre) and its role.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteSlot {
    pub phase_rad: f64,
    pub role: SatelliteRole,
}

/// The rigid chain of satellites, ordered along the orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pub satellites: Vec<SatelliteSlot>,
}

impl Constellation {
    pub fn sources(&self) -> impl Iterator<Item = &SatelliteSlot> {
        self.satellites
            .iter()
            .filter(|s| s.role == SatelliteRole::Source)
    }

    pub fn repeaters(&self) -> impl Iterator<Item = &SatelliteSlot> {
        self.satellites
            .iter()
            .filter(|s| s.role == SatelliteRole::Repeater)
    }
}

/// Architecture that actually governs the space segment. With `n = 0`
/// the `OO` and `OG` schemes coincide: a single source and a double
/// down-link to the parties.
pub fn effective_scheme(scheme: Scheme, nesting_level: u32) -> Scheme {
    if scheme == Scheme::OO && nesting_level == 0 {
        Scheme::OG
    } else {
        scheme
    }
}

/// Ground arc subtended by the two parties, radians.
fn ground_arc_rad(scenario: &Scenario) -> f64 {
    scenario.total_distance_km * 1e3 / EARTH_RADIUS_M
}

/// Station angles `(A, B)` at time `t`, symmetric about zero at `t = 0`.
fn station_angles(scenario: &Scenario, t_s: f64) -> (f64, f64) {
    let half = ground_arc_rad(scenario) / 2.0;
    let rot = EARTH_ROTATION_RAD_S * t_s;
    (-half + rot, half + rot)
}

/// Builds the satellite chain for the scenario.
///
/// `OG`: one source above the midpoint of each elementary link.
/// `OO` with `n ≥ 1`: sources and repeaters alternate, evenly spaced, with
/// the two end sources crossing the parties' zeniths simultaneously at the
/// pass midpoint. `GG` has no satellites and is rejected.
pub fn place_constellation(scenario: &Scenario) -> Result<Constellation> {
    scenario.validate()?;
    let n_links = scenario.link_count();
    let arc = ground_arc_rad(scenario);
    match effective_scheme(scenario.scheme, scenario.nesting_level) {
        Scheme::GG => Err(Error::NoSatelliteSegment {
            scheme: scenario.scheme.as_str(),
        }),
        Scheme::OG => {
            let l0 = arc / n_links as f64;
            let satellites = (0..n_links)
                .map(|k| SatelliteSlot {
                    phase_rad: -arc / 2.0 + (k as f64 + 0.5) * l0,
                    role: SatelliteRole::Source,
                })
                .collect();
            Ok(Constellation { satellites })
        }
        Scheme::OO => {
            let slots = 2 * n_links - 1;
            let gap = arc / (slots - 1) as f64;
            let satellites = (0..slots)
                .map(|j| SatelliteSlot {
                    phase_rad: -arc / 2.0 + j as f64 * gap,
                    role: if j % 2 == 0 {
                        SatelliteRole::Source
                    } else {
                        SatelliteRole::Repeater
                    },
                })
                .collect();
            Ok(Constellation { satellites })
        }
    }
}

/// True when every down-link the scheme depends on clears the elevation
/// threshold at time `t`.
fn chain_visible(scenario: &Scenario, constellation: &Constellation, t_s: f64) -> bool {
    let h = scenario.orbit.altitude_m;
    let (theta_a, _) = station_angles(scenario, t_s);
    let sat_angle =
        |slot: &SatelliteSlot| satellite_angle_rad(&scenario.orbit, slot.phase_rad, t_s);
    match effective_scheme(scenario.scheme, scenario.nesting_level) {
        Scheme::GG => true,
        Scheme::OG => {
            let l0 = ground_arc_rad(scenario) / scenario.link_count() as f64;
            constellation.sources().enumerate().all(|(k, slot)| {
                let angle = sat_angle(slot);
                let left = theta_a + k as f64 * l0;
                let right = theta_a + (k as f64 + 1.0) * l0;
                elevation_rad(angle, h, left) >= MIN_ELEVATION_RAD
                    && elevation_rad(angle, h, right) >= MIN_ELEVATION_RAD
            })
        }
        Scheme::OO => {
            let (theta_a, theta_b) = station_angles(scenario, t_s);
            let first = constellation.satellites.first().expect("non-empty chain");
            let last = constellation.satellites.last().expect("non-empty chain");
            elevation_rad(sat_angle(first), h, theta_a) >= MIN_ELEVATION_RAD
                && elevation_rad(sat_angle(last), h, theta_b) >= MIN_ELEVATION_RAD
        }
    }
}

/// Time at which the chain centre crosses the midpoint of the two
/// stations; the fly-by is symmetric about it for `phase0 = 0`.
fn pass_centre_time_s(scenario: &Scenario) -> f64 {
    let relative = scenario.orbit.signed_rate_rad_s() - EARTH_ROTATION_RAD_S;
    -scenario.orbit.phase0_rad / relative
}

/// The fly-by window `[t_start, t_end]`, or `None` when the scheme's
/// down-links can never all be active at once (or the scheme has no
/// satellites). Boundaries are found by a scan at the scenario's time
/// step, anchored at the pass centre.
pub fn flyby_window(scenario: &Scenario) -> Option<(f64, f64)> {
    if effective_scheme(scenario.scheme, scenario.nesting_level) == Scheme::GG {
        return None;
    }
    let constellation = place_constellation(scenario).ok()?;
    let step = scenario.time_step_s;
    let centre = pass_centre_time_s(scenario);
    if !chain_visible(scenario, &constellation, centre) {
        return None;
    }
    let relative = (scenario.orbit.signed_rate_rad_s() - EARTH_ROTATION_RAD_S).abs();
    let max_steps = (std::f64::consts::PI / relative / step).ceil() as i64;

    let mut fwd = 0i64;
    while fwd < max_steps
        && chain_visible(scenario, &constellation, centre + (fwd + 1) as f64 * step)
    {
        fwd += 1;
    }
    let mut back = 0i64;
    while back < max_steps
        && chain_visible(scenario, &constellation, centre - (back + 1) as f64 * step)
    {
        back += 1;
    }
    Some((centre - back as f64 * step, centre + fwd as f64 * step))
}

/// One optical channel arm at an instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmSample {
    pub path: LinkPath,
    /// Geometrically unusable: below the elevation threshold or occluded
    /// by the Earth limb.
    pub blocked: bool,
}

/// The two arms of one elementary link, source in the middle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementaryLinkGeometry {
    /// Arm towards the lower-index junction (party A side).
    pub arm_a: ArmSample,
    /// Arm towards the higher-index junction (party B side).
    pub arm_b: ArmSample,
}

/// All link geometries at one sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySnapshot {
    pub t_s: f64,
    pub links: Vec<ElementaryLinkGeometry>,
}

fn down_arm(sat_angle: f64, altitude_m: f64, gs_angle: f64) -> ArmSample {
    let elevation = elevation_rad(sat_angle, altitude_m, gs_angle);
    ArmSample {
        path: LinkPath::DownLink {
            distance_m: slant_range_m(sat_angle, altitude_m, gs_angle),
            zenith_rad: std::f64::consts::FRAC_PI_2 - elevation,
        },
        blocked: elevation < MIN_ELEVATION_RAD,
    }
}

fn inter_sat_arm(angle_a: f64, angle_b: f64, altitude_m: f64) -> ArmSample {
    ArmSample {
        path: LinkPath::InterSatellite {
            distance_m: inter_satellite_distance_m(angle_a, angle_b, altitude_m),
        },
        blocked: limb_occluded(angle_a, angle_b, altitude_m),
    }
}

/// Samples all link geometries over the fly-by window at a fixed step,
/// endpoints included. Empty when the window is empty or the scheme has
/// no satellites.
pub fn geometry_series(scenario: &Scenario, time_step_s: f64) -> Vec<GeometrySnapshot> {
    let Some((t_start, t_end)) = flyby_window(scenario) else {
        return Vec::new();
    };
    let constellation = place_constellation(scenario).expect("window implies satellites");
    let h = scenario.orbit.altitude_m;
    let n_links = scenario.link_count() as usize;
    // Last sample must not overrun the window when the step does not
    // divide the duration evenly.
    let samples = ((t_end - t_start) / time_step_s + 1e-9).floor() as usize;
    let effective = effective_scheme(scenario.scheme, scenario.nesting_level);

    (0..=samples)
        .map(|i| {
            let t = t_start + i as f64 * time_step_s;
            let (theta_a, theta_b) = station_angles(scenario, t);
            let angles: Vec<f64> = constellation
                .satellites
                .iter()
                .map(|slot| satellite_angle_rad(&scenario.orbit, slot.phase_rad, t))
                .collect();
            let links = match effective {
                Scheme::GG => unreachable!("no geometry series for fibre chains"),
                Scheme::OG => {
                    let l0 = ground_arc_rad(scenario) / n_links as f64;
                    (0..n_links)
                        .map(|k| ElementaryLinkGeometry {
                            arm_a: down_arm(angles[k], h, theta_a + k as f64 * l0),
                            arm_b: down_arm(angles[k], h, theta_a + (k as f64 + 1.0) * l0),
                        })
                        .collect()
                }
                Scheme::OO => (0..n_links)
                    .map(|k| {
                        let source = angles[2 * k];
                        let arm_a = if k == 0 {
                            down_arm(source, h, theta_a)
                        } else {
                            inter_sat_arm(source, angles[2 * k - 1], h)
                        };
                        let arm_b = if k == n_links - 1 {
                            down_arm(source, h, theta_b)
                        } else {
                            inter_sat_arm(source, angles[2 * k + 1], h)
                        };
                        ElementaryLinkGeometry { arm_a, arm_b }
                    })
                    .collect(),
            };
            GeometrySnapshot { t_s: t, links }
        })
        .collect()
}
