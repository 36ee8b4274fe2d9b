//! Transmittance of the optical channels joining chain nodes.
//!
//! Free-space links carry a collimated imperfect Gaussian beam whose
//! waist broadens with distance; the receiver collects the fraction of
//! the intensity profile falling inside its aperture. Down-links pay an
//! additional secant-law atmospheric extinction factor, fibre links an
//! exponential attenuation. Pointing, turbulence, and beam wander are
//! outside the model.

use crate::error::{check_non_negative, check_positive, Error, Result};

/// Transmitter beam description.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BeamParams {
    /// Beam waist at the transmitter, metres.
    pub waist_m: f64,
    /// Beam quality factor M²; 1 is the diffraction limit.
    pub quality_factor: f64,
    /// Wavelength, metres.
    pub wavelength_m: f64,
}

impl BeamParams {
    pub fn new(waist_m: f64, quality_factor: f64, wavelength_m: f64) -> Result<Self> {
        check_positive("beam waist", waist_m)?;
        check_positive("wavelength", wavelength_m)?;
        if !quality_factor.is_finite() || quality_factor < 1.0 {
            return Err(Error::Invalid {
                name: "beam quality factor",
                requirement: "at least 1",
                value: quality_factor,
            });
        }
        Ok(Self {
            waist_m,
            quality_factor,
            wavelength_m,
        })
    }
}

/// Receiving telescope description.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ReceiverParams {
    /// Aperture radius, metres.
    pub radius_m: f64,
    /// Field of view, steradians.
    pub field_of_view_sr: f64,
    /// Spectral filter bandwidth, metres of wavelength.
    pub filter_bandwidth_m: f64,
}

impl ReceiverParams {
    pub fn new(radius_m: f64, field_of_view_sr: f64, filter_bandwidth_m: f64) -> Result<Self> {
        check_positive("receiver radius", radius_m)?;
        check_positive("receiver field of view", field_of_view_sr)?;
        check_positive("filter bandwidth", filter_bandwidth_m)?;
        Ok(Self {
            radius_m,
            field_of_view_sr,
            filter_bandwidth_m,
        })
    }
}

/// Atmosphere and fibre attenuation parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AtmosphereParams {
    /// Extinction exponent at zenith; the slant factor is sec(zenith).
    pub extinction_beta: f64,
    /// Fibre attenuation, dB/km.
    pub fibre_loss_db_per_km: f64,
}

impl AtmosphereParams {
    pub fn new(extinction_beta: f64, fibre_loss_db_per_km: f64) -> Result<Self> {
        check_non_negative("extinction beta", extinction_beta)?;
        check_non_negative("fibre loss", fibre_loss_db_per_km)?;
        Ok(Self {
            extinction_beta,
            fibre_loss_db_per_km,
        })
    }
}

/// One optical channel between adjacent chain nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkPath {
    /// Vacuum link between two satellites.
    InterSatellite { distance_m: f64 },
    /// Satellite-to-ground link crossing the atmosphere once.
    DownLink { distance_m: f64, zenith_rad: f64 },
    /// Ground fibre segment.
    Fibre { length_km: f64 },
}

/// Rayleigh range `z_R = π W₀² / λ` of the beam, metres.
pub fn rayleigh_range_m(beam: &BeamParams) -> f64 {
    std::f64::consts::PI * beam.waist_m * beam.waist_m / beam.wavelength_m
}

/// Beam waist after propagating a distance `z_m` in vacuum:
/// `W(z) = W₀ √(1 + (z M² / z_R)²)`.
pub fn beam_waist_m(beam: &BeamParams, z_m: f64) -> Result<f64> {
    check_non_negative("propagation distance", z_m)?;
    let spread = z_m * beam.quality_factor / rayleigh_range_m(beam);
    Ok(beam.waist_m * (1.0 + spread * spread).sqrt())
}

/// Fraction of the beam power collected by a circular aperture of radius
/// `aperture_radius_m` at distance `z_m`: `1 − exp(−2R²/W(z)²)`, the
/// encircled power of a Gaussian intensity profile of waist `W(z)`.
pub fn diffraction_transmittance(
    beam: &BeamParams,
    aperture_radius_m: f64,
    z_m: f64,
) -> Result<f64> {
    check_positive("aperture radius", aperture_radius_m)?;
    let w = beam_waist_m(beam, z_m)?;
    let ratio = aperture_radius_m / w;
    Ok(1.0 - (-2.0 * ratio * ratio).exp())
}

/// Atmospheric transmittance of a single pass at the given zenith angle:
/// `exp(−β sec θ)`. The zenith angle must stay below 90°.
pub fn atmospheric_extinction(atmosphere: &AtmosphereParams, zenith_rad: f64) -> Result<f64> {
    if !zenith_rad.is_finite() {
        return Err(Error::not_finite("zenith angle", zenith_rad));
    }
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&zenith_rad) {
        return Err(Error::OutOfRange {
            name: "zenith angle",
            min: 0.0,
            max: std::f64::consts::FRAC_PI_2,
            value: zenith_rad,
        });
    }
    Ok((-atmosphere.extinction_beta / zenith_rad.cos()).exp())
}

/// Fibre transmittance over `length_km`: `10^(−α·l/10)` with α in dB/km.
pub fn fibre_transmittance(atmosphere: &AtmosphereParams, length_km: f64) -> Result<f64> {
    check_non_negative("fibre length", length_km)?;
    Ok(10f64.powf(-atmosphere.fibre_loss_db_per_km * length_km / 10.0))
}

/// Transmittance of one channel arm.
///
/// Inter-satellite links see diffraction only; down-links additionally
/// pay the extinction factor; fibre links delegate to
/// [`fibre_transmittance`].
pub fn link_transmittance(
    beam: &BeamParams,
    receiver: &ReceiverParams,
    atmosphere: &AtmosphereParams,
    path: &LinkPath,
) -> Result<f64> {
    match *path {
        LinkPath::InterSatellite { distance_m } => {
            diffraction_transmittance(beam, receiver.radius_m, distance_m)
        }
        LinkPath::DownLink {
            distance_m,
            zenith_rad,
        } => {
            let diffr = diffraction_transmittance(beam, receiver.radius_m, distance_m)?;
            Ok(diffr * atmospheric_extinction(atmosphere, zenith_rad)?)
        }
        LinkPath::Fibre { length_km } => fibre_transmittance(atmosphere, length_km),
    }
}


#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_beam() -> impl Strategy<Value = BeamParams> {
        (0.01..1.0f64, 1.0..10.0f64, 300e-9..2000e-9f64)
            .prop_map(|(w, m2, lambda)| BeamParams::new(w, m2, lambda).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        #[test]
        fn diffraction_within_unit_interval(
            beam in arb_beam(),
            radius in 0.01..5.0f64,
            z in 0.0..5.0e7f64,
        ) {
            let eta = diffraction_transmittance(&beam, radius, z).unwrap();
            prop_assert!(eta > 0.0 && eta <= 1.0, "eta = {}", eta);
        }

        #[test]
        fn diffraction_monotone_in_distance_and_aperture(
            beam in arb_beam(),
            radius in 0.05..2.0f64,
            z in 1.0e3..1.0e7f64,
        ) {
            let eta = diffraction_transmittance(&beam, radius, z).unwrap();
            let further = diffraction_transmittance(&beam, radius, z * 1.5).unwrap();
            let wider = diffraction_transmittance(&beam, radius * 1.5, z).unwrap();
            prop_assert!(further <= eta);
            prop_assert!(wider >= eta);
            // Strict away from f64 saturation at 1.
            if eta < 1.0 - 1e-12 {
                prop_assert!(further < eta);
            }
            if wider < 1.0 - 1e-12 {
                prop_assert!(wider > eta);
            }
        }

        #[test]
        fn downlink_never_beats_intersatellite(
            beam in arb_beam(),
            radius in 0.05..2.0f64,
            z in 1.0e3..1.0e7f64,
            beta in 0.0..3.0f64,
            zenith in 0.0..1.4f64,
        ) {
            let atm = AtmosphereParams::new(beta, 0.17).unwrap();
            let receiver = ReceiverParams::new(radius, 4e-10, 0.5e-9).unwrap();
            let vac = link_transmittance(&beam, &receiver, &atm,
                &LinkPath::InterSatellite { distance_m: z }).unwrap();
            let down = link_transmittance(&beam, &receiver, &atm,
                &LinkPath::DownLink { distance_m: z, zenith_rad: zenith }).unwrap();
            prop_assert!(down <= vac);
        }

        #[test]
        fn fibre_within_unit_interval(alpha in 0.0..1.0f64, l in 0.0..2000.0f64) {
            let atm = AtmosphereParams::new(1.1, alpha).unwrap();
            let eta = fibre_transmittance(&atm, l).unwrap();
            prop_assert!(eta > 0.0 && eta <= 1.0);
        }
    }
}
