//! Environmental photons, signal probability, and swapping success.
//!
//! Background light entering a ground receiver competes with signal
//! photons inside the spectral and temporal acceptance window. A
//! detection is a signal photon with probability `N_s/(N_s + N_n)`;
//! accepting an environmental photon instead replaces the pair with
//! white noise, which is how fidelity degrades in [`effective_fidelity`].
//! Dark counts enter only through the success probability of the
//! linear-optics Bell-state measurement.

use crate::bellstate::BellDiagonalState;
use crate::error::{check_non_negative, check_probability, Error, Result};
use crate::linkbudget::ReceiverParams;
use crate::params::NoiseEnvironment;

/// Planck constant, J·s.
pub const PLANCK_J_S: f64 = 6.62607015e-34;

/// Expected number of environmental photons per acceptance window:
/// `N_n = H_b/(hν) · Ω_fov · π a² · B_f · Δt`.
pub fn background_photons(
    env: &NoiseEnvironment,
    receiver: &ReceiverParams,
    time_window_s: f64,
) -> Result<f64> {
    check_non_negative("time window", time_window_s)?;
    let photon_energy = PLANCK_J_S * env.photon_frequency_hz;
    let aperture_area = std::f64::consts::PI * receiver.radius_m * receiver.radius_m;
    Ok(env.sky_brightness_w_m2_sr_m / photon_energy
        * receiver.field_of_view_sr
        * aperture_area
        * receiver.filter_bandwidth_m
        * time_window_s)
}

/// Probability that a detection was caused by a signal photon rather
/// than background: `P_s = N_s/(N_s + N_n)`.
pub fn signal_probability(n_signal: f64, n_noise: f64) -> Result<f64> {
    check_non_negative("signal count", n_signal)?;
    check_non_negative("noise count", n_noise)?;
    if n_signal == 0.0 && n_noise == 0.0 {
        return Err(Error::ZeroCounts);
    }
    Ok(n_signal / (n_signal + n_noise))
}

/// Fidelity after mixing with unpolarized background at both receivers:
/// `F = P_s1·P_s2·F₀ + (1 − P_s1·P_s2)/4`.
pub fn effective_fidelity(f0: f64, ps1: f64, ps2: f64) -> Result<f64> {
    check_probability("initial fidelity", f0)?;
    check_probability("signal probability 1", ps1)?;
    check_probability("signal probability 2", ps2)?;
    let p = ps1 * ps2;
    Ok(p * f0 + (1.0 - p) * 0.25)
}

/// Success probability of one entanglement swapping attempt with a
/// linear-optics Bell-state measurement and noisy detectors:
/// `P_ES = ½ {(1 − p_dark)(η_d + 2 p_dark (1 − η_d))}²`.
///
/// The ½ prefactor is the linear-optics ceiling (two of the four Bell
/// states are distinguishable), so the value never exceeds one half.
pub fn es_success_probability(env: &NoiseEnvironment) -> f64 {
    es_success_from(env.detector_efficiency, env.dark_count_prob)
}

pub(crate) fn es_success_from(eta_d: f64, p_dark: f64) -> f64 {
    let inner = (1.0 - p_dark) * (eta_d + 2.0 * p_dark * (1.0 - eta_d));
    0.5 * inner * inner
}

/// Elementary pair right before heralding: a depolarized pair of the
/// given fidelity mixed with white noise by the joint signal probability.
pub fn noisy_elementary_pair(f0: f64, ps1: f64, ps2: f64) -> Result<BellDiagonalState> {
    check_probability("signal probability 1", ps1)?;
    check_probability("signal probability 2", ps2)?;
    BellDiagonalState::depolarized(f0)?.mix_white_noise(ps1 * ps2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{HardwareParams, SkyPreset};

    fn assert_rel(actual: f64, expected: f64, rel: f64, what: &str) {
        let err = (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        assert!(
            err <= rel,
            "{what}: expected {expected}, got {actual} (rel err {err:.3e})"
        );
    }

    fn baseline_env() -> NoiseEnvironment {
        NoiseEnvironment::from_preset(SkyPreset::FullMoon, &HardwareParams::default())
    }

    #[test]
    fn background_zero_for_dark_sky() {
        let mut env = baseline_env();
        env.sky_brightness_w_m2_sr_m = 0.0;
        let hw = HardwareParams::default();
        assert_eq!(background_photons(&env, &hw.receiver, 5e-8).unwrap(), 0.0);
    }

    #[test]
    fn background_baseline_count() {
        // Full-Moon sky, 0.5 m aperture, (20 µrad)² field of view, 0.5 nm
        // filter, 50 ns window at 580 nm.
        let env = baseline_env();
        let hw = HardwareParams::default();
        let n = background_photons(&env, &hw.receiver, 1.0 / 20e6).unwrap();
        assert_rel(
            n,
            3.439793738634737e-5,
            1e-12,
            "background photons per window",
        );
    }

    #[test]
    fn background_linear_in_window() {
        let env = baseline_env();
        let hw = HardwareParams::default();
        let n1 = background_photons(&env, &hw.receiver, 5e-8).unwrap();
        let n2 = background_photons(&env, &hw.receiver, 1e-7).unwrap();
        assert_rel(n2, 2.0 * n1, 1e-12, "doubling the window doubles the count");
    }

    #[test]
    fn signal_probability_limits() {
        assert_eq!(signal_probability(1e-3, 0.0).unwrap(), 1.0);
        assert_eq!(signal_probability(0.5, 0.5).unwrap(), 0.5);
        assert_rel(
            signal_probability(1e-3, 3.4e-8).unwrap(),
            0.9999660011559606,
            1e-12,
            "nearly clean detection",
        );
        assert!(matches!(
            signal_probability(0.0, 0.0),
            Err(Error::ZeroCounts)
        ));
        assert!(signal_probability(-1.0, 0.1).is_err());
    }

    #[test]
    fn effective_fidelity_limits() {
        assert_eq!(effective_fidelity(0.98, 1.0, 1.0).unwrap(), 0.98);
        assert_eq!(effective_fidelity(0.98, 0.0, 0.7).unwrap(), 0.25);
        assert_rel(
            effective_fidelity(0.98, 0.9, 0.9).unwrap(),
            0.8413,
            1e-15,
            "joint 0.81 signal probability",
        );
        assert!(effective_fidelity(1.2, 0.9, 0.9).is_err());
    }

    #[test]
    fn effective_fidelity_equals_white_noise_mixing() {
        // Cross-module consistency, exact to the last bit.
        for (f0, p1, p2) in [(0.98, 0.9, 0.9), (0.8, 0.97, 0.3), (0.5, 1.0, 0.25)] {
            let direct = effective_fidelity(f0, p1, p2).unwrap();
            let mixed = noisy_elementary_pair(f0, p1, p2).unwrap().fidelity();
            assert_eq!(direct, mixed);
        }
    }

    #[test]
    fn es_success_values() {
        let ideal = NoiseEnvironment {
            dark_count_prob: 0.0,
            detector_efficiency: 1.0,
            ..baseline_env()
        };
        assert_eq!(es_success_probability(&ideal), 0.5);

        let blind = NoiseEnvironment {
            dark_count_prob: 0.0,
            detector_efficiency: 1e-300,
            ..baseline_env()
        };
        assert!(es_success_probability(&blind) < 1e-100);

        assert_rel(
            es_success_probability(&baseline_env()),
            0.4049937000065002,
            1e-12,
            "baseline swapping success",
        );
    }
}
