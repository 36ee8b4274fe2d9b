//! From a [`Scenario`] to a secret key rate.
//!
//! The pipeline is `average_p0 → repeater_rate → final_state →
//! error_rates → secret_fraction`, multiplied out as
//!
//! ```text
//! R_key = R_rep · P_click · R_sift · r∞,    P_click = η_d², R_sift = 1.
//! ```
//!
//! `R_rep` is the entanglement distribution rate of the chain,
//! `R_rep = R_src · P₀ · P_QND² · P_W² · (⅔ · P_ES · P_R²)ⁿ`, with `P₀`
//! the fly-by averaged transmittance of the bottleneck elementary link
//! and one factor of the parenthesis per nesting level.

use crate::bellstate::BellDiagonalState;
use crate::error::{check_probability, Error, Result};
use crate::linkbudget::{link_transmittance, LinkPath};
use crate::noise::{
    background_photons, es_success_from, noisy_elementary_pair, signal_probability,
};
use crate::orbits::{effective_scheme, flyby_window, geometry_series, ArmSample};
use crate::params::{BottleneckRule, HardwareParams, KeyRateResult, Scenario, Scheme};

/// Seconds of availability per day for the all-fibre chain.
pub const SECONDS_PER_DAY: f64 = 86400.0;

/// Binary entropy in bits, with `h(0) = h(1) = 0` by continuity.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_probability("entropy argument", p)?;
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

/// Asymptotic BB84 secret fraction `max(0, 1 − h(e_Z) − h(e_X))`.
///
/// Error rates must be probabilities; values from
/// [`BellDiagonalState::error_rates`] always are.
pub fn secret_fraction(e_x: f64, e_z: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&e_x) && (0.0..=1.0).contains(&e_z));
    let leaked = binary_entropy(e_x).unwrap_or(1.0) + binary_entropy(e_z).unwrap_or(1.0);
    (1.0 - leaked).max(0.0)
}

/// Which receivers see environmental photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NoisePlacement {
    /// Fibre links: no background light reaches the receivers.
    None,
    /// Every receiver is a ground station; each arm keeps its own
    /// signal probability.
    PerArm,
    /// Space receivers see almost nothing, but every pair is charged the
    /// worst down-link's signal probability on both arms, as a lower
    /// bound on the chain.
    WorstArmBoth,
}

fn noise_placement(scheme: Scheme, nesting_level: u32) -> NoisePlacement {
    match effective_scheme(scheme, nesting_level) {
        Scheme::GG => NoisePlacement::None,
        Scheme::OG => NoisePlacement::PerArm,
        Scheme::OO => NoisePlacement::WorstArmBoth,
    }
}

/// Fly-by aggregates of a scenario's link geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlybyAverages {
    /// Averaged bottleneck transmittance of the elementary links.
    pub p0: f64,
    /// Fly-by window, when the scheme has one.
    pub window: Option<(f64, f64)>,
    /// Seconds the chain can run, per pass (satellite) or per day (fibre).
    pub duration_s: f64,
    /// Averaged signal transmittance toward the A-side noise-relevant
    /// receiver (down-link arms only; 1 for fibre).
    pub signal_arm_a: f64,
    /// Same for the B side.
    pub signal_arm_b: f64,
}

fn arm_transmittance(scenario: &Scenario, arm: &ArmSample) -> Result<f64> {
    if arm.blocked {
        return Ok(0.0);
    }
    let hw = &scenario.hardware;
    let receiver = match arm.path {
        LinkPath::InterSatellite { .. } => hw.sat_receiver(),
        _ => hw.receiver,
    };
    link_transmittance(&hw.beam, &receiver, &hw.atmosphere, &arm.path)
}

/// Evaluates the fly-by aggregates of a scenario.
///
/// `GG` chains are time independent: `P₀ = η_f(l₀)`, the product of two
/// fibre arms of length `l₀/2`. Satellite chains sample the window at
/// the scenario time step; an empty window yields all-zero aggregates.
pub fn flyby_averages(scenario: &Scenario) -> Result<FlybyAverages> {
    scenario.validate()?;
    if scenario.scheme == Scheme::GG {
        let half = scenario.elementary_length_km() / 2.0;
        let arm = link_transmittance(
            &scenario.hardware.beam,
            &scenario.hardware.receiver,
            &scenario.hardware.atmosphere,
            &LinkPath::Fibre { length_km: half },
        )?;
        return Ok(FlybyAverages {
            p0: arm * arm,
            window: None,
            duration_s: SECONDS_PER_DAY,
            signal_arm_a: 1.0,
            signal_arm_b: 1.0,
        });
    }

    let Some(window) = flyby_window(scenario) else {
        return Ok(FlybyAverages {
            p0: 0.0,
            window: None,
            duration_s: 0.0,
            signal_arm_a: 0.0,
            signal_arm_b: 0.0,
        });
    };
    let series = geometry_series(scenario, scenario.time_step_s);
    let samples = series.len();
    let n_links = scenario.link_count() as usize;

    let mut min_sum = 0.0;
    let mut per_link_sums = vec![0.0f64; n_links];
    let mut arm_a_sum = 0.0;
    let mut arm_b_sum = 0.0;
    for snapshot in &series {
        let mut worst = f64::INFINITY;
        for (k, link) in snapshot.links.iter().enumerate() {
            let ta = arm_transmittance(scenario, &link.arm_a)?;
            let tb = arm_transmittance(scenario, &link.arm_b)?;
            let double = ta * tb;
            per_link_sums[k] += double;
            worst = worst.min(double);
            // Noise bookkeeping: the A-side arm of the first link and the
            // B-side arm of the last one are down-links in every satellite
            // scheme; for OG the interior links are congruent to these.
            if k == 0 {
                arm_a_sum += ta;
            }
            if k == n_links - 1 {
                arm_b_sum += tb;
            }
        }
        min_sum += worst;
    }
    let inv = 1.0 / samples as f64;
    let p0 = match scenario.bottleneck_rule {
        BottleneckRule::MinThenAverage => min_sum * inv,
        BottleneckRule::AverageThenMin => per_link_sums
            .iter()
            .fold(f64::INFINITY, |acc, s| acc.min(s * inv)),
    };
    Ok(FlybyAverages {
        p0,
        window: Some(window),
        duration_s: window.1 - window.0,
        signal_arm_a: arm_a_sum * inv,
        signal_arm_b: arm_b_sum * inv,
    })
}

/// Fly-by averaged bottleneck transmittance of the elementary links.
pub fn average_p0(scenario: &Scenario) -> Result<f64> {
    Ok(flyby_averages(scenario)?.p0)
}

/// Entanglement distribution rate of the chain, Hz. With `n = 0` there
/// are no memories and the direct source rate applies.
pub fn repeater_rate(p0: f64, hardware: &HardwareParams, nesting_level: u32) -> f64 {
    let source = if nesting_level == 0 {
        hardware.direct_source_rate_hz
    } else {
        hardware.source_rate_hz
    };
    let p_es = es_success_from(hardware.eta_d, hardware.p_dark);
    let per_level = (2.0 / 3.0) * p_es * hardware.p_r * hardware.p_r;
    source
        * p0
        * hardware.p_qnd
        * hardware.p_qnd
        * hardware.p_w
        * hardware.p_w
        * per_level.powi(nesting_level as i32)
}

/// The pair shared between the parties after all swapping levels.
///
/// The elementary pair is a depolarized state of the hardware fidelity
/// mixed with white noise by the joint signal probability; the signal
/// probabilities follow the scheme's noise placement from the averaged
/// arm transmittances. All `2^n` elementary pairs are taken as
/// identically distributed.
pub fn final_state(
    scenario: &Scenario,
    signal_arm_a: f64,
    signal_arm_b: f64,
) -> Result<BellDiagonalState> {
    let window_s = 1.0
        / if scenario.nesting_level == 0 {
            scenario.hardware.direct_source_rate_hz
        } else {
            scenario.hardware.source_rate_hz
        };
    let n_noise = background_photons(&scenario.environment, &scenario.hardware.receiver, window_s)?;
    let (ps1, ps2) = match noise_placement(scenario.scheme, scenario.nesting_level) {
        NoisePlacement::None => (1.0, 1.0),
        NoisePlacement::PerArm => (
            signal_probability(signal_arm_a, n_noise)?,
            signal_probability(signal_arm_b, n_noise)?,
        ),
        NoisePlacement::WorstArmBoth => {
            let worst = signal_arm_a.min(signal_arm_b);
            let ps = signal_probability(worst, n_noise)?;
            (ps, ps)
        }
    };
    let elementary = noisy_elementary_pair(scenario.hardware.initial_fidelity, ps1, ps2)?;
    Ok(elementary.nest(scenario.nesting_level))
}

/// Secret key accumulated over one day, bits: all-day operation for the
/// fibre chain, one fly-by per pass times `passes_per_day` otherwise.
pub fn daily_key(scenario: &Scenario, result: &KeyRateResult) -> f64 {
    if scenario.scheme == Scheme::GG {
        result.key_rate_hz * SECONDS_PER_DAY
    } else {
        result.key_rate_hz * result.flyby_duration_s * scenario.passes_per_day
    }
}

/// Runs the whole pipeline for one scenario.
///
/// Geometric infeasibility (an empty fly-by window, or fully occluded
/// inter-satellite links) yields a zero-rate result rather than an
/// error; errors are reserved for invalid inputs.
pub fn secret_key_rate(scenario: &Scenario) -> Result<KeyRateResult> {
    let averages = flyby_averages(scenario)?;
    if scenario.scheme != Scheme::GG && averages.duration_s == 0.0 {
        return Ok(KeyRateResult::infeasible());
    }
    let repeater_rate_hz = repeater_rate(averages.p0, &scenario.hardware, scenario.nesting_level);
    let state = final_state(scenario, averages.signal_arm_a, averages.signal_arm_b)?;
    let rates = state.error_rates();
    let fraction = secret_fraction(rates.e_x, rates.e_z);
    let p_click = scenario.hardware.eta_d * scenario.hardware.eta_d;
    let key_rate_hz = repeater_rate_hz * p_click * fraction;
    let mut result = KeyRateResult {
        p0: averages.p0,
        repeater_rate_hz,
        e_x: rates.e_x,
        e_z: rates.e_z,
        secret_fraction: fraction,
        key_rate_hz,
        flyby_duration_s: averages.duration_s,
        daily_key_bits: 0.0,
    };
    result.daily_key_bits = daily_key(scenario, &result);
    Ok(result)
}

/// The cross product swept by [`compare_schemes`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub schemes: Vec<Scheme>,
    pub distances_km: Vec<f64>,
    pub nesting_levels: Vec<u32>,
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() || self.distances_km.is_empty() || self.nesting_levels.is_empty()
        {
            return Err(Error::Invalid {
                name: "sweep grid",
                requirement: "non-empty in every dimension",
                value: 0.0,
            });
        }
        Ok(())
    }
}

/// One evaluated sweep cell. A failed cell keeps an all-zero result and
/// records the failure in `reason`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub total_distance_km: f64,
    pub nesting_level: u32,
    pub result: KeyRateResult,
    pub reason: Option<String>,
}

/// Evaluates the grid against a template scenario, returning rows
/// ordered by `(scheme, L, n)`. Evaluation is deterministic; a failing
/// cell does not abort the sweep.
pub fn compare_schemes(grid: &SweepGrid, template: &Scenario) -> Result<Vec<SweepRow>> {
    grid.validate()?;
    template.validate()?;
    let mut schemes = grid.schemes.clone();
    schemes.sort();
    schemes.dedup();
    let mut distances = grid.distances_km.clone();
    distances.sort_by(|a, b| a.total_cmp(b));
    distances.dedup();
    let mut levels = grid.nesting_levels.clone();
    levels.sort_unstable();
    levels.dedup();

    let mut rows = Vec::with_capacity(schemes.len() * distances.len() * levels.len());
    for &scheme in &schemes {
        for &l_km in &distances {
            for &n in &levels {
                let mut scenario = template.clone();
                scenario.scheme = scheme;
                scenario.total_distance_km = l_km;
                scenario.nesting_level = n;
                let (result, reason) = match secret_key_rate(&scenario) {
                    Ok(result) => (result, None),
                    Err(err) => (KeyRateResult::infeasible(), Some(err.to_string())),
                };
                rows.push(SweepRow {
                    scheme,
                    total_distance_km: l_km,
                    nesting_level: n,
                    result,
                    reason,
                });
            }
        }
    }
    Ok(rows)
}
