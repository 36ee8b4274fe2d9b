//! Sweep execution and machine-readable serialization.
//!
//! CSV carries 13 significant digits per metric; JSON uses the shortest
//! round-trip float form, so either file diffs cleanly across runs.

use std::io::{self, Write};

use pearlchain_core::chain::{compare_schemes, SweepGrid, SweepRow};
use pearlchain_core::orbits::flyby_window;
use pearlchain_core::params::Scheme;

use crate::config::RunConfig;

/// One sweep row flattened for serialization.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepRecord {
    pub scheme: String,
    pub l_km: f64,
    pub n: u32,
    pub p0: f64,
    pub r_rep_hz: f64,
    pub e_x: f64,
    pub e_z: f64,
    pub r_inf: f64,
    pub key_rate_hz: f64,
    pub flyby_s: f64,
    pub daily_bits: f64,
    pub reason: String,
}

impl From<&SweepRow> for SweepRecord {
    fn from(row: &SweepRow) -> Self {
        Self {
            scheme: row.scheme.to_string(),
            l_km: row.total_distance_km,
            n: row.nesting_level,
            p0: row.result.p0,
            r_rep_hz: row.result.repeater_rate_hz,
            e_x: row.result.e_x,
            e_z: row.result.e_z,
            r_inf: row.result.secret_fraction,
            key_rate_hz: row.result.key_rate_hz,
            flyby_s: row.result.flyby_duration_s,
            daily_bits: row.result.daily_key_bits,
            reason: row.reason.clone().unwrap_or_default(),
        }
    }
}

/// Runs the configured sweep; row order is `(scheme, L, n)`.
pub fn sweep_rows(config: &RunConfig) -> Result<Vec<SweepRow>, String> {
    let grid = SweepGrid {
        schemes: config.schemes.clone(),
        distances_km: config.distances_km.clone(),
        nesting_levels: config.nesting_levels.clone(),
    };
    compare_schemes(&grid, &config.template).map_err(|e| e.to_string())
}

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

pub const SWEEP_CSV_HEADER: &str =
    "scheme,L_km,n,P0,R_rep_hz,eX,eZ,r_inf,key_rate_hz,flyby_s,daily_bits,reason";

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: &mut W) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for row in rows {
        let r = &row.result;
        writeln!(
            out,
            "{},{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}",
            row.scheme,
            row.total_distance_km,
            row.nesting_level,
            r.p0,
            r.repeater_rate_hz,
            r.e_x,
            r.e_z,
            r.secret_fraction,
            r.key_rate_hz,
            r.flyby_duration_s,
            r.daily_key_bits,
            csv_field(row.reason.as_deref().unwrap_or("")),
        )?;
    }
    Ok(())
}

pub fn write_sweep_json<W: Write>(rows: &[SweepRow], out: &mut W) -> io::Result<()> {
    let records: Vec<SweepRecord> = rows.iter().map(SweepRecord::from).collect();
    serde_json::to_writer_pretty(&mut *out, &records)?;
    writeln!(out)
}

/// One fly-by duration sample.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FlybyRecord {
    pub scheme: String,
    pub l_km: f64,
    pub n: u32,
    pub h_km: f64,
    pub flyby_s: f64,
}

/// Fly-by durations over (scheme, L, n, altitude); fibre chains have no
/// fly-by and are skipped.
pub fn flyby_rows(config: &RunConfig) -> Result<Vec<FlybyRecord>, String> {
    let mut schemes: Vec<Scheme> = config
        .schemes
        .iter()
        .copied()
        .filter(|s| *s != Scheme::GG)
        .collect();
    schemes.sort();
    schemes.dedup();
    let mut levels = config.nesting_levels.clone();
    levels.sort_unstable();
    levels.dedup();
    let mut altitudes = config.flyby_altitudes_km.clone();
    altitudes.sort_by(|a, b| a.total_cmp(b));
    altitudes.dedup();

    let mut rows = Vec::new();
    for &scheme in &schemes {
        for &l_km in &config.distances_km {
            for &n in &levels {
                for &h_km in &altitudes {
                    let mut scenario = config.template.clone();
                    scenario.scheme = scheme;
                    scenario.total_distance_km = l_km;
                    scenario.nesting_level = n;
                    scenario.orbit.altitude_m = h_km * 1e3;
                    scenario.validate().map_err(|e| e.to_string())?;
                    let flyby_s = flyby_window(&scenario).map_or(0.0, |(a, b)| b - a);
                    rows.push(FlybyRecord {
                        scheme: scheme.to_string(),
                        l_km,
                        n,
                        h_km,
                        flyby_s,
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub const FLYBY_CSV_HEADER: &str = "scheme,L_km,n,h_km,flyby_s";

pub fn write_flyby_csv<W: Write>(rows: &[FlybyRecord], out: &mut W) -> io::Result<()> {
    writeln!(out, "{FLYBY_CSV_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{:.12e}",
            row.scheme, row.l_km, row.n, row.h_km, row.flyby_s
        )?;
    }
    Ok(())
}

pub fn write_flyby_json<W: Write>(rows: &[FlybyRecord], out: &mut W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, rows)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_fields_with_commas_are_quoted() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a, b"), "\"a, b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn small_sweep_serializes_deterministically() {
        let config = RunConfig {
            distances_km: vec![800.0],
            schemes: vec![Scheme::GG],
            nesting_levels: vec![1, 2],
            ..Default::default()
        };
        let rows = sweep_rows(&config).unwrap();
        assert_eq!(rows.len(), 2);

        let mut first = Vec::new();
        write_sweep_csv(&rows, &mut first).unwrap();
        let mut second = Vec::new();
        write_sweep_csv(&sweep_rows(&config).unwrap(), &mut second).unwrap();
        assert_eq!(first, second);

        let text = String::from_utf8(first).unwrap();
        assert!(text.starts_with("scheme,L_km,n,"));
        assert!(text.ends_with('\n'));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn flyby_rows_skip_fibre_and_cover_altitudes() {
        let config = RunConfig {
            distances_km: vec![2000.0],
            nesting_levels: vec![1],
            flyby_altitudes_km: vec![500.0, 1000.0],
            ..Default::default()
        };
        let rows = flyby_rows(&config).unwrap();
        // Two satellite schemes x one L x one n x two altitudes.
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.scheme != "GG"));
    }
}
