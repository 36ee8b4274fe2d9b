//! Asymptotic BB84 secret-key rates of entanglement-swapping repeater
//! chains, for three architectures: sources and repeaters on satellites
//! (`OO`), everything on ground fibre (`GG`), and orbiting sources with
//! ground repeater stations (`OG`).
//!
//! The crate is organised bottom-up:
//!
//! - [`bellstate`] — Bell-diagonal two-qubit states and the swapping algebra,
//! - [`linkbudget`] — transmittance of free-space and fibre optical channels,
//! - [`orbits`] — circular equatorial orbit kinematics and fly-by windows,
//! - [`noise`] — environmental photons, dark counts, swapping success,
//! - [`chain`] — the full pipeline from a [`params::Scenario`] to a
//!   [`params::KeyRateResult`],
//! - [`selftest`] — a density-matrix reference implementation used to
//!   cross-check the Bell-weight algebra.
//!
//! All operations are pure functions over immutable inputs; results are
//! deterministic and safe to evaluate concurrently.

pub mod bellstate;
pub mod chain;
pub mod error;
pub mod linkbudget;
pub mod noise;
pub mod orbits;
pub mod params;
pub mod selftest;

pub use error::{Error, Result};
