//! Library side of the command-line front end: configuration loading,
//! sweep execution, serialization, and scenario presets.

pub mod config;
pub mod output;
pub mod presets;
