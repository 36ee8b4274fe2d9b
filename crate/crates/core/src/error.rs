//! Error type shared by all modules of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Domain and validation errors.
///
/// Every variant names the offending quantity so callers can surface
/// field-level diagnostics.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A quantity fell outside its closed interval.
    #[error("{name} must lie in [{min}, {max}], got {value}")]
    OutOfRange {
        name: &'static str,
        min: f64,
        max: f64,
        value: f64,
    },

    /// A quantity violated an open-ended constraint (positivity, finiteness, ...).
    #[error("{name} must be {requirement}, got {value}")]
    Invalid {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// Bell weights did not sum to one within the normalization tolerance.
    #[error("Bell weights must sum to 1 within 1e-12, got {sum}")]
    NotNormalized { sum: f64 },

    /// A Bell weight was negative beyond what rounding can explain.
    #[error("Bell weight {name} = {value} is negative beyond rounding tolerance")]
    NegativeWeight { name: &'static str, value: f64 },

    /// Signal and noise expectation values were both zero.
    #[error("signal and noise photon counts are both zero; detection origin is undefined")]
    ZeroCounts,

    /// An operation that needs a satellite segment was asked about a pure fibre chain.
    #[error("scheme {scheme} has no satellite segment")]
    NoSatelliteSegment { scheme: &'static str },
}

impl Error {
    pub(crate) fn not_positive(name: &'static str, value: f64) -> Self {
        Error::Invalid {
            name,
            requirement: "strictly positive",
            value,
        }
    }

    pub(crate) fn not_finite(name: &'static str, value: f64) -> Self {
        Error::Invalid {
            name,
            requirement: "finite",
            value,
        }
    }

    pub(crate) fn unit_interval(name: &'static str, value: f64) -> Self {
        Error::OutOfRange {
            name,
            min: 0.0,
            max: 1.0,
            value,
        }
    }
}

/// Validates that `value` is a probability in `[0, 1]`.
pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::not_finite(name, value));
    }
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::unit_interval(name, value));
    }
    Ok(value)
}

/// Validates that `value` is finite and strictly positive.
pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::not_finite(name, value));
    }
    if value <= 0.0 {
        return Err(Error::not_positive(name, value));
    }
    Ok(value)
}

/// Validates that `value` is finite and non-negative.
pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::not_finite(name, value));
    }
    if value < 0.0 {
        return Err(Error::Invalid {
            name,
            requirement: "non-negative",
            value,
        });
    }
    Ok(value)
}
