//! Built-in city-pair scenarios representative of long-distance traffic.

/// A named ground-distance preset.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CityPairPreset {
    pub name: &'static str,
    pub distance_km: f64,
    /// Whether the great-circle path crosses long stretches of ocean,
    /// where ground repeater stations are impractical.
    pub ocean: bool,
}

pub const CITY_PAIRS: [CityPairPreset; 8] = [
    CityPairPreset {
        name: "New York - San Francisco",
        distance_km: 4000.0,
        ocean: false,
    },
    CityPairPreset {
        name: "New York - Madrid",
        distance_km: 5500.0,
        ocean: true,
    },
    CityPairPreset {
        name: "San Francisco - Tokyo",
        distance_km: 8500.0,
        ocean: true,
    },
    CityPairPreset {
        name: "Tokyo - Beijing",
        distance_km: 2000.0,
        ocean: false,
    },
    CityPairPreset {
        name: "Taipei - New Delhi",
        distance_km: 4500.0,
        ocean: false,
    },
    CityPairPreset {
        name: "Hong Kong - Dubai",
        distance_km: 6000.0,
        ocean: false,
    },
    CityPairPreset {
        name: "Beijing - Berlin",
        distance_km: 7500.0,
        ocean: false,
    },
    CityPairPreset {
        name: "Montreal - Paris",
        distance_km: 5500.0,
        ocean: true,
    },
];

/// Case-insensitive lookup by preset name.
pub fn find_preset(name: &str) -> Option<&'static CityPairPreset> {
    let wanted = name.trim().to_ascii_lowercase();
    CITY_PAIRS
        .iter()
        .find(|p| p.name.to_ascii_lowercase() == wanted)
}
