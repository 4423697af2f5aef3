//! Road attributes, safe travel speeds and the speed <-> mask channel codec.
//!
//! Speeds are quantized into six 10 mph bins centered on 15, 25, ..., 65 mph.
//! Bin `k` (1-based) covers `(10k, 10k + 10]` and maps to mask channel `k`;
//! channel 7 of a mask is the union of all roads and carries no speed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Meters per second in one mile per hour (exact by definition of the mile).
pub const MPS_PER_MPH: f64 = 0.44704;

pub const SPEED_CHANNELS: usize = 6;
pub const UNION_CHANNEL: usize = 7;
pub const NUM_CHANNELS: usize = 7;

/// Speed assigned when a mask gives no evidence for any speed bin.
pub const FALLBACK_SPEED_MPH: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoadType {
    Residential,
    Tertiary,
    Secondary,
    Primary,
    Motorway,
    Track,
}

impl RoadType {
    pub const ALL: [RoadType; 6] = [
        RoadType::Residential,
        RoadType::Tertiary,
        RoadType::Secondary,
        RoadType::Primary,
        RoadType::Motorway,
        RoadType::Track,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RoadType::Residential => "residential",
            RoadType::Tertiary => "tertiary",
            RoadType::Secondary => "secondary",
            RoadType::Primary => "primary",
            RoadType::Motorway => "motorway",
            RoadType::Track => "track",
        }
    }
}

impl fmt::Display for RoadType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RoadType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RoadType::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Validation(format!("unknown road type {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RoadAttributes {
    pub road_type: RoadType,
    lanes: u32,
    pub paved: bool,
}

impl RoadAttributes {
    pub fn new(road_type: RoadType, lanes: u32, paved: bool) -> Result<Self> {
        if lanes == 0 {
            return Err(Error::Validation("a road needs at least one lane".into()));
        }
        Ok(RoadAttributes { road_type, lanes, paved })
    }

    pub fn lanes(&self) -> u32 {
        self.lanes
    }
}

/// Safe travel speed for a road, always one of the six bin centers.
pub fn speed_for_attributes(attrs: &RoadAttributes) -> f64 {
    let base = match attrs.road_type {
        RoadType::Residential => 25.0,
        RoadType::Tertiary => 35.0,
        RoadType::Secondary | RoadType::Primary => 45.0,
        RoadType::Motorway => (55.0 + 5.0 * f64::from(attrs.lanes - 1)).clamp(55.0, 65.0),
        RoadType::Track => 15.0,
    };
    let speed = if attrs.paved { base } else { f64::min(base, 15.0) };
    // A two-lane motorway (60 mph) lands on a bin edge; quantize to the center.
    channel_to_speed(speed_to_channel(speed).expect("table speeds are in range"))
        .expect("speed channels are 1..=6")
}

/// Mask channel (1..=6) whose 10 mph bin contains `speed_mph`.
pub fn speed_to_channel(speed_mph: f64) -> Result<usize> {
    if !(speed_mph > 10.0 && speed_mph <= 70.0) {
        return Err(Error::SpeedOutOfRange(speed_mph));
    }
    Ok((speed_mph / 10.0).ceil() as usize - 1)
}

/// Bin-center speed for a speed channel.
pub fn channel_to_speed(channel: usize) -> Result<f64> {
    if !(1..=SPEED_CHANNELS).contains(&channel) {
        return Err(Error::InvalidChannel(channel));
    }
    Ok(15.0 + 10.0 * (channel - 1) as f64)
}

pub fn travel_time_seconds(length_m: f64, speed_mph: f64) -> Result<f64> {
    if !(speed_mph > 0.0) {
        return Err(Error::Domain(format!("speed must be positive, got {speed_mph} mph")));
    }
    if !(length_m >= 0.0) {
        return Err(Error::Domain(format!("length must be non-negative, got {length_m} m")));
    }
    Ok(length_m / (speed_mph * MPS_PER_MPH))
}
