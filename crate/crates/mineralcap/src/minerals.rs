//! The eight battery minerals and exact mass quantities.
//!
//! Quantities are stored as whole kilograms so that supply aggregation is
//! exact; conversion to floating point happens only where the capacity and
//! demand models need ratios.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// One of the eight minerals tracked by the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mineral {
    Lithium,
    Cobalt,
    Nickel,
    Manganese,
    Graphite,
    Aluminum,
    Copper,
    Phosphate,
}

impl Mineral {
    /// All minerals in canonical order.
    pub const ALL: [Mineral; 8] = [
        Mineral::Lithium,
        Mineral::Cobalt,
        Mineral::Nickel,
        Mineral::Manganese,
        Mineral::Graphite,
        Mineral::Aluminum,
        Mineral::Copper,
        Mineral::Phosphate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mineral::Lithium => "lithium",
            Mineral::Cobalt => "cobalt",
            Mineral::Nickel => "nickel",
            Mineral::Manganese => "manganese",
            Mineral::Graphite => "graphite",
            Mineral::Aluminum => "aluminum",
            Mineral::Copper => "copper",
            Mineral::Phosphate => "phosphate",
        }
    }
}

impl fmt::Display for Mineral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mineral {
    type Err = Error;

    /// Case-insensitive on ingest, canonical afterwards.
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lithium" => Ok(Mineral::Lithium),
            "cobalt" => Ok(Mineral::Cobalt),
            "nickel" => Ok(Mineral::Nickel),
            "manganese" => Ok(Mineral::Manganese),
            "graphite" => Ok(Mineral::Graphite),
            "aluminum" | "aluminium" => Ok(Mineral::Aluminum),
            "copper" => Ok(Mineral::Copper),
            "phosphate" => Ok(Mineral::Phosphate),
            _ => Err(Error::UnknownMineral(s.to_string())),
        }
    }
}

/// A non-negative mass stored as whole kilograms.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct Quantity(u64);

impl Quantity {
    pub const ZERO: Quantity = Quantity(0);

    pub fn from_kg(kg: u64) -> Quantity {
        Quantity(kg)
    }

    pub fn from_tons(tons: u64) -> Quantity {
        Quantity(tons * 1000)
    }

    /// Parse a decimal number of metric tons with at most three decimal
    /// places (one-kilogram resolution). Negative values are rejected.
    pub fn parse_tons(s: &str) -> Result<Quantity, String> {
        let s = s.trim();
        if s.starts_with('-') {
            return Err(format!("negative quantity {s:?}"));
        }
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int.is_empty() && frac.is_empty() {
            return Err("empty quantity".to_string());
        }
        if frac.len() > 3 {
            return Err(format!("quantity {s:?} has sub-kilogram precision"));
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| format!("bad quantity {s:?}"))?
        };
        let mut frac_kg: u64 = 0;
        if !frac.is_empty() {
            let digits: u64 = frac.parse().map_err(|_| format!("bad quantity {s:?}"))?;
            frac_kg = digits * 10u64.pow(3 - frac.len() as u32);
        }
        int.checked_mul(1000)
            .and_then(|kg| kg.checked_add(frac_kg))
            .map(Quantity)
            .ok_or_else(|| format!("quantity {s:?} overflows"))
    }

    pub fn kg(self) -> u64 {
        self.0
    }

    pub fn as_kg_f64(self) -> f64 {
        self.0 as f64
    }

    pub fn as_tons_f64(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    /// Format as metric tons, trimming trailing zeros in the fraction.
    pub fn format_tons(self) -> String {
        let tons = self.0 / 1000;
        let rem = self.0 % 1000;
        if rem == 0 {
            format!("{tons}")
        } else {
            let s = format!("{tons}.{rem:03}");
            s.trim_end_matches('0').to_string()
        }
    }

    pub fn checked_add(self, other: Quantity) -> Option<Quantity> {
        self.0.checked_add(other.0).map(Quantity)
    }
}

/// Bauxite ore to aluminum equivalent: four tons of dried bauxite yield one
/// ton of aluminum.
pub fn bauxite_to_aluminum(bauxite: Quantity) -> Result<Quantity, String> {
    if !bauxite.0.is_multiple_of(4) {
        return Err(format!(
            "bauxite quantity {} kg is not divisible by 4",
            bauxite.0
        ));
    }
    Ok(Quantity(bauxite.0 / 4))
}
