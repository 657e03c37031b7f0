//! Battery chemistries, per-pack mineral content, and market-mix schedules.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minerals::Mineral;

/// Reference sedan pack size all content figures are standardized to.
pub const REFERENCE_PACK_KWH: f64 = 75.0;
/// Reference range all chemistries are standardized to.
pub const REFERENCE_RANGE_MILES: f64 = 300.0;

/// The six battery chemistries covered by the model, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Chemistry {
    #[serde(rename = "NMC111")]
    Nmc111,
    #[serde(rename = "NMC523")]
    Nmc523,
    #[serde(rename = "NMC622")]
    Nmc622,
    #[serde(rename = "NMC811")]
    Nmc811,
    #[serde(rename = "NCA")]
    Nca,
    #[serde(rename = "LFP")]
    Lfp,
}

impl Chemistry {
    pub const ALL: [Chemistry; 6] = [
        Chemistry::Nmc111,
        Chemistry::Nmc523,
        Chemistry::Nmc622,
        Chemistry::Nmc811,
        Chemistry::Nca,
        Chemistry::Lfp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Chemistry::Nmc111 => "NMC111",
            Chemistry::Nmc523 => "NMC523",
            Chemistry::Nmc622 => "NMC622",
            Chemistry::Nmc811 => "NMC811",
            Chemistry::Nca => "NCA",
            Chemistry::Lfp => "LFP",
        }
    }
}

impl fmt::Display for Chemistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Chemistry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let canon = s.trim().to_ascii_uppercase().replace([' ', '-'], "");
        match canon.as_str() {
            "NMC111" => Ok(Chemistry::Nmc111),
            "NMC523" => Ok(Chemistry::Nmc523),
            "NMC622" => Ok(Chemistry::Nmc622),
            "NMC811" => Ok(Chemistry::Nmc811),
            "NCA" => Ok(Chemistry::Nca),
            "LFP" => Ok(Chemistry::Lfp),
            _ => Err(Error::UnknownChemistry(s.to_string())),
        }
    }
}

/// Kilograms of each mineral in one pack of a given chemistry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChemistryIntensity {
    pub chemistry: Chemistry,
    /// kg per pack, by mineral. Zero means the chemistry does not use it.
    pub content: BTreeMap<Mineral, f64>,
    pub pack_kwh: f64,
    pub range_miles: f64,
    /// Lower/upper content bounds where the source gives a range.
    pub bounds: BTreeMap<Mineral, (f64, f64)>,
}

impl ChemistryIntensity {
    pub fn content(&self, mineral: Mineral) -> f64 {
        self.content.get(&mineral).copied().unwrap_or(0.0)
    }

    /// Minerals actually used by this chemistry.
    pub fn nonzero_minerals(&self) -> impl Iterator<Item = (Mineral, f64)> + '_ {
        self.content
            .iter()
            .filter(|(_, &kg)| kg > 0.0)
            .map(|(&m, &kg)| (m, kg))
    }

    fn validate(&self) -> Result<()> {
        let ctx = format!("intensity for {}", self.chemistry);
        for (&m, &kg) in &self.content {
            if !kg.is_finite() || kg < 0.0 {
                return Err(Error::validation(&ctx, format!("negative content for {m}")));
            }
        }
        let zero_required: &[Mineral] = match self.chemistry {
            Chemistry::Lfp => &[Mineral::Cobalt, Mineral::Nickel, Mineral::Manganese],
            Chemistry::Nca => &[Mineral::Manganese],
            _ => &[],
        };
        for &m in zero_required {
            if self.content(m) != 0.0 {
                return Err(Error::validation(
                    &ctx,
                    format!("{m} content must be zero for {}", self.chemistry),
                ));
            }
        }
        if self.chemistry != Chemistry::Lfp && self.content(Mineral::Phosphate) != 0.0 {
            return Err(Error::validation(&ctx, "phosphate is only used by LFP"));
        }
        // Published bound means are displayed at two decimals, so allow a
        // half-cent of slack.
        for (&m, &(lo, hi)) in &self.bounds {
            let mean = (lo + hi) / 2.0;
            if (self.content(m) - mean).abs() > 0.005 + 1e-12 {
                return Err(Error::validation(
                    &ctx,
                    format!(
                        "{m} content {} is not the mean of bounds [{lo}, {hi}]",
                        self.content(m)
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// The full set of six chemistry intensities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensitySet {
    intensities: BTreeMap<Chemistry, ChemistryIntensity>,
}

impl IntensitySet {
    pub fn new(intensities: Vec<ChemistryIntensity>) -> Result<IntensitySet> {
        let mut map = BTreeMap::new();
        for intensity in intensities {
            intensity.validate()?;
            if map.insert(intensity.chemistry, intensity).is_some() {
                return Err(Error::validation("intensity set", "duplicate chemistry"));
            }
        }
        for &c in &Chemistry::ALL {
            if !map.contains_key(&c) {
                return Err(Error::validation(
                    "intensity set",
                    format!("missing chemistry {c}"),
                ));
            }
        }
        Ok(IntensitySet { intensities: map })
    }

    pub fn get(&self, chemistry: Chemistry) -> &ChemistryIntensity {
        &self.intensities[&chemistry]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ChemistryIntensity> {
        self.intensities.values()
    }

    /// Apply a per-pack transform (e.g. fleet weighting) to every chemistry.
    /// Ingest validation is not re-run: derived sets (scaled contents and
    /// bounds) stay consistent by construction.
    pub fn try_map(
        &self,
        f: impl Fn(&ChemistryIntensity) -> Result<ChemistryIntensity>,
    ) -> Result<IntensitySet> {
        let mut intensities = BTreeMap::new();
        for (&c, i) in &self.intensities {
            intensities.insert(c, f(i)?);
        }
        Ok(IntensitySet { intensities })
    }
}

/// Year-indexed chemistry market shares.
///
/// Yearly shares may sum to slightly less than one: the reference schedule
/// leaves a small unallocated remainder from 2030 on. Sums above one (beyond
/// rounding) are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixSchedule {
    shares: BTreeMap<i32, BTreeMap<Chemistry, f64>>,
}

/// Smallest accepted per-year share sum; the remainder is unallocated.
pub const MIX_SUM_MIN: f64 = 0.99;

impl MixSchedule {
    pub fn new(shares: BTreeMap<i32, BTreeMap<Chemistry, f64>>) -> Result<MixSchedule> {
        for (year, row) in &shares {
            let ctx = format!("mix shares for {year}");
            let mut sum = 0.0;
            for (&c, &s) in row {
                if !s.is_finite() || s < 0.0 {
                    return Err(Error::validation(&ctx, format!("negative share for {c}")));
                }
                sum += s;
            }
            if sum > 1.0 + 1e-9 {
                return Err(Error::validation(&ctx, format!("shares sum to {sum} > 1")));
            }
            if sum < MIX_SUM_MIN {
                return Err(Error::validation(
                    &ctx,
                    format!("shares sum to {sum} < {MIX_SUM_MIN}"),
                ));
            }
        }
        Ok(MixSchedule { shares })
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        self.shares.keys().copied()
    }

    pub fn first_year(&self) -> Option<i32> {
        self.shares.keys().next().copied()
    }

    pub fn year(&self, year: i32) -> Result<&BTreeMap<Chemistry, f64>> {
        self.shares.get(&year).ok_or(Error::MissingYear {
            year,
            what: "mix schedule".to_string(),
        })
    }

    pub fn share(&self, year: i32, chemistry: Chemistry) -> Result<f64> {
        Ok(self.year(year)?.get(&chemistry).copied().unwrap_or(0.0))
    }

    /// Share-weighted kg of `mineral` per vehicle in `year`.
    pub fn weighted_content(
        &self,
        year: i32,
        intensities: &IntensitySet,
        mineral: Mineral,
    ) -> Result<f64> {
        let row = self.year(year)?;
        Ok(Chemistry::ALL
            .iter()
            .map(|&c| intensities.get(c).content(mineral) * row.get(&c).copied().unwrap_or(0.0))
            .sum())
    }
}

/// Sedan/light-truck split used by the heavier-fleet case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FleetMix {
    pub sedan_fraction: f64,
    pub truck_fraction: f64,
    pub truck_pack_kwh: f64,
}

impl Default for FleetMix {
    fn default() -> Self {
        FleetMix {
            sedan_fraction: 0.29,
            truck_fraction: 0.71,
            truck_pack_kwh: 100.0,
        }
    }
}

impl FleetMix {
    pub fn validate(&self, reference_pack_kwh: f64) -> Result<()> {
        if (self.sedan_fraction + self.truck_fraction - 1.0).abs() > 1e-9 {
            return Err(Error::validation("fleet mix", "fractions must sum to 1"));
        }
        if self.sedan_fraction < 0.0 || self.truck_fraction < 0.0 {
            return Err(Error::validation(
                "fleet mix",
                "fractions must be non-negative",
            ));
        }
        if self.truck_pack_kwh < reference_pack_kwh {
            return Err(Error::validation(
                "fleet mix",
                "truck pack must be at least the sedan reference pack",
            ));
        }
        Ok(())
    }

    /// Content multiplier: sedans keep the reference pack, trucks scale
    /// linearly with pack energy.
    pub fn content_factor(&self, reference_pack_kwh: f64) -> f64 {
        self.sedan_fraction + self.truck_fraction * (self.truck_pack_kwh / reference_pack_kwh)
    }
}

/// Fleet-weighted per-pack content: trucks carry proportionally more of
/// every mineral because pack contents scale linearly with kWh.
pub fn heavier_fleet_intensity(
    base: &ChemistryIntensity,
    fleet: &FleetMix,
) -> Result<ChemistryIntensity> {
    fleet.validate(base.pack_kwh)?;
    let factor = fleet.content_factor(base.pack_kwh);
    Ok(ChemistryIntensity {
        chemistry: base.chemistry,
        content: base
            .content
            .iter()
            .map(|(&m, &kg)| (m, kg * factor))
            .collect(),
        pack_kwh: base.pack_kwh * factor,
        range_miles: base.range_miles,
        bounds: base
            .bounds
            .iter()
            .map(|(&m, &(lo, hi))| (m, (lo * factor, hi * factor)))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn nmc811() -> ChemistryIntensity {
        ChemistryIntensity {
            chemistry: Chemistry::Nmc811,
            content: [
                (Mineral::Lithium, 6.28),
                (Mineral::Cobalt, 6.28),
                (Mineral::Nickel, 49.01),
                (Mineral::Manganese, 6.28),
                (Mineral::Graphite, 56.55),
                (Mineral::Aluminum, 37.70),
                (Mineral::Copper, 25.13),
                (Mineral::Phosphate, 0.0),
            ]
            .into(),
            pack_kwh: REFERENCE_PACK_KWH,
            range_miles: REFERENCE_RANGE_MILES,
            bounds: BTreeMap::new(),
        }
    }

    #[test]
    fn heavier_fleet_weights_match_reference() {
        let fleet = FleetMix::default();
        let heavy = heavier_fleet_intensity(&nmc811(), &fleet).unwrap();
        // 0.29 x 56.55 + 0.71 x 56.55 x (100/75)
        assert_abs_diff_eq!(heavy.content(Mineral::Graphite), 69.93, epsilon = 0.01);
        assert_abs_diff_eq!(heavy.content(Mineral::Lithium), 7.77, epsilon = 0.01);
    }

    #[test]
    fn all_sedan_fleet_is_identity() {
        let fleet = FleetMix {
            sedan_fraction: 1.0,
            truck_fraction: 0.0,
            truck_pack_kwh: 100.0,
        };
        let out = heavier_fleet_intensity(&nmc811(), &fleet).unwrap();
        assert_eq!(out, nmc811());
    }

    #[test]
    fn lfp_with_cobalt_is_rejected() {
        let bad = ChemistryIntensity {
            chemistry: Chemistry::Lfp,
            content: [(Mineral::Cobalt, 1.0)].into(),
            pack_kwh: REFERENCE_PACK_KWH,
            range_miles: REFERENCE_RANGE_MILES,
            bounds: BTreeMap::new(),
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn mix_sum_bounds_enforced() {
        let over: BTreeMap<Chemistry, f64> = [(Chemistry::Lfp, 0.7), (Chemistry::Nca, 0.5)].into();
        assert!(MixSchedule::new([(2030, over)].into()).is_err());
        let under: BTreeMap<Chemistry, f64> = [(Chemistry::Lfp, 0.5)].into();
        assert!(MixSchedule::new([(2030, under)].into()).is_err());
        let ok: BTreeMap<Chemistry, f64> = [(Chemistry::Lfp, 0.6), (Chemistry::Nca, 0.395)].into();
        assert!(MixSchedule::new([(2030, ok)].into()).is_ok());
    }

    #[test]
    fn chemistry_parse_accepts_spacing() {
        assert_eq!("NMC 811".parse::<Chemistry>().unwrap(), Chemistry::Nmc811);
        assert_eq!("lfp".parse::<Chemistry>().unwrap(), Chemistry::Lfp);
        assert!("NMC900".parse::<Chemistry>().is_err());
    }
}
