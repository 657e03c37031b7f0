//! Penetration-target solve and low/medium/high EV sales scenarios.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs for the tailpipe-standard penetration solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuelAssumptions {
    /// Fuel-usage CO2 rate, g per MJ.
    pub fuel_emissions_rate: f64,
    pub icev_mpg: f64,
    pub hev_mpg: f64,
    /// Lower-heating-value energy content of gasoline, MJ per gallon.
    pub gasoline_energy: f64,
    /// Fleet-average tailpipe target, g CO2 per mile.
    pub target_gpm: f64,
}

impl FuelAssumptions {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("fuel_emissions_rate", self.fuel_emissions_rate),
            ("icev_mpg", self.icev_mpg),
            ("hev_mpg", self.hev_mpg),
            ("gasoline_energy", self.gasoline_energy),
            ("target_gpm", self.target_gpm),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::validation(
                    "fuel assumptions",
                    format!("{name} must be positive"),
                ));
            }
        }
        Ok(())
    }

    /// Tailpipe g/mile of the non-EV fleet (modeled as all ICEV).
    pub fn tailpipe_gpm(&self) -> f64 {
        self.fuel_emissions_rate * self.gasoline_energy / self.icev_mpg
    }
}

/// EV share of new sales needed to bring the fleet average down to the
/// target, with EVs contributing zero tailpipe emissions. Returns zero when
/// the non-EV fleet already meets the target.
pub fn solve_penetration(assumptions: &FuelAssumptions) -> Result<f64> {
    assumptions.validate()?;
    let tailpipe = assumptions.tailpipe_gpm();
    if tailpipe <= assumptions.target_gpm {
        return Ok(0.0);
    }
    Ok(1.0 - assumptions.target_gpm / tailpipe)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Low,
    Medium,
    High,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] =
        [ScenarioKind::Low, ScenarioKind::Medium, ScenarioKind::High];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Low => "low",
            ScenarioKind::Medium => "medium",
            ScenarioKind::High => "high",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "low" => Ok(ScenarioKind::Low),
            "medium" => Ok(ScenarioKind::Medium),
            "high" => Ok(ScenarioKind::High),
            other => Err(Error::validation(
                "scenario kind",
                format!("expected low|medium|high, got {other:?}"),
            )),
        }
    }
}

/// Per-year EV sales under one adoption pathway.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SalesScenario {
    pub kind: ScenarioKind,
    pub total_sales: BTreeMap<i32, u64>,
    /// EV share of new sales, full precision.
    pub ev_share: BTreeMap<i32, f64>,
    /// `round(share x total)` per year.
    pub ev_sales: BTreeMap<i32, u64>,
}

impl SalesScenario {
    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        self.total_sales.keys().copied()
    }

    pub fn ev_sales_in(&self, year: i32) -> Result<u64> {
        self.ev_sales.get(&year).copied().ok_or(Error::MissingYear {
            year,
            what: format!("{} scenario", self.kind),
        })
    }

    /// Sum of EV sales over an inclusive year window.
    pub fn cumulative_ev_sales(&self, from: i32, to: i32) -> u64 {
        self.ev_sales
            .iter()
            .filter(|(&y, _)| y >= from && y <= to)
            .map(|(_, &v)| v)
            .sum()
    }
}

/// Build one sales scenario from the base-year share and the solved target.
///
/// * low: the base share holds through the penultimate year, jumping to the
///   target in the final year.
/// * medium: the share doubles at each of `doubling_years`, reaches the
///   target in `target_year`, and moves linearly between those anchors.
/// * high: the target share applies from the year after base onwards.
pub fn build_scenario(
    kind: ScenarioKind,
    total_sales: &BTreeMap<i32, u64>,
    base_share: f64,
    target_share: f64,
    doubling_years: &[i32],
    target_year: i32,
) -> Result<SalesScenario> {
    if total_sales.is_empty() {
        return Err(Error::validation("scenario", "total sales table is empty"));
    }
    if !(0.0 < base_share && base_share < target_share && target_share < 1.0) {
        return Err(Error::validation(
            "scenario",
            format!("need 0 < base ({base_share}) < target ({target_share}) < 1"),
        ));
    }
    let base_year = *total_sales.keys().next().unwrap();
    let last_year = *total_sales.keys().last().unwrap();
    if target_year > last_year {
        return Err(Error::MissingYear {
            year: target_year,
            what: "total sales".to_string(),
        });
    }
    // years must be contiguous so interpolation is well defined
    for (expected, &year) in (base_year..).zip(total_sales.keys()) {
        if year != expected {
            return Err(Error::MissingYear {
                year: expected,
                what: "total sales".to_string(),
            });
        }
    }

    let mut ev_share = BTreeMap::new();
    match kind {
        ScenarioKind::Low => {
            for &year in total_sales.keys() {
                ev_share.insert(
                    year,
                    if year >= target_year {
                        target_share
                    } else {
                        base_share
                    },
                );
            }
        }
        ScenarioKind::High => {
            for &year in total_sales.keys() {
                ev_share.insert(
                    year,
                    if year > base_year {
                        target_share
                    } else {
                        base_share
                    },
                );
            }
        }
        ScenarioKind::Medium => {
            let mut anchors: Vec<(i32, f64)> = vec![(base_year, base_share)];
            for (i, &year) in doubling_years.iter().enumerate() {
                if year <= base_year || year >= target_year {
                    return Err(Error::validation(
                        "scenario",
                        format!("doubling year {year} outside ({base_year}, {target_year})"),
                    ));
                }
                let share = base_share * 2f64.powi(i as i32 + 1);
                if share >= target_share {
                    return Err(Error::validation(
                        "scenario",
                        format!("doubled share {share} in {year} already exceeds the target"),
                    ));
                }
                anchors.push((year, share));
            }
            anchors.push((target_year, target_share));
            for window in anchors.windows(2) {
                let (y0, s0) = window[0];
                let (y1, s1) = window[1];
                for year in y0..=y1 {
                    let t = f64::from(year - y0) / f64::from(y1 - y0);
                    ev_share.insert(year, s0 + (s1 - s0) * t);
                }
            }
            // anchor years carry their exact shares, not interpolants
            for &(year, share) in &anchors {
                ev_share.insert(year, share);
            }
            for &year in total_sales.keys() {
                if year > target_year {
                    ev_share.insert(year, target_share);
                }
            }
        }
    }

    let ev_sales = ev_share
        .iter()
        .map(|(&year, &share)| (year, (share * total_sales[&year] as f64).round() as u64))
        .collect();
    Ok(SalesScenario {
        kind,
        total_sales: total_sales.clone(),
        ev_share,
        ev_sales,
    })
}
