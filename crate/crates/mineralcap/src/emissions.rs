//! Per-mile and per-vehicle lifecycle emissions by powertrain and year, and
//! the emissions cost of missed EV deployment.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::capacity::ShortfallRecord;
use crate::chemistry::Chemistry;
use crate::error::{Error, Result};

/// kWh per MJ conversion, exact.
pub const MJ_PER_KWH: f64 = 3.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Powertrain {
    Icev,
    Hev,
    Ev(Chemistry),
}

impl Powertrain {
    pub const ALL: [Powertrain; 8] = [
        Powertrain::Icev,
        Powertrain::Hev,
        Powertrain::Ev(Chemistry::Nmc111),
        Powertrain::Ev(Chemistry::Nmc523),
        Powertrain::Ev(Chemistry::Nmc622),
        Powertrain::Ev(Chemistry::Nmc811),
        Powertrain::Ev(Chemistry::Nca),
        Powertrain::Ev(Chemistry::Lfp),
    ];
}

impl fmt::Display for Powertrain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Powertrain::Icev => f.write_str("ICEV"),
            Powertrain::Hev => f.write_str("HEV"),
            Powertrain::Ev(c) => write!(f, "EV {c}"),
        }
    }
}

impl FromStr for Powertrain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let canon = s.trim().to_ascii_uppercase();
        match canon.as_str() {
            "ICEV" => Ok(Powertrain::Icev),
            "HEV" => Ok(Powertrain::Hev),
            other => {
                let chem = other
                    .strip_prefix("EV")
                    .unwrap_or(other)
                    .trim_start_matches([' ', '-']);
                chem.parse::<Chemistry>()
                    .map(Powertrain::Ev)
                    .map_err(|_| Error::UnknownPowertrain(s.to_string()))
            }
        }
    }
}

/// Calibrated emissions constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionsParams {
    /// Vehicle manufacturing emissions, metric tons CO2e, per powertrain.
    pub vehicle_manufacturing_tons: BTreeMap<Powertrain, f64>,
    /// End-of-life disposal emissions, g CO2e per vehicle.
    pub disposal_g: f64,
    /// Maintenance and repair emissions, g CO2e per vehicle.
    pub maintenance_repair_g: f64,
    /// Aggregate utilization, miles over the vehicle's life.
    pub aggregate_utilization_miles: f64,
    /// Energy content of gasoline (lower heating value), MJ per gallon.
    pub gasoline_energy_mj_per_gal: f64,
    /// Fuel production emissions, g CO2e per MJ.
    pub fuel_production_g_per_mj: f64,
    /// Fuel usage emissions, g CO2e per MJ.
    pub fuel_usage_g_per_mj: f64,
}

impl EmissionsParams {
    pub fn validate(&self) -> Result<()> {
        if self.aggregate_utilization_miles <= 0.0 || self.aggregate_utilization_miles.is_nan() {
            return Err(Error::validation(
                "emissions params",
                "aggregate utilization must be positive",
            ));
        }
        for (name, v) in [
            ("disposal_g", self.disposal_g),
            ("maintenance_repair_g", self.maintenance_repair_g),
            (
                "gasoline_energy_mj_per_gal",
                self.gasoline_energy_mj_per_gal,
            ),
            ("fuel_production_g_per_mj", self.fuel_production_g_per_mj),
            ("fuel_usage_g_per_mj", self.fuel_usage_g_per_mj),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::validation(
                    "emissions params",
                    format!("{name} must be non-negative"),
                ));
            }
        }
        for (p, &v) in &self.vehicle_manufacturing_tons {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::validation(
                    "emissions params",
                    format!("manufacturing tons for {p} must be non-negative"),
                ));
            }
        }
        Ok(())
    }

    fn manufacturing_tons(&self, powertrain: Powertrain) -> Result<f64> {
        self.vehicle_manufacturing_tons
            .get(&powertrain)
            .copied()
            .ok_or_else(|| {
                Error::validation(
                    "emissions params",
                    format!("no manufacturing figure for {powertrain}"),
                )
            })
    }
}

/// Maximum HEV fuel economy; returns diminish beyond this.
pub const HEV_MPG_CAP: f64 = 75.0;

/// Year-indexed fuel economies and grid carbon intensity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectories {
    pub icev_mpg: BTreeMap<i32, f64>,
    pub hev_mpg: BTreeMap<i32, f64>,
    /// Constant MPGe rating applied to every year.
    pub ev_mpge: f64,
    /// g CO2e per kWh delivered.
    pub grid_rate: BTreeMap<i32, f64>,
}

impl Trajectories {
    pub fn validate(&self) -> Result<()> {
        for (&year, &mpg) in &self.hev_mpg {
            if mpg > HEV_MPG_CAP + 1e-9 {
                return Err(Error::validation(
                    "trajectories",
                    format!("HEV fuel economy {mpg} in {year} exceeds the {HEV_MPG_CAP} mpg cap"),
                ));
            }
        }
        for (name, map) in [
            ("icev_mpg", &self.icev_mpg),
            ("hev_mpg", &self.hev_mpg),
            ("grid_rate", &self.grid_rate),
        ] {
            for (&year, &v) in map {
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::validation(
                        "trajectories",
                        format!("{name} for {year} must be positive"),
                    ));
                }
            }
        }
        if self.ev_mpge <= 0.0 || self.ev_mpge.is_nan() {
            return Err(Error::validation(
                "trajectories",
                "ev_mpge must be positive",
            ));
        }
        // grid decline must be strict across the reporting window
        let window: Vec<f64> = (2027..=2032)
            .filter_map(|y| self.grid_rate.get(&y).copied())
            .collect();
        for pair in window.windows(2) {
            if pair[1] >= pair[0] {
                return Err(Error::validation(
                    "trajectories",
                    "grid rate must decline strictly over 2027-2032",
                ));
            }
        }
        Ok(())
    }

    fn lookup(map: &BTreeMap<i32, f64>, year: i32, what: &str) -> Result<f64> {
        map.get(&year).copied().ok_or(Error::MissingYear {
            year,
            what: what.to_string(),
        })
    }
}

/// How the grid trajectory is specified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum GridSpec {
    /// Explicit per-year values.
    Table { values: BTreeMap<i32, f64> },
    /// Straight-line decline hitting `baseline x (1 - reduction)` in 2030.
    Linear {
        baseline_2005: f64,
        reduction_by_2030: f64,
    },
    /// Constant-ratio decline hitting the same 2030 point.
    Geometric {
        baseline_2005: f64,
        reduction_by_2030: f64,
    },
}

impl GridSpec {
    /// Materialize per-year grid intensities for the given years.
    pub fn rates(&self, years: impl Iterator<Item = i32>) -> BTreeMap<i32, f64> {
        match self {
            GridSpec::Table { values } => values.clone(),
            GridSpec::Linear {
                baseline_2005,
                reduction_by_2030,
            } => {
                let slope = baseline_2005 * reduction_by_2030 / 25.0;
                years
                    .map(|y| (y, baseline_2005 - slope * f64::from(y - 2005)))
                    .collect()
            }
            GridSpec::Geometric {
                baseline_2005,
                reduction_by_2030,
            } => {
                let ratio = (1.0 - reduction_by_2030).powf(1.0 / 25.0);
                years
                    .map(|y| (y, baseline_2005 * ratio.powi(y - 2005)))
                    .collect()
            }
        }
    }
}

/// Per-mile, per-vehicle, and vs-ICEV figures for one powertrain-year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifecycleResult {
    pub powertrain: Powertrain,
    pub year: i32,
    /// g CO2e per mile
    pub per_mile: f64,
    /// tons CO2e over the vehicle's life
    pub per_vehicle: f64,
    /// ICEV lifecycle minus this powertrain's, tons CO2e
    pub benefit_vs_icev: f64,
}

/// Vehicle-cycle emissions spread over utilization plus the fuel term:
/// fuel-cycle intensity per gallon burned for combustion powertrains, grid
/// intensity per gallon-equivalent drawn for EVs.
pub fn per_mile_emissions(
    params: &EmissionsParams,
    trajectories: &Trajectories,
    powertrain: Powertrain,
    year: i32,
) -> Result<f64> {
    let vehicle_cycle = (params.manufacturing_tons(powertrain)? * 1_000_000.0
        + params.disposal_g
        + params.maintenance_repair_g)
        / params.aggregate_utilization_miles;
    let fuel = match powertrain {
        Powertrain::Icev | Powertrain::Hev => {
            let mpg = match powertrain {
                Powertrain::Icev => {
                    Trajectories::lookup(&trajectories.icev_mpg, year, "ICEV fuel economy")?
                }
                _ => Trajectories::lookup(&trajectories.hev_mpg, year, "HEV fuel economy")?,
            };
            (1.0 / mpg)
                * (params.fuel_production_g_per_mj + params.fuel_usage_g_per_mj)
                * params.gasoline_energy_mj_per_gal
        }
        Powertrain::Ev(_) => {
            let grid = Trajectories::lookup(&trajectories.grid_rate, year, "grid rate")?;
            (1.0 / trajectories.ev_mpge) * (grid / MJ_PER_KWH) * params.gasoline_energy_mj_per_gal
        }
    };
    Ok(vehicle_cycle + fuel)
}

/// Full lifecycle figures for one powertrain-year.
pub fn lifecycle(
    params: &EmissionsParams,
    trajectories: &Trajectories,
    powertrain: Powertrain,
    year: i32,
) -> Result<LifecycleResult> {
    let per_mile = per_mile_emissions(params, trajectories, powertrain, year)?;
    let per_vehicle = params.aggregate_utilization_miles / 1_000_000.0 * per_mile;
    let icev_per_mile = per_mile_emissions(params, trajectories, Powertrain::Icev, year)?;
    let icev_per_vehicle = params.aggregate_utilization_miles / 1_000_000.0 * icev_per_mile;
    Ok(LifecycleResult {
        powertrain,
        year,
        per_mile,
        per_vehicle,
        benefit_vs_icev: icev_per_vehicle - per_vehicle,
    })
}

/// Per-year benefit of `powertrain` over ICEV, tons CO2e per vehicle.
pub fn benefit_series(
    params: &EmissionsParams,
    trajectories: &Trajectories,
    powertrain: Powertrain,
    years: impl Iterator<Item = i32>,
) -> Result<BTreeMap<i32, f64>> {
    years
        .map(|year| {
            Ok((
                year,
                lifecycle(params, trajectories, powertrain, year)?.benefit_vs_icev,
            ))
        })
        .collect()
}

/// Missed vehicles times per-vehicle benefit, per year, plus the aggregate.
pub fn emissions_shortfall(
    shortfalls: &[ShortfallRecord],
    benefit: &BTreeMap<i32, f64>,
) -> Result<(BTreeMap<i32, f64>, f64)> {
    let mut per_year = BTreeMap::new();
    for record in shortfalls {
        let b = benefit
            .get(&record.year)
            .copied()
            .ok_or(Error::MissingYear {
                year: record.year,
                what: "benefit".to_string(),
            })?;
        per_year.insert(record.year, record.shortfall as f64 * b);
    }
    let total = per_year.values().sum();
    Ok((per_year, total))
}
