//! Battery ceilings from mineral supply: per-chemistry bottlenecks, joint
//! allocation across chemistries, market-mix demand, downsizing, and the
//! deployment shortfall.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chemistry::{Chemistry, ChemistryIntensity, IntensitySet, MixSchedule};
use crate::error::{Error, Result};
use crate::minerals::Mineral;
use crate::scenarios::{SalesScenario, ScenarioKind};
use crate::simplex;

/// Battery ceiling for one chemistry, with the mineral that sets it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub chemistry: Chemistry,
    /// Whole packs per mineral; minerals the chemistry does not use are
    /// absent ("n/a" in reports).
    pub per_mineral_ceiling: BTreeMap<Mineral, u64>,
    /// Minimum of the per-mineral ceilings, floored to whole packs.
    pub ceiling: u64,
    pub limiting_mineral: Mineral,
}

/// How many packs each mineral's supply allows for one chemistry, and which
/// mineral binds. `supply_kg` is per-mineral mass in kilograms, production
/// (kg/yr) or reserves (kg) alike.
pub fn chemistry_ceiling(
    supply_kg: &BTreeMap<Mineral, f64>,
    intensity: &ChemistryIntensity,
) -> Result<CapacityResult> {
    let mut per_mineral = BTreeMap::new();
    let mut limiting: Option<(Mineral, f64)> = None;
    for (mineral, kg_per_pack) in intensity.nonzero_minerals() {
        let supply = supply_kg.get(&mineral).copied().unwrap_or(0.0);
        let packs = supply / kg_per_pack;
        per_mineral.insert(mineral, packs.floor() as u64);
        let tighter = match limiting {
            None => true,
            Some((_, best)) => packs < best,
        };
        if tighter {
            limiting = Some((mineral, packs));
        }
    }
    let (limiting_mineral, packs) = limiting.ok_or_else(|| {
        Error::NoConstraint(format!(
            "{} has no nonzero mineral content",
            intensity.chemistry
        ))
    })?;
    Ok(CapacityResult {
        chemistry: intensity.chemistry,
        per_mineral_ceiling: per_mineral,
        ceiling: packs.floor() as u64,
        limiting_mineral,
    })
}

/// The single chemistry that maximizes the ceiling. Ties break toward the
/// fixed chemistry order.
pub fn optimal_chemistry(
    supply_kg: &BTreeMap<Mineral, f64>,
    intensities: &IntensitySet,
) -> Result<(Chemistry, CapacityResult)> {
    let mut best: Option<CapacityResult> = None;
    for &chemistry in &Chemistry::ALL {
        let result = chemistry_ceiling(supply_kg, intensities.get(chemistry))?;
        let better = match &best {
            None => true,
            Some(current) => result.ceiling > current.ceiling,
        };
        if better {
            best = Some(result);
        }
    }
    let best = best.expect("six chemistries");
    Ok((best.chemistry, best))
}

/// Jointly allocate supply across several chemistries: maximize total packs
/// subject to every mineral's supply. Continuous program, reported floored.
pub fn joint_allocation(
    supply_kg: &BTreeMap<Mineral, f64>,
    intensities: &IntensitySet,
    allowed: &[Chemistry],
) -> Result<BTreeMap<Chemistry, u64>> {
    if allowed.is_empty() {
        return Err(Error::validation(
            "joint allocation",
            "no chemistries allowed",
        ));
    }
    let objective = vec![1.0; allowed.len()];
    let mut constraints = Vec::new();
    let mut bounds = Vec::new();
    for &mineral in &Mineral::ALL {
        let row: Vec<f64> = allowed
            .iter()
            .map(|&c| intensities.get(c).content(mineral))
            .collect();
        if row.iter().all(|&v| v == 0.0) {
            continue;
        }
        constraints.push(row);
        bounds.push(supply_kg.get(&mineral).copied().unwrap_or(0.0));
    }
    if constraints.is_empty() {
        return Err(Error::NoConstraint(
            "allowed chemistries use no minerals".to_string(),
        ));
    }
    let (solution, _) = simplex::maximize(&objective, &constraints, &bounds)?;
    Ok(allowed
        .iter()
        .zip(solution)
        .map(|(&c, packs)| (c, packs.floor() as u64))
        .collect())
}

/// Per-mineral, per-year demand in metric tons for a sales scenario under a
/// chemistry mix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandTable {
    pub scenario: ScenarioKind,
    pub years: Vec<i32>,
    /// tons of each mineral needed in each year
    pub demand: BTreeMap<Mineral, BTreeMap<i32, f64>>,
    /// mean over the covered years, per mineral
    pub annual_average: BTreeMap<Mineral, f64>,
}

impl DemandTable {
    pub fn get(&self, mineral: Mineral, year: i32) -> Result<f64> {
        self.demand
            .get(&mineral)
            .and_then(|row| row.get(&year))
            .copied()
            .ok_or(Error::MissingYear {
                year,
                what: format!("{mineral} demand"),
            })
    }
}

/// Mineral demand implied by `scenario` under `mix`: content x share x
/// sales, converted from kilograms to tons.
pub fn mix_demand(
    scenario: &SalesScenario,
    mix: &MixSchedule,
    intensities: &IntensitySet,
) -> Result<DemandTable> {
    let years: Vec<i32> = mix.years().collect();
    // every mix year must have sales; sales years before the mix starts are
    // simply outside the market-mix window
    let mut demand: BTreeMap<Mineral, BTreeMap<i32, f64>> = BTreeMap::new();
    for &year in &years {
        let sales = scenario.ev_sales_in(year)? as f64;
        for &mineral in &Mineral::ALL {
            let w = mix.weighted_content(year, intensities, mineral)?;
            demand
                .entry(mineral)
                .or_default()
                .insert(year, w * sales / 1000.0);
        }
    }
    let annual_average = demand
        .iter()
        .map(|(&m, row)| {
            let sum: f64 = row.values().sum();
            (m, sum / row.len() as f64)
        })
        .collect();
    Ok(DemandTable {
        scenario: scenario.kind,
        years,
        demand,
        annual_average,
    })
}

/// Packs buildable in `year` when production is spread across the mix:
/// supply over share-weighted content, minimized over minerals.
pub fn mix_ceiling(
    supply_kg: &BTreeMap<Mineral, f64>,
    mix: &MixSchedule,
    intensities: &IntensitySet,
    year: i32,
) -> Result<(u64, Mineral)> {
    let mut limiting: Option<(Mineral, f64)> = None;
    for &mineral in &Mineral::ALL {
        let w = mix.weighted_content(year, intensities, mineral)?;
        if w <= 0.0 {
            continue;
        }
        let packs = supply_kg.get(&mineral).copied().unwrap_or(0.0) / w;
        let tighter = match limiting {
            None => true,
            Some((_, best)) => packs < best,
        };
        if tighter {
            limiting = Some((mineral, packs));
        }
    }
    let (mineral, packs) = limiting
        .ok_or_else(|| Error::NoConstraint(format!("mix for {year} has zero weighted content")))?;
    Ok((packs.floor() as u64, mineral))
}

/// Desired-minus-possible deployment for one scenario year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortfallRecord {
    pub scenario: ScenarioKind,
    pub year: i32,
    pub desired_evs: u64,
    pub possible_evs: u64,
    /// `max(0, desired - possible)`
    pub shortfall: u64,
}

/// Per-year shortfall records plus the aggregate over the reporting window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortfallSummary {
    pub records: Vec<ShortfallRecord>,
    pub window: (i32, i32),
    pub aggregate_desired: u64,
    pub aggregate_possible: u64,
    pub aggregate_shortfall: u64,
}

/// Compare desired EV sales with buildable packs year by year over an
/// inclusive window.
pub fn compute_shortfall(
    scenario: &SalesScenario,
    possible_per_year: &BTreeMap<i32, u64>,
    window: (i32, i32),
) -> Result<ShortfallSummary> {
    let mut records = Vec::new();
    for year in window.0..=window.1 {
        let desired = scenario.ev_sales_in(year)?;
        let possible = possible_per_year
            .get(&year)
            .copied()
            .ok_or(Error::MissingYear {
                year,
                what: "possible packs".to_string(),
            })?;
        records.push(ShortfallRecord {
            scenario: scenario.kind,
            year,
            desired_evs: desired,
            possible_evs: possible,
            shortfall: desired.saturating_sub(possible),
        });
    }
    Ok(ShortfallSummary {
        aggregate_desired: records.iter().map(|r| r.desired_evs).sum(),
        aggregate_possible: records.iter().map(|r| r.possible_evs).sum(),
        aggregate_shortfall: records.iter().map(|r| r.shortfall).sum(),
        records,
        window,
    })
}

/// Result of shrinking packs until supply covers the desired deployment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DownsizeResult {
    /// kg of each mineral available per vehicle at the desired deployment
    pub per_mineral_intensity: BTreeMap<Mineral, f64>,
    /// mineral with the least headroom against the reference chemistry
    pub binding_mineral: Mineral,
    /// pack size the binding mineral's allowance scales the reference to
    pub implied_pack_kwh: f64,
}

/// Spread each mineral's supply over the desired number of vehicles and
/// derive the pack size the tightest mineral permits for the reference
/// chemistry.
pub fn downsize(
    supply_kg: &BTreeMap<Mineral, f64>,
    desired_evs: u64,
    reference: &ChemistryIntensity,
) -> Result<DownsizeResult> {
    if desired_evs == 0 {
        return Err(Error::validation(
            "downsize",
            "desired vehicle count is zero",
        ));
    }
    let mut per_mineral = BTreeMap::new();
    for &mineral in &Mineral::ALL {
        let supply = supply_kg.get(&mineral).copied().unwrap_or(0.0);
        per_mineral.insert(mineral, supply / desired_evs as f64);
    }
    let mut binding: Option<(Mineral, f64)> = None;
    for (mineral, kg_per_pack) in reference.nonzero_minerals() {
        let headroom = per_mineral[&mineral] / kg_per_pack;
        let tighter = match binding {
            None => true,
            Some((_, best)) => headroom < best,
        };
        if tighter {
            binding = Some((mineral, headroom));
        }
    }
    let (binding_mineral, scale) = binding.ok_or_else(|| {
        Error::NoConstraint(format!(
            "{} has no nonzero mineral content",
            reference.chemistry
        ))
    })?;
    Ok(DownsizeResult {
        per_mineral_intensity: per_mineral,
        binding_mineral,
        implied_pack_kwh: reference.pack_kwh * scale,
    })
}
