//! Resolution pathways: production thresholds for the binding minerals, the
//! announced graphite ramp, and HEV substitution solves.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chemistry::{IntensitySet, MixSchedule};
use crate::error::{Error, Result};
use crate::minerals::{Mineral, Quantity};
use crate::scenarios::SalesScenario;

/// Production a mineral must reach to support a deployment target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductionThreshold {
    pub mineral: Mineral,
    pub current_tons: f64,
    /// Lowest per-year requirement over the window, tons/yr.
    pub required_min_tons: f64,
    /// Highest per-year requirement over the window, tons/yr.
    pub required_max_tons: f64,
    /// target deployment over the mineral's own maximum deployment, at the
    /// year the requirement peaks
    pub multiplier: f64,
    /// true when the peak requirement exceeds current production
    pub exceeds_current: bool,
}

/// Requirement for one mineral in one year: the deployment target divided by
/// the deployment this mineral's current supply allows, times current supply.
/// Equivalently, the target's demand for the mineral under that year's mix.
pub fn required_production_for_year(
    target_evs: u64,
    supply_kg: &BTreeMap<Mineral, f64>,
    mix: &MixSchedule,
    intensities: &IntensitySet,
    year: i32,
) -> Result<BTreeMap<Mineral, f64>> {
    let mut out = BTreeMap::new();
    for &mineral in &Mineral::ALL {
        let w = mix.weighted_content(year, intensities, mineral)?;
        if w <= 0.0 {
            out.insert(mineral, 0.0);
            continue;
        }
        let supply = supply_kg.get(&mineral).copied().unwrap_or(0.0);
        if supply <= 0.0 {
            // no current production: requirement is the demand itself
            out.insert(mineral, w * target_evs as f64 / 1000.0);
            continue;
        }
        let max_deployment = supply / w;
        let multiplier = target_evs as f64 / max_deployment;
        out.insert(mineral, multiplier * supply / 1000.0);
    }
    Ok(out)
}

/// Fold per-year requirements over an inclusive window into thresholds.
pub fn required_production(
    target_evs: u64,
    supply_kg: &BTreeMap<Mineral, f64>,
    mix: &MixSchedule,
    intensities: &IntensitySet,
    window: (i32, i32),
) -> Result<Vec<ProductionThreshold>> {
    if target_evs == 0 {
        return Err(Error::validation(
            "production thresholds",
            "target deployment is zero",
        ));
    }
    let mut per_year: Vec<BTreeMap<Mineral, f64>> = Vec::new();
    for year in window.0..=window.1 {
        per_year.push(required_production_for_year(
            target_evs,
            supply_kg,
            mix,
            intensities,
            year,
        )?);
    }
    let mut out = Vec::new();
    for &mineral in &Mineral::ALL {
        let current = supply_kg.get(&mineral).copied().unwrap_or(0.0) / 1000.0;
        let reqs: Vec<f64> = per_year.iter().map(|m| m[&mineral]).collect();
        let required_min = reqs.iter().copied().fold(f64::INFINITY, f64::min);
        let required_max = reqs.iter().copied().fold(0.0f64, f64::max);
        let multiplier = if current > 0.0 {
            required_max / current
        } else {
            f64::INFINITY
        };
        out.push(ProductionThreshold {
            mineral,
            current_tons: current,
            required_min_tons: required_min,
            required_max_tons: required_max,
            multiplier,
            exceeds_current: required_max > current,
        });
    }
    Ok(out)
}

/// Announced future production, tons per year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphiteRamp {
    pub schedule: BTreeMap<i32, Quantity>,
}

impl GraphiteRamp {
    /// Announcements only add capacity, so the early schedule must not dip.
    pub fn validate(&self) -> Result<()> {
        let mut prev: Option<Quantity> = None;
        for (&year, &q) in self.schedule.range(..=2028) {
            if let Some(p) = prev {
                if q < p {
                    return Err(Error::validation(
                        "graphite ramp",
                        format!("schedule decreases at {year}"),
                    ));
                }
            }
            prev = Some(q);
        }
        Ok(())
    }
}

/// Year-by-year check of the ramp against a required production level.
pub fn ramp_sufficiency(ramp: &GraphiteRamp, required_tons: f64) -> BTreeMap<i32, bool> {
    ramp.schedule
        .iter()
        .map(|(&year, &q)| (year, q.as_tons_f64() >= required_tons))
        .collect()
}

/// HEV substitution figures for one year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HevYear {
    pub year: i32,
    /// HEVs needed to match the desired EV benefit, if the HEV benefit is
    /// positive.
    pub desired_hevs: Option<f64>,
    /// desired HEVs exceed projected light-duty sales
    pub exceeds_sales: bool,
}

/// HEVs needed each year to deliver the same aggregate benefit as the
/// scenario's desired EVs: desired benefit over per-HEV benefit.
pub fn hev_only_requirement(
    scenario: &SalesScenario,
    ev_benefit: &BTreeMap<i32, f64>,
    hev_benefit: &BTreeMap<i32, f64>,
    window: (i32, i32),
) -> Result<BTreeMap<i32, HevYear>> {
    let mut out = BTreeMap::new();
    for year in window.0..=window.1 {
        let desired = scenario.ev_sales_in(year)? as f64;
        let eb_ev = lookup(ev_benefit, year, "EV benefit")?;
        let eb_hev = lookup(hev_benefit, year, "HEV benefit")?;
        let sales = scenario
            .total_sales
            .get(&year)
            .copied()
            .ok_or(Error::MissingYear {
                year,
                what: "light-duty sales".to_string(),
            })? as f64;
        if eb_hev <= 0.0 {
            // HEVs no better than ICEVs: no finite count substitutes
            out.insert(
                year,
                HevYear {
                    year,
                    desired_hevs: None,
                    exceeds_sales: true,
                },
            );
            continue;
        }
        let hevs = desired * eb_ev / eb_hev;
        out.insert(
            year,
            HevYear {
                year,
                desired_hevs: Some(hevs),
                exceeds_sales: hevs > sales,
            },
        );
    }
    Ok(out)
}

/// Minimum-EV supplement solve for one year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupplementYear {
    pub year: i32,
    /// Smallest EV count that, with HEVs filling the rest of light-duty
    /// sales, preserves the desired benefit. Clamped to [0, sales].
    pub min_evs: f64,
    /// The closed-form numerator cancels almost completely; the value is
    /// extremely sensitive to benefit inputs.
    pub ill_conditioned: bool,
    /// true when EV benefit does not exceed HEV benefit (no solve possible)
    pub degenerate: bool,
}

/// Relative numerator size below which the solve is flagged ill-conditioned.
pub const CONDITIONING_FLOOR: f64 = 0.05;

/// Solve `ev x EB_ev + (sales - ev) x EB_hev = desired x EB_ev` for the
/// minimum EV count, clamping into [0, sales].
pub fn min_ev_supplement(
    scenario: &SalesScenario,
    ev_benefit: &BTreeMap<i32, f64>,
    hev_benefit: &BTreeMap<i32, f64>,
    window: (i32, i32),
) -> Result<BTreeMap<i32, SupplementYear>> {
    let mut out = BTreeMap::new();
    for year in window.0..=window.1 {
        let desired = scenario.ev_sales_in(year)? as f64;
        let eb_ev = lookup(ev_benefit, year, "EV benefit")?;
        let eb_hev = lookup(hev_benefit, year, "HEV benefit")?;
        let sales = scenario
            .total_sales
            .get(&year)
            .copied()
            .ok_or(Error::MissingYear {
                year,
                what: "light-duty sales".to_string(),
            })? as f64;
        if eb_ev <= eb_hev {
            out.insert(
                year,
                SupplementYear {
                    year,
                    min_evs: 0.0,
                    ill_conditioned: false,
                    degenerate: true,
                },
            );
            continue;
        }
        let desired_benefit = desired * eb_ev;
        let numerator = desired_benefit - sales * eb_hev;
        let min_evs = (numerator / (eb_ev - eb_hev)).clamp(0.0, sales);
        let ill_conditioned = min_evs > 0.0
            && desired_benefit > 0.0
            && numerator.abs() / desired_benefit < CONDITIONING_FLOOR;
        out.insert(
            year,
            SupplementYear {
                year,
                min_evs,
                ill_conditioned,
                degenerate: false,
            },
        );
    }
    Ok(out)
}

fn lookup(map: &BTreeMap<i32, f64>, year: i32, what: &str) -> Result<f64> {
    map.get(&year).copied().ok_or(Error::MissingYear {
        year,
        what: what.to_string(),
    })
}
