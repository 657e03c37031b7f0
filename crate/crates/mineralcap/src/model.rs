//! One loaded dataset with the derived quantities the pipelines share.

use std::collections::BTreeMap;

use crate::capacity::{self, CapacityResult};
use crate::chemistry::{heavier_fleet_intensity, Chemistry, FleetMix, IntensitySet};
use crate::data::Dataset;
use crate::emissions::{self, EmissionsParams, Powertrain, Trajectories};
use crate::error::{Error, Result};
use crate::minerals::Mineral;
use crate::scenarios::{build_scenario, solve_penetration, SalesScenario, ScenarioKind};
use crate::supply::{apply_added_supply, Basis, SupplyTable};

/// Reporting window for cumulative figures.
pub const WINDOW: (i32, i32) = (2027, 2032);

/// Production assumption for capacity runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assumption {
    Baseline,
    AddedSupply,
}

/// Fleet composition for capacity runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fleet {
    Sedan,
    Mixed,
}

/// A dataset plus everything derived from it once.
#[derive(Debug, Clone)]
pub struct Model {
    pub dataset: Dataset,
    pub added_table: SupplyTable,
    pub heavier_intensities: IntensitySet,
    pub target_share: f64,
    pub scenarios: BTreeMap<ScenarioKind, SalesScenario>,
    pub params: EmissionsParams,
    pub trajectories: Trajectories,
}

impl Model {
    pub fn new(dataset: Dataset) -> Result<Model> {
        let added_table = apply_added_supply(&dataset.supply, &dataset.added_supply)?;
        let fleet = FleetMix::default();
        let heavier_intensities = dataset
            .intensities
            .try_map(|intensity| heavier_fleet_intensity(intensity, &fleet))?;

        let assumptions = dataset.scenario_config.fuel_assumptions();
        let target_share = match dataset.scenario_config.shares.target_share {
            Some(s) => s,
            None => solve_penetration(&assumptions)?,
        };
        let totals = dataset.scenario_config.total_sales_map();
        let mut scenarios = BTreeMap::new();
        for kind in ScenarioKind::ALL {
            scenarios.insert(
                kind,
                build_scenario(
                    kind,
                    &totals,
                    dataset.scenario_config.shares.base_share_2022,
                    target_share,
                    &dataset.scenario_config.shares.doubling_years,
                    dataset.scenario_config.shares.target_year,
                )?,
            );
        }
        let params = dataset.emissions_config.params()?;
        let trajectories = dataset.emissions_config.trajectories()?;
        Ok(Model {
            dataset,
            added_table,
            heavier_intensities,
            target_share,
            scenarios,
            params,
            trajectories,
        })
    }

    pub fn load_default() -> Result<Model> {
        Model::new(Dataset::load_default()?)
    }

    pub fn scenario(&self, kind: ScenarioKind) -> &SalesScenario {
        &self.scenarios[&kind]
    }

    /// Supply totals in kilograms for a basis and production assumption.
    /// Reserves are not affected by the added-supply case.
    pub fn supply_kg(&self, basis: Basis, assumption: Assumption) -> BTreeMap<Mineral, f64> {
        match (basis, assumption) {
            (Basis::Production, Assumption::AddedSupply) => self.added_table.totals_kg(basis),
            _ => self.dataset.supply.totals_kg(basis),
        }
    }

    pub fn intensities(&self, fleet: Fleet) -> &IntensitySet {
        match fleet {
            Fleet::Sedan => &self.dataset.intensities,
            Fleet::Mixed => &self.heavier_intensities,
        }
    }

    /// Ceiling for every chemistry under the given configuration.
    pub fn ceilings(
        &self,
        basis: Basis,
        assumption: Assumption,
        fleet: Fleet,
    ) -> Result<BTreeMap<Chemistry, CapacityResult>> {
        let supply = self.supply_kg(basis, assumption);
        let intensities = self.intensities(fleet);
        Chemistry::ALL
            .iter()
            .map(|&c| Ok((c, capacity::chemistry_ceiling(&supply, intensities.get(c))?)))
            .collect()
    }

    pub fn optimal(
        &self,
        basis: Basis,
        assumption: Assumption,
        fleet: Fleet,
    ) -> Result<(Chemistry, CapacityResult)> {
        capacity::optimal_chemistry(&self.supply_kg(basis, assumption), self.intensities(fleet))
    }

    /// Market-mix ceiling per year over the reporting window.
    pub fn mix_ceilings(
        &self,
        assumption: Assumption,
        fleet: Fleet,
    ) -> Result<BTreeMap<i32, (u64, Mineral)>> {
        let supply = self.supply_kg(Basis::Production, assumption);
        let intensities = self.intensities(fleet);
        (WINDOW.0..=WINDOW.1)
            .map(|year| {
                Ok((
                    year,
                    capacity::mix_ceiling(&supply, &self.dataset.mix, intensities, year)?,
                ))
            })
            .collect()
    }

    /// Per-vehicle benefit of a powertrain over ICEV for every trajectory
    /// year.
    pub fn benefits(&self, powertrain: Powertrain) -> Result<BTreeMap<i32, f64>> {
        let years: Vec<i32> = self.trajectories.grid_rate.keys().copied().collect();
        emissions::benefit_series(
            &self.params,
            &self.trajectories,
            powertrain,
            years.into_iter(),
        )
    }

    /// Constant per-year build limit from the optimal chemistry under
    /// current production, over the window.
    pub fn optimal_possible_per_year(&self) -> Result<BTreeMap<i32, u64>> {
        let (_, result) = self.optimal(Basis::Production, Assumption::Baseline, Fleet::Sedan)?;
        Ok((WINDOW.0..=WINDOW.1).map(|y| (y, result.ceiling)).collect())
    }

    /// Sales scenario kind parsed from a CLI flag, or all kinds.
    pub fn kinds(selection: Option<ScenarioKind>) -> Vec<ScenarioKind> {
        match selection {
            Some(k) => vec![k],
            None => ScenarioKind::ALL.to_vec(),
        }
    }
}

impl std::str::FromStr for Assumption {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "baseline" => Ok(Assumption::Baseline),
            "added-supply" | "added_supply" | "added" => Ok(Assumption::AddedSupply),
            other => Err(Error::validation(
                "assumption",
                format!("expected baseline|added-supply, got {other:?}"),
            )),
        }
    }
}

impl std::str::FromStr for Fleet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sedan" => Ok(Fleet::Sedan),
            "mixed" => Ok(Fleet::Mixed),
            other => Err(Error::validation(
                "fleet",
                format!("expected sedan|mixed, got {other:?}"),
            )),
        }
    }
}
