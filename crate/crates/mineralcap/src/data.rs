//! Loaders for the delimited-text data files and TOML configs, and the
//! bundled default dataset.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::chemistry::{
    Chemistry, ChemistryIntensity, IntensitySet, MixSchedule, REFERENCE_PACK_KWH,
    REFERENCE_RANGE_MILES,
};
use crate::error::{Error, Result};
use crate::minerals::{Mineral, Quantity};
use crate::pathways::GraphiteRamp;
use crate::scenarios::FuelAssumptions;
use crate::supply::{AddedSupplySpec, SupplyRecord, SupplyTable};

/// Environment variable that overrides the data directory.
pub const DATA_DIR_ENV: &str = "MINERALCAP_DATA";

/// Resolve the data directory: explicit flag, then the environment
/// variable, then the data/ directory shipped with the crate.
pub fn resolve_data_dir(explicit: Option<&Path>) -> PathBuf {
    if let Some(dir) = explicit {
        return dir.to_path_buf();
    }
    if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
        return PathBuf::from(dir);
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn record_err(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Record {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    Ok(csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(file))
}

/// Read one supply file (production or reserves share the shape).
pub fn load_supply_records(path: &Path) -> Result<Vec<SupplyRecord>> {
    #[derive(Deserialize)]
    struct Row {
        mineral: String,
        country: String,
        source_kind: String,
        quantity_tons: String,
        #[serde(default)]
        basis_note: String,
    }
    let mut reader = csv_reader(path)?;
    let mut records = Vec::new();
    for row in reader.deserialize::<Row>() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let line = records.len() as u64 + 2; // header is line 1
        let mineral: Mineral = row
            .mineral
            .parse()
            .map_err(|e: Error| record_err(path, line, e.to_string()))?;
        let source_kind = row
            .source_kind
            .parse()
            .map_err(|e: String| record_err(path, line, e))?;
        let quantity =
            Quantity::parse_tons(&row.quantity_tons).map_err(|e| record_err(path, line, e))?;
        records.push(SupplyRecord {
            mineral,
            country: row.country,
            source_kind,
            quantity,
            basis_note: row.basis_note,
        });
    }
    Ok(records)
}

pub fn load_added_supply(path: &Path) -> Result<AddedSupplySpec> {
    #[derive(Deserialize)]
    struct Row {
        mineral: String,
        top_producer: String,
        addition_tons: String,
        #[serde(default)]
        #[allow(dead_code)]
        basis_note: String,
    }
    let mut reader = csv_reader(path)?;
    let mut spec = AddedSupplySpec::default();
    for (idx, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let line = idx as u64 + 2;
        let mineral: Mineral = row
            .mineral
            .parse()
            .map_err(|e: Error| record_err(path, line, e.to_string()))?;
        let addition =
            Quantity::parse_tons(&row.addition_tons).map_err(|e| record_err(path, line, e))?;
        if row.top_producer.trim().is_empty() {
            return Err(record_err(path, line, "top producer is empty"));
        }
        if spec.additions.insert(mineral, addition).is_some() {
            return Err(record_err(
                path,
                line,
                format!("duplicate mineral {mineral}"),
            ));
        }
        spec.top_producer.insert(mineral, row.top_producer);
    }
    Ok(spec)
}

pub fn load_intensities(path: &Path) -> Result<IntensitySet> {
    #[derive(Deserialize)]
    struct Row {
        chemistry: String,
        mineral: String,
        kg_per_pack: f64,
        low: Option<f64>,
        high: Option<f64>,
    }
    let mut reader = csv_reader(path)?;
    let mut content: BTreeMap<Chemistry, BTreeMap<Mineral, f64>> = BTreeMap::new();
    let mut bounds: BTreeMap<Chemistry, BTreeMap<Mineral, (f64, f64)>> = BTreeMap::new();
    for (idx, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let line = idx as u64 + 2;
        let chemistry: Chemistry = row
            .chemistry
            .parse()
            .map_err(|e: Error| record_err(path, line, e.to_string()))?;
        let mineral: Mineral = row
            .mineral
            .parse()
            .map_err(|e: Error| record_err(path, line, e.to_string()))?;
        if content
            .entry(chemistry)
            .or_default()
            .insert(mineral, row.kg_per_pack)
            .is_some()
        {
            return Err(record_err(
                path,
                line,
                format!("duplicate ({chemistry}, {mineral})"),
            ));
        }
        match (row.low, row.high) {
            (Some(lo), Some(hi)) => {
                bounds
                    .entry(chemistry)
                    .or_default()
                    .insert(mineral, (lo, hi));
            }
            (None, None) => {}
            _ => return Err(record_err(path, line, "bounds need both low and high")),
        }
    }
    let intensities = content
        .into_iter()
        .map(|(chemistry, content)| ChemistryIntensity {
            chemistry,
            content,
            pack_kwh: REFERENCE_PACK_KWH,
            range_miles: REFERENCE_RANGE_MILES,
            bounds: bounds.remove(&chemistry).unwrap_or_default(),
        })
        .collect();
    IntensitySet::new(intensities)
}

pub fn load_mix(path: &Path) -> Result<MixSchedule> {
    #[derive(Deserialize)]
    struct Row {
        year: i32,
        chemistry: String,
        share: f64,
    }
    let mut reader = csv_reader(path)?;
    let mut shares: BTreeMap<i32, BTreeMap<Chemistry, f64>> = BTreeMap::new();
    for (idx, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let line = idx as u64 + 2;
        let chemistry: Chemistry = row
            .chemistry
            .parse()
            .map_err(|e: Error| record_err(path, line, e.to_string()))?;
        if shares
            .entry(row.year)
            .or_default()
            .insert(chemistry, row.share)
            .is_some()
        {
            return Err(record_err(
                path,
                line,
                format!("duplicate ({}, {chemistry})", row.year),
            ));
        }
    }
    MixSchedule::new(shares)
}

pub fn load_ramp(path: &Path) -> Result<GraphiteRamp> {
    #[derive(Deserialize)]
    struct Row {
        year: i32,
        tons_per_year: String,
        #[serde(default)]
        #[allow(dead_code)]
        basis_note: String,
    }
    let mut reader = csv_reader(path)?;
    let mut schedule = BTreeMap::new();
    for (idx, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let line = idx as u64 + 2;
        let tons =
            Quantity::parse_tons(&row.tons_per_year).map_err(|e| record_err(path, line, e))?;
        if schedule.insert(row.year, tons).is_some() {
            return Err(record_err(
                path,
                line,
                format!("duplicate year {}", row.year),
            ));
        }
    }
    let ramp = GraphiteRamp { schedule };
    ramp.validate()?;
    Ok(ramp)
}

/// scenario.toml layout.
#[derive(Debug, Clone, Deserialize)]
pub struct ScenarioConfig {
    pub fuel: FuelConfig,
    pub shares: ShareConfig,
    pub total_sales: Vec<SalesEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FuelConfig {
    pub fuel_emissions_g_per_mj: f64,
    pub icev_mpg: f64,
    pub hev_mpg: f64,
    pub gasoline_energy_mj_per_gal: f64,
    pub target_g_per_mile: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ShareConfig {
    pub base_share_2022: f64,
    pub doubling_years: Vec<i32>,
    pub target_year: i32,
    /// Overrides the solved penetration share when set.
    #[serde(default)]
    pub target_share: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct SalesEntry {
    pub year: i32,
    pub vehicles: u64,
}

impl ScenarioConfig {
    pub fn fuel_assumptions(&self) -> FuelAssumptions {
        FuelAssumptions {
            fuel_emissions_rate: self.fuel.fuel_emissions_g_per_mj,
            icev_mpg: self.fuel.icev_mpg,
            hev_mpg: self.fuel.hev_mpg,
            gasoline_energy: self.fuel.gasoline_energy_mj_per_gal,
            target_gpm: self.fuel.target_g_per_mile,
        }
    }

    pub fn total_sales_map(&self) -> BTreeMap<i32, u64> {
        self.total_sales
            .iter()
            .map(|e| (e.year, e.vehicles))
            .collect()
    }
}

/// emissions.toml layout.
#[derive(Debug, Clone, Deserialize)]
pub struct EmissionsConfig {
    pub params: EmissionsParamsConfig,
    pub vehicle_manufacturing_tons: BTreeMap<String, f64>,
    pub trajectories: TrajectoriesConfig,
}

#[derive(Debug, Clone, Deserialize)]
pub struct EmissionsParamsConfig {
    pub aggregate_utilization_miles: f64,
    pub gasoline_energy_mj_per_gal: f64,
    pub fuel_production_g_per_mj: f64,
    pub fuel_usage_g_per_mj: f64,
    pub disposal_g_per_vehicle: f64,
    pub maintenance_repair_g_per_vehicle: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct TrajectoriesConfig {
    pub ev_mpge: f64,
    pub icev_mpg: BTreeMap<String, f64>,
    pub hev_mpg: BTreeMap<String, f64>,
    pub grid: GridConfig,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GridConfig {
    pub mode: String,
    #[serde(default)]
    pub baseline_2005: Option<f64>,
    #[serde(default)]
    pub reduction_by_2030: Option<f64>,
    #[serde(default)]
    pub values: BTreeMap<String, f64>,
}

fn parse_year_map(map: &BTreeMap<String, f64>, what: &str) -> Result<BTreeMap<i32, f64>> {
    map.iter()
        .map(|(k, &v)| {
            k.parse::<i32>()
                .map(|year| (year, v))
                .map_err(|_| Error::validation(what, format!("bad year key {k:?}")))
        })
        .collect()
}

impl EmissionsConfig {
    pub fn params(&self) -> Result<crate::emissions::EmissionsParams> {
        let mut manufacturing = BTreeMap::new();
        for (name, &tons) in &self.vehicle_manufacturing_tons {
            let powertrain: crate::emissions::Powertrain = name.parse()?;
            manufacturing.insert(powertrain, tons);
        }
        let params = crate::emissions::EmissionsParams {
            vehicle_manufacturing_tons: manufacturing,
            disposal_g: self.params.disposal_g_per_vehicle,
            maintenance_repair_g: self.params.maintenance_repair_g_per_vehicle,
            aggregate_utilization_miles: self.params.aggregate_utilization_miles,
            gasoline_energy_mj_per_gal: self.params.gasoline_energy_mj_per_gal,
            fuel_production_g_per_mj: self.params.fuel_production_g_per_mj,
            fuel_usage_g_per_mj: self.params.fuel_usage_g_per_mj,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn trajectories(&self) -> Result<crate::emissions::Trajectories> {
        let icev_mpg = parse_year_map(&self.trajectories.icev_mpg, "icev_mpg")?;
        let hev_mpg = parse_year_map(&self.trajectories.hev_mpg, "hev_mpg")?;
        let years: Vec<i32> = icev_mpg.keys().copied().collect();
        let grid_rate = match self.trajectories.grid.mode.as_str() {
            "table" => parse_year_map(&self.trajectories.grid.values, "grid values")?,
            mode @ ("linear" | "geometric") => {
                let baseline = self.trajectories.grid.baseline_2005.ok_or_else(|| {
                    Error::validation("grid", "baseline_2005 required for derived modes")
                })?;
                let reduction = self.trajectories.grid.reduction_by_2030.ok_or_else(|| {
                    Error::validation("grid", "reduction_by_2030 required for derived modes")
                })?;
                let spec = if mode == "linear" {
                    crate::emissions::GridSpec::Linear {
                        baseline_2005: baseline,
                        reduction_by_2030: reduction,
                    }
                } else {
                    crate::emissions::GridSpec::Geometric {
                        baseline_2005: baseline,
                        reduction_by_2030: reduction,
                    }
                };
                spec.rates(years.iter().copied())
            }
            other => {
                return Err(Error::validation(
                    "grid",
                    format!("unknown mode {other:?} (expected table|linear|geometric)"),
                ))
            }
        };
        // the 2030 grid point must sit at the stated reduction from the
        // 2005 baseline, regardless of mode
        if let (Some(baseline), Some(reduction), Some(&rate_2030)) = (
            self.trajectories.grid.baseline_2005,
            self.trajectories.grid.reduction_by_2030,
            grid_rate.get(&2030),
        ) {
            let expected = baseline * (1.0 - reduction);
            if (rate_2030 - expected).abs() / expected > 0.005 {
                return Err(Error::validation(
                    "grid",
                    format!("2030 rate {rate_2030} is not {reduction:.0}% below the 2005 baseline ({expected})"),
                ));
            }
        }
        let trajectories = crate::emissions::Trajectories {
            icev_mpg,
            hev_mpg,
            ev_mpge: self.trajectories.ev_mpge,
            grid_rate,
        };
        trajectories.validate()?;
        Ok(trajectories)
    }
}

fn load_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Everything the pipelines need, loaded from one data directory.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub supply: SupplyTable,
    pub added_supply: AddedSupplySpec,
    pub intensities: IntensitySet,
    pub mix: MixSchedule,
    pub ramp: GraphiteRamp,
    pub scenario_config: ScenarioConfig,
    pub emissions_config: EmissionsConfig,
}

impl Dataset {
    /// Load all data files from `dir`, validating as we go.
    pub fn load(dir: &Path) -> Result<Dataset> {
        let production = load_supply_records(&dir.join("production.csv"))?;
        let reserves = load_supply_records(&dir.join("reserves.csv"))?;
        let supply = SupplyTable::load(production, reserves)?;
        supply.verify_consistency()?;
        let added_supply = load_added_supply(&dir.join("added_supply.csv"))?;
        let intensities = load_intensities(&dir.join("intensity.csv"))?;
        let mix = load_mix(&dir.join("mix.csv"))?;
        let ramp = load_ramp(&dir.join("ramp.csv"))?;
        let scenario_config: ScenarioConfig = load_toml(&dir.join("scenario.toml"))?;
        let emissions_config: EmissionsConfig = load_toml(&dir.join("emissions.toml"))?;

        let gas_a = scenario_config.fuel.gasoline_energy_mj_per_gal;
        let gas_b = emissions_config.params.gasoline_energy_mj_per_gal;
        if (gas_a - gas_b).abs() > 1e-6 {
            return Err(Error::validation(
                "dataset",
                format!("gasoline energy content differs between configs ({gas_a} vs {gas_b})"),
            ));
        }
        Ok(Dataset {
            supply,
            added_supply,
            intensities,
            mix,
            ramp,
            scenario_config,
            emissions_config,
        })
    }

    /// Load from the default location (env override or bundled data/).
    pub fn load_default() -> Result<Dataset> {
        Dataset::load(&resolve_data_dir(None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minerals::Mineral;
    use crate::supply::Basis;

    fn data_dir() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
    }

    #[test]
    fn bundled_dataset_loads_and_aggregates() {
        let ds = Dataset::load(&data_dir()).unwrap();
        assert_eq!(
            ds.supply.production(Mineral::Graphite).as_tons_f64(),
            48_000.0
        );
        assert_eq!(
            ds.supply.production(Mineral::Cobalt).as_tons_f64(),
            21_800.0
        );
        assert_eq!(
            ds.supply.production(Mineral::Aluminum).as_tons_f64(),
            26_524_000.0
        );
        assert_eq!(
            ds.supply.reserves(Mineral::Phosphate).as_tons_f64(),
            53_474_000_000.0
        );
        assert_eq!(
            ds.supply.reserves(Mineral::Aluminum).as_tons_f64(),
            430_000_000.0
        );
    }

    #[test]
    fn bundled_added_supply_totals() {
        let ds = Dataset::load(&data_dir()).unwrap();
        let with_added = crate::supply::apply_added_supply(&ds.supply, &ds.added_supply).unwrap();
        assert_eq!(
            with_added.production(Mineral::Graphite).as_tons_f64(),
            218_000.0
        );
        assert_eq!(
            with_added.production(Mineral::Lithium).as_tons_f64(),
            114_200.0
        );
        assert_eq!(
            with_added.production(Mineral::Phosphate).as_tons_f64(),
            101_950_000.0
        );
    }

    #[test]
    fn supply_totals_match_provenance_sums() {
        let ds = Dataset::load(&data_dir()).unwrap();
        ds.supply.verify_consistency().unwrap();
        // spot-check one mineral by hand
        let sum: u64 = ds
            .supply
            .provenance()
            .iter()
            .filter(|(b, r)| *b == Basis::Production && r.mineral == Mineral::Copper)
            .map(|(_, r)| r.effective_quantity().unwrap().kg())
            .sum();
        assert_eq!(sum, ds.supply.production(Mineral::Copper).kg());
    }

    #[test]
    fn missing_file_reports_path() {
        let err = Dataset::load(Path::new("/nonexistent")).unwrap_err();
        assert!(err.to_string().contains("production.csv"));
    }

    #[test]
    fn emissions_config_materializes() {
        let ds = Dataset::load(&data_dir()).unwrap();
        let params = ds.emissions_config.params().unwrap();
        assert!(params.aggregate_utilization_miles > 170_000.0);
        let traj = ds.emissions_config.trajectories().unwrap();
        assert_eq!(traj.icev_mpg[&2032], 66.40);
        assert_eq!(traj.grid_rate[&2030], 293.10);
    }
}
