//! Named operation results against the bundled dataset.

use std::sync::OnceLock;

use mineralcap::capacity::{self, chemistry_ceiling, joint_allocation, mix_ceiling, mix_demand};
use mineralcap::chemistry::Chemistry;
use mineralcap::emissions::{self, Powertrain};
use mineralcap::minerals::Mineral;
use mineralcap::model::{Assumption, Fleet, Model, WINDOW};
use mineralcap::pathways;
use mineralcap::report::{self, Cell, ReportBundle, Table, TableRow};
use mineralcap::scenarios::ScenarioKind;
use mineralcap::supply::Basis;

fn model() -> &'static Model {
    static MODEL: OnceLock<Model> = OnceLock::new();
    MODEL.get_or_init(|| Model::load_default().expect("bundled dataset loads"))
}

fn assert_rel(ours: f64, expected: f64, bound: f64) {
    let rel = (ours - expected).abs() / expected.abs();
    assert!(rel <= bound, "{ours} vs {expected} (rel {rel:.6})");
}

#[test]
fn production_ceilings_per_chemistry() {
    let supply = model().supply_kg(Basis::Production, Assumption::Baseline);
    let nmc811 =
        chemistry_ceiling(&supply, model().dataset.intensities.get(Chemistry::Nmc811)).unwrap();
    assert_rel(nmc811.ceiling as f64, 848_804.0, 0.001);
    assert_eq!(nmc811.limiting_mineral, Mineral::Graphite);
    let lfp = chemistry_ceiling(&supply, model().dataset.intensities.get(Chemistry::Lfp)).unwrap();
    assert_rel(lfp.ceiling as f64, 497_226.0, 0.001);
}

#[test]
fn reserve_allocation_lfp_only() {
    let reserves = model().supply_kg(Basis::Reserves, Assumption::Baseline);
    let only =
        joint_allocation(&reserves, &model().dataset.intensities, &[Chemistry::Lfp]).unwrap();
    assert_rel(only[&Chemistry::Lfp] as f64, 989_270_000.0, 0.005);
}

#[test]
fn mix_demand_reference_cells() {
    let medium = mix_demand(
        model().scenario(ScenarioKind::Medium),
        &model().dataset.mix,
        &model().dataset.intensities,
    )
    .unwrap();
    assert_rel(
        medium.get(Mineral::Graphite, 2032).unwrap(),
        472_625.0,
        0.001,
    );
    let low = mix_demand(
        model().scenario(ScenarioKind::Low),
        &model().dataset.mix,
        &model().dataset.intensities,
    )
    .unwrap();
    assert_rel(low.get(Mineral::Lithium, 2027).unwrap(), 7_666.0, 0.001);
}

#[test]
fn mix_demand_zero_sales_year_is_zero() {
    let mut scenario = model().scenario(ScenarioKind::Low).clone();
    scenario.ev_sales.insert(2024, 0);
    let demand = mix_demand(
        &scenario,
        &model().dataset.mix,
        &model().dataset.intensities,
    )
    .unwrap();
    for &m in &Mineral::ALL {
        assert_eq!(demand.get(m, 2024).unwrap(), 0.0, "{m}");
    }
}

#[test]
fn mix_demand_weighted_content_identity() {
    // summing demand over chemistries and dividing by sales recovers the
    // year's weighted per-vehicle content, bit-exact
    let demand = mix_demand(
        model().scenario(ScenarioKind::High),
        &model().dataset.mix,
        &model().dataset.intensities,
    )
    .unwrap();
    for &m in &Mineral::ALL {
        for &year in &demand.years {
            let sales = model()
                .scenario(ScenarioKind::High)
                .ev_sales_in(year)
                .unwrap() as f64;
            let w = model()
                .dataset
                .mix
                .weighted_content(year, &model().dataset.intensities, m)
                .unwrap();
            assert_eq!(demand.get(m, year).unwrap(), w * sales / 1000.0);
        }
    }
}

#[test]
fn mix_ceiling_added_supply_cells() {
    let supply = model().supply_kg(Basis::Production, Assumption::AddedSupply);
    let (packs_2027, limiting) = mix_ceiling(
        &supply,
        &model().dataset.mix,
        &model().dataset.intensities,
        2027,
    )
    .unwrap();
    assert_rel(packs_2027 as f64, 2_717_719.0, 0.001);
    assert_eq!(limiting, Mineral::Graphite);
    let (packs_2032, _) = mix_ceiling(
        &supply,
        &model().dataset.mix,
        &model().dataset.intensities,
        2032,
    )
    .unwrap();
    assert_rel(packs_2032 as f64, 2_631_540.0, 0.001);
}

#[test]
fn mix_ceiling_current_production_cumulative() {
    let supply = model().supply_kg(Basis::Production, Assumption::Baseline);
    let total: u64 = (WINDOW.0..=WINDOW.1)
        .map(|year| {
            mix_ceiling(
                &supply,
                &model().dataset.mix,
                &model().dataset.intensities,
                year,
            )
            .unwrap()
            .0
        })
        .sum();
    assert_rel(total as f64, 3_510_000.0, 0.005);
}

#[test]
fn missing_mix_year_is_an_error() {
    let supply = model().supply_kg(Basis::Production, Assumption::Baseline);
    let err = mix_ceiling(
        &supply,
        &model().dataset.mix,
        &model().dataset.intensities,
        2023,
    )
    .unwrap_err();
    assert!(matches!(
        err,
        mineralcap::Error::MissingYear { year: 2023, .. }
    ));
}

#[test]
fn shortfall_aggregate_desired_medium() {
    let possible = model().optimal_possible_per_year().unwrap();
    let summary =
        capacity::compute_shortfall(model().scenario(ScenarioKind::Medium), &possible, WINDOW)
            .unwrap();
    assert_rel(summary.aggregate_desired as f64, 28_050_000.0, 0.001);
}

#[test]
fn downsizing_reference_intensities() {
    let target = model()
        .scenario(ScenarioKind::Low)
        .ev_sales_in(2032)
        .unwrap();
    assert_eq!(target, 5_711_810);
    let reference = model().dataset.intensities.get(Chemistry::Nmc811);
    let current = capacity::downsize(
        &model().supply_kg(Basis::Production, Assumption::Baseline),
        target,
        reference,
    )
    .unwrap();
    assert!((current.per_mineral_intensity[&Mineral::Graphite] - 8.40).abs() <= 0.01);
    assert_eq!(current.binding_mineral, Mineral::Graphite);
    let added = capacity::downsize(
        &model().supply_kg(Basis::Production, Assumption::AddedSupply),
        target,
        reference,
    )
    .unwrap();
    assert!((added.per_mineral_intensity[&Mineral::Graphite] - 38.17).abs() <= 0.01);
}

#[test]
fn heavier_fleet_ceilings() {
    let current = model()
        .ceilings(Basis::Production, Assumption::Baseline, Fleet::Mixed)
        .unwrap();
    assert_rel(current[&Chemistry::Nmc811].ceiling as f64, 686_365.0, 0.001);
    let added = model()
        .ceilings(Basis::Production, Assumption::AddedSupply, Fleet::Mixed)
        .unwrap();
    assert_rel(added[&Chemistry::Nmc811].ceiling as f64, 3_117_239.0, 0.001);
}

#[test]
fn lifecycle_reference_values_from_shipped_calibration() {
    let icev_2023 = emissions::per_mile_emissions(
        &model().params,
        &model().trajectories,
        Powertrain::Icev,
        2023,
    )
    .unwrap();
    assert_rel(icev_2023, 374.5, 0.005);
    let ev_2023 = emissions::per_mile_emissions(
        &model().params,
        &model().trajectories,
        Powertrain::Ev(Chemistry::Nmc111),
        2023,
    )
    .unwrap();
    assert_rel(ev_2023, 158.4, 0.005);
    let icev_2032 = emissions::lifecycle(
        &model().params,
        &model().trajectories,
        Powertrain::Icev,
        2032,
    )
    .unwrap();
    assert_rel(icev_2032.per_vehicle, 37.11, 0.01);
    let ev_2027 = emissions::lifecycle(
        &model().params,
        &model().trajectories,
        Powertrain::Ev(Chemistry::Nmc811),
        2027,
    )
    .unwrap();
    assert_rel(ev_2027.per_vehicle, 26.77, 0.01);
}

#[test]
fn emissions_shortfall_medium_2032() {
    let possible = model().optimal_possible_per_year().unwrap();
    let summary =
        capacity::compute_shortfall(model().scenario(ScenarioKind::Medium), &possible, WINDOW)
            .unwrap();
    let benefit = model().benefits(Powertrain::Ev(Chemistry::Nmc811)).unwrap();
    let (per_year, total) = emissions::emissions_shortfall(&summary.records, &benefit).unwrap();
    assert_rel(per_year[&2032], 56_281_611.0, 0.01);
    assert_rel(total, 284_120_000.0, 0.01);
}

#[test]
fn production_thresholds_reference_cells() {
    let supply = model().supply_kg(Basis::Production, Assumption::Baseline);
    let thresholds = pathways::required_production(
        5_711_810,
        &supply,
        &model().dataset.mix,
        &model().dataset.intensities,
        WINDOW,
    )
    .unwrap();
    let graphite = thresholds
        .iter()
        .find(|t| t.mineral == Mineral::Graphite)
        .unwrap();
    assert_rel(graphite.required_max_tons, 473_280.0, 0.02);
    assert!(graphite.exceeds_current);
    let cobalt = thresholds
        .iter()
        .find(|t| t.mineral == Mineral::Cobalt)
        .unwrap();
    assert_rel(cobalt.required_min_tons, 18_615.0, 0.02);
}

#[test]
fn threshold_requirements_round_trip_through_capacity() {
    // supplying exactly the per-year requirement for every mineral makes
    // that year's mix ceiling land on the target
    let target = 5_711_810u64;
    for year in WINDOW.0..=WINDOW.1 {
        let required = pathways::required_production_for_year(
            target,
            &model().supply_kg(Basis::Production, Assumption::Baseline),
            &model().dataset.mix,
            &model().dataset.intensities,
            year,
        )
        .unwrap();
        let scaled: std::collections::BTreeMap<Mineral, f64> = required
            .iter()
            .map(|(&m, &tons)| (m, tons * 1000.0))
            .collect();
        let (packs, _) = mix_ceiling(
            &scaled,
            &model().dataset.mix,
            &model().dataset.intensities,
            year,
        )
        .unwrap();
        assert!(
            (packs as i64 - target as i64).abs() <= 1,
            "{year}: round trip gave {packs}"
        );
    }

    // scaling just the binding mineral by its multiplier reaches the target
    // in the year the requirement peaks (other minerals permitting)
    let supply = model().supply_kg(Basis::Production, Assumption::Baseline);
    let thresholds = pathways::required_production(
        target,
        &supply,
        &model().dataset.mix,
        &model().dataset.intensities,
        WINDOW,
    )
    .unwrap();
    let graphite = thresholds
        .iter()
        .find(|t| t.mineral == Mineral::Graphite)
        .unwrap();
    let peak_year = (WINDOW.0..=WINDOW.1)
        .max_by(|&a, &b| {
            let wa = model()
                .dataset
                .mix
                .weighted_content(a, &model().dataset.intensities, Mineral::Graphite)
                .unwrap();
            let wb = model()
                .dataset
                .mix
                .weighted_content(b, &model().dataset.intensities, Mineral::Graphite)
                .unwrap();
            wa.partial_cmp(&wb).unwrap()
        })
        .unwrap();
    let mut scaled = supply.clone();
    scaled.insert(
        Mineral::Graphite,
        supply[&Mineral::Graphite] * graphite.multiplier,
    );
    let (packs, _) = mix_ceiling(
        &scaled,
        &model().dataset.mix,
        &model().dataset.intensities,
        peak_year,
    )
    .unwrap();
    assert!(
        (packs as i64 - target as i64).abs() <= 1,
        "peak-year round trip gave {packs}"
    );
}

#[test]
fn hev_only_reference_cells() {
    let ev = model().benefits(Powertrain::Ev(Chemistry::Nmc811)).unwrap();
    let hev = model().benefits(Powertrain::Hev).unwrap();
    let low =
        pathways::hev_only_requirement(model().scenario(ScenarioKind::Low), &ev, &hev, WINDOW)
            .unwrap();
    assert_rel(low[&2027].desired_hevs.unwrap(), 3_520_491.0, 0.02);
    let medium =
        pathways::hev_only_requirement(model().scenario(ScenarioKind::Medium), &ev, &hev, WINDOW)
            .unwrap();
    assert_rel(medium[&2030].desired_hevs.unwrap(), 27_721_949.0, 0.02);
    assert!(medium[&2030].exceeds_sales);
}

#[test]
fn min_ev_supplement_reference_cells() {
    let ev = model().benefits(Powertrain::Ev(Chemistry::Nmc811)).unwrap();
    let hev = model().benefits(Powertrain::Hev).unwrap();
    let low = pathways::min_ev_supplement(model().scenario(ScenarioKind::Low), &ev, &hev, WINDOW)
        .unwrap();
    assert_eq!(low[&2027].min_evs, 0.0);
    assert_rel(low[&2032].min_evs, 4_905_031.0, 0.02);
    // medium 2028 cancels almost completely and must carry the flag
    let medium =
        pathways::min_ev_supplement(model().scenario(ScenarioKind::Medium), &ev, &hev, WINDOW)
            .unwrap();
    assert!(medium[&2028].ill_conditioned);
}

#[test]
fn plot_series_shapes() {
    let bundle = report::run(model()).unwrap();
    let t63 = report::emit_plot_series(&bundle, "T6.3").unwrap();
    let series: std::collections::BTreeSet<&str> = t63.iter().map(|p| p.series.as_str()).collect();
    assert_eq!(series.len(), 2);
    assert_eq!(t63.len(), 12);

    let t35 = report::emit_plot_series(&bundle, "T3.5").unwrap();
    let graphite: Vec<&report::SeriesPoint> = t35
        .iter()
        .filter(|p| p.series == "graphite" && p.x != "annual_average")
        .collect();
    assert_rel(graphite.first().unwrap().y, 141_174.0, 0.001);
    assert_rel(graphite.last().unwrap().y, 472_625.0, 0.001);

    let empty = ReportBundle {
        tables: vec![Table {
            id: "empty".into(),
            title: String::new(),
            units: String::new(),
            columns: vec![],
            rows: vec![],
            footnotes: vec![],
            precision: 0,
        }],
    };
    assert!(report::emit_plot_series(&empty, "empty")
        .unwrap()
        .is_empty());
    assert!(report::emit_plot_series(&bundle, "T9.9").is_err());
}

#[test]
fn diff_bundle_against_itself_is_zero() {
    let bundle = report::run(model()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for table in &bundle.tables {
        // full-precision dump so parsing recovers the exact values
        let mut text = String::new();
        text.push(',');
        text.push_str(&table.columns.join(","));
        text.push('\n');
        for TableRow { label, cells } in &table.rows {
            text.push_str(label);
            for cell in cells {
                text.push(',');
                match cell {
                    Cell::Num(v) => text.push_str(&format!("{v}")),
                    Cell::Text(s) => text.push_str(s),
                    Cell::Na => text.push_str("n/a"),
                }
            }
            text.push('\n');
        }
        let name = format!("{}.csv", report::canonical_id(&table.id));
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    let diff = report::diff_against_golden(&bundle, dir.path()).unwrap();
    assert!(diff.pass);
    for cell in &diff.cells {
        if let Some(d) = cell.deviation {
            assert_eq!(d, 0.0, "{} [{}/{}]", cell.table, cell.row, cell.column);
        }
    }
}
