#![allow(clippy::approx_constant)]

//! Property tests over the core invariants.

use std::collections::BTreeMap;

use proptest::prelude::*;

use mineralcap::capacity::{chemistry_ceiling, joint_allocation};
use mineralcap::chemistry::{
    Chemistry, ChemistryIntensity, IntensitySet, REFERENCE_PACK_KWH, REFERENCE_RANGE_MILES,
};
use mineralcap::minerals::{Mineral, Quantity};
use mineralcap::scenarios::{build_scenario, ScenarioKind};
use mineralcap::supply::{SourceKind, SupplyRecord, SupplyTable};

fn record_strategy() -> impl Strategy<Value = SupplyRecord> {
    (0usize..8, "[a-z]{3,8}", 0usize..3, 0u64..10_000_000).prop_map(
        |(mineral, country, kind, tons)| SupplyRecord {
            mineral: Mineral::ALL[mineral],
            country,
            source_kind: [
                SourceKind::UsMining,
                SourceKind::UsRecycling,
                SourceKind::AllyMining,
            ][kind],
            quantity: Quantity::from_tons(tons),
            basis_note: String::new(),
        },
    )
}

fn dedupe(records: Vec<SupplyRecord>) -> Vec<SupplyRecord> {
    let mut seen = std::collections::BTreeSet::new();
    records
        .into_iter()
        .filter(|r| seen.insert((r.mineral, r.country.clone(), r.source_kind)))
        .collect()
}

proptest! {
    #[test]
    fn supply_aggregation_is_permutation_invariant(
        records in prop::collection::vec(record_strategy(), 0..40),
        seed in any::<u64>(),
    ) {
        let records = dedupe(records);
        let baseline = SupplyTable::load(records.clone(), vec![]).unwrap();
        // deterministic shuffle from the seed
        let mut shuffled = records;
        let mut state = seed.wrapping_add(1);
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            shuffled.swap(i, j);
        }
        let permuted = SupplyTable::load(shuffled, vec![]).unwrap();
        prop_assert_eq!(baseline, permuted);
    }

    #[test]
    fn ceiling_scales_with_supply(
        graphite in 1_000u64..1_000_000,
        cobalt in 1_000u64..1_000_000,
        factor in 2u64..10,
    ) {
        let intensity = ChemistryIntensity {
            chemistry: Chemistry::Nmc811,
            content: [(Mineral::Graphite, 56.55), (Mineral::Cobalt, 6.28)].into(),
            pack_kwh: REFERENCE_PACK_KWH,
            range_miles: REFERENCE_RANGE_MILES,
            bounds: BTreeMap::new(),
        };
        let supply: BTreeMap<Mineral, f64> = [
            (Mineral::Graphite, graphite as f64),
            (Mineral::Cobalt, cobalt as f64),
        ].into();
        let scaled: BTreeMap<Mineral, f64> =
            supply.iter().map(|(&m, &v)| (m, v * factor as f64)).collect();
        let base = chemistry_ceiling(&supply, &intensity).unwrap();
        let more = chemistry_ceiling(&scaled, &intensity).unwrap();
        prop_assert_eq!(base.limiting_mineral, more.limiting_mineral);
        let diff = more.ceiling as i64 - (factor * base.ceiling) as i64;
        prop_assert!(diff.abs() <= factor as i64);
    }

    #[test]
    fn joint_allocation_dominates_singles_and_respects_supply(
        supply_a in 1_000.0f64..100_000.0,
        supply_b in 1_000.0f64..100_000.0,
        a1 in 1.0f64..20.0,
        a2 in 1.0f64..20.0,
        b1 in 1.0f64..20.0,
        b2 in 1.0f64..20.0,
    ) {
        let mk = |chemistry, g: f64, n: f64| ChemistryIntensity {
            chemistry,
            content: [(Mineral::Graphite, g), (Mineral::Nickel, n)].into(),
            pack_kwh: REFERENCE_PACK_KWH,
            range_miles: REFERENCE_RANGE_MILES,
            bounds: BTreeMap::new(),
        };
        let set = IntensitySet::new(vec![
            mk(Chemistry::Nmc111, 30.0, 0.0),
            mk(Chemistry::Nmc523, 30.0, 0.0),
            mk(Chemistry::Nmc622, 30.0, 0.0),
            mk(Chemistry::Nmc811, a1, a2),
            mk(Chemistry::Nca, b1, b2),
            mk(Chemistry::Lfp, 30.0, 0.0),
        ]).unwrap();
        let supply: BTreeMap<Mineral, f64> =
            [(Mineral::Graphite, supply_a), (Mineral::Nickel, supply_b)].into();
        let allowed = [Chemistry::Nmc811, Chemistry::Nca];
        let allocation = joint_allocation(&supply, &set, &allowed).unwrap();
        let total: u64 = allocation.values().sum();
        for &c in &allowed {
            let single = chemistry_ceiling(&supply, set.get(c)).unwrap().ceiling;
            prop_assert!(total + 1 >= single);
        }
        // no mineral constraint violated by the floored allocation
        for &m in &[Mineral::Graphite, Mineral::Nickel] {
            let used: f64 = allowed
                .iter()
                .map(|&c| set.get(c).content(m) * allocation[&c] as f64)
                .sum();
            prop_assert!(used <= supply[&m] * (1.0 + 1e-9));
        }
    }

    #[test]
    fn scenario_kinds_stay_ordered(
        base_scaled in 1u32..70,
        target_scaled in 300u32..900,
    ) {
        let base = base_scaled as f64 / 1000.0;
        let target = target_scaled as f64 / 1000.0;
        let totals: BTreeMap<i32, u64> = (2022..=2032).map(|y| (y, 15_000_000)).collect();
        let low = build_scenario(ScenarioKind::Low, &totals, base, target, &[2024, 2027], 2032).unwrap();
        let medium = build_scenario(ScenarioKind::Medium, &totals, base, target, &[2024, 2027], 2032).unwrap();
        let high = build_scenario(ScenarioKind::High, &totals, base, target, &[2024, 2027], 2032).unwrap();
        for year in 2023..=2032 {
            prop_assert!(low.ev_sales[&year] <= medium.ev_sales[&year]);
            prop_assert!(medium.ev_sales[&year] <= high.ev_sales[&year]);
        }
        prop_assert_eq!(low.ev_share[&2032], target);
        prop_assert_eq!(medium.ev_share[&2032], target);
        prop_assert_eq!(high.ev_share[&2032], target);
    }
}
