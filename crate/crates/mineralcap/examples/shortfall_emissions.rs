//! The lifecycle-emissions cost of building fewer EVs than each scenario
//! wants.
//!
//! Run with: cargo run -p mineralcap --example shortfall_emissions

use mineralcap::capacity::compute_shortfall;
use mineralcap::chemistry::Chemistry;
use mineralcap::emissions::{emissions_shortfall, Powertrain};
use mineralcap::model::{Model, WINDOW};
use mineralcap::scenarios::ScenarioKind;

fn main() -> mineralcap::Result<()> {
    let model = Model::load_default()?;
    let possible = model.optimal_possible_per_year()?;
    let benefit = model.benefits(Powertrain::Ev(Chemistry::Nmc811))?;

    for kind in ScenarioKind::ALL {
        let summary = compute_shortfall(model.scenario(kind), &possible, WINDOW)?;
        let (per_year, total) = emissions_shortfall(&summary.records, &benefit)?;
        println!("{kind} scenario:");
        for record in &summary.records {
            println!(
                "  {}: want {:>9}, can build {:>7}, short {:>9} -> {:>12.0} t CO2e",
                record.year,
                record.desired_evs,
                record.possible_evs,
                record.shortfall,
                per_year[&record.year]
            );
        }
        println!(
            "  total: {:.2}M vehicles short, {:.2}M t CO2e in lost benefit\n",
            summary.aggregate_shortfall as f64 / 1e6,
            total / 1e6
        );
    }
    Ok(())
}
