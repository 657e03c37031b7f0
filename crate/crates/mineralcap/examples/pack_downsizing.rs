//! How far packs must shrink for supply to cover the 2032 deployment
//! target.
//!
//! Run with: cargo run -p mineralcap --example pack_downsizing

use mineralcap::capacity::downsize;
use mineralcap::chemistry::Chemistry;
use mineralcap::model::{Assumption, Model};
use mineralcap::scenarios::ScenarioKind;
use mineralcap::supply::Basis;

fn main() -> mineralcap::Result<()> {
    let model = Model::load_default()?;
    let target = model.scenario(ScenarioKind::Low).ev_sales_in(2032)?;
    let reference = model.dataset.intensities.get(Chemistry::Nmc811);
    println!("target deployment: {target} vehicles in 2032\n");

    for (label, assumption) in [
        ("current production", Assumption::Baseline),
        ("added supply", Assumption::AddedSupply),
    ] {
        let supply = model.supply_kg(Basis::Production, assumption);
        let result = downsize(&supply, target, reference)?;
        println!("{label}:");
        for (mineral, kg) in &result.per_mineral_intensity {
            println!("  {:>10}: {kg:>9.2} kg/vehicle", mineral.name());
        }
        println!(
            "  binding mineral {} -> a {:.1} kWh pack (reference {} kWh)\n",
            result.binding_mineral, result.implied_pack_kwh, reference.pack_kwh
        );
    }
    Ok(())
}
