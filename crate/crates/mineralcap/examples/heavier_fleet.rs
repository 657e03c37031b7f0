//! Mineral demand and ceilings when most sales are light trucks carrying
//! 100 kWh packs instead of 75 kWh sedans.
//!
//! Run with: cargo run -p mineralcap --example heavier_fleet

use mineralcap::chemistry::{heavier_fleet_intensity, Chemistry, FleetMix};
use mineralcap::minerals::Mineral;
use mineralcap::model::{Assumption, Fleet, Model};
use mineralcap::supply::Basis;

fn main() -> mineralcap::Result<()> {
    let model = Model::load_default()?;
    let fleet = FleetMix::default();
    println!(
        "fleet: {:.0}% sedans (75 kWh), {:.0}% trucks ({:.0} kWh) -> content factor {:.4}\n",
        fleet.sedan_fraction * 100.0,
        fleet.truck_fraction * 100.0,
        fleet.truck_pack_kwh,
        fleet.content_factor(75.0)
    );

    let base = model.dataset.intensities.get(Chemistry::Nmc811);
    let heavy = heavier_fleet_intensity(base, &fleet)?;
    println!("NMC811 content, sedan vs fleet-weighted (kg/pack):");
    for &mineral in &Mineral::ALL {
        if base.content(mineral) > 0.0 {
            println!(
                "  {:>10}: {:>6.2} -> {:>6.2}",
                mineral.name(),
                base.content(mineral),
                heavy.content(mineral)
            );
        }
    }

    for (label, assumption) in [
        ("current", Assumption::Baseline),
        ("added supply", Assumption::AddedSupply),
    ] {
        let (chem, result) = model.optimal(Basis::Production, assumption, Fleet::Mixed)?;
        println!(
            "\nheavier fleet, {label}: {chem} ceiling {} packs/yr ({:.2}M over 2027-2032)",
            result.ceiling,
            result.ceiling as f64 * 6.0 / 1e6
        );
    }
    Ok(())
}
